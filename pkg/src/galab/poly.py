"""Exact multivariate polynomials over the rationals.

A :class:`Polynomial` is an immutable map from exponent tuples to nonzero
:class:`~fractions.Fraction` coefficients, tied to an ordered tuple of
variable names (its *ambient*).  Binary operations require identical
ambients; use :meth:`Polynomial.embed` to move between them.

The expression grammar understood by :func:`parse` is::

    expr   := term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := ("+" | "-") factor | power
    power  := atom ("^" INT)?
    atom   := INT ("/" INT)? | IDENT | "(" expr ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd as int_gcd
from typing import Iterable, Mapping, Sequence

from .caps import get_caps
from .errors import DomainError, NotDivisibleError, ParseError, ResourceError, StructuralError

Monomial = tuple


# ---------------------------------------------------------------------------
# monomial orders


@dataclass(frozen=True)
class MonomialOrder:
    """``lex``, ``grevlex`` or a block order.

    A block order compares the first block by grevlex, breaks ties with the
    second block, and so on.  ``blocks`` holds the sizes of all but the last
    block, so ``MonomialOrder("block", (2,))`` eliminates the first two
    variables.
    """

    kind: str = "grevlex"
    blocks: tuple = ()

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "block"):
            raise StructuralError(f"unknown monomial order {self.kind!r}")
        if self.kind != "block" and self.blocks:
            raise StructuralError("only block orders take block sizes")

    def key(self, m: Monomial):
        """Sort key; larger key means larger monomial."""
        if self.kind == "lex":
            return m
        if self.kind == "grevlex":
            return _grevlex_key(m)
        out = []
        start = 0
        for size in self.blocks:
            out.append(_grevlex_key(m[start : start + size]))
            start += size
        out.append(_grevlex_key(m[start:]))
        return tuple(out)

    def __str__(self):
        if self.kind == "block":
            return f"block{list(self.blocks)}"
        return self.kind


def _grevlex_key(m):
    return (sum(m), tuple(-e for e in reversed(m)))


LEX = MonomialOrder("lex")
GREVLEX = MonomialOrder("grevlex")


def block_order(*sizes: int) -> MonomialOrder:
    return MonomialOrder("block", tuple(sizes))


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# the polynomial type


def _coerce_coeff(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise StructuralError(f"unsupported coefficient {c!r}")


class Polynomial:
    __slots__ = ("vars", "_t", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping | None = None):
        self.vars = tuple(vars)
        n = len(self.vars)
        if len(set(self.vars)) != n:
            raise StructuralError(f"duplicate variable names in {self.vars}")
        clean = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != n or any(e < 0 for e in m):
                raise StructuralError(f"bad exponent vector {m} for ambient {self.vars}")
            c = _coerce_coeff(c)
            if c:
                clean[m] = clean.get(m, 0) + c
                if not clean[m]:
                    del clean[m]
        self._t = clean
        self._hash = None
        _check_degree(self)

    @classmethod
    def _raw(cls, vars: tuple, terms: dict) -> "Polynomial":
        p = object.__new__(cls)
        p.vars = vars
        p._t = terms
        p._hash = None
        return p

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, vars) -> "Polynomial":
        return cls._raw(tuple(vars), {})

    @classmethod
    def const(cls, vars, c) -> "Polynomial":
        vars = tuple(vars)
        c = _coerce_coeff(c)
        return cls._raw(vars, {(0,) * len(vars): c} if c else {})

    @classmethod
    def one(cls, vars) -> "Polynomial":
        return cls.const(vars, 1)

    @classmethod
    def var(cls, vars, name: str) -> "Polynomial":
        vars = tuple(vars)
        if name not in vars:
            raise StructuralError(f"unknown variable {name!r} (ambient {vars})")
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls._raw(vars, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, vars, exps, c=1) -> "Polynomial":
        return cls(vars, {tuple(exps): c})

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._t)

    def items(self, order: MonomialOrder = GREVLEX):
        """Terms sorted from largest to smallest monomial."""
        return sorted(self._t.items(), key=lambda mc: order.key(mc[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and not any(next(iter(self._t))))

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise StructuralError(f"{self} is not constant")
        return next(iter(self._t.values()), Fraction(0))

    def constant_term(self) -> Fraction:
        return self._t.get((0,) * len(self.vars), Fraction(0))

    def total_degree(self) -> int:
        return max((sum(m) for m in self._t), default=-1)

    def degree(self, v: str) -> int:
        i = self._index(v)
        return max((m[i] for m in self._t), default=-1)

    def used_vars(self) -> tuple:
        used = [False] * len(self.vars)
        for m in self._t:
            for i, e in enumerate(m):
                if e:
                    used[i] = True
        return tuple(v for v, u in zip(self.vars, used) if u)

    def leading(self, order: MonomialOrder = GREVLEX):
        if not self._t:
            raise DomainError("zero polynomial has no leading term")
        m = max(self._t, key=order.key)
        return m, self._t[m]

    def leading_coefficient(self, order: MonomialOrder = GREVLEX) -> Fraction:
        return self.leading(order)[1]

    def _index(self, v: str) -> int:
        try:
            return self.vars.index(v)
        except ValueError:
            raise StructuralError(f"unknown variable {v!r} (ambient {self.vars})") from None

    # -- equality / hashing -------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.vars == other.vars and self._t == other._t
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self._t.items())))
        return self._hash

    # -- arithmetic ---------------------------------------------------------

    def _other(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.vars != self.vars:
                raise StructuralError(f"ambient mismatch: {self.vars} vs {other.vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.const(self.vars, other)
        raise StructuralError(f"cannot combine a polynomial with {type(other).__name__}")

    def __add__(self, other):
        other = self._other(other)
        out = dict(self._t)
        for m, c in other._t.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.vars, {m: -c for m, c in self._t.items()})

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        other = self._other(other)
        if not self._t or not other._t:
            return Polynomial.zero(self.vars)
        out: dict = {}
        for m1, c1 in self._t.items():
            for m2, c2 in other._t.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        p = Polynomial._raw(self.vars, out)
        _check_degree(p)
        return p

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise DomainError("exponent must be a nonnegative integer")
        if n and self.total_degree() * n > get_caps().degree:
            raise ResourceError(f"degree cap {get_caps().degree} exceeded")
        result = Polynomial.one(self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        c = _coerce_coeff(c)
        if not c:
            return Polynomial.zero(self.vars)
        return Polynomial._raw(self.vars, {m: v * c for m, v in self._t.items()})

    def mul_term(self, mono: Monomial, c) -> "Polynomial":
        c = _coerce_coeff(c)
        if not c:
            return Polynomial.zero(self.vars)
        return Polynomial._raw(self.vars, {mono_mul(m, mono): v * c for m, v in self._t.items()})

    # -- calculus and substitution -----------------------------------------

    def diff(self, v: str) -> "Polynomial":
        i = self._index(v)
        out = {}
        for m, c in self._t.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                out[tuple(e)] = c * m[i]
        return Polynomial._raw(self.vars, out)

    def embed(self, vars: Sequence[str]) -> "Polynomial":
        """Re-express in another ambient containing every variable actually used."""
        vars = tuple(vars)
        if vars == self.vars:
            return self
        pos = {v: i for i, v in enumerate(vars)}
        if len(pos) != len(vars):
            raise StructuralError(f"duplicate variable names in {vars}")
        used = self.used_vars()
        missing = [v for v in used if v not in pos]
        if missing:
            raise StructuralError(f"variables {missing} are not in the target ambient {vars}")
        idx = [(pos[v], i) for i, v in enumerate(self.vars) if v in pos]
        n = len(vars)
        out = {}
        for m, c in self._t.items():
            e = [0] * n
            for j, i in idx:
                e[j] = m[i]
            out[tuple(e)] = c
        return Polynomial._raw(vars, out)

    def rename(self, mapping: Mapping[str, str]) -> "Polynomial":
        return Polynomial._raw(tuple(mapping.get(v, v) for v in self.vars), dict(self._t))

    def subs(self, bindings: Mapping[str, object], vars: Sequence[str] | None = None) -> "Polynomial":
        """Simultaneous substitution ``v -> bindings[v]``.

        Unbound variables are kept and must exist in the target ambient, which
        is ``vars`` if given, else the images' common ambient, else ``self.vars``.
        """
        for v in bindings:
            self._index(v)
        if vars is None:
            ambients = {b.vars for b in bindings.values() if isinstance(b, Polynomial)}
            if len(ambients) > 1:
                raise StructuralError("substitution images do not share an ambient")
            vars = ambients.pop() if ambients else self.vars
        vars = tuple(vars)
        images = []
        for v in self.vars:
            if v in bindings:
                b = bindings[v]
                images.append(b.embed(vars) if isinstance(b, Polynomial) else Polynomial.const(vars, b))
            else:
                images.append(None)
        result = Polynomial.zero(vars)
        powers: dict = {}

        def power(i, e):
            key = (i, e)
            if key not in powers:
                base = images[i] if images[i] is not None else Polynomial.var(vars, self.vars[i])
                powers[key] = base ** e
            return powers[key]

        acc: dict = {}
        for m, c in self._t.items():
            term = Polynomial.const(vars, c)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            for tm, tc in term._t.items():
                s = acc.get(tm, 0) + tc
                if s:
                    acc[tm] = s
                else:
                    del acc[tm]
        result = Polynomial._raw(vars, acc)
        _check_degree(result)
        return result

    def evaluate(self, point: Mapping[str, object]) -> "Polynomial":
        return self.subs({v: point[v] for v in point if v in self.vars})

    # -- univariate views ---------------------------------------------------

    def coeffs(self, v: str) -> dict:
        """View as a polynomial in ``v``: degree -> coefficient (same ambient, free of ``v``)."""
        i = self._index(v)
        out: dict = {}
        for m, c in self._t.items():
            e = list(m)
            d = e[i]
            e[i] = 0
            out.setdefault(d, {})[tuple(e)] = c
        return {d: Polynomial._raw(self.vars, t) for d, t in out.items()}

    @classmethod
    def from_coeffs(cls, vars, v: str, coeffs: Mapping[int, "Polynomial"]) -> "Polynomial":
        x = cls.var(vars, v)
        out = cls.zero(vars)
        for d, c in coeffs.items():
            out = out + c * x**d
        return out

    # -- rendering ----------------------------------------------------------

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"Polynomial({render(self)!r}, vars={self.vars})"


def _check_degree(p: Polynomial):
    cap = get_caps().degree
    if p._t and p.total_degree() > cap:
        raise ResourceError(f"degree cap {cap} exceeded (degree {p.total_degree()})")


def render(p: Polynomial, order: MonomialOrder = GREVLEX) -> str:
    """Deterministic rendering in the expression grammar."""
    if p.is_zero():
        return "0"
    parts = []
    for m, c in p.items(order):
        mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(p.vars, m) if e)
        mag = abs(c)
        sign = "-" if c < 0 else "+"
        if not mono:
            body = _fmt_fraction(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_fmt_fraction(mag)}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _fmt_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def fresh_names(prefix: str, count: int, avoid: Iterable[str]) -> list:
    avoid = set(avoid)
    out = []
    i = 1
    while len(out) < count:
        name = f"{prefix}{i}"
        if name not in avoid:
            out.append(name)
            avoid.add(name)
        i += 1
    return out


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*^()/]))")


class SemanticError(ParseError):
    pass


class _Parser:
    def __init__(self, text, vars, line, col):
        self.text = text
        self.vars = tuple(vars)
        self.line = line
        self.col0 = col
        self.toks = []
        pos = 0
        while True:
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                rest = text[pos:]
                if rest.strip():
                    off = pos + len(rest) - len(rest.lstrip())
                    raise ParseError(f"unexpected character {text[off]!r}", line, col + off,
                                     ("integer", "identifier", "operator"))
                break
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.toks.append(("eof", "", len(text)))
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok, expected):
        raise ParseError(msg, self.line, self.col0 + tok[2], expected)

    def parse(self) -> Polynomial:
        p = self.expr()
        tok = self.peek()
        if tok[0] != "eof":
            self.error(f"unexpected token {tok[1]!r}", tok, ("+", "-", "*", "end of expression"))
        return p

    def expr(self):
        p = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            p = p * self.factor()
        return p

    def factor(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            p = self.factor()
            return -p if tok[1] == "-" else p
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "int":
                if tok[1] == "-":
                    self.error("negative exponent", tok, ("nonnegative integer",))
                self.error(f"unexpected token {tok[1]!r}", tok, ("nonnegative integer",))
            self.take()
            return base ** int(tok[1])
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "int":
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                den = self.take()
                if den[0] != "int" or int(den[1]) == 0:
                    self.error("rational literal needs a nonzero integer denominator", den, ("integer",))
                return Polynomial.const(self.vars, Fraction(int(val), int(den[1])))
            return Polynomial.const(self.vars, int(val))
        if kind == "ident":
            if val not in self.vars:
                raise SemanticError(f"unknown variable {val!r}", self.line, self.col0 + tok[2])
            return Polynomial.var(self.vars, val)
        if kind == "op" and val == "(":
            p = self.expr()
            close = self.take()
            if close[1] != ")":
                self.error(f"unexpected token {close[1]!r}", close, (")",))
            return p
        what = "end of expression" if kind == "eof" else repr(val)
        self.error(f"unexpected {what}", tok, ("integer", "identifier", "("))


def parse(text: str, vars: Sequence[str], line: int = 1, column: int = 1) -> Polynomial:
    """Parse ``text`` in the expression grammar over the ambient ``vars``."""
    return _Parser(text, vars, line, column).parse()


# ---------------------------------------------------------------------------
# gcd, content, exact division


def divide(p: Polynomial, q: Polynomial) -> Polynomial:
    """Exact quotient ``p / q``; raises :class:`NotDivisibleError` otherwise."""
    q = p._other(q)
    if q.is_zero():
        raise DomainError("division by zero")
    lmq, lcq = q.leading(LEX)
    quot: dict = {}
    rem = dict(p._t)
    qt = list(q._t.items())
    while rem:
        m = max(rem)
        if not divides(lmq, m):
            raise NotDivisibleError(f"{q} does not divide {p}")
        t = mono_div(m, lmq)
        c = rem[m] / lcq
        quot[t] = c
        for mq, cq in qt:
            mm = mono_mul(mq, t)
            s = rem.get(mm, 0) - c * cq
            if s:
                rem[mm] = s
            else:
                rem.pop(mm, None)
    return Polynomial._raw(p.vars, quot)


def normalize(p: Polynomial) -> Polynomial:
    """Integer coefficients with gcd 1 and positive grevlex-leading coefficient."""
    if p.is_zero():
        return p
    den = 1
    for c in p._t.values():
        den = den * c.denominator // int_gcd(den, c.denominator)
    num = 0
    for c in p._t.values():
        num = int_gcd(num, (c * den).numerator)
    scale = Fraction(den, num)
    if p.leading(GREVLEX)[1] < 0:
        scale = -scale
    return p.scale(scale)


def _first_var(p: Polynomial, q: Polynomial):
    for i, v in enumerate(p.vars):
        if any(m[i] for m in p._t) or any(m[i] for m in q._t):
            return v
    return None


def _gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    if p.is_zero():
        return q
    if q.is_zero():
        return p
    v = _first_var(p, q)
    if v is None:
        return Polynomial.one(p.vars)
    if p.degree(v) <= 0:
        return _gcd(p, _content(q, v))
    if q.degree(v) <= 0:
        return _gcd(_content(p, v), q)
    cp, cq = _content(p, v), _content(q, v)
    c = _gcd(cp, cq)
    a, b = divide(p, cp), divide(q, cq)
    if a.degree(v) < b.degree(v):
        a, b = b, a
    while not b.is_zero():
        r = pseudo_remainder(a, b, v)
        a = b
        b = r if r.is_zero() else divide(r, _content(r, v))
    g = divide(a, _content(a, v)) if a.degree(v) > 0 else Polynomial.one(p.vars)
    return normalize(c * g)


def _content(p: Polynomial, v: str) -> Polynomial:
    g = Polynomial.zero(p.vars)
    for _, c in sorted(p.coeffs(v).items()):
        g = _gcd(g, c)
        if g.is_constant():
            return Polynomial.one(p.vars)
    return normalize(g)


def pseudo_remainder(a: Polynomial, b: Polynomial, v: str) -> Polynomial:
    db = b.degree(v)
    lcb = b.coeffs(v)[db]
    x = Polynomial.var(a.vars, v)
    r = a
    while not r.is_zero() and r.degree(v) >= db:
        dr = r.degree(v)
        lcr = r.coeffs(v)[dr]
        r = lcb * r - lcr * x ** (dr - db) * b
    return r


def gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Greatest common divisor, normalized by :func:`normalize`."""
    q = p._other(q)
    if p.is_zero() and q.is_zero():
        raise DomainError("gcd(0, 0) is undefined")
    return normalize(_gcd(p, q))


def gcd_many(polys: Iterable[Polynomial]) -> Polynomial:
    """gcd of a family; zeros are ignored.  Raises if every member is zero."""
    g = None
    for p in polys:
        if p.is_zero():
            continue
        g = normalize(p) if g is None else gcd(g, p)
    if g is None:
        raise DomainError("gcd of zero polynomials is undefined")
    return g


def content(p: Polynomial, v: str) -> Polynomial:
    """gcd of the coefficients of ``p`` viewed as univariate in ``v``."""
    if p.is_zero():
        raise DomainError("content of the zero polynomial")
    return _content(p, v)


def primitive_part(p: Polynomial, v: str) -> Polynomial:
    return divide(p, content(p, v))


# ---------------------------------------------------------------------------
# squarefree decomposition


def squarefree_decomposition(p: Polynomial, v: str) -> list:
    """Yun's algorithm for ``p`` univariate in ``v``.

    Returns ``[(factor, multiplicity), ...]`` with pairwise coprime squarefree
    normalized factors such that ``p`` equals a constant times the product.
    """
    if p.is_zero():
        raise DomainError("squarefree decomposition of zero")
    others = [u for u in p.used_vars() if u != v]
    if others:
        raise StructuralError(f"{p} is not univariate in {v}")
    if p.degree(v) <= 0:
        return []
    dp = p.diff(v)
    a0 = gcd(p, dp)
    b = divide(p, a0)
    c = divide(dp, a0)
    d = c - b.diff(v)
    out = []
    i = 1
    while b.degree(v) > 0:
        a = gcd(b, d)
        if a.degree(v) > 0:
            out.append((a, i))
        b = divide(b, a)
        c = divide(d, a)
        d = c - b.diff(v)
        i += 1
    return out


def squarefree_part(p: Polynomial) -> Polynomial:
    """Product of the distinct irreducible factors (up to a constant)."""
    if p.is_zero():
        return p
    g = p
    for v in p.used_vars():
        g = gcd(g, p.diff(v))
    return normalize(divide(p, g))
