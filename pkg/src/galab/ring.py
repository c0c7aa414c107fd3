"""Finitely presented algebras ``Q[vars]/J``, ring maps, subalgebras and f-adic orders."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .caps import get_caps
from .errors import (
    DomainError,
    HypothesisError,
    NotDivisibleError,
    ResourceError,
    StructuralError,
    UnitIdealError,
)
from .ideal import Ideal, eliminate, preimage
from .poly import (
    GREVLEX,
    Polynomial,
    block_order,
    content,
    divide,
    fresh_names,
    parse,
    squarefree_part,
)


class PresentedRing:
    """``Q[vars] / relations``.  Elements are polynomials over ``vars`` in normal form."""

    def __init__(self, vars: Sequence[str], relations: Ideal | None = None, label: str = ""):
        self.vars = tuple(vars)
        self.relations = relations if relations is not None else Ideal(self.vars)
        if self.relations.vars != self.vars:
            raise StructuralError("relation ideal lives in a different ambient")
        self.label = label
        self._cache: dict = {}

    # -- elements -----------------------------------------------------------

    def element(self, x) -> Polynomial:
        if isinstance(x, str):
            x = parse(x, self.vars)
        elif isinstance(x, (int, Fraction)):
            x = Polynomial.const(self.vars, x)
        elif x.vars != self.vars:
            x = x.embed(self.vars)
        return self.nf(x)

    def nf(self, p: Polynomial) -> Polynomial:
        return self.relations.reduce(p)

    def var(self, name: str) -> Polynomial:
        return self.nf(Polynomial.var(self.vars, name))

    def zero(self) -> Polynomial:
        return Polynomial.zero(self.vars)

    def one(self) -> Polynomial:
        return Polynomial.one(self.vars)

    def eq(self, a: Polynomial, b: Polynomial) -> bool:
        return self.nf(a - b).is_zero()

    def is_zero(self, a: Polynomial) -> bool:
        return self.nf(a).is_zero()

    def is_free(self) -> bool:
        return self.relations.is_zero()

    def is_unit(self, a: Polynomial) -> bool:
        a = self.nf(a)
        if a.is_zero():
            return False
        if a.is_constant():
            return True
        return self.principal(a).is_unit()

    def principal(self, a: Polynomial) -> Ideal:
        """The ideal ``relations + (a)``, cached per element."""
        key = ("principal", a)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = self.relations.with_gens(a)
        return hit

    def ideal(self, gens: Iterable) -> Ideal:
        return self.relations.with_gens(*[self.element(g) for g in gens])

    def __str__(self):
        rels = ", ".join(str(g) for g in self.relations.gens)
        body = f"Q[{', '.join(self.vars)}]" + (f"/({rels})" if rels else "")
        return f"{self.label} = {body}" if self.label else body

    def __repr__(self):
        return f"PresentedRing({self})"


def domain_screen(R: PresentedRing):
    """Necessary-condition screen for ``R`` being a domain.

    Returns ``None`` when nothing suspicious is found, else a pair of nonzero
    elements whose product vanishes.  Passing proves nothing.
    """
    for g in R.relations.basis():
        for v in g.used_vars():
            c = content(g, v)
            if c.is_constant():
                continue
            other = divide(g, c)
            if not R.is_zero(c) and not R.is_zero(other):
                return (c, other)
        sq = squarefree_part(g)
        if sq.total_degree() < g.total_degree():
            cof = divide(g, sq)
            if not R.is_zero(sq):
                return (sq, sq * cof)
    return None


def make_ring(vars: Sequence[str], relations: Iterable = (), label: str = "",
              domain: bool = True) -> PresentedRing:
    """Build ``Q[vars]/(relations)``, rejecting the zero ring.

    With ``domain`` the user asserts primality of the relation ideal and the
    presentation is run through :func:`domain_screen`.
    """
    vars = tuple(vars)
    rels = [parse(r, vars) if isinstance(r, str) else r for r in relations]
    J = Ideal(vars, rels)
    if J.gens and J.is_unit():
        raise UnitIdealError(f"relations {J} generate the unit ideal")
    R = PresentedRing(vars, J, label)
    if domain and J.gens:
        bad = domain_screen(R)
        if bad is not None:
            raise HypothesisError(f"presentation is not a domain: ({bad[0]})*({bad[1]}) = 0",
                                  clause="domain")
    return R


# ---------------------------------------------------------------------------
# ring maps


class RingMap:
    """Homomorphism given by one target element per source variable."""

    def __init__(self, source: PresentedRing, target: PresentedRing, images: Mapping[str, Polynomial],
                 check: bool = True):
        self.source = source
        self.target = target
        missing = [v for v in source.vars if v not in images]
        if missing:
            raise StructuralError(f"ring map lacks images for {missing}")
        self.images = {v: target.element(images[v]) for v in source.vars}
        if check:
            for g in source.relations.gens:
                if not target.is_zero(self(g)):
                    raise HypothesisError(f"relation {g} does not map to zero", clause="ring-map")

    def image_list(self) -> list:
        return [self.images[v] for v in self.source.vars]

    def __call__(self, p: Polynomial) -> Polynomial:
        if p.vars != self.source.vars:
            p = p.embed(self.source.vars)
        return self.target.nf(p.subs(self.images, self.target.vars))

    def compose(self, inner: "RingMap") -> "RingMap":
        """``self o inner``."""
        return RingMap(inner.source, self.target, {v: self(inner.images[v]) for v in inner.source.vars},
                       check=False)

    def preimage(self, K: Ideal) -> Ideal:
        return preimage(self, K)


def identity_map(R: PresentedRing) -> RingMap:
    return RingMap(R, R, {v: R.var(v) for v in R.vars}, check=False)


# ---------------------------------------------------------------------------
# simplification and quotients


def simplify_presentation(vars: Sequence[str], relations: Ideal):
    """Drop variables pinned by relations ``c*v + r`` with ``c`` constant, ``r`` free of ``v``.

    Returns ``(new_vars, new_relations, substitution)`` where ``substitution``
    sends every old variable to its image over ``new_vars``.
    """
    vars = tuple(vars)
    sub = {v: Polynomial.var(vars, v) for v in vars}
    gens = list(relations.gens)
    while True:
        J = Ideal(vars, gens)
        if J.gens and J.is_unit():
            raise UnitIdealError("presentation collapsed to the zero ring")
        found = None
        for g in J.basis():
            for v in vars:
                if g.degree(v) != 1:
                    continue
                cs = g.coeffs(v)
                if cs[1].is_constant():
                    found = (v, -cs.get(0, Polynomial.zero(vars)).scale(1 / cs[1].constant_value()))
                    break
            if found:
                break
        if not found:
            out = Ideal(vars, J.basis())
            out._seed(GREVLEX, out.gens)
            return vars, out, sub
        v, expr = found
        rest = tuple(u for u in vars if u != v)
        expr = expr.embed(rest)
        gens = [g.subs({v: expr}, rest) for g in J.gens]
        sub = {u: s.subs({v: expr}, rest) for u, s in sub.items()}
        vars = rest


def quotient_by(R: PresentedRing, f, label: str = "", simplify: bool = True):
    """``R/(f)`` together with the projection map."""
    f = R.element(f)
    if f.is_zero():
        raise DomainError("quotient by zero")
    J = R.relations.with_gens(f)
    if J.is_unit():
        raise UnitIdealError(f"{f} is a unit; the quotient is the zero ring")
    if simplify:
        vars, rels, sub = simplify_presentation(R.vars, J)
    else:
        vars, rels, sub = R.vars, J, {v: Polynomial.var(R.vars, v) for v in R.vars}
    Q = PresentedRing(vars, rels, label or (f"{R.label}/({f})" if R.label else ""))
    return Q, RingMap(R, Q, sub, check=False)


# ---------------------------------------------------------------------------
# subalgebras


@dataclass(frozen=True)
class Membership:
    member: bool
    witness: Polynomial | None  # over the subalgebra's tag names

    @property
    def verdict(self) -> str:
        return "YES" if self.member else "NO"


class Subalgebra:
    """The subalgebra of ``ring`` generated by ``gens``, presented through tag variables.

    Membership is decided by reducing modulo ``relations + (tag_i - gen_i)``
    under an order eliminating the ring variables: ``b`` lies in the
    subalgebra iff its normal form involves tags only, and that normal form
    is the witness expression.
    """

    def __init__(self, ring: PresentedRing, gens: Sequence, names: Sequence[str] | None = None):
        self.ring = ring
        self.gens = tuple(ring.element(g) for g in gens)
        self.names = tuple(names) if names is not None else tuple(f"s{i + 1}" for i in range(len(self.gens)))
        if len(self.names) != len(self.gens) or len(set(self.names)) != len(self.names):
            raise StructuralError("subalgebra generator names must be distinct, one per generator")
        self.tags = tuple(fresh_names("_sub", len(self.gens), ring.vars))
        self.big = ring.vars + self.tags
        self.order = block_order(len(ring.vars))
        gl = [g.embed(self.big) for g in ring.relations.gens]
        for t, g in zip(self.tags, self.gens):
            gl.append(Polynomial.var(self.big, t) - g.embed(self.big))
        self.ideal = Ideal(self.big, gl)
        self._to_names = dict(zip(self.tags, self.names))
        self._relations = None

    def _strip(self, p: Polynomial) -> Polynomial:
        return p.embed(self.tags).rename(self._to_names)

    def membership(self, b) -> Membership:
        b = self.ring.element(b)
        r = self.ideal.reduce(b.embed(self.big), self.order)
        if set(r.used_vars()) & set(self.ring.vars):
            return Membership(False, None)
        return Membership(True, self._strip(r))

    def contains(self, b) -> bool:
        return self.membership(b).member

    def relations(self) -> Ideal:
        """Relations among the generators: the presentation ideal over ``names``."""
        if self._relations is None:
            rv = set(self.ring.vars)
            kept = [self._strip(g) for g in self.ideal.basis(self.order) if not set(g.used_vars()) & rv]
            self._relations = Ideal(self.names, kept)
            self._relations._seed(GREVLEX, self._relations.gens)
        return self._relations

    def presentation(self, label: str = "") -> PresentedRing:
        return PresentedRing(self.names, self.relations(), label)

    def contraction(self, K: Ideal) -> Ideal:
        """``subalgebra  intersect  K`` for an ideal ``K`` of the ring, over ``names``."""
        I = self.ideal + K.embed(self.ring.vars).embed(self.big)
        out = eliminate(I, self.ring.vars)
        renamed = out.rename(self._to_names)
        renamed._seed(GREVLEX, [g.rename(self._to_names) for g in out.basis()])
        return renamed

    def lift(self, q: Polynomial) -> Polynomial:
        """Evaluate an expression over ``names`` in the ring."""
        q = q.embed(self.names) if q.vars != self.names else q
        return self.ring.nf(q.subs(dict(zip(self.names, self.gens)), self.ring.vars))

    def inclusion(self) -> RingMap:
        return RingMap(self.presentation(), self.ring, dict(zip(self.names, self.gens)), check=False)


def in_subalgebra(R: PresentedRing, b, gens: Sequence, names: Sequence[str] | None = None) -> Membership:
    return Subalgebra(R, gens, names).membership(b)


# ---------------------------------------------------------------------------
# f-adic order and exact division


def _divide_once(R: PresentedRing, b: Polynomial, d: Polynomial) -> Polynomial:
    """The ``q`` with ``d*q = b`` in ``R`` (a domain), or :class:`NotDivisibleError`."""
    if R.is_free():
        return divide(b, d)
    if not R.principal(d).contains(b):
        raise NotDivisibleError(f"{d} does not divide {b} in the ring")
    if b.is_zero():
        return b
    u, y = fresh_names("_dq", 2, R.vars)
    big = (u, y) + R.vars
    U, Y = Polynomial.var(big, u), Polynomial.var(big, y)
    db, bb = d.embed(big), b.embed(big)
    gens = [g.embed(big) for g in R.relations.gens] + [db * Y - bb, 1 - U * db]
    r = Ideal(big, gens).reduce(Y, block_order(1, 1))
    if set(r.used_vars()) & {u, y}:
        raise NotDivisibleError(f"{d} does not divide {b} in the ring")
    q = R.nf(r.embed(R.vars))
    if not R.eq(d * q, b):
        raise NotDivisibleError(f"{d} does not divide {b} in the ring")
    return q


def divide_exact(R: PresentedRing, b, f, ell: int = 1) -> Polynomial:
    """The unique ``q`` with ``b = f^ell * q`` in the domain ``R``."""
    b, f = R.element(b), R.element(f)
    if f.is_zero():
        raise DomainError("division by zero")
    if ell < 0:
        raise DomainError("negative exponent")
    d = R.nf(f**ell)
    return _divide_once(R, b, d)


def f_order(R: PresentedRing, b, f) -> int:
    """Largest ``ell`` with ``b`` in ``f^ell R``."""
    b, f = R.element(b), R.element(f)
    if b.is_zero():
        raise DomainError("the f-adic order of zero is infinite")
    if R.is_unit(f):
        raise HypothesisError(f"{f} is a unit; its order is unbounded", clause="f-nonunit")
    cap = get_caps().f_order
    ell = 0
    while True:
        try:
            b = _divide_once(R, b, f)
        except NotDivisibleError:
            return ell
        ell += 1
        if ell > cap:
            raise ResourceError(f"f-order cap {cap} exceeded")
