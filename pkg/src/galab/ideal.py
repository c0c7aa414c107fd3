"""Groebner bases over the rationals and the ideal operations built on them.

Buchberger's algorithm with the Gebauer-Moeller installation of the product
and chain criteria.  Pair selection is the normal strategy (smallest lcm
first) with first-in-first-out tie-breaking, so bases are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import count
from typing import Iterable, Sequence

from .caps import get_caps
from .errors import ResourceError, StructuralError
from .poly import (
    GREVLEX,
    MonomialOrder,
    Polynomial,
    block_order,
    divides,
    fresh_names,
    mono_div,
    mono_lcm,
    mono_mul,
)

# ---------------------------------------------------------------------------
# engine (works on raw {monomial: Fraction} dicts)


class _Engine:
    def __init__(self, order: MonomialOrder):
        self.order = order
        self._keys: dict = {}

    def key(self, m):
        k = self._keys.get(m)
        if k is None:
            k = self._keys[m] = self.order.key(m)
        return k

    def lm(self, p: dict):
        return max(p, key=self.key)

    def monic(self, p: dict) -> dict:
        c = p[self.lm(p)]
        if c == 1:
            return p
        inv = 1 / c
        return {m: v * inv for m, v in p.items()}

    def nf(self, p: dict, basis: list) -> dict:
        """Full normal form of ``p`` by ``basis = [(lm, monic poly), ...]``."""
        p = dict(p)
        rem = {}
        key = self.key
        while p:
            m = max(p, key=key)
            c = p[m]
            for lm, g in basis:
                if divides(lm, m):
                    t = mono_div(m, lm)
                    for gm, gc in g.items():
                        mm = mono_mul(gm, t)
                        s = p.get(mm, 0) - c * gc
                        if s:
                            p[mm] = s
                        else:
                            del p[mm]
                    break
            else:
                rem[m] = c
                del p[m]
        return rem

    def groebner(self, polys: Iterable[dict]) -> list:
        caps = get_caps()
        P: list = []  # (lm, poly)
        G: list = []  # indices of the current basis
        B: list = []  # (lcm, i, j, seq)
        seq = count()

        def active():
            return [P[i] for i in G]

        def install(h: dict):
            nonlocal G, B
            h = self.monic(h)
            lh = self.lm(h)
            if sum(lh) > caps.degree:
                raise ResourceError(f"degree cap {caps.degree} exceeded during Groebner basis computation")
            P.append((lh, h))
            if len(P) > caps.basis:
                raise ResourceError(f"basis-size cap {caps.basis} exceeded")
            hi = len(P) - 1
            C = [(g, mono_lcm(lh, P[g][0])) for g in G]
            D = []
            while C:
                g1, l1 = C.pop(0)
                if _coprime(lh, P[g1][0]) or (
                    not any(divides(l2, l1) for _, l2 in C) and not any(divides(l2, l1) for _, l2 in D)
                ):
                    D.append((g1, l1))
            E = [(g, l) for g, l in D if not _coprime(lh, P[g][0])]
            kept = []
            for pair in B:
                l, i, j, _ = pair
                if (
                    not divides(lh, l)
                    or mono_lcm(P[i][0], lh) == l
                    or mono_lcm(lh, P[j][0]) == l
                ):
                    kept.append(pair)
            for g, l in E:
                kept.append((l, g, hi, next(seq)))
            B = kept
            G = [g for g in G if not divides(lh, P[g][0])] + [hi]

        for f in polys:
            if not f:
                continue
            h = self.nf(f, active())
            if h:
                install(h)

        processed = 0
        while B:
            best = min(range(len(B)), key=lambda k: (self.key(B[k][0]), B[k][3]))
            l, i, j, _ = B.pop(best)
            processed += 1
            if processed > caps.pairs:
                raise ResourceError(f"S-pair cap {caps.pairs} exceeded")
            s = self._spoly(P[i], P[j], l)
            h = self.nf(s, active())
            if h:
                install(h)

        basis = active()
        reduced = []
        for k, (lm, g) in enumerate(basis):
            others = basis[:k] + basis[k + 1 :]
            reduced.append(self.monic(self.nf(g, others)))
        reduced.sort(key=lambda p: self.key(self.lm(p)))
        return reduced

    def _spoly(self, a, b, l) -> dict:
        (la, pa), (lb, pb) = a, b
        ta, tb = mono_div(l, la), mono_div(l, lb)
        out = {}
        for m, c in pa.items():
            out[mono_mul(m, ta)] = c
        for m, c in pb.items():
            mm = mono_mul(m, tb)
            s = out.get(mm, 0) - c
            if s:
                out[mm] = s
            else:
                out.pop(mm, None)
        return out


def _coprime(a, b) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# ideals


class Ideal:
    """An ideal of ``Q[vars]`` given by generators, with lazily cached bases.

    The cache is the only mutable state; a recomputation installs an
    identical basis, so concurrent fills are benign.
    """

    __slots__ = ("vars", "gens", "_cache")

    def __init__(self, vars: Sequence[str], gens: Iterable = ()):
        self.vars = tuple(vars)
        out = []
        for g in gens:
            if isinstance(g, (int, Fraction)):
                g = Polynomial.const(self.vars, g)
            if g.vars != self.vars:
                g = g.embed(self.vars)
            if not g.is_zero():
                out.append(g)
        self.gens = tuple(out)
        self._cache: dict = {}

    # -- bases --------------------------------------------------------------

    def _raw_basis(self, order: MonomialOrder) -> list:
        hit = self._cache.get(order)
        if hit is None:
            eng = _Engine(order)
            polys = eng.groebner(g._t for g in self.gens)
            hit = self._cache[order] = [(eng.lm(p), p) for p in polys]
        return hit

    def basis(self, order: MonomialOrder = GREVLEX) -> tuple:
        """Reduced Groebner basis, monic, sorted by increasing leading monomial."""
        return tuple(Polynomial._raw(self.vars, dict(p)) for _, p in self._raw_basis(order))

    def _seed(self, order: MonomialOrder, basis: Sequence[Polynomial]):
        eng = _Engine(order)
        self._cache[order] = [(eng.lm(p._t), dict(p._t)) for p in basis]

    def reduce(self, p: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
        if p.vars != self.vars:
            p = p.embed(self.vars)
        if not self.gens:
            return p
        rem = _Engine(order).nf(p._t, self._raw_basis(order))
        return Polynomial._raw(self.vars, rem)

    def contains(self, p: Polynomial) -> bool:
        return self.reduce(p).is_zero()

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.gens)

    def same(self, other: "Ideal") -> bool:
        if other.vars != self.vars:
            other = other.embed(self.vars)
        return self.basis() == other.basis()

    def is_unit(self) -> bool:
        b = self.basis()
        return len(b) == 1 and b[0].is_constant()

    def is_zero(self) -> bool:
        return not self.gens

    # -- construction helpers ----------------------------------------------

    def __add__(self, other) -> "Ideal":
        if isinstance(other, Ideal):
            return Ideal(self.vars, self.gens + tuple(g.embed(self.vars) for g in other.gens))
        return Ideal(self.vars, self.gens + tuple(other))

    def with_gens(self, *gens) -> "Ideal":
        return Ideal(self.vars, self.gens + tuple(gens))

    def embed(self, vars: Sequence[str]) -> "Ideal":
        return Ideal(vars, (g.embed(vars) for g in self.gens))

    def rename(self, mapping) -> "Ideal":
        return Ideal(tuple(mapping.get(v, v) for v in self.vars), (g.rename(mapping) for g in self.gens))

    def __str__(self):
        return "<" + ", ".join(str(g) for g in self.gens) + ">" if self.gens else "<0>"

    def __repr__(self):
        return f"Ideal({self}, vars={self.vars})"


def groebner(I: Ideal, order: MonomialOrder = GREVLEX) -> tuple:
    return I.basis(order)


def reduce(p: Polynomial, I: Ideal, order: MonomialOrder = GREVLEX) -> Polynomial:
    return I.reduce(p, order)


def eliminate(I: Ideal, drop: Iterable[str]) -> Ideal:
    """``I`` intersected with the subring free of ``drop``, over the remaining variables."""
    drop = set(drop)
    unknown = drop - set(I.vars)
    if unknown:
        raise StructuralError(f"cannot eliminate unknown variables {sorted(unknown)}")
    first = tuple(v for v in I.vars if v in drop)
    rest = tuple(v for v in I.vars if v not in drop)
    if not first:
        return I
    J = I.embed(first + rest)
    kept = [g for g in J.basis(block_order(len(first))) if not set(g.used_vars()) & drop]
    out = Ideal(rest, (g.embed(rest) for g in kept))
    out._seed(GREVLEX, out.gens)
    return out


def intersect(I: Ideal, J: Ideal) -> Ideal:
    if I.vars != J.vars:
        raise StructuralError("intersect: ideals live in different ambients")
    (t,) = fresh_names("_it", 1, I.vars)
    big = (t,) + I.vars
    T = Polynomial.var(big, t)
    gens = [T * g.embed(big) for g in I.gens] + [(1 - T) * g.embed(big) for g in J.gens]
    return eliminate(Ideal(big, gens), [t])


def quotient(I: Ideal, f: Polynomial) -> Ideal:
    """Ideal quotient ``I : f``."""
    f = f.embed(I.vars)
    if f.is_zero():
        return Ideal(I.vars, [1])
    from .poly import divide

    meet = intersect(I, Ideal(I.vars, [f]))
    return Ideal(I.vars, (divide(g, f) for g in meet.gens))


def saturate(I: Ideal, f: Polynomial):
    """``(I : f^oo, k)`` where ``k`` is the least exponent with ``I : f^k = I : f^oo``."""
    f = f.embed(I.vars)
    if f.is_zero():
        raise StructuralError("saturation by zero")
    (u,) = fresh_names("_su", 1, I.vars)
    big = (u,) + I.vars
    U = Polynomial.var(big, u)
    sat = eliminate(Ideal(big, [g.embed(big) for g in I.gens] + [1 - U * f.embed(big)]), [u])
    cur, k = I, 0
    while not cur.same(sat):
        cur = quotient(cur, f)
        k += 1
        if k > get_caps().f_order:
            raise ResourceError("saturation exponent exceeds the f-order cap")
    return sat, k


def preimage_of(source_vars: Sequence[str], images: Sequence[Polynomial], target_relations: Ideal,
                K: Ideal, source_relations: Ideal | None = None) -> Ideal:
    """Preimage of ``K`` under ``source_var_i -> images[i]`` into ``Q[target]/target_relations``."""
    source_vars = tuple(source_vars)
    tvars = target_relations.vars
    tags = fresh_names("_pre", len(source_vars), set(tvars) | set(source_vars))
    big = tvars + tuple(tags)
    gens = [g.embed(big) for g in target_relations.gens]
    gens += [g.embed(big) for g in K.embed(tvars).gens]
    for tag, img in zip(tags, images):
        gens.append(Polynomial.var(big, tag) - img.embed(big))
    if source_relations is not None:
        ren = dict(zip(source_vars, tags))
        gens += [g.rename(ren).embed(big) for g in source_relations.gens]
    out = eliminate(Ideal(big, gens), tvars)
    back = dict(zip(tags, source_vars))
    result = out.rename(back)
    result._seed(GREVLEX, [g.rename(back) for g in out.basis()])
    return result


def preimage(phi, K: Ideal) -> Ideal:
    """Preimage of ``K`` (an ideal of the target's ambient) under a ring map ``phi``."""
    return preimage_of(phi.source.vars, phi.image_list(), phi.target.relations, K, phi.source.relations)


# ---------------------------------------------------------------------------
# minimal polynomials


@dataclass(frozen=True)
class MinimalPolynomial:
    """Outcome of :func:`minimal_polynomial`.

    ``poly`` lives in ``(var,) + tags`` where ``tags[i]`` stands for the
    i-th subfield generator; ``degree`` is ``None`` when no algebraic relation
    exists (transcendental).
    """

    poly: Polynomial | None
    degree: int | None
    var: str
    tags: tuple
    relations: tuple  # relations among the subfield generators (over tags)

    @property
    def algebraic(self) -> bool:
        return self.degree is not None


def minimal_polynomial(relations: Ideal, b: Polynomial, gens: Sequence[Polynomial],
                       var: str = "T", tags: Sequence[str] | None = None) -> MinimalPolynomial:
    """Minimal polynomial of ``b`` over the fraction field of ``Q[gens]``.

    Everything lives in ``Q[relations.vars]/relations``, which should be a
    domain.  The elimination ideal of ``relations + (T - b) + (s_i - gens_i)``
    in ``Q[T, s]`` is computed with ``T`` dominating; the basis element of
    least ``T``-degree whose leading ``T``-coefficient is nonzero modulo the
    relations among the ``s`` generates the extension to the fraction field.
    """
    rv = relations.vars
    names = list(tags) if tags is not None else [f"s{i + 1}" for i in range(len(gens))]
    if len(names) != len(gens) or var in names:
        raise StructuralError("minimal_polynomial: tag names must be distinct and match the generators")
    internal = fresh_names("_mp", 1 + len(gens), rv)
    t_int, s_int = internal[0], internal[1:]
    big = tuple(rv) + (t_int,) + tuple(s_int)
    gl = [g.embed(big) for g in relations.gens]
    gl.append(Polynomial.var(big, t_int) - b.embed(big))
    for s, g in zip(s_int, gens):
        gl.append(Polynomial.var(big, s) - g.embed(big))
    G = Ideal(big, gl).basis(block_order(len(rv), 1))
    rvs = set(rv)
    small = (t_int,) + tuple(s_int)
    P = [g.embed(small) for g in G if not set(g.used_vars()) & rvs]
    PS_vars = tuple(s_int)
    PS = Ideal(PS_vars, (g.embed(PS_vars) for g in P if g.degree(t_int) <= 0))
    PS._seed(GREVLEX, PS.gens)
    best = None
    for g in P:
        d = g.degree(t_int)
        if d <= 0:
            continue
        lc = g.coeffs(t_int)[d].embed(PS_vars)
        if PS.reduce(lc).is_zero():
            continue
        cand = (d, str(g), g)
        if best is None or cand[:2] < best[:2]:
            best = cand
    rename = {t_int: var, **dict(zip(s_int, names))}
    rels = tuple(g.rename(dict(zip(s_int, names))) for g in PS.gens)
    if best is None:
        return MinimalPolynomial(None, None, var, tuple(names), rels)
    if best[0] > get_caps().minpoly_degree:
        raise ResourceError("minimal polynomial degree exceeds cap")
    poly = best[2].rename(rename)
    return MinimalPolynomial(poly, best[0], var, tuple(names), rels)
