"""Equivariant affine modifications and the modification tower
``A[z] = B_0 < B_1 < ... < B_nu = B`` along a prime ``f`` of the kernel.

Each ``B_i`` is handled as the subalgebra of ``B`` generated by the kernel
generators, ``z`` and ``y_1 .. y_i``; its presentation and the contraction
``I_{i,1} = B_i cap fB`` come from tag-variable elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .caps import get_caps
from .errors import GalabError, HypothesisError, ResourceError, StructuralError
from .ideal import Ideal, MinimalPolynomial, minimal_polynomial, saturate
from .lnd import Derivation, LocalSliceData, is_irreducible
from .poly import Polynomial, block_order, divide, fresh_names, gcd_many, normalize, render, squarefree_part
from .ring import PresentedRing, Subalgebra, divide_exact, f_order

# ---------------------------------------------------------------------------
# affine modifications


@dataclass(frozen=True)
class AffineModification:
    base: PresentedRing
    f: Polynomial
    center: tuple  # generators of I
    result: PresentedRing
    new_vars: tuple
    exceptional: Ideal  # (f) with f replaced by its squarefree part; not certified radical
    derivation: Derivation | None = None  # extension to the result, when one was attached


def affine_modification(R: PresentedRing, f, I: Sequence, derivation: Derivation | None = None,
                        names: Sequence[str] | None = None) -> AffineModification:
    """``R[I/f]``: one new variable ``u`` with ``f*u = a`` per generator ``a`` of ``I`` not already in ``fR``."""
    f = R.element(f)
    gens = [R.element(a) for a in I]
    if f.is_zero():
        raise HypothesisError("the divisor must be nonzero", clause="f-nonzero")
    if not R.ideal(gens).contains(f):
        raise HypothesisError(f"{f} is not in the center", clause="f-in-center")
    if derivation is not None:
        if not derivation.ring.is_zero(derivation(f)):
            raise HypothesisError(f"delta({f}) is not zero", clause="invariant")
        center = R.ideal(gens)
        for a in gens:
            if not center.contains(derivation(a)):
                raise HypothesisError(f"center is not delta-stable at {a}", clause="stable-center")
    fR = R.principal(f)
    fresh = [a for a in gens if not fR.contains(a)]
    new = tuple(names) if names is not None else tuple(fresh_names("u", len(fresh), R.vars))
    if len(new) != len(fresh) or set(new) & set(R.vars):
        raise StructuralError("need one new, unused name per generator outside fR")
    big = R.vars + new
    fb = f.embed(big)
    rels = Ideal(big, [g.embed(big) for g in R.relations.gens]
                 + [fb * Polynomial.var(big, u) - a.embed(big) for u, a in zip(new, fresh)])
    sat, _ = saturate(rels, fb)
    label = f"{R.label}[I/f]" if R.label else ""
    result = PresentedRing(big, sat, label)
    exc = sat.with_gens(squarefree_part(fb))
    ext = None
    if derivation is not None:
        images = {v: derivation.images[v].embed(big) for v in R.vars}
        for u, a in zip(new, fresh):
            images[u] = divide_exact(result, derivation(a).embed(big), fb)
        ext = Derivation(result, images)
    return AffineModification(R, f, tuple(gens), result, new, exc, ext)


# ---------------------------------------------------------------------------
# the tower


@dataclass(frozen=True)
class TowerStep:
    index: int
    names: tuple  # generator names of B_i
    contraction: Ideal  # I_{i,1} over names
    g: Polynomial  # over names
    ell: int
    y_name: str
    y: Polynomial  # y_{i+1} in B
    delta_y: Polynomial  # delta(y_{i+1}) in B
    top_degree: int  # degree of g-bar in the newest generator
    localization: Polynomial | None = None  # c_i, only on the non-factorial path


@dataclass(frozen=True)
class Tower:
    ring: PresentedRing
    delta: Derivation
    a_gens: tuple
    a_names: tuple
    slice: LocalSliceData
    f: Polynomial  # in B
    F: Polynomial  # f over a_names
    p: int
    z_name: str
    steps: tuple
    final_contraction: Ideal  # I_{nu,1}, equal to (f) + relations
    mu: int
    mu_per_var: dict
    irreducibility: str

    @property
    def nu(self) -> int:
        return len(self.steps)

    def names(self, i: int | None = None) -> tuple:
        i = self.nu if i is None else i
        return self.a_names + (self.z_name,) + tuple(s.y_name for s in self.steps[:i])

    def gens(self, i: int | None = None) -> tuple:
        i = self.nu if i is None else i
        return self.a_gens + (self.slice.z,) + tuple(s.y for s in self.steps[:i])

    def equations(self) -> list:
        """The defining system ``f^{l_i} y_{i+1} = g_i(z, y_1, .., y_i)``."""
        out = []
        for s in self.steps:
            lhs = self.F**s.ell
            lhs_s = render(lhs)
            lhs_s = s.y_name if lhs.is_constant() and lhs.constant_value() == 1 else (
                f"{lhs_s}*{s.y_name}" if len(lhs.terms) == 1 else f"({lhs_s})*{s.y_name}")
            out.append(f"{lhs_s} = {render(s.g)}")
        return out


def _choose_generator(I: Ideal, top: str, below: Ideal):
    """Least ``top``-degree element of ``I`` with leading ``top``-coefficient outside ``below``.

    ``I`` is an ideal over names with ``top`` the newest generator; the block
    order with ``top`` first makes every basis element of positive
    ``top``-degree a candidate.  Ties go to the least rendering.
    """
    names = I.vars
    rest = tuple(v for v in names if v != top)
    order_vars = (top,) + rest
    G = I.embed(order_vars).basis(block_order(1, len(rest)))
    below = below.embed(rest) if below.vars != rest else below
    best = None
    for g in G:
        d = g.degree(top)
        if d <= 0:
            continue
        lc = g.coeffs(top)[d].embed(rest)
        if below.contains(lc):
            continue
        key = (d, str(g.embed(names)))
        if best is None or key < best[0]:
            best = (key, g.embed(names))
    return best


def build_tower(B: PresentedRing, delta: Derivation, a_gens: Sequence, slice: LocalSliceData,
                a_names: Sequence[str] | None = None, assume_irreducible: bool = False,
                z_name: str = "z", y_prefix: str = "y") -> Tower:
    """Build the tower along ``slice.f`` for a unit ``beta``.

    Each step contracts ``fB`` to ``B_i``; if the contraction is just
    ``f B_i`` the tower is complete, otherwise the primitive generator
    ``g_i`` of least degree in the newest generator gives
    ``y_{i+1} = g_i / f^{l_i}``.
    """
    if slice.f is None:
        raise HypothesisError("the local slice carries no prime f", clause="prime")
    if not slice.beta_unit:
        raise HypothesisError(
            "beta is not a unit; only the unit-beta path is implemented",
            clause="beta-unit",
            data={"beta": str(slice.beta), "localize_at": str(slice.beta), "p": slice.p})
    if slice.p < 1:
        raise HypothesisError("f does not divide delta(z); nothing to build", clause="p-positive")
    a_gens = tuple(B.element(a) for a in a_gens)
    for a in a_gens:
        if not B.is_zero(delta(a)):
            raise HypothesisError(f"{a} is not in the kernel", clause="kernel-gens")
    a_names = tuple(a_names) if a_names is not None else tuple(f"a{i + 1}" for i in range(len(a_gens)))
    f = B.element(slice.f)
    if not B.is_zero(delta(f)):
        raise HypothesisError(f"delta({f}) is not zero", clause="invariant")
    # f is a declared prime, so it may serve in the irreducibility screen
    verdict = "ASSUMED" if assume_irreducible else is_irreducible(delta, [f]).verdict
    if verdict not in ("YES", "ASSUMED"):
        raise HypothesisError(f"delta is not known to be irreducible (verdict {verdict})", clause="irreducible")
    A = Subalgebra(B, a_gens, a_names)
    mf = A.membership(f)
    if not mf.member:
        raise HypothesisError(f"{f} is not expressed over the kernel generators", clause="kernel-gens")
    F = mf.witness
    taken = set(a_names)
    if z_name in taken:
        z_name = fresh_names(z_name, 1, taken)[0]
    taken.add(z_name)
    y_names = fresh_names(y_prefix, slice.p, taken)
    z = B.element(slice.z)
    p = slice.p
    fB = B.principal(f)
    caps = get_caps()

    # I_{-1,1} = A cap fB, over the kernel names
    below = A.relations().with_gens(F)
    steps: list = []
    gens = list(a_gens) + [z]
    names = list(a_names) + [z_name]
    top = z_name
    while True:
        S = Subalgebra(B, gens, names)
        Fi = F.embed(tuple(names))
        I1 = S.contraction(fB)
        base = S.relations().with_gens(Fi)
        if I1.same(base):
            final = I1
            break
        i = len(steps)
        if i >= p or i >= caps.tower:
            raise ResourceError(f"tower did not close within nu <= {min(p, caps.tower)} steps")
        choice = _choose_generator(I1, top, below)
        if choice is None:
            raise HypothesisError("contraction is larger than fB_i but has no generator in the newest variable",
                                  clause="factorial", data={"step": i, "contraction": str(I1)})
        (deg, _), g = choice
        g = _primitive(g, top, I1)
        if not I1.same(base.with_gens(g)):
            raise HypothesisError(
                "non-factorial intermediate ring: the contraction is not generated by f and g",
                clause="factorial",
                data={"step": i, "contraction": [str(h) for h in I1.basis()], "g": str(g)})
        gB = S.lift(g)
        ell = f_order(B, gB, f)
        if ell < 1:
            raise HypothesisError(f"chosen generator {g} is not divisible by f", clause="factorial")
        y = divide_exact(B, gB, f, ell)
        c = y.leading_coefficient()
        if c != 1:
            g, gB, y = g.scale(1 / c), gB.scale(1 / c), y.scale(1 / c)
        dy = divide_exact(B, delta(gB), f, ell)
        steps.append(TowerStep(i, tuple(names), I1, g, ell, y_names[i], y, dy, deg))
        below = I1
        gens.append(y)
        names.append(y_names[i])
        top = y_names[i]

    mu_per_var = {}
    S0 = Subalgebra(B, list(a_gens) + [z], list(a_names) + [z_name])
    for v in B.vars:
        b = B.var(v)
        m = 0
        while not S0.contains(B.nf(f**m * b)):
            m += 1
            if m > caps.f_order:
                raise ResourceError("localization exponent exceeds the f-order cap")
        mu_per_var[v] = m
    mu = max(mu_per_var.values(), default=0)
    return Tower(B, delta, a_gens, a_names, slice, f, F, p, z_name, tuple(steps), final, mu,
                 mu_per_var, verdict)


def _primitive(g: Polynomial, top: str, I1: Ideal) -> Polynomial:
    """Strip a common factor of the ``top``-coefficients when the quotient stays in ``I1``."""
    cs = [c for c in g.coeffs(top).values() if not c.is_zero()]
    cont = normalize(gcd_many(cs))
    if cont.is_constant():
        return g
    out = divide(g, cont)
    return out if I1.contains(out) else g


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class TowerReport:
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def by_name(self, name: str) -> list:
        return [c for c in self.checks if c.name == name]


def verify_tower(T: Tower) -> TowerReport:
    """Re-derive every tower invariant from ``B`` directly."""
    B, delta, f, p = T.ring, T.delta, T.f, T.p
    checks = []
    add = lambda name, ok, detail="": checks.append(Check(name, bool(ok), detail))
    used = 0
    # partial derivative product g' * d_{y1} g_1 * ... as elements of B
    chain = B.one()
    for s in T.steps:
        S = Subalgebra(B, T.gens(s.index), T.names(s.index))
        gB = S.lift(s.g)
        lhs = B.nf(f**s.ell * s.y)
        ok4 = B.eq(gB, lhs)
        try:
            order_ok = f_order(B, gB, f) == s.ell
        except GalabError:
            order_ok = False
        add("y_order", ok4 and order_ok and not B.principal(f).contains(s.y),
            f"step {s.index}: g = f^{s.ell} * {s.y_name}")
        add("g_in_contraction", B.principal(f).contains(gB) and s.contraction.contains(s.g),
            f"step {s.index}")
        add("delta_relation", B.eq(B.nf(f**s.ell * s.delta_y), delta(gB)) and B.eq(s.delta_y, delta(s.y)),
            f"step {s.index}: delta({s.y_name}) * f^{s.ell} = delta(g)")
        add("ell_bound", 1 <= s.ell <= p - used, f"step {s.index}: 1 <= {s.ell} <= {p - used}")
        used += s.ell
        top = s.names[-1]
        chain = B.nf(chain * S.lift(s.g.diff(top)))
        e = p - used
        if e >= 0:
            diff = B.nf(s.delta_y - f**e * chain)
            ok = diff.is_zero() or f_order(B, diff, f) >= e + 1
        else:
            ok = False
        add("delta_leading", ok, f"step {s.index}: modulo f^{e + 1}")
    if T.steps:
        add("sum_ell", used == p, f"sum of ells {used}, p = {p}")
        s0 = T.steps[0]
        screen = s0.top_degree > 1 and not s0.contraction.contains(s0.g.diff(T.z_name))
        add("top_degree_screen", screen, f"degree {s0.top_degree} in {T.z_name}; g' outside the contraction")
    else:
        add("sum_ell", True, "vacuous: nu = 0")
    top_sub = Subalgebra(B, T.gens(), T.names())
    missing = [v for v in B.vars if not top_sub.contains(B.var(v))]
    add("B_nu_eq_B", not missing, "all variables generated" if not missing else f"missing {missing}")
    S0 = Subalgebra(B, T.gens(0), T.names(0))
    bad = [v for v, m in T.mu_per_var.items() if not S0.contains(B.nf(f**m * B.var(v)))]
    add("localization", not bad, f"f^mu * v in A[z] with mu = {T.mu}" if not bad else f"fails for {bad}")
    return TowerReport(tuple(checks))


# ---------------------------------------------------------------------------
# the residue chain


@dataclass(frozen=True)
class ResidueStep:
    index: int  # -1 for A/fA
    ring: PresentedRing
    degree: int | None  # [Q(this) : Q(previous)], None when transcendental or not computed
    minimal_polynomial: MinimalPolynomial | None = None


def residue_chain(T: Tower) -> list:
    """``A/fA < B_0/I_{0,1} < ... < B_{nu-1}/I_{nu-1,1}`` with the degree of each step."""
    A = Subalgebra(T.ring, T.a_gens, T.a_names)
    abar = PresentedRing(T.a_names, A.relations().with_gens(T.F), "A/fA")
    out = [ResidueStep(-1, abar, None)]
    for s in T.steps:
        ring = PresentedRing(s.names, s.contraction, f"B{s.index}/I{s.index}")
        top = s.names[-1]
        lower = [Polynomial.var(s.names, v) for v in s.names[:-1]]
        var = "T" if "T" not in s.names else fresh_names("T", 1, s.names)[0]
        mp = minimal_polynomial(s.contraction, Polynomial.var(s.names, top), lower,
                                var=var, tags=list(s.names[:-1]))
        out.append(ResidueStep(s.index, ring, mp.degree, mp))
    return out


def residue_degrees(T: Tower) -> list:
    return [r.degree for r in residue_chain(T)[1:]]


__all__ = [
    "AffineModification",
    "affine_modification",
    "TowerStep",
    "Tower",
    "build_tower",
    "Check",
    "TowerReport",
    "verify_tower",
    "ResidueStep",
    "residue_chain",
    "residue_degrees",
]
