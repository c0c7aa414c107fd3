"""Locally nilpotent derivations on presented rings.

A derivation is stored by the images of the ring variables and extended by
the Leibniz rule.  Everything kernel-related here is degree-bounded linear
algebra: the tool verifies and discovers low-degree data, it does not
compute kernels in general.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial
from typing import Mapping, Sequence

from .caps import get_caps
from .errors import DomainError, HypothesisError, NotDivisibleError, StructuralError
from .ideal import Ideal
from .linalg import nullspace
from .poly import GREVLEX, Polynomial, divides, gcd_many, divide, normalize
from .ring import (
    PresentedRing,
    RingMap,
    Subalgebra,
    divide_exact,
    f_order,
    quotient_by,
)


class Derivation:
    """A ``Q``-derivation of ``ring`` given by one image per variable."""

    def __init__(self, ring: PresentedRing, images: Mapping[str, object], check: bool = True):
        self.ring = ring
        missing = [v for v in ring.vars if v not in images]
        if missing:
            raise StructuralError(f"missing image for {missing[0]}")
        extra = [v for v in images if v not in ring.vars]
        if extra:
            raise StructuralError(f"image given for unknown variable {extra[0]}")
        self.images = {v: ring.element(images[v]) for v in ring.vars}
        self.nil_degrees: dict | None = None  # certificate, filled by is_lnd
        if check:
            for g in ring.relations.gens:
                if not ring.is_zero(self._formal(g)):
                    raise HypothesisError(f"derivation does not preserve the relation {g}",
                                          clause="well-defined")

    def _formal(self, b: Polynomial) -> Polynomial:
        out = Polynomial.zero(self.ring.vars)
        for v in b.used_vars():
            img = self.images[v]
            if not img.is_zero():
                out = out + b.diff(v) * img
        return out

    def __call__(self, b) -> Polynomial:
        return self.ring.nf(self._formal(self.ring.element(b)))

    def power(self, b, n: int) -> Polynomial:
        b = self.ring.element(b)
        for _ in range(n):
            if b.is_zero():
                break
            b = self(b)
        return b

    def is_zero(self) -> bool:
        return all(img.is_zero() for img in self.images.values())

    def scaled(self, a) -> "Derivation":
        """``a * self``; a kernel multiple of an lnd is again an lnd."""
        a = self.ring.element(a)
        return Derivation(self.ring, {v: self.ring.nf(a * img) for v, img in self.images.items()},
                          check=False)

    def __str__(self):
        return ", ".join(f"d({v}) = {self.images[v]}" for v in self.ring.vars)

    def __repr__(self):
        return f"Derivation({self})"


def apply(delta: Derivation, b) -> Polynomial:
    return delta(b)


# ---------------------------------------------------------------------------
# local nilpotency and the exponential action


@dataclass(frozen=True)
class LndVerdict:
    is_lnd: bool
    nil_degrees: dict  # variable -> least n with delta^n(v) = 0; None past the cap
    trivial: bool
    cap: int

    @property
    def verdict(self) -> str:
        return "YES" if self.is_lnd else "NO-within-cap"


def is_lnd(delta: Derivation, cap: int | None = None) -> LndVerdict:
    """Iterate ``delta`` on each variable until it vanishes or ``cap`` is hit."""
    cap = get_caps().nilpotency if cap is None else cap
    degrees = {}
    for v in delta.ring.vars:
        b = delta.ring.var(v)
        n = 0
        while not b.is_zero() and n <= cap:
            b = delta(b)
            n += 1
        degrees[v] = n if b.is_zero() else None
    ok = all(d is not None for d in degrees.values())
    if ok:
        delta.nil_degrees = dict(degrees)
    return LndVerdict(ok, degrees, delta.is_zero(), cap)


def _require_lnd(delta: Derivation):
    if delta.nil_degrees is None and not is_lnd(delta).is_lnd:
        raise HypothesisError("derivation is not locally nilpotent within the cap", clause="lnd")


def exp_action(delta: Derivation, t: str = "t") -> RingMap:
    """The coaction ``v -> sum t^n delta^n(v) / n!`` into ``ring[t]``."""
    _require_lnd(delta)
    R = delta.ring
    if t in R.vars:
        raise StructuralError(f"parameter {t!r} clashes with a ring variable")
    big = R.vars + (t,)
    target = PresentedRing(big, R.relations.embed(big), f"{R.label}[{t}]" if R.label else "")
    T = Polynomial.var(big, t)
    images = {}
    for v in R.vars:
        b = R.var(v)
        acc = Polynomial.zero(big)
        n = 0
        while not b.is_zero():
            acc = acc + (T**n * b.embed(big)).scale(Fraction(1, factorial(n)))
            b = delta(b)
            n += 1
        images[v] = acc
    return RingMap(R, target, images)


# ---------------------------------------------------------------------------
# degree-bounded kernel data


def standard_monomials(R: PresentedRing, d: int) -> list:
    """Monomials of degree ``<= d`` not divisible by a leading monomial of the relations.

    Sorted increasingly in grevlex.
    """
    n = len(R.vars)
    leads = [g.leading()[0] for g in R.relations.basis()] if R.relations.gens else []
    out = []
    for deg in range(d + 1):
        for combo in combinations_with_replacement(range(n), deg):
            e = [0] * n
            for i in combo:
                e[i] += 1
            m = tuple(e)
            if not any(divides(l, m) for l in leads):
                out.append(m)
    out.sort(key=GREVLEX.key)
    return out


def _solve_kernel(R: PresentedRing, op, d: int) -> list:
    """Basis of ``{p in span(standard monomials <= d) : op(p) = 0}``, constants included."""
    monos = standard_monomials(R, d)
    cols = [op(Polynomial.monomial(R.vars, m)).terms for m in monos]
    out = []
    for vec in nullspace(cols):
        out.append(Polynomial(R.vars, {monos[j]: c for j, c in vec.items()}))
    return out


@dataclass(frozen=True)
class KernelSearch:
    generators: tuple  # minimal generating set, sorted by (degree, text)
    basis_size: int  # dimension of the degree-bounded kernel (constants included)
    bound: int


def kernel_search(delta: Derivation, d: int) -> KernelSearch:
    """Kernel elements of degree ``<= d``, thinned to a minimal generating set."""
    _require_lnd(delta)
    if d < 0:
        raise DomainError("degree bound must be nonnegative")
    R = delta.ring
    vecs = _solve_kernel(R, delta, d)
    cands = sorted((normalize(p) for p in vecs if not p.is_constant()),
                   key=lambda p: (p.total_degree(), str(p)))
    kept: list = []
    sub = None
    for p in cands:
        if sub is not None and sub.contains(p):
            continue
        kept.append(p)
        sub = Subalgebra(R, kept)
    return KernelSearch(tuple(kept), len(vecs), d)


@dataclass(frozen=True)
class PlinthReport:
    names: tuple  # names of the kernel generators
    kernel: PresentedRing  # presentation of Q[A-gens]
    ideal: Ideal  # plinth elements found, as an ideal over names (relations included)
    elements: tuple  # plinth elements expressed over names
    principal: bool | None  # None for the zero ideal
    generator: Polynomial | None  # over names
    generator_in_ring: Polynomial | None
    bound: int
    flag: str = ""

    @property
    def verdict(self) -> str:
        if self.principal is None:
            return "zero ideal"
        if self.principal:
            return f"principal with generator {self.generator} (up to bound {self.bound})"
        return f"not principal up to bound {self.bound}"


def plinth_elements(delta: Derivation, a_gens: Sequence, bound: int,
                    names: Sequence[str] | None = None) -> PlinthReport:
    """Elements of ``delta(B) cap A`` reached from degree-bounded preimages.

    Preimages range over the whole kernel of ``delta^2`` in degree ``<= bound``,
    which contains every monomial whose image is a kernel element.
    """
    _require_lnd(delta)
    R = delta.ring
    gens = [R.element(a) for a in a_gens]
    for a in gens:
        if not R.is_zero(delta(a)):
            raise HypothesisError(f"{a} is not in the kernel", clause="kernel-gens")
    sub = Subalgebra(R, gens, names)
    K = sub.presentation()
    found = []
    for b in _solve_kernel(R, lambda p: delta.power(p, 2), bound):
        img = delta(b)
        if img.is_zero():
            continue
        m = sub.membership(img)
        if not m.member:
            raise HypothesisError(f"kernel generators insufficient: {img} is not expressed over them",
                                  clause="kernel-gens", data={"element": str(img)})
        found.append(normalize(m.witness) if not m.witness.is_zero() else m.witness)
    found = sorted(set(found), key=lambda p: (p.total_degree(), str(p)))
    ideal = K.relations.with_gens(*found)
    if not found:
        return PlinthReport(sub.names, K, ideal, (), None, None, None, bound, "zero derivation")
    if ideal.is_unit():
        one = Polynomial.one(sub.names)
        return PlinthReport(sub.names, K, ideal, tuple(found), True, one, R.one(), bound)
    cands = list(found) + [g for g in ideal.basis() if not K.relations.contains(g)]
    for h in cands:
        if K.is_zero(h):
            continue
        ph = K.principal(h)
        if all(ph.contains(e) for e in found):
            return PlinthReport(sub.names, K, ideal, tuple(found), True, h, sub.lift(h), bound)
    return PlinthReport(sub.names, K, ideal, tuple(found), False, None, None, bound)


@dataclass(frozen=True)
class LocalSliceData:
    z: Polynomial
    value: Polynomial  # delta(z) = f^p * beta
    f: Polynomial | None
    p: int
    beta: Polynomial
    is_slice: bool
    beta_unit: bool


def _local_slice_candidates(delta: Derivation, bound: int) -> list:
    R = delta.ring
    out = []
    for v in R.vars:
        x = R.var(v)
        img = delta(x)
        if not img.is_zero() and delta(img).is_zero():
            out.append((x, True))
    seen = {c for c, _ in out}
    for b in _solve_kernel(R, lambda p: delta.power(p, 2), bound):
        b = normalize(b) if not b.is_constant() else b
        if b.is_constant() or b in seen or delta(b).is_zero():
            continue
        seen.add(b)
        out.append((b, False))
    return out


def find_local_slice(delta: Derivation, a_gens: Sequence = (), bound: int = 2, f=None) -> LocalSliceData | None:
    """A local slice ``z`` with ``delta(z) = f^p * beta``, or ``None`` when the search is exhausted.

    Slices come first, then the least ``f``-order of ``delta(z)``, then
    variables, then degree.  A constant ``delta(z)`` is scaled to 1 and a
    constant ``beta`` is absorbed into ``z``.
    """
    _require_lnd(delta)
    if delta.is_zero():
        raise HypothesisError("trivial derivation has no local slice", clause="nontrivial")
    R = delta.ring
    f = R.element(f) if f is not None else None
    ranked = []
    for b, is_var in _local_slice_candidates(delta, bound):
        img = delta(b)
        unit = R.is_unit(img)
        order = 0 if (f is None or unit) else f_order(R, img, f)
        ranked.append(((0 if unit else 1, order, 0 if is_var else 1, b.total_degree(), str(b)), b))
    if not ranked:
        return None
    ranked.sort(key=lambda r: r[0])
    z = ranked[0][1]
    img = delta(z)
    if img.is_constant():
        z = z.scale(1 / img.constant_value())
        img = delta(z)
    p = 0
    beta = img
    if f is not None and not R.is_unit(img):
        p = f_order(R, img, f)
        beta = divide_exact(R, img, f, p)
        if beta.is_constant():
            z = z.scale(1 / beta.constant_value())
            img = delta(z)
            beta = R.one()
    return LocalSliceData(z, img, f, p, beta, R.is_unit(img), R.is_unit(beta))


# ---------------------------------------------------------------------------
# irreducibility and the fixed locus


@dataclass(frozen=True)
class IrreducibilityReport:
    verdict: str  # YES / NO / UNKNOWN
    witness: Polynomial | None
    method: str


def is_irreducible(delta: Derivation, primes: Sequence = ()) -> IrreducibilityReport:
    """Whether ``delta(B) in bB`` forces ``b`` to be a unit.

    Exact on free polynomial rings (gcd of the images).  On quotients a unit
    image decides YES; a common divisor among the variables, the declared
    primes and the free-ring gcd decides NO; images that factor entirely over
    declared primes none of which divides all images decide YES.  Otherwise
    UNKNOWN.
    """
    _require_lnd(delta)
    R = delta.ring
    imgs = [i for i in delta.images.values() if not i.is_zero()]
    if not imgs:
        return IrreducibilityReport("NO", R.zero(), "zero derivation")
    if R.is_free():
        g = normalize(gcd_many(imgs))
        if g.is_constant():
            return IrreducibilityReport("YES", None, "free-ring gcd")
        return IrreducibilityReport("NO", g, "free-ring gcd")
    if any(R.is_unit(i) for i in imgs):
        return IrreducibilityReport("YES", None, "unit image")
    prime_elems = [R.element(p) for p in primes]
    cands = [R.var(v) for v in R.vars] + prime_elems
    g = normalize(gcd_many(imgs))
    if not g.is_constant():
        cands.append(g)
    for b in cands:
        if b.is_zero() or R.is_unit(b):
            continue
        I = R.principal(b)
        if all(I.contains(i) for i in imgs):
            return IrreducibilityReport("NO", b, "common divisor")
    if prime_elems:
        for img in imgs:
            rest = img
            for p in prime_elems:
                if R.is_unit(p):
                    continue
                while True:
                    try:
                        rest = divide_exact(R, rest, p)
                    except NotDivisibleError:
                        break
            if R.is_unit(rest):
                return IrreducibilityReport("YES", None, "declared-prime factorization")
    return IrreducibilityReport("UNKNOWN", None, "screen exhausted")


def irreducible_part(delta: Derivation):
    """``(a, delta_tilde)`` with ``delta = a * delta_tilde`` and ``delta_tilde`` irreducible (free rings only)."""
    R = delta.ring
    if not R.is_free():
        raise HypothesisError("irreducible decomposition is only computed on free polynomial rings",
                              clause="free-ring")
    imgs = [i for i in delta.images.values() if not i.is_zero()]
    if not imgs:
        raise HypothesisError("zero derivation has no irreducible part", clause="nontrivial")
    a = normalize(gcd_many(imgs))
    return a, Derivation(R, {v: divide(i, a) for v, i in delta.images.items()}, check=False)


@dataclass(frozen=True)
class FixedLocus:
    ideal: Ideal  # relations + (delta(v))
    generators: tuple  # nonzero images, leading coefficient made positive
    basis: tuple
    free: bool
    trivial: bool
    notes: tuple = field(default_factory=tuple)
    contraction: tuple | None = None  # basis of the ideal pulled back to the kernel generators


def fixed_locus(delta: Derivation, a_gens: Sequence = (), names: Sequence[str] | None = None) -> FixedLocus:
    """The ideal generated by ``delta(B)``; it equals the one generated by the images of the variables."""
    R = delta.ring
    gens = []
    for v in R.vars:
        img = delta.images[v]
        if img.is_zero():
            continue
        if img.leading_coefficient() < 0:
            img = -img
        if img not in gens:
            gens.append(img)
    I = R.relations.with_gens(*gens)
    if not gens:
        return FixedLocus(I, (), tuple(R.relations.basis()) if R.relations.gens else (), False, True,
                          ("trivial action",))
    free = I.is_unit()
    notes = []
    contraction = None
    basis = tuple(g for g in I.basis() if not R.relations.contains(g)) if R.relations.gens else I.basis()
    if a_gens and not free:
        sub = Subalgebra(R, a_gens, names)
        down = sub.contraction(I)
        contraction = down.basis()
        notes.append(f"contraction to the kernel: <{', '.join(str(g) for g in contraction)}>")
    return FixedLocus(I, tuple(gens), tuple(basis), free, False, tuple(notes), contraction)


def induced_lnd(delta: Derivation, f, label: str = ""):
    """The derivation induced on ``R/(f)`` for ``f`` in the kernel, with the projection."""
    R = delta.ring
    f = R.element(f)
    img = delta(f)
    if not img.is_zero():
        raise HypothesisError(f"{f} is not delta-invariant: delta({f}) = {img}", clause="invariant")
    Q, pi = quotient_by(R, f, label)
    images = {v: pi(delta.images[v]) for v in Q.vars}
    return Derivation(Q, images), pi
