"""Triviality of the quotient A^1-bundle: branching degrees, fibers,
the singular locus, and generators for the two counterexample families.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .errors import GalabError, HypothesisError, InputError, InvariantError, NotDivisibleError
from .ideal import Ideal, MinimalPolynomial, minimal_polynomial
from .lnd import (
    Derivation,
    find_local_slice,
    induced_lnd,
    is_irreducible,
    kernel_search,
    plinth_elements,
)
from .poly import (
    Polynomial,
    block_order,
    fresh_names,
    divide,
    normalize,
    parse,
    squarefree_decomposition,
    squarefree_part,
)
from .ring import (
    PresentedRing,
    Subalgebra,
    divide_exact,
    domain_screen,
    f_order,
    make_ring,
    simplify_presentation,
)
from .tower import build_tower, residue_chain

# ---------------------------------------------------------------------------
# branching degree


@dataclass(frozen=True)
class Certificate:
    """``poly(element; gens) = 0`` in ``ring``, with ``poly`` monic-free in ``var``."""

    ring: PresentedRing
    element: Polynomial
    gens: tuple
    minpoly: MinimalPolynomial

    @property
    def degree(self) -> int | None:
        return self.minpoly.degree

    def verify(self) -> bool:
        return verify_minimal_polynomial(self.ring, self.minpoly, self.element, self.gens)


def verify_minimal_polynomial(ring: PresentedRing, mp: MinimalPolynomial, b: Polynomial, gens: Sequence) -> bool:
    """Substitute ``b`` and the generators back and reduce in ``ring``."""
    if mp.poly is None:
        return False
    binding = {mp.var: ring.element(b), **{t: ring.element(g) for t, g in zip(mp.tags, gens)}}
    return ring.is_zero(mp.poly.subs(binding, ring.vars))


@dataclass(frozen=True)
class BranchingDegree:
    f: Polynomial
    m: int
    exact: bool
    method: str  # slice / residue-chain / kernel-search
    lower_bound: int  # from kernel elements of the induced derivation
    certificate: Certificate | None
    chain_degrees: tuple = ()
    chain_certificates: tuple = ()
    notes: tuple = ()

    @property
    def tag(self) -> str:
        return "EXACT" if self.exact else "LOWER-BOUND"


def _kernel_lower_bound(delta: Derivation, f: Polynomial, a_gens: Sequence, bound: int):
    """Largest minimal-polynomial degree among kernel elements of the induced derivation."""
    dbar, pi = induced_lnd(delta, f)
    Q = dbar.ring
    base = [pi(a) for a in a_gens]
    found = kernel_search(dbar, bound).generators
    cands = list(found)
    if len(found) > 1:
        cands.append(Q.nf(sum((g.scale(i + 1) for i, g in enumerate(found)), Q.zero())))
    best = None
    for k in cands:
        mp = minimal_polynomial(Q.relations, k, base)
        if not mp.algebraic:
            continue
        cert = Certificate(Q, k, tuple(base), mp)
        if best is None or mp.degree > best.degree:
            best = cert
    return best, Q


def branching_degree(delta: Derivation, f, a_gens: Sequence, a_names: Sequence[str] | None = None,
                     bound: int = 2) -> BranchingDegree:
    """``[Q(Ker dbar) : Q(A/fA)]`` for the derivation induced on ``B/fB``.

    Two routes run side by side.  Minimal polynomials of low-degree kernel
    elements of ``dbar`` give a lower bound.  The exact value comes from a
    slice (degree 1) or from the residue chain of the tower, whose top is
    ``B/fB``.  The lower bound never exceeding the exact value is checked.
    """
    B = delta.ring
    f = B.element(f)
    if not B.is_zero(delta(f)):
        raise HypothesisError(f"{f} is not in the kernel", clause="invariant")
    a_gens = tuple(B.element(a) for a in a_gens)
    a_names = tuple(a_names) if a_names is not None else tuple(f"a{i + 1}" for i in range(len(a_gens)))
    lower, _ = _kernel_lower_bound(delta, f, a_gens, bound)
    lb = lower.degree if lower is not None else 1
    notes = []
    exact = None
    method = "kernel-search"
    chain: tuple = ()
    chain_certs: tuple = ()
    sl = find_local_slice(delta, a_gens, bound, f)
    if sl is not None and sl.is_slice:
        exact, method = 1, "slice"
    elif sl is not None:
        try:
            T = build_tower(B, delta, a_gens, sl, a_names)
            steps = residue_chain(T)[1:]
            degs = [s.degree for s in steps]
            if all(d is not None for d in degs):
                exact = 1
                for d in degs:
                    exact *= d
                method = "residue-chain"
                chain = tuple(degs)
                chain_certs = tuple(
                    Certificate(s.ring, Polynomial.var(s.ring.vars, s.ring.vars[-1]),
                                tuple(Polynomial.var(s.ring.vars, v) for v in s.ring.vars[:-1]),
                                s.minimal_polynomial)
                    for s in steps)
        except GalabError as e:
            notes.append(f"tower unavailable: {e}")
    else:
        notes.append("no local slice within the bound")
    if exact is not None and lb > exact:
        raise InvariantError(f"kernel lower bound {lb} exceeds the exact branching degree {exact}")
    if exact is not None:
        return BranchingDegree(f, exact, True, method, lb, lower, chain, chain_certs, tuple(notes))
    return BranchingDegree(f, lb, False, method, lb, lower, (), (), tuple(notes))


# ---------------------------------------------------------------------------
# fibers and the singular locus


@dataclass(frozen=True)
class FiberReport:
    point: dict  # name -> Fraction
    ideal: Ideal  # fiber ideal over the ring variables
    empty: bool
    supported: bool
    variables: tuple  # coordinates left after linear elimination
    constraint: Polynomial | None  # the univariate constraint, None for affine space
    dimension: int | None
    components: int | None  # over the algebraic closure
    multiplicities: tuple
    factors: tuple = ()  # (squarefree factor, multiplicity)
    note: str = ""

    @property
    def is_line(self) -> bool:
        return self.supported and not self.empty and self.components == 1 and self.multiplicities == (1,) \
            and self.dimension == 1


def _parse_point(point, names: Sequence[str]) -> dict:
    if isinstance(point, str):
        out = {}
        for item in point.split(","):
            if not item.strip():
                continue
            k, sep, v = item.partition("=")
            if not sep:
                raise InputError(f"point entry {item.strip()!r} is not of the form name=value")
            try:
                out[k.strip()] = Fraction(v.strip())
            except ValueError:
                raise InputError(f"point value {v.strip()!r} is not rational") from None
        point = out
    point = {k: Fraction(v) for k, v in point.items()}
    unknown = [k for k in point if k not in names]
    missing = [k for k in names if k not in point]
    if unknown or missing:
        raise InputError(f"point must assign exactly the kernel generators {list(names)}")
    return point


def fiber_at_point(delta: Derivation, a_gens: Sequence, a_names: Sequence[str], point) -> FiberReport:
    """The fiber of the quotient map over a rational point of the kernel presentation."""
    B = delta.ring
    a_names = tuple(a_names)
    a_gens = tuple(B.element(a) for a in a_gens)
    Q = _parse_point(point, a_names)
    Arel = Subalgebra(B, a_gens, a_names).relations()
    for r in Arel.gens:
        if r.evaluate(Q).constant_value() != 0:
            raise InputError(f"point does not lie on the quotient: relation {r} does not vanish")
    J = B.relations.with_gens(*[a - Q[n] for a, n in zip(a_gens, a_names)])
    base = dict(point=Q, ideal=J)
    if J.is_unit():
        return FiberReport(empty=True, supported=True, variables=(), constraint=None, dimension=None,
                           components=0, multiplicities=(), note="empty fiber: the point is not in the image",
                           **base)
    vars, rels, _ = simplify_presentation(B.vars, J)
    G = rels.basis() if rels.gens else ()
    if not G:
        return FiberReport(empty=False, supported=True, variables=vars, constraint=None, dimension=len(vars),
                           components=1, multiplicities=(1,), **base)
    if len(G) == 1:
        h = G[0]
        used = h.used_vars()
        if len(used) == 1:
            v = used[0]
            facs = squarefree_decomposition(h, v)
            count = sum(fct.degree(v) for fct, _ in facs)
            mults = tuple(m for fct, m in facs for _ in range(fct.degree(v)))
            return FiberReport(empty=False, supported=True, variables=vars, constraint=normalize(h),
                               dimension=len(vars) - 1, components=count, multiplicities=mults,
                               factors=tuple(facs), **base)
    return FiberReport(empty=False, supported=False, variables=vars, constraint=None, dimension=None,
                       components=None, multiplicities=(), note="unsupported fiber shape", **base)


@dataclass(frozen=True)
class SingLocus:
    plinth: object  # PlinthReport
    generator: Polynomial | None
    reduced: Polynomial | None  # squarefree part of the generator
    empty: bool
    commentary: str


def sing_locus(delta: Derivation, a_gens: Sequence, a_names: Sequence[str] | None = None,
               bound: int = 3) -> SingLocus:
    """``V(pl(delta))`` in the kernel presentation, with its reduced structure."""
    pl = plinth_elements(delta, a_gens, bound, a_names)
    hyp = "closure of Sing(pi), assuming faithful flatness, factoriality and an irreducible derivation"
    if pl.principal is None:
        return SingLocus(pl, None, None, False, "zero plinth ideal: the derivation is trivial")
    if not pl.principal:
        return SingLocus(pl, None, None, False,
                         f"principality screen violated up to bound {bound}; the zero locus is not a divisor")
    h = pl.generator
    if h.is_constant():
        return SingLocus(pl, h, h, True, f"empty: unit plinth ideal; {hyp}")
    red = squarefree_part(h)
    return SingLocus(pl, h, red, False, f"V({red}) (scheme V({h})); {hyp}")


# ---------------------------------------------------------------------------
# the criterion


@dataclass(frozen=True)
class FactorResult:
    f: Polynomial
    multiplicity: int
    branching: BranchingDegree


@dataclass(frozen=True)
class CriterionReport:
    alpha: Polynomial
    factors: tuple  # FactorResult per asserted prime
    verdict: str  # TRIVIAL / TRIVIAL-up-to-sampling / NOT_TRIVIAL / INCONCLUSIVE
    witness: dict
    slice: Polynomial | None
    hypotheses: dict
    reasons: tuple = ()
    samples: tuple = ()  # FiberReports at sampled points
    notes: tuple = ()


def sample_points(names: Sequence[str], relations: Ideal, alpha: Polynomial, count: int) -> list:
    """Deterministic small-integer points on the quotient avoiding ``V(alpha)``."""
    names = tuple(names)
    grid = sorted(product(range(-3, 4), repeat=len(names)), key=lambda p: (sum(map(abs, p)), p))
    out = []
    for pt in grid:
        q = dict(zip(names, (Fraction(c) for c in pt)))
        if alpha.evaluate(q).constant_value() == 0:
            continue
        if any(r.evaluate(q).constant_value() != 0 for r in relations.gens):
            continue
        out.append(q)
        if len(out) >= count:
            break
    return out


def check_triviality(delta: Derivation, alpha, a_gens: Sequence, a_names: Sequence[str] | None = None,
                     primes: Sequence | None = None, samples: int = 20, bound: int = 2,
                     assertions: Mapping[str, bool] | None = None) -> CriterionReport:
    """Decide whether the quotient map is a trivial A^1-bundle, or say why not."""
    B = delta.ring
    alpha = B.element(alpha)
    if alpha.is_zero() or not B.is_zero(delta(alpha)):
        raise HypothesisError(f"alpha = {alpha} must be a nonzero kernel element", clause="alpha-in-kernel")
    a_gens = tuple(B.element(a) for a in a_gens)
    a_names = tuple(a_names) if a_names is not None else tuple(f"a{i + 1}" for i in range(len(a_gens)))
    assertions = dict(assertions or {})
    sub = Subalgebra(B, a_gens, a_names)
    fixed = B.relations.with_gens(*[i for i in delta.images.values() if not i.is_zero()])
    hyp = {
        "factorial": "asserted" if assertions.get("factorial") else "unknown",
        "faithfully_flat": "asserted" if assertions.get("faithfully_flat") else "unknown",
        "free_action": "verified" if fixed.is_unit() else ("asserted" if assertions.get("free_action") else "no"),
    }
    notes = ["the equivalence needs faithful flatness, which is taken as asserted, never verified"]

    # a slice settles everything
    sl = find_local_slice(delta, a_gens, bound)
    if sl is not None and sl.is_slice:
        s_name = str(sl.z) if str(sl.z) in B.vars and str(sl.z) not in a_names else "s"
        if s_name in a_names:
            s_name = fresh_names("s", 1, a_names)[0]
        over = Subalgebra(B, list(a_gens) + [sl.z], list(a_names) + [s_name])
        found = {v: over.membership(B.var(v)) for v in B.vars}
        missing = [v for v, m in found.items() if not m.member]
        hyp["irreducible"] = "verified"
        if not missing:
            certificate = {v: m.witness for v, m in found.items()}
            return CriterionReport(alpha, (), "TRIVIAL",
                                   {"slice": sl.z, "certificate": f"B = A[{s_name}]", "expressions": certificate},
                                   sl.z, hyp, (), (), tuple(notes))
        return CriterionReport(alpha, (), "INCONCLUSIVE", {}, sl.z, hyp,
                               (f"slice found but {missing} not generated over the kernel generators",),
                               (), tuple(notes))

    prime_list = [B.element(p) for p in primes] if primes else [normalize(squarefree_part(alpha))]
    if not primes:
        notes.append(f"no factorization supplied; {prime_list[0]} taken as a single asserted prime")
    irr = is_irreducible(delta, prime_list)
    hyp["irreducible"] = {"YES": "verified", "NO": "fails", "UNKNOWN": "unknown"}[irr.verdict]
    rest = alpha
    factors = []
    for f in prime_list:
        if not sub.contains(f):
            raise HypothesisError(f"prime {f} is not in the kernel algebra", clause="primes")
        k = f_order(B, rest, f)
        rest = divide_exact(B, rest, f, k)
        factors.append((f, k))
    if not B.is_unit(rest):
        raise HypothesisError(f"alpha is not a unit times the asserted primes (left with {rest})",
                              clause="factorization")
    results = []
    reasons = []
    for f, k in factors:
        bd = branching_degree(delta, f, a_gens, a_names, bound)
        results.append(FactorResult(f, k, bd))
        if bd.m >= 2:
            cert = bd.certificate if bd.certificate is not None and (bd.certificate.degree or 0) >= 2 \
                else (bd.chain_certificates[0] if bd.chain_certificates else None)
            if cert is None or not cert.verify():
                raise InvariantError("refutation without a verified minimal-polynomial certificate")
            return CriterionReport(alpha, tuple(results), "NOT_TRIVIAL", {"f": f, "m": bd.m, "tag": bd.tag},
                                   None, hyp, (), (), tuple(notes))
        if not bd.exact:
            reasons.append(f"branching degree over {f} only bounded below by {bd.m}")
    if reasons:
        return CriterionReport(alpha, tuple(results), "INCONCLUSIVE", {}, None, hyp, tuple(reasons), (),
                               tuple(notes))
    alpha_a = sub.membership(alpha).witness
    pts = sample_points(a_names, sub.relations(), alpha_a, samples)
    reports = []
    for q in pts:
        fr = fiber_at_point(delta, a_gens, a_names, q)
        reports.append(fr)
        if fr.supported and not fr.empty and not fr.is_line:
            return CriterionReport(alpha, tuple(results), "NOT_TRIVIAL", {"point": q}, None, hyp, (),
                                   tuple(reports), tuple(notes))
    if any(not fr.supported for fr in reports) or len(pts) < samples:
        reasons.append("sampled fibers incomplete")
        return CriterionReport(alpha, tuple(results), "INCONCLUSIVE", {}, None, hyp, tuple(reasons),
                               tuple(reports), tuple(notes))
    notes.append(f"fibers off V(alpha) checked at {len(pts)} sample points only")
    return CriterionReport(alpha, tuple(results), "TRIVIAL-up-to-sampling", {}, None, hyp, (),
                           tuple(reports), tuple(notes))


# ---------------------------------------------------------------------------
# counterexample families


@dataclass(frozen=True)
class ScreenResult:
    clause: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class Instance:
    ring: PresentedRing
    delta: Derivation
    a_gens: tuple
    a_names: tuple
    alpha: Polynomial
    primes: tuple
    screens: tuple
    flags: tuple = ()


def _reject(screens: list, clause: str, detail: str):
    screens.append(ScreenResult(clause, False, detail))
    raise HypothesisError(f"instance rejected: {clause} ({detail})", clause=clause,
                          data={"screens": [(s.clause, s.passed, s.detail) for s in screens]})


def _z_minus_a_screen(vars: tuple, ideal: Ideal, z: str, eliminated: Sequence[str]) -> bool:
    """True when no ``z - a`` with ``a`` over the remaining variables lies in ``ideal``.

    Under an order eliminating ``eliminated`` (which contains ``z``), such an
    element exists exactly when the normal form of ``z`` avoids them.
    """
    top = tuple(eliminated)
    low = tuple(v for v in vars if v not in top)
    order_vars = top + low
    I = ideal.embed(order_vars)
    r = I.reduce(Polynomial.var(order_vars, z), block_order(len(top), len(low)))
    return bool(set(r.used_vars()) & set(top))


def _absolute_prime_screen(vars: tuple, I: Ideal):
    """(passed, flag, detail) for primality of ``Q[vars]/I`` over Q and its closure."""
    if I.is_unit():
        return False, "", "unit ideal"
    nv, rels, _ = simplify_presentation(vars, I)
    G = rels.basis() if rels.gens else ()
    if not G:
        return True, "", f"quotient is a polynomial ring in {', '.join(nv)}"
    R = PresentedRing(nv, rels)
    bad = domain_screen(R)
    if bad is not None:
        return False, "", f"zero divisors ({bad[0]})*({bad[1]})"
    if len(G) == 1 and len(G[0].used_vars()) == 1 and G[0].total_degree() > 1:
        return False, "not absolutely prime", f"{G[0]} splits over the algebraic closure"
    return True, "Q-prime only", "primality over the closure not decided"


def make_prop38_instance(a_vars: Sequence[str], primes: Sequence, exponents: Sequence[int], g: str,
                         a_relations: Sequence = (), z: str = "Z", y: str = "Y") -> Instance:
    """``B = A[Y, Z]/(alpha*Y - g(Z))`` with ``delta(Z) = alpha``, ``delta(Y) = g'(Z)``; hypotheses screened."""
    a_vars = tuple(a_vars)
    big = a_vars + (z,)
    vars = a_vars + (y, z)
    screens: list = []
    gp = parse(g, big) if isinstance(g, str) else g.embed(big)
    ps = [parse(p, a_vars) if isinstance(p, str) else p for p in primes]
    if len(ps) != len(exponents) or not ps:
        raise InputError("one positive exponent per prime is required")
    if any(e < 1 for e in exponents):
        _reject(screens, "exponents-positive", f"exponents {list(exponents)}")
    Arel = Ideal(a_vars, [parse(r, a_vars) if isinstance(r, str) else r for r in a_relations])
    if gp.degree(z) <= 0:
        _reject(screens, "g-not-in-A", f"g = {gp} does not involve {z}")
    screens.append(ScreenResult("g-not-in-A", True, f"degree {gp.degree(z)} in {z}"))
    alpha = Polynomial.one(a_vars)
    for p, e in zip(ps, exponents):
        alpha = alpha * p**e
    flags = []
    gprime = gp.diff(z)
    for p in ps:
        I = Arel.embed(big).with_gens(p.embed(big), gp)
        ok, flag, detail = _absolute_prime_screen(big, I)
        if not ok:
            _reject(screens, f"(x_i, g) prime [{p}]" + (f": {flag}" if flag else ""), detail)
        screens.append(ScreenResult(f"(x_i, g) prime [{p}]", True, detail))
        if flag:
            flags.append(f"{p}: {flag}")
        if I.contains(gprime):
            _reject(screens, f"g' not in (x_i, g) [{p}]", f"{gprime} reduces to 0")
        screens.append(ScreenResult(f"g' not in (x_i, g) [{p}]", True, "nonzero normal form"))
        if not _z_minus_a_screen(big, I, z, [z]):
            _reject(screens, f"Z - a not in (x_i, g) [{p}]", f"{z} is congruent to an element of A")
        screens.append(ScreenResult(f"Z - a not in (x_i, g) [{p}]", True, "exact elimination test"))
    rel = alpha.embed(vars) * Polynomial.var(vars, y) - gp.embed(vars)
    try:
        B = make_ring(vars, list(Arel.embed(vars).gens) + [rel], label="B")
    except GalabError as e:
        _reject(screens, "B-domain", str(e))
    screens.append(ScreenResult("B-domain", True, "domain screen passed"))
    delta = Derivation(B, {**{v: 0 for v in a_vars}, z: alpha.embed(vars), y: gprime.embed(vars)})
    a_gens = tuple(Polynomial.var(vars, v) for v in a_vars)
    return Instance(B, delta, a_gens, a_vars, alpha.embed(vars), tuple(p.embed(vars) for p in ps),
                    tuple(screens), tuple(flags))


def make_prop37_instance(a_vars: Sequence[str], x: str, ells: Sequence[int], gs: Sequence[str],
                         a_relations: Sequence = (), z: str = "Z", y_prefix: str = "Y") -> Instance:
    """The iterated presentation ``x^{l_0} Y_1 = g(Z)``, ``x^{l_i} Y_{i+1} = g_i(Z, Y_1..Y_i)``."""
    a_vars = tuple(a_vars)
    nu = len(ells)
    if nu < 1 or len(gs) != nu:
        raise InputError("need one polynomial per exponent and at least one step")
    ys = tuple(f"{y_prefix}{i + 1}" for i in range(nu))
    vars = a_vars + (z,) + ys
    screens: list = []
    if any(l < 1 for l in ells):
        _reject(screens, "ell-positive", f"exponents {list(ells)}")
    screens.append(ScreenResult("ell-positive", True, f"ells {list(ells)}"))
    X = parse(x, a_vars).embed(vars) if isinstance(x, str) else x.embed(vars)
    polys = []
    for i, gtext in enumerate(gs):
        allowed = a_vars + (z,) + ys[:i]
        gi = parse(gtext, allowed).embed(vars) if isinstance(gtext, str) else gtext.embed(vars)
        newest = z if i == 0 else ys[i - 1]
        if gi.degree(newest) <= 0:
            clause = "g(Z) in A[Z]\\A" if i == 0 else f"g_{i} uses Y_{i}"
            _reject(screens, clause, f"{gi} does not involve {newest}")
        screens.append(ScreenResult("g(Z) in A[Z]\\A" if i == 0 else f"g_{i} uses Y_{i}", True, str(gi)))
        polys.append(gi)
    p = sum(ells)
    rels = [parse(r, a_vars).embed(vars) if isinstance(r, str) else r.embed(vars) for r in a_relations]
    rels += [X**l * Polynomial.var(vars, yv) - gi for l, yv, gi in zip(ells, ys, polys)]
    try:
        B = make_ring(vars, rels, label="B")
    except GalabError as e:
        _reject(screens, "B-domain", str(e))
    images = {v: Polynomial.zero(vars) for v in a_vars}
    images[z] = X**p
    for i, (l, yv, gi) in enumerate(zip(ells, ys, polys)):
        dg = Polynomial.zero(vars)
        for v in gi.used_vars():
            if images.get(v) is not None and not images[v].is_zero():
                dg = dg + gi.diff(v) * images[v]
        try:
            images[yv] = divide(dg, X**l)
        except NotDivisibleError:
            images[yv] = divide_exact(B, dg, X, l)
    delta = Derivation(B, images)
    # screens on B
    xB = B.principal(X)
    last = polys[-1].diff(z if nu == 1 else ys[nu - 2])
    if xB.contains(last):
        _reject(screens, "last partial not in xB", f"{last} lies in xB")
    screens.append(ScreenResult("last partial not in xB", True, str(last)))
    if not _z_minus_a_screen(vars, xB, z, (z,) + ys):
        _reject(screens, "z - a not in xB", f"{z} is congruent to an element of A modulo x")
    screens.append(ScreenResult("z - a not in xB", True, "exact elimination test"))
    # images follow the leading-term pattern
    chain = B.one()
    used = 0
    for i, (l, yv, gi) in enumerate(zip(ells, ys, polys)):
        newest = z if i == 0 else ys[i - 1]
        chain = B.nf(chain * gi.diff(newest))
        used += l
        e = p - used
        diff = B.nf(delta.images[yv] - X**e * chain)
        if not diff.is_zero() and f_order(B, diff, X) < e + 1:
            raise InvariantError(f"image of {yv} breaks the leading-term pattern")
    screens.append(ScreenResult("image pattern", True, "leading terms match"))
    a_gens = tuple(Polynomial.var(vars, v) for v in a_vars)
    return Instance(B, delta, a_gens, a_vars, X**p, (X,), tuple(screens))


def modification_family() -> list:
    """Argument tuples for :func:`make_prop38_instance` over ``Q[x,t]`` and ``Q[x,t,s]``.

    Bases are crossed with exponents 1..3 and the cubic, quadratic and mixed
    ``g``; the mixed one needs the extra parameter ``s``.
    """
    out = []
    for a_vars in (("x", "t"), ("x", "t", "s")):
        gs = ["Z^2 - t", "Z^3 - t"] + (["Z^2 + Z*t - s"] if "s" in a_vars else [])
        for p in (1, 2, 3):
            for g in gs:
                out.append((a_vars, ("x",), (p,), g))
    return out


def modification_rejects() -> list:
    """Instances that must fail a named screen, with that clause."""
    return [
        ((("x", "t"), ("x",), (1,), "t"), "g-not-in-A"),
        ((("x", "t"), ("x",), (2,), "Z^2 - x"), "(x_i, g) prime [x]"),
        ((("x", "t"), ("x",), (1,), "Z - t"), "Z - a not in (x_i, g) [x]"),
        ((("x",), ("x",), (1,), "Z^2 + 1"), "(x_i, g) prime [x]: not absolutely prime"),
    ]
