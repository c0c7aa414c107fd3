from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import QUAD_A, KR_A, corpus_sessions, polys
from galab.errors import HypothesisError, StructuralError
from galab.ideal import Ideal
from galab.lnd import (
    Derivation,
    apply,
    exp_action,
    find_local_slice,
    fixed_locus,
    induced_lnd,
    is_irreducible,
    is_lnd,
    kernel_search,
    plinth_elements,
)
from galab.poly import Polynomial, parse
from galab.ring import make_ring


def E(R, s):
    return R.element(s)


# -- examples ------------------------------------------------------------------


def test_apply_examples(quad, kr):
    assert apply(quad, "x^2*y + z^2").is_zero()
    assert apply(kr, "y - 2*z*w + x^2*w^2").is_zero()
    assert apply(quad, "1").is_zero()


def test_missing_image():
    with pytest.raises(StructuralError, match="missing image for x"):
        Derivation(make_ring("xy"), {"y": "0"})


def test_ill_defined_derivation_rejected():
    # d(y) = 1 does not preserve the relation x*y - 1 when d(x) = 0
    with pytest.raises(HypothesisError):
        Derivation(make_ring("xy", ["x*y - 1"]), {"x": "0", "y": "1"})


def test_is_lnd(quad):
    v = is_lnd(quad)
    assert v.verdict == "YES" and v.nil_degrees == {"x": 1, "y": 3, "z": 2}
    d = Derivation(make_ring("x"), {"x": "x"})
    assert is_lnd(d, cap=10).verdict == "NO-within-cap"
    zero = Derivation(make_ring("xy"), {"x": "0", "y": "0"})
    z = is_lnd(zero)
    assert z.is_lnd and z.trivial and set(z.nil_degrees.values()) == {1}


def test_exp_examples(quad, kr):
    phi = exp_action(quad, "t")
    V = phi.target.vars
    assert phi.images["z"] == parse("z + x^2*t", V)
    assert phi.images["y"] == parse("y - 2*z*t - x^2*t^2", V)
    assert phi.images["x"] == parse("x", V)
    for v, img in phi.images.items():
        assert img.subs({"t": Polynomial.zero(V)}, V) == parse(v, V)
    psi = exp_action(kr, "s")
    assert psi.images["w"] == parse("w + s", psi.target.vars)
    with pytest.raises(StructuralError):
        exp_action(kr, "t")


def test_exp_rejects_non_lnd():
    with pytest.raises(HypothesisError):
        exp_action(Derivation(make_ring("x"), {"x": "x"}))


def test_kernel_search(quad, kr):
    ks = kernel_search(quad, 3)
    assert set(ks.generators) == {E(quad.ring, "x"), E(quad.ring, "x^2*y + z^2")}
    k2 = set(kernel_search(kr, 2).generators)
    assert k2 == {E(kr.ring, "x"), E(kr.ring, "t")}
    k3 = set(kernel_search(kr, 3).generators)
    # z - x^2*w has degree 3, so it appears one step later than x and t
    assert E(kr.ring, "x^2*w - z") in k3
    k4 = set(kernel_search(kr, 4).generators)
    assert E(kr.ring, "x^2*w^2 - 2*z*w + y") in k4
    zero = Derivation(make_ring("xy"), {"x": "0", "y": "0"})
    assert len(kernel_search(zero, 1).generators) == 2


def test_plinth(quad, kr):
    pl = plinth_elements(quad, QUAD_A, 3, ["x", "t"])
    assert pl.principal and pl.generator == parse("x^2", ("x", "t"))
    assert pl.elements[0] == parse("x^2", ("x", "t"))
    pl2 = plinth_elements(kr, KR_A, 1, ["x", "t", "u", "v"])
    assert pl2.principal and pl2.generator.is_constant()
    zero = Derivation(make_ring("xy"), {"x": "0", "y": "0"})
    z = plinth_elements(zero, ["x", "y"], 2)
    assert z.principal is None and z.flag


def test_plinth_with_too_few_kernel_generators(quad):
    with pytest.raises(HypothesisError, match="kernel generators insufficient"):
        plinth_elements(quad, ["x"], 4)


def test_local_slice(quad, kr):
    sl = find_local_slice(quad, QUAD_A, f="x")
    assert sl.z == E(quad.ring, "z") and sl.p == 2 and sl.beta == quad.ring.one()
    s2 = find_local_slice(kr, KR_A)
    assert s2.is_slice and s2.z == E(kr.ring, "w")
    with pytest.raises(HypothesisError):
        find_local_slice(Derivation(make_ring("xy"), {"x": "0", "y": "0"}))


def test_irreducibility(quad, kr):
    assert is_irreducible(quad).verdict == "YES"
    r = is_irreducible(quad.scaled(E(quad.ring, "x")))
    assert r.verdict == "NO" and r.witness == E(quad.ring, "x")
    assert is_irreducible(kr).verdict == "YES"


def test_fixed_locus(quad, kr):
    fl = fixed_locus(quad, QUAD_A, ["x", "t"])
    R = quad.ring
    assert not fl.free
    assert fl.ideal.same(R.ideal(["2*z", "x^2"]))
    assert set(fl.basis) == {E(R, "z"), E(R, "x^2")}
    # pulled back to the kernel the fixed points sit over the origin x = t = 0
    assert set(fl.contraction) == {parse("t", ("x", "t")), parse("x^2", ("x", "t"))}
    assert fixed_locus(kr).free
    zero = fixed_locus(Derivation(make_ring("xy"), {"x": "0", "y": "0"}))
    assert zero.trivial and "trivial action" in zero.notes


def test_induced_lnd(quad, kr):
    d, pi = induced_lnd(quad, "x")
    Q = d.ring
    assert Q.vars == ("y", "z")
    assert d.images["y"] == parse("-2*z", Q.vars) and d.images["z"].is_zero()
    d2, _ = induced_lnd(kr, "x")
    assert d2.images["w"] == d2.ring.one()
    with pytest.raises(HypothesisError, match="not delta-invariant"):
        induced_lnd(quad, "y")


# -- properties ----------------------------------------------------------------


@lru_cache(maxsize=None)
def _corpus():
    return tuple(corpus_sessions())


@lru_cache(maxsize=None)
def _two_parameter_ring(i):
    S = _corpus()[i][1]
    R = S.ring
    big = R.vars + ("_s", "_t")
    return big, Ideal(big, [g.embed(big) for g in R.relations.gens]), exp_action(S.delta, "_s"), \
        exp_action(S.delta, "_t")


def corpus_elements(draw):
    i = draw(st.integers(0, len(_corpus()) - 1))
    R = _corpus()[i][1].ring
    return i, draw(polys(R.vars, max_deg=2, max_terms=3, coeff=3))


@settings(max_examples=1000, deadline=None)
@given(st.data())
def test_leibniz_for_apply(data):
    i, p = corpus_elements(data.draw)
    q = data.draw(polys(_corpus()[i][1].ring.vars, max_deg=2, max_terms=3, coeff=3))
    S = _corpus()[i][1]
    d, R = S.delta, S.ring
    assert R.eq(d(p * q), p * d(q) + q * d(p))
    assert R.eq(d(p + q), d(p) + d(q))


@settings(max_examples=1000, deadline=None)
@given(st.data())
def test_exp_group_law(data):
    i, b = corpus_elements(data.draw)
    big, rel, phi_s, phi_t = _two_parameter_ring(i)
    R = _corpus()[i][1].ring
    # exp(s d) applied to the coefficients of exp(t d)(b)
    inner = phi_t(b).embed(big)
    outer = inner.subs({v: phi_s.images[v].embed(big) for v in R.vars}, big)
    S_, T_ = Polynomial.var(big, "_s"), Polynomial.var(big, "_t")
    joint = phi_t(b).embed(big).subs({"_t": S_ + T_}, big)
    assert rel.reduce(outer - joint).is_zero()
    # exp(0 d) = id
    at_zero = phi_t(b).embed(big).subs({"_t": Polynomial.zero(big)}, big)
    assert rel.reduce(at_zero - b.embed(big)).is_zero()


@pytest.mark.parametrize("name", [n for n, _ in corpus_sessions()])
def test_kernel_generators_fixed_by_exp(name):
    S = dict(_corpus())[name]
    phi = exp_action(S.delta, "_t")
    for g in S.a_gens:
        assert phi.target.eq(phi(g), g.embed(phi.target.vars))
    for g in kernel_search(S.delta, 2).generators:
        assert phi.target.eq(phi(g), g.embed(phi.target.vars))
