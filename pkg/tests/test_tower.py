from dataclasses import replace

import pytest

from conftest import QUAD_A
from galab.errors import HypothesisError
from galab.ideal import Ideal
from galab.lnd import Derivation, find_local_slice
from galab.poly import parse
from galab.ring import Subalgebra, make_ring
from galab.tower import affine_modification, build_tower, residue_chain, residue_degrees, verify_tower

A_NAMES = ["x", "t"]


def quadric_tower(quad):
    sl = find_local_slice(quad, QUAD_A, f="x")
    return build_tower(quad.ring, quad, QUAD_A, sl, A_NAMES)


def test_example_tower(quad):
    T = quadric_tower(quad)
    assert T.nu == 1 and T.p == 2
    s = T.steps[0]
    N = s.names
    assert s.contraction.same(Ideal(N, [parse("x", N), parse("t - z^2", N)]))
    assert s.ell == 2 == T.p
    assert s.top_degree == 2
    # g-bar is t - z^2 up to sign
    assert s.g in (parse("t - z^2", N), parse("z^2 - t", N))
    assert s.y == quad.ring.var("y")
    assert s.delta_y == quad.ring.element("-2*z")
    assert T.mu == 2


def test_example_tower_verifies(quad):
    rep = verify_tower(quadric_tower(quad))
    assert rep.passed
    for name in ["y_order", "delta_relation", "delta_leading", "sum_ell", "B_nu_eq_B", "top_degree_screen"]:
        assert rep.by_name(name) and all(c.passed for c in rep.by_name(name))


def test_tampered_tower_fails_y_order(quad):
    T = quadric_tower(quad)
    bad = replace(T, steps=(replace(T.steps[0], ell=T.steps[0].ell - 1),))
    rep = verify_tower(bad)
    assert not rep.passed
    assert not rep.by_name("y_order")[0].passed
    assert not rep.by_name("sum_ell")[0].passed


def test_tower_rebuild_is_identical(quad):
    a, b = quadric_tower(quad), quadric_tower(quad)
    assert a.equations() == b.equations()
    assert [(s.g, s.ell, s.y, s.delta_y) for s in a.steps] == [(s.g, s.ell, s.y, s.delta_y) for s in b.steps]


def test_trivial_tower():
    B = make_ring("xz")
    d = Derivation(B, {"x": "0", "z": "x"})
    sl = find_local_slice(d, ["x"], f="x")
    # d = x * d/dz is reducible, so the irreducibility precondition is waived by hand
    with pytest.raises(HypothesisError):
        build_tower(B, d, ["x"], sl, ["x"])
    T = build_tower(B, d, ["x"], sl, ["x"], assume_irreducible=True)
    assert T.nu == 0
    rep = verify_tower(T)
    assert rep.passed and "vacuous" in rep.by_name("sum_ell")[0].detail
    assert residue_degrees(T) == []
    assert len(residue_chain(T)) == 1


def test_modification_tower_matches_quadric():
    B = make_ring(("x", "t", "Y", "Z"), ["x^2*Y - Z^2 + t"])
    d = Derivation(B, {"x": "0", "t": "0", "Y": "2*Z", "Z": "x^2"})
    sl = find_local_slice(d, ["x", "t"], f="x")
    T = build_tower(B, d, ["x", "t"], sl, ["x", "t"])
    assert T.nu == 1 and T.steps[0].ell == 2
    assert residue_degrees(T) == [2]
    assert verify_tower(T).passed


def test_residue_chain(quad):
    chain = residue_chain(quadric_tower(quad))
    assert chain[0].index == -1
    step = chain[1]
    assert step.degree == 2
    mp = step.minimal_polynomial
    # re-substituting z into its minimal polynomial gives zero in B0/I0
    N = step.ring.vars
    back = mp.poly.subs({mp.var: parse("z", N), "x": parse("x", N), "t": parse("t", N)}, N)
    assert step.ring.relations.contains(back)


def test_non_unit_beta_is_reported():
    # d(z) = x^2 * (1 + t): beta = 1 + t is not a unit
    B = make_ring(("x", "t", "z"))
    d = Derivation(B, {"x": "0", "t": "0", "z": "x^2 + x^2*t"})
    sl = find_local_slice(d, ["x", "t"], f="x")
    with pytest.raises(HypothesisError) as e:
        build_tower(B, d, ["x", "t"], sl, ["x", "t"])
    assert e.value.clause == "beta-unit"


# -- affine modifications -----------------------------------------------------


def test_modification_recovers_example_ring():
    R = make_ring(("x", "t", "z"))
    M = affine_modification(R, "x^2", ["x^2", "t - z^2"])
    assert len(M.new_vars) == 1
    u = M.new_vars[0]
    V = M.result.vars
    assert M.result.relations.same(Ideal(V, [parse(f"x^2*{u} - t + z^2", V)]))
    # the result is isomorphic to Q[x,y,z] via t -> x^2*y + z^2, u -> y
    B = make_ring("xyz")
    S = Subalgebra(B, ["x", "x^2*y + z^2", "z", "y"], list(V))
    assert all(S.contains(B.var(v)) for v in B.vars)
    assert S.relations().same(M.result.relations)


def test_modification_by_principal_center_is_trivial():
    R = make_ring(("x", "t", "z"))
    M = affine_modification(R, "x", ["x"])
    assert M.new_vars == () and M.result.vars == R.vars


def test_blow_up_chart():
    R = make_ring("xy")
    M = affine_modification(R, "x", ["x", "y"])
    V = M.result.vars
    u = M.new_vars[0]
    assert M.result.relations.same(Ideal(V, [parse(f"x*{u} - y", V)]))


def test_modification_needs_f_in_center():
    with pytest.raises(HypothesisError):
        affine_modification(make_ring("xy"), "x", ["y"])


def test_modification_carries_the_derivation():
    R = make_ring(("x", "t", "z"))
    d = Derivation(R, {"x": "0", "t": "0", "z": "x^2"})
    M = affine_modification(R, "x^2", ["x^2", "t - z^2"], derivation=d)
    u = M.new_vars[0]
    assert M.derivation.images[u] == parse("-2*z", M.result.vars)
