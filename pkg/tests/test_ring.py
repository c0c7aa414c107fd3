import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import KR_A, polys
from galab.errors import DomainError, NotDivisibleError, UnitIdealError
from galab.ideal import Ideal
from galab.poly import Polynomial, parse
from galab.ring import (
    Subalgebra,
    divide_exact,
    f_order,
    in_subalgebra,
    make_ring,
    quotient_by,
)


def test_free_ring():
    B = make_ring("xyz")
    assert B.is_free() and B.vars == ("x", "y", "z")


def test_relation_ring_normal_forms():
    B = make_ring("xyztw", ["x^2*y - x - z^2 - t^3"])
    assert B.is_zero(B.element("x^2*y - x - z^2 - t^3"))
    assert not B.is_free()


def test_unit_ideal_rejected():
    with pytest.raises(UnitIdealError):
        make_ring("x", ["x", "x - 1"])


def test_quotient_by_variable():
    B = make_ring("xyz")
    Q, pi = quotient_by(B, "x")
    assert Q.vars == ("y", "z") and Q.is_free()
    assert pi(B.element("x^2*y + z^2")) == parse("z^2", Q.vars)


def test_quotient_of_relation_ring():
    B = make_ring("xyztw", ["x^2*y - x - z^2 - t^3"])
    Q, pi = quotient_by(B, "x")
    assert "x" not in Q.vars
    assert Q.relations.same(Ideal(Q.vars, [parse("z^2 + t^3", Q.vars)]))
    with pytest.raises(UnitIdealError):
        quotient_by(B, "1")


def test_subalgebra_membership():
    B = make_ring("xyz")
    m = in_subalgebra(B, "x^2*y + z^2", ["x", "x^2*y + z^2"], ["T1", "T2"])
    assert m.member and m.witness == parse("T2", ("T1", "T2"))
    assert not in_subalgebra(make_ring("xy"), "y", ["x"]).member


def test_subalgebra_membership_inverts_triangular_substitution():
    B = make_ring("xyztw", ["x^2*y - x - z^2 - t^3"])
    names = ["x", "t", "u", "v", "w"]
    S = Subalgebra(B, KR_A + ["w"], names)
    m = S.membership(B.var("y"))
    assert m.member
    N = tuple(names)
    expected = parse("u + 2*(v + x^2*w)*w - x^2*w^2", N)
    assert m.witness.embed(N) == expected
    assert B.eq(S.lift(m.witness), B.var("y"))


def test_f_order_examples():
    B = make_ring("xyz")
    assert f_order(B, "x^2*y", "x") == 2
    assert f_order(make_ring(("x", "z", "t")), "z^2 - t", "x") == 0
    assert f_order(B, "x^3", "x") == 3
    with pytest.raises(DomainError):
        f_order(B, "0", "x")


def test_divide_exact_examples():
    B = make_ring("xyz")
    assert divide_exact(B, "x^2*y", "x", 2) == B.element("y")
    assert divide_exact(B, "x^3 - x^2", "x", 2) == B.element("x - 1")
    with pytest.raises(NotDivisibleError):
        divide_exact(B, "z^2", "x", 1)


def test_divide_exact_in_a_quotient():
    # x^2*y = z^2 - t in the modified ring: z^2 - t is divisible by x^2 there
    R = make_ring(("x", "t", "z", "y"), ["x^2*y - z^2 + t"])
    assert R.eq(divide_exact(R, "z^2 - t", "x", 2), R.var("y"))
    assert f_order(R, "z^2 - t", "x") == 2


V = ("x", "y", "z")
small = polys(max_deg=2, max_terms=3, coeff=4).filter(lambda p: not p.is_zero())


@settings(max_examples=1000, deadline=None)
@given(small, small, st.sampled_from(["x", "y", "x + z", "x*y - 1"]))
def test_f_order_is_additive(a, b, f):
    B = make_ring(V)
    fp = B.element(f)
    if B.is_unit(fp):
        return
    assert f_order(B, a * b, fp) == f_order(B, a, fp) + f_order(B, b, fp)


@settings(max_examples=1000, deadline=None)
@given(polys(max_deg=3, max_terms=4), st.sampled_from(["x", "y - z", "x^2", "x*y + 1"]), st.integers(0, 2))
def test_divide_exact_round_trip(q, f, ell):
    B = make_ring(V)
    fp = B.element(f)
    b = fp**ell * q
    assert divide_exact(B, b, fp, ell) == q


@settings(max_examples=200, deadline=None)
@given(polys(("x", "t", "z", "y"), max_deg=2, max_terms=3), st.integers(0, 2))
def test_divide_exact_round_trip_modulo_relations(q, ell):
    R = make_ring(("x", "t", "z", "y"), ["x^2*y - z^2 + t"])
    f = R.var("x")
    q = R.nf(q)
    got = divide_exact(R, R.nf(f**ell * q), f, ell)
    assert R.eq(got, q)


@settings(max_examples=200, deadline=None)
@given(polys(max_deg=2, max_terms=3), polys(max_deg=2, max_terms=3))
def test_subalgebra_contains_its_products(a, b):
    B = make_ring("xyz")
    gens = [B.element("x"), B.element("x^2*y + z^2")]
    S = Subalgebra(B, gens, ["s1", "s2"])
    ap = a.subs({"x": gens[0], "y": gens[1], "z": Polynomial.zero(V)}, V)
    bp = b.subs({"x": gens[0], "y": gens[1], "z": Polynomial.zero(V)}, V)
    m = S.membership(ap * bp)
    assert m.member and B.eq(S.lift(m.witness), ap * bp)
