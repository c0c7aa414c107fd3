import pytest
from hypothesis import strategies as st

from galab.cli import Session, corpus_dir, parse_spec
from galab.lnd import Derivation
from galab.poly import Polynomial
from galab.ring import make_ring

QUAD_A = ["x", "x^2*y + z^2"]
KR_A = ["x", "t", "y - 2*z*w + x^2*w^2", "z - x^2*w"]


@pytest.fixture
def quad():
    B = make_ring("xyz")
    return Derivation(B, {"x": "0", "y": "-2*z", "z": "x^2"})


@pytest.fixture
def kr():
    B = make_ring("xyztw", ["x^2*y - x - z^2 - t^3"])
    return Derivation(B, {"x": "0", "y": "2*z", "z": "x^2", "t": "0", "w": "1"})


def corpus_sessions():
    """Every corpus spec whose derivation is locally nilpotent."""
    out = []
    for path in sorted(corpus_dir().glob("*.spec")):
        if path.stem in ("not_lnd", "inconsistent"):
            continue
        out.append((path.stem, Session(parse_spec(path.read_text()))))
    return out


def polys(vars=("x", "y", "z"), max_deg=3, max_terms=5, coeff=5):
    exps = st.tuples(*[st.integers(0, max_deg) for _ in vars]).filter(lambda e: sum(e) <= max_deg)
    terms = st.dictionaries(exps, st.integers(-coeff, coeff), max_size=max_terms)
    return terms.map(lambda d: Polynomial(vars, d))


def to_sympy(p: Polynomial):
    import sympy

    syms = sympy.symbols(p.vars)
    syms = syms if isinstance(syms, tuple) else (syms,)
    out = sympy.Integer(0)
    for m, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, m):
            term *= s**e
        out += term
    return sympy.expand(out)


def from_sympy(expr, vars) -> Polynomial:
    import sympy

    P = sympy.Poly(sympy.expand(expr), *sympy.symbols(vars))
    from fractions import Fraction

    terms = {m: Fraction(int(c.p), int(c.q)) for m, c in P.terms()} if not P.is_zero else {}
    return Polynomial(vars, terms)


# -- acceptance summary: one line per criterion ----------------------------------

_criteria: dict = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        key = report.nodeid.split("::")[-1]
        _criteria[key] = (report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_criteria, key=lambda k: int(k.split("_")[2])):
        outcome, duration = _criteria[key]
        label = key[len("test_criterion_"):].replace("_", " ", 1).replace("_", " ")
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark}  criterion {label}  ({duration:.2f}s)")
