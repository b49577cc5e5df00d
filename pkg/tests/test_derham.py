import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drwitt.derham import (
    DifferentialForm,
    bracket_scalar,
    d,
    dfunc,
    divided_frobenius,
    pd_bracket,
    pd_collapse_check,
    random_form,
    undivided_frobenius,
    wedge,
)
from drwitt.errors import ParseError
from drwitt.exactalg.poly import FrobeniusLift, PolyRing
from drwitt.parsing import parse_form, parse_polynomial
from drwitt.suites import derham_identity_suite, pd_relation_suite

R = PolyRing(("x", "y"), (False, False))
x, y = R.gens()
dx, dy = DifferentialForm.dx(R, 0), DifferentialForm.dx(R, 1)
fn = DifferentialForm.function


def test_differential_examples():
    assert d(fn(x ** 2)) == fn(x * 2) * dx
    assert d(fn(x) * dy) == dx * dy
    assert d(dx).is_zero()


def test_wedge_examples():
    assert (dx * dx).is_zero()
    assert dx * dy == -(dy * dx)
    assert wedge(fn(x) * dx, fn(y) * dy) == fn(x * y) * dx * dy


def test_frobenius_examples():
    for p in (2, 3):
        phi = FrobeniusLift(R, p)
        assert divided_frobenius(dx, phi) == fn(x ** (p - 1)) * dx
        assert divided_frobenius(fn(x), phi) == fn(x ** p)
        assert undivided_frobenius(dx, phi) == fn(x ** (p - 1) * p) * dx
    phi2 = FrobeniusLift(R, 2)
    assert divided_frobenius(fn(x) * dy, phi2) == fn(x ** 2 * y) * dy
    for p in (2, 3):
        phi = FrobeniusLift(R, p)
        lhs = undivided_frobenius(fn(x) * dx * dy, phi)
        assert lhs == fn(x ** (2 * p - 1) * y ** (p - 1) * p ** 2) * dx * dy


def test_frobenius_with_custom_lift():
    phi = FrobeniusLift(R, 3, (x ** 3 + x * 3, y ** 3))
    # F(dx) = x^2 dx + d(delta(x)) with delta(x) = x
    assert divided_frobenius(dx, phi) == fn(x ** 2) * dx + dx


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(0, 10 ** 6), st.integers(0, 1))
def test_frobenius_identities(p, seed, custom):
    rng = random.Random(seed)
    phi = FrobeniusLift(R, p, (x ** p + x * p, y ** p)) if custom else FrobeniusLift(R, p)
    for deg in (0, 1, 2):
        w = random_form(R, deg, rng)
        # dF = p F d
        assert d(divided_frobenius(w, phi)) == divided_frobenius(d(w), phi) * p
        # p^n F = phi^*
        assert divided_frobenius(w, phi) * p ** deg == undivided_frobenius(w, phi)
        # d^2 = 0
        assert d(d(w)).is_zero()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_leibniz(seed):
    rng = random.Random(seed)
    a = random_form(R, rng.randint(0, 1), rng)
    b = random_form(R, rng.randint(0, 1), rng)
    sign = -1 if a.degree % 2 else 1
    assert d(a * b) == d(a) * b + (a * d(b)) * sign


def test_dfunc_on_laurent():
    g = PolyRing(("x",), (True,))
    t = g.gen(0)
    assert dfunc(t ** -1) == fn(-(t ** -2)) * DifferentialForm.dx(g, 0)


def test_pd_bracket_examples():
    a1 = PolyRing(("x",), (False,))
    t = a1.gen(0)
    # (2x)^[2] = 2x^2 in Z/4
    assert pd_bracket(t, 2, 2, 2) == (t ** 2 * 2).reduce(4)
    assert bracket_scalar(3, 3, 9) == 0  # 27/6 = 9/2 vanishes mod 9
    rep = pd_collapse_check(2, 2, [t])
    assert rep["passed"]
    rep = pd_collapse_check(3, 2, [t ** 2], nmax=3)
    assert rep["relations_checked"] == 3


@pytest.mark.parametrize("p", [2, 3])
def test_suites(p):
    assert derham_identity_suite(p, samples=30, seed=2)["passed"]
    assert pd_relation_suite(p, 2, samples=5)["passed"]


def test_parse_forms():
    assert parse_form("3*x^2*y - 2", R) == fn(x ** 2 * y * 3 - 2)
    assert parse_form("x*dx*dy", R) == fn(x) * dx * dy
    g = PolyRing(("x",), (True,))
    assert parse_polynomial("x^-2", g) == g.gen(0) ** -2
    with pytest.raises(ParseError) as err:
        parse_form("x + * y", R)
    assert err.value.position == 4
    with pytest.raises(ParseError):
        parse_form("z", R)
    with pytest.raises(ParseError):
        parse_polynomial("dx", R)
