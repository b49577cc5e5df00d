import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drwitt import crystal as C
from drwitt.derham import DifferentialForm, d
from drwitt.errors import (
    MismatchedBase,
    NotHorizontal,
    NotIntegrable,
    NotUnitRoot,
    ParseError,
    WindowOverflow,
)
from drwitt.exactalg.poly import FrobeniusLift, PolyRing
from drwitt.suites import crystal_identity_suite

fn = DifferentialForm.function


def test_trivial_and_kummer_validate():
    for p in (2, 3):
        C.validate(C.trivial(C.a1_ring(), p))
        C.validate(C.trivial(C.gm_ring(), p, rank=2))
        for c in (-2, -1, 0, 1, 2):
            cr = C.validate(C.kummer(c, p))
            assert tuple(cr.weights) == ((Fraction(c),),)


def test_kummer_frobenius_matrix():
    x = C.gm_ring().gen(0)
    assert C.kummer(1, 3).frobenius[0][0] == x ** 2
    assert C.kummer(-1, 2).frobenius[0][0] == x ** -1
    k0 = C.kummer(0, 5)
    assert k0.frobenius[0][0] == C.gm_ring().one() and k0.connection[0][0].is_zero()


def test_non_horizontal_example():
    with pytest.raises(NotHorizontal) as err:
        C.validate(C.non_horizontal_example(3))
    assert err.value.witness["lhs"] == "dx"
    assert err.value.witness["rhs"] == "3*x^2*dx"


def test_not_integrable():
    ring = PolyRing(("x", "y"), (False, False))
    zero = DifferentialForm.zero(ring)
    dx = DifferentialForm.dx(ring, 0)
    data = C.UnitRootCrystalData(FrobeniusLift(ring, 2), [[dx * fn(ring.gen(1)), zero], [zero, zero]],
                                 [[ring.one(), ring.zero()], [ring.zero(), ring.one()]])
    with pytest.raises(NotIntegrable):
        C.validate(data)


def test_not_unit_root():
    ring = C.a1_ring()
    data = C.UnitRootCrystalData(FrobeniusLift(ring, 3), [[DifferentialForm.zero(ring)]], [[ring.const(3)]])
    with pytest.raises(NotUnitRoot):
        C.validate(data)


def test_direct_sums():
    p = 3
    s = C.direct_sum(C.kummer(1, p), C.kummer(2, p))
    x = C.gm_ring().gen(0)
    assert s.rank == 2
    assert s.frobenius[0][0] == x ** (p - 1) and s.frobenius[1][1] == x ** (2 * (p - 1))
    assert s.frobenius[0][1].is_zero()
    C.validate(s)
    tt = C.direct_sum(C.trivial(C.a1_ring(), p), C.trivial(C.a1_ring(), p))
    assert tt.frobenius == C.trivial(C.a1_ring(), p, rank=2).frobenius
    with pytest.raises(MismatchedBase):
        C.direct_sum(C.kummer(1, 2), C.kummer(1, 3))


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(-3, 3), st.integers(-3, 3))
def test_direct_sum_of_valid_is_valid(p, a, b):
    C.validate(C.direct_sum(C.kummer(a, p), C.kummer(b, p)))


@pytest.mark.parametrize("c", [-2, -1, 1, 2])
def test_kummer_connection_on_monomials(c):
    cr = C.validate(C.kummer(c, 3))
    x = cr.ring.gen(0)
    dx = DifferentialForm.dx(cr.ring, 0)
    for n in range(-3, 4):
        (out,) = C.nabla(cr, (fn(x ** n),))
        assert out == fn(x ** (n - 1) * (n + c)) * dx


def test_divided_frobenius_of_sections():
    for p in (2, 3):
        cr = C.validate(C.trivial(C.a1_ring(), p))
        x = cr.ring.gen(0)
        dx = DifferentialForm.dx(cr.ring, 0)
        assert C.section_frobenius(cr, (dx,)) == (fn(x ** (p - 1)) * dx,)


def test_crystal_complex_trivial_is_de_rham():
    cr = C.validate(C.trivial(C.a1_ring(), 2))
    cx = C.CrystalComplex(cr)
    for w in range(0, 4):
        assert cx.rank(0, (Fraction(w),)) == 1
        assert cx.rank(1, (Fraction(w),)) == (1 if w >= 1 else 0)
        if w >= 1:
            # d(x^w) = w x^(w-1) dx
            assert cx.d_matrix(0, (Fraction(w),)) == [[w]]


def test_coefficient_complex_window():
    cr = C.validate(C.kummer(1, 2))
    with pytest.raises(WindowOverflow):
        C.coeff_complex(cr, -1, 2, strict=True)
    cc = C.coeff_complex(cr, -1, 2)
    assert cc.clipped
    cc4 = C.coeff_complex(cr, -1, 2, r=2)
    assert cc4.modulus == 4


def test_crystal_identity_suite():
    for p in (2, 3):
        crs = [C.trivial(C.gm_ring(), p), C.kummer(1, p), C.kummer(-2, p),
               C.direct_sum(C.trivial(C.a1_ring(), p), C.constant(-1, C.a1_ring(), p))]
        rep = crystal_identity_suite(crs, -p, p, semilinear_samples=5)
        assert rep["passed"], rep


def test_json_round_trip(tmp_path):
    data = C.direct_sum(C.kummer(1, 3), C.kummer(-1, 3))
    path = tmp_path / "k.json"
    path.write_text(json.dumps(C.to_dict(data)))
    back = C.load_crystal(path)
    assert back.connection == data.connection and back.frobenius == data.frobenius
    assert C.validate(back).weights == C.validate(data).weights


def test_json_errors():
    with pytest.raises(ParseError):
        C.from_dict({"p": 4})
    with pytest.raises(ParseError):
        C.from_dict({"variables": [{"name": "x"}]})
    with pytest.raises(ParseError):
        C.from_dict({"p": 2, "variables": [{"name": "x"}], "rank": 2, "frobenius": [["1"]]})
    bad = {"p": 2, "variables": [{"name": "x"}], "connection": [["dx"]], "frobenius": [["1"]]}
    with pytest.raises(NotHorizontal):
        C.validate(C.from_dict(bad))


def test_builtins():
    for name in ("fp", "a1-trivial", "gm-trivial", "gm-kummer:c=-1", "gm-kummer-sum:c=1,2",
                 "gm-a1-kummer:c=2", "a1-rank2-sum"):
        C.validate(C.builtin(name, 3))
    with pytest.raises(ParseError):
        C.builtin("gm-kummer:c=x", 3)
    with pytest.raises(ParseError):
        C.builtin("nope", 3)


def test_connection_squares_to_zero_on_two_variables():
    ring = PolyRing(("x", "y"), (True, False))
    cr = C.validate(C.kummer(2, 3, ring))
    x, y = ring.gens()
    s = (fn(x ** 2 * y ** 3),)
    assert C.nabla(cr, C.nabla(cr, s))[0].is_zero()
    assert d(d(s[0])).is_zero()
