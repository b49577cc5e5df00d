from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drwitt import crystal as C
from drwitt.complexes import ExplicitComplex
from drwitt.dieudonne import (
    AXIOMS,
    Saturation,
    Tower,
    alpha_F,
    eta_p,
    eta_p_power,
    mod_cohomology,
    tower_axioms_check,
    tower_cohomology,
    tower_weights,
)
from drwitt.errors import AxiomViolation, ImageOutsideEta, NotInjective, NotStabilized
from drwitt.exactalg.linalg import Lattice, lattice_quotient

W0 = (Fraction(0),)


def two_term(p, a):
    """Z --a--> Z in degrees 0, 1, weight 0, F = identity."""
    return ExplicitComplex(p, {(0, W0): 1, (1, W0): 1}, d={(0, W0): [[a]]})


def members(lat, bound=30):
    return {v for v in range(-bound, bound + 1) if lat.coordinates([v]) is not None}


# -- decalage -----------------------------------------------------------------


def test_decalage_of_multiplication_by_p():
    for p in (2, 3):
        eta = eta_p(two_term(p, p), W0)
        assert members(eta[0]) == set(range(-30, 31))
        assert members(eta[1]) == {v for v in range(-30, 31) if v % p == 0}
        # H^1 of C is Z/p, H^1 of the decalage vanishes: d(Z) = pZ
        h1 = lattice_quotient(eta[1], eta[0].image([[p]], 1))
        assert not h1.reported


def test_decalage_of_zero_map():
    eta = eta_p(two_term(3, 0), W0)
    assert members(eta[0]) == set(range(-30, 31))
    assert members(eta[1]) == {v for v in range(-30, 31) if v % 3 == 0}


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(-40, 40))
def test_decalage_degree0_oracle(p, a):
    eta = eta_p(two_term(p, a), W0)
    expect = {v for v in range(-30, 31) if (a * v) % p == 0}
    assert members(eta[0]) == expect


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3]), st.lists(st.integers(-27, 27), min_size=4, max_size=4), st.integers(0, 3))
def test_closed_form_matches_iteration(p, entries, k):
    dm = [entries[:2], entries[2:]]
    cx = ExplicitComplex(p, {(0, W0): 2, (1, W0): 2}, d={(0, W0): dm})
    lats = None
    for _ in range(k):
        lats = eta_p(cx, W0, lats)
    for i in (0, 1):
        closed = eta_p_power(cx, i, W0, k)
        it = lats[i] if lats else Lattice.standard(2)
        assert closed.contains_lattice(it) and it.contains_lattice(closed)


def test_alpha_F_on_forms():
    p = 3
    cr = C.validate(C.trivial(C.a1_ring(), p))
    cx = C.CrystalComplex(cr)
    w = (Fraction(1),)
    # degree 0 is F itself: x -> x^p
    assert alpha_F(cx, 0, w, [1]) == [1]
    # degree 1: dx -> p x^(p-1) dx, in the decalage lattice of weight p
    assert alpha_F(cx, 1, w, [1], k=0) == [p]


def test_alpha_F_detects_bad_frobenius():
    # F = 1 on both terms of Z --1--> Z breaks dF = pFd
    cx = two_term(2, 1)
    with pytest.raises(ImageOutsideEta):
        alpha_F(cx, 0, W0, [1], k=0)


def test_non_injective_input_rejected():
    cx = ExplicitComplex(2, {(0, W0): 1}, f={(0, W0): [[0]]})
    with pytest.raises(NotInjective):
        Saturation(cx)


# -- saturation and tower -----------------------------------------------------


@pytest.mark.parametrize("p", [2, 3])
def test_saturation_of_integers(p):
    sat = Saturation(ExplicitComplex(p, {(0, W0): 1}))
    tw = Tower(sat, 3)
    for r in (1, 2, 3):
        assert tuple(tw.block(r, 0, W0).divisors) == (p ** r,)
    assert tower_axioms_check(tw, [W0], 3).passed


def test_stage_lattices_follow_frobenius():
    p = 2
    cr = C.validate(C.trivial(C.a1_ring(), p))
    sat = Saturation(C.CrystalComplex(cr))
    for k in range(3):
        assert sat.ambient((Fraction(1),), k) == (Fraction(p ** k),)


@pytest.mark.parametrize("p", [2, 3])
def test_level_one_is_classical_de_rham(p):
    cr = C.validate(C.trivial(C.a1_ring(), p))
    sat = Saturation(C.CrystalComplex(cr))
    tw = Tower(sat, 1)
    for u in tower_weights(sat, 0, p * p, 1):
        integral = u[0].denominator == 1
        assert tuple(tw.block(1, 0, u).divisors) == ((p,) if integral else ())
        assert tuple(tw.block(1, 1, u).divisors) == ((p,) if integral and u[0] >= 1 else ())


@pytest.mark.parametrize("p", [2, 3])
def test_degree0_levels_over_affine_line(p):
    """Weight a/p^s with p not dividing a carries Z/p^(r-s) in degree 0."""
    cr = C.validate(C.trivial(C.a1_ring(), p))
    sat = Saturation(C.CrystalComplex(cr))
    tw = Tower(sat, 2)
    for u in tower_weights(sat, 0, p, 2):
        a = u[0]
        s = 0
        while a.denominator != 1:
            a *= p
            s += 1
        for r in (1, 2):
            expect = () if s >= r else ((p ** (r - s),) if u[0] else (p ** r,))
            assert tuple(tw.block(r, 0, u).divisors) == expect


def test_empty_window():
    cr = C.validate(C.trivial(C.a1_ring(), 2))
    sat = Saturation(C.CrystalComplex(cr))
    assert tower_weights(sat, 3, 2, 1) == []


def test_not_stabilized_with_kmax_zero():
    cr = C.validate(C.trivial(C.a1_ring(), 2))
    tw = Tower(Saturation(C.CrystalComplex(cr), kmax=0), 2, kmax=0)
    with pytest.raises(NotStabilized):
        tw.block(1, 0, (Fraction(1),))


def test_axioms_and_fault():
    p = 2
    cr = C.validate(C.trivial(C.a1_ring(), p))
    sat = Saturation(C.CrystalComplex(cr))
    ws = tower_weights(sat, 0, p * p, 3)
    rep = tower_axioms_check(Tower(sat, 3), ws, 3)
    assert rep.passed and set(rep.counts) == set(AXIOMS)
    # RF = FR only means something from level 3 on
    assert all(rep.counts[a] > 0 for a in AXIOMS)
    with pytest.raises(AxiomViolation):
        tower_axioms_check(Tower(sat, 2, fault="verschiebung"), ws, 2)
    bad = tower_axioms_check(Tower(sat, 2, fault="verschiebung"), ws, 2, raise_on_failure=False)
    assert not bad.passed and bad.failures


def test_mod_cohomology_examples():
    cr = C.validate(C.trivial(C.a1_ring(), 2))
    cx = C.CrystalComplex(cr)
    # Z/4[x]: H^1 at x dx is coker(2) = Z/2, at x^3 dx is coker(4) = Z/4
    assert tuple(mod_cohomology(cx, 1, (Fraction(2),), 4)) == (2,)
    assert tuple(mod_cohomology(cx, 1, (Fraction(4),), 4)) == (4,)
    for p in (2, 3):
        cxp = C.CrystalComplex(C.validate(C.trivial(C.a1_ring(), p)))
        assert tuple(mod_cohomology(cxp, 0, W0, p ** 2)) == (p ** 2,)
    acyclic = ExplicitComplex(2, {(0, W0): 1, (1, W0): 1}, d={(0, W0): [[1]]})
    assert not mod_cohomology(acyclic, 0, W0, 8) and not mod_cohomology(acyclic, 1, W0, 8)


def test_tower_cohomology_affine_line():
    p = 2
    cr = C.validate(C.trivial(C.a1_ring(), p))
    tw = Tower(Saturation(C.CrystalComplex(cr)), 2)
    assert tuple(tower_cohomology(tw, 2, 0, W0)) == (4,)
    # H^1 at integer weight n: coker of n on Z/4
    assert tuple(tower_cohomology(tw, 2, 1, (Fraction(2),))) == (2,)
    assert tuple(tower_cohomology(tw, 2, 1, (Fraction(3),))) == ()
    assert tuple(tower_cohomology(tw, 2, 1, (Fraction(4),))) == (4,)
