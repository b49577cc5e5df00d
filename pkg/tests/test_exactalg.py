from functools import reduce
from itertools import combinations

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import invariant_factors

from drwitt.errors import NotAFrobeniusLift, NotDivisible
from drwitt.exactalg.linalg import (
    Lattice,
    QuotientGroup,
    identity,
    integer_kernel,
    lattice_quotient,
    matmul,
    matvec,
    smith_divisors,
    snf,
    solve_integer,
)
from drwitt.exactalg.poly import (
    FrobeniusLift,
    LaurentPolynomial,
    PolyRing,
    exact_div_p,
    frobenius_substitute,
    is_prime,
    valuation,
)

small_matrix = st.integers(1, 4).flatmap(
    lambda n: st.integers(1, 4).flatmap(
        lambda m: st.lists(st.lists(st.integers(-12, 12), min_size=m, max_size=m), min_size=n, max_size=n)))


def sympy_divisors(m):
    """Nonzero invariant factors via sympy, the independent oracle."""
    facs = invariant_factors(sympy.Matrix(m), domain=sympy.ZZ)
    return sorted(abs(int(f)) for f in facs if f != 0)


# -- Smith normal form ------------------------------------------------------


def test_smith_examples():
    assert tuple(smith_divisors([[2, 0], [0, 3]])) == (1, 6)
    assert tuple(smith_divisors([[2, 0], [0, 3]]).reported) == (6,)
    assert tuple(smith_divisors(identity(4))) == (1, 1, 1, 1)
    assert tuple(smith_divisors([[3]])) == (3,)


@settings(max_examples=150, deadline=None)
@given(small_matrix)
def test_smith_matches_sympy(m):
    ours = sorted(x for x in smith_divisors(m) if x != 0)
    assert ours == sympy_divisors(m)


@settings(max_examples=100, deadline=None)
@given(small_matrix)
def test_snf_decomposition(m):
    diag, u, v = snf(m)
    cols = len(m[0])
    prod = matmul(matmul(u, m), v)
    expect = [[diag[i] if i == j and i < len(diag) else 0 for j in range(cols)] for i in range(len(m))]
    assert prod == expect
    nz = [x for x in diag if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


# -- lattices ---------------------------------------------------------------


def test_lattice_quotients():
    z2 = Lattice.standard(2)
    assert tuple(lattice_quotient(z2, z2.scaled(2))) == (2, 2)
    assert tuple(lattice_quotient(z2, Lattice.from_generators(2, [[1, 0], [0, 8]])).reported) == (8,)
    assert tuple(lattice_quotient(z2, Lattice.from_generators(2, [[2, 0], [1, 3]])).reported) == (6,)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=3, max_size=5))
def test_quotient_order_is_gcd_of_minors(gens):
    sub = Lattice.from_generators(3, gens)
    if sub.rank < 3:
        return
    m = sympy.Matrix(gens)
    minors = [abs(m.extract(list(rows), [0, 1, 2]).det()) for rows in combinations(range(len(gens)), 3)]
    index = int(reduce(sympy.gcd, minors))
    assert reduce(lambda a, b: a * b, lattice_quotient(Lattice.standard(3), sub), 1) == index


@settings(max_examples=80, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=2, max_size=2), min_size=1, max_size=4),
       st.lists(st.integers(-6, 6), min_size=2, max_size=2))
def test_lattice_membership_and_intersection(gens, v):
    lat = Lattice.from_generators(2, gens)
    for g in gens:
        assert lat.coordinates(g) is not None
    both = lat.intersect(Lattice.standard(2, 3))
    assert lat.contains_lattice(both)
    assert Lattice.standard(2, 3).contains_lattice(both)
    if lat.coordinates(v) is not None and all(x % 3 == 0 for x in v):
        assert both.coordinates(v) is not None


def test_quotient_group_reduces_to_zero_on_relations():
    q = QuotientGroup(Lattice.standard(2), Lattice.from_generators(2, [[2, 0], [0, 4]]))
    assert not q.is_zero
    assert q.coords([2, 4]) == q.coords([0, 0])
    assert q.coords([1, 0]) != q.coords([0, 0])


def test_solve_and_kernel():
    assert solve_integer([[2, 0], [0, 3]], [4, 9]) == [2, 3]
    assert solve_integer([[2, 0], [0, 3]], [3, 9]) is None
    ker = integer_kernel([[1, 2, 3]])
    assert len(ker) == 2
    assert all(matvec([[1, 2, 3]], k) == [0] for k in ker)


# -- polynomials ------------------------------------------------------------

R2 = PolyRing(("x", "y"), (False, False))
L1 = PolyRing(("x",), (True,))

terms = st.dictionaries(st.tuples(st.integers(0, 4), st.integers(0, 4)), st.integers(-9, 9), max_size=5)


def to_sympy(f):
    x, y = sympy.symbols("x y")
    return sympy.expand(sum(c * x ** e[0] * y ** e[1] for e, c in f.terms.items()))


@settings(max_examples=150, deadline=None)
@given(terms, terms)
def test_polynomial_ring_ops_match_sympy(a, b):
    f, g = LaurentPolynomial(R2, a), LaurentPolynomial(R2, b)
    assert to_sympy(f * g) == sympy.expand(to_sympy(f) * to_sympy(g))
    assert to_sympy(f + g) == sympy.expand(to_sympy(f) + to_sympy(g))
    assert to_sympy(f - g) == sympy.expand(to_sympy(f) - to_sympy(g))


@settings(max_examples=60, deadline=None)
@given(terms, st.integers(0, 4))
def test_polynomial_power_matches_sympy(a, n):
    f = LaurentPolynomial(R2, a)
    assert to_sympy(f ** n) == sympy.expand(to_sympy(f) ** n)


@settings(max_examples=60, deadline=None)
@given(terms, st.integers(0, 6), st.sampled_from([2, 3]))
def test_power_mod_p(a, n, p):
    f = LaurentPolynomial(R2.with_modulus(p), a)
    slow = R2.with_modulus(p).one()
    for _ in range(n):
        slow = slow * f
    assert f ** n == slow


def test_laurent_inverse():
    x = L1.gen(0)
    assert (x ** -3) * (x ** 3) == L1.one()
    with pytest.raises(ValueError):
        (x + 1) ** -1


def test_exact_div_p():
    x, y = R2.gens()
    assert exact_div_p(x * 4 + 8, 2, 2) == x + 2
    with pytest.raises(NotDivisible):
        exact_div_p(x, 1, 2)
    phi = FrobeniusLift(R2, 2, (x ** 2 + x * x * 2, y ** 2))
    assert phi.delta(0) == x ** 2


def test_frobenius_substitute_examples():
    x, y = R2.gens()
    assert frobenius_substitute(x + y, FrobeniusLift(R2, 2)) == x ** 2 + y ** 2
    assert frobenius_substitute(x * y ** 2, FrobeniusLift(R2, 3)) == x ** 3 * y ** 6
    a1 = PolyRing(("x",), (False,))
    t = a1.gen(0)
    img = frobenius_substitute(t, FrobeniusLift(a1, 2, (t ** 2 + t * 2,)))
    assert img == t ** 2 + t * 2
    assert img.reduce(2) == (t ** 2).reduce(2)


def test_frobenius_lift_rejects_non_lifts():
    t = PolyRing(("x",), (False,)).gen(0)
    with pytest.raises(NotAFrobeniusLift):
        FrobeniusLift(t.ring, 2, (t ** 2 + t,))


@settings(max_examples=80, deadline=None)
@given(terms, terms, st.sampled_from([2, 3]))
def test_frobenius_substitute_is_ring_map(a, b, p):
    f, g = LaurentPolynomial(R2, a), LaurentPolynomial(R2, b)
    x, y = R2.gens()
    phi = FrobeniusLift(R2, p, (x ** p + x * p, y ** p))
    assert frobenius_substitute(f * g, phi) == frobenius_substitute(f, phi) * frobenius_substitute(g, phi)
    assert frobenius_substitute(f + g, phi) == frobenius_substitute(f, phi) + frobenius_substitute(g, phi)
    # a lift of Frobenius: phi(f) = f^p mod p
    assert frobenius_substitute(f, phi).reduce(p) == (f ** p).reduce(p)


def test_valuation_and_primes():
    assert valuation(24, 2) == 3
    assert valuation(0, 3) == float("inf")
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
