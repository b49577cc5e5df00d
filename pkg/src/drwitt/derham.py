"""Differential forms on (Laurent) polynomial lifts and the divided Frobenius."""

from __future__ import annotations

import random
from typing import Iterable

from .errors import MismatchedRing, RelationViolated, TorsionCoefficients
from .exactalg.poly import FrobeniusLift, LaurentPolynomial, PolyRing, frobenius_substitute


def _merge_sign(i: tuple, j: tuple):
    """Sign and sorted index tuple of dx_I ^ dx_J, or (0, None) if they overlap."""
    if set(i) & set(j):
        return 0, None
    seq = list(i) + list(j)
    inversions = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return (-1) ** inversions, tuple(sorted(seq))


class DifferentialForm:
    """Finite sum of terms c * x^a dx_I with I strictly increasing."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms=None):
        self.ring = ring
        m = ring.modulus
        out: dict = {}
        for (e, idx), c in (terms or {}).items():
            idx = tuple(idx)
            if list(idx) != sorted(set(idx)):
                raise ValueError(f"index tuple {idx} must be strictly increasing")
            key = (tuple(e), idx)
            out[key] = out.get(key, 0) + c
        if m is not None:
            out = {k: c % m for k, c in out.items() if c % m}
        else:
            out = {k: c for k, c in out.items() if c}
        for (e, _), _c in out.items():
            for k, (x, lf) in enumerate(zip(e, ring.laurent)):
                if x < 0 and not lf:
                    raise ValueError(f"negative exponent on polynomial variable {ring.variables[k]}")
        self.terms = out

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, ring):
        return cls(ring, {})

    @classmethod
    def function(cls, f: LaurentPolynomial) -> "DifferentialForm":
        return cls(f.ring, {(e, ()): c for e, c in f.terms.items()})

    @classmethod
    def dx(cls, ring: PolyRing, i) -> "DifferentialForm":
        if isinstance(i, str):
            i = ring.index(i)
        return cls(ring, {((0,) * ring.nvars, (i,)): 1})

    @classmethod
    def monomial(cls, ring, exponent, indices, coeff=1):
        return cls(ring, {(tuple(exponent), tuple(indices)): coeff})

    # -- protocol ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, LaurentPolynomial):
            other = DifferentialForm.function(other)
        if isinstance(other, int):
            other = DifferentialForm.function(self.ring.const(other))
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __repr__(self):
        return f"DifferentialForm({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring.variables
        parts = []
        for (e, idx), c in sorted(self.terms.items(), key=lambda kv: (len(kv[0][1]), kv[0])):
            mono = [v if x == 1 else f"{v}^{x}" for v, x in zip(names, e) if x]
            mono += ["d" + names[i] for i in idx]
            body = "*".join(mono)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    @property
    def degrees(self) -> set:
        return {len(idx) for _, idx in self.terms}

    @property
    def degree(self) -> int:
        ds = self.degrees
        if not ds:
            return 0
        if len(ds) > 1:
            raise ValueError("form is not homogeneous in degree")
        return next(iter(ds))

    def multiweights(self) -> set:
        """Multiweights a + e_I of the terms x^a dx_I."""
        out = set()
        for e, idx in self.terms:
            w = list(e)
            for i in idx:
                w[i] += 1
            out.add(tuple(w))
        return out

    def weights(self) -> set:
        return {sum(w) for w in self.multiweights()}

    def component(self, degree: int) -> "DifferentialForm":
        return DifferentialForm(self.ring, {k: c for k, c in self.terms.items() if len(k[1]) == degree})

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "DifferentialForm":
        if isinstance(other, DifferentialForm):
            if other.ring != self.ring:
                raise MismatchedRing("forms live in different rings")
            return other
        if isinstance(other, LaurentPolynomial):
            if other.ring != self.ring:
                raise MismatchedRing("form and function live in different rings")
            return DifferentialForm.function(other)
        if isinstance(other, int):
            return DifferentialForm.function(self.ring.const(other))
        raise TypeError(f"cannot combine a form with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return DifferentialForm(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return DifferentialForm(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return DifferentialForm(self.ring, {k: c * other for k, c in self.terms.items()})
        return wedge(self, self._coerce(other))

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return wedge(self._coerce(other), self)

    def reduce(self, modulus) -> "DifferentialForm":
        return DifferentialForm(self.ring.with_modulus(modulus), self.terms)

    def lift(self) -> "DifferentialForm":
        return DifferentialForm(self.ring.exact(), self.terms)

    def coefficient(self, exponent, indices) -> int:
        return self.terms.get((tuple(exponent), tuple(indices)), 0)

    def function_part(self) -> LaurentPolynomial:
        return LaurentPolynomial(self.ring, {e: c for (e, idx), c in self.terms.items() if not idx})

    def d(self) -> "DifferentialForm":
        return d(self)


def wedge(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    if a.ring != b.ring:
        raise MismatchedRing("forms live in different rings")
    out: dict = {}
    for (e1, i1), c1 in a.terms.items():
        for (e2, i2), c2 in b.terms.items():
            s, idx = _merge_sign(i1, i2)
            if not s:
                continue
            key = (tuple(x + y for x, y in zip(e1, e2)), idx)
            out[key] = out.get(key, 0) + s * c1 * c2
    return DifferentialForm(a.ring, out)


def d(form: DifferentialForm) -> DifferentialForm:
    """Exterior derivative: d(a dx_I) = da ^ dx_I."""
    out: dict = {}
    for (e, idx), c in form.terms.items():
        for j, k in enumerate(e):
            if not k or j in idx:
                continue
            e2 = list(e)
            e2[j] -= 1
            s, new = _merge_sign((j,), idx)
            key = (tuple(e2), new)
            out[key] = out.get(key, 0) + s * k * c
    return DifferentialForm(form.ring, out)


def dfunc(f: LaurentPolynomial) -> DifferentialForm:
    return d(DifferentialForm.function(f))


# ---------------------------------------------------------------------------
# Frobenius


def _check_exact(form: DifferentialForm, phi: FrobeniusLift):
    if form.ring.modulus is not None:
        raise TorsionCoefficients("the divided Frobenius is computed on the torsion-free lift",
                                  modulus=form.ring.modulus)
    if form.ring != phi.ring:
        raise MismatchedRing("form and Frobenius lift live on different rings")


def frobenius_of_dx(phi: FrobeniusLift, i: int) -> DifferentialForm:
    """F(dx_i) = x_i^(p-1) dx_i + d(delta(x_i))."""
    ring = phi.ring
    x = ring.gen(i)
    return DifferentialForm.function(x ** (phi.p - 1)) * DifferentialForm.dx(ring, i) + dfunc(phi.delta(i))


def divided_frobenius(form: DifferentialForm, phi: FrobeniusLift) -> DifferentialForm:
    """The graded ring endomorphism F extending phi with F(dx) as above."""
    _check_exact(form, phi)
    ring = form.ring
    fdx = [frobenius_of_dx(phi, i) for i in range(ring.nvars)]
    out = DifferentialForm.zero(ring)
    for (e, idx), c in form.terms.items():
        term = DifferentialForm.function(frobenius_substitute(ring.monomial(e, c), phi))
        for i in idx:
            term = term * fdx[i]
        out = out + term
    return out


def undivided_frobenius(form: DifferentialForm, phi: FrobeniusLift) -> DifferentialForm:
    """Functorial pullback phi^*: a dx_I -> phi(a) d phi(x_i1) ^ ... ."""
    _check_exact(form, phi)
    ring = form.ring
    dphi = [dfunc(img) for img in phi.images]
    out = DifferentialForm.zero(ring)
    for (e, idx), c in form.terms.items():
        term = DifferentialForm.function(frobenius_substitute(ring.monomial(e, c), phi))
        for i in idx:
            term = term * dphi[i]
        out = out + term
    return out


# ---------------------------------------------------------------------------
# PD collapse for the ideal (p)


def bracket_scalar(n: int, p: int, modulus: int) -> int:
    """Representative of p^n/n! modulo ``modulus``."""
    from math import factorial

    from .exactalg.poly import valuation

    f = factorial(n)
    v = valuation(f, p)
    return (p ** (n - v) * pow(f // p ** v, -1, modulus)) % modulus


def pd_bracket(x: LaurentPolynomial, n: int, p: int, r: int) -> LaurentPolynomial:
    """(p x)^[n] = (p^n/n!) x^n in A_r."""
    mod = p ** r
    return (x ** n * bracket_scalar(n, p, mod)).reduce(mod)


def pd_collapse_check(p: int, r: int, samples: Iterable[LaurentPolynomial], nmax: int | None = None) -> dict:
    """Confirm d((px)^[n]) = (px)^[n-1] d(px) in the de Rham complex of A_r.

    Raises RelationViolated with the witness (x, n) on failure.
    """
    nmax = nmax if nmax is not None else p + 1
    mod = p ** r
    checked = 0
    for x in samples:
        xr = x.reduce(mod)
        for n in range(1, nmax + 1):
            lhs = dfunc(pd_bracket(x, n, p, r))
            rhs = DifferentialForm.function(pd_bracket(x, n - 1, p, r)) * dfunc(xr * p)
            if not (lhs - rhs).is_zero():
                raise RelationViolated("PD relation fails in the de Rham complex of A_r",
                                       x=str(x), n=n, difference=str(lhs - rhs))
            checked += 1
    return {"check": "pd_collapse", "p": p, "r": r, "relations_checked": checked, "passed": True}


def random_polynomial(ring: PolyRing, rng: random.Random, terms: int = 3, maxdeg: int = 3,
                      coeff: int = 5) -> LaurentPolynomial:
    out = {}
    for _ in range(rng.randint(1, terms)):
        e = tuple(rng.randint(-maxdeg if lf else 0, maxdeg) for lf in ring.laurent)
        out[e] = rng.randint(-coeff, coeff)
    return LaurentPolynomial(ring, out)


def random_form(ring: PolyRing, degree: int, rng: random.Random, terms: int = 3, maxdeg: int = 3) -> DifferentialForm:
    from itertools import combinations

    subsets = list(combinations(range(ring.nvars), degree))
    if not subsets:
        return DifferentialForm.zero(ring)
    out = {}
    for _ in range(rng.randint(1, terms)):
        e = tuple(rng.randint(-maxdeg if lf else 0, maxdeg) for lf in ring.laurent)
        out[(e, rng.choice(subsets))] = rng.randint(-5, 5)
    return DifferentialForm(ring, out)
