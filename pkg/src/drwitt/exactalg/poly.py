"""Sparse multivariate Laurent polynomials with integer or Z/p^N coefficients."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

from ..errors import MismatchedRing, NotAFrobeniusLift, NotDivisible


def valuation(n: int, p: int) -> int | float:
    """p-adic valuation of an integer (inf for 0)."""
    if n == 0:
        return float("inf")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class PolyRing:
    """Z[x_1..x_n] (some variables inverted), optionally reduced mod a modulus."""

    variables: tuple = ()
    laurent: tuple = ()
    modulus: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        lf = tuple(bool(x) for x in self.laurent) if self.laurent else (False,) * len(self.variables)
        object.__setattr__(self, "laurent", lf)
        if len(self.laurent) != len(self.variables):
            raise ValueError("one Laurent flag per variable")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def with_modulus(self, modulus: int | None) -> "PolyRing":
        return PolyRing(self.variables, self.laurent, modulus)

    def exact(self) -> "PolyRing":
        return self.with_modulus(None)

    def zero(self) -> "LaurentPolynomial":
        return LaurentPolynomial(self, {})

    def one(self) -> "LaurentPolynomial":
        return self.const(1)

    def const(self, c: int) -> "LaurentPolynomial":
        return LaurentPolynomial(self, {(0,) * self.nvars: c})

    def gen(self, i) -> "LaurentPolynomial":
        if isinstance(i, str):
            i = self.variables.index(i)
        e = [0] * self.nvars
        e[i] = 1
        return LaurentPolynomial(self, {tuple(e): 1})

    def gens(self) -> tuple:
        return tuple(self.gen(i) for i in range(self.nvars))

    def monomial(self, exponent, coeff: int = 1) -> "LaurentPolynomial":
        return LaurentPolynomial(self, {tuple(exponent): coeff})

    def index(self, name: str) -> int:
        return self.variables.index(name)


def _grlex_key(e):
    return (sum(e), e)


class LaurentPolynomial:
    """Immutable sparse polynomial; terms map exponent tuples to nonzero ints."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping | None = None, _clean: bool = False):
        self.ring = ring
        if _clean:
            self.terms = terms
        else:
            m = ring.modulus
            out = {}
            n = ring.nvars
            for e, c in (terms or {}).items():
                e = tuple(e)
                if len(e) != n:
                    raise ValueError(f"exponent {e} has wrong length for {n} variables")
                if m is not None:
                    c %= m
                if c:
                    for k, (x, lf) in enumerate(zip(e, ring.laurent)):
                        if x < 0 and not lf:
                            raise ValueError(f"negative exponent on polynomial variable {ring.variables[k]}")
                    out[e] = out.get(e, 0) + c
            if m is not None:
                out = {e: c % m for e, c in out.items() if c % m}
            else:
                out = {e: c for e, c in out.items() if c}
            self.terms = out
        self._hash = None

    # -- basic protocol ----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        return f"LaurentPolynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                v if x == 1 else f"{v}^{x}" for v, x in zip(self.ring.variables, e) if x
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "LaurentPolynomial":
        if isinstance(other, LaurentPolynomial):
            if other.ring != self.ring:
                raise MismatchedRing("polynomials live in different rings",
                                     left=str(self.ring), right=str(other.ring))
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        raise TypeError(f"cannot combine polynomial with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPolynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPolynomial(self.ring, {e: c * other for e, c in self.terms.items()})
        if other.__class__ is not LaurentPolynomial or (other.ring is not self.ring and other.ring != self.ring):
            other = self._coerce(other)
        out: dict = {}
        get = out.get
        if self.ring.nvars == 1:
            for (x,), c1 in self.terms.items():
                for (y,), c2 in other.terms.items():
                    k = (x + y,)
                    out[k] = get(k, 0) + c1 * c2
        else:
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    k = tuple(a + b for a, b in zip(e1, e2))
                    out[k] = get(k, 0) + c1 * c2
        m = self.ring.modulus
        if m is not None:
            out = {e: c % m for e, c in out.items() if c % m}
        else:
            out = {e: c for e, c in out.items() if c}
        return LaurentPolynomial(self.ring, out, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self.terms) == 1:
                (e, c), = self.terms.items()
                if abs(c) == 1 or (self.ring.modulus and _unit_mod(c, self.ring.modulus)):
                    inv = c if abs(c) == 1 else pow(c, -1, self.ring.modulus)
                    return LaurentPolynomial(self.ring, {tuple(-x for x in e): inv}) ** (-n)
            raise ValueError("only unit monomials can be inverted")
        m = self.ring.modulus
        if m is not None and n and n % m == 0 and _is_prime_cached(m):
            # in characteristic p, f^p = sum c x^(p e)
            return LaurentPolynomial(self.ring, {tuple(m * x for x in e): c for e, c in self.terms.items()},
                                     _clean=True) ** (n // m)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- structure --------------------------------------------------------
    def reduce(self, modulus: int | None) -> "LaurentPolynomial":
        """Image in the same variables with a new coefficient modulus."""
        return LaurentPolynomial(self.ring.with_modulus(modulus), self.terms)

    def lift(self) -> "LaurentPolynomial":
        """Exact-integer polynomial with the same (reduced) coefficients."""
        return LaurentPolynomial(self.ring.exact(), self.terms)

    def coefficient(self, exponent) -> int:
        return self.terms.get(tuple(exponent), 0)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> int:
        return self.terms.get((0,) * self.ring.nvars, 0)

    def weights(self) -> set:
        """Set of total degrees of terms."""
        return {sum(e) for e in self.terms}

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def map_coefficients(self, f) -> "LaurentPolynomial":
        return LaurentPolynomial(self.ring, {e: f(c) for e, c in self.terms.items()})

    def derivative(self, i: int) -> "LaurentPolynomial":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return LaurentPolynomial(self.ring, out)

    def content_valuation(self, p: int) -> int | float:
        return min((valuation(c, p) for c in self.terms.values()), default=float("inf"))

    def substitute(self, images) -> "LaurentPolynomial":
        """Ring homomorphism sending variable i to ``images[i]``.

        Products over shared exponent prefixes are cached, which matters
        for the large universal Witt polynomials.
        """
        if not images:
            return self
        target = images[0].ring
        powers: dict = {}
        prefix: dict = {(): target.one()}

        def power(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = images[i] ** k
            return powers[key]

        acc: dict = {}
        for e, c in self.terms.items():
            term = prefix[()]
            for i in range(len(e)):
                key = e[: i + 1]
                got = prefix.get(key)
                if got is None:
                    got = term * power(i, e[i]) if e[i] else term
                    prefix[key] = got
                term = got
            for e2, c2 in term.terms.items():
                acc[e2] = acc.get(e2, 0) + c * c2
        return LaurentPolynomial(target, acc)


@lru_cache(maxsize=None)
def _is_prime_cached(n: int) -> bool:
    return is_prime(n)


def _unit_mod(c: int, m: int) -> bool:
    from math import gcd
    return gcd(c, m) == 1


def exact_div_p(f: LaurentPolynomial, k: int, p: int) -> LaurentPolynomial:
    """Return g with p^k g = f; NotDivisible names the first offending monomial."""
    if f.ring.modulus is not None:
        raise ValueError("exact division requires exact integer coefficients")
    q = p ** k
    out = {}
    for e, c in f.terms.items():
        if c % q:
            raise NotDivisible(
                f"coefficient {c} of monomial {e} is not divisible by {p}^{k}",
                monomial=list(e), valuation=valuation(c, p),
            )
        out[e] = c // q
    return LaurentPolynomial(f.ring, out, _clean=True)


@dataclass(frozen=True)
class FrobeniusLift:
    """A Frobenius lift phi on an exact-integer (Laurent) polynomial ring.

    ``images[i]`` is phi(x_i); each must be congruent to x_i^p modulo p.
    """

    ring: PolyRing
    p: int
    images: tuple = field(default=())

    def __post_init__(self):
        if self.ring.modulus is not None:
            raise ValueError("a Frobenius lift lives on the exact-integer ring")
        if not self.images:
            object.__setattr__(self, "images",
                               tuple(self.ring.gen(i) ** self.p for i in range(self.ring.nvars)))
        imgs = tuple(self.images)
        object.__setattr__(self, "images", imgs)
        if len(imgs) != self.ring.nvars:
            raise ValueError("one image per variable")
        for i, img in enumerate(imgs):
            if img.ring != self.ring:
                raise MismatchedRing("image polynomial in a different ring")
            diff = (img - self.ring.gen(i) ** self.p).reduce(self.p)
            if not diff.is_zero():
                raise NotAFrobeniusLift(
                    f"phi({self.ring.variables[i]}) = {img} is not congruent to "
                    f"{self.ring.variables[i]}^{self.p} mod {self.p}",
                    variable=self.ring.variables[i],
                )

    @classmethod
    def default(cls, ring: PolyRing, p: int) -> "FrobeniusLift":
        return cls(ring, p)

    def delta(self, i: int) -> LaurentPolynomial:
        """delta(x_i) = (phi(x_i) - x_i^p)/p."""
        return exact_div_p(self.images[i] - self.ring.gen(i) ** self.p, 1, self.p)

    def is_default(self) -> bool:
        return all(img == self.ring.gen(i) ** self.p for i, img in enumerate(self.images))

    def is_monomial(self) -> bool:
        """True when every phi(x_i) is c_i x_i^p (a weight-homogeneous lift)."""
        for i, img in enumerate(self.images):
            if not img.is_monomial():
                return False
            (e,) = img.terms
            if e != tuple(self.p * int(j == i) for j in range(self.ring.nvars)):
                return False
        return True

    def __call__(self, f: LaurentPolynomial) -> LaurentPolynomial:
        return frobenius_substitute(f, self)

    def iterate(self, f: LaurentPolynomial, n: int) -> LaurentPolynomial:
        for _ in range(n):
            f = self(f)
        return f


def frobenius_substitute(f: LaurentPolynomial, phi: FrobeniusLift) -> LaurentPolynomial:
    """Apply phi to f (computed on the lift, then reduced to f's modulus)."""
    base = f.ring
    if base.exact() != phi.ring:
        raise MismatchedRing("polynomial and Frobenius lift live on different rings")
    images = phi.images
    if any(x < 0 for e in f.terms for x in e):
        inv = []
        for i, img in enumerate(images):
            inv.append(img ** -1 if base.laurent[i] and img.is_monomial() else None)
        out: dict = {}
        for e, c in f.terms.items():
            term = phi.ring.const(c)
            for i, k in enumerate(e):
                if k > 0:
                    term = term * images[i] ** k
                elif k < 0:
                    if inv[i] is None:
                        raise ValueError("phi of a Laurent variable must be a unit monomial")
                    term = term * inv[i] ** (-k)
            for e2, c2 in term.terms.items():
                out[e2] = out.get(e2, 0) + c2
        return LaurentPolynomial(base, out)
    return f.lift().substitute(images).reduce(base.modulus)
