"""p-typical Witt vectors over polynomial rings.

Arithmetic goes through the universal sum/product/negation polynomials,
which are generated from the ghost recursion over the integers, memoized,
and cached on disk keyed by (p, r). Ghost components serve as the
independent oracle for everything here.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from pathlib import Path

from .errors import (
    DworkDivisionFailure,
    MismatchedParameters,
    NotCharP,
    NotDivisible,
    NotInVImage,
    TorsionCoefficients,
)
from .exactalg.poly import FrobeniusLift, LaurentPolynomial, PolyRing, exact_div_p, valuation

CACHE_VERSION = 1


def cache_dir() -> Path:
    env = os.environ.get("DRWITT_CACHE_DIR")
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "drwitt"


@dataclass(frozen=True)
class UniversalWittLaws:
    p: int
    r: int
    sums: tuple  # S_0..S_{r-1} in X_0..X_{r-1}, Y_0..Y_{r-1}
    products: tuple
    negations: tuple  # N_0..N_{r-1} in X_0..X_{r-1} (the Y's unused)

    @property
    def ring(self) -> PolyRing:
        return self.sums[0].ring

    def reduced(self, modulus):
        return _reduced_laws(self, modulus)


def _law_ring(r: int) -> PolyRing:
    return PolyRing(tuple(f"X{i}" for i in range(r)) + tuple(f"Y{i}" for i in range(r)))


def _ghost_poly(coords, n, p, ring):
    out = ring.zero()
    for i in range(n + 1):
        out = out + coords[i] ** (p ** (n - i)) * (p ** i)
    return out


def _generate(p: int, r: int) -> UniversalWittLaws:
    ring = _law_ring(r)
    gens = ring.gens()
    xs, ys = gens[:r], gens[r:]
    sums, prods, negs = [], [], []
    for n in range(r):
        gx, gy = _ghost_poly(xs, n, p, ring), _ghost_poly(ys, n, p, ring)
        s, m, ng = gx + gy, gx * gy, -gx
        for i in range(n):
            q = p ** (n - i)
            s = s - sums[i] ** q * p ** i
            m = m - prods[i] ** q * p ** i
            ng = ng - negs[i] ** q * p ** i
        sums.append(exact_div_p(s, n, p))
        prods.append(exact_div_p(m, n, p))
        negs.append(exact_div_p(ng, n, p))
    return UniversalWittLaws(p, r, tuple(sums), tuple(prods), tuple(negs))


def _dump(laws: UniversalWittLaws) -> dict:
    def enc(polys):
        return [sorted([list(e), c] for e, c in f.terms.items()) for f in polys]

    return {"version": CACHE_VERSION, "p": laws.p, "r": laws.r,
            "sum": enc(laws.sums), "prod": enc(laws.products), "neg": enc(laws.negations)}


def _load(data: dict) -> UniversalWittLaws:
    ring = _law_ring(data["r"])

    def dec(rows):
        return tuple(LaurentPolynomial(ring, {tuple(e): c for e, c in terms}) for terms in rows)

    return UniversalWittLaws(data["p"], data["r"], dec(data["sum"]), dec(data["prod"]), dec(data["neg"]))


@lru_cache(maxsize=None)
def universal_laws(p: int, r: int, use_disk: bool = True) -> UniversalWittLaws:
    """Sum/product/negation polynomials of W_r for the prime p."""
    if r < 1:
        raise ValueError("length must be at least 1")
    path = cache_dir() / f"witt-laws-v{CACHE_VERSION}-p{p}-r{r}.json"
    if use_disk and path.exists():
        try:
            data = json.loads(path.read_text())
            if data.get("version") == CACHE_VERSION and data["p"] == p and data["r"] == r:
                return _load(data)
        except (OSError, ValueError, KeyError):
            pass  # unreadable cache entries are regenerated
    laws = _generate(p, r)
    if use_disk:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
            with os.fdopen(fd, "w") as fh:
                json.dump(_dump(laws), fh)
            os.replace(tmp, path)
        except OSError:
            pass
    return laws


@lru_cache(maxsize=None)
def _reduced_laws(laws: UniversalWittLaws, modulus):
    return tuple(tuple(f.reduce(modulus) for f in fam)
                 for fam in (laws.sums, laws.products, laws.negations))


# ---------------------------------------------------------------------------


class WittVector:
    """Element of W_r(A) in Witt coordinates, A a polynomial ring.

    The coefficient ring is either an F_p-algebra (modulus p) or an exact
    integer ring, the latter used by the ghost oracle.
    """

    __slots__ = ("p", "coords")

    def __init__(self, p: int, coords):
        coords = tuple(coords)
        if not coords:
            raise ValueError("Witt vectors have positive length")
        ring = coords[0].ring
        if any(c.ring != ring for c in coords):
            raise MismatchedParameters("coordinates live in different rings")
        if ring.modulus not in (None, p):
            raise ValueError(f"coefficient ring must be exact or of characteristic {p}")
        self.p = p
        self.coords = coords

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, p, r, ring):
        return cls(p, [ring.zero()] * r)

    @classmethod
    def one(cls, p, r, ring):
        return cls.teichmuller(ring.one(), p, r)

    @classmethod
    def teichmuller(cls, a: LaurentPolynomial, p: int, r: int):
        return cls(p, [a] + [a.ring.zero()] * (r - 1))

    @classmethod
    def from_int(cls, n: int, p: int, r: int, ring: PolyRing):
        """Image of the integer n under Z -> W_r(ring)."""
        coords = _coords_of_int(n, p, r)
        return cls(p, [ring.const(c) for c in coords])

    @classmethod
    def from_ghost(cls, p: int, ghost):
        """Witt coordinates over a torsion-free ring from ghost components."""
        ghost = list(ghost)
        coords = []
        for n, w in enumerate(ghost):
            s = w
            for i, a in enumerate(coords):
                s = s - a ** (p ** (n - i)) * p ** i
            try:
                coords.append(exact_div_p(s, n, p))
            except NotDivisible as exc:
                raise DworkDivisionFailure(f"ghost vector fails the Dwork congruence at n={n}",
                                           n=n, **exc.witness) from exc
        return cls(p, coords)

    # -- basic protocol -----------------------------------------------------
    @property
    def r(self) -> int:
        return len(self.coords)

    @property
    def ring(self) -> PolyRing:
        return self.coords[0].ring

    @property
    def is_char_p(self) -> bool:
        return self.ring.modulus == self.p

    def __eq__(self, other):
        if not isinstance(other, WittVector):
            return NotImplemented
        return self.p == other.p and self.coords == other.coords

    def __hash__(self):
        return hash((self.p, self.coords))

    def __repr__(self):
        return f"WittVector(p={self.p}, ({', '.join(str(c) for c in self.coords)}))"

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def _check(self, other: "WittVector"):
        if not isinstance(other, WittVector):
            raise TypeError("expected a Witt vector")
        if self.p != other.p or self.r != other.r or self.ring != other.ring:
            raise MismatchedParameters(
                "Witt vectors with different (p, r, ring)",
                left=(self.p, self.r), right=(other.p, other.r),
            )

    def _laws(self):
        laws = universal_laws(self.p, self.r)
        return laws.reduced(self.ring.modulus)

    def _apply(self, family, other=None):
        pad = other.coords if other is not None else (self.ring.zero(),) * self.r
        images = list(self.coords) + list(pad)
        return WittVector(self.p, [f.substitute(images) for f in family])

    # -- ring structure -----------------------------------------------------
    def __add__(self, other):
        if isinstance(other, int):
            other = WittVector.from_int(other, self.p, self.r, self.ring)
        self._check(other)
        return self._apply(self._laws()[0], other)

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, int):
            other = WittVector.from_int(other, self.p, self.r, self.ring)
        self._check(other)
        return self._apply(self._laws()[1], other)

    __rmul__ = __mul__

    def __neg__(self):
        return self._apply(self._laws()[2])

    def __sub__(self, other):
        return self + (-other)

    def __pow__(self, n: int):
        out = WittVector.one(self.p, self.r, self.ring)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def truncate(self, s: int) -> "WittVector":
        return WittVector(self.p, self.coords[:s])

    def reduce(self) -> "WittVector":
        """Reduce exact coordinates modulo p."""
        return WittVector(self.p, [c.reduce(self.p) for c in self.coords])


@lru_cache(maxsize=None)
def _coords_of_int(n: int, p: int, r: int) -> tuple:
    ring = PolyRing(())
    w = WittVector.from_ghost(p, [ring.const(n)] * r)
    return tuple(c.constant_value() for c in w.coords)


def add(u: WittVector, v: WittVector) -> WittVector:
    return u + v


def mul(u: WittVector, v: WittVector) -> WittVector:
    return u * v


def to_ghost(w: WittVector) -> tuple:
    """Ghost components w_n = sum_i p^i a_i^{p^(n-i)}; needs exact coefficients."""
    if w.ring.modulus is not None:
        raise TorsionCoefficients("ghost components need a torsion-free coefficient ring",
                                  modulus=w.ring.modulus)
    return tuple(_ghost_poly(w.coords, n, w.p, w.ring) for n in range(w.r))


def frobenius(w: WittVector) -> WittVector:
    """F(x_0, x_1, ...) = (x_0^p, x_1^p, ...) on W_r of an F_p-algebra."""
    if not w.is_char_p:
        raise NotCharP("Witt vector Frobenius by coordinatewise p-th powers needs characteristic p",
                       modulus=w.ring.modulus)
    return WittVector(w.p, [c ** w.p for c in w.coords])


def verschiebung(w: WittVector, truncate: bool = True) -> WittVector:
    """V(x_0, x_1, ...) = (0, x_0, x_1, ...); truncated to length r unless asked otherwise."""
    coords = (w.ring.zero(),) + w.coords
    if truncate:
        coords = coords[: w.r]
    return WittVector(w.p, coords)


def pd_scalar(n: int, p: int, modulus: int) -> int:
    """Representative of p^(n-1)/n! in Z/modulus (a p-integral rational)."""
    f = factorial(n)
    v = valuation(f, p)
    unit = f // p ** v
    e = n - 1 - v
    return (p ** e * pow(unit, -1, modulus)) % modulus


def pd_gamma(n: int, w: WittVector, witness: WittVector | None = None) -> WittVector:
    """gamma_n(Vx) = (p^(n-1)/n!) V(x^n) on the V-ideal of W_r(R).

    Without a witness, x is recovered by shifting the coordinates of w to
    the left, which is valid because R is a domain here.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not w.is_char_p:
        raise NotCharP("divided powers on the V-ideal are defined for F_p-algebras")
    if not w.coords[0].is_zero():
        raise NotInVImage("first Witt coordinate is nonzero", first=str(w.coords[0]))
    r = w.r
    if r == 1:
        return w
    if witness is None:
        x = WittVector(w.p, w.coords[1:])
    else:
        x = witness.truncate(r - 1)
        if verschiebung(WittVector(w.p, x.coords + (w.ring.zero(),))) != w:
            raise NotInVImage("witness does not satisfy w = V(x)")
    xn = x ** n
    vxn = WittVector(w.p, (w.ring.zero(),) + xn.coords)
    c = pd_scalar(n, w.p, w.p ** r)
    return vxn * c


def delta_lift(a: LaurentPolynomial, phi: FrobeniusLift, r: int, reduce: bool = True) -> WittVector:
    """Image of a under the unique delta-ring map A -> W_r(A/p).

    The coordinates solve ghost_n = phi^n(a) by exact division; with
    ``reduce=False`` the exact coordinates in A are returned.
    """
    p = phi.p
    if a.ring != phi.ring:
        raise MismatchedParameters("element and Frobenius lift live on different rings")
    coords = []
    image = a
    for n in range(r):
        s = image
        for i, c in enumerate(coords):
            s = s - c ** (p ** (n - i)) * p ** i
        try:
            coords.append(exact_div_p(s, n, p))
        except NotDivisible as exc:
            raise DworkDivisionFailure(
                f"phi^{n}(a) - sum p^i a_i^(p^(n-i)) is not divisible by p^{n}",
                n=n, **exc.witness) from exc
        image = phi(image)
    w = WittVector(p, coords)
    return w.reduce() if reduce else w
