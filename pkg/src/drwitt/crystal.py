"""Unit-root F-crystals presented on a Frobenius lift, and their de Rham complexes.

A crystal of rank m is given by a connection matrix Theta of 1-forms and a
Frobenius matrix Phi over the integral lift. Conventions: sections are
column vectors, the connection is ``d + Theta`` (left multiplication), and
the Frobenius sends basis vector e_j to ``sum_i Phi[i][j] e_i``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from pathlib import Path

from .complexes import WeightGradedComplex, as_weight
from .derham import DifferentialForm, d, divided_frobenius, undivided_frobenius
from .errors import (
    MismatchedBase,
    NotHomogeneous,
    NotHorizontal,
    NotIntegrable,
    NotUnitRoot,
    ParseError,
    WindowOverflow,
)
from .exactalg.poly import FrobeniusLift, LaurentPolynomial, PolyRing, is_prime
from .parsing import parse_form, parse_polynomial


@dataclass(frozen=True)
class UnitRootCrystalData:
    phi: FrobeniusLift
    connection: tuple  # m x m DifferentialForm of degree 1
    frobenius: tuple  # m x m LaurentPolynomial
    weights: tuple | None = None  # optional weight of each basis vector
    name: str = field(default="", compare=False)

    def __post_init__(self):
        conn = tuple(tuple(row) for row in self.connection)
        frob = tuple(tuple(row) for row in self.frobenius)
        object.__setattr__(self, "connection", conn)
        object.__setattr__(self, "frobenius", frob)
        m = len(frob)
        if len(conn) != m or any(len(row) != m for row in conn + frob):
            raise ValueError("connection and Frobenius must both be square of the same size")
        for row in conn:
            for th in row:
                if th.ring != self.ring or (th.terms and th.degrees != {1}):
                    raise ValueError("connection entries must be 1-forms on the lift")
        for row in frob:
            for f in row:
                if f.ring != self.ring:
                    raise ValueError("Frobenius entries must live on the lift")
        if self.weights is not None:
            object.__setattr__(self, "weights", tuple(as_weight(w) for w in self.weights))

    @property
    def ring(self) -> PolyRing:
        return self.phi.ring

    @property
    def p(self) -> int:
        return self.phi.p

    @property
    def rank(self) -> int:
        return len(self.frobenius)


# ---------------------------------------------------------------------------
# matrix helpers over forms


def _form_matmul(a, b, ring):
    m, k, n = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(m):
        row = []
        for j in range(n):
            acc = DifferentialForm.zero(ring)
            for t in range(k):
                acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


def _as_forms(mat):
    return [[x if isinstance(x, DifferentialForm) else DifferentialForm.function(x) for x in row] for row in mat]


def _poly_det(mat, ring):
    n = len(mat)
    if n == 0:
        return ring.one()
    if n == 1:
        return mat[0][0]
    out = ring.zero()
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = mat[0][j] * _poly_det(minor, ring)
        out = out + term if j % 2 == 0 else out - term
    return out


def _is_unit_mod_p(f: LaurentPolynomial, p: int) -> bool:
    g = f.reduce(p)
    if not g.is_monomial():
        return False
    (e,) = g.terms
    return all(x == 0 or lf for x, lf in zip(e, g.ring.laurent))


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Crystal:
    """A validated crystal; ``weights`` are the basis weights when homogeneous."""

    data: UnitRootCrystalData
    weights: tuple | None

    @property
    def ring(self):
        return self.data.ring

    @property
    def p(self):
        return self.data.p

    @property
    def rank(self):
        return self.data.rank

    @property
    def phi(self):
        return self.data.phi

    @property
    def name(self):
        return self.data.name


def validate(data: UnitRootCrystalData) -> Crystal:
    """Check integrability, horizontality and the unit-root condition exactly."""
    ring, phi, m = data.ring, data.phi, data.rank
    theta = [list(row) for row in data.connection]
    Phi = _as_forms(data.frobenius)

    tt = _form_matmul(theta, theta, ring)
    for i, k in product(range(m), range(m)):
        curv = d(theta[i][k]) + tt[i][k]
        if not curv.is_zero():
            raise NotIntegrable("d Theta + Theta ^ Theta is nonzero", entry=[i, k], value=str(curv))

    lhs = _form_matmul(theta, Phi, ring)
    pulled = [[undivided_frobenius(th, phi) for th in row] for row in theta]
    rhs = _form_matmul(Phi, pulled, ring)
    for i, j in product(range(m), range(m)):
        left = d(Phi[i][j]) + lhs[i][j]
        if left != rhs[i][j]:
            raise NotHorizontal(
                "d Phi + Theta Phi differs from Phi phi^*(Theta)",
                entry=[i, j], lhs=str(left), rhs=str(rhs[i][j]),
            )

    det = _poly_det([list(row) for row in data.frobenius], ring)
    if not _is_unit_mod_p(det, data.p):
        raise NotUnitRoot("det(Phi) is not a unit modulo p", determinant=str(det))

    weights = data.weights if data.weights is not None else _infer_weights(data)
    if weights is not None:
        _check_homogeneous(data, weights)
    return Crystal(data, weights)


def _monomial_weight(e, idx=()):
    w = [Fraction(x) for x in e]
    for i in idx:
        w[i] += 1
    return tuple(w)


def _infer_weights(data: UnitRootCrystalData):
    """Basis weights making Theta and Phi homogeneous, or None when none exist.

    Each basis vector's weight is written as s * t + b with s a power of p
    and t the unknown weight of its component's root; constraints from the
    entries then fix t.
    """
    p, m, n = data.p, data.rank, data.ring.nvars
    if not data.phi.is_monomial():
        return None
    edges = {j: [] for j in range(m)}  # (neighbour, kind, shift)
    for i, j in product(range(m), range(m)):
        f = data.frobenius[i][j]
        if f.terms:
            if not f.is_monomial():
                return None
            (e,) = f.terms
            edges[j].append((i, "phi", _monomial_weight(e)))
        th = data.connection[i][j]
        if th.terms:
            mws = th.multiweights()
            if len(mws) != 1:
                return None
            edges[j].append((i, "theta", next(iter(mws))))
    # c_i = p c_j - w (phi); c_i = c_j - w (theta). Build undirected constraints.
    rel = {j: [] for j in range(m)}
    for j, lst in edges.items():
        for i, kind, w in lst:
            if kind == "phi":
                rel[j].append((i, Fraction(p), tuple(-x for x in w)))
                rel[i].append((j, Fraction(1, p), tuple(x / p for x in w)))
            else:
                rel[j].append((i, Fraction(1), tuple(-x for x in w)))
                rel[i].append((j, Fraction(1), tuple(w)))
    weights = [None] * m
    for root in range(m):
        if weights[root] is not None:
            continue
        expr = {root: (Fraction(1), (Fraction(0),) * n)}  # c = s * t + b
        stack = [root]
        eqs = []
        while stack:
            j = stack.pop()
            s, b = expr[j]
            for i, scale, shift in rel[j]:
                s2, b2 = s * scale, tuple(scale * x + y for x, y in zip(b, shift))
                if i in expr:
                    eqs.append((expr[i], (s2, b2)))
                else:
                    expr[i] = (s2, b2)
                    stack.append(i)
        t = None
        for (s1, b1), (s2, b2) in eqs:
            if s1 != s2:
                cand = tuple((y2 - y1) / (s1 - s2) for y1, y2 in zip(b1, b2))
                if t is not None and t != cand:
                    return None
                t = cand
        if t is None:
            t = (Fraction(0),) * n
        for (s1, b1), (s2, b2) in eqs:
            if tuple(s1 * x + y for x, y in zip(t, b1)) != tuple(s2 * x + y for x, y in zip(t, b2)):
                return None
        for i, (s, b) in expr.items():
            weights[i] = tuple(s * x + y for x, y in zip(t, b))
    return tuple(weights)


def _check_homogeneous(data, weights):
    p = data.p
    for i, j in product(range(data.rank), range(data.rank)):
        for e in data.frobenius[i][j].terms:
            if tuple(a + b for a, b in zip(weights[i], _monomial_weight(e))) != tuple(p * x for x in weights[j]):
                raise NotHomogeneous("Frobenius entry is not weight-homogeneous", entry=[i, j])
        for w in data.connection[i][j].multiweights():
            if tuple(a + b for a, b in zip(weights[i], w)) != weights[j]:
                raise NotHomogeneous("connection entry is not weight-homogeneous", entry=[i, j])


# ---------------------------------------------------------------------------
# factories


def gm_ring() -> PolyRing:
    return PolyRing(("x",), (True,))


def a1_ring() -> PolyRing:
    return PolyRing(("x",), (False,))


def trivial(ring: PolyRing, p: int, rank: int = 1, phi: FrobeniusLift | None = None) -> UnitRootCrystalData:
    phi = phi or FrobeniusLift(ring, p)
    zero = DifferentialForm.zero(ring)
    return UnitRootCrystalData(
        phi,
        [[zero] * rank for _ in range(rank)],
        [[ring.const(int(i == j)) for j in range(rank)] for i in range(rank)],
        name="trivial" if rank == 1 else f"trivial^{rank}",
    )


def constant(a: int, ring: PolyRing, p: int, phi: FrobeniusLift | None = None) -> UnitRootCrystalData:
    """Rank one, no connection, Frobenius multiplication by the p-adic unit a."""
    phi = phi or FrobeniusLift(ring, p)
    return UnitRootCrystalData(phi, [[DifferentialForm.zero(ring)]], [[ring.const(a)]], name=f"unit:{a}")


def kummer(c: int, p: int, ring: PolyRing | None = None, var: str = "x") -> UnitRootCrystalData:
    """Theta = c dx/x, Phi = x^(c(p-1)) on a ring where x is invertible."""
    ring = ring or gm_ring()
    i = ring.index(var)
    if not ring.laurent[i]:
        raise ValueError("the Kummer crystal needs an invertible variable")
    x = ring.gen(i)
    theta = DifferentialForm.function(x ** -1 * c) * DifferentialForm.dx(ring, i)
    return UnitRootCrystalData(FrobeniusLift(ring, p), [[theta]], [[x ** (c * (p - 1))]], name=f"kummer:{c}")


def direct_sum(a: UnitRootCrystalData, b: UnitRootCrystalData) -> UnitRootCrystalData:
    if a.phi != b.phi:
        raise MismatchedBase("direct sum needs a common lift and Frobenius")
    ring = a.ring
    ma, mb = a.rank, b.rank
    zf = DifferentialForm.zero(ring)
    zp = ring.zero()
    conn = [list(row) + [zf] * mb for row in a.connection] + [[zf] * ma + list(row) for row in b.connection]
    frob = [list(row) + [zp] * mb for row in a.frobenius] + [[zp] * ma + list(row) for row in b.frobenius]
    weights = None
    if a.weights is not None and b.weights is not None:
        weights = a.weights + b.weights
    return UnitRootCrystalData(a.phi, conn, frob, weights, name=f"{a.name or 'E'}+{b.name or 'E'}")


def restrict_laurent(data: UnitRootCrystalData, var: str) -> UnitRootCrystalData:
    """Same crystal data on the lift with ``var`` inverted."""
    ring = data.ring
    i = ring.index(var)
    lf = list(ring.laurent)
    lf[i] = True
    new = PolyRing(ring.variables, tuple(lf))
    phi = FrobeniusLift(new, data.p, tuple(LaurentPolynomial(new, f.terms) for f in data.phi.images))
    conn = [[DifferentialForm(new, th.terms) for th in row] for row in data.connection]
    frob = [[LaurentPolynomial(new, f.terms) for f in row] for row in data.frobenius]
    return UnitRootCrystalData(phi, conn, frob, data.weights, name=data.name)


def non_horizontal_example(p: int) -> UnitRootCrystalData:
    """Theta = dx, Phi = 1 on A^1: integrable and unit-root but not horizontal."""
    ring = a1_ring()
    return UnitRootCrystalData(FrobeniusLift(ring, p), [[DifferentialForm.dx(ring, 0)]], [[ring.one()]],
                               name="non-horizontal")


BUILTINS = (
    "fp",
    "a1-trivial",
    "gm-trivial",
    "gm-kummer:c=<int>",
    "gm-kummer-sum:c=<int>,<int>",
    "gm-a1-kummer:c=<int>",
    "a1-rank2-sum",
)


def _builtin_ints(name: str, prefix: str) -> list:
    try:
        return [int(x) for x in name[len(prefix):].split(",")]
    except ValueError:
        raise ParseError(f"builtin {name!r}: expected integers after {prefix!r}") from None


def builtin(name: str, p: int) -> UnitRootCrystalData:
    """Crystal data for a builtin name (see ``BUILTINS``)."""
    if not is_prime(p):
        raise ParseError(f"p = {p} is not prime")
    if name == "fp":
        return trivial(PolyRing((), ()), p)
    if name == "a1-trivial":
        return trivial(a1_ring(), p)
    if name == "gm-trivial":
        return trivial(gm_ring(), p)
    if name == "a1-rank2-sum":
        ring = a1_ring()
        return direct_sum(trivial(ring, p), constant(-1, ring, p))
    if name.startswith("gm-kummer-sum:c="):
        cs = _builtin_ints(name, "gm-kummer-sum:c=")
        if len(cs) != 2:
            raise ParseError(f"builtin {name!r}: expected two integers")
        return direct_sum(kummer(cs[0], p), kummer(cs[1], p))
    if name.startswith("gm-kummer:c="):
        (c,) = _builtin_ints(name, "gm-kummer:c=")
        return kummer(c, p)
    if name.startswith("gm-a1-kummer:c="):
        (c,) = _builtin_ints(name, "gm-a1-kummer:c=")
        return kummer(c, p, PolyRing(("x", "y"), (True, False)))
    raise ParseError(f"unknown builtin crystal {name!r}; known: {', '.join(BUILTINS)}")


# ---------------------------------------------------------------------------
# sections of E (x) Omega


def nabla(crystal: Crystal | UnitRootCrystalData, section) -> tuple:
    """(d + Theta) applied to a section given as a tuple of m forms."""
    data = crystal.data if isinstance(crystal, Crystal) else crystal
    m = data.rank
    out = []
    for i in range(m):
        acc = d(section[i])
        for j in range(m):
            th = data.connection[i][j]
            if th.terms and section[j].terms:
                acc = acc + th * section[j]
        out.append(acc)
    return tuple(out)


def section_frobenius(crystal, section, divided: bool = True) -> tuple:
    """F(e (x) omega) = Phi(e) (x) F(omega); ``divided=False`` uses phi^* instead."""
    data = crystal.data if isinstance(crystal, Crystal) else crystal
    fr = divided_frobenius if divided else undivided_frobenius
    images = [fr(s, data.phi) for s in section]
    m = data.rank
    out = []
    for i in range(m):
        acc = DifferentialForm.zero(data.ring)
        for j in range(m):
            if data.frobenius[i][j].terms and images[j].terms:
                acc = acc + DifferentialForm.function(data.frobenius[i][j]) * images[j]
        out.append(acc)
    return tuple(out)


def section_scale(form: DifferentialForm, section) -> tuple:
    return tuple(form * s for s in section)


# ---------------------------------------------------------------------------
# the coefficient complex as a lazily generated weight-graded complex


class CrystalComplex(WeightGradedComplex):
    """E (x) Omega^* of the integral lift, graded by multiweight.

    The block of weight w and degree i has basis e_j (x) x^a dx_I with
    weight(e_j) + a + e_I = w. Blocks are generated on demand and cached,
    so no finite source window is needed.
    """

    def __init__(self, crystal: Crystal):
        if crystal.weights is None:
            raise NotHomogeneous("tower computations need a weight-homogeneous crystal and lift")
        self.crystal = crystal
        self.p = crystal.p
        self.ring = crystal.ring
        self.n = self.ring.nvars
        self.degrees = range(0, self.n + 1)
        self.basis_weights = crystal.weights
        self._cache: dict = {}

    def nweights(self):
        return self.n

    def is_weight(self, w):
        return any(all((a - c).denominator == 1 for a, c in zip(w, cw)) for cw in self.basis_weights)

    def labels(self, i, w):
        key = ("L", i, w)
        if key not in self._cache:
            self._cache[key] = self._labels(i, w)
        return self._cache[key]

    def _labels(self, i, w):
        if i < 0 or i > self.n:
            return ()
        out = []
        for j, cw in enumerate(self.basis_weights):
            diff = [a - c for a, c in zip(w, cw)]
            if any(x.denominator != 1 for x in diff):
                continue
            for idx in combinations(range(self.n), i):
                e = list(int(x) for x in diff)
                for k in idx:
                    e[k] -= 1
                if any(x < 0 and not lf for x, lf in zip(e, self.ring.laurent)):
                    continue
                out.append((j, tuple(e), idx))
        return tuple(out)

    def section(self, label) -> tuple:
        j, e, idx = label
        z = DifferentialForm.zero(self.ring)
        return tuple(DifferentialForm.monomial(self.ring, e, idx) if k == j else z
                     for k in range(self.crystal.rank))

    def vector(self, section, i, w) -> list:
        """Coordinates of a homogeneous section in block (i, w)."""
        labels = self.labels(i, w)
        index = {lab: t for t, lab in enumerate(labels)}
        out = [0] * len(labels)
        for j, form in enumerate(section):
            for (e, idx), c in form.terms.items():
                key = (j, e, idx)
                if key not in index:
                    raise WindowOverflow("section has a term outside the block",
                                         term=str(key), block=str((i, w)))
                out[index[key]] += c
        return out

    def element(self, vec, i, w) -> tuple:
        acc = [DifferentialForm.zero(self.ring) for _ in range(self.crystal.rank)]
        for c, lab in zip(vec, self.labels(i, w)):
            if c:
                j, e, idx = lab
                acc[j] = acc[j] + DifferentialForm.monomial(self.ring, e, idx, c)
        return tuple(acc)

    def _columns(self, op, i, w, ti, tw):
        return [self.vector(op(self.section(lab)), ti, tw) for lab in self.labels(i, w)]

    def d_matrix(self, i, w):
        key = ("d", i, w)
        if key not in self._cache:
            cols = self._columns(lambda s: nabla(self.crystal, s), i, w, i + 1, w)
            self._cache[key] = _cols_to_rows(cols, self.rank(i + 1, w))
        return self._cache[key]

    def f_matrix(self, i, w):
        key = ("f", i, w)
        if key not in self._cache:
            pw = tuple(self.p * x for x in w)
            cols = self._columns(lambda s: section_frobenius(self.crystal, s), i, w, i, pw)
            self._cache[key] = _cols_to_rows(cols, self.rank(i, pw))
        return self._cache[key]

    def undivided_matrix(self, i, w):
        pw = tuple(self.p * x for x in w)
        cols = self._columns(lambda s: section_frobenius(self.crystal, s, divided=False), i, w, i, pw)
        return _cols_to_rows(cols, self.rank(i, pw))


def _cols_to_rows(cols, nrows):
    return [[c[r] for c in cols] for r in range(nrows)]


# ---------------------------------------------------------------------------
# windowed coefficient complex


@dataclass
class CoefficientComplex:
    """Materialized blocks of E (x) Omega^* on a finite weight window.

    ``modulus`` is p^r when reduced to level r (None for the integral
    complex); ``clipped`` lists the blocks whose Frobenius image left the
    window (tolerant mode), in which case the F matrix is absent.
    """

    crystal: Crystal
    window: tuple
    modulus: int | None
    weights: list
    blocks: dict
    d: dict
    f: dict
    clipped: set


def window_weights(complex_: CrystalComplex, wmin, wmax, denominators: int = 0) -> list:
    """Weights in the box [wmin, wmax]^n with p-power denominators up to p^denominators."""
    p = complex_.p
    n = complex_.n
    classes = sorted({tuple(x - int(x // 1) for x in cw) for cw in complex_.basis_weights})
    out = set()
    for s in range(denominators + 1):
        q = p ** s
        for cls in classes:
            lo = [int((Fraction(wmin) * q - c) // 1) - 1 for c in cls]
            hi = [int((Fraction(wmax) * q - c) // 1) + 1 for c in cls]
            for a in product(*[range(lo[k], hi[k] + 1) for k in range(n)]):
                w = tuple((Fraction(x) + c) / q for x, c in zip(a, cls))
                if all(wmin <= x <= wmax for x in w):
                    out.add(w)
    return sorted(out, key=lambda w: (max((x.denominator for x in w), default=1), w))


def coeff_complex(crystal: Crystal, wmin, wmax, r: int | None = None, strict: bool = False) -> CoefficientComplex:
    """Assemble basis, connection and divided Frobenius matrices on a window.

    With ``r`` the matrices are reduced modulo p^r. F multiplies weights by
    p; images that leave the window raise WindowOverflow in strict mode and
    are recorded in ``clipped`` otherwise.
    """
    cx = CrystalComplex(crystal)
    mod = crystal.p ** r if r is not None else None
    weights = [w for w in window_weights(cx, wmin, wmax) if all(x.denominator == 1 for x in w) or cx.is_weight(w)]
    inside = set(weights)
    blocks, dm, fm, clipped = {}, {}, {}, set()

    def red(mat):
        return [[x % mod for x in row] for row in mat] if mod else mat

    for w in weights:
        for i in cx.degrees:
            if not cx.rank(i, w):
                continue
            blocks[(i, w)] = cx.labels(i, w)
            dm[(i, w)] = red(cx.d_or_zero(i, w))
            pw = tuple(crystal.p * x for x in w)
            if pw in inside or not cx.rank(i, pw):
                fm[(i, w)] = red(cx.f_or_zero(i, w))
            elif strict:
                raise WindowOverflow("Frobenius image leaves the weight window",
                                     block=[i, [str(x) for x in w]], image=[str(x) for x in pw])
            else:
                clipped.add((i, w))
    return CoefficientComplex(crystal, (wmin, wmax), mod, weights, blocks, dm, fm, clipped)


# ---------------------------------------------------------------------------
# JSON crystal files


def _ring_from_dict(doc) -> PolyRing:
    names = [v["name"] for v in doc.get("variables", [])]
    flags = [bool(v.get("laurent", False)) for v in doc.get("variables", [])]
    return PolyRing(tuple(names), tuple(flags))


def from_dict(doc: dict) -> UnitRootCrystalData:
    """Build crystal data from a parsed JSON crystal file (see ``parsing`` for the grammar)."""
    try:
        p = int(doc["p"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("crystal file needs an integer 'p'") from exc
    if not is_prime(p):
        raise ParseError(f"p = {p} is not prime")
    ring = _ring_from_dict(doc)
    phi_images = doc.get("phi") or {}
    images = tuple(parse_polynomial(phi_images[v], ring) if v in phi_images else ring.gen(v) ** p
                   for v in ring.variables)
    phi = FrobeniusLift(ring, p, images)
    m = int(doc.get("rank", 1))
    conn = doc.get("connection") or [["0"] * m for _ in range(m)]
    frob = doc.get("frobenius") or [["1" if i == j else "0" for j in range(m)] for i in range(m)]
    if len(conn) != m or len(frob) != m:
        raise ParseError("matrix sizes disagree with 'rank'")
    theta = [[parse_form(s, ring) for s in row] for row in conn]
    Phi = [[parse_polynomial(s, ring) for s in row] for row in frob]
    weights = doc.get("weights")
    if weights is not None:
        weights = [[Fraction(str(x)) for x in w] for w in weights]
    return UnitRootCrystalData(phi, theta, Phi, weights, name=doc.get("name", "file"))


def load_crystal(path) -> UnitRootCrystalData:
    return from_dict(json.loads(Path(path).read_text()))


def to_dict(data: UnitRootCrystalData) -> dict:
    ring = data.ring
    doc = {
        "p": data.p,
        "variables": [{"name": v, "laurent": lf} for v, lf in zip(ring.variables, ring.laurent)],
        "phi": {v: str(img) for v, img in zip(ring.variables, data.phi.images)},
        "rank": data.rank,
        "connection": [[str(th) for th in row] for row in data.connection],
        "frobenius": [[str(f) for f in row] for row in data.frobenius],
    }
    if data.weights is not None:
        doc["weights"] = [[str(x) for x in w] for w in data.weights]
    if data.name:
        doc["name"] = data.name
    return doc

