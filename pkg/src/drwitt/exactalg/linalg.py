"""Exact integer linear algebra: Smith/Hermite normal forms, lattices, solving.

Matrices are plain lists of rows of Python ints. Column vectors are lists.
All functions are pure; inputs are never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..errors import NotSublattice

Matrix = list  # list[list[int]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m: Matrix, cols: int | None = None) -> Matrix:
    if not m:
        return [[] for _ in range(cols or 0)]
    return [list(c) for c in zip(*m)]


def matmul(a: Matrix, b: Matrix, inner: int | None = None) -> Matrix:
    if not a:
        return []
    bt = transpose(b) if b else []
    ncols = len(b[0]) if b else 0
    if not b:
        return [[0] * ncols for _ in a]
    return [[sum(x * y for x, y in zip(row, col) if x and y) for col in bt] for row in a]


def matvec(a: Matrix, v: Sequence[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v) if x and y) for row in a]


def columns(m: Matrix) -> list[list[int]]:
    return transpose(m)


def from_columns(cols: Sequence[Sequence[int]], nrows: int) -> Matrix:
    if not cols:
        return [[] for _ in range(nrows)]
    return [list(r) for r in zip(*cols)]


def hstack(a: Matrix, b: Matrix) -> Matrix:
    return [list(x) + list(y) for x, y in zip(a, b)]


def determinant(m: Matrix) -> int:
    """Bareiss fraction-free determinant."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form


class ElementaryDivisors(tuple):
    """Invariant factors d_1 | d_2 | ... ; 0 encodes a free summand.

    Units (1) are kept internally; ``reported`` drops them.
    """

    def __new__(cls, values=()):
        vals = tuple(int(v) for v in values)
        nz = [v for v in vals if v != 0]
        for a, b in zip(nz, nz[1:]):
            if b % a:
                raise ValueError(f"divisibility chain broken: {a} does not divide {b}")
        if 0 in vals and any(v != 0 for v in vals[vals.index(0):]):
            raise ValueError("free summands must come last")
        return super().__new__(cls, vals)

    @property
    def reported(self) -> tuple:
        return tuple(v for v in self if v != 1)

    @property
    def order(self) -> int | None:
        """Group order, or None when a free summand is present."""
        if 0 in self:
            return None
        out = 1
        for v in self:
            out *= v
        return out

    def is_trivial(self) -> bool:
        return not self.reported


def _swap_rows(m, i, j):
    m[i], m[j] = m[j], m[i]


def _swap_cols(m, i, j):
    for row in m:
        row[i], row[j] = row[j], row[i]


def snf(m: Matrix, ncols: int | None = None):
    """Smith normal form with transforms.

    Returns ``(D, U, V)`` with ``U @ m @ V`` diagonal, diagonal entries
    ``D`` (length min(rows, cols)), ``U`` and ``V`` unimodular. Pivoting
    always picks the entry of least absolute value in the active block.
    """
    rows = len(m)
    cols = ncols if ncols is not None else (len(m[0]) if m else 0)
    a = [list(r) for r in m]
    u = identity(rows)
    v = identity(cols)
    t = 0
    while t < min(rows, cols):
        # pivot of minimal absolute value
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            _swap_rows(a, pi, t)
            _swap_rows(u, pi, t)
        if pj != t:
            _swap_cols(a, pj, t)
            _swap_cols(v, pj, t)
        while True:
            piv = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // piv
                    if q:
                        ra, rt = a[i], a[t]
                        for j in range(t, cols):
                            ra[j] -= q * rt[j]
                        ru, rut = u[i], u[t]
                        for j in range(rows):
                            ru[j] -= q * rut[j]
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // piv
                    if q:
                        for row in a:
                            row[j] -= q * row[t]
                        for row in v:
                            row[j] -= q * row[t]
                    if a[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remaining entry of row/col t onto the pivot
                best = (abs(a[t][t]), t, t)
                for i in range(t + 1, rows):
                    if a[i][t] and abs(a[i][t]) < best[0]:
                        best = (abs(a[i][t]), i, t)
                for j in range(t + 1, cols):
                    if a[t][j] and abs(a[t][j]) < best[0]:
                        best = (abs(a[t][j]), t, j)
                _, bi, bj = best
                if bi != t:
                    _swap_rows(a, bi, t)
                    _swap_rows(u, bi, t)
                if bj != t:
                    _swap_cols(a, bj, t)
                    _swap_cols(v, bj, t)
                continue
            # divisibility of the remaining block by the pivot
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            ra, rt = a[t], a[bad]
            for j in range(t, cols):
                ra[j] += rt[j]
            ru, rb = u[t], u[bad]
            for j in range(rows):
                ru[j] += rb[j]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    diag = [a[i][i] for i in range(min(rows, cols))]
    return diag, u, v


def smith_divisors(m: Matrix, ncols: int | None = None) -> ElementaryDivisors:
    d, _, _ = snf(m, ncols)
    nz = sorted(x for x in d if x)
    return ElementaryDivisors(nz + [0] * (len(d) - len(nz)))


def inverse_unimodular(u: Matrix) -> Matrix:
    """Exact inverse of a unimodular matrix (adjugate-free via SNF-style elimination)."""
    n = len(u)
    a = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(u)]
    for c in range(n):
        # gcd-reduce column c below row c
        while True:
            piv = None
            for i in range(c, n):
                if a[i][c] and (piv is None or abs(a[i][c]) < abs(a[piv][c])):
                    piv = i
            if piv is None:
                raise ValueError("matrix is singular")
            a[c], a[piv] = a[piv], a[c]
            done = True
            for i in range(c + 1, n):
                if a[i][c]:
                    q = a[i][c] // a[c][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[c])]
                    if a[i][c]:
                        done = False
            if done:
                break
        if abs(a[c][c]) != 1:
            raise ValueError("matrix is not unimodular")
        if a[c][c] < 0:
            a[c] = [-x for x in a[c]]
    for c in range(n - 1, -1, -1):
        for i in range(c):
            if a[i][c]:
                q = a[i][c]
                a[i] = [x - q * y for x, y in zip(a[i], a[c])]
    return [row[n:] for row in a]


# ---------------------------------------------------------------------------
# Hermite normal form (column style)


def column_hnf(gens: Sequence[Sequence[int]], n: int) -> list[list[int]]:
    """Column Hermite normal form of the lattice spanned by ``gens`` in Z^n.

    Returns a list of basis columns. Column k has its pivot (first nonzero
    row) strictly below the pivot of column k-1, the pivot entry is
    positive, and entries of earlier columns in a pivot row are reduced
    into [0, pivot).
    """
    rows = [list(g) for g in gens if any(g)]
    basis = []
    r = 0
    for row_idx in range(n):
        if not rows:
            break
        # gcd-eliminate coordinate row_idx among remaining generators
        while True:
            nz = [g for g in rows if g[row_idx]]
            if len(nz) <= 1:
                break
            piv = min(nz, key=lambda g: abs(g[row_idx]))
            for g in nz:
                if g is piv:
                    continue
                q = g[row_idx] // piv[row_idx]
                for k in range(row_idx, n):
                    g[k] -= q * piv[k]
            rows = [g for g in rows if any(g)]
        nz = [g for g in rows if g[row_idx]]
        if not nz:
            continue
        piv = nz[0]
        rows = [g for g in rows if g is not piv]
        if piv[row_idx] < 0:
            piv = [-x for x in piv]
        basis.append((row_idx, piv))
        r += 1
    # reduce earlier columns modulo later pivots
    cols = [b for _, b in basis]
    for k, (pr, pc) in enumerate(basis):
        d = pc[pr]
        for j in range(k):
            q = cols[j][pr] // d
            if q:
                cols[j] = [x - q * y for x, y in zip(cols[j], pc)]
    return cols


# ---------------------------------------------------------------------------
# solving and kernels


def solve_integer(a: Matrix, b: Sequence[int], ncols: int | None = None):
    """One integer solution x of ``a x = b`` or None when none exists."""
    rows = len(a)
    cols = ncols if ncols is not None else (len(a[0]) if a else 0)
    if cols == 0:
        return [] if not any(b) else None
    d, u, v = snf(a, cols)
    ub = matvec(u, b)
    y = [0] * cols
    for i in range(rows):
        di = d[i] if i < len(d) else 0
        if di == 0:
            if ub[i]:
                return None
        else:
            if ub[i] % di:
                return None
            y[i] = ub[i] // di
    return matvec(v, y)


def integer_kernel(a: Matrix, ncols: int | None = None) -> list[list[int]]:
    """Basis (as columns) of {x in Z^n : a x = 0}."""
    cols = ncols if ncols is not None else (len(a[0]) if a else 0)
    if not a:
        return [[int(i == j) for i in range(cols)] for j in range(cols)]
    d, _, v = snf(a, cols)
    rank = sum(1 for x in d if x)
    vt = transpose(v)
    return [vt[j] for j in range(rank, cols)]


# ---------------------------------------------------------------------------
# lattices


@dataclass(frozen=True)
class Lattice:
    """Subgroup of Z^n, stored by its column Hermite basis."""

    n: int
    basis: tuple  # tuple of column tuples

    @classmethod
    def from_generators(cls, n: int, gens) -> "Lattice":
        gens = [list(g) for g in gens]
        for g in gens:
            if len(g) != n:
                raise ValueError("generator has wrong length")
        return cls(n, tuple(tuple(c) for c in column_hnf(gens, n)))

    @classmethod
    def standard(cls, n: int, scale: int = 1) -> "Lattice":
        return cls(n, tuple(tuple(scale * int(i == j) for i in range(n)) for j in range(n)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def is_full_rank(self) -> bool:
        return self.rank == self.n

    def matrix(self) -> Matrix:
        return from_columns(self.basis, self.n)

    def index(self) -> int:
        """[Z^n : L] for a full-rank lattice (product of HNF pivots)."""
        if not self.is_full_rank():
            raise ValueError("index of a non-full-rank lattice is infinite")
        out = 1
        for c in self.basis:
            out *= next(x for x in c if x)
        return out

    def scaled(self, k: int) -> "Lattice":
        return Lattice.from_generators(self.n, [[k * x for x in c] for c in self.basis])

    def __add__(self, other: "Lattice") -> "Lattice":
        return Lattice.from_generators(self.n, list(self.basis) + list(other.basis))

    def coordinates(self, v: Sequence[int]):
        """Integer coordinates of v in the basis, or None if v is not in L."""
        if not self.basis:
            return [] if not any(v) else None
        # triangular solve along pivots
        rem = list(v)
        coords = []
        for c in self.basis:
            pr = next(i for i, x in enumerate(c) if x)
            if rem[pr] % c[pr]:
                return None
            q = rem[pr] // c[pr]
            coords.append(q)
            if q:
                rem = [x - q * y for x, y in zip(rem, c)]
        if any(rem):
            return None
        return coords

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(c in self for c in other.basis)

    def intersect(self, other: "Lattice") -> "Lattice":
        if not self.basis or not other.basis:
            return Lattice(self.n, ())
        m = hstack(self.matrix(), [[-x for x in r] for r in other.matrix()])
        ker = integer_kernel(m, self.rank + other.rank)
        b = self.matrix()
        gens = [matvec(b, k[: self.rank]) for k in ker]
        return Lattice.from_generators(self.n, gens)

    def image(self, a: Matrix, m: int) -> "Lattice":
        """Image of L under a (m x n) matrix a."""
        return Lattice.from_generators(m, [matvec(a, c) for c in self.basis])

    def preimage(self, a: Matrix, target: "Lattice") -> "Lattice":
        """{x in L : a x in target} for an (m x n) matrix a."""
        if not self.basis:
            return self
        ab = [matvec(a, c) for c in self.basis]  # images of basis columns
        m = target.n
        if target.rank:
            big = hstack(from_columns(ab, m), [[-x for x in r] for r in target.matrix()])
        else:
            big = from_columns(ab, m)
        ker = integer_kernel(big, self.rank + target.rank)
        b = self.matrix()
        return Lattice.from_generators(self.n, [matvec(b, k[: self.rank]) for k in ker])


def lattice_quotient(sup: Lattice, sub: Lattice) -> ElementaryDivisors:
    """Elementary divisors of sup/sub (NotSublattice unless sub is inside sup)."""
    if sup.n != sub.n:
        raise ValueError("ambient ranks differ")
    coords = []
    for c in sub.basis:
        x = sup.coordinates(c)
        if x is None:
            raise NotSublattice("generator of sub is not in sup", column=list(c))
        coords.append(x)
    if sup.rank == 0:
        return ElementaryDivisors(())
    rel = from_columns(coords, sup.rank) if coords else zeros(sup.rank, 0)
    d, _, _ = snf(rel, len(coords))
    nz = sorted(x for x in d if x)
    return ElementaryDivisors(nz + [0] * (sup.rank - len(nz)))


class QuotientGroup:
    """The finitely generated group sup/sub in normalized form.

    ``coords(v)`` maps an ambient vector of sup to its residue vector along
    the nontrivial cyclic factors; ``gens`` are ambient representatives of
    the standard generators.
    """

    def __init__(self, sup: Lattice, sub: Lattice):
        self.sup = sup
        self.sub = sub
        k = sup.rank
        rel_cols = []
        for c in sub.basis:
            x = sup.coordinates(c)
            if x is None:
                raise NotSublattice("generator of sub is not in sup", column=list(c))
            rel_cols.append(x)
        rel = from_columns(rel_cols, k) if rel_cols else zeros(k, 0)
        d, u, _ = snf(rel, len(rel_cols))
        full = [d[i] if i < len(d) else 0 for i in range(k)]
        # snf diagonal is divisibility-ordered except for trailing zeros
        self._u = u
        uinv = inverse_unimodular(u) if k else []
        keep = [i for i in range(k) if full[i] != 1]
        self.keep = keep
        self.divisors = ElementaryDivisors([full[i] for i in keep])
        b = sup.matrix()
        uinv_cols = transpose(uinv) if k else []
        self.gens = [matvec(b, uinv_cols[i]) for i in keep]

    @property
    def is_zero(self) -> bool:
        return len(self.keep) == 0

    def reduce(self, c: Sequence[int]) -> tuple:
        return tuple(x % d if d else x for x, d in zip(c, self.divisors))

    def coords(self, v: Sequence[int]) -> tuple:
        z = self.sup.coordinates(v)
        if z is None:
            raise NotSublattice("vector is not in the ambient lattice", vector=list(v))
        uz = matvec(self._u, z) if z else []
        return self.reduce([uz[i] for i in self.keep])

    def relation_lattice(self) -> Lattice:
        """Lattice of integer vectors in generator coordinates that are zero."""
        k = len(self.keep)
        return Lattice.from_generators(k, [[d * int(i == j) for i in range(k)]
                                           for j, d in enumerate(self.divisors)])
