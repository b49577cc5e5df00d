"""Weight-graded cochain complexes of free Z-modules with a Frobenius.

A block is indexed by (degree i, weight w) where w is a tuple of
``Fraction`` (one entry per grading variable; the empty tuple for a
single-weight complex). d maps block (i, w) to (i + 1, w); F maps block
(i, w) to (i, p w).
"""

from __future__ import annotations

from fractions import Fraction

from .exactalg.linalg import matmul


def as_weight(w) -> tuple:
    if isinstance(w, (int, Fraction)):
        w = (w,)
    return tuple(Fraction(x) for x in w)


def scale_weight(w: tuple, k: int, p: int) -> tuple:
    """w * p^k (k may be negative)."""
    f = Fraction(p) ** k
    return tuple(x * f for x in w)


def weight_str(w: tuple) -> str:
    return "(" + ",".join(str(x) for x in w) + ")"


class WeightGradedComplex:
    """Abstract interface. Subclasses provide the three block methods."""

    p: int
    degrees: range = range(0)

    def labels(self, i: int, w: tuple) -> tuple:
        raise NotImplementedError

    def d_matrix(self, i: int, w: tuple) -> list:
        """Matrix of d from block (i, w) to (i + 1, w)."""
        raise NotImplementedError

    def f_matrix(self, i: int, w: tuple) -> list:
        """Matrix of F from block (i, w) to (i, p w)."""
        raise NotImplementedError

    def rank(self, i: int, w: tuple) -> int:
        if i not in self.degrees:
            return 0
        return len(self.labels(i, w))

    def is_weight(self, w: tuple) -> bool:
        """Whether blocks of weight w can be nonzero (integrality of w)."""
        return True

    def nweights(self) -> int:
        return 0

    # derived operations, common to every complex
    def d_or_zero(self, i, w):
        return self.d_matrix(i, w) if self.rank(i, w) and self.rank(i + 1, w) else \
            [[0] * self.rank(i, w) for _ in range(self.rank(i + 1, w))]

    def f_or_zero(self, i, w):
        pw = tuple(self.p * x for x in w)
        return self.f_matrix(i, w) if self.rank(i, w) and self.rank(i, pw) else \
            [[0] * self.rank(i, w) for _ in range(self.rank(i, pw))]


class ExplicitComplex(WeightGradedComplex):
    """Complex given by explicit block data (used for small hand-made inputs).

    ``ranks[(i, w)]`` is the block rank; ``d[(i, w)]`` and ``f[(i, w)]``
    are integer matrices. Missing d entries mean zero maps; missing F
    entries mean the identity when source and target ranks agree.
    """

    def __init__(self, p: int, ranks: dict, d: dict | None = None, f: dict | None = None,
                 weight_dim: int | None = None):
        self.p = p
        self.ranks = {(i, as_weight(w)): n for (i, w), n in ranks.items()}
        self.d = {(i, as_weight(w)): m for (i, w), m in (d or {}).items()}
        self.f = {(i, as_weight(w)): m for (i, w), m in (f or {}).items()}
        degs = [i for i, _ in self.ranks] or [0]
        self.degrees = range(min(degs), max(degs) + 1)
        ws = [w for _, w in self.ranks]
        self._dim = weight_dim if weight_dim is not None else (len(ws[0]) if ws else 0)

    def nweights(self):
        return self._dim

    def labels(self, i, w):
        return tuple(range(self.ranks.get((i, as_weight(w)), 0)))

    def is_weight(self, w):
        return all(x.denominator == 1 for x in w)

    def d_matrix(self, i, w):
        w = as_weight(w)
        if (i, w) in self.d:
            return self.d[(i, w)]
        return [[0] * self.rank(i, w) for _ in range(self.rank(i + 1, w))]

    def f_matrix(self, i, w):
        w = as_weight(w)
        if (i, w) in self.f:
            return self.f[(i, w)]
        n, m = self.rank(i, w), self.rank(i, tuple(self.p * x for x in w))
        return [[int(a == b) for b in range(n)] for a in range(m)]


class DirectSumComplex(WeightGradedComplex):
    """Blockwise direct sum of two complexes with the same p and grading."""

    def __init__(self, a: WeightGradedComplex, b: WeightGradedComplex):
        if a.p != b.p:
            raise ValueError("direct sum of complexes for different primes")
        self.p = a.p
        self.a, self.b = a, b
        lo = min(a.degrees.start if len(a.degrees) else 0, b.degrees.start if len(b.degrees) else 0)
        hi = max(a.degrees.stop if len(a.degrees) else 0, b.degrees.stop if len(b.degrees) else 0)
        self.degrees = range(lo, hi)

    def nweights(self):
        return max(self.a.nweights(), self.b.nweights())

    def is_weight(self, w):
        return self.a.is_weight(w) or self.b.is_weight(w)

    def labels(self, i, w):
        la = tuple(("L", x) for x in (self.a.labels(i, w) if i in self.a.degrees and self.a.is_weight(w) else ()))
        lb = tuple(("R", x) for x in (self.b.labels(i, w) if i in self.b.degrees and self.b.is_weight(w) else ()))
        return la + lb

    def _part_rank(self, c, i, w):
        return c.rank(i, w) if i in c.degrees and c.is_weight(w) else 0

    def _blockdiag(self, ma, mb, ra, ca, rb, cb):
        top = [list(row) + [0] * cb for row in ma] if ra else []
        bot = [[0] * ca + list(row) for row in mb] if rb else []
        return top + bot

    def d_matrix(self, i, w):
        ra, ca = self._part_rank(self.a, i + 1, w), self._part_rank(self.a, i, w)
        rb, cb = self._part_rank(self.b, i + 1, w), self._part_rank(self.b, i, w)
        ma = self.a.d_or_zero(i, w) if ra and ca else [[0] * ca for _ in range(ra)]
        mb = self.b.d_or_zero(i, w) if rb and cb else [[0] * cb for _ in range(rb)]
        return self._blockdiag(ma, mb, ra, ca, rb, cb)

    def f_matrix(self, i, w):
        pw = tuple(self.p * x for x in w)
        ra, ca = self._part_rank(self.a, i, pw), self._part_rank(self.a, i, w)
        rb, cb = self._part_rank(self.b, i, pw), self._part_rank(self.b, i, w)
        ma = self.a.f_or_zero(i, w) if ra and ca else [[0] * ca for _ in range(ra)]
        mb = self.b.f_or_zero(i, w) if rb and cb else [[0] * cb for _ in range(rb)]
        return self._blockdiag(ma, mb, ra, ca, rb, cb)


def check_complex_identities(c: WeightGradedComplex, weights) -> list:
    """Blockwise d d = 0 and d F = p F d; returns a list of failures."""
    failures = []
    p = c.p
    for w in weights:
        w = as_weight(w)
        pw = tuple(p * x for x in w)
        for i in c.degrees:
            if c.rank(i, w) == 0:
                continue
            dd = matmul(c.d_or_zero(i + 1, w), c.d_or_zero(i, w))
            if any(any(row) for row in dd):
                failures.append(("d^2", i, w))
            lhs = matmul(c.d_or_zero(i, pw), c.f_or_zero(i, w))
            rhs = matmul(c.f_or_zero(i + 1, w), c.d_or_zero(i, w))
            if c.rank(i + 1, pw) and any(a != p * b for ra, rb in zip(lhs, rhs) for a, b in zip(ra, rb)):
                failures.append(("dF=pFd", i, w))
    return failures

