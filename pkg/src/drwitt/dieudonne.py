"""Saturation of torsion-free Dieudonne complexes and the W_r tower.

Elements of the saturation are pairs (stage k, x) with x in the k-fold
decalage lattice of the ambient block, identified along
alpha_F: (k, x) ~ (k + 1, p^i F x). An element of true weight u at stage k
lives in the ambient block of weight u p^k. On representatives

    F(k, x) = (k, F x),   V(k, x) = (k + 1, p^(i+1) x),   d(k, x) = (k, d x),

and level r of the tower is L_K / (V^r + d V^r), computed at a stage K
large enough that the quotients have stopped changing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .complexes import ExplicitComplex, WeightGradedComplex, as_weight, scale_weight
from .errors import (
    AxiomViolation,
    ImageOutsideEta,
    NotInjective,
    NotStabilized,
    WindowIncoherent,
    WindowOverflow,
)
from .exactalg.linalg import (
    ElementaryDivisors,
    Lattice,
    QuotientGroup,
    from_columns,
    hstack,
    lattice_quotient,
    matvec,
    smith_divisors,
    solve_integer,
)


# ---------------------------------------------------------------------------
# decalage


def eta_p(complex_: WeightGradedComplex, w, lattices: dict | None = None) -> dict:
    """One application of the decalage to the blocks of weight w.

    ``lattices`` maps degree -> Lattice (default: the standard lattice);
    returns degree -> {x in p^i M^i : d x in p^(i+1) M^(i+1)}.
    """
    p = complex_.p
    w = as_weight(w)
    out = {}
    for i in complex_.degrees:
        n = complex_.rank(i, w)
        m = complex_.rank(i + 1, w)
        here = (lattices or {}).get(i) or Lattice.standard(n)
        nxt = (lattices or {}).get(i + 1) or Lattice.standard(m)
        scaled = here.scaled(p ** i)
        out[i] = scaled.preimage(complex_.d_or_zero(i, w), nxt.scaled(p ** (i + 1))) if m else scaled
    return out


def eta_p_power(complex_: WeightGradedComplex, i: int, w, k: int) -> Lattice:
    """Closed form of the k-fold decalage: p^(ik) {y : d y = 0 mod p^k}."""
    p = complex_.p
    w = as_weight(w)
    n, m = complex_.rank(i, w), complex_.rank(i + 1, w)
    base = Lattice.standard(n)
    if m and k:
        base = base.preimage(complex_.d_or_zero(i, w), Lattice.standard(m, p ** k))
    return base.scaled(p ** (i * k)) if i * k else base


def alpha_F(complex_: WeightGradedComplex, i: int, w, x, k: int | None = None) -> list:
    """p^i F x; with ``k`` the image is checked to lie in the stage k+1 lattice."""
    w = as_weight(w)
    y = [complex_.p ** i * c for c in matvec(complex_.f_or_zero(i, w), x)]
    if k is not None:
        pw = scale_weight(w, 1, complex_.p)
        if y not in eta_p_power(complex_, i, pw, k + 1):
            raise ImageOutsideEta("p^i F x is outside the decalage lattice; dF = pFd fails",
                                  degree=i, weight=[str(c) for c in w], vector=list(x))
    return y


def check_injective(complex_: WeightGradedComplex, i: int, w) -> None:
    n = complex_.rank(i, w)
    if not n:
        return
    fm = complex_.f_or_zero(i, w)
    divs = smith_divisors(fm, n) if fm else ElementaryDivisors([0] * n)
    if len([x for x in divs if x]) < n:
        raise NotInjective("F is not injective on a block", degree=i, weight=[str(c) for c in w])


# ---------------------------------------------------------------------------
# block cohomology of finite presentations


def block_cohomology(sup: Lattice, sub: Lattice, d_out=None, sub_next: Lattice | None = None,
                     d_in=None, sup_prev: Lattice | None = None) -> ElementaryDivisors:
    """H = {x in sup : d_out x in sub_next} / (sub + d_in sup_prev)."""
    cycles = sup
    if d_out is not None and sub_next is not None and sub_next.n:
        cycles = sup.preimage(d_out, sub_next)
    bounds = sub
    if d_in is not None and sup_prev is not None and sup_prev.rank:
        bounds = bounds + sup_prev.image(d_in, sup.n)
    return ElementaryDivisors(lattice_quotient(cycles, bounds).reported)


def mod_cohomology(complex_: WeightGradedComplex, i: int, w, modulus: int) -> ElementaryDivisors:
    """H^i of the weight-w blocks of the complex reduced modulo ``modulus``."""
    w = as_weight(w)
    n = complex_.rank(i, w)
    if not n:
        return ElementaryDivisors(())
    n_next, n_prev = complex_.rank(i + 1, w), complex_.rank(i - 1, w)
    return block_cohomology(
        Lattice.standard(n), Lattice.standard(n, modulus),
        complex_.d_or_zero(i, w) if n_next else None, Lattice.standard(n_next, modulus) if n_next else None,
        complex_.d_or_zero(i - 1, w) if n_prev else None, Lattice.standard(n_prev) if n_prev else None,
    )


# ---------------------------------------------------------------------------
# saturation


class Saturation:
    """Stage lattices of the saturation of a torsion-free Dieudonne complex.

    ``source_bound`` limits the ambient weights that may be touched (max
    absolute coordinate); beyond it blocks are tainted, or an error is
    raised when ``strict``. ``kmax`` caps the stabilization search.
    """

    def __init__(self, complex_: WeightGradedComplex, kmax: int | None = None, confirm: int = 2,
                 source_bound=None, strict: bool = False):
        self.complex = complex_
        self.p = complex_.p
        self.kmax = kmax
        self.confirm = confirm
        self.source_bound = Fraction(source_bound) if source_bound is not None else None
        self.strict = strict
        self._lat: dict = {}
        self._injective: set = set()
        self._touched: set = set()
        if isinstance(complex_, ExplicitComplex):
            for i, w in complex_.ranks:
                self._check_block(i, w)

    @property
    def degrees(self):
        return self.complex.degrees

    def nweights(self):
        return self.complex.nweights()

    def ambient(self, u, k: int) -> tuple:
        return scale_weight(as_weight(u), k, self.p)

    def k0(self, u, limit: int = 64):
        """Smallest stage at which weight u has an ambient block, or None."""
        u = as_weight(u)
        for k in range(limit + 1):
            if self.complex.is_weight(self.ambient(u, k)):
                return k
        return None

    def _touch(self, w) -> bool:
        """Record use of ambient weight w; False when it is outside the source bound."""
        if self.source_bound is None or all(abs(x) <= self.source_bound for x in w):
            return True
        if self.strict:
            raise WindowOverflow("computation needs an ambient block outside the source bound",
                                 weight=[str(x) for x in w], bound=str(self.source_bound))
        self._touched.add(w)
        return False

    def _check_block(self, i, w):
        key = (i, as_weight(w))
        if key not in self._injective:
            check_injective(self.complex, i, key[1])
            self._injective.add(key)

    def lattice(self, i: int, w, k: int) -> Lattice:
        """Stage-k lattice in the ambient block (i, w)."""
        w = as_weight(w)
        key = (i, w, k)
        if key not in self._lat:
            self._touch(w)
            self._lat[key] = eta_p_power(self.complex, i, w, k) if k >= 0 else Lattice(self.complex.rank(i, w), ())
        return self._lat[key]

    def alpha(self, i: int, w, x) -> list:
        self._check_block(i, w)
        self._touch(scale_weight(as_weight(w), 1, self.p))
        return alpha_F(self.complex, i, w, x)

    def frobenius(self, i: int, w, x) -> list:
        self._check_block(i, w)
        return matvec(self.complex.f_or_zero(i, as_weight(w)), x)

    def differential(self, i: int, w, x) -> list:
        w = as_weight(w)
        if not self.complex.rank(i + 1, w):
            return []
        return matvec(self.complex.d_or_zero(i, w), x)

    def is_tainted(self, weights) -> bool:
        return any(not self._touch_ok(w) for w in weights)

    def _touch_ok(self, w):
        return self.source_bound is None or all(abs(x) <= self.source_bound for x in w)


def saturate(complex_: WeightGradedComplex, kmax: int | None = None, confirm: int = 2,
             source_bound=None, strict: bool = False) -> Saturation:
    return Saturation(complex_, kmax=kmax, confirm=confirm, source_bound=source_bound, strict=strict)


# ---------------------------------------------------------------------------
# tower levels


@dataclass(frozen=True)
class TowerBlock:
    level: int
    degree: int
    weight: tuple
    divisors: ElementaryDivisors
    stage: int  # stable stage
    confirmed: int  # number of confirming isomorphic transitions
    tainted: bool = False

    @property
    def order(self) -> int:
        out = 1
        for x in self.divisors:
            out *= x
        return out


@dataclass(frozen=True)
class TowerElement:
    level: int
    degree: int
    weight: tuple
    stage: int
    vector: tuple


class TowerLevel:
    """Level r of the tower, block by block, with stabilization detection."""

    def __init__(self, sat: Saturation, r: int, kmax: int | None = None, confirm: int | None = None):
        self.sat = sat
        self.r = r
        self.p = sat.p
        self.kmax = kmax if kmax is not None else (sat.kmax if sat.kmax is not None else r + 4)
        self.confirm = confirm if confirm is not None else sat.confirm
        self._rel: dict = {}
        self._quot: dict = {}
        self._blocks: dict = {}
        self._verified: dict = {}

    def start(self, u) -> int | None:
        k0 = self.sat.k0(u)
        return None if k0 is None else max(self.r, k0)

    def stage_lattice(self, i, u, K) -> Lattice:
        return self.sat.lattice(i, self.sat.ambient(u, K), K)

    def relations(self, i: int, u, K: int) -> Lattice:
        """V^r and d V^r images at stage K inside block (i, u)."""
        key = (i, u, K)
        if key not in self._rel:
            p, r, sat = self.p, self.r, self.sat
            w = sat.ambient(u, K)
            n = sat.complex.rank(i, w)
            a = sat.lattice(i, w, K - r)
            gens = [[p ** (r * (i + 1)) * x for x in c] for c in a.basis]
            if sat.complex.rank(i - 1, w) and n:
                b = sat.lattice(i - 1, w, K - r)
                dm = sat.complex.d_or_zero(i - 1, w)
                gens += [[p ** (r * i) * x for x in matvec(dm, c)] for c in b.basis]
            self._rel[key] = Lattice.from_generators(n, gens)
        return self._rel[key]

    def quotient(self, i: int, u, K: int) -> QuotientGroup:
        key = (i, u, K)
        if key not in self._quot:
            self._quot[key] = QuotientGroup(self.stage_lattice(i, u, K), self.relations(i, u, K))
        return self._quot[key]

    def transition_is_iso(self, i: int, u, K: int) -> bool:
        """Whether alpha_F induces an isomorphism from stage K to stage K+1."""
        sat = self.sat
        w = sat.ambient(u, K)
        src, dst = self.stage_lattice(i, u, K), self.stage_lattice(i, u, K + 1)
        rel_src, rel_dst = self.relations(i, u, K), self.relations(i, u, K + 1)
        img = [sat.alpha(i, w, list(c)) for c in src.basis]
        for v in img:
            if v not in dst:
                raise ImageOutsideEta("transition leaves the next stage lattice",
                                      degree=i, weight=[str(x) for x in u], stage=K)
        for c in rel_src.basis:
            if sat.alpha(i, w, list(c)) not in rel_dst:
                raise AxiomViolation("transition does not preserve the V^r + dV^r relations",
                                     axiom="well-defined transition", degree=i, weight=[str(x) for x in u])
        spanned = Lattice.from_generators(dst.n, img) + rel_dst
        if not spanned.contains_lattice(dst):
            return False
        return self.quotient(i, u, K).divisors == self.quotient(i, u, K + 1).divisors

    def block(self, i: int, u) -> TowerBlock:
        u = as_weight(u)
        key = (i, u)
        if key in self._blocks:
            return self._blocks[key]
        if i not in self.sat.degrees:
            blk = TowerBlock(self.r, i, u, ElementaryDivisors(()), 0, 0)
            self._blocks[key] = blk
            return blk
        start = self.start(u)
        if start is None:
            blk = TowerBlock(self.r, i, u, ElementaryDivisors(()), 0, 0)
            self._blocks[key] = blk
            return blk
        if start > self.kmax:
            raise NotStabilized("no stage within K_max is available for this block",
                                degree=i, weight=[str(x) for x in u], kmax=self.kmax)
        if self.sat.source_bound is not None and not self.sat._touch_ok(self.sat.ambient(u, start)):
            if self.sat.strict:
                raise WindowIncoherent("weight leaves the source window before any stage exists",
                                       degree=i, weight=[str(x) for x in u])
        run, K = 0, start
        while run < self.confirm:
            if K + 1 > self.kmax:
                raise NotStabilized("W_r block did not stabilize within K_max stages",
                                    degree=i, weight=[str(x) for x in u], kmax=self.kmax)
            run = run + 1 if self.transition_is_iso(i, u, K) else 0
            K += 1
        stable = K - self.confirm
        tainted = any(not self.sat._touch_ok(self.sat.ambient(u, k)) for k in range(stable, K + 2))
        blk = TowerBlock(self.r, i, u, self.quotient(i, u, stable).divisors, stable, self.confirm, tainted)
        self._blocks[key] = blk
        self._verified[key] = K
        return blk

    def ensure_verified(self, i: int, u, K: int) -> None:
        """Check the transitions up to stage K for a block already declared stable."""
        blk = self.block(i, u)
        key = (i, blk.weight)
        top = self._verified.get(key, blk.stage)
        while top < K:
            if not self.transition_is_iso(i, blk.weight, top):
                raise NotStabilized("a block declared stable changed at a later stage",
                                    degree=i, weight=[str(x) for x in blk.weight], stage=top)
            top += 1
        self._verified[key] = top

    def generators(self, i: int, u) -> list:
        blk = self.block(i, u)
        if blk.divisors.is_trivial() and not len(blk.divisors):
            return []
        q = self.quotient(i, blk.weight, blk.stage)
        return [TowerElement(self.r, i, blk.weight, blk.stage, tuple(g)) for g in q.gens]


def tower(sat: Saturation, r: int, confirm: int | None = None, kmax: int | None = None) -> TowerLevel:
    return TowerLevel(sat, r, kmax=kmax, confirm=confirm)


# ---------------------------------------------------------------------------
# the whole tower with its operators


class Tower:
    """Levels 0..r_max of the tower of one saturation, with F, V, R, d on elements.

    Level 0 is the zero group. ``fault`` injects a deliberate defect for
    harness self-tests (``"verschiebung"`` scales V by 2).
    """

    def __init__(self, sat: Saturation, r_max: int, confirm: int | None = None, kmax: int | None = None,
                 fault: str | None = None):
        self.sat = sat
        self.p = sat.p
        self.r_max = r_max
        self.fault = fault
        self._kmax = kmax
        self._confirm = confirm
        self._levels: dict = {}

    def level(self, r: int) -> TowerLevel:
        if r not in self._levels:
            kmax = self._kmax
            if kmax is None and self.sat.kmax is None:
                kmax = r + 4
            self._levels[r] = TowerLevel(self.sat, r, kmax=kmax, confirm=self._confirm)
        return self._levels[r]

    def block(self, r: int, i: int, u) -> TowerBlock:
        return self.level(r).block(i, u)

    # representative-level operators
    def raise_stage(self, x: TowerElement, k: int = 1) -> TowerElement:
        v = list(x.vector)
        for j in range(k):
            v = self.sat.alpha(x.degree, self.sat.ambient(x.weight, x.stage + j), v)
        return TowerElement(x.level, x.degree, x.weight, x.stage + k, tuple(v))

    def F(self, x: TowerElement) -> TowerElement:
        w = self.sat.ambient(x.weight, x.stage)
        v = self.sat.frobenius(x.degree, w, list(x.vector))
        return TowerElement(x.level - 1, x.degree, scale_weight(x.weight, 1, self.p), x.stage, tuple(v))

    def V(self, x: TowerElement) -> TowerElement:
        s = self.p ** (x.degree + 1) * (2 if self.fault == "verschiebung" else 1)
        return TowerElement(x.level + 1, x.degree, scale_weight(x.weight, -1, self.p), x.stage + 1,
                            tuple(s * c for c in x.vector))

    def d(self, x: TowerElement) -> TowerElement:
        w = self.sat.ambient(x.weight, x.stage)
        v = self.sat.differential(x.degree, w, list(x.vector))
        return TowerElement(x.level, x.degree + 1, x.weight, x.stage, tuple(v))

    def R(self, x: TowerElement, k: int = 1) -> TowerElement:
        return TowerElement(x.level - k, x.degree, x.weight, x.stage, x.vector)

    def scale(self, x: TowerElement, c: int) -> TowerElement:
        return TowerElement(x.level, x.degree, x.weight, x.stage, tuple(c * a for a in x.vector))

    def add(self, x: TowerElement, y: TowerElement) -> TowerElement:
        if (x.level, x.degree, x.weight) != (y.level, y.degree, y.weight):
            raise ValueError("elements live in different blocks")
        k = max(x.stage, y.stage)
        x, y = self.raise_stage(x, k - x.stage), self.raise_stage(y, k - y.stage)
        return TowerElement(x.level, x.degree, x.weight, k, tuple(a + b for a, b in zip(x.vector, y.vector)))

    def zero(self, r, i, u) -> TowerElement:
        u = as_weight(u)
        lev = self.level(r)
        K = lev.block(i, u).stage if r > 0 else 0
        n = self.sat.complex.rank(i, self.sat.ambient(u, K))
        return TowerElement(r, i, u, K, (0,) * n)

    # comparison
    def _common(self, x: TowerElement) -> tuple:
        """(stage, vector, quotient) with the stage at least the stable one."""
        if x.level <= 0:
            return x.stage, x.vector, None
        lev = self.level(x.level)
        blk = lev.block(x.degree, x.weight)
        if not blk.divisors and not self.sat.complex.rank(x.degree, self.sat.ambient(x.weight, x.stage)):
            return x.stage, x.vector, None
        if x.stage < blk.stage:
            x = self.raise_stage(x, blk.stage - x.stage)
        lev.ensure_verified(x.degree, x.weight, x.stage)
        return x.stage, x.vector, lev.quotient(x.degree, x.weight, x.stage)

    def is_zero(self, x: TowerElement) -> bool:
        if x.level <= 0 or not any(x.vector):
            return True
        _, v, q = self._common(x)
        if q is None:
            return True
        return q.is_zero or not any(q.coords(list(v)))

    def equal(self, x: TowerElement, y: TowerElement) -> bool:
        if (x.level, x.degree, x.weight) != (y.level, y.degree, y.weight):
            if x.level <= 0 and y.level <= 0:
                return True
            return False
        return self.is_zero(self.add(x, self.scale(y, -1)))

    def coords(self, x: TowerElement) -> tuple:
        """Coordinates of x in the normalized generators of its block at the stable stage."""
        if x.level <= 0:
            return ()
        lev = self.level(x.level)
        blk = lev.block(x.degree, x.weight)
        q = lev.quotient(x.degree, x.weight, blk.stage)
        if x.stage <= blk.stage:
            y = self.raise_stage(x, blk.stage - x.stage)
            return q.coords(list(y.vector))
        # lower the stage: solve alpha^j z + n = x with z in the stable lattice
        j = x.stage - blk.stage
        lev.ensure_verified(x.degree, x.weight, x.stage)
        src = lev.stage_lattice(x.degree, x.weight, blk.stage)
        imgs = []
        for c in src.basis:
            e = self.raise_stage(TowerElement(x.level, x.degree, x.weight, blk.stage, c), j)
            imgs.append(list(e.vector))
        rel = lev.relations(x.degree, x.weight, x.stage)
        n = len(x.vector)
        a = hstack(from_columns(imgs, n), from_columns([list(c) for c in rel.basis], n)) if n else []
        sol = solve_integer(a, list(x.vector), len(imgs) + rel.rank)
        if sol is None:
            raise AxiomViolation("element does not descend to the stable stage",
                                 axiom="stabilization", degree=x.degree, weight=[str(c) for c in x.weight])
        z = sol[: len(imgs)]
        vec = [0] * n
        for coef, c in zip(z, src.basis):
            vec = [a + coef * b for a, b in zip(vec, c)]
        return q.coords(vec)

    def from_coords(self, r, i, u, coords) -> TowerElement:
        lev = self.level(r)
        gens = lev.generators(i, u)
        out = self.zero(r, i, u)
        for c, g in zip(coords, gens):
            out = self.add(out, self.scale(g, c))
        return out

    def generators(self, r, i, u) -> list:
        if r <= 0:
            return []
        return self.level(r).generators(i, as_weight(u))

    def operator_matrix(self, op: str, r: int, i: int, u) -> list:
        """Matrix (rows = target generators) of F, V, R or d on the block (r, i, u)."""
        fn = {"F": self.F, "V": self.V, "R": self.R, "d": self.d}[op]
        cols = [list(self.coords(fn(g))) for g in self.generators(r, i, u)]
        if not cols:
            return []
        return [[c[k] for c in cols] for k in range(len(cols[0]))]


# ---------------------------------------------------------------------------
# weights, cohomology and axioms


def tower_weights(sat: Saturation, wmin, wmax, max_exp: int) -> list:
    """True weights in the box [wmin, wmax]^n with p-power denominators up to p^max_exp."""
    p = sat.p
    n = sat.nweights()
    wmin, wmax = Fraction(wmin), Fraction(wmax)
    classes = [{Fraction(0)} for _ in range(n)]
    bw = getattr(sat.complex, "basis_weights", None)
    if bw:
        classes = [{cw[k] - (cw[k].numerator // cw[k].denominator) for cw in bw} for k in range(n)]
    axes = []
    for k in range(n):
        vals = set()
        for s in range(max_exp + 1):
            q = p ** s
            for c in classes[k]:
                lo = int((wmin * q - c) // 1) - 1
                hi = int((wmax * q - c) // 1) + 1
                for a in range(lo, hi + 1):
                    v = (c + a) / q
                    if wmin <= v <= wmax:
                        vals.add(v)
        axes.append(sorted(vals))
    out = []
    for u in product(*axes):
        u = tuple(u)
        k0 = sat.k0(u, limit=max_exp + 1)
        if k0 is not None:
            out.append(u)
    return sorted(out, key=lambda u: (max((x.denominator for x in u), default=1), u))


def tower_cohomology(tw: Tower, r: int, i: int, u) -> ElementaryDivisors:
    """H^i of level r in true weight u."""
    u = as_weight(u)
    lev = tw.level(r)
    sat = tw.sat
    blocks = [lev.block(j, u) for j in (i - 1, i, i + 1)]
    K = max([b.stage for b in blocks] + [lev.start(u) or 0])
    for j in (i - 1, i, i + 1):
        if j in sat.degrees and lev.block(j, u).divisors:
            lev.ensure_verified(j, u, K)
    w = sat.ambient(u, K)
    n = sat.complex.rank(i, w)
    if i not in sat.degrees or not n:
        return ElementaryDivisors(())
    sup = lev.stage_lattice(i, u, K)
    sub = lev.relations(i, u, K)
    has_next = i + 1 in sat.degrees and sat.complex.rank(i + 1, w)
    has_prev = i - 1 in sat.degrees and sat.complex.rank(i - 1, w)
    return block_cohomology(
        sup, sub,
        sat.complex.d_or_zero(i, w) if has_next else None,
        lev.relations(i + 1, u, K) if has_next else None,
        sat.complex.d_or_zero(i - 1, w) if has_prev else None,
        lev.stage_lattice(i - 1, u, K) if has_prev else None,
    )


AXIOMS = (
    "R surjective",
    "FV = p",
    "VF = p",
    "F dV = d",
    "RF = FR",
    "RV = VR",
    "p^s annihilates level s",
    "ker R = im V^s + im dV^s",
)


@dataclass
class AxiomReport:
    passed: bool = True
    counts: dict = field(default_factory=lambda: {a: 0 for a in AXIOMS})
    failures: list = field(default_factory=list)

    def to_json(self):
        return {"check": "tower_axioms", "passed": self.passed, "counts": self.counts,
                "failures": self.failures}


def tower_axioms_check(tw: Tower, weights, r_max: int | None = None, raise_on_failure: bool = True) -> AxiomReport:
    """Verify the eight strict-tower axioms blockwise on the given true weights."""
    p = tw.p
    r_max = r_max or tw.r_max
    rep = AxiomReport()
    weights = [as_weight(u) for u in weights]
    degrees = list(tw.sat.degrees)

    def fail(axiom, s, i, u, **extra):
        rep.passed = False
        item = {"axiom": axiom, "level": s, "degree": i, "weight": [str(x) for x in u]}
        item.update({k: str(v) for k, v in extra.items()})
        rep.failures.append(item)
        if raise_on_failure:
            raise AxiomViolation(f"tower axiom '{axiom}' fails", **item)

    for s in range(1, r_max + 1):
        lev = tw.level(s)
        for u in weights:
            for i in degrees:
                blk = lev.block(i, u)
                gens = tw.generators(s, i, u)
                # p^s annihilates level s
                rep.counts[AXIOMS[6]] += 1
                if any(x == 0 or (p ** s) % x for x in blk.divisors):
                    fail(AXIOMS[6], s, i, u, divisors=list(blk.divisors))
                for g in gens:
                    # FV = p at level s
                    if s + 1 <= r_max + 1:
                        rep.counts[AXIOMS[1]] += 1
                        if not tw.equal(tw.F(tw.V(g)), tw.scale(g, p)):
                            fail(AXIOMS[1], s, i, u, element=g.vector)
                    # VF = p at level s (F to level s-1, V back)
                    if s >= 2:
                        rep.counts[AXIOMS[2]] += 1
                        if not tw.equal(tw.V(tw.F(g)), tw.scale(g, p)):
                            fail(AXIOMS[2], s, i, u, element=g.vector)
                    # F dV = d
                    if i + 1 in tw.sat.degrees:
                        rep.counts[AXIOMS[3]] += 1
                        if not tw.equal(tw.F(tw.d(tw.V(g))), tw.d(g)):
                            fail(AXIOMS[3], s, i, u, element=g.vector)
                    # RF = FR (level s -> s - 2)
                    if s >= 3:
                        rep.counts[AXIOMS[4]] += 1
                        if not tw.equal(tw.R(tw.F(g)), tw.F(tw.R(g))):
                            fail(AXIOMS[4], s, i, u, element=g.vector)
                    # RV = VR (level s -> s)
                    if s >= 2:
                        rep.counts[AXIOMS[5]] += 1
                        if not tw.equal(tw.R(tw.V(g)), tw.V(tw.R(g))):
                            fail(AXIOMS[5], s, i, u, element=g.vector)
                if s >= 2:
                    _check_restriction(tw, s, i, u, rep, fail)
    return rep


def _check_restriction(tw: Tower, s: int, i: int, u, rep: AxiomReport, fail) -> None:
    """R: level s -> s-1 is surjective with kernel im V^(s-1) + im dV^(s-1)."""
    p = tw.p
    upper, lower = tw.level(s), tw.level(s - 1)
    bu = upper.block(i, u)
    bl = lower.block(i, u)
    K = max(bu.stage, bl.stage, upper.start(u) or 0)
    upper.ensure_verified(i, u, K)
    lower.ensure_verified(i, u, K)
    sup = upper.stage_lattice(i, u, K)
    rep.counts[AXIOMS[0]] += 1
    gens = [tw.raise_stage(g, K - g.stage).vector for g in tw.generators(s, i, u)]
    spanned = Lattice.from_generators(sup.n, gens) + lower.relations(i, u, K)
    if not spanned.contains_lattice(sup):
        fail(AXIOMS[0], s, i, u)
    # kernel: classes at level s killed by R, against V^(s-1) and dV^(s-1) of level-1 elements
    rep.counts[AXIOMS[7]] += 1
    k = s - 1
    images = []
    src_w = scale_weight(as_weight(u), k, p)
    for g in tw.generators(1, i, src_w):
        x = g
        for _ in range(k):
            x = tw.V(x)
        images.append(x)
    if i - 1 in tw.sat.degrees:
        for g in tw.generators(1, i - 1, src_w):
            x = g
            for _ in range(k):
                x = tw.V(x)
            images.append(tw.d(x))
    # representatives of level-1 classes only generate modulo V + dV, which V^k carries into the level-s relations
    vecs = []
    for x in images:
        x = TowerElement(s, x.degree, x.weight, x.stage, x.vector)
        if x.stage > K:
            upper.ensure_verified(i, u, x.stage)
            K2 = x.stage
        else:
            x = tw.raise_stage(x, K - x.stage)
            K2 = K
        vecs.append((K2, x.vector))
    K3 = max([K] + [k2 for k2, _ in vecs])
    upper.ensure_verified(i, u, K3)
    lower.ensure_verified(i, u, K3)
    lifted = []
    for k2, v in vecs:
        e = tw.raise_stage(TowerElement(s, i, as_weight(u), k2, v), K3 - k2)
        lifted.append(list(e.vector))
    n = upper.stage_lattice(i, u, K3).n
    generated = Lattice.from_generators(n, lifted) + upper.relations(i, u, K3)
    kernel = lower.relations(i, u, K3)
    if not (generated.contains_lattice(kernel) and kernel.contains_lattice(generated)):
        fail(AXIOMS[7], s, i, u)


def direct_sum_divisors(a: ElementaryDivisors, b: ElementaryDivisors) -> ElementaryDivisors:
    """Elementary divisors of the direct sum of two finite groups."""
    vals = list(a) + list(b)
    if not vals:
        return ElementaryDivisors(())
    m = [[v if i == j else 0 for j in range(len(vals))] for i, v in enumerate(vals)]
    return ElementaryDivisors([x for x in smith_divisors(m, len(vals)) if x != 1])
