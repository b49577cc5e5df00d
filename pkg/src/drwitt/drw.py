"""The saturated de Rham-Witt tower with unit-root coefficients and its checks.

The tower is the W_r tower of the saturation of E (x) Omega^* of the lift.
lambda_r sends a section of the coefficient complex mod p^r, of integral
weight w, to the class of the stage-0 element (0, x). The trivial-coefficient
tower of the same lift is built alongside and acts on the tower by wedge
product of representatives at a common stage.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .complexes import as_weight, scale_weight, weight_str
from .crystal import Crystal, CrystalComplex, restrict_laurent, trivial, validate
from .derham import DifferentialForm
from .dieudonne import (
    Saturation,
    Tower,
    TowerElement,
    mod_cohomology,
    tower_axioms_check,
    tower_cohomology,
    tower_weights,
)
from .errors import (
    ActionOverflow,
    BaseChangeMismatch,
    Mismatch,
    NotHomogeneous,
    QuasiIsoFailure,
    WindowOverflow,
)
from .exactalg.linalg import ElementaryDivisors, Lattice, lattice_quotient, matvec
from .exactalg.poly import valuation

SCHEMA = "drw/1"


class DRWTower:
    """Levels 1..r_max of the tower of a validated crystal on a weight window."""

    def __init__(self, crystal: Crystal, r_max: int, wmin=0, wmax=None, kmax: int | None = None,
                 confirm: int = 2, source_bound=None, strict: bool = False, fault: str | None = None,
                 max_exp: int | None = None, with_trivial: bool = True):
        if not crystal.phi.is_monomial() or any(
                next(iter(img.terms.values())) != 1 for img in crystal.phi.images):
            raise NotHomogeneous("towers need the lift phi(x_i) = x_i^p")
        self.crystal = crystal
        self.p = crystal.p
        self.r_max = r_max
        self.window = (Fraction(wmin), Fraction(wmax if wmax is not None else crystal.p ** 2))
        self.kmax = kmax
        self.confirm = confirm
        self.strict = strict
        self.fault = fault
        self.complex = CrystalComplex(crystal)
        self.sat = Saturation(self.complex, kmax=kmax, confirm=confirm, source_bound=source_bound,
                              strict=strict)
        self.tower = Tower(self.sat, r_max, confirm=confirm, kmax=kmax, fault=fault)
        self.max_exp = max_exp if max_exp is not None else r_max
        self.weights = tower_weights(self.sat, self.window[0], self.window[1], self.max_exp)
        self._trivial = None
        self._with_trivial = with_trivial

    # -- structure ------------------------------------------------------
    @property
    def ring(self):
        return self.crystal.ring

    @property
    def degrees(self):
        return self.complex.degrees

    @property
    def trivial_tower(self) -> "DRWTower":
        if self._trivial is None:
            data = self.crystal.data
            if data.rank == 1 and all(w == 0 for w in self.crystal.weights[0]) and \
                    not data.connection[0][0].terms and data.frobenius[0][0] == self.ring.one():
                self._trivial = self
            else:
                triv = validate(trivial(self.ring, self.p, phi=self.crystal.phi))
                self._trivial = DRWTower(triv, self.r_max, *self.window, kmax=self.kmax,
                                         confirm=self.confirm, max_exp=self.max_exp)
        return self._trivial

    def integral_weights(self) -> list:
        return [u for u in self.weights if self.sat.k0(u, 0) == 0]

    def fractional_weights(self) -> list:
        return [u for u in self.weights if self.sat.k0(u, 0) != 0]

    def build(self) -> "DRWTower":
        """Compute every block of every level on the window."""
        for r in range(1, self.r_max + 1):
            for u in self.weights:
                for i in self.degrees:
                    self.tower.block(r, i, u)
        return self

    def blocks(self, r: int, nonzero: bool = True) -> list:
        out = []
        for u in self.weights:
            for i in self.degrees:
                b = self.tower.block(r, i, u)
                if b.divisors or not nonzero:
                    out.append(b)
        return out

    # -- lambda and the action -----------------------------------------
    def lambda_vector(self, r: int, i: int, w, vec) -> TowerElement:
        w = as_weight(w)
        if self.fault == "lambda":
            vec = [0] * len(vec)
        return TowerElement(r, i, w, 0, tuple(vec))

    def lambda_apply(self, r: int, section, i: int | None = None, w=None) -> TowerElement:
        """Image under lambda_r of a homogeneous section (tuple of forms, one per basis vector)."""
        if isinstance(section, DifferentialForm):
            section = (section,)
        if w is None or i is None:
            i, w = _section_block(self.complex, section)
        w = as_weight(w)
        if self.sat.source_bound is not None and not self.sat._touch_ok(w):
            raise WindowOverflow("section lies outside the source window", weight=weight_str(w))
        return self.lambda_vector(r, i, w, self.complex.vector(section, i, w))

    def unit(self, r: int) -> TowerElement:
        """lambda_r(1) in the trivial tower."""
        triv = self.trivial_tower
        n = triv.complex.nweights()
        one = DifferentialForm.function(self.ring.one())
        return triv.lambda_apply(r, (one,), 0, (Fraction(0),) * n)

    def module_action(self, r: int, a: TowerElement, m: TowerElement) -> TowerElement:
        """a . m for a in the trivial tower and m in this tower, both at level r."""
        triv = self.trivial_tower
        if a.level != m.level:
            raise ValueError("scalar and element must be at the same level")
        k = max(a.stage, m.stage)
        a = triv.tower.raise_stage(a, k - a.stage)
        m = self.tower.raise_stage(m, k - m.stage)
        wa, wm = self.sat.ambient(a.weight, k), self.sat.ambient(m.weight, k)
        wt = tuple(x + y for x, y in zip(wa, wm))
        if self.sat.source_bound is not None and not self.sat._touch_ok(wt):
            if self.strict:
                raise ActionOverflow("action product leaves the source window", weight=weight_str(wt))
        form = triv.complex.element(list(a.vector), a.degree, wa)[0]
        sec = self.complex.element(list(m.vector), m.degree, wm)
        prod = tuple(form * s for s in sec)
        deg = a.degree + m.degree
        vec = self.complex.vector(prod, deg, wt) if deg in self.degrees else ()
        u = tuple(x + y for x, y in zip(a.weight, m.weight))
        return TowerElement(r, deg, u, k, tuple(vec))


def build(crystal: Crystal, r_max: int, wmin=0, wmax=None, **kw) -> DRWTower:
    return DRWTower(crystal, r_max, wmin, wmax, **kw).build()


def lambda_apply(tower: DRWTower, r: int, section, i=None, w=None) -> TowerElement:
    return tower.lambda_apply(r, section, i, w)


def module_action(tower: DRWTower, r: int, scalar: TowerElement, m: TowerElement) -> TowerElement:
    return tower.module_action(r, scalar, m)


def _section_block(cx: CrystalComplex, section):
    degs, wts = set(), set()
    for j, form in enumerate(section):
        for (e, idx), _ in form.terms.items():
            degs.add(len(idx))
            w = [Fraction(x) + c for x, c in zip(e, cx.basis_weights[j])]
            for k in idx:
                w[k] += 1
            wts.add(tuple(w))
    if len(degs) > 1 or len(wts) > 1:
        raise ValueError("section is not homogeneous")
    if not degs:
        raise ValueError("zero section has no block")
    return degs.pop(), wts.pop()


# ---------------------------------------------------------------------------
# reports


@dataclass
class CheckReport:
    check: str
    passed: bool = True
    compared: int = 0
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def fail(self, exc_type, message, raise_on_failure, **witness):
        self.passed = False
        self.failures.append({"message": message, **{k: _jsonable(v) for k, v in witness.items()}})
        if raise_on_failure:
            raise exc_type(message, **{k: _jsonable(v) for k, v in witness.items()})

    def to_json(self):
        out = {"check": self.check, "passed": self.passed, "compared": self.compared,
               "failures": self.failures}
        out.update(self.details)
        return out


def _jsonable(v):
    if isinstance(v, tuple) and v and isinstance(v[0], Fraction):
        return weight_str(v)
    if isinstance(v, (Fraction,)):
        return str(v)
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    if isinstance(v, (int, str, list, bool, type(None))):
        return v
    return str(v)


def _order(divs) -> int:
    out = 1
    for x in divs:
        out *= x
    return out


# ---------------------------------------------------------------------------
# rho: the coefficient complex mod p^r against level r


def rank_one_log_slope(crystal: Crystal):
    """c when the crystal is rank one in one variable with connection c dx/x, else None."""
    data = crystal.data
    if data.rank != 1 or data.ring.nvars != 1:
        return None
    th = data.connection[0][0]
    if not th.terms:
        return 0
    if len(th.terms) != 1:
        return None
    ((e, idx), c), = th.terms.items()
    return c if e == (-1,) and idx == (0,) else None


def kernel_cokernel_oracle(w: Fraction, r: int, p: int, has_deg0: bool, has_deg1: bool) -> dict:
    """Cohomology of (Z/p^r --w--> Z/p^r) in one weight, by hand."""
    if w.denominator != 1:
        raise ValueError("integral weights only")
    k = r if w == 0 else min(r, valuation(int(w), p))
    cyc = ElementaryDivisors([p ** k] if k else [])
    full = ElementaryDivisors([p ** r])
    if has_deg0 and has_deg1:
        return {0: cyc, 1: cyc}
    if has_deg0:
        return {0: full}
    if has_deg1:
        return {1: full}
    return {}


def rho_check(dt: DRWTower, r: int, raise_on_failure: bool = True) -> CheckReport:
    """H^i of dR(E(A_r)) against H^i of level r, weight by weight, through lambda_r."""
    rep = CheckReport("rho", details={"level": r})
    p, mod = dt.p, dt.p ** r
    slope = rank_one_log_slope(dt.crystal)
    oracle_used = 0
    for u in dt.integral_weights():
        if any(dt.tower.block(r, i, u).tainted for i in dt.degrees):
            continue
        present = {i: dt.complex.rank(i, u) > 0 for i in dt.degrees}
        oracle = None
        if slope is not None:
            oracle = kernel_cokernel_oracle(u[0], r, p, present.get(0, False), present.get(1, False))
        for i in dt.degrees:
            h_coef = mod_cohomology(dt.complex, i, u, mod)
            h_tow = tower_cohomology(dt.tower, r, i, u)
            rep.compared += 1
            if tuple(h_coef) != tuple(h_tow):
                rep.fail(QuasiIsoFailure, "cohomology groups differ", raise_on_failure,
                         degree=i, weight=u, coefficient=list(h_coef), tower=list(h_tow))
                continue
            if oracle is not None:
                oracle_used += 1
                expect = oracle.get(i, ElementaryDivisors(()))
                if tuple(expect) != tuple(h_coef):
                    rep.fail(QuasiIsoFailure, "cohomology differs from the kernel/cokernel oracle",
                             raise_on_failure, degree=i, weight=u, oracle=list(expect), computed=list(h_coef))
            if not _lambda_induces_iso(dt, r, i, u, h_tow):
                rep.fail(QuasiIsoFailure, "lambda_r does not induce an isomorphism on cohomology",
                         raise_on_failure, degree=i, weight=u)
    for u in dt.fractional_weights():
        for i in dt.degrees:
            if dt.tower.block(r, i, u).tainted:
                continue
            h = tower_cohomology(dt.tower, r, i, u)
            rep.compared += 1
            if h:
                rep.fail(QuasiIsoFailure, "fractional weight carries cohomology", raise_on_failure,
                         degree=i, weight=u, tower=list(h))
    rep.details["oracle_blocks"] = oracle_used
    return rep


def _lambda_induces_iso(dt: DRWTower, r: int, i: int, u, h_tow) -> bool:
    """lambda_r maps coefficient cycles onto the tower cohomology in block (i, u)."""
    cx, tw = dt.complex, dt.tower
    n = cx.rank(i, u)
    if not n:
        return not h_tow
    mod = dt.p ** r
    sup = Lattice.standard(n)
    if cx.rank(i + 1, u):
        sup = sup.preimage(cx.d_or_zero(i, u), Lattice.standard(cx.rank(i + 1, u), mod))
    lev = tw.level(r)
    blocks = [lev.block(j, u) for j in (i - 1, i, i + 1)]
    K = max([b.stage for b in blocks] + [lev.start(u) or 0])
    for j in (i - 1, i, i + 1):
        if j in dt.degrees and lev.block(j, u).divisors:
            lev.ensure_verified(j, u, K)
    images = [list(tw.raise_stage(dt.lambda_vector(r, i, u, list(c)), K).vector) for c in sup.basis]
    w = dt.sat.ambient(u, K)
    nk = dt.sat.complex.rank(i, w)
    # images must be cycles
    if i + 1 in dt.degrees and dt.sat.complex.rank(i + 1, w):
        nxt = lev.relations(i + 1, u, K)
        dm = dt.sat.complex.d_or_zero(i, w)
        if any(matvec(dm, v) not in nxt for v in images):
            return False
    bounds = lev.relations(i, u, K)
    if i - 1 in dt.degrees and dt.sat.complex.rank(i - 1, w):
        prev = lev.stage_lattice(i - 1, u, K)
        bounds = bounds + prev.image(dt.sat.complex.d_or_zero(i - 1, w), nk)
    spanned = Lattice.from_generators(nk, images) + bounds
    try:
        got = lattice_quotient(spanned, bounds).reported
    except Exception:
        return False
    return _order(got) == _order(h_tow)


# ---------------------------------------------------------------------------
# alpha_F


def alpha_F_check(dt: DRWTower, r: int, raise_on_failure: bool = True) -> CheckReport:
    """alpha_F lambda_r = lambda_(r-1) (phi_E (x) phi^*), and alpha_F is a chain map."""
    rep = CheckReport("alpha_F", details={"level": r})
    if r < 2:
        rep.details["note"] = "level r-1 is zero"
        return rep
    tw, cx, p = dt.tower, dt.complex, dt.p
    for u in dt.integral_weights():
        pu = scale_weight(u, 1, p)
        for i in dt.degrees:
            n = cx.rank(i, u)
            if not n:
                continue
            und = cx.undivided_matrix(i, u)
            for j in range(n):
                e = [int(k == j) for k in range(n)]
                lhs = tw.scale(tw.F(dt.lambda_vector(r, i, u, e)), p ** i)
                col = [row[j] for row in und] if und else []
                rhs = dt.lambda_vector(r - 1, i, pu, col)
                rep.compared += 1
                if not tw.equal(lhs, rhs):
                    rep.fail(Mismatch, "alpha_F lambda differs from lambda of the undivided Frobenius",
                             raise_on_failure, degree=i, weight=u, basis=cx.labels(i, u)[j])
        for i in dt.degrees:
            if i + 1 not in dt.degrees:
                continue
            for g in tw.generators(r, i, u):
                a = tw.d(tw.scale(tw.F(g), p ** i))
                b = tw.scale(tw.F(tw.d(g)), p ** (i + 1))
                rep.compared += 1
                if not tw.equal(a, b):
                    rep.fail(Mismatch, "alpha_F is not a chain map", raise_on_failure, degree=i, weight=u)
    return rep


# ---------------------------------------------------------------------------
# lambda compatibilities and the action


def lambda_check(dt: DRWTower, r: int, raise_on_failure: bool = True) -> CheckReport:
    """Quotient, Frobenius and chain compatibility of lambda_r on basis sections."""
    rep = CheckReport("lambda", details={"level": r})
    tw, cx, p = dt.tower, dt.complex, dt.p
    for u in dt.integral_weights():
        for i in dt.degrees:
            n = cx.rank(i, u)
            if not n:
                continue
            dm = cx.d_or_zero(i, u) if cx.rank(i + 1, u) else []
            fm = cx.f_or_zero(i, u)
            for j in range(n):
                e = [int(k == j) for k in range(n)]
                x = dt.lambda_vector(r, i, u, e)
                rep.compared += 1
                if r >= 2 and not tw.equal(tw.R(x), dt.lambda_vector(r - 1, i, u, e)):
                    rep.fail(Mismatch, "R lambda_r differs from lambda_(r-1)", raise_on_failure,
                             degree=i, weight=u)
                if r >= 2 and not tw.equal(tw.F(x), dt.lambda_vector(r - 1, i, scale_weight(u, 1, p),
                                                                     [row[j] for row in fm])):
                    rep.fail(Mismatch, "F lambda_r differs from lambda_(r-1) F", raise_on_failure,
                             degree=i, weight=u)
                if dm and not tw.equal(tw.d(x), dt.lambda_vector(r, i + 1, u, [row[j] for row in dm])):
                    rep.fail(Mismatch, "d lambda_r differs from lambda_r nabla", raise_on_failure,
                             degree=i, weight=u)
    return rep


# ---------------------------------------------------------------------------
# degree 0 against Witt vectors


def degree0_witt_image(dt: DRWTower, x: TowerElement):
    """The Witt vector of R represented by a degree-0 element of the trivial tower.

    A representative y at true weight u = a/p^s corresponds to
    V^s((y/p^s) [x^a]); one variable, default lift.
    """
    from .witt import WittVector, verschiebung

    p = dt.p
    ring = dt.ring.with_modulus(p)
    u = x.weight[0]
    s = valuation(u.denominator, p) if u.denominator != 1 else 0
    a = int(u * p ** s)
    y = x.vector[0] if x.vector else 0
    if y % p ** s:
        raise Mismatch("degree-0 representative is not divisible as expected", weight=str(u), value=y)
    n = x.level - s
    if n <= 0:
        return WittVector.zero(p, x.level, ring)
    w = WittVector.from_int(y // p ** s, p, n, ring) * WittVector.teichmuller(ring.monomial((a,)), p, n)
    for _ in range(s):
        w = verschiebung(w, truncate=False)
    return w


def degree0_witt_check(dt: DRWTower, r: int, raise_on_failure: bool = True) -> CheckReport:
    """Degree-0 blocks of the trivial tower against W_r(R) via delta_lift and Witt F, V."""
    from .witt import WittVector, delta_lift, frobenius, verschiebung

    rep = CheckReport("degree0_witt", details={"level": r})
    tw, p = dt.tower, dt.p
    ring = dt.ring.with_modulus(p)
    for u in dt.weights:
        g = tw.generators(r, 0, u)
        blk = tw.block(r, 0, u)
        s = valuation(u[0].denominator, p) if u[0].denominator != 1 else 0
        expected_order = p ** max(0, r - s) if (u[0] >= 0 or dt.ring.laurent[0]) else 1
        rep.compared += 1
        if blk.order != expected_order or len(g) > 1:
            rep.fail(Mismatch, "degree-0 block differs from the weight part of W_r(R)", raise_on_failure,
                     weight=u, tower=list(blk.divisors), expected=expected_order)
            continue
        if not g:
            continue
        img = degree0_witt_image(dt, g[0])
        # the image generates: its additive order is the block order
        order, acc = 1, img
        while not all(c.is_zero() for c in acc.coords):
            acc = acc * WittVector.from_int(p, p, r, ring)
            order *= p
        if order != blk.order:
            rep.fail(Mismatch, "image of the generator has the wrong additive order", raise_on_failure,
                     weight=u, order=order, block=blk.order)
        if r >= 2:
            fimg = degree0_witt_image(dt, tw.F(g[0]))
            if frobenius(img).truncate(r - 1).coords != fimg.coords:
                rep.fail(Mismatch, "tower F differs from Witt Frobenius", raise_on_failure, weight=u)
        if r + 1 <= dt.r_max:
            vimg = degree0_witt_image(dt, tw.V(g[0]))
            if verschiebung(img, truncate=False).coords != vimg.coords:
                rep.fail(Mismatch, "tower V differs from Witt Verschiebung", raise_on_failure, weight=u)
        if u[0].denominator == 1:
            a = int(u[0])
            x = dt.lambda_vector(r, 0, u, [1])
            lifted = delta_lift(dt.ring.monomial((a,)), dt.crystal.phi, r)
            if degree0_witt_image(dt, x).coords != lifted.coords:
                rep.fail(Mismatch, "lambda_r(x^a) differs from delta_lift(x^a)", raise_on_failure, weight=u)
    return rep


# ---------------------------------------------------------------------------
# localization


def localization_check(base: DRWTower, var: str, r: int, raise_on_failure: bool = True,
                       laurent: DRWTower | None = None) -> CheckReport:
    """Tower after inverting ``var`` against the base-change prediction from the base tower.

    Blocks with positive ``var``-weight must agree with the base tower; every
    other block must be carried isomorphically onto such a block by
    multiplication with the class of var^m.
    """
    rep = CheckReport("localization", details={"level": r, "variable": var})
    k = base.ring.index(var)
    if laurent is None:
        data = restrict_laurent(base.crystal.data, var)
        laurent = DRWTower(validate(data), base.r_max, *base.window, kmax=base.kmax, confirm=base.confirm,
                           max_exp=base.max_exp)
    tw = laurent.tower
    triv = laurent.trivial_tower
    for u in laurent.weights:
        for i in laurent.degrees:
            blk = tw.block(r, i, u)
            if u[k] > 0:
                other = base.tower.block(r, i, u)
                rep.compared += 1
                if tuple(other.divisors) != tuple(blk.divisors):
                    rep.fail(BaseChangeMismatch, "block differs from the base tower", raise_on_failure,
                             degree=i, weight=u, base=list(other.divisors), laurent=list(blk.divisors))
                continue
            m = int(-u[k] // 1) + 1
            target_u = tuple(x + (m if j == k else 0) for j, x in enumerate(u))
            target = base.tower.block(r, i, target_u)
            rep.compared += 1
            if blk.order != target.order:
                rep.fail(BaseChangeMismatch, "block order differs from the base-change prediction",
                         raise_on_failure, degree=i, weight=u, predicted=list(target.divisors),
                         laurent=list(blk.divisors))
                continue
            gens = tw.generators(r, i, u)
            if not gens:
                continue
            xm = _monomial_class(triv, r, k, m)
            xinv = _monomial_class(triv, r, k, -m)
            images = [laurent.module_action(r, xm, g) for g in gens]
            lev = tw.level(r)
            tb = lev.block(i, target_u)
            K = max([x.stage for x in images] + [tb.stage])
            lev.ensure_verified(i, target_u, K)
            vecs = [list(tw.raise_stage(x, K - x.stage).vector) for x in images]
            sup = lev.stage_lattice(i, target_u, K)
            span = Lattice.from_generators(sup.n, vecs) + lev.relations(i, target_u, K)
            if not span.contains_lattice(sup):
                rep.fail(BaseChangeMismatch, "multiplication by var^m is not onto the shifted block",
                         raise_on_failure, degree=i, weight=u, m=m)
                continue
            for g, x in zip(gens, images):
                back = laurent.module_action(r, xinv, x)
                if not tw.equal(back, g):
                    rep.fail(BaseChangeMismatch, "var^-m var^m is not the identity", raise_on_failure,
                             degree=i, weight=u)
    return rep


def _monomial_class(triv: DRWTower, r: int, k: int, m: int) -> TowerElement:
    ring = triv.ring
    e = tuple(m if j == k else 0 for j in range(ring.nvars))
    f = DifferentialForm.function(ring.monomial(e))
    return triv.lambda_apply(r, (f,))


# ---------------------------------------------------------------------------
# export


def weight_record(u) -> list:
    """True weight as [numerator, exponent] pairs u = num / p^exp when possible, else strings."""
    return [str(x) for x in u]


def export(dt: DRWTower, cohomology: bool = False, checks: list | None = None) -> dict:
    p = dt.p
    levels = []
    for r in range(1, dt.r_max + 1):
        blocks = []
        for u in dt.weights:
            for i in dt.degrees:
                b = dt.tower.block(r, i, u)
                if not b.divisors:
                    continue
                rec = {
                    "degree": i,
                    "weight": weight_record(u),
                    "weight_p_adic": [_p_adic(x, p) for x in u],
                    "divisors": list(b.divisors),
                    "stage": b.stage,
                    "confirmations": b.confirmed,
                    "tainted": b.tainted,
                }
                if cohomology:
                    rec["cohomology"] = list(tower_cohomology(dt.tower, r, i, u))
                blocks.append(rec)
        levels.append({"r": r, "blocks": blocks})
    out = {
        "schema": SCHEMA,
        "p": p,
        "r_max": dt.r_max,
        "window": [str(dt.window[0]), str(dt.window[1])],
        "crystal": dt.crystal.name,
        "rank": dt.crystal.rank,
        "variables": list(dt.ring.variables),
        "kmax": dt.kmax,
        "confirm": dt.confirm,
        "levels": levels,
    }
    if cohomology:
        out["coefficient_cohomology"] = [
            {"r": r, "degree": i, "weight": weight_record(u),
             "divisors": list(mod_cohomology(dt.complex, i, u, p ** r))}
            for r in range(1, dt.r_max + 1) for u in dt.integral_weights() for i in dt.degrees
            if mod_cohomology(dt.complex, i, u, p ** r)
        ]
    if checks is not None:
        out["checks"] = checks
    return out


def _p_adic(x: Fraction, p: int):
    den = x.denominator
    e = valuation(den, p) if den != 1 else 0
    if den != p ** e:
        return None
    return [x.numerator, e]


def run_axioms(dt: DRWTower, raise_on_failure: bool = True) -> dict:
    return tower_axioms_check(dt.tower, dt.weights, dt.r_max, raise_on_failure=raise_on_failure).to_json()

