"""Randomized identity suites for Witt vectors, divided powers and forms.

Each suite returns a report dict with per-identity counts and stops at the
first counterexample (``passed`` False, with the witness). Seeds make the
runs reproducible.
"""

from __future__ import annotations

import random
from itertools import product
from math import comb, factorial

from .complexes import as_weight, check_complex_identities
from .crystal import CrystalComplex, section_frobenius, validate
from .derham import (
    divided_frobenius,
    d,
    pd_collapse_check,
    random_form,
    random_polynomial,
    undivided_frobenius,
)
from .errors import DRWError
from .exactalg.poly import FrobeniusLift, PolyRing, valuation
from .witt import (
    WittVector,
    delta_lift,
    frobenius,
    pd_gamma,
    to_ghost,
    verschiebung,
)


class _Fail(Exception):
    def __init__(self, identity, **witness):
        super().__init__(identity)
        self.identity = identity
        self.witness = witness


class _Counter:
    def __init__(self, name):
        self.name = name
        self.counts: dict = {}

    def check(self, identity: str, ok: bool, **witness):
        self.counts[identity] = self.counts.get(identity, 0) + 1
        if not ok:
            raise _Fail(identity, **{k: str(v) for k, v in witness.items()})

    def run(self, body, **meta) -> dict:
        try:
            body()
        except _Fail as exc:
            return {"suite": self.name, "passed": False, "failed_identity": exc.identity,
                    "witness": exc.witness, "counts": self.counts, **meta}
        except DRWError as exc:
            return {"suite": self.name, "passed": False, "failed_identity": type(exc).__name__,
                    "witness": exc.to_json(), "counts": self.counts, **meta}
        return {"suite": self.name, "passed": True, "counts": self.counts, **meta}


def _random_witt(p, r, ring, rng, terms=3, maxdeg=4):
    return WittVector(p, [random_polynomial(ring, rng, terms, maxdeg, p) for _ in range(r)])


def ghost_mod(w: WittVector) -> tuple:
    """Ghost components of a lift of w, with w_n taken modulo p^(n+1) (lift independent)."""
    lifted = WittVector(w.p, [c.lift() for c in w.coords])
    return tuple(g.reduce(w.p ** (n + 1)) for n, g in enumerate(to_ghost(lifted)))


def _ghost_equal(a: tuple, b: tuple, p: int) -> bool:
    return all((x - y).lift().reduce(p ** (n + 1)).is_zero() for n, (x, y) in enumerate(zip(a, b)))


# ---------------------------------------------------------------------------


def witt_identity_suite(p: int, r: int, samples: int = 200, seed: int = 0, fault: str | None = None) -> dict:
    """Ring axioms, ghost oracle, FV = VF = p, projection formula, Teichmuller multiplicativity."""
    ring = PolyRing(("t",), (False,), p)
    rng = random.Random(seed)
    c = _Counter("witt-identities")

    def add(x, y):
        s = x + y
        if fault == "witt-sum":
            bump = WittVector(p, [ring.zero()] * (r - 1) + [ring.one()])
            s = s + bump if r > 1 else s + WittVector.one(p, r, ring)
        return s

    def body():
        zero, one = WittVector.zero(p, r, ring), WittVector.one(p, r, ring)
        pw = WittVector.from_int(p, p, r, ring)
        for _ in range(samples):
            x, y, z = (_random_witt(p, r, ring, rng) for _ in range(3))
            c.check("x+y = y+x", add(x, y) == add(y, x), x=x, y=y)
            c.check("(x+y)+z = x+(y+z)", add(add(x, y), z) == add(x, add(y, z)), x=x, y=y, z=z)
            c.check("xy = yx", x * y == y * x, x=x, y=y)
            c.check("(xy)z = x(yz)", (x * y) * z == x * (y * z), x=x, y=y, z=z)
            c.check("x(y+z) = xy+xz", x * add(y, z) == add(x * y, x * z), x=x, y=y, z=z)
            c.check("x+0 = x", add(x, zero) == x, x=x)
            c.check("1x = x", one * x == x, x=x)
            c.check("x+(-x) = 0", add(x, -x) == zero, x=x)
            gx, gy = ghost_mod(x), ghost_mod(y)
            gs, gm = ghost_mod(add(x, y)), ghost_mod(x * y)
            c.check("ghost(x+y) = ghost(x)+ghost(y)",
                    _ghost_equal(gs, tuple(a + b for a, b in zip(gx, gy)), p), x=x, y=y)
            c.check("ghost(xy) = ghost(x)ghost(y)",
                    _ghost_equal(gm, tuple(a * b for a, b in zip(gx, gy)), p), x=x, y=y)
            c.check("FV = p", frobenius(verschiebung(x)) == pw * x, x=x)
            c.check("VF = p", verschiebung(frobenius(x)) == pw * x, x=x)
            c.check("V(x Fy) = V(x) y", verschiebung(x * frobenius(y)) == verschiebung(x) * y, x=x, y=y)
            a = random_polynomial(ring, rng, 3, 4, p)
            b = random_polynomial(ring, rng, 3, 4, p)
            ta, tb = WittVector.teichmuller(a, p, r), WittVector.teichmuller(b, p, r)
            c.check("[ab] = [a][b]", WittVector.teichmuller(a * b, p, r) == ta * tb, a=a, b=b)

    return c.run(body, p=p, r=r, samples=samples, seed=seed)


def pd_suite(p: int, r: int, samples: int = 100, lift_samples: int = 50, seed: int = 0,
             nmax: int | None = None) -> dict:
    """Divided powers on the V-ideal and delta_lift as a PD morphism commuting with Frobenius."""
    ring = PolyRing(("t",), (False,), p)
    exact = ring.exact()
    rng = random.Random(seed)
    nmax = nmax if nmax is not None else p + 2
    mod = p ** r
    c = _Counter("pd")
    lifts = [FrobeniusLift(exact, p), FrobeniusLift(exact, p, (exact.gen(0) ** p + exact.gen(0) * p,))]

    def vel():
        y = _random_witt(p, r, ring, rng)
        return WittVector(p, (ring.zero(),) + y.coords[:-1])

    def body():
        for _ in range(samples):
            x, y = vel(), vel()
            a = _random_witt(p, r, ring, rng)
            g = {n: pd_gamma(n, x) for n in range(1, nmax + 1)}
            gy = {n: pd_gamma(n, y) for n in range(1, nmax + 1)}
            c.check("gamma_1(x) = x", g[1] == x, x=x)
            for n in range(1, nmax + 1):
                c.check("n! gamma_n(x) = x^n", g[n] * factorial(n) == x ** n, x=x, n=n)
                c.check("gamma_n(ax) = a^n gamma_n(x)", pd_gamma(n, a * x) == (a ** n) * g[n], x=x, a=a, n=n)
                s = WittVector.zero(p, r, ring)
                s = s + g[n] + gy[n]
                for i in range(1, n):
                    s = s + g[i] * gy[n - i]
                c.check("gamma_n(x+y) = sum gamma_i(x) gamma_(n-i)(y)", pd_gamma(n, x + y) == s, x=x, y=y, n=n)
                # ghost oracle: ghost_k(gamma_n(Vz)) = (p^n / n!) ghost_(k-1)(z)^n mod p^(k+1)
                if r == 1:
                    continue
                gz = ghost_mod(WittVector(p, x.coords[1:]))
                got = ghost_mod(g[n])
                f = factorial(n)
                v = valuation(f, p)
                for k in range(1, r):
                    m = p ** (k + 1)
                    scal = (p ** (n - v) * pow(f // p ** v, -1, m)) % m
                    expect = (gz[k - 1].lift() ** n * scal).reduce(m)
                    c.check("ghost oracle for gamma_n", (got[k].lift().reduce(m) - expect).is_zero(),
                            x=x, n=n, k=k)
            for n in range(1, nmax + 1):
                for m_ in range(1, nmax + 1 - n):
                    lhs = g[n] * g[m_]
                    rhs = g[n + m_] * comb(n + m_, n) if n + m_ in g else None
                    if rhs is not None:
                        c.check("gamma_n gamma_m = C(n+m,n) gamma_(n+m)", lhs == rhs, x=x, n=n, m=m_)
            for n, m_ in ((1, 2), (2, 2), (2, 1)):
                if n * m_ > nmax or m_ not in g:
                    continue
                inner = g[m_]
                if not inner.coords[0].is_zero():
                    continue
                coef = factorial(n * m_) // (factorial(n) * factorial(m_) ** n)
                c.check("gamma_n(gamma_m(x)) = (nm)!/(n! m!^n) gamma_nm(x)",
                        pd_gamma(n, inner) == pd_gamma(n * m_, x) * coef, x=x, n=n, m=m_)
        for j in range(lift_samples):
            phi = lifts[j % 2]
            a = random_polynomial(exact, rng, 3, 3, 7)
            b = random_polynomial(exact, rng, 3, 3, 7)
            da, db = delta_lift(a, phi, r), delta_lift(b, phi, r)
            c.check("delta_lift additive", delta_lift(a + b, phi, r) == da + db, a=a, b=b)
            c.check("delta_lift multiplicative", delta_lift(a * b, phi, r) == da * db, a=a, b=b)
            c.check("delta_lift F = F delta_lift", delta_lift(phi(a), phi, r) == frobenius(da), a=a)
            dpa = delta_lift(a * p, phi, r)
            for n in range(1, nmax + 1):
                f = factorial(n)
                v = valuation(f, p)
                scal = (p ** (n - v) * pow(f // p ** v, -1, mod)) % mod
                c.check("delta_lift((pa)^[n]) = gamma_n(delta_lift(pa))",
                        delta_lift(a ** n * scal, phi, r) == pd_gamma(n, dpa), a=a, n=n)

    return c.run(body, p=p, r=r, samples=samples, seed=seed)


def derham_identity_suite(p: int, samples: int = 200, seed: int = 0, nvars: int = 2) -> dict:
    """dF = pFd and p^n F = phi^* on random forms, default and a custom lift."""
    rng = random.Random(seed)
    c = _Counter("derham-identities")
    rings = [PolyRing(tuple("xy"[:k]), (False,) * k) for k in range(1, nvars + 1)]
    rings.append(PolyRing(("x", "y")[:nvars], (True,) + (False,) * (nvars - 1)))

    def lifts(ring):
        out = [FrobeniusLift(ring, p)]
        # x -> x^p + p x on polynomial variables; Laurent variables need a unit monomial
        imgs = [g ** p if lf else g ** p + g * p for g, lf in zip(ring.gens(), ring.laurent)]
        if any(not lf for lf in ring.laurent):
            out.append(FrobeniusLift(ring, p, tuple(imgs)))
        return out

    def body():
        done = 0
        while done < samples:
            for ring in rings:
                for phi in lifts(ring):
                    deg = rng.randint(0, ring.nvars)
                    w = random_form(ring, deg, rng, 3, 3)
                    fw = divided_frobenius(w, phi)
                    c.check("dF = pFd", d(fw) == divided_frobenius(d(w), phi) * p, form=w, phi=phi.images)
                    c.check("p^n F = phi^*", fw * (p ** deg) == undivided_frobenius(w, phi), form=w,
                            phi=phi.images)
                    v = random_form(ring, rng.randint(0, ring.nvars), rng, 2, 2)
                    c.check("F multiplicative", divided_frobenius(w * v, phi) == fw * divided_frobenius(v, phi),
                            form=w, other=v)
                    done += 1

    return c.run(body, p=p, samples=samples, seed=seed)


def crystal_identity_suite(crystals, wmin, wmax, seed: int = 0, semilinear_samples: int = 20) -> dict:
    """nabla^2 = 0 and nabla F = p F nabla on every window basis element; semilinearity of F."""
    rng = random.Random(seed)
    c = _Counter("crystal-identities")

    def body():
        for data in crystals:
            cr = validate(data)
            cx = CrystalComplex(cr)
            n = cx.nweights()
            axis = range(int(wmin), int(wmax) + 1)
            weights = [tuple(w) for w in product(axis, repeat=n)]
            fails = check_complex_identities(cx, weights)
            for i in cx.degrees:
                for w in weights:
                    c.counts["nabla F = p F nabla"] = c.counts.get("nabla F = p F nabla", 0) + cx.rank(i, w)
            c.check("nabla^2 = 0 and nabla F = p F nabla", not fails, crystal=data.name, failures=fails)
            for i in cx.degrees:
                for w in weights:
                    w = as_weight(w)
                    if cx.rank(i, w):
                        scaled = [[x * cr.p ** i for x in row] for row in cx.f_or_zero(i, w)]
                        c.check("undivided = p^i F", cx.undivided_matrix(i, w) == scaled,
                                crystal=data.name, degree=i, weight=w)
            ring = cr.ring
            for _ in range(semilinear_samples):
                om = random_form(ring, rng.randint(0, ring.nvars), rng, 2, 2)
                sec = tuple(random_form(ring, rng.randint(0, ring.nvars), rng, 2, 2) for _ in range(cr.rank))
                lhs = section_frobenius(cr, tuple(om * s for s in sec))
                fo = divided_frobenius(om, cr.phi)
                rhs = tuple(fo * s for s in section_frobenius(cr, sec))
                c.check("F(w . m) = F(w) . F(m)", lhs == rhs, crystal=data.name, form=om)

    return c.run(body, seed=seed)


def pd_relation_suite(p: int, r: int, samples: int = 20, seed: int = 0) -> dict:
    """d((px)^[n]) = (px)^[n-1] d(px) in the de Rham complex of A_r."""
    rng = random.Random(seed)
    ring = PolyRing(("x", "y"), (False, False))
    xs = [random_polynomial(ring, rng, 3, 3, 5) for _ in range(samples)]
    c = _Counter("pd-relations")
    c.counts["pd relation"] = 0

    def body():
        out = pd_collapse_check(p, r, xs)
        c.counts["pd relation"] = out["relations_checked"]

    return c.run(body, p=p, r=r)

