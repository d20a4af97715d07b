"""Pairs of functions (rho1, rho2) dominating a quasi-distance.

Conditions, for all z, z' in the space:

    (a)  rho1(z') + rho2(z) >= q(z' - z)
    (b1) rho1(z') - rho1(z) <= q(z' - z)
    (b2) rho2(z') - rho2(z) <= q(z - z')
    (c)  rho1, rho2 convex
    (d)  rho1(z) + rho2(z) > 0
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..geometry import PolyAsymNorm, eval_norm, is_t1
from ..ratlp import OPTIMAL, as_vec, dot, minimize, sub, to_rat, lincomb
from ..sampling import rational_vector


class InvalidPairError(ValueError):
    """Tables or functions violate one of (a)-(d)."""


class ConvergenceError(RuntimeError):
    pass


class UnsupportedNormError(ValueError):
    pass


@dataclass(frozen=True)
class FinitePairTable:
    points: tuple
    rho1: tuple
    rho2: tuple
    norm: PolyAsymNorm
    passes: int = 0

    def __post_init__(self):
        pts = tuple(as_vec(p) for p in self.points)
        if len(set(pts)) != len(pts):
            raise ValueError("table points must be distinct")
        r1 = tuple(to_rat(v) for v in self.rho1)
        r2 = tuple(to_rat(v) for v in self.rho2)
        if not (len(pts) == len(r1) == len(r2)):
            raise ValueError("tables must have one value per point")
        if any(v < 0 for v in r1 + r2):
            raise ValueError("table values must be nonnegative")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "rho1", r1)
        object.__setattr__(self, "rho2", r2)

    def _q(self, i, j):
        return eval_norm(self.norm, sub(self.points[i], self.points[j]))

    def violations_a(self) -> list[tuple[int, int]]:
        """Pairs (j, i) with rho1(z_j) + rho2(z_i) < q(z_j - z_i)."""
        n = len(self.points)
        return [(j, i) for j in range(n) for i in range(n) if self.rho1[j] + self.rho2[i] < self._q(j, i)]

    def satisfies_b(self) -> bool:
        n = len(self.points)
        for j in range(n):
            for i in range(n):
                if self.rho1[j] - self.rho1[i] > self._q(j, i):
                    return False
                if self.rho2[j] - self.rho2[i] > self._q(i, j):
                    return False
        return True

    @property
    def d_holds(self) -> bool:
        return all(a + b > 0 for a, b in zip(self.rho1, self.rho2))

    def update1(self, rho2=None) -> tuple:
        """0 v max_{z' != z} (q(z - z') - rho2(z')) at every table point."""
        rho2 = self.rho2 if rho2 is None else rho2
        n = len(self.points)
        return tuple(
            max([Fraction(0)] + [self._q(i, k) - rho2[k] for k in range(n) if k != i]) for i in range(n)
        )

    def update2(self, rho1=None) -> tuple:
        """0 v max_{z' != z} (q(z' - z) - rho1(z')) at every table point."""
        rho1 = self.rho1 if rho1 is None else rho1
        n = len(self.points)
        return tuple(
            max([Fraction(0)] + [self._q(k, i) - rho1[k] for k in range(n) if k != i]) for i in range(n)
        )

    def is_fixed_point(self) -> bool:
        return self.update1() == self.rho1 and self.update2() == self.rho2


def minimal_pair(points, q: PolyAsymNorm, r1_init, r2_init, max_passes: int | None = None) -> FinitePairTable:
    """Shrink (r1, r2) on a finite set to a solution of the sup-equations.

    Alternates rho1 <- update1(rho2) and rho2 <- update2(rho1).  Each update
    keeps condition (a) and never increases a value; the cap on passes is
    2 * len(points) + 3.  Condition (d) is *not* enforced: inspect
    ``d_holds`` on the result.
    """
    table = FinitePairTable(tuple(points), tuple(r1_init), tuple(r2_init), q)
    if table.violations_a():
        raise InvalidPairError(f"initial tables violate (a) at {table.violations_a()[:3]}")
    cap = 2 * len(table.points) + 3 if max_passes is None else max_passes
    rho1, rho2 = table.rho1, table.rho2
    passes = 0
    while True:
        if table.update1(rho2) == rho1 and table.update2(rho1) == rho2:
            break
        if passes >= cap:
            raise ConvergenceError(f"no fixed point within {cap} passes")
        rho1 = table.update1(rho2)
        rho2 = table.update2(rho1)
        passes += 2
    out = FinitePairTable(table.points, rho1, rho2, q, passes=passes)
    assert all(a <= b for a, b in zip(rho1, table.rho1)) and all(a <= b for a, b in zip(rho2, table.rho2))
    assert not out.violations_a() and out.satisfies_b()
    return out


# ---------------------------------------------------------------- gauges on all of Z
@dataclass(frozen=True)
class MaxAffineGauge:
    """z -> max(0, max_j c_j . z + d_j)."""

    pieces: tuple  # ((c_j, d_j), ...)

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple((as_vec(c), to_rat(d)) for c, d in self.pieces))

    def __call__(self, z) -> Fraction:
        z = as_vec(z)
        return max([Fraction(0)] + [dot(c, z) + d for c, d in self.pieces])


RHO1 = "rho1"
RHO2 = "rho2"


@dataclass(frozen=True, eq=False)
class HullEnvelopeGauge:
    """Convex envelope of anchor data pushed through q.

    rho1-side:  z -> min_lambda  sum lambda_x v(x) + q(z - sum lambda_x x)
    rho2-side:  z -> min_lambda  sum lambda_x v(x) + q(sum lambda_x x - z)

    with lambda ranging over convex weights on the anchors; one LP per query.
    """

    norm: PolyAsymNorm
    anchors: tuple
    values: tuple
    side: str = RHO1
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "anchors", tuple(as_vec(a) for a in self.anchors))
        object.__setattr__(self, "values", tuple(to_rat(v) for v in self.values))
        if self.side not in (RHO1, RHO2):
            raise ValueError(f"unknown side {self.side!r}")

    def weights(self, z) -> tuple[Fraction, tuple]:
        """Optimal value and convex weights at z."""
        z = as_vec(z)
        if z in self._cache:
            return self._cache[z]
        m = len(self.anchors)
        sgn = 1 if self.side == RHO1 else -1
        # variables (lambda_1..lambda_m, tau); a_k.(sgn (z - sum lambda x)) <= tau
        le = []
        for a in self.norm.generators:
            ax = [dot(a, x) for x in self.anchors]
            row = tuple(-sgn * v for v in ax) + (Fraction(-1),)
            le.append((row, -sgn * dot(a, z)))
        eq = [((Fraction(1),) * m + (Fraction(0),), 1)]
        out = minimize(m + 1, self.values + (Fraction(1),), le=le, eq=eq, nonneg=range(m))
        assert out.status == OPTIMAL
        res = (out.value, out.point[:m])
        self._cache[z] = res
        return res

    def __call__(self, z) -> Fraction:
        return self.weights(z)[0]

    def mcshane(self, z) -> Fraction:
        """Single-anchor extension min_x v(x) + q(+-(z - x)); dominates the envelope."""
        z = as_vec(z)
        if self.side == RHO1:
            return min(v + eval_norm(self.norm, sub(z, x)) for x, v in zip(self.anchors, self.values))
        return min(v + eval_norm(self.norm, sub(x, z)) for x, v in zip(self.anchors, self.values))


@dataclass(frozen=True)
class PiecewiseGaugePair:
    rho1: object
    rho2: object
    norm: PolyAsymNorm


def extend_pair_globally(table: FinitePairTable, q: PolyAsymNorm | None = None) -> PiecewiseGaugePair:
    """Hull-envelope extension of a finite table to all of Z."""
    q = table.norm if q is None else q
    if not is_t1(q):
        raise UnsupportedNormError("global extension needs a T1 norm (q(x) > 0 for x != 0)")
    if table.violations_a():
        raise InvalidPairError("table violates (a)")
    if not table.d_holds:
        raise InvalidPairError("table violates (d): rho1 + rho2 vanishes at a table point")
    return PiecewiseGaugePair(
        HullEnvelopeGauge(q, table.points, table.rho1, RHO1),
        HullEnvelopeGauge(q, table.points, table.rho2, RHO2),
        q,
    )


# ---------------------------------------------------------------- sampled verification
@dataclass(frozen=True)
class PairViolation:
    condition: str
    z: tuple
    z2: tuple | None = None


def verify_pair(pair: PiecewiseGaugePair, samples: Sequence[tuple]) -> list[PairViolation]:
    """Check (a), (b1), (b2), midpoint convexity (c) and (d) on all ordered sample pairs."""
    q = pair.norm
    r1, r2 = pair.rho1, pair.rho2
    pts = [as_vec(s) for s in samples]
    v1 = {z: r1(z) for z in pts}
    v2 = {z: r2(z) for z in pts}
    bad = []
    for z in pts:
        if v1[z] < 0 or v2[z] < 0:
            bad.append(PairViolation("nonnegativity", z))
        if v1[z] + v2[z] <= 0:
            bad.append(PairViolation("d", z))
    for i, z in enumerate(pts):
        for zp in pts[i:]:
            for a, b in ((z, zp), (zp, z)):
                if v1[b] + v2[a] < eval_norm(q, sub(b, a)):
                    bad.append(PairViolation("a", a, b))
                if v1[b] - v1[a] > eval_norm(q, sub(b, a)):
                    bad.append(PairViolation("b1", a, b))
                if v2[b] - v2[a] > eval_norm(q, sub(a, b)):
                    bad.append(PairViolation("b2", a, b))
            if zp != z:
                mid = lincomb((Fraction(1, 2), Fraction(1, 2)), (z, zp))
                if r1(mid) * 2 > v1[z] + v1[zp] or r2(mid) * 2 > v2[z] + v2[zp]:
                    bad.append(PairViolation("c", z, zp))
    return bad


def default_samples(pair: PiecewiseGaugePair, count: int = 12, seed: int = 0) -> list[tuple]:
    """Anchors (when present), their midpoints, the origin and seeded random points."""
    rng = random.Random(seed)
    n = pair.norm.dim
    pts = [tuple(Fraction(0) for _ in range(n))]
    anchors = getattr(pair.rho1, "anchors", ())
    for i, a in enumerate(anchors):
        pts.append(a)
        for b in anchors[i + 1:]:
            pts.append(lincomb((Fraction(1, 2), Fraction(1, 2)), (a, b)))
    while len(pts) < count + len(anchors):
        pts.append(rational_vector(rng, n, 4, 3))
    seen = []
    for p in pts:
        if p not in seen:
            seen.append(p)
    return seen
