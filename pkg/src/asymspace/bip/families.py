"""Finite families of mixed balls and the mixed binary intersection property.

Entry i of a family contributes the forward ball B_q[x_i, r_i] and the
backward ball B_qbar[x_i, s_i].  The family *premise* is that every forward
ball meets every backward ball, which for an asymmetric norm reduces to the
radius inequality q(x_j - x_i) <= r_i + s_j; the *conclusion* is a point in
all balls at once.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..geometry import BACKWARD, FORWARD, Ball, PolyAsymNorm, ball_contains, eval_norm, symmetrize
from ..ratlp import INFEASIBLE, DimensionError, LPOutcome, as_vec, feasible, lincomb, sub, to_rat

PREMISE_FAILS = "premise-fails"
BIP_HOLDS = "bip-holds-here"
BIP_VIOLATED = "bip-violated-here"


class FamilyShapeError(ValueError):
    pass


class NoWitnessError(ValueError):
    pass


@dataclass(frozen=True)
class MixedBallFamily:
    norm: PolyAsymNorm
    entries: tuple  # ((center, r, s), ...)

    def __post_init__(self):
        entries = []
        for center, r, s in self.entries:
            center = as_vec(center)
            r, s = to_rat(r), to_rat(s)
            if len(center) != self.norm.dim:
                raise DimensionError("center dimension differs from the norm dimension")
            if r <= 0 or s <= 0:
                raise ValueError("family radii must be strictly positive")
            entries.append((center, r, s))
        if not entries:
            raise ValueError("empty family")
        object.__setattr__(self, "entries", tuple(entries))

    @classmethod
    def uniform(cls, norm, centers, radius) -> "MixedBallFamily":
        return cls(norm, tuple((c, radius, radius) for c in centers))

    @property
    def centers(self) -> list[tuple]:
        return [e[0] for e in self.entries]

    def balls(self) -> list[Ball]:
        out = []
        for c, r, s in self.entries:
            out.append(Ball(c, r, self.norm, FORWARD))
            out.append(Ball(c, s, self.norm, BACKWARD))
        return out

    def contains(self, y) -> bool:
        return all(ball_contains(b, y) for b in self.balls())

    def conjugate_swapped(self, conj_norm: PolyAsymNorm) -> "MixedBallFamily":
        """Same centers with (r, s) -> (s, r) under the conjugate norm."""
        return MixedBallFamily(conj_norm, tuple((c, s, r) for c, r, s in self.entries))


def pairwise_mixed_check(fam: MixedBallFamily) -> list[tuple[int, int]]:
    """Ordered pairs (i, j) with q(x_j - x_i) > r_i + s_j."""
    q = fam.norm
    bad = []
    for i, (xi, ri, _) in enumerate(fam.entries):
        for j, (xj, _, sj) in enumerate(fam.entries):
            if eval_norm(q, sub(xj, xi)) > ri + sj:
                bad.append((i, j))
    return bad


@dataclass(frozen=True)
class CommonPoint:
    point: tuple | None
    outcome: LPOutcome

    @property
    def empty(self) -> bool:
        return self.point is None


def family_program(fam: MixedBallFamily):
    """Rows (a_k, bound) of the system a_k.(y - x_i) <= r_i, a_k.(x_i - y) <= s_i."""
    rows = []
    for b in fam.balls():
        rows.extend(b.constraints())
    return rows


def common_point(fam: MixedBallFamily) -> CommonPoint:
    out = feasible(fam.norm.dim, le=family_program(fam))
    if out.status == INFEASIBLE:
        return CommonPoint(None, out)
    assert fam.contains(out.point)
    return CommonPoint(out.point, out)


@dataclass(frozen=True)
class BipVerdict:
    kind: str
    failures: tuple = ()
    point: tuple | None = None
    outcome: LPOutcome | None = None

    @property
    def certificate(self):
        if self.outcome is None or self.outcome.status != INFEASIBLE:
            return None
        return self.outcome.certificate


def mixed_bip_report(fam: MixedBallFamily) -> BipVerdict:
    failures = pairwise_mixed_check(fam)
    if failures:
        return BipVerdict(PREMISE_FAILS, tuple(failures))
    cp = common_point(fam)
    if cp.empty:
        return BipVerdict(BIP_VIOLATED, outcome=cp.outcome)
    return BipVerdict(BIP_HOLDS, point=cp.point, outcome=cp.outcome)


def metric_convexity_witness(x, y, r, s, q: PolyAsymNorm) -> tuple:
    """z = (s x + r y) / (r + s), which has q(z - x) <= r and q(y - z) <= s."""
    x, y = as_vec(x), as_vec(y)
    r, s = to_rat(r), to_rat(s)
    if r < 0 or s < 0 or r + s == 0:
        raise NoWitnessError("radii must be nonnegative with a positive sum")
    if eval_norm(q, sub(y, x)) > r + s:
        raise NoWitnessError("q(y - x) exceeds r + s")
    z = lincomb((s / (r + s), r / (r + s)), (x, y))
    assert eval_norm(q, sub(z, x)) <= r and eval_norm(q, sub(y, z)) <= s
    return z


def symmetrized_family_check(fam: MixedBallFamily) -> BipVerdict:
    """Mixed report for a family with r_i = s_i, i.e. balls of the symmetrized metric.

    B_{d^s}[x, r] is exactly B_d[x, r] intersected with B_dbar[x, r], so a
    mixed common point is a common point of the symmetric balls as well.
    """
    if any(r != s for _, r, s in fam.entries):
        raise FamilyShapeError("symmetrized check needs r_i == s_i for every entry")
    verdict = mixed_bip_report(fam)
    if verdict.point is not None:
        ps = symmetrize(fam.norm)
        assert all(eval_norm(ps, sub(verdict.point, c)) <= r for c, r, _ in fam.entries)
    return verdict


def scale_to_pairwise(norm: PolyAsymNorm, centers, r, s) -> MixedBallFamily:
    """Inflate radii uniformly by the least factor >= 1 that makes the premise hold."""
    centers = [as_vec(c) for c in centers]
    r = [to_rat(v) for v in r]
    s = [to_rat(v) for v in s]
    factor = Fraction(1)
    for i, xi in enumerate(centers):
        for j, xj in enumerate(centers):
            need = eval_norm(norm, sub(xj, xi)) / (r[i] + s[j])
            factor = max(factor, need)
    return MixedBallFamily(norm, tuple((c, a * factor, b * factor) for c, a, b in zip(centers, r, s)))
