"""The asymmetric norm glued from a base norm and a gauge pair.

On Y = Z + Q xi (coordinates (z, t), xi the last unit vector):

    mu(z + t xi) = p(z)                 if t == 0
                 = t * rho2(-z / t)     if t > 0
                 = -t * rho1(-z / t)    if t < 0

so that mu(z - xi) = rho1(z) and mu(xi - z) = rho2(z).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..geometry import PolyAsymNorm, eval_norm, same_norm, unit_ball_vertices
from ..ratlp import DimensionError, as_vec, polytope_vertices, scale
from .pairs import HullEnvelopeGauge, InvalidPairError, PiecewiseGaugePair, default_samples, verify_pair


@dataclass(frozen=True)
class MuNorm:
    base: PolyAsymNorm
    pair: PiecewiseGaugePair

    @property
    def dim(self) -> int:
        return self.base.dim + 1

    def split(self, y) -> tuple[tuple, Fraction]:
        y = as_vec(y)
        if len(y) != self.dim:
            raise DimensionError(f"mu lives on Q^{self.dim}")
        return y[:-1], y[-1]

    def __call__(self, y) -> Fraction:
        z, t = self.split(y)
        if t == 0:
            return eval_norm(self.base, z)
        w = scale(-1 / t, z)
        if t > 0:
            return t * self.pair.rho2(w)
        return -t * self.pair.rho1(w)

    def branch(self, y) -> str:
        t = self.split(y)[1]
        return "t=0" if t == 0 else ("t>0" if t > 0 else "t<0")


def build_mu_norm(p: PolyAsymNorm, pair: PiecewiseGaugePair, samples=None, seed: int = 0) -> MuNorm:
    """Glue ``p`` and ``pair`` into mu after a sampled check of (a)-(d)."""
    if pair.norm.dim != p.dim:
        raise DimensionError("pair and base norm live on different spaces")
    if samples is None:
        samples = default_samples(pair, seed=seed)
    bad = verify_pair(pair, samples)
    if bad:
        v = bad[0]
        raise InvalidPairError(f"pair violates ({v.condition}) at z={v.z}" + (f", z'={v.z2}" if v.z2 else ""))
    return MuNorm(p, pair)


def mu_as_poly(mu: MuNorm) -> PolyAsymNorm:
    """Generators of mu for a hull-envelope pair over a T1 base norm.

    mu is then the largest sublinear function with mu <= p on Z,
    mu(xi - x) <= v2(x) and mu(x - xi) <= v1(x) at the anchors x, so it is the
    support function of

        D = {(g, c) : g . w <= 1 for vertices w of {p <= 1},
                      c - g . x <= v2(x),  g . x - c <= v1(x)}

    and its generators are the vertices of D.
    """
    r1, r2 = mu.pair.rho1, mu.pair.rho2
    if not (isinstance(r1, HullEnvelopeGauge) and isinstance(r2, HullEnvelopeGauge)):
        raise TypeError("generator form is available for hull-envelope pairs only")
    if r1.anchors != r2.anchors:
        raise InvalidPairError("rho1 and rho2 must share their anchors")
    if not same_norm(r1.norm, mu.base):
        raise InvalidPairError("envelope norm differs from the base norm")
    n = mu.base.dim
    rows, bounds = [], []
    for w in unit_ball_vertices(mu.base):
        rows.append(tuple(w) + (Fraction(0),))
        bounds.append(Fraction(1))
    for x, v1, v2 in zip(r1.anchors, r1.values, r2.values):
        rows.append(tuple(-c for c in x) + (Fraction(1),))
        bounds.append(v2)
        rows.append(tuple(x) + (Fraction(-1),))
        bounds.append(v1)
    gens = polytope_vertices(rows, bounds)
    name = f"mu({mu.base.name})" if mu.base.name else "mu"
    poly = PolyAsymNorm(tuple(gens), name=name)
    assert len(gens) >= n + 1
    return poly
