"""Polyhedral asymmetric norms, quasi-metric balls and linear operators.

An asymmetric norm here is always ``p(x) = max_i a_i . x`` for finitely many
functionals ``a_i`` (the *generators*).  Such a ``p`` is positively
homogeneous and subadditive for free; the constructor checks the remaining
two conditions exactly: zero lies in conv(a_i) (so ``p >= 0``) and the a_i
span the dual space (so ``p(x) = p(-x) = 0`` forces ``x = 0``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .ratlp import (
    UNBOUNDED,
    DimensionError,
    as_vec,
    dot,
    hull_membership,
    is_bounded,
    lincomb,
    maximize,
    neg,
    polytope_vertices,
    rank,
    scale,
    solve_linear,
    sub,
    to_rat,
    unit,
    zeros,
)
from .ratlp.linalg import inverse, transpose

FORWARD = "forward"
BACKWARD = "backward"


class InvalidNormError(ValueError):
    """Generator set does not define an asymmetric norm."""


class UnsupportedTargetError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PolyAsymNorm:
    generators: tuple
    name: str | None = None
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        gens = tuple(as_vec(g) for g in self.generators)
        if not gens:
            raise InvalidNormError("an asymmetric norm needs at least one generator")
        dims = {len(g) for g in gens}
        if len(dims) != 1 or 0 in dims:
            raise InvalidNormError(f"generators must share one positive dimension, got {sorted(dims)}")
        object.__setattr__(self, "generators", gens)
        if self.check:
            n = len(gens[0])
            if not hull_membership(zeros(n), gens).inside:
                raise InvalidNormError("norm can be negative: the zero functional is not in the generator hull")
            if rank(gens) < n:
                raise InvalidNormError("generators do not span the dual space: p(x) = p(-x) = 0 for some x != 0")

    @property
    def dim(self) -> int:
        return len(self.generators[0])

    def __call__(self, x) -> Fraction:
        return eval_norm(self, x)

    def __repr__(self):
        label = self.name or "PolyAsymNorm"
        return f"<{label} dim={self.dim} generators={len(self.generators)}>"

    def dist(self, x, y) -> Fraction:
        """Quasi-metric d_p(x, y) = p(y - x)."""
        return eval_norm(self, sub(as_vec(y), as_vec(x)))


def _trusted(generators, name=None) -> PolyAsymNorm:
    return PolyAsymNorm(tuple(generators), name=name, check=False)


def eval_norm(p: PolyAsymNorm, x) -> Fraction:
    x = as_vec(x)
    if len(x) != p.dim:
        raise DimensionError(f"vector of dimension {len(x)} for a norm on Q^{p.dim}")
    return max(dot(a, x) for a in p.generators)


def conjugate(p: PolyAsymNorm) -> PolyAsymNorm:
    """p-bar(x) = p(-x)."""
    name = f"conj({p.name})" if p.name else None
    return _trusted((neg(a) for a in p.generators), name)


def symmetrize(p: PolyAsymNorm) -> PolyAsymNorm:
    """p^s(x) = max(p(x), p(-x)), a symmetric norm."""
    gens = list(p.generators)
    for a in p.generators:
        b = neg(a)
        if b not in gens:
            gens.append(b)
    name = f"sym({p.name})" if p.name else None
    return _trusted(gens, name)


def same_norm(p: PolyAsymNorm, q: PolyAsymNorm) -> bool:
    """Exact equality of the two functions (each generator hull contains the other)."""
    if p.dim != q.dim:
        return False
    return all(hull_membership(a, q.generators).inside for a in p.generators) and all(
        hull_membership(b, p.generators).inside for b in q.generators
    )


def isometric_image(q: PolyAsymNorm, J) -> PolyAsymNorm:
    """Norm q' with q'(J y) = q(y) for an invertible square matrix J."""
    Jinv = inverse([as_vec(r) for r in J])
    gens = [tuple(dot(b, col) for col in transpose(Jinv)) for b in q.generators]
    return _trusted(gens, f"J({q.name})" if q.name else None)


def is_t1(p: PolyAsymNorm) -> bool:
    """p(x) > 0 for every x != 0, i.e. {x : a_i . x <= 0 for all i} = {0}."""
    return is_bounded(p.generators)


def unit_ball_vertices(p: PolyAsymNorm) -> list[tuple]:
    """Vertices of {x : p(x) <= 1}; requires the ball to be bounded (p is T1)."""
    if not is_t1(p):
        raise ValueError("unit ball is unbounded")
    return polytope_vertices(p.generators, [1] * len(p.generators))


# ---------------------------------------------------------------- corpus
def u_norm() -> PolyAsymNorm:
    """u(t) = max(t, 0) on Q."""
    return PolyAsymNorm(((1,), (0,)), name="u")


def qtilde(k: int) -> PolyAsymNorm:
    """max(0, x_1, ..., x_k) on Q^k."""
    return PolyAsymNorm((zeros(k),) + tuple(unit(k, i) for i in range(k)), name=f"qtilde{k}")


def linf(n: int) -> PolyAsymNorm:
    gens = []
    for i in range(n):
        gens.append(unit(n, i))
        gens.append(neg(unit(n, i)))
    return PolyAsymNorm(tuple(gens), name=f"linf{n}")


def l1(n: int) -> PolyAsymNorm:
    gens = []
    for mask in range(2**n):
        gens.append(tuple(Fraction(-1 if mask >> i & 1 else 1) for i in range(n)))
    return PolyAsymNorm(tuple(gens), name=f"l1_{n}")


def hexagon() -> PolyAsymNorm:
    """max(|x|, |y|, |x + y|): unit ball is a hexagon, not a parallelogram."""
    return PolyAsymNorm(((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)), name="hexagon")


def simplex_gauge() -> PolyAsymNorm:
    """Gauge of the triangle {x <= 1, y <= 1, x + y >= -1}."""
    return PolyAsymNorm(((1, 0), (0, 1), (-1, -1)), name="simplex")


def asym_box(forward: Sequence, backward: Sequence) -> PolyAsymNorm:
    """max_i max(f_i x_i, -b_i x_i) with positive weights: a product of 1-D asymmetric norms."""
    forward, backward = as_vec(forward), as_vec(backward)
    n = len(forward)
    if any(w <= 0 for w in forward + backward):
        raise InvalidNormError("box weights must be positive")
    gens = []
    for i in range(n):
        gens.append(scale(forward[i], unit(n, i)))
        gens.append(scale(-backward[i], unit(n, i)))
    return PolyAsymNorm(tuple(gens), name="asym_box")


def corpus() -> list[PolyAsymNorm]:
    return [u_norm(), qtilde(2), qtilde(3), linf(2), l1(2), hexagon(), simplex_gauge()]


# ---------------------------------------------------------------- balls
@dataclass(frozen=True)
class Ball:
    center: tuple
    radius: Fraction
    norm: PolyAsymNorm
    orientation: str = FORWARD

    def __post_init__(self):
        object.__setattr__(self, "center", as_vec(self.center))
        object.__setattr__(self, "radius", to_rat(self.radius))
        if self.radius < 0:
            raise ValueError("negative radius")
        if self.orientation not in (FORWARD, BACKWARD):
            raise ValueError(f"unknown orientation {self.orientation!r}")
        if len(self.center) != self.norm.dim:
            raise DimensionError("center dimension differs from the norm dimension")

    def contains(self, y) -> bool:
        return ball_contains(self, y)

    def constraints(self) -> list[tuple]:
        """Linear rows (row, bound) describing the ball."""
        c = self.center
        if self.orientation == FORWARD:
            return [(a, self.radius + dot(a, c)) for a in self.norm.generators]
        return [(neg(a), self.radius - dot(a, c)) for a in self.norm.generators]


def ball_contains(b: Ball, y) -> bool:
    y = as_vec(y)
    if len(y) != b.norm.dim:
        raise DimensionError("point dimension differs from the ball dimension")
    if b.orientation == FORWARD:
        return eval_norm(b.norm, sub(y, b.center)) <= b.radius
    return eval_norm(b.norm, sub(b.center, y)) <= b.radius


class DegenerateRadiusError(ValueError):
    pass


def pair_intersection_witness(y1, r1, y2, r2, q: PolyAsymNorm, mirrored: bool = False):
    """Point of B_q[y1, r1] and B_qbar[y2, r2], or None when they miss.

    The two balls meet iff q(y2 - y1) <= r1 + r2; the witness is the convex
    combination (r2 y1 + r1 y2) / (r1 + r2).  With ``mirrored`` the radii
    trade places: the point (r1 y1 + r2 y2) / (r1 + r2) of
    B_q[y1, r2] and B_qbar[y2, r1].
    """
    y1, y2 = as_vec(y1), as_vec(y2)
    r1, r2 = to_rat(r1), to_rat(r2)
    if r1 < 0 or r2 < 0:
        raise ValueError("negative radius")
    total = r1 + r2
    gap = eval_norm(q, sub(y2, y1))
    if total == 0:
        if y1 != y2:
            raise DegenerateRadiusError("both radii are zero and the centers differ")
        return y1
    if gap > total:
        return None
    a, b = (r1, r2) if mirrored else (r2, r1)
    y = lincomb((a / total, b / total), (y1, y2))
    fr, br = (r2, r1) if mirrored else (r1, r2)
    assert ball_contains(Ball(y1, fr, q, FORWARD), y) and ball_contains(Ball(y2, br, q, BACKWARD), y)
    return y


# ---------------------------------------------------------------- subspaces and operators
@dataclass(frozen=True)
class Subspace:
    ambient_dim: int
    basis: tuple

    def __post_init__(self):
        basis = tuple(as_vec(b) for b in self.basis)
        if any(len(b) != self.ambient_dim for b in basis):
            raise DimensionError("basis vector outside the ambient dimension")
        if basis and rank(basis) < len(basis):
            raise ValueError("basis vectors are linearly dependent")
        object.__setattr__(self, "basis", basis)

    @classmethod
    def whole(cls, n: int) -> "Subspace":
        return cls(n, tuple(unit(n, k) for k in range(n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def point(self, coords) -> tuple:
        coords = as_vec(coords)
        if len(coords) != self.dim:
            raise DimensionError("coordinate vector has the wrong length")
        return lincomb(coords, self.basis, self.ambient_dim)

    def coords(self, x):
        """Coordinates of x in the basis, or None when x is not in the subspace."""
        x = as_vec(x)
        if not self.basis:
            return () if all(v == 0 for v in x) else None
        return solve_linear(transpose(self.basis), x)

    def contains(self, x) -> bool:
        return self.coords(x) is not None

    def restrict(self, p: PolyAsymNorm) -> PolyAsymNorm:
        """The norm c -> p(sum c_k b_k) in basis coordinates."""
        gens = [tuple(dot(a, b) for b in self.basis) for a in p.generators]
        return _trusted(gens, f"{p.name}|Z" if p.name else None)


@dataclass(frozen=True)
class PartialOperator:
    """Linear map defined on ``domain``: basis vector k goes to ``images[k]``."""

    domain: Subspace
    images: tuple
    source_norm: PolyAsymNorm
    target_norm: PolyAsymNorm

    def __post_init__(self):
        images = tuple(as_vec(v) for v in self.images)
        if len(images) != self.domain.dim:
            raise DimensionError("need one image per domain basis vector")
        if any(len(v) != self.target_norm.dim for v in images):
            raise DimensionError("image vectors must live in the target dimension")
        if self.source_norm.dim != self.domain.ambient_dim:
            raise DimensionError("source norm dimension differs from the ambient dimension")
        object.__setattr__(self, "images", images)

    @property
    def target_dim(self) -> int:
        return self.target_norm.dim

    def apply_coords(self, coords) -> tuple:
        return lincomb(as_vec(coords), self.images, self.target_dim)

    def apply(self, x) -> tuple:
        c = self.domain.coords(x)
        if c is None:
            raise ValueError("point is outside the operator's domain")
        return self.apply_coords(c)

    def coord_matrix(self) -> list[tuple]:
        """Target-by-domain-coordinate matrix."""
        return transpose(self.images) if self.images else [()] * self.target_dim

    def is_total(self) -> bool:
        return self.domain.dim == self.domain.ambient_dim

    def full_matrix(self) -> list[tuple]:
        """m x n matrix of a total operator in standard coordinates."""
        if not self.is_total():
            raise ValueError("operator is only partially defined")
        n = self.domain.ambient_dim
        cols = [self.apply(unit(n, k)) for k in range(n)]
        return transpose(cols)


def operator_from_matrix(matrix, source: PolyAsymNorm, target: PolyAsymNorm) -> PartialOperator:
    """Total operator given by an m x n matrix (rows indexed by target coordinates)."""
    rows = [as_vec(r) for r in matrix]
    n = source.dim
    if any(len(r) != n for r in rows) or len(rows) != target.dim:
        raise DimensionError("matrix shape does not match the norms")
    images = tuple(tuple(r[k] for r in rows) for k in range(n))
    return PartialOperator(Subspace.whole(n), images, source, target)


def operator_norm(T: PartialOperator):
    """sup{q(T x) : x in domain, p(x) <= 1} as a Fraction, or ``math.inf``.

    One LP per target generator b_j over domain coordinates c:
    maximize b_j . T c subject to a_i . (B c) <= 1.
    """
    if T.domain.dim == 0:
        return Fraction(0)
    p_z = T.domain.restrict(T.source_norm)
    le = [(a, 1) for a in p_z.generators]
    best = Fraction(0)
    for b in T.target_norm.generators:
        obj = tuple(dot(b, img) for img in T.images)
        if all(v == 0 for v in obj):
            continue
        out = maximize(T.domain.dim, obj, le=le)
        if out.status == UNBOUNDED:
            return math.inf
        best = max(best, out.value)
    return best


def embed_into_ellinfty(p: PolyAsymNorm) -> PartialOperator:
    """x -> (a_1 . x, ..., a_m . x) into (Q^m, qtilde); an exact isometry."""
    m = len(p.generators)
    n = p.dim
    images = tuple(tuple(a[k] for a in p.generators) for k in range(n))
    return PartialOperator(Subspace.whole(n), images, p, qtilde(m))


def is_qtilde_form(q: PolyAsymNorm) -> bool:
    k = q.dim
    wanted = {zeros(k)} | {unit(k, i) for i in range(k)}
    return set(q.generators) == wanted


def represent_operator_by_functionals(T: PartialOperator) -> list[PartialOperator]:
    """Coordinate functionals of an operator into a qtilde-normed space, each into (Q, u)."""
    if not is_qtilde_form(T.target_norm):
        raise UnsupportedTargetError("target norm is not of the form max(0, x_1, ..., x_k)")
    u = u_norm()
    return [
        PartialOperator(T.domain, tuple((img[i],) for img in T.images), T.source_norm, u)
        for i in range(T.target_dim)
    ]
