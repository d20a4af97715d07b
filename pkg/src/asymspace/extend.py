"""Norm-preserving extension of functionals and operators.

Two engines are provided.  :func:`extend_operator` handles any polyhedral
target in one LP: ``q(S x) <= beta p(x)`` for all x holds iff every
functional ``b_j o S`` lies in ``beta * conv(a_i)``, which is linear in the
entries of S once convex multipliers are added.  :func:`extend_coordinatewise`
handles qtilde targets one coordinate functional at a time with the classical
one-step interval argument.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .bip import (
    BIP_VIOLATED,
    BipVerdict,
    FinitePairTable,
    MuNorm,
    PiecewiseGaugePair,
    UnsupportedNormError,
    build_mu_norm,
    extend_pair_globally,
    minimal_pair,
    mixed_bip_report,
    mu_as_poly,
)
from .bip.families import MixedBallFamily
from .geometry import (
    BACKWARD,
    FORWARD,
    Ball,
    PartialOperator,
    PolyAsymNorm,
    Subspace,
    UnsupportedTargetError,
    _trusted,
    eval_norm,
    is_qtilde_form,
    is_t1,
    operator_norm,
    represent_operator_by_functionals,
    same_norm,
)
from .ratlp import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LPOutcome,
    add,
    as_vec,
    dot,
    feasible,
    hull_membership,
    lincomb,
    matvec,
    maximize,
    minimize,
    neg,
    scale,
    solve_linear,
    sub,
    to_rat,
    unit,
    zeros,
)
from .ratlp.linalg import complete_basis, matmul, transpose

EXTENDED = "extended"
NOT_EXTENDABLE = "not-extendable"


class NotDominatedError(ValueError):
    pass


class DegenerateDirectionError(ValueError):
    pass


class EmptyFiberError(ValueError):
    pass


class DiscontinuousOperatorError(ValueError):
    pass


class PipelineRefused(ValueError):
    """The family is not a counterexample to the mixed BIP."""

    def __init__(self, verdict: BipVerdict):
        super().__init__(f"necessity pipeline needs a bip-violated family, got {verdict.kind}")
        self.verdict = verdict


@dataclass(frozen=True)
class ExtensionProblem:
    operator: PartialOperator
    beta: Fraction | None = None

    def __post_init__(self):
        beta = self.beta
        if beta is None:
            beta = operator_norm(self.operator)
            if beta == math.inf:
                raise DiscontinuousOperatorError("operator is not (p, q)-continuous")
        object.__setattr__(self, "beta", to_rat(beta))

    @property
    def source_norm(self) -> PolyAsymNorm:
        return self.operator.source_norm

    @property
    def target_norm(self) -> PolyAsymNorm:
        return self.operator.target_norm

    @property
    def domain(self) -> Subspace:
        return self.operator.domain


@dataclass(frozen=True)
class ExtensionResult:
    status: str
    matrix: tuple | None = None  # m x n, rows indexed by target coordinates
    multipliers: tuple | None = None  # per target generator: convex weights over source generators
    outcome: LPOutcome | None = None
    beta: Fraction | None = None

    @property
    def extended(self) -> bool:
        return self.status == EXTENDED

    @property
    def certificate(self):
        return None if self.outcome is None or self.outcome.status != INFEASIBLE else self.outcome

    def as_operator(self, prob: ExtensionProblem) -> PartialOperator:
        n = prob.source_norm.dim
        images = tuple(tuple(row[k] for row in self.matrix) for k in range(n))
        return PartialOperator(Subspace.whole(n), images, prob.source_norm, prob.target_norm)


def extend_operator(prob: ExtensionProblem) -> ExtensionResult:
    """Solve for S with S|_Z = T and b_j o S in beta conv(a_i) for every target generator."""
    T = prob.operator
    p_gens = prob.source_norm.generators
    q_gens = prob.target_norm.generators
    n, m = prob.source_norm.dim, prob.target_norm.dim
    ni, nj = len(p_gens), len(q_gens)
    beta = prob.beta
    nvar = m * n + nj * ni

    def s_idx(r, k):
        return r * n + k

    def lam_idx(j, i):
        return m * n + j * ni + i

    eq = []
    for b, img in zip(T.domain.basis, T.images):
        for r in range(m):
            row = [Fraction(0)] * nvar
            for k in range(n):
                row[s_idx(r, k)] = b[k]
            eq.append((tuple(row), img[r]))
    for j, bj in enumerate(q_gens):
        for k in range(n):
            row = [Fraction(0)] * nvar
            for r in range(m):
                row[s_idx(r, k)] = bj[r]
            for i, a in enumerate(p_gens):
                row[lam_idx(j, i)] = -beta * a[k]
            eq.append((tuple(row), 0))
        row = [Fraction(0)] * nvar
        for i in range(ni):
            row[lam_idx(j, i)] = Fraction(1)
        eq.append((tuple(row), 1))
    out = feasible(nvar, eq=eq, nonneg=range(m * n, nvar))
    if out.status == INFEASIBLE:
        return ExtensionResult(NOT_EXTENDABLE, outcome=out, beta=beta)
    x = out.point
    S = tuple(tuple(x[s_idx(r, k)] for k in range(n)) for r in range(m))
    lam = tuple(tuple(x[lam_idx(j, i)] for i in range(ni)) for j in range(nj))
    res = ExtensionResult(EXTENDED, matrix=S, multipliers=lam, outcome=out, beta=beta)
    _check_extension(prob, res)
    return res


def _check_extension(prob: ExtensionProblem, res: ExtensionResult) -> None:
    T = prob.operator
    for b, img in zip(T.domain.basis, T.images):
        assert matvec(res.matrix, b) == img
    for bj, lam in zip(prob.target_norm.generators, res.multipliers):
        f = tuple(dot(bj, col) for col in transpose(res.matrix))
        assert f == lincomb(lam, [scale(prob.beta, a) for a in prob.source_norm.generators], len(f))


# ---------------------------------------------------------------- functionals
@dataclass(frozen=True)
class OneStep:
    lower: Fraction
    upper: Fraction
    value: Fraction
    domain: Subspace  # Z + Q x0
    functional: tuple  # values on the new basis (old basis, then x0)


def _dominated(p: PolyAsymNorm, Z: Subspace, phi) -> bool:
    """max over z in Z of phi(z) - p(z) is 0 (not positive or unbounded)."""
    if Z.dim == 0:
        return True
    pz = Z.restrict(p)
    k = Z.dim
    le = [(tuple(a) + (Fraction(-1),), 0) for a in pz.generators]
    out = maximize(k + 1, tuple(phi) + (Fraction(-1),), le=le)
    return out.status == OPTIMAL and out.value <= 0


def extend_functional_one_step(p: PolyAsymNorm, Z: Subspace, phi, x0) -> OneStep:
    """Extend phi <= p from Z to Z + Q x0, choosing the lower end of the admissible interval.

    Admissible values c = psi(x0) form [L, U] with
    L = max_z phi(z) - p(z - x0) and U = min_z p(z + x0) - phi(z).
    """
    phi = as_vec(phi)
    x0 = as_vec(x0)
    if len(phi) != Z.dim:
        raise ValueError("phi needs one value per basis vector of Z")
    if Z.contains(x0):
        raise DegenerateDirectionError("x0 already lies in Z")
    if not _dominated(p, Z, phi):
        raise NotDominatedError("phi is not dominated by p on Z")
    k = Z.dim
    rows = [tuple(dot(a, b) for b in Z.basis) + (Fraction(-1),) for a in p.generators]
    ax0 = [dot(a, x0) for a in p.generators]
    lo = maximize(k + 1, tuple(phi) + (Fraction(-1),), le=list(zip(rows, ax0)))
    hi = minimize(k + 1, tuple(-v for v in phi) + (Fraction(1),), le=list(zip(rows, [-v for v in ax0])))
    assert lo.status == OPTIMAL and hi.status == OPTIMAL
    L, U = lo.value, hi.value
    assert L <= U
    new_dom = Subspace(Z.ambient_dim, Z.basis + (x0,))
    return OneStep(L, U, L, new_dom, phi + (L,))


def extend_functional(p: PolyAsymNorm, Z: Subspace, phi) -> tuple:
    """Extend phi <= p from Z to all of Q^n; returns the functional as a dual vector."""
    phi = as_vec(phi)
    n = Z.ambient_dim
    if not _dominated(p, Z, phi):
        raise NotDominatedError("phi is not dominated by p on Z")
    dom = Z
    for e in complete_basis(Z.basis, n):
        step = extend_functional_one_step(p, dom, phi, e)
        dom, phi = step.domain, step.functional
    psi = solve_linear(list(dom.basis), phi) if dom.dim else zeros(n)
    assert psi is not None
    assert hull_membership(psi, p.generators).inside
    return psi


def extend_coordinatewise(prob: ExtensionProblem) -> ExtensionResult:
    """Extend into a qtilde target coordinate by coordinate, each with its own norm."""
    T = prob.operator
    p = prob.source_norm
    n = p.dim
    rows = []
    for phi_op in represent_operator_by_functionals(T):
        beta_i = operator_norm(phi_op)
        values = tuple(img[0] for img in phi_op.images)
        if beta_i == math.inf:
            raise DiscontinuousOperatorError("coordinate functional is not continuous")
        if beta_i == 0:
            rows.append(zeros(n))
            continue
        scaled = _trusted(scale(beta_i, a) for a in p.generators)
        rows.append(extend_functional(scaled, T.domain, values))
    res = ExtensionResult(EXTENDED, matrix=tuple(rows), beta=prob.beta)
    for b, img in zip(T.domain.basis, T.images):
        assert matvec(res.matrix, b) == img
    return res


# ---------------------------------------------------------------- the sufficiency construction
@dataclass(frozen=True)
class FiberDistances:
    r_value: Fraction
    s_value: Fraction

    @property
    def positive(self) -> bool:
        return self.r_value > 0 and self.s_value > 0


def fiber_distances(prob: ExtensionProblem, x0, u) -> FiberDistances:
    """r(u) = min p(z - x0) and s(u) = min p(x0 - z) over the fiber {z in Z : T z = u}."""
    T = prob.operator
    p = prob.source_norm
    x0, u = as_vec(x0), as_vec(u)
    k = T.domain.dim
    tm = T.coord_matrix()
    eq = [(tuple(row) + (Fraction(0),), u[r]) for r, row in enumerate(tm)]
    rows = [tuple(dot(a, b) for b in T.domain.basis) for a in p.generators]
    ax0 = [dot(a, x0) for a in p.generators]
    # a.(Bc - x0) <= tau  and  a.(x0 - Bc) <= tau
    le_r = [(row + (Fraction(-1),), v) for row, v in zip(rows, ax0)]
    le_s = [(tuple(-c for c in row) + (Fraction(-1),), -v) for row, v in zip(rows, ax0)]
    obj = zeros(k) + (Fraction(1),)
    r_out = minimize(k + 1, obj, le=le_r, eq=eq)
    if r_out.status == INFEASIBLE:
        raise EmptyFiberError(f"{u} is not in the image of T")
    s_out = minimize(k + 1, obj, le=le_s, eq=eq)
    return FiberDistances(r_out.value, s_out.value)


@dataclass(frozen=True)
class OneStepOperator:
    y0: tuple | None
    operator: PartialOperator
    scale: Fraction  # ||T||; y0 and the intervals refer to T / scale
    intervals: tuple = ()
    x0: tuple | None = None


def one_step_operator_extension(prob: ExtensionProblem, x0) -> OneStepOperator:
    """S(z + t x0) = T z + t y0 for qtilde-type targets (including (Q, u)).

    T is rescaled to norm one first; y0 is assembled from the lower interval
    endpoint of each coordinate functional and the scale is applied back.
    """
    T = prob.operator
    if not is_qtilde_form(prob.target_norm):
        raise UnsupportedTargetError("one-step construction needs a qtilde-type target; use extend_operator")
    if T.is_total():
        return OneStepOperator(None, T, prob.beta)
    x0 = as_vec(x0)
    beta = prob.beta
    p = prob.source_norm
    intervals = []
    y0 = []
    for phi_op in represent_operator_by_functionals(T):
        values = tuple(img[0] for img in phi_op.images)
        if beta == 0:
            intervals.append((Fraction(0), Fraction(0)))
            y0.append(Fraction(0))
            continue
        step = extend_functional_one_step(p, T.domain, scale(1 / beta, values), x0)
        intervals.append((step.lower, step.upper))
        y0.append(step.value)
    y0 = tuple(y0)
    dom = Subspace(T.domain.ambient_dim, T.domain.basis + (x0,))
    S = PartialOperator(dom, T.images + (scale(beta, y0),), p, prob.target_norm)
    assert operator_norm(S) == beta
    return OneStepOperator(y0, S, beta, tuple(intervals), x0)


def one_step_inequality_violations(prob: ExtensionProblem, step: OneStepOperator, zs) -> list:
    """Sampled check of q(T'z + y0) <= p(z + x0) and q(T'z - y0) <= p(z - x0), T' = T / scale."""
    if step.y0 is None:
        return []
    T = prob.operator
    q, p = prob.target_norm, prob.source_norm
    inv = 1 / step.scale if step.scale else Fraction(0)
    bad = []
    for c in zs:
        z = T.domain.point(c)
        tz = scale(inv, T.apply_coords(c))
        if eval_norm(q, add(tz, step.y0)) > eval_norm(p, add(z, step.x0)):
            bad.append(("a", c))
        if eval_norm(q, sub(tz, step.y0)) > eval_norm(p, sub(z, step.x0)):
            bad.append(("b", c))
    return bad


# ---------------------------------------------------------------- projections
@dataclass(frozen=True)
class ProjectionResult:
    result: ExtensionResult
    projection: tuple | None  # n x n matrix of P = B S, when it exists

    @property
    def exists(self) -> bool:
        return self.result.extended


def norm_one_projection(X_norm: PolyAsymNorm, Y: Subspace) -> ProjectionResult:
    """Norm-one linear projection of (Q^n, X_norm) onto Y, or a certificate that none exists."""
    target = Y.restrict(X_norm)
    k = Y.dim
    ident = PartialOperator(Y, tuple(unit(k, i) for i in range(k)), X_norm, target)
    prob = ExtensionProblem(ident, beta=Fraction(1))
    res = extend_operator(prob)
    if not res.extended:
        return ProjectionResult(res, None)
    basis_cols = transpose(Y.basis)  # n x k
    P = tuple(matmul(basis_cols, res.matrix))
    assert [tuple(r) for r in matmul(P, P)] == [tuple(r) for r in P]
    return ProjectionResult(res, P)


# ---------------------------------------------------------------- the necessity construction
NON_INJECTIVE = "non-injective"
NOT_A_WITNESS = "not-a-witness"


@dataclass
class NecessityReport:
    status: str
    verdict: BipVerdict
    anchors: tuple
    r1: tuple
    r2: tuple
    int_balls_ok: bool
    table: FinitePairTable
    pair: PiecewiseGaugePair | None = None
    mu: MuNorm | None = None
    mu_norm: PolyAsymNorm | None = None
    restriction_isometric: bool = False
    rho1_at_anchors: tuple = ()
    rho2_at_anchors: tuple = ()
    ball_system: LPOutcome | None = None
    projection: ProjectionResult | None = None
    notes: list = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return (
            self.status == NON_INJECTIVE
            and self.ball_system is not None
            and self.ball_system.status == INFEASIBLE
            and self.projection is not None
            and not self.projection.exists
        )


def anchor_radii(fam: MixedBallFamily):
    """Distinct centers with r1(x) = min s_i and r2(x) = min r_i over entries centred at x."""
    anchors, r1, r2 = [], [], []
    for c, r, s in fam.entries:
        if c in anchors:
            i = anchors.index(c)
            r1[i] = min(r1[i], s)
            r2[i] = min(r2[i], r)
        else:
            anchors.append(c)
            r1.append(s)
            r2.append(r)
    return tuple(anchors), tuple(r1), tuple(r2)


def necessity_pipeline(fam: MixedBallFamily, samples=None, seed: int = 0) -> NecessityReport:
    """Turn a mixed-BIP counterexample into a certificate of non-injectivity."""
    verdict = mixed_bip_report(fam)
    if verdict.kind != BIP_VIOLATED:
        raise PipelineRefused(verdict)
    q = fam.norm
    if not is_t1(q):
        raise UnsupportedNormError("necessity pipeline needs a T1 norm")
    anchors, r1, r2 = anchor_radii(fam)
    start = FinitePairTable(anchors, r1, r2, q)
    int_ok = not start.violations_a()
    table = minimal_pair(anchors, q, r1, r2)
    report = NecessityReport(NOT_A_WITNESS, verdict, anchors, r1, r2, int_ok, table)
    if not table.d_holds:
        report.notes.append("family admits a valid pair through this point; not a usable witness")
        return report
    pair = extend_pair_globally(table, q)
    mu = build_mu_norm(q, pair, samples=samples, seed=seed)
    mu_poly = mu_as_poly(mu)
    n = q.dim
    Z = Subspace(n + 1, tuple(unit(n + 1, k) for k in range(n)))
    report.pair, report.mu, report.mu_norm = pair, mu, mu_poly
    report.restriction_isometric = same_norm(Z.restrict(mu_poly), q)
    report.rho1_at_anchors = tuple(pair.rho1(x) for x in anchors)
    report.rho2_at_anchors = tuple(pair.rho2(x) for x in anchors)
    # P(xi) would satisfy q(x - P xi) <= rho1(x) and q(P xi - x) <= rho2(x) at every anchor
    rows = []
    for x, a, b in zip(anchors, report.rho1_at_anchors, report.rho2_at_anchors):
        rows.extend(Ball(x, a, q, BACKWARD).constraints())
        rows.extend(Ball(x, b, q, FORWARD).constraints())
    report.ball_system = feasible(n, le=rows)
    report.projection = norm_one_projection(mu_poly, Z)
    report.status = NON_INJECTIVE
    return report
