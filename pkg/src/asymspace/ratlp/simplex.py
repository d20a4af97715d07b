"""Exact two-phase simplex with Bland's rule and Farkas certificates.

Programs are stated over free variables ``x`` in Q^n (optionally some marked
nonnegative) as

    maximize / minimize  c . x
    subject to           A x <= b,   E x = e.

Every outcome is re-verified in exact arithmetic before it is returned; an
outcome that fails its own check raises :class:`SolverError`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ._backend import get_backend
from .linalg import DimensionError, as_vec, dot, to_rat, zeros

MAXIMIZE = "maximize"
MINIMIZE = "minimize"
FEASIBILITY = "feasibility"

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class SolverError(RuntimeError):
    """An outcome failed exact re-verification (a solver bug, never user error)."""


@dataclass(frozen=True)
class LinearProgram:
    dim: int
    objective: tuple = ()
    inequalities: tuple = ()  # ((row, bound), ...) meaning row . x <= bound
    equalities: tuple = ()  # ((row, value), ...) meaning row . x == value
    sense: str = FEASIBILITY
    nonneg: tuple = ()  # variable indices constrained to be >= 0

    def __post_init__(self):
        if self.dim < 0:
            raise DimensionError("negative dimension")
        obj = as_vec(self.objective) if self.objective else zeros(self.dim)
        if len(obj) != self.dim:
            raise DimensionError(f"objective has length {len(obj)}, expected {self.dim}")
        ineqs = tuple((as_vec(r), to_rat(b)) for r, b in self.inequalities)
        eqs = tuple((as_vec(r), to_rat(b)) for r, b in self.equalities)
        for row, _ in ineqs + eqs:
            if len(row) != self.dim:
                raise DimensionError(f"constraint row has length {len(row)}, expected {self.dim}")
        if self.sense not in (MAXIMIZE, MINIMIZE, FEASIBILITY):
            raise ValueError(f"unknown sense {self.sense!r}")
        nonneg = tuple(sorted(set(self.nonneg)))
        if any(k < 0 or k >= self.dim for k in nonneg):
            raise DimensionError("nonnegativity index out of range")
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "inequalities", ineqs)
        object.__setattr__(self, "equalities", eqs)
        object.__setattr__(self, "nonneg", nonneg)


@dataclass(frozen=True)
class LPOutcome:
    """Result of :func:`solve`.

    For ``infeasible`` outcomes the certificate consists of ``certificate``
    (one multiplier >= 0 per inequality), ``eq_certificate`` (one free
    multiplier per equality) and ``bound_certificate`` (one multiplier >= 0
    per variable listed in ``nonneg``, for the implicit rows -x_k <= 0).  The
    weighted rows sum to the zero functional while the weighted right-hand
    sides sum to -1.
    """

    status: str
    point: tuple | None = None
    value: Fraction | None = None
    certificate: tuple | None = None
    eq_certificate: tuple | None = None
    bound_certificate: tuple | None = None
    ray: tuple | None = None
    pivots: int = 0
    backend: str = field(default="", compare=False)

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


def _feasible_point(lp: LinearProgram, x) -> bool:
    if any(x[k] < 0 for k in lp.nonneg):
        return False
    if any(dot(r, x) > b for r, b in lp.inequalities):
        return False
    return all(dot(r, x) == b for r, b in lp.equalities)


def verify_farkas(lp: LinearProgram, y, w, z) -> bool:
    """Exact check of an infeasibility certificate for ``lp``."""
    if len(y) != len(lp.inequalities) or len(w) != len(lp.equalities) or len(z) != len(lp.nonneg):
        return False
    if any(v < 0 for v in y) or any(v < 0 for v in z):
        return False
    combo = [Fraction(0)] * lp.dim
    rhs = Fraction(0)
    for mult, (row, b) in zip(y, lp.inequalities):
        if mult:
            for k, a in enumerate(row):
                combo[k] += mult * a
            rhs += mult * b
    for mult, (row, b) in zip(w, lp.equalities):
        if mult:
            for k, a in enumerate(row):
                combo[k] += mult * a
            rhs += mult * b
    for mult, k in zip(z, lp.nonneg):
        combo[k] -= mult
    return all(c == 0 for c in combo) and rhs < 0


def verify_outcome(lp: LinearProgram, out: LPOutcome) -> bool:
    if out.status == INFEASIBLE:
        return verify_farkas(lp, out.certificate, out.eq_certificate, out.bound_certificate)
    if out.point is None or not _feasible_point(lp, out.point):
        return False
    if out.status == OPTIMAL:
        return out.value == dot(lp.objective, out.point)
    d = out.ray
    if d is None or any(d[k] < 0 for k in lp.nonneg):
        return False
    if any(dot(r, d) > 0 for r, _ in lp.inequalities):
        return False
    if any(dot(r, d) != 0 for r, _ in lp.equalities):
        return False
    gain = dot(lp.objective, d)
    return gain > 0 if lp.sense == MAXIMIZE else gain < 0


class _Tableau:
    def __init__(self, rows, basis, backend):
        self.rows = rows
        self.basis = basis
        self.zero = backend.zero
        self.pivots = 0

    def reduced_costs(self, costs):
        d = list(costs) + [self.zero]
        for i, row in enumerate(self.rows):
            cb = costs[self.basis[i]]
            if cb:
                for k, v in enumerate(row):
                    if v:
                        d[k] -= cb * v
        return d

    def pivot(self, r, c, d):
        prow = self.rows[r]
        piv = prow[c]
        if piv != 1:
            inv = 1 / piv
            prow = [v * inv if v else v for v in prow]
            self.rows[r] = prow
        nz = [k for k, v in enumerate(prow) if v]
        for i, row in enumerate(self.rows):
            if i != r:
                f = row[c]
                if f:
                    for k in nz:
                        row[k] -= f * prow[k]
        f = d[c]
        if f:
            for k in nz:
                d[k] -= f * prow[k]
        self.basis[r] = c
        self.pivots += 1

    def run(self, d, allowed):
        """Bland's rule; returns None at optimality or the entering column of an unbounded ray."""
        while True:
            enter = next((j for j in allowed if d[j] < 0), None)
            if enter is None:
                return None
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    if best is None or ratio < best[0] or (ratio == best[0] and self.basis[i] < self.basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                return enter
            self.pivot(best[1], enter, d)


def solve(lp: LinearProgram, backend: str | None = None) -> LPOutcome:
    """Solve ``lp`` exactly; see :class:`LPOutcome` for the result contract."""
    bk = get_backend(backend)
    num = bk.to_num
    zero, one = bk.zero, bk.one
    n = lp.dim
    nonneg = set(lp.nonneg)

    # structural columns: one per nonnegative variable, two (x+, x-) per free one
    pos_col, neg_col = [], []
    ncol = 0
    for k in range(n):
        pos_col.append(ncol)
        ncol += 1
        if k in nonneg:
            neg_col.append(None)
        else:
            neg_col.append(ncol)
            ncol += 1
    n_struct = ncol
    n_ineq = len(lp.inequalities)
    slack0 = n_struct
    ncol += n_ineq

    raw = [(row, b, True) for row, b in lp.inequalities] + [(row, b, False) for row, b in lp.equalities]
    signs = []
    rows = []
    basis = []
    art_rows = []
    for i, (row, b, is_ineq) in enumerate(raw):
        sigma = -1 if b < 0 else 1
        signs.append(sigma)
        coeffs = {}
        for k, a in enumerate(row):
            if a:
                a = num(a * sigma)
                coeffs[pos_col[k]] = a
                if neg_col[k] is not None:
                    coeffs[neg_col[k]] = -a
        if is_ineq:
            coeffs[slack0 + i] = num(Fraction(sigma))
        rows.append((coeffs, num(b * sigma)))
        if is_ineq and sigma == 1:
            basis.append(slack0 + i)
        else:
            basis.append(None)
            art_rows.append(i)
    art0 = ncol
    for j, i in enumerate(art_rows):
        basis[i] = art0 + j
    ncol += len(art_rows)
    init_col = list(basis)
    width = ncol + 1
    dense = []
    for i, (coeffs, rhs) in enumerate(rows):
        r = [zero] * width
        for k, v in coeffs.items():
            r[k] = v
        r[basis[i]] = one
        r[-1] = rhs
        dense.append(r)
    tab = _Tableau(dense, basis, bk)
    struct_and_slack = list(range(art0))

    if art_rows:
        c1 = [zero] * ncol
        for j in range(len(art_rows)):
            c1[art0 + j] = one
        d = tab.reduced_costs(c1)
        tab.run(d, struct_and_slack)
        infeas = -d[-1]
        if infeas > 0:
            # duals pi_i = c_init(i) - d[init_col(i)]; Farkas multipliers y_i = -sigma_i pi_i
            mult = []
            for i in range(len(raw)):
                col = init_col[i]
                c_init = one if col >= art0 else zero
                pi = bk.to_fraction(c_init - d[col])
                mult.append(-signs[i] * pi)
            return _infeasible(lp, mult, n_ineq, bk.name, tab.pivots)
        # drive artificial variables out of the basis, dropping redundant rows
        i = 0
        while i < len(tab.rows):
            if tab.basis[i] >= art0:
                row = tab.rows[i]
                j = next((k for k in struct_and_slack if row[k] != 0), None)
                if j is None:
                    del tab.rows[i]
                    del tab.basis[i]
                    continue
                tab.pivot(i, j, d)
            i += 1

    costs = [zero] * ncol
    if lp.sense != FEASIBILITY:
        flip = -1 if lp.sense == MAXIMIZE else 1
        for k, c in enumerate(lp.objective):
            if c:
                costs[pos_col[k]] = num(c * flip)
                if neg_col[k] is not None:
                    costs[neg_col[k]] = num(-c * flip)
    d = tab.reduced_costs(costs)
    enter = tab.run(d, struct_and_slack)

    values = [zero] * ncol
    for i, b in enumerate(tab.basis):
        values[b] = tab.rows[i][-1]

    def to_x(vals):
        out = []
        for k in range(n):
            v = vals[pos_col[k]]
            if neg_col[k] is not None:
                v = v - vals[neg_col[k]]
            out.append(bk.to_fraction(v))
        return tuple(out)

    point = to_x(values)
    if enter is not None:
        dirv = [zero] * ncol
        dirv[enter] = one
        for i, b in enumerate(tab.basis):
            dirv[b] = -tab.rows[i][enter]
        out = LPOutcome(UNBOUNDED, point=point, ray=to_x(dirv), pivots=tab.pivots, backend=bk.name)
    else:
        out = LPOutcome(OPTIMAL, point=point, value=dot(lp.objective, point), pivots=tab.pivots, backend=bk.name)
    if not verify_outcome(lp, out):
        raise SolverError(f"{out.status} outcome failed exact verification")
    return out


def _infeasible(lp, mult, n_ineq, backend_name, pivots) -> LPOutcome:
    y = mult[:n_ineq]
    w = mult[n_ineq:]
    combo = [Fraction(0)] * lp.dim
    rhs = Fraction(0)
    for m, (row, b) in zip(mult, lp.inequalities + lp.equalities):
        if m:
            for k, a in enumerate(row):
                combo[k] += m * a
            rhs += m * b
    z = [combo[k] for k in lp.nonneg]
    if rhs >= 0:
        raise SolverError("phase-one duals do not certify infeasibility")
    s = -1 / rhs
    out = LPOutcome(
        INFEASIBLE,
        certificate=tuple(v * s for v in y),
        eq_certificate=tuple(v * s for v in w),
        bound_certificate=tuple(v * s for v in z),
        pivots=pivots,
        backend=backend_name,
    )
    if not verify_outcome(lp, out):
        raise SolverError("infeasibility certificate failed exact verification")
    return out


def maximize(dim: int, objective: Sequence, le=(), eq=(), nonneg=(), backend=None) -> LPOutcome:
    return solve(LinearProgram(dim, tuple(objective), tuple(le), tuple(eq), MAXIMIZE, tuple(nonneg)), backend)


def minimize(dim: int, objective: Sequence, le=(), eq=(), nonneg=(), backend=None) -> LPOutcome:
    return solve(LinearProgram(dim, tuple(objective), tuple(le), tuple(eq), MINIMIZE, tuple(nonneg)), backend)


def feasible(dim: int, le=(), eq=(), nonneg=(), backend=None) -> LPOutcome:
    return solve(LinearProgram(dim, (), tuple(le), tuple(eq), FEASIBILITY, tuple(nonneg)), backend)
