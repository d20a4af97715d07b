"""Acceptance gate: nine criteria, exact arithmetic, each under its time limit.

Every test records one PASS/FAIL line; the lines are printed at the end of
the pytest run (see conftest) and by ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import random
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from asymspace.bip import (
    BIP_HOLDS,
    BIP_VIOLATED,
    MaxAffineGauge,
    MixedBallFamily,
    PiecewiseGaugePair,
    build_mu_norm,
    common_point,
    minimal_pair,
    mixed_bip_report,
    pairwise_mixed_check,
    scale_to_pairwise,
)
from asymspace.extend import (
    NON_INJECTIVE,
    ExtensionProblem,
    PipelineRefused,
    extend_coordinatewise,
    extend_operator,
    necessity_pipeline,
    norm_one_projection,
)
from asymspace.geometry import (
    BACKWARD,
    FORWARD,
    Ball,
    PartialOperator,
    PolyAsymNorm,
    Subspace,
    conjugate,
    corpus,
    embed_into_ellinfty,
    eval_norm,
    hexagon,
    is_t1,
    isometric_image,
    linf,
    operator_norm,
    pair_intersection_witness,
    qtilde,
    simplex_gauge,
    symmetrize,
    u_norm,
    l1,
)
from asymspace.ratlp import INFEASIBLE, LinearProgram, add, feasible, neg, scale, sub, unit, verify_farkas
from asymspace.ratlp.linalg import rank
from asymspace.sampling import integer_vector, positive_rational, rational_vector

RESULTS: list[str] = []
TRIANGLE = [(0, 0), (2, 0), (0, 2)]


@contextmanager
def criterion(number: int, title: str, limit: float):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = elapsed < limit
        verdict = "PASS" if ok and within else "FAIL"
        note = "" if ok else " (assertion failed)"
        RESULTS.append(f"ACCEPTANCE {number} {verdict}: {title} [{elapsed:.2f} s, limit {limit:g} s]{note}")
    assert within, f"criterion {number} took {elapsed:.2f} s, limit {limit} s"


# ---------------------------------------------------------------- 1
def test_criterion_1_axiom_suite():
    with criterion(1, "axioms, conjugation and symmetrization on the corpus, 1000 vectors per norm", 10):
        for p in corpus():
            rng = random.Random(f"axioms-{p.name}")
            pbar, ps, psbar = conjugate(p), symmetrize(p), symmetrize(conjugate(p))
            pbarbar = conjugate(pbar)
            for _ in range(1000):
                x = rational_vector(rng, p.dim, 6, 5)
                y = rational_vector(rng, p.dim, 6, 5)
                a = positive_rational(rng, 5, 4)
                px, pmx = eval_norm(p, x), eval_norm(p, neg(x))
                assert px >= 0
                if px == 0 and pmx == 0:
                    assert not any(x)
                assert eval_norm(p, scale(a, x)) == a * px
                assert eval_norm(p, add(x, y)) <= px + eval_norm(p, y)
                assert eval_norm(pbar, x) == pmx
                assert eval_norm(pbarbar, x) == px
                assert eval_norm(ps, x) == max(px, pmx) == eval_norm(psbar, x)
                assert eval_norm(ps, neg(x)) == eval_norm(ps, x)


# ---------------------------------------------------------------- 2
def test_criterion_2_pair_intersection_round_trip():
    with criterion(2, "forward/backward pair meets iff q(y2 - y1) <= r1 + r2, both witnesses verified", 5):
        for p in corpus():
            rng = random.Random(f"pairs-{p.name}")
            for _ in range(500):
                y1, y2 = rational_vector(rng, p.dim, 4, 3), rational_vector(rng, p.dim, 4, 3)
                r1, r2 = positive_rational(rng, 3, 3), positive_rational(rng, 3, 3)
                meets = eval_norm(p, sub(y2, y1)) <= r1 + r2
                w = pair_intersection_witness(y1, r1, y2, r2, p)
                m = pair_intersection_witness(y1, r1, y2, r2, p, mirrored=True)
                if meets:
                    assert eval_norm(p, sub(w, y1)) <= r1 and eval_norm(p, sub(y2, w)) <= r2
                    assert eval_norm(p, sub(m, y1)) <= r2 and eval_norm(p, sub(y2, m)) <= r1
                else:
                    assert w is None and m is None
                    rows = Ball(y1, r1, p, FORWARD).constraints() + Ball(y2, r2, p, BACKWARD).constraints()
                    out = feasible(p.dim, le=rows)
                    assert out.status == INFEASIBLE


# ---------------------------------------------------------------- 3
def test_criterion_3_hexagon_counterexample():
    with criterion(3, "hexagon triangle family certified empty, same family under linf meets", 1):
        fam = MixedBallFamily.uniform(hexagon(), TRIANGLE, 1)
        assert pairwise_mixed_check(fam) == []
        cp = common_point(fam)
        assert cp.empty
        lp = LinearProgram(2, inequalities=[r for b in fam.balls() for r in b.constraints()])
        out = cp.outcome
        assert verify_farkas(lp, out.certificate, out.eq_certificate, out.bound_certificate)
        fam_inf = MixedBallFamily.uniform(linf(2), TRIANGLE, 1)
        assert pairwise_mixed_check(fam_inf) == []
        pt = common_point(fam_inf).point
        assert pt is not None and fam_inf.contains(pt)


# ---------------------------------------------------------------- 4
def _qtilde_type(rng, n):
    """qtilde on Q^n or its image under a positive diagonal map."""
    if rng.random() < 0.5:
        return qtilde(n)
    diag = [[positive_rational(rng, 3, 2) if i == j else 0 for j in range(n)] for i in range(n)]
    return isometric_image(qtilde(n), diag)


def test_criterion_4_linf_type_mixed_bip():
    with criterion(4, "200 random pairwise-passing qtilde-type families (dim <= 4, <= 8 balls) meet", 30):
        rng = random.Random("mixed-bip")
        for _ in range(200):
            n = rng.randint(1, 4)
            norm = _qtilde_type(rng, n)
            centers = [rational_vector(rng, n, 4, 3) for _ in range(rng.randint(1, 8))]
            r = [positive_rational(rng, 3, 3) for _ in centers]
            s = [positive_rational(rng, 3, 3) for _ in centers]
            fam = scale_to_pairwise(norm, centers, r, s)
            assert pairwise_mixed_check(fam) == []
            verdict = mixed_bip_report(fam)
            assert verdict.kind == BIP_HOLDS and fam.contains(verdict.point)


# ---------------------------------------------------------------- 5
def _random_source(rng, n):
    while True:
        gens = [integer_vector(rng, n, 3) for _ in range(rng.randint(n + 1, n + 3))]
        gens.append(tuple(-sum(g[k] for g in gens) for k in range(n)))
        try:
            p = PolyAsymNorm(tuple(gens))
        except ValueError:
            continue
        if is_t1(p):
            return p


def test_criterion_5_extension_engine():
    with criterion(5, "100 random extension problems R^4 -> qtilde-R^3, exact norm preservation, engines agree", 60):
        rng = random.Random("extension")
        for _ in range(100):
            p = _random_source(rng, 4)
            k = rng.randint(1, 3)
            while True:
                basis = [integer_vector(rng, 4, 2) for _ in range(k)]
                if rank(basis) == k:
                    break
            Z = Subspace(4, tuple(basis))
            T = PartialOperator(Z, tuple(integer_vector(rng, 3, 2) for _ in range(k)), p, qtilde(3))
            prob = ExtensionProblem(T)
            a = extend_operator(prob)
            b = extend_coordinatewise(prob)
            assert a.extended and b.extended
            for res in (a, b):
                S = res.as_operator(prob)
                for v, img in zip(Z.basis, T.images):
                    assert S.apply(v) == img
                assert operator_norm(S) == operator_norm(T) == prob.beta


# ---------------------------------------------------------------- 6
def test_criterion_6_embedding_isometry():
    with criterion(6, "qtilde(E x) = p(x) for every corpus norm on 500 random x", 5):
        for p in corpus():
            E = embed_into_ellinfty(p)
            q = E.target_norm
            rng = random.Random(f"embed-{p.name}")
            for _ in range(500):
                x = rational_vector(rng, p.dim, 8, 6)
                assert eval_norm(q, E.apply(x)) == eval_norm(p, x)


# ---------------------------------------------------------------- 7
def test_criterion_7_minimal_pairs():
    with criterion(7, "50 random configurations reach an exact fixed point within the pass cap", 10):
        rng = random.Random("minimal-pairs")
        norms = [u_norm(), linf(1), hexagon(), simplex_gauge(), qtilde(2), l1(2), qtilde(3)]
        for _ in range(50):
            q = rng.choice(norms)
            pts = []
            size = rng.randint(1, 6)
            while len(pts) < size:
                v = rational_vector(rng, q.dim, 3, 2)
                if v not in pts:
                    pts.append(v)
            diam = max(eval_norm(q, sub(a, b)) for a in pts for b in pts)
            r1 = tuple(diam / 2 + positive_rational(rng, 2, 2) for _ in pts)
            r2 = tuple(diam / 2 + positive_rational(rng, 2, 2) for _ in pts)
            t = minimal_pair(pts, q, r1, r2)
            assert t.passes <= 2 * len(pts) + 3
            assert t.update1() == t.rho1 and t.update2() == t.rho2
            assert all(a <= b for a, b in zip(t.rho1, r1)) and all(a <= b for a, b in zip(t.rho2, r2))
            assert not t.violations_a() and t.satisfies_b()


# ---------------------------------------------------------------- 8
def _triple(case, rng, n):
    def pos():
        return positive_rational(rng, 4, 3)

    if case == "I":
        t, tp = Fraction(0), Fraction(0)
    elif case == "II":
        t, tp = pos() * rng.choice((1, -1)), Fraction(0)
        if rng.random() < 0.5:
            t, tp = tp, t
    elif case == "III(i)":
        t, tp = pos(), pos()
    elif case == "III(ii)":
        t, tp = -pos(), -pos()
    elif case == "III(iii)":
        t = pos()
        tp = -t
    elif case == "III(iv)":
        tp = -pos()
        t = -tp + pos()
    else:
        t = pos()
        tp = -t - pos()
    return tuple(rational_vector(rng, n, 4, 3)) + (t,), tuple(rational_vector(rng, n, 4, 3)) + (tp,)


def test_criterion_8_mu_norm():
    with criterion(8, "mu closed form |z| + |t|/2 on 100+ samples, triangle branches I to III(v) with 20+ triples", 10):
        ab = linf(1)
        g = MaxAffineGauge((((1,), Fraction(1, 2)), ((-1,), Fraction(1, 2))))
        mu = build_mu_norm(ab, PiecewiseGaugePair(g, g, ab))
        rng = random.Random("mu")
        for _ in range(120):
            z, t = rational_vector(rng, 2, 6, 5)
            assert mu((z, t)) == abs(z) + abs(t) / 2
        for case in ("I", "II", "III(i)", "III(ii)", "III(iii)", "III(iv)", "III(v)"):
            for _ in range(25):
                y, yp = _triple(case, rng, 1)
                assert mu(add(y, yp)) <= mu(y) + mu(yp)


# ---------------------------------------------------------------- 9
def test_criterion_9_necessity_pipeline():
    with criterion(9, "hexagon non-injectivity report with re-verified certificates, linf family refused", 5):
        fam = MixedBallFamily.uniform(hexagon(), TRIANGLE, 1)
        rep = necessity_pipeline(fam)
        assert rep.status == NON_INJECTIVE and rep.certified
        assert rep.verdict.kind == BIP_VIOLATED
        assert rep.table.rho1 == (1, 1, 1) and rep.table.rho2 == (1, 1, 1)
        assert rep.mu_norm is not None and rep.mu_norm.dim == 3 and rep.restriction_isometric
        # re-verify the family certificate and the certificate for the image of xi
        fam_lp = LinearProgram(2, inequalities=[r for b in fam.balls() for r in b.constraints()])
        o = rep.verdict.outcome
        assert verify_farkas(fam_lp, o.certificate, o.eq_certificate, o.bound_certificate)
        rows = []
        for x, a, b in zip(rep.anchors, rep.rho1_at_anchors, rep.rho2_at_anchors):
            rows.extend(Ball(x, a, hexagon(), BACKWARD).constraints())
            rows.extend(Ball(x, b, hexagon(), FORWARD).constraints())
        xi_lp = LinearProgram(2, inequalities=rows)
        o = rep.ball_system
        assert verify_farkas(xi_lp, o.certificate, o.eq_certificate, o.bound_certificate)
        # the hexagon plane inside the mu-space has no norm-one projection
        plane = Subspace(3, (unit(3, 0), unit(3, 1)))
        assert not norm_one_projection(rep.mu_norm, plane).exists
        with pytest.raises(PipelineRefused):
            necessity_pipeline(MixedBallFamily.uniform(linf(2), TRIANGLE, 1))


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except Exception:  # the line is already recorded
                failed += 1
    print("\n".join(RESULTS))
    sys.exit(1 if failed else 0)
