"""Dualistic structures: conjugate pairs, induced product structures, analyzers.

A dualistic structure is a metric together with an ordered pair of
connections satisfying X.g(Y,Z) = g(nabla_X Y, Z) + g(Y, nabla*_X Z).
Construction validates the pair numerically; the analyzers treat theorem
statements as predictions and always compare them against a directly
computed flatness verdict.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import ManifoldSpec
from .connections import ConnectionField, conjugate, duality_residual, torsion_at
from .curvature import (ConstantSectionalResult, DimensionError, is_constant_sectional,
                        riemann_at)
from .products import (ProductSpec, block_connection, hessian_condition_defect,
                       mixed_ricci_table, mixed_weyl_report, product_metric_residual,
                       riemann_block_residuals, separability_test, to_warped,
                       twisted_product, weyl_parallel_defect)

__all__ = [
    "DualisticStructure", "ProductDualisticStructure", "ConjugacyError",
    "FlatnessVerdict", "make_dualistic", "induce_on_product",
    "ProjectionReport", "projection_check", "TorsionInheritanceReport",
    "torsion_inheritance_check", "dually_flat_verdict",
    "lemma_dual_block_report",
    "Theorem41Record", "theorem41_analyze",
    "Theorem42Record", "theorem42_analyze",
    "Theorem43Record", "theorem43_analyze",
]


class ConjugacyError(ArithmeticError):
    """Claimed conjugate pair violates the duality relation."""

    def __init__(self, message: str, worst_point=None, residual: float | None = None):
        super().__init__(message)
        self.worst_point = worst_point
        self.residual = residual


@dataclass(eq=False)
class DualisticStructure:
    """A metric with a validated conjugate pair of connections."""

    manifold: ManifoldSpec
    primal: ConnectionField
    dual: ConnectionField
    residual: float
    involution_defect: float
    samples: int
    seed: int

    def __repr__(self) -> str:
        return (f"DualisticStructure({self.manifold.name!r}, "
                f"residual={self.residual:.2e})")


@dataclass(eq=False)
class ProductDualisticStructure(DualisticStructure):
    """Induced structure on a twisted product, with its factor structures."""

    product: ProductSpec = None
    base_structure: DualisticStructure = None
    fiber_structure: DualisticStructure = None


def make_dualistic(M: ManifoldSpec, C: ConnectionField,
                   Cstar: ConnectionField | None = None,
                   samples: int = 64, seed: int = 42, tol: float = 1e-9,
                   involution_tol: float = 1e-10,
                   _cls=DualisticStructure, **extra) -> DualisticStructure:
    """Validate (g, C, C*) as a dualistic structure; C* defaults to conjugate(C)."""
    if Cstar is None:
        Cstar = conjugate(C, M)
    pts = M.sample_points(samples, seed)
    worst, worst_pt = 0.0, None
    for pt in pts:
        res = duality_residual(M, C, Cstar, pt)
        if res > worst:
            worst, worst_pt = res, pt
    if worst >= tol:
        raise ConjugacyError(
            f"duality residual {worst:.3e} >= {tol:.1e} at {worst_pt.coords.tolist()}",
            worst_point=worst_pt, residual=worst)
    double_dual = conjugate(Cstar, M)
    involution = max(float(np.max(np.abs(double_dual.gamma_at(pt) - C.gamma_at(pt))))
                     for pt in pts)
    if involution >= involution_tol:
        raise ConjugacyError(
            f"dual of the dual deviates from the primal by {involution:.3e}",
            residual=involution)
    return _cls(M, C, Cstar, worst, involution, samples, seed, **extra)


def induce_on_product(dB: DualisticStructure, dF: DualisticStructure, twist,
                      samples: int = 64, seed: int = 42,
                      tol: float = 1e-9) -> ProductDualisticStructure:
    """Build the induced dualistic structure (g, D, D*) on B x_b F.

    D follows the twisted block pattern with factor primal connections
    substituted; D* is derived by conjugation rather than posited, which is
    the unique metric-consistent completion.  The projection checks confirm
    that D* nevertheless recovers the factor duals block-wise.
    """
    P = twisted_product(dB.manifold, dF.manifold, twist)
    D = block_connection(P, dB.primal, dF.primal)
    return make_dualistic(P.manifold, D, None, samples, seed, tol,
                          _cls=ProductDualisticStructure,
                          product=P, base_structure=dB, fiber_structure=dF)


# ---------------------------------------------------------------------------
# projections of an induced structure back onto the factors


@dataclass(frozen=True)
class ProjectionReport:
    base_recovery_primal: float
    base_recovery_dual: float
    fiber_recovery_primal: float
    fiber_recovery_dual: float
    base_conjugacy_residual: float
    fiber_conjugacy_residual: float
    samples: int

    def max_residual(self) -> float:
        return max(self.base_recovery_primal, self.base_recovery_dual,
                   self.fiber_recovery_primal, self.fiber_recovery_dual,
                   self.base_conjugacy_residual, self.fiber_conjugacy_residual)


def projection_check(induced: ProductDualisticStructure,
                     samples: int = 16, seed: int = 42) -> ProjectionReport:
    """Block recovery of the factor structures from the induced pair.

    Horizontal parts of D and D* on horizontal lifts must equal lifts of the
    factor connections; vertical parts recover the fiber connections after
    removing the twist cross-terms.  The projected pairs must satisfy the
    factor duality relations, the fiber one with the b^-2 weighting.
    """
    P = induced.product
    dB, dF = induced.base_structure, induced.fiber_structure
    r = P.r
    base_p = base_d = fib_p = fib_d = conj_b = conj_f = 0.0
    for pt in P.manifold.sample_points(samples, seed):
        x = pt.coords
        xb, xf = P.split(x)
        b, k1, _ = P.twist_data_at(x)
        gB = P.base.metric_at(xb)
        gF = P.fiber.metric_at(xf)
        gFinv = P.fiber.inverse_metric_at(xf)
        gBinv = P.base.inverse_metric_at(xb)
        dgB = P.base.metric_derivatives_at(xb)
        dg = P.manifold.metric_derivatives_at(x)
        kb, kf = k1[:r], k1[r:]
        eye_s = np.eye(P.s)
        cross_fiber = (np.einsum("u,wv->wuv", kf, eye_s)
                       + np.einsum("v,wu->wuv", kf, eye_s)
                       - np.einsum("uv,w->wuv", gF, gFinv @ kf))
        cross_base = -(b**2) * np.einsum("uv,c->cuv", gF, gBinv @ kb)

        for conn, factor_conn, sink in ((induced.primal, dB.primal, "p"),
                                        (induced.dual, dB.dual, "d")):
            G = conn.gamma_at(x)
            dev = max(float(np.max(np.abs(G[:r, :r, :r] - factor_conn.gamma_at(xb)))),
                      float(np.max(np.abs(G[r:, :r, :r]))))
            if sink == "p":
                base_p = max(base_p, dev)
            else:
                base_d = max(base_d, dev)
        for conn, factor_conn, sink in ((induced.primal, dF.primal, "p"),
                                        (induced.dual, dF.dual, "d")):
            G = conn.gamma_at(x)
            dev = max(float(np.max(np.abs(G[r:, r:, r:] - cross_fiber
                                          - factor_conn.gamma_at(xf)))),
                      float(np.max(np.abs(G[:r, r:, r:] - cross_base))))
            if sink == "p":
                fib_p = max(fib_p, dev)
            else:
                fib_d = max(fib_d, dev)

        Gp = induced.primal.gamma_at(x)
        Gd = induced.dual.gamma_at(x)
        res_b = (dgB
                 - np.einsum("mab,mc->abc", Gp[:r, :r, :r], gB)
                 - np.einsum("mac,bm->abc", Gd[:r, :r, :r], gB))
        conj_b = max(conj_b, float(np.max(np.abs(res_b))))
        # b^-2 U.g(V,W) = g_F(sigma(D_U V), W) + g_F(V, sigma(D*_U W))
        res_f = (dg[r:, r:, r:] / b**2
                 - np.einsum("muv,mw->uvw", Gp[r:, r:, r:], gF)
                 - np.einsum("muw,vm->uvw", Gd[r:, r:, r:], gF))
        conj_f = max(conj_f, float(np.max(np.abs(res_f))))
    return ProjectionReport(base_p, base_d, fib_p, fib_d, conj_b, conj_f, samples)


@dataclass(frozen=True)
class TorsionInheritanceReport:
    factor_torsion_max: float
    induced_primal_torsion_max: float
    induced_dual_torsion_max: float
    inherited: bool
    tol: float


def torsion_inheritance_check(induced: ProductDualisticStructure,
                              samples: int = 16, seed: int = 42,
                              tol: float = 1e-10) -> TorsionInheritanceReport:
    """Torsion-free factor connections must induce torsion-free D and D*."""
    P = induced.product
    dB, dF = induced.base_structure, induced.fiber_structure
    factor_t = 0.0
    for pt in P.base.sample_points(samples, seed):
        factor_t = max(factor_t, float(np.max(np.abs(torsion_at(dB.primal, pt)))),
                       float(np.max(np.abs(torsion_at(dB.dual, pt)))))
    for pt in P.fiber.sample_points(samples, seed):
        factor_t = max(factor_t, float(np.max(np.abs(torsion_at(dF.primal, pt)))),
                       float(np.max(np.abs(torsion_at(dF.dual, pt)))))
    tp = td = 0.0
    for pt in P.manifold.sample_points(samples, seed):
        tp = max(tp, float(np.max(np.abs(torsion_at(induced.primal, pt)))))
        td = max(td, float(np.max(np.abs(torsion_at(induced.dual, pt)))))
    inherited = (factor_t >= tol) or (tp < tol and td < tol)
    return TorsionInheritanceReport(factor_t, tp, td, inherited, tol)


# ---------------------------------------------------------------------------
# flatness


@dataclass(frozen=True)
class FlatnessVerdict:
    torsion_primal_max: float
    torsion_dual_max: float
    riemann_primal_max: float
    riemann_dual_max: float
    primal_flat: bool
    dual_flat: bool
    torsion_free: bool
    dually_flat: bool
    flat_flags_agree: bool
    samples: int
    seed: int
    tol: float


def dually_flat_verdict(d: DualisticStructure, samples: int = 64,
                        tol: float = 1e-9, seed: int = 42) -> FlatnessVerdict:
    """Evaluate torsion and curvature of both connections over samples.

    Also cross-checks that R = 0 and R* = 0 verdicts agree, which must hold
    for any genuine conjugate pair.
    """
    tp = td = rp = rd = 0.0
    for pt in d.manifold.sample_points(samples, seed):
        tp = max(tp, float(np.max(np.abs(torsion_at(d.primal, pt)))))
        td = max(td, float(np.max(np.abs(torsion_at(d.dual, pt)))))
        rp = max(rp, float(np.max(np.abs(riemann_at(d.primal, pt)))))
        rd = max(rd, float(np.max(np.abs(riemann_at(d.dual, pt)))))
    primal_flat, dual_flat = rp < tol, rd < tol
    torsion_free = tp < tol and td < tol
    return FlatnessVerdict(tp, td, rp, rd, primal_flat, dual_flat, torsion_free,
                           torsion_free and primal_flat and dual_flat,
                           primal_flat == dual_flat, samples, seed, tol)


def lemma_dual_block_report(induced: ProductDualisticStructure,
                            samples: int = 8, seed: int = 42) -> dict[str, dict[str, float]]:
    """Per-block residuals of the displayed curvature blocks for D and for D*.

    The displayed right-hand sides substitute the factor curvatures (primal
    or dual respectively) while keeping the metric-based auxiliary terms;
    residuals are reported, not asserted.
    """
    P = induced.product
    out = {}
    for label, conn, base_c, fiber_c in (
            ("primal", induced.primal, induced.base_structure.primal,
             induced.fiber_structure.primal),
            ("dual", induced.dual, induced.base_structure.dual,
             induced.fiber_structure.dual)):
        out[label] = riemann_block_residuals(P, conn, base_c, fiber_c,
                                             samples=samples, seed=seed)
    return out


# ---------------------------------------------------------------------------
# theorem analyzers


@dataclass(frozen=True)
class ReductionChain:
    separable: bool
    cross_derivative_max: float
    reconstruction_residual: float | None
    base_verdict: FlatnessVerdict
    fiber_constant_sectional: ConstantSectionalResult | None
    reduced_fiber_constant_sectional: ConstantSectionalResult | None
    fiber_dim_warning: str | None
    predicted_dually_flat: bool | None
    notes: tuple[str, ...]


def _reduction_chain(induced: ProductDualisticStructure, samples: int,
                     tol: float, seed: int) -> ReductionChain:
    """Shared tail of the three theorems: factorize, reduce, predict."""
    P = induced.product
    notes: list[str] = []
    sep = separability_test(P, samples=samples, seed=seed)
    recon = None
    reduced = None
    if sep.separable:
        warped = to_warped(P, samples=samples, seed=seed)
        recon = product_metric_residual(P, warped, samples=samples, seed=seed)
        reduced = warped
    else:
        notes.append("twist is not separable; warped reduction unavailable")
    base_verdict = dually_flat_verdict(induced.base_structure, samples=samples,
                                       tol=tol, seed=seed)
    warning = None
    fiber_cs = reduced_cs = None
    if P.s < 2:
        warning = ("fiber is 1-dimensional: the constant-sectional-curvature "
                   "condition is vacuous and the biconditional is outside the "
                   "theorem's stated hypotheses")
        fiber_ok = True
    else:
        fiber_cs = is_constant_sectional(P.fiber, samples=min(samples, 16),
                                         tol=max(tol, 1e-8), seed=seed)
        fiber_ok = fiber_cs.constant
        if reduced is not None:
            reduced_cs = is_constant_sectional(reduced.fiber, samples=min(samples, 16),
                                               tol=max(tol, 1e-8), seed=seed)
            if reduced_cs.constant != fiber_cs.constant:
                notes.append("original and rescaled fiber disagree on constant "
                             "sectional curvature; the literal statement uses the original")
    # The literal biconditional prediction is recorded even when the
    # factorization step of the proof is unavailable; a note marks the gap.
    predicted = bool(base_verdict.dually_flat and fiber_ok)
    return ReductionChain(sep.separable, sep.max_cross_derivative, recon,
                          base_verdict, fiber_cs, reduced_cs, warning,
                          predicted, tuple(notes))


@dataclass(frozen=True)
class Theorem41Record:
    mixed_ricci_max: float
    mixed_ricci_flat: bool
    chain: ReductionChain
    direct: FlatnessVerdict
    predicted_dually_flat: bool | None
    agreement: bool | None
    notes: tuple[str, ...]


def theorem41_analyze(induced: ProductDualisticStructure, samples: int = 32,
                      tol: float = 1e-9, seed: int = 42) -> Theorem41Record:
    """Mixed-Ricci-flat hypothesis, factorization chain, and verdict comparison."""
    P = induced.product
    notes: list[str] = []
    table = mixed_ricci_table(P, samples=samples, seed=seed)
    mixed_flat = table["max_direct"] < tol
    direct = dually_flat_verdict(induced, samples=samples, tol=tol, seed=seed)
    if not mixed_flat:
        notes.append(f"not mixed-Ricci-flat (max |Ric(X,V)| = {table['max_direct']:.3e}); "
                     "theorem precondition fails")
        chain = _reduction_chain(induced, samples, tol, seed)
        return Theorem41Record(table["max_direct"], False, chain, direct,
                               None, None, tuple(notes))
    chain = _reduction_chain(induced, samples, tol, seed)
    predicted = chain.predicted_dually_flat
    agreement = None if predicted is None else (predicted == direct.dually_flat)
    if agreement is False:
        notes.append("DISAGREEMENT: the biconditional's prediction does not match "
                     "the direct flatness verdict")
    return Theorem41Record(table["max_direct"], True, chain, direct,
                           predicted, agreement, tuple(notes))


@dataclass(frozen=True)
class Theorem42Record:
    weyl_xyv_max: float
    weyl_vwx_max: float
    weyl_flat_along_holds: bool
    chain: ReductionChain | None
    direct: FlatnessVerdict
    predicted_dually_flat: bool | None
    agreement: bool | None
    notes: tuple[str, ...]


def theorem42_analyze(induced: ProductDualisticStructure, samples: int = 32,
                      tol: float = 1e-7, seed: int = 42) -> Theorem42Record:
    """Weyl-flat-along hypothesis (either direction), then the common chain."""
    P = induced.product
    if P.n <= 2:
        raise DimensionError("mixed Weyl hypothesis needs product dimension >= 3")
    report = mixed_weyl_report(P, samples=min(samples, 12), seed=seed, tol=tol)
    holds = report.xyv_flat or report.vwx_flat
    direct = dually_flat_verdict(induced, samples=samples, tol=1e-9, seed=seed)
    notes: list[str] = []
    if not holds:
        notes.append(f"neither Weyl-flat-along condition holds "
                     f"(|C(X,Y)V| = {report.cond_xyv_max:.3e}, "
                     f"|C(V,W)X| = {report.cond_vwx_max:.3e})")
        return Theorem42Record(report.cond_xyv_max, report.cond_vwx_max, False,
                               None, direct, None, None, tuple(notes))
    chain = _reduction_chain(induced, samples, 1e-9, seed)
    predicted = chain.predicted_dually_flat
    agreement = None if predicted is None else (predicted == direct.dually_flat)
    if agreement is False:
        notes.append("DISAGREEMENT: the biconditional's prediction does not match "
                     "the direct flatness verdict")
    return Theorem42Record(report.cond_xyv_max, report.cond_vwx_max, True,
                           chain, direct, predicted, agreement, tuple(notes))


@dataclass(frozen=True)
class Theorem43Record:
    weyl_parallel_defect: float | None
    weyl_parallel: bool | None
    hessian_defect: float
    hessian_condition_holds: bool
    branch: int | None  # 1, 2, or None when inapplicable
    chain: ReductionChain | None
    direct: FlatnessVerdict
    predicted_dually_flat: bool | None
    agreement: bool | None
    notes: tuple[str, ...]


def theorem43_analyze(induced: ProductDualisticStructure, samples: int = 32,
                      tol: float = 1e-8, tol_fd: float = 1e-4,
                      seed: int = 42) -> Theorem43Record:
    """Parallel-Weyl / Hessian-condition branches, then the common chain."""
    P = induced.product
    notes: list[str] = []
    hess = hessian_condition_defect(P, samples=min(samples, 16), seed=seed, tol=tol)
    parallel_defect: float | None
    if P.n >= 4:
        parallel_defect = weyl_parallel_defect(P, samples=min(samples, 6), seed=seed)
        parallel = parallel_defect < tol_fd
    elif P.n == 3:
        parallel_defect = 0.0
        parallel = True
        notes.append("dim-3 Weyl tensor vanishes identically; parallel holds trivially")
    else:
        parallel_defect = None
        parallel = None
        notes.append("Weyl tensor undefined below dimension 3")
    branch = None
    if parallel is True and not hess.holds and P.r != 1:
        branch = 1
    elif hess.holds:
        branch = 2
    direct = dually_flat_verdict(induced, samples=samples, tol=1e-9, seed=seed)
    if branch is None:
        if P.r == 1 and not hess.holds:
            notes.append("branch 1 needs dim B != 1 and branch 2 fails: theorem inapplicable")
        else:
            notes.append("neither branch condition holds: theorem inapplicable")
        return Theorem43Record(parallel_defect, parallel, hess.defect, hess.holds,
                               None, None, direct, None, None, tuple(notes))
    chain = _reduction_chain(induced, samples, 1e-9, seed)
    predicted = chain.predicted_dually_flat
    agreement = None if predicted is None else (predicted == direct.dually_flat)
    if agreement is False:
        notes.append("DISAGREEMENT: the biconditional's prediction does not match "
                     "the direct flatness verdict")
    return Theorem43Record(parallel_defect, parallel, hess.defect, hess.holds,
                           branch, chain, direct, predicted, agreement, tuple(notes))
