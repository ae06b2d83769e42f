"""Curvature-type tensors of an arbitrary connection.

Index and sign conventions, shared by every oracle in the test suite:

    R(d_i, d_j) d_k = R^l_ijk d_l,
    R^l_ijk = d_i Gamma^l_jk - d_j Gamma^l_ik
              + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik,
    Ric(X, Y) = sum_i g(R(E_i, X) Y, E_i)    (E_i orthonormal),
    S = sum_i Ric(E_i, E_i).

Under these conventions the unit sphere has Ric = g, S = 2 and sectional
curvature +1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .connections import ConnectionField, levi_civita
from .geometry import ManifoldSpec, _coords_of

__all__ = [
    "CurvatureReport", "FlatnessResult", "ConstantSectionalResult",
    "DimensionError", "DegeneratePlaneError",
    "riemann_at", "curvature_duality_residual", "orthonormal_frame_at",
    "ricci_at", "ricci_contraction_at", "scalar_at", "ricci_operator_at",
    "weyl_at", "weyl_trace_defect", "sectional_at", "first_bianchi_defect",
    "is_flat", "is_constant_sectional", "curvature_report",
]


class DimensionError(ValueError):
    """Operation undefined in this dimension (e.g. Weyl below dim 3)."""


class DegeneratePlaneError(ArithmeticError):
    """Sectional curvature of a (numerically) degenerate 2-plane."""


def riemann_at(C: ConnectionField, p) -> np.ndarray:
    """Rank-4 array R[l, i, j, k]; antisymmetric in (i, j) to round-off."""
    x = _coords_of(p)
    gam = C.gamma_at(x)
    dgam = C.dgamma_at(x)
    dterm = np.einsum("iljk->lijk", dgam) - np.einsum("jlik->lijk", dgam)
    qterm = np.einsum("lim,mjk->lijk", gam, gam) - np.einsum("ljm,mik->lijk", gam, gam)
    return dterm + qterm


def curvature_duality_residual(M: ManifoldSpec, C: ConnectionField, Cstar: ConnectionField,
                               p, X, Y, Z, W) -> float:
    """|g(R(X,Y)Z, W) + g(R*(X,Y)W, Z)| for a conjugate pair."""
    x = _coords_of(p)
    g = M.metric_at(x)
    X, Y, Z, W = (np.asarray(getattr(v, "components", v), dtype=float) for v in (X, Y, Z, W))
    R = riemann_at(C, x)
    Rstar = riemann_at(Cstar, x)
    lhs = np.einsum("lijk,i,j,k,lm,m->", R, X, Y, Z, g, W)
    rhs = np.einsum("lijk,i,j,k,lm,m->", Rstar, X, Y, W, g, Z)
    return float(abs(lhs + rhs))


def orthonormal_frame_at(M: ManifoldSpec, p) -> np.ndarray:
    """Gram-Schmidt of the coordinate frame in coordinate order; rows are E_i."""
    g = M.metric_at(p)
    d = M.dim
    frame = np.zeros((d, d))
    for i in range(d):
        v = np.zeros(d)
        v[i] = 1.0
        for j in range(i):
            v = v - (frame[j] @ g @ v) * frame[j]
        norm = float(v @ g @ v)
        if norm <= 0.0:
            raise ArithmeticError("metric not positive definite while orthonormalizing")
        frame[i] = v / np.sqrt(norm)
    return frame


def ricci_at(M: ManifoldSpec, C: ConnectionField, p) -> np.ndarray:
    """Ric_jk = sum_i g(R(E_i, d_j) d_k, E_i) in the coordinate frame."""
    x = _coords_of(p)
    g = M.metric_at(x)
    E = orthonormal_frame_at(M, x)
    R = riemann_at(C, x)
    return np.einsum("ia,lajk,lm,im->jk", E, R, g, E)


def ricci_contraction_at(C: ConnectionField, p) -> np.ndarray:
    """Frame-free route Ric_jk = R^a_ajk; agrees with ricci_at by completeness."""
    R = riemann_at(C, p)
    return np.einsum("aajk->jk", R)


def scalar_at(M: ManifoldSpec, C: ConnectionField, p) -> float:
    """S = sum_i Ric(E_i, E_i) over the orthonormal frame."""
    x = _coords_of(p)
    E = orthonormal_frame_at(M, x)
    ric = ricci_at(M, C, x)
    return float(np.einsum("ij,ik,jk->", E, E, ric))


def ricci_operator_at(M: ManifoldSpec, C: ConnectionField, p) -> np.ndarray:
    """Q with g(QX, Y) = Ric(X, Y); as a matrix Q = g^{-1} Ric."""
    x = _coords_of(p)
    return M.inverse_metric_at(x) @ ricci_at(M, C, x)


def weyl_at(M: ManifoldSpec, C: ConnectionField, p, variant: str = "standard") -> np.ndarray:
    """Conformal curvature components W[l, i, j, k] for dim >= 3.

    variant="standard" uses the trace-adjusted tensor with Ricci in both
    correction slots (vanishes identically in dim 3, trace-free for the
    metric connection).  variant="as-printed" keeps a full curvature term in
    the second slot instead of its Ricci trace; it is computed only so the
    two can be compared.
    """
    m = M.dim
    if m <= 2:
        raise DimensionError(f"Weyl tensor needs dim >= 3, got {m}")
    x = _coords_of(p)
    g = M.metric_at(x)
    R = riemann_at(C, x)
    ric = ricci_at(M, C, x)
    Q = M.inverse_metric_at(x) @ ric
    S = scalar_at(M, C, x)
    eye = np.eye(m)
    if variant == "standard":
        second = np.einsum("jk,li->lijk", ric, eye)
    elif variant == "as-printed":
        second = np.einsum("ljki->lijk", R)
    else:
        raise ValueError(f"unknown Weyl variant {variant!r}")
    corr = (np.einsum("ik,lj->lijk", ric, eye) - second
            + np.einsum("ik,lj->lijk", g, Q) - np.einsum("jk,li->lijk", g, Q))
    trace_part = np.einsum("ik,lj->lijk", g, eye) - np.einsum("jk,li->lijk", g, eye)
    return R + corr / (m - 2) - (S / ((m - 1) * (m - 2))) * trace_part


def weyl_trace_defect(M: ManifoldSpec, C: ConnectionField, p) -> float:
    """Max absolute value over all single traces/metric contractions of Weyl."""
    x = _coords_of(p)
    W = weyl_at(M, C, x)
    g = M.metric_at(x)
    ginv = M.inverse_metric_at(x)
    lowered = np.einsum("lm,mijk->lijk", g, W)
    contractions = [
        np.einsum("aajk->jk", W),
        np.einsum("aiak->ik", W),
        np.einsum("aija->ij", W),
        np.einsum("li,lijk->jk", ginv, lowered),
        np.einsum("lj,lijk->ik", ginv, lowered),
        np.einsum("lk,lijk->ij", ginv, lowered),
        np.einsum("ij,lijk->lk", ginv, lowered),
        np.einsum("ik,lijk->lj", ginv, lowered),
        np.einsum("jk,lijk->li", ginv, lowered),
    ]
    return max(float(np.max(np.abs(c))) for c in contractions)


def first_bianchi_defect(C: ConnectionField, p) -> float:
    """Max |R(X,Y)Z + R(Y,Z)X + R(Z,X)Y| over coordinate triples."""
    R = riemann_at(C, p)
    cyc = R + np.einsum("ljki->lijk", R) + np.einsum("lkij->lijk", R)
    return float(np.max(np.abs(cyc)))


def sectional_at(M: ManifoldSpec, p, X, Y, lc: ConnectionField | None = None) -> float:
    """K(X, Y) = g(R(X,Y)Y, X) / (|X|^2 |Y|^2 - g(X,Y)^2), metric connection."""
    x = _coords_of(p)
    X = np.asarray(getattr(X, "components", X), dtype=float)
    Y = np.asarray(getattr(Y, "components", Y), dtype=float)
    g = M.metric_at(x)
    denom = float((X @ g @ X) * (Y @ g @ Y) - (X @ g @ Y) ** 2)
    if denom < 1e-12:
        raise DegeneratePlaneError("X and Y do not span a 2-plane")
    R = riemann_at(lc or levi_civita(M), x)
    num = float(np.einsum("lijk,i,j,k,lm,m->", R, X, Y, Y, g, X))
    return num / denom


@dataclass(frozen=True)
class FlatnessResult:
    flat: bool
    max_abs_riemann: float
    samples: int
    tol: float


def is_flat(M: ManifoldSpec, C: ConnectionField, samples: int = 64,
            tol: float = 1e-8, seed: int = 42) -> FlatnessResult:
    worst = 0.0
    for pt in M.sample_points(samples, seed):
        worst = max(worst, float(np.max(np.abs(riemann_at(C, pt)))))
    return FlatnessResult(worst < tol, worst, samples, tol)


@dataclass(frozen=True)
class ConstantSectionalResult:
    constant: bool
    kappa: float
    max_deviation: float
    samples: int
    tol: float


def is_constant_sectional(M: ManifoldSpec, samples: int = 32, tol: float = 1e-8,
                          seed: int = 42, planes_per_point: int = 4) -> ConstantSectionalResult:
    """Estimate sectional curvature over sampled points and random planes."""
    if M.dim < 2:
        raise DimensionError("sectional curvature needs dim >= 2")
    lc = levi_civita(M)
    rng = np.random.default_rng(seed)
    values = []
    for pt in M.sample_points(samples, seed):
        for _ in range(planes_per_point if M.dim > 2 else 1):
            while True:
                X = rng.uniform(-1.0, 1.0, M.dim)
                Y = rng.uniform(-1.0, 1.0, M.dim)
                try:
                    values.append(sectional_at(M, pt, X, Y, lc=lc))
                    break
                except DegeneratePlaneError:
                    continue
    kappa = float(np.mean(values))
    deviation = float(np.max(np.abs(np.array(values) - kappa)))
    return ConstantSectionalResult(deviation < tol, kappa, deviation, samples, tol)


@dataclass(frozen=True)
class CurvatureReport:
    point: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float
    weyl: np.ndarray | None
    flat_at_point: bool
    tol: float

    def to_dict(self) -> dict:
        return {
            "point": self.point.tolist(),
            "riemann": self.riemann.tolist(),
            "ricci": self.ricci.tolist(),
            "scalar": self.scalar,
            "weyl": None if self.weyl is None else self.weyl.tolist(),
            "flat_at_point": self.flat_at_point,
            "tolerance": self.tol,
        }


def curvature_report(M: ManifoldSpec, C: ConnectionField, p, tol: float = 1e-8) -> CurvatureReport:
    x = _coords_of(p)
    R = riemann_at(C, x)
    ric = ricci_at(M, C, x)
    S = scalar_at(M, C, x)
    W = weyl_at(M, C, x) if M.dim >= 3 else None
    return CurvatureReport(x, R, ric, S, W, bool(np.max(np.abs(R)) < tol), tol)
