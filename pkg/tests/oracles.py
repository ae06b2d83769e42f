"""Independent test-side oracles.

Everything here recomputes geometric quantities by brute force (plain
central differences of sampled values, explicit loops, explicit
Gram-Schmidt) without touching the library's symbolic-derivative paths, so
a library bug cannot hide in its own oracle.
"""

import numpy as np


def fd1(f, x, i, h=1e-6):
    """Plain second-order central difference of a scalar/array function."""
    x = np.asarray(x, dtype=float)
    e = np.zeros_like(x)
    e[i] = h
    return (np.asarray(f(x + e)) - np.asarray(f(x - e))) / (2.0 * h)


def koszul_fd_christoffel(M, x, h=1e-6):
    """Christoffel symbols from finite differences of the metric alone."""
    x = np.asarray(x, dtype=float)
    d = M.dim
    ginv = np.linalg.inv(M.metric_at(x))
    dg = np.array([fd1(M.metric_at, x, i, h) for i in range(d)])  # dg[i][j,k] = d_i g_jk
    gamma = np.zeros((d, d, d))
    for k in range(d):
        for i in range(d):
            for j in range(d):
                acc = 0.0
                for l in range(d):
                    acc += ginv[k, l] * (dg[i][j, l] + dg[j][i, l] - dg[l][i, j])
                gamma[k, i, j] = 0.5 * acc
    return gamma


def riemann_fd(conn, x, h=1e-5):
    """Curvature from finite differences of the connection coefficients."""
    x = np.asarray(x, dtype=float)
    d = len(x)
    gam = conn.gamma_at(x)
    dgam = np.array([fd1(conn.gamma_at, x, q, h) for q in range(d)])
    R = np.zeros((d, d, d, d))
    for l in range(d):
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    val = dgam[i][l, j, k] - dgam[j][l, i, k]
                    for m in range(d):
                        val += gam[l, i, m] * gam[m, j, k] - gam[l, j, m] * gam[m, i, k]
                    R[l, i, j, k] = val
    return R


def gram_schmidt_frame(g):
    """Explicit Gram-Schmidt of the coordinate frame; rows are orthonormal."""
    d = g.shape[0]
    frame = []
    for i in range(d):
        v = np.zeros(d)
        v[i] = 1.0
        for e in frame:
            v = v - (e @ g @ v) * e
        frame.append(v / np.sqrt(v @ g @ v))
    return np.array(frame)


def ricci_frame_oracle(M, conn, x, R=None):
    """Ricci by explicit orthonormal-frame contraction of an FD curvature."""
    x = np.asarray(x, dtype=float)
    d = M.dim
    g = M.metric_at(x)
    E = gram_schmidt_frame(g)
    if R is None:
        R = riemann_fd(conn, x)
    ric = np.zeros((d, d))
    for j in range(d):
        for k in range(d):
            acc = 0.0
            for i in range(d):
                vec = np.array([sum(R[l, a, j, k] * E[i, a] for a in range(d))
                                for l in range(d)])
                acc += vec @ g @ E[i]
            ric[j, k] = acc
    return ric


def scalar_frame_oracle(M, conn, x, R=None):
    g = M.metric_at(np.asarray(x, dtype=float))
    E = gram_schmidt_frame(g)
    ric = ricci_frame_oracle(M, conn, x, R)
    return float(sum(E[i] @ ric @ E[i] for i in range(len(g))))
