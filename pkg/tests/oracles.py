"""Independent reference computations used only by the tests."""

import numpy as np
from scipy.special import jv


def central_diff(fn, x, step):
    """Second-order central difference of a vector-valued function."""
    return (fn(x + step) - fn(x - step)) / (2 * step)


def central_diff4(fn, x, step):
    """Fourth-order central difference of a vector-valued function."""
    return (fn(x - 2 * step) - 8 * fn(x - step) + 8 * fn(x + step) - fn(x + 2 * step)) / (12 * step)


def jacobi_anger_derivative(varpi, phases, q, terms=80):
    """
    q-th derivative of exp(j varpi cos(phi)) via the Jacobi-Anger series
    sum_n j^n J_n(varpi) e^{j n phi}, differentiated term by term.
    """
    n = np.arange(-terms, terms + 1)
    coef = (1j ** n) * jv(n, varpi) * (1j * n) ** q
    return np.exp(1j * np.outer(phases, n)) @ coef


def sphere_coherence(positions, k, n_polar=100, n_azimuth=200):
    """
    Coherence (1/4pi) * integral over the unit sphere of exp(j k u . (p_i - p_j))
    by Gauss-Legendre in cos(elevation) and the trapezoid rule in azimuth.
    """
    z, wz = np.polynomial.legendre.leggauss(n_polar)
    az = 2 * np.pi * np.arange(n_azimuth) / n_azimuth
    rho = np.sqrt(1 - z ** 2)
    ux = np.outer(rho, np.cos(az)).ravel()
    uy = np.outer(rho, np.sin(az)).ravel()
    w = np.outer(wz, np.full(n_azimuth, 2 * np.pi / n_azimuth)).ravel() / (4 * np.pi)
    m = len(positions)
    out = np.empty((m, m), dtype=complex)
    for i in range(m):
        for j in range(m):
            dx, dy = positions[i] - positions[j]
            out[i, j] = np.sum(w * np.exp(1j * k * (ux * dx + uy * dy)))
    return out


def least_norm_full_pivot(a, b, tol=1e-12):
    """
    Least-norm solution of a x = b for wide full-row-rank a, without normal
    equations: full-pivoting elimination to reduced row echelon form gives a
    particular solution and a null-space basis; the null-space component is
    then removed by modified Gram-Schmidt projection.
    """
    a = np.array(a, dtype=complex)
    b = np.array(b, dtype=complex)
    k, m = a.shape
    aug = np.hstack([a, b[:, None]])
    cols = list(range(m))
    scale = np.abs(a).max()
    for r in range(k):
        sub = np.abs(aug[r:, r:m])
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        if sub[i, j] <= tol * scale:
            raise np.linalg.LinAlgError("rank deficient")
        i += r
        j += r
        aug[[r, i]] = aug[[i, r]]
        aug[:, [r, j]] = aug[:, [j, r]]
        cols[r], cols[j] = cols[j], cols[r]
        aug[r] /= aug[r, r]
        for s in range(k):
            if s != r:
                aug[s] -= aug[s, r] * aug[r]
    # columns 0..k-1 are now identity (in permuted order)
    free = aug[:, k:m]
    x_perm = np.zeros(m, dtype=complex)
    x_perm[:k] = aug[:, m]
    basis = []
    for f in range(m - k):
        v = np.zeros(m, dtype=complex)
        v[:k] = -free[:, f]
        v[k + f] = 1.0
        basis.append(v)
    inv = np.argsort(cols)
    x = x_perm[inv]
    ortho = []
    for v in basis:
        v = v[inv]
        for u in ortho:
            v = v - u * np.vdot(u, v)
        for u in ortho:
            v = v - u * np.vdot(u, v)
        ortho.append(v / np.linalg.norm(v))
    for u in ortho:
        x = x - u * np.vdot(u, x)
    return x, np.array(ortho).reshape(len(ortho), m)
