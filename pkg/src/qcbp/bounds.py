"""Spectral lower bounds on the chromatic number of a graph.

Three eigenvalue bounds are combined: the ratio bound 1 + l_max/|l_min|,
the inertial bound 1 + max(n+/n-, n-/n+), and n/(n - l_max). Each is valid
for every simple graph, so their ceiled maximum is a sound pruning bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graphs import Graph

EIG_ZERO_TOL = 1e-8
CEIL_TOL = 1e-6


def jacobi_eigenvalues(matrix: np.ndarray, tol: float = 1e-10, max_sweeps: int = 60) -> np.ndarray:
    """All eigenvalues of a real symmetric matrix via cyclic Jacobi rotations.

    Sweeps rotate every off-diagonal pair until the off-diagonal Frobenius
    norm drops below tol. Returns eigenvalues sorted ascending.
    """
    a = np.array(matrix, dtype=float, copy=True)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if n == 1:
        return a.diagonal().copy()
    for _ in range(max_sweeps):
        offdiag = a - np.diag(a.diagonal())
        if math.sqrt((offdiag * offdiag).sum()) < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < tol / (n * n):
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                a[p, q] = a[q, p] = 0.0
    else:
        raise RuntimeError("Jacobi sweep limit reached without convergence")
    return np.sort(a.diagonal())


def adjacency_matrix(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n))
    for u, v in g.edges():
        a[u, v] = a[v, u] = 1.0
    return a


def adjacency_spectrum(g: Graph) -> np.ndarray:
    """Sorted eigenvalues of the 0/1 adjacency matrix."""
    return jacobi_eigenvalues(adjacency_matrix(g))


@dataclass(frozen=True)
class SpectralBounds:
    hoffman: float
    elphick_wocjan: float
    edwards_elphick: float
    combined_lb: int


def spectral_lb(g: Graph) -> SpectralBounds:
    """Evaluate the three spectral bounds and their combined integer ceiling.

    Degenerate spectra (edgeless graphs, one-signed inertia) fall back to the
    trivial bound 1 so every field stays a valid lower bound.
    """
    eig = adjacency_spectrum(g)
    l_min, l_max = float(eig[0]), float(eig[-1])

    if l_min < -EIG_ZERO_TOL:
        hoffman = 1.0 + l_max / abs(l_min)
    else:
        hoffman = 1.0
    n_pos = int((eig > EIG_ZERO_TOL).sum())
    n_neg = int((eig < -EIG_ZERO_TOL).sum())
    if n_pos and n_neg:
        elphick_wocjan = 1.0 + max(n_pos / n_neg, n_neg / n_pos)
    else:
        elphick_wocjan = 1.0
    if l_max > EIG_ZERO_TOL:
        edwards_elphick = g.n / (g.n - l_max)
    else:
        edwards_elphick = 1.0

    combined = max(
        1,
        math.ceil(hoffman - CEIL_TOL),
        math.ceil(elphick_wocjan - CEIL_TOL),
        math.ceil(edwards_elphick - CEIL_TOL),
    )
    return SpectralBounds(
        hoffman=hoffman,
        elphick_wocjan=elphick_wocjan,
        edwards_elphick=edwards_elphick,
        combined_lb=combined,
    )
