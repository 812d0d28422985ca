# Copyright (c) 2025 Equiform Core Authors.
# Licensed under the MIT License

"""
Grid strategy for the curvature pair: sample g, dg and ddg at t = 0 on an
n x n angle grid, run the shared curvature algebra pointwise and recover the
Fourier coefficients of P and Q with a 2-D FFT.

P and Q are products of at most nine metric entries (or their derivatives),
each with harmonics of order at most 2 in either angle, so any n > 36
recovers them without aliasing.
"""

import logging
from typing import Dict, Tuple

import numpy as np

from equiform_core.trigpoly import ScalarMode, TrigPoly

logger = logging.getLogger(__name__)

MIN_GRID = 38
_ROUNDOFF = 64 * np.finfo(float).eps


def grid_to_trigpoly(values: np.ndarray, cutoff: float = _ROUNDOFF) -> TrigPoly:
    """
    Float TrigPoly whose evaluation on the grid reproduces values. Rows are
    theta, columns phi. Coefficients below cutoff * max|coefficient| are dropped.
    """
    n = values.shape[0]
    if values.shape != (n, n):
        raise ValueError(f"Expected a square grid, got shape {values.shape}")
    spectrum = np.fft.fft2(values) / (n * n)
    half = n // 2
    floor = cutoff * float(np.max(np.abs(spectrum))) if spectrum.size else 0.0

    terms: Dict[Tuple[int, int], Tuple[tuple, tuple]] = {}
    for i in range(0, half):
        for j in range(-half + 1, half):
            if i == 0 and j < 0:
                continue
            c = spectrum[i % n, j % n]
            if (i, j) == (0, 0):
                a, b = c.real, 0.0
            else:
                a, b = 2.0 * c.real, -2.0 * c.imag
            if abs(a) <= floor:
                a = 0.0
            if abs(b) <= floor:
                b = 0.0
            if a or b:
                terms[(i, j)] = ((a,) if a else (), (b,) if b else ())
    return TrigPoly(terms, ScalarMode.FLOAT)


def sample_fields(g, dg, ddg, n: int):
    """Evaluate nested TrigPoly structures (t = 0) on the n x n grid."""
    def grid(tp: TrigPoly) -> np.ndarray:
        return tp.evaluate_grid(n, 0)

    g_grid = [[grid(g[i][j]) for j in range(3)] for i in range(3)]
    dg_grid = [[[grid(dg[k][i][j]) for j in range(3)] for i in range(3)] for k in range(3)]
    ddg_grid = [[[[grid(ddg[k][l][i][j]) for j in range(3)] for i in range(3)]
                 for l in range(3)] for k in range(3)]
    return g_grid, dg_grid, ddg_grid
