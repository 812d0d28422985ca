# Copyright (c) 2025 Equiform Core Authors.
# Licensed under the MIT License

"""
Scalar curvature of a 3-metric from g, dg and ddg, written once for any field
of values that supports +, -, scalar * and a product callable: TrigPoly series
(symbolic strategy) or numpy grids (spectral strategy).

Indices run over (t, theta, phi). Everything is denominator free: with A the
cofactor matrix of g and D = det g,

    Gamma^l_ij = n^l_ij / D,        n' = 2 n = A E,
    E_ijm      = d_j g_im + d_i g_jm - d_m g_ij,

and the curvature comes back as the pair (P, Q) with K = P / Q, Q = D^3 up to
a positive constant. A product callable may return lam * (a b) for a constant
lam (TrigPoly.mul(doubled=True) has lam = 2); that factor is removed at the end.

K is reported as -g^ij R_ij with R_ij formed as
d_l Gamma^l_ij - d_j Gamma^l_il + Gamma^l_ij Gamma^m_lm - Gamma^m_il Gamma^l_jm,
which gives the pure rotation surface, the warped product dt^2 + (1 + t^2) g_S2
(g_S2 the round unit sphere), the value +2 at t = 0.
"""

import logging
import operator
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Sequence, Tuple

logger = logging.getLogger(__name__)

Product = Callable[[Any, Any], Any]
Matrix = Sequence[Sequence[Any]]

AXES = ("t", "theta", "phi")
_PAIRS = [(i, j) for i in range(3) for j in range(i, 3)]


def _sym(i: int, j: int) -> Tuple[int, int]:
    return (i, j) if i <= j else (j, i)


def cofactor_matrix(g: Matrix, mul: Product) -> List[List[Any]]:
    """Cofactors of a symmetric 3x3 matrix (equal to its adjugate)."""
    out = [[None] * 3 for _ in range(3)]
    for i, j in _PAIRS:
        a, b = (i + 1) % 3, (i + 2) % 3
        c, d = (j + 1) % 3, (j + 2) % 3
        out[i][j] = mul(g[a][c], g[b][d]) - mul(g[a][d], g[b][c])
        out[j][i] = out[i][j]
    return out


def determinant(g: Matrix, cof: Matrix, mul: Product) -> Any:
    return mul(g[0][0], cof[0][0]) + mul(g[0][1], cof[0][1]) + mul(g[0][2], cof[0][2])


def first_kind(dg: Sequence[Matrix], i: int, j: int, m: int) -> Any:
    """d_j g_im + d_i g_jm - d_m g_ij."""
    return dg[j][i][m] + dg[i][j][m] - dg[m][i][j]


def christoffel_numerators(cof: Matrix, dg: Sequence[Matrix], mul: Product) -> Dict[Tuple[int, int, int], Any]:
    """n'^l_ij = sum_m A_lm E_ijm for i <= j, so that Gamma^l_ij = n' / (2 D)."""
    out = {}
    for i, j in _PAIRS:
        e = [first_kind(dg, i, j, m) for m in range(3)]
        for l in range(3):
            out[(l, i, j)] = mul(cof[l][0], e[0]) + mul(cof[l][1], e[1]) + mul(cof[l][2], e[2])
    return out


@dataclass
class CurvatureParts:
    """Raw output of curvature_parts: K = lam * numerator / (4 * cube)."""
    numerator: Any
    cube: Any
    determinant: Any


def curvature_parts(g: Matrix, dg: Sequence[Matrix], ddg: Sequence[Sequence[Matrix]],
                    mul: Product = operator.mul) -> CurvatureParts:
    """
    g[i][j], dg[k][i][j] = d_k g_ij and ddg[k][l][i][j] = d_k d_l g_ij, all
    taken at the evaluation point (here t = 0). Returns the numerator
    -sum A_ij S_ij and the cube D^3 as computed by mul.
    """
    cof = cofactor_matrix(g, mul)
    det = determinant(g, cof, mul)

    # d_k A
    dcof = []
    for k in range(3):
        dk = [[None] * 3 for _ in range(3)]
        for i, j in _PAIRS:
            a, b = (i + 1) % 3, (i + 2) % 3
            c, d = (j + 1) % 3, (j + 2) % 3
            dk[i][j] = (mul(dg[k][a][c], g[b][d]) + mul(g[a][c], dg[k][b][d])
                        - mul(dg[k][a][d], g[b][c]) - mul(g[a][d], dg[k][b][c]))
            dk[j][i] = dk[i][j]
        dcof.append(dk)

    # d_k D = sum_ij A_ij d_k g_ij (Jacobi)
    ddet = []
    for k in range(3):
        total = mul(cof[0][0], dg[k][0][0]) + mul(cof[1][1], dg[k][1][1]) + mul(cof[2][2], dg[k][2][2])
        cross = mul(cof[0][1], dg[k][0][1]) + mul(cof[0][2], dg[k][0][2]) + mul(cof[1][2], dg[k][1][2])
        ddet.append(total + cross + cross)

    num = christoffel_numerators(cof, dg, mul)

    def n(l: int, i: int, j: int) -> Any:
        return num[(l,) + _sym(i, j)]

    edge: Dict[Tuple[int, int, int], List[Any]] = {}

    def first(i: int, j: int) -> List[Any]:
        key = _sym(i, j)
        if key not in edge:
            edge[key] = [first_kind(dg, key[0], key[1], m) for m in range(3)]
        return edge[key]

    dnum_cache: Dict[Tuple[int, int, int, int], Any] = {}

    def dn(k: int, l: int, i: int, j: int) -> Any:
        """d_k n'^l_ij = sum_m d_k A_lm E_ijm + A_lm d_k E_ijm."""
        i, j = _sym(i, j)
        key = (k, l, i, j)
        if key not in dnum_cache:
            e = first(i, j)
            total = None
            for m in range(3):
                de = first_kind(ddg[k], i, j, m)
                term = mul(dcof[k][l][m], e[m]) + mul(cof[l][m], de)
                total = term if total is None else total + term
            dnum_cache[key] = total
        return dnum_cache[key]

    # V'_i = sum_l n'^l_il and its derivatives
    trace = [n(0, i, 0) + n(1, i, 1) + n(2, i, 2) for i in range(3)]

    def dtrace(k: int, i: int) -> Any:
        return dn(k, 0, i, 0) + dn(k, 1, i, 1) + dn(k, 2, i, 2)

    weight = [trace[l] - ddet[l] - ddet[l] for l in range(3)]

    numerator = None
    for i, j in _PAIRS:
        divergence = dn(0, 0, i, j) + dn(1, 1, i, j) + dn(2, 2, i, j) - dtrace(j, i)
        s = mul(det + det, divergence)
        for l in range(3):
            s = s + mul(n(l, i, j), weight[l])
        s = s + mul(trace[i] + trace[i], ddet[j])
        for l in range(3):
            for m in range(3):
                s = s - mul(n(m, i, l), n(l, j, m))
        term = mul(cof[i][j], s)
        if i != j:
            term = term + term
        numerator = term if numerator is None else numerator + term

    cube = mul(mul(det, det), det)
    logger.debug("curvature parts assembled (%d derivative numerators)", len(dnum_cache))
    return CurvatureParts(numerator=-numerator, cube=cube, determinant=det)
