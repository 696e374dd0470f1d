"""Pure numpy implementations of the batch kernels.

Every function here has a twin in ``_ckernels.pyx`` with the same signature
and the same results up to floating point reassociation.  Shapes:

* quaternions ``(n, 4)``
* su(2)-valued 1-forms ``(n, 4, 3)`` (dx_i index, then I/J/K)
* su(2)-valued 2-forms ``(n, 6, 3)`` over pairs 12, 13, 14, 23, 24, 34
"""
from __future__ import annotations

import numpy as np

PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
# complement of pair p in the 4-form dx1^dx2^dx3^dx4, with permutation sign
COMPLEMENT = ((5, 1.0), (4, -1.0), (3, 1.0), (2, 1.0), (1, -1.0), (0, 1.0))


def qmul(a, b):
    a = np.ascontiguousarray(a, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    aw, ax, ay, az = a[:, 0], a[:, 1], a[:, 2], a[:, 3]
    bw, bx, by, bz = b[:, 0], b[:, 1], b[:, 2], b[:, 3]
    out = np.empty_like(a)
    out[:, 0] = aw * bw - ax * bx - ay * by - az * bz
    out[:, 1] = aw * bx + ax * bw + ay * bz - az * by
    out[:, 2] = aw * by - ax * bz + ay * bw + az * bx
    out[:, 3] = aw * bz + ax * by - ay * bx + az * bw
    return out


def im_basis(points, centers, weights, conjugate=False):
    """``sum_k w_k Im(conj(x - b_k) e_j)`` for each point and each dx_j.

    With ``conjugate=True`` the summand is ``Im((x - b_k) conj(e_j))`` instead,
    i.e. the coefficients of ``Im(x dxbar)``.
    """
    points = np.ascontiguousarray(points, dtype=float)
    centers = np.ascontiguousarray(centers, dtype=float)
    weights = np.ascontiguousarray(weights, dtype=float)
    n = points.shape[0]
    out = np.zeros((n, 4, 3))
    for c, w in zip(centers, weights):
        p = points - c
        p0, p1, p2, p3 = p[:, 0], p[:, 1], p[:, 2], p[:, 3]
        if conjugate:
            out[:, 0, 0] += w * p1
            out[:, 0, 1] += w * p2
            out[:, 0, 2] += w * p3
            out[:, 1, 0] -= w * p0
            out[:, 1, 1] -= w * p3
            out[:, 1, 2] += w * p2
            out[:, 2, 0] += w * p3
            out[:, 2, 1] -= w * p0
            out[:, 2, 2] -= w * p1
            out[:, 3, 0] -= w * p2
            out[:, 3, 1] += w * p1
            out[:, 3, 2] -= w * p0
        else:
            out[:, 0, 0] -= w * p1
            out[:, 0, 1] -= w * p2
            out[:, 0, 2] -= w * p3
            out[:, 1, 0] += w * p0
            out[:, 1, 1] -= w * p3
            out[:, 1, 2] += w * p2
            out[:, 2, 0] += w * p3
            out[:, 2, 1] += w * p0
            out[:, 2, 2] -= w * p1
            out[:, 3, 0] -= w * p2
            out[:, 3, 1] += w * p1
            out[:, 3, 2] += w * p0
    return out


def wedge11(a, b):
    """Imaginary part of ``a_i b_j - a_j b_i`` for su(2)-valued 1-forms."""
    a = np.ascontiguousarray(a, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    out = np.empty((a.shape[0], 6, 3))
    for p, (i, j) in enumerate(PAIRS):
        # Im(uv) = u x v for imaginary u, v
        out[:, p, :] = np.cross(a[:, i], b[:, j]) - np.cross(a[:, j], b[:, i])
    return out


def trace_density(w1, w2):
    """Coefficient of dx1^dx2^dx3^dx4 in <w1 ^ w2> under the dot pairing."""
    w1 = np.ascontiguousarray(w1, dtype=float)
    w2 = np.ascontiguousarray(w2, dtype=float)
    out = np.zeros(w1.shape[0])
    for p, (q, sign) in enumerate(COMPLEMENT):
        out += sign * np.einsum("nc,nc->n", w1[:, p], w2[:, q])
    return out


def bracket_sum(a, b):
    """``sum_i [a_i, b_i]`` for two su(2)-valued 1-forms."""
    a = np.ascontiguousarray(a, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    return 2.0 * np.cross(a, b).sum(axis=1)
