# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_pykernels``."""
import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef int[6][2] PAIRS = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]
cdef int[6] COMP = [5, 4, 3, 2, 1, 0]
cdef double[6] COMP_SIGN = [1.0, -1.0, 1.0, 1.0, -1.0, 1.0]


def qmul(a, b):
    cdef const double[:, ::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[:, ::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t n = av.shape[0], k
    out = np.empty((n, 4))
    cdef double[:, ::1] o = out
    cdef double aw, ax, ay, az, bw, bx, by, bz
    for k in range(n):
        aw = av[k, 0]; ax = av[k, 1]; ay = av[k, 2]; az = av[k, 3]
        bw = bv[k, 0]; bx = bv[k, 1]; by = bv[k, 2]; bz = bv[k, 3]
        o[k, 0] = aw * bw - ax * bx - ay * by - az * bz
        o[k, 1] = aw * bx + ax * bw + ay * bz - az * by
        o[k, 2] = aw * by - ax * bz + ay * bw + az * bx
        o[k, 3] = aw * bz + ax * by - ay * bx + az * bw
    return out


def im_basis(points, centers, weights, conjugate=False):
    cdef const double[:, ::1] x = np.ascontiguousarray(points, dtype=np.float64)
    cdef const double[:, ::1] c = np.ascontiguousarray(centers, dtype=np.float64)
    cdef const double[::1] wts = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0], m = c.shape[0], k, q
    cdef bint conj = conjugate
    out = np.zeros((n, 4, 3))
    cdef double[:, :, ::1] o = out
    cdef double p0, p1, p2, p3, w
    for k in range(n):
        for q in range(m):
            w = wts[q]
            p0 = x[k, 0] - c[q, 0]
            p1 = x[k, 1] - c[q, 1]
            p2 = x[k, 2] - c[q, 2]
            p3 = x[k, 3] - c[q, 3]
            if conj:
                o[k, 0, 0] += w * p1
                o[k, 0, 1] += w * p2
                o[k, 0, 2] += w * p3
                o[k, 1, 0] -= w * p0
                o[k, 1, 1] -= w * p3
                o[k, 1, 2] += w * p2
                o[k, 2, 0] += w * p3
                o[k, 2, 1] -= w * p0
                o[k, 2, 2] -= w * p1
                o[k, 3, 0] -= w * p2
                o[k, 3, 1] += w * p1
                o[k, 3, 2] -= w * p0
            else:
                o[k, 0, 0] -= w * p1
                o[k, 0, 1] -= w * p2
                o[k, 0, 2] -= w * p3
                o[k, 1, 0] += w * p0
                o[k, 1, 1] -= w * p3
                o[k, 1, 2] += w * p2
                o[k, 2, 0] += w * p3
                o[k, 2, 1] += w * p0
                o[k, 2, 2] -= w * p1
                o[k, 3, 0] -= w * p2
                o[k, 3, 1] += w * p1
                o[k, 3, 2] += w * p0
    return out


cdef inline void _cross_acc(const double[:, :, ::1] a, const double[:, :, ::1] b,
                            Py_ssize_t k, int i, int j, double s,
                            double *res) noexcept nogil:
    res[0] += s * (a[k, i, 1] * b[k, j, 2] - a[k, i, 2] * b[k, j, 1])
    res[1] += s * (a[k, i, 2] * b[k, j, 0] - a[k, i, 0] * b[k, j, 2])
    res[2] += s * (a[k, i, 0] * b[k, j, 1] - a[k, i, 1] * b[k, j, 0])


def wedge11(a, b):
    cdef const double[:, :, ::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[:, :, ::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t n = av.shape[0], k
    cdef int p, i, j
    cdef double res[3]
    out = np.empty((n, 6, 3))
    cdef double[:, :, ::1] o = out
    with nogil:
        for k in range(n):
            for p in range(6):
                i = PAIRS[p][0]
                j = PAIRS[p][1]
                res[0] = 0.0
                res[1] = 0.0
                res[2] = 0.0
                _cross_acc(av, bv, k, i, j, 1.0, res)
                _cross_acc(av, bv, k, j, i, -1.0, res)
                o[k, p, 0] = res[0]
                o[k, p, 1] = res[1]
                o[k, p, 2] = res[2]
    return out


def trace_density(w1, w2):
    cdef const double[:, :, ::1] a = np.ascontiguousarray(w1, dtype=np.float64)
    cdef const double[:, :, ::1] b = np.ascontiguousarray(w2, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0], k
    cdef int p, q
    cdef double acc
    out = np.empty(n)
    cdef double[::1] o = out
    with nogil:
        for k in range(n):
            acc = 0.0
            for p in range(6):
                q = COMP[p]
                acc += COMP_SIGN[p] * (a[k, p, 0] * b[k, q, 0]
                                       + a[k, p, 1] * b[k, q, 1]
                                       + a[k, p, 2] * b[k, q, 2])
            o[k] = acc
    return out


def bracket_sum(a, b):
    cdef const double[:, :, ::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[:, :, ::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t n = av.shape[0], k
    cdef int i
    cdef double res[3]
    out = np.empty((n, 3))
    cdef double[:, ::1] o = out
    with nogil:
        for k in range(n):
            res[0] = 0.0
            res[1] = 0.0
            res[2] = 0.0
            for i in range(4):
                _cross_acc(av, bv, k, i, i, 2.0, res)
            o[k, 0] = res[0]
            o[k, 1] = res[1]
            o[k, 2] = res[2]
    return out
