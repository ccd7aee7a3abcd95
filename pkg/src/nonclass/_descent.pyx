# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled eigenbasis descent loop.

Mirrors nonclass._descent_py exactly: same coordinate order (diagonal
phases, then re/im per column pair), same first-improvement acceptance,
same shrink/termination rules.  The payoff is the inner objective —
U = V diag(lam) V^dag followed by the quadratic form in the interaction
kernel — running as straight C loops instead of a chain of small numpy
calls.
"""

import numpy as np

from libc.math cimport cos, sin


cdef double _objective(double complex[:, ::1] c_kernel,
                       double purity,
                       double complex[::1] lam,
                       double complex[:, ::1] v,
                       double complex[:, ::1] u_buf) nogil:
    cdef Py_ssize_t m = v.shape[0]
    cdef Py_ssize_t a, b, k, i, j
    cdef double complex acc, row
    # U = V diag(lam) V^dagger
    for a in range(m):
        for b in range(m):
            acc = 0
            for k in range(m):
                acc = acc + v[a, k] * lam[k] * v[b, k].conjugate()
            u_buf[a, b] = acc
    # Re( u^T C conj(u) ) with u = vec(U) row-major
    cdef double quad = 0.0
    cdef Py_ssize_t mm = m * m
    cdef double complex ui, s
    for i in range(mm):
        ui = u_buf[i // m, i % m]
        s = 0
        for j in range(mm):
            s = s + c_kernel[i, j] * u_buf[j // m, j % m].conjugate()
        quad = quad + (ui * s).real
    return purity - quad


cdef void _apply(double complex[:, ::1] src,
                 double complex[:, ::1] dst,
                 int kind, Py_ssize_t p, Py_ssize_t q, double t) nogil:
    """dst = src * exp(i t E); kind 0: diag phase, 1: re pair, 2: im pair."""
    cdef Py_ssize_t m = src.shape[0]
    cdef Py_ssize_t a, b
    cdef double c = cos(t)
    cdef double s = sin(t)
    cdef double complex phase = c + 1j * s
    cdef double complex vp, vq
    for a in range(m):
        for b in range(m):
            dst[a, b] = src[a, b]
    if kind == 0:
        for a in range(m):
            dst[a, p] = src[a, p] * phase
        return
    for a in range(m):
        vp = src[a, p]
        vq = src[a, q]
        if kind == 1:
            dst[a, p] = c * vp + 1j * s * vq
            dst[a, q] = 1j * s * vp + c * vq
        else:
            dst[a, p] = c * vp + s * vq
            dst[a, q] = -s * vp + c * vq


def ru_descent(double complex[:, ::1] c_kernel,
               double purity,
               double complex[:, ::1] v0,
               double complex[::1] lam,
               double step0,
               double shrink,
               double step_floor,
               int max_sweeps,
               double accept_tol,
               double f_floor):
    cdef Py_ssize_t m = v0.shape[0]
    v_arr = np.array(v0, dtype=complex, order="C")
    vt_arr = np.empty((m, m), dtype=complex, order="C")
    u_arr = np.empty((m, m), dtype=complex, order="C")
    cdef double complex[:, ::1] v = v_arr
    cdef double complex[:, ::1] vt = vt_arr
    cdef double complex[:, ::1] u_buf = u_arr

    # Fixed coordinate order shared with the python backend.
    cdef Py_ssize_t n_coords = m * m
    kinds_arr = np.empty(n_coords, dtype=np.intp)
    ps_arr = np.empty(n_coords, dtype=np.intp)
    qs_arr = np.empty(n_coords, dtype=np.intp)
    cdef Py_ssize_t[::1] kinds = kinds_arr
    cdef Py_ssize_t[::1] ps = ps_arr
    cdef Py_ssize_t[::1] qs = qs_arr
    cdef Py_ssize_t idx = 0, p, q
    for p in range(m):
        kinds[idx] = 0
        ps[idx] = p
        qs[idx] = p
        idx += 1
    for p in range(m):
        for q in range(p + 1, m):
            kinds[idx] = 1
            ps[idx] = p
            qs[idx] = q
            idx += 1
            kinds[idx] = 2
            ps[idx] = p
            qs[idx] = q
            idx += 1

    cdef double f = _objective(c_kernel, purity, lam, v, u_buf)
    cdef double step = step0
    cdef int sweeps = 0
    cdef bint improved
    cdef Py_ssize_t ci, a, b
    cdef int si
    cdef double t, f_try

    with nogil:
        while sweeps < max_sweeps and step >= step_floor and f > f_floor:
            improved = False
            for ci in range(n_coords):
                for si in range(2):
                    t = step if si == 0 else -step
                    _apply(v, vt, <int> kinds[ci], ps[ci], qs[ci], t)
                    f_try = _objective(c_kernel, purity, lam, vt, u_buf)
                    if f_try < f - accept_tol:
                        for a in range(m):
                            for b in range(m):
                                v[a, b] = vt[a, b]
                        f = f_try
                        improved = True
                        break
            sweeps += 1
            if not improved:
                step = step * shrink
    return f, v_arr, sweeps
