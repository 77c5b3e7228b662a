# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled transport-sweep kernels (hot inner loops of the FV solvers)."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def sweep_forward(const double[::1] T, const double[:, ::1] incoming, const double[::1] coef,
                  const double[::1] vpos, const double[::1] wv, const double[::1] wom, double dx):
    cdef Py_ssize_t nx = T.shape[0]
    cdef Py_ssize_t nvp = incoming.shape[0]
    cdef Py_ssize_t nb = incoming.shape[1]
    contrib_arr = np.zeros(nx)
    trace_arr = np.empty((nvp, nb))
    cdef double[::1] contrib = contrib_arr
    cdef double[:, ::1] trace = trace_arr
    cdef Py_ssize_t i, j, k
    cdef double a, b, c, d, w, f
    with nogil:
        for k in range(nb):
            b = coef[k]
            for j in range(nvp):
                a = vpos[j] / dx
                c = a / (a + b)
                d = b / (a + b)
                w = wv[j] * wom[k]
                f = incoming[j, k]
                for i in range(nx):
                    f = c * f + d * T[i]
                    contrib[i] += w * f
                trace[j, k] = f
    return contrib_arr, trace_arr


def sweep_backward(const double[::1] T, const double[:, ::1] incoming, const double[::1] coef,
                   const double[::1] vpos, const double[::1] wv, const double[::1] wom, double dx):
    cdef Py_ssize_t nx = T.shape[0]
    cdef Py_ssize_t nvp = incoming.shape[0]
    cdef Py_ssize_t nb = incoming.shape[1]
    contrib_arr = np.zeros(nx)
    trace_arr = np.empty((nvp, nb))
    cdef double[::1] contrib = contrib_arr
    cdef double[:, ::1] trace = trace_arr
    cdef Py_ssize_t i, j, k
    cdef double a, b, c, d, w, f
    with nogil:
        for k in range(nb):
            b = coef[k]
            for j in range(nvp):
                a = vpos[j] / dx
                c = a / (a + b)
                d = b / (a + b)
                w = wv[j] * wom[k]
                f = incoming[j, k]
                for i in range(nx - 1, -1, -1):
                    f = c * f + d * T[i]
                    contrib[i] += w * f
                trace[j, k] = f
    return contrib_arr, trace_arr


def sweep_forward_field(const double[::1] T, const double[:, ::1] incoming,
                        const double[::1] coef, const double[::1] vpos, const double[::1] wv,
                        const double[::1] wom, double dx):
    cdef Py_ssize_t nx = T.shape[0]
    cdef Py_ssize_t nvp = incoming.shape[0]
    cdef Py_ssize_t nb = incoming.shape[1]
    field_arr = np.empty((nx, nvp, nb))
    cdef double[:, :, ::1] field = field_arr
    cdef Py_ssize_t i, j, k
    cdef double a, b, c, d, f
    with nogil:
        for k in range(nb):
            b = coef[k]
            for j in range(nvp):
                a = vpos[j] / dx
                c = a / (a + b)
                d = b / (a + b)
                f = incoming[j, k]
                for i in range(nx):
                    f = c * f + d * T[i]
                    field[i, j, k] = f
    return field_arr


def sweep_backward_field(const double[::1] T, const double[:, ::1] incoming,
                         const double[::1] coef, const double[::1] vpos, const double[::1] wv,
                         const double[::1] wom, double dx):
    cdef Py_ssize_t nx = T.shape[0]
    cdef Py_ssize_t nvp = incoming.shape[0]
    cdef Py_ssize_t nb = incoming.shape[1]
    field_arr = np.empty((nx, nvp, nb))
    cdef double[:, :, ::1] field = field_arr
    cdef Py_ssize_t i, j, k
    cdef double a, b, c, d, f
    with nogil:
        for k in range(nb):
            b = coef[k]
            for j in range(nvp):
                a = vpos[j] / dx
                c = a / (a + b)
                d = b / (a + b)
                f = incoming[j, k]
                for i in range(nx - 1, -1, -1):
                    f = c * f + d * T[i]
                    field[i, j, k] = f
    return field_arr
