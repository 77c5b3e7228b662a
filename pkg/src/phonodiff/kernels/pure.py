"""NumPy transport-sweep kernels (fallback backend).

A sweep marches the upwind finite-volume recurrence

    f_i = c f_{i-1} + d T_i,   c = a/(a+b), d = b/(a+b), a = v/dx, b = coef

through the cells for every (velocity, bin) channel, accumulating the
measure-weighted contribution to the scalar field and returning the
outgoing trace.  ``forward`` marches cell 0 -> nx-1 (v > 0), ``backward``
marches nx-1 -> 0 (v < 0 at the mirrored speeds).  Boundary couplings
(reflection, far-field closures) are composed by the callers.
"""

from __future__ import annotations

import numpy as np


def _factors(vpos, coef, dx):
    a = vpos[:, None] / dx
    b = np.asarray(coef)[None, :]
    c = a / (a + b)
    d = b / (a + b)
    return c, d


def sweep_forward(T, incoming, coef, vpos, wv, wom, dx):
    """March v > 0 channels left to right; returns (contribution, trace)."""
    nx = T.size
    c, d = _factors(vpos, coef, dx)
    wcomb = wv[:, None] * wom[None, :]
    contrib = np.empty(nx)
    f = np.array(incoming, dtype=float)
    for i in range(nx):
        f = c * f + d * T[i]
        contrib[i] = float(np.sum(wcomb * f))
    return contrib, f


def sweep_backward(T, incoming, coef, vpos, wv, wom, dx):
    """March v < 0 channels right to left; returns (contribution, trace)."""
    nx = T.size
    c, d = _factors(vpos, coef, dx)
    wcomb = wv[:, None] * wom[None, :]
    contrib = np.empty(nx)
    f = np.array(incoming, dtype=float)
    for i in range(nx - 1, -1, -1):
        f = c * f + d * T[i]
        contrib[i] = float(np.sum(wcomb * f))
    return contrib, f


def sweep_forward_field(T, incoming, coef, vpos, wv, wom, dx):
    """Forward march storing the (nx, nvp, nb) field (ascending v)."""
    nx = T.size
    c, d = _factors(vpos, coef, dx)
    field = np.empty((nx,) + np.shape(incoming))
    f = np.array(incoming, dtype=float)
    for i in range(nx):
        f = c * f + d * T[i]
        field[i] = f
    return field


def sweep_backward_field(T, incoming, coef, vpos, wv, wom, dx):
    """Backward march storing the (nx, nvp, nb) field (indexed by speed)."""
    nx = T.size
    c, d = _factors(vpos, coef, dx)
    field = np.empty((nx,) + np.shape(incoming))
    f = np.array(incoming, dtype=float)
    for i in range(nx - 1, -1, -1):
        f = c * f + d * T[i]
        field[i] = f
    return field
