"""Sweep kernel backend selection.

The compiled extension is used when it imported successfully; set
``PHONODIFF_PURE_PYTHON=1`` to force the NumPy fallback.  ``BACKEND`` names
the active choice and is recorded in experiment summaries.

All kernels share one calling convention::

    sweep_forward(T, incoming, coef, vpos, wv, wom, dx) -> (contrib, trace)

with T the scalar field per cell, ``incoming`` the boundary values per
(positive speed, bin) channel, ``coef`` the per-bin relaxation rate, and
(wv, wom) the half-grid velocity and bin weights of the normalized measure.
``contrib`` is the channels' measure-weighted contribution to the updated
scalar field and ``trace`` the outgoing boundary values.
"""

from __future__ import annotations

import os

import numpy as np

from . import pure

_FORCE_PURE = os.environ.get("PHONODIFF_PURE_PYTHON", "") not in ("", "0")

try:
    from . import _sweep as _compiled
except ImportError:
    _compiled = None

BACKEND = "python" if (_FORCE_PURE or _compiled is None) else "compiled"
BACKENDS = {"python": pure}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled

_active = BACKENDS[BACKEND]


def _prep(T, incoming, coef, vpos, wv, wom):
    return (np.ascontiguousarray(T, dtype=float),
            np.ascontiguousarray(incoming, dtype=float),
            np.ascontiguousarray(coef, dtype=float),
            np.ascontiguousarray(vpos, dtype=float),
            np.ascontiguousarray(wv, dtype=float),
            np.ascontiguousarray(wom, dtype=float))


def sweep_forward(T, incoming, coef, vpos, wv, wom, dx, backend=None):
    impl = BACKENDS[backend] if backend else _active
    return impl.sweep_forward(*_prep(T, incoming, coef, vpos, wv, wom), float(dx))


def sweep_backward(T, incoming, coef, vpos, wv, wom, dx, backend=None):
    impl = BACKENDS[backend] if backend else _active
    return impl.sweep_backward(*_prep(T, incoming, coef, vpos, wv, wom), float(dx))


def sweep_forward_field(T, incoming, coef, vpos, wv, wom, dx, backend=None):
    impl = BACKENDS[backend] if backend else _active
    return impl.sweep_forward_field(*_prep(T, incoming, coef, vpos, wv, wom),
                                    float(dx))


def sweep_backward_field(T, incoming, coef, vpos, wv, wom, dx, backend=None):
    impl = BACKENDS[backend] if backend else _active
    return impl.sweep_backward_field(*_prep(T, incoming, coef, vpos, wv, wom),
                                     float(dx))
