"""Central finite differences shared by the calculus-heavy modules.

Every derivative in this package that is not supplied analytically comes
from the second-order central scheme below, with per-coordinate step
``h_j = 1e-6 * max(1, |v_j|)``.  That choice balances truncation against
roundoff near 1e-7 for quantities of order one, which is why the
numerical validation tolerances elsewhere sit at 1e-6 or looser.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

REL_STEP = 1e-6


class EvaluationError(RuntimeError):
    """A user-supplied evaluator returned a non-finite value."""


def _steps(v: np.ndarray) -> np.ndarray:
    return REL_STEP * np.maximum(1.0, np.abs(v))


def central_gradient(f: Callable[[np.ndarray], float], v: np.ndarray) -> np.ndarray:
    """Gradient of a scalar function at ``v`` by central differences."""
    v = np.asarray(v, dtype=float)
    h = _steps(v)
    grad = np.empty_like(v)
    for j in range(v.size):
        vp = v.copy()
        vm = v.copy()
        vp[j] += h[j]
        vm[j] -= h[j]
        fp = float(f(vp))
        fm = float(f(vm))
        grad[j] = (fp - fm) / (2.0 * h[j])
    if not np.all(np.isfinite(grad)):
        raise EvaluationError("non-finite value while differencing a scalar function")
    return grad


def central_jacobian(f: Callable[[np.ndarray], np.ndarray], v: np.ndarray) -> np.ndarray:
    """Derivative of an array-valued function, stacked along a new last axis.

    The result has shape ``f(v).shape + (len(v),)``; entry ``[..., j]`` is
    the central-difference derivative of ``f`` with respect to ``v[j]``.
    """
    v = np.asarray(v, dtype=float)
    h = _steps(v)
    columns = []
    for j in range(v.size):
        vp = v.copy()
        vm = v.copy()
        vp[j] += h[j]
        vm[j] -= h[j]
        fp = np.asarray(f(vp), dtype=float)
        fm = np.asarray(f(vm), dtype=float)
        columns.append((fp - fm) / (2.0 * h[j]))
    jac = np.stack(columns, axis=-1)
    if not np.all(np.isfinite(jac)):
        raise EvaluationError("non-finite value while differencing an array function")
    return jac
