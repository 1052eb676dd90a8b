"""Adaptive central differences with Richardson refinement (scipy.differentiate)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.differentiate import derivative

from .errors import MinStepReached


@dataclass(frozen=True)
class Derivative:
    value: float
    error: float


def ddk(f, x: float, step: float | None = None, rtol: float = 1e-7, order: int = 4,
        maxiter: int = 12, min_step: float | None = None, strict: bool = True) -> Derivative:
    """df/dx at x; f must accept arrays elementwise.

    The step is halved until successive refinements agree to rtol.  If that
    never happens before the step would drop below min_step, MinStepReached
    carries the last estimate and its error bound; with strict=False the
    best estimate is returned instead, its error bound attached.
    """
    step = (1e-2 * max(abs(x), 1.0)) if step is None else step
    if min_step is not None:
        maxiter = max(1, min(maxiter, int(np.floor(np.log2(step / min_step))) + 1))
    res = derivative(f, x, tolerances=dict(rtol=rtol, atol=0.0), initial_step=step, order=order,
                     step_factor=2.0, maxiter=maxiter)
    value, error = float(res.df), float(res.error)
    if not bool(res.success):
        # status -1 means the estimate stopped improving; accept it if already within tolerance
        if strict and not (np.isfinite(value) and error <= rtol * abs(value)):
            raise MinStepReached(f"derivative did not reach rtol={rtol:g} (error {error:.3e})",
                                 estimate=value, error=error)
    return Derivative(value, error)
