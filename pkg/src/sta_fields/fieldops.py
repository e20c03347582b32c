"""Backend-agnostic helpers for the theory modules.

Theory code accepts lattice fields, analytic fields, single multivectors or
raw ``(..., 16)`` arrays.  Operators with derivatives go through the shared
``vector_derivative`` / ``grade`` / ``reverse`` methods, and pointwise
contractions go through :func:`values_of`.
"""

from __future__ import annotations

from typing import Iterable, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .algebra import GRADES, Multivector
from .analytic import AnalyticField
from .lattice import MultivectorField

__all__ = ["Field", "values_of", "check_grades", "wrap_like"]

Field = Union[AnalyticField, MultivectorField]

# Deterministic probe points used to audit the grade content of analytic fields.
_AUDIT_POINTS = np.random.default_rng(20240611).uniform(-1.0, 1.0, size=(7, 4))


def values_of(x, points: ArrayLike | None = None) -> NDArray[np.float64]:
    """Coefficient array of ``x``; analytic fields need ``points``."""
    if isinstance(x, Multivector):
        return x.coeffs
    if isinstance(x, MultivectorField):
        return x.data
    if isinstance(x, AnalyticField):
        if points is None:
            raise ValueError("analytic fields need evaluation points")
        return x.evaluate(points)
    arr = np.asarray(x, dtype=float)
    if arr.shape[-1:] != (16,):
        raise TypeError(f"cannot interpret {type(x).__name__} as multivector values")
    return arr


def wrap_like(template, values: NDArray):
    """Return ``values`` in the same container kind as ``template``."""
    if isinstance(template, Multivector):
        return Multivector(values)
    if isinstance(template, MultivectorField):
        return MultivectorField(template.spec, values)
    return values


def check_grades(x, allowed: Iterable[int], what: str, rtol: float = 1e-12) -> None:
    """Raise if ``x`` has content outside ``allowed`` grades."""
    allowed = sorted(set(allowed))
    if x is None:
        return
    if isinstance(x, AnalyticField):
        vals = x.evaluate(_AUDIT_POINTS * 1.0)
    else:
        vals = values_of(x)
    if vals.size == 0:
        return
    scale = max(float(np.max(np.abs(vals))), 1e-300)
    stray = vals * ~np.isin(GRADES, allowed)
    if np.max(np.abs(stray)) > rtol * scale:
        raise ValueError(f"{what} must only have grades {allowed}")
