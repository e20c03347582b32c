"""Closed-form multivector fields.

An :class:`AnalyticField` is a finite sum of terms

    P(x) exp(I (k_mu x^mu + phi0))

where ``P`` is a polynomial in the coordinates ``x^mu = (ct, x, y, z)`` with
multivector coefficients and the phase factor multiplies on the right.  This
family is closed under partial derivatives, the vector derivative, products,
reversion and grade projection, so plane waves, polynomial gauge generators
and the linear ``r``-dependence of canonical acoustic spinors are all handled
exactly.  Evaluation returns ``(..., 16)`` coefficient arrays.

Right-multiplying the phase by an odd multivector flips its sign, since
``exp(I theta) A = A exp(-I theta)`` for odd ``A``; products therefore split
each factor into even and odd parts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .algebra import GRADES, Multivector, dual_array, gp, grade_array, rev

__all__ = ["Term", "AnalyticField", "GAMMA_UP"]

Monomial = tuple[int, int, int, int]

_EVEN = (GRADES % 2 == 0).astype(float)
_ODD = 1.0 - _EVEN

# Reciprocal basis gamma^mu as coefficient arrays.
GAMMA_UP = np.zeros((4, 16))
GAMMA_UP[0, 1] = 1.0
for _k in (1, 2, 3):
    GAMMA_UP[_k, 1 + _k] = -1.0


def _coerce_mv(x) -> NDArray[np.float64]:
    if isinstance(x, Multivector):
        return x.coeffs
    if isinstance(x, (int, float, np.floating, np.integer)):
        c = np.zeros(16)
        c[0] = float(x)
        return c
    arr = np.asarray(x, dtype=float)
    if arr.shape != (16,):
        raise TypeError("expected a Multivector, a scalar or 16 coefficients")
    return arr


@dataclass(frozen=True)
class Term:
    poly: Mapping[Monomial, NDArray[np.float64]]
    kcov: tuple[float, float, float, float]
    phi0: float

    def key(self) -> tuple:
        return (self.kcov, self.phi0)

    def has_phase(self) -> bool:
        return any(k != 0.0 for k in self.kcov) or self.phi0 != 0.0


def _clean(poly: Mapping[Monomial, NDArray]) -> dict[Monomial, NDArray]:
    return {m: c for m, c in poly.items() if np.any(c != 0.0)}


def _map_coeffs(poly: Mapping[Monomial, NDArray], fn) -> dict[Monomial, NDArray]:
    return _clean({m: fn(c) for m, c in poly.items()})


def _poly_product(p: Mapping[Monomial, NDArray], q: Mapping[Monomial, NDArray]) -> dict[Monomial, NDArray]:
    out: dict[Monomial, NDArray] = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            prod = gp(c1, c2)
            out[m] = out[m] + prod if m in out else prod
    return _clean(out)


class AnalyticField:
    """Sum of polynomial-times-phase multivector terms (immutable)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Term] = ()):
        merged: dict[tuple, dict[Monomial, NDArray]] = {}
        for t in terms:
            bucket = merged.setdefault(t.key(), {})
            for m, c in t.poly.items():
                bucket[m] = bucket[m] + c if m in bucket else np.array(c, dtype=float)
        self.terms: tuple[Term, ...] = tuple(
            Term(_clean(poly), key[0], key[1]) for key, poly in merged.items() if _clean(poly)
        )

    # constructors ----------------------------------------------------------
    @classmethod
    def zero(cls) -> "AnalyticField":
        return cls()

    @classmethod
    def constant(cls, value) -> "AnalyticField":
        return cls([Term({(0, 0, 0, 0): _coerce_mv(value)}, (0.0, 0.0, 0.0, 0.0), 0.0)])

    @classmethod
    def polynomial(cls, poly: Mapping[Sequence[int], object]) -> "AnalyticField":
        return cls([Term({tuple(m): _coerce_mv(c) for m, c in poly.items()}, (0.0, 0.0, 0.0, 0.0), 0.0)])

    @classmethod
    def coordinate(cls, mu: int) -> "AnalyticField":
        """The scalar coordinate field ``x^mu`` (``x^0 = ct``)."""
        m = [0, 0, 0, 0]
        m[mu] = 1
        return cls.polynomial({tuple(m): 1.0})

    @classmethod
    def position(cls) -> "AnalyticField":
        """The position vector ``r = x^mu gamma_mu``."""
        poly = {}
        for mu in range(4):
            m = [0, 0, 0, 0]
            m[mu] = 1
            c = np.zeros(16)
            c[1 + mu] = 1.0
            poly[tuple(m)] = c
        return cls.polynomial(poly)

    @classmethod
    def plane_wave(cls, amplitude, kcov: Sequence[float], phi0: float = 0.0) -> "AnalyticField":
        """``A exp(I (k_mu x^mu + phi0))`` with covariant wave components."""
        k = tuple(float(x) for x in kcov)
        return cls([Term({(0, 0, 0, 0): _coerce_mv(amplitude)}, k, float(phi0))])

    # evaluation ------------------------------------------------------------
    def evaluate(self, points: ArrayLike) -> NDArray[np.float64]:
        """Values at ``points`` of shape ``(..., 4)`` holding ``(ct, x, y, z)``."""
        pts = np.asarray(points, dtype=float)
        if pts.shape[-1] != 4:
            raise ValueError("points need a trailing axis of length 4")
        out = np.zeros(pts.shape[:-1] + (16,))
        for t in self.terms:
            val = np.zeros_like(out)
            for m, c in t.poly.items():
                w = np.ones(pts.shape[:-1])
                for mu, n in enumerate(m):
                    if n:
                        w = w * pts[..., mu] ** n
                val += w[..., None] * c
            if t.has_phase():
                theta = pts @ np.asarray(t.kcov) + t.phi0
                val = val * np.cos(theta)[..., None] + dual_array(val) * np.sin(theta)[..., None]
            out += val
        return out

    def __call__(self, points: ArrayLike) -> NDArray[np.float64]:
        return self.evaluate(points)

    def at(self, point: Sequence[float]) -> Multivector:
        return Multivector(self.evaluate(np.asarray(point, dtype=float)))

    # linear structure ------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, AnalyticField):
            other = AnalyticField.constant(other)
        return AnalyticField(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1.0)

    def __sub__(self, other):
        if not isinstance(other, AnalyticField):
            other = AnalyticField.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s: float) -> "AnalyticField":
        return AnalyticField(Term(_map_coeffs(t.poly, lambda c: c * s), t.kcov, t.phi0) for t in self.terms)

    def __mul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self.scale(float(other))
        if isinstance(other, Multivector):
            return self.right_mul(other)
        if isinstance(other, AnalyticField):
            return self.product(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self.scale(float(other))
        if isinstance(other, Multivector):
            return self.left_mul(other)
        return NotImplemented

    def __truediv__(self, s):
        return self.scale(1.0 / float(s))

    def left_mul(self, a) -> "AnalyticField":
        ac = _coerce_mv(a)
        return AnalyticField(Term(_map_coeffs(t.poly, lambda c: gp(ac, c)), t.kcov, t.phi0) for t in self.terms)

    def right_mul(self, a) -> "AnalyticField":
        return self.product(AnalyticField.constant(a))

    def product(self, other: "AnalyticField") -> "AnalyticField":
        out = []
        for t1 in self.terms:
            for t2 in other.terms:
                even = _map_coeffs(t2.poly, lambda c: c * _EVEN)
                odd = _map_coeffs(t2.poly, lambda c: c * _ODD)
                k_sum = tuple(a + b for a, b in zip(t1.kcov, t2.kcov))
                k_dif = tuple(b - a for a, b in zip(t1.kcov, t2.kcov))
                if even:
                    out.append(Term(_poly_product(t1.poly, even), k_sum, t1.phi0 + t2.phi0))
                if odd:
                    out.append(Term(_poly_product(t1.poly, odd), k_dif, t2.phi0 - t1.phi0))
        return AnalyticField(out)

    # algebraic maps --------------------------------------------------------
    def reverse(self) -> "AnalyticField":
        out = []
        for t in self.terms:
            even = _map_coeffs(t.poly, lambda c: rev(c) * _EVEN)
            odd = _map_coeffs(t.poly, lambda c: rev(c) * _ODD)
            neg_k = tuple(-k for k in t.kcov)
            if even:
                out.append(Term(even, t.kcov, t.phi0))
            if odd:
                out.append(Term(odd, neg_k, -t.phi0))
        return AnalyticField(out)

    def dual(self) -> "AnalyticField":
        return AnalyticField(Term(_map_coeffs(t.poly, dual_array), t.kcov, t.phi0) for t in self.terms)

    def grade(self, k: int | Iterable[int]) -> "AnalyticField":
        out = []
        for t in self.terms:
            if not t.has_phase():
                out.append(Term(_map_coeffs(t.poly, lambda c: grade_array(c, k)), t.kcov, t.phi0))
                continue
            # <P e^{I th}>_k = <P>_k cos th + <P I>_k sin th
            cos_part = _map_coeffs(t.poly, lambda c: 0.5 * grade_array(c, k))
            sin_part = _map_coeffs(t.poly, lambda c: 0.5 * dual_array(grade_array(dual_array(c), k)))
            neg_k = tuple(-x for x in t.kcov)
            out.append(Term(cos_part, t.kcov, t.phi0))
            out.append(Term(cos_part, neg_k, -t.phi0))
            out.append(Term(_map_coeffs(sin_part, lambda c: -c), t.kcov, t.phi0))
            out.append(Term(sin_part, neg_k, -t.phi0))
        return AnalyticField(out)

    # calculus --------------------------------------------------------------
    def partial(self, mu: int) -> "AnalyticField":
        out = []
        for t in self.terms:
            poly: dict[Monomial, NDArray] = {}
            for m, c in t.poly.items():
                n = m[mu]
                if n:
                    lowered = list(m)
                    lowered[mu] -= 1
                    key = tuple(lowered)
                    poly[key] = poly[key] + n * c if key in poly else n * c
                kmu = t.kcov[mu]
                if kmu != 0.0:
                    extra = kmu * dual_array(c)
                    poly[m] = poly[m] + extra if m in poly else extra
            out.append(Term(_clean(poly), t.kcov, t.phi0))
        return AnalyticField(out)

    def vector_derivative(self) -> "AnalyticField":
        """``grad f = gamma^mu d_mu f``."""
        total = AnalyticField()
        for mu in range(4):
            total = total + self.partial(mu).left_mul(GAMMA_UP[mu])
        return total

    def dalembertian(self) -> "AnalyticField":
        out = self.partial(0).partial(0)
        for k in (1, 2, 3):
            out = out - self.partial(k).partial(k)
        return out

    def curl4(self) -> "AnalyticField":
        total = AnalyticField()
        for g in range(4):
            total = total + self.grade(g).vector_derivative().grade(g + 1)
        return total

    def div4(self) -> "AnalyticField":
        total = AnalyticField()
        for g in range(1, 5):
            total = total + self.grade(g).vector_derivative().grade(g - 1)
        return total

    def __repr__(self):
        return f"AnalyticField({len(self.terms)} terms)"
