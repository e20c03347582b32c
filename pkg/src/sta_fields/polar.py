"""Polar decompositions of the three phase-bearing sectors.

A complex scalar ``alpha + beta I``, a complex vector ``z = a + b I`` and a
bivector ``F`` all carry a pseudoscalar phase.  Each decomposition returns a
canonical part and a phase with ``canonical * exp(I phase / 2) == input``
(for the scalar sector the full phase is used, ``canonical * exp(I phase)``).

Phases are principal values in (-pi, pi].  Null inputs (``z~z`` or ``F**2``
below ``1e-12 * |input|**2``) come back with ``canonical = input`` and phase
zero, since the phase is a free gauge choice there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .algebra import I, Multivector

__all__ = [
    "ComplexScalar",
    "PolarForm",
    "NULL_RTOL",
    "phase_factor",
    "scalar_polar",
    "vector_polar",
    "bivector_polar",
]

NULL_RTOL = 1e-12


def phase_factor(theta: float) -> Multivector:
    """``exp(I theta) = cos(theta) + I sin(theta)``."""
    return math.cos(theta) + math.sin(theta) * I


def _principal(phi: float) -> float:
    return math.pi if phi <= -math.pi else phi


@dataclass(frozen=True)
class ComplexScalar:
    alpha: float
    beta: float

    @classmethod
    def from_multivector(cls, m: Multivector) -> "ComplexScalar":
        if not m.is_grade({0, 4}):
            raise ValueError("a complex scalar has grades 0 and 4 only")
        return cls(m.scalar, m.pseudoscalar)

    def to_multivector(self) -> Multivector:
        return self.alpha + self.beta * I

    def conj(self) -> "ComplexScalar":
        return ComplexScalar(self.alpha, -self.beta)

    def abs2(self) -> float:
        return self.alpha * self.alpha + self.beta * self.beta


@dataclass(frozen=True)
class PolarForm:
    canonical: Multivector
    phase: float
    magnitude: float
    is_null: bool

    def reconstruct(self, half_angle: bool = True) -> Multivector:
        theta = self.phase / 2.0 if half_angle else self.phase
        return self.canonical * phase_factor(theta)


def scalar_polar(zeta: ComplexScalar | Multivector) -> PolarForm:
    if isinstance(zeta, Multivector):
        zeta = ComplexScalar.from_multivector(zeta)
    mag = math.hypot(zeta.alpha, zeta.beta)
    if mag == 0.0:
        return PolarForm(Multivector(), 0.0, 0.0, True)
    phi = _principal(math.atan2(zeta.beta, zeta.alpha))
    return PolarForm(Multivector.scalar_value(mag), phi, mag, False)


def _sector_polar(x: Multivector, square: Multivector) -> PolarForm:
    alpha, beta = square.scalar, square.pseudoscalar
    modulus = math.hypot(alpha, beta)
    if modulus <= NULL_RTOL * x.norm() ** 2:
        return PolarForm(x, 0.0, 0.0, True)
    phi = _principal(math.atan2(beta, alpha))
    canonical = x * phase_factor(-phi / 2.0)
    return PolarForm(canonical, phi, math.sqrt(modulus), False)


def vector_polar(z: Multivector) -> PolarForm:
    """Polar form of a complex vector via ``z~z = (a^2 - b^2) + 2(a.b) I``."""
    if not z.is_grade({1, 3}):
        raise ValueError("vector_polar needs an odd multivector with grades 1 and 3")
    return _sector_polar(z, z.reverse() * z)


def bivector_polar(F: Multivector) -> PolarForm:
    """Polar form of a bivector via ``F**2 = (|A|^2 - |B|^2) + 2(A.B) I``."""
    if not F.is_grade(2):
        raise ValueError("bivector_polar needs a homogeneous bivector")
    return _sector_polar(F, F * F)
