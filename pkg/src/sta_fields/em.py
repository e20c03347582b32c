"""Electromagnetism with a complex 4-vector potential and power fields.

The potential ``z = lm a_e + lp a_m I`` (grades 1 and 3) generates the even
spinor field

    psi = grad z = W_e / c^2 + F + (W_m / c) I,   F = E / c + mu H I,

whose vector derivative obeys ``grad psi = mu j`` with
``j = j_e + (j_m / c) I``.  The scalar and pseudoscalar "power fields"
``W_e = lm c^2 grad.a_e`` and ``W_m = lp c grad.a_m`` vanish in Lorenz gauge
and otherwise enter the energy density and the probe force.

Sign conventions for the 3D expansions come from the geometric products
themselves.  With ``grad = (d_ct - nabla) g0``, the four equations read::

    div E + dW_e/dt / c^2            = rho_e / eps
    -dE/dt / c^2 - grad W_e / c^2 + mu curl H = mu J_e
    -mu dH/dt - curl E - grad W_m    = mu J_m
    mu div H + dW_m/dt / c^2         = mu rho_m

and the probe force ``dp/dtau = -(~psi j + ~j psi) / 2`` with
``j = (q_e - q_m I / c) u`` gives power ``q_e E.v - q_e W_e`` (electric
part).  These signs make field plus probe energy balance exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .algebra import (
    G0,
    I,
    LAB,
    Frame,
    Multivector,
    dual_array,
    gp,
    grade_array,
    rev,
    vector,
)
from .analytic import AnalyticField
from .fieldops import check_grades, values_of
from .lattice import MultivectorField

__all__ = [
    "EPS0",
    "MU0",
    "EmMedium",
    "EmPotential",
    "EmSpinor",
    "EmSource",
    "EmProbe",
    "EmWave",
    "em_spinor_from_potentials",
    "em_fields_3d",
    "em_spinor_from_3d",
    "maxwell_residual",
    "maxwell_3d_components",
    "em_stress_tensor",
    "em_energy_momentum",
    "em_lorentz_force",
    "em_lagrangians",
    "em_gauge_transform",
    "em_plane_wave",
    "em_spin_density",
    "em_spin_density_electric",
    "envelope_from_quadratures",
    "envelope_from_samples",
]

EPS0 = 8.8541878128e-12
MU0 = 1.25663706212e-6

_I = I.coeffs
_G0 = G0.coeffs


@dataclass(frozen=True)
class EmMedium:
    """Linear medium; ``c`` and ``zeta`` are derived from ``epsilon``, ``mu``."""

    epsilon: float = EPS0
    mu: float = MU0
    lambda_minus: float = 0.5
    lambda_plus: float = 0.5

    def __post_init__(self):
        if not (self.epsilon > 0 and self.mu > 0):
            raise ValueError("permittivity and permeability must be positive")

    @classmethod
    def vacuum(cls) -> "EmMedium":
        return cls()

    @classmethod
    def from_c_zeta(cls, c: float, zeta: float, **couplings) -> "EmMedium":
        """Medium with wave speed ``c`` and impedance ``zeta = mu c``."""
        return cls(epsilon=1.0 / (zeta * c), mu=zeta / c, **couplings)

    @property
    def c(self) -> float:
        return 1.0 / math.sqrt(self.epsilon * self.mu)

    @property
    def zeta(self) -> float:
        return self.mu * self.c

    def with_couplings(self, lambda_minus: float, lambda_plus: float) -> "EmMedium":
        return replace(self, lambda_minus=lambda_minus, lambda_plus=lambda_plus)


@dataclass(frozen=True)
class EmPotential:
    """Electric and magnetic 4-vector potentials with their couplings."""

    a_e: object
    a_m: object
    lambda_minus: float = 0.5
    lambda_plus: float = 0.5

    def __post_init__(self):
        check_grades(self.a_e, {1}, "a_e")
        check_grades(self.a_m, {1}, "a_m")

    @property
    def z(self):
        """``lm a_e + lp a_m I``."""
        return self.a_e * self.lambda_minus + (self.a_m * I) * self.lambda_plus

    @classmethod
    def from_z(cls, z, lambda_minus: float = 0.5, lambda_plus: float = 0.5) -> "EmPotential":
        check_grades(z, {1, 3}, "z_em")
        a_e = z.grade(1) * (1.0 / lambda_minus)
        a_m = (z.grade(3) * I) * (-1.0 / lambda_plus)
        return cls(a_e, a_m, lambda_minus, lambda_plus)


@dataclass(frozen=True)
class EmSpinor:
    psi: object


@dataclass(frozen=True)
class EmSource:
    """Electric 4-current ``j_e`` and magnetic 4-current ``j_m`` (grade 1)."""

    j_e: object = None
    j_m: object = None

    def __post_init__(self):
        check_grades(self.j_e, {1}, "j_e")
        check_grades(self.j_m, {1}, "j_m")

    def combined(self, c: float):
        """``j = j_e + (j_m / c) I`` (grades 1 and 3)."""
        parts = []
        if self.j_e is not None:
            parts.append(self.j_e)
        if self.j_m is not None:
            parts.append((self.j_m * I) * (1.0 / c))
        if not parts:
            return None
        total = parts[0]
        for p in parts[1:]:
            total = total + p
        return total


def _psi_of(psi):
    return psi.psi if isinstance(psi, EmSpinor) else psi


def em_spinor_from_potentials(z: EmPotential) -> EmSpinor:
    """``psi = grad z`` on whichever backend holds the potentials."""
    return EmSpinor(z.z.vector_derivative())


# ---------------------------------------------------------------------------
# 3D split
# ---------------------------------------------------------------------------


def em_fields_3d(psi, medium: EmMedium, frame: Frame = LAB, points: ArrayLike | None = None):
    """Split ``psi`` into ``(E, H, W_e, W_m)`` in ``frame``.

    ``E`` and ``H`` have a trailing axis of 3; ``W_e`` and ``W_m`` are scalars
    per site.
    """
    vals = values_of(_psi_of(psi), points)
    scale = max(float(np.max(np.abs(vals))) if vals.size else 0.0, 1e-300)
    odd = vals - grade_array(vals, (0, 2, 4))
    if vals.size and np.max(np.abs(odd)) > 1e-12 * scale:
        raise ValueError("psi has odd-grade content")
    c, mu = medium.c, medium.mu
    F = grade_array(vals, 2)
    E = c * frame.relative_components(F)
    H = frame.axial_components(F) / mu
    W_e = c * c * vals[..., 0]
    W_m = c * vals[..., 15]
    return E, H, W_e, W_m


def em_spinor_from_3d(E: ArrayLike, H: ArrayLike, W_e: ArrayLike, W_m: ArrayLike, medium: EmMedium, frame: Frame = LAB) -> NDArray:
    """Inverse of :func:`em_fields_3d`."""
    c, mu = medium.c, medium.mu
    E = np.asarray(E, float)
    out = frame.polar_array(E / c) + frame.axial_array(mu * np.asarray(H, float))
    out[..., 0] += np.asarray(W_e, float) / (c * c)
    out[..., 15] += np.asarray(W_m, float) / c
    return out


# ---------------------------------------------------------------------------
# Field equations
# ---------------------------------------------------------------------------


def maxwell_residual(psi, j: EmSource | None, medium: EmMedium):
    """``grad psi - mu j``; zero on shell."""
    res = _psi_of(psi).vector_derivative()
    if j is not None:
        jj = j.combined(medium.c)
        if jj is not None:
            res = res - jj * medium.mu
    return res


def maxwell_3d_components(residual, medium: EmMedium, frame: Frame = LAB, points: ArrayLike | None = None) -> dict[str, NDArray]:
    """Express a residual ``grad psi - mu j`` as four 3D equations.

    Each entry is "left side minus right side" of the equations listed in
    the module docstring: ``gauss_e`` (scalar), ``ampere`` (3-vector),
    ``faraday`` (3-vector) and ``gauss_m`` (scalar).
    """
    vals = values_of(residual, points)
    c = medium.c
    X = gp(vals, frame.gamma0.coeffs)
    return {
        "gauss_e": c * X[..., 0],
        "ampere": frame.relative_components(grade_array(X, 2)),
        "faraday": -c * frame.axial_components(grade_array(X, 2)),
        "gauss_m": -X[..., 15],
    }


# ---------------------------------------------------------------------------
# Energy, momentum and force
# ---------------------------------------------------------------------------


def em_stress_tensor(psi, b, medium: EmMedium, points: ArrayLike | None = None):
    """``T(b) = (~psi b psi + psi b ~psi) / (4 mu c)`` for a vector ``b``."""
    bv = values_of(b)
    if np.max(np.abs(bv - grade_array(bv, 1))) > 1e-12 * max(1.0, float(np.max(np.abs(bv)))):
        raise ValueError("T(b) needs a grade-1 argument")
    p = values_of(_psi_of(psi), points)
    pr = rev(p)
    out = (gp(gp(pr, bv), p) + gp(gp(p, bv), pr)) / (4.0 * medium.mu * medium.c)
    if isinstance(_psi_of(psi), Multivector):
        return Multivector(out)
    return out


def em_energy_momentum(psi, medium: EmMedium, frame: Frame = LAB, points: ArrayLike | None = None):
    """Energy density and momentum density ``(E, p)`` from ``T(gamma0)``."""
    T = values_of(em_stress_tensor(psi, frame.gamma0, medium, points))
    g0 = frame.gamma0.coeffs
    split = gp(T, g0)  # T = (E/c + p) g0  =>  T g0 = E/c + p
    energy = medium.c * split[..., 0]
    momentum = frame.relative_components(grade_array(split, 2))
    return energy, momentum


@dataclass(frozen=True)
class EmProbe:
    """Point charge with electric charge ``q_e`` and magnetic charge ``q_m``.

    ``position`` holds ``(ct, x, y, z)`` and ``velocity`` the contravariant
    4-velocity ``u^mu`` with ``u.u = c^2``.
    """

    q_e: float
    q_m: float
    mass: float
    position: tuple[float, float, float, float]
    velocity: tuple[float, float, float, float]
    proper_time: float = 0.0

    @classmethod
    def at_rest(cls, q_e: float, q_m: float, mass: float, r: Sequence[float], c: float, t: float = 0.0) -> "EmProbe":
        return cls.moving(q_e, q_m, mass, r, (0.0, 0.0, 0.0), c, t)

    @classmethod
    def moving(cls, q_e: float, q_m: float, mass: float, r: Sequence[float], v: Sequence[float], c: float, t: float = 0.0) -> "EmProbe":
        v = np.asarray(v, float)
        beta2 = float(v @ v) / (c * c)
        if beta2 >= 1.0:
            raise ValueError("probe speed must be below the wave speed")
        gamma = 1.0 / math.sqrt(1.0 - beta2)
        return cls(q_e, q_m, mass, (c * t, *map(float, r)), (gamma * c, *(gamma * v)))

    def velocity_3d(self) -> NDArray:
        u = np.asarray(self.velocity)
        return u[1:] * (self.speed_scale() / u[0])

    def speed_scale(self) -> float:
        u = np.asarray(self.velocity)
        return math.sqrt(max(u[0] ** 2 - u[1:] @ u[1:], 0.0))

    def complex_charge(self, medium: EmMedium) -> Multivector:
        """``q = mu (q_e - q_m I / c)``."""
        return medium.mu * (self.q_e - (self.q_m / medium.c) * I)


def em_lorentz_force(psi, probe: EmProbe, medium: EmMedium, frame: Frame = LAB) -> tuple[float, NDArray]:
    """Power and force ``(P, F)`` on a probe, ``dp/dt = (P/c + F) gamma0``.

    Uses ``dp/dtau = -(~psi j + ~j psi) / 2`` with ``j = (q_e - q_m I/c) u``
    (the complex charge divided by ``mu``), then divides by the Lorentz
    factor of the probe in ``frame``.
    """
    p = values_of(_psi_of(psi))
    c = medium.c
    u = frame.vector_array(np.asarray(probe.velocity, float))
    charge = np.zeros(16)
    charge[0] = probe.q_e
    charge[15] = -probe.q_m / c
    j = gp(charge, u)
    dpdtau = -0.5 * (gp(rev(p), j) + gp(rev(j), p))
    gamma = float(gp(u, frame.gamma0.coeffs)[0]) / c
    dpdt = dpdtau / gamma
    split = gp(dpdt, frame.gamma0.coeffs)
    power = c * split[..., 0]
    force = frame.relative_components(grade_array(split, 2))
    return float(power), force


# ---------------------------------------------------------------------------
# Lagrangians and gauge
# ---------------------------------------------------------------------------


def em_lagrangians(z: EmPotential, medium: EmMedium, points: ArrayLike | None = None) -> tuple[NDArray, NDArray]:
    """Traditional and dual-symmetric Lagrangian densities.

    ``L_trad = -<~psi psi>_0 / (2 mu)`` and
    ``L_dual = c <~psi_dual psi>_4 / 2`` (coefficient of ``I``), with
    ``~psi_dual = zeta^{-1} (grad ~z) I``.
    """
    zf = z.z
    psi = values_of(zf.vector_derivative(), points)
    grad_zrev = values_of(zf.reverse().vector_derivative(), points)
    l_trad = -gp(rev(psi), psi)[..., 0] / (2.0 * medium.mu)
    psi_dual = dual_array(grad_zrev) / medium.zeta
    l_dual = medium.c * gp(psi_dual, psi)[..., 15] / 2.0
    return l_trad, l_dual


def em_gauge_transform(z: EmPotential, chi_e, chi_m, medium: EmMedium):
    """Shift ``a_e += grad chi_e`` and ``a_m += grad chi_m``.

    Returns ``(z', dW_e, dW_m)`` where the predicted power-field shifts are
    ``lm c^2 box chi_e`` and ``lp c box chi_m`` (``box`` being the
    d'Alembertian of the backend).  ``F`` is untouched.
    """
    c = medium.c
    check_grades(chi_e, {0}, "chi_e")
    check_grades(chi_m, {0}, "chi_m")
    new = EmPotential(
        z.a_e + chi_e.vector_derivative(),
        z.a_m + chi_m.vector_derivative(),
        z.lambda_minus,
        z.lambda_plus,
    )
    dW_e = chi_e.dalembertian() * (z.lambda_minus * c * c)
    dW_m = chi_m.dalembertian() * (z.lambda_plus * c)
    return new, dW_e, dW_m


# ---------------------------------------------------------------------------
# Plane waves
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EmWave:
    """Closed-form null plane wave ``z = -z0 I exp(-s I k.r + I phi0)``."""

    medium: EmMedium
    k: Multivector
    kcov: tuple[float, float, float, float]
    sign: int
    z0: Multivector
    phi0: float
    omega: float
    z: AnalyticField = field(repr=False)
    potential: EmPotential = field(repr=False)
    psi: AnalyticField = field(repr=False)

    @property
    def psi0(self) -> Multivector:
        """Canonical spinor amplitude ``-s k z0``."""
        return -self.sign * (self.k * self.z0)

    def fields_3d(self, points: ArrayLike, frame: Frame = LAB):
        return em_fields_3d(self.psi.evaluate(points), self.medium, frame)


def _unit3(k_hat: Sequence[float]) -> NDArray:
    k = np.asarray(k_hat, float)
    if k.shape != (3,):
        raise ValueError("k_hat needs 3 components")
    if abs(float(np.linalg.norm(k)) - 1.0) > 1e-12:
        raise ValueError("k_hat must be a unit vector (the wave vector would not be null)")
    return k


def em_plane_wave(
    medium: EmMedium,
    k_hat: Sequence[float],
    omega: float,
    sign: int,
    a_e0: Multivector,
    a_m0: Multivector,
    phi0: float = 0.0,
) -> EmWave:
    """Null plane wave with canonical potentials ``a_e0``, ``a_m0``.

    The wave fixes the couplings to ``lm = lp = 1/2``.  Transverse potentials
    give a circularly polarized null ``F`` with no power fields; a component
    along ``k`` populates ``W_e`` (or ``W_m``).
    """
    if not omega > 0:
        raise ValueError("omega must be positive")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    kh = _unit3(k_hat)
    for name, a in (("a_e0", a_e0), ("a_m0", a_m0)):
        if not a.is_grade(1):
            raise ValueError(f"{name} must be grade-1")
    dot = (a_e0 | a_m0).scalar
    if abs(dot) > 1e-12 * max(a_e0.norm() * a_m0.norm(), 1e-300):
        raise ValueError("canonical potentials must satisfy a_e0 . a_m0 = 0")
    c = medium.c
    k = vector([omega / c, *(omega / c * kh)])
    kk = (k * k).scalar
    if abs(kk) > 1e-12 * (omega / c) ** 2:
        raise ValueError("wave vector is not null")
    k_lower = np.array([omega / c, *(-omega / c * kh)])
    kcov = tuple(float(x) for x in (-sign * k_lower))
    lm = lp = 0.5
    z0 = lm * a_e0 + lp * (a_m0 * I)
    zf = AnalyticField.plane_wave(-(z0 * I), kcov, phi0)
    potential = EmPotential.from_z(zf, lm, lp)
    wave_medium = medium.with_couplings(lm, lp)
    return EmWave(wave_medium, k, kcov, sign, z0, float(phi0), float(omega), zf, potential, zf.vector_derivative())


# ---------------------------------------------------------------------------
# Spin densities (monochromatic envelopes)
# ---------------------------------------------------------------------------
#
# Envelopes use ordinary complex numbers, kept apart from the geometric
# pseudoscalar.  A real field X(t) = Re(Xbar exp(-i w t)) has
# Xbar = X_cos + i X_sin when X(t) = X_cos cos(w t) + X_sin sin(w t).


def envelope_from_quadratures(x_cos: ArrayLike, x_sin: ArrayLike) -> NDArray[np.complex128]:
    return np.asarray(x_cos, float) + 1j * np.asarray(x_sin, float)


def envelope_from_samples(samples: ArrayLike, axis: int = 0) -> NDArray[np.complex128]:
    """Envelope from ``n`` equally spaced samples over one period.

    Sample ``m`` is taken at ``w t = 2 pi m / n``.
    """
    x = np.moveaxis(np.asarray(samples, float), axis, 0)
    n = x.shape[0]
    phase = np.exp(2j * np.pi * np.arange(n) / n)
    shape = (n,) + (1,) * (x.ndim - 1)
    return 2.0 / n * np.sum(x * phase.reshape(shape), axis=0)


def _im_cross(a: NDArray[np.complex128]) -> NDArray:
    return np.imag(np.cross(np.conj(a), a))


def em_spin_density(E_bar: ArrayLike, H_bar: ArrayLike, omega: float, medium: EmMedium) -> NDArray:
    """Dual-symmetric cycle-averaged spin ``Im(eps E*xE + mu H*xH) / (4 w)``."""
    if not omega > 0:
        raise ValueError("omega must be positive")
    E_bar = np.asarray(E_bar, complex)
    H_bar = np.asarray(H_bar, complex)
    return (medium.epsilon * _im_cross(E_bar) + medium.mu * _im_cross(H_bar)) / (4.0 * omega)


def em_spin_density_electric(E_bar: ArrayLike, omega: float, medium: EmMedium) -> NDArray:
    """Electric-biased cycle-averaged spin ``eps Im(E*xE) / (2 w)``."""
    if not omega > 0:
        raise ValueError("omega must be positive")
    return medium.epsilon * _im_cross(np.asarray(E_bar, complex)) / (2.0 * omega)
