"""Acoustics with a spinor potential and a complex 4-vector field.

The even potential ``psi = lm phi + lp M / 3 + l4 phi_w I`` holds a complex
action density ``phi + phi_w I`` and the angular-momentum density bivector
``M = (rho c)(x + y I)`` built from the mean displacement ``x`` and the
rotational displacement ``y``.  The measurable field is the odd

    z = -grad psi = p + w I,   p = (P/c + rho v) g0,   w I = (P_w/c + rho w) g0 I,

and the field equation is ``grad z = -psi_N`` with the even source
``psi_N = rho_dot + F/c + rho Omega I + rho_dot_w I``.  In 3D::

    dP/dt     = -c^2 div(rho v) - c^2 rho_dot
    d(rho v)/dt = -grad P - curl(rho c w) + F
    d(rho w)/dt = -grad P_w + curl(rho c v) + rho c Omega
    dP_w/dt   = -c^2 div(rho w) - c^2 rho_dot_w

The probe force is ``dp/dt = +<~z psi_N>_1 / rho``.  That sign reproduces the
component expansion of the power and force (for example ``F = rho_dot v``
for a pure mass source) and keeps field plus probe energy balanced.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .algebra import G0, I, LAB, Frame, Multivector, gp, grade_array, rev, vector
from .analytic import AnalyticField
from .fieldops import check_grades, values_of

__all__ = [
    "AcMedium",
    "AcPotentialSpinor",
    "AcField",
    "AcSource",
    "AcProbe",
    "AcWave",
    "GaugeViolationWarning",
    "ac_field_from_potentials",
    "ac_fields_3d",
    "ac_field_from_3d",
    "ac_bivector_from_displacements",
    "ac_displacements",
    "ac_residual",
    "ac_3d_components",
    "ac_stress_tensor",
    "ac_energy_momentum",
    "ac_force",
    "ac_lagrangians",
    "ac_gauge_transform",
    "ac_plane_wave",
    "ac_lfg_violation",
    "ac_spin_density",
    "ac_spin_scalar_theory",
    "ac_spin_cycle_avg",
]


class GaugeViolationWarning(UserWarning):
    """Spin requested from a bivector potential outside the vorticity-free gauge."""


@dataclass(frozen=True)
class AcMedium:
    """Fluid at rest with density ``rho`` and compressibility ``beta``."""

    rho: float = 1.2
    beta: float = 1.0 / (1.2 * 343.0**2)
    lambda_minus: float = 0.5
    lambda_plus: float = 0.5
    lambda_4: float = 0.5

    def __post_init__(self):
        if not (self.rho > 0 and self.beta > 0):
            raise ValueError("density and compressibility must be positive")

    @classmethod
    def from_c(cls, rho: float, c: float, **couplings) -> "AcMedium":
        return cls(rho=rho, beta=1.0 / (rho * c * c), **couplings)

    @property
    def c(self) -> float:
        return 1.0 / math.sqrt(self.rho * self.beta)

    @property
    def zeta(self) -> float:
        """Acoustic impedance ``rho c``."""
        return self.rho * self.c

    @property
    def P0(self) -> float:
        """Equilibrium pressure ``rho c^2``."""
        return self.rho * self.c**2

    @property
    def p0(self) -> Multivector:
        """Background energy-momentum ``(rho c) g0`` of the medium at rest."""
        return self.zeta * G0

    def with_couplings(self, lambda_minus: float, lambda_plus: float, lambda_4: float) -> "AcMedium":
        return replace(self, lambda_minus=lambda_minus, lambda_plus=lambda_plus, lambda_4=lambda_4)


@dataclass(frozen=True)
class AcPotentialSpinor:
    """Scalar ``phi``, bivector ``M`` and pseudoscalar coefficient ``phi_w``.

    ``phi_w`` is stored as a grade-0 field; it enters ``psi`` as ``phi_w I``.
    Any of the three may be ``None`` (meaning zero), but not all of them.
    """

    phi: object = None
    M: object = None
    phi_w: object = None
    lambda_minus: float = 0.5
    lambda_plus: float = 0.5
    lambda_4: float = 0.5

    def __post_init__(self):
        if self.phi is None and self.M is None and self.phi_w is None:
            raise ValueError("a spinor potential needs at least one component")
        check_grades(self.phi, {0}, "phi")
        check_grades(self.M, {2}, "M")
        check_grades(self.phi_w, {0}, "phi_w")

    @property
    def psi(self):
        """``lm phi + lp M / 3 + l4 phi_w I``."""
        parts = []
        if self.phi is not None:
            parts.append(self.phi * self.lambda_minus)
        if self.M is not None:
            parts.append(self.M * (self.lambda_plus / 3.0))
        if self.phi_w is not None:
            parts.append((self.phi_w * I) * self.lambda_4)
        total = parts[0]
        for p in parts[1:]:
            total = total + p
        return total

    @classmethod
    def from_psi(cls, psi, lambda_minus: float = 0.5, lambda_plus: float = 0.5, lambda_4: float = 0.5) -> "AcPotentialSpinor":
        check_grades(psi, {0, 2, 4}, "psi_ac")
        return cls(
            psi.grade(0) * (1.0 / lambda_minus),
            psi.grade(2) * (3.0 / lambda_plus),
            (psi.grade(4) * I) * (-1.0 / lambda_4),
            lambda_minus,
            lambda_plus,
            lambda_4,
        )


@dataclass(frozen=True)
class AcField:
    z: object


@dataclass(frozen=True)
class AcSource:
    """Mass source ``nu``, bivector source ``N`` and pseudoscalar source ``nu_w``.

    ``nu_w`` is a grade-0 field entering ``psi_N`` as ``nu_w I``.
    """

    nu: object = None
    N: object = None
    nu_w: object = None

    def __post_init__(self):
        check_grades(self.nu, {0}, "nu")
        check_grades(self.N, {2}, "N")
        check_grades(self.nu_w, {0}, "nu_w")

    @classmethod
    def from_3d(
        cls,
        rho_dot: float,
        force: Sequence[float],
        vorticity: Sequence[float],
        rho_dot_w: float,
        medium: AcMedium,
        frame: Frame = LAB,
    ) -> "AcSource":
        """Point values: ``N = F/c + rho Omega I`` from ``F`` and ``Omega``."""
        N = frame.polar_array(np.asarray(force, float) / medium.c) + frame.axial_array(medium.rho * np.asarray(vorticity, float))
        return cls(Multivector.scalar_value(rho_dot), Multivector(N), Multivector.scalar_value(rho_dot_w))

    def combined(self):
        parts = [p for p in (self.nu, self.N) if p is not None]
        if self.nu_w is not None:
            parts.append(self.nu_w * I)
        if not parts:
            return None
        total = parts[0]
        for p in parts[1:]:
            total = total + p
        return total


def _z_of(z):
    return z.z if isinstance(z, AcField) else z


def _psi_of(psi):
    return psi.psi if isinstance(psi, AcPotentialSpinor) else psi


def ac_field_from_potentials(psi) -> AcField:
    """``z = -grad psi``; odd-graded potentials are rejected."""
    p = _psi_of(psi)
    check_grades(p, {0, 2, 4}, "psi_ac")
    return AcField(-p.vector_derivative())


# ---------------------------------------------------------------------------
# 3D split
# ---------------------------------------------------------------------------


def ac_fields_3d(z, medium: AcMedium, frame: Frame = LAB, points: ArrayLike | None = None):
    """Split ``z`` into ``(P, v, P_w, w)`` in ``frame``.

    Uses ``z g0 = P/c + rho v - (P_w/c) I - rho w I``.
    """
    vals = values_of(_z_of(z), points)
    scale = max(float(np.max(np.abs(vals))) if vals.size else 0.0, 1e-300)
    even = grade_array(vals, (0, 2, 4))
    if vals.size and np.max(np.abs(even)) > 1e-12 * scale:
        raise ValueError("z_ac has even-grade content")
    c, rho = medium.c, medium.rho
    X = gp(vals, frame.gamma0.coeffs)
    X2 = grade_array(X, 2)
    P = c * X[..., 0]
    v = frame.relative_components(X2) / rho
    P_w = -c * X[..., 15]
    w = -frame.axial_components(X2) / rho
    return P, v, P_w, w


def ac_field_from_3d(P: ArrayLike, v: ArrayLike, P_w: ArrayLike, w: ArrayLike, medium: AcMedium, frame: Frame = LAB) -> NDArray:
    """Inverse of :func:`ac_fields_3d`."""
    c, rho = medium.c, medium.rho
    X = frame.polar_array(rho * np.asarray(v, float)) - frame.axial_array(rho * np.asarray(w, float))
    X[..., 0] += np.asarray(P, float) / c
    X[..., 15] -= np.asarray(P_w, float) / c
    return gp(X, frame.gamma0.coeffs)


def ac_bivector_from_displacements(x: ArrayLike, y: ArrayLike, medium: AcMedium, frame: Frame = LAB) -> NDArray:
    """``M = (rho c)(x + y I)`` as coefficient arrays."""
    return medium.zeta * (frame.polar_array(np.asarray(x, float)) + frame.axial_array(np.asarray(y, float)))


def ac_displacements(M, medium: AcMedium, frame: Frame = LAB, points: ArrayLike | None = None) -> tuple[NDArray, NDArray]:
    """Mean and rotational displacements ``(x, y)`` of a bivector potential."""
    vals = grade_array(values_of(M, points), 2)
    return frame.relative_components(vals) / medium.zeta, frame.axial_components(vals) / medium.zeta


# ---------------------------------------------------------------------------
# Field equations
# ---------------------------------------------------------------------------


def ac_residual(z, src: AcSource | None):
    """``grad z + psi_N``; zero on shell."""
    res = _z_of(z).vector_derivative()
    if src is not None:
        s = src.combined()
        if s is not None:
            res = res + s
    return res


def ac_3d_components(residual, medium: AcMedium, frame: Frame = LAB, points: ArrayLike | None = None) -> dict[str, NDArray]:
    """Express ``grad z + psi_N`` as the four 3D equations.

    Each entry is "left side minus right side" of the module docstring
    equations with every term moved to the left: ``continuity`` and
    ``rot_continuity`` are scalars, ``euler`` and ``rot_euler`` 3-vectors.
    """
    vals = values_of(residual, points)
    c = medium.c
    R2 = grade_array(vals, 2)
    return {
        "continuity": c * c * vals[..., 0],
        "euler": -c * frame.relative_components(R2),
        "rot_euler": -c * frame.axial_components(R2),
        "rot_continuity": c * c * vals[..., 15],
    }


# ---------------------------------------------------------------------------
# Energy, momentum and force
# ---------------------------------------------------------------------------


def ac_stress_tensor(z, b, medium: AcMedium, points: ArrayLike | None = None):
    """``T(b) = (~z b z + z b ~z) / (4 rho c)`` for a vector ``b``."""
    bv = values_of(b)
    if np.max(np.abs(bv - grade_array(bv, 1))) > 1e-12 * max(1.0, float(np.max(np.abs(bv)))):
        raise ValueError("T(b) needs a grade-1 argument")
    zz = values_of(_z_of(z), points)
    zr = rev(zz)
    out = (gp(gp(zr, bv), zz) + gp(gp(zz, bv), zr)) / (4.0 * medium.rho * medium.c)
    if isinstance(_z_of(z), Multivector):
        return Multivector(out)
    return out


def ac_energy_momentum(z, medium: AcMedium, frame: Frame = LAB, points: ArrayLike | None = None):
    """Energy density and momentum density ``(E, p)`` from ``T(gamma0)``."""
    T = values_of(ac_stress_tensor(z, frame.gamma0, medium, points))
    split = gp(T, frame.gamma0.coeffs)
    return medium.c * split[..., 0], frame.relative_components(grade_array(split, 2))


@dataclass(frozen=True)
class AcProbe:
    """Probe acting on the fluid as a localized source.

    ``rho_dot``, ``force``, ``vorticity`` (the density ``(rho Omega)_p``) and
    ``rho_dot_w`` are the probe's source strengths as lab-frame rates.  The
    kinematic fields follow :class:`~sta_fields.em.EmProbe`.
    """

    rho_dot: float
    force: tuple[float, float, float]
    vorticity: tuple[float, float, float]
    rho_dot_w: float
    mass: float
    position: tuple[float, float, float, float]
    velocity: tuple[float, float, float, float]
    proper_time: float = 0.0

    @classmethod
    def moving(
        cls,
        rho_dot: float,
        force: Sequence[float],
        vorticity: Sequence[float],
        rho_dot_w: float,
        mass: float,
        r: Sequence[float],
        v: Sequence[float],
        c: float,
        t: float = 0.0,
    ) -> "AcProbe":
        v = np.asarray(v, float)
        beta2 = float(v @ v) / (c * c)
        if beta2 >= 1.0:
            raise ValueError("probe speed must be below the wave speed")
        gamma = 1.0 / math.sqrt(1.0 - beta2)
        return cls(
            float(rho_dot),
            tuple(map(float, force)),
            tuple(map(float, vorticity)),
            float(rho_dot_w),
            float(mass),
            (c * t, *map(float, r)),
            (gamma * c, *(gamma * v)),
        )

    def source(self, medium: AcMedium, frame: Frame = LAB) -> AcSource:
        return AcSource.from_3d(self.rho_dot, self.force, np.asarray(self.vorticity) / medium.rho, self.rho_dot_w, medium, frame)


def ac_force(z, probe: AcProbe, medium: AcMedium, frame: Frame = LAB) -> tuple[float, NDArray]:
    """Power and force ``(P, F)`` with ``dp/dt = (P/c + F) g0 = <~z psi_N>_1 / rho``.

    ``z`` is the field value at the probe.
    """
    zz = values_of(_z_of(z))
    psi_n = values_of(probe.source(medium, frame).combined())
    dpdt = grade_array(gp(rev(zz), psi_n), 1) / medium.rho
    split = gp(dpdt, frame.gamma0.coeffs)
    return float(medium.c * split[..., 0]), frame.relative_components(grade_array(split, 2))


# ---------------------------------------------------------------------------
# Lagrangians and gauge
# ---------------------------------------------------------------------------


def ac_lagrangians(psi, medium: AcMedium, points: ArrayLike | None = None) -> tuple[NDArray, NDArray]:
    """Traditional and dual-symmetric Lagrangian densities.

    ``L_trad = -<~z z>_0 / (2 rho)`` and
    ``L_dual = <grad(~psi) I grad(psi)>_4 / (2 rho)`` (coefficient of ``I``).
    """
    p = _psi_of(psi)
    grad_psi = values_of(p.vector_derivative(), points)
    grad_rev = values_of(p.reverse().vector_derivative(), points)
    z = -grad_psi
    l_trad = -gp(rev(z), z)[..., 0] / (2.0 * medium.rho)
    l_dual = gp(gp(grad_rev, I.coeffs), grad_psi)[..., 15] / (2.0 * medium.rho)
    return l_trad, l_dual


def ac_gauge_transform(M, b0, b_vec, medium: AcMedium, frame: Frame = LAB):
    """Shift ``M`` by ``div(b I)`` with ``b I = (rho c) g0 (b0/c - b) I``.

    ``b0`` is a scalar field and ``b_vec`` a relative-vector field (stored as
    a polar bivector ``b^k sigma_k``).  Returns ``(M', d(grad^M))``; the
    second entry is the change in ``grad ^ M`` and hence in ``w I``.
    """
    check_grades(M, {2}, "M")
    check_grades(b0, {0}, "b0")
    check_grades(b_vec, {2}, "b_vec")
    g0 = frame.gamma0
    b = (g0 * (b0 * (1.0 / medium.c) - b_vec)) * medium.zeta
    bI = b * I
    shift = bI.div4()
    return M + shift, shift.curl4()


# ---------------------------------------------------------------------------
# Plane waves
# ---------------------------------------------------------------------------


def _unit3(k_hat: Sequence[float]) -> NDArray:
    k = np.asarray(k_hat, float)
    if k.shape != (3,):
        raise ValueError("k_hat needs 3 components")
    if abs(float(np.linalg.norm(k)) - 1.0) > 1e-12:
        raise ValueError("k_hat must be a unit vector (the wave vector would not be null)")
    return k


def _four_vector(r, name: str) -> Multivector:
    if r is None:
        return Multivector()
    if isinstance(r, Multivector):
        if not r.is_grade(1):
            raise ValueError(f"{name} must be grade-1")
        return r
    comps = np.asarray(r, float)
    if comps.shape != (4,):
        raise ValueError(f"{name} needs 4 components (c tau, x, y, z)")
    return vector(comps)


@dataclass(frozen=True)
class AcWave:
    """Longitudinal plane wave ``z = s p_bar exp(-s I k.r + I phi0)``.

    ``psi0`` is the canonical spinor with the phase factored out, so that
    ``psi = psi0 exp(I (kcov . x + phi0))``.
    """

    medium: AcMedium
    branch: str
    k: Multivector
    kcov: tuple[float, float, float, float]
    sign: int
    amplitude: float
    omega: float
    phi0: float
    k_hat: NDArray = field(repr=False)
    r_n: Multivector = field(repr=False)
    r_s: Multivector = field(repr=False)
    psi0: AnalyticField = field(repr=False)
    psi: AnalyticField = field(repr=False)
    potential: AcPotentialSpinor = field(repr=False)
    z: AnalyticField = field(repr=False)

    @property
    def p_bar(self) -> Multivector:
        """Canonical energy-momentum ``(P/w) k``."""
        return (self.amplitude / self.omega) * self.k

    @property
    def velocity(self) -> NDArray:
        """Velocity amplitude ``v = (P / rho c) k_hat``."""
        return self.amplitude / self.medium.zeta * self.k_hat

    def closed_form_z(self) -> AnalyticField:
        return AnalyticField.plane_wave(self.sign * self.p_bar, self.kcov, self.phi0)

    def phase(self, points: ArrayLike) -> NDArray:
        return np.asarray(points, float) @ np.asarray(self.kcov) + self.phi0

    def fields_3d(self, points: ArrayLike, frame: Frame = LAB):
        return ac_fields_3d(self.z.evaluate(points), self.medium, frame)

    def displacement(self, points: ArrayLike) -> NDArray:
        """Vorticity-free displacement with ``dx/dt = v`` (zero mean)."""
        theta = self.phase(points)
        return -(self.amplitude / (self.medium.zeta * self.omega)) * np.sin(theta)[..., None] * self.k_hat

    def _split_r(self, r: Multivector) -> tuple[float, NDArray]:
        comps = r.coeffs[1:5]
        return comps[0] / self.medium.c, comps[1:]

    def canonical_displacements(self, points: ArrayLike) -> tuple[NDArray, NDArray]:
        """Closed-form ``(x, y)`` of the canonical bivector ``M0 = (rho c)(x + y I)``."""
        if self.branch != "full-spinor":
            raise ValueError("only the full-spinor branch carries a bivector potential")
        pts = np.asarray(points, float)
        c, s = self.medium.c, self.sign
        t = pts[..., 0] / c
        r = pts[..., 1:]
        v = self.velocity
        pr = self.amplitude / (self.medium.rho * c * c)
        tau_n, rn = self._split_r(self.r_n)
        tau_s, rs = self._split_r(self.r_s)
        x = (s * t + tau_n)[..., None] * v - pr * (s * r + rn) - np.cross(rs, v) / c
        y = np.cross(s * r + rn, v) / c + v * tau_s - pr * rs
        return x, y

    def angular_momentum_split(self, points: ArrayLike) -> dict[str, NDArray]:
        """Orbital and intrinsic parts ``N_L, N_S, L, S`` of ``M0``."""
        pts = np.asarray(points, float)
        c, s, rho = self.medium.c, self.sign, self.medium.rho
        t = pts[..., 0] / c
        r = pts[..., 1:]
        rv = rho * self.velocity
        P = self.amplitude
        tau_n, rn = self._split_r(self.r_n)
        tau_s, rs = self._split_r(self.r_s)
        shape = r.shape
        return {
            "N_L": s * (t[..., None] * rv - P / c**2 * r),
            "N_S": np.broadcast_to(rv * tau_n - P / c**2 * rn - np.cross(rs, rv) / c, shape).copy(),
            "L": s * np.cross(r, rv),
            "S": np.broadcast_to(np.cross(rn, rv) + rv * (c * tau_s) - P / c * rs, shape).copy(),
        }


def ac_plane_wave(
    medium: AcMedium,
    k_hat: Sequence[float],
    omega: float,
    sign: int,
    amplitude: float,
    phi0: float = 0.0,
    branch: str = "full-spinor",
    r_n=None,
    r_s=None,
) -> AcWave:
    """Plane wave with pressure amplitude ``amplitude`` on the chosen branch.

    ``"scalar-only"`` uses the constant canonical spinor ``-(P/w) I`` and
    couplings ``lm = lp = l4 = 1``.  ``"full-spinor"`` uses
    ``psi0 = [-(P/w) I + s p_bar r + p_bar (r_n + r_s I)] / 3`` with
    ``lm = l4 = 1/3`` and ``lp = 1``.  ``r_n`` and ``r_s`` are constant
    4-vectors given as ``(c tau, x, y, z)`` or grade-1 multivectors.
    """
    if not omega > 0:
        raise ValueError("omega must be positive")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if not amplitude > 0:
        raise ValueError("pressure amplitude must be positive")
    if branch not in ("scalar-only", "full-spinor"):
        raise ValueError("branch must be 'scalar-only' or 'full-spinor'")
    kh = _unit3(k_hat)
    c = medium.c
    k = vector([omega / c, *(omega / c * kh)])
    if abs((k * k).scalar) > 1e-12 * (omega / c) ** 2:
        raise ValueError("wave vector is not null")
    kcov = tuple(float(x) for x in (-sign * np.array([omega / c, *(-omega / c * kh)])))
    rn = _four_vector(r_n, "r_n")
    rs = _four_vector(r_s, "r_s")
    p_bar = (amplitude / omega) * k
    scalar_part = AnalyticField.constant(-(amplitude / omega) * I)
    if branch == "scalar-only":
        lam = (1.0, 1.0, 1.0)
        psi0 = scalar_part
    else:
        lam = (1.0 / 3.0, 1.0, 1.0 / 3.0)
        r = AnalyticField.position()
        psi0 = (scalar_part + r.left_mul(sign * p_bar) + AnalyticField.constant(p_bar * (rn + rs * I))) / 3.0
    psi = psi0 * AnalyticField.plane_wave(1.0, kcov, phi0)
    wave_medium = medium.with_couplings(*lam)
    potential = AcPotentialSpinor.from_psi(psi, *lam)
    z = -psi.vector_derivative()
    return AcWave(
        wave_medium, branch, k, kcov, sign, float(amplitude), float(omega), float(phi0), kh, rn, rs, psi0, psi, potential, z
    )


# ---------------------------------------------------------------------------
# Spin densities
# ---------------------------------------------------------------------------


def ac_lfg_violation(M, points: ArrayLike | None = None) -> float:
    """Largest coefficient of ``grad ^ M``; zero in the vorticity-free gauge."""
    vals = values_of(M.vector_derivative().grade(3), points)
    return float(np.max(np.abs(vals))) if vals.size else 0.0


def ac_spin_density(x: ArrayLike, rho_v: ArrayLike, M=None, points: ArrayLike | None = None, tol: float = 1e-10) -> NDArray:
    """Instantaneous spin ``x cross (rho v) / 2``.

    The formula holds in the gauge where ``v = dx/dt``.  If the bivector
    potential ``M`` is supplied, its ``grad ^ M`` is checked first and a
    :class:`GaugeViolationWarning` carries the size of any violation.
    """
    if M is not None:
        violation = ac_lfg_violation(M, points)
        if violation > tol:
            warnings.warn(f"bivector potential violates the vorticity-free gauge by {violation:.3e}", GaugeViolationWarning, stacklevel=2)
    return 0.5 * np.cross(np.asarray(x, float), np.asarray(rho_v, float))


def ac_spin_scalar_theory(rho_v: ArrayLike) -> NDArray:
    """Spin of the traditional scalar-potential theory, identically zero."""
    return np.zeros_like(np.asarray(rho_v, float))


def ac_spin_cycle_avg(v_bar: ArrayLike, omega: float, rho: float) -> NDArray:
    """Cycle-averaged spin ``rho Im(v* x v) / (4 w)`` from a velocity envelope."""
    if not omega > 0:
        raise ValueError("omega must be positive")
    v_bar = np.asarray(v_bar, complex)
    return rho * np.imag(np.cross(np.conj(v_bar), v_bar)) / (4.0 * omega)
