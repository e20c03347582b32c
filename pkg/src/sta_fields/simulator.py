"""Time-domain evolution on a periodic spatial lattice.

The primary scheme evolves potentials with the wave equation

    box u = S,   box = d_ct^2 - laplacian,

where ``u = z_em`` with ``S = mu j`` for electromagnetism and ``u = psi_ac``
with ``S = psi_N`` for acoustics.  Leapfrog in time with the compact
three-point Laplacian is used.  Potential levels sit at half steps, so a
state at time ``t`` holds ``u(t - dt/2)`` and ``u(t + dt/2)``; the measured
field ``Q = +grad u`` (EM) or ``Q = -grad u`` (acoustic), the energy and the
probes all live at ``t``.

The discrete energy

    E = dV / (2 kappa) * [ |du/tau|^2 - <u+, L u-> + (2/tau) <u+, B u-> ]

(``tau = c dt``, ``L`` the Laplacian, ``B = gamma0 sum_k gamma^k D_k``) is
conserved to round-off by the source-free leapfrog and approximates
``sum |Q|^2 / (2 kappa) dV`` with ``kappa = mu`` or ``rho``.

A first-order twin, :func:`step_dirac`, advances the measured field itself
with ``d_ct f = gamma0 (s - gamma^k d_k f)`` and is kept as a cross-check.
Probe coupling is one-way: fields push probes, probes do not radiate.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .acoustic import AcMedium, AcProbe, ac_force
from .algebra import GRADES
from .analytic import AnalyticField, Term
from .em import EmMedium, EmProbe, em_lorentz_force
from .lattice import central_diff, left_basis_mult, second_diff, write_field_csv

__all__ = [
    "NumericAbort",
    "CFLViolation",
    "Grid",
    "SimState",
    "ProbeState",
    "ContinuityReport",
    "Snapshot",
    "cfl_limit",
    "check_cfl",
    "step_wave",
    "step_dirac",
    "integrate_probe",
    "continuity_audit",
    "time_reversed",
    "run",
    "lattice_dispersion_field",
    "gaussian_source",
    "sample_periodic",
    "write_snapshot",
]

Source = Callable[[NDArray], NDArray]
Evaluator = Callable[[float, NDArray], NDArray]

_ODD = (1, 3)
_EVEN = (0, 2, 4)


class NumericAbort(RuntimeError):
    """Unrecoverable numerical condition (exit status 3 on the command line)."""


class CFLViolation(NumericAbort):
    pass


@dataclass(frozen=True)
class Grid:
    """Periodic box of ``dims`` sites with spacings ``spacing`` (meters)."""

    dims: tuple[int, int, int]
    spacing: tuple[float, float, float]
    origin: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        spacing = tuple(float(h) for h in self.spacing)
        if len(dims) != 3 or len(spacing) != 3 or len(self.origin) != 3:
            raise ValueError("a spatial grid needs 3 dims, 3 spacings and a 3D origin")
        if any(d < 4 for d in dims):
            raise ValueError(f"every grid dimension must be at least 4, got {dims}")
        if any(not h > 0 for h in spacing):
            raise ValueError(f"spacings must be positive, got {spacing}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "origin", tuple(float(o) for o in self.origin))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def lengths(self) -> NDArray:
        return np.asarray(self.dims) * np.asarray(self.spacing)

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return (*self.dims, 16)

    def points(self, ct: float) -> NDArray:
        """Site coordinates ``(ct, x, y, z)`` with shape ``dims + (4,)``."""
        axes = [o + h * np.arange(n) for o, h, n in zip(self.origin, self.spacing, self.dims)]
        X, Y, Z = np.meshgrid(*axes, indexing="ij")
        return np.stack([np.full_like(X, ct), X, Y, Z], axis=-1)


def cfl_limit(grid: Grid, c: float) -> float:
    """Largest stable time step ``min(h) / (sqrt(3) c)``."""
    return min(grid.spacing) / (math.sqrt(3.0) * c)


def check_cfl(dt: float, grid: Grid, c: float) -> None:
    limit = cfl_limit(grid, c)
    if not abs(dt) > 0:
        raise CFLViolation("time step must be nonzero")
    if abs(dt) > limit * (1.0 + 1e-12):
        raise CFLViolation(
            f"CFL violated: c*dt = {c * abs(dt):.6g} m exceeds min(h)/sqrt(3) = {c * limit:.6g} m (dt must be <= {limit:.6g} s)"
        )


# ---------------------------------------------------------------------------
# Stencils on (Nx, Ny, Nz, 16) arrays
# ---------------------------------------------------------------------------


def _laplacian(u: NDArray, h: Sequence[float]) -> NDArray:
    return second_diff(u, 0, h[0]) + second_diff(u, 1, h[1]) + second_diff(u, 2, h[2])


def _spatial_dirac(u: NDArray, h: Sequence[float]) -> NDArray:
    """``sum_k gamma^k D_k u`` with central differences."""
    out = left_basis_mult(1, central_diff(u, 0, h[0]))
    out += left_basis_mult(2, central_diff(u, 1, h[1]))
    out += left_basis_mult(3, central_diff(u, 2, h[2]))
    return out


def _g0(u: NDArray) -> NDArray:
    return left_basis_mult(0, u)


def _grad_half(prev: NDArray, curr: NDArray, tau: float, h: Sequence[float]) -> NDArray:
    """``grad u`` midway between two levels one step ``tau`` apart."""
    return _g0((curr - prev) / tau) + _spatial_dirac(0.5 * (curr + prev), h)


def _grad_mid(prev: NDArray, curr: NDArray, nxt: NDArray, tau: float, h: Sequence[float]) -> NDArray:
    """``grad u`` at the level of ``curr``."""
    return _g0((nxt - prev) / (2.0 * tau)) + _spatial_dirac(curr, h)


# ---------------------------------------------------------------------------
# Probes
# ---------------------------------------------------------------------------


@dataclass
class ProbeState:
    """Kinematic state of a probe integrated in lab time.

    ``p`` is the relativistic 3-momentum; the energy is always taken on the
    mass shell, which keeps ``u.u = c^2`` exactly.  ``work`` accumulates the
    power delivered by the field, so ``drift = |E - (E0 + work)|`` measures
    how far the mass-shell energy strays from the integrated power.
    """

    probe: EmProbe | AcProbe
    c: float
    t: float
    x: NDArray
    p: NDArray
    tau: float = 0.0
    work: float = 0.0
    energy0: float = 0.0
    history: list = field(default_factory=list, repr=False)

    HISTORY_COLUMNS = ("t", "x", "y", "z", "vx", "vy", "vz", "tau", "energy", "work", "drift")

    @classmethod
    def from_probe(cls, probe: EmProbe | AcProbe, c: float) -> "ProbeState":
        if not probe.mass > 0:
            raise ValueError("probe mass must be positive")
        pos = np.asarray(probe.position, float)
        u = np.asarray(probe.velocity, float)
        if u[0] <= 0 or u[1:] @ u[1:] >= u[0] ** 2:
            raise NumericAbort("probe 4-velocity is not timelike and future pointing")
        # normalize u to the mass shell before reading off p
        scale = c / math.sqrt(u[0] ** 2 - u[1:] @ u[1:])
        p = probe.mass * u[1:] * scale
        st = cls(probe, c, pos[0] / c, pos[1:].copy(), p, float(probe.proper_time))
        st.energy0 = st.energy()
        st.history.append(st.row())
        return st

    @property
    def mass(self) -> float:
        return self.probe.mass

    def energy(self) -> float:
        return math.sqrt((self.mass * self.c**2) ** 2 + (self.p @ self.p) * self.c**2)

    def kinetic(self) -> float:
        return self.energy() - self.mass * self.c**2

    def velocity(self) -> NDArray:
        return self.p * self.c**2 / self.energy()

    def drift(self) -> float:
        return abs(self.energy() - (self.energy0 + self.work))

    def row(self) -> tuple:
        v = self.velocity()
        return (self.t, *self.x, *v, self.tau, self.energy(), self.work, self.drift())


def _force(probe: EmProbe | AcProbe, medium, value: NDArray, x: NDArray, t: float, p: NDArray, energy: float) -> tuple[float, NDArray]:
    c = medium.c
    if isinstance(probe, EmProbe):
        gamma = energy / (probe.mass * c * c)
        u = (gamma * c, *(p / probe.mass))
        moved = replace(probe, position=(c * t, *x), velocity=tuple(float(a) for a in u))
        return em_lorentz_force(value, moved, medium)
    return ac_force(value, probe, medium)


def integrate_probe(state: ProbeState, evaluator: Evaluator, dt: float, medium: EmMedium | AcMedium) -> ProbeState:
    """One classical RK4 step of ``dp/dt = F``, ``dx/dt = v`` in lab time.

    ``evaluator(t, x)`` returns the 16 coefficients of the measured field
    (``psi_em`` or ``z_ac``) at time ``t`` and position ``x``.
    """
    c = state.c
    m = state.mass

    def rhs(t: float, y: NDArray) -> NDArray:
        x, p = y[0:3], y[3:6]
        E = math.sqrt((m * c * c) ** 2 + (p @ p) * c * c)
        v = p * c * c / E
        power, force = _force(state.probe, medium, np.asarray(evaluator(t, x), float), x, t, p, E)
        out = np.empty(8)
        out[0:3] = v
        out[3:6] = force
        out[6] = m * c * c / E
        out[7] = power
        return out

    y0 = np.concatenate([state.x, state.p, [state.tau, state.work]])
    t0 = state.t
    k1 = rhs(t0, y0)
    k2 = rhs(t0 + dt / 2, y0 + dt / 2 * k1)
    k3 = rhs(t0 + dt / 2, y0 + dt / 2 * k2)
    k4 = rhs(t0 + dt, y0 + dt * k3)
    y1 = y0 + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    if not np.all(np.isfinite(y1)):
        raise NumericAbort(f"probe state became non-finite at t = {t0 + dt:.6g}")
    new = ProbeState(state.probe, c, t0 + dt, y1[0:3].copy(), y1[3:6].copy(), float(y1[6]), float(y1[7]), state.energy0, list(state.history))
    speed = float(np.linalg.norm(new.velocity()))
    if speed >= c * (1.0 - 1e-15):
        raise NumericAbort(f"probe reached the limiting speed ({speed:.6g} >= {c:.6g}) at t = {new.t:.6g}")
    new.history.append(new.row())
    return new


def sample_periodic(data: NDArray, grid: Grid, x: ArrayLike) -> NDArray:
    """Trilinear interpolation of ``(Nx, Ny, Nz, 16)`` data at position ``x``."""
    rel = (np.asarray(x, float) - np.asarray(grid.origin)) / np.asarray(grid.spacing)
    base = np.floor(rel).astype(int)
    frac = rel - base
    out = np.zeros(16)
    for corner in range(8):
        offs = np.array([(corner >> 2) & 1, (corner >> 1) & 1, corner & 1])
        w = np.prod(np.where(offs == 1, frac, 1.0 - frac))
        if w == 0.0:
            continue
        idx = tuple((base + offs) % np.asarray(grid.dims))
        out += w * data[idx]
    return out


def _level_evaluator(levels: Sequence[tuple[float, NDArray]], grid: Grid) -> Evaluator:
    """Quadratic-in-time, trilinear-in-space evaluator through three levels."""
    times = [t for t, _ in levels]

    def evaluate(t: float, x: NDArray) -> NDArray:
        samples = [sample_periodic(d, grid, x) for _, d in levels]
        out = np.zeros(16)
        for i, (ti, si) in enumerate(zip(times, samples)):
            w = 1.0
            for j, tj in enumerate(times):
                if j != i:
                    w *= (t - tj) / (ti - tj)
            out += w * si
        return out

    return evaluate


# ---------------------------------------------------------------------------
# State
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Snapshot:
    t: float
    step: int
    potential: NDArray | None
    field: NDArray


@dataclass(frozen=True)
class ContinuityReport:
    """Energy bookkeeping at one instant.

    ``total = field_energy + probe_energy - work`` where ``probe_energy`` is
    the summed kinetic energy and ``work`` the summed power integral.
    ``drift`` is ``|total - total_0| / |total_0|`` against the first audit.
    """

    time: float
    step: int
    field_energy: float
    probe_energy: float
    work: float
    total: float
    boundary_flux: float
    drift: float
    probe_drift: float


@dataclass
class SimState:
    """Two time levels plus sources and probes.

    ``scheme == "wave"``: ``prev``/``curr`` are potentials at ``t -+ dt/2``.
    ``scheme == "dirac"``: they are measured fields at ``t - dt`` and ``t``.
    Sources are callables mapping ``(..., 4)`` points ``(ct, x, y, z)`` to
    16 coefficients: the combined current ``j`` for EM, ``psi_N`` for
    acoustics.
    """

    theory: str
    medium: EmMedium | AcMedium
    grid: Grid
    dt: float
    prev: NDArray
    curr: NDArray
    t: float = 0.0
    scheme: str = "wave"
    sources: list = field(default_factory=list)
    probes: list = field(default_factory=list)
    step_count: int = 0
    reference_total: float | None = None

    def __post_init__(self):
        if self.theory not in ("em", "acoustic"):
            raise ValueError("theory must be 'em' or 'acoustic'")
        if self.scheme not in ("wave", "dirac"):
            raise ValueError("scheme must be 'wave' or 'dirac'")
        if self.theory == "em" and not isinstance(self.medium, EmMedium):
            raise TypeError("an EM state needs an EmMedium")
        if self.theory == "acoustic" and not isinstance(self.medium, AcMedium):
            raise TypeError("an acoustic state needs an AcMedium")
        for name in ("prev", "curr"):
            arr = np.asarray(getattr(self, name), float)
            if arr.shape != self.grid.shape:
                raise ValueError(f"{name} must have shape {self.grid.shape}, got {arr.shape}")
            setattr(self, name, arr.copy())
        check_cfl(self.dt, self.grid, self.medium.c)
        allowed = self.state_grades
        for name in ("prev", "curr"):
            arr = getattr(self, name)
            scale = max(float(np.max(np.abs(arr))), 1e-300)
            if np.max(np.abs(arr * ~np.isin(GRADES, allowed))) > 1e-12 * scale:
                raise ValueError(f"{name} must only have grades {allowed}")

    # derived quantities ----------------------------------------------------
    @property
    def c(self) -> float:
        return self.medium.c

    @property
    def tau(self) -> float:
        return self.medium.c * self.dt

    @property
    def kappa(self) -> float:
        return self.medium.mu if self.theory == "em" else self.medium.rho

    @property
    def field_sign(self) -> float:
        return 1.0 if self.theory == "em" else -1.0

    @property
    def potential_grades(self) -> tuple[int, ...]:
        return _ODD if self.theory == "em" else _EVEN

    @property
    def field_grades(self) -> tuple[int, ...]:
        return _EVEN if self.theory == "em" else _ODD

    @property
    def state_grades(self) -> tuple[int, ...]:
        return self.potential_grades if self.scheme == "wave" else self.field_grades

    # constructors ----------------------------------------------------------
    @classmethod
    def zeros(cls, theory: str, medium, grid: Grid, dt: float, scheme: str = "wave", t0: float = 0.0) -> "SimState":
        z = np.zeros(grid.shape)
        return cls(theory, medium, grid, dt, z, z, t0, scheme)

    @classmethod
    def from_potential(
        cls,
        theory: str,
        medium,
        grid: Grid,
        dt: float,
        potential: AnalyticField,
        t0: float = 0.0,
        lattice_dispersion: bool = False,
    ) -> "SimState":
        """Wave-scheme state sampling ``potential`` at ``t0 -+ dt/2``.

        With ``lattice_dispersion`` the samples come from the discrete-mode
        version of ``potential`` (see :func:`lattice_dispersion_field`), which
        the leapfrog then propagates without phase error.
        """
        check_cfl(dt, grid, medium.c)
        c = medium.c
        src = lattice_dispersion_field(potential, grid, c * dt) if lattice_dispersion else potential
        prev = src.evaluate(grid.points(c * (t0 - dt / 2)))
        curr = src.evaluate(grid.points(c * (t0 + dt / 2)))
        return cls(theory, medium, grid, dt, prev, curr, t0, "wave")

    @classmethod
    def from_field(cls, theory: str, medium, grid: Grid, dt: float, measured: AnalyticField, t0: float = 0.0) -> "SimState":
        """Dirac-scheme state sampling the measured field at ``t0 - dt`` and ``t0``."""
        check_cfl(dt, grid, medium.c)
        c = medium.c
        prev = measured.evaluate(grid.points(c * (t0 - dt)))
        curr = measured.evaluate(grid.points(c * t0))
        return cls(theory, medium, grid, dt, prev, curr, t0, "dirac")

    def add_probe(self, probe: EmProbe | AcProbe) -> ProbeState:
        if self.theory == "em" and not isinstance(probe, EmProbe):
            raise TypeError("EM simulations take EmProbe instances")
        if self.theory == "acoustic" and not isinstance(probe, AcProbe):
            raise TypeError("acoustic simulations take AcProbe instances")
        st = ProbeState.from_probe(probe, self.c)
        if abs(st.t - self.t) > 1e-12 * max(1.0, abs(self.t)):
            raise ValueError("probe time must match the state time")
        self.probes.append(st)
        return st

    # observables -----------------------------------------------------------
    def measured_field(self) -> NDArray:
        if self.scheme == "dirac":
            return self.curr.copy()
        return self.field_sign * _grad_half(self.prev, self.curr, self.tau, self.grid.spacing)

    def potential(self) -> NDArray | None:
        if self.scheme == "dirac":
            return None
        return 0.5 * (self.prev + self.curr)

    def field_energy(self) -> float:
        if self.scheme == "dirac":
            return float(np.sum(self.curr * self.curr)) * self.grid.cell_volume / (2.0 * self.kappa)
        return _discrete_energy(self.prev, self.curr, self.grid, self.tau, self.kappa)

    def snapshot(self) -> Snapshot:
        pot = self.potential()
        fld = self.measured_field()
        if pot is not None:
            pot.setflags(write=False)
        fld.setflags(write=False)
        return Snapshot(self.t, self.step_count, pot, fld)

    def copy(self) -> "SimState":
        new = copy.copy(self)
        new.prev = self.prev.copy()
        new.curr = self.curr.copy()
        new.sources = list(self.sources)
        new.probes = [replace(p, history=list(p.history), x=p.x.copy(), p=p.p.copy()) for p in self.probes]
        return new

    def source_values(self, ct: float) -> NDArray | None:
        if not self.sources:
            return None
        pts = self.grid.points(ct)
        total = np.zeros(self.grid.shape)
        for s in self.sources:
            total += np.asarray(s(pts), float)
        return total


def _discrete_energy(prev: NDArray, curr: NDArray, grid: Grid, tau: float, kappa: float) -> float:
    h = grid.spacing
    d = (curr - prev) / tau
    kinetic = float(np.sum(d * d))
    gradient = -float(np.sum(curr * _laplacian(prev, h)))
    cross = 2.0 / tau * float(np.sum(curr * _g0(_spatial_dirac(prev, h))))
    return grid.cell_volume / (2.0 * kappa) * (kinetic + gradient + cross)


def _advance_probes(state: SimState, levels: Sequence[tuple[float, NDArray]]) -> None:
    if not state.probes:
        return
    ev = _level_evaluator(levels, state.grid)
    state.probes = [integrate_probe(p, ev, state.dt, state.medium) for p in state.probes]


def step_wave(state: SimState) -> SimState:
    """Advance the potentials one leapfrog step (in place) and return the state."""
    if state.scheme != "wave":
        raise ValueError("step_wave needs a wave-scheme state")
    check_cfl(state.dt, state.grid, state.c)
    tau, h = state.tau, state.grid.spacing
    prev, curr = state.prev, state.curr
    rhs = _laplacian(curr, h)
    src = state.source_values(state.c * (state.t + state.dt / 2))
    if src is not None:
        rhs = rhs + (state.medium.mu * src if state.theory == "em" else src)
    nxt = 2.0 * curr - prev + tau * tau * rhs
    if not np.all(np.isfinite(nxt)):
        raise NumericAbort(f"non-finite potential after step {state.step_count + 1}")
    if state.probes:
        sgn = state.field_sign
        levels = [
            (state.t, sgn * _grad_half(prev, curr, tau, h)),
            (state.t + state.dt / 2, sgn * _grad_mid(prev, curr, nxt, tau, h)),
            (state.t + state.dt, sgn * _grad_half(curr, nxt, tau, h)),
        ]
        _advance_probes(state, levels)
    state.prev, state.curr = curr, nxt
    state.t += state.dt
    state.step_count += 1
    return state


def step_dirac(state: SimState) -> SimState:
    """Advance the measured field one leapfrog step of the first-order equation."""
    if state.scheme != "dirac":
        raise ValueError("step_dirac needs a dirac-scheme state")
    check_cfl(state.dt, state.grid, state.c)
    tau, h = state.tau, state.grid.spacing
    prev, curr = state.prev, state.curr
    drive = -_spatial_dirac(curr, h)
    src = state.source_values(state.c * state.t)
    if src is not None:
        drive = drive + (state.medium.mu * src if state.theory == "em" else -src)
    nxt = prev + 2.0 * tau * _g0(drive)
    if not np.all(np.isfinite(nxt)):
        raise NumericAbort(f"non-finite field after step {state.step_count + 1}")
    if state.probes:
        levels = [(state.t, curr), (state.t + state.dt / 2, 0.5 * (curr + nxt)), (state.t + state.dt, nxt)]
        _advance_probes(state, levels)
    state.prev, state.curr = curr, nxt
    state.t += state.dt
    state.step_count += 1
    return state


def time_reversed(state: SimState) -> SimState:
    """Copy of ``state`` that runs backward in time with the same stepper."""
    new = state.copy()
    new.prev, new.curr = state.curr.copy(), state.prev.copy()
    new.dt = -state.dt
    if state.scheme == "dirac":
        new.t = state.t - state.dt
    return new


def continuity_audit(state: SimState) -> ContinuityReport:
    fe = state.field_energy()
    pe = sum(p.kinetic() for p in state.probes)
    work = sum(p.work for p in state.probes)
    total = fe + pe - work
    if state.reference_total is None:
        state.reference_total = total
    ref = state.reference_total
    drift = abs(total - ref) / abs(ref) if ref != 0.0 else abs(total - ref)
    pdrift = max((p.drift() for p in state.probes), default=0.0)
    return ContinuityReport(state.t, state.step_count, fe, pe, work, total, 0.0, drift, pdrift)


def run(
    state: SimState,
    steps: int,
    audit_every: int = 1,
    snapshot_every: int = 0,
    on_snapshot: Callable[[Snapshot], None] | None = None,
) -> list[ContinuityReport]:
    """Step ``state`` ``steps`` times, auditing and snapshotting on a cadence.

    The initial state is always audited and (if snapshots are requested)
    snapshotted, so a zero-step run yields exactly one of each.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    stepper = step_wave if state.scheme == "wave" else step_dirac
    reports = [continuity_audit(state)]
    if on_snapshot is not None:
        on_snapshot(state.snapshot())
    for n in range(1, steps + 1):
        stepper(state)
        if audit_every and n % audit_every == 0:
            reports.append(continuity_audit(state))
        if on_snapshot is not None and snapshot_every and n % snapshot_every == 0:
            on_snapshot(state.snapshot())
    return reports


# ---------------------------------------------------------------------------
# Initial data and sources
# ---------------------------------------------------------------------------


def lattice_dispersion_field(f: AnalyticField, grid: Grid, tau: float) -> AnalyticField:
    """Replace each term's temporal wave number by the leapfrog one.

    A phase term ``A exp(I (k0 x^0 + k.x))`` with constant ``A`` solves the
    discrete equation exactly when
    ``(2/tau)^2 sin^2(K0 tau / 2) = sum_j (2/h_j)^2 sin^2(k_j h_j / 2)``.
    The returned field uses ``K0`` (same sign as ``k0``) in place of ``k0``.
    Terms with polynomial dependence are rejected.
    """
    h = grid.spacing
    terms = []
    for t in f.terms:
        if any(m != (0, 0, 0, 0) for m in t.poly):
            raise ValueError("lattice dispersion applies to constant-amplitude phase terms only")
        k0 = t.kcov[0]
        if k0 == 0.0:
            terms.append(t)
            continue
        rhs = sum((2.0 / hj) ** 2 * math.sin(kj * hj / 2.0) ** 2 for kj, hj in zip(t.kcov[1:], h))
        arg = abs(tau) / 2.0 * math.sqrt(rhs)
        if arg > 1.0:
            raise CFLViolation("wave is outside the leapfrog stability region")
        K0 = math.copysign(2.0 / abs(tau) * math.asin(arg), k0)
        terms.append(Term(t.poly, (K0, *t.kcov[1:]), t.phi0))
    return AnalyticField(terms)


def gaussian_source(coeffs: ArrayLike, center: Sequence[float], width: float, omega: float, c: float, phase: float = 0.0) -> Source:
    """``coeffs * exp(-|x - x0|^2 / (2 w^2)) * sin(omega t + phase)`` as a closure."""
    coeffs = np.asarray(coeffs, float)
    if coeffs.shape != (16,):
        raise ValueError("source coefficients need 16 entries")
    if not width > 0:
        raise ValueError("source width must be positive")
    x0 = np.asarray(center, float)

    def source(points: NDArray) -> NDArray:
        r2 = np.sum((points[..., 1:] - x0) ** 2, axis=-1)
        t = points[..., 0] / c
        env = np.exp(-r2 / (2.0 * width * width)) * np.sin(omega * t + phase)
        return env[..., None] * coeffs

    return source


def write_snapshot(path, snap: Snapshot, grid: Grid, dt: float, c: float, which: str = "field", metadata: dict | None = None) -> None:
    """Write one snapshot (``which`` = ``"field"`` or ``"potential"``) as lattice CSV."""
    data = snap.field if which == "field" else snap.potential
    if data is None:
        raise ValueError(f"snapshot carries no {which}")
    meta = {"t": snap.t, "step": snap.step, "which": which, "origin": list(grid.origin)}
    if metadata:
        meta.update(metadata)
    write_field_csv(path, np.asarray(data)[None], (c * abs(dt), *grid.spacing), meta)
