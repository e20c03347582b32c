"""Independent reference implementations used to freeze expected values.

Nothing here imports the package.  The algebra oracle is the Dirac matrix
representation, the kinematic oracles are closed-form trajectories, and the
lattice oracle evaluates plane waves through the discrete symbols of the
leapfrog stencils.
"""

from __future__ import annotations

import math

import numpy as np

# ---------------------------------------------------------------------------
# Dirac representation of Cl(1,3)
# ---------------------------------------------------------------------------

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
_Z = np.zeros((2, 2), dtype=complex)
_ONE = np.eye(2, dtype=complex)

GAMMA = (np.block([[_ONE, _Z], [_Z, -_ONE]]),) + tuple(np.block([[_Z, s], [-s, _Z]]) for s in _PAULI)
PSEUDO = GAMMA[0] @ GAMMA[1] @ GAMMA[2] @ GAMMA[3]

# blade order: 1, g0..g3, g01 g02 g03 g12 g13 g23, I g0..I g3, I
WORDS = ((), (0,), (1,), (2,), (3,), (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def _word(word) -> np.ndarray:
    m = np.eye(4, dtype=complex)
    for mu in word:
        m = m @ GAMMA[mu]
    return m


BASIS = [_word(w) for w in WORDS] + [PSEUDO @ GAMMA[k] for k in range(4)] + [PSEUDO]
_INVERSES = [np.linalg.inv(b) for b in BASIS]


def to_matrix(coeffs) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=float)
    return sum(c * b for c, b in zip(coeffs, BASIS))


def from_matrix(m: np.ndarray) -> np.ndarray:
    """Coefficients via ``tr(B_k^-1 m) / 4``."""
    return np.array([np.trace(inv @ m).real / 4.0 for inv in _INVERSES])


def product(a, b) -> np.ndarray:
    return from_matrix(to_matrix(a) @ to_matrix(b))


def blade_product(i: int, j: int) -> tuple[int, float]:
    """``e_i e_j = sign * e_k`` read off the matrix product."""
    out = from_matrix(BASIS[i] @ BASIS[j])
    k = int(np.argmax(np.abs(out)))
    return k, float(out[k])


def reverse(a) -> np.ndarray:
    sign = np.array([1, 1, 1, 1, 1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, 1], dtype=float)
    return np.asarray(a, dtype=float) * sign


def right_phase(a, theta: float) -> np.ndarray:
    """``a (cos theta + I sin theta)`` through the matrices."""
    return from_matrix(to_matrix(a) @ (math.cos(theta) * np.eye(4) + math.sin(theta) * PSEUDO))


# ---------------------------------------------------------------------------
# Lorentz boosts
# ---------------------------------------------------------------------------


def boost_matrix(rapidity: float, axis: int = 1) -> np.ndarray:
    """4x4 active boost along spatial ``axis`` acting on ``(ct, x, y, z)``."""
    L = np.eye(4)
    ch, sh = math.cosh(rapidity), math.sinh(rapidity)
    L[0, 0] = L[axis, axis] = ch
    L[0, axis] = L[axis, 0] = sh
    return L


# ---------------------------------------------------------------------------
# Charged-particle trajectories
# ---------------------------------------------------------------------------


def constant_field_trajectory(q: float, E: float, m: float, c: float, v_perp: float, t: float) -> tuple[float, float]:
    """Exact ``(x, y)`` for a charge in a uniform field ``E x_hat``.

    The particle starts at the origin with velocity ``v_perp y_hat``.  For
    small ``v_perp`` and ``q E t / m c`` this reduces to the parabola
    ``x = q E t^2 / 2 m``, ``y = v_perp t``.
    """
    p_y = m * v_perp / math.sqrt(1.0 - (v_perp / c) ** 2)
    e0 = math.sqrt((m * c * c) ** 2 + (p_y * c) ** 2)
    et = math.sqrt(e0 * e0 + (c * q * E * t) ** 2)
    x = (et - e0) / (q * E)
    y = p_y * c / (q * E) * math.asinh(c * q * E * t / e0)
    return x, y


def larmor_orbit(q: float, B: float, m: float, c: float, v0: float, t: float) -> tuple[float, float]:
    """Exact ``(x, y)`` in a uniform ``B z_hat`` for a start at the origin moving along x."""
    gamma = 1.0 / math.sqrt(1.0 - (v0 / c) ** 2)
    omega = q * B / (gamma * m)
    return v0 / omega * math.sin(omega * t), v0 / omega * (math.cos(omega * t) - 1.0)


# ---------------------------------------------------------------------------
# Cycle averages
# ---------------------------------------------------------------------------


def cycle_average_spin(v_samples: np.ndarray, omega: float, rho: float) -> np.ndarray:
    """Time average of ``x cross (rho v) / 2`` over one period.

    ``v_samples`` holds ``n`` equally spaced velocity samples over a period
    (axis 0).  The zero-mean displacement ``x`` is the spectral integral of
    ``v``, which is exact for band-limited signals.
    """
    v = np.asarray(v_samples, dtype=float)
    n = v.shape[0]
    vhat = np.fft.fft(v, axis=0)
    harmonics = np.fft.fftfreq(n, d=1.0 / n)
    with np.errstate(divide="ignore", invalid="ignore"):
        factor = np.where(harmonics == 0, 0.0, 1.0 / (1j * harmonics * omega))
    x = np.fft.ifft(vhat * factor[:, None], axis=0).real
    return np.mean(0.5 * np.cross(x, rho * v), axis=0)


# ---------------------------------------------------------------------------
# Arrival times
# ---------------------------------------------------------------------------


def arrival_speed(radii: np.ndarray, times: np.ndarray, signals: np.ndarray, fraction: float = 0.2) -> float:
    """Front speed from threshold crossings of ``r * signal``.

    ``signals[i, j]`` is the field at time ``times[i]`` and radius
    ``radii[j]``.  A monopole field obeys ``r P = f(t - r / c)``, so the
    crossing times of a common threshold grow linearly in ``r`` with slope
    ``1 / c``.  Crossings are linearly interpolated between samples.
    """
    scaled = np.abs(signals * radii[None, :])
    level = fraction * scaled.max()
    arrivals = []
    for j in range(len(radii)):
        s = scaled[:, j]
        i = int(np.argmax(s > level))
        if i == 0:
            raise ValueError(f"no threshold crossing resolved at radius {radii[j]}")
        frac = (level - s[i - 1]) / (s[i] - s[i - 1])
        arrivals.append(times[i - 1] + frac * (times[i] - times[i - 1]))
    slope = np.polyfit(radii, np.asarray(arrivals), 1)[0]
    return 1.0 / slope


# ---------------------------------------------------------------------------
# Leapfrog plane wave on a periodic lattice
# ---------------------------------------------------------------------------


def leapfrog_plane_wave(amplitude, kcov, phi0: float, h, c: float, dt: float, t: float, points: np.ndarray):
    """Potential average and stencil field of a dispersion-matched plane wave.

    The wave ``A exp(I theta)`` with ``theta = K0 ct + k_j x^j + phi0`` is an
    exact solution of the second-order leapfrog when ``K0`` satisfies the
    discrete dispersion relation.  Returns ``(potential, field)`` where the
    potential is the mean of the levels at ``t -+ dt/2`` and the field is
    ``g^0 (difference / c dt) + sum_j g^j (central difference of the mean)``.
    Both follow from the discrete symbols of the stencils.
    """
    tau = c * dt
    k0 = kcov[0]
    rhs = sum((2.0 / hj) ** 2 * math.sin(kj * hj / 2.0) ** 2 for kj, hj in zip(kcov[1:], h))
    K0 = math.copysign(2.0 / tau * math.asin(tau / 2.0 * math.sqrt(rhs)), k0)
    kappa = [2.0 / tau * math.sin(K0 * tau / 2.0)] + [
        math.sin(kj * hj) / hj * math.cos(K0 * tau / 2.0) for kj, hj in zip(kcov[1:], h)
    ]
    avg_factor = math.cos(K0 * tau / 2.0)
    metric = (1.0, -1.0, -1.0, -1.0)
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    pot = np.empty((len(pts), 16))
    fld = np.empty((len(pts), 16))
    A = to_matrix(amplitude)
    for n, x in enumerate(pts):
        theta = K0 * c * t + float(np.dot(kcov[1:], x)) + phi0
        phase = math.cos(theta) * np.eye(4) + math.sin(theta) * PSEUDO
        z = A @ phase
        pot[n] = from_matrix(z) * avg_factor
        dz = z @ PSEUDO  # derivative of the phase, before the symbol factor
        g = sum(metric[mu] * kappa[mu] * GAMMA[mu] for mu in range(4))
        fld[n] = from_matrix(g @ dz)
    return pot, fld
