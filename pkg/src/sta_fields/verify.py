"""Invariant suites behind ``sta-fields verify``.

Each check computes a residual and compares it with a tolerance.  Checks are
grouped into the suites ``algebra``, ``polar``, ``lattice``, ``em`` and
``acoustic``; :func:`run_suite` runs one of them (or ``"all"``) and
:func:`report` turns the results into a JSON-ready dict.

Every check draws its random inputs from its own fixed seed, so reports are
reproducible.  For harness self-tests a named check can be sabotaged with a
seeded perturbation of its residual (``fault=`` in :func:`run_suite`).
"""

from __future__ import annotations

import math
import tempfile
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import parallel
from .acoustic import (
    AcMedium,
    AcPotentialSpinor,
    AcProbe,
    ac_3d_components,
    ac_displacements,
    ac_energy_momentum,
    ac_field_from_3d,
    ac_fields_3d,
    ac_force,
    ac_gauge_transform,
    ac_lagrangians,
    ac_plane_wave,
    ac_residual,
    ac_spin_cycle_avg,
    ac_spin_density,
    ac_spin_scalar_theory,
)
from .algebra import (
    BLADE_NAMES,
    G0,
    I,
    SIGMA1,
    SIGMA2,
    SIGMA3,
    Frame,
    Multivector,
    cross3,
    dual_array,
    frame_join,
    frame_split,
    gp,
    grade_array,
    inner_array,
    outer_array,
    parse_multivector,
    rev,
    rotor_exp,
    sandwich,
    vector,
)
from .analytic import AnalyticField
from .em import (
    EmMedium,
    EmPotential,
    EmProbe,
    em_energy_momentum,
    em_fields_3d,
    em_gauge_transform,
    em_lagrangians,
    em_lorentz_force,
    em_plane_wave,
    em_spin_density,
    em_spin_density_electric,
    em_spinor_from_3d,
    em_stress_tensor,
    envelope_from_samples,
    maxwell_3d_components,
    maxwell_residual,
)
from .lattice import LatticeSpec, MultivectorField, bianchi_residuals, dalembertian, read_field_csv, write_field_csv
from .polar import ComplexScalar, bivector_polar, scalar_polar, vector_polar

__all__ = ["SUITES", "CheckResult", "run_suite", "report", "check_names"]

SUITES = ("algebra", "polar", "lattice", "em", "acoustic")


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    residual: float
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)


_Check = tuple[str, float, Callable[[], float]]
_REGISTRY: dict[str, list[_Check]] = {s: [] for s in SUITES}


def _check(suite: str, name: str, tol: float):
    def deco(fn: Callable[[], float]) -> Callable[[], float]:
        _REGISTRY[suite].append((name, tol, fn))
        return fn

    return deco


def check_names(suite: str = "all") -> list[str]:
    return [f"{s}.{name}" for s in _suites(suite) for name, _, _ in _REGISTRY[s]]


def _suites(suite: str) -> tuple[str, ...]:
    if suite == "all":
        return SUITES
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)} or all")
    return (suite,)


def run_suite(suite: str = "all", fault: str | None = None, fault_seed: int = 0) -> list[CheckResult]:
    """Run ``suite`` and return one :class:`CheckResult` per check.

    ``fault`` names a check (``"suite.name"`` or bare ``"name"``) whose
    residual is inflated by a seeded amount of 10 to 100 tolerances.
    """
    if fault is not None and fault not in check_names("all") and not any(
        fault == n.split(".", 1)[1] for n in check_names("all")
    ):
        raise ValueError(f"unknown check {fault!r} for fault injection")
    out = []
    for s in _suites(suite):
        for name, tol, fn in _REGISTRY[s]:
            residual = float(fn())
            if fault in (name, f"{s}.{name}"):
                bump = 10.0 + 90.0 * np.random.default_rng(fault_seed).uniform()
                residual = abs(residual) + bump * max(tol, 1e-300)
            passed = bool(np.isfinite(residual) and residual <= tol)
            out.append(CheckResult(s, name, residual, tol, passed))
    return out


def report(results: list[CheckResult], suite: str) -> dict:
    failed = [r for r in results if not r.passed]
    return {
        "suite": suite,
        "count": len(results),
        "failed": len(failed),
        "passed": not failed,
        "checks": [r.to_dict() for r in results],
    }


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _rel(a, b) -> float:
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    scale = max(float(np.max(np.abs(b))) if b.size else 0.0, float(np.max(np.abs(a))) if a.size else 0.0, 1e-300)
    return float(np.max(np.abs(a - b))) / scale if a.size else 0.0


def _maxabs(a) -> float:
    a = np.asarray(a, float)
    return float(np.max(np.abs(a))) if a.size else 0.0


def _points(seed: int, n: int = 100, scale: float = 1.0) -> np.ndarray:
    return _rng(seed).uniform(-scale, scale, size=(n, 4))


def _random_mv(rng: np.random.Generator, n: int, grades=None) -> np.ndarray:
    x = rng.normal(size=(n, 16))
    if grades is not None:
        x = grade_array(x, grades)
    return x


def _random_poly(rng: np.random.Generator, grades, degree: int = 2) -> AnalyticField:
    poly = {}
    for a in range(degree + 1):
        for b in range(degree + 1 - a):
            for c in range(degree + 1 - a - b):
                for d in range(degree + 1 - a - b - c):
                    poly[(a, b, c, d)] = grade_array(rng.normal(size=16), grades)
    return AnalyticField.polynomial(poly)


# Dirac representation: an independent matrix model of the algebra.
_S = [np.array([[0, 1], [1, 0]], complex), np.array([[0, -1j], [1j, 0]]), np.array([[1, 0], [0, -1]], complex)]
_Z2 = np.zeros((2, 2), complex)
_E2 = np.eye(2, dtype=complex)
_DIRAC = [np.block([[_E2, _Z2], [_Z2, -_E2]])] + [np.block([[_Z2, s], [-s, _Z2]]) for s in _S]


def _dirac_blade(name: str) -> np.ndarray:
    g = _DIRAC
    pseudo = g[0] @ g[1] @ g[2] @ g[3]
    if name == "1":
        return np.eye(4, dtype=complex)
    if name == "I":
        return pseudo
    if name.startswith("I"):
        return pseudo @ g[int(name[2])]
    out = np.eye(4, dtype=complex)
    for ch in name[1:]:
        out = out @ g[int(ch)]
    return out


def _dirac_coeffs(m: np.ndarray, basis: list[np.ndarray]) -> np.ndarray:
    # tr(B_k^{-1} B_j) = 4 delta_jk for the 16 blades
    return np.array([np.trace(np.linalg.inv(b) @ m).real / 4.0 for b in basis])


# ---------------------------------------------------------------------------
# algebra
# ---------------------------------------------------------------------------


@_check("algebra", "cayley_matches_dirac_matrices", 0.0)
def _cayley() -> float:
    basis = [_dirac_blade(n) for n in BLADE_NAMES]
    eye = np.eye(16)
    worst = 0.0
    for a in range(16):
        for b in range(16):
            expect = _dirac_coeffs(basis[a] @ basis[b], basis)
            worst = max(worst, _maxabs(gp(eye[a], eye[b]) - np.round(expect)))
    return worst


@_check("algebra", "associativity", 1e-10)
def _assoc() -> float:
    rng = _rng(11)
    a, b, c = (_random_mv(rng, 2000) for _ in range(3))
    return _rel(gp(gp(a, b), c), gp(a, gp(b, c)))


@_check("algebra", "reverse_anti_automorphism", 1e-10)
def _reverse() -> float:
    rng = _rng(12)
    a, b = _random_mv(rng, 2000), _random_mv(rng, 2000)
    return _rel(rev(gp(a, b)), gp(rev(b), rev(a)))


@_check("algebra", "pseudoscalar_squares_to_minus_one", 0.0)
def _pseudo() -> float:
    return _maxabs((I * I + 1.0).coeffs)


@_check("algebra", "pseudoscalar_anticommutes_with_odd", 1e-12)
def _pseudo_odd() -> float:
    rng = _rng(13)
    a = _random_mv(rng, 500, (1, 3))
    return _rel(gp(I.coeffs, a), -gp(a, I.coeffs))


@_check("algebra", "double_dual_is_negation", 1e-12)
def _double_dual() -> float:
    a = _random_mv(_rng(14), 500)
    return _rel(dual_array(dual_array(a)), -a)


@_check("algebra", "grade_projections_sum_to_identity", 1e-14)
def _grade_sum() -> float:
    a = _random_mv(_rng(15), 500)
    return _rel(sum(grade_array(a, k) for k in range(5)), a)


@_check("algebra", "vector_product_is_inner_plus_outer", 1e-12)
def _inner_outer() -> float:
    rng = _rng(16)
    a, b = _random_mv(rng, 500, 1), _random_mv(rng, 500, 1)
    return _rel(inner_array(a, b) + outer_array(a, b), gp(a, b))


@_check("algebra", "boost_energy_dilation", 1e-12)
def _boost() -> float:
    alpha = math.atanh(0.6)
    R = rotor_exp(SIGMA1, alpha)
    p = sandwich(R, G0)
    L = np.array(
        [
            [math.cosh(alpha), math.sinh(alpha), 0, 0],
            [math.sinh(alpha), math.cosh(alpha), 0, 0],
            [0, 0, 1, 0],
            [0, 0, 0, 1],
        ]
    )
    expect = L @ np.array([1.0, 0.0, 0.0, 0.0])
    comps = Frame().vector_components(p.coeffs)
    return max(abs(comps[0] - 1.25), abs(abs(comps[1]) - 0.75), _maxabs(np.abs(comps) - np.abs(expect)))


@_check("algebra", "rotor_preserves_interval", 1e-12)
def _rotor_metric() -> float:
    rng = _rng(17)
    worst = 0.0
    planes = [SIGMA1, SIGMA2, SIGMA3, I * SIGMA1, I * SIGMA2, I * SIGMA3]
    for plane in planes:
        R = rotor_exp(plane, float(rng.normal()))
        a = vector(rng.normal(size=4))
        b = sandwich(R, a)
        worst = max(worst, abs((b * b).scalar - (a * a).scalar) / max(1.0, a.norm() ** 2), _maxabs(b.grade((0, 2, 3, 4)).coeffs))
    return worst


@_check("algebra", "frame_split_round_trip", 1e-12)
def _split() -> float:
    rng = _rng(18)
    worst = 0.0
    for beta in ([0.0, 0.0, 0.0], [0.3, -0.2, 0.4]):
        f = Frame.from_velocity(beta)
        a = vector(rng.normal(size=4))
        s, v = frame_split(a, f)
        worst = max(worst, _rel(frame_join(s, v, f).coeffs, a.coeffs))
    return worst


@_check("algebra", "cross_product_of_sigmas", 1e-15)
def _cross() -> float:
    return max(
        _maxabs((cross3(SIGMA1, SIGMA2) - SIGMA3).coeffs),
        _maxabs((cross3(SIGMA2, SIGMA3) - SIGMA1).coeffs),
        _maxabs((cross3(SIGMA3, SIGMA1) - SIGMA2).coeffs),
    )


@_check("algebra", "text_round_trip", 0.0)
def _text() -> float:
    a = Multivector(_random_mv(_rng(19), 1)[0])
    return _maxabs((parse_multivector(a.to_text()) - a).coeffs)


# ---------------------------------------------------------------------------
# polar
# ---------------------------------------------------------------------------


@_check("polar", "scalar_reconstruction", 1e-12)
def _p_scalar() -> float:
    rng = _rng(21)
    worst = 0.0
    for _ in range(200):
        z = ComplexScalar(*rng.normal(size=2))
        pf = scalar_polar(z)
        worst = max(worst, _rel(pf.reconstruct(half_angle=False).coeffs, z.to_multivector().coeffs))
    return worst


@_check("polar", "vector_reconstruction", 1e-12)
def _p_vector() -> float:
    rng = _rng(22)
    worst = 0.0
    for _ in range(200):
        z = Multivector(_random_mv(rng, 1, (1, 3))[0])
        worst = max(worst, _rel(vector_polar(z).reconstruct().coeffs, z.coeffs))
    return worst


@_check("polar", "bivector_reconstruction", 1e-12)
def _p_bivector() -> float:
    rng = _rng(23)
    worst = 0.0
    for _ in range(200):
        F = Multivector(_random_mv(rng, 1, 2)[0])
        worst = max(worst, _rel(bivector_polar(F).reconstruct().coeffs, F.coeffs))
    return worst


@_check("polar", "canonical_square_is_real", 1e-12)
def _p_canonical() -> float:
    rng = _rng(24)
    worst = 0.0
    for _ in range(200):
        F = Multivector(_random_mv(rng, 1, 2)[0])
        can = bivector_polar(F).canonical
        sq = can * can
        worst = max(worst, abs(sq.pseudoscalar) / F.norm() ** 2, max(0.0, -sq.scalar) / F.norm() ** 2)
    return worst


@_check("polar", "null_field_detected", 0.0)
def _p_null() -> float:
    F = SIGMA1 + I * SIGMA2
    pf = bivector_polar(F)
    return 0.0 if (pf.is_null and pf.phase == 0.0) else 1.0


@_check("polar", "phase_in_principal_range", 0.0)
def _p_range() -> float:
    rng = _rng(25)
    bad = 0
    for _ in range(200):
        pf = bivector_polar(Multivector(_random_mv(rng, 1, 2)[0]))
        bad += not (-math.pi < pf.phase <= math.pi)
    return float(bad)


# ---------------------------------------------------------------------------
# lattice
# ---------------------------------------------------------------------------

_SPEC8 = LatticeSpec((8, 8, 8, 8), (0.3, 0.25, 0.2, 0.35))


def _bianchi(grade: int, which: int) -> float:
    f = MultivectorField.random(_SPEC8, _rng(30 + grade), grade)
    return bianchi_residuals(f)[which] / f.norm_max()


for _g in range(5):
    _check("lattice", f"curl_curl_grade{_g}", 1e-10)(lambda g=_g: _bianchi(g, 0))
    _check("lattice", f"div_div_grade{_g}", 1e-10)(lambda g=_g: _bianchi(g, 1))


def _plane_wave_derivative_error(n: int) -> float:
    spec = LatticeSpec((4, 4, 4, n), (0.25, 0.25, 0.25, 1.0 / n))
    amp = SIGMA1 + 0.5 * G0
    f = AnalyticField.plane_wave(amp, (0.0, 0.0, 0.0, 2.0 * math.pi), 0.3)
    num = MultivectorField.from_analytic(f, spec).vector_derivative()
    exact = MultivectorField.from_analytic(f.vector_derivative(), spec)
    return (num - exact).norm_max() / exact.norm_max()


@_check("lattice", "vector_derivative_second_order", 0.1)
def _order() -> float:
    e1, e2 = _plane_wave_derivative_error(16), _plane_wave_derivative_error(32)
    return abs(math.log2(e1 / e2) - 2.0)


@_check("lattice", "dalembertian_matches_discrete_symbol", 1e-12)
def _box_symbol() -> float:
    spec = LatticeSpec((8, 8, 8, 8), (0.5, 0.25, 0.25, 0.5))
    k = spec.wave_numbers((1, 2, 0, 3))
    kcov = (k[0], -k[1], -k[2], -k[3])
    f = MultivectorField.from_analytic(AnalyticField.plane_wave(SIGMA2, kcov), spec)
    sym = [(2.0 / h) ** 2 * math.sin(kk * h / 2.0) ** 2 for kk, h in zip(k, spec.spacing)]
    factor = -sym[0] + sym[1] + sym[2] + sym[3]
    return (dalembertian(f) - f * factor).norm_max() / (abs(factor) * f.norm_max())


@_check("lattice", "csv_round_trip_exact", 0.0)
def _csv() -> float:
    f = MultivectorField.random(LatticeSpec((4, 4, 4, 4), (0.1, 0.2, 0.3, 0.4)), _rng(36))
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "f.csv"
        write_field_csv(path, f.data, f.spec.spacing, {"note": "round trip"})
        back, meta = read_field_csv(path)
    return _maxabs(back - f.data) + _maxabs(np.asarray(meta["spacing"]) - np.asarray(f.spec.spacing))


@_check("lattice", "thread_count_bit_identical", 0.0)
def _threads() -> float:
    spec = LatticeSpec((8, 4, 4, 4), (0.1, 0.2, 0.3, 0.4))
    a = MultivectorField.random(spec, _rng(37))
    b = MultivectorField.random(spec, _rng(38))
    old = parallel._threads
    try:
        parallel.set_threads(1)
        one = (a * b).data
        parallel.set_threads(3)
        three = (a * b).data
    finally:
        parallel.set_threads(old)
    return _maxabs(one - three)


# ---------------------------------------------------------------------------
# em
# ---------------------------------------------------------------------------

_EM = EmMedium.from_c_zeta(2.0, 3.0)


def _em_wave(**kw):
    base = dict(k_hat=(0.0, 0.0, 1.0), omega=3.0, sign=1, a_e0=vector([0, 1, 0, 0]), a_m0=vector([0, 0, 0, 0]), phi0=0.0)
    base.update(kw)
    return em_plane_wave(_EM, base["k_hat"], base["omega"], base["sign"], base["a_e0"], base["a_m0"], base["phi0"])


def _wave_residual(wave) -> float:
    pts = _points(40)
    res = maxwell_residual(wave.psi, None, _EM).evaluate(pts)
    scale = (wave.omega / _EM.c) * _maxabs(wave.psi.evaluate(pts))
    return _maxabs(res) / scale


@_check("em", "circular_wave_residual", 1e-12)
def _em_w1() -> float:
    return _wave_residual(_em_wave())


@_check("em", "counter_propagating_wave_residual", 1e-12)
def _em_w2() -> float:
    k = np.array([1.0, 2.0, -2.0]) / 3.0
    return _wave_residual(_em_wave(k_hat=k, sign=-1, a_e0=vector([0, 2, -1, 0]), a_m0=vector([0, 0, 0, 0]), phi0=0.4))


@_check("em", "dual_potential_wave_residual", 1e-12)
def _em_w3() -> float:
    return _wave_residual(_em_wave(a_e0=vector([0, 1, 0, 0]), a_m0=vector([0, 0, 1, 0])))


@_check("em", "longitudinal_power_field_wave_residual", 1e-12)
def _em_w4() -> float:
    return _wave_residual(_em_wave(a_e0=vector([0, 0, 0, 1.0])))


@_check("em", "circular_wave_is_null", 1e-12)
def _em_null() -> float:
    wave = _em_wave()
    vals = wave.psi.evaluate(_points(41))
    F = grade_array(vals, 2)
    sq = gp(F, F)
    return _maxabs(sq) / _maxabs(F) ** 2


@_check("em", "transverse_wave_has_no_power_fields", 1e-12)
def _em_transverse() -> float:
    wave = _em_wave(a_e0=vector([0, 1, 0, 0]), a_m0=vector([0, 0, 1, 0]))
    E, H, W_e, W_m = wave.fields_3d(_points(42))
    return (_maxabs(W_e) + _maxabs(W_m)) / (_maxabs(E) + _EM.c * _maxabs(H))


@_check("em", "power_fields_are_potential_divergences", 1e-12)
def _em_power() -> float:
    rng = _rng(42)
    pts = _points(42)
    a_e, a_m = _random_poly(rng, 1), _random_poly(rng, 1)
    z = EmPotential(a_e, a_m, 0.3, 0.7)
    _, _, W_e, W_m = em_fields_3d(z.z.vector_derivative(), _EM, points=pts)
    c = _EM.c
    div_e = a_e.vector_derivative().grade(0).evaluate(pts)[..., 0]
    div_m = a_m.vector_derivative().grade(0).evaluate(pts)[..., 0]
    return max(_rel(W_e, 0.3 * c * c * div_e), _rel(W_m, 0.7 * c * div_m))


@_check("em", "potential_round_trip", 1e-14)
def _em_pot() -> float:
    rng = _rng(43)
    pts = _points(43)
    z = _random_poly(rng, (1, 3))
    back = EmPotential.from_z(z, 0.3, 0.7).z
    return _rel(back.evaluate(pts), z.evaluate(pts))


@_check("em", "split_3d_round_trip", 1e-14)
def _em_split() -> float:
    psi = _random_mv(_rng(44), 200, (0, 2, 4))
    return _rel(em_spinor_from_3d(*em_fields_3d(psi, _EM), _EM), psi)


def _em_component_check(key: str) -> float:
    """Compare a 3D component of ``grad psi`` with derivatives of the 3D fields."""
    rng = _rng(45)
    pts = _points(45)
    psi = _random_poly(rng, (1, 3), 3).vector_derivative()
    comps = maxwell_3d_components(maxwell_residual(psi, None, _EM), _EM, points=pts)
    c, mu = _EM.c, _EM.mu
    d = [em_fields_3d(psi.partial(m), _EM, points=pts) for m in range(4)]  # (E, H, W_e, W_m) of d_mu psi
    dt = [c * x for x in d[0]]
    grad = lambda idx: np.stack([d[k][idx] for k in (1, 2, 3)], axis=-1)  # noqa: E731
    div = lambda idx: sum(d[k][idx][..., k - 1] for k in (1, 2, 3))  # noqa: E731

    def curl(idx):
        g = [d[k][idx] for k in (1, 2, 3)]
        return np.stack([g[1][..., 2] - g[2][..., 1], g[2][..., 0] - g[0][..., 2], g[0][..., 1] - g[1][..., 0]], axis=-1)

    expect = {
        "gauss_e": div(0) + dt[2] / c**2,
        "ampere": -dt[0] / c**2 - grad(2) / c**2 + mu * curl(1),
        "faraday": -mu * dt[1] - curl(0) - grad(3),
        "gauss_m": mu * div(1) + dt[3] / c**2,
    }[key]
    return _rel(comps[key], expect)


for _key in ("gauss_e", "ampere", "faraday", "gauss_m"):
    _check("em", f"component_{_key}", 1e-12)(lambda k=_key: _em_component_check(k))


@_check("em", "energy_density_formula", 1e-13)
def _em_energy() -> float:
    rng = _rng(46)
    E, H = rng.normal(size=(50, 3)), rng.normal(size=(50, 3))
    We, Wm = rng.normal(size=50), rng.normal(size=50)
    psi = em_spinor_from_3d(E, H, We, Wm, _EM)
    energy, _ = em_energy_momentum(psi, _EM)
    eps, mu, c = _EM.epsilon, _EM.mu, _EM.c
    expect = 0.5 * eps * np.sum(E * E, -1) + 0.5 * mu * np.sum(H * H, -1) + We**2 / (2 * mu * c**4) + Wm**2 / (2 * mu * c**2)
    return _rel(energy, expect)


@_check("em", "momentum_density_is_poynting_over_c2", 1e-13)
def _em_momentum() -> float:
    rng = _rng(47)
    E, H = rng.normal(size=(50, 3)), rng.normal(size=(50, 3))
    psi = em_spinor_from_3d(E, H, rng.normal(size=50), rng.normal(size=50), _EM)
    _, p = em_energy_momentum(psi, _EM)
    return _rel(p, np.cross(E, H) / _EM.c**2)


@_check("em", "stress_tensor_covariance", 1e-12)
def _em_cov() -> float:
    rng = _rng(48)
    R = rotor_exp(SIGMA2, 0.7) * rotor_exp(I * SIGMA3, 1.1)
    psi = Multivector(_random_mv(rng, 1, (0, 2, 4))[0])
    b = vector(rng.normal(size=4))
    lhs = em_stress_tensor(sandwich(R, psi), sandwich(R, b), _EM)
    rhs = sandwich(R, em_stress_tensor(psi, b, _EM))
    return _rel(lhs.coeffs, rhs.coeffs)


@_check("em", "energy_invariant_under_dual_rotation", 1e-13)
def _em_dual_rot() -> float:
    rng = _rng(49)
    psi = _random_mv(rng, 50, 2)
    phase = math.cos(0.8) * np.eye(16)[0] + math.sin(0.8) * I.coeffs
    e1, _ = em_energy_momentum(psi, _EM)
    e2, _ = em_energy_momentum(gp(psi, phase), _EM)
    return _rel(e2, e1)


def _em_force_case(fields, qe, qm):
    rng = _rng(50)
    v = rng.normal(size=3) * 0.2 * _EM.c
    E, H, We, Wm = fields
    psi = Multivector(em_spinor_from_3d(E, H, We, Wm, _EM))
    probe = EmProbe.moving(qe, qm, 1.0, (0, 0, 0), v, _EM.c)
    return v, em_lorentz_force(psi, probe, _EM)


_E3 = np.array([0.4, -1.1, 0.7])
_H3 = np.array([-0.3, 0.5, 0.9])


@_check("em", "force_electric_charge", 1e-13)
def _em_f1() -> float:
    mu, c = _EM.mu, _EM.c
    v, (P, F) = _em_force_case((_E3, _H3, 0.0, 0.0), 1.3, 0.0)
    return max(_rel(F, 1.3 * (_E3 + mu * np.cross(v, _H3))), abs(P - 1.3 * _E3 @ v) / (1.3 * np.linalg.norm(_E3) * c))


@_check("em", "force_magnetic_charge", 1e-13)
def _em_f2() -> float:
    mu, c = _EM.mu, _EM.c
    v, (P, F) = _em_force_case((_E3, _H3, 0.0, 0.0), 0.0, 0.8)
    return max(_rel(F, 0.8 * (mu * _H3 - np.cross(v, _E3) / c**2)), abs(P - 0.8 * mu * _H3 @ v) / (0.8 * mu * np.linalg.norm(_H3) * c))


@_check("em", "force_electric_power_field", 1e-13)
def _em_f3() -> float:
    c = _EM.c
    v, (P, F) = _em_force_case((np.zeros(3), np.zeros(3), 0.9, 0.0), 1.5, 0.0)
    # magnitude q_e W_e |v| / c^2 along the velocity line; direction -v
    return max(_rel(F, -1.5 * 0.9 * v / c**2), abs(P + 1.5 * 0.9) / (1.5 * 0.9))


@_check("em", "force_magnetic_power_field", 1e-13)
def _em_f4() -> float:
    c = _EM.c
    v, (P, F) = _em_force_case((np.zeros(3), np.zeros(3), 0.0, 0.6), 0.0, 1.2)
    return max(_rel(F, -1.2 * 0.6 * v / c**2), abs(P + 1.2 * 0.6) / (1.2 * 0.6))


@_check("em", "dual_lagrangian_vanishes_on_shell", 1e-10)
def _em_ldual() -> float:
    pts = _points(51)
    worst = 0.0
    for kw in ({}, {"a_m0": vector([0, 0, 1, 0])}, {"sign": -1, "phi0": 1.1}):
        wave = _em_wave(**kw)
        _, l_dual = em_lagrangians(wave.potential, wave.medium, pts)
        worst = max(worst, _maxabs(l_dual) / (_maxabs(wave.psi.evaluate(pts)) ** 2 / _EM.mu))
    return worst


@_check("em", "dual_lagrangian_longitudinal_power_envelope", 1e-12)
def _em_ldual_long() -> float:
    # with a_e0 . k != 0 the density is the constant (|W_e|^2/c^4 + |W_m|^2/c^2) / (2 mu)
    wave = _em_wave(a_e0=vector([0, 1, 0, 0.5]))
    n = 16
    t = 2.0 * math.pi * np.arange(n) / (n * wave.omega)
    pts = np.array([[_EM.c * tt, 0.2, -0.1, 0.3] for tt in t])
    _, l_dual = em_lagrangians(wave.potential, wave.medium, pts)
    _, _, W_e, W_m = wave.fields_3d(pts)
    c, mu = _EM.c, _EM.mu
    expect = (abs(envelope_from_samples(W_e)) ** 2 / c**4 + abs(envelope_from_samples(W_m)) ** 2 / c**2) / (2.0 * mu)
    return _rel(l_dual, np.full_like(l_dual, expect))


@_check("em", "traditional_lagrangian_formula", 1e-12)
def _em_ltrad() -> float:
    rng = _rng(52)
    pts = _points(52)
    z = EmPotential.from_z(_random_poly(rng, (1, 3)))
    l_trad, _ = em_lagrangians(z, _EM, pts)
    E, H, We, Wm = em_fields_3d(z.z.vector_derivative(), _EM, points=pts)
    eps, mu, c = _EM.epsilon, _EM.mu, _EM.c
    expect = 0.5 * eps * np.sum(E * E, -1) - 0.5 * mu * np.sum(H * H, -1) - We**2 / (2 * mu * c**4) + Wm**2 / (2 * mu * c**2)
    return _rel(l_trad, expect)


@_check("em", "gauge_keeps_faraday_and_shifts_power", 1e-12)
def _em_gauge() -> float:
    rng = _rng(53)
    pts = _points(53)
    z = EmPotential.from_z(_random_poly(rng, (1, 3)))
    chi_e = _random_poly(rng, 0, 3)
    chi_m = _random_poly(rng, 0, 3)
    new, dWe, dWm = em_gauge_transform(z, chi_e, chi_m, _EM)
    old_f = em_fields_3d(z.z.vector_derivative(), _EM, points=pts)
    new_f = em_fields_3d(new.z.vector_derivative(), _EM, points=pts)
    return max(
        _rel(new_f[0], old_f[0]),
        _rel(new_f[1], old_f[1]),
        _rel(new_f[2] - old_f[2], dWe.evaluate(pts)[..., 0]),
        _rel(new_f[3] - old_f[3], dWm.evaluate(pts)[..., 0]),
    )


def _em_envelopes(wave, point, n=16):
    t = 2.0 * math.pi * np.arange(n) / (n * wave.omega)
    pts = np.array([[_EM.c * tt, *point] for tt in t])
    E, H, _, _ = wave.fields_3d(pts)
    return envelope_from_samples(E), envelope_from_samples(H)


@_check("em", "spin_dual_equals_electric_for_circular_wave", 1e-12)
def _em_spin_same() -> float:
    wave = _em_wave(a_e0=vector([0, 1, 0, 0]), a_m0=vector([0, 0, 1, 0]))
    E_bar, H_bar = _em_envelopes(wave, (0.1, -0.2, 0.3))
    s_dual = em_spin_density(E_bar, H_bar, wave.omega, _EM)
    s_el = em_spin_density_electric(E_bar, wave.omega, _EM)
    return _rel(s_dual, s_el) if _maxabs(s_dual) > 0 else 1.0


@_check("em", "spin_dual_differs_on_mixed_fixture", 1e-12)
def _em_spin_diff() -> float:
    # electric field rotating in the xy plane while H stays linear
    E_bar = np.array([1.0, 1j, 0.0])
    H_bar = np.array([0.0, 0.0, 0.7])
    s_dual = em_spin_density(E_bar, H_bar, 2.0, _EM)
    s_el = em_spin_density_electric(E_bar, 2.0, _EM)
    gap = _maxabs(s_dual - s_el) / _maxabs(s_el)
    # expected gap is exactly one half of the electric value
    return abs(gap - 0.5)


# ---------------------------------------------------------------------------
# acoustic
# ---------------------------------------------------------------------------

_AC = AcMedium.from_c(1.7, 2.5)


def _ac_wave(**kw):
    base = dict(k_hat=(1.0, 0.0, 0.0), omega=2.0, sign=1, amplitude=0.8, phi0=0.0, branch="scalar-only", r_n=None, r_s=None)
    base.update(kw)
    return ac_plane_wave(
        _AC, base["k_hat"], base["omega"], base["sign"], base["amplitude"], base["phi0"], base["branch"], base["r_n"], base["r_s"]
    )


_FULL = dict(branch="full-spinor", k_hat=(0.0, 0.6, 0.8), sign=-1, r_n=(0.3, 0.1, -0.2, 0.4), r_s=(-0.1, 0.5, 0.2, -0.3), phi0=0.2)


def _ac_wave_residual(wave) -> float:
    pts = _points(60)
    res = ac_residual(wave.z, None).evaluate(pts)
    scale = (wave.omega / _AC.c) * _maxabs(wave.z.evaluate(pts))
    return _maxabs(res) / scale


@_check("acoustic", "scalar_only_wave_residual", 1e-12)
def _ac_w1() -> float:
    return _ac_wave_residual(_ac_wave())


@_check("acoustic", "full_spinor_wave_residual", 1e-12)
def _ac_w2() -> float:
    return _ac_wave_residual(_ac_wave(**_FULL))


@_check("acoustic", "field_matches_closed_form", 1e-12)
def _ac_closed() -> float:
    pts = _points(61)
    worst = 0.0
    for kw in ({}, _FULL):
        wave = _ac_wave(**kw)
        worst = max(worst, _rel(wave.z.evaluate(pts), wave.closed_form_z().evaluate(pts)))
    return worst


@_check("acoustic", "orbital_factor_three", 1e-12)
def _ac_three() -> float:
    rng = _rng(62)
    pts = _points(62)
    p = vector(rng.normal(size=4))
    wedge = AnalyticField.position().left_mul(p).grade(2)  # p ^ r
    lhs = -(wedge.div4()).evaluate(pts)
    return _rel(lhs, np.broadcast_to(3.0 * p.coeffs, lhs.shape))


@_check("acoustic", "canonical_displacements_closed_form", 1e-12)
def _ac_disp() -> float:
    wave = _ac_wave(**_FULL)
    pts = _points(63)
    lam = (wave.medium.lambda_minus, wave.medium.lambda_plus, wave.medium.lambda_4)
    M0 = AcPotentialSpinor.from_psi(wave.psi0, *lam).M
    x, y = ac_displacements(M0, _AC, points=pts)
    xc, yc = wave.canonical_displacements(pts)
    return max(_rel(x, xc), _rel(y, yc))


@_check("acoustic", "angular_momentum_split_sums", 1e-12)
def _ac_split_sum() -> float:
    wave = _ac_wave(**_FULL)
    pts = _points(64)
    x, y = wave.canonical_displacements(pts)
    parts = wave.angular_momentum_split(pts)
    rho, c = _AC.rho, _AC.c
    return max(_rel(parts["N_L"] + parts["N_S"], rho * x), _rel(parts["L"] + parts["S"], rho * c * y))


@_check("acoustic", "dual_lagrangian_vanishes_on_shell", 1e-10)
def _ac_ldual() -> float:
    worst = 0.0
    pts = _points(65)
    for kw in ({}, _FULL):
        wave = _ac_wave(**kw)
        _, l_dual = ac_lagrangians(wave.psi, wave.medium, pts)
        worst = max(worst, _maxabs(l_dual) / (_maxabs(wave.z.evaluate(pts)) ** 2 / _AC.rho))
    return worst


@_check("acoustic", "traditional_lagrangian_null_wave", 1e-12)
def _ac_ltrad_null() -> float:
    wave = _ac_wave()
    pts = _points(66)
    l_trad, _ = ac_lagrangians(wave.psi, wave.medium, pts)
    return _maxabs(l_trad) / (_maxabs(wave.z.evaluate(pts)) ** 2 / _AC.rho)


@_check("acoustic", "traditional_lagrangian_formula", 1e-12)
def _ac_ltrad() -> float:
    rng = _rng(67)
    pts = _points(67)
    psi = _random_poly(rng, (0, 2, 4))
    l_trad, _ = ac_lagrangians(psi, _AC, pts)
    P, v, Pw, w = ac_fields_3d(-psi.vector_derivative(), _AC, points=pts)
    rho, beta = _AC.rho, _AC.beta
    expect = 0.5 * rho * np.sum(v * v, -1) - 0.5 * beta * P**2 + 0.5 * beta * Pw**2 - 0.5 * rho * np.sum(w * w, -1)
    return _rel(l_trad, expect)


@_check("acoustic", "split_3d_round_trip", 1e-14)
def _ac_split() -> float:
    z = _random_mv(_rng(68), 200, (1, 3))
    return _rel(ac_field_from_3d(*ac_fields_3d(z, _AC), _AC), z)


@_check("acoustic", "energy_density_formula", 1e-13)
def _ac_energy() -> float:
    rng = _rng(69)
    P, Pw = rng.normal(size=50), rng.normal(size=50)
    v, w = rng.normal(size=(50, 3)), rng.normal(size=(50, 3))
    energy, _ = ac_energy_momentum(ac_field_from_3d(P, v, Pw, w, _AC), _AC)
    rho, beta = _AC.rho, _AC.beta
    return _rel(energy, 0.5 * (beta * P**2 + rho * np.sum(v * v, -1) + beta * Pw**2 + rho * np.sum(w * w, -1)))


@_check("acoustic", "momentum_density_formula", 1e-13)
def _ac_momentum() -> float:
    rng = _rng(70)
    P, Pw = rng.normal(size=50), rng.normal(size=50)
    v, w = rng.normal(size=(50, 3)), rng.normal(size=(50, 3))
    _, p = ac_energy_momentum(ac_field_from_3d(P, v, Pw, w, _AC), _AC)
    c = _AC.c
    return _rel(p, (P[:, None] * v + Pw[:, None] * w) / c**2)


@_check("acoustic", "background_boost_dilation", 1e-12)
def _ac_boost() -> float:
    # observer moving at -0.6c sees the medium stream at +0.6c
    R = rotor_exp(SIGMA1, math.atanh(0.6))
    p = sandwich(R, _AC.p0)
    comps = Frame().vector_components(p.coeffs) / _AC.zeta
    return max(abs(comps[0] - 1.25), abs(abs(comps[1]) - 0.75))


def _ac_force_case(rho_dot=0.0, force=(0, 0, 0), vort=(0, 0, 0), rho_dot_w=0.0):
    P, Pw = 0.35, 0.9
    v, w = np.array([0.8, 0.3, -1.3]), np.array([0.45, -0.54, 0.58])
    z = Multivector(ac_field_from_3d(P, v, Pw, w, _AC))
    probe = AcProbe.moving(rho_dot, force, vort, rho_dot_w, 1.0, (0, 0, 0), (0.1, 0.2, -0.3), _AC.c)
    return (P, v, Pw, w), ac_force(z, probe, _AC)


@_check("acoustic", "force_mass_source", 1e-13)
def _ac_f1() -> float:
    (P, v, _, _), (pw, F) = _ac_force_case(rho_dot=0.7)
    return max(_rel(F, 0.7 * v), abs(pw - 0.7 * P / _AC.rho) / abs(0.7 * P / _AC.rho))


@_check("acoustic", "force_force_source", 1e-13)
def _ac_f2() -> float:
    f = np.array([0.3, -0.2, 0.5])
    (P, v, _, w), (pw, F) = _ac_force_case(force=f)
    rho, c = _AC.rho, _AC.c
    return max(_rel(F, -P * f / (rho * c * c) + np.cross(w, f) / c), abs(pw + f @ v) / abs(f @ v))


@_check("acoustic", "force_vorticity_source", 1e-13)
def _ac_f3() -> float:
    om = np.array([0.3, -0.2, 0.5])
    (_, v, Pw, w), (pw, F) = _ac_force_case(vort=om)
    rho, c = _AC.rho, _AC.c
    return max(_rel(F, -np.cross(v, om) - Pw * om / (rho * c)), abs(pw + c * w @ om) / abs(c * w @ om))


@_check("acoustic", "force_rotational_mass_source", 1e-13)
def _ac_f4() -> float:
    (_, _, Pw, w), (pw, F) = _ac_force_case(rho_dot_w=0.6)
    return max(_rel(F, 0.6 * w), abs(pw - 0.6 * Pw / _AC.rho) / abs(0.6 * Pw / _AC.rho))


def _ac_component_check(key: str) -> float:
    rng = _rng(71)
    pts = _points(71)
    z = -_random_poly(rng, (0, 2, 4), 3).vector_derivative()
    comps = ac_3d_components(ac_residual(z, None), _AC, points=pts)
    c, rho = _AC.c, _AC.rho
    d = [ac_fields_3d(z.partial(m), _AC, points=pts) for m in range(4)]  # (P, v, P_w, w) of d_mu z
    dt = [c * x for x in d[0]]
    grad = lambda idx: np.stack([d[k][idx] for k in (1, 2, 3)], axis=-1)  # noqa: E731
    div = lambda idx: sum(d[k][idx][..., k - 1] for k in (1, 2, 3))  # noqa: E731

    def curl(idx):
        g = [d[k][idx] for k in (1, 2, 3)]
        return np.stack([g[1][..., 2] - g[2][..., 1], g[2][..., 0] - g[0][..., 2], g[0][..., 1] - g[1][..., 0]], axis=-1)

    expect = {
        "continuity": dt[0] + c * c * rho * div(1),
        "euler": rho * dt[1] + grad(0) + rho * c * curl(3),
        "rot_euler": rho * dt[3] + grad(2) - rho * c * curl(1),
        "rot_continuity": dt[2] + c * c * rho * div(3),
    }[key]
    return _rel(comps[key], expect)


for _key in ("continuity", "euler", "rot_euler", "rot_continuity"):
    _check("acoustic", f"component_{_key}", 1e-12)(lambda k=_key: _ac_component_check(k))


@_check("acoustic", "gauge_shift_is_divergence_free", 1e-12)
def _ac_gauge() -> float:
    rng = _rng(72)
    pts = _points(72)
    M = _random_poly(rng, 2)
    b0 = _random_poly(rng, 0, 3)
    b_vec = _random_poly(rng, 0, 3).right_mul(SIGMA1) + _random_poly(rng, 0, 3).right_mul(SIGMA3)
    M2, dcurl = ac_gauge_transform(M, b0, b_vec, _AC)
    diff = M2 - M
    div = diff.div4().evaluate(pts)
    curl = diff.curl4().evaluate(pts)
    return max(_maxabs(div) / max(_maxabs(curl), 1e-300), _rel(dcurl.evaluate(pts), curl))


def _two_wave_spin(n: int = 16):
    w1 = _ac_wave(k_hat=(1.0, 0.0, 0.0))
    w2 = _ac_wave(k_hat=(0.0, 1.0, 0.0), phi0=math.pi / 2)
    point = (0.13, -0.27, 0.05)
    t = 2.0 * math.pi * np.arange(n) / (n * w1.omega)
    pts = np.array([[_AC.c * tt, *point] for tt in t])
    v = w1.fields_3d(pts)[1] + w2.fields_3d(pts)[1]
    x = w1.displacement(pts) + w2.displacement(pts)
    return w1.omega, v, x


@_check("acoustic", "two_wave_spin_matches_im_formula", 1e-10)
def _ac_spin() -> float:
    omega, v, x = _two_wave_spin()
    direct = np.mean(ac_spin_density(x, _AC.rho * v), axis=0)
    formula = ac_spin_cycle_avg(envelope_from_samples(v), omega, _AC.rho)
    off_axis = _maxabs(formula[:2]) / _maxabs(formula)
    return max(_rel(direct, formula), off_axis)


@_check("acoustic", "scalar_theory_spin_vanishes", 0.0)
def _ac_spin_scalar() -> float:
    _, v, _ = _two_wave_spin()
    return _maxabs(ac_spin_scalar_theory(_AC.rho * v))


@_check("acoustic", "two_wave_spin_nonzero", 0.0)
def _ac_spin_nonzero() -> float:
    omega, v, _ = _two_wave_spin()
    s = ac_spin_cycle_avg(envelope_from_samples(v), omega, _AC.rho)
    return 0.0 if abs(s[2]) > 1e-6 * _maxabs(v) ** 2 else 1.0
