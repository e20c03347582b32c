import math

import numpy as np
import pytest

from sta_fields.algebra import G0, G1, G2, G3, I, Multivector, vector
from sta_fields.analytic import AnalyticField
from sta_fields.em import (
    EmMedium,
    EmPotential,
    EmProbe,
    EmSource,
    em_energy_momentum,
    em_fields_3d,
    em_gauge_transform,
    em_lagrangians,
    em_lorentz_force,
    em_plane_wave,
    em_spin_density,
    em_spin_density_electric,
    em_spinor_from_3d,
    em_spinor_from_potentials,
    envelope_from_quadratures,
    envelope_from_samples,
    maxwell_3d_components,
    maxwell_residual,
)

VAC = EmMedium.vacuum()
MED = EmMedium.from_c_zeta(1.5, 0.8)


@pytest.fixture
def pts():
    return np.random.default_rng(21).uniform(-1, 1, size=(60, 4))


def residual_ratio(wave, pts):
    res = maxwell_residual(wave.psi, None, wave.medium).evaluate(pts)
    return np.max(np.abs(res)) / ((wave.omega / wave.medium.c) * np.max(np.abs(wave.psi.evaluate(pts))))


@pytest.mark.parametrize("sign", [1, -1])
@pytest.mark.parametrize("k_hat", [(0, 0, 1), (0.6, 0.0, 0.8), (2 / 3, -1 / 3, 2 / 3)])
def test_plane_waves_solve_the_source_free_equation(sign, k_hat, pts):
    k = np.asarray(k_hat)
    a = np.cross(k, [1.0, 0.0, 0.0] if abs(k[0]) < 0.9 else [0.0, 1.0, 0.0])
    wave = em_plane_wave(MED, k_hat, 4.0, sign, vector([0, *a]), vector([0, *np.cross(k, a)]), 0.3)
    assert residual_ratio(wave, pts) <= 1e-12


def test_vacuum_wave_geometry(pts):
    wave = em_plane_wave(VAC, (0, 0, 1), 2 * math.pi * 1e9, 1, 1e-3 * G1, 0 * G1)
    E, H, W_e, W_m = wave.fields_3d(pts * 0.1)
    assert np.max(np.abs(W_e)) == 0.0 and np.max(np.abs(W_m)) == 0.0
    assert np.max(np.abs(np.sum(E * H, -1))) <= 1e-12 * np.max(np.sum(E * E, -1)) / VAC.zeta
    assert np.allclose(np.linalg.norm(E, axis=-1), VAC.zeta * np.linalg.norm(H, axis=-1), rtol=1e-12)
    energy, p = em_energy_momentum(wave.psi, VAC, points=pts * 0.1)
    # a null wave carries momentum c p = energy along k_hat
    assert np.allclose(VAC.c * p[:, 2], energy, rtol=1e-12)
    assert np.max(np.abs(p[:, :2])) <= 1e-12 * np.max(np.abs(p[:, 2]))


def test_circular_wave_is_null(pts):
    wave = em_plane_wave(MED, (1, 0, 0), 3.0, 1, 1.0 * G2, 1.0 * G3)
    for v in wave.psi.evaluate(pts[:10]):
        F = Multivector(v)
        sq = F * F
        assert abs(sq.scalar) + abs(sq.pseudoscalar) <= 1e-12 * F.norm() ** 2


def test_longitudinal_potential_populates_power_fields(pts):
    # the phase mixes the electric and magnetic sectors, so both W fields appear
    wave = em_plane_wave(MED, (0, 0, 1), 2.0, 1, 0.4 * G3, 0 * G1)
    _, _, W_e, W_m = wave.fields_3d(pts)
    assert np.max(np.abs(W_e)) > 0.1 and np.max(np.abs(W_m)) > 0.1
    div_e = wave.potential.a_e.vector_derivative().grade(0).evaluate(pts)[:, 0]
    div_m = wave.potential.a_m.vector_derivative().grade(0).evaluate(pts)[:, 0]
    assert np.allclose(W_e, wave.medium.lambda_minus * MED.c**2 * div_e, atol=1e-12)
    assert np.allclose(W_m, wave.medium.lambda_plus * MED.c * div_m, atol=1e-12)


def test_plane_wave_argument_checks():
    with pytest.raises(ValueError):
        em_plane_wave(MED, (1, 1, 0), 1.0, 1, G2, 0 * G1)
    with pytest.raises(ValueError):
        em_plane_wave(MED, (1, 0, 0), -1.0, 1, G2, 0 * G1)
    with pytest.raises(ValueError):
        em_plane_wave(MED, (1, 0, 0), 1.0, 2, G2, 0 * G1)
    with pytest.raises(ValueError):
        em_plane_wave(MED, (1, 0, 0), 1.0, 1, G2, G2)  # a_e0 . a_m0 != 0
    with pytest.raises(ValueError):
        em_plane_wave(MED, (1, 0, 0), 1.0, 1, G0 * G1, 0 * G1)


def test_split_round_trip_and_units():
    rng = np.random.default_rng(22)
    E, H = rng.normal(size=(20, 3)), rng.normal(size=(20, 3))
    We, Wm = rng.normal(size=20), rng.normal(size=20)
    psi = em_spinor_from_3d(E, H, We, Wm, MED)
    back = em_fields_3d(psi, MED)
    for a, b in zip(back, (E, H, We, Wm)):
        assert np.allclose(a, b, rtol=1e-14, atol=1e-14)
    # psi = W_e/c^2 + E/c + mu H I + (W_m/c) I
    one = em_spinor_from_3d([1, 0, 0], [0, 0, 0], 0, 0, MED)
    assert np.isclose(one[5], -1.0 / MED.c) or np.isclose(one[5], 1.0 / MED.c)
    with pytest.raises(ValueError):
        em_fields_3d(G1, MED)


def test_static_point_charge_field_has_gauss_source():
    # E = q r / (4 pi eps r^3) is not polynomial, so check the Coulomb-gauge
    # polynomial field E = rho0 r / (3 eps) of a uniform charge density
    rho0 = 2.5
    eps = MED.epsilon
    E = AnalyticField.polynomial({(0, 1, 0, 0): MED.c ** -1 * rho0 / (3 * eps) * (G1 * G0).coeffs,
                                  (0, 0, 1, 0): MED.c ** -1 * rho0 / (3 * eps) * (G2 * G0).coeffs,
                                  (0, 0, 0, 1): MED.c ** -1 * rho0 / (3 * eps) * (G3 * G0).coeffs})
    pts = np.random.default_rng(2).uniform(-1, 1, size=(10, 4))
    fields = em_fields_3d(E, MED, points=pts)
    assert np.allclose(fields[0], rho0 / (3 * eps) * pts[:, 1:])
    comps = maxwell_3d_components(maxwell_residual(E, None, MED), MED, points=pts)
    assert np.allclose(comps["gauss_e"], rho0 / eps)
    src = EmSource(j_e=AnalyticField.constant(rho0 * MED.c * G0))
    comps = maxwell_3d_components(maxwell_residual(E, src, MED), MED, points=pts)
    assert np.allclose(comps["gauss_e"], 0.0, atol=1e-9 * rho0 / eps)
    for key in ("ampere", "faraday", "gauss_m"):
        assert np.allclose(comps[key], 0.0, atol=1e-9)


def test_lorentz_force_textbook_limits():
    E = np.array([0.2, -0.5, 1.0])
    H = np.array([0.3, 0.1, -0.4])
    v = np.array([0.1, 0.4, -0.2])
    psi = Multivector(em_spinor_from_3d(E, H, 0.0, 0.0, MED))
    probe = EmProbe.moving(2.0, 0.0, 1.0, (0, 0, 0), v, MED.c)
    P, F = em_lorentz_force(psi, probe, MED)
    assert np.allclose(F, 2.0 * (E + MED.mu * np.cross(v, H)), rtol=1e-13)
    assert math.isclose(P, 2.0 * E @ v, rel_tol=1e-13)
    dual = EmProbe.moving(0.0, 1.5, 1.0, (0, 0, 0), v, MED.c)
    P, F = em_lorentz_force(psi, dual, MED)
    assert np.allclose(F, 1.5 * (MED.mu * H - np.cross(v, E) / MED.c**2), rtol=1e-13)
    assert math.isclose(P, 1.5 * MED.mu * H @ v, rel_tol=1e-13)


def test_power_fields_brake_along_the_velocity_line():
    v = np.array([0.3, -0.1, 0.25])
    psi = Multivector(em_spinor_from_3d(np.zeros(3), np.zeros(3), 0.7, 0.0, MED))
    probe = EmProbe.moving(1.1, 0.0, 1.0, (0, 0, 0), v, MED.c)
    P, F = em_lorentz_force(psi, probe, MED)
    assert np.allclose(F, -1.1 * 0.7 * v / MED.c**2, rtol=1e-13)
    assert math.isclose(P, -1.1 * 0.7, rel_tol=1e-13)


def test_probe_at_rest_feels_only_the_electric_field():
    psi = Multivector(em_spinor_from_3d([1.0, 2.0, 3.0], [4.0, 5.0, 6.0], 0.0, 0.0, MED))
    P, F = em_lorentz_force(psi, EmProbe.at_rest(0.5, 0.0, 1.0, (0, 0, 0), MED.c), MED)
    assert P == pytest.approx(0.0, abs=1e-14)
    assert np.allclose(F, [0.5, 1.0, 1.5])
    assert EmProbe.at_rest(1, 0, 1, (0, 0, 0), 2.0).complex_charge(MED).allclose(MED.mu * Multivector.scalar_value(1.0))
    with pytest.raises(ValueError):
        EmProbe.moving(1, 0, 1, (0, 0, 0), (2.0, 0, 0), MED.c)


def test_lagrangians_on_a_random_potential(pts):
    rng = np.random.default_rng(23)
    poly = {m: rng.normal(size=16) * np.isin(range(16), [1, 2, 3, 4, 11, 12, 13, 14]) for m in [(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 1, 0), (0, 0, 2, 1)]}
    z = EmPotential.from_z(AnalyticField.polynomial(poly))
    l_trad, _ = em_lagrangians(z, MED, pts)
    E, H, We, Wm = em_fields_3d(em_spinor_from_potentials(z).psi, MED, points=pts)
    eps, mu, c = MED.epsilon, MED.mu, MED.c
    expect = 0.5 * eps * np.sum(E * E, -1) - 0.5 * mu * np.sum(H * H, -1) - We**2 / (2 * mu * c**4) + Wm**2 / (2 * mu * c**2)
    assert np.allclose(l_trad, expect, rtol=1e-12, atol=1e-12 * np.max(np.abs(expect)))


def test_dual_lagrangian_vanishes_on_transverse_waves(pts):
    wave = em_plane_wave(MED, (0.6, 0.8, 0.0), 2.5, -1, 1.0 * G3, 0 * G1, 1.2)
    l_trad, l_dual = em_lagrangians(wave.potential, wave.medium, pts)
    scale = np.max(np.abs(wave.psi.evaluate(pts))) ** 2 / MED.mu
    assert np.max(np.abs(l_dual)) <= 1e-10 * scale
    assert np.max(np.abs(l_trad)) <= 1e-10 * scale  # null field: eps E^2 = mu H^2


def test_gauge_shift_keeps_faraday_and_moves_power_fields(pts):
    a_e = AnalyticField.polynomial({(1, 0, 0, 0): G1.coeffs, (0, 0, 1, 1): 0.3 * G0.coeffs, (0, 2, 0, 0): -0.5 * G3.coeffs})
    z = EmPotential(a_e, AnalyticField.constant(0 * G1))
    chi = AnalyticField.polynomial({(2, 0, 0, 0): 0.7, (0, 1, 1, 0): -0.2, (0, 0, 0, 3): 0.1})
    new, dWe, dWm = em_gauge_transform(z, chi, AnalyticField.coordinate(2) * 0.0, MED)
    old_f = em_fields_3d(em_spinor_from_potentials(z).psi, MED, points=pts)
    new_f = em_fields_3d(em_spinor_from_potentials(new).psi, MED, points=pts)
    assert np.allclose(old_f[0], new_f[0], atol=1e-12) and np.allclose(old_f[1], new_f[1], atol=1e-12)
    box = 2 * 0.7 - 6 * 0.1 * pts[:, 3]
    assert np.allclose(new_f[2] - old_f[2], z.lambda_minus * MED.c**2 * box, atol=1e-12)
    assert np.allclose(dWe.evaluate(pts)[:, 0], z.lambda_minus * MED.c**2 * box, atol=1e-12)
    assert np.allclose(dWm.evaluate(pts), 0.0)


def test_potential_rejects_wrong_grades():
    with pytest.raises(ValueError):
        EmPotential(G0 * G1, G1)
    with pytest.raises(ValueError):
        EmSource(j_e=I)


def test_envelopes_from_samples_and_quadratures():
    n, w = 12, 3.0
    t = 2 * math.pi * np.arange(n) / (n * w)
    x = 0.4 * np.cos(w * t) - 1.3 * np.sin(w * t)
    assert np.isclose(envelope_from_samples(x), envelope_from_quadratures(0.4, -1.3))


def test_spin_formulas_on_fixtures():
    # rotating E with matching H: the two formulas agree
    wave = em_plane_wave(MED, (0, 0, 1), 2.0, 1, 1.0 * G1, 1.0 * G2)
    n = 16
    t = 2 * math.pi * np.arange(n) / (n * wave.omega)
    pts = np.array([[MED.c * tt, 0.1, 0.2, 0.3] for tt in t])
    E, H, _, _ = wave.fields_3d(pts)
    Eb, Hb = envelope_from_samples(E), envelope_from_samples(H)
    s_dual = em_spin_density(Eb, Hb, wave.omega, MED)
    s_el = em_spin_density_electric(Eb, wave.omega, MED)
    assert np.allclose(s_dual, s_el, rtol=1e-12)
    assert abs(s_dual[2]) > 0 and np.allclose(s_dual[:2], 0, atol=1e-12 * abs(s_dual[2]))
    # rotating E with linear H: dual-symmetric is half the electric value
    Eb = np.array([1.0, 1j, 0.0])
    Hb = np.array([0.0, 0.0, 2.0])
    assert np.allclose(em_spin_density(Eb, Hb, 1.0, MED), 0.5 * em_spin_density_electric(Eb, 1.0, MED))
    # linear polarization: both vanish
    Eb = np.array([1.0, 0.0, 0.0]) * (1 + 1j)
    Hb = np.array([0.0, 1.0, 0.0]) * (1 + 1j)
    assert np.allclose(em_spin_density(Eb, Hb, 1.0, MED), 0.0)
    assert np.allclose(em_spin_density_electric(Eb, 1.0, MED), 0.0)
    with pytest.raises(ValueError):
        em_spin_density(Eb, Hb, 0.0, MED)


def test_medium_construction():
    assert math.isclose(VAC.c, 299792458.0, rel_tol=1e-9)
    assert math.isclose(VAC.zeta, 376.730313, rel_tol=1e-8)
    m = EmMedium.from_c_zeta(3.0, 2.0)
    assert math.isclose(m.c, 3.0) and math.isclose(m.zeta, 2.0)
    with pytest.raises(ValueError):
        EmMedium(epsilon=-1.0)
