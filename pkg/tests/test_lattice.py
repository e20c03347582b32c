import math

import numpy as np
import pytest

from sta_fields import parallel
from sta_fields.algebra import G0, SIGMA1, SIGMA2
from sta_fields.analytic import AnalyticField
from sta_fields.lattice import (
    LatticeSpec,
    MultivectorField,
    bianchi_residuals,
    curl4,
    dalembertian,
    div4,
    read_field_csv,
    write_field_csv,
)

SPEC = LatticeSpec((8, 8, 8, 8), (0.3, 0.25, 0.2, 0.35))


@pytest.mark.parametrize("grade", range(5))
def test_bianchi_identities_per_grade(grade):
    f = MultivectorField.random(SPEC, np.random.default_rng(grade), grade)
    cc, dd = bianchi_residuals(f)
    assert cc <= 1e-10 * f.norm_max()
    assert dd <= 1e-10 * f.norm_max()


def test_curl_and_div_split_the_vector_derivative():
    f = MultivectorField.random(SPEC, np.random.default_rng(9))
    total = curl4(f) + div4(f)
    assert np.allclose(total.data, f.vector_derivative().data, atol=1e-12)


def _derivative_error(n):
    spec = LatticeSpec((4, 4, 4, n), (0.25, 0.25, 0.25, 1.0 / n))
    f = AnalyticField.plane_wave(SIGMA1 + 0.5 * G0, (0.0, 0.0, 0.0, 2 * math.pi), 0.3)
    num = MultivectorField.from_analytic(f, spec).vector_derivative()
    exact = MultivectorField.from_analytic(f.vector_derivative(), spec)
    return (num - exact).norm_max() / exact.norm_max()


def test_vector_derivative_is_second_order():
    order = math.log2(_derivative_error(16) / _derivative_error(32))
    assert abs(order - 2.0) < 0.05


def test_dalembertian_has_compact_discrete_symbol():
    spec = LatticeSpec((8, 8, 8, 8), (0.5, 0.25, 0.25, 0.5))
    k = spec.wave_numbers((1, 2, 0, 3))
    f = MultivectorField.from_analytic(AnalyticField.plane_wave(SIGMA2, (k[0], -k[1], -k[2], -k[3])), spec)
    sym = [(2 / h) ** 2 * math.sin(kk * h / 2) ** 2 for kk, h in zip(k, spec.spacing)]
    factor = -sym[0] + sym[1] + sym[2] + sym[3]
    assert np.allclose(dalembertian(f).data, factor * f.data, atol=1e-12 * abs(factor))


def test_csv_round_trip_is_bit_exact(tmp_path):
    f = MultivectorField.random(LatticeSpec((4, 5, 4, 6), (0.1, 0.2, 0.3, 0.4)), np.random.default_rng(5))
    path = tmp_path / "f.csv"
    f.to_csv(path, {"note": "x"})
    back = MultivectorField.from_csv(path)
    assert np.array_equal(back.data, f.data)
    assert back.spec == f.spec
    _, meta = read_field_csv(path)
    assert meta["metadata"] == {"note": "x"}
    assert meta["columns"][:4] == ["t", "x", "y", "z"]


def test_csv_rejects_foreign_sidecar(tmp_path):
    path = tmp_path / "f.csv"
    write_field_csv(path, np.zeros((1, 4, 4, 4, 16)), (1, 1, 1, 1))
    side = tmp_path / "f.csv.json"
    side.write_text(side.read_text().replace("sta-fields-lattice/1", "other/9"))
    with pytest.raises(ValueError):
        read_field_csv(path)


def test_write_requires_five_axes(tmp_path):
    with pytest.raises(ValueError):
        write_field_csv(tmp_path / "f.csv", np.zeros((4, 4, 4, 16)), (1, 1, 1, 1))


@pytest.mark.parametrize(
    "dims, spacing",
    [((4, 4, 4), (1, 1, 1)), ((3, 4, 4, 4), (1, 1, 1, 1)), ((4, 4, 4, 4), (1, 0, 1, 1))],
)
def test_invalid_lattice_specs(dims, spacing):
    with pytest.raises(ValueError):
        LatticeSpec(dims, spacing)


def test_fields_on_different_lattices_do_not_mix():
    a = MultivectorField.zeros(SPEC)
    b = MultivectorField.zeros(LatticeSpec((8, 8, 8, 8), (1, 1, 1, 1)))
    with pytest.raises(ValueError):
        a + b
    with pytest.raises(ValueError):
        MultivectorField(SPEC, np.zeros((4, 4, 4, 4, 16)))


def test_products_are_bit_identical_across_thread_counts():
    spec = LatticeSpec((8, 6, 4, 4), (0.1, 0.2, 0.3, 0.4))
    a = MultivectorField.random(spec, np.random.default_rng(1))
    b = MultivectorField.random(spec, np.random.default_rng(2))
    old = parallel.get_threads()
    try:
        parallel.set_threads(1)
        one = (a * b).data
        parallel.set_threads(4)
        four = (a * b).data
    finally:
        parallel.set_threads(old)
    assert np.array_equal(one, four)


def test_thread_count_falls_back_to_environment(monkeypatch):
    old = parallel.get_threads()
    try:
        parallel.set_threads(None)
        monkeypatch.setenv(parallel.ENV_VAR, "3")
        assert parallel.get_threads() == 3
    finally:
        parallel.set_threads(old)


def test_site_access_and_coordinates():
    spec = LatticeSpec((4, 4, 4, 4), (0.5, 1.0, 1.5, 2.0))
    coords = spec.coordinates((1.0, 0.0, 0.0, 0.0))
    assert np.allclose(coords[1, 2, 3, 1], [1.5, 2.0, 4.5, 2.0])
    f = MultivectorField.constant(spec, SIGMA1)
    assert f.at((0, 1, 2, 3)).allclose(SIGMA1)
    assert spec.sites == 256 and math.isclose(spec.cell_volume, 1.5)
