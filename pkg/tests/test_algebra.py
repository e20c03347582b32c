import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from sta_fields.algebra import (
    BLADE_NAMES,
    G0,
    G1,
    G2,
    G3,
    GRADES,
    I,
    ONE,
    SIGMA1,
    SIGMA2,
    SIGMA3,
    Frame,
    Multivector,
    Rotor,
    cayley_table,
    cross3,
    dual_array,
    frame_join,
    frame_split,
    gp,
    grade_array,
    inner_array,
    left_mult_matrix,
    outer_array,
    parse_multivector,
    rev,
    right_mult_matrix,
    rotor_exp,
    sandwich,
    vector,
    vector_product_polar,
)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
mv16 = arrays(np.float64, 16, elements=finite)


def rel(a, b):
    scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1.0)
    return np.max(np.abs(np.asarray(a) - np.asarray(b))) / scale


def test_cayley_table_matches_dirac_matrices_for_every_pair():
    K, S = cayley_table()
    for i in range(16):
        for j in range(16):
            k, s = oracles.blade_product(i, j)
            assert (K[i, j], S[i, j]) == (k, s), (BLADE_NAMES[i], BLADE_NAMES[j])


def test_metric_signature():
    assert (G0 * G0).allclose(1.0)
    for g in (G1, G2, G3):
        assert (g * g).allclose(-1.0)
    assert (I * I).allclose(-1.0)


def test_pseudoscalar_is_ordered_product_of_gammas():
    assert (G0 * G1 * G2 * G3).allclose(I)


def test_sigmas_square_to_one_and_multiply_to_pseudoscalar():
    for s in (SIGMA1, SIGMA2, SIGMA3):
        assert (s * s).allclose(1.0)
    assert (SIGMA1 * SIGMA2 * SIGMA3).allclose(I)


@given(mv16, mv16)
def test_product_agrees_with_matrix_model(a, b):
    assert rel(gp(a, b), oracles.product(a, b)) <= 1e-12


@settings(max_examples=200)
@given(mv16, mv16, mv16)
def test_associativity(a, b, c):
    assert rel(gp(gp(a, b), c), gp(a, gp(b, c))) <= 1e-10


@given(mv16, mv16)
def test_reversion_is_an_anti_automorphism(a, b):
    assert rel(rev(gp(a, b)), gp(rev(b), rev(a))) <= 1e-10


@given(mv16)
def test_reverse_matches_oracle_sign_pattern(a):
    assert np.array_equal(rev(a), oracles.reverse(a))


@given(mv16)
def test_double_dual_negates(a):
    assert rel(dual_array(dual_array(a)), -a) <= 1e-12


@given(mv16)
def test_grade_projections_partition(a):
    total = sum(grade_array(a, k) for k in range(5))
    assert np.array_equal(total, a)


def test_bulk_random_properties():
    # 10^4 random multivectors through the vectorized kernels
    rng = np.random.default_rng(7)
    a, b, c = (rng.normal(size=(10_000, 16)) for _ in range(3))
    assert rel(gp(gp(a, b), c), gp(a, gp(b, c))) <= 1e-10
    assert rel(rev(gp(a, b)), gp(rev(b), rev(a))) <= 1e-10
    assert rel(dual_array(a), gp(a, I.coeffs)) == 0.0


def test_vector_product_splits_into_inner_and_outer():
    rng = np.random.default_rng(3)
    a = grade_array(rng.normal(size=(50, 16)), 1)
    b = grade_array(rng.normal(size=(50, 16)), 1)
    assert rel(inner_array(a, b) + outer_array(a, b), gp(a, b)) <= 1e-12
    assert np.allclose(outer_array(a, a), 0.0)


def test_multiplication_matrices():
    rng = np.random.default_rng(4)
    a, b = rng.normal(size=16), rng.normal(size=16)
    assert np.allclose(left_mult_matrix(a) @ b, gp(a, b))
    assert np.allclose(right_mult_matrix(b) @ a, gp(a, b))


def test_odd_elements_anticommute_with_pseudoscalar():
    rng = np.random.default_rng(5)
    a = grade_array(rng.normal(size=16), (1, 3))
    assert np.allclose(gp(a, I.coeffs), -gp(I.coeffs, a))
    e = grade_array(rng.normal(size=16), (0, 2, 4))
    assert np.allclose(gp(e, I.coeffs), gp(I.coeffs, e))


def test_multivector_arithmetic_and_accessors():
    m = Multivector.from_dict({"1": 2.0, "g01": -1.5, "I": 0.25})
    assert m.scalar == 2.0
    assert m.pseudoscalar == 0.25
    assert m["g01"] == -1.5
    assert m.grades() == {0, 2, 4}
    assert m.is_grade((0, 2, 4)) and not m.is_grade(2)
    assert (m + 1.0).scalar == 3.0
    assert (2.0 * m).allclose(m + m)
    assert (m - m).allclose(0.0)
    assert m.reverse()["g01"] == 1.5
    assert m.dual().allclose(m * I)


def test_text_round_trip_is_exact():
    rng = np.random.default_rng(6)
    m = Multivector(rng.normal(size=16) * 10.0 ** rng.integers(-8, 8, size=16))
    back = parse_multivector(m.to_text())
    assert np.array_equal(back.coeffs, m.coeffs)
    assert Multivector.from_dict(m.to_dict()).allclose(m, rtol=0, atol=0)


@pytest.mark.parametrize("bad", ["g4", "gx", "Ig9", ""])
def test_unknown_blade_names_are_rejected(bad):
    with pytest.raises((KeyError, ValueError)):
        Multivector.blade(bad)


def test_boost_matches_matrix_oracle():
    alpha = math.atanh(0.6)
    p = sandwich(rotor_exp(SIGMA1, alpha), G0)
    comps = Frame().vector_components(p.coeffs)
    expect = oracles.boost_matrix(alpha, 1) @ np.array([1.0, 0.0, 0.0, 0.0])
    assert abs(comps[0] - 1.25) <= 1e-12
    assert abs(abs(comps[1]) - 0.75) <= 1e-12
    assert np.max(np.abs(np.abs(comps) - np.abs(expect))) <= 1e-12


def test_boost_of_general_vector_matches_matrix_oracle():
    rng = np.random.default_rng(8)
    alpha = 0.7
    x = rng.normal(size=4)
    out = Frame().vector_components(sandwich(rotor_exp(SIGMA2, alpha), vector(x)).coeffs)
    L = oracles.boost_matrix(alpha, 2)
    # either orientation of the rotor convention is a valid boost of rapidity alpha
    assert min(np.max(np.abs(out - L @ x)), np.max(np.abs(out - L.T @ x))) <= 1e-12


def test_spatial_rotation_by_bivector():
    R = rotor_exp(I * SIGMA3, math.pi / 2)
    out = sandwich(R, G1)
    assert out.is_grade(1)
    assert abs(abs(out["g2"]) - 1.0) <= 1e-12 and abs(out["g1"]) <= 1e-12


def test_rotor_normalization_enforced():
    with pytest.raises(ValueError):
        Rotor(2.0 * ONE)


def test_frame_split_and_join_round_trip():
    f = Frame.from_velocity([0.3, -0.2, 0.4])
    a = vector([1.5, -0.3, 0.8, 2.0])
    s, v = frame_split(a, f)
    assert frame_join(s, v, f).allclose(a)
    assert abs((a * a).scalar - (s * s - (v * v).scalar)) <= 1e-12


def test_frame_from_velocity_rejects_superluminal():
    with pytest.raises(ValueError):
        Frame.from_velocity([0.8, 0.7, 0.0])


def test_cross_product_of_relative_vectors():
    assert cross3(SIGMA1, SIGMA2).allclose(SIGMA3)
    assert cross3(SIGMA2, SIGMA1).allclose(-SIGMA3)


@pytest.mark.parametrize("a, b", [(G1, 2.0 * G2), (G0, 2.0 * G0 + G1), (G1 + G3, G2 - 0.5 * G3)])
def test_vector_product_polar_reconstructs_product(a, b):
    C, theta, na, nb = vector_product_polar(a, b)
    rebuilt = (C * C).scalar * na * nb * rotor_exp(C, 2.0 * theta).value
    assert rebuilt.allclose(a * b)


def test_grade_table():
    assert list(GRADES) == [0, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 3, 3, 3, 3, 4]
    with pytest.raises(ValueError):
        grade_array(np.zeros(16), 5)
