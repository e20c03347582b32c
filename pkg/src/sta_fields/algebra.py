"""Spacetime algebra Cl(1,3) with signature (+,-,-,-).

Every multivector is stored as 16 real coefficients in the canonical blade
order::

    1; g0, g1, g2, g3; g01, g02, g03, g12, g13, g23; Ig0, Ig1, Ig2, Ig3; I

where ``I = g0 g1 g2 g3``.  None of the product signs are typed in by hand.
They all come from :func:`_reduce_word`, which multiplies generator words by
bubble-sorting them and contracting repeated generators against the metric.

Two layers are exposed:

* array kernels (``gp``, ``rev``, ``grade_array`` ...) that act on the last
  axis of any ``(..., 16)`` array, used by lattices and analytic fields;
* the immutable :class:`Multivector` value type built on top of them.

Conventions fixed here and used everywhere else in the package:

* ``dual(a) = a I`` (right multiplication);
* relative vectors ``sigma_k = g_k g0`` so that ``I = sigma1 sigma2 sigma3``;
* ``rotor_exp(B, theta) = exp(theta B / 2)`` and ``sandwich(R, a) = R a ~R``;
* ``frame_split(p) = (p.g0, p^g0)`` so that ``p = (s + p_vec) g0``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

__all__ = [
    "BLADE_NAMES",
    "GRADES",
    "METRIC",
    "Multivector",
    "Frame",
    "Rotor",
    "cayley_table",
    "gp",
    "rev",
    "grade_array",
    "dual_array",
    "involute",
    "outer_array",
    "inner_array",
    "left_mult_matrix",
    "right_mult_matrix",
    "geometric_product",
    "grade_project",
    "reverse",
    "dual",
    "outer",
    "inner",
    "rotor_exp",
    "sandwich",
    "frame_split",
    "frame_join",
    "cross3",
    "vector_product_polar",
    "parse_multivector",
    "vector",
    "relative_vector",
    "ONE",
    "G0",
    "G1",
    "G2",
    "G3",
    "I",
    "SIGMA1",
    "SIGMA2",
    "SIGMA3",
]

METRIC = (1.0, -1.0, -1.0, -1.0)

# Canonical blades as generator words (indices of gamma_mu).
_BLADE_WORDS: tuple[tuple[int, ...], ...] = (
    (),
    (0,), (1,), (2,), (3,),
    (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3),
    (0, 1, 2, 3, 0), (0, 1, 2, 3, 1), (0, 1, 2, 3, 2), (0, 1, 2, 3, 3),
    (0, 1, 2, 3),
)

BLADE_NAMES: tuple[str, ...] = (
    "1",
    "g0", "g1", "g2", "g3",
    "g01", "g02", "g03", "g12", "g13", "g23",
    "Ig0", "Ig1", "Ig2", "Ig3",
    "I",
)

GRADES: NDArray[np.int64] = np.array([0, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 3, 3, 3, 3, 4])


def _reduce_word(word: Sequence[int]) -> tuple[int, int]:
    """Reduce a product of generators to ``sign * e_bitmap``.

    Adjacent distinct generators are swapped (each swap flips the sign) until
    the word is sorted; equal neighbours are then contracted with the metric.
    """
    w = list(word)
    sign = 1
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(w) - 1:
            if w[i] > w[i + 1]:
                w[i], w[i + 1] = w[i + 1], w[i]
                sign = -sign
                changed = True
            elif w[i] == w[i + 1]:
                sign *= int(METRIC[w[i]])
                del w[i : i + 2]
                changed = True
                continue
            i += 1
    bitmap = 0
    for g in w:
        bitmap |= 1 << g
    return sign, bitmap


def _build_tables() -> tuple[NDArray, NDArray, NDArray, NDArray]:
    reduced = [_reduce_word(w) for w in _BLADE_WORDS]
    by_bitmap = {bm: (idx, s) for idx, (s, bm) in enumerate(reduced)}
    k_of = np.zeros((16, 16), dtype=np.int64)
    s_of = np.zeros((16, 16), dtype=np.float64)
    for i in range(16):
        for j in range(16):
            s, bm = _reduce_word(_BLADE_WORDS[i] + _BLADE_WORDS[j])
            k, sk = by_bitmap[bm]
            k_of[i, j] = k
            s_of[i, j] = s * sk
    # Gather form: out[k] = sum_i S2[i, k] a[i] b[J[i, k]]
    j_of = np.zeros((16, 16), dtype=np.int64)
    s2 = np.zeros((16, 16), dtype=np.float64)
    for i in range(16):
        for j in range(16):
            k = k_of[i, j]
            j_of[i, k] = j
            s2[i, k] = s_of[i, j]
    return k_of, s_of, j_of, s2


_K, _S, _J, _S2 = _build_tables()
_K.setflags(write=False)
_S.setflags(write=False)


def cayley_table() -> tuple[NDArray[np.int64], NDArray[np.float64]]:
    """Return ``(index, sign)`` with ``e_i e_j = sign[i, j] * e_index[i, j]``."""
    return _K.copy(), _S.copy()


# ---------------------------------------------------------------------------
# Array kernels
# ---------------------------------------------------------------------------

_REV_SIGN = np.where((GRADES == 2) | (GRADES == 3), -1.0, 1.0)
_INV_SIGN = np.where(GRADES % 2 == 1, -1.0, 1.0)


def gp(a: ArrayLike, b: ArrayLike) -> NDArray[np.float64]:
    """Geometric product over the last axis, broadcasting leading axes."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    shape = np.broadcast_shapes(a.shape, b.shape)
    out = np.zeros(shape, dtype=np.float64)
    if a.size == 0:
        return out
    # one pass to find the blades of ``a`` that are present anywhere
    active = np.flatnonzero(np.any(a.reshape(-1, 16) != 0.0, axis=0))
    for i in active:
        out += _S2[i] * a[..., i : i + 1] * np.take(b, _J[i], axis=-1)
    return out


def _scalar_contraction(a: NDArray, b: NDArray) -> NDArray[np.float64]:
    """``<a b>_0`` for an array ``a`` and a single multivector ``b``.

    Only ``e_i e_i`` has a scalar part, so this is a weighted sum over the
    blades present in ``b``.
    """
    weights = np.diagonal(_S) * b
    out = np.zeros(a.shape[:-1])
    for i in np.flatnonzero(weights):
        out = out + weights[i] * a[..., i]
    return out


def left_mult_matrix(a: ArrayLike) -> NDArray[np.float64]:
    """16x16 matrix ``L`` with ``L @ b == gp(a, b)``."""
    a = np.asarray(a, dtype=np.float64)
    m = np.zeros((16, 16))
    for i in range(16):
        for j in range(16):
            m[_K[i, j], j] += _S[i, j] * a[i]
    return m


def right_mult_matrix(b: ArrayLike) -> NDArray[np.float64]:
    """16x16 matrix ``R`` with ``R @ a == gp(a, b)``."""
    b = np.asarray(b, dtype=np.float64)
    m = np.zeros((16, 16))
    for i in range(16):
        for j in range(16):
            m[_K[i, j], i] += _S[i, j] * b[j]
    return m


def rev(a: ArrayLike) -> NDArray[np.float64]:
    """Reversion: flips the sign of grades 2 and 3."""
    return np.asarray(a, dtype=np.float64) * _REV_SIGN


def involute(a: ArrayLike) -> NDArray[np.float64]:
    """Grade involution: flips the sign of odd grades."""
    return np.asarray(a, dtype=np.float64) * _INV_SIGN


def grade_array(a: ArrayLike, k: int | Iterable[int]) -> NDArray[np.float64]:
    """Keep only the coefficients of grade ``k`` (or of a set of grades)."""
    ks = {k} if isinstance(k, (int, np.integer)) else set(k)
    for g in ks:
        if not 0 <= g <= 4:
            raise ValueError(f"grade must lie in 0..4, got {g}")
    mask = np.isin(GRADES, sorted(ks)).astype(np.float64)
    return np.asarray(a, dtype=np.float64) * mask


_PSEUDO = np.zeros(16)
_PSEUDO[15] = 1.0


def dual_array(a: ArrayLike) -> NDArray[np.float64]:
    """Right multiplication by the pseudoscalar, ``a I``."""
    return gp(a, _PSEUDO)


def _graded_product(a: NDArray, b: NDArray, rule) -> NDArray:
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape))
    for r in range(5):
        ar = grade_array(a, r)
        if not ar.any():
            continue
        for s in range(5):
            target = rule(r, s)
            if target is None or not 0 <= target <= 4:
                continue
            bs = grade_array(b, s)
            if not bs.any():
                continue
            out += grade_array(gp(ar, bs), target)
    return out


def outer_array(a: ArrayLike, b: ArrayLike) -> NDArray[np.float64]:
    """Outer product, the grade ``r + s`` part of each graded pair."""
    return _graded_product(np.asarray(a, float), np.asarray(b, float), lambda r, s: r + s)


def inner_array(a: ArrayLike, b: ArrayLike) -> NDArray[np.float64]:
    """Inner product, grade ``|r - s|`` part of each pair; scalars excluded."""
    return _graded_product(
        np.asarray(a, float),
        np.asarray(b, float),
        lambda r, s: abs(r - s) if r > 0 and s > 0 else None,
    )


# ---------------------------------------------------------------------------
# Value type
# ---------------------------------------------------------------------------


def _coerce(x: "Multivector | float | int") -> NDArray[np.float64]:
    if isinstance(x, Multivector):
        return x.coeffs
    if isinstance(x, (int, float, np.floating, np.integer)):
        out = np.zeros(16)
        out[0] = float(x)
        return out
    raise TypeError(f"cannot combine Multivector with {type(x).__name__}")


class Multivector:
    """Immutable element of Cl(1,3).

    ``*`` is the geometric product, ``^`` the outer product, ``|`` the inner
    product and ``~a`` the reverse.  Scalars mix freely.

    >>> (G1 * G1).scalar
    -1.0
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: ArrayLike | None = None):
        c = np.zeros(16) if coeffs is None else np.array(coeffs, dtype=np.float64)
        if c.shape != (16,):
            raise ValueError(f"a Multivector needs 16 coefficients, got shape {c.shape}")
        c.setflags(write=False)
        self._c = c

    # construction -------------------------------------------------------
    @classmethod
    def scalar_value(cls, x: float) -> "Multivector":
        return cls(_coerce(float(x)))

    @classmethod
    def blade(cls, name: str, coeff: float = 1.0) -> "Multivector":
        c = np.zeros(16)
        c[BLADE_NAMES.index(name)] = coeff
        return cls(c)

    @classmethod
    def from_dict(cls, blades: Mapping[str, float]) -> "Multivector":
        c = np.zeros(16)
        for name, value in blades.items():
            if name not in BLADE_NAMES:
                raise ValueError(f"unknown blade name {name!r}; expected one of {BLADE_NAMES}")
            c[BLADE_NAMES.index(name)] += float(value)
        return cls(c)

    # accessors -----------------------------------------------------------
    @property
    def coeffs(self) -> NDArray[np.float64]:
        return self._c

    @property
    def scalar(self) -> float:
        return float(self._c[0])

    @property
    def pseudoscalar(self) -> float:
        return float(self._c[15])

    def __getitem__(self, name: str | int) -> float:
        if isinstance(name, str):
            name = BLADE_NAMES.index(name)
        return float(self._c[name])

    def grade(self, k: int | Iterable[int]) -> "Multivector":
        return Multivector(grade_array(self._c, k))

    def grades(self, tol: float = 0.0) -> set[int]:
        return {int(g) for g in range(5) if np.any(np.abs(self._c[GRADES == g]) > tol)}

    def is_grade(self, k: int | Iterable[int], tol: float = 1e-12) -> bool:
        ks = {k} if isinstance(k, int) else set(k)
        scale = max(1.0, self.norm())
        rest = self._c * ~np.isin(GRADES, sorted(ks))
        return bool(np.max(np.abs(rest)) <= tol * scale)

    def norm(self) -> float:
        """Euclidean norm of the coefficient vector."""
        return float(np.linalg.norm(self._c))

    def reverse(self) -> "Multivector":
        return Multivector(rev(self._c))

    def dual(self) -> "Multivector":
        return Multivector(dual_array(self._c))

    def involute(self) -> "Multivector":
        return Multivector(involute(self._c))

    def allclose(self, other: "Multivector | float", rtol: float = 1e-10, atol: float = 1e-12) -> bool:
        o = _coerce(other)
        scale = max(np.max(np.abs(self._c)), np.max(np.abs(o)), 0.0)
        return bool(np.max(np.abs(self._c - o)) <= atol + rtol * scale)

    # arithmetic ----------------------------------------------------------
    def __add__(self, other):
        return Multivector(self._c + _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Multivector(self._c - _coerce(other))

    def __rsub__(self, other):
        return Multivector(_coerce(other) - self._c)

    def __neg__(self):
        return Multivector(-self._c)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return Multivector(gp(self._c, other._c))
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Multivector(self._c * float(other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Multivector(self._c * float(other))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Multivector(self._c / float(other))
        return NotImplemented

    def __xor__(self, other):
        return Multivector(outer_array(self._c, _coerce(other)))

    def __rxor__(self, other):
        return Multivector(outer_array(_coerce(other), self._c))

    def __or__(self, other):
        return Multivector(inner_array(self._c, _coerce(other)))

    def __invert__(self):
        return self.reverse()

    def __eq__(self, other):
        if not isinstance(other, (Multivector, int, float)):
            return NotImplemented
        return bool(np.array_equal(self._c, _coerce(other)))

    def __hash__(self):
        return hash(self._c.tobytes())

    def __repr__(self):
        terms = [
            f"{c:+.6g}*{n}" if n != "1" else f"{c:+.6g}"
            for c, n in zip(self._c, BLADE_NAMES)
            if c != 0.0
        ]
        return "Multivector(" + (" ".join(terms) if terms else "0") + ")"

    def to_text(self) -> str:
        return " ".join(repr(float(c)) for c in self._c)

    def to_dict(self) -> dict[str, float]:
        return {n: float(c) for n, c in zip(BLADE_NAMES, self._c) if c != 0.0}


def parse_multivector(text: str) -> Multivector:
    """Parse a fixture string.

    Either 16 whitespace-separated reals in canonical order, or a JSON object
    mapping blade names to coefficients (``{"g0": 1, "Ig3": -2}``).
    """
    stripped = text.strip()
    if stripped.startswith("{"):
        return Multivector.from_dict(json.loads(stripped))
    parts = stripped.split()
    if len(parts) != 16:
        raise ValueError(f"expected 16 coefficients, got {len(parts)}")
    return Multivector([float(p) for p in parts])


ONE = Multivector.blade("1")
G0 = Multivector.blade("g0")
G1 = Multivector.blade("g1")
G2 = Multivector.blade("g2")
G3 = Multivector.blade("g3")
I = Multivector.blade("I")
GAMMAS = (G0, G1, G2, G3)
SIGMA1 = G1 * G0
SIGMA2 = G2 * G0
SIGMA3 = G3 * G0


def vector(components: Sequence[float]) -> Multivector:
    """Grade-1 multivector ``sum_mu x^mu gamma_mu``."""
    c = np.zeros(16)
    c[1:5] = np.asarray(components, dtype=float)
    return Multivector(c)


def relative_vector(components: Sequence[float], frame: "Frame | None" = None) -> Multivector:
    """Relative 3-vector ``sum_k v_k sigma_k`` of a frame (default: lab)."""
    f = frame or Frame()
    out = np.zeros(16)
    for k in range(3):
        out += float(components[k]) * f.sigmas[k].coeffs
    return Multivector(out)


# ---------------------------------------------------------------------------
# Functional API
# ---------------------------------------------------------------------------


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    return a * b


def grade_project(a: Multivector, k: int) -> Multivector:
    if not isinstance(k, (int, np.integer)) or not 0 <= k <= 4:
        raise ValueError(f"grade must be an integer in 0..4, got {k!r}")
    return a.grade(int(k))


def reverse(a: Multivector) -> Multivector:
    return a.reverse()


def dual(a: Multivector) -> Multivector:
    return a.dual()


def outer(a: Multivector, b: Multivector) -> Multivector:
    return a ^ b


def inner(a: Multivector, b: Multivector) -> Multivector:
    return a | b


@dataclass(frozen=True)
class Rotor:
    """Unit even multivector, ``R ~R = 1`` to 1e-12."""

    value: Multivector

    def __post_init__(self):
        v = self.value
        if not v.is_grade({0, 2, 4}):
            raise ValueError("a rotor must be even-graded")
        check = v * v.reverse()
        if not check.allclose(ONE, rtol=0.0, atol=1e-12):
            raise ValueError(f"rotor is not unit: R~R = {check!r}")

    def __mul__(self, other: "Rotor") -> "Rotor":
        return Rotor(self.value * other.value)

    def reverse(self) -> "Rotor":
        return Rotor(self.value.reverse())


def rotor_exp(B: Multivector, theta: float) -> Rotor:
    """Half-angle rotor ``exp(theta B / 2)`` for a unit plane ``B``.

    ``B**2 == +1`` gives a boost (``cosh + B sinh``), ``B**2 == -1`` a
    rotation (``cos + B sin``).
    """
    if not B.is_grade(2):
        raise ValueError("rotor generator must be a homogeneous bivector")
    sq = B * B
    if not sq.is_grade(0) or abs(abs(sq.scalar) - 1.0) > 1e-12:
        raise ValueError(f"rotor generator must square to +1 or -1, got {sq!r}")
    Bc = B.grade(2)
    half = 0.5 * float(theta)
    if sq.scalar > 0:
        value = math.cosh(half) + math.sinh(half) * Bc
    else:
        value = math.cos(half) + math.sin(half) * Bc
    return Rotor(value)


def sandwich(R: Rotor | Multivector, a: Multivector) -> Multivector:
    """Two-sided action ``R a ~R``."""
    r = R.value if isinstance(R, Rotor) else R
    return r * a * r.reverse()


@dataclass(frozen=True)
class Frame:
    """Orthonormal frame ``gamma'_mu = R gamma_mu ~R`` with its 3D split.

    The default frame is the lab frame.  ``sigmas`` are the relative vectors
    ``gamma'_k gamma'_0`` and ``axials`` the spatial planes ``I sigma'_k``.
    """

    rotor: Rotor = field(default_factory=lambda: Rotor(ONE))
    gammas: tuple[Multivector, ...] = field(init=False, repr=False, compare=False)
    sigmas: tuple[Multivector, ...] = field(init=False, repr=False, compare=False)
    axials: tuple[Multivector, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        gammas = tuple(sandwich(self.rotor, g) for g in GAMMAS)
        sigmas = tuple(gammas[k] * gammas[0] for k in (1, 2, 3))
        axials = tuple(I * s for s in sigmas)
        object.__setattr__(self, "gammas", gammas)
        object.__setattr__(self, "sigmas", sigmas)
        object.__setattr__(self, "axials", axials)

    @classmethod
    def from_gamma0(cls, gamma0: Multivector) -> "Frame":
        """Frame reached from the lab by the pure boost taking g0 to ``gamma0``."""
        if not gamma0.is_grade(1):
            raise ValueError("gamma0 must be grade-1")
        sq = (gamma0 * gamma0).scalar
        if abs(sq - 1.0) > 1e-12 or gamma0["g0"] <= 0:
            raise ValueError("gamma0 must be a future-pointing unit timelike vector")
        num = ONE + gamma0 * G0
        return cls(Rotor(num / math.sqrt(2.0 * (1.0 + gamma0["g0"]))))

    @classmethod
    def from_velocity(cls, beta: Sequence[float]) -> "Frame":
        """Frame of an observer moving with velocity ``beta * c`` in the lab."""
        b = np.asarray(beta, dtype=float)
        speed = float(np.linalg.norm(b))
        if speed >= 1.0:
            raise ValueError("observer speed must be below c")
        gamma = 1.0 / math.sqrt(1.0 - speed * speed)
        return cls.from_gamma0(vector([gamma, *(gamma * b)]))

    @property
    def gamma0(self) -> Multivector:
        return self.gammas[0]

    # batched helpers ------------------------------------------------------
    def relative_components(self, biv: ArrayLike) -> NDArray[np.float64]:
        """Components ``v_k`` of the polar part ``sum_k v_k sigma_k``."""
        biv = np.asarray(biv, dtype=float)
        return np.stack([_scalar_contraction(biv, s.coeffs) for s in self.sigmas], axis=-1)

    def axial_components(self, biv: ArrayLike) -> NDArray[np.float64]:
        """Components ``b_k`` of the axial part ``sum_k b_k I sigma_k``."""
        biv = np.asarray(biv, dtype=float)
        return np.stack([-_scalar_contraction(biv, a.coeffs) for a in self.axials], axis=-1)

    def polar_array(self, comps: ArrayLike) -> NDArray[np.float64]:
        comps = np.asarray(comps, dtype=float)
        basis = np.stack([s.coeffs for s in self.sigmas])
        return comps @ basis

    def axial_array(self, comps: ArrayLike) -> NDArray[np.float64]:
        comps = np.asarray(comps, dtype=float)
        basis = np.stack([a.coeffs for a in self.axials])
        return comps @ basis

    def vector_array(self, comps: ArrayLike) -> NDArray[np.float64]:
        """Grade-1 array ``sum_mu x^mu gamma'_mu``."""
        comps = np.asarray(comps, dtype=float)
        basis = np.stack([g.coeffs for g in self.gammas])
        return comps @ basis

    def vector_components(self, vec: ArrayLike) -> NDArray[np.float64]:
        """Contravariant components ``x^mu`` of a grade-1 array."""
        vec = np.asarray(vec, dtype=float)
        out = [_scalar_contraction(vec, g.coeffs) * METRIC[m] for m, g in enumerate(self.gammas)]
        return np.stack(out, axis=-1)


LAB = Frame()


def frame_split(a: Multivector, f: Frame = LAB) -> tuple[float, Multivector]:
    """Split a vector as ``a = (s + v) gamma0`` and return ``(s, v)``.

    ``s = a . gamma0`` and ``v = a ^ gamma0`` is a relative vector of ``f``.
    """
    if not a.is_grade(1):
        raise ValueError("frame_split needs a grade-1 input")
    g0 = f.gamma0
    a1 = a.grade(1)
    s = (a1 | g0).scalar
    v = a1 ^ g0
    return s, v


def frame_join(s: float, v: Multivector, f: Frame = LAB) -> Multivector:
    """Inverse of :func:`frame_split`."""
    return (s + v) * f.gamma0


def _check_relative(u: Multivector, f: Frame) -> None:
    if not u.is_grade(2):
        raise ValueError("relative vectors are grade-2 in the spacetime algebra")
    axial = f.axial_components(u.coeffs)
    if np.max(np.abs(axial)) > 1e-12 * max(1.0, u.norm()):
        raise ValueError("input is not in the span of the frame's sigma_k")


def cross3(u: Multivector, v: Multivector, f: Frame = LAB) -> Multivector:
    """Gibbs cross product ``-I (u ^ v)`` of two relative vectors."""
    _check_relative(u, f)
    _check_relative(v, f)
    wedge = (u * v - v * u) / 2.0
    return -(I * wedge)


def vector_product_polar(a: Multivector, b: Multivector) -> tuple[Multivector, float, float, float]:
    """Polar form ``ab = C**2 |a||b| exp(theta C)`` of two vectors.

    Returns ``(C, theta, |a|, |b|)`` with ``C`` the unit plane of ``a ^ b``.
    Raises when the pair admits no real angle (e.g. null or mixed-signature
    pairs whose product is not a pure rotation or boost).
    """
    if not (a.is_grade(1) and b.is_grade(1)):
        raise ValueError("vector_product_polar needs grade-1 inputs")
    na = math.sqrt(abs((a * a).scalar))
    nb = math.sqrt(abs((b * b).scalar))
    if na < 1e-12 * max(a.norm(), 1e-300) or nb < 1e-12 * max(b.norm(), 1e-300):
        raise ValueError("null vectors have no polar form")
    w = a ^ b
    w2 = (w * w).scalar
    if abs(w2) < 1e-24 * (na * nb) ** 2:
        raise ValueError("parallel vectors: the plane is undefined")
    C = w / math.sqrt(abs(w2))
    c2 = 1.0 if w2 > 0 else -1.0
    x = (a * b) / (c2 * na * nb)
    x0 = x.scalar
    x2 = (x * C.reverse()).scalar / ((C * C.reverse()).scalar)
    if c2 < 0:
        theta = math.atan2(x2, x0)
    else:
        if x0 <= abs(x2):
            raise ValueError("pair is not related by a real boost angle")
        theta = math.atanh(x2 / x0)
    return C, theta, na, nb
