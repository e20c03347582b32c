"""Periodic 4D lattices of multivectors and the discrete Dirac operator.

Sites carry full 16-coefficient multivectors, stored as an array of shape
``(Nt, Nx, Ny, Nz, 16)``.  The time axis uses spacing ``c dt`` so every axis
is measured in meters.

Derivatives are periodic central differences,

    d_mu f(x) ~ (f(x + e_mu) - f(x - e_mu)) / (2 h_mu),

and the vector derivative is ``grad f = gamma^mu d_mu f`` with the reciprocal
basis ``gamma^0 = g0``, ``gamma^k = -g_k``.  Central differences along
different axes commute exactly on a periodic lattice, which is what makes the
discrete Bianchi identities hold to round-off.

The d'Alembertian uses the compact three-point stencil on each axis.  It
differs from ``vector_derivative(vector_derivative(f))`` at O(h^2); the
composed form is kept for cross-checks.

Example::

    spec = LatticeSpec((8, 8, 8, 8), (0.1, 0.1, 0.1, 0.1))
    f = MultivectorField.random(spec, np.random.default_rng(0), grades=2)
    curl_sq, div_sq = bianchi_residuals(f)
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .algebra import BLADE_NAMES, GRADES, Multivector, dual_array, gp, grade_array, rev
from .analytic import GAMMA_UP, AnalyticField
from .parallel import chunked

__all__ = [
    "LatticeSpec",
    "MultivectorField",
    "central_diff",
    "second_diff",
    "left_basis_mult",
    "vector_derivative",
    "curl4",
    "div4",
    "bianchi_residuals",
    "dalembertian",
    "write_field_csv",
    "read_field_csv",
]

FORMAT_TAG = "sta-fields-lattice/1"


@dataclass(frozen=True)
class LatticeSpec:
    dims: tuple[int, int, int, int]
    spacing: tuple[float, float, float, float]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        spacing = tuple(float(h) for h in self.spacing)
        if len(dims) != 4 or len(spacing) != 4:
            raise ValueError("a lattice needs 4 dims and 4 spacings")
        if any(d < 4 for d in dims):
            raise ValueError(f"every lattice dimension must be at least 4, got {dims}")
        if any(not h > 0 for h in spacing):
            raise ValueError(f"spacings must be positive, got {spacing}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "spacing", spacing)

    @property
    def sites(self) -> int:
        return int(np.prod(self.dims))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    def coordinates(self, origin: Sequence[float] = (0.0, 0.0, 0.0, 0.0)) -> NDArray[np.float64]:
        """Site coordinates ``(ct, x, y, z)``, shape ``dims + (4,)``."""
        axes = [o + h * np.arange(n) for o, h, n in zip(origin, self.spacing, self.dims)]
        grids = np.meshgrid(*axes, indexing="ij")
        return np.stack(grids, axis=-1)

    def wave_numbers(self, modes: Sequence[int]) -> NDArray[np.float64]:
        """Lattice-periodic ``k_mu = 2 pi m_mu / (N_mu h_mu)``."""
        return np.array([2 * np.pi * m / (n * h) for m, n, h in zip(modes, self.dims, self.spacing)])

    def to_json(self) -> dict:
        return {"dims": list(self.dims), "spacing": list(self.spacing)}


# ---------------------------------------------------------------------------
# Stencil kernels on raw arrays (shared with the simulator)
# ---------------------------------------------------------------------------


def central_diff(data: NDArray, axis: int, h: float) -> NDArray:
    return (np.roll(data, -1, axis=axis) - np.roll(data, 1, axis=axis)) / (2.0 * h)


def second_diff(data: NDArray, axis: int, h: float) -> NDArray:
    return (np.roll(data, -1, axis=axis) - 2.0 * data + np.roll(data, 1, axis=axis)) / (h * h)


def _signed_perm(a: NDArray) -> tuple[NDArray, NDArray]:
    """Represent left multiplication by a single signed blade as (perm, sign)."""
    nz = np.flatnonzero(a)
    if len(nz) != 1:
        raise ValueError("expected a single blade")
    probe = np.eye(16)
    img = gp(a, probe)  # row j is a * e_j
    perm = np.zeros(16, dtype=int)
    sign = np.zeros(16)
    for j in range(16):
        k = int(np.flatnonzero(img[j])[0])
        perm[k] = j
        sign[k] = img[j, k]
    return perm, sign


_LEFT_GAMMA_UP = [_signed_perm(GAMMA_UP[mu]) for mu in range(4)]


def left_basis_mult(mu: int, data: NDArray) -> NDArray:
    """``gamma^mu * data`` on the last axis, as a signed permutation."""
    perm, sign = _LEFT_GAMMA_UP[mu]
    return np.take(data, perm, axis=-1) * sign


# ---------------------------------------------------------------------------
# Field container
# ---------------------------------------------------------------------------


class MultivectorField:
    """Multivector values on a periodic 4D lattice (treated as immutable)."""

    __slots__ = ("spec", "data")

    def __init__(self, spec: LatticeSpec, data: ArrayLike):
        arr = np.asarray(data, dtype=np.float64)
        if arr.shape != spec.dims + (16,):
            raise ValueError(f"data shape {arr.shape} does not match lattice {spec.dims + (16,)}")
        self.spec = spec
        self.data = arr

    # constructors ----------------------------------------------------------
    @classmethod
    def zeros(cls, spec: LatticeSpec) -> "MultivectorField":
        return cls(spec, np.zeros(spec.dims + (16,)))

    @classmethod
    def constant(cls, spec: LatticeSpec, value: Multivector) -> "MultivectorField":
        return cls(spec, np.broadcast_to(value.coeffs, spec.dims + (16,)).copy())

    @classmethod
    def random(cls, spec: LatticeSpec, rng: np.random.Generator, grades: int | Iterable[int] | None = None) -> "MultivectorField":
        data = rng.standard_normal(spec.dims + (16,))
        if grades is not None:
            data = grade_array(data, grades)
        return cls(spec, data)

    @classmethod
    def from_analytic(cls, field: AnalyticField, spec: LatticeSpec, origin: Sequence[float] = (0.0, 0.0, 0.0, 0.0)) -> "MultivectorField":
        return cls(spec, field.evaluate(spec.coordinates(origin)))

    # helpers ---------------------------------------------------------------
    def _like(self, data: NDArray) -> "MultivectorField":
        return MultivectorField(self.spec, data)

    def _check(self, other: "MultivectorField") -> None:
        if other.spec != self.spec:
            raise ValueError(f"lattice mismatch: {self.spec} vs {other.spec}")

    def norm_max(self) -> float:
        return float(np.max(np.abs(self.data))) if self.data.size else 0.0

    def norm_l2(self) -> float:
        return float(np.sqrt(np.sum(self.data * self.data)))

    def grade(self, k: int | Iterable[int]) -> "MultivectorField":
        return self._like(grade_array(self.data, k))

    def reverse(self) -> "MultivectorField":
        return self._like(rev(self.data))

    def dual(self) -> "MultivectorField":
        return self._like(dual_array(self.data))

    def at(self, index: Sequence[int]) -> Multivector:
        return Multivector(self.data[tuple(index)])

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, MultivectorField):
            self._check(other)
            return self._like(self.data + other.data)
        if isinstance(other, Multivector):
            return self._like(self.data + other.coeffs)
        if isinstance(other, (int, float)):
            return self + Multivector.scalar_value(other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return self._like(-self.data)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self._like(self.data * float(other))
        if isinstance(other, Multivector):
            return self._like(chunked(lambda d: gp(d, other.coeffs), self.data))
        if isinstance(other, MultivectorField):
            self._check(other)
            return self._like(chunked(gp, self.data, other.data))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self._like(self.data * float(other))
        if isinstance(other, Multivector):
            return self._like(chunked(lambda d: gp(other.coeffs, d), self.data))
        return NotImplemented

    def __truediv__(self, s):
        return self._like(self.data / float(s))

    def left_mul(self, a: Multivector) -> "MultivectorField":
        return a * self

    # calculus --------------------------------------------------------------
    def partial(self, mu: int) -> "MultivectorField":
        return self._like(central_diff(self.data, mu, self.spec.spacing[mu]))

    def vector_derivative(self) -> "MultivectorField":
        return vector_derivative(self)

    def curl4(self) -> "MultivectorField":
        return curl4(self)

    def div4(self) -> "MultivectorField":
        return div4(self)

    def dalembertian(self) -> "MultivectorField":
        return dalembertian(self)

    # io --------------------------------------------------------------------
    def to_csv(self, path: str | Path, metadata: dict | None = None) -> None:
        write_field_csv(path, self.data, self.spec.spacing, metadata)

    @classmethod
    def from_csv(cls, path: str | Path) -> "MultivectorField":
        data, meta = read_field_csv(path)
        return cls(LatticeSpec(tuple(meta["dims"]), tuple(meta["spacing"])), data)

    def __repr__(self):
        return f"MultivectorField(dims={self.spec.dims}, spacing={self.spec.spacing})"


def _raw_vector_derivative(data: NDArray, spacing: Sequence[float], axes: Sequence[int] = (0, 1, 2, 3)) -> NDArray:
    out = np.zeros_like(data)
    for mu in axes:
        out += left_basis_mult(mu, central_diff(data, mu, spacing[mu]))
    return out


def vector_derivative(f: MultivectorField) -> MultivectorField:
    """Discrete ``grad f = gamma^mu d_mu f`` with periodic central differences."""
    return MultivectorField(f.spec, _raw_vector_derivative(f.data, f.spec.spacing))


def curl4(f: MultivectorField) -> MultivectorField:
    """Grade-raising part ``grad ^ f``, taken grade by grade."""
    out = np.zeros_like(f.data)
    for g in range(4):
        part = grade_array(f.data, g)
        if part.any():
            out += grade_array(_raw_vector_derivative(part, f.spec.spacing), g + 1)
    return MultivectorField(f.spec, out)


def div4(f: MultivectorField) -> MultivectorField:
    """Grade-lowering part ``grad . f``; zero on scalars."""
    out = np.zeros_like(f.data)
    for g in range(1, 5):
        part = grade_array(f.data, g)
        if part.any():
            out += grade_array(_raw_vector_derivative(part, f.spec.spacing), g - 1)
    return MultivectorField(f.spec, out)


def bianchi_residuals(f: MultivectorField) -> tuple[float, float]:
    """Max-norms of ``grad^(grad^f)`` and ``grad.(grad.f)``."""
    return curl4(curl4(f)).norm_max(), div4(div4(f)).norm_max()


def dalembertian(f: MultivectorField) -> MultivectorField:
    """``(d_ct^2 - sum_k d_k^2) f`` with compact three-point stencils."""
    h = f.spec.spacing
    out = second_diff(f.data, 0, h[0])
    for k in (1, 2, 3):
        out = out - second_diff(f.data, k, h[k])
    return MultivectorField(f.spec, out)


# ---------------------------------------------------------------------------
# CSV + JSON sidecar
# ---------------------------------------------------------------------------

_COLUMNS = ["t", "x", "y", "z", *BLADE_NAMES]


def _sidecar(path: Path) -> Path:
    return path.with_suffix(path.suffix + ".json")


def write_field_csv(path: str | Path, data: NDArray, spacing: Sequence[float], metadata: dict | None = None) -> None:
    """Write ``(Nt, Nx, Ny, Nz, 16)`` data as CSV plus a JSON sidecar.

    Floats use 17 significant digits, enough for an exact binary round trip.
    The sidecar records dims and spacing; snapshot files may have ``Nt == 1``.
    """
    path = Path(path)
    data = np.asarray(data, dtype=np.float64)
    if data.ndim != 5 or data.shape[-1] != 16:
        raise ValueError("expected data of shape (Nt, Nx, Ny, Nz, 16)")
    dims = data.shape[:4]
    idx = np.indices(dims).reshape(4, -1).T
    flat = data.reshape(-1, 16)
    with path.open("w", encoding="ascii", newline="") as fh:
        fh.write(",".join(_COLUMNS) + "\n")
        for row_idx, row in zip(idx, flat):
            fh.write(",".join(str(int(i)) for i in row_idx))
            fh.write(",")
            fh.write(",".join("%.17g" % v for v in row))
            fh.write("\n")
    meta = {"format": FORMAT_TAG, "dims": [int(d) for d in dims], "spacing": [float(h) for h in spacing], "columns": _COLUMNS}
    if metadata:
        meta["metadata"] = metadata
    _sidecar(path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def read_field_csv(path: str | Path) -> tuple[NDArray, dict]:
    path = Path(path)
    meta = json.loads(_sidecar(path).read_text())
    if meta.get("format") != FORMAT_TAG:
        raise ValueError(f"{path}: unknown sidecar format {meta.get('format')!r}")
    with path.open("r", encoding="ascii") as fh:
        header = fh.readline().strip().split(",")
        if header != _COLUMNS:
            raise ValueError(f"{path}: unexpected header {header}")
        table = np.loadtxt(fh, delimiter=",", dtype=np.float64, ndmin=2)
    dims = tuple(meta["dims"])
    data = np.zeros(dims + (16,))
    if table.size:
        idx = table[:, :4].astype(int)
        data[idx[:, 0], idx[:, 1], idx[:, 2], idx[:, 3]] = table[:, 4:]
    return data, meta
