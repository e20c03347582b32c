"""Scenario configuration: JSON schema, defaults and builders.

A scenario is a JSON object with a ``theory`` discriminator (``"em"`` or
``"acoustic"``) and blocks for the medium, lattice, waves, sources, probes
and output.  Validation happens before any computation; unknown keys are
rejected and every message carries a ``$.path`` to the offending entry.

:func:`load_config` returns a :class:`ScenarioConfig` with all defaults
filled in, and ``ScenarioConfig.from_dict(cfg.to_dict()) == cfg`` holds for
every valid configuration.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from .acoustic import AcMedium, AcProbe, ac_plane_wave
from .algebra import BLADE_NAMES, vector
from .analytic import AnalyticField
from .em import EmMedium, EmProbe, em_plane_wave
from .simulator import Grid, cfl_limit, gaussian_source

__all__ = ["AC_COLUMNS", "EM_COLUMNS", "ConfigError", "SCHEMA", "ScenarioConfig", "load_config", "validate"]


class ConfigError(ValueError):
    """Invalid scenario configuration (exit status 2 on the command line)."""


# Column groups of the wave dump, in output order.
EM_COLUMNS = ("E", "H", "W_e", "W_m", "energy", "momentum", "spin", "residual")
AC_COLUMNS = ("P", "v", "P_w", "w", "energy", "momentum", "spin", "residual")

_num = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}
_vec3 = {"type": "array", "items": _num, "minItems": 3, "maxItems": 3}
_vec4 = {"type": "array", "items": _num, "minItems": 4, "maxItems": 4}


def _obj(props: dict, required: tuple = ()) -> dict:
    return {"type": "object", "properties": props, "required": list(required), "additionalProperties": False}


_EM_MEDIUM = _obj(
    {
        "epsilon": _pos,
        "mu": _pos,
        "c": _pos,
        "zeta": _pos,
        "lambda_minus": _pos,
        "lambda_plus": _pos,
    }
)
_AC_MEDIUM = _obj(
    {
        "rho": _pos,
        "beta": _pos,
        "c": _pos,
        "lambda_minus": _pos,
        "lambda_plus": _pos,
        "lambda_4": _pos,
    }
)
_LATTICE = _obj(
    {
        "dims": {"type": "array", "items": {"type": "integer", "minimum": 4}, "minItems": 3, "maxItems": 3},
        "spacing": {"type": "array", "items": _pos, "minItems": 3, "maxItems": 3},
        "origin": _vec3,
        "dt": _pos,
        "cfl_fraction": {"type": "number", "exclusiveMinimum": 0},
        "steps": {"type": "integer", "minimum": 0},
        "scheme": {"enum": ["wave", "dirac"]},
        "lattice_dispersion": {"type": "boolean"},
        "time": _num,
    },
    ("dims", "spacing"),
)
_WAVE_COMMON = {
    "k_hat": _vec3,
    "omega": _pos,
    "sign": {"enum": [1, -1]},
    "phi0": _num,
}
_EM_WAVE = _obj({**_WAVE_COMMON, "a_e0": _vec4, "a_m0": _vec4}, ("k_hat", "omega"))
_AC_WAVE = _obj(
    {**_WAVE_COMMON, "amplitude": _pos, "branch": {"enum": ["scalar-only", "full-spinor"]}, "r_n": _vec4, "r_s": _vec4},
    ("k_hat", "omega", "amplitude"),
)
_SOURCE = _obj(
    {
        "type": {"enum": ["gaussian"]},
        "blades": {"type": "object", "propertyNames": {"enum": list(BLADE_NAMES)}, "additionalProperties": _num},
        "center": _vec3,
        "width": _pos,
        "omega": {"type": "number", "minimum": 0},
        "phase": _num,
    },
    ("blades", "center", "width"),
)
_EM_PROBE = _obj(
    {"q_e": _num, "q_m": _num, "mass": _pos, "position": _vec3, "velocity": _vec3},
    ("mass", "position"),
)
_AC_PROBE = _obj(
    {
        "rho_dot": _num,
        "force": _vec3,
        "vorticity": _vec3,
        "rho_dot_w": _num,
        "mass": _pos,
        "position": _vec3,
        "velocity": _vec3,
    },
    ("mass", "position"),
)
_OUTPUT = _obj(
    {
        "directory": {"type": "string", "minLength": 1},
        "cadence": {"type": "integer", "minimum": 0},
        "snapshots": {"type": "array", "items": {"enum": ["field", "potential"]}, "uniqueItems": True},
        "spin_samples": {"type": "integer", "minimum": 4},
        "columns": {"type": "array", "items": {"enum": sorted(set(EM_COLUMNS) | set(AC_COLUMNS))}, "uniqueItems": True},
    }
)
_NOISE = _obj({"amplitude": {"type": "number", "minimum": 0}, "modes": {"type": "integer", "minimum": 1}})

SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "theory": {"enum": ["em", "acoustic"]},
        "seed": {"type": "integer", "minimum": 0},
        "medium": {"type": "object"},
        "lattice": _LATTICE,
        "waves": {"type": "array"},
        "sources": {"type": "array", "items": _SOURCE},
        "probes": {"type": "array"},
        "noise": _NOISE,
        "output": _OUTPUT,
    },
    "required": ["theory", "lattice"],
    "additionalProperties": False,
    "allOf": [
        {
            "if": {"properties": {"theory": {"const": "em"}}},
            "then": {"properties": {"medium": _EM_MEDIUM, "waves": {"items": _EM_WAVE}, "probes": {"items": _EM_PROBE}}},
        },
        {
            "if": {"properties": {"theory": {"const": "acoustic"}}},
            "then": {"properties": {"medium": _AC_MEDIUM, "waves": {"items": _AC_WAVE}, "probes": {"items": _AC_PROBE}}},
        },
    ],
}

_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


def _path(err: jsonschema.ValidationError) -> str:
    out = "$"
    for part in err.absolute_path:
        out += f"[{part}]" if isinstance(part, int) else f".{part}"
    return out


def validate(raw: Any) -> None:
    """Raise :class:`ConfigError` listing every schema violation with its path."""
    errors = sorted(_VALIDATOR.iter_errors(raw), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        lines = [f"{_path(e)}: {e.message}" for e in errors]
        raise ConfigError("invalid scenario config:\n  " + "\n  ".join(lines))


# ---------------------------------------------------------------------------
# Defaults
# ---------------------------------------------------------------------------


def _medium_defaults(theory: str, m: dict) -> dict:
    m = dict(m)
    if theory == "em":
        if ("c" in m) != ("zeta" in m):
            raise ConfigError("$.medium: give both c and zeta, or neither")
        if "c" in m and ("epsilon" in m or "mu" in m):
            raise ConfigError("$.medium: use either (epsilon, mu) or (c, zeta), not both")
        if "c" in m:
            c, zeta = m.pop("c"), m.pop("zeta")
            m["epsilon"], m["mu"] = 1.0 / (zeta * c), zeta / c
        base = EmMedium()
        m.setdefault("epsilon", base.epsilon)
        m.setdefault("mu", base.mu)
        m.setdefault("lambda_minus", 0.5)
        m.setdefault("lambda_plus", 0.5)
    else:
        if "c" in m and "beta" in m:
            raise ConfigError("$.medium: use either beta or c, not both")
        m.setdefault("rho", AcMedium().rho)
        if "c" in m:
            m["beta"] = 1.0 / (m["rho"] * m.pop("c") ** 2)
        m.setdefault("beta", AcMedium().beta)
        for key in ("lambda_minus", "lambda_plus", "lambda_4"):
            m.setdefault(key, 0.5)
    return {k: float(v) for k, v in sorted(m.items())}


def _wave_defaults(theory: str, w: dict) -> dict:
    w = dict(w)
    w.setdefault("sign", 1)
    w.setdefault("phi0", 0.0)
    if theory == "em":
        w.setdefault("a_e0", [0.0, 0.0, 0.0, 0.0])
        w.setdefault("a_m0", [0.0, 0.0, 0.0, 0.0])
    else:
        w.setdefault("branch", "scalar-only")
        w.setdefault("r_n", [0.0, 0.0, 0.0, 0.0])
        w.setdefault("r_s", [0.0, 0.0, 0.0, 0.0])
    return w


def _source_defaults(s: dict) -> dict:
    s = dict(s)
    s.setdefault("type", "gaussian")
    s.setdefault("omega", 0.0)
    s.setdefault("phase", 0.0)
    return s


def _probe_defaults(theory: str, p: dict) -> dict:
    p = dict(p)
    p.setdefault("velocity", [0.0, 0.0, 0.0])
    if theory == "em":
        p.setdefault("q_e", 0.0)
        p.setdefault("q_m", 0.0)
    else:
        p.setdefault("rho_dot", 0.0)
        p.setdefault("force", [0.0, 0.0, 0.0])
        p.setdefault("vorticity", [0.0, 0.0, 0.0])
        p.setdefault("rho_dot_w", 0.0)
    return p


def _lattice_defaults(lat: dict) -> dict:
    lat = dict(lat)
    lat.setdefault("origin", [0.0, 0.0, 0.0])
    lat.setdefault("steps", 0)
    lat.setdefault("scheme", "wave")
    lat.setdefault("lattice_dispersion", False)
    lat.setdefault("time", 0.0)
    if "dt" in lat and "cfl_fraction" in lat:
        raise ConfigError("$.lattice: use either dt or cfl_fraction, not both")
    if "dt" not in lat:
        lat.setdefault("cfl_fraction", 0.5)
    return lat


def _output_defaults(theory: str, out: dict) -> dict:
    out = dict(out)
    allowed = EM_COLUMNS if theory == "em" else AC_COLUMNS
    for i, col in enumerate(out.get("columns", [])):
        if col not in allowed:
            raise ConfigError(f"$.output.columns[{i}]: {col!r} is not a {theory} column (choose from {', '.join(allowed)})")
    out.setdefault("columns", list(allowed))
    out.setdefault("directory", "out")
    out.setdefault("cadence", 0)
    out.setdefault("snapshots", ["field"])
    out.setdefault("spin_samples", 32)
    return out


def _normalize(obj: Any) -> Any:
    """Canonical JSON-compatible form: lists for arrays, floats kept as given."""
    if isinstance(obj, dict):
        return {k: _normalize(v) for k, v in sorted(obj.items())}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    return obj


@dataclass(frozen=True)
class ScenarioConfig:
    theory: str
    seed: int
    medium: dict
    lattice: dict
    waves: list
    sources: list
    probes: list
    noise: dict
    output: dict

    @classmethod
    def from_dict(cls, raw: Any) -> "ScenarioConfig":
        validate(raw)
        raw = copy.deepcopy(raw)
        theory = raw["theory"]
        noise = dict(raw.get("noise", {}))
        noise.setdefault("amplitude", 0.0)
        noise.setdefault("modes", 2)
        cfg = cls(
            theory=theory,
            seed=int(raw.get("seed", 0)),
            medium=_normalize(_medium_defaults(theory, raw.get("medium", {}))),
            lattice=_normalize(_lattice_defaults(raw["lattice"])),
            waves=_normalize([_wave_defaults(theory, w) for w in raw.get("waves", [])]),
            sources=_normalize([_source_defaults(s) for s in raw.get("sources", [])]),
            probes=_normalize([_probe_defaults(theory, p) for p in raw.get("probes", [])]),
            noise=_normalize(noise),
            output=_normalize(_output_defaults(theory, raw.get("output", {}))),
        )
        validate(cfg.to_dict())
        return cfg

    def to_dict(self) -> dict:
        return copy.deepcopy(
            {
                "theory": self.theory,
                "seed": self.seed,
                "medium": self.medium,
                "lattice": self.lattice,
                "waves": self.waves,
                "sources": self.sources,
                "probes": self.probes,
                "noise": self.noise,
                "output": self.output,
            }
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    # builders --------------------------------------------------------------
    def build_medium(self) -> EmMedium | AcMedium:
        m = self.medium
        if self.theory == "em":
            return EmMedium(m["epsilon"], m["mu"], m["lambda_minus"], m["lambda_plus"])
        return AcMedium(m["rho"], m["beta"], m["lambda_minus"], m["lambda_plus"], m["lambda_4"])

    def build_grid(self) -> Grid:
        lat = self.lattice
        return Grid(tuple(lat["dims"]), tuple(lat["spacing"]), tuple(lat["origin"]))

    def time_step(self) -> float:
        lat = self.lattice
        if "dt" in lat:
            return float(lat["dt"])
        return float(lat["cfl_fraction"]) * cfl_limit(self.build_grid(), self.build_medium().c)

    def build_waves(self) -> list:
        medium = self.build_medium()
        out = []
        for i, w in enumerate(self.waves):
            try:
                if self.theory == "em":
                    out.append(
                        em_plane_wave(medium, w["k_hat"], w["omega"], w["sign"], vector(w["a_e0"]), vector(w["a_m0"]), w["phi0"])
                    )
                else:
                    out.append(
                        ac_plane_wave(
                            medium, w["k_hat"], w["omega"], w["sign"], w["amplitude"], w["phi0"], w["branch"], w["r_n"], w["r_s"]
                        )
                    )
            except ValueError as exc:
                raise ConfigError(f"$.waves[{i}]: {exc}") from exc
        return out

    def wave_potential(self) -> AnalyticField:
        """Summed potential (``z_em`` or ``psi_ac``) of all configured waves."""
        total = AnalyticField.zero()
        for w in self.build_waves():
            total = total + (w.z if self.theory == "em" else w.psi)
        return total

    def wave_field(self) -> AnalyticField:
        """Summed measured field (``psi_em`` or ``z_ac``) of all configured waves."""
        total = AnalyticField.zero()
        for w in self.build_waves():
            total = total + (w.psi if self.theory == "em" else w.z)
        return total

    def build_sources(self) -> list:
        c = self.build_medium().c
        allowed = (1, 3) if self.theory == "em" else (0, 2, 4)
        out = []
        for i, s in enumerate(self.sources):
            coeffs = np.zeros(16)
            for name, val in s["blades"].items():
                if _grade_of(name) not in allowed:
                    raise ConfigError(f"$.sources[{i}].blades.{name}: {self.theory} sources only take grades {list(allowed)}")
                coeffs[BLADE_NAMES.index(name)] = float(val)
            out.append(gaussian_source(coeffs, s["center"], s["width"], s["omega"], c, s["phase"]))
        return out

    def build_probes(self) -> list:
        c = self.build_medium().c
        t0 = float(self.lattice["time"])
        out = []
        for i, p in enumerate(self.probes):
            try:
                if self.theory == "em":
                    out.append(EmProbe.moving(p["q_e"], p["q_m"], p["mass"], p["position"], p["velocity"], c, t0))
                else:
                    out.append(
                        AcProbe.moving(
                            p["rho_dot"], p["force"], p["vorticity"], p["rho_dot_w"], p["mass"], p["position"], p["velocity"], c, t0
                        )
                    )
            except ValueError as exc:
                raise ConfigError(f"$.probes[{i}]: {exc}") from exc
        return out

    def noise_field(self, grid: Grid, grades) -> np.ndarray | None:
        """Seeded smooth periodic perturbation restricted to ``grades``, or ``None``."""
        amp = float(self.noise["amplitude"])
        if amp == 0.0:
            return None
        rng = np.random.default_rng(self.seed)
        mask = np.isin(np.array([_grade_of(n) for n in BLADE_NAMES]), grades)
        pts = grid.points(0.0)[..., 1:]
        L = grid.lengths
        out = np.zeros(grid.shape)
        modes = int(self.noise["modes"])
        for _ in range(modes):
            m = rng.integers(-modes, modes + 1, size=3)
            phase = rng.uniform(0.0, 2.0 * math.pi)
            coeffs = rng.normal(size=16) * mask
            arg = pts @ (2.0 * math.pi * m / L) + phase
            out += np.cos(arg)[..., None] * coeffs
        return amp * out


def _grade_of(name: str) -> int:
    if name == "1":
        return 0
    if name == "I":
        return 4
    if name.startswith("I"):
        return 3
    return len(name) - 1


def load_config(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno}, column {exc.colno})") from exc
    return ScenarioConfig.from_dict(raw)
