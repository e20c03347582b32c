"""Regenerate the plane-wave regression golden files from the lattice oracle.

Run from the repository root:  python tests/golden/make_golden.py
The package is not imported; the wave convention
``z = -z0 I exp(-s I k.x + I phi0)`` with ``z0 = (a_e0 + a_m0 I) / 2`` is
restated here and the time step follows ``cfl_fraction * min(h) / (sqrt(3) c)``.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import numpy as np

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE.parent))

import oracles  # noqa: E402

CONFIG = HERE.parent.parent / "configs" / "em_plane_wave_regression.json"
BLADES = ["1", "g0", "g1", "g2", "g3", "g01", "g02", "g03", "g12", "g13", "g23", "Ig0", "Ig1", "Ig2", "Ig3", "I"]


def golden_arrays(cfg: dict):
    c = float(cfg["medium"]["c"])
    lat = cfg["lattice"]
    dims, h = lat["dims"], lat["spacing"]
    dt = lat["cfl_fraction"] * min(h) / (math.sqrt(3.0) * c)
    t = lat["steps"] * dt
    (wave,) = cfg["waves"]
    s = wave.get("sign", 1)
    omega = wave["omega"]
    k_hat = np.asarray(wave["k_hat"], float)
    a_e0 = np.zeros(16)
    a_e0[1:5] = wave["a_e0"]
    a_m0 = np.zeros(16)
    a_m0[1:5] = wave["a_m0"]
    pseudo = np.zeros(16)
    pseudo[15] = 1.0
    z0 = 0.5 * a_e0 + 0.5 * oracles.product(a_m0, pseudo)
    amplitude = -oracles.product(z0, pseudo)
    kcov = -s * np.array([omega / c, *(-omega / c * k_hat)])
    axes = [h[i] * np.arange(dims[i]) for i in range(3)]
    X, Y, Z = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([X, Y, Z], axis=-1).reshape(-1, 3)
    pot, fld = oracles.leapfrog_plane_wave(amplitude, kcov, wave.get("phi0", 0.0), h, c, dt, t, pts)
    return lat["steps"], pts, pot, fld


def main() -> None:
    cfg = json.loads(CONFIG.read_text())
    steps, pts, pot, fld = golden_arrays(cfg)
    header = ",".join(["x", "y", "z", *BLADES])
    for name, data in (("potential", pot), ("field", fld)):
        path = HERE / f"em_plane_wave_regression_step{steps:06d}_{name}.csv"
        np.savetxt(path, np.hstack([pts, data]), delimiter=",", header=header, comments="", fmt="%.17g")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
