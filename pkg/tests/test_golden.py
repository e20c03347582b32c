"""Lattice run of the regression scenario against frozen oracle output.

The golden CSVs come from ``golden/make_golden.py``, which evaluates the
dispersion-matched plane wave through the discrete stencil symbols without
touching the package.
"""

import numpy as np
import pytest

from sta_fields.cli import main
from sta_fields.lattice import read_field_csv


@pytest.mark.parametrize("kind", ["field", "potential"])
def test_regression_snapshot_matches_golden(configs, golden, tmp_path, kind):
    assert main(["simulate", "--config", str(configs / "em_plane_wave_regression.json"), "--out", str(tmp_path)]) == 0
    data, _ = read_field_csv(tmp_path / "snapshots" / f"step000040_{kind}.csv")
    expected = np.loadtxt(golden / f"em_plane_wave_regression_step000040_{kind}.csv", delimiter=",", skiprows=1)
    assert expected.shape == (8**3, 19)
    assert np.max(np.abs(data.reshape(-1, 16) - expected[:, 3:])) <= 1e-8
