import json
import os
from pathlib import Path

import pytest

import dampedmodes as dm

REF_CONFIG = Path(os.environ.get("DAMPEDMODES_TEST_DATA", Path(__file__).parents[2] / "tests" / "data")) / "ref.json"


@pytest.fixture(scope="module")
def ref():
    return dm.reference_medium()


@pytest.fixture(scope="module")
def first_gap(ref):
    a = dm.real_gaps(ref.cell_a, ref.mu0, 5.0)
    b = dm.real_gaps(ref.cell_b, ref.mu0, 5.0)
    return max(a[0][0], b[0][0]), min(a[0][1], b[0][1])


def test_cell_matrix_is_unimodular(ref):
    t = dm.cell_matrix(ref.cell_a, 0.3, complex(2.0, -0.1))
    det = t[0][0] * t[1][1] - t[0][1] * t[1][0]
    assert abs(det - 1) < 1e-12
    assert abs(dm.discriminant(ref.cell_a, 0.3, complex(2.0, -0.1)) - (t[0][0] + t[1][1])) < 1e-14


def test_reference_cells_are_valid(ref):
    assert dm.validate_cell(ref.cell_a) == []
    bad = dm.UnitCell([dm.Layer(1.0, 1.0, 0.3), dm.Layer(4.0, 1.0, 0.7)], "X")
    assert "not_symmetric" in dm.validate_cell(bad)


def test_undamped_root(ref, first_gap):
    lo, hi = first_gap
    omega, residual, winding = dm.find_root_real(ref, lo, hi)
    assert lo < omega < hi
    assert omega == pytest.approx(1.96353071315737, abs=1e-12)
    assert residual < 1e-10
    assert winding == 1
    assert abs(dm.interface_impedance(ref, 0.0, omega)) < 1e-10


def test_damped_root_and_mode(ref, first_gap):
    omega, residual, winding = dm.track_root(ref, *first_gap, 0.5)
    assert omega.real == pytest.approx(1.938091412767964, abs=1e-9)
    assert omega.imag == pytest.approx(-0.1835895921540833, abs=1e-9)
    assert winding == 1
    assert dm.winding_number(ref, 0.5, 1.75, 2.35, -0.25, 0.0) == 1
    lattice = dm.mode_lattice(ref, 0.5, omega, 6)
    assert [n for n, _, _ in lattice] == list(range(-6, 7))
    u = {n: v for n, v, _ in lattice}
    assert abs(u[0] - 1) < 1e-14
    assert abs(u[6]) < abs(u[3]) < abs(u[0])


def test_errors_are_exceptions(ref, first_gap):
    same = dm.InterfaceMedium(ref.cell_b, ref.cell_b, 1.0, 0.0)
    with pytest.raises(dm.Error):
        dm.find_root_real(same, *first_gap)


def test_load_and_cli(tmp_path):
    medium = dm.load_medium(str(REF_CONFIG))
    assert len(medium.cell_a.layers) == 3
    assert dm.run_cli(["validate", str(REF_CONFIG), "--out-dir", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "validate.json").read_text())
    assert report["ok"] is True
    assert report["manifest"]["command"] == "validate"
    assert dm.run_cli(["bogus"]) == 2
