import json
import math
import os
import sys

# Run either against an installed package or a CMake build tree. The build
# tree is announced through DOSLAB_MODULE_DIR / DOSLAB_SOURCE_DIR.
_src = os.environ.get("DOSLAB_SOURCE_DIR")
if _src:
    sys.path.insert(0, os.path.join(_src, "python"))

import doslab


def test_version():
    assert doslab.__version__ == "0.1.0"


def test_closed_forms():
    assert math.isclose(doslab.free_laplace(2, 1.0), 1.0 / (4.0 * math.pi), rel_tol=1e-12)
    assert math.isclose(doslab.free_integrated_dos(2, 4.0), 1.0 / math.pi, rel_tol=1e-12)
    assert math.isclose(
        doslab.halfspace_laplace(2, 1.0, 2.0),
        0.5 * (1.0 + math.exp(-2.0)) / (4.0 * math.pi),
        rel_tol=1e-12,
    )
    assert math.isclose(doslab.heat_s_min(0.25), 0.625, rel_tol=1e-12)


def test_presets_round_trip():
    names = doslab.preset_names()
    assert "example1-free" in names
    assert "route-compare-free" in names
    cfg = doslab.preset("example1-free")
    assert cfg["method"] == "heat_bulk"
    assert cfg["half_width"] == 16.0
    h = doslab.config_hash(json.dumps(cfg))
    assert len(h) == 16
    int(h, 16)  # must be hex


def test_run_eigencount(tmp_path):
    report = doslab.run_preset("free-eigencount", str(tmp_path))
    assert report["pass"] is True
    assert len(report["checks"]) == 3
    written = sorted(p.name for p in tmp_path.iterdir())
    assert "free-eigencount_report.json" in written
    assert "free-eigencount_integrated.csv" in written


def test_direct_operations():
    diag = doslab.heat_diagonal(2, 12.0, 0.5, "dirichlet", '{"kind":"zero"}', 1.0)
    assert len(diag) == 47 * 47
    # center value sits within a few percent of 1/(4 pi s)
    center = diag[len(diag) // 2]
    assert abs(center - 1.0 / (4.0 * math.pi)) < 0.05 / (4.0 * math.pi)

    vals = doslab.integrated_dos(2, 20.0, 0.25, "periodic", '{"kind":"zero"}', [1.0, 4.0])
    assert abs(vals[0] - 1.0 / (4.0 * math.pi)) < 0.03 / (4.0 * math.pi)
    assert abs(vals[1] - 1.0 / math.pi) < 0.01 / math.pi
