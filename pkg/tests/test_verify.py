import json
import subprocess
import sys

import numpy as np
import pytest

from holomat import verify
from holomat.models import catalog


def test_theorem_1_2_branches():
    r = verify.verify_theorem_1_2(catalog("fubini-study"), "chern", samples=2)
    assert r["status"] == "pass"
    assert r["branch"] == "conclusion-Kahler"
    r = verify.verify_theorem_1_2(catalog("complex-lie-group-2d"), "chern")
    assert r["status"] == "pass"
    assert r["branch"] == "generalized-Calabi-Yau"
    r = verify.verify_theorem_1_2(catalog("hopf-surface"), "bismut", samples=2)
    assert r["status"] == "pass"
    for key in ("nabla_torsion_residual", "chern_torsion_max", "ric1_max",
                "holonomy_dim", "irreducible"):
        assert key in r["evidence"]


def test_prop_lich2_branches():
    flat_fs = catalog("product", factors=("flat", "fubini-study"),
                      factor_params=({"m": 2}, {"m": 2}))
    r = verify.verify_prop_lich2(flat_fs, "chern", samples=2)
    assert r["status"] == "pass"
    assert r["evidence"]["subspaces_with_zero_ricci"] > 0
    lie_fs = catalog("product",
                     factors=("complex-lie-group-2d", "fubini-study"),
                     factor_params=({}, {"m": 2}))
    r = verify.verify_prop_lich2(lie_fs, "chern", samples=2)
    assert r["status"] == "pass"
    assert r["evidence"]["projection_residual"] < 1e-4
    r = verify.verify_prop_lich2(catalog("fubini-study"), "chern", samples=2)
    assert r["status"] == "hypothesis-not-met"
    assert r["branch"] == "holonomy-irreducible"


def test_bracket_jacobi_hopf():
    r = verify.verify_bracket_jacobi(catalog("hopf-surface"), samples=3)
    assert r["status"] == "pass"
    ev = r["evidence"]
    assert ev["jacobi_chern_bracket"] < 1e-4
    assert ev["jacobi_bismut_bracket"] < 1e-4
    assert ev["ideal_mixing"] < 1e-14
    assert ev["holo_curvature_max"] < 1e-4


def test_bracket_jacobi_hypothesis_gate():
    r = verify.verify_bracket_jacobi(catalog("complex-lie-group-2d"))
    assert r["status"] == "hypothesis-not-met"
    assert r["branch"] == "bismut-torsion-not-parallel"


def test_prop_cy_examples():
    r = verify.verify_prop_cy(catalog("flat"), "chern", samples=2)
    assert r["status"] == "pass"
    r = verify.verify_prop_cy(catalog("fubini-study"), "chern", samples=2)
    assert r["status"] == "pass"
    assert not r["evidence"]["in_su"]
    r = verify.verify_prop_cy(catalog("complex-lie-group-2d"), "chern")
    assert r["status"] == "pass"
    assert r["evidence"]["in_su"]


def test_config_validation(tmp_path):
    p = tmp_path / "bad.toml"
    p.write_text('[[run]]\nmodel = "flat"\nchecks = ["nope"]\n')
    with pytest.raises(verify.ConfigError):
        verify.load_config(p)
    p.write_text('[[run]]\nmodel = "unknown-model"\nchecks = ["bianchi"]\n')
    with pytest.raises(verify.ConfigError):
        verify.load_config(p)
    p.write_text('[[run]]\nmodel = "flat"\nchecks = ["bianchi"]\n'
                 'kinds = ["gauduchon"]\n')
    with pytest.raises(verify.ConfigError):
        verify.load_config(p)  # gauduchon without t
    p.write_text("not toml [ at all")
    with pytest.raises(verify.ConfigError):
        verify.load_config(p)


def test_run_small_config(tmp_path):
    p = tmp_path / "ok.toml"
    p.write_text(
        "samples = 2\n"
        f'output = "{tmp_path / "rep.json"}"\n'
        '[[run]]\nmodel = "flat"\nchecks = ["bianchi"]\n'
        'kinds = ["chern", "levi-civita"]\n'
    )
    code, report = verify.run(p)
    assert code == 0
    assert report["schema"] == 1
    assert report["summary"]["total"] == 2
    on_disk = json.loads((tmp_path / "rep.json").read_text())
    assert on_disk["summary"] == report["summary"]
    # every pass is backed by a recorded number below tolerance
    for entry in on_disk["checks"]:
        assert entry["status"] == "pass"
        tol = entry["tolerances"]["bianchi"]["value"]
        assert entry["evidence"]["bianchi_residual"] < tol


def test_report_jsonable_complex_leaves():
    out = verify._jsonable({"a": np.complex128(1 + 2j), "b": np.float64(0.5),
                            "c": np.array([1, 2]), "d": np.bool_(True)})
    assert out == {"a": [1.0, 2.0], "b": 0.5, "c": [1, 2], "d": True}


def test_cli_exit_codes(tmp_path):
    from holomat import cli

    good = tmp_path / "good.toml"
    good.write_text('samples = 2\noutput = "%s"\n'
                    '[[run]]\nmodel = "flat"\nchecks = ["bianchi"]\n'
                    % (tmp_path / "r.json"))
    assert cli.main(["run", str(good)]) == 0
    bad = tmp_path / "bad.toml"
    bad.write_text('[[run]]\nmodel = "flat"\nchecks = ["foo"]\n')
    assert cli.main(["run", str(bad)]) == 1
    assert cli.main(["catalog"]) == 0
    assert cli.main(["check", "prop-cy", "--model", "flat", "--samples", "2"]) == 0


def test_cli_entry_point_subprocess():
    out = subprocess.run([sys.executable, "-m", "holomat.cli", "catalog"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert "fubini-study" in out.stdout
