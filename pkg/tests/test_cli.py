import json
import math
import xml.dom.minidom

import pytest

from fiberent.cli import main


def write_config(tmp_path, doc, name="run.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def w3_pmd_doc(**extra):
    doc = {
        "state": "w",
        "n_qubits": 3,
        "effect": "pmd",
        "spectrum": {"kind": "uncorrelated", "bandwidths": [1.0, 1.0, 1.0]},
        "channels": [{"dgd": 1.0}, {"dgd": 1.0}, {"dgd": 1.0}],
    }
    doc.update(extra)
    return doc


def ghz3_pdl_doc(gammas, signs=(1, 1, 1), **extra):
    doc = {
        "state": "ghz",
        "n_qubits": 3,
        "effect": "pdl",
        "spectrum": {"kind": "uncorrelated", "bandwidths": [1.0, 1.0, 1.0]},
        "channels": [{"pdl": g, "pdl_sign": s} for g, s in zip(gammas, signs)],
    }
    doc.update(extra)
    return doc


# ---------------------------------------------------------------- simulate

def test_simulate_writes_csv_row(tmp_path, capsys):
    cfg = write_config(tmp_path, w3_pmd_doc())
    out = tmp_path / "sim.csv"
    assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "witness,neg_witness,fidelity,C_01,C_02,C_12,esd,dsf"
    cells = lines[1].split(",")
    assert float(cells[0]) == pytest.approx((1 - 2 * math.exp(-1)) / 3, abs=1e-10)
    assert float(cells[3]) == pytest.approx(2 / 3 * math.exp(-1), abs=1e-10)
    assert cells[6] == "1"  # sudden death at these delays
    assert cells[7] == "0"
    text = capsys.readouterr().out
    assert "witness:" in text and "esd: yes" in text


def test_simulate_pure_ghz_trivial(tmp_path):
    cfg = write_config(tmp_path, ghz3_pdl_doc([0.0, 0.0, 0.0]))
    out = tmp_path / "sim.csv"
    assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
    cells = out.read_text().splitlines()[1].split(",")
    assert cells[0] == "-0.5"
    assert cells[2] == "1"
    assert cells[7] == "1"  # zero loss leaves the witness at its pure value


def test_simulate_anti_aligned_pdl_flags_dsf(tmp_path, capsys):
    cfg = write_config(
        tmp_path, ghz3_pdl_doc([0.7, 0.3, 0.4], signs=(-1, 1, 1)))
    assert main(["simulate", "--config", cfg]) == 0
    text = capsys.readouterr().out
    assert "witness: -0.5" in text
    assert "dsf: yes" in text


def test_simulate_quiet_silences_stdout(tmp_path, capsys):
    cfg = write_config(tmp_path, w3_pmd_doc())
    assert main(["simulate", "--config", cfg, "--quiet"]) == 0
    assert capsys.readouterr().out == ""


# ---------------------------------------------------------------- sweep

def test_sweep_csv_is_byte_deterministic(tmp_path):
    doc = w3_pmd_doc(sweep={"parameter": "dgd", "start": 0.0, "stop": 2.0,
                            "points": 41})
    cfg = write_config(tmp_path, doc)
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert main(["sweep", "--config", cfg, "--out", str(out1), "--quiet"]) == 0
    assert main(["sweep", "--config", cfg, "--out", str(out2), "--quiet"]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    header = out1.read_text().splitlines()[0]
    assert header == "param,witness,neg_witness,fidelity,C_01,C_02,C_12,esd,dsf"


def test_sweep_constant_data_rows_for_correlated_ghz(tmp_path):
    doc = {
        "state": "ghz",
        "n_qubits": 3,
        "effect": "pmd",
        "spectrum": {"kind": "correlated", "bandwidths": [1.0, 1.0, 1.0]},
        "channels": [{"dgd": 0.0}, {"dgd": 0.0}, {"dgd": 0.0}],
        "sweep": {"parameter": "dgd", "start": 0.0, "stop": 3.0, "points": 2},
    }
    cfg = write_config(tmp_path, doc)
    out = tmp_path / "dsf.csv"
    assert main(["sweep", "--config", cfg, "--out", str(out), "--quiet"]) == 0
    rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
    assert len(rows) == 2
    # equal lockstep delays keep every metric frozen; only param moves
    assert rows[0][1:] == rows[1][1:]
    assert rows[0][1] == "-0.5"
    assert rows[0][8] == "1"


def test_sweep_multi_series_files_and_svg(tmp_path):
    doc = {
        "state": "ghz",
        "n_qubits": 3,
        "effect": "pmd",
        "spectrum": {"kind": "uncorrelated", "bandwidths": [1.0, 1.0, 1.0]},
        "channels": [{"dgd": 0.0}, {"dgd": 0.0}, {"dgd": 0.0}],
        "sweep": {
            "parameter": "dgd", "start": 0.0, "stop": 3.0, "points": 11,
            "series": [
                {"label": "single", "photons": [0]},
                {"label": "lockstep-correlated",
                 "spectrum": {"kind": "correlated", "bandwidths": [1.0, 1.0, 1.0]}},
                {"label": "lockstep-uncorrelated"},
            ],
        },
    }
    cfg = write_config(tmp_path, doc)
    out = tmp_path / "fam.csv"
    svg = tmp_path / "fam.svg"
    assert main(["sweep", "--config", cfg, "--out", str(out), "--svg", str(svg),
                 "--quiet"]) == 0
    for label in ("single", "lockstep-correlated", "lockstep-uncorrelated"):
        assert (tmp_path / f"fam_{label}.csv").exists()
    doc_svg = xml.dom.minidom.parse(str(svg))  # parse failure = invalid XML
    assert len(doc_svg.getElementsByTagName("polyline")) == 3


def test_sweep_requires_sweep_block(tmp_path):
    cfg = write_config(tmp_path, w3_pmd_doc())
    out = tmp_path / "x.csv"
    assert main(["sweep", "--config", cfg, "--out", str(out)]) == 2


# ---------------------------------------------------------------- esd / dsf-check

def test_esd_reports_threshold(tmp_path, capsys):
    doc = w3_pmd_doc(esd={"parameter": "dgd", "lo": 0.0, "hi": 2.0})
    cfg = write_config(tmp_path, doc)
    assert main(["esd", "--config", cfg]) == 0
    text = capsys.readouterr().out
    assert "parameter: dgd" in text
    value = float(text.split("threshold:")[1].strip().split()[0])
    assert value == pytest.approx(math.sqrt(math.log(2)), abs=1e-8)


def test_esd_reports_none_for_ghz(tmp_path, capsys):
    doc = ghz3_pdl_doc([0.0, 0.0, 0.0], esd={"parameter": "pdl", "lo": 0.0,
                                             "hi": 30.0})
    cfg = write_config(tmp_path, doc)
    assert main(["esd", "--config", cfg]) == 0
    assert "threshold: none" in capsys.readouterr().out


def test_dsf_check_reports_yes(tmp_path, capsys):
    cfg = write_config(tmp_path, ghz3_pdl_doc([0.7, 0.3, 0.4], signs=(-1, 1, 1)))
    assert main(["dsf-check", "--config", cfg]) == 0
    text = capsys.readouterr().out
    assert "dsf: yes" in text
    assert "deviation: 0" in text


def test_dsf_check_reports_no(tmp_path, capsys):
    cfg = write_config(tmp_path, w3_pmd_doc())
    assert main(["dsf-check", "--config", cfg]) == 0
    assert "dsf: no" in capsys.readouterr().out


# ---------------------------------------------------------------- oracle-compare

def test_oracle_compare_passes_on_pmd(tmp_path, capsys):
    doc = w3_pmd_doc(oracle={"points": 81})
    cfg = write_config(tmp_path, doc)
    assert main(["oracle-compare", "--config", cfg]) == 0
    assert "result: pass" in capsys.readouterr().out


def test_oracle_compare_passes_correlated(tmp_path, capsys):
    doc = {
        "state": "w",
        "n_qubits": 3,
        "effect": "pmd",
        "spectrum": {"kind": "correlated", "bandwidths": [1.0, 1.0, 1.0]},
        "channels": [{"dgd": 1.0}, {"dgd": 0.5}, {"dgd": 0.2}],
        "oracle": {"points": 81},
    }
    cfg = write_config(tmp_path, doc)
    assert main(["oracle-compare", "--config", cfg]) == 0
    assert "result: pass" in capsys.readouterr().out


def test_oracle_compare_rejects_pdl(tmp_path, capsys):
    cfg = write_config(tmp_path, ghz3_pdl_doc([0.5, 0.5, 0.5]))
    assert main(["oracle-compare", "--config", cfg]) == 2


def test_oracle_compare_rejects_large_systems(tmp_path):
    doc = {
        "state": "ghz",
        "n_qubits": 5,
        "effect": "pmd",
        "spectrum": {"kind": "uncorrelated", "bandwidths": [1.0] * 5},
        "channels": [{"dgd": 1.0}] * 5,
    }
    cfg = write_config(tmp_path, doc)
    assert main(["oracle-compare", "--config", cfg]) == 2


# ---------------------------------------------------------------- exit codes

def test_exit_code_2_on_schema_violation(tmp_path, capsys):
    doc = w3_pmd_doc()
    doc["channels"] = doc["channels"][:2]
    cfg = write_config(tmp_path, doc)
    assert main(["simulate", "--config", cfg]) == 2
    assert "config.channels" in capsys.readouterr().err


def test_exit_code_2_on_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{", encoding="utf-8")
    assert main(["simulate", "--config", str(path)]) == 2


def test_exit_code_4_on_missing_config(tmp_path):
    assert main(["simulate", "--config", str(tmp_path / "absent.json")]) == 4


def test_exit_code_4_on_unwritable_output(tmp_path):
    cfg = write_config(tmp_path, w3_pmd_doc(
        sweep={"parameter": "dgd", "start": 0.0, "stop": 1.0, "points": 3}))
    missing_dir = tmp_path / "no" / "such" / "dir.csv"
    assert main(["sweep", "--config", cfg, "--out", str(missing_dir)]) == 4
