import json
import math
from pathlib import Path

import numpy as np
import pytest

from esomit.cli import main
from esomit.presets import preset
from esomit.response import group_delay

GOLDEN = Path(__file__).parent / "golden"


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_spectrum_csv_bytes_are_stable(capsys):
    argv = ["spectrum", "--preset", "es2-ep2",
            "--grid", "-1 MHz:1 MHz:21"]
    code1, out1, _ = _run(capsys, argv)
    code2, out2, _ = _run(capsys, argv)
    assert code1 == code2 == 0
    assert out1 == out2
    lines = out1.splitlines()
    meta = [ln for ln in lines if ln.startswith("# ")]
    assert any(ln.startswith("# preset = es2-ep2") for ln in meta)
    assert not any("timestamp" in ln for ln in meta)
    header = lines[len(meta)]
    assert header == "delta_p,re_t,im_t,T,tau_g"
    rows = lines[len(meta) + 1:]
    assert len(rows) == 21
    # 17-significant-digit cells must round-trip exactly
    first = rows[0].split(",")
    assert float(first[0]) == -1e6
    assert format(float(first[3]), ".17g") == first[3]


def test_spectrum_matches_golden_bytes(capsys):
    code, out, _ = _run(capsys, ["spectrum", "--preset", "es2-ep2",
                                 "--grid", "-1 MHz:1 MHz:21"])
    assert code == 0
    assert out == (GOLDEN / "spectrum_es2-ep2_small.csv").read_text()


def test_json_timestamp_toggle(capsys):
    argv = ["spectrum", "--preset", "baseline", "--format", "json",
            "--grid", "0:1 MHz:5"]
    code, out, _ = _run(capsys, argv + ["--no-timestamp"])
    assert code == 0
    payload = json.loads(out)
    assert "timestamp" not in payload["metadata"]
    assert payload["metadata"]["preset"] == "baseline"
    assert len(payload["columns"]["T"]) == 5

    code, out, _ = _run(capsys, argv)
    assert code == 0
    assert "timestamp" in json.loads(out)["metadata"]


def test_set_override_lands_in_metadata(capsys):
    code, out, _ = _run(capsys, ["spectrum", "--preset", "baseline",
                                 "--set", "J=2 MHz", "--format", "json",
                                 "--no-timestamp", "--grid", "0:1 MHz:3"])
    assert code == 0
    assert json.loads(out)["metadata"]["J"] == pytest.approx(2e6)


def test_eigen_class_transition(capsys):
    code, out, _ = _run(capsys, ["eigen", "--preset", "baseline",
                                 "--axis", "J",
                                 "--grid", "0.5 MHz:1.5 MHz:3"])
    assert code == 0
    rows = [ln.split(",") for ln in out.splitlines()
            if ln and not ln.startswith("#")]
    classes = [r[-1] for r in rows[1:]]
    assert classes == ["Kappa-Split", "ES-Kind2", "Omega-Split"]


def test_delay_matches_library(capsys):
    code, out, _ = _run(capsys, ["delay", "--preset", "es2-ep1",
                                 "--grid", "-1 MHz:1 MHz:5"])
    assert code == 0
    pre = preset("es2-ep1")
    rows = [ln.split(",") for ln in out.splitlines()
            if ln and not ln.startswith("#")][1:]
    for dp_txt, tau_txt in rows:
        ref = group_delay(pre.params, pre.drive, float(dp_txt))
        assert float(tau_txt) == pytest.approx(ref, rel=1e-12)


def test_crosscheck_fail_verdict_still_exits_zero(capsys):
    code, out, _ = _run(capsys, ["crosscheck", "--preset", "es2-ep2",
                                 "--grid", "-1 MHz:1 MHz:11",
                                 "--no-timestamp"])
    assert code == 0
    report = json.loads(out)
    assert report["verdict"] in ("PASS", "FAIL")
    assert "max_rel_dev" in report


def test_presets_listing(capsys):
    code, out, _ = _run(capsys, ["presets"])
    assert code == 0
    names = [ln.split(",")[0] for ln in out.splitlines()
             if ln and not ln.startswith("#")][1:]
    assert "baseline" in names and "es2-ep3" in names


def test_config_file_round_trip(capsys, tmp_path):
    cfg = tmp_path / "point.cfg"
    cfg.write_text(
        "# minimal working point\n"
        "omega0 = 193 THz\n"
        "gamma0 = 1 MHz\n"
        "gamma1 = 1 MHz\n"
        "gamma2 = 1 MHz\n"
        "J = 1 MHz\n"
        "t0 = 1\n"
        "phi3 = 1.5pi\n"
        "R = 34.5 um\n"
        "m = 50 ng\n"
        "omega_m = 147 MHz\n"
        "gamma_m = 0.24 MHz\n")
    code, out, _ = _run(capsys, ["spectrum", "--config", str(cfg),
                                 "--grid", "0:1 MHz:3", "--format", "json",
                                 "--no-timestamp"])
    assert code == 0
    payload = json.loads(out)
    assert payload["metadata"]["phi3"] == pytest.approx(1.5 * math.pi)
    assert np.all(np.isfinite(payload["columns"]["T"]))


def test_feasibility_report(capsys):
    code, out, _ = _run(capsys, ["feasibility", "--preset", "baseline",
                                 "--set", "alpha_pol=2e-22",
                                 "--set", "f_at_r=0.5",
                                 "--set", "V_m=1e-16",
                                 "--no-timestamp"])
    assert code == 0
    report = json.loads(out)
    assert report["nanoparticle_J"] > 0
    assert "rows" in report


def test_usage_errors_exit_two(capsys):
    assert _run(capsys, ["spectrum", "--preset", "nope"])[0] == 2
    assert _run(capsys, ["spectrum", "--preset", "baseline",
                         "--grid", "1:2"])[0] == 2
    assert _run(capsys, ["spectrum", "--preset", "baseline",
                         "--config", "x.cfg"])[0] == 2
    assert _run(capsys, ["spectrum", "--preset", "baseline",
                         "--set", "bogus=1"])[0] == 2
    assert _run(capsys, ["spectrum"])[0] == 2
    code, _, err = _run(capsys, ["spectrum", "--preset", "nope"])
    assert "esomit: error:" in err


def test_io_error_exit_three(capsys, tmp_path):
    code, _, err = _run(capsys, ["spectrum", "--preset", "baseline",
                                 "--grid", "0:1 MHz:3",
                                 "--out", str(tmp_path / "no" / "dir.csv")])
    assert code == 3
    assert "i/o error" in err


def test_out_file_written(capsys, tmp_path):
    dest = tmp_path / "table.csv"
    code, out, _ = _run(capsys, ["spectrum", "--preset", "baseline",
                                 "--grid", "0:1 MHz:3",
                                 "--out", str(dest)])
    assert code == 0
    assert out == ""
    assert dest.read_text().splitlines()[-1].count(",") == 4
