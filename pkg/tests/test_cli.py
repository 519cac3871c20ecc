"""End-to-end checks of the command-line driver: exit codes, config parsing,
manifest contents, and byte-identical output across thread counts."""

from __future__ import annotations

import json
import math

import numpy as np
import pytest

from pathspectra.cli import (
    EXIT_DOMAIN,
    EXIT_IO,
    EXIT_OK,
    EXIT_SINGULAR,
    EXIT_USAGE,
    config_from_mapping,
    main,
    parse_config_file,
)
from pathspectra.errors import UsageError

MANIFEST_KEYS = {
    "command",
    "version",
    "effective_config",
    "threads_used",
    "outputs",
    "checks",
    "runtime_seconds",
}


def _manifest(out_dir, command):
    return json.loads((out_dir / f"{command}.manifest.json").read_text())


# ---------------------------------------------------------------------------
# configuration plumbing


def test_unknown_key_rejected():
    with pytest.raises(UsageError, match="unknown configuration key"):
        config_from_mapping({"bogus_knob": 1.0})


def test_bad_value_rejected():
    with pytest.raises(UsageError, match="bad value"):
        config_from_mapping({"T": "not-a-number"})


def test_format_and_system_validated():
    with pytest.raises(UsageError, match="format"):
        config_from_mapping({"format": "xml"})
    with pytest.raises(UsageError, match="system"):
        config_from_mapping({"system": "double_well"})
    with pytest.raises(UsageError, match="threads"):
        config_from_mapping({"threads": "-2"})


def test_optional_keys_accept_none():
    cfg = config_from_mapping({"delta_p_c": "none", "band_hi": None})
    assert cfg.delta_p_c is None
    assert cfg.band_hi is None
    # required keys must carry a value
    with pytest.raises(UsageError, match="needs a value"):
        config_from_mapping({"T": "none"})


def test_parse_config_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "# full-line comment\n"
        "system = free_line\n"
        "T = 400   # trailing comment\n"
        "\n"
        "delta_p_c=0.01\n"
    )
    mapping = parse_config_file(path)
    assert mapping == {"system": "free_line", "T": "400", "delta_p_c": "0.01"}


def test_parse_config_file_rejects_bare_lines(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("just some words\n")
    with pytest.raises(UsageError, match="expected key = value"):
        parse_config_file(path)


def test_missing_config_file_is_usage_error(tmp_path):
    assert main(["fig10", "--config", str(tmp_path / "nope.cfg")]) == EXIT_USAGE


# ---------------------------------------------------------------------------
# exit codes


def test_exit_usage_on_unknown_key(tmp_path):
    assert main(["fig10", "--set", "bogus=1", "--out", str(tmp_path)]) == EXIT_USAGE


def test_exit_usage_on_malformed_set(tmp_path):
    assert main(["fig10", "--set", "no_equals_sign", "--out", str(tmp_path)]) == EXIT_USAGE


def test_exit_domain_from_compare_stage(tmp_path):
    code = main(["compare", "--set", "system=free_line", "--out", str(tmp_path)])
    assert code == EXIT_DOMAIN


def test_exit_singular_on_divergent_sample(tmp_path):
    # oscillator ground state: the coarse curve grid lands exactly on the
    # singular momenta +-sqrt(2*M*E) = +-1
    code = main(["phasor", "--set", "delta_p_c=0.5", "--out", str(tmp_path)])
    assert code == EXIT_SINGULAR


def test_exit_io_when_out_dir_is_a_file(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("occupied")
    code = main(["fig10", "--out", str(blocker / "sub")])
    assert code == EXIT_IO


def test_version_flag_exits_cleanly():
    assert main(["--version"]) == EXIT_OK


def test_missing_command_is_usage_error():
    assert main([]) == EXIT_USAGE


# ---------------------------------------------------------------------------
# presets and stages end to end


def test_fig1_smoke(tmp_path):
    assert main(["fig1", "--out", str(tmp_path)]) == EXIT_OK
    assert (tmp_path / "fig1_curve.csv").exists()
    assert (tmp_path / "fig1_segments.csv").exists()
    manifest = _manifest(tmp_path, "fig1")
    assert set(manifest) == MANIFEST_KEYS
    assert manifest["command"] == "fig1"
    assert manifest["effective_config"]["T"] == 1.0e4
    assert manifest["outputs"] == ["fig1_curve.csv", "fig1_segments.csv"]
    # the [0.5, 1.5] span truncates the tails at +-50 window halfwidths
    assert manifest["checks"]["endpoint_abs_error"] < 2.5e-2
    seg = complex(
        manifest["checks"]["segment_sum_re"], manifest["checks"]["segment_sum_im"]
    )
    assert abs(seg - complex(manifest["checks"]["endpoint_re"], manifest["checks"]["endpoint_im"])) < 1e-2


def test_fig9_marginals_match_closed_form(tmp_path):
    assert main(["fig9", "--set", "delta_p_c=0.25", "--out", str(tmp_path)]) == EXIT_OK
    manifest = _manifest(tmp_path, "fig9")
    for n in range(4):
        assert (tmp_path / f"fig9_n{n}.csv").exists()
        assert manifest["checks"][f"n{n}_max_abs_dev_from_closed_form"] < 1e-8


def test_fig10_overlap_checks(tmp_path):
    assert main(["fig10", "--out", str(tmp_path)]) == EXIT_OK
    manifest = _manifest(tmp_path, "fig10")
    for n in range(4):
        assert manifest["checks"][f"n{n}_argmax_alpha"] == pytest.approx(
            math.sqrt(n), abs=2e-3
        )
    assert manifest["checks"]["completeness_sum_alpha_1.5_n40"] == pytest.approx(
        1.0, abs=1e-10
    )


def test_phasor_stage_endpoint_vs_eigenfunction(tmp_path):
    code = main(
        [
            "phasor",
            "--set", "system=free_line",
            "--set", "quantum_number=1",
            "--set", "T=1e4",
            "--set", "delta_p_c=0.0001",
            "--set", "p_c_lo=0.5",
            "--set", "p_c_hi=1.5",
            "--out", str(tmp_path),
        ]
    )
    assert code == EXIT_OK
    checks = _manifest(tmp_path, "phasor")["checks"]
    assert checks["eigenfunction_re"] == 1.0
    assert checks["eigenfunction_im"] == 0.0
    assert checks["endpoint_abs_error"] < 2.5e-2


def test_window_stage_series_integrates_to_eigenfunction(tmp_path):
    code = main(
        [
            "window",
            "--set", "system=free_line",
            "--set", "quantum_number=1",
            "--set", "T=400",
            "--set", "delta_p_c=0.01",
            "--set", "p_c_lo=0.6",
            "--set", "p_c_hi=1.4",
            "--out", str(tmp_path),
        ]
    )
    assert code == EXIT_OK
    checks = _manifest(tmp_path, "window")["checks"]
    total = complex(checks["series_integral_re"], checks["series_integral_im"])
    # the +-8 halfwidth span cuts the slowly decaying tails of the
    # conditionally convergent integral; sharper checks live in test_phasor
    assert abs(total - 1.0) < 2e-2


def test_reconstruct_stage_thin_band_writes_zeros(tmp_path):
    code = main(
        [
            "reconstruct",
            "--set", "system=free_line",
            "--set", "quantum_number=1",
            "--set", "T=200",
            "--set", "delta_p_c=0.02",
            "--set", "p_c_lo=0.0",
            "--set", "p_c_hi=4.0",
            "--set", "x_f_span=3.0",
            "--set", "band_lo=0.3001",
            "--set", "band_hi=0.3002",
            "--out", str(tmp_path),
        ]
    )
    assert code == EXIT_OK
    table = np.loadtxt(tmp_path / "reconstruct.csv", delimiter=",", skiprows=1)
    assert np.all(table[:, 1] == 0.0)
    assert np.all(table[:, 2] == 0.0)


def test_json_format(tmp_path):
    assert main(["fig10", "--format", "json", "--out", str(tmp_path)]) == EXIT_OK
    payload = json.loads((tmp_path / "fig10_n0.json").read_text())
    assert set(payload) == {"alpha", "value"}
    assert len(payload["alpha"]) == len(payload["value"])
    assert _manifest(tmp_path, "fig10")["effective_config"]["format"] == "json"


def test_config_file_echoed_in_manifest(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text(
        "system = free_line\n"
        "quantum_number = 1\n"
        "T = 1e4\n"
        "delta_p_c = 0.001\n"
        "p_c_lo = 0.5\n"
        "p_c_hi = 1.5\n"
    )
    out = tmp_path / "out"
    code = main(["phasor", "--config", str(cfg_file), "--set", "T=400", "--out", str(out)])
    assert code == EXIT_OK
    effective = _manifest(out, "phasor")["effective_config"]
    # --set wins over the file; everything else is echoed back
    assert effective["T"] == 400.0
    assert effective["system"] == "free_line"
    assert effective["delta_p_c"] == 0.001
    assert _manifest(out, "phasor")["threads_used"] >= 1


def test_time_average_bytes_identical_across_threads(tmp_path):
    blobs = {}
    for threads in (1, 2, 8):
        out = tmp_path / f"t{threads}"
        code = main(
            [
                "time-average",
                "--set", "delta_p_c=0.1",
                "--set", "p_c_max=2.5",
                "--set", "delta_x_f=0.25",
                "--set", f"delta_T={math.pi / 2}",
                "--threads", str(threads),
                "--out", str(out),
            ]
        )
        assert code == EXIT_OK
        assert _manifest(out, "time-average")["threads_used"] == threads
        blobs[threads] = (out / "time-average.csv").read_bytes()
    assert blobs[1] == blobs[2] == blobs[8]
