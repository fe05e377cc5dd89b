import io
import json

import numpy as np
import pytest

from siegeldisk import SchemaError, loss_channel
from siegeldisk.cli import (
    EXIT_INVARIANT,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_SCHEMA,
    EXIT_USAGE,
    decode_matrix,
    document_dict,
    encode_matrix,
    parse_document,
    run_command,
)


def write_doc(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def vacuum_doc():
    return {"n": 1, "kind": "complex_cov", "matrix": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]}


def thermal3_doc():
    return document_dict("complex_cov", 1, matrix=1.5 * np.eye(2))


def loss05_doc():
    ch = loss_channel(0.5, 1)
    return document_dict("channel_xy", 1, X=ch.x, Y=ch.y)


def run(argv):
    out = io.StringIO()
    code = run_command(argv, stream=out)
    lines = [json.loads(line) for line in out.getvalue().splitlines() if line.strip()]
    return code, lines


def test_matrix_codec_roundtrip_is_exact():
    rng = np.random.default_rng(3)
    m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    again = decode_matrix(json.loads(json.dumps(encode_matrix(m))))
    assert np.array_equal(again, m)  # bit-stable, not merely close


def test_parse_vacuum_document(tmp_path):
    doc = parse_document(write_doc(tmp_path, "vac.json", vacuum_doc()))
    assert doc.ok and doc.kind == "complex_cov"
    assert np.allclose(doc.data["matrix"], 0.5 * np.eye(2))


def test_parse_reports_disk_violation_with_residual(tmp_path):
    payload = {"n": 1, "kind": "disk_point", "matrix": [[[1.2, 0]]]}
    doc = parse_document(write_doc(tmp_path, "bad.json", payload))
    assert not doc.ok
    assert doc.diagnostics[0]["invariant"] == "disk membership"
    assert doc.diagnostics[0]["residual"] < 0


def test_parse_schema_errors(tmp_path):
    with pytest.raises(SchemaError):
        parse_document(write_doc(tmp_path, "a.json", {"kind": "nope", "n": 1}))
    with pytest.raises(SchemaError):
        parse_document(write_doc(tmp_path, "b.json", {"kind": "complex_cov", "n": 0}))
    with pytest.raises(SchemaError):
        parse_document(write_doc(tmp_path, "c.json", {"kind": "complex_cov", "n": 1}))
    bad_cell = {"n": 1, "kind": "disk_point", "matrix": [[[0.1]]]}
    with pytest.raises(SchemaError):
        parse_document(write_doc(tmp_path, "d.json", bad_cell))


def test_check_channel_prints_dual_validity(tmp_path):
    code, lines = run(["check", write_doc(tmp_path, "loss.json", loss05_doc())])
    assert code == EXIT_OK
    assert lines[0]["valid"] is True
    assert lines[0]["unscaled_valid"] is False


def test_check_invalid_document_exits_2(tmp_path):
    payload = {"n": 1, "kind": "disk_point", "matrix": [[[1.2, 0]]]}
    code, lines = run(["check", write_doc(tmp_path, "bad.json", payload)])
    assert code == EXIT_INVARIANT
    assert lines[0]["diagnostics"]


def test_to_disk_vacuum_gives_origin(tmp_path):
    code, lines = run(["to-disk", write_doc(tmp_path, "vac.json", vacuum_doc())])
    assert code == EXIT_OK
    assert lines[0]["kind"] == "double_disk"
    assert np.allclose(decode_matrix(lines[0]["matrix"]), 0.0, atol=1e-15)


def test_apply_loss_to_thermal_disk_picture(tmp_path, sx):
    code, lines = run(
        [
            "apply",
            "--channel",
            write_doc(tmp_path, "loss.json", loss05_doc()),
            "--state",
            write_doc(tmp_path, "th.json", thermal3_doc()),
            "--picture",
            "disk",
        ]
    )
    assert code == EXIT_OK
    out = decode_matrix(lines[0]["matrix"])
    assert np.allclose(out, np.asarray(sx) / 3.0, atol=1e-12)


def test_apply_both_prints_cross_picture_residual(tmp_path):
    code, lines = run(
        [
            "apply",
            "--channel",
            write_doc(tmp_path, "loss.json", loss05_doc()),
            "--state",
            write_doc(tmp_path, "th.json", thermal3_doc()),
            "--picture",
            "both",
        ]
    )
    assert code == EXIT_OK
    assert lines[0]["cross_picture_residual"] <= 1e-9


def test_apply_refuses_invalid_channel(tmp_path):
    bad = document_dict("channel_xy", 1, X=2.0 * np.eye(2), Y=np.zeros((2, 2)))
    code, _ = run(
        [
            "apply",
            "--channel",
            write_doc(tmp_path, "bad.json", bad),
            "--state",
            write_doc(tmp_path, "th.json", thermal3_doc()),
            "--picture",
            "cov",
        ]
    )
    assert code == EXIT_INVARIANT


def test_compose_losses(tmp_path):
    code, lines = run(
        [
            "compose",
            write_doc(tmp_path, "l2.json", document_dict("channel_xy", 1, X=loss_channel(0.7, 1).x, Y=loss_channel(0.7, 1).y)),
            write_doc(tmp_path, "l1.json", document_dict("channel_xy", 1, X=loss_channel(0.6, 1).x, Y=loss_channel(0.6, 1).y)),
        ]
    )
    assert code == EXIT_OK
    x = decode_matrix(lines[0]["X"])
    assert np.allclose(x, np.sqrt(0.42) * np.eye(2), atol=1e-14)


def test_embed_channel_and_classify_roundtrip(tmp_path):
    code, lines = run(["embed-channel", write_doc(tmp_path, "loss.json", loss05_doc())])
    assert code == EXIT_OK
    assert lines[0]["kind"] == "block_map" and lines[0]["n"] == 2
    block_doc = write_doc(tmp_path, "embedded.json", lines[0])
    code, lines = run(["classify", block_doc])
    assert code == EXIT_OK
    assert lines[0]["flags"]["sp_plus_disk"] is True
    assert lines[0]["flags"]["sp_abc"] is False


def test_williamson_command(tmp_path):
    doc = document_dict("real_cov", 1, matrix=1.5 * np.eye(2))
    code, lines = run(["williamson", write_doc(tmp_path, "cov.json", doc)])
    assert code == EXIT_OK
    assert lines[0]["kind"] == "williamson"
    assert np.isclose(lines[0]["nu"][0], 3.0)
    # emitted document re-parses losslessly
    parsed = parse_document(write_doc(tmp_path, "w.json", lines[0]))
    assert parsed.ok


def test_disk_williamson_command(tmp_path, sx):
    doc = document_dict("double_disk", 1, matrix=0.5 * np.asarray(sx))
    code, lines = run(["disk-williamson", write_doc(tmp_path, "dd.json", doc)])
    assert code == EXIT_OK
    assert np.isclose(lines[0]["nu"][0], 3.0, atol=1e-10)


def test_to_cov_inverts_to_disk(tmp_path):
    vac = write_doc(tmp_path, "vac.json", vacuum_doc())
    code, lines = run(["to-disk", vac])
    disk_doc = write_doc(tmp_path, "disk.json", lines[0])
    code, lines = run(["to-cov", disk_doc])
    assert code == EXIT_OK
    assert np.allclose(decode_matrix(lines[0]["matrix"]), 0.5 * np.eye(2), atol=1e-14)
    code, lines = run(["to-cov", disk_doc, "--real"])
    assert lines[0]["kind"] == "real_cov"


def test_fb_eval_command(tmp_path):
    doc = document_dict("disk_point", 1, matrix=0.5 * np.eye(1))
    code, lines = run(["fb-eval", write_doc(tmp_path, "k.json", doc), "--zeta", "1,0"])
    assert code == EXIT_OK
    value = complex(*lines[0]["value"])
    assert np.isclose(value, 0.75**0.25 * np.exp(0.25))


def test_verify_command_emits_line_reports(tmp_path):
    code, lines = run(
        ["verify", "--suite", "composition", "--trials", "6", "--seed", "11", "--modes", "1,2"]
    )
    assert code == EXIT_OK
    assert len(lines) == 7  # one per trial plus the summary
    assert lines[-1]["failed"] == 0
    assert lines[-1]["max_residual"] <= 1e-9


def test_check_plain_covariance_document(tmp_path):
    code, lines = run(["check", write_doc(tmp_path, "vac.json", vacuum_doc())])
    assert code == EXIT_OK
    assert lines[0]["ok"] is True


def test_tolerance_flag_is_accepted(tmp_path):
    code, _ = run(["--tol", "1e-8", "check", write_doc(tmp_path, "vac.json", vacuum_doc())])
    assert code == EXIT_OK


def test_numerical_failures_map_to_exit_3(tmp_path, monkeypatch):
    from siegeldisk import NumericalError
    from siegeldisk import cli as cli_module

    def boom(args, tol, stream):
        raise NumericalError("denominator not invertible")

    monkeypatch.setitem(cli_module._HANDLERS, "check", boom)
    code = run_command(["check", write_doc(tmp_path, "vac.json", vacuum_doc())])
    assert code == EXIT_NUMERICAL


def test_unknown_subcommand_exit_code():
    assert run_command(["frobnicate"]) == EXIT_USAGE


def test_malformed_json_exit_code(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert run_command(["check", str(path)]) == EXIT_SCHEMA


def test_missing_file_exit_code(tmp_path):
    assert run_command(["check", str(tmp_path / "missing.json")]) == EXIT_SCHEMA
