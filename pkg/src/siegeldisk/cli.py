"""Command-line front end.

Documents are JSON objects with a mode count ``n``, a ``kind`` tag, and one
or more matrix payloads whose complex entries are two-element ``[re, im]``
arrays in row-major nesting. Floats are emitted with Python's shortest
round-trip repr, so emitted documents re-parse losslessly.

Exit codes: 0 success, 2 invariant violation, 3 numerical failure,
64 unknown subcommand, 65 schema violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from .errors import InvariantViolation, NumericalError, SchemaError
from .linalg import DEFAULT_TOL, Tolerances
from .siegel import DiskPoint, classify, in_siegel_disk
from .states import (
    ComplexCovariance,
    DoubleDiskPoint,
    RealCovariance,
    complex_from_real,
    cov_to_disk,
    disk_to_cov,
    disk_williamson,
    real_from_complex,
    state_membership,
    williamson,
)
from .channels import (
    GaussianChannelXY,
    channel_apply_cov,
    channel_apply_disk,
    channel_compose,
    channel_embed,
    channel_validate,
)
from .bargmann import fb_pure_eval
from .harness import SUITES, equivalence_run

__all__ = ["main", "run_command", "parse_document", "MatrixDocument", "encode_matrix", "decode_matrix"]

EXIT_OK = 0
EXIT_INVARIANT = 2
EXIT_NUMERICAL = 3
EXIT_USAGE = 64
EXIT_SCHEMA = 65

KINDS = (
    "real_cov",
    "complex_cov",
    "disk_point",
    "double_disk",
    "channel_xy",
    "block_map",
    "williamson",
    "disk_williamson",
)

COMMANDS = (
    "check",
    "to-disk",
    "to-cov",
    "williamson",
    "disk-williamson",
    "embed-channel",
    "apply",
    "compose",
    "classify",
    "fb-eval",
    "verify",
)


def encode_matrix(m) -> list:
    """Row-major nested lists with complex entries as ``[re, im]`` pairs."""
    arr = np.asarray(m, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in row] for row in arr]


def decode_matrix(payload, name="matrix") -> np.ndarray:
    if not isinstance(payload, list) or not payload:
        raise SchemaError(f"{name}: expected a non-empty nested array")
    rows = len(payload)
    out = None
    for i, row in enumerate(payload):
        if not isinstance(row, list) or not row:
            raise SchemaError(f"{name}: row {i} is not a non-empty array")
        if out is None:
            out = np.zeros((rows, len(row)), dtype=complex)
        if len(row) != out.shape[1]:
            raise SchemaError(f"{name}: row {i} has {len(row)} entries, expected {out.shape[1]}")
        for j, cell in enumerate(row):
            if (
                not isinstance(cell, list)
                or len(cell) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in cell)
            ):
                raise SchemaError(f"{name}: entry ({i},{j}) is not a [re, im] pair")
            out[i, j] = complex(cell[0], cell[1])
    return out


@dataclass
class MatrixDocument:
    """A parsed document: declared kind, payloads, and invariant diagnostics."""

    n: int
    kind: str
    data: dict
    diagnostics: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.diagnostics


def _diag(name, residual=None):
    record = {"invariant": name}
    if residual is not None:
        record["residual"] = float(residual)
    return record


def _validate(doc: MatrixDocument, tol: Tolerances) -> None:
    n = doc.n
    kind = doc.kind
    if kind == "real_cov":
        m = doc.data["matrix"]
        try:
            RealCovariance(m, tol)
        except InvariantViolation as exc:
            doc.diagnostics.append(_diag(str(exc), exc.residual))
    elif kind == "complex_cov":
        try:
            ComplexCovariance(doc.data["matrix"], tol)
        except InvariantViolation as exc:
            doc.diagnostics.append(_diag(str(exc), exc.residual))
    elif kind == "disk_point":
        m = doc.data["matrix"]
        if not in_siegel_disk(m, tol):
            gram = np.eye(m.shape[0]) - m.conj().T @ m
            lam = float(np.linalg.eigvalsh((gram + gram.conj().T) / 2).min())
            doc.diagnostics.append(_diag("disk membership", lam))
    elif kind == "double_disk":
        m = doc.data["matrix"]
        report = state_membership(m, tol)
        if not report.in_disk:
            doc.diagnostics.append(_diag("double-disk membership", report.residuals["disk_min_eig"]))
        elif not report.abc:
            doc.diagnostics.append(_diag("adjoint-by-Cayley", report.residuals["abc"]))
    elif kind == "channel_xy":
        try:
            GaussianChannelXY(doc.data["X"], doc.data["Y"], tol)
        except InvariantViolation as exc:
            doc.diagnostics.append(_diag(str(exc), exc.residual))
    elif kind == "block_map":
        m = doc.data["matrix"]
        if m.shape[0] != m.shape[1] or m.shape[0] % 2:
            doc.diagnostics.append(_diag("square even dimension"))
    elif kind in ("williamson", "disk_williamson"):
        if doc.data["nu"].min() < 1.0 - tol.psd_slack:
            doc.diagnostics.append(_diag("thermal spectrum below 1", float(doc.data["nu"].min())))


def _expected_dim(kind: str, n: int) -> int:
    # block_map documents declare the point size they act on: matrix is 2n x 2n
    return 2 * n


def parse_document(source, tol: Tolerances = DEFAULT_TOL) -> MatrixDocument:
    """Parse and validate a document from a path, JSON string, or dict.

    Schema problems raise :class:`SchemaError`; invariant violations are
    collected as structured diagnostics with residuals on the returned
    document, so callers can report *how far* the input is from valid.
    """
    if isinstance(source, dict):
        raw = source
    else:
        text = None
        try:
            with open(source, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise SchemaError(f"cannot read document: {exc}") from exc
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise SchemaError("document must be a JSON object")
    kind = raw.get("kind")
    if kind not in KINDS:
        raise SchemaError(f"unknown kind {kind!r}; expected one of {KINDS}")
    n = raw.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SchemaError("field 'n' must be a positive integer")

    data: dict = {}
    if kind == "channel_xy":
        for key in ("X", "Y"):
            if key not in raw:
                raise SchemaError(f"channel document missing field {key!r}")
            data[key] = decode_matrix(raw[key], key)
            if data[key].shape != (2 * n, 2 * n):
                raise SchemaError(f"{key} must be {2 * n}x{2 * n} for n={n}")
    elif kind in ("williamson", "disk_williamson"):
        if "S" not in raw or "nu" not in raw:
            raise SchemaError(f"{kind} document requires fields 'S' and 'nu'")
        data["S"] = decode_matrix(raw["S"], "S")
        if data["S"].shape != (2 * n, 2 * n):
            raise SchemaError(f"S must be {2 * n}x{2 * n} for n={n}")
        nu = raw["nu"]
        if not isinstance(nu, list) or len(nu) != n or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in nu
        ):
            raise SchemaError("'nu' must be a list of n numbers")
        data["nu"] = np.asarray(nu, dtype=float)
    else:
        if "matrix" not in raw:
            raise SchemaError("document missing field 'matrix'")
        data["matrix"] = decode_matrix(raw["matrix"], "matrix")
        dim = _expected_dim(kind, n) if kind != "disk_point" else n
        if data["matrix"].shape != (dim, dim):
            raise SchemaError(f"matrix must be {dim}x{dim} for kind {kind!r} with n={n}")

    doc = MatrixDocument(n=n, kind=kind, data=data)
    _validate(doc, tol)
    return doc


def document_dict(kind: str, n: int, **payloads) -> dict:
    out = {"kind": kind, "n": n}
    for key, value in payloads.items():
        if key == "nu":
            out[key] = [float(v) for v in np.asarray(value)]
        else:
            out[key] = encode_matrix(value)
    return out


def _emit(obj, out_path=None, stream=None) -> None:
    text = json.dumps(obj)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=stream or sys.stdout)


def _require_ok(doc: MatrixDocument, stream) -> None:
    if not doc.ok:
        _emit({"kind": doc.kind, "n": doc.n, "diagnostics": doc.diagnostics}, stream=stream)
        raise InvariantViolation("document failed invariant checks")


def _as_complex_cov(doc: MatrixDocument, tol: Tolerances) -> ComplexCovariance:
    if doc.kind == "real_cov":
        return complex_from_real(RealCovariance(doc.data["matrix"], tol))
    if doc.kind == "complex_cov":
        return ComplexCovariance(doc.data["matrix"], tol)
    if doc.kind == "double_disk":
        return disk_to_cov(DoubleDiskPoint(doc.data["matrix"], tol), tol)
    raise InvariantViolation(f"cannot interpret kind {doc.kind!r} as a covariance")


def _cmd_check(args, tol, stream) -> int:
    doc = parse_document(args.document, tol)
    if doc.kind == "block_map":
        report = classify(doc.data["matrix"], tol)
        _emit(
            {
                "kind": "membership_report",
                "flags": {
                    "sp_real": report.sp_real,
                    "sp_complex": report.sp_complex,
                    "sp_abc": report.sp_abc,
                    "sp_plus_uhp": report.sp_plus_uhp,
                    "sp_plus_disk": report.sp_plus_disk,
                    "boundary_saturated": report.boundary_saturated,
                },
                "residuals": report.residuals,
            },
            args.out,
            stream,
        )
        return EXIT_OK
    if doc.kind == "double_disk":
        report = state_membership(doc.data["matrix"], tol)
        _emit(
            {
                "kind": "state_membership",
                "flags": {
                    "in_disk": report.in_disk,
                    "abc": report.abc,
                    "up_fractional": report.up_fractional,
                    "w_psd": report.w_psd,
                },
                "residuals": report.residuals,
                "diagnostics": doc.diagnostics,
            },
            args.out,
            stream,
        )
        return EXIT_OK if doc.ok else EXIT_INVARIANT
    if doc.kind == "channel_xy":
        _require_ok(doc, stream)
        ch = GaussianChannelXY(doc.data["X"], doc.data["Y"], tol)
        report = channel_validate(ch, tol)
        _emit(
            {
                "kind": "channel_validity",
                "valid": report.valid,
                "residual": report.residual,
                "unscaled_valid": report.unscaled_valid,
            },
            args.out,
            stream,
        )
        return EXIT_OK
    _emit({"kind": doc.kind, "n": doc.n, "ok": doc.ok, "diagnostics": doc.diagnostics}, args.out, stream)
    return EXIT_OK if doc.ok else EXIT_INVARIANT


def _cmd_to_disk(args, tol, stream) -> int:
    doc = parse_document(args.document, tol)
    _require_ok(doc, stream)
    point = cov_to_disk(_as_complex_cov(doc, tol), tol)
    _emit(document_dict("double_disk", point.n, matrix=point.a), args.out, stream)
    return EXIT_OK


def _cmd_to_cov(args, tol, stream) -> int:
    doc = parse_document(args.document, tol)
    _require_ok(doc, stream)
    if doc.kind != "double_disk":
        raise InvariantViolation("to-cov expects a double_disk document")
    cov = disk_to_cov(DoubleDiskPoint(doc.data["matrix"], tol), tol)
    if args.real:
        real = real_from_complex(cov)
        _emit(document_dict("real_cov", real.n, matrix=real.sigma), args.out, stream)
    else:
        _emit(document_dict("complex_cov", cov.n, matrix=cov.sigma), args.out, stream)
    return EXIT_OK


def _cmd_williamson(args, tol, stream) -> int:
    doc = parse_document(args.document, tol)
    _require_ok(doc, stream)
    if doc.kind == "real_cov":
        cov = RealCovariance(doc.data["matrix"], tol)
    elif doc.kind == "complex_cov":
        cov = real_from_complex(ComplexCovariance(doc.data["matrix"], tol))
    else:
        raise InvariantViolation("williamson expects a covariance document")
    s, spectrum = williamson(cov, tol)
    _emit(document_dict("williamson", cov.n, S=s, nu=spectrum.nu), args.out, stream)
    return EXIT_OK


def _cmd_disk_williamson(args, tol, stream) -> int:
    doc = parse_document(args.document, tol)
    _require_ok(doc, stream)
    if doc.kind != "double_disk":
        raise InvariantViolation("disk-williamson expects a double_disk document")
    s, spectrum = disk_williamson(DoubleDiskPoint(doc.data["matrix"], tol), tol)
    _emit(document_dict("disk_williamson", spectrum.n, S=s, nu=spectrum.nu), args.out, stream)
    return EXIT_OK


def _cmd_embed_channel(args, tol, stream) -> int:
    doc = parse_document(args.channel, tol)
    _require_ok(doc, stream)
    if doc.kind != "channel_xy":
        raise InvariantViolation("embed-channel expects a channel_xy document")
    ch = GaussianChannelXY(doc.data["X"], doc.data["Y"], tol)
    embedded = channel_embed(ch, tol)
    _emit(document_dict("block_map", 2 * ch.n, matrix=embedded.matrix), args.out, stream)
    return EXIT_OK


def _cmd_apply(args, tol, stream) -> int:
    ch_doc = parse_document(args.channel, tol)
    _require_ok(ch_doc, stream)
    if ch_doc.kind != "channel_xy":
        raise InvariantViolation("apply expects --channel to be a channel_xy document")
    ch = GaussianChannelXY(ch_doc.data["X"], ch_doc.data["Y"], tol)
    st_doc = parse_document(args.state, tol)
    _require_ok(st_doc, stream)
    sigma = _as_complex_cov(st_doc, tol)

    if args.picture == "cov":
        out = channel_apply_cov(ch, sigma, tol)
        _emit(document_dict("complex_cov", out.n, matrix=out.sigma), args.out, stream)
        return EXIT_OK
    if args.picture == "disk":
        out_disk = channel_apply_disk(channel_embed(ch, tol), cov_to_disk(sigma, tol), tol)
        _emit(document_dict("double_disk", out_disk.n, matrix=out_disk.a), args.out, stream)
        return EXIT_OK
    # both pictures plus the cross-picture residual
    out = channel_apply_cov(ch, sigma, tol)
    out_disk = channel_apply_disk(channel_embed(ch, tol), cov_to_disk(sigma, tol), tol)
    residual = float(np.linalg.norm(cov_to_disk(out, tol).a - out_disk.a, 2))
    _emit(
        {
            "kind": "apply_both",
            "n": out.n,
            "cov": document_dict("complex_cov", out.n, matrix=out.sigma),
            "disk": document_dict("double_disk", out_disk.n, matrix=out_disk.a),
            "cross_picture_residual": residual,
        },
        args.out,
        stream,
    )
    if residual > 1e-9:
        raise NumericalError(f"cross-picture residual {residual:.3e} exceeds 1e-9")
    return EXIT_OK


def _cmd_compose(args, tol, stream) -> int:
    outer = parse_document(args.outer, tol)
    inner = parse_document(args.inner, tol)
    for doc in (outer, inner):
        _require_ok(doc, stream)
        if doc.kind != "channel_xy":
            raise InvariantViolation("compose expects channel_xy documents")
    ch = channel_compose(
        GaussianChannelXY(outer.data["X"], outer.data["Y"], tol),
        GaussianChannelXY(inner.data["X"], inner.data["Y"], tol),
        tol,
    )
    _emit(document_dict("channel_xy", ch.n, X=ch.x, Y=ch.y), args.out, stream)
    return EXIT_OK


def _cmd_classify(args, tol, stream) -> int:
    args.document = args.map
    return _cmd_check(args, tol, stream)


def _parse_zeta(text: str, n: int) -> np.ndarray:
    parts = [p for p in text.replace(",", " ").split() if p]
    if len(parts) != 2 * n:
        raise SchemaError(f"--zeta needs {2 * n} numbers (re im per mode), got {len(parts)}")
    try:
        vals = [float(p) for p in parts]
    except ValueError as exc:
        raise SchemaError(f"--zeta: {exc}") from exc
    return np.array([complex(vals[2 * i], vals[2 * i + 1]) for i in range(n)])


def _cmd_fb_eval(args, tol, stream) -> int:
    doc = parse_document(args.state, tol)
    _require_ok(doc, stream)
    if doc.kind != "disk_point":
        raise InvariantViolation("fb-eval expects a disk_point document")
    zeta = _parse_zeta(args.zeta, doc.n)
    value = fb_pure_eval(DiskPoint(doc.data["matrix"], tol), zeta, tol)
    _emit({"kind": "fb_value", "zeta": [[z.real, z.imag] for z in zeta],
           "value": [value.real, value.imag]}, args.out, stream)
    return EXIT_OK


def _cmd_verify(args, tol, stream) -> int:
    n_list = tuple(int(v) for v in args.modes.split(",") if v)
    reports = equivalence_run(args.suite, args.trials, args.seed, n_list=n_list, tol=tol)
    out = stream or sys.stdout
    for report in reports:
        print(report.to_json(), file=out)
    failed = [r for r in reports if not r.passed]
    summary = {
        "suite": args.suite,
        "trials": args.trials,
        "seed": args.seed,
        "max_residual": max(r.max_residual for r in reports),
        "failed": len(failed),
    }
    print(json.dumps(summary, sort_keys=True), file=out)
    return EXIT_OK if not failed else EXIT_INVARIANT


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="siegeldisk",
        description="Gaussian states and channels in Siegel-disk coordinates.",
    )
    parser.add_argument("--tol", type=float, default=None, help="absolute tolerance override")
    sub = parser.add_subparsers(dest="command", required=True)

    def doc_cmd(name, help_text, doc_arg="document"):
        p = sub.add_parser(name, help=help_text)
        p.add_argument(doc_arg, help="path to a JSON document")
        p.add_argument("--out", default=None, help="write the result to a file instead of stdout")
        return p

    doc_cmd("check", "validate a document and print its membership report")
    doc_cmd("to-disk", "convert a covariance document to the double-disk picture")
    p = doc_cmd("to-cov", "convert a double-disk document to a covariance")
    p.add_argument("--real", action="store_true", help="emit the real covariance")
    doc_cmd("williamson", "normal form of a covariance document")
    doc_cmd("disk-williamson", "normal form of a double-disk state")
    p = sub.add_parser("embed-channel", help="emit the 4n x 4n disk representative of a channel")
    p.add_argument("channel", help="channel_xy document")
    p.add_argument("--out", default=None)
    p = sub.add_parser("apply", help="apply a channel to a state")
    p.add_argument("--channel", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--picture", choices=("disk", "cov", "both"), default="both")
    p.add_argument("--out", default=None)
    p = sub.add_parser("compose", help="compose two channels (outer then inner)")
    p.add_argument("outer")
    p.add_argument("inner")
    p.add_argument("--out", default=None)
    p = sub.add_parser("classify", help="group/semigroup membership of an acting matrix")
    p.add_argument("map", help="block_map document")
    p.add_argument("--out", default=None)
    p = sub.add_parser("fb-eval", help="evaluate a pure holomorphic wavefunction")
    p.add_argument("state", help="disk_point document")
    p.add_argument("--zeta", required=True, help="2n floats: re im per mode")
    p.add_argument("--out", default=None)
    p = sub.add_parser("verify", help="run an equivalence suite")
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--modes", default="1,2,3", help="comma-separated mode counts")
    return parser


_HANDLERS = {
    "check": _cmd_check,
    "to-disk": _cmd_to_disk,
    "to-cov": _cmd_to_cov,
    "williamson": _cmd_williamson,
    "disk-williamson": _cmd_disk_williamson,
    "embed-channel": _cmd_embed_channel,
    "apply": _cmd_apply,
    "compose": _cmd_compose,
    "classify": _cmd_classify,
    "fb-eval": _cmd_fb_eval,
    "verify": _cmd_verify,
}


def _subcommand_token(argv):
    expecting_value = False
    for arg in argv:
        if expecting_value:
            expecting_value = False
            continue
        if arg == "--tol":
            expecting_value = True
            continue
        if arg.startswith("-"):
            continue
        return arg
    return None


def run_command(argv, stream=None) -> int:
    """Run one subcommand; returns the process exit status."""
    argv = list(argv)
    token = _subcommand_token(argv)
    if token is not None and token not in COMMANDS:
        print(f"unknown subcommand {token!r}", file=sys.stderr)
        return EXIT_USAGE
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    tol = DEFAULT_TOL if args.tol is None else Tolerances(atol=args.tol)
    try:
        return _HANDLERS[args.command](args, tol, stream)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
