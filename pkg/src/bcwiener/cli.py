"""Command-line front end: ``bcwiener <command> --input IN --output OUT``.

Every command reads one JSON document and writes one result file (JSON, or
CSV for ``superosc`` and ``approx``) plus a run report ``OUT.report.json``
holding residuals, tail masses and iteration counts.  Without ``--output``
the result goes to stdout and the report to stderr.

Exit status: 0 on success, 2 when the input is mathematically infeasible
(not positive, not invertible on the boundary, ...), 3 for I/O, schema and
usage errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, replace

import numpy as np

from . import io as bio
from .bicomplex import BoundaryPoint, idempotent_decompose
from .errors import DomainError
from .realization import (
    build_realization,
    fourier_coefficients,
    riesz_projection,
    spectral_fourier_coeffs,
    stein_residual,
    stein_solve,
)
from .series import ChannelSeries, is_power_of_two
from .spectral import FactorOptions, factorize_channel, invert, spectral_factorize
from .superosc import approximation_error, superosc_coeffs, superosc_eval

__all__ = ["RunConfig", "run", "main", "COMMANDS", "EXIT_OK", "EXIT_DOMAIN", "EXIT_IO"]

COMMANDS = ("decompose", "invert", "factorize", "realize", "fourier", "stein", "superosc", "approx")
EXIT_OK, EXIT_DOMAIN, EXIT_IO = 0, 2, 3


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: str
    output_path: str | None = None
    K: int | None = None
    N: int | None = None
    grid: int | None = None
    tol: float | None = None
    normalization: str | None = None
    method: str = "schur"
    seed: int = 0

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.N is not None and not is_power_of_two(self.N):
            raise UsageError(f"-N must be a power of two, got {self.N}")
        if self.K is not None and self.K < 0:
            raise UsageError(f"-K must be nonnegative, got {self.K}")
        if self.grid is not None and self.grid < 1:
            raise UsageError(f"--grid must be positive, got {self.grid}")
        if self.method not in ("schur", "quadrature"):
            raise UsageError(f"unknown --method {self.method!r}")
        if self.normalization not in (None, "pd0", "at_one"):
            raise UsageError(f"unknown --normalization {self.normalization!r}")


def _plain(x):
    """Recursively convert numpy scalars / tuples for JSON output."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    if isinstance(x, (complex, np.complexfloating)):
        return bio.encode_complex(x)
    return x


# commands -----------------------------------------------------------------
# each returns (result_text, report_dict)


def _cmd_decompose(doc, cfg: RunConfig):
    if isinstance(doc, dict) and "z1" in doc:
        l1, l2 = idempotent_decompose(bio.decode_bicomplex(doc, "input"))
        return bio.dumps({"lambda1": bio.encode_complex(l1), "lambda2": bio.encode_complex(l2)}), {}
    M = bio.decode_bcmatrix(doc, "input")
    out = {"P1": bio.encode_cmatrix(M.P1), "P2": bio.encode_cmatrix(M.P2)}
    return bio.dumps(out), {"rows": M.shape[0], "cols": M.shape[1]}


def _cmd_invert(doc, cfg: RunConfig):
    f = bio.decode_series(doc, "input")
    res = invert(f, K=cfg.K, N=cfg.N, tol=cfg.tol)
    return bio.dumps(bio.encode_series(res.series)), res.report()


def _factor_inputs(doc, cfg: RunConfig):
    if isinstance(doc, dict) and "series" in doc:
        series_doc = doc["series"]
        opts = bio.decode_options(doc.get("options"), "input.options")
    else:
        series_doc, opts = doc, FactorOptions()
    overrides = {}
    if cfg.K is not None:
        overrides["K"] = cfg.K
    if cfg.N is not None:
        overrides["N"] = cfg.N
    if cfg.tol is not None:
        overrides["newton_tol"] = cfg.tol
    if cfg.normalization is not None:
        overrides["normalization"] = cfg.normalization
    return series_doc, replace(opts, **overrides)


def _cmd_factorize(doc, cfg: RunConfig):
    series_doc, opts = _factor_inputs(doc, cfg)
    if bio.is_complex_series(series_doc):
        F = bio.decode_complex_series(series_doc, "input")
        if F.shape[0] != F.shape[1]:
            raise bio.SchemaError(f"input: factorization needs square coefficients, got {F.shape}")
        res = factorize_channel(F, opts, channel=0)
        out = bio.encode_complex_series(res.series)
    else:
        res = spectral_factorize(bio.decode_series(series_doc, "input"), opts)
        out = bio.encode_series(res.series)
    report = res.report()
    report["options"] = bio.encode_options(opts)
    return bio.dumps(out), report


def _cmd_realize(doc, cfg: RunConfig):
    pf = bio.decode_partial_fractions(doc, "input")
    R = build_realization(pf, pole_tol=cfg.tol or 0.0)
    return bio.dumps(bio.encode_realization(R)), {"order": R.order, "rows": R.shape[0], "cols": R.shape[1]}


def _cmd_fourier(doc, cfg: RunConfig):
    K = 8 if cfg.K is None else cfg.K
    if isinstance(doc, dict) and {"a", "b", "c", "d"} <= set(doc):
        a, b, c, d = (bio.decode_cmatrix(doc[k], f"input.{k}") for k in "abcd")
        coeffs = np.stack([spectral_fourier_coeffs(a, b, c, d, n) for n in range(-K, K + 1)])
        X = stein_solve(a, b)
        report = {"K": K, "stein_residual": stein_residual(a, b, X)}
        return bio.dumps(bio.encode_complex_series(ChannelSeries(-K, coeffs))), report
    R = bio.decode_realization(doc, "input")
    P = riesz_projection(R.A, method=cfg.method) if R.order else None
    F = fourier_coefficients(R, -K, K, P)
    report = {"K": K, "method": cfg.method, "order": R.order, "outside_rank": P.rank if P else 0}
    return bio.dumps(bio.encode_complex_series(F)), report


def _cmd_stein(doc, cfg: RunConfig):
    a = bio.decode_cmatrix(bio._require(doc, "a", "input"), "input.a")
    b = bio.decode_cmatrix(bio._require(doc, "b", "input"), "input.b")
    X = stein_solve(a, b, tol=cfg.tol or 1e-12)
    return bio.dumps({"X": bio.encode_cmatrix(X)}), {"residual": stein_residual(a, b, X)}


def _int_list(x, where: str) -> list[int]:
    vals = x if isinstance(x, list) else [x]
    if not vals or not all(isinstance(v, int) and not isinstance(v, bool) and v >= 1 for v in vals):
        raise bio.SchemaError(f"{where}: expected a positive integer or a list of them")
    return vals


def _float_list(x, where: str) -> list[float]:
    vals = x if isinstance(x, list) else [x]
    out = []
    for v in vals:
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise bio.SchemaError(f"{where}: expected finite numbers")
        out.append(float(v))
    return out


def _cmd_superosc(doc, cfg: RunConfig):
    ms = _int_list(bio._require(doc, "m", "input"), "input.m")
    a_vals = _float_list(bio._require(doc, "a", "input"), "input.a")
    if "t" not in doc:
        if len(ms) != 1 or len(a_vals) != 1:
            raise bio.SchemaError("input: coefficient output needs a single m and a")
        c = superosc_coeffs(ms[0], a_vals[0])
        lines = ["k,c_k"] + [f"{k},{bio._fmt(ck)}" for k, ck in enumerate(c)]
        return "\n".join(lines) + "\n", {"m": ms[0], "a": a_vals[0], "abs_sum": float(np.sum(np.abs(c)))}
    ts = _float_list(doc["t"], "input.t")
    rows = []
    for m in ms:
        for a in a_vals:
            err = np.abs(superosc_eval(m, a, np.array(ts)) - np.exp(1j * a * np.array(ts)))
            rows.extend((m, a, t, 0.0, e) for t, e in zip(ts, err))
    worst = {f"m={m},a={bio._fmt(a)}": max(r[4] for r in rows if r[0] == m and r[1] == a) for m in ms for a in a_vals}
    return bio.sweep_csv(rows), {"max_error": worst}


def _cmd_approx(doc, cfg: RunConfig):
    f = bio.decode_series(bio._require(doc, "series", "input"), "input.series")
    ms = _int_list(bio._require(doc, "m", "input"), "input.m")
    radius = _float_list(doc.get("radius", 0.5), "input.radius")[0]
    G = cfg.grid or 9
    axis = np.linspace(-radius, radius, G) if G > 1 else np.zeros(1)
    pts = [(t, s) for t in axis for s in axis]
    rows, worst = [], {}
    for m in ms:
        for t, s in pts:
            err = approximation_error(f, m, [BoundaryPoint(t, s)])
            rows.append((m, None, t, s, err))
        worst[str(m)] = max(r[4] for r in rows if r[0] == m)
    return bio.sweep_csv(rows), {"grid": G, "radius": radius, "max_error": worst}


_HANDLERS = {
    "decompose": _cmd_decompose,
    "invert": _cmd_invert,
    "factorize": _cmd_factorize,
    "realize": _cmd_realize,
    "fourier": _cmd_fourier,
    "stein": _cmd_stein,
    "superosc": _cmd_superosc,
    "approx": _cmd_approx,
}


# driver -------------------------------------------------------------------


def _read_input(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise bio.SchemaError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise bio.SchemaError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno} column {exc.colno})") from exc


def _reject_constant(name):
    raise bio.SchemaError(f"non-finite constant {name} is not allowed")


def _write(path: str, text: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def run(cfg: RunConfig) -> int:
    """Execute one command; returns the exit status."""
    report = {"command": cfg.command, "seed": cfg.seed}
    try:
        doc = _read_input(cfg.input_path)
        text, extra = _HANDLERS[cfg.command](doc, cfg)
        report.update(extra)
        report["status"] = "ok"
        status = EXIT_OK
    except DomainError as exc:
        text, status = None, EXIT_DOMAIN
        report.update(status="domain_error", error=type(exc).__name__, message=str(exc))
    except (bio.SchemaError, UsageError, OSError) as exc:
        text, status = None, EXIT_IO
        report.update(status="input_error", error=type(exc).__name__, message=str(exc))
    except (ValueError, np.linalg.LinAlgError) as exc:
        # remaining value errors stem from inconsistent options (K vs N, ...)
        text, status = None, EXIT_IO
        report.update(status="input_error", error=type(exc).__name__, message=str(exc))

    report_text = bio.dumps(_plain(report))
    try:
        if cfg.output_path is None:
            if text is not None:
                sys.stdout.write(text)
            sys.stderr.write(report_text)
        else:
            if text is not None:
                _write(cfg.output_path, text)
            _write(cfg.output_path + ".report.json", report_text)
    except OSError as exc:
        sys.stderr.write(f"bcwiener: cannot write output: {exc}\n")
        return EXIT_IO
    if status != EXIT_OK:
        sys.stderr.write(f"bcwiener {cfg.command}: {report['error']}: {report['message']}\n")
    return status


class _Parser(argparse.ArgumentParser):
    # usage errors share the I/O exit code; 2 is reserved for domain errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_IO, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bcwiener", description="Bicomplex Wiener algebra computations.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", "-i", required=True, help="input JSON file ('-' for stdin)")
    parser.add_argument("--output", "-o", help="result file; the report goes to OUTPUT.report.json")
    parser.add_argument("-K", type=int, help="truncation order")
    parser.add_argument("-N", type=int, help="grid size (power of two)")
    parser.add_argument("--grid", type=int, help="evaluation points per axis (approx)")
    parser.add_argument("--tol", type=float, help="command tolerance")
    parser.add_argument("--normalization", choices=("pd0", "at_one"))
    parser.add_argument("--method", choices=("schur", "quadrature"), default="schur")
    parser.add_argument("--seed", type=int, default=0, help="recorded in the report")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command,
            input_path=args.input,
            output_path=args.output,
            K=args.K,
            N=args.N,
            grid=args.grid,
            tol=args.tol,
            normalization=args.normalization,
            method=args.method,
            seed=args.seed,
        )
    except UsageError as exc:
        sys.stderr.write(f"bcwiener: error: {exc}\n")
        return EXIT_IO
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
