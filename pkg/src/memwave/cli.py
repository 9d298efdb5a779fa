"""Command-line front end.

Subcommands
-----------
spectrum      per-mode roots table (csv or json)
gaps          gap audit as JSON, or a beta -> gamma table as CSV
ingham-check  energy lower bound report for a family file
modes         recover per-mode coefficients from sampled initial data
observe       full observability report as JSON
thresholds    beta, gamma, S, T0 table as CSV

Global flags --threads, --output and --config are accepted by every
subcommand.  A config file is a flat `key = value` document (# comments);
command-line flags override file values.  All numbers are emitted with 17
significant digits so repeated runs are byte-identical and values round-trip
exactly.

Exit status: 0 on success, 2 on validation errors (single-line diagnostic on
stderr), 1 on internal assertion failures (offending datum printed).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from .errors import (
    AuditFailure,
    ComplexRegime,
    DegenerateExponents,
    DegenerateMode,
    GridTooCoarse,
    HypothesisError,
    MonotonicityFailure,
    NegativeRadicand,
    NoUsableModes,
    OutOfRange,
    ParseError,
    PoleError,
    PreconditionViolated,
    RealityViolation,
    RegimeError,
    ThetaOutOfRange,
    ValidationError,
)
from .gap_analysis import audit_gaps, gap_constant
from .ingham import ExponentFamily, check_hypotheses, energy_lower_bound
from .modes import InitialData, expand
from .observability import constant_S, thresholds, verify_observability, ObservabilityConfig
from .spectrum import BETA_MAX, KernelParams, mode_spectrum

__all__ = ["RunConfig", "load_config", "parse_and_dispatch", "main"]

_KNOWN_KEYS = {
    "subcommand", "beta", "eta", "kmax", "format", "steps", "gamma_table",
    "family", "t", "u0", "u1", "emit", "mu", "theta", "report", "beta_steps",
    "threads", "output",
}

_KMAX_LIMIT = 512


@dataclass
class RunConfig:
    """A resolved run: subcommand plus its raw parameter map."""

    subcommand: Optional[str] = None
    parameters: Dict[str, str] = field(default_factory=dict)
    output_path: Optional[str] = None
    format: Optional[str] = None


# ---------------------------------------------------------------------------
# deterministic serialization


def format_float(x: float) -> str:
    """Decimal form with 17 significant digits (round-trip exact for binary64)."""
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def _json_scalar(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    if isinstance(value, str):
        return json.dumps(value)
    if value is None:
        return "null"
    raise TypeError(f"cannot serialize {type(value)!r}")


def json_dumps(obj, indent: int = 0) -> str:
    """Minimal deterministic JSON writer (insertion order, 17-digit floats)."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {json_dumps(v, indent + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not len(obj):
            return "[]"
        items = [f"{inner}{json_dumps(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return _json_scalar(obj)


def _csv_num(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _csv_table(header: str, rows) -> str:
    lines = [header]
    lines.extend(",".join(_csv_num(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _write_output(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# config file and flag merging


def load_config(path: str) -> RunConfig:
    """Parse a flat `key = value` config file into a RunConfig.

    Keys are case-insensitive with hyphens and underscores interchangeable.
    Raises ParseError with the line number for malformed lines and
    ValidationError for unknown keys.
    """
    try:
        with open(path, "r") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise ValidationError("config", f"cannot read {path}: {exc.strerror}")
    parameters: Dict[str, str] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {line!r}", lineno)
        key, _, value = line.partition("=")
        key = key.strip().lower().replace("-", "_")
        value = value.strip()
        if not key:
            raise ParseError("empty key", lineno)
        if key not in _KNOWN_KEYS:
            raise ValidationError(key, "unknown configuration key")
        parameters[key] = value
    subcommand = parameters.pop("subcommand", None)
    return RunConfig(
        subcommand=subcommand,
        parameters=parameters,
        output_path=parameters.get("output"),
        format=parameters.get("format"),
    )


class _Resolver:
    """Merge command-line flags over config-file values with typed validation."""

    def __init__(self, args: argparse.Namespace, file_params: Dict[str, str]):
        self._args = vars(args)
        self._file = file_params

    def _raw(self, name: str):
        cli_value = self._args.get(name)
        if cli_value is not None:
            return cli_value, True
        return self._file.get(name), False

    def get_float(self, name, required=False, default=None, minimum=None,
                  maximum=None, exclusive_min=None) -> Optional[float]:
        raw, from_cli = self._raw(name)
        if raw is None:
            if required:
                raise ValidationError(name, "required value missing")
            if default is None:
                return None
            value = float(default)
        else:
            try:
                value = float(raw)
            except (TypeError, ValueError):
                raise ValidationError(name, f"not a number: {raw!r}")
        if minimum is not None and value < minimum:
            raise ValidationError(name, f"must be >= {minimum}, got {value}")
        if maximum is not None and value > maximum:
            raise ValidationError(name, f"must be <= {maximum}, got {value}")
        if exclusive_min is not None and value <= exclusive_min:
            raise ValidationError(name, f"must be > {exclusive_min}, got {value}")
        return value

    def get_int(self, name, required=False, default=None, minimum=None,
                maximum=None) -> Optional[int]:
        raw, _ = self._raw(name)
        if raw is None:
            if required:
                raise ValidationError(name, "required value missing")
            if default is None:
                return None
            value = int(default)
        else:
            try:
                value = int(str(raw), 10)
            except (TypeError, ValueError):
                raise ValidationError(name, f"not an integer: {raw!r}")
        if minimum is not None and value < minimum:
            raise ValidationError(name, f"must be >= {minimum}, got {value}")
        if maximum is not None and value > maximum:
            raise ValidationError(name, f"must be <= {maximum}, got {value}")
        return value

    def get_str(self, name, required=False, default=None) -> Optional[str]:
        raw, _ = self._raw(name)
        if raw is None:
            if required:
                raise ValidationError(name, "required value missing")
            return default
        return str(raw)

    def get_choice(self, name, choices, default=None) -> str:
        value = self.get_str(name, default=default)
        if value not in choices:
            raise ValidationError(name, f"must be one of {sorted(choices)}, got {value!r}")
        return value

    def get_flag(self, name) -> bool:
        raw, from_cli = self._raw(name)
        if raw is None:
            return False
        if from_cli:
            return bool(raw)
        text = str(raw).strip().lower()
        if text in ("1", "true", "yes", "on"):
            return True
        if text in ("0", "false", "no", "off", ""):
            return False
        raise ValidationError(name, f"not a boolean: {raw!r}")


# ---------------------------------------------------------------------------
# subcommand runners


def _load_grid(path: str, name: str) -> np.ndarray:
    try:
        values = np.loadtxt(path, delimiter=",", ndmin=2)
    except OSError as exc:
        raise ValidationError(name, f"cannot read {path}: {exc.strerror}")
    except ValueError as exc:
        raise ValidationError(name, f"malformed CSV grid in {path}: {exc}")
    return values


def _run_spectrum(res: _Resolver, output: Optional[str]) -> None:
    beta = res.get_float("beta", required=True, minimum=0.0, maximum=BETA_MAX)
    eta = res.get_float("eta", required=True, minimum=0.0)
    kmax = res.get_int("kmax", required=True, minimum=1, maximum=_KMAX_LIMIT)
    fmt = res.get_choice("format", {"csv", "json"}, default="csv")
    params = KernelParams(beta=beta, eta=eta)
    lam, omega, r = mode_spectrum(params, kmax)
    z1, z2, z3 = 1j * omega, -1j * omega.conj(), r.astype(complex)
    res1 = np.abs(z1 + z2 + z3 + params.eta)
    res2 = np.abs(z1 * z2 + z1 * z3 + z2 * z3 - lam)
    res3 = np.abs(z1 * z2 * z3 + (params.eta - params.beta) * lam)
    residual = np.maximum(res1, np.maximum(res2, res3))

    if fmt == "csv":
        rows = []
        for k1 in range(kmax):
            for k2 in range(kmax):
                rows.append((k1 + 1, k2 + 1, lam[k1, k2], omega[k1, k2].real,
                             omega[k1, k2].imag, r[k1, k2], residual[k1, k2]))
        text = _csv_table("k1,k2,lambda,re_omega,im_omega,r,residual", rows)
    else:
        records = []
        for k1 in range(kmax):
            for k2 in range(kmax):
                records.append({
                    "k1": k1 + 1,
                    "k2": k2 + 1,
                    "lambda": float(lam[k1, k2]),
                    "re_omega": float(omega[k1, k2].real),
                    "im_omega": float(omega[k1, k2].imag),
                    "r": float(r[k1, k2]),
                    "residual": float(residual[k1, k2]),
                })
        text = json_dumps(records) + "\n"
    _write_output(text, output)


def _run_gaps(res: _Resolver, output: Optional[str]) -> None:
    if res.get_flag("gamma_table"):
        steps = res.get_int("steps", required=True, minimum=1)
        betas = np.linspace(0.0, BETA_MAX, steps + 1)
        rows = [(b, gap_constant(float(b)).gamma) for b in betas]
        _write_output(_csv_table("beta,gamma", rows), output)
        return
    beta = res.get_float("beta", required=True, minimum=0.0, maximum=BETA_MAX)
    kmax = res.get_int("kmax", required=True, minimum=2, maximum=_KMAX_LIMIT)
    audit = audit_gaps(KernelParams.limiting_regime(beta), kmax)
    payload = {
        "beta": audit.beta,
        "kmax": audit.kmax,
        "gamma": audit.gamma,
        "min_ratio_k2": audit.min_ratio_k2,
        "min_ratio_k1": audit.min_ratio_k1,
        "min_re_over_norm": audit.min_re_over_norm,
        "im_min": audit.im_min,
        "im_max": audit.im_max,
    }
    _write_output(json_dumps(payload) + "\n", output)


def _load_family(path: str) -> ExponentFamily:
    try:
        with open(path, "r") as handle:
            raw = json.load(handle)
    except OSError as exc:
        raise ValidationError("family", f"cannot read {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise ValidationError("family", f"malformed JSON in {path}: {exc}")
    required = ["omega_re", "omega_im", "r", "C_re", "C_im", "R",
                "gamma", "tau", "theta", "mu"]
    missing = [key for key in required if key not in raw]
    if missing:
        raise ValidationError("family", f"missing keys: {', '.join(missing)}")
    try:
        omegas = np.asarray(raw["omega_re"], dtype=float) + 1j * np.asarray(
            raw["omega_im"], dtype=float)
        family = ExponentFamily(
            omegas=omegas,
            rs=np.asarray(raw["r"], dtype=float),
            Cs=np.asarray(raw["C_re"], dtype=float) + 1j * np.asarray(
                raw["C_im"], dtype=float),
            Rs=np.asarray(raw["R"], dtype=float),
            gamma=float(raw["gamma"]),
            tau=int(raw["tau"]),
            theta=float(raw["theta"]),
            mu=float(raw["mu"]),
        )
    except (TypeError, ValueError) as exc:
        raise ValidationError("family", str(exc))
    return family


def _run_ingham_check(res: _Resolver, output: Optional[str]) -> None:
    family_path = res.get_str("family", required=True)
    horizon = res.get_float("t", required=True, exclusive_min=0.0)
    family = _load_family(family_path)
    violations = check_hypotheses(family, horizon)
    report = energy_lower_bound(family, horizon, check=False)
    payload = {
        "lhs": report.lhs,
        "rhs": report.rhs,
        "S": report.S,
        "margin": report.margin,
        "violations": [str(v) for v in violations],
    }
    text = json_dumps(payload) + "\n"
    _write_output(text, output)
    if not violations and report.margin < -1e-9 * (1.0 + abs(report.rhs)):
        raise AuditFailure(
            f"energy lower bound failed: lhs={report.lhs} < rhs={report.rhs}",
            datum=(report.lhs, report.rhs),
        )


def _run_modes(res: _Resolver, output: Optional[str]) -> None:
    beta = res.get_float("beta", required=True, minimum=0.0, maximum=BETA_MAX)
    kmax = res.get_int("kmax", required=True, minimum=1, maximum=_KMAX_LIMIT)
    u0_path = res.get_str("u0", required=True)
    u1_path = res.get_str("u1", required=True)
    emit = res.get_str("emit") or output
    data = InitialData.from_samples(
        _load_grid(u0_path, "u0"), _load_grid(u1_path, "u1"), kmax
    )
    expansion = expand(KernelParams.limiting_regime(beta), data)
    records = []
    for k1 in range(kmax):
        for k2 in range(kmax):
            records.append({
                "k1": k1 + 1,
                "k2": k2 + 1,
                "C_re": float(expansion.C[k1, k2].real),
                "C_im": float(expansion.C[k1, k2].imag),
                "R": float(expansion.R[k1, k2]),
                "re_omega": float(expansion.omega[k1, k2].real),
                "im_omega": float(expansion.omega[k1, k2].imag),
                "r": float(expansion.r[k1, k2]),
            })
    _write_output(json_dumps(records) + "\n", emit)


def _run_observe(res: _Resolver, output: Optional[str], threads: int) -> None:
    beta = res.get_float("beta", required=True, minimum=0.0, maximum=BETA_MAX)
    horizon = res.get_float("t", required=True, exclusive_min=0.0)
    kmax = res.get_int("kmax", required=True, minimum=1, maximum=_KMAX_LIMIT)
    mu = res.get_float("mu", exclusive_min=0.0)
    theta = res.get_float("theta", default=1.0, exclusive_min=0.5)
    u0_path = res.get_str("u0", required=True)
    u1_path = res.get_str("u1", required=True)
    report_path = res.get_str("report") or output
    data = InitialData.from_samples(
        _load_grid(u0_path, "u0"), _load_grid(u1_path, "u1"), kmax
    )
    config = ObservabilityConfig(beta=beta, T=horizon, kmax=kmax, mu=mu, theta=theta)
    report = verify_observability(config, data, threads=threads)
    payload = {
        "beta": report.beta,
        "T": report.T,
        "kmax": report.kmax,
        "theta": report.theta,
        "mu": report.mu,
        "gamma": report.gamma,
        "S": report.S,
        "c0": report.c0,
        "T0": report.T0,
        "beta0": report.beta0,
        "lhs": report.lhs,
        "rhs_sum": report.rhs_sum,
        "margin": report.margin,
        "verdict": report.verdict,
        "below_threshold": report.below_threshold,
        "infeasible": report.infeasible,
    }
    _write_output(json_dumps(payload) + "\n", report_path)


def _run_thresholds(res: _Resolver, output: Optional[str]) -> None:
    mu = res.get_float("mu", required=True, exclusive_min=0.0)
    theta = res.get_float("theta", default=1.0, exclusive_min=0.5)
    steps = res.get_int("beta_steps", required=True, minimum=1)
    S = constant_S(mu, theta)
    betas = np.linspace(0.0, BETA_MAX, steps + 1)
    rows = []
    for b in betas:
        beta0, t0 = thresholds(float(b), mu, theta)
        rows.append((float(b), gap_constant(float(b)).gamma, S, t0, beta0))
    _write_output(_csv_table("beta,gamma,S,T0,beta0_global", rows), output)


# ---------------------------------------------------------------------------
# parser assembly and dispatch


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads for row-parallel reductions (default 1)")
    common.add_argument("--output", default=None, help="write output to this path")
    common.add_argument("--config", default=None,
                        help="key = value config file; flags override file values")

    parser = argparse.ArgumentParser(
        prog="memwave",
        description="Spectrum, gap and boundary-observability diagnostics for "
                    "the memory wave equation on the unit-pi square.",
    )
    sub = parser.add_subparsers(dest="subcommand")

    p = sub.add_parser("spectrum", parents=[common],
                       help="per-mode characteristic roots table")
    p.add_argument("--beta", default=None)
    p.add_argument("--eta", default=None)
    p.add_argument("--kmax", default=None)
    p.add_argument("--format", default=None, choices=("csv", "json"))

    p = sub.add_parser("gaps", parents=[common], help="gap audit or gamma table")
    p.add_argument("--beta", default=None)
    p.add_argument("--kmax", default=None)
    p.add_argument("--gamma-table", dest="gamma_table", action="store_true",
                   default=None, help="emit a beta,gamma CSV table instead")
    p.add_argument("--steps", default=None)

    p = sub.add_parser("ingham-check", parents=[common],
                       help="energy lower bound for a family file")
    p.add_argument("--family", default=None)
    p.add_argument("--T", dest="t", default=None)

    p = sub.add_parser("modes", parents=[common],
                       help="recover per-mode coefficients from sampled data")
    p.add_argument("--beta", default=None)
    p.add_argument("--kmax", default=None)
    p.add_argument("--u0", default=None)
    p.add_argument("--u1", default=None)
    p.add_argument("--emit", default=None)

    p = sub.add_parser("observe", parents=[common],
                       help="boundary observability report")
    p.add_argument("--beta", default=None)
    p.add_argument("--T", dest="t", default=None)
    p.add_argument("--kmax", default=None)
    p.add_argument("--mu", default=None)
    p.add_argument("--theta", default=None)
    p.add_argument("--u0", default=None)
    p.add_argument("--u1", default=None)
    p.add_argument("--report", default=None)

    p = sub.add_parser("thresholds", parents=[common],
                       help="beta,gamma,S,T0 table")
    p.add_argument("--mu", default=None)
    p.add_argument("--theta", default=None)
    p.add_argument("--beta-steps", dest="beta_steps", default=None)

    return parser


_VALIDATION_ERRORS = (
    ParseError, ValidationError, OutOfRange, ThetaOutOfRange, GridTooCoarse,
    RegimeError, PoleError, NegativeRadicand, ComplexRegime,
    DegenerateExponents, DegenerateMode, NoUsableModes, PreconditionViolated,
    HypothesisError, ValueError,
)

_ASSERTION_ERRORS = (
    AuditFailure, MonotonicityFailure, RealityViolation, ArithmeticError,
    AssertionError,
)


def parse_and_dispatch(argv) -> int:
    """Run one CLI invocation; returns the process exit status."""
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.subcommand is None:
        print("error: a subcommand is required (see --help)", file=sys.stderr)
        return 2

    try:
        file_params: Dict[str, str] = {}
        if args.config:
            file_params = dict(load_config(args.config).parameters)
        res = _Resolver(args, file_params)
        threads = res.get_int("threads", default=1, minimum=1)
        output = res.get_str("output")

        if args.subcommand == "spectrum":
            _run_spectrum(res, output)
        elif args.subcommand == "gaps":
            _run_gaps(res, output)
        elif args.subcommand == "ingham-check":
            _run_ingham_check(res, output)
        elif args.subcommand == "modes":
            _run_modes(res, output)
        elif args.subcommand == "observe":
            _run_observe(res, output, threads)
        elif args.subcommand == "thresholds":
            _run_thresholds(res, output)
        else:  # pragma: no cover - argparse restricts choices
            raise ValidationError("subcommand", f"unknown subcommand {args.subcommand!r}")
        return 0
    except _ASSERTION_ERRORS as exc:
        datum = getattr(exc, "datum", None)
        suffix = f" [datum: {datum}]" if datum is not None else ""
        message = f"assertion failure: {exc}{suffix}".replace("\n", " ")
        print(message, file=sys.stderr)
        return 1
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}".replace("\n", " "), file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(parse_and_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
