"""Command-line front end: verify / spectrum / sweep.

Configuration comes from flags, optionally seeded by a flat JSON config
file (same keys as the flags with dashes turned into underscores); flags
override the file.  Reports are JSON, spectra are CSV with 17 significant
digits so that 64-bit floats round-trip.  Exit codes: 0 all checks
passed, 1 at least one verification failure, 2 usage/config/I-O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from datetime import datetime, timezone

from .checks import Report, SuiteConfig, check_spectrum, run_suite
from .grids import build_grid
from .model import ModelParams, make_params, oscillator_levels, with_beta

DEFAULTS = {
    "m": 1.0,
    "hbar": 1.0,
    "beta": 0.0,
    "n": 1001,
    "pmax": 10.0,
    "fd_order": 4,
    "levels": 6,
    "probes": 5,
    "seed": 42,
}


class UsageError(Exception):
    """Bad flags, bad config values, or I/O trouble; exits with code 2."""


@dataclass(frozen=True)
class JobConfig:
    command: str
    params: ModelParams
    n: int
    p_max: float
    fd_order: int
    levels: int
    probes: int
    seed: int
    out: str | None
    beta_grid: tuple | None
    exponent_override: float | None

    def suite_config(self) -> SuiteConfig:
        return SuiteConfig(n=self.n, p_max=self.p_max, fd_order=self.fd_order,
                           levels=self.levels, probes=self.probes,
                           seed=self.seed,
                           exponent_override=self.exponent_override)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--omega", type=float)
    common.add_argument("--lambda", dest="lam", type=float)
    common.add_argument("--delta", type=float)
    common.add_argument("--m", type=float)
    common.add_argument("--hbar", type=float)
    common.add_argument("--beta", type=float)
    common.add_argument("--n", type=int)
    common.add_argument("--pmax", type=float)
    common.add_argument("--fd-order", dest="fd_order", type=int)
    common.add_argument("--levels", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--out", type=str)
    common.add_argument("--config", type=str)
    common.add_argument("--beta-grid", dest="beta_grid", type=str)
    common.add_argument("--exponent-override", dest="exponent_override",
                        type=float)
    parser = argparse.ArgumentParser(
        prog="swanson",
        description="Verify the operator identities of the Swanson model, "
                    "with or without minimal-length deformation.")
    subparsers = parser.add_subparsers(dest="command", required=True)
    subparsers.add_parser("verify", parents=[common],
                          help="run the verification suite, emit a JSON report")
    subparsers.add_parser("spectrum", parents=[common],
                          help="emit the low-lying spectrum as CSV")
    subparsers.add_parser("sweep", parents=[common],
                          help="run the suite over a list of beta values")
    return parser


def _parse_beta_grid(value) -> tuple:
    if isinstance(value, (list, tuple)):
        entries = [float(v) for v in value]
    else:
        entries = [float(chunk) for chunk in str(value).split(",") if chunk.strip()]
    if any(v < 0 for v in entries):
        raise UsageError("beta-grid values must be >= 0")
    return tuple(entries)


def parse(argv) -> JobConfig:
    """Merge flags over an optional flat JSON config file into a validated
    JobConfig; every validation problem raises UsageError."""
    parser = _build_parser()
    namespace = parser.parse_args(argv)
    flags = {key: value for key, value in vars(namespace).items()
             if key != "command" and value is not None}

    merged = dict(DEFAULTS)
    config_path = flags.pop("config", None)
    if config_path is not None:
        try:
            with open(config_path, "r", encoding="utf-8") as handle:
                file_values = json.load(handle)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config file {config_path}: {exc}")
        if not isinstance(file_values, dict):
            raise UsageError("config file must hold a flat JSON object")
        for key, value in file_values.items():
            key = key.replace("-", "_")
            if key == "lambda":
                key = "lam"
            merged[key] = value
    merged.update(flags)

    for name in ("omega", "lam", "delta"):
        if name not in merged:
            flag = "lambda" if name == "lam" else name
            raise UsageError(f"missing required parameter --{flag}")

    try:
        params = make_params(merged["omega"], merged["lam"], merged["delta"],
                             merged["m"], merged["hbar"], merged["beta"])
        build_grid(int(merged["n"]), float(merged["pmax"]))
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc))
    if int(merged["fd_order"]) not in (2, 4):
        raise UsageError("fd-order must be 2 or 4")
    if int(merged["levels"]) < 1:
        raise UsageError("levels must be >= 1")
    if int(merged["probes"]) < 1:
        raise UsageError("probes must be >= 1")

    beta_grid = merged.get("beta_grid")
    if beta_grid is not None:
        beta_grid = _parse_beta_grid(beta_grid)

    override = merged.get("exponent_override")
    return JobConfig(
        command=namespace.command,
        params=params,
        n=int(merged["n"]),
        p_max=float(merged["pmax"]),
        fd_order=int(merged["fd_order"]),
        levels=int(merged["levels"]),
        probes=int(merged["probes"]),
        seed=int(merged["seed"]),
        out=merged.get("out"),
        beta_grid=beta_grid,
        exponent_override=None if override is None else float(override),
    )


def _timestamp() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _write_text(out: str | None, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}")


def _fmt17(value: float) -> str:
    return format(value, ".17g")


def cmd_verify(config: JobConfig) -> int:
    report = run_suite(config.params, config.suite_config())
    payload = report.to_json_dict(_timestamp())
    _write_text(config.out, json.dumps(payload, indent=2) + "\n")
    return 0 if report.passed else 1


def cmd_spectrum(config: JobConfig) -> int:
    params = config.params
    kappa = 0 if params.beta == 0.0 else -1
    grid = build_grid(config.n, config.p_max, kappa, params.beta)
    try:
        result, spectrum = check_spectrum(params, grid, config.fd_order,
                                          config.levels)
    except Exception as exc:
        sys.stderr.write(f"eigensolver failure: {exc}\n")
        return 1
    oracle_values = None
    if params.beta == 0.0 and "oracle" in result.details \
            and isinstance(result.details["oracle"], list):
        oracle_values = oscillator_levels(params, spectrum.levels)
    lines = ["n,re,im,oracle,abs_err"]
    for index, value in enumerate(spectrum.eigenvalues):
        if oracle_values is not None:
            oracle = _fmt17(oracle_values[index])
            abs_err = _fmt17(abs(value - oracle_values[index]))
        else:
            oracle = ""
            abs_err = ""
        lines.append(",".join([str(index), _fmt17(value.real),
                               _fmt17(value.imag), oracle, abs_err]))
    _write_text(config.out, "\n".join(lines) + "\n")
    return 0


def cmd_sweep(config: JobConfig) -> int:
    if config.beta_grid is None or len(config.beta_grid) < 2:
        raise UsageError("sweep needs --beta-grid with at least 2 values")
    reports = []
    summary = {"beta": [], "metric_limit_deviation": [],
               "pseudo_hermiticity_residual": [], "numeric_residual": [],
               "passed": []}
    all_passed = True
    for beta in config.beta_grid:
        params = with_beta(config.params, beta)
        report = run_suite(params, config.suite_config())
        reports.append(report)
        by_name = {check.name: check for check in report.checks}
        pseudo = by_name.get("pseudo_hermiticity_deformed",
                             by_name.get("pseudo_hermiticity_gaussian"))
        summary["beta"].append(beta)
        summary["metric_limit_deviation"].append(
            by_name["metric_limit"].residual)
        summary["pseudo_hermiticity_residual"].append(
            pseudo.residual if pseudo else None)
        summary["numeric_residual"].append(by_name["numeric_residual"].residual)
        summary["passed"].append(report.passed)
        all_passed = all_passed and report.passed
    stamp = _timestamp()
    payload = {
        "reports": [r.to_json_dict(stamp) for r in reports],
        "summary": summary,
        "generated_at": stamp,
        "seed": config.seed,
    }
    _write_text(config.out, json.dumps(payload, indent=2) + "\n")
    return 0 if all_passed else 1


def main(argv=None) -> int:
    try:
        config = parse(argv if argv is not None else sys.argv[1:])
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except SystemExit as exc:  # argparse reports its own usage errors
        return int(exc.code or 0)
    try:
        if config.command == "verify":
            return cmd_verify(config)
        if config.command == "spectrum":
            return cmd_spectrum(config)
        return cmd_sweep(config)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
