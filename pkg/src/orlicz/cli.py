"""Command-line experiment runner.

One config file per run (flat JSON); command-line flags override config
fields, and ORLICZ_SEED overrides the seed last of all.  Every command is
deterministic given its effective config: reports are JSON trees with
sorted keys, CSV exports carry a schema header, and outputs embed the
effective config for provenance.  Exit codes: 0 success, 1 not converged
or inconclusive, 2 invalid input.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass

from .errors import DomainError, OrliczError
from .engine import GridOracle, perturb_minimize, support_from_below
from .functions import (
    delta2_ratio_table,
    estimate_delta2_constant,
    parse_family,
)
from .objectives import parse_objective
from .probes import (
    VERDICT_INCONCLUSIVE,
    classify_space,
    probe_l1,
    probe_p_growth,
    probe_second_derivative,
)
from .sampling import BallSampler
from .sequences import format_sequence, parse_sequence
from .space import luxemburg_norm, modular
from .weights import PerturbationWeights
from .wellposed import non_delta2_witness, wpmc_diagnose

__all__ = ["ExperimentConfig", "main"]

CSV_SCHEMA = "#schema=1"


@dataclass
class ExperimentConfig:
    """Flat run configuration; every command reads the fields it needs."""

    family: str = "power:2"
    seed: int = 12345
    sequence: str = ""
    objective: str = "modular"
    radius: float = 1.0
    eps: float = 0.1
    delta_lo: float = 1.0
    eps_hi: float = 2.0
    budget: int = 50
    norm_tol: float = 1e-12
    grid_dims: int = 3
    grid_step: float = 0.05
    grid_radius: float = 1.0
    levels: str = ""
    scales: str = "1e-2,1e-3,1e-4,1e-5,1e-6"
    probe: str = "l1"
    k: int = 10
    k_max: int = 5
    samples: int = 400
    support_size: int = 6
    index_range: int = 40
    decades: float = 4.0
    max_centers: int = 8
    out: str = ""
    csv_out: str = ""

    def validate(self) -> None:
        positive = {
            "radius": self.radius,
            "eps": self.eps,
            "delta_lo": self.delta_lo,
            "eps_hi": self.eps_hi,
            "norm_tol": self.norm_tol,
            "grid_step": self.grid_step,
            "grid_radius": self.grid_radius,
            "decades": self.decades,
        }
        for name, value in positive.items():
            if not (value > 0.0 and math.isfinite(value)):
                raise DomainError(f"config field {name} must be positive, got {value}")
        for name, value in {
            "budget": self.budget, "k": self.k, "k_max": self.k_max,
            "samples": self.samples, "support_size": self.support_size,
            "index_range": self.index_range, "max_centers": self.max_centers,
            "grid_dims": self.grid_dims,
        }.items():
            if value < 1:
                raise DomainError(f"config field {name} must be >= 1, got {value}")

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        data = json.loads(text)
        if not isinstance(data, dict):
            raise DomainError("config file must hold a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise DomainError(f"unknown config fields: {', '.join(unknown)}")
        return cls(**data)


def _load_config(args: argparse.Namespace) -> ExperimentConfig:
    if getattr(args, "config", None):
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                cfg = ExperimentConfig.from_json(fh.read())
        except (OSError, json.JSONDecodeError) as exc:
            raise DomainError(f"cannot read config {args.config!r}: {exc}") from exc
    else:
        cfg = ExperimentConfig()
    for field in dataclasses.fields(ExperimentConfig):
        value = getattr(args, field.name, None)
        if value is not None:
            setattr(cfg, field.name, value)
    env_seed = os.environ.get("ORLICZ_SEED")
    if env_seed is not None:
        try:
            cfg.seed = int(env_seed)
        except ValueError as exc:
            raise DomainError(f"ORLICZ_SEED must be an integer, got {env_seed!r}") from exc
    cfg.validate()
    return cfg


def _emit_json(cfg: ExperimentConfig, payload: dict) -> None:
    payload = dict(payload)
    payload["config"] = dataclasses.asdict(cfg)
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_csv(cfg: ExperimentConfig, header: list[str], rows: list[list]) -> None:
    if not cfg.csv_out:
        return
    lines = [CSV_SCHEMA, ",".join(header)]
    for row in rows:
        lines.append(",".join(repr(v) if isinstance(v, float) else str(v) for v in row))
    with open(cfg.csv_out, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_floats(text: str, what: str) -> list[float]:
    out = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            out.append(float(chunk))
        except ValueError as exc:
            raise DomainError(f"bad {what} entry {chunk!r}") from exc
    if not out:
        raise DomainError(f"no usable {what} in {text!r}")
    return out


def _oracle(cfg: ExperimentConfig) -> GridOracle:
    return GridOracle(
        indices=tuple(range(1, cfg.grid_dims + 1)),
        step=cfg.grid_step,
        radius=cfg.grid_radius,
    )


def _sampler(cfg: ExperimentConfig, extra=()) -> BallSampler:
    return BallSampler(
        seed=cfg.seed,
        count=cfg.samples,
        support_size=cfg.support_size,
        index_range=cfg.index_range,
        decades=cfg.decades,
        extra=tuple(extra),
    )


def cmd_norm(cfg: ExperimentConfig) -> int:
    M = parse_family(cfg.family)
    x = parse_sequence(cfg.sequence)
    _emit_json(cfg, {
        "family": M.family_tag,
        "sequence": format_sequence(x),
        "norm": luxemburg_norm(M, x, tol=cfg.norm_tol),
        "modular": modular(M, x),
    })
    return 0


def cmd_delta2(cfg: ExperimentConfig) -> int:
    M = parse_family(cfg.family)
    table = delta2_ratio_table(M)
    estimate = M.delta2_constant
    source = "exact"
    if estimate is None:
        estimate = estimate_delta2_constant(M)
        source = "grid-estimate"
    _emit_json(cfg, {
        "family": M.family_tag,
        "constant": estimate,
        "source": source if estimate is not None else "failed",
        "ratio_table": [[t, r] for t, r in table],
    })
    _emit_csv(cfg, ["t", "ratio"], [[t, r] for t, r in table])
    return 0 if estimate is not None else 1


def cmd_solve(cfg: ExperimentConfig) -> int:
    M = parse_family(cfg.family)
    f = parse_objective(M, cfg.objective)
    report = perturb_minimize(M, f, cfg.eps, _oracle(cfg), budget=cfg.budget)
    _emit_json(cfg, {"solve": report.to_dict()})
    return 0 if report.converged else 1


def cmd_support(cfg: ExperimentConfig) -> int:
    M = parse_family(cfg.family)
    f = parse_objective(M, cfg.objective)
    report = support_from_below(
        M, f, cfg.delta_lo, cfg.eps_hi, _oracle(cfg), budget=cfg.budget
    )
    _emit_json(cfg, {"support": report.to_dict()})
    return 0 if report.inner.converged else 1


def _default_levels(M) -> list[float]:
    base = M.delta2_constant if M.delta2_constant is not None else 0.25
    return [base ** m for m in range(1, 9)]


def cmd_wellposed(cfg: ExperimentConfig) -> int:
    M = parse_family(cfg.family)
    f = parse_objective(M, cfg.objective)
    levels = (
        _parse_floats(cfg.levels, "level") if cfg.levels else _default_levels(M)
    )
    extra = []
    if M.delta2_constant is None:
        # Without the doubling condition the flat-plateau witnesses are the
        # interesting directions; fold them into the sample.
        for k in (5, 10, 20, 50):
            witness, _ = non_delta2_witness(M, k)
            extra.append(witness)
    report = wpmc_diagnose(
        M, f, cfg.radius, levels, _sampler(cfg, extra), max_centers=cfg.max_centers
    )
    _emit_json(cfg, {"wellposed": report.to_dict()})
    _emit_csv(
        cfg,
        ["level", "alpha_estimate", "diam_estimate"],
        [
            [lv, al, dm]
            for lv, al, dm in zip(
                report.levels, report.alpha_estimates, report.diam_estimates
            )
        ],
    )
    return 0 if report.verdict != "inconclusive" else 1


def cmd_witness(cfg: ExperimentConfig) -> int:
    M = parse_family(cfg.family)
    x, stats = non_delta2_witness(M, cfg.k)
    _emit_json(cfg, {
        "witness": stats.to_dict(),
        "sequence": format_sequence(x),
    })
    _emit_csv(
        cfg,
        ["k", "t_k", "i_k", "sigma_x", "norm_x"],
        [[stats.k, stats.t_k, stats.i_k, stats.sigma_x, stats.norm_x]],
    )
    return 0


def cmd_probe(cfg: ExperimentConfig) -> int:
    M = parse_family(cfg.family)
    scales = _parse_floats(cfg.scales, "scale")
    name, _, arg = cfg.probe.partition(":")
    name = name.lower()
    if name == "l1":
        x_bar = parse_sequence(cfg.sequence)
        report = probe_l1(M, PerturbationWeights(tail=1.0), x_bar, scales)
    elif name == "growth":
        order = float(arg) if arg else 2.0
        report = probe_p_growth(M, order, cfg.k_max)
    elif name == "curvature":
        mode = arg if arg else "nonzero"
        report = probe_second_derivative(M, scales, mode)
    else:
        raise DomainError(f"unknown probe {cfg.probe!r}")
    _emit_json(cfg, {"probe": report.to_dict()})
    _emit_csv(
        cfg,
        ["scale", "quotient", "threshold"],
        [[s, q, report.threshold] for s, q in zip(report.scales, report.quotients)],
    )
    return 0 if report.verdict != VERDICT_INCONCLUSIVE else 1


def cmd_classify(cfg: ExperimentConfig) -> int:
    M = parse_family(cfg.family)
    report = classify_space(M, k_max=cfg.k_max)
    _emit_json(cfg, {"classify": report.to_dict()})
    return 0


_COMMANDS = {
    "norm": cmd_norm,
    "delta2": cmd_delta2,
    "solve": cmd_solve,
    "support": cmd_support,
    "wellposed": cmd_wellposed,
    "witness": cmd_witness,
    "probe": cmd_probe,
    "classify": cmd_classify,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orlicz",
        description="Orlicz-space experiments: norms, perturbations, diagnostics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    flags: list[tuple[str, type, str]] = [
        ("family", str, "function family, e.g. power:1.5 or non-delta2"),
        ("seed", int, "sampler seed (ORLICZ_SEED overrides)"),
        ("sequence", str, "sparse sequence literal i1:v1,i2:v2"),
        ("objective", str, "objective literal, e.g. modular or sqdist:1:0.3"),
        ("radius", float, "working ball radius K"),
        ("eps", float, "perturbation budget"),
        ("delta_lo", float, "support floor"),
        ("eps_hi", float, "support ceiling"),
        ("budget", int, "iteration budget"),
        ("norm_tol", float, "norm bisection tolerance"),
        ("grid_dims", int, "number of leading grid coordinates"),
        ("grid_step", float, "grid spacing"),
        ("grid_radius", float, "grid half-width"),
        ("levels", str, "comma list of sublevel heights"),
        ("scales", str, "comma list of probe scales"),
        ("probe", str, "probe spec: l1, growth:p, curvature[:mode]"),
        ("k", int, "witness index"),
        ("k_max", int, "growth-probe bound count"),
        ("samples", int, "sampler draw count"),
        ("support_size", int, "sampler support size"),
        ("index_range", int, "sampler index range"),
        ("decades", float, "sampler radial decades"),
        ("max_centers", int, "covering centers for the compactness proxy"),
        ("out", str, "JSON output path (default stdout)"),
        ("csv_out", str, "CSV export path"),
    ]
    for name in _COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", default=None, help="JSON config file")
        for field, ftype, help_text in flags:
            cmd.add_argument(
                f"--{field.replace('_', '-')}",
                dest=field, type=ftype, default=None, help=help_text,
            )
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args)
        return _COMMANDS[args.command](cfg)
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OrliczError as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
