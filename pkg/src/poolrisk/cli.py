"""Command-line front end.

Exit status: 0 on success or a passing verdict, 1 when a verdict or check
fails, 2 on invalid input.  Numeric output is deterministic given the seed.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import classical
from .ambiguity import AmbiguityModel, entropy_coherent_risk, entropy_convex_risk
from .asymptotics import DEFAULT_TOL_ABS, DEFAULT_TOL_REL, Problem, check_bounds, run_rates
from .classical import Engine
from .dist import LatticeDistribution
from .errors import PoolRiskError
from .io import parse_model_file, report_to_csv
from .pooling import CRITERIA, Criterion, SampleSpace, pareto_search
from .utility import Utility

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
PARETO_TOL = 1e-10
IDENTITY_TOL = 1e-10


class InputError(PoolRiskError):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    model_path: str | None = None
    utility_spec: str | None = None
    wealth: float = 0.0
    n: int = 1
    n_max: int = 4096
    engine: str = "exact"
    mc_count: int | None = None
    seed: int = 0
    output: str | None = None
    tol_rel: float = DEFAULT_TOL_REL
    tol_abs: float = DEFAULT_TOL_ABS
    kind: str = "robust-ce"
    agents: int = 2
    trials: int = 10_000
    criterion: str = "all"
    gamma: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.wealth) and self.wealth >= 0):
            raise InputError(f"--wealth must be a finite number >= 0, got {self.wealth}")
        if self.engine not in ("exact", "monte-carlo"):
            raise InputError(f"unknown engine {self.engine!r}")
        if self.engine == "exact" and self.mc_count is not None:
            raise InputError("--mc-count only applies with --engine monte-carlo")
        if self.engine == "monte-carlo" and not (self.mc_count or 0) >= 1:
            raise InputError("--engine monte-carlo needs --mc-count >= 1")
        for name in ("n", "n_max", "agents", "trials"):
            if getattr(self, name) < 1:
                raise InputError(f"--{name.replace('_', '-')} must be >= 1")
        if not (self.tol_rel >= 0 and self.tol_abs >= 0):
            raise InputError("tolerances must be >= 0")

    def make_engine(self) -> Engine:
        return Engine() if self.engine == "exact" else Engine.monte_carlo(self.mc_count, self.seed)

    def grid(self) -> list[int]:
        out, n = [], 1
        while n <= self.n_max:
            out.append(n)
            n *= 2
        return out


def _load(path: str, expected: type, flag: str):
    obj = parse_model_file(path)
    if not isinstance(obj, expected):
        raise InputError(f"{flag} {path}: expected a {expected.__name__} file, got {type(obj).__name__}")
    return obj


def _emit_report(cfg: RunConfig, report, out) -> int:
    report.verdict = check_bounds(report, cfg.tol_rel, cfg.tol_abs)
    csv_text = report_to_csv(report)
    if cfg.output:
        Path(cfg.output).write_text(csv_text)
    last = report.rows[-1]
    upper = "empirical" if report.bound_upper is None else f"{report.bound_upper:.10g}"
    print(f"kind            {report.kind}", file=out)
    print(f"final n         {last.n}", file=out)
    print(f"final value     {last.value:.12g}", file=out)
    print(f"final gap       {last.gap:.12g}", file=out)
    print(f"final n*gap     {last.n_gap:.12g}", file=out)
    print(f"aitken n*gap    {report.limit_estimate:.12g}", file=out)
    print(f"limit           {report.target_limit:.12g}", file=out)
    print(f"bounds          [{report.bound_lower:.10g}, {upper}]", file=out)
    if report.bound_upper is None:
        print(f"empirical max   {report.empirical_ceiling:.10g}", file=out)
    for note in report.notes:
        print(f"note            {note}", file=out)
    print(f"verdict         {report.verdict}", file=out)
    if not cfg.output:
        print(file=out)
        out.write(csv_text)
    return EXIT_FAIL if report.verdict == "fail" else EXIT_OK


def cmd_ce(cfg: RunConfig, out) -> int:
    d = _load(cfg.model_path, LatticeDistribution, "--model")
    u = Utility.parse(cfg.utility_spec)
    est = classical.certainty_equivalent_estimate(u, d, cfg.n, cfg.wealth, cfg.make_engine())
    mean = classical.moments(d).mean
    premium = math.inf if est.value == -math.inf else cfg.wealth + mean - est.value
    print(f"n               {cfg.n}", file=out)
    print(f"certainty_equiv {est.value:.17g}", file=out)
    print(f"premium         {premium:.17g}", file=out)
    if not cfg.make_engine().exact:
        print(f"stderr          {est.stderr:.6g}", file=out)
    return EXIT_OK


def cmd_rates(cfg: RunConfig, out) -> int:
    d = _load(cfg.model_path, LatticeDistribution, "--model")
    u = Utility.parse(cfg.utility_spec)
    report = run_rates(Problem("classical", u, cfg.wealth, law=d), cfg.grid(), cfg.make_engine())
    return _emit_report(cfg, report, out)


def cmd_robust_rates(cfg: RunConfig, out) -> int:
    A = _load(cfg.model_path, AmbiguityModel, "--ambiguity")
    u = Utility.parse(cfg.utility_spec)
    report = run_rates(Problem(cfg.kind, u, cfg.wealth, ambiguity=A), cfg.grid())
    return _emit_report(cfg, report, out)


def cmd_pareto(cfg: RunConfig, out) -> int:
    space = _load(cfg.model_path, SampleSpace, "--space")
    u = Utility.parse(cfg.utility_spec)
    kinds = CRITERIA if cfg.criterion == "all" else (cfg.criterion,)
    worst = math.inf
    print(f"agents {cfg.agents}  trials {cfg.trials}  seed {cfg.seed}", file=out)
    for kind in kinds:
        res = pareto_search(space, Criterion(kind, u), cfg.agents, cfg.trials, cfg.seed)
        worst = min(worst, res.min_gap)
        print(f"{kind:<17} min_gap {res.min_gap:.6e}", file=out)
    ok = worst >= -PARETO_TOL
    print(f"verdict {'pass' if ok else 'fail'}", file=out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_entropic(cfg: RunConfig, out) -> int:
    obj = parse_model_file(cfg.model_path)
    g = cfg.gamma
    if not g > 0:
        raise InputError(f"--gamma must be > 0, got {g}")
    if isinstance(obj, LatticeDistribution):
        worst = 0.0
        rho1 = classical.entropic_risk(obj, g, 1)
        print("n,rho_mean,rho_sum_scaled,per_position", file=out)
        for n in range(1, cfg.n_max + 1):
            lhs = n * classical.entropic_risk(obj, g, n)
            rhs = classical.entropic_risk_of_sum(obj, g / n, n)
            per = classical.entropic_risk_of_sum(obj, g, n) / n
            worst = max(worst, abs(lhs - rhs), abs(per - rho1))
            print(f"{n},{lhs:.17g},{rhs:.17g},{per:.17g}", file=out)
        ok = worst <= IDENTITY_TOL * max(1.0, abs(rho1))
        print(f"max identity error {worst:.3e}  verdict {'pass' if ok else 'fail'}", file=out)
        return EXIT_OK if ok else EXIT_FAIL
    if isinstance(obj, AmbiguityModel):
        print("n,coherent,convex", file=out)
        for n in cfg.grid():
            coh = entropy_coherent_risk(obj, g, n)
            cvx = entropy_convex_risk(obj, g, n)
            print(f"{n},{coh.value:.17g},{cvx.value:.17g}", file=out)
        return EXIT_OK
    raise InputError("--model must be a lattice or ambiguity file")


COMMANDS = {
    "ce": cmd_ce,
    "rates": cmd_rates,
    "robust-rates": cmd_robust_rates,
    "pareto": cmd_pareto,
    "entropic": cmd_entropic,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="poolrisk", description="Risk premia of pooled i.i.d. risks")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp, model_flag="--model", utility=True):
        sp.add_argument(model_flag, dest="model_path", required=True, help="JSON model file")
        if utility:
            sp.add_argument("--utility", dest="utility_spec", required=True, help="exp:gamma=G | power:chi=C | log | linear")
        sp.add_argument("--wealth", type=float, default=0.0, help="initial wealth v >= 0")

    def rates_opts(sp):
        sp.add_argument("--n-max", type=int, default=4096, help="largest pool size; grid is 1, 2, 4, ...")
        sp.add_argument("--output", help="write the report as CSV here")
        sp.add_argument("--tol-rel", type=float, default=DEFAULT_TOL_REL)
        sp.add_argument("--tol-abs", type=float, default=DEFAULT_TOL_ABS)

    def engine_opts(sp):
        sp.add_argument("--engine", choices=("exact", "monte-carlo"), default="exact")
        sp.add_argument("--mc-count", type=int)
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("ce", help="certainty equivalent and premium at one pool size")
    common(sp)
    sp.add_argument("--n", type=int, default=1)
    engine_opts(sp)

    sp = sub.add_parser("rates", help="classical convergence report")
    common(sp)
    rates_opts(sp)
    engine_opts(sp)

    sp = sub.add_parser("robust-rates", help="robust convergence report")
    common(sp, "--ambiguity")
    sp.add_argument("--kind", choices=("robust-ce", "homothetic", "variational"), default="robust-ce")
    rates_opts(sp)

    sp = sub.add_parser("pareto", help="randomized Pareto-gap search")
    common(sp, "--space")
    sp.add_argument("--agents", type=int, default=2)
    sp.add_argument("--trials", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--criterion", choices=("all",) + CRITERIA, default="all")

    sp = sub.add_parser("entropic", help="entropic risk values and scaling identities")
    sp.add_argument("--model", "--ambiguity", dest="model_path", required=True)
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--n-max", type=int, default=64)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__ and v is not None}
    return RunConfig(**fields)


def run(cfg: RunConfig, out=None) -> int:
    out = sys.stdout if out is None else out
    return COMMANDS[cfg.subcommand](cfg, out)


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return run(config_from_args(ns))
    except PoolRiskError as exc:
        print(f"poolrisk: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
