"""
rothsq Command Line - Experiment Gateway

One sub-command per experiment. Every run resolves a RunConfig, executes the
experiment, writes a canonical JSON report (or a CSV projection) and prints a
one-line summary.

CSV columns per command:
  wparams   X, w, W, b1, b2, sigma, Nb
  majorant  n, numerator, scale
  decay     sup_ratio, bernstein_slack, argmax_alpha, grid_factor, N
  gauss     q, a, max_abs_S, bound, residual, smooth
  count     brute, dft, ktrivial, heuristic, M
  ktrivial  X, count, weighted, ratio
  moments   trial, density, ratio
  spectrum  alpha, magnitude
  rado      n, colour
  pipeline  delta, statistic, delta_sq_nb, sup_ratio, brute, ktrivial, heuristic
"""

import argparse
import json
import logging
import math
import sys
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from .core.arith import default_w
from .core.budget import SearchBudget
from .core.counting import Equation, SubspaceFamily, count_ktrivial, count_report, ktrivial_weighted
from .core.errors import ExitCode, classify_error
from .core.expsum import arcs, decay_sup, gauss_table
from .core.majorant import WParams, indicator, mass_report, wtricked_majorant
from .core.moments import fourth_moment_ratio, large_spectrum, moment_even, moment_quadrature, restriction_trials
from .core.regularity import RadoStatus, rado_number, solution_free_greedy, transference_statistic
from .core.settings import settings
from .core.storage import ArtifactStorage
from .models import COMMANDS, RunConfig, RunReport

# Configure logging
logger = logging.getLogger(__name__)

Table = Tuple[List[str], List[Sequence[Any]]]


class Outcome:
    """What a command hands back to the gateway"""

    def __init__(self, result: Dict[str, Any], table: Table, summary: str, code: ExitCode = ExitCode.SUCCESS):
        self.result = result
        self.table = table
        self.summary = summary
        self.code = code


def _params(config: RunConfig) -> WParams:
    w = config.w if config.w is not None else default_w(config.X)
    if config.b2 is None:
        base = WParams.default(config.X, w)
        return WParams.build(config.X, w, config.b1, base.b2)
    return WParams.build(config.X, w, config.b1, config.b2)


def _equation(config: RunConfig) -> Tuple[Equation, Optional[SubspaceFamily]]:
    assert config.equation is not None
    return config.equation.equation(), config.equation.subspaces()


def cmd_wparams(config: RunConfig) -> Outcome:
    p = _params(config)
    report = mass_report(p)
    result = {"params": p.to_dict(), "residues": p.residues(), "mass": report.to_dict()}
    row = [p.X, p.w, p.W, p.b1, p.b2, p.sigma, p.Nb]
    return Outcome(result, (["X", "w", "W", "b1", "b2", "sigma", "Nb"], [row]), f"W={p.W} sigma={p.sigma} Nb={p.Nb}")


def cmd_majorant(config: RunConfig) -> Outcome:
    p = _params(config)
    nu = wtricked_majorant(p)
    report = mass_report(p, nu)
    result = {"params": p.to_dict(), "majorant": nu.to_dict(), "mass": report.to_dict()}
    summary = f"{len(nu.numerators)} points, mass={float(report.mass):.2f} vs Nb={p.Nb} (C={report.constant:.3f})"
    return Outcome(result, (["n", "numerator", "scale"], nu.to_rows()), summary)


def cmd_decay(config: RunConfig) -> Outcome:
    p = _params(config)
    decay = decay_sup(p, config.grid_factor)
    result = {"params": p.to_dict(), **decay.to_dict(), "sup_ratio_sqrt_w": decay.sup_ratio * math.sqrt(p.w)}
    major = arcs(p.Nb, config.tau)
    result["arcs"] = {
        "Q": major.Q,
        "radius": major.radius,
        "total_measure_bound": major.total_measure_bound(),
        "pairwise_disjoint": major.pairwise_disjoint(),
    }
    row = [decay.sup_ratio, decay.bernstein_slack, decay.argmax_alpha, decay.grid_factor, decay.N]
    header = ["sup_ratio", "bernstein_slack", "argmax_alpha", "grid_factor", "N"]
    return Outcome(result, (header, [row]), f"sup_ratio={decay.sup_ratio:.4f} slack={decay.bernstein_slack:.4f}")


def cmd_gauss(config: RunConfig) -> Outcome:
    p = _params(config)
    rows = gauss_table(p, config.qmax, config.threads)
    worst = max(row["max_abs_S"] / row["bound"] for row in rows)
    smooth_residual = max((row["residual"] for row in rows if row["smooth"] and row["q"] >= 2), default=0.0)
    result = {"params": p.to_dict(), "qmax": config.qmax, "max_ratio": worst, "max_smooth_residual": smooth_residual, "rows": rows}
    header = ["q", "a", "max_abs_S", "bound", "residual", "smooth"]
    table = [[row[h] for h in header] for row in rows]
    return Outcome(result, (header, table), f"max |S|/2sqrt(q)={worst:.4f} smooth residual={smooth_residual:.2e}")


def cmd_count(config: RunConfig) -> Outcome:
    eq, K = _equation(config)
    if config.source == "majorant":
        p = _params(config)
        f: Any = wtricked_majorant(p)
    else:
        f = indicator(config.X)
    report = count_report(f, eq, K)
    result = {"equation": eq.to_dict(), "source": config.source, **report.to_dict()}
    header = ["brute", "dft", "ktrivial", "heuristic", "M"]
    row = [report.brute, report.dft, report.ktrivial, report.heuristic, report.M]
    return Outcome(result, (header, [row]), f"brute={report.brute} dft={report.dft}")


def cmd_ktrivial(config: RunConfig) -> Outcome:
    eq, K = _equation(config)
    K = K if K is not None else SubspaceFamily.pairs_equal(eq)
    p = _params(config)
    count = count_ktrivial(config.X, K, config.threads)
    weighted = ktrivial_weighted(wtricked_majorant(p), p, K, config.threads)
    result = {"family": K.to_dict(), "params": p.to_dict(), "count": count, "weighted": weighted.to_dict()}
    row = [config.X, count, weighted.value, weighted.ratio]
    return Outcome(result, (["X", "count", "weighted", "ratio"], [row]), f"K-trivial count={count} weighted ratio={weighted.ratio:.4f}")


def cmd_moments(config: RunConfig) -> Outcome:
    assert config.seed is not None
    p = _params(config)
    nu = wtricked_majorant(p)
    N = p.Nb
    if float(config.p).is_integer() and int(config.p) % 2 == 0:
        value: Any = moment_even(nu, int(config.p) // 2)
        slack = 0.0
    else:
        quadrature = moment_quadrature(nu, config.p, config.grid_factor * N)
        value, slack = quadrature.value, quadrature.slack
    reference = N ** (config.p - 1)
    result: Dict[str, Any] = {
        **p.to_dict(),
        "p": config.p,
        "value": value,
        "slack": slack,
        "reference_scale": reference,
        "ratio": float(value) / reference,
        "fourth_moment": fourth_moment_ratio(p).to_dict(),
    }
    rows: List[Sequence[Any]] = []
    if config.p > 4:
        restriction = restriction_trials(p, config.p, config.trials, config.seed, config.grid_factor, config.threads)
        result["restriction"] = restriction.to_dict()
        rows = [[i, d, v] for i, (d, v) in enumerate(zip(restriction.densities, restriction.values))]
    return Outcome(result, (["trial", "density", "ratio"], rows), f"moment ratio={result['ratio']:.4f}")


def cmd_spectrum(config: RunConfig) -> Outcome:
    p = _params(config)
    nu = wtricked_majorant(p)
    report = large_spectrum(nu, config.delta, p.Nb, config.grid_factor, nu=nu)
    result = {"params": p.to_dict(), **report.to_dict()}
    rows = list(zip(report.points, report.magnitudes))
    return Outcome(result, (["alpha", "magnitude"], rows), f"R={report.R} normalized={report.normalized():.4f}")


def cmd_rado(config: RunConfig) -> Outcome:
    eq, _ = _equation(config)
    outcome = rado_number(eq, config.r, config.n_max, SearchBudget())
    rows = [[n, colour] for n, colour in enumerate(outcome.certificate, start=1)]
    code = ExitCode.BUDGET_EXHAUSTED if outcome.status is RadoStatus.EXHAUSTED_BUDGET else ExitCode.SUCCESS
    summary = f"{outcome.status.value} n={outcome.n} nodes={outcome.nodes}"
    return Outcome(outcome.to_dict(), (["n", "colour"], rows), summary, code)


def cmd_pipeline(config: RunConfig) -> Outcome:
    eq, K = _equation(config)
    w = config.w if config.w is not None else default_w(config.X)
    if config.set_source == "greedy":
        assert config.seed is not None
        A = solution_free_greedy(eq, config.X, config.seed).elements
    else:
        A = list(range(1, max(1, int(config.density * config.X)) + 1))
    report = transference_statistic(A, w, config.X, eq, K, config.grid_factor, config.threads)
    header = ["delta", "statistic", "delta_sq_nb", "sup_ratio", "brute", "ktrivial", "heuristic"]
    row = [
        report.delta,
        report.statistic,
        report.delta_sq_nb,
        report.decay.sup_ratio,
        report.counts.brute,
        report.ktrivial.value,
        report.heuristic,
    ]
    summary = f"statistic={float(report.statistic):.2f} delta^2 Nb={report.delta_sq_nb:.2f}"
    return Outcome(report.to_dict(), (header, [row]), summary)


HANDLERS: Dict[str, Callable[[RunConfig], Outcome]] = {
    "wparams": cmd_wparams,
    "majorant": cmd_majorant,
    "decay": cmd_decay,
    "gauss": cmd_gauss,
    "count": cmd_count,
    "ktrivial": cmd_ktrivial,
    "moments": cmd_moments,
    "spectrum": cmd_spectrum,
    "rado": cmd_rado,
    "pipeline": cmd_pipeline,
}


def run(config: RunConfig, storage: Optional[ArtifactStorage] = None) -> int:
    """Execute one experiment and write its report"""
    try:
        outcome = HANDLERS[config.command](config)
    except Exception as e:
        record = classify_error(e)
        where = f" [{record.field_name}]" if record.field_name else ""
        logger.error(f"{config.command} failed: {record.error_type}{where}")
        print(f"❌ {config.command}{where}: {record.message}")
        return int(record.exit_code)

    storage = storage or ArtifactStorage(config.output)
    if config.format == "csv":
        header, rows = outcome.table
        path = storage.save_csv(config.command, header, rows)
    else:
        report = RunReport(command=config.command, config=config.model_dump(mode="json"), result=outcome.result)
        path = storage.save_json(config.command, report.model_dump())

    marker = "⏳" if outcome.code is ExitCode.BUDGET_EXHAUSTED else "✅"
    print(f"{marker} {config.command}: {outcome.summary} -> {path or 'memory'}")
    return int(outcome.code)


def _parse_coeffs(text: str) -> List[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _parse_forms(text: str) -> List[List[str]]:
    return [[str(Fraction(v.strip())) for v in form.split(",")] for form in text.split(";") if form.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rothsq",
        description="Transference experiments for Roth-type theorems in the squares",
        epilog=__doc__.split("CSV columns per command:")[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="JSON file whose values override the flags")
    parser.add_argument("--X", type=int)
    parser.add_argument("--w", type=int)
    parser.add_argument("--b1", type=int)
    parser.add_argument("--b2", type=int)
    parser.add_argument("--tau", type=float)
    parser.add_argument("--p", type=float)
    parser.add_argument("--k", type=int)
    parser.add_argument("--delta", type=float)
    parser.add_argument("--density", type=float)
    parser.add_argument("--set-source", dest="set_source", choices=["interval", "greedy"])
    parser.add_argument("--seed", type=int)
    parser.add_argument("--trials", type=int)
    parser.add_argument("--source", choices=["interval", "majorant"])
    parser.add_argument("--equation", type=_parse_coeffs, help="Coefficients, e.g. 1,1,1,1,-4")
    parser.add_argument("--forms", type=_parse_forms, help="Forms separated by ';', e.g. 1,-1,0,0,0;0,1,-1,0,0")
    parser.add_argument("--family", choices=["diagonal", "pairs_equal"])
    parser.add_argument("--r", type=int)
    parser.add_argument("--n-max", dest="n_max", type=int)
    parser.add_argument("--qmax", type=int)
    parser.add_argument("--grid-factor", dest="grid_factor", type=int)
    parser.add_argument("--format", choices=["json", "csv"])
    parser.add_argument("--output", help="Output directory (default $ROTHSQ_OUTPUT_DIR or artifacts)")
    parser.add_argument("--threads", type=int)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Flags first, then the --config file on top"""
    values: Dict[str, Any] = {
        key: value
        for key, value in vars(args).items()
        if value is not None and key not in ("config", "equation", "forms", "family")
    }
    if args.equation is not None:
        spec: Dict[str, Any] = {"c": args.equation}
        if args.forms is not None:
            spec["forms"] = args.forms
        if args.family is not None:
            spec["family"] = args.family
        values["equation"] = spec
    if args.config:
        with open(args.config, encoding="utf-8") as handle:
            values.update(json.load(handle))
    return RunConfig(**values)


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=settings.log_level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        config = resolve_config(args)
    except (ValidationError, OSError, ValueError) as e:
        record = classify_error(e)
        where = f" [{record.field_name}]" if record.field_name else ""
        print(f"❌ invalid config{where}: {record.message}")
        return int(ExitCode.INVALID_CONFIG)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
