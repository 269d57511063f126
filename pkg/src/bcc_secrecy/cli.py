"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 invalid input file (the violated
invariant is named on stderr), 4 enumeration budget exceeded.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from .channels import (
    BudgetExceeded,
    DimensionMismatch,
    DiscreteChannel,
    InvalidDistribution,
    JointPmf,
    Pmf,
    cascade,
    check_stochastic_degraded,
)
from .coding import (
    DEFAULT_Z_SEQUENCE_BUDGET,
    CodeParams,
    build_double_binning,
    build_superposition,
    exact_equivocation,
    run_error_experiment,
)
from .formats import (
    ExperimentConfig,
    MarginalTriple,
    as_marginals,
    format_sig,
    load_channel,
    parse_experiment,
    read_frontier_csv,
    write_csv,
    write_json,
)
from .information import conditional_mutual_information, mutual_information
from .regions import (
    DEFAULT_BUDGET,
    AuxGridSpec,
    GaussianParams,
    degraded_region_inner,
    gaussian_region_point,
    general_inner_bound,
    wiretap_secrecy_capacity,
)


@click.group()
def cli():
    """Secrecy rate regions and coding experiments for broadcast channels."""


@cli.group()
def region():
    """Compute rate regions and write frontier CSV artifacts."""


@region.command("gaussian")
@click.option("--power", type=float, required=True, help="Transmit power P.")
@click.option("--n1", type=float, required=True, help="First receiver noise variance.")
@click.option("--n2", type=float, required=True, help="Second receiver noise variance.")
@click.option("--n3", type=float, required=True, help="Eavesdropper noise variance.")
@click.option("--alphas", type=int, default=101, show_default=True, help="Alpha grid size.")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def region_gaussian(power, n1, n2, n3, alphas, out):
    """Closed-form Gaussian region, one CSV row per alpha (pre-Pareto)."""
    if alphas < 2:
        raise click.UsageError("--alphas must be at least 2")
    g = GaussianParams(power=power, n1=n1, n2=n2, n3=n3)
    rows = []
    for alpha in np.linspace(0.0, 1.0, alphas):
        point = gaussian_region_point(g, float(alpha))
        rows.append([float(alpha), point.r1, point.r2])
    write_csv(out, ["alpha", "r1_bits", "r2_bits"], rows)
    click.echo(f"wrote {len(rows)} rows to {out}")


def _load_marginals(path: str) -> MarginalTriple:
    return as_marginals(load_channel(path))


def _write_frontier(out: str, frontier) -> None:
    write_csv(out, ["r1_bits", "r2_bits"], [[p.r1, p.r2] for p in frontier.points])


@region.command("degraded")
@click.option("--file", "path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--grid", type=float, default=0.05, show_default=True, help="Simplex step.")
@click.option("--ucard", type=int, default=None, help="Auxiliary cardinality (default |X|).")
@click.option("--budget", type=int, default=DEFAULT_BUDGET, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def region_degraded(path, grid, ucard, budget, out):
    """Layered-scheme region frontier for a degraded discrete channel."""
    m = _load_marginals(path)
    spec = AuxGridSpec(u_card=ucard, resolution=grid)
    frontier = degraded_region_inner(m.py1x, m.py2x, m.pzx, spec, budget=budget)
    _write_frontier(out, frontier)
    click.echo(f"wrote {len(frontier.points)} frontier points to {out}")


@region.command("general")
@click.option("--file", "path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--grid", type=float, default=0.05, show_default=True, help="Simplex step.")
@click.option("--v1card", type=int, default=None, help="First auxiliary cardinality.")
@click.option("--v2card", type=int, default=None, help="Second auxiliary cardinality.")
@click.option(
    "--stochastic-x",
    is_flag=True,
    default=False,
    help="Grid the rows of P(x|v1,v2) instead of deterministic maps.",
)
@click.option("--budget", type=int, default=DEFAULT_BUDGET, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def region_general(path, grid, v1card, v2card, stochastic_x, budget, out):
    """Double-binning inner-bound frontier for a general discrete channel."""
    m = _load_marginals(path)
    spec = AuxGridSpec(
        v1_card=v1card, v2_card=v2card, resolution=grid, deterministic_x=not stochastic_x
    )
    frontier = general_inner_bound(m.py1x, m.py2x, m.pzx, spec, budget=budget)
    _write_frontier(out, frontier)
    click.echo(f"wrote {len(frontier.points)} frontier points to {out}")


@cli.command()
@click.option("--file", "path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--grid", type=float, default=0.05, show_default=True, help="Simplex step.")
@click.option("--vcard", type=int, default=None, help="Auxiliary cardinality (default |X|).")
@click.option("--budget", type=int, default=DEFAULT_BUDGET, show_default=True)
def wiretap(path, grid, vcard, budget):
    """Single-user secrecy capacity (main = y1 marginal, eavesdropper = z)."""
    m = _load_marginals(path)
    spec = AuxGridSpec(v1_card=vcard, resolution=grid)
    value = wiretap_secrecy_capacity(m.py1x, m.pzx, spec, budget=budget)
    click.echo(f"secrecy_capacity_bits={format_sig(value)}")


@cli.group()
def check():
    """Consistency checks on channels and artifacts."""


@check.command("degraded")
@click.option("--file", "path", type=click.Path(exists=True, dir_okay=False), required=True)
def check_degraded(path):
    """Check stochastic degradedness along the chain y1 -> y2 -> z."""
    m = _load_marginals(path)
    intermediates = {}
    for label, stronger, weaker in (("y1->y2", m.py1x, m.py2x), ("y2->z", m.py2x, m.pzx)):
        report = check_stochastic_degraded(stronger, weaker)
        click.echo(
            f"{label}: feasible={'true' if report.feasible else 'false'} "
            f"residual={report.residual:.6e}"
        )
        if report.intermediate is not None:
            intermediates[label] = report.intermediate.matrix.tolist()
    click.echo(json.dumps(intermediates, sort_keys=True))


@check.command("frontier")
@click.option("--file", "path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--power", type=float, required=True)
@click.option("--n1", type=float, required=True)
@click.option("--n2", type=float, required=True)
@click.option("--n3", type=float, required=True)
@click.option("--tol", type=float, default=1e-12, show_default=True)
def check_frontier(path, power, n1, n2, n3, tol):
    """Recompute a Gaussian sweep CSV from its alpha column and compare."""
    header, rows = read_frontier_csv(path)
    if header != ["alpha", "r1_bits", "r2_bits"]:
        raise InvalidDistribution(f"{path}: expected a Gaussian sweep CSV, got header {header}")
    g = GaussianParams(power=power, n1=n1, n2=n2, n3=n3)
    worst = 0.0
    for alpha, r1, r2 in rows:
        point = gaussian_region_point(g, float(alpha))
        worst = max(worst, abs(point.r1 - r1), abs(point.r2 - r2))
    if worst > tol:
        raise InvalidDistribution(f"{path}: frontier deviates by {worst:.3e} > {tol:.3e}")
    click.echo(f"frontier reproduced, max deviation {worst:.3e}")


def _simulate_superposition(config: ExperimentConfig, z_budget: int) -> dict:
    m = config.marginals
    params = CodeParams(
        n=config.n, m1=config.m1, m2=config.m2, l1=config.l1, l2=config.l2, seed=config.seed
    )
    cb = build_superposition(params, config.pu, config.pxu)
    report = exact_equivocation(cb, m.pzx, z_budget=z_budget)
    trial = run_error_experiment(cb, (m.py1x, m.py2x), trials=config.trials, seed=config.seed)
    joint_uxy1 = np.einsum("u,ux,xy->uxy", config.pu.probs, config.pxu.matrix, m.py1x.matrix)
    mis = {
        "i_u_y2": mutual_information(config.pu, cascade(config.pxu, m.py2x)),
        "i_u_z": mutual_information(config.pu, cascade(config.pxu, m.pzx)),
        "i_x_y1_given_u": conditional_mutual_information(
            JointPmf(joint_uxy1, ("u", "x", "y1")), "x", "y1", ("u",)
        ),
        "i_x_z": mutual_information(Pmf(config.pu.probs @ config.pxu.matrix), m.pzx),
    }
    equivocation = {
        "re1": report.re1,
        "re2": report.re2,
        "re12": report.re12,
        "gaps": list(report.gaps),
    }
    return {"equivocation": equivocation, "mutual_informations": mis, "trial": trial, "params": params}


def _simulate_double_binning(config: ExperimentConfig) -> dict:
    m = config.marginals
    params = CodeParams(
        n=config.n, m1=config.m1, m2=config.m2, l1=config.l1, l2=config.l2, seed=config.seed
    )
    cb = build_double_binning(params, config.pv1, config.pv2, config.pxv, config.epsilon)
    trial = run_error_experiment(cb, (m.py1x, m.py2x), trials=config.trials, seed=config.seed)
    # Per-letter composites under the independent product of pv1 and pv2.
    x_given_v1 = DiscreteChannel(np.einsum("w,vwx->vx", config.pv2.probs, config.pxv))
    x_given_v2 = DiscreteChannel(np.einsum("v,vwx->wx", config.pv1.probs, config.pxv))
    pair_pmf = Pmf(np.outer(config.pv1.probs, config.pv2.probs).ravel())
    pair_channel = DiscreteChannel(config.pxv.reshape(-1, config.pxv.shape[-1]))
    px = Pmf(config.pv1.probs @ x_given_v1.matrix)
    mis = {
        "i_v1_y1": mutual_information(config.pv1, cascade(x_given_v1, m.py1x)),
        "i_v2_y2": mutual_information(config.pv2, cascade(x_given_v2, m.py2x)),
        "i_v1_z": mutual_information(config.pv1, cascade(x_given_v1, m.pzx)),
        "i_v2_z": mutual_information(config.pv2, cascade(x_given_v2, m.pzx)),
        "i_v1v2_z": mutual_information(pair_pmf, cascade(pair_channel, m.pzx)),
        "i_x_z": mutual_information(px, m.pzx),
    }
    return {"equivocation": None, "mutual_informations": mis, "trial": trial, "params": params}


@cli.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--seed", type=int, default=None, help="Override the config seed.")
@click.option("--trials", type=int, default=None, help="Override the config trial count.")
@click.option(
    "--budget",
    type=int,
    default=DEFAULT_Z_SEQUENCE_BUDGET,
    show_default=True,
    help="Cap on |Z|^n for exact equivocation enumeration.",
)
def simulate(config_path, out, seed, trials, budget):
    """Run a coding experiment described by a JSON config."""
    with open(config_path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidDistribution(f"{config_path}: not valid JSON ({exc})") from exc
    if seed is not None:
        raw["seed"] = seed
    if trials is not None:
        raw["trials"] = trials
    config = parse_experiment(raw, base_dir=Path(config_path).parent)

    if config.scheme == "superposition":
        result = _simulate_superposition(config, z_budget=budget)
    else:
        result = _simulate_double_binning(config)

    params = result["params"]
    trial = result["trial"]
    payload = {
        "scheme": config.scheme,
        "code": {
            "n": params.n,
            "m1": params.m1,
            "m2": params.m2,
            "l1": params.l1,
            "l2": params.l2,
            "seed": params.seed,
        },
        "rates": {
            "r1_bits": params.rate1,
            "r2_bits": params.rate2,
            "randomization1_bits": params.randomization_rate1,
            "randomization2_bits": params.randomization_rate2,
        },
        "mutual_informations": result["mutual_informations"],
        "equivocation": result["equivocation"],
        "trials": {
            "count": trial.trials,
            "errors_rx1": trial.errors_rx1,
            "errors_rx2": trial.errors_rx2,
            "errors_union": trial.errors_union,
            "pe_estimate": trial.pe_estimate,
            "confidence_half_width": trial.half_width,
            "encoding_failures": trial.encoding_failures,
        },
    }
    write_json(out, payload)
    click.echo(f"wrote results to {out}")


def run(argv: list[str]) -> int:
    """Dispatch a command line; returns the process exit code."""
    try:
        cli.main(args=list(argv), standalone_mode=False)
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.UsageError as exc:
        exc.show()
        return 2
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except BudgetExceeded as exc:
        click.echo(f"error: {exc}", err=True)
        return 4
    except (InvalidDistribution, DimensionMismatch, ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 3
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
