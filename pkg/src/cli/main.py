#!/usr/bin/env python3
"""
Command-line interface for the Weibull tail-coefficient estimators
"""

import logging
from pathlib import Path
from typing import Any, Callable, List, Optional

import click
from rich.console import Console
from rich.logging import RichHandler

from .. import __version__
from ..amse.ordering import K_RULE_NAMES
from ..core.config import ConfigLoader, ToolSettings
from ..core.errors import DomainError, handle_cli_errors
from ..models.tail_models import EstimatorVariant, RunConfig
from .runners import SimulationRunner


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def _parse_variants(ctx: click.Context, param: click.Parameter, value: Optional[str]) -> Optional[List[EstimatorVariant]]:
    if value is None:
        return None
    try:
        variants = EstimatorVariant.parse_list(value)
    except DomainError as e:
        raise click.BadParameter(e.message)
    if not variants:
        raise click.BadParameter("at least one variant is required")
    return variants


def _experiment_options(func: Callable) -> Callable:
    """--n, --replications, --k-min, --k-max, --seed, --variants and --workers"""
    options = [
        click.option("--n", "n", type=int, default=None, help="Sample size (default 500)"),
        click.option("--replications", "-N", type=int, default=None, help="Number of replications (default 200)"),
        click.option("--k-min", type=int, default=None, help="Smallest k (default 2)"),
        click.option("--k-max", type=int, default=None, help="Largest k (default 150)"),
        click.option("--seed", type=int, default=None, help="Base seed of all random streams"),
        click.option("--variants", callback=_parse_variants, default=None, help="Comma-separated subset of V1,V2,V3"),
        click.option("--workers", type=int, default=None, help="Worker processes for replications"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _build_config(settings: ToolSettings, subcommand: str, **flags: Any) -> RunConfig:
    """Merge CLI flags over the loaded settings"""
    defaults = settings.experiment
    values = {
        "n": defaults.n,
        "replications": defaults.replications,
        "k_min": defaults.k_min,
        "k_max": defaults.k_max,
        "seed": defaults.seed,
        "workers": defaults.workers,
        "variants": EstimatorVariant.parse_list(",".join(defaults.variants)),
    }
    # Flags can only switch figure options on
    values["emit_svg"] = flags.pop("emit_svg", False) or settings.figures.emit_svg
    values["log_y"] = flags.pop("log_y", False) or settings.figures.log_y
    values.update({key: value for key, value in flags.items() if value is not None})
    return RunConfig(subcommand=subcommand, **values)


def _runner(settings: ToolSettings) -> SimulationRunner:
    return SimulationRunner(Console(stderr=True), settings)


@click.group()
@click.version_option(version=__version__)
@click.option(
    "--config", "config_path",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="YAML settings file (default config/defaults.yaml or $WTC_CONFIG_PATH)"
)
@click.option("--verbose", "-v", count=True, help="Log progress (-v) or everything (-vv)")
@click.pass_context
@handle_cli_errors
def cli(ctx: click.Context, config_path: Optional[Path], verbose: int):
    """Weibull tail-coefficient estimators, AMSE curves and Monte Carlo studies"""
    _configure_logging(verbose)
    ctx.obj = ConfigLoader.load_default_config(config_path)


@cli.command()
@click.option(
    "--input", "input_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    required=True,
    help="File with one positive observation per line ('#' comments allowed)"
)
@click.option("--k-min", type=int, default=None, help="Smallest k (default 2)")
@click.option("--k-max", type=int, default=None, help="Largest k (default 150, at most n-1)")
@click.option("--p", type=float, default=None, help="Tail probability for extreme quantile estimates (p < 1/n)")
@click.option("--variants", callback=_parse_variants, default=None, help="Comma-separated subset of V1,V2,V3")
@click.option("--out", "output_dir", type=click.Path(path_type=Path), default=None, help="CSV file or directory (default stdout)")
@click.pass_obj
@handle_cli_errors
def estimate(settings: ToolSettings, **flags: Any):
    """Estimate theta (and extreme quantiles) from observed data"""
    config = _build_config(settings, "estimate", **flags)
    _runner(settings).run_estimate(config)


@cli.command()
@click.option("--model", required=True, help="Model spec, e.g. gamma:1.5,1 or absnormal:0,1")
@_experiment_options
@click.option("--p", type=float, default=None, help="Also write quantile MSE curves for this p (< 1/n)")
@click.option("--out", "output_dir", type=click.Path(file_okay=False, path_type=Path), default=None, help="Output directory (default ./output)")
@click.pass_obj
@handle_cli_errors
def simulate(settings: ToolSettings, **flags: Any):
    """Simulate MSE curves for one model"""
    config = _build_config(settings, "simulate", **flags)
    _runner(settings).run_simulate(config)


@cli.command()
@click.option("--model", required=True, help="Model spec, e.g. gamma:1.5,1")
@click.option("--n", "n", type=int, default=None, help="Sample size (default 500)")
@click.option("--k-min", type=int, default=None, help="Smallest k (default 2)")
@click.option("--k-max", type=int, default=None, help="Largest k (default 150)")
@click.option("--variants", callback=_parse_variants, default=None, help="Comma-separated subset of V1,V2,V3")
@click.option("--out", "output_dir", type=click.Path(file_okay=False, path_type=Path), default=None, help="Output directory (default stdout)")
@click.pass_obj
@handle_cli_errors
def amse(settings: ToolSettings, **flags: Any):
    """Emit AMSE curves for one model"""
    config = _build_config(settings, "amse", **flags)
    _runner(settings).run_amse(config)


@cli.command()
@click.option("--model", required=True, help="Model spec, e.g. absnormal:0,1")
@_experiment_options
@click.option("--k-rule", type=click.Choice(K_RULE_NAMES), default="log", show_default=True, help="Intermediate sequence n -> k")
@click.option("--simulate", is_flag=True, default=False, help="Also check the ordering on simulated MSE curves")
@click.option("--json", "as_json", is_flag=True, default=False, help="Print the verdict as JSON")
@click.pass_obj
@handle_cli_errors
def compare(settings: ToolSettings, as_json: bool, **flags: Any):
    """Predict the AMSE ordering of V1, V2 and V3 for one model"""
    config = _build_config(settings, "compare", **flags)
    _runner(settings).run_compare(config, as_json=as_json)


@cli.command()
@_experiment_options
@click.option("--out", "output_dir", type=click.Path(file_okay=False, path_type=Path), default=None, help="Output directory (default ./figures)")
@click.option("--svg", "emit_svg", is_flag=True, default=False, help="Also write one SVG per model")
@click.option("--log-y", is_flag=True, default=False, help="Logarithmic y axis in SVG figures")
@click.pass_obj
@handle_cli_errors
def figures(settings: ToolSettings, **flags: Any):
    """Reproduce the MSE/AMSE study for the five catalog models"""
    config = _build_config(settings, "figures", **flags)
    _runner(settings).run_figures(config)


@cli.command()
@click.option("--model", required=True, help="Model spec, e.g. weibull:1,1")
@click.option("--n", "n", type=int, default=None, help="Sample size (default 500)")
@click.option("--replications", "-N", type=int, default=None, help="Number of replications (default 200)")
@click.option("--k", "k", type=int, required=True, help="Number of upper order statistics")
@click.option("--variant", type=click.Choice([v.value for v in EstimatorVariant]), default="V1", show_default=True)
@click.option("--p", type=float, default=None, help="Diagnose the extreme quantile estimator at this p instead")
@click.option("--seed", type=int, default=None, help="Base seed of all random streams")
@click.option("--workers", type=int, default=None, help="Worker processes for replications")
@click.option("--json", "as_json", is_flag=True, default=False, help="Print the diagnostic as JSON")
@click.pass_obj
@handle_cli_errors
def diagnose(settings: ToolSettings, k: int, variant: str, as_json: bool, **flags: Any):
    """Compare standardized estimation errors with N(0, 1)"""
    config = _build_config(settings, "diagnose", k_min=k, k_max=k, variants=[EstimatorVariant(variant)], **flags)
    _runner(settings).run_diagnose(config, k, as_json=as_json)


def main():
    cli()


if __name__ == "__main__":
    main()
