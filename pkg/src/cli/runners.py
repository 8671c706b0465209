"""
Subcommand workflows behind the CLI
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import click
from rich.console import Console
from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn

from .. import __version__
from ..amse.calculator import amse_curves
from ..amse.ordering import (
    admissible_variants,
    check_sequence_conditions,
    classify_ordering,
    ordering_agreement,
    resolve_k_rule,
)
from ..core.config import ToolSettings
from ..core.errors import DomainError, IndeterminateSignError, UndefinedRateError
from ..distributions.base import WeibullTailModel
from ..distributions.catalog import catalog, parse_model_spec
from ..estimators.weibull_tail import estimate_table
from ..formatters.console import ConsoleFormatter
from ..models.tail_models import RunConfig, RunManifest
from ..montecarlo.diagnostics import (
    normality_diagnostic,
    ordering_share_of_curves,
    quantile_normality_diagnostic,
)
from ..montecarlo.engine import ExperimentPlan, ReplicationBatch, mse_curves, quantile_mse_curves, run_replications
from ..parsers.file_utils import FileManager, ObservationLoader
from ..reports.figures import write_svg
from ..reports.report_generator import ModelSection, RunReportGenerator

logger = logging.getLogger(__name__)

# Sizes on which a k-rule's sequence conditions are checked
CONDITION_GRID = [10 ** exponent for exponent in range(2, 10)]


class SimulationRunner:
    """Runs one subcommand from a resolved RunConfig"""

    def __init__(self, console: Console, settings: ToolSettings):
        self.console = console
        self.settings = settings
        self.formatter = ConsoleFormatter(console)

    def _plan(self, model: WeibullTailModel, config: RunConfig) -> ExperimentPlan:
        return ExperimentPlan(
            model=model,
            n=config.n,
            replications=config.replications,
            k_min=config.k_min,
            k_max=config.k_max,
            variants=config.variants,
            seed=config.seed,
        )

    def _replicate(self, plan: ExperimentPlan, workers: int, label: str) -> ReplicationBatch:
        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            TextColumn("{task.completed}/{task.total}"),
            console=self.console,
            transient=True,
        ) as progress:
            task = progress.add_task(f"Simulating {label}...", total=plan.replications)
            return run_replications(
                plan, workers, on_progress=lambda done: progress.update(task, completed=done)
            )

    def _manifest(self, config: RunConfig, models: List[str], files: List[Path], simulated: bool) -> RunManifest:
        return RunManifest(
            version=__version__,
            subcommand=config.subcommand,
            models=models,
            n=config.n,
            replications=config.replications if simulated else None,
            k_min=config.k_min,
            k_max=config.k_max,
            variants=config.variants,
            seed=config.seed if simulated else None,
            p=config.p,
            quadrature_nodes=self.settings.quadrature.node_count,
            files=sorted(path.name for path in files),
        )

    def run_estimate(self, config: RunConfig) -> None:
        sample = ObservationLoader.load(config.input_path)
        k_max = min(config.k_max, sample.n - 1)
        if k_max < config.k_max:
            logger.warning(f"k-max lowered to n-1 = {k_max} for a sample of {sample.n} observations")
        if config.k_min > k_max:
            raise DomainError(
                f"k-min {config.k_min} exceeds n-1 = {k_max} for a sample of {sample.n} observations",
                argument="k_min", value=config.k_min, details={"n": sample.n, "k_max": k_max},
            )
        points = estimate_table(sample, range(config.k_min, k_max + 1), config.variants, config.p)
        text = FileManager.estimates_to_csv(points)

        if config.output_dir is None:
            click.echo(text, nl=False)
            return
        target = config.output_dir
        if target.suffix.lower() != ".csv":
            FileManager.ensure_output_dir(target)
            target = target / f"{config.input_path.stem}_estimates.csv"
        else:
            FileManager.ensure_output_dir(target.parent)
        FileManager.write_text(target, text)
        self.formatter.print_written([target])

    def run_simulate(self, config: RunConfig) -> List[Path]:
        model = parse_model_spec(config.model)
        plan = self._plan(model, config)
        out = FileManager.ensure_output_dir(config.output_dir or Path("output"))

        batch = self._replicate(plan, config.workers, model.display_name)
        curves = mse_curves(plan, batch=batch)
        written = [FileManager.write_curves_csv(out / f"{model.name}_mse.csv", curves)]
        self.formatter.print_curve_summary(f"MSE for {model.display_name}", curves)

        if config.p is not None:
            quantile_curves = quantile_mse_curves(plan, config.p, batch=batch)
            written.append(FileManager.write_curves_csv(out / f"{model.name}_qmse.csv", quantile_curves))
            self.formatter.print_curve_summary(f"Quantile MSE for {model.display_name}", quantile_curves)

        manifest_path = out / "manifest.json"
        FileManager.write_manifest(manifest_path, self._manifest(config, [model.spec], written, True))
        written.append(manifest_path)
        self.formatter.print_written(written)
        return written

    def run_amse(self, config: RunConfig) -> Optional[Path]:
        model = parse_model_spec(config.model)
        curves = amse_curves(model, config.n, config.k_range, config.variants)

        if config.output_dir is None:
            click.echo(FileManager.curves_to_csv(curves, include_estimator=False), nl=False)
            return None
        out = FileManager.ensure_output_dir(config.output_dir)
        path = FileManager.write_curves_csv(out / f"{model.name}_amse.csv", curves, include_estimator=False)
        self.formatter.print_written([path])
        return path

    def run_compare(self, config: RunConfig, as_json: bool = False) -> Dict[str, Any]:
        model = parse_model_spec(config.model)
        verdict = classify_ordering(model, config.n, resolve_k_rule(config.k_rule, model))
        agreement = ordering_agreement(model, config.n, list(config.k_range), verdict=verdict)

        result: Dict[str, Any] = {
            "model": model.spec,
            "k_rule": config.k_rule,
            "verdict": verdict.to_report(),
            "amse_agreement": agreement.model_dump(mode="json"),
        }

        try:
            conditions = check_sequence_conditions(CONDITION_GRID, resolve_k_rule(config.k_rule, model))
            result["sequence_conditions"] = conditions.model_dump(mode="json")
            result["admissible_variants"] = [variant.value for variant in admissible_variants(conditions)]
        except DomainError as e:
            conditions = None
            logger.warning(f"Sequence conditions not evaluated: {e.message}")

        empirical = None
        if config.simulate:
            plan = self._plan(model, config.model_copy(update={"variants": verdict.ranking}))
            curves = mse_curves(plan, batch=self._replicate(plan, config.workers, model.display_name))
            empirical = ordering_share_of_curves(curves, verdict)
            result["mse_agreement"] = empirical.model_dump(mode="json")
            result["seed"] = config.seed

        if as_json:
            click.echo(json.dumps(result, indent=2, sort_keys=True))
        else:
            self.formatter.print_verdict(verdict, model.display_name, agreement, empirical)
            if conditions is not None:
                self.formatter.print_conditions(conditions)
        return result

    def run_diagnose(self, config: RunConfig, k: int, as_json: bool = False) -> Dict[str, Any]:
        model = parse_model_spec(config.model)
        variant = config.variants[0]
        if config.p is None:
            diagnostic = normality_diagnostic(
                model, config.n, config.replications, k, variant, config.seed, config.workers
            )
        else:
            diagnostic = quantile_normality_diagnostic(
                model, config.n, config.replications, k, config.p, variant, config.seed, config.workers
            )

        result = diagnostic.model_dump(mode="json")
        result["passes_ks"] = diagnostic.passes_ks
        if as_json:
            click.echo(json.dumps(result, indent=2, sort_keys=True))
        else:
            self.formatter.print_normality(diagnostic)
        return result

    def _figure_model(
        self, model: WeibullTailModel, config: RunConfig, out: Path
    ) -> Tuple[ModelSection, List[Path]]:
        plan = self._plan(model, config)
        mse = mse_curves(plan, batch=self._replicate(plan, config.workers, model.display_name))
        amse = amse_curves(model, config.n, config.k_range, config.variants)

        written = [
            FileManager.write_curves_csv(out / f"{model.name}_mse.csv", mse),
            FileManager.write_curves_csv(out / f"{model.name}_amse.csv", amse),
        ]
        if config.emit_svg:
            written.append(write_svg(out / f"{model.name}.svg", model.display_name, mse, amse, config.log_y))

        verdict, verdict_error = None, None
        try:
            verdict = classify_ordering(model, config.n)
        except (IndeterminateSignError, UndefinedRateError) as e:
            verdict_error = e.message
            logger.warning(f"No ordering prediction for {model.name}: {e.message}")

        section = ModelSection(
            display_name=model.display_name, name=model.name, theta=model.theta, rho=model.rho,
            mse=mse, amse=amse, verdict=verdict, verdict_error=verdict_error,
        )
        return section, written

    def run_figures(self, config: RunConfig) -> List[Path]:
        out = FileManager.ensure_output_dir(config.output_dir or Path("figures"))
        models = catalog()

        sections: List[ModelSection] = []
        written: List[Path] = []
        for model in models:
            section, files = self._figure_model(model, config, out)
            sections.append(section)
            written.extend(files)

        manifest = self._manifest(config, [model.spec for model in models], written, True)
        written.append(FileManager.write_manifest(out / "manifest.json", manifest))
        written.append(RunReportGenerator().save(out / "REPORT.md", manifest, sections))
        self.formatter.print_written(written)
        return written

