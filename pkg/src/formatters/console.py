"""
Rich console rendering of verdicts, condition reports and run summaries
"""

from pathlib import Path
from typing import Optional, Sequence

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from ..models.tail_models import (
    AgreementReport,
    CurveSeries,
    NormalityDiagnostic,
    OrderingCase,
    OrderingVerdict,
    SequenceConditionReport,
)
from ..montecarlo.diagnostics import argmin_k

_CASE_TEXT = {
    OrderingCase.NEG_BIAS_ALPHA_GT_THETA: "b ultimately negative, alpha > theta",
    OrderingCase.NEG_BIAS_ALPHA_LT_THETA: "b ultimately negative, alpha < theta",
    OrderingCase.POS_BIAS_BETA_GT_THETA: "b ultimately positive, beta > theta",
    OrderingCase.POS_BIAS_BETA_LT_THETA: "b ultimately positive, beta < theta",
    OrderingCase.ZERO_BIAS: "b identically zero",
}


class ConsoleFormatter:
    """Formats results for the terminal"""

    def __init__(self, console: Console):
        self.console = console

    def print_verdict(
        self,
        verdict: OrderingVerdict,
        display_name: str,
        agreement: Optional[AgreementReport] = None,
        empirical: Optional[AgreementReport] = None,
    ) -> None:
        surrogate = "alpha" if verdict.case.value.startswith("neg") else "beta"
        lines = [
            f"[bold]Case:[/bold] {_CASE_TEXT[verdict.case]}",
            f"[bold]Predicted AMSE order:[/bold] [cyan]{verdict.predicted_order}[/cyan]",
        ]
        if verdict.case is not OrderingCase.ZERO_BIAS:
            lines.append(
                f"[bold]{surrogate} surrogate:[/bold] {verdict.alpha_or_beta:.4g} "
                f"(theta = {verdict.theta:g}, probe n = {verdict.probe_n}"
                + (f", k = {verdict.k})" if verdict.k is not None else ")")
            )
        if agreement is not None:
            lines.append(
                f"[bold]AMSE agreement:[/bold] {agreement.share:.0%} of {len(agreement.k_values)} k values"
            )
        if empirical is not None:
            lines.append(
                f"[bold]Simulated MSE agreement:[/bold] {empirical.share:.0%} of {len(empirical.k_values)} k values"
            )
        self.console.print(Panel("\n".join(lines), title=f"Ordering for {display_name}", expand=False))

    def print_conditions(self, report: SequenceConditionReport) -> None:
        table = Table(title="Sequence conditions")
        table.add_column("Condition")
        table.add_column("Ratio")
        table.add_column("Final value", justify="right")
        table.add_column("Holds", justify="center")
        for condition in report.conditions:
            table.add_row(
                condition.name,
                condition.description,
                f"{condition.final_value:.4g}",
                "[green]yes[/green]" if condition.holds else "[red]no[/red]",
            )
        self.console.print(table)

    def print_curve_summary(self, title: str, curves: Sequence[CurveSeries]) -> None:
        table = Table(title=title)
        table.add_column("Curve")
        table.add_column("argmin k", justify="right")
        table.add_column("min", justify="right")
        table.add_column("at k max", justify="right")
        for curve in curves:
            table.add_row(
                curve.label,
                str(argmin_k(curve)),
                f"{curve.values.min():.4e}",
                f"{curve.values[-1]:.4e}",
            )
        self.console.print(table)

    def print_normality(self, diagnostic: NormalityDiagnostic) -> None:
        status = "[green]within[/green]" if diagnostic.passes_ks else "[red]beyond[/red]"
        self.console.print(
            f"KS distance {diagnostic.ks_distance:.4f} is {status} the 1% critical value "
            f"{diagnostic.critical_value_1pct:.4f} (z mean {diagnostic.z_mean:.3f}, "
            f"variance {diagnostic.z_variance:.3f})"
        )

    def print_written(self, paths: Sequence[Path]) -> None:
        self.console.print(f"[green]✓[/green] Wrote {len(paths)} files")
        for path in paths:
            self.console.print(f"  • {path}")
