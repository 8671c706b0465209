"""
Markdown run report for the figure reproduction
"""

import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from jinja2 import BaseLoader, Environment, TemplateNotFound

from ..models.tail_models import CurveSeries, OrderingVerdict, RunManifest
from ..montecarlo.diagnostics import argmin_k
from ..parsers.file_utils import FileManager

logger = logging.getLogger(__name__)


class StringTemplateLoader(BaseLoader):
    """Custom template loader for string templates"""

    def __init__(self, templates: Dict[str, str]):
        self.templates = templates

    def get_source(self, environment, template):
        if template in self.templates:
            return self.templates[template], None, lambda: True
        raise TemplateNotFound(template)


class ModelSection:
    """Everything the report shows for one model"""

    def __init__(
        self,
        display_name: str,
        name: str,
        theta: float,
        rho: float,
        mse: Sequence[CurveSeries],
        amse: Sequence[CurveSeries],
        verdict: Optional[OrderingVerdict] = None,
        verdict_error: Optional[str] = None,
    ):
        self.display_name = display_name
        self.name = name
        self.theta = theta
        self.rho = rho
        self.verdict = verdict
        self.verdict_error = verdict_error
        amse_by_variant = {curve.variant: curve for curve in amse}
        self.rows: List[Dict[str, Any]] = []
        for curve in mse:
            partner = amse_by_variant.get(curve.variant)
            mse_k = argmin_k(curve)
            amse_k = argmin_k(partner) if partner else None
            self.rows.append({
                "variant": curve.variant.value,
                "mse_argmin": mse_k,
                "mse_min": float(curve.values.min()),
                "amse_argmin": amse_k,
                "amse_min": float(partner.values.min()) if partner else None,
                "ratio": max(mse_k, amse_k) / min(mse_k, amse_k) if amse_k else None,
            })


class RunReportGenerator:
    """Renders REPORT.md from curves, verdicts and the run manifest"""

    def __init__(self):
        self.templates = {"run_report": RUN_REPORT_TEMPLATE}
        self.jinja_env = Environment(
            loader=StringTemplateLoader(self.templates),
            autoescape=False,
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
        )
        self.jinja_env.filters["sci"] = self._sci_filter
        self.jinja_env.filters["param"] = self._param_filter

    def render(self, manifest: RunManifest, sections: Sequence[ModelSection]) -> str:
        template = self.jinja_env.get_template("run_report")
        return template.render(manifest=manifest, sections=sections)

    def save(self, path: Path, manifest: RunManifest, sections: Sequence[ModelSection]) -> Path:
        logger.info(f"Writing {path}")
        return FileManager.write_text(path, self.render(manifest, sections))

    @staticmethod
    def _sci_filter(value: Optional[float], digits: int = 3) -> str:
        if value is None:
            return "-"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.{digits}e}"

    @staticmethod
    def _param_filter(value: float) -> str:
        if math.isinf(value):
            return "-inf" if value < 0 else "inf"
        return f"{value:g}"


RUN_REPORT_TEMPLATE = """\
# Weibull tail-coefficient estimators: MSE and AMSE study

| setting | value |
|---|---|
| sample size n | {{ manifest.n }} |
| replications N | {{ manifest.replications }} |
| k range | {{ manifest.k_min }}..{{ manifest.k_max }} |
| seed | {{ manifest.seed }} |
| variants | {{ manifest.variants | map(attribute='value') | join(', ') }} |
| version | {{ manifest.version }} |

{% for section in sections %}
## {{ section.display_name }}

theta = {{ section.theta | param }}, rho = {{ section.rho | param }}

{% if section.verdict %}
Predicted AMSE ordering: **{{ section.verdict.predicted_order }}** \
({{ section.verdict.case.value }}, surrogate {{ section.verdict.alpha_or_beta | sci }} vs theta at n = {{ section.verdict.probe_n }})
{% elif section.verdict_error %}
Predicted AMSE ordering: not determined ({{ section.verdict_error }})
{% endif %}

| variant | argmin MSE | min MSE | argmin AMSE | min AMSE | argmin ratio |
|---|---|---|---|---|---|
{% for row in section.rows %}
| {{ row.variant }} | {{ row.mse_argmin }} | {{ row.mse_min | sci }} | {{ row.amse_argmin if row.amse_argmin is not none else '-' }} | {{ row.amse_min | sci }} | {{ '%.2f' % row.ratio if row.ratio else '-' }} |
{% endfor %}

Files: `{{ section.name }}_mse.csv`, `{{ section.name }}_amse.csv`{% if 'svg' in manifest.files | join(' ') %}, `{{ section.name }}.svg`{% endif %}


{% endfor %}
"""
