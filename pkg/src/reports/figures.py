"""
Static SVG figures: MSE curves on top, AMSE curves below
"""

import io
import logging
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

from matplotlib import rc_context  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402

from ..core.errors import OutputError  # noqa: E402
from ..models.tail_models import CurveSeries, EstimatorVariant  # noqa: E402
from ..parsers.file_utils import FileManager  # noqa: E402

logger = logging.getLogger(__name__)

LINE_STYLES = {
    EstimatorVariant.V1: "-",
    EstimatorVariant.V2: "--",
    EstimatorVariant.V3: ":",
}

# Fixed salt and no date so identical curves give identical SVG bytes
SVG_RC = {
    "svg.hashsalt": "weibull-tail-estimators",
    "svg.fonttype": "path",
    "font.size": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
}


def _draw_panel(axes, curves: Sequence[CurveSeries], title: str, log_y: bool) -> None:
    for curve in curves:
        axes.plot(
            curve.ks, curve.values,
            linestyle=LINE_STYLES[curve.variant], color="black", linewidth=1.0,
            label=curve.variant.value,
        )
    axes.set_title(title)
    axes.set_xlabel("k")
    if log_y:
        axes.set_yscale("log")
    axes.legend(frameon=False)
    axes.grid(alpha=0.3, linewidth=0.5)


def render_svg(
    title: str, mse: Sequence[CurveSeries], amse: Sequence[CurveSeries], log_y: bool = False
) -> str:
    """Two-panel figure as SVG text"""
    with rc_context(SVG_RC):
        figure = Figure(figsize=(6.0, 7.0))
        top, bottom = figure.subplots(2, 1, sharex=True)
        _draw_panel(top, mse, f"{title}: MSE", log_y)
        _draw_panel(bottom, amse, f"{title}: AMSE", log_y)
        figure.tight_layout()

        buffer = io.StringIO()
        figure.savefig(buffer, format="svg", metadata={"Date": None})
    return buffer.getvalue()


def write_svg(
    path: Path, title: str, mse: Sequence[CurveSeries], amse: Sequence[CurveSeries], log_y: bool = False
) -> Path:
    logger.info(f"Writing {path}")
    try:
        text = render_svg(title, mse, amse, log_y)
    except (ValueError, RuntimeError) as e:
        raise OutputError(f"Cannot render figure {path.name}: {e}", path=str(path), cause=e)
    return FileManager.write_text(path, text)
