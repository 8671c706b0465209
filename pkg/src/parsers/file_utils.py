"""
File I/O for observation files, curve tables and run manifests
"""

import io
import json
import logging
import math
from pathlib import Path
from typing import List, Sequence, Union

import pandas as pd

from ..core.errors import DomainError, OutputError, ParseError
from ..models.tail_models import (
    CurvePoint,
    CurveSeries,
    EstimatePoint,
    EstimatorVariant,
    RunManifest,
    SortedSample,
)

logger = logging.getLogger(__name__)

AMSE_COLUMNS = ["k", "variant", "bias_sq", "variance", "total"]
CURVE_COLUMNS = AMSE_COLUMNS + ["estimator"]
ESTIMATE_COLUMNS = ["k", "variant", "t_n", "a_n", "theta_hat"]
QUANTILE_COLUMNS = ["p", "tau", "quantile_hat"]


class ObservationLoader:
    """Reads newline-delimited positive reals with '#' comments"""

    @staticmethod
    def parse_lines(lines: Sequence[str], source: str = "<input>") -> SortedSample:
        values: List[float] = []
        for line_number, raw in enumerate(lines, start=1):
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                value = float(text)
            except ValueError as e:
                raise ParseError(
                    f"Line {line_number} is not a number: {text!r}",
                    file_path=source, line_number=line_number, cause=e
                )
            if not (math.isfinite(value) and value > 0):
                raise DomainError(
                    f"Line {line_number}: observations must be finite and > 0, got {text}",
                    argument="value", value=value,
                    details={"file_path": source, "line_number": line_number}
                )
            values.append(value)

        logger.debug(f"Read {len(values)} observations from {source}")
        return SortedSample.from_values(values)

    @staticmethod
    def load(path: Path) -> SortedSample:
        """Load a sample from a file"""
        try:
            with open(path, "r", encoding="utf-8") as f:
                lines = f.readlines()
        except (OSError, UnicodeDecodeError) as e:
            raise ParseError(f"Cannot read {path}: {e}", file_path=str(path), cause=e)
        return ObservationLoader.parse_lines(lines, str(path))


class FileManager:
    """Writes and reads the CSV, JSON and text outputs of a run"""

    @staticmethod
    def ensure_output_dir(directory: Path) -> Path:
        try:
            directory.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise OutputError(f"Cannot create output directory {directory}: {e}", path=str(directory), cause=e)
        if not directory.is_dir():
            raise OutputError(f"Output path is not a directory: {directory}", path=str(directory))
        return directory

    @staticmethod
    def write_text(path: Path, text: str) -> Path:
        try:
            with open(path, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
        except OSError as e:
            raise OutputError(f"Cannot write {path}: {e}", path=str(path), cause=e)
        return path

    @staticmethod
    def curves_to_frame(curves: Sequence[CurveSeries], include_estimator: bool = True) -> pd.DataFrame:
        """One row per (k, variant), ordered by k then by the order of `curves`"""
        rows = []
        for order, curve in enumerate(curves):
            for point in curve.points:
                rows.append({
                    "k": point.k,
                    "variant": curve.variant.value,
                    "bias_sq": point.bias_sq,
                    "variance": point.variance,
                    "total": point.value,
                    "estimator": curve.estimator,
                    "_order": order,
                })
        columns = CURVE_COLUMNS if include_estimator else AMSE_COLUMNS
        if not rows:
            return pd.DataFrame(columns=columns)
        frame = pd.DataFrame(rows).sort_values(["k", "_order"], kind="stable")
        return frame[columns].reset_index(drop=True)

    @staticmethod
    def frame_to_csv(frame: pd.DataFrame) -> str:
        return frame.to_csv(index=False, lineterminator="\n")

    @staticmethod
    def curves_to_csv(curves: Sequence[CurveSeries], include_estimator: bool = True) -> str:
        return FileManager.frame_to_csv(FileManager.curves_to_frame(curves, include_estimator))

    @staticmethod
    def write_curves_csv(path: Path, curves: Sequence[CurveSeries], include_estimator: bool = True) -> Path:
        logger.info(f"Writing {path}")
        return FileManager.write_text(path, FileManager.curves_to_csv(curves, include_estimator))

    @staticmethod
    def read_csv_frame(source: Union[Path, str]) -> pd.DataFrame:
        """Read a curve table back with exact float round-tripping"""
        try:
            if isinstance(source, Path):
                return pd.read_csv(source, float_precision="round_trip")
            return pd.read_csv(io.StringIO(source), float_precision="round_trip")
        except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise ParseError(f"Cannot parse curve table: {e}", file_path=str(source)[:200], cause=e)

    @staticmethod
    def read_curves_csv(source: Union[Path, str], label_prefix: str = "") -> List[CurveSeries]:
        """Rebuild one CurveSeries per (estimator, variant) from a curve table"""
        frame = FileManager.read_csv_frame(source)
        missing = [column for column in AMSE_COLUMNS if column not in frame.columns]
        if missing:
            raise ParseError(f"Curve table lacks columns: {', '.join(missing)}")
        if "estimator" not in frame.columns:
            frame = frame.assign(estimator="amse")

        curves: List[CurveSeries] = []
        for (estimator, variant), group in frame.groupby(["estimator", "variant"], sort=False):
            curves.append(CurveSeries(
                label=f"{label_prefix}{variant} {estimator}".strip(),
                variant=EstimatorVariant(variant),
                estimator=str(estimator),
                points=[
                    CurvePoint(k=int(row.k), value=float(row.total), bias_sq=float(row.bias_sq),
                               variance=float(row.variance))
                    for row in group.itertuples(index=False)
                ],
            ))
        return curves

    @staticmethod
    def estimates_to_csv(points: Sequence[EstimatePoint]) -> str:
        with_quantiles = any(point.quantile_hat is not None for point in points)
        columns = ESTIMATE_COLUMNS + (QUANTILE_COLUMNS if with_quantiles else [])
        frame = pd.DataFrame(
            [point.model_dump(mode="json") for point in points], columns=list(EstimatePoint.model_fields)
        )
        return FileManager.frame_to_csv(frame[columns])

    @staticmethod
    def write_manifest(path: Path, manifest: RunManifest) -> Path:
        text = json.dumps(manifest.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"
        return FileManager.write_text(path, text)

    @staticmethod
    def load_manifest(path: Path) -> RunManifest:
        try:
            with open(path, "r", encoding="utf-8") as f:
                return RunManifest(**json.load(f))
        except (OSError, json.JSONDecodeError) as e:
            raise ParseError(f"Cannot read manifest {path}: {e}", file_path=str(path), cause=e)
