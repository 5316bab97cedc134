# Copyright (c) 2025 CoReason, Inc.
#
# This software is proprietary and dual-licensed.
# Licensed under the Prosperity Public License 3.0 (the "License").
# A copy of the license is available at https://prosperitylicense.com/versions/3.0.0
# For details, see the LICENSE file.
# Commercial use beyond a 30-day trial requires a separate license.
#
# Source Code: https://github.com/CoReason-AI/coreason_affine

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from coreason_affine.geometry import cayley_array, disc_model_circle
from coreason_affine.models import PointConfiguration, VarianceReport
from coreason_affine.utils.logger import logger

VARIANCE_COLUMNS = [
    "R",
    "v_geometric",
    "v_double",
    "v_trace",
    "expected",
    "bound_area",
    "bound_admissible",
    "normalization",
]


def write_atomic(path: Path, content: str) -> Path:
    """Writes through a temporary file in the target directory, then renames it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(content)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    logger.info(f"Wrote {path}")
    return path


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def variance_rows(reports: Sequence[VarianceReport]) -> List[Dict[str, str]]:
    rows = []
    for r in reports:
        rows.append(
            {
                "R": _cell(r.R),
                "v_geometric": _cell(r.v_geometric),
                "v_double": _cell(r.v_double),
                "v_trace": _cell(r.v_trace),
                "expected": _cell(r.expected),
                "bound_area": _cell(r.bounds["upper_area"]),
                "bound_admissible": _cell(r.bounds["upper_admissible"]),
                "normalization": r.normalization.value,
            }
        )
    return rows


def variance_csv(reports: Sequence[VarianceReport]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=VARIANCE_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(variance_rows(reports))
    return buffer.getvalue()


def variance_json(reports: Sequence[VarianceReport]) -> str:
    return json.dumps([r.model_dump(mode="json") for r in reports], indent=2)


def configuration_record(config: PointConfiguration) -> Dict[str, Any]:
    """The sample file layout: kernel, region, seed and the (x, s) points."""
    return {
        "kernel": config.kernel,
        "region": {"center": config.region.center.as_pair(), "R": config.region.R},
        "seed": config.seed,
        "points": [p.as_pair() for p in config.points],
    }


def configuration_json(configs: Sequence[PointConfiguration]) -> str:
    records = [configuration_record(c) for c in configs]
    return json.dumps(records[0] if len(records) == 1 else records, indent=2)


def eigenvalues_csv(eigenvalues: npt.ArrayLike) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["index", "eigenvalue"])
    for k, value in enumerate(np.asarray(eigenvalues, dtype=np.float64)):
        writer.writerow([k, repr(float(value))])
    return buffer.getvalue()


def configuration_svg(config: PointConfiguration, size: int = 480) -> str:
    """
    The sample in the Cayley disc model: unit circle, the region boundary and one dot per point.
    """
    half = size / 2.0
    scale = half * 0.95

    def to_px(u: complex) -> Tuple[float, float]:
        return half + scale * u.real, half - scale * u.imag

    center, radius = disc_model_circle(complex(cayley_array(config.region.center.z)), config.region.R)
    cx, cy = to_px(center)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<circle cx="{half}" cy="{half}" r="{scale}" fill="none" stroke="black"/>',
        f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="{scale * radius:.3f}" fill="none" stroke="gray" '
        'stroke-dasharray="4 3"/>',
    ]
    for u in cayley_array([p.z for p in config.points]):
        px, py = to_px(complex(u))
        lines.append(f'<circle cx="{px:.3f}" cy="{py:.3f}" r="2.5" fill="crimson"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
