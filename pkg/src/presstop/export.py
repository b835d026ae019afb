"""Write optimisation results to a directory of plain-text files."""
from __future__ import annotations

import csv
import json
import os
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .driver import OptResult
from .mesh import build_mesh


class ExportError(OSError):
    """Writing results failed; the message names the offending path."""


def _g6(v: float) -> str:
    return f"{v:.6g}"


def _write(path: Path, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise ExportError(f"cannot write {path}: {exc.strerror or exc}") from exc


def convergence_csv(result: OptResult) -> str:
    lines = ["iter,compliance,volfrac,change"]
    for i, (c, v, ch) in enumerate(zip(result.compliance, result.volfrac, result.change), start=1):
        lines.append(f"{i},{_g6(c)},{_g6(v)},{_g6(ch)}")
    return "\n".join(lines) + "\n"


def density_csv(result: OptResult) -> str:
    grid = np.asarray(result.xphys)
    return "\n".join(",".join(repr(float(v)) for v in row) for row in grid) + "\n"


def density_pgm(result: OptResult) -> str:
    """P2 greyscale image, one pixel per element, solid drawn black."""
    grid = np.clip(np.asarray(result.xphys), 0.0, 1.0)
    nely, nelx = grid.shape
    pixels = np.rint(255.0 * (1.0 - grid)).astype(int)
    body = "\n".join(" ".join(str(v) for v in row) for row in pixels)
    return f"P2\n{nelx} {nely}\n255\n{body}\n"


def pressure_csv(result: OptResult) -> str:
    mesh = build_mesh(result.nelx, result.nely)
    xy = mesh.node_coordinates()
    lines = ["node,x,y,p"]
    for n, ((x, y), p) in enumerate(zip(xy, result.pressure)):
        lines.append(f"{n},{x:g},{y:g},{float(p)!r}")
    return "\n".join(lines) + "\n"


def summary(result: OptResult) -> dict:
    cfg = asdict(result.config) if result.config is not None else {}
    return {
        "problem": result.problem,
        "nelx": result.nelx,
        "nely": result.nely,
        "iterations": result.iterations,
        "converged": result.converged,
        "final_compliance": result.final_compliance,
        "final_objective": result.final_objective,
        "normf": result.normf,
        "final_volfrac": result.volfrac[-1] if result.volfrac else None,
        "final_volume_constraint": result.volume_constraint[-1] if result.volume_constraint else None,
        "grayness_percent": result.grayness,
        "config": cfg,
    }


def export_results(result: OptResult, out_dir: str | os.PathLike) -> list[Path]:
    """Write convergence, density, image, pressure and summary files; return their paths."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ExportError(f"cannot create output directory {out}: {exc.strerror or exc}") from exc
    files = {
        "convergence.csv": convergence_csv(result),
        "density.csv": density_csv(result),
        "density.pgm": density_pgm(result),
        "pressure.csv": pressure_csv(result),
        "result.json": json.dumps(summary(result), indent=2, sort_keys=True) + "\n",
    }
    paths = []
    for name, text in files.items():
        path = out / name
        _write(path, text)
        paths.append(path)
    return paths


def read_density_csv(path: str | os.PathLike) -> np.ndarray:
    with open(path, encoding="utf-8", newline="") as fh:
        return np.array([[float(v) for v in row] for row in csv.reader(fh)])
