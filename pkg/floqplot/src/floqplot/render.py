"""Render floqsim output files into publication-style figures.

Inputs are exactly the primary tool's documented formats: series CSV
(step,observable,region,mean,stderr), snapshot CSV (step,site,mean,stderr),
lattice JSON ({positions, edges, tags, ...}) and fit JSON.  Rendering never
mutates inputs; magnetization heatmaps always use a symmetric [-1, 1] color
scale so panels are comparable across figures.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

PLOT_KINDS = ("timeseries", "heatmap-snapshot", "otoc-trace", "fit-overlay")


class RenderError(ValueError):
    pass


@dataclass
class SeriesData:
    columns: dict[tuple[str, str], tuple[np.ndarray, np.ndarray, np.ndarray]]

    @classmethod
    def load(cls, path: str) -> "SeriesData":
        rows = {}
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != ["step", "observable", "region", "mean", "stderr"]:
                raise RenderError(f"{path}: not a floqsim series CSV")
            for step, obs, region, mean, err in reader:
                rows.setdefault((obs, region), []).append(
                    (int(step), float(mean), float(err))
                )
        columns = {}
        for key, entries in rows.items():
            entries.sort()
            arr = np.array(entries, dtype=float)
            columns[key] = (arr[:, 0], arr[:, 1], arr[:, 2])
        if not columns:
            raise RenderError(f"{path}: empty series")
        return cls(columns)

    def pick(self, observable: str, region: str):
        try:
            return self.columns[(observable, region)]
        except KeyError:
            have = sorted(self.columns)
            raise RenderError(
                f"series has no column ({observable!r}, {region!r}); "
                f"available: {have}"
            ) from None


def load_snapshots(path: str) -> dict[int, np.ndarray]:
    per_step: dict[int, dict[int, float]] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["step", "site", "mean", "stderr"]:
            raise RenderError(f"{path}: not a floqsim snapshot CSV")
        for step, site, mean, _ in reader:
            per_step.setdefault(int(step), {})[int(site)] = float(mean)
    out = {}
    for step, values in per_step.items():
        arr = np.full(1 + max(values), np.nan)
        for site, v in values.items():
            arr[site] = v
        out[step] = arr
    return out


def load_lattice(path: str) -> dict:
    doc = json.loads(Path(path).read_text())
    for key in ("positions", "edges"):
        if key not in doc:
            raise RenderError(f"{path}: lattice JSON lacks {key!r}")
    return doc


@dataclass
class PlotSpec:
    kind: str
    out: str
    series: str | None = None
    snapshot: str | None = None
    lattice: str | None = None
    fit: str | None = None
    columns: list[dict] = field(default_factory=list)
    style: dict = field(default_factory=dict)

    @classmethod
    def from_json(cls, text: str) -> "PlotSpec":
        doc = json.loads(text)
        known = {"kind", "out", "series", "snapshot", "lattice", "fit",
                 "columns", "style"}
        unknown = set(doc) - known
        if unknown:
            raise RenderError(f"unknown spec keys: {sorted(unknown)}")
        spec = cls(
            kind=doc.get("kind", ""),
            out=doc.get("out", ""),
            series=doc.get("series"),
            snapshot=doc.get("snapshot"),
            lattice=doc.get("lattice"),
            fit=doc.get("fit"),
            columns=doc.get("columns", []),
            style=doc.get("style", {}),
        )
        if spec.kind not in PLOT_KINDS:
            raise RenderError(
                f"kind must be one of {PLOT_KINDS}, got {spec.kind!r}"
            )
        if not spec.out:
            raise RenderError("spec needs an output path 'out'")
        return spec


def _save(fig, out: str) -> None:
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    meta = {"Date": None} if path.suffix == ".svg" else {}
    fig.savefig(path, dpi=160, metadata=meta or None)
    plt.close(fig)


def _plot_series(ax, data: SeriesData, columns, style):
    if not columns:
        columns = [
            {"observable": obs, "region": region}
            for (obs, region) in sorted(data.columns)
        ]
    take_abs = bool(style.get("abs", False))
    for col in columns:
        steps, mean, err = data.pick(
            col.get("observable", "z_avg"), col.get("region", "all")
        )
        values = np.abs(mean) if take_abs else mean
        label = col.get("label") or f"{col.get('observable', 'z_avg')}" \
            f"[{col.get('region', 'all')}]"
        ax.errorbar(
            steps, values, yerr=err, marker="o", ms=3.0, lw=1.0,
            capsize=2.0, label=label,
        )
    ax.set_xlabel("t / T")
    ax.set_ylabel(style.get("ylabel", r"$\langle Z \rangle$"))
    if style.get("ylim"):
        ax.set_ylim(*style["ylim"])
    ax.axhline(0.0, color="0.8", lw=0.8, zorder=0)
    ax.legend(frameon=False, fontsize=8)
    if style.get("title"):
        ax.set_title(style["title"])


def render(spec: PlotSpec) -> str:
    """Produce the image for a plot spec; returns the output path."""
    style = spec.style
    if spec.kind == "timeseries":
        if not spec.series:
            raise RenderError("timeseries needs a series CSV")
        data = SeriesData.load(spec.series)
        fig, ax = plt.subplots(figsize=style.get("figsize", (6.0, 3.6)))
        _plot_series(ax, data, spec.columns, style)
        _save(fig, spec.out)
    elif spec.kind == "otoc-trace":
        if not spec.series:
            raise RenderError("otoc-trace needs a series CSV")
        data = SeriesData.load(spec.series)
        columns = spec.columns or [
            {"observable": obs, "region": region}
            for (obs, region) in sorted(data.columns)
            if obs.startswith("otoc")
        ]
        if not columns:
            raise RenderError("series contains no otoc columns")
        fig, ax = plt.subplots(figsize=style.get("figsize", (6.0, 3.6)))
        _plot_series(ax, data, columns, {"ylabel": "OTOC", **style})
        ax.set_ylim(*style.get("ylim", (-1.05, 1.05)))
        _save(fig, spec.out)
    elif spec.kind == "heatmap-snapshot":
        if not (spec.snapshot and spec.lattice):
            raise RenderError("heatmap-snapshot needs snapshot CSV and "
                              "lattice JSON")
        snaps = load_snapshots(spec.snapshot)
        lat = load_lattice(spec.lattice)
        pos = np.array(lat["positions"], dtype=float)
        steps = style.get("steps") or sorted(snaps)
        missing = [s for s in steps if s not in snaps]
        if missing:
            raise RenderError(f"snapshot CSV lacks steps {missing}")
        for s in steps:
            if len(snaps[s]) > len(pos):
                raise RenderError(
                    "lattice positions do not cover all snapshot sites"
                )
        fig, axes = plt.subplots(
            1, len(steps),
            figsize=(2.6 * len(steps) + 0.8, 2.8),
            squeeze=False,
        )
        for ax, s in zip(axes[0], steps):
            for i, j, *_ in lat["edges"]:
                ax.plot(
                    [pos[i, 0], pos[j, 0]], [pos[i, 1], pos[j, 1]],
                    color="0.85", lw=0.8, zorder=1,
                )
            sc = ax.scatter(
                pos[: len(snaps[s]), 0], pos[: len(snaps[s]), 1],
                c=snaps[s], cmap="RdBu_r", vmin=-1.0, vmax=1.0,
                s=style.get("marker_size", 60), edgecolors="0.3",
                linewidths=0.5, zorder=2,
            )
            ax.set_title(f"t/T = {s}", fontsize=9)
            ax.set_aspect("equal")
            ax.axis("off")
        fig.colorbar(sc, ax=axes[0], shrink=0.85,
                     label=r"$\langle Z_j \rangle$")
        _save(fig, spec.out)
    elif spec.kind == "fit-overlay":
        if not (spec.series and spec.fit):
            raise RenderError("fit-overlay needs series CSV and fit JSON")
        data = SeriesData.load(spec.series)
        col = spec.columns[0] if spec.columns else {"observable": "z_avg",
                                                    "region": "all"}
        steps, mean, err = data.pick(
            col.get("observable", "z_avg"), col.get("region", "all")
        )
        values = np.abs(mean) if style.get("abs", True) else mean
        fit_doc = json.loads(Path(spec.fit).read_text())
        params = fit_doc.get("params", {})
        dense = np.linspace(steps.min(), steps.max(), 400)
        if fit_doc.get("model") == "single_exp":
            curve = params["eta"] ** dense
            label = f"$\\eta^n$, $\\eta$={params['eta']:.4f}"
        elif fit_doc.get("model") == "double_exp":
            curve = (
                params["alpha1"] * params["eta1"] ** dense
                + params["alpha2"] * params["eta2"] ** dense
            )
            label = (
                f"{params['alpha1']:.2f}$\\cdot${params['eta1']:.3f}$^n$ + "
                f"{params['alpha2']:.2f}$\\cdot${params['eta2']:.3f}$^n$"
            )
        else:
            raise RenderError(f"unknown fit model {fit_doc.get('model')!r}")
        fig, ax = plt.subplots(figsize=style.get("figsize", (5.0, 3.4)))
        ax.errorbar(steps, values, yerr=err, fmt="o", ms=4.0, capsize=2.0,
                    label="data")
        ax.plot(dense, curve, "-", lw=1.4, label=label)
        ax.set_xlabel("t / T")
        ax.set_ylabel(style.get("ylabel", "fidelity"))
        ax.legend(frameon=False, fontsize=8)
        if style.get("title"):
            ax.set_title(style["title"])
        _save(fig, spec.out)
    return spec.out
