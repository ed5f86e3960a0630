#!/usr/bin/env python3
"""Render the CLI's CSV/JSON outputs into the five standard figure facsimiles.

Recipes (one per figure):
  dephasing  two log-rate panels (small and large dephasing strength)
  qfunc      five Q-function heatmaps over the complex code-parameter plane
  wigner     two W heatmaps (both code words), unnormalized by the measure
  lattice    syndrome lattice with loss-only regions and loss/gain lines
  fidelity   three-curve entanglement-fidelity comparison

Rendering is read-only over the data files; the only numerical processing is
axis transforms (log scales, measure weighting declared by the data itself).

Usage: render_figure.py --recipe <name> --data <dir> --out <file>
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


class SchemaError(ValueError):
    """A data file does not carry the columns a recipe needs."""


def load_csv(path: Path, required: list[str]) -> dict[str, np.ndarray]:
    if not path.exists():
        raise SchemaError(f"missing data file {path}")
    with path.open() as fh:
        reader = csv.DictReader(fh)
        names = reader.fieldnames or []
        for col in required:
            if col not in names:
                raise SchemaError(f"{path.name}: missing column {col!r}")
        rows = list(reader)
    out = {}
    for col in required:
        raw = [r[col] for r in rows]
        try:
            out[col] = np.array([float(x) for x in raw])
        except ValueError:
            out[col] = np.array(raw)
    return out


def _heat_panel(ax, data, title, signed=False):
    re = data["re_gamma"]
    im = data["im_gamma"]
    val = data["value"]
    n = int(round(np.sqrt(val.size)))
    if n * n != val.size:
        raise SchemaError(f"{title}: grid is not square ({val.size} rows)")
    grid = val.reshape(n, n)
    extent = [re.min(), re.max(), im.min(), im.max()]
    if signed:
        vmax = np.abs(grid).max()
        imshow = ax.imshow(grid.T, origin="lower", extent=extent, cmap="RdBu_r",
                           vmin=-vmax, vmax=vmax)
    else:
        imshow = ax.imshow(grid.T, origin="lower", extent=extent, cmap="viridis")
    ax.set_title(title, fontsize=9)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    return imshow


def render_dephasing(data_dir: Path, fig):
    data = load_csv(data_dir / "dephasing.csv", ["gamma", "delta", "kappa_n", "scaled_rate"])
    kappas = sorted(set(data["kappa_n"]))
    if len(kappas) < 2:
        kappas = kappas * 2  # single sweep still renders two panels
    axes = fig.subplots(1, 2, sharey=True)
    for ax, kn in zip(axes, kappas[:2]):
        mask_k = data["kappa_n"] == kn
        for d in sorted(set(data["delta"])):
            m = mask_k & (data["delta"] == d)
            order = np.argsort(data["gamma"][m])
            ax.semilogy(data["gamma"][m][order], data["scaled_rate"][m][order],
                        label=f"difference {int(d)}")
        ax.set_xlabel("code parameter")
        ax.set_title(f"dephasing strength {kn:g}")
    axes[0].set_ylabel("scaled logical dephasing rate")
    axes[0].legend(fontsize=7)


QFUNC_PANELS = ["fock00", "fock11", "paircoherent", "paircat", "squeezed"]


def render_qfunc(data_dir: Path, fig):
    axes = fig.subplots(1, 5)
    for ax, name in zip(axes, QFUNC_PANELS):
        data = load_csv(data_dir / f"qfunc_{name}.csv",
                        ["re_gamma", "im_gamma", "value", "measure"])
        _heat_panel(ax, data, name)


def render_wigner(data_dir: Path, fig):
    axes = fig.subplots(1, 2)
    for ax, mu in zip(axes, (0, 1)):
        data = load_csv(data_dir / f"wigner_mu{mu}.csv",
                        ["re_gamma", "im_gamma", "value", "measure"])
        # plot the unnormalized distribution: value times its declared measure
        # (the measure diverges at the origin where the value vanishes)
        finite = np.isfinite(data["measure"])
        weighted = np.zeros_like(data["value"])
        weighted[finite] = data["value"][finite] * data["measure"][finite]
        _heat_panel(ax, {"re_gamma": data["re_gamma"], "im_gamma": data["im_gamma"],
                         "value": weighted}, f"code word {mu}", signed=True)


REGION_COLORS = {"ab": "tab:red", "bc": "tab:blue", "ac": "tab:green"}
LINE_COLORS = {"a-line": "tab:purple", "b-line": "tab:orange", "c-line": "tab:cyan",
               "origin": "black"}


def render_lattice(data_dir: Path, fig):
    path = data_dir / "lattice.json"
    if not path.exists():
        raise SchemaError(f"missing data file {path}")
    report = json.loads(path.read_text())
    if "syndromes" not in report:
        raise SchemaError("lattice.json: missing column 'syndromes' (run without --set syndrome)")
    axes = fig.subplots(1, 2)
    for entry in report["syndromes"]:
        n, m = entry["syndrome"]
        region = entry["loss_only"]["region"]
        axes[0].scatter([n], [m], c=REGION_COLORS.get(region, "gray"), s=36)
        lg = entry["loss_gain"]
        color = LINE_COLORS.get(lg["region"], None) if lg else "lightgray"
        axes[1].scatter([n], [m], c=color or "lightgray", s=36)
    for ax, title in zip(axes, ("loss-only regions", "single-mode loss/gain lines")):
        ax.set_title(title, fontsize=9)
        ax.set_xlabel("first difference")
        ax.set_ylabel("second difference")
        ax.set_aspect("equal")
        ax.axhline(0, color="k", lw=0.5)
        ax.axvline(0, color="k", lw=0.5)
    for vec, label in [((1, 0), "a"), ((-1, 1), "b"), ((0, -1), "c")]:
        axes[0].annotate(label, xy=vec, xytext=(0, 0),
                         arrowprops=dict(arrowstyle="->", color="purple"))


def render_fidelity(data_dir: Path, fig):
    data = load_csv(data_dir / "fidelity.csv",
                    ["code", "one_minus_eta", "fidelity", "truncation_defect"])
    ax = fig.subplots(1, 1)
    for code in ("paircat3", "concat", "singlerail"):
        mask = data["code"] == code
        if not mask.any():
            continue
        order = np.argsort(data["one_minus_eta"][mask])
        ax.plot(data["one_minus_eta"][mask][order], data["fidelity"][mask][order],
                marker="o", ms=3, label=code)
    ax.set_xlabel("loss rate")
    ax.set_ylabel("entanglement fidelity")
    ax.legend(fontsize=8)


RECIPES = {
    "dephasing": (render_dephasing, (7.0, 3.0)),
    "qfunc": (render_qfunc, (13.0, 2.8)),
    "wigner": (render_wigner, (7.0, 3.2)),
    "lattice": (render_lattice, (7.5, 3.6)),
    "fidelity": (render_fidelity, (4.6, 3.4)),
}


def render(recipe: str, data_dir, out_path=None):
    """Render one recipe from a data directory; returns the matplotlib figure."""
    if recipe not in RECIPES:
        raise ValueError(f"unknown recipe {recipe!r}; pick from {sorted(RECIPES)}")
    fn, size = RECIPES[recipe]
    fig = plt.figure(figsize=size)
    fn(Path(data_dir), fig)
    fig.tight_layout()
    if out_path is not None:
        fig.savefig(out_path)
    return fig


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--recipe", required=True, choices=sorted(RECIPES))
    parser.add_argument("--data", required=True, help="directory with the CLI outputs")
    parser.add_argument("--out", required=True, help="output image file (SVG by default)")
    args = parser.parse_args(argv)
    try:
        fig = render(args.recipe, args.data, args.out)
        plt.close(fig)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
