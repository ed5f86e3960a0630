"""Command-line driver writing the library's standard sweeps as CSV + manifests.

Every subcommand resolves a configuration (built-in defaults, optionally a
JSON config file, then --set key=value overrides, in that precedence order),
runs the sweep, and writes columnar CSV plus a manifest echoing the fully
resolved configuration.  Runs are deterministic: identical configurations
produce byte-identical CSV.

Exit codes: 0 success, 2 configuration error, 3 truncation budget exceeded,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .fock import TruncationError


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# config plumbing


DEFAULTS = {
    "fig-dephasing": {
        "gamma_min": 0.2, "gamma_max": 2.5, "gamma_points": 24,
        "deltas": [0, 1, 2, 3], "kappa_n": [0.01, 5.0], "kappa_ii": 1.0,
    },
    "fig-lossprob": {
        "nbar_min": 1.0, "nbar_max": 10.0, "nbar_points": 10,
        "loss_min": 0.01, "loss_max": 0.3, "loss_points": 10,
    },
    "fig-qfunc": {
        "delta": 0, "gamma0": 2.0, "xi": 0.75, "grid_halfwidth": 3.2, "grid_points": 81,
        "cutoff": 40,
    },
    "fig-wigner": {
        "delta": 0, "gamma0": 2.0, "grid_halfwidth": 2.6, "grid_points": 61,
        "cutoff": 24, "eta_points": 160,
    },
    "fig-fidelity": {
        "codes": ["paircat3", "concat", "singlerail"],
        "loss_min": 0.01, "loss_max": 0.1, "loss_points": 10,
        "cutoff": 6, "nbar_per_mode": 1.08, "gamma3": 1.2, "weight_tol": 1e-6,
    },
    "kl-report": {
        "gamma": 2.0, "delta": 0, "max_power": 3, "cutoff": None, "tolerance": 1e-9,
    },
    "lattice": {
        "syndrome": None, "radius": 4,
    },
    "reservoir": {
        "g1": 0.1, "g2": 0.1, "eps_gf": 0.0, "delta": 1.0, "gamma_fg": 10.0,
        "gamma_eg": 0.2, "cutoff_a": 4, "cutoff_b": 4,
        "readout_delta": 2, "readout_eps_over_kappa": 0.5,
        "demo_gamma": 2.0, "demo_kappa_f": 2.0, "run_demo": True,
    },
}

TOLERANCES = {
    "tail_tolerance": 1e-8,
    "kl_tolerance": 1e-9,
    "kraus_completeness": 1e-10,
}


def resolve_config(subcommand: str, config_path: str | None, overrides: list[str]) -> dict:
    cfg = json.loads(json.dumps(DEFAULTS[subcommand]))  # deep copy
    if config_path:
        try:
            user = json.loads(Path(config_path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {config_path}: {exc}") from exc
        unknown = set(user) - set(cfg)
        if unknown:
            raise ConfigError(f"unknown config keys for {subcommand}: {sorted(unknown)}")
        cfg.update(user)
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not key=value")
        key, raw = item.split("=", 1)
        if key not in cfg:
            raise ConfigError(f"unknown config key {key!r} for {subcommand}")
        try:
            cfg[key] = json.loads(raw)
        except json.JSONDecodeError:
            cfg[key] = raw
    return cfg


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def write_csv(path: Path, rows: list[dict], columns: list[str]):
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in columns))
    path.write_text("\n".join(lines) + "\n")


def write_manifest(path: Path, subcommand: str, cfg: dict, extra: dict | None = None):
    manifest = {
        "command": subcommand,
        "library_version": __version__,
        "config": cfg,
        "tolerances": TOLERANCES,
    }
    if extra:
        manifest.update(extra)
    path.write_text(json.dumps(manifest, indent=2, default=str) + "\n")


def _parallel_map(fn, items, threads: int):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# subcommand implementations


def cmd_fig_dephasing(cfg: dict, out: Path, threads: int) -> dict:
    from .dynamics import dephasing_rate_spectrum

    gammas = np.linspace(cfg["gamma_min"], cfg["gamma_max"], int(cfg["gamma_points"]))
    if gammas.size == 0:
        raise ConfigError("empty gamma grid")
    if gammas.size and gammas.min() <= 0:
        raise ConfigError("gamma grid must be positive")
    points = [(g, d, kn) for kn in cfg["kappa_n"] for d in cfg["deltas"] for g in gammas]

    def run(point):
        g, d, kn = point
        rate = dephasing_rate_spectrum(g, d, cfg["kappa_ii"], kn)
        return {"gamma": float(g), "delta": int(d), "kappa_n": float(kn), "scaled_rate": rate}

    rows = _parallel_map(run, points, threads)
    write_csv(out / "dephasing.csv", rows, ["gamma", "delta", "kappa_n", "scaled_rate"])
    return {"rows": len(rows)}


def cmd_fig_lossprob(cfg: dict, out: Path, threads: int) -> dict:
    from .channels import probability_sweep_rows

    nbars = np.linspace(cfg["nbar_min"], cfg["nbar_max"], int(cfg["nbar_points"]))
    rates = np.linspace(cfg["loss_min"], cfg["loss_max"], int(cfg["loss_points"]))
    rows = probability_sweep_rows(nbars, rates)
    write_csv(out / "lossprob.csv", rows, ["code_kind", "param", "eta", "nbar", "prob_kind", "value"])
    return {"rows": len(rows)}


def _qfunc_states(cfg):
    from .fock import Ket, space
    from .states import pair_cat_state, pair_coherent, two_mode_squeezed

    cut = int(cfg["cutoff"])
    spc = space(cut, cut)
    d = int(cfg["delta"])
    return {
        "fock00": Ket.basis(spc, (0, 0)),
        "fock11": Ket.basis(spc, (1, 1)),
        "paircoherent": pair_coherent(spc, cfg["gamma0"], d),
        "paircat": pair_cat_state(spc, cfg["gamma0"], d, 0),
        "squeezed": two_mode_squeezed(spc, cfg["xi"], d),
    }


def cmd_fig_qfunc(cfg: dict, out: Path, threads: int) -> dict:
    from .quasiprob import q_function

    h, npts = cfg["grid_halfwidth"], int(cfg["grid_points"])
    axis = np.linspace(-h, h, npts)
    gammas = axis[:, None] + 1j * axis[None, :]
    names = []
    for name, ket in _qfunc_states(cfg).items():
        grid = q_function(ket, int(cfg["delta"]), gammas)
        write_csv(out / f"qfunc_{name}.csv", list(grid.rows()),
                  ["re_gamma", "im_gamma", "value", "measure"])
        names.append(name)
    return {"states": names}


def cmd_fig_wigner(cfg: dict, out: Path, threads: int) -> dict:
    from .fock import space
    from .quasiprob import w_function
    from .states import pair_cat_state

    cut = int(cfg["cutoff"])
    spc = space(cut, cut)
    h, npts = cfg["grid_halfwidth"], int(cfg["grid_points"])
    axis = np.linspace(-h, h, npts)
    gammas = axis[:, None] + 1j * axis[None, :]
    names = []
    for mu in (0, 1):
        ket = pair_cat_state(spc, cfg["gamma0"], int(cfg["delta"]), mu)
        grid = w_function(ket, int(cfg["delta"]), gammas, eta_points=int(cfg["eta_points"]))
        write_csv(out / f"wigner_mu{mu}.csv", list(grid.rows()),
                  ["re_gamma", "im_gamma", "value", "measure"])
        names.append(f"wigner_mu{mu}")
    return {"states": names}


def cmd_fig_fidelity(cfg: dict, out: Path, threads: int) -> dict:
    from .recovery import figure5_sweep

    rates = np.linspace(cfg["loss_min"], cfg["loss_max"], int(cfg["loss_points"]))
    rows = figure5_sweep(rates, cutoff=int(cfg["cutoff"]), nbar_per_mode=cfg["nbar_per_mode"],
                         gamma3=cfg["gamma3"], weight_tol=cfg["weight_tol"])
    rows = [r for r in rows if r["code"] in cfg["codes"]]
    write_csv(out / "fidelity.csv", rows, ["code", "one_minus_eta", "fidelity", "truncation_defect"])
    return {"rows": len(rows)}


def cmd_kl_report(cfg: dict, out: Path, threads: int) -> dict:
    from .codes import build_code, kl_report
    from .dynamics import suggested_sector_cutoff
    from .mmqec import error_monomial

    gamma, delta = cfg["gamma"], int(cfg["delta"])
    cutoff = cfg["cutoff"] or suggested_sector_cutoff(gamma, delta)
    code = build_code("paircat", gamma=gamma, delta=delta, cutoff=int(cutoff))
    errors = {"1": error_monomial(code.space, (0, 0))}
    for k in range(1, int(cfg["max_power"]) + 1):
        errors[f"a^{k}"] = error_monomial(code.space, (k, 0))
        errors[f"b^{k}"] = error_monomial(code.space, (0, k))
    errors["ab"] = error_monomial(code.space, (1, 1))
    report = kl_report(code, errors, cfg["tolerance"])
    (out / "kl_report.json").write_text(report.to_json() + "\n")
    return {"pairs": len(report.entries)}


def cmd_lattice(cfg: dict, out: Path, threads: int) -> dict:
    from .mmqec import lattice_report, lattice_window_report

    if cfg["syndrome"] is not None:
        syn = tuple(int(x) for x in cfg["syndrome"])
        (out / "lattice.json").write_text(json.dumps(lattice_report(syn), indent=2) + "\n")
        return {"syndrome": list(syn)}
    (out / "lattice.json").write_text(lattice_window_report(int(cfg["radius"])) + "\n")
    return {"radius": cfg["radius"]}


def cmd_reservoir(cfg: dict, out: Path, threads: int) -> dict:
    from .reservoir import (ReservoirParams, autonomous_correction_demo,
                            readout_displacement, validate_elimination)

    params = ReservoirParams(g1=cfg["g1"], g2=cfg["g2"], eps_gf=cfg["eps_gf"],
                             delta=cfg["delta"], gamma_fg=cfg["gamma_fg"],
                             gamma_eg=cfg["gamma_eg"])
    report = validate_elimination(params, int(cfg["cutoff_a"]), int(cfg["cutoff_b"]))
    readout = readout_displacement(int(cfg["readout_delta"]),
                                   cfg["readout_eps_over_kappa"], 1.0)
    readout["amplitude"] = repr(readout["amplitude"])
    report["readout"] = readout
    if cfg["run_demo"]:
        demo = autonomous_correction_demo(cfg["demo_gamma"], kappa_f=cfg["demo_kappa_f"])
        report["autonomous_demo"] = {
            "final_fidelity": demo["final_fidelity"],
            "final_delta0_population": demo["final_delta0_population"],
        }
    (out / "reservoir.json").write_text(json.dumps(report, indent=2, default=str) + "\n")
    return {"regime": report["regime_flags"]}


COMMANDS = {
    "fig-dephasing": cmd_fig_dephasing,
    "fig-lossprob": cmd_fig_lossprob,
    "fig-qfunc": cmd_fig_qfunc,
    "fig-wigner": cmd_fig_wigner,
    "fig-fidelity": cmd_fig_fidelity,
    "kl-report": cmd_kl_report,
    "lattice": cmd_lattice,
    "reservoir": cmd_reservoir,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="paircat-lab",
                                     description="cat / pair-cat code sweeps and reports")
    parser.add_argument("subcommand", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="JSON config file", default=None)
    parser.add_argument("--out", help="output directory", default="out")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE", help="override a config field")
    args = parser.parse_args(argv)

    try:
        cfg = resolve_config(args.subcommand, args.config, args.overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        extra = COMMANDS[args.subcommand](cfg, out, args.threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except TruncationError as exc:
        print(f"truncation budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (ArithmeticError, np.linalg.LinAlgError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4
    write_manifest(out / f"{args.subcommand}.manifest.json", args.subcommand, cfg, extra)
    return 0


if __name__ == "__main__":
    sys.exit(main())
