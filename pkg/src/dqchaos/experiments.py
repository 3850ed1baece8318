"""Campaign presets and runners regenerating the figure data sets.

Each runner writes its outputs into ``config.out``, a ``summary.json`` with
the headline numbers, a ``manifest.json`` indexing every output by sha256 and
a ``timing.json`` sidecar (wall-clock only, never hashed). Runners also
return a :class:`CampaignResult` holding the in-memory data.
"""

from __future__ import annotations

import copy
import hashlib
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .classical import attractor_sample, jaccard, lyapunov, occupancy
from .errors import ConfigurationError, TruncationError
from .io import write_grid, write_grid_csv, write_manifest, write_record, write_table
from .observables import fit_sine_amplitude, husimi, kick_function
from .oracle import compare_unraveling
from .params import SimParams, basis_for
from .quantum import Propagator
from .rng import STREAM_CLASSICAL, trajectory_rng
from .trajectory import InitialCondition, run_trajectory

KINDS = ("fig1", "fig2", "fig3", "fig4", "oracle", "classical")
PLATEAU_NOTE = "plateau = mean of sigma_bar over the final {last} kicks"
REGIME_NOTE = "crossover heuristic: collapse if gamma * t_E > 1, explosion otherwise"


@dataclass
class CampaignConfig:
    """One campaign: what to run, with which parameters, and where to write."""

    kind: str
    params: SimParams
    M: int = 1
    initial: InitialCondition = field(default_factory=InitialCondition)
    gammas: tuple = ()
    hbars: tuple = ()
    out: str = "out"
    seed: int | None = None
    threads: int = 1
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        self.gammas = tuple(float(g) for g in self.gammas)
        self.hbars = tuple(float(h) for h in self.hbars)
        self.validate()

    def validate(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown experiment kind {self.kind!r}; choose from {KINDS}")
        if not isinstance(self.M, int) or self.M < 1:
            raise ConfigurationError(f"M must be a positive integer, got {self.M!r}")
        if not isinstance(self.threads, int) or self.threads < 1:
            raise ConfigurationError(f"threads must be a positive integer, got {self.threads!r}")
        for g in self.gammas:
            if not 0.0 <= g < 1.0:
                raise ConfigurationError(f"gamma list values must lie in [0, 1), got {g}")
        for h in self.hbars:
            if not h > 0.0:
                raise ConfigurationError(f"hbar list values must be positive, got {h}")
        # every referenced combination must be a valid parameter set
        for g in self.gammas or (self.params.gamma,):
            for h in self.hbars or (self.params.hbar,):
                self.params.replace(gamma=g, hbar=h)

    @property
    def run_params(self) -> SimParams:
        return self.params if self.seed is None else self.params.replace(seed=int(self.seed))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "params": self.params.to_dict(),
            "M": self.M,
            "initial": self.initial.to_dict(),
            "gammas": list(self.gammas),
            "hbars": list(self.hbars),
            "out": str(self.out),
            "seed": self.seed,
            "threads": self.threads,
            "options": copy.deepcopy(self.options),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CampaignConfig":
        """Build from a JSON-like dict; a ``preset`` key supplies defaults."""
        d = dict(d)
        base = preset(d.pop("preset")).to_dict() if "preset" in d else {}
        if "kind" not in d and "kind" not in base:
            raise ConfigurationError("configuration needs a 'kind' or a 'preset'")
        merged = {**base, **{k: v for k, v in d.items() if k not in ("params", "options")}}
        merged["params"] = {**base.get("params", {}), **d.get("params", {})}
        merged["options"] = {**base.get("options", {}), **d.get("options", {})}
        known = {"kind", "params", "M", "initial", "gammas", "hbars", "out", "seed",
                 "threads", "options"}
        unknown = set(merged) - known
        if unknown:
            raise ConfigurationError(f"unknown configuration keys: {sorted(unknown)}")
        try:
            params = SimParams.from_dict(merged.pop("params"))
            initial = InitialCondition.from_dict(merged.pop("initial", {}))
        except TypeError as exc:
            raise ConfigurationError(str(exc)) from exc
        return cls(params=params, initial=initial, **merged)


def load_config(path) -> CampaignConfig:
    """Read a campaign JSON file; a run manifest is accepted too (its config echo)."""
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read configuration {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigurationError(f"configuration {path} must hold a JSON object")
    if "outputs" in doc and "config" in doc:
        doc = doc["config"]
    return CampaignConfig.from_dict(doc)


# ---------------------------------------------------------------------------
# presets

FIG4_GAMMAS = (0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9)
FIG4_HBARS = (0.33, 0.11, 0.036, 0.012)


def preset(name: str) -> CampaignConfig:
    """Parameter sets of the fig1-fig4 campaigns, plus oracle and classical runs."""
    fig1 = SimParams(K=7.0, hbar=0.012, gamma=0.5, n_basis=8192, n_kicks=300, seed=1)
    table = {
        "fig1-left": dict(kind="fig1", params=fig1, gammas=(0.5,),
                          options={"windows": [[0.5, -25.0, 25.0]]}),
        "fig1-right": dict(kind="fig1", params=fig1.replace(gamma=0.01, n_basis=32768),
                           gammas=(0.01,), options={"windows": [[0.01, -100.0, 50.0]]}),
        "fig1": dict(kind="fig1", params=fig1, gammas=(0.5, 0.01),
                     options={"windows": [[0.5, -25.0, 25.0], [0.01, -100.0, 50.0]]}),
        "fig2": dict(kind="fig2", params=fig1, hbars=(0.012, 0.048)),
        "fig3": dict(kind="fig3", params=fig1, gammas=(0.01, 0.5),
                     options={"eigenstate_gammas": [0.5], "eigenstate_x0": math.pi}),
        "fig4": dict(kind="fig4", params=fig1, M=32, gammas=FIG4_GAMMAS, hbars=FIG4_HBARS,
                     options={"integrable_K": 0.7, "integrable_hbar": 0.012,
                              "plateau_last": 100}),
        "oracle": dict(kind="oracle",
                       params=SimParams(K=0.5, hbar=0.5, gamma=0.3, n_basis=64, n_kicks=20,
                                        seed=1),
                       M=2000, initial=InitialCondition("gaussian", math.pi / 2, 3.0),
                       options={"M_factor": 4}),
        "classical": dict(kind="classical", params=fig1.replace(gamma=0.0), gammas=(0.0, 0.5),
                          options={"n_iter": 1_000_000, "transient": 1000,
                                   "n_conditions": 10, "attractor_points": 10_000}),
    }
    if name not in table:
        raise ConfigurationError(f"unknown preset {name!r}; choose from {sorted(table)}")
    return CampaignConfig(**copy.deepcopy(table[name]))


# ---------------------------------------------------------------------------
# shared plumbing


@dataclass
class CampaignResult:
    kind: str
    out: Path
    summary: dict
    data: dict = field(default_factory=dict)

    @property
    def manifest(self) -> Path:
        return self.out / "manifest.json"


class _Run:
    """Collects outputs, seeds and stats while a campaign runs."""

    def __init__(self, config: CampaignConfig):
        self.config = config
        self.out = Path(config.out)
        self.out.mkdir(parents=True, exist_ok=True)
        self.outputs = []
        self.seeds = []
        self.stats = {"jumps_l1": 0, "jumps_l2": 0, "max_edge_probability": 0.0,
                      "trajectories": 0}
        self.t0 = time.perf_counter()

    def path(self, name: str) -> Path:
        p = self.out / name
        self.outputs.append(p)
        return p

    def note_record(self, label: str, rec):
        self.seeds.append({"run": label, "seed": rec.seed, "index": rec.index,
                           "fingerprint": rec.fingerprint})
        self.note_stats(int(rec.jumps_l1.sum()), int(rec.jumps_l2.sum()),
                        float(rec.edge_probability.max(initial=0.0)))

    def note_stats(self, j1: int, j2: int, edge: float, n: int = 1):
        self.stats["jumps_l1"] += j1
        self.stats["jumps_l2"] += j2
        self.stats["max_edge_probability"] = max(self.stats["max_edge_probability"], edge)
        self.stats["trajectories"] += n

    def finish(self, summary: dict, data: dict, notes: dict | None = None) -> CampaignResult:
        summary_path = self.path("summary.json")
        summary_path.write_text(json.dumps(_jsonable(summary), sort_keys=True, indent=2) + "\n")
        manifest = {
            "kind": self.config.kind,
            "config": self.config.to_dict(),
            "code_version": __version__,
            "seeds": self.seeds,
            "stats": self.stats,
            "notes": notes or {},
            "timing_file": "timing.json",
        }
        write_manifest(self.out / "manifest.json", _jsonable(manifest), self.outputs, self.out)
        timing = {"wall_clock_seconds": round(time.perf_counter() - self.t0, 3)}
        (self.out / "timing.json").write_text(json.dumps(timing) + "\n")
        return CampaignResult(self.config.kind, self.out, summary, data)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def _tag(value: float) -> str:
    return f"{value:g}"


def _sized(params: SimParams, auto: bool = True) -> SimParams:
    if not auto:
        return params
    n = max(params.n_basis, basis_for(params.K, params.gamma, params.hbar, params.n_kicks))
    return params.replace(n_basis=n)


def _section_rows(rec, discard: int = 0):
    return [(t + 1, rec.mean_x[t], rec.mean_p[t]) for t in range(discard, rec.n_kicks)]


SECTION_UNITS = {"t": "kicks", "x": "rad", "p": "p=hbar*n"}


# ---------------------------------------------------------------------------
# fig1: Husimi snapshots and Poincare sections


def _window_for(config: CampaignConfig, gamma: float):
    for g, lo, hi in config.options.get("windows", []):
        if abs(g - gamma) < 1e-12:
            return float(lo), float(hi)
    return (-25.0, 25.0) if gamma >= 0.1 else (-100.0, 50.0)


def run_fig1(config: CampaignConfig) -> CampaignResult:
    run = _Run(config)
    opts = config.options
    discard = int(opts.get("section_discard", 50))
    n_classical = int(opts.get("classical_points", 10_000))
    bins = int(opts.get("occupancy_bins", 64))
    occ_range = tuple(opts.get("occupancy_p_range", (-15.0, 15.0)))
    n_grid = int(opts.get("husimi_points", 256))
    base = config.run_params
    summary, data = {}, {}
    for gamma in config.gammas or (base.gamma,):
        params = _sized(base.replace(gamma=gamma), opts.get("auto_basis", True))
        tag = _tag(gamma)
        rec, psi = run_trajectory(params, config.initial, index=0, return_state=True)
        run.note_record(f"fig1 gamma={tag}", rec)
        write_record(run.path(f"record_g{tag}.csv"), rec)
        window = _window_for(config, gamma)
        grid = husimi(psi, window, n_x=n_grid, n_p=n_grid, fingerprint=params.fingerprint())
        write_grid(run.path(f"husimi_g{tag}.grid"), grid)
        write_grid_csv(run.path(f"husimi_g{tag}.csv"), grid)
        write_table(run.path(f"section_g{tag}.csv"), ("t", "x", "p"),
                    _section_rows(rec, discard), SECTION_UNITS, params.fingerprint(),
                    {"kind": "quantum Poincare section", "discarded": discard})
        cl = attractor_sample(params.K, gamma, n_classical,
                              rng=trajectory_rng(params.seed, 0, STREAM_CLASSICAL),
                              phase="kick")
        write_table(run.path(f"classical_g{tag}.csv"), ("t", "x", "p"),
                    [(i + 1, x, p) for i, (x, p) in enumerate(cl)], SECTION_UNITS, "",
                    {"kind": "classical attractor", "phase": "kick", "K": params.K,
                     "gamma": gamma})
        q = np.column_stack([rec.mean_x[discard:], rec.mean_p[discard:]])
        occ_q = occupancy(q, bins, occ_range)
        occ_c = occupancy(cl, bins, occ_range)
        both = int(np.logical_and(occ_q, occ_c).sum())
        summary[tag] = {
            "gamma": gamma,
            "n_basis": params.n_basis,
            "sigma_bar_final": float(rec.sigma_bar[-1]),
            "plateau": rec.plateau(),
            "husimi_window": list(window),
            "husimi_support_fraction": grid.support_fraction(0.01),
            "husimi_coverage": grid.coverage,
            "jaccard": jaccard(occ_q, occ_c),
            "containment": both / max(1, int(occ_q.sum())),
            "quantum_cells": int(occ_q.sum()),
            "classical_cells": int(occ_c.sum()),
        }
        data[gamma] = {"record": rec, "grid": grid, "classical": cl, "section": q}
    return run.finish(summary, data)


# ---------------------------------------------------------------------------
# fig2: kick function


def run_fig2(config: CampaignConfig) -> CampaignResult:
    run = _Run(config)
    base = config.run_params
    summary, data = {"fits": {}}, {}
    for hbar in config.hbars or (base.hbar,):
        params = _sized(base.replace(hbar=hbar), config.options.get("auto_basis", True))
        tag = _tag(hbar)
        rec = run_trajectory(params, config.initial, index=0)
        run.note_record(f"fig2 hbar={tag}", rec)
        write_record(run.path(f"record_h{tag}.csv"), rec)
        samples = kick_function(rec, params)
        A, rms = fit_sine_amplitude(samples)
        write_table(run.path(f"kick_h{tag}.csv"), ("x", "f", "uncertainty", "model"),
                    [(s.x, s.f, s.uncertainty, params.K * math.sin(s.x)) for s in samples],
                    {"x": "rad", "f": "p=hbar*n", "uncertainty": "p=hbar*n",
                     "model": "p=hbar*n"},
                    params.fingerprint(), {"fit_amplitude": A, "rms_residual": rms})
        summary["fits"][tag] = {"hbar": hbar, "amplitude": A, "rms_residual": rms,
                                "n_basis": params.n_basis}
        data[hbar] = {"record": rec, "samples": samples, "amplitude": A, "rms": rms}
    fits = list(summary["fits"].values())
    if len(fits) >= 2:
        summary["rms_ratio"] = fits[1]["rms_residual"] / fits[0]["rms_residual"]
    return run.finish(summary, data)


# ---------------------------------------------------------------------------
# fig3: dispersion time series


def run_fig3(config: CampaignConfig) -> CampaignResult:
    run = _Run(config)
    base = config.run_params
    opts = config.options
    runs = [(g, config.initial) for g in (config.gammas or (base.gamma,))]
    x0 = float(opts.get("eigenstate_x0", math.pi))
    runs += [(g, InitialCondition("position", x0)) for g in opts.get("eigenstate_gammas", [])]
    summary, data = {}, {}
    for gamma, init in runs:
        params = _sized(base.replace(gamma=float(gamma)), opts.get("auto_basis", True))
        label = f"{init.kind}_g{_tag(gamma)}"
        rec = run_trajectory(params, init, index=0)
        run.note_record(f"fig3 {label}", rec)
        write_record(run.path(f"record_{label}.csv"), rec)
        sig, sbar = rec.sigma, rec.sigma_bar
        write_table(run.path(f"sigma_{label}.csv"), ("t", "sigma", "sigma_bar"),
                    [(t + 1, sig[t], sbar[t]) for t in range(rec.n_kicks)],
                    {"t": "kicks", "sigma": "1", "sigma_bar": "1"}, params.fingerprint(),
                    {"initial": init.to_dict()})
        last = max(1, rec.n_kicks // 3)
        summary[label] = {"gamma": float(gamma), "initial": init.to_dict(),
                          "n_basis": params.n_basis, "initial_sigma": rec.initial_sigma,
                          "plateau": rec.plateau(last), "plateau_last": last}
        data[label] = rec
    return run.finish(summary, data, {"plateau": "mean of sigma_bar over the final third"})


# ---------------------------------------------------------------------------
# fig4: gamma scan


def _fig4_unit(args):
    params, initial, indices, last = args
    prop = Propagator(params)
    out = []
    for i in indices:
        try:
            rec = run_trajectory(params, initial, index=i, propagator=prop)
        except TruncationError as exc:
            out.append((i, None, 0, 0, float(exc.edge_probability or 1.0)))
            continue
        out.append((i, rec.plateau(last), int(rec.jumps_l1.sum()), int(rec.jumps_l2.sum()),
                    float(rec.edge_probability.max())))
    return params, out


def _run_cells(cells, initial, M, last, threads, chunk=8):
    work = [(p, initial, list(range(s, min(s + chunk, M))), last)
            for p in cells for s in range(0, M, chunk)]
    if threads == 1:
        parts = [_fig4_unit(w) for w in work]
    else:
        with ProcessPoolExecutor(max_workers=min(threads, os.cpu_count() or 1)) as ex:
            parts = list(ex.map(_fig4_unit, work))
    by_cell = {}
    for params, rows in parts:
        by_cell.setdefault(params, {}).update({r[0]: r for r in rows})
    return {p: [rows[i] for i in sorted(rows)] for p, rows in by_cell.items()}


def run_fig4(config: CampaignConfig) -> CampaignResult:
    """sigma_bar plateau over gamma x hbar cells, plus the integrable row.

    Each cell starts from the basis size of :func:`basis_for`. A cell in which
    any trajectory trips the truncation guard is rerun once on a doubled
    basis; if it trips again the cell is reported as basis-limited.
    """
    run = _Run(config)
    base = config.run_params
    opts = config.options
    last = int(opts.get("plateau_last", 100))
    M = config.M
    keys = [(base.K, h, g) for h in config.hbars for g in config.gammas]
    if opts.get("integrable_K") is not None:
        kint = float(opts["integrable_K"])
        hint = float(opts.get("integrable_hbar", 0.012))
        keys += [(kint, hint, g) for g in config.gammas]
    cell_params = {k: _sized(base.replace(K=k[0], hbar=k[1], gamma=k[2])) for k in keys}
    results = _run_cells(list(cell_params.values()), config.initial, M, last, config.threads)
    retry = [k for k in keys if any(r[1] is None for r in results[cell_params[k]])]
    retried = {}
    if retry:
        for k in retry:
            p = cell_params[k]
            cell_params[k] = p.replace(n_basis=2 * p.n_basis)
            retried[k] = p.n_basis
        results.update(_run_cells([cell_params[k] for k in retry], config.initial, M, last,
                                  config.threads))
    rows, scaled, cells = [], [], {}
    for k in keys:
        p = cell_params[k]
        res = results[p]
        for i, plat, j1, j2, edge in res:
            run.seeds.append({"run": f"fig4 K={_tag(k[0])} hbar={_tag(k[1])} "
                                     f"gamma={_tag(k[2])}",
                              "seed": p.seed, "index": i, "fingerprint": p.fingerprint()})
            run.note_stats(j1, j2, edge)
        limited = any(r[1] is None for r in res)
        vals = np.array([r[1] for r in res if r[1] is not None], dtype=np.float64)
        mean = float(vals.mean()) if vals.size and not limited else math.nan
        se = float(vals.std(ddof=1) / math.sqrt(vals.size)) if vals.size > 1 and not limited \
            else math.nan
        root = math.sqrt(k[1])
        rows.append((k[0], k[1], k[2], p.n_basis, M, mean, se, int(limited)))
        scaled.append((k[0], k[1], k[2], p.n_basis, M, mean / root, se / root, int(limited)))
        cells[k] = {"K": k[0], "hbar": k[1], "gamma": k[2], "n_basis": p.n_basis,
                    "sigma_bar": mean, "se": se, "scaled": mean / root,
                    "basis_limited": limited, "retried_from": retried.get(k),
                    "fingerprint": p.fingerprint()}
    cols = ("K", "hbar", "gamma", "n_basis", "M", "value", "se", "basis_limited")
    units = {"K": "1", "hbar": "1", "gamma": "1", "n_basis": "levels", "M": "trajectories",
             "value": "1", "se": "1", "basis_limited": "flag"}
    prints = sorted(c["fingerprint"] for c in cells.values())
    campaign = hashlib.sha256(",".join(prints).encode()).hexdigest()[:16]
    meta = {"plateau_last": last, "cells": {f"{c['K']}/{c['hbar']}/{c['gamma']}":
                                            c["fingerprint"] for c in cells.values()}}
    write_table(run.path("fig4_sigma_bar.csv"), cols, rows, units, campaign,
                {**meta, "quantity": "sigma_bar"})
    write_table(run.path("fig4_scaled.csv"), cols, scaled, units, campaign,
                {**meta, "quantity": "sigma_bar / sqrt(hbar)"})
    summary = {"cells": [cells[k] for k in keys], "plateau_last": last, "M": M}
    return run.finish(summary, {"cells": cells},
                      {"plateau": PLATEAU_NOTE.format(last=last), "regime": REGIME_NOTE})


def fig4_value(result: CampaignResult, K: float, hbar: float, gamma: float, scaled=False):
    for (k, h, g), c in result.data["cells"].items():
        if math.isclose(k, K) and math.isclose(h, hbar) and math.isclose(g, gamma):
            return c["scaled"] if scaled else c["sigma_bar"]
    raise KeyError((K, hbar, gamma))


# ---------------------------------------------------------------------------
# oracle and classical campaigns


def run_oracle_check(config: CampaignConfig) -> CampaignResult:
    run = _Run(config)
    params = config.run_params
    psi0 = config.initial.build(params)
    factor = int(config.options.get("M_factor", 4))
    summary, data, rows = {}, {}, []
    for M in (config.M, factor * config.M):
        cmp = compare_unraveling(params, M, psi0, threads=config.threads)
        rows += [(t + 1, d, M) for t, d in enumerate(cmp.distances)]
        summary[f"M={M}"] = {"M": M, "max_distance": cmp.max_distance}
        data[M] = cmp
        run.seeds.append({"run": f"oracle M={M}", "seed": params.seed, "index": f"0..{M - 1}",
                          "fingerprint": params.fingerprint()})
    write_table(run.path("trace_distance.csv"), ("t", "distance", "M"), rows,
                {"t": "kicks", "distance": "1", "M": "trajectories"}, params.fingerprint())
    small, large = summary[f"M={config.M}"], summary[f"M={factor * config.M}"]
    summary["ratio"] = small["max_distance"] / large["max_distance"]
    return run.finish(summary, data)


def run_classical(config: CampaignConfig) -> CampaignResult:
    run = _Run(config)
    params = config.run_params
    opts = config.options
    n_iter = int(opts.get("n_iter", 1_000_000))
    transient = int(opts.get("transient", 1000))
    n_cond = int(opts.get("n_conditions", 10))
    n_pts = int(opts.get("attractor_points", 10_000))
    phase = opts.get("phase", "iterate")
    rows, summary, data = [], {}, {}
    for k, gamma in enumerate(config.gammas or (params.gamma,)):
        rng = trajectory_rng(params.seed, k, STREAM_CLASSICAL)
        res = lyapunov(params.K, gamma, n_iter, transient, rng, n_cond, strict=False)
        rows.append((params.K, gamma, res.value, res.std, n_iter))
        summary[_tag(gamma)] = {"K": params.K, "gamma": gamma, "lyapunov": res.value,
                                "std": res.std}
        data[gamma] = {"lyapunov": res}
        if gamma > 0.0:
            pts = attractor_sample(params.K, gamma, n_pts, rng=rng, phase=phase)
            write_table(run.path(f"attractor_g{_tag(gamma)}.csv"), ("t", "x", "p"),
                        [(i + 1, x, p) for i, (x, p) in enumerate(pts)], SECTION_UNITS, "",
                        {"K": params.K, "gamma": gamma, "phase": phase})
            data[gamma]["attractor"] = pts
        run.seeds.append({"run": f"classical gamma={_tag(gamma)}", "seed": params.seed,
                          "index": k, "fingerprint": ""})
    write_table(run.path("lyapunov.csv"), ("K", "gamma", "lyapunov", "std", "n_iter"), rows,
                {"K": "1", "gamma": "1", "lyapunov": "1/kick", "std": "1/kick",
                 "n_iter": "kicks"})
    return run.finish(summary, data)


RUNNERS = {
    "fig1": run_fig1,
    "fig2": run_fig2,
    "fig3": run_fig3,
    "fig4": run_fig4,
    "oracle": run_oracle_check,
    "classical": run_classical,
}


def run_campaign(config: CampaignConfig) -> CampaignResult:
    return RUNNERS[config.kind](config)
