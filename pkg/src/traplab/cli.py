"""``traplab`` command-line driver.

Every run writes its artifacts plus ``manifest.json`` into ``--out``.  CSV
files carry the validated configuration in their ``#`` header and point at
the manifest; wall time lives only in the manifest, so repeated runs with
the same config, seed and worker count give byte-identical CSVs.

Exit codes: 0 ok, 2 configuration error, 3 statistical check failed,
4 resource cap hit.
"""
import argparse
import configparser
import dataclasses
import platform
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .errors import CapExceededError, InsufficientDataError, ParameterError, WindowError
from .io import write_csv, write_json

EXIT_OK, EXIT_CONFIG, EXIT_CHECK, EXIT_CAP = 0, 2, 3, 4

SUBCOMMANDS = ("simulate-btm", "simulate-fin", "tails-btm", "tails-fin", "rayknight-check",
               "lemma-probe", "coupling-check", "scaling-check", "besq-selftest")


@dataclass
class ExperimentConfig:
    subcommand: str = "simulate-fin"
    alpha: float = 0.5
    t: float = 1.0
    x_grid: str = "0.25:5:20"
    n_rep: int = 10**4
    seed: int = 20240601
    workers: int = 1
    out: str = "runs"
    method: str = "jump_chain"
    epsilon: float = 0.01
    v_min: float = 1e-3
    L: float = 0.0  # 0 picks a window from t and the x grid
    h: float = 0.05
    delta: float = 1e-3
    regime_bound: float = 0.1
    a: float = 1.0
    n_list: str = "2,4"
    lam: float = 16.0

    def validate(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ParameterError(f"unknown subcommand {self.subcommand!r}")
        if not 0 < self.alpha < 1:
            raise ParameterError("alpha must lie in (0, 1)")
        for name in ("t", "epsilon", "v_min", "h", "delta", "regime_bound", "a", "lam"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"{name} must be positive")
        if self.n_rep < 1 or self.workers < 1:
            raise ParameterError("n_rep and workers must be at least 1")
        if self.L < 0:
            raise ParameterError("L must be nonnegative")
        self.grid()
        self.ns()
        return self

    def grid(self):
        try:
            lo, hi, steps = self.x_grid.split(":")
            g = np.linspace(float(lo), float(hi), int(steps))
        except ValueError as exc:
            raise ParameterError(f"x grid must be lo:hi:steps, got {self.x_grid!r}") from exc
        if g.size < 1 or np.any(g < 0):
            raise ParameterError("x grid must be nonempty and nonnegative")
        return g

    def ns(self):
        try:
            return [int(v) for v in self.n_list.split(",") if v.strip()]
        except ValueError as exc:
            raise ParameterError(f"n list must be comma separated integers: {self.n_list!r}") from exc

    def as_dict(self):
        return dataclasses.asdict(self)


# per-subcommand defaults layered over the dataclass defaults
DEFAULTS = {
    "simulate-btm": {"t": 100.0, "n_rep": 10**4},
    "simulate-fin": {"t": 1.0, "n_rep": 10**4},
    "tails-btm": {"t": 100.0, "x_grid": "1:10:10", "n_rep": 10**5},
    "tails-fin": {"t": 1.0, "x_grid": "0.25:5:20", "n_rep": 10**5, "v_min": 3e-3},
    "rayknight-check": {"n_rep": 10**4, "h": 0.05, "delta": 1e-3},
    "lemma-probe": {"n_rep": 10**5},
    "coupling-check": {"n_rep": 10**5},
    "scaling-check": {"n_rep": 10**4, "lam": 16.0},
    "besq-selftest": {"n_rep": 10**5},
}

_FLAGS = {
    "alpha": float, "t": float, "x_grid": str, "n_rep": int, "seed": int, "workers": int,
    "out": str, "method": str, "epsilon": float, "v_min": float, "L": float, "h": float,
    "delta": float, "regime_bound": float, "a": float, "n_list": str, "lam": float,
}
_FLAG_NAMES = {"v_min": "--vmin", "lam": "--lambda"}


def _flag(name):
    return _FLAG_NAMES.get(name, "--" + name.replace("_", "-"))


def defaults_for(subcommand):
    cfg = ExperimentConfig(subcommand=subcommand)
    for k, v in DEFAULTS.get(subcommand, {}).items():
        setattr(cfg, k, v)
    cfg.out = f"runs/{subcommand}"
    return cfg


def _coerce(name, raw):
    try:
        typ = _FLAGS[name]
        return typ(float(raw)) if typ is int else typ(raw)
    except KeyError as exc:
        raise ParameterError(f"unknown config key {name!r}") from exc
    except ValueError as exc:
        raise ParameterError(f"bad value for {name}: {raw!r}") from exc


def load_config(subcommand, path=None, overrides=None):
    """Defaults, then the INI file ([defaults] then [subcommand]), then flags."""
    cfg = defaults_for(subcommand)
    if path is not None:
        parser = configparser.ConfigParser()
        parser.optionxform = str
        if not parser.read(path):
            raise ParameterError(f"cannot read config file {path}")
        for section in ("defaults", subcommand):
            if parser.has_section(section):
                for key, raw in parser.items(section):
                    setattr(cfg, key, _coerce(key, raw))
    for key, val in (overrides or {}).items():
        if val is not None:
            setattr(cfg, key, val)
    return cfg.validate()


def print_defaults(stream=None):
    parser = configparser.ConfigParser()
    parser.optionxform = str
    for sub in SUBCOMMANDS:
        d = defaults_for(sub).as_dict()
        d.pop("subcommand")
        parser[sub] = {k: str(v) for k, v in d.items()}
    parser.write(stream or sys.stdout)


def set_workers(n):
    import numba
    n = max(1, min(int(n), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(n)
    return n


def _versions():
    import numba
    import scipy
    return {"traplab": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "numba": numba.__version__, "python": platform.python_version()}


# -- subcommand bodies: each returns (files, report, passed) ---------------------

def _meta(cfg, extra=None):
    # the output directory is where, not what: leaving it out keeps CSVs
    # byte-identical across destinations
    conf = cfg.as_dict()
    conf.pop("out")
    m = {"manifest": "manifest.json", "config": conf}
    m.update(extra or {})
    return m


def _cmd_simulate_btm(cfg, out, rng):
    from .btm import btm_positions
    x, n_ev, trunc = btm_positions(cfg.t, cfg.n_rep, rng, alpha=cfg.alpha, return_info=True)
    if trunc.any():
        raise CapExceededError("BTM replicas hit the event cap")
    files = [write_csv(out / "samples.csv", ["replica", "position", "events"],
                       zip(range(x.size), x, n_ev), _meta(cfg))]
    rep = {"mean": float(x.mean()), "var": float(x.var()), "mean_events": float(n_ev.mean())}
    return files, rep, True


def _cmd_simulate_fin(cfg, out, rng):
    from .fin import FinConfig, default_window, sample_fin
    L = cfg.L or default_window(cfg.alpha, cfg.t)
    fc = FinConfig(alpha=cfg.alpha, method=cfg.method, v_min=cfg.v_min, L=L,
                   epsilon=cfg.epsilon, h=cfg.h, delta=cfg.delta)
    s = sample_fin(fc, cfg.t, cfg.n_rep, rng)
    files = [write_csv(out / "samples.csv", ["replica", "position"],
                       zip(range(s.values.size), s.values), _meta(cfg, {"L": L}))]
    rep = {"mean": float(s.values.mean()), "var": float(s.values.var()),
           "edge_fraction": s.edge_fraction}
    return files, rep, True


def _tail_outputs(cfg, out, curve):
    from .stats import fit_tail_exponent
    cols = ["t", "x", "y", "k", "n", "p_hat", "ci_lo", "ci_hi"]
    files = [write_csv(out / "tailcurve.csv", cols, curve.table(),
                       _meta(cfg, {"curve": curve.meta, "regime": curve.regime}))]
    try:
        fit = fit_tail_exponent(curve.points())
        rep = fit.to_dict()
        passed = fit.r_squared >= 0.9 and fit.band_pass
    except InsufficientDataError as exc:
        rep = {"error": str(exc)}
        passed = False
    files.append(write_json(out / "fit.json", {"manifest": "manifest.json", "fit": rep,
                                                "curve_meta": curve.meta}))
    return files, rep, passed


def _cmd_tails_btm(cfg, out, rng):
    from .tails import estimate_tail_btm
    curve = estimate_tail_btm(cfg.alpha, cfg.t, cfg.grid(), cfg.n_rep, rng,
                              regime_bound=cfg.regime_bound, min_rep=1)
    return _tail_outputs(cfg, out, curve)


def _cmd_tails_fin(cfg, out, rng):
    from .tails import estimate_tail_fin
    curve = estimate_tail_fin(cfg.alpha, cfg.grid(), cfg.n_rep, cfg.method, rng,
                              v_min=cfg.v_min, L=cfg.L or None, epsilon=cfg.epsilon)
    return _tail_outputs(cfg, out, curve)


def _cmd_rayknight(cfg, out, rng):
    from .rayknight import rayknight_check
    rep = rayknight_check(cfg.a, cfg.n_rep, delta=cfg.delta, h=cfg.h, rng=rng)
    rows = [(r["x"], r["ks_D"], r["ks_crit"], r["ks_pass"], r["mean"], r["mean_oracle"],
             r["var"], r["var_ref"]) for r in rep["probes"]]
    files = [write_csv(out / "rayknight.csv",
                       ["x", "ks_D", "ks_crit", "ks_pass", "mean", "mean_oracle", "var",
                        "var_ref"], rows, _meta(cfg, {"absorption": rep["absorption"]}))]
    return files, rep, rep["passed"]


def _cmd_lemma(cfg, out, rng):
    from .rayknight import probe_lemma_G1
    reps = [probe_lemma_G1(n, cfg.alpha, cfg.a, cfg.n_rep, rng, v_min=cfg.v_min)
            for n in cfg.ns()]
    cols = ["n", "level", "horizon", "lhs", "lhs_se", "rhs", "rhs_se", "combined_se",
            "inconclusive", "passed"]
    files = [write_csv(out / "lemma.csv", cols, [[r[c] for c in cols] for r in reps],
                       _meta(cfg))]
    return files, {"probes": reps}, all(r["passed"] for r in reps)


def _cmd_coupling(cfg, out, rng):
    from .coupling import build_coupling_map, sample_subordinator, vague_convergence_check
    from .env import sample_stable_increment
    from .stats import ks_test
    cmap = build_coupling_map(cfg.alpha)
    cmap.to_csv(out / "coupling_map.csv")
    v = sample_stable_increment(1.0, cfg.alpha, rng, size=cfg.n_rep)
    tau = cmap.inverse(v)
    u = 1.0 - np.asarray(rng.random(cfg.n_rep))
    ks = ks_test(tau, u ** (-1.0 / cfg.alpha))
    vague = vague_convergence_check(sample_subordinator(cfg.alpha, rng=rng), cmap=cmap)
    files = [out / "coupling_map.csv",
             write_csv(out / "vague.csv", ["epsilon", "function", "lattice", "reference",
                                           "abs_diff", "rel_diff"],
                       [[r[c] for c in ("epsilon", "function", "lattice", "reference",
                                        "abs_diff", "rel_diff")] for r in vague["rows"]],
                       _meta(cfg))]
    final = [r for r in vague["rows"] if r["function"] == "triangle"][-1]["rel_diff"]
    rep = {"pareto_ks": ks, "vague_log_slope": vague["log_slope"], "final_rel_diff": final}
    passed = ks["passed"] and vague["log_slope"]["triangle"] <= 0 and final < 0.01
    return files, rep, passed


def _cmd_scaling(cfg, out, rng):
    from .tails import scaling_invariance_check
    reps = [scaling_invariance_check(cfg.alpha, cfg.lam, cfg.n_rep, mode, rng, v_min=cfg.v_min)
            for mode in ("derived", "paper_literal")]
    cols = ["mode", "exponent", "D", "critical_value", "passed", "ratio_to_critical"]
    files = [write_csv(out / "scaling.csv", cols, [[r[c] for c in cols] for r in reps],
                       _meta(cfg))]
    passed = reps[0]["passed"] and reps[1]["ratio_to_critical"] > 3.0
    return files, {"checks": reps}, passed


def _cmd_besq(cfg, out, rng):
    from .besq import besq_marginal, besq_transition
    from .stats import ks_test
    n = cfg.n_rep
    rows = []
    y = besq_transition(2, np.zeros(n), 1.0, rng)
    se = y.std(ddof=1) / np.sqrt(n)
    rows.append(("mean_dim2_from0", float(y.mean()), 2.0, float(se), abs(y.mean() - 2) < 3 * se))
    z = besq_transition(0, np.ones(n), 1.0, rng)
    p0 = np.exp(-0.5)
    se0 = np.sqrt(p0 * (1 - p0) / n)
    frac = float(np.mean(z == 0))
    rows.append(("absorb_dim0_y1", frac, float(p0), float(se0), abs(frac - p0) < 3 * se0))
    for dim in (0, 2):
        m = min(n, 10**4)
        e = besq_marginal(dim, 1.0, 1.0, m, "euler", rng)
        x = besq_marginal(dim, 1.0, 1.0, m, "exact", rng)
        k = ks_test(e, x)
        rows.append((f"euler_vs_exact_dim{dim}", k["D"], 0.0, k["critical_value"], k["passed"]))
    files = [write_csv(out / "besq.csv", ["check", "value", "target", "tolerance", "passed"],
                       rows, _meta(cfg))]
    return files, {"rows": rows}, all(r[-1] for r in rows)


_DISPATCH = {
    "simulate-btm": _cmd_simulate_btm, "simulate-fin": _cmd_simulate_fin,
    "tails-btm": _cmd_tails_btm, "tails-fin": _cmd_tails_fin,
    "rayknight-check": _cmd_rayknight, "lemma-probe": _cmd_lemma,
    "coupling-check": _cmd_coupling, "scaling-check": _cmd_scaling,
    "besq-selftest": _cmd_besq,
}


def run_experiment(cfg):
    """Run one validated config; returns ``(paths, report, passed)``."""
    cfg.validate()
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    workers = set_workers(cfg.workers)
    rng = np.random.default_rng(cfg.seed)
    start = time.perf_counter()
    files, report, passed = _DISPATCH[cfg.subcommand](cfg, out, rng)
    wall = time.perf_counter() - start
    write_json(out / "report.json", {"manifest": "manifest.json", "passed": passed,
                                     "report": report})
    files = [Path(f) for f in files] + [out / "report.json"]
    write_json(out / "manifest.json", {
        "config": cfg.as_dict(), "seed": cfg.seed, "workers": workers, "versions": _versions(),
        "wall_time_s": wall, "outputs": sorted(f.name for f in files), "passed": passed})
    return files + [out / "manifest.json"], report, passed


def build_parser():
    p = argparse.ArgumentParser(prog="traplab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("print-defaults", help="print every default as an INI file")
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="INI file with [defaults] and per-command sections")
        for key, typ in _FLAGS.items():
            sp.add_argument(_flag(key), dest=key, type=typ, default=None)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    if args.subcommand == "print-defaults":
        print_defaults()
        return EXIT_OK
    overrides = {k: getattr(args, k) for k in _FLAGS}
    try:
        cfg = load_config(args.subcommand, args.config, overrides)
        _, report, passed = run_experiment(cfg)
    except (ParameterError, WindowError, InsufficientDataError) as exc:
        print(f"traplab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CapExceededError as exc:
        print(f"traplab: resource cap hit: {exc}", file=sys.stderr)
        return EXIT_CAP
    print(f"traplab {args.subcommand}: {'ok' if passed else 'CHECK FAILED'} -> {cfg.out}")
    return EXIT_OK if passed else EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
