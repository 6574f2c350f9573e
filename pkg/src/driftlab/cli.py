"""Config-driven experiment harness.

Subcommands: classify | simulate | verify | sweep | urn, each taking
`--config <path>` plus optional `--seed N`, `--out DIR`, `--threads N`, and
(sweep only) `--svg`.  Configs are flat `key = value` lines; `#` starts a
comment; unknown or duplicate keys are rejected before any work starts.

Master seed resolution, highest precedence first: `--seed`, the config key
`master_seed`, then the environment variable DRIFTLAB_SEED.  Deterministic
subcommands (classify, verify, probe-free sweeps) need no seed.

Every completed run writes its output files plus `manifest.json` -- config
echo, tool version, resolved seed, sha256 per output, wall clock, exclusion
counts.  A manifest is written if and only if the run completed; rerunning
with the same config and seed reproduces every output byte for byte, for
any `--threads`.  Exit codes: 0 success, 2 config/validation error, 3 a
`verify` run whose region check found violations.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .engine import ReplicaPlan, run_first_exits, run_trajectories
from .kernels import DriftSpec, build_kernel, const_drift_kernel
from .lyapunov import Functional, Region, verify_region
from .phase import classify, region_grid
from .stats import (ESTIMATE_CSV_HEADER, doob_tail, exit_bound_check,
                    growth_exponent, hitting_curve, lil_crossing, wilson)
from .urn import UrnSpec, coupled_walk, run_urn, urn_rho, zero_return_census

SEED_ENV = "DRIFTLAB_SEED"


class ConfigError(ValueError):
    """Config syntax, unknown key, or parameter validation failure."""


# --- config parsing -------------------------------------------------------

def parse_config(text: str) -> dict:
    """Flat `key = value` lines, `#` comments, strict duplicate rejection."""
    out = {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {ln}: expected `key = value`")
        key, val = line.split("=", 1)
        key, val = key.strip(), val.strip()
        if not key or not val:
            raise ConfigError(f"line {ln}: empty key or value")
        if key in out:
            raise ConfigError(f"line {ln}: duplicate key {key!r}")
        out[key] = val
    return out


def _as_int(v):
    try:
        return int(v)
    except ValueError:
        raise ConfigError(f"expected an integer, got {v!r}") from None


def _as_float(v):
    try:
        x = float(v)
    except ValueError:
        raise ConfigError(f"expected a number, got {v!r}") from None
    if not math.isfinite(x):
        raise ConfigError(f"expected a finite number, got {v!r}")
    return x


def _as_str(v):
    return v


def _as_int_list(v):
    return [_as_int(p.strip()) for p in v.split(",") if p.strip()]


def _as_float_list(v):
    return [_as_float(p.strip()) for p in v.split(",") if p.strip()]


def _as_law(v):
    """Discrete law `value:prob, value:prob, ...`."""
    law = []
    for part in v.split(","):
        part = part.strip()
        if ":" not in part:
            raise ConfigError(f"a_law entries are value:prob, got {part!r}")
        val, prob = part.split(":", 1)
        law.append((_as_float(val.strip()), _as_float(prob.strip())))
    return tuple(law)


_KERNEL_KEYS = {
    "variant": (_as_str, False),
    "rho": (_as_float, False),
    "alpha": (_as_float, False),
    "beta": (_as_float, False),
    "a": (_as_float, False),
    "hold": (_as_float, False),
    "const_c": (_as_float, False),
    "const_n": (_as_int, False),
}

_SCHEMAS = {
    ("classify", None): {
        "rho": (_as_float, True),
        "alpha": (_as_float, True),
        "beta": (_as_float, True),
        "second_moment_ratio": (_as_float, False),
        "tol": (_as_float, False),
    },
    ("simulate", "trajectories"): {
        **_KERNEL_KEYS,
        "x0": (_as_float, False),
        "t0": (_as_int, False),
        "horizon": (_as_int, True),
        "replicas": (_as_int, False),
    },
    ("simulate", "hitting"): {
        **_KERNEL_KEYS,
        "x0": (_as_float, False),
        "t0": (_as_int, False),
        "levels": (_as_float_list, True),
        "replicas": (_as_int, True),
        "cap": (_as_int, True),
    },
    ("simulate", "lil"): {
        **_KERNEL_KEYS,
        "x0": (_as_float, False),
        "t0": (_as_int, False),
        "crossing_level": (_as_float, True),
        "horizons": (_as_int_list, True),
        "replicas": (_as_int, True),
    },
    ("simulate", "doob"): {
        **_KERNEL_KEYS,
        "x0": (_as_float, False),
        "t0": (_as_int, False),
        "x": (_as_float, True),
        "h": (_as_float, True),
        "b": (_as_float, True),
        "replicas": (_as_int, True),
    },
    ("simulate", "exit_bound"): {
        "c": (_as_float, True),
        "b2": (_as_float, False),
        "gamma": (_as_float, True),
        "a": (_as_float, False),
        "n": (_as_float, True),
        "replicas": (_as_int, True),
        "cap": (_as_int, True),
    },
    ("simulate", "growth"): {
        **_KERNEL_KEYS,
        "x0": (_as_float, False),
        "t0": (_as_int, False),
        "horizon": (_as_int, True),
        "replicas": (_as_int, True),
    },
    ("verify", None): {
        **_KERNEL_KEYS,
        "functional": (_as_str, True),
        "fn_nu": (_as_float, False),
        "fn_k": (_as_int, False),
        "fn_n": (_as_float, False),
        "fn_zeta": (_as_float, False),
        "want": (_as_str, False),
        "x_lo": (_as_int, True),
        "x_hi": (_as_int, True),
        "x_stride": (_as_int, False),
        "t_lo": (_as_int, True),
        "t_hi": (_as_int, False),
        "t_hi_x2": (_as_float, False),
        "t_stride": (_as_int, False),
    },
    ("sweep", None): {
        "rho": (_as_float, True),
        "alpha_lo": (_as_float, True),
        "alpha_hi": (_as_float, True),
        "beta_lo": (_as_float, True),
        "beta_hi": (_as_float, True),
        "resolution": (_as_int, True),
        "second_moment_ratio": (_as_float, False),
        "probe_replicas": (_as_int, False),
        "probe_level": (_as_float, False),
        "probe_cap": (_as_int, False),
    },
    ("urn", "census"): {
        "sigma": (_as_float, True),
        "a_value": (_as_float, False),
        "a_law": (_as_law, False),
        "w0": (_as_float, True),
        "b0": (_as_float, True),
        "horizon": (_as_int, True),
        "replicas": (_as_int, True),
        "checkpoints": (_as_int_list, False),
    },
    ("urn", "coupling"): {
        "sigma": (_as_float, True),
        "a_value": (_as_float, False),
        "a_law": (_as_law, False),
        "w0": (_as_float, True),
        "b0": (_as_float, True),
        "draws": (_as_int, True),
    },
}

_KINDS = {
    "simulate": ("trajectories", "hitting", "lil", "doob", "exit_bound",
                 "growth"),
    "urn": ("census", "coupling"),
}


def validate_config(subcommand: str, raw: dict) -> dict:
    """Type-check against the schema; reject unknown keys."""
    raw = dict(raw)
    kind = None
    if subcommand in _KINDS:
        kind = raw.pop("kind", None)
        if kind not in _KINDS[subcommand]:
            raise ConfigError(
                f"{subcommand} needs kind = one of {_KINDS[subcommand]}, "
                f"got {kind!r}")
    schema = _SCHEMAS[(subcommand, kind)]
    cfg = {"kind": kind} if kind else {}
    seen = set()
    for key, val in raw.items():
        if key in ("master_seed", "out"):
            cfg[key] = _as_int(val) if key == "master_seed" else val
            continue
        if key not in schema:
            raise ConfigError(f"unknown key {key!r} for {subcommand}"
                              + (f"/{kind}" if kind else ""))
        conv, _ = schema[key]
        cfg[key] = conv(val)
        seen.add(key)
    missing = [k for k, (_, req) in schema.items() if req and k not in seen]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")
    return cfg


def _kernel_from(cfg: dict):
    variant = cfg.get("variant", "LatticeNN")
    a = cfg.get("a", 1.0)
    if variant == "ConstDriftTest":
        for k in ("rho", "alpha", "beta"):
            if k in cfg:
                raise ConfigError(
                    f"{k} is implied by const_c/const_n for ConstDriftTest")
        if "const_c" not in cfg or "const_n" not in cfg:
            raise ConfigError("ConstDriftTest needs const_c and const_n")
        return const_drift_kernel(cfg["const_c"], cfg["const_n"], a=a)
    for k in ("rho", "alpha", "beta"):
        if k not in cfg:
            raise ConfigError(f"kernel needs {k}")
    spec = DriftSpec(cfg["rho"], cfg["alpha"], cfg["beta"])
    kwargs = {}
    if variant == "LazyLattice" and "hold" in cfg:
        kwargs["hold"] = cfg["hold"]
    return build_kernel(spec, a, variant, **kwargs)


def _start(cfg: dict, kernel) -> tuple:
    x0 = cfg.get("x0", float(math.ceil(kernel.a)) + 1.0)
    t0 = cfg.get("t0", 100)
    return x0, t0


def _urn_spec(cfg: dict) -> UrnSpec:
    if ("a_value" in cfg) == ("a_law" in cfg):
        raise ConfigError("give exactly one of a_value (deterministic A) "
                          "or a_law (value:prob list)")
    law = (((cfg["a_value"], 1.0),) if "a_value" in cfg else cfg["a_law"])
    return UrnSpec(cfg["sigma"], law, cfg["w0"], cfg["b0"])


# --- CSV / JSON / SVG builders (pure, reused by tests) --------------------

def hitting_csv(curve) -> str:
    lines = ["level,point,lo,hi,n,capped_fraction"]
    for lv, est, cf in zip(curve.levels, curve.estimates,
                           curve.capped_fraction):
        lines.append(f"{lv!r},{est.point!r},{est.lo!r},{est.hi!r},"
                     f"{est.n},{cf!r}")
    return "\n".join(lines) + "\n"


def census_csv(census) -> str:
    lines = ["replica,return_count,last_return_time,horizon"]
    counts = census.return_count
    lasts = census.last_return_time
    for r in range(counts.shape[0]):
        lines.append(f"{r},{counts[r]},{lasts[r]},{census.horizon}")
    return "\n".join(lines) + "\n"


def estimates_csv(rows) -> str:
    """rows: (experiment id, parameter string, EstimateCI) triples."""
    lines = [ESTIMATE_CSV_HEADER]
    for experiment, params, est in rows:
        lines.append(est.csv_row(experiment, params))
    return "\n".join(lines) + "\n"


def samples_csv(batch) -> str:
    lines = ["replica,t,x"]
    for r in range(batch.samples.shape[0]):
        for g, t in enumerate(batch.sample_ts):
            lines.append(f"{r},{t},{float(batch.samples[r, g])!r}")
    return "\n".join(lines) + "\n"


def sweep_csv(alphas, betas, labels, rho, probes=None) -> str:
    header = "alpha,beta,rho,verdict,justification"
    if probes is not None:
        header += ",probe_estimate,probe_lo,probe_hi"
    lines = [header]
    for i in range(len(betas)):
        for j in range(len(alphas)):
            lab = labels[i][j]
            row = (f"{float(alphas[j])!r},{float(betas[i])!r},{rho!r},"
                   f"{lab.verdict},{lab.justification}")
            if probes is not None:
                p = probes[i][j]
                row += f",{p[0]!r},{p[1]!r},{p[2]!r}" if p else ",,,"
            lines.append(row)
    return "\n".join(lines) + "\n"


_VERDICT_COLORS = (
    ("Recurrent", "#2166ac"),
    ("Transient", "#b2182b"),
    ("OpenProblem", "#f6c90e"),
    ("CriticalBoundary", "#8c8c8c"),
    ("Invalid", "#e8e8e8"),
)


def sweep_svg(alphas, betas, labels, rho) -> str:
    """Self-contained verdict heatmap: one rect per cell, fixed colors."""
    colors = dict(_VERDICT_COLORS)
    ncols, nrows = len(alphas), len(betas)
    cell = max(4, 600 // max(ncols, nrows))
    ml, mt, mr, mb = 64, 40, 190, 44
    width = ml + cell * ncols + mr
    height = mt + cell * nrows + mb
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{ml}" y="{mt - 16}" font-family="sans-serif" '
        f'font-size="15">Phase verdicts, rho = {rho!r}</text>',
    ]
    for i in range(nrows):          # beta ascending -> rows bottom-up
        y = mt + cell * (nrows - 1 - i)
        for j in range(ncols):
            c = colors[labels[i][j].verdict]
            parts.append(f'<rect x="{ml + cell * j}" y="{y}" width="{cell}" '
                         f'height="{cell}" fill="{c}"/>')
    ax = 'font-family="sans-serif" font-size="12"'
    parts += [
        f'<text x="{ml}" y="{height - 14}" {ax}>'
        f'alpha: {float(alphas[0])!r}</text>',
        f'<text x="{ml + cell * ncols}" y="{height - 14}" {ax} '
        f'text-anchor="end">{float(alphas[-1])!r}</text>',
        f'<text x="{ml - 8}" y="{mt + cell * nrows}" {ax} '
        f'text-anchor="end">beta: {float(betas[0])!r}</text>',
        f'<text x="{ml - 8}" y="{mt + 10}" {ax} '
        f'text-anchor="end">{float(betas[-1])!r}</text>',
    ]
    lx = ml + cell * ncols + 16
    for idx, (verdict, color) in enumerate(_VERDICT_COLORS):
        ly = mt + 22 * idx
        parts.append(f'<rect x="{lx}" y="{ly}" width="14" height="14" '
                     f'fill="{color}"/>')
        parts.append(f'<text x="{lx + 20}" y="{ly + 12}" {ax}>'
                     f'{verdict}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# --- experiment runners ---------------------------------------------------

def _run_classify(cfg, seed, threads):
    kwargs = {}
    if "second_moment_ratio" in cfg:
        kwargs["second_moment_ratio"] = cfg["second_moment_ratio"]
    if "tol" in cfg:
        kwargs["tol"] = cfg["tol"]
    label = classify(cfg["rho"], cfg["alpha"], cfg["beta"], **kwargs)
    doc = {"rho": cfg["rho"], "alpha": cfg["alpha"], "beta": cfg["beta"],
           "verdict": label.verdict, "justification": label.justification,
           "detail": label.detail}
    return {"classify.json": json.dumps(doc, sort_keys=True) + "\n"}, {}, False


def _require_seed(seed):
    if seed is None:
        raise ConfigError("this experiment draws random numbers: give a "
                          f"master seed (--seed, master_seed key, or {SEED_ENV})")
    return seed


def _run_simulate(cfg, seed, threads):
    kind = cfg["kind"]
    if kind == "exit_bound":
        seed = _require_seed(seed)
        rep = exit_bound_check(cfg["c"], cfg.get("b2", 1.0), cfg["gamma"],
                               cfg.get("a", 2.0), cfg["n"], cfg["replicas"],
                               seed, cfg["cap"], threads=threads)
        params = (f"c={cfg['c']!r};gamma={cfg['gamma']!r};n={cfg['n']!r};"
                  f"nu={rep.nu!r};k={rep.k};passed={rep.passed}")
        files = {"exit_bound.csv":
                 estimates_csv([("exit_bound", params, rep.estimate)])}
        return files, {"capped": rep.capped}, False
    kernel = _kernel_from(cfg)
    x0, t0 = _start(cfg, kernel)
    if kind == "trajectories":
        seed = _require_seed(seed)
        plan = ReplicaPlan(seed, cfg.get("replicas", 1))
        batch = run_trajectories(kernel, x0, t0, cfg["horizon"], plan,
                                 threads=threads)
        return {"samples.csv": samples_csv(batch)}, {}, False
    if kind == "hitting":
        seed = _require_seed(seed)
        curve = hitting_curve(kernel, kernel.a, cfg["levels"], x0, t0,
                              cfg["replicas"], seed, cfg["cap"],
                              threads=threads)
        excl = {"unreliable": int(curve.unreliable)}
        return {"hitting.csv": hitting_csv(curve)}, excl, False
    if kind == "lil":
        seed = _require_seed(seed)
        ests = lil_crossing(kernel, cfg["crossing_level"], cfg["horizons"],
                            x0, t0, cfg["replicas"], seed, threads=threads)
        rows = [("lil",
                 f"crossing_level={cfg['crossing_level']!r};horizon={T}",
                 est) for T, est in zip(cfg["horizons"], ests)]
        return {"lil.csv": estimates_csv(rows)}, {}, False
    if kind == "doob":
        seed = _require_seed(seed)
        est, bound = doob_tail(kernel, cfg["x"], cfg["h"], cfg["b"], x0, t0,
                               cfg["replicas"], seed, threads=threads)
        params = (f"x={cfg['x']!r};h={cfg['h']!r};b={cfg['b']!r};"
                  f"bound={bound!r}")
        return {"doob.csv": estimates_csv([("doob", params, est)])}, {}, False
    # growth
    seed = _require_seed(seed)
    plan = ReplicaPlan(seed, cfg["replicas"])
    batch = run_trajectories(kernel, x0, t0, cfg["horizon"], plan,
                             threads=threads)
    est = growth_exponent(batch)
    params = f"horizon={cfg['horizon']};window=last_decade"
    files = {"growth.csv": estimates_csv([("growth", params, est)])}
    return files, {"excluded": est.exclusions}, False


def _run_verify(cfg, seed, threads):
    kernel = _kernel_from(cfg)
    fn_kwargs = {}
    if "fn_nu" in cfg:
        fn_kwargs["nu"] = cfg["fn_nu"]
    if "fn_k" in cfg:
        fn_kwargs["k"] = cfg["fn_k"]
    if "fn_n" in cfg:
        fn_kwargs["n"] = cfg["fn_n"]
    if "fn_zeta" in cfg:
        fn_kwargs["zeta"] = cfg["fn_zeta"]
    try:
        functional = Functional(cfg["functional"], **fn_kwargs)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    if ("t_hi" in cfg) == ("t_hi_x2" in cfg):
        raise ConfigError("give exactly one of t_hi (constant) or "
                          "t_hi_x2 (coefficient of x^2)")
    if "t_hi" in cfg:
        t_hi = cfg["t_hi"]
        hi_desc = f"t<={t_hi}"
    else:
        coeff = cfg["t_hi_x2"]
        t_hi = lambda x: int(coeff * x * x)  # noqa: E731
        hi_desc = f"t<={coeff!r}*x^2"
    region = Region(
        description=(f"x in [{cfg['x_lo']},{cfg['x_hi']}] step "
                     f"{cfg.get('x_stride', 1)}, t>={cfg['t_lo']} {hi_desc} "
                     f"step {cfg.get('t_stride', 1)}"),
        x_lo=cfg["x_lo"], x_hi=cfg["x_hi"], t_lo=cfg["t_lo"], t_hi=t_hi,
        x_stride=cfg.get("x_stride", 1), t_stride=cfg.get("t_stride", 1))
    try:
        report = verify_region(functional, kernel, region,
                               cfg.get("want", "<=0"))
    except ValueError as e:
        raise ConfigError(str(e)) from None
    failed = len(report.violations) > 0
    return {"verify.json": report.to_json() + "\n"}, {}, failed


def _run_sweep(cfg, seed, threads, svg):
    if cfg["resolution"] > 2001:
        raise ConfigError("resolution capped at 2001 per axis")
    kwargs = {}
    if "second_moment_ratio" in cfg:
        kwargs["second_moment_ratio"] = cfg["second_moment_ratio"]
    try:
        alphas, betas, labels = region_grid(
            (cfg["alpha_lo"], cfg["alpha_hi"]),
            (cfg["beta_lo"], cfg["beta_hi"]),
            cfg["resolution"], cfg["rho"], **kwargs)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    nrep = cfg.get("probe_replicas", 0)
    probes = None
    if nrep:
        if not 0 < nrep <= 100_000:
            raise ConfigError("probe_replicas must lie in [1, 100000]")
        seed = _require_seed(seed)
        level = cfg.get("probe_level", 64.0)
        cap = cfg.get("probe_cap", 100_000)
        probes = []
        cell_index = 0
        for i in range(len(betas)):
            row = []
            for j in range(len(alphas)):
                lab = labels[i][j]
                cell_index += 1
                if lab.verdict == "Invalid":
                    row.append(None)
                    continue
                kern = build_kernel(DriftSpec(cfg["rho"], alphas[j],
                                              betas[i]), 1.0, "LatticeNN")
                batch = run_first_exits(
                    kern, 2.0, 100, 1.0, level, cap, ReplicaPlan(seed, nrep),
                    stream_offset=cell_index * nrep, threads=threads)
                est = wilson(int(batch.exited_low.sum()), nrep)
                row.append((est.point, est.lo, est.hi))
            probes.append(row)
    files = {"sweep.csv": sweep_csv(alphas, betas, labels, cfg["rho"],
                                    probes)}
    if svg:
        files["sweep.svg"] = sweep_svg(alphas, betas, labels, cfg["rho"])
    return files, {}, False


def _run_urn(cfg, seed, threads):
    spec = _urn_spec(cfg)
    if cfg["kind"] == "coupling":
        seed = _require_seed(seed)
        traj = run_urn(spec, cfg["draws"], seed)
        xs, rec = coupled_walk(traj)
        doc = {"rho": urn_rho(spec), "draws": cfg["draws"],
               "drift_identity_residual": rec.drift_identity_residual,
               "step_magnitudes": list(rec.step_magnitudes),
               "final_x": rec.x}
        return {"coupling.json": json.dumps(doc, sort_keys=True) + "\n"}, {}, False
    seed = _require_seed(seed)
    census = zero_return_census(spec, cfg["horizon"], cfg["replicas"], seed,
                                checkpoints=cfg.get("checkpoints"),
                                threads=threads)
    return {"census.csv": census_csv(census)}, {}, False


_RUNNERS = {
    "classify": _run_classify,
    "simulate": _run_simulate,
    "verify": _run_verify,
    "urn": _run_urn,
}


# --- driver ---------------------------------------------------------------

def run_experiment(subcommand: str, config_path: str, *, seed=None,
                   out_dir: str = ".", svg: bool = False,
                   threads: int = 1) -> int:
    """Parse, validate, run, write outputs + manifest. Returns exit code."""
    started = time.time()
    try:
        with open(config_path, encoding="utf-8") as fh:
            raw = parse_config(fh.read())
        cfg = validate_config(subcommand, raw)
        if seed is None:
            seed = cfg.get("master_seed")
        if seed is None and SEED_ENV in os.environ:
            seed = _as_int(os.environ[SEED_ENV])
        out_dir = out_dir if out_dir != "." else cfg.get("out", ".")
        if threads < 1:
            raise ConfigError("threads must be >= 1")
        if subcommand == "sweep":
            files, exclusions, failed = _run_sweep(cfg, seed, threads, svg)
        else:
            files, exclusions, failed = _RUNNERS[subcommand](cfg, seed,
                                                             threads)
    except (ConfigError, ValueError, RuntimeError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    os.makedirs(out_dir, exist_ok=True)
    written = []
    try:
        checksums = {}
        for name, content in sorted(files.items()):
            path = os.path.join(out_dir, name)
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(content)
            written.append(path)
            checksums[name] = hashlib.sha256(
                content.encode("utf-8")).hexdigest()
        manifest = {
            "version": __version__,
            "subcommand": subcommand,
            "master_seed": seed,
            "config": raw,
            "outputs": checksums,
            "wall_clock_seconds": round(time.time() - started, 3),
            "exclusions": exclusions,
        }
        path = os.path.join(out_dir, "manifest.json")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    except BaseException:
        for path in written:
            try:
                os.remove(path)
            except OSError:
                pass
        raise
    return 3 if failed else 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="driftlab",
        description="Random-walk drift experiments: classification, "
                    "simulation, Lyapunov region checks, phase sweeps, urns.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in ("classify", "simulate", "verify", "sweep", "urn"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True,
                       help="flat key=value config file")
        p.add_argument("--seed", type=int, default=None,
                       help="master seed (overrides config and environment)")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--threads", type=int, default=1)
        if name == "sweep":
            p.add_argument("--svg", action="store_true",
                           help="also write a verdict heatmap")
    args = parser.parse_args(argv)
    return run_experiment(args.subcommand, args.config, seed=args.seed,
                          out_dir=args.out, svg=getattr(args, "svg", False),
                          threads=args.threads)


if __name__ == "__main__":
    sys.exit(main())
