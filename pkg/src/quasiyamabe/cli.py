"""Command-line front end: ``quasiyamabe verify | construct | levelset``.

Options may also come from a YAML config file (``--config``); flags given on
the command line win over config values.  The config schema is ``CONFIG_SCHEMA``
below and unknown keys are rejected.  Reports are JSON documents

    {version, instance, checks: [{name, value, tolerance, pass, point, ...}],
     summary, timings}

and the exit code is 0 when every claim-bearing check passes, 1 when one
fails and 2 for usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema
import numpy as np
import yaml

from . import __version__, catalog
from .construct import (SAMPLE_R_MIN, STATUS_COLLAPSE, default_step, integrate_profile,
                        level_points, node_residuals, profile_to_instance, read_profile_csv,
                        round_trip_report, sample_points, theorem12_chain_check,
                        write_profile_csv)
from .errors import ConfigError, GeometryError
from .fields import expression_metric, expression_scalar, hyperspherical
from .levelset import levelset_report, project_to_level, prop24_checks, prop25_checks
from .quadrature import QuadratureGrid, sphere_volume, weighted_integrals
from .soliton import (IDENTITY_TOL, RICCI_IDENTITY_TOL, SOLITON_TOL, TRACE_TOL, ResidualReport,
                      SolitonInstance, SolitonParams, d_structure_report, lemma21_residuals,
                      prop22_residual, prop23_norm_check, report, ricci_identity_report,
                      soliton_report, theorem12_coefficient)

SUITES = ("algebraic", "soliton", "levelset", "quadrature")
COMMANDS = ("verify", "construct", "levelset")
MAX_SEED = 2 ** 63 - 1

_number = {"type": "number"}
_m_value = {"anyOf": [{"type": "number"}, {"type": "string"}]}
CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "command": {"enum": list(COMMANDS)},
        "catalog": {"type": "string"},
        "from_profile": {"type": "string"},
        "metric": {
            "type": "object",
            "additionalProperties": False,
            "required": ["dim"],
            "properties": {
                "dim": {"type": "integer"},
                "diag": {"type": "array", "items": {"type": ["string", "number"]}},
                "matrix": {"type": "array", "items": {"type": "array",
                                                      "items": {"type": ["string", "number"]}}},
                "conformal": {"type": ["string", "number"]},
                "box": {"type": "array", "items": {"type": "array", "items": _number,
                                                   "minItems": 2, "maxItems": 2}},
                "constants": {"type": "object", "additionalProperties": _number},
            },
        },
        "f": {"type": "string"},
        "m": _m_value,
        "rho": _number,
        "suite": {"anyOf": [{"enum": list(SUITES)},
                            {"type": "array", "items": {"enum": list(SUITES)}}]},
        "seed": {"type": "integer", "minimum": 0, "maximum": MAX_SEED},
        "points": {"type": "integer", "minimum": 1},
        "levels": {"type": "integer", "minimum": 1},
        "margin": {"type": "number", "minimum": 0, "exclusiveMaximum": 0.5},
        "tolerances": {
            "type": "object",
            "additionalProperties": False,
            "properties": {k: _number for k in
                           ("soliton", "identity", "trace", "ricci_identity", "chain", "quadrature")},
        },
        "quadrature": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"dim": {"type": "integer", "minimum": 2},
                           "resolution": {"type": "integer", "minimum": 2},
                           "f": {"type": "string"}, "u": {"type": "string"},
                           "v": {"type": "string"}},
        },
        "n": {"type": "integer"},
        "q": _number,
        "r_max": _number,
        "h": _number,
        "out": {"type": "string"},
        "csv": {"type": "string"},
    },
}

DEFAULT_TOLERANCES = {"soliton": SOLITON_TOL, "identity": IDENTITY_TOL, "trace": TRACE_TOL,
                      "ricci_identity": RICCI_IDENTITY_TOL, "chain": 1e-4, "quadrature": 1e-6}
DEFAULT_QUADRATURE = {"dim": 3, "resolution": 48, "f": "cos(x1)",
                      "u": "sin(x1)*cos(x2)", "v": "cos(x1)"}


@dataclass
class RunConfig:
    command: str
    catalog: str | None = None
    from_profile: str | None = None
    metric: dict | None = None
    f: str | None = None
    m: float | None = None
    rho: float | None = None
    suite: list = field(default_factory=lambda: ["algebraic", "soliton"])
    seed: int = 0
    points: int = 20
    levels: int = 3
    margin: float = 0.05
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    quadrature: dict = field(default_factory=lambda: dict(DEFAULT_QUADRATURE))
    n: int | None = None
    q: float = 0.0
    r_max: float = 1.5
    h: float | None = None
    out: str | None = None
    csv: str | None = None


# -- config handling -----------------------------------------------------------

def load_config(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid YAML: {exc}") from None
    data = {} if data is None else data
    validate_config(data)
    return data


def validate_config(data) -> None:
    try:
        jsonschema.validate(data, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(map(str, exc.absolute_path)) or "<root>"
        raise ConfigError(f"config error at {where}: {exc.message}") from None


def _suites(value) -> list[str]:
    items = [value] if isinstance(value, str) else list(value)
    out = []
    for item in items:
        for part in str(item).split(","):
            part = part.strip()
            if part not in SUITES:
                raise ConfigError(f"unknown suite {part!r}; choose from {', '.join(SUITES)}")
            if part not in out:
                out.append(part)
    return out


def resolve(command: str, options: dict) -> RunConfig:
    """Merge config-file values and flags into a checked RunConfig."""
    opts = {k: v for k, v in options.items() if v is not None}
    validate_config(opts)
    if "command" in opts and opts.pop("command") != command:
        raise ConfigError("config command does not match the command line")
    cfg = RunConfig(command)
    for key in ("catalog", "from_profile", "metric", "f", "out", "csv"):
        if key in opts:
            setattr(cfg, key, opts[key])
    if "m" in opts:
        cfg.m = catalog.parse_m(opts["m"])
    for key in ("rho", "q", "r_max", "margin"):
        if key in opts:
            setattr(cfg, key, float(opts[key]))
    if "h" in opts:
        cfg.h = float(opts["h"])
    for key in ("seed", "points", "levels", "n"):
        if key in opts:
            setattr(cfg, key, int(opts[key]))
    if "suite" in opts:
        cfg.suite = _suites(opts["suite"])
    elif command == "levelset":
        cfg.suite = ["levelset"]
    cfg.tolerances.update({k: float(v) for k, v in opts.get("tolerances", {}).items()})
    cfg.quadrature.update(opts.get("quadrature", {}))
    if not 0 <= cfg.seed <= MAX_SEED:
        raise ConfigError("seed must be a non-negative 64-bit integer")
    if cfg.points < 1 or cfg.levels < 1:
        raise ConfigError("points and levels must be positive")
    if command == "construct":
        if cfg.n is None:
            raise ConfigError("construct needs --n")
        if cfg.n < 3:
            raise ConfigError("construct needs n >= 3")
        if cfg.m is None:
            raise ConfigError("construct needs --m")
        if cfg.rho is None:
            cfg.rho = 0.0
        if not cfg.r_max > 0:
            raise ConfigError("r_max must be positive")
        if cfg.h is None:
            cfg.h = default_step(cfg.r_max)
        if not 0 < cfg.h <= 1e-3 * cfg.r_max * (1 + 1e-12):
            raise ConfigError("h must satisfy 0 < h <= 1e-3 * r_max")
    else:
        sources = [x is not None for x in (cfg.catalog, cfg.from_profile, cfg.metric)]
        needs_instance = command == "levelset" or any(s != "quadrature" for s in cfg.suite)
        if sum(sources) > 1:
            raise ConfigError("give only one of catalog, from_profile, metric")
        if needs_instance and not any(sources):
            raise ConfigError("an instance is required: --catalog, --from-profile or a config metric")
    return cfg


# -- instances and sampling ----------------------------------------------------

def build_instance(cfg: RunConfig):
    """(instance, profile or None) for verify/levelset."""
    if cfg.from_profile is not None:
        try:
            pr = read_profile_csv(cfg.from_profile)
        except OSError as exc:
            raise ConfigError(f"cannot read profile {cfg.from_profile}: {exc}") from None
        inst = profile_to_instance(pr, name=Path(cfg.from_profile).name)
        params = SolitonParams(pr.m if cfg.m is None else cfg.m, pr.rho if cfg.rho is None else cfg.rho)
        if cfg.f is not None:
            inst = SolitonInstance(inst.metric, expression_scalar(cfg.f, pr.n, box=inst.metric.box),
                                   params, inst.name)
        else:
            inst = SolitonInstance(inst.metric, inst.potential, params, inst.name)
        return inst, pr
    if cfg.metric is not None:
        spec = dict(cfg.metric)
        dim = int(spec.pop("dim"))
        if dim < 3:
            raise ConfigError("the metric dimension must be at least 3")
        box = tuple(tuple(b) for b in spec.pop("box")) if "box" in spec else None
        metric = expression_metric(dim, box=box, **spec)
        potential = expression_scalar(cfg.f or "0", dim, box=metric.box)
        params = SolitonParams(1.0 if cfg.m is None else cfg.m, 0.0 if cfg.rho is None else cfg.rho)
        return SolitonInstance(metric, potential, params, "config"), None
    name = cfg.catalog
    if name in catalog.PROFILE_INSTANCES:
        pr = catalog.warp_profile(name)
        return catalog.build(name, cfg.f, cfg.m, cfg.rho), pr
    return catalog.build(name, cfg.f, cfg.m, cfg.rho), None


def sample_instance(inst: SolitonInstance, pr, count: int, seed: int, margin: float) -> np.ndarray:
    if pr is not None:
        return sample_points(pr, count, seed)
    rng = np.random.default_rng(seed)
    box = np.asarray(inst.box, dtype=float)
    pad = margin * (box[:, 1] - box[:, 0])
    return rng.uniform(box[:, 0] + pad, box[:, 1] - pad, size=(count, inst.dim))


def usable_points(inst: SolitonInstance, pts: np.ndarray):
    """Points where the metric and potential evaluate, plus per-point error records."""
    try:
        inst.at(pts).cp, inst.at(pts).sj
        return pts, []
    except GeometryError:
        pass
    keep, errors = [], []
    for p in pts:
        try:
            st = inst.at(p[None])
            st.cp, st.sj
            keep.append(p)
        except GeometryError as exc:
            errors.append({"point": [float(x) for x in p], "error": type(exc).__name__,
                           "message": str(exc)})
    return np.asarray(keep).reshape(-1, inst.dim), errors


# -- suites --------------------------------------------------------------------

def suite_algebraic(inst, pts, tol: dict) -> tuple[list, int]:
    st = inst.at(pts)
    n = inst.dim
    out = []
    w = st.cp.weyl
    if n == 3:
        out.append(report("weyl_vanishes_n3", w, pts, tol["identity"], 4))
    trace = np.einsum("...ik,...ijkl->...jl", st.cp.ginv, w)
    out.append(report("weyl_trace_free", trace, pts, tol["identity"], 2))
    out.append(d_structure_report(inst, st, tol["trace"]))
    out.append(ricci_identity_report(inst, st, tol["ricci_identity"]))
    regular = st.regular_mask()
    skipped = int((~regular).sum())
    if regular.any():
        out.append(prop23_norm_check(inst, pts[regular], tol["identity"]))
    return out, skipped


def suite_soliton(inst, pts, tol: dict) -> list:
    st = inst.at(pts)
    t = tol["soliton"]
    return [soliton_report(inst, st, t), *lemma21_residuals(inst, st, t), prop22_residual(inst, st, t)]


def _level_sets(inst, pr, cfg: RunConfig):
    """Yield (anchor, points) per sampled level of f."""
    if pr is not None:
        lo = max(SAMPLE_R_MIN, inst.box[0][0])
        hi = inst.box[0][1] - (SAMPLE_R_MIN if pr.status == STATUS_COLLAPSE else 0.0)
        for k, r in enumerate(np.linspace(lo, hi, cfg.levels + 2)[1:-1]):
            pts = level_points(pr, float(r), cfg.points, cfg.seed + k)
            yield pts[0], pts
        return
    anchors = sample_instance(inst, None, cfg.levels, cfg.seed, max(cfg.margin, 0.2))
    for k, a in enumerate(anchors):
        yield a, project_to_level(inst, a, cfg.points, cfg.seed + k)


def _level_summary(inst, pts) -> dict:
    lv = levelset_report(inst, pts)
    sect = np.asarray(lv.sect)
    return {
        "H": np.asarray(lv.H).tolist(),
        "mean_curvature": float(np.mean(lv.H)),
        "lambda": float(np.mean(lv.lam)),
        "mu": float(np.mean(lv.mu)),
        "ric_mixed_max": float(np.abs(lv.ric_mixed).max()),
        "ric_tangent_deviation_max": float(np.max(lv.ric_tangent_dev)),
        "sectional_mean": float(sect.mean()),
        "sectional_spread": float(sect.max() - sect.min()),
    }


def suite_levelset(inst, pr, cfg: RunConfig) -> tuple[list, list, int]:
    """Per-level level-set checks plus descriptive summaries.

    When the sampled points do not satisfy the soliton equation the checks
    are informational: they carry no tolerance and no pass flag.
    """
    tol = cfg.tolerances["soliton"]
    checks, levels, skipped = [], [], 0
    sets = []
    for k, (anchor, pts) in enumerate(_level_sets(inst, pr, cfg)):
        pts, _ = usable_points(inst, pts)
        mask = inst.at(pts).regular_mask() if len(pts) else np.zeros(0, bool)
        skipped += int((~mask).sum())
        sets.append((k, anchor, pts[mask], int((~mask).sum())))
    populated = [p for _, _, p, _ in sets if len(p)]
    claim = bool(populated) and soliton_report(inst, np.concatenate(populated), tol).passed
    for k, anchor, pts, skip in sets:
        entry = {"level": k, "f": None, "points": pts.tolist(), "skipped": skip,
                 "mode": "claim" if claim else "informational"}
        if len(pts) >= 2:
            entry["f"] = float(inst.at(pts[:1]).sj.value[0])
            entry.update(_level_summary(inst, pts))
            for r in prop24_checks(inst, pts, tol) + prop25_checks(inst, pts, tol):
                item = r.to_dict()
                item["name"] = f"level{k}/{r.name}"
                if not claim:
                    item["tolerance"] = None
                    item["pass"] = None
                checks.append(item)
        levels.append(entry)
    return checks, levels, skipped


def suite_quadrature(cfg: RunConfig, m: float) -> list:
    q = cfg.quadrature
    n, res = int(q["dim"]), int(q["resolution"])
    box = hyperspherical(n).box
    f, u, v = (expression_scalar(q[k], n, box=box) for k in ("f", "u", "v"))
    t = weighted_integrals(n, f, u, v, m, res)
    tol = cfg.tolerances["quadrature"]
    origin = [0.0] * n
    vol = QuadratureGrid.sphere(n, res).volume()
    exact = sphere_volume(n)
    return [
        report("lemma31_self_adjoint", t["vLu"] - t["uLv"], [origin], tol, resolution=res),
        report("lemma31_integration_by_parts", t["vLu"] + t["grad"], [origin], tol, resolution=res),
        report("lemma31_total_L", t["Lu"], [origin], tol, resolution=res),
        report("quadrature_volume_relative", (vol - exact) / exact, [origin], 1e-8,
               volume=vol, exact=exact),
    ]


# -- commands ------------------------------------------------------------------

def _finish(instance: dict, checks: list, timings: dict, extra: dict | None = None,
            skipped: int = 0, errors: list | None = None) -> dict:
    """Assemble the report; informational checks (pass None) do not count."""
    items = [c.to_dict() if isinstance(c, ResidualReport) else c for c in checks]
    claims = [c for c in items if c.get("pass") is not None]
    failed = [c["name"] for c in claims if not c["pass"]]
    summary = {"pass": not failed, "checks": len(claims),
               "informational": len(items) - len(claims), "failed": failed,
               "skipped_points": skipped}
    if errors:
        summary["evaluation_errors"] = errors
    rep = {"version": __version__, "instance": instance, "checks": items, "summary": summary}
    if extra:
        rep.update(extra)
    rep["timings"] = timings
    return rep


def cmd_verify(cfg: RunConfig) -> dict:
    t0 = time.perf_counter()
    timings, checks, extra, skipped, errors = {}, [], {}, 0, []
    needs_instance = any(s != "quadrature" for s in cfg.suite)
    inst = pr = None
    description = {}
    if needs_instance:
        inst, pr = build_instance(cfg)
        description = inst.describe()
        pts, errors = usable_points(inst, sample_instance(inst, pr, cfg.points, cfg.seed, cfg.margin))
        if len(pts) == 0:
            raise ConfigError("no sample point could be evaluated")
    for suite in cfg.suite:
        ts = time.perf_counter()
        if suite == "algebraic":
            out, s = suite_algebraic(inst, pts, cfg.tolerances)
            checks += out
            skipped += s
        elif suite == "soliton":
            checks += suite_soliton(inst, pts, cfg.tolerances)
        elif suite == "levelset":
            out, levels, s = suite_levelset(inst, pr, cfg)
            checks += out
            extra["levels"] = levels
            skipped += s
        else:
            m = inst.params.m if inst is not None else (2.0 if cfg.m is None else cfg.m)
            checks += suite_quadrature(cfg, m)
            description.setdefault("quadrature", dict(cfg.quadrature, m=_json_m(m)))
        timings[suite] = time.perf_counter() - ts
    timings["total"] = time.perf_counter() - t0
    return _finish(description, checks, timings, extra, skipped, errors)


def cmd_levelset(cfg: RunConfig) -> dict:
    cfg.suite = ["levelset"]
    return cmd_verify(cfg)


def _json_m(m: float):
    return "INFINITY" if math.isinf(m) else m


def cmd_construct(cfg: RunConfig) -> dict:
    t0 = time.perf_counter()
    try:
        pr = integrate_profile(cfg.n, cfg.m, cfg.rho, cfg.q, cfg.r_max, cfg.h)
    except ValueError as exc:
        if isinstance(exc, GeometryError):
            raise
        raise ConfigError(str(exc)) from None
    timings = {"integrate": time.perf_counter() - t0}
    instance = {"n": cfg.n, "m": _json_m(cfg.m), "rho": cfg.rho, "q": cfg.q, "r_max": cfg.r_max,
                "h": cfg.h, "status": pr.status, "r_end": pr.r_hi, "nodes": len(pr.grid),
                "min_sectional_curvature": pr.min_sectional_curvature(),
                "theorem12_coefficient": theorem12_coefficient(cfg.n)}
    checks = []
    ts = time.perf_counter()
    for name, run in (("round_trip_soliton_equation",
                       lambda: round_trip_report(pr, cfg.points, cfg.seed, cfg.tolerances["soliton"])),
                      ("theorem12_chain", lambda: theorem12_chain_check(pr, cfg.tolerances["chain"]))):
        try:
            checks.append(run())
        except GeometryError as exc:
            checks.append({"name": name, "value": None, "tolerance": None, "pass": False,
                           "point": [], "detail": {"error": type(exc).__name__, "message": str(exc)}})
    timings["checks"] = time.perf_counter() - ts
    if cfg.csv:
        ts = time.perf_counter()
        write_profile_csv(pr, cfg.csv, node_residuals(pr))
        instance["csv"] = cfg.csv
        timings["csv"] = time.perf_counter() - ts
    timings["total"] = time.perf_counter() - t0
    return _finish(instance, checks, timings)


# -- entry point ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quasiyamabe",
                                     description="Numerical checks for quasi Yamabe gradient solitons.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="YAML config file; flags override its values")
        p.add_argument("--seed", type=int)
        p.add_argument("--points", type=int, help="sample points (per level for level sets)")
        p.add_argument("--m", help="the constant m (a number or INFINITY)")
        p.add_argument("--rho", type=float)
        p.add_argument("--out", help="write the JSON report here instead of stdout")

    def instance(p):
        p.add_argument("--catalog", help="catalog instance name")
        p.add_argument("--from-profile", dest="from_profile", help="profile CSV written by construct")
        p.add_argument("--f", help="potential expression in x1..xn (overrides the catalog potential)")
        p.add_argument("--levels", type=int)

    v = sub.add_parser("verify", help="run check suites on an instance")
    common(v)
    instance(v)
    v.add_argument("--suite", action="append", help=f"one of {', '.join(SUITES)}; repeatable")

    c = sub.add_parser("construct", help="integrate a rotationally symmetric profile")
    common(c)
    c.add_argument("--n", type=int)
    c.add_argument("--q", type=float, help="f''(0)")
    c.add_argument("--r-max", dest="r_max", type=float)
    c.add_argument("--h", type=float, help="radial step (at most 1e-3 * r_max)")
    c.add_argument("--csv", help="write the profile CSV here")

    lv = sub.add_parser("levelset", help="level-set geometry of the potential")
    common(lv)
    instance(lv)
    return parser


def _dump(rep: dict) -> str:
    return json.dumps(_clean(rep), indent=2)


def _clean(x):
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def run(argv=None) -> tuple[int, dict | None]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), None
    options = {}
    try:
        if args.config:
            options.update(load_config(args.config))
        flags = {k: v for k, v in vars(args).items() if k not in ("command", "config") and v is not None}
        options.update(flags)
        cfg = resolve(args.command, options)
        rep = {"verify": cmd_verify, "construct": cmd_construct, "levelset": cmd_levelset}[args.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2, None
    text = _dump(rep)
    if cfg.out:
        Path(cfg.out).write_text(text + "\n")
    else:
        print(text)
    return (0 if rep["summary"]["pass"] else 1), rep


def main(argv=None) -> int:
    return run(argv)[0]


if __name__ == "__main__":
    sys.exit(main())
