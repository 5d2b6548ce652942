"""Command-line front end: JSON configs in, CSV and JSON artifacts out."""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import tempfile
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .archimax import ArchimaxCopula
from .measures import (
    HALF_LINE,
    UNIT_INTERVAL,
    ExponentialWilliamson,
    MixedMeasure1D,
    validate_pickands,
    validate_williamson,
)

log = logging.getLogger("archimax")

EXIT_OK, EXIT_CONFIG, EXIT_VERIFY, EXIT_TOLERANCE = 0, 2, 3, 4
CONFIG_VERSION = 1
DEFAULTS = {"quadTol": 1e-7, "gridN": 64, "sampleN": 100_000, "seed": 0}
PICKANDS_BUILTINS = {
    "comonotone": {"atoms": [{"at": 0.5, "mass": 1.0}]},
    "independence": {"atoms": [{"at": 0.0, "mass": 0.5}, {"at": 1.0, "mass": 0.5}]},
}


class ConfigError(ValueError):
    """Raised for malformed or invalid configurations."""


# ----------------------------------------------------------------------------
# config parsing
# ----------------------------------------------------------------------------
def _num(v, where: str) -> float:
    if isinstance(v, bool):
        raise ConfigError(f"{where}: expected a number, got {v!r}")
    if isinstance(v, (int, float)):
        return float(v)
    if isinstance(v, str):
        try:
            return float(Fraction(v.strip()))
        except (ValueError, ZeroDivisionError):
            pass
    raise ConfigError(f"{where}: expected a number or fraction string, got {v!r}")


def parse_measure(obj, domain: str, where: str) -> MixedMeasure1D:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    unknown = set(obj) - {"atoms", "segments", "singular"}
    if unknown:
        raise ConfigError(f"{where}: unknown field(s) {sorted(unknown)}")
    atoms = []
    for i, a in enumerate(obj.get("atoms", [])):
        if not isinstance(a, dict) or set(a) != {"at", "mass"}:
            raise ConfigError(f"{where}.atoms[{i}]: expected {{\"at\", \"mass\"}}")
        atoms.append((_num(a["at"], f"{where}.atoms[{i}].at"), _num(a["mass"], f"{where}.atoms[{i}].mass")))
    segs = []
    for i, s in enumerate(obj.get("segments", [])):
        if not isinstance(s, dict) or set(s) != {"from", "to", "poly"}:
            raise ConfigError(f"{where}.segments[{i}]: expected {{\"from\", \"to\", \"poly\"}}")
        if not isinstance(s["poly"], list) or not s["poly"]:
            raise ConfigError(f"{where}.segments[{i}].poly: expected a nonempty list")
        lo = _num(s["from"], f"{where}.segments[{i}].from")
        hi = _num(s["to"], f"{where}.segments[{i}].to")
        if not lo < hi:
            raise ConfigError(f"{where}.segments[{i}]: need from < to")
        coeffs = [_num(c, f"{where}.segments[{i}].poly") for c in s["poly"]]
        segs.append((lo, hi, coeffs))
    sing = obj.get("singular")
    if sing is not None:
        if not isinstance(sing, dict) or set(sing) != {"from", "to", "mass"}:
            raise ConfigError(f"{where}.singular: expected {{\"from\", \"to\", \"mass\"}}")
        sing = tuple(_num(sing[k], f"{where}.singular.{k}") for k in ("from", "to", "mass"))
        if not sing[0] < sing[1]:
            raise ConfigError(f"{where}.singular: need from < to")
    return MixedMeasure1D(atoms, segs, sing, domain)


def measure_to_dict(m) -> dict:
    if isinstance(m, ExponentialWilliamson):
        return {"builtin": "exp"}
    out = {}
    if m.atoms:
        out["atoms"] = [{"at": a, "mass": w} for a, w in m.atoms]
    if m.segments:
        out["segments"] = [{"from": s.lo, "to": s.hi, "poly": list(s.coeffs)} for s in m.segments]
    if m.singular is not None:
        sp = m.singular
        out["singular"] = {"from": sp.lo, "to": sp.hi, "mass": sp.mass}
    return out


@dataclass
class RunConfig:
    williamson: object
    pickands: MixedMeasure1D
    quad_tol: float = DEFAULTS["quadTol"]
    grid_n: int = DEFAULTS["gridN"]
    sample_n: int = DEFAULTS["sampleN"]
    seed: int = DEFAULTS["seed"]

    def to_dict(self) -> dict:
        return {
            "version": CONFIG_VERSION,
            "williamson": measure_to_dict(self.williamson),
            "pickands": measure_to_dict(self.pickands),
            "quadTol": self.quad_tol,
            "gridN": self.grid_n,
            "sampleN": self.sample_n,
            "seed": self.seed,
        }

    def copula(self) -> ArchimaxCopula:
        return ArchimaxCopula.from_measures(self.williamson, self.pickands)


def parse_config(obj) -> RunConfig:
    """Validate a decoded JSON config and build the measures."""
    if not isinstance(obj, dict):
        raise ConfigError("config must be a JSON object")
    if obj.get("version") != CONFIG_VERSION:
        raise ConfigError(f"config.version must be {CONFIG_VERSION}")
    unknown = set(obj) - {"version", "williamson", "pickands", *DEFAULTS}
    if unknown:
        raise ConfigError(f"config: unknown field(s) {sorted(unknown)}")
    for key in ("williamson", "pickands"):
        if key not in obj:
            raise ConfigError(f"config.{key} is required")

    w = obj["williamson"]
    if isinstance(w, dict) and "builtin" in w:
        if w != {"builtin": "exp"}:
            raise ConfigError("williamson.builtin must be \"exp\"")
        gamma = ExponentialWilliamson()
    else:
        gamma = parse_measure(w, HALF_LINE, "williamson")
    p = obj["pickands"]
    if isinstance(p, dict) and "builtin" in p:
        if set(p) != {"builtin"} or p["builtin"] not in PICKANDS_BUILTINS:
            raise ConfigError("pickands.builtin must be \"independence\" or \"comonotone\"")
        p = PICKANDS_BUILTINS[p["builtin"]]
    theta = parse_measure(p, UNIT_INTERVAL, "pickands")

    problems = []
    for label, rep in (("williamson", validate_williamson(gamma)), ("pickands", validate_pickands(theta))):
        if not rep.ok:
            problems.append(f"{label}:\n{rep.describe()}")
    if problems:
        raise ConfigError("invalid measure\n" + "\n".join(problems))

    quad_tol = _num(obj.get("quadTol", DEFAULTS["quadTol"]), "quadTol")
    grid_n = obj.get("gridN", DEFAULTS["gridN"])
    sample_n = obj.get("sampleN", DEFAULTS["sampleN"])
    seed = obj.get("seed", DEFAULTS["seed"])
    for name, v in (("gridN", grid_n), ("sampleN", sample_n), ("seed", seed)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise ConfigError(f"{name} must be a nonnegative integer")
    if not quad_tol > 0:
        raise ConfigError("quadTol must be positive")
    return RunConfig(gamma, theta, quad_tol, grid_n, sample_n, seed)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    return parse_config(obj)


# ----------------------------------------------------------------------------
# output helpers
# ----------------------------------------------------------------------------
def _fmt(v) -> str:
    return format(float(v), ".17g")


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, (np.floating,)):
        return _jsonable(float(v))
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def write_atomic(path: str | None, text: str) -> None:
    """Write text to path via a temporary file and rename; stdout if path is None."""
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) if isinstance(v, (float, int, np.floating)) and not isinstance(v, bool) else v
                    for v in r])
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2) + "\n"


# ----------------------------------------------------------------------------
# artifact builders (also used by the acceptance tests)
# ----------------------------------------------------------------------------
def kendall_rows(c: ArchimaxCopula, grid: int):
    ts = set(np.linspace(0.0, 1.0, grid + 1).tolist())
    jumps = {t for t, m in c.kendall_jumps() if m > 0.0}
    rows = []
    for t in sorted(ts | jumps):
        if t in jumps:
            rows.append((t, c.kendall_cdf_left(t)))
        rows.append((t, c.kendall_cdf(t)))
    return rows


def levelset_rows(c: ArchimaxCopula, t: float, grid: int):
    return c.level_set(t, grid).rows()


def masses_summary(c: ArchimaxCopula) -> dict:
    return {
        "L": c.L,
        "R": c.R,
        "tauA": c.tau_A,
        "tau": c.tau(),
        "phiZero": None if math.isinf(c.phi_zero) else c.phi_zero,
        "strict": c.strict,
        "levelSetMasses": [{"t": t, "mass": m} for t, m in c.kendall_jumps()],
        "graphMasses": [{"t": r, "mass": c.graph_mass(r)} for r, _ in c.theta_graph_levels()],
    }


def eval_summary(c: ArchimaxCopula, x: float, y: float) -> dict:
    return {
        "cdf": c.cdf(x, y),
        "kernel_cdf": c.kernel_cdf(x, y),
        "in_support_envelope": c.in_support_envelope(x, y),
        "f0": c.f_zero(x),
        "gL": c.g_curve(c.L, x),
        "gR": c.g_curve(c.R, x),
    }


# ----------------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------------
def _unit(name):
    def conv(s):
        v = _num(s, name)
        if not 0.0 <= v <= 1.0:
            raise argparse.ArgumentTypeError(f"{name} must lie in [0, 1]")
        return v
    return conv


def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="archimax", description="Archimax copulas from Williamson and Pickands measures.")
    ap.add_argument("--dump-config", metavar="CONFIG",
                    help="validate CONFIG, print its normalized form and exit")
    sub = ap.add_subparsers(dest="command")

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, help="JSON run configuration")
        return p

    p = add("eval", "evaluate C, K and the envelope at a point")
    p.add_argument("--x", type=_unit("x"), required=True)
    p.add_argument("--y", type=_unit("y"), required=True)
    p.add_argument("--out")
    p = add("sample", "draw a reproducible sample")
    p.add_argument("--n", type=_positive_int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p = add("kendall", "tabulate the Kendall distribution function")
    p.add_argument("--grid", type=_positive_int, default=512)
    p.add_argument("--out")
    p = add("levelset", "polyline of a level set")
    p.add_argument("--t", type=_unit("t"), required=True)
    p.add_argument("--grid", type=_positive_int, default=512)
    p.add_argument("--out")
    p = add("masses", "level-set and graph masses, tau")
    p.add_argument("--out")
    p = add("decompose", "absolutely continuous, discrete and singular masses")
    p.add_argument("--out")
    p = add("verify", "run oracle checks")
    p.add_argument("--suite", default="all")
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    return ap


def _setup_logging():
    level = os.environ.get("ARCHIMAX_LOG", "warn").lower()
    levels = {"error": logging.ERROR, "warn": logging.WARNING, "warning": logging.WARNING,
              "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(stream=sys.stderr, level=levels.get(level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def run(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None and args.dump_config is None:
        parser.error("a subcommand or --dump-config is required")
    try:
        cfg = load_config(args.dump_config or args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.dump_config:
        sys.stdout.write(json_text(cfg.to_dict()))
        return EXIT_OK
    c = cfg.copula()
    cmd = args.command

    if cmd == "eval":
        write_atomic(args.out, json_text(eval_summary(c, args.x, args.y)))
    elif cmd == "sample":
        from .sampler import sample
        n = args.n or cfg.sample_n
        seed = cfg.seed if args.seed is None else args.seed
        b = sample(c, n, seed)
        write_atomic(args.out, csv_text(("x", "y"), zip(b.x.tolist(), b.y.tolist())))
    elif cmd == "kendall":
        write_atomic(args.out, csv_text(("t", "FK"), kendall_rows(c, args.grid)))
    elif cmd == "levelset":
        if args.t >= 1.0:
            log.warning("the level-1 set is the single point (1, 1)")
        write_atomic(args.out, csv_text(("x", "y", "segment"), levelset_rows(c, args.t, args.grid)))
    elif cmd == "masses":
        write_atomic(args.out, json_text(masses_summary(c)))
    elif cmd == "decompose":
        cm = c.component_masses(tol=max(cfg.quad_tol, 1e-12))
        write_atomic(args.out, json_text(cm.to_dict()))
        if not cm.tolerance_met:
            print(f"tolerance not met: error {cm.error:.3g} > {cm.tol:.3g}", file=sys.stderr)
            return EXIT_TOLERANCE
    elif cmd == "verify":
        from .verify import SUITES, run_suite
        if args.suite != "all" and args.suite not in SUITES:
            print(f"unknown suite {args.suite!r}; choose all or one of {', '.join(SUITES)}", file=sys.stderr)
            return EXIT_CONFIG
        seed = cfg.seed if args.seed is None else args.seed
        rep = run_suite(c, args.suite, seed=seed, quad_tol=cfg.quad_tol,
                        grid_n=cfg.grid_n, sample_n=cfg.sample_n)
        write_atomic(args.out, rep.to_json() + "\n")
        if not rep.overall:
            for e in rep.failures():
                print(f"FAILED {e.name}: measured {e.measured:.6g}, expected {e.expected:.6g}, "
                      f"tolerance {e.tolerance:.3g}", file=sys.stderr)
            return EXIT_VERIFY
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
