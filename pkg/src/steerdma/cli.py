"""
Command-line front end.

    steerdma design   --preset fig2 --out results/
    steerdma pattern  --config run.json --steering 30 --freq-start 2000
    steerdma sweep    --preset fig3 --threads 4
    steerdma validate --preset fig4

Settings are layered: preset, then the ``--config`` JSON file, then
individual flags. Angles are degrees at this boundary and radians inside
the library.

Exit codes: 0 success, 2 usage/config error, 3 feasibility error,
4 rank/conditioning error, 5 validation failure.
"""

import argparse
import csv
import dataclasses
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import __version__
from .constraints import METHODS, DesignSpec, build_system, make_spec
from .errors import FeasibilityError, RankError, SpecError
from .geometry import ArrayGeometry
from .metrics import (RNG_ALGORITHM, angle_grid, beampattern, df, magnitude_db,
                      monte_carlo_noise_power, pattern_derivative_at, response, wng)
from .solver import Filter, solve_max_wng

EXIT_OK, EXIT_USAGE, EXIT_FEASIBILITY, EXIT_RANK, EXIT_VALIDATION = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    element_count: int = 8
    radius: float = 0.02
    speed_of_sound: float = 340.0
    methods: List[str] = field(default_factory=lambda: ["DerivCon"])
    order: int = 1
    steering_deg: List[float] = field(default_factory=lambda: [0.0])
    null_offsets_deg: List[float] = field(default_factory=list)
    multiplicities: Optional[List[int]] = None
    i_beta: Optional[List[float]] = None
    freq_start: float = 1000.0
    freq_stop: float = 1000.0
    freq_count: int = 1
    freq_scale: str = "linear"
    grid_step_deg: float = 0.5
    seed: int = 0
    noise_power: float = 1.0
    snapshots: int = 100_000
    loading: float = 0.0
    threads: int = 1
    out: str = "."

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**d)
        except TypeError as exc:
            raise UsageError(str(exc)) from exc

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls.from_dict(json.loads(text))

    @property
    def geometry(self) -> ArrayGeometry:
        return ArrayGeometry(self.element_count, self.radius, self.speed_of_sound)

    def frequencies(self) -> np.ndarray:
        if self.freq_count == 1:
            return np.array([float(self.freq_start)])
        if self.freq_scale == "log":
            return np.geomspace(self.freq_start, self.freq_stop, self.freq_count)
        return np.linspace(self.freq_start, self.freq_stop, self.freq_count)

    def spec(self, method: str, steering_deg: float) -> DesignSpec:
        return make_spec(method, self.order, np.radians(steering_deg),
                         np.radians(self.null_offsets_deg), self.multiplicities,
                         self.i_beta if method == "DerivCon" else None)

    def check(self):
        """Range checks, then a feasibility dry run at the first frequency."""
        if not self.freq_start > 0:
            raise UsageError("freq_start must be positive")
        if self.freq_count < 1:
            raise UsageError("freq_count must be at least 1")
        if self.freq_stop < self.freq_start:
            raise UsageError("freq_stop must not be below freq_start")
        if self.freq_scale not in ("linear", "log"):
            raise UsageError("freq_scale must be 'linear' or 'log'")
        if not self.methods or any(m not in METHODS for m in self.methods):
            raise UsageError(f"methods must be drawn from {METHODS}")
        if not self.steering_deg:
            raise UsageError("at least one steering angle is required")
        if self.threads < 1 or self.snapshots < 1 or self.noise_power < 0:
            raise UsageError("threads and snapshots must be >= 1, noise_power >= 0")
        try:
            angle_grid(self.grid_step_deg)
            geom = self.geometry
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        omega = 2 * np.pi * self.freq_start
        for method in self.methods:
            for s in self.steering_deg:
                build_system(geom, omega, self.spec(method, s))


PRESETS = {
    # naive null constraints, steered second-order hypercardioid
    "fig1": dict(methods=["Null"], order=2, steering_deg=[50.0], null_offsets_deg=[72.0, 144.0]),
    "fig2": dict(methods=["DerivCon"], order=1, steering_deg=[20.0, 50.0, 120.0, 240.0],
                 null_offsets_deg=[120.0], i_beta=[1.0, 0.0, 0.0]),
    "fig3": dict(methods=["DerivCon", "Null", "SymNull"], order=1, steering_deg=[50.0],
                 null_offsets_deg=[120.0], i_beta=[1.0, 0.0, 0.0],
                 freq_start=200.0, freq_stop=8000.0, freq_count=100, freq_scale="log"),
    "fig4": dict(methods=["DerivCon"], order=2, steering_deg=[20.0, 50.0, 120.0, 240.0],
                 null_offsets_deg=[120.0, 240.0], i_beta=[1.0, 0.0, -2.0, 0.0, 0.0]),
    "fig5": dict(methods=["DerivCon", "Null", "SymNull"], order=2, steering_deg=[50.0],
                 null_offsets_deg=[120.0, 240.0], i_beta=[1.0, 0.0, -2.0, 0.0, 0.0],
                 freq_start=200.0, freq_stop=8000.0, freq_count=100, freq_scale="log"),
}

# flag dest -> RunConfig field
_FLAG_FIELDS = {
    "mics": "element_count", "radius": "radius", "speed_of_sound": "speed_of_sound",
    "methods": "methods", "order": "order", "steering": "steering_deg",
    "nulls": "null_offsets_deg", "multiplicities": "multiplicities", "i_beta": "i_beta",
    "freq_start": "freq_start", "freq_stop": "freq_stop", "freq_count": "freq_count",
    "freq_scale": "freq_scale", "grid_step": "grid_step_deg", "seed": "seed",
    "noise_power": "noise_power", "snapshots": "snapshots", "loading": "loading",
    "threads": "threads", "out": "out",
}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("run configuration")
    g.add_argument("--config", type=Path, help="JSON run configuration")
    g.add_argument("--preset", choices=sorted(PRESETS))
    g.add_argument("--out", help="output directory")
    g.add_argument("--seed", type=int)
    g.add_argument("--threads", type=int)
    g.add_argument("--mics", type=int, help="number of sensors M")
    g.add_argument("--radius", type=float, help="array radius in meters")
    g.add_argument("--speed-of-sound", type=float)
    g.add_argument("--methods", nargs="+", choices=METHODS)
    g.add_argument("--order", type=int)
    g.add_argument("--steering", nargs="+", type=float, help="look directions in degrees")
    g.add_argument("--nulls", nargs="*", type=float, help="null offsets from the look direction, degrees")
    g.add_argument("--multiplicities", nargs="*", type=int)
    g.add_argument("--i-beta", nargs="+", type=float)
    g.add_argument("--freq-start", type=float)
    g.add_argument("--freq-stop", type=float)
    g.add_argument("--freq-count", type=int)
    g.add_argument("--freq-scale", choices=("linear", "log"))
    g.add_argument("--grid-step", type=float, help="beampattern grid step in degrees")
    g.add_argument("--noise-power", type=float)
    g.add_argument("--snapshots", type=int)
    g.add_argument("--loading", type=float, help="Tikhonov load on the Gram matrix")

    parser = argparse.ArgumentParser(prog="steerdma", description=__doc__.split("\n\n")[0].strip())
    parser.add_argument("--version", action="version", version=f"steerdma {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("design", parents=[common], help="design filters and write JSON artifacts")
    sub.add_parser("pattern", parents=[common], help="write beampattern CSVs")
    sub.add_parser("sweep", parents=[common], help="write WNG/DF frequency sweeps")
    v = sub.add_parser("validate", parents=[common], help="check design invariants")
    v.add_argument("--filter", type=Path, dest="filter_file",
                   help="validate coefficients from a design JSON instead of designing")
    sub.add_parser("show-config", parents=[common], help="print the resolved configuration")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if args.preset:
        values.update(PRESETS[args.preset])
    if args.config:
        try:
            values.update(json.loads(args.config.read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
    for dest, name in _FLAG_FIELDS.items():
        val = getattr(args, dest, None)
        if val is not None:
            values[name] = val
    cfg = RunConfig.from_dict(values)
    if cfg.i_beta is not None and "DerivCon" not in cfg.methods:
        cfg.i_beta = None
    return cfg


# ---------------------------------------------------------------- formatting

def _fmt_deg(x: float) -> str:
    return f"{x:g}"


def _fmt_hz(x: float) -> str:
    return f"{x:.6g}"


def _csv_num(x: float) -> str:
    return f"{x:.9g}"


def _spec_record(spec: DesignSpec) -> dict:
    d = spec.to_dict()
    d["steering_deg"] = float(np.degrees(spec.steering))
    for rec in d["nulls"]:
        rec["angle_deg"] = float(np.degrees(rec["angle_rad"]))
    return d


def _write_csv(path: Path, header, rows, meta: dict):
    buf = io.StringIO(newline="")
    for key, val in meta.items():
        buf.write(f"# {key}={val}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    path.write_text(buf.getvalue(), encoding="utf-8", newline="")


def _write_json(path: Path, obj: dict):
    path.write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8", newline="")


def _geom_meta(geom: ArrayGeometry) -> str:
    return json.dumps(geom.to_dict(), sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------- work items

def _design_one(geom, spec, freq, loading) -> Filter:
    return solve_max_wng(build_system(geom, 2 * np.pi * freq, spec), loading)


def _map(cfg: RunConfig, fn, items):
    """Map in config order regardless of completion order."""
    if cfg.threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def _metrics_record(h: Filter, geom: ArrayGeometry) -> dict:
    w, d = wng(h, geom), df(h, geom)
    return {"wng": w.linear, "wng_db": w.db, "df": d.linear, "df_db": d.db,
            "gram_condition": h.gram_condition, "residual": h.residual}


def cmd_design(cfg: RunConfig, out: Path) -> List[Path]:
    geom = cfg.geometry
    freqs = cfg.frequencies()
    written = []
    for method in cfg.methods:
        for steer in cfg.steering_deg:
            spec = cfg.spec(method, steer)
            filters = _map(cfg, lambda f: _design_one(geom, spec, f, cfg.loading), list(freqs))
            coeffs = [[[float(c.real), float(c.imag)] for c in h.coefficients] for h in filters]
            metrics = [_metrics_record(h, geom) for h in filters]
            doc = {"geometry": geom.to_dict(), "spec": _spec_record(spec)}
            if len(freqs) == 1:
                doc["frequency_hz"] = float(freqs[0])
                doc["coefficients"], doc["metrics"] = coeffs[0], metrics[0]
            else:
                doc["frequencies"] = [float(f) for f in freqs]
                doc["coefficients"], doc["metrics"] = coeffs, metrics
            doc["residual"] = max(h.residual for h in filters)
            doc["version"] = __version__
            doc["digest"] = spec.digest(geom)
            path = out / f"design_{method}_s{_fmt_deg(steer)}.json"
            _write_json(path, doc)
            written.append(path)
            print(f"{path}: residual={doc['residual']:.3g}")
    return written


def cmd_pattern(cfg: RunConfig, out: Path) -> List[Path]:
    geom = cfg.geometry
    grid = angle_grid(cfg.grid_step_deg)
    jobs = [(m, s, f) for m in cfg.methods for s in cfg.steering_deg for f in cfg.frequencies()]

    def run(job):
        method, steer, freq = job
        spec = cfg.spec(method, steer)
        h = _design_one(geom, spec, freq, cfg.loading)
        return spec, h, beampattern(h, geom, grid)

    written = []
    for (method, steer, freq), (spec, h, bp) in zip(jobs, _map(cfg, run, jobs)):
        mag = bp.magnitude
        mag_db = magnitude_db(mag)
        rows = [[_csv_num(a), _csv_num(v.real), _csv_num(v.imag), _csv_num(m), _csv_num(db)]
                for a, v, m, db in zip(bp.angles_deg, bp.values, mag, mag_db)]
        meta = {"digest": spec.digest(geom), "geometry": _geom_meta(geom), "method": method,
                "order": spec.order, "steering_deg": _fmt_deg(steer),
                "frequency_hz": repr(float(freq)), "version": __version__}
        path = out / f"pattern_{method}_s{_fmt_deg(steer)}_f{_fmt_hz(freq)}.csv"
        _write_csv(path, ["angle_deg", "re", "im", "mag", "mag_db"], rows, meta)
        written.append(path)
        print(f"{path}: peak |B|={mag.max():.4f} at {bp.angles_deg[np.argmax(mag)]:g} deg")
    return written


def cmd_sweep(cfg: RunConfig, out: Path) -> List[Path]:
    if cfg.freq_count < 2:
        raise UsageError("sweep needs freq_count >= 2")
    geom = cfg.geometry
    freqs = list(cfg.frequencies())
    written = []
    for steer in cfg.steering_deg:
        specs = {m: cfg.spec(m, steer) for m in cfg.methods}
        jobs = [(f, m) for f in freqs for m in cfg.methods]
        filters = _map(cfg, lambda job: _design_one(geom, specs[job[1]], job[0], cfg.loading), jobs)
        rows = []
        for (freq, method), h in zip(jobs, filters):
            rec = _metrics_record(h, geom)
            rows.append([method, _csv_num(freq), _csv_num(rec["wng_db"]), _csv_num(rec["df_db"]),
                         _csv_num(rec["residual"]), _csv_num(rec["gram_condition"])])
        meta = {"digest": ",".join(f"{m}:{s.digest(geom)}" for m, s in specs.items()),
                "geometry": _geom_meta(geom), "order": cfg.order,
                "steering_deg": _fmt_deg(steer), "version": __version__}
        path = out / f"sweep_s{_fmt_deg(steer)}.csv"
        _write_csv(path, ["method", "freq_hz", "wng_db", "df_db", "residual", "gram_condition"],
                   rows, meta)
        written.append(path)
        print(f"{path}: {len(rows)} rows")
    return written


# ---------------------------------------------------------------- validation

DISTORTIONLESS_TOL = 1e-10
NULL_TOL = 1e-8
STATIONARY_TOL = 1e-8
WNG_IDENTITY_TOL = 1e-12
MONTE_CARLO_DB_TOL = 0.5


def validate_filter(h: Filter, geom: ArrayGeometry, spec: DesignSpec, noise_power: float = 1.0,
                    snapshots: int = 100_000, seed: int = 0) -> List[dict]:
    """Run the invariant checks on one filter; one record per check."""
    checks = []

    def add(name, measured, limit):
        checks.append({"check": name, "method": spec.method,
                       "steering_deg": float(np.degrees(spec.steering)),
                       "frequency_hz": h.omega / (2 * np.pi), "measured": float(measured),
                       "limit": limit, "passed": bool(measured < limit)})

    add("distortionless", abs(response(h, geom, spec.steering) - 1.0), DISTORTIONLESS_TOL)
    for null in spec.nulls:
        depth = abs(response(h, geom, null.angle))
        for q in range(1, null.multiplicity):
            depth = max(depth, abs(pattern_derivative_at(h, geom, null.angle, q)))
        add(f"null@{np.degrees(null.angle):.6g}", depth, NULL_TOL)
    if spec.method == "DerivCon":
        add("stationarity", abs(pattern_derivative_at(h, geom, spec.steering, 1)), STATIONARY_TOL)

    norm2 = float(np.vdot(h.coefficients, h.coefficients).real)
    add("wng_identity", abs(wng(h, geom).linear * norm2 - 1.0), WNG_IDENTITY_TOL)
    if noise_power > 0:
        power = monte_carlo_noise_power(h, geom, snapshots, noise_power, seed)
        add("monte_carlo_wng_db", abs(10 * np.log10(noise_power / power) - 10 * np.log10(1 / norm2)),
            MONTE_CARLO_DB_TOL)
    return checks


def _load_filters(path: Path):
    try:
        doc = json.loads(path.read_text())
        geom = ArrayGeometry(**doc["geometry"])
        spec = DesignSpec.from_dict(doc["spec"])
        if "frequency_hz" in doc:
            freqs, coeffs = [doc["frequency_hz"]], [doc["coefficients"]]
        else:
            freqs, coeffs = doc["frequencies"], doc["coefficients"]
    except (OSError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"cannot read filter file {path}: {exc}") from exc
    filters = [Filter(np.array([complex(re, im) for re, im in c]), 2 * np.pi * f,
                      doc.get("digest", ""), float("nan"), spec)
               for f, c in zip(freqs, coeffs)]
    return geom, spec, filters


def cmd_validate(cfg: RunConfig, out: Path, filter_file: Optional[Path] = None) -> bool:
    if filter_file is not None:
        geom, spec, filters = _load_filters(filter_file)
        groups = [(spec, filters)]
    else:
        geom = cfg.geometry
        groups = []
        for method in cfg.methods:
            for steer in cfg.steering_deg:
                spec = cfg.spec(method, steer)
                groups.append((spec, [_design_one(geom, spec, f, cfg.loading)
                                      for f in cfg.frequencies()]))
    checks = []
    for spec, filters in groups:
        for h in filters:
            checks += validate_filter(h, geom, spec, cfg.noise_power, cfg.snapshots, cfg.seed)
    ok = all(c["passed"] for c in checks)
    for c in checks:
        print(f"{'PASS' if c['passed'] else 'FAIL'} {c['method']:8s} "
              f"s={c['steering_deg']:g} f={c['frequency_hz']:.6g} {c['check']}: "
              f"{c['measured']:.3e} (< {c['limit']:g})")
    report = {"passed": ok, "geometry": geom.to_dict(), "rng": RNG_ALGORITHM, "seed": cfg.seed,
              "snapshots": cfg.snapshots, "noise_power": cfg.noise_power, "checks": checks,
              "version": __version__}
    _write_json(out / "validate.json", report)
    print("all checks passed" if ok else "validation FAILED")
    return ok


# ---------------------------------------------------------------- entry point

def _fail(code: int, exc: Exception) -> int:
    print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.command == "show-config":
            sys.stdout.write(cfg.to_json())
            return EXIT_OK
        if not (args.command == "validate" and args.filter_file is not None):
            cfg.check()
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        if args.command == "design":
            cmd_design(cfg, out)
        elif args.command == "pattern":
            cmd_pattern(cfg, out)
        elif args.command == "sweep":
            cmd_sweep(cfg, out)
        elif args.command == "validate":
            if not cmd_validate(cfg, out, args.filter_file):
                return EXIT_VALIDATION
    except (UsageError, SpecError) as exc:
        return _fail(EXIT_USAGE, exc)
    except FeasibilityError as exc:
        return _fail(EXIT_FEASIBILITY, exc)
    except RankError as exc:
        return _fail(EXIT_RANK, exc)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
