"""Config-driven experiment runner, atom scanner and rate fitting.

A scenario is a JSON document::

    {
      "group":   {"kind": "torus", "d": 1},
      "measure": {"atoms": [{"position": [0.0], "weight": 0.5}],
                  "ac": [{"kind": "lebesgue", "coefficient": 1.0}]},
      "method":  {"name": "bochner_riesz_td", "delta": 1.0},
      "sweep":   [10, 100, 1000],
      "points":  [[0.0]],
      "seed":    0
    }

``method`` may also be a bare name. Complex numbers are written either as a
real number or as ``[re, im]``. On the torus the measure may instead be given
as ``{"spectrum": "coeffs.csv"}`` (rows ``k_1..k_d, re, im``), optionally with
``atoms`` describing the known atomic part used for the truth columns.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import folner
from .folner import folner_average, folner_average_many
from .fourier import TabulatedSpectrum
from .groups import GroupContext
from .measures import AcComponent, CantorComponent, make_measure, random_atomic_measure
from .records import RunRecord, truth_of, write_records
from .torus_br import wiener_br_torus
from .weighted import WeightKernel, scaled_weight_mean

METHODS = ("folner_cube", "folner_ball", "folner_box", "folner_ellipsoid", "gaussian",
           "bochner_riesz_rd", "bochner_riesz_td", "finite_box")

_COMPATIBLE = {
    "folner_cube": ("torus", "euclidean"),
    "folner_ball": ("torus", "euclidean"),
    "folner_box": ("torus", "euclidean"),
    "folner_ellipsoid": ("torus", "euclidean"),
    "gaussian": ("euclidean",),
    "bochner_riesz_rd": ("euclidean",),
    "bochner_riesz_td": ("torus",),
    "finite_box": ("finite",),
}
_PARAM_NAME = {"bochner_riesz_rd": "alpha", "bochner_riesz_td": "delta"}
_INTEGER_SWEEP = ("bochner_riesz_td", "finite_box")


class ConfigError(ValueError):
    """A malformed or inconsistent scenario; ``path`` locates the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class MethodSpec:
    name: str
    param: float | None = None
    base: tuple | None = None


@dataclass
class ScenarioConfig:
    group: GroupContext
    measure: object
    method: MethodSpec
    sweep: list
    points: list
    seed: int = 0
    source: dict = field(default_factory=dict, repr=False)


# -- parsing ---------------------------------------------------------------

def _require(obj, key, path):
    if not isinstance(obj, dict):
        raise ConfigError(path, "expected an object")
    if key not in obj:
        raise ConfigError(f"{path}.{key}", "missing field")
    return obj[key]


def _number(value, path) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(path, "must be finite")
    return float(value)


def _complex(value, path) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ConfigError(path, "complex numbers are [re, im]")
        return complex(_number(value[0], f"{path}[0]"), _number(value[1], f"{path}[1]"))
    return complex(_number(value, path))


def _vector(value, d, path) -> tuple:
    if not isinstance(value, (list, tuple)):
        if d == 1:
            return (_number(value, path),)
        raise ConfigError(path, f"expected a list of {d} numbers")
    if len(value) != d:
        raise ConfigError(path, f"expected {d} coordinates, got {len(value)}")
    return tuple(_number(v, f"{path}[{i}]") for i, v in enumerate(value))


def parse_group(spec, path="group") -> GroupContext:
    kind = _require(spec, "kind", path)
    try:
        if kind in ("torus", "euclidean"):
            d = _require(spec, "d", path)
            if isinstance(d, bool) or not isinstance(d, int) or d < 1:
                raise ConfigError(f"{path}.d", "must be a positive integer")
            return GroupContext.torus(d) if kind == "torus" else GroupContext.euclidean(d)
        if kind == "finite":
            moduli = _require(spec, "moduli", path)
            if not isinstance(moduli, list) or not moduli or not all(
                    isinstance(m, int) and not isinstance(m, bool) and m >= 1 for m in moduli):
                raise ConfigError(f"{path}.moduli", "must be a nonempty list of positive integers")
            return GroupContext.finite(moduli)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(path, str(exc)) from None
    raise ConfigError(f"{path}.kind", f"unknown group kind {kind!r}")


def _parse_atoms(items, ctx, path) -> list:
    if not isinstance(items, list):
        raise ConfigError(path, "expected a list")
    atoms = []
    for i, item in enumerate(items):
        p = f"{path}[{i}]"
        pos = _vector(_require(item, "position", p), ctx.d, f"{p}.position")
        if ctx.is_finite:
            if not all(float(v).is_integer() for v in pos):
                raise ConfigError(f"{p}.position", "finite group elements have integer coordinates")
            pos = tuple(int(v) for v in pos)
        atoms.append((pos, _complex(_require(item, "weight", p), f"{p}.weight")))
    return atoms


def _parse_ac(items, ctx, path) -> list:
    if not isinstance(items, list):
        raise ConfigError(path, "expected a list")
    out = []
    for i, item in enumerate(items):
        p = f"{path}[{i}]"
        kind = _require(item, "kind", p)
        coef = _complex(item.get("coefficient", 1.0), f"{p}.coefficient")
        if kind == "lebesgue":
            out.append(AcComponent("lebesgue", coef))
        elif kind == "gaussian":
            center = _vector(item.get("center", [0.0] * ctx.d), ctx.d, f"{p}.center")
            width = _number(_require(item, "width", p), f"{p}.width")
            out.append(AcComponent("gaussian", coef, center, width=width))
        elif kind == "box":
            center = _vector(item.get("center", [0.0] * ctx.d), ctx.d, f"{p}.center")
            hw = _vector(_require(item, "half_widths", p), ctx.d, f"{p}.half_widths")
            out.append(AcComponent("box", coef, center, half_widths=hw))
        else:
            raise ConfigError(f"{p}.kind", f"unknown continuous component {kind!r}")
    return out


def parse_measure(spec, ctx: GroupContext, seed: int, base_dir: Path, path="measure"):
    if not isinstance(spec, dict):
        raise ConfigError(path, "expected an object")
    atoms = _parse_atoms(spec.get("atoms", []), ctx, f"{path}.atoms")
    if "random_atoms" in spec:
        ra = spec["random_atoms"]
        n = _require(ra, "count", f"{path}.random_atoms")
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ConfigError(f"{path}.random_atoms.count", "must be a positive integer")
        spread = _number(ra.get("spread", 1.0), f"{path}.random_atoms.spread")
        rnd = random_atomic_measure(ctx, n, np.random.default_rng(seed), spread)
        atoms += [(a.position, a.weight) for a in rnd.atoms]
    try:
        if "spectrum" in spec:
            if not ctx.is_torus:
                raise ConfigError(f"{path}.spectrum", "tabulated spectra are only accepted on the torus")
            if "ac" in spec or "cantor" in spec:
                raise ConfigError(path, "a tabulated spectrum cannot be combined with model components")
            file = Path(spec["spectrum"])
            if not file.is_absolute():
                file = base_dir / file
            truth = make_measure(ctx, atoms) if atoms else None
            try:
                table = TabulatedSpectrum.from_csv(file, ctx.d, truth)
            except OSError as exc:
                raise ConfigError(f"{path}.spectrum", str(exc)) from None
            return table
        ac = _parse_ac(spec.get("ac", []), ctx, f"{path}.ac")
        cantor = None
        if "cantor" in spec:
            c = spec["cantor"]
            cantor = CantorComponent(_complex(c.get("coefficient", 1.0), f"{path}.cantor.coefficient"),
                                     _number(c.get("offset", 0.0), f"{path}.cantor.offset"))
        return make_measure(ctx, atoms, ac, cantor)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from None


def parse_method(spec, ctx: GroupContext, path="method") -> MethodSpec:
    if isinstance(spec, str):
        spec = {"name": spec}
    name = _require(spec, "name", path)
    if name not in METHODS:
        raise ConfigError(f"{path}.name", f"unknown method {name!r}; expected one of {', '.join(METHODS)}")
    if ctx.kind not in _COMPATIBLE[name]:
        raise ConfigError(f"{path}.name", f"method {name} does not apply to {ctx}")
    param = None
    if name in _PARAM_NAME:
        key = _PARAM_NAME[name]
        param = _number(_require(spec, key, path), f"{path}.{key}")
        if name == "bochner_riesz_rd" and not param > 0:
            raise ConfigError(f"{path}.{key}", "alpha must be positive")
        if name == "bochner_riesz_td" and param < 0:
            raise ConfigError(f"{path}.{key}", "delta must be nonnegative")
    base = None
    if name in ("folner_box", "folner_ellipsoid"):
        base = _vector(spec.get("base", [1.0] * ctx.d), ctx.d, f"{path}.base")
        if min(base) <= 0:
            raise ConfigError(f"{path}.base", "base sizes must be positive")
    return MethodSpec(name, param, base)


def parse_config(doc: dict, base_dir=".", seed: int | None = None) -> ScenarioConfig:
    """Validate a scenario document. ``seed`` overrides the document's seed."""
    if not isinstance(doc, dict):
        raise ConfigError("$", "the scenario must be a JSON object")
    ctx = parse_group(_require(doc, "group", "$"))
    if seed is None:
        seed = doc.get("seed", 0)
        if isinstance(seed, bool) or not isinstance(seed, int):
            raise ConfigError("seed", "must be an integer")
    method = parse_method(_require(doc, "method", "$"), ctx)
    measure = parse_measure(_require(doc, "measure", "$"), ctx, seed, Path(base_dir))

    sweep = _require(doc, "sweep", "$")
    if not isinstance(sweep, list) or not sweep:
        raise ConfigError("sweep", "must be a nonempty list")
    sweep = [_number(v, f"sweep[{i}]") for i, v in enumerate(sweep)]
    if any(b <= a for a, b in zip(sweep, sweep[1:])):
        raise ConfigError("sweep", "must be strictly increasing")
    if min(sweep) <= 0 and method.name not in ("folner_cube", "folner_ball"):
        raise ConfigError("sweep", "indices must be positive")
    if min(sweep) < 0:
        raise ConfigError("sweep", "indices must be nonnegative")
    if method.name in _INTEGER_SWEEP:
        if not all(v.is_integer() for v in sweep):
            raise ConfigError("sweep", f"{method.name} needs integer indices")
        sweep = [int(v) for v in sweep]
    if method.name == "finite_box" and max(sweep) > max(ctx.moduli):
        raise ConfigError("sweep", f"finite boxes stop at the full dual, index {max(ctx.moduli)}")

    raw_points = doc.get("points", [[0.0] * ctx.d])
    if not isinstance(raw_points, list) or not raw_points:
        raise ConfigError("points", "must be a nonempty list")
    points = [_vector(p, ctx.d, f"points[{i}]") for i, p in enumerate(raw_points)]
    if ctx.is_finite:
        if not all(float(v).is_integer() for p in points for v in p):
            raise ConfigError("points", "finite group elements have integer coordinates")
        points = [tuple(int(v) for v in p) for p in points]
    return ScenarioConfig(ctx, measure, method, sweep, points, seed, doc)


def load_config(path, seed: int | None = None) -> ScenarioConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError("$", f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError("$", f"invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return parse_config(doc, path.parent, seed)


# -- evaluation -------------------------------------------------------------

def _sequence(cfg: ScenarioConfig):
    ctx, m = cfg.group, cfg.method
    if m.name == "folner_cube":
        return folner.cubes(ctx)
    if m.name == "folner_ball":
        return folner.balls(ctx)
    if m.name == "folner_box":
        return folner.boxes(ctx, m.base)
    if m.name == "folner_ellipsoid":
        return folner.ellipsoids(ctx, m.base)
    return folner.finite_boxes(ctx)


def evaluate(cfg: ScenarioConfig, index, xs) -> np.ndarray:
    """The chosen average at scale ``index`` for every row of ``xs``."""
    mu, m, ctx = cfg.measure, cfg.method, cfg.group
    if m.name == "bochner_riesz_td":
        return np.atleast_1d(wiener_br_torus(mu, int(index), m.param, np.asarray(xs).reshape(-1, ctx.d)))
    if m.name in ("gaussian", "bochner_riesz_rd"):
        kernel = (WeightKernel.gaussian(ctx.d) if m.name == "gaussian"
                  else WeightKernel.bochner_riesz(ctx.d, m.param))
        return np.array([scaled_weight_mean(mu, kernel, index, x) for x in xs])
    fset = _sequence(cfg)(index)
    if ctx.is_euclidean:
        return np.array([folner_average(mu, fset, x) for x in xs])
    return np.atleast_1d(folner_average_many(mu, fset, np.asarray(xs).reshape(-1, ctx.d)))


def run_scenario(cfg: ScenarioConfig, out=None) -> list[RunRecord]:
    """One record per (index, point), in sweep order then point order."""
    records = []
    truths = [truth_of(cfg.measure, p) for p in cfg.points]
    for index in cfg.sweep:
        values = evaluate(cfg, index, cfg.points)
        for p, v, t in zip(cfg.points, values, truths):
            point = tuple(float(c) for c in p)
            records.append(RunRecord(cfg.method.name, cfg.method.param, index, point, complex(v), t))
    if out is not None:
        write_records(out, records, cfg.group.d)
    return records


# -- atom scan --------------------------------------------------------------

@dataclass(frozen=True)
class Detection:
    location: tuple
    weight: complex

    @property
    def magnitude(self) -> float:
        return abs(self.weight)


def scan_grid(d: int, h: float) -> tuple[np.ndarray, float]:
    """Uniform grid of T^d with step ``1/ceil(1/h) <= h``."""
    n = math.ceil(1.0 / h - 1e-9)
    axis = np.arange(n) / n
    mesh = np.meshgrid(*([axis] * d), indexing="ij")
    return np.stack([g.ravel() for g in mesh], axis=1), 1.0 / n


def atom_scan(cfg: ScenarioConfig, index, h: float, tau: float) -> list[Detection]:
    """Local maxima of ``|average|`` above ``tau`` on a grid of the torus.

    Neighbouring grid points are compared periodically; hits within one grid
    step are merged, keeping the larger magnitude and, on ties, the
    lexicographically smaller location. The estimated weight is the complex
    value at the kept point.
    """
    ctx = cfg.group
    if not ctx.is_torus:
        raise ConfigError("group", "atom scans run on the torus")
    if not 0 < h <= 0.1:
        raise ConfigError("grid", f"need 0 < h <= 0.1, got {h}")
    if not tau > 0:
        raise ConfigError("threshold", "must be positive")
    if not index > 0:
        raise ConfigError("index", "must be positive")
    if h > 1.0 / (2.0 * index):
        raise ConfigError("grid", f"h = {h} exceeds 1/(2 * index) = {1.0 / (2.0 * index)}; "
                                  "the kernel main lobe would be missed")
    if cfg.method.name in _INTEGER_SWEEP and not float(index).is_integer():
        raise ConfigError("index", f"{cfg.method.name} needs an integer index")
    xs, step = scan_grid(ctx.d, h)
    n = round(1.0 / step)
    values = evaluate(cfg, index, xs)
    mag = np.abs(values).reshape((n,) * ctx.d)
    is_max = mag > tau
    for shift in np.ndindex(*((3,) * ctx.d)):
        offset = tuple(s - 1 for s in shift)
        if any(offset):
            is_max &= mag >= np.roll(mag, offset, axis=tuple(range(ctx.d)))
    hits = np.flatnonzero(is_max.ravel())
    # strongest first; ties broken by the lexicographically smaller point
    order = sorted(hits, key=lambda i: (-mag.ravel()[i], tuple(xs[i])))
    kept = []
    for i in order:
        if all(float(np.ravel(ctx.distance(xs[i], xs[j]))[0]) > step * (1 + 1e-9) for j in kept):
            kept.append(i)
    kept.sort(key=lambda i: tuple(xs[i]))
    return [Detection(tuple(float(c) for c in xs[i]), complex(values[i])) for i in kept]


def write_detections(path, detections, d: int):
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"x_{j + 1}" for j in range(d)] + ["weight_re", "weight_im", "magnitude"])
        for det in detections:
            writer.writerow([repr(c) for c in det.location]
                            + [repr(det.weight.real), repr(det.weight.imag), repr(det.magnitude)])


# -- rates ------------------------------------------------------------------

EXACT = "exact"


@dataclass(frozen=True)
class RateFit:
    """Least-squares slope of ``log(abs_error)`` against ``log(index)``.

    ``slope`` is the string ``"exact"`` when every error vanishes.
    """

    slope: float | str
    intercept: float
    residual: float
    n: int

    @property
    def is_exact(self) -> bool:
        return self.slope == EXACT


def rate_fit(records, zero_tol: float = 1e-12) -> RateFit:
    """Fit the convergence rate for the records of a single probe point.

    Errors ``<= zero_tol`` count as zero, so that floating-point residue of an
    exact identity is not fitted as a rate. All-zero errors give the ``"exact"``
    sentinel; otherwise at least four positive errors are needed.
    """
    records = list(records)
    if not records:
        raise ValueError("no records to fit")
    if len({r.point for r in records}) != 1:
        raise ValueError("rate fits take the records of a single point")
    errs = np.array([r.abs_error for r in records])
    if np.any(np.isnan(errs)):
        raise ValueError("errors are unknown (no ground truth)")
    if np.all(errs <= zero_tol):
        return RateFit(EXACT, 0.0, 0.0, len(records))
    keep = errs > zero_tol
    if keep.sum() < 4:
        raise ValueError(f"need at least 4 positive errors, got {int(keep.sum())}")
    lx = np.log(np.array([float(r.index) for r in records])[keep])
    ly = np.log(errs[keep])
    (slope, intercept), res, *_ = np.polyfit(lx, ly, 1, full=True)
    rms = math.sqrt(float(res[0]) / len(lx)) if len(res) else 0.0
    return RateFit(float(slope), float(intercept), rms, int(keep.sum()))
