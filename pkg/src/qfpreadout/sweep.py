"""Deterministic parameter sweeps written as CSV.

A sweep is described by an INI file (sections ``sweep``, ``model``,
``measurement``, ``qfp``, ``overlap``) plus ``section.key=value`` overrides.
Every resolved parameter is echoed into ``#`` header lines so a CSV file is a
complete record of how it was produced.
"""

from __future__ import annotations

import configparser
import csv
import io
import math
import os
import tempfile
import warnings
from dataclasses import dataclass, field, fields
from typing import Callable, Iterable

from . import __version__
from .anneal import PROJECTION_MODES, QfpParams, bare_dressed_overlap, displaced_block_eigen, storage_fidelity
from .bases import BasisTag, QubitParams
from .errors import ConfigError, QfpReadoutError
from .measurement import CARDINAL_STATES, MeasurementConfig, readout_fidelity, run_protocol
from .models import InteractionMode, ModelKind, ModelParams, ModelSpec

COLUMNS = ("sweep_var", "value", "basis", "fidelity", "p_plus", "p_minus", "status")
MEASURES = ("nonselective", "readout")
NO_BASIS = "none"


@dataclass(frozen=True)
class Recipe:
    name: str
    sweep_var: str
    summary: str
    grid: tuple[float, float, int]
    bases: tuple[str, ...]
    defaults: dict = field(default_factory=dict)


# default parameter sets; keys are "section.key"
_SINGLE_DEFAULTS = {"model.kind": "single", "model.n_max": "27", "model.delta2_over_eps2": "1",
                    "model.delta_over_g": "8", "model.eta2": "1.25"}
_TWO_DEFAULTS = {"model.kind": "two-qubit", "model.n_max": "27", "model.eta1": "1.25", "model.eta2": "1.25",
                 "model.j_ratio": "0.05", "model.delta2_over_eps2": "1", "model.delta_over_g": "8"}

RECIPES: dict[str, Recipe] = {
    r.name: r
    for r in (
        Recipe("ChiT", "chi_t", "read-out fidelity against measurement time χt",
               (0.1, 2.0, 20), ("flux", "energy-q2"), {**_SINGLE_DEFAULTS, "measurement.alpha": "1"}),
        Recipe("Alpha", "alpha", "read-out fidelity against coherent amplitude α at t_m = π/(2|χ|)",
               (0.25, 2.0, 8), ("flux", "energy-q2"), {**_SINGLE_DEFAULTS, "measurement.chi_t": "pi/2"}),
        Recipe("JCoupling", "j_ratio", "two-qubit fidelity against J/(ω2 − ω1)",
               (0.01, 0.1, 10), ("flux", "energy-q2", "energy-q1q2"),
               {**_TWO_DEFAULTS, "measurement.alpha": "1", "measurement.chi_t": "pi/2"}),
        Recipe("StorageT", "t_over_tqfp", "QFP storage fidelity during the annealing ramp",
               (0.0, 1.0, 21), ("flux", "energy-q2"),
               {"model.delta2_over_eps2": "1", "qfp.xi": "0.4", "qfp.beta_max": "2.5"}),
        Recipe("StorageBetaMax", "beta_max", "QFP storage fidelity at t_qfp against β_max",
               (1.5, 3.0, 16), ("flux", "energy-q2"),
               {"model.delta2_over_eps2": "0.5", "qfp.xi": "0.4"}),
        Recipe("OverlapG", "g_over_wr", "bare/dressed state overlap against g/ω_r",
               (0.0, 3.0, 31), (NO_BASIS,), {"overlap.theta_q": "pi/4", "overlap.N": "49"}),
        Recipe("ChiVsDelta", "delta_over_g", "dispersive shift χ/ω_r against δ/g",
               (2.0, 20.0, 19), (NO_BASIS,), {"model.delta2_over_eps2": "1", "model.eta2": "1.25"}),
        Recipe("ChiVsTheta", "theta_q", "dispersive shift χ/ω_r against the mixing angle θ_q",
               (0.05, 1.5, 30), (NO_BASIS,), {"model.delta_over_g": "8", "model.eta2": "1.25"}),
    )
}

_BASE_DEFAULTS = {
    "sweep.measure": "nonselective",
    "measurement.alpha": "1",
    "measurement.chi_t": "pi/2",
    "model.kind": "single",
    "model.mode": "full",
    "qfp.xi": "0.4",
    "qfp.beta_max": "2.5",
    "qfp.lam": "0.1",
    "qfp.projection": "real-part",
    "overlap.theta_q": "pi/4",
    "overlap.N": "49",
}


@dataclass(frozen=True)
class Row:
    sweep_var: str
    value: float
    basis: str
    fidelity: float | None
    p_plus: float | None
    p_minus: float | None
    status: str = "ok"


@dataclass(frozen=True)
class SweepResult:
    header: tuple[tuple[str, str], ...]
    rows: tuple[Row, ...]

    @property
    def failed(self) -> bool:
        return any(r.status != "ok" for r in self.rows)


@dataclass(frozen=True)
class SweepConfig:
    recipe: Recipe
    bases: tuple[str, ...]
    grid: tuple[float, float, int]
    settings: dict
    out_path: str | None = None

    def values(self) -> list[float]:
        start, stop, steps = self.grid
        return [start + (stop - start) * k / (steps - 1) for k in range(steps)]


# configuration ----------------------------------------------------------------


def _parse_number(text: str, key: str, line: int | None = None) -> float:
    t = text.strip().lower().replace(" ", "")
    try:
        if "pi" in t:
            num, _, den = t.partition("/")
            mult = num.replace("*pi", "").replace("pi", "") or "1"
            v = float(mult) * math.pi
            return v / float(den) if den else v
        return float(t)
    except ValueError:
        raise ConfigError(f"not a number: {text!r}", line=line, field=key) from None


def _line_numbers(text: str) -> dict[str, int]:
    out, section = {}, ""
    for i, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if s.startswith("[") and s.endswith("]"):
            section = s[1:-1].strip().lower()
        elif "=" in s and not s.startswith(("#", ";")):
            out[f"{section}.{s.split('=', 1)[0].strip().lower()}"] = i
    return out


def read_config_text(text: str) -> tuple[dict[str, str], dict[str, int]]:
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc).splitlines()[0], line=getattr(exc, "lineno", None)) from None
    flat = {f"{s.lower()}.{k.lower()}": v for s in cp.sections() for k, v in cp[s].items()}
    return flat, _line_numbers(text)


def parse_overrides(items: Iterable[str]) -> dict[str, str]:
    out = {}
    for item in items:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not key=value", field=item)
        k, v = item.split("=", 1)
        k = k.strip().lower()
        if "." not in k:
            raise ConfigError(f"override key {k!r} needs a section prefix", field=k)
        out[k] = v.strip()
    return out


_MODEL_FIELDS = {f.name: f for f in fields(ModelParams)}
_KNOWN = (
    {f"model.{k}" for k in _MODEL_FIELDS}
    | {"model.kind", "model.mode"}
    | set(_BASE_DEFAULTS)
    | {"sweep.recipe", "sweep.bases", "sweep.start", "sweep.stop", "sweep.steps", "sweep.out"}
)


def make_config(
    file_settings: dict[str, str] | None = None,
    overrides: dict[str, str] | None = None,
    recipe: str | None = None,
    out_path: str | None = None,
    lines: dict[str, int] | None = None,
) -> SweepConfig:
    """Merge recipe defaults < file < overrides (flags win) and validate."""
    file_settings = dict(file_settings or {})
    overrides = dict(overrides or {})
    lines = lines or {}
    for k in list(file_settings) + list(overrides):
        if k not in _KNOWN:
            raise ConfigError(f"unknown setting {k!r}", line=lines.get(k), field=k)
    name = recipe or overrides.get("sweep.recipe") or file_settings.get("sweep.recipe")
    if name is None:
        raise ConfigError("no recipe given", field="sweep.recipe")
    match = {r.lower(): r for r in RECIPES}.get(name.strip().lower())
    if match is None:
        raise ConfigError(f"unknown recipe {name!r}", line=lines.get("sweep.recipe"), field="sweep.recipe")
    rec = RECIPES[match]
    s = {**_BASE_DEFAULTS, **rec.defaults, **file_settings, **overrides}
    s["sweep.recipe"] = rec.name

    def num(key, default):
        return _parse_number(s[key], key, lines.get(key)) if key in s else default

    start = num("sweep.start", rec.grid[0])
    stop = num("sweep.stop", rec.grid[1])
    steps_f = num("sweep.steps", rec.grid[2])
    if steps_f != int(steps_f) or steps_f < 2:
        raise ConfigError("steps must be an integer >= 2", line=lines.get("sweep.steps"), field="sweep.steps")
    if not start < stop:
        raise ConfigError("grid start must be below stop", line=lines.get("sweep.start"), field="sweep.start")
    bases = tuple(b.strip() for b in s.get("sweep.bases", ",".join(rec.bases)).split(",") if b.strip())
    if rec.bases == (NO_BASIS,):
        bases = (NO_BASIS,)
    else:
        for b in bases:
            try:
                BasisTag.parse(b)
            except ValueError as exc:
                raise ConfigError(str(exc), line=lines.get("sweep.bases"), field="sweep.bases") from None
        bases = tuple(BasisTag.parse(b).value for b in bases)
    if s["sweep.measure"] not in MEASURES:
        raise ConfigError(f"measure must be one of {MEASURES}", line=lines.get("sweep.measure"), field="sweep.measure")
    if s["qfp.projection"] not in PROJECTION_MODES:
        raise ConfigError(f"projection must be one of {PROJECTION_MODES}", field="qfp.projection")
    cfg = SweepConfig(rec, bases, (start, stop, int(steps_f)), s, out_path or s.get("sweep.out"))
    # fail early on parameters that cannot build the model at all
    _model_params(cfg, lines)
    if rec.name in ("ChiT", "Alpha", "JCoupling"):
        for b in bases:
            _spec(cfg, BasisTag(b), lines)
    return cfg


def _model_params(cfg: SweepConfig, lines=None, **extra) -> ModelParams:
    lines = lines or {}
    kw = {}
    for name, f in _MODEL_FIELDS.items():
        key = f"model.{name}"
        if key not in cfg.settings:
            continue
        raw = cfg.settings[key]
        if name in ("lambda2_literal", "theta1_literal"):
            kw[name] = raw.strip().lower() in ("1", "true", "yes", "on")
        elif name == "n_max":
            v = _parse_number(raw, key, lines.get(key))
            if v != int(v):
                raise ConfigError("n_max must be an integer", line=lines.get(key), field=key)
            kw[name] = int(v)
        else:
            kw[name] = _parse_number(raw, key, lines.get(key))
    kw.update(extra)
    try:
        return ModelParams(**kw)
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc), field="model") from None


def _spec(cfg: SweepConfig, basis: BasisTag, lines=None, **extra) -> ModelSpec:
    try:
        kind = ModelKind.parse(cfg.settings["model.kind"])
        mode = InteractionMode.parse(cfg.settings["model.mode"])
        return ModelSpec(kind, basis, mode, _model_params(cfg, lines, **extra))
    except ConfigError:
        raise
    except (ValueError, QfpReadoutError) as exc:
        raise ConfigError(str(exc), field="model") from None


def _num(cfg: SweepConfig, key: str) -> float:
    return _parse_number(cfg.settings[key], key)


# evaluation -------------------------------------------------------------------


def _measure(cfg: SweepConfig, spec: ModelSpec, alpha: float, chi_t: float) -> tuple[float, float, float]:
    mc = MeasurementConfig.canonical(alpha, spec.chi, spec.chi_sign, spec.space, chi_t)
    f, res = run_protocol(spec, CARDINAL_STATES["0"], mc)
    if cfg.settings["sweep.measure"] == "readout":
        f = readout_fidelity(spec, mc)
    return f, res.p_plus, res.p_minus


def _eval_point(cfg: SweepConfig, value: float, basis: str) -> tuple[float, float | None, float | None]:
    name = cfg.recipe.name
    if name == "ChiT":
        return _measure(cfg, _spec(cfg, BasisTag(basis)), _num(cfg, "measurement.alpha"), value)
    if name == "Alpha":
        return _measure(cfg, _spec(cfg, BasisTag(basis)), value, _num(cfg, "measurement.chi_t"))
    if name == "JCoupling":
        spec = _spec(cfg, BasisTag(basis), j_ratio=value)
        return _measure(cfg, spec, _num(cfg, "measurement.alpha"), _num(cfg, "measurement.chi_t"))
    if name in ("StorageT", "StorageBetaMax"):
        mp = _model_params(cfg)
        beta = value if name == "StorageBetaMax" else _num(cfg, "qfp.beta_max")
        p = QfpParams(xi=_num(cfg, "qfp.xi"), beta_max=beta, lam=_num(cfg, "qfp.lam"))
        t = p.t_qfp * (value if name == "StorageT" else 1.0)
        f = storage_fidelity(p, mp.q2, t, BasisTag(basis), cfg.settings["qfp.projection"])
        return f, f, 1.0 - f
    if name == "OverlapG":
        th_q = _num(cfg, "overlap.theta_q")
        n = int(_num(cfg, "overlap.N"))
        _, _, th = displaced_block_eigen(n, math.cos(th_q), math.sin(th_q), value, 1.0)
        return bare_dressed_overlap(n, value, th, th_q), None, None
    if name == "ChiVsDelta":
        spec = _spec(cfg, BasisTag.ENERGY_Q2, delta_over_g=value)
        return spec.chi / spec.params.omega_r, None, None
    if name == "ChiVsTheta":
        spec = _spec(cfg, BasisTag.ENERGY_Q2, delta2_over_eps2=math.tan(value))
        return spec.chi / spec.params.omega_r, None, None
    raise ConfigError(f"recipe {name} has no evaluator")


def _header(cfg: SweepConfig) -> tuple[tuple[str, str], ...]:
    start, stop, steps = cfg.grid
    items = [("artifact", __version__), ("recipe", cfg.recipe.name), ("sweep_var", cfg.recipe.sweep_var),
             ("grid", f"{start!r},{stop!r},{steps}"), ("bases", ",".join(cfg.bases))]
    items += [(k, cfg.settings[k]) for k in sorted(cfg.settings) if k not in ("sweep.bases", "sweep.out")]
    return tuple(items)


def run_sweep(cfg: SweepConfig, progress: Callable[[Row], None] | None = None) -> SweepResult:
    """Evaluate every (value, basis) point; failures become rows with a status."""
    rows = []
    for v in cfg.values():
        for b in cfg.bases:
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    f, pp, pm = _eval_point(cfg, v, b)
                row = Row(cfg.recipe.sweep_var, v, b, f, pp, pm)
            except (QfpReadoutError, ValueError, ArithmeticError) as exc:
                msg = " ".join(str(exc).split())
                row = Row(cfg.recipe.sweep_var, v, b, None, None, None, f"error: {type(exc).__name__}: {msg}")
            rows.append(row)
            if progress:
                progress(row)
    rows.sort(key=lambda r: (r.value, r.basis))
    res = SweepResult(_header(cfg), tuple(rows))
    if cfg.out_path:
        write_csv(res, cfg.out_path)
    return res


# CSV --------------------------------------------------------------------------


def _fmt(x: float | None) -> str:
    return "" if x is None else repr(float(x))


def _unfmt(s: str) -> float | None:
    return None if s == "" else float(s)


def to_csv_text(res: SweepResult) -> str:
    buf = io.StringIO()
    for k, v in res.header:
        buf.write(f"# {k} = {v}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in res.rows:
        w.writerow([r.sweep_var, _fmt(r.value), r.basis, _fmt(r.fidelity), _fmt(r.p_plus), _fmt(r.p_minus), r.status])
    return buf.getvalue()


def write_csv(res: SweepResult, path: str) -> None:
    """Write atomically: temp file in the target directory, then rename."""
    text = to_csv_text(res)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".sweep-", suffix=".csv", dir=d)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def parse_csv_text(text: str) -> SweepResult:
    header, body = [], []
    for line in text.splitlines():
        if line.startswith("# "):
            k, _, v = line[2:].partition(" = ")
            header.append((k, v))
        else:
            body.append(line)
    reader = csv.reader(body)
    cols = next(reader)
    if tuple(cols) != COLUMNS:
        raise ValueError(f"unexpected columns {cols}")
    rows = tuple(
        Row(r[0], float(r[1]), r[2], _unfmt(r[3]), _unfmt(r[4]), _unfmt(r[5]), r[6]) for r in reader if r
    )
    return SweepResult(tuple(header), rows)


def read_csv(path: str) -> SweepResult:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_csv_text(fh.read())


def list_recipes() -> str:
    lines = []
    for r in RECIPES.values():
        lo, hi, n = r.grid
        lines.append(f"{r.name} -> {r.summary}")
        lines.append(f"    sweeps {r.sweep_var} over [{lo:g}, {hi:g}] in {n} steps; bases: {', '.join(r.bases)}")
        if r.defaults:
            lines.append("    defaults: " + ", ".join(f"{k}={v}" for k, v in r.defaults.items()))
    return "\n".join(lines) + "\n"


__all__ = [name for name in dir() if not name.startswith("_")]
