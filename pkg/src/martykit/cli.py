"""Scenario runner.

Scenarios are JSON files (a single object or a list of objects) naming a
command and its inputs; complex numbers are [re, im] pairs.  Results are
written as one CSV (columns exactly ``index,quantity,value,bound,margin``)
plus one JSON summary (keys exactly ``command,params,verdict,residuals,
runtime_ms``) per scenario, optionally with a rendered figure.

Exit codes: 0 when every scenario's contracts pass, 1 on a contract
failure, 2 on malformed input or unwritable output.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import corpus
from .blaschke import DiskGeometry
from .errors import HolomorphyError, MartykitError
from .logderiv import check_identity, expansion_coefficients
from .nevanlinna import (
    QuadratureSpec,
    check_counting_inequality,
    check_first_fundamental,
)
from .rational import Polynomial, RationalFunction
from .theorems import (
    FamilySpec,
    check_diverging_family,
    check_vanishing_family,
    estimate_chain_check,
    harnack_check,
    scan_marty_quotient,
    sharpness_exponent,
)

COMMANDS = (
    "fft-check",
    "counting-check",
    "theorem2a",
    "theorem2b",
    "theorem1-scan",
    "sharpness",
    "estimates",
    "harnack",
    "expansion-dump",
)


class ConfigError(ValueError):
    """Malformed scenario input; maps to exit code 2."""


@dataclass(frozen=True)
class Row:
    index: int
    quantity: str
    value: float | None
    bound: float | None = None
    margin: float | None = None


@dataclass
class ScenarioConfig:
    """Validated scenario: a command plus its typed inputs."""

    command: str
    params: dict = field(default_factory=dict)
    function: RationalFunction | None = None
    family: FamilySpec | None = None
    geometry: DiskGeometry | None = None
    disk: tuple[complex, float] | None = None
    quadrature: QuadratureSpec = QuadratureSpec()
    corpus_spec: dict | None = None
    suite: dict | None = None
    seed: int = 0
    output: str | None = None

    @classmethod
    def from_dict(cls, raw: dict) -> "ScenarioConfig":
        if not isinstance(raw, dict):
            raise ConfigError("scenario must be a JSON object")
        command = raw.get("command")
        if command not in COMMANDS:
            raise ConfigError(
                f"field 'command': expected one of {', '.join(COMMANDS)}, got {command!r}"
            )
        params = dict(raw.get("params", {}))
        try:
            cfg = cls(
                command=command,
                params=params,
                function=_parse_function(raw.get("function")),
                family=_parse_family(raw.get("family")),
                geometry=_parse_geometry(raw.get("geometry")),
                disk=_parse_disk(raw.get("geometry")),
                quadrature=_parse_quadrature(raw.get("quadrature")),
                corpus_spec=raw.get("corpus"),
                suite=raw.get("suite"),
                seed=int(raw.get("seed", 0)),
                output=raw.get("output"),
            )
        except ConfigError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid scenario: {exc}") from exc
        return cfg


def _parse_complex(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise ConfigError(f"expected a number or [re, im] pair, got {v!r}")


def _parse_coeffs(v) -> list[complex]:
    if not isinstance(v, list):
        raise ConfigError("coefficient lists must be JSON arrays")
    return [_parse_complex(c) for c in v]


def _parse_function(raw) -> RationalFunction | None:
    if raw is None:
        return None
    num = _parse_coeffs(raw["num"])
    den = _parse_coeffs(raw.get("den", [1.0]))
    return RationalFunction(Polynomial(num), Polynomial(den))


def _parse_family(raw) -> FamilySpec | None:
    if raw is None:
        return None
    kind = raw.get("kind")
    indices = tuple(int(n) for n in raw.get("indices", [1]))
    if kind == "custom":
        functions = {}
        fns = raw.get("functions", [])
        if len(fns) != len(indices):
            raise ConfigError("custom family needs one function per index")
        for n, fraw in zip(indices, fns):
            functions[n] = _parse_function(fraw)
        return FamilySpec.custom(functions, indices)
    params = {k: raw[k] for k in ("p", "m") if k in raw}
    return FamilySpec(kind, params, indices)


def _parse_geometry(raw) -> DiskGeometry | None:
    if raw is None or "r" not in (raw or {}):
        return None
    if "R" in raw:
        return DiskGeometry.from_radii(float(raw["r"]), float(raw["R"]))
    return None


def _parse_disk(raw) -> tuple[complex, float] | None:
    if raw is None or "radius" not in (raw or {}):
        return None
    center = _parse_complex(raw.get("center", 0.0))
    return (center, float(raw["radius"]))


def _parse_quadrature(raw) -> QuadratureSpec:
    if raw is None:
        return QuadratureSpec()
    return QuadratureSpec(
        initial_nodes=int(raw.get("initial_nodes", 64)),
        tolerance=float(raw.get("tolerance", 1e-9)),
        max_doublings=int(raw.get("max_doublings", 16)),
        circle_clearance=raw.get("circle_clearance"),
    )


# ---------------------------------------------------------------------------
# command handlers: each returns (rows, verdict, residuals, passed)
# ---------------------------------------------------------------------------


def _functions_for(cfg: ScenarioConfig, generator, default_size: int):
    if cfg.function is not None:
        return [cfg.function]
    spec = cfg.corpus_spec or {}
    return generator(cfg.seed, int(spec.get("size", default_size)), spec)


def _run_fft_check(cfg: ScenarioConfig):
    r = float(cfg.params.get("r", 0.7))
    bound = float(cfg.params.get("bound", 1e-6))
    if cfg.function is not None:
        alpha = _parse_complex(cfg.params.get("alpha", 0.0))
        pairs = [(cfg.function, alpha)]
    else:
        spec = cfg.corpus_spec or {}
        pairs = corpus.first_fundamental_corpus(
            cfg.seed,
            int(spec.get("size", 20)),
            r=r,
            clearance=float(spec.get("clearance", 0.05)),
            max_degree=int(spec.get("max_degree", 5)),
        )
    rows = []
    worst = 0.0
    for i, (f, alpha) in enumerate(pairs):
        res = check_first_fundamental(f, r, alpha, cfg.quadrature)
        worst = max(worst, abs(res))
        rows.append(Row(i, "fft_residual", res, bound, bound - abs(res)))
    passed = worst <= bound
    return rows, "pass" if passed else "fail", {"max_abs_residual": worst}, passed


def _run_counting_check(cfg: ScenarioConfig):
    bound = float(cfg.params.get("bound", -1e-12))
    if cfg.function is not None:
        r = float(cfg.params["r"])
        R = float(cfg.params["R"])
        alpha = _parse_complex(cfg.params.get("alpha", 0.0))
        configs = [(cfg.function, r, R, alpha)]
    else:
        spec = cfg.corpus_spec or {}
        configs = corpus.counting_configurations(
            cfg.seed, int(spec.get("size", 100)),
            max_inner=int(spec.get("max_inner", 3)),
        )
    rows = []
    worst = math.inf
    for i, (f, r, R, alpha) in enumerate(configs):
        margin = check_counting_inequality(f, r, R, alpha)
        worst = min(worst, margin)
        rows.append(Row(i, "counting_margin", margin, bound, margin - bound))
    passed = worst >= bound
    return rows, "pass" if passed else "fail", {"min_margin": worst}, passed


def _family_rows(report, bound_fn=None):
    rows = []
    for n, sup in zip(report.indices, report.sup_norms):
        bound = bound_fn(n) if bound_fn else None
        margin = (bound - sup) if bound is not None else None
        rows.append(Row(n, "sup_quotient", sup, bound, margin))
    return rows


def _rising(p: int, k: int) -> float:
    out = 1.0
    for i in range(k):
        out *= p + i
    return out


def _run_family_check(cfg: ScenarioConfig, which: str):
    k = int(cfg.params["k"])
    disk = cfg.disk or (0.0, 0.5)
    expect_pole = bool(cfg.params.get("expect_pole", False))
    try:
        if which == "theorem2a":
            m = int(cfg.params["m"])
            report = check_vanishing_family(cfg.family, k, m, disk)
            bound_fn = None
        else:
            p = int(cfg.params["p"])
            kwargs = {}
            if "inf_threshold" in cfg.params:
                kwargs["inf_threshold"] = float(cfg.params["inf_threshold"])
            report = check_diverging_family(cfg.family, k, p, disk, **kwargs)
            bound_fn = None
            if cfg.family.kind == "custom" and cfg.params.get("predicted") == "power":
                bound_fn = lambda n: _rising(p, k) ** p / n**k
    except HolomorphyError as exc:
        loc = abs(exc.location) if exc.location is not None else math.nan
        rows = [Row(0, "pole_in_disk", loc, None, None)]
        if expect_pole:
            return rows, "pole_error_as_expected", {"pole_abs": loc}, True
        return rows, "unexpected_pole", {"pole_abs": loc}, False
    if expect_pole:
        return (
            _family_rows(report),
            "expected_pole_missing",
            {"slope": report.slope},
            False,
        )
    rows = _family_rows(report, bound_fn)
    residuals = {"slope": report.slope}
    passed = report.verdict == "converges_to_zero"
    return rows, report.verdict, residuals, passed


def _run_theorem1_scan(cfg: ScenarioConfig):
    k = int(cfg.params["k"])
    alpha = float(cfg.params["alpha"])
    disk = cfg.disk or (0.0, 0.5)
    resolution = int(cfg.params.get("resolution", 32))
    report = scan_marty_quotient(cfg.family, k, alpha, disk, resolution=resolution)
    rows = [
        Row(n, "sup_marty_quotient", sup, None, None)
        for n, sup in zip(report.indices, report.sup_norms)
    ]
    residuals = {
        "p_required": float(report.p_required),
        "flagged_poles": float(len(report.flagged)),
        "equality_poles": float(len(report.equality_poles)),
    }
    expected = cfg.params.get("expect", "bounded")
    passed = report.verdict == expected
    return rows, report.verdict, residuals, passed


def _run_sharpness(cfg: ScenarioConfig):
    example = cfg.params["example"]
    k = int(cfg.params["k"])
    alpha = float(cfg.params["alpha"])
    kwargs: dict[str, Any] = {}
    if "p" in cfg.params:
        kwargs["p"] = int(cfg.params["p"])
    if "radii" in cfg.params:
        kwargs["radii"] = tuple(float(x) for x in cfg.params["radii"])
    if "indices" in cfg.params:
        kwargs["indices"] = tuple(int(n) for n in cfg.params["indices"])
    if "points" in cfg.params:
        kwargs["points"] = int(cfg.params["points"])
    report = sharpness_exponent(example, k, alpha, **kwargs)
    rows = []
    if example == "power_pole":
        for i, (x, v) in enumerate(zip(report.abscissae, report.values)):
            rows.append(Row(i, "marty_quotient", v, None, None))
        residuals = {
            "fitted_slope": report.fitted_slope,
            "predicted_slope": report.predicted_slope,
        }
    else:
        for n, v, b in zip(report.abscissae, report.values, report.lower_bounds):
            rows.append(Row(int(n), "marty_quotient", v, b, v - b))
        residuals = {
            "bound_satisfied": 1.0 if report.bound_satisfied else 0.0,
            "diverges": 1.0 if report.diverges else 0.0,
        }
    return rows, "pass" if report.ok else "fail", residuals, report.ok


def _run_estimates(cfg: ScenarioConfig):
    k = int(cfg.params["k"])
    m = int(cfg.params["m"])
    geom = cfg.geometry or DiskGeometry.from_radii(0.5, 0.9)
    grid = int(cfg.params.get("grid", 24))
    if cfg.function is not None:
        members = [cfg.function]
    else:
        size = int((cfg.suite or {}).get("size", 10))
        members = corpus.multiplicity_polynomials(cfg.seed, size, m, k, geom)
    rows = []
    min_rel = math.inf
    for i, g in enumerate(members):
        report = estimate_chain_check(g, k, m, geom, grid=grid)
        for name, margin in sorted(report.margins.items()):
            rows.append(Row(i, f"margin_{name}", margin, 0.0, margin))
            min_rel = min(min_rel, margin / report.lhs_scale)
    passed = min_rel >= -1e-9
    residuals = {"min_relative_margin": min_rel}
    return rows, "pass" if passed else "fail", residuals, passed


def _run_harnack(cfg: ScenarioConfig):
    geom = cfg.geometry or DiskGeometry.from_radii(0.5, 0.9)
    grid = int(cfg.params.get("grid", 16))
    if cfg.function is not None:
        members = [cfg.function]
    else:
        size = int((cfg.suite or {}).get("size", 10))
        members = corpus.zero_free_corpus(cfg.seed, size, geom)
    rows = []
    worst = math.inf
    for i, h in enumerate(members):
        margin = harnack_check(h, geom, grid=grid)
        worst = min(worst, margin)
        rows.append(Row(i, "harnack_margin", margin, 0.0, margin))
    passed = worst >= -1e-12
    return rows, "pass" if passed else "fail", {"min_margin": worst}, passed


def _run_expansion_dump(cfg: ScenarioConfig, outdir: str, basename: str):
    k = int(cfg.params["k"])
    table = expansion_coefficients(k)
    rows = []
    for i, (l, parts, coeff) in enumerate(table.terms):
        label = "c[l=%d;parts=%s]" % (l, "+".join(str(j) for j in parts))
        rows.append(Row(i, label, float(coeff), None, None))
    path = os.path.join(outdir, f"{basename}_table.json")
    _atomic_write(path, table.to_json())
    # spot-check the identity the table encodes
    g = RationalFunction(Polynomial([1.0, 0.4]), Polynomial([2.0, 1.0]))
    worst = 0.0
    for z in (0.1, -0.2 + 0.1j, 0.3j, 0.25, -0.4):
        worst = max(worst, check_identity(g, k, z, 1e-8))
    passed = worst <= 1e-8
    return rows, "pass" if passed else "fail", {"identity_residual": worst}, passed


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------


def _atomic_write(path: str, text: str):
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float) and math.isnan(v):
        return "nan"
    return repr(float(v))


def emit_results(rows, summary: dict, outdir: str, basename: str,
                 plot: bool = False) -> dict:
    """Write CSV + JSON (and optionally a PNG); returns the paths."""
    os.makedirs(outdir, exist_ok=True)
    csv_path = os.path.join(outdir, f"{basename}.csv")
    lines = ["index,quantity,value,bound,margin"]
    for r in rows:
        lines.append(
            f"{r.index},{r.quantity},{_fmt(r.value)},{_fmt(r.bound)},{_fmt(r.margin)}"
        )
    _atomic_write(csv_path, "\n".join(lines) + "\n")
    json_path = os.path.join(outdir, f"{basename}.json")
    _atomic_write(json_path, json.dumps(summary, sort_keys=True, indent=2) + "\n")
    paths = {"csv": csv_path, "json": json_path}
    if plot:
        from .plots import render_records

        png_path = os.path.join(outdir, f"{basename}.png")
        rendered = render_records(rows, summary, png_path)
        if rendered:
            paths["png"] = rendered
    return paths


def run_scenario(cfg: ScenarioConfig, outdir: str, *, basename: str | None = None,
                 plot: bool = False) -> int:
    """Execute one scenario and write its artifacts.

    Returns 0 when the scenario's contracts pass, 1 otherwise.  Input
    problems raise ConfigError (exit 2 at the CLI level).
    """
    basename = basename or cfg.output or cfg.command
    start = time.perf_counter()
    try:
        if cfg.command == "fft-check":
            rows, verdict, residuals, passed = _run_fft_check(cfg)
        elif cfg.command == "counting-check":
            rows, verdict, residuals, passed = _run_counting_check(cfg)
        elif cfg.command in ("theorem2a", "theorem2b"):
            if cfg.family is None:
                raise ConfigError(f"{cfg.command} needs a 'family' block")
            rows, verdict, residuals, passed = _run_family_check(cfg, cfg.command)
        elif cfg.command == "theorem1-scan":
            if cfg.family is None:
                raise ConfigError("theorem1-scan needs a 'family' block")
            rows, verdict, residuals, passed = _run_theorem1_scan(cfg)
        elif cfg.command == "sharpness":
            rows, verdict, residuals, passed = _run_sharpness(cfg)
        elif cfg.command == "estimates":
            rows, verdict, residuals, passed = _run_estimates(cfg)
        elif cfg.command == "harnack":
            rows, verdict, residuals, passed = _run_harnack(cfg)
        else:
            rows, verdict, residuals, passed = _run_expansion_dump(
                cfg, outdir, basename
            )
    except KeyError as exc:
        raise ConfigError(f"{cfg.command}: missing required field {exc}") from exc
    runtime_ms = (time.perf_counter() - start) * 1000.0
    summary = {
        "command": cfg.command,
        "params": _jsonable(cfg.params),
        "verdict": verdict,
        "residuals": _jsonable(residuals),
        "runtime_ms": runtime_ms,
    }
    emit_results(rows, summary, outdir, basename, plot=plot)
    return 0 if passed else 1


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.floating, np.integer)):
        return float(obj)
    return obj


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _apply_overrides(raw: dict, args) -> dict:
    raw = dict(raw)
    if args.seed is not None:
        raw["seed"] = args.seed
    quad = dict(raw.get("quadrature", {}))
    if args.quad_nodes is not None:
        quad["initial_nodes"] = args.quad_nodes
    if args.tol is not None:
        quad["tolerance"] = args.tol
    if quad:
        raw["quadrature"] = quad
    if args.grid is not None:
        params = dict(raw.get("params", {}))
        params["resolution"] = args.grid
        params["grid"] = args.grid
        raw["params"] = params
    return raw


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="martykit",
        description="Run verification scenarios and emit CSV/JSON results.",
    )
    parser.add_argument("--config", required=True, help="scenario JSON file")
    parser.add_argument("--out", default="results", help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--quad-nodes", type=int, default=None,
                        help="override quadrature initial node count")
    parser.add_argument("--tol", type=float, default=None,
                        help="override quadrature tolerance")
    parser.add_argument("--grid", type=int, default=None,
                        help="override grid/scan resolution")
    parser.add_argument("--plot", action="store_true",
                        help="render a figure per scenario next to the CSV")
    args = parser.parse_args(argv)

    try:
        with open(args.config) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config {args.config}: {exc}", file=sys.stderr)
        return 2

    scenarios = raw if isinstance(raw, list) else [raw]
    status = 0
    for i, raw_cfg in enumerate(scenarios):
        try:
            cfg = ScenarioConfig.from_dict(_apply_overrides(raw_cfg, args))
            basename = cfg.output or (
                cfg.command if len(scenarios) == 1 else f"{i:02d}_{cfg.command}"
            )
            code = run_scenario(cfg, args.out, basename=basename, plot=args.plot)
            status = max(status, code)
            print(f"[{basename}] exit {code}", file=sys.stderr)
        except ConfigError as exc:
            print(f"error: scenario {i}: {exc}", file=sys.stderr)
            return 2
        except MartykitError as exc:
            print(f"error: scenario {i}: {type(exc).__name__}: {exc}", file=sys.stderr)
            status = max(status, 1)
        except OSError as exc:
            print(f"error: scenario {i}: {exc}", file=sys.stderr)
            return 2
    return status


if __name__ == "__main__":
    sys.exit(main())
