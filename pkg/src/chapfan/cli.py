"""Command line interface: classify / solve / delta / subsolve / verify /
dissipation / sweep, with deterministic JSON or CSV output and optional
matplotlib figure rendering next to the delimited output."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass

from . import __version__
from .core import RiemannData, State2D
from .delta_shock import (
    DeltaShockSolution,
    delta_energy_margin,
    generalized_rh_residual,
    solve_delta,
)
from .errors import DomainError, InfeasibleError, RegimeError
from .riemann1d import (
    classify,
    curve_tolerance,
    delta_threshold,
    sample_profile,
    solve_classical,
)
from .subsolution import (
    ConstructionOptions,
    FanSubsolution,
    MiddleState,
    TracelessSym2,
    beta,
    construct,
    epsilon1,
    epsilon2_bound,
    interface_speeds,
    rho_max,
    verify_fan,
)
from .verify import (
    classical_fan_field,
    compare_admissibility,
    delta_weak_residual,
    subsolution_fan_field,
    weak_residual,
)

_RUN_KEYS = {
    "rho_minus",
    "v_minus",
    "rho_plus",
    "v_plus",
    "rho1",
    "eps2",
    "t",
    "L",
    "steps",
    "rho1_min",
    "rho1_max",
    "seed",
    "format",
    "profile",
}


# --- deterministic serialization ---------------------------------------------


def _format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    text = format(float(x), ".17g")
    if not any(c in text for c in ".eE"):
        text += ".0"  # keep the value a float on round trip
    return text


def _to_json(obj, indent: int = 0) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        body = ",\n".join(inner + _to_json(v, indent + 1) for v in obj)
        return "[\n" + body + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        body = ",\n".join(
            f"{inner}{json.dumps(str(k))}: {_to_json(v, indent + 1)}"
            for k, v in obj.items()
        )
        return "{\n" + body + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _flatten(obj, prefix: str = "") -> list[tuple[str, object]]:
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            out.extend(_flatten(v, f"{prefix}.{k}" if prefix else str(k)))
        return out
    if isinstance(obj, (list, tuple)):
        out = []
        for i, v in enumerate(obj):
            out.extend(_flatten(v, f"{prefix}[{i}]"))
        return out
    return [(prefix, obj)]


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return _format_float(value)
    if value is None:
        return ""
    return str(value)


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(_to_json(payload) + "\n")
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    for key, value in _flatten(payload):
        writer.writerow([key, _csv_cell(value)])
    sys.stdout.write(buf.getvalue())


def _emit_table(header: list[str], rows: list[list], fmt: str, payload: dict) -> None:
    if fmt == "json":
        _emit(payload, "json")
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(v) for v in row])
    sys.stdout.write(buf.getvalue())


# --- run specification ---------------------------------------------------------


def _load_run_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _RUN_KEYS:
                raise DomainError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = value
    return values


def _parse_velocity(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise DomainError(f"velocity must be 'v1,v2', got {text!r}")
    try:
        return (float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise DomainError(f"velocity must be numeric, got {text!r}") from exc


def _parse_eps2(text: str) -> str | float:
    if text in ("half", "equality"):
        return text
    try:
        return float(text)
    except ValueError as exc:
        raise DomainError(
            f"eps2 must be 'half', 'equality' or a fraction in (0,1), got {text!r}"
        ) from exc


def _parse_profile(text: str) -> tuple[float, int]:
    t, n = 1.0, 400
    for part in text.split(":"):
        key, sep, value = part.partition("=")
        if not sep:
            raise DomainError(f"profile spec must look like 't=1:n=400', got {text!r}")
        if key == "t":
            t = float(value)
        elif key == "n":
            n = int(value)
        else:
            raise DomainError(f"unknown profile key {key!r}")
    if not t > 0.0 or n < 2:
        raise DomainError(f"profile requires t > 0 and n >= 2, got {text!r}")
    return (t, n)


@dataclass
class RunSpec:
    data: RiemannData | None
    rho1: float | None
    eps2: str | float
    t: float
    L: float
    steps: int
    rho1_min: float | None
    rho1_max: float | None
    seed: int
    fmt: str
    profile: tuple[float, int] | None


def _resolve_spec(args: argparse.Namespace, *, need_data: bool = True) -> RunSpec:
    run: dict[str, str] = {}
    run_file = getattr(args, "run_file", None)
    if run_file:
        run = _load_run_file(run_file)

    def pick(flag_name: str, key: str, cast, default=None):
        flag = getattr(args, flag_name, None)
        if flag is not None:
            return flag
        if key in run:
            return cast(run[key])
        return default

    data = None
    rho_minus = pick("rho_minus", "rho_minus", float)
    v_minus = pick("v_minus", "v_minus", _parse_velocity)
    rho_plus = pick("rho_plus", "rho_plus", float)
    v_plus = pick("v_plus", "v_plus", _parse_velocity)
    present = [v is not None for v in (rho_minus, v_minus, rho_plus, v_plus)]
    if need_data:
        if not all(present):
            raise DomainError(
                "Riemann data requires --rho-minus, --v-minus, --rho-plus, --v-plus "
                "(flags or run file)"
            )
        data = RiemannData(
            State2D(rho_minus, v_minus[0], v_minus[1]),
            State2D(rho_plus, v_plus[0], v_plus[1]),
        )

    fmt = pick("fmt", "format", str)
    if fmt is None:
        fmt = os.environ.get("CHAPFAN_FORMAT", "json")
    if fmt not in ("json", "csv"):
        raise DomainError(f"format must be 'json' or 'csv', got {fmt!r}")

    return RunSpec(
        data=data,
        rho1=pick("rho1", "rho1", float),
        eps2=pick("eps2", "eps2", _parse_eps2, "half"),
        t=pick("t", "t", float, 1.0),
        L=pick("L", "L", float, 10.0),
        steps=pick("steps", "steps", int, 10),
        rho1_min=pick("rho1_min", "rho1_min", float),
        rho1_max=pick("rho1_max", "rho1_max", float),
        seed=pick("seed", "seed", int, 0),
        fmt=fmt,
        profile=pick("profile", "profile", _parse_profile),
    )


def _state_dict(s: State2D) -> dict:
    return {"rho": s.rho, "v1": s.v1, "v2": s.v2}


def _data_dict(data: RiemannData) -> dict:
    return {"left": _state_dict(data.left), "right": _state_dict(data.right)}


def _data_from_dict(d: dict) -> RiemannData:
    try:
        return RiemannData(
            State2D(d["left"]["rho"], d["left"]["v1"], d["left"]["v2"]),
            State2D(d["right"]["rho"], d["right"]["v1"], d["right"]["v2"]),
        )
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed input block: {exc!r}") from exc


def _middle_dict(ms: MiddleState) -> dict:
    return {
        "rho": ms.rho,
        "alpha": ms.alpha,
        "beta": ms.beta,
        "gamma": ms.gamma,
        "delta": ms.delta,
        "C": ms.C,
    }


def _sub_dict(sub: FanSubsolution) -> dict:
    return {
        "kind": "fan_subsolution",
        "nu_minus": sub.nu_minus,
        "nu0": sub.nu0,
        "nu_plus": sub.nu_plus,
        "state1": _middle_dict(sub.state1),
        "state2": _middle_dict(sub.state2),
    }


def _middle_from_dict(d: dict) -> MiddleState:
    return MiddleState(
        d["rho"], d["alpha"], d["beta"], TracelessSym2(d["gamma"], d["delta"]), d["C"]
    )


def _sub_from_dict(data: RiemannData, d: dict) -> FanSubsolution:
    try:
        return FanSubsolution(
            data=data,
            nu_minus=d["nu_minus"],
            nu0=d["nu0"],
            nu_plus=d["nu_plus"],
            state1=_middle_from_dict(d["state1"]),
            state2=_middle_from_dict(d["state2"]),
        )
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed fan_subsolution block: {exc!r}") from exc


def _payload(data: RiemannData | None, result: dict, report: dict) -> dict:
    return {
        "input": _data_dict(data) if data is not None else None,
        "result": result,
        "report": report,
        "version": __version__,
    }


# --- commands -------------------------------------------------------------------


def cmd_classify(args: argparse.Namespace) -> int:
    spec = _resolve_spec(args)
    data = spec.data
    tag = classify(data)
    result = {
        "regime": tag.kind.value,
        "family": tag.family,
        "thm2_window": tag.thm2_window,
        "u": data.u,
        "delta_threshold": delta_threshold(data),
        "window_floor": max(1.0 / data.left.rho, 1.0 / data.right.rho),
    }
    report = {"curve_tolerance": curve_tolerance(data)}
    _emit(_payload(data, result, report), spec.fmt)
    return 0


def cmd_solve(args: argparse.Namespace) -> int:
    spec = _resolve_spec(args)
    data = spec.data
    sol = solve_classical(data)
    waves = [
        {
            "speed": w.speed,
            "family": w.family,
            "left": _state_dict(w.left),
            "right": _state_dict(w.right),
        }
        for w in sol.waves
    ]
    result = {
        "regime": classify(data).kind.value,
        "middle": (
            {"rho": sol.middle[0], "v2": sol.middle[1]} if sol.middle else None
        ),
        "waves": waves,
    }
    from .riemann1d import check_rh_jump
    from .core import energy_density, energy_flux_x2

    max_rh = 0.0
    max_energy = 0.0
    for w in sol.waves:
        max_rh = max(max_rh, max(abs(r) for r in check_rh_jump(w.left, w.right, w.speed)))
        max_energy = max(
            max_energy,
            abs(
                w.speed * (energy_density(w.right) - energy_density(w.left))
                - (energy_flux_x2(w.right) - energy_flux_x2(w.left))
            ),
        )
    report = {"max_rh_residual": max_rh, "max_energy_jump": max_energy}

    profile = spec.profile
    if profile is None and (spec.fmt == "csv" or args.plot):
        profile = (1.0, 400)

    rows = []
    if profile is not None:
        t, n = profile
        speeds = [w.speed for w in sol.waves]
        span = max(
            [abs(s) for s in speeds]
            + [1.0 / data.left.rho, 1.0 / data.right.rho]
        )
        width = 1.6 * span * t
        for i in range(n):
            x2 = -width + 2.0 * width * i / (n - 1)
            s = sample_profile(sol, data, t, x2)
            rows.append([x2, s.rho, s.v1, s.v2])

    if args.plot:
        from .plotting import save_profile_figure

        save_profile_figure(sol, profile[0], profile[1], args.plot)
        report["figure"] = args.plot

    if spec.fmt == "csv":
        _emit_table(["x2", "rho", "v1", "v2"], rows, "csv", {})
        return 0
    if profile is not None and spec.profile is not None:
        result["profile"] = {
            "t": profile[0],
            "n": profile[1],
            "rows": rows,
        }
    _emit(_payload(data, result, report), "json")
    return 0


def cmd_delta(args: argparse.Namespace) -> int:
    spec = _resolve_spec(args)
    data = spec.data
    ds = solve_delta(data)
    residuals = generalized_rh_residual(data, ds)
    energy = delta_energy_margin(data, ds)
    lft, rgt = data.left, data.right
    result = {
        "kind": "delta_shock",
        "omega_slope": ds.omega_slope,
        "sigma": ds.sigma,
        "xi": ds.xi,
    }
    report = {
        "rh_residuals": list(residuals),
        "sigma_bracketed": rgt.v2 < ds.sigma < lft.v2,
        "xi_bracketed": min(lft.v1, rgt.v1) <= ds.xi <= max(lft.v1, rgt.v1),
        "energy": {
            "cross_residual": energy.cross_residual,
            "flux_residual": energy.flux_residual,
            "cubic_margin": energy.cubic_margin,
            "endpoint_minus": energy.endpoint_minus,
            "endpoint_plus": energy.endpoint_plus,
            "passed": energy.passed,
        },
    }
    _emit(_payload(data, result, report), spec.fmt)
    return 0


def cmd_subsolve(args: argparse.Namespace) -> int:
    spec = _resolve_spec(args)
    data = spec.data
    opts = ConstructionOptions(rho1=spec.rho1, epsilon2=spec.eps2)
    sub = construct(data, opts)
    report_obj = verify_fan(data, sub)
    result = _sub_dict(sub)
    report = {
        "verification": report_obj.as_dict(),
        "rho_max": rho_max(data),
    }
    _emit(_payload(data, result, report), spec.fmt)
    return 0 if report_obj.admissible else 1


def cmd_verify(args: argparse.Namespace) -> int:
    spec = _resolve_spec(args, need_data=False)
    if args.input == "-":
        payload = json.load(sys.stdin)
    else:
        with open(args.input, encoding="utf-8") as fh:
            payload = json.load(fh)
    if not isinstance(payload, dict) or "input" not in payload or "result" not in payload:
        raise DomainError("verify expects a JSON payload with 'input' and 'result'")
    data = _data_from_dict(payload["input"])
    result = payload["result"]
    kind = result.get("kind") if isinstance(result, dict) else None

    if kind == "fan_subsolution":
        sub = _sub_from_dict(data, result)
        rep = verify_fan(data, sub)
        report = rep.as_dict()
        failures = list(rep.failures)
        if args.weak:
            value = weak_residual(subsolution_fan_field(sub), args.weak, seed=spec.seed)
            report["weak_residual"] = value
            if not value <= 1e-8:
                failures.append("weak_form")
        report["failures"] = failures
        report["verdict"] = "ADMISSIBLE" if not failures else "REJECTED"
        _emit(_payload(data, result, report), spec.fmt)
        return 0 if not failures else 1

    if kind == "delta_shock":
        ds = DeltaShockSolution(result["omega_slope"], result["sigma"], result["xi"])
        residuals = generalized_rh_residual(data, ds)
        energy = delta_energy_margin(data, ds)
        failures = []
        if max(abs(r) for r in residuals) > 1e-10:
            failures.append("generalized_rh")
        if not energy.passed:
            failures.append("energy_margin")
        if not data.right.v2 < ds.sigma < data.left.v2:
            failures.append("sigma_bracket")
        report = {
            "rh_residuals": list(residuals),
            "cubic_margin": energy.cubic_margin,
            "failures": failures,
            "verdict": "ADMISSIBLE" if not failures else "REJECTED",
        }
        if args.weak:
            value = delta_weak_residual(data, ds, args.weak, seed=spec.seed)
            report["weak_residual"] = value
            if not value <= 1e-8:
                failures.append("weak_form")
                report["failures"] = failures
                report["verdict"] = "REJECTED"
        _emit(_payload(data, result, report), spec.fmt)
        return 0 if not failures else 1

    raise DomainError(f"unrecognized result kind {kind!r}")


def cmd_dissipation(args: argparse.Namespace) -> int:
    spec = _resolve_spec(args)
    data = spec.data
    opts = ConstructionOptions(rho1=spec.rho1, epsilon2=spec.eps2)
    sub_field = subsolution_fan_field(construct(data, opts))
    tag = classify(data)
    classical = None
    if tag.kind.value != "delta_shock":
        classical = classical_fan_field(solve_classical(data))
    report_obj = compare_admissibility(data, classical, sub_field, spec.t, spec.L)
    result = report_obj.as_dict()
    report = {
        "classical_dominated": report_obj.classical_dominated,
        "outer_interfaces_dissipate": report_obj.sub_d[0] > 0.0
        and report_obj.sub_d[-1] > 0.0,
    }
    if args.plot:
        from .plotting import save_dissipation_figure

        save_dissipation_figure(report_obj, args.plot)
        report["figure"] = args.plot
    _emit(_payload(data, result, report), spec.fmt)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    spec = _resolve_spec(args)
    data = spec.data
    if spec.rho1_min is None or spec.rho1_max is None:
        raise DomainError("sweep requires --rho1-min and --rho1-max")
    if not spec.rho1_min < spec.rho1_max:
        raise DomainError("sweep requires rho1_min < rho1_max")
    if spec.steps < 1:
        raise DomainError("sweep requires steps >= 1")
    cap = rho_max(data)
    rows = []
    for i in range(spec.steps):
        if spec.steps == 1:
            rho1 = spec.rho1_min
        else:
            rho1 = spec.rho1_min + (spec.rho1_max - spec.rho1_min) * i / (spec.steps - 1)
        eps1 = epsilon1(data, rho1)
        nu_minus, nu_plus = interface_speeds(data, rho1)
        b0 = beta(data, rho1)
        bound = None
        if eps1 > 0.0:
            bound = epsilon2_bound(data.shifted(0.0, -b0), rho1, eps1, strict=False)
        in_window = rho1 < cap
        feasible = eps1 > 0.0 and bound is not None and bound > 0.0
        try:
            sub = construct(data, ConstructionOptions(rho1=rho1, epsilon2=spec.eps2))
            verdict = verify_fan(data, sub).verdict
        except (InfeasibleError, DomainError) as exc:
            verdict = "INFEASIBLE"
        rows.append(
            {
                "rho1": rho1,
                "eps1": eps1,
                "nu_minus": nu_minus,
                "beta": b0,
                "nu_plus": nu_plus,
                "eps2_bound": bound,
                "in_window": in_window,
                "feasible": feasible,
                "verdict": verdict,
            }
        )
    report = {"rho_max": cap, "rows": len(rows)}
    if args.plot:
        from .plotting import save_sweep_figure

        save_sweep_figure(rows, args.plot)
        report["figure"] = args.plot
    header = list(rows[0].keys())
    table = [[row[k] for k in header] for row in rows]
    _emit_table(header, table, spec.fmt, _payload(data, {"rows": rows}, report))
    return 0


# --- parser ----------------------------------------------------------------------


def _add_data_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--rho-minus", type=float, help="left density")
    parser.add_argument("--v-minus", type=_parse_velocity, help="left velocity 'v1,v2'")
    parser.add_argument("--rho-plus", type=float, help="right density")
    parser.add_argument("--v-plus", type=_parse_velocity, help="right velocity 'v1,v2'")
    parser.add_argument("--run-file", help="key = value file supplying any option")
    parser.add_argument("--format", dest="fmt", choices=("json", "csv"),
                        help="output format (default: $CHAPFAN_FORMAT or json)")
    parser.add_argument("--seed", type=int, help="seed for randomized checks")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chapfan",
        description="Chaplygin-gas Riemann problems: classical fans, delta shocks, "
        "and certified fan subsolutions",
    )
    parser.add_argument("--version", action="version", version=f"chapfan {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="regime of the Riemann data")
    _add_data_options(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("solve", help="classical contact fan")
    _add_data_options(p)
    p.add_argument("--profile", type=_parse_profile,
                   help="sample the profile, e.g. 't=1:n=400'")
    p.add_argument("--plot", help="write a profile figure to this path")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("delta", help="delta-shock solution and its admissibility")
    _add_data_options(p)
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("subsolve", help="construct and certify a fan subsolution")
    _add_data_options(p)
    p.add_argument("--rho1", type=float, help="middle density (default: automatic)")
    p.add_argument("--eps2", type=_parse_eps2, help="'half', 'equality' or fraction")
    p.set_defaults(func=cmd_subsolve)

    p = sub.add_parser("verify", help="re-certify a solution payload from JSON")
    _add_data_options(p)
    p.add_argument("--input", required=True, help="payload path or '-' for stdin")
    p.add_argument("--weak", type=int, default=0,
                   help="additionally run N weak-form test functions")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dissipation", help="energy-dissipation comparison on a box")
    _add_data_options(p)
    p.add_argument("--rho1", type=float)
    p.add_argument("--eps2", type=_parse_eps2)
    p.add_argument("--t", type=float, help="time of the box check (default 1)")
    p.add_argument("--L", type=float, help="box half-width (default 10)")
    p.add_argument("--plot", help="write a dissipation figure to this path")
    p.set_defaults(func=cmd_dissipation)

    p = sub.add_parser("sweep", help="feasibility table over a rho1 grid")
    _add_data_options(p)
    p.add_argument("--rho1-min", type=float)
    p.add_argument("--rho1-max", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--eps2", type=_parse_eps2)
    p.add_argument("--plot", help="write a sweep figure to this path")
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (RegimeError, InfeasibleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
