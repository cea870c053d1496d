"""Command-line front end: ``qdeform {eval,verify,spectrum,coherent}``.

Parameters come from a preset, explicit ``--alpha/--beta/--l/--q`` flags,
or a flat ``key=value`` config file; flags override the file, and explicit
parameter flags override preset values.  Output is JSON by default with
sorted keys and floats printed to 17 significant digits so that identical
invocations produce identical bytes.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input
(unknown preset, parameters outside a family's domain, restriction
violations, or a coherent state outside its convergence radius).
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import __version__, coherent, measures, oscillator, polynomials, suites
from .errors import ConvergenceError, QDeformError
from .oscillator import DeformationParams
from .polynomials import DISCRETE_I_POINT, DISCRETE_II_POINT, PolynomialFamily

FORMATS = ("json", "csv", "text")
PRESET_FAMILY = {
    "classical": "classical",
    "hermite_I": "discrete_I",
    "hermite_i": "discrete_I",
    "hermite_II": "discrete_II",
    "hermite_ii": "discrete_II",
}

# defaults applied after flags and config file are merged
DEFAULTS: dict[str, object] = {
    "c": 1.0,
    "format": "json",
    "n": 0,
    "x": 0.0,
    "suite": "all",
    "kmax": 80,
    "dim": 128,
    "ntrunc": 200,
    "z": "0",
    "zgrid": "0,0.25,0.5,0.75,1",
}
_TYPES = {
    "q": float, "alpha": float, "beta": float, "l": float, "c": float,
    "n": int, "x": float, "kmax": int, "dim": int, "ntrunc": int,
}


class UsageError(QDeformError):
    """Bad command-line input; exit code 2."""


@dataclass
class RunConfig:
    """Resolved settings for one invocation."""

    command: str
    params: DeformationParams
    preset: str | None
    family: PolynomialFamily | None
    family_error: str | None
    tolerances: dict[str, float]
    sizes: dict[str, int]
    fmt: str = "json"
    out: str | None = None
    extra: dict[str, object] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "params": self.params.as_dict(),
            "preset": self.preset,
            "family": self.family.kind if self.family else None,
            "c": self.family.c if self.family else self.extra.get("c"),
            "tolerances": dict(self.tolerances),
            "sizes": dict(self.sizes),
            "format": self.fmt,
            **{k: v for k, v in self.extra.items() if k != "c"},
        }


# ---------------------------------------------------------------------------
# deterministic serialization


def _num(x: float) -> str | None:
    if not math.isfinite(x):
        return None
    return format(x, ".17g")


def to_jsonable(obj):
    """Convert numpy and complex values into plain JSON-ready objects."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    return obj


def dumps(obj, indent: int = 2) -> str:
    """JSON text with sorted keys and floats at 17 significant digits.

    Non-finite floats become null.
    """
    import json

    def enc(o, level: int) -> str:
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{json.dumps(k)}: {enc(o[k], level + 1)}" for k in sorted(o)]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, list):
            if not o:
                return "[]"
            return "[\n" + ",\n".join(pad + enc(v, level + 1) for v in o) + "\n" + end + "]"
        if o is None:
            return "null"
        if isinstance(o, bool):
            return "true" if o else "false"
        if isinstance(o, int):
            return str(o)
        if isinstance(o, float):
            s = _num(o)
            return "null" if s is None else s
        return json.dumps(o, ensure_ascii=False)

    return enc(to_jsonable(obj), 0) + "\n"


def _csv(rows: Sequence[Sequence[object]], header: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(["" if v is None else (_num(v) or "nan") if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _report(cfg: RunConfig, checks: list[dict], **payload) -> dict:
    return {"tool_version": __version__, "command": cfg.command, "config": cfg.as_dict(), "checks": checks, **payload}


# ---------------------------------------------------------------------------
# argument handling


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("parameters")
    g.add_argument("--preset", help=f"named parameter point: {', '.join(oscillator.PRESET_NAMES)}, bm_a, bm_b, symmetric(L)")
    g.add_argument("--family", choices=polynomials.KINDS, help="polynomial family (default: from preset or parameters)")
    g.add_argument("--q", type=float, help="deformation base (default 0.5; 2.0 for bm_b)")
    g.add_argument("--alpha", type=float, help="structure-function exponent alpha")
    g.add_argument("--beta", type=float, help="structure-function offset beta (default 0)")
    g.add_argument("--l", type=float, help="second base exponent, q' = q^(l-1)")
    g.add_argument("--c", type=float, help="type-II lattice parameter c > 0 (default 1)")
    o = p.add_argument_group("output")
    o.add_argument("--format", choices=FORMATS, help="output format (default json)")
    o.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    o.add_argument("--config", metavar="PATH", help="flat key=value file; command-line flags win")
    tol_names = ", ".join(f"{k}={v:g}" for k, v in suites.DEFAULT_TOLERANCES.items())
    p.add_argument_group("tolerances", f"--tol.NAME VALUE (or --tol.NAME=VALUE) overrides a tolerance; defaults: {tol_names}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdeform", description="Generalized q-deformed oscillators: evaluation and verification.")
    parser.add_argument("--version", action="version", version=f"qdeform {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate h_n(x) by every applicable route")
    _common(p)
    p.add_argument("--n", type=int, help="degree (default 0)")
    p.add_argument("--x", type=float, help="evaluation point (default 0)")

    p = sub.add_parser("verify", help="run verification suites")
    _common(p)
    p.add_argument("--suite", choices=suites.SUITE_NAMES, help="suite to run (default all)")
    p.add_argument("--kmax", type=int, help="lattice truncation for measures (default 80)")
    p.add_argument("--dim", type=int, help="matrix truncation (default 128; relations use 64)")
    p.add_argument("--ntrunc", type=int, help="coherent-state truncation (default 200)")

    p = sub.add_parser("spectrum", help="position-operator spectrum and self-adjointness")
    _common(p)
    p.add_argument("--dim", type=int, help="largest truncation size (default 128)")
    p.add_argument("--classify-only", action="store_true", default=None, help="only report the self-adjointness verdict")

    p = sub.add_parser("coherent", help="coherent state of the annihilation operator")
    _common(p)
    p.add_argument("--z", help="eigenvalue, complex allowed, e.g. 0.5 or 0.3+0.4j (default 0)")
    p.add_argument("--ntrunc", type=int, help="Fock truncation (default 200)")
    p.add_argument("--zgrid", help="comma-separated z values for the overlap table (default 0,0.25,0.5,0.75,1)")
    p.add_argument("--coefficients", action="store_true", default=None, help="include the Fock coefficients")
    return parser


def _split_tolerances(argv: Sequence[str]) -> tuple[list[str], dict[str, str]]:
    rest: list[str] = []
    tols: dict[str, str] = {}
    i = 0
    while i < len(argv):
        a = argv[i]
        if a.startswith("--tol."):
            key = a[len("--tol."):]
            if "=" in key:
                key, val = key.split("=", 1)
            else:
                if i + 1 >= len(argv):
                    raise UsageError(f"{a} needs a value")
                val = argv[i + 1]
                i += 1
            tols[key] = val
        else:
            rest.append(a)
        i += 1
    return rest, tols


def read_config(path: str) -> dict[str, str]:
    """Parse a flat ``key = value`` file; blank lines and ``#`` comments are skipped."""
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            k, v = (s.strip() for s in line.split("=", 1))
            out[k.replace("-", "_")] = v
    return out


def _parse_float_tol(name: str, val) -> float:
    if name not in suites.DEFAULT_TOLERANCES:
        raise UsageError(f"unknown tolerance {name!r}; known: {', '.join(suites.DEFAULT_TOLERANCES)}")
    try:
        v = float(val)
    except ValueError as exc:
        raise UsageError(f"tolerance {name} must be a number (got {val!r})") from exc
    if not v > 0:
        raise UsageError(f"tolerance {name} must be positive")
    return v


def _merge(ns: argparse.Namespace, cli_tols: dict[str, str]) -> tuple[dict[str, object], dict[str, float]]:
    values = {k: v for k, v in vars(ns).items() if v is not None and k not in ("command", "config")}
    tols: dict[str, float] = {}
    if ns.config:
        for k, v in read_config(ns.config).items():
            if k.startswith("tol."):
                tols[k[4:]] = _parse_float_tol(k[4:], v)
            elif k not in values:
                conv = _TYPES.get(k)
                if k in ("classify_only", "coefficients"):
                    values[k] = v.lower() in ("1", "true", "yes", "on")
                else:
                    try:
                        values[k] = conv(v) if conv else v
                    except ValueError as exc:
                        raise UsageError(f"config key {k}: cannot parse {v!r}") from exc
    for k, v in cli_tols.items():
        tols[k] = _parse_float_tol(k, v)
    for k, v in DEFAULTS.items():
        values.setdefault(k, v)
    if values["format"] not in FORMATS:
        raise UsageError(f"format must be one of {FORMATS}")
    return values, {**suites.DEFAULT_TOLERANCES, **tols}


def resolve_params(values: dict[str, object]) -> tuple[DeformationParams, str | None]:
    """Parameters from preset and explicit flags; explicit flags override the preset."""
    name = values.get("preset")
    if name:
        base = oscillator.preset(str(name), values.get("q"), values.get("l"))
        a = values.get("alpha", base.alpha)
        b = values.get("beta", base.beta)
        l = values.get("l", base.l)
        return DeformationParams(float(a), float(b), float(l), base.q), str(name)
    values = {"q": 0.5, "beta": 0.0, **values}
    fam = values.get("family")
    if fam in ("discrete_I", "discrete_II", "classical") and "alpha" not in values and "l" not in values:
        a, b, l = {"discrete_I": DISCRETE_I_POINT, "discrete_II": DISCRETE_II_POINT, "classical": (0.0, 0.0, 1.0)}[fam]
        return DeformationParams(a, b, l, float(values["q"])), None
    if "alpha" not in values and "l" not in values:
        # no parameters at all: the discrete type-I point
        return oscillator.preset("hermite_I", float(values["q"])), "hermite_I"
    if "alpha" not in values or "l" not in values:
        raise UsageError("explicit parameters need both --alpha and --l (or use --preset)")
    return DeformationParams(float(values["alpha"]), float(values["beta"]), float(values["l"]), float(values["q"])), None


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= 1e-12


def resolve_family(kind: str | None, params: DeformationParams, preset: str | None, c: float) -> PolynomialFamily:
    """Pick the polynomial family: explicit kind, then preset, then parameter shape."""
    if kind is None and preset is not None:
        kind = PRESET_FAMILY.get(preset)
    if kind is None:
        a, b, l = params.alpha, params.beta, params.l
        if (a, b, l) == (0.0, 0.0, 1.0):
            kind = "classical"
        elif _close(a, DISCRETE_I_POINT[0]) and _close(b, DISCRETE_I_POINT[1]) and _close(l, DISCRETE_I_POINT[2]):
            kind = "discrete_I"
        elif _close(a, DISCRETE_II_POINT[0]) and _close(b, DISCRETE_II_POINT[1]) and _close(l, DISCRETE_II_POINT[2]):
            kind = "discrete_II"
        elif _close(a, -(l - 1)):
            kind = "generalized_II"
        else:
            kind = "generalized_I"
    if kind == "classical":
        return PolynomialFamily.classical()
    if kind == "discrete_I":
        return PolynomialFamily.discrete_I(params.q)
    if kind == "discrete_II":
        return PolynomialFamily.discrete_II(params.q, c)
    return PolynomialFamily(kind, params, c if kind == "generalized_II" else 1.0)


def make_config(command: str, values: dict[str, object], tols: dict[str, float]) -> RunConfig:
    params, preset = resolve_params(values)
    family, err = None, None
    try:
        family = resolve_family(values.get("family"), params, preset, float(values["c"]))
    except QDeformError as exc:
        err = str(exc)
        if values.get("family"):
            raise
    sizes = {k: int(values[k]) for k in ("kmax", "dim", "ntrunc")}
    extra: dict[str, object] = {"c": float(values["c"])}
    if command == "eval":
        extra.update(n=int(values["n"]), x=float(values["x"]))
    elif command == "verify":
        extra["suite"] = values["suite"]
    elif command == "spectrum":
        extra["classify_only"] = bool(values.get("classify_only", False))
    elif command == "coherent":
        extra.update(z=_parse_complex(str(values["z"])), zgrid=[_parse_complex(s) for s in str(values["zgrid"]).split(",") if s.strip()],
                     coefficients=bool(values.get("coefficients", False)))
    return RunConfig(command, params, preset, family, err, tols, sizes, str(values["format"]), values.get("out"), extra)


def _parse_complex(s: str) -> complex:
    try:
        return complex(s.strip().replace("i", "j").replace(" ", ""))
    except ValueError as exc:
        raise UsageError(f"cannot parse {s!r} as a complex number") from exc


# ---------------------------------------------------------------------------
# commands


def _family_or_exit(cfg: RunConfig) -> PolynomialFamily:
    if cfg.family is None:
        raise UsageError(cfg.family_error or "no polynomial family for these parameters")
    return cfg.family


def cmd_eval(cfg: RunConfig) -> tuple[int, str]:
    fam = _family_or_exit(cfg)
    n, x = int(cfg.extra["n"]), float(cfg.extra["x"])
    if n < 0:
        raise UsageError("--n must be nonnegative")
    rec = complex(polynomials.eval_recurrence(fam, n, x))
    routes: dict[str, object] = {"recurrence": rec.real if rec.imag == 0 else rec, "explicit": None, "hypergeometric": None}
    notes: dict[str, str] = {}
    restricted = polynomials.validity_restriction(fam).satisfied
    for name, fn in (("explicit", polynomials.eval_explicit), ("hypergeometric", polynomials.eval_hypergeometric)):
        if not restricted:
            notes[name] = "closed form not valid off the restriction"
            continue
        try:
            v = complex(fn(fam, n, x))
            routes[name] = v.real if v.imag == 0 else v
        except QDeformError as exc:
            notes[name] = str(exc)
    gaps = {k: abs(complex(v) - rec) for k, v in routes.items() if k != "recurrence" and v is not None}
    tol = cfg.tolerances["routes"]
    checks = [
        suites._check(f"routes/recurrence-vs-{k}", routes["recurrence"], routes[k], g / max(1.0, abs(rec)), tol).as_dict()
        for k, g in gaps.items()
    ]
    payload = {"family": fam.kind, "params": fam.params.as_dict() if fam.params else cfg.params.as_dict(), "n": n, "x": x,
               "routes": routes, "gaps": gaps}
    if notes:
        payload["notes"] = notes
    if cfg.fmt == "json":
        return 0, dumps(_report(cfg, checks, **payload))
    rows = [(k, _scalar(v), gaps.get(k)) for k, v in routes.items()]
    if cfg.fmt == "csv":
        return 0, _csv(rows, ("route", "value", "gap"))
    lines = [f"{fam.kind} h_{n}({x:g})"]
    lines += [f"  {k:<15} {'n/a' if v is None else _fmt(v):>24}  gap {'' if g is None else format(g, '.3g')}" for k, v, g in rows]
    lines += [f"  note: {k}: {v}" for k, v in notes.items()]
    return 0, "\n".join(lines) + "\n"


def _scalar(v):
    if isinstance(v, complex):
        return f"{_num(v.real)}{'+' if v.imag >= 0 else '-'}{_num(abs(v.imag))}j"
    return v


def _fmt(v) -> str:
    if isinstance(v, complex):
        return f"{v.real:.12g}{v.imag:+.12g}j"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def cmd_verify(cfg: RunConfig) -> tuple[int, str]:
    ctx = suites.SuiteContext(cfg.params, cfg.family, cfg.tolerances, cfg.sizes["kmax"], 64, cfg.sizes["ntrunc"])
    ctx.dim = 64
    spectra_dim = cfg.sizes["dim"]
    name = str(cfg.extra["suite"])
    if name == "spectra":
        ctx.dim = spectra_dim
    checks, skipped = suites.run_suite(name, ctx)
    code = 1 if any(c.status == "fail" for c in checks) else 0
    dicts = [c.as_dict() for c in checks]
    if cfg.fmt == "json":
        payload = {"skipped": skipped} if skipped else {}
        return code, dumps(_report(cfg, dicts, **payload))
    if cfg.fmt == "csv":
        rows = [(c.name, c.status, _scalar(c.lhs) if not isinstance(c.lhs, float) else c.lhs,
                 _scalar(c.rhs) if not isinstance(c.rhs, float) else c.rhs, c.gap, c.tolerance) for c in checks]
        return code, _csv(rows, ("name", "status", "lhs", "rhs", "gap", "tolerance"))
    lines = [f"{c.status.upper():<8} {c.name}" + (f"  gap={c.gap:.3g} tol={c.tolerance:g}" if c.gap is not None and c.tolerance else "")
             + (f"  ({c.note})" if c.note else "") for c in checks]
    lines += [f"SKIPPED  {s['suite']}: {s['reason']}" for s in skipped]
    n_fail = sum(c.status == "fail" for c in checks)
    n_flag = sum(c.status == "flagged" for c in checks)
    lines.append(f"{len(checks)} checks: {len(checks) - n_fail - n_flag} pass, {n_flag} flagged, {n_fail} fail")
    return code, "\n".join(lines) + "\n"


def _verdict_dict(v: oscillator.SelfAdjointnessVerdict) -> dict:
    return {
        "series_convergent": v.series_convergent,
        "direct_verdict": v.direct_verdict,
        "deficiency_indices": list(v.deficiency_indices),
        "carleman_condition_holds": v.carleman_condition_holds,
        "essentially_self_adjoint": v.carleman_condition_holds,
        "log_concavity_holds": v.log_concavity_holds,
        "table_row": v.table_row,
        "table_verdict": v.table_verdict,
        "agrees_with_table": v.agrees_with_table,
        "raabe_statistic": v.raabe_statistic,
        "growth_rate": v.growth_rate,
    }


def cmd_spectrum(cfg: RunConfig) -> tuple[int, str]:
    verdict = oscillator.classify_self_adjointness(cfg.params)
    vd = _verdict_dict(verdict)
    if cfg.extra.get("classify_only"):
        if cfg.fmt == "json":
            return 0, dumps(_report(cfg, [], classification=vd))
        if cfg.fmt == "csv":
            return 0, _csv([(k, _scalar(v) if not isinstance(v, list) else " ".join(map(str, v))) for k, v in sorted(vd.items())], ("key", "value"))
        return 0, _text_verdict(vd)
    fam = _family_or_exit(cfg)
    dim = cfg.sizes["dim"]
    ham = oscillator.hamiltonian_spectrum(cfg.params, min(dim, 20) - 1)
    if fam.kind == "classical":
        na = measures.compare_spectra(fam, dim)
        payload = {"classification": vd, "lattice": {"not_applicable": na.reason}, "rows": [], "hamiltonian_diagonal": ham}
        if cfg.fmt == "json":
            checks = [c.as_dict() for c in suites.suite_spectra(suites.SuiteContext(cfg.params, fam, cfg.tolerances))]
            return 0, dumps(_report(cfg, checks, **payload))
        if cfg.fmt == "csv":
            return 0, _csv([], ("k", "analytic_point", "nearest_eigenvalue", "rel_gap"))
        return 0, f"lattice: not applicable ({na.reason})\n" + _text_verdict(vd)
    polynomials.require_restriction(fam)
    ev = oscillator.truncated_position_spectrum(fam.params, dim)
    pos_ev = ev[ev > 0]
    if fam.is_type_I:
        lat = measures.analytic_spectrum(fam, k_max=max(dim // 2, 1) - 1)
    else:
        lat = measures.analytic_spectrum(fam, k_max=20, k_min=-20)
    scale, base = measures.lattice_scale(fam), measures.lattice_base(fam)
    pts = np.sort(lat.points[lat.points > 0])[::-1]
    ks = np.rint(np.log(pts / scale) / math.log(base)).astype(int)
    rows = []
    for k, pt in zip(ks, pts):
        near = float(pos_ev[np.argmin(np.abs(pos_ev - pt))]) if pos_ev.size else float("nan")
        rows.append((int(k), float(pt), near, abs(near - pt) / pt))
    checks = [c.as_dict() for c in suites.suite_spectra(suites.SuiteContext(cfg.params, fam, cfg.tolerances, dim=dim))]
    payload = {
        "classification": vd,
        "lattice": {"scale": scale, "base": base, "head": float(pts.max())},
        "rows": [dict(zip(("k", "analytic_point", "nearest_eigenvalue", "rel_gap"), r)) for r in rows],
        "eigenvalues": ev,
        "hamiltonian_diagonal": ham,
    }
    if cfg.fmt == "json":
        return 0, dumps(_report(cfg, checks, **payload))
    if cfg.fmt == "csv":
        return 0, _csv(rows, ("k", "analytic_point", "nearest_eigenvalue", "rel_gap"))
    lines = [f"{fam.kind} lattice head {pts.max():.12g} (scale {scale:.12g}, base {base:g}), dim {dim}"]
    lines += [f"  k={k:<4d} point {pt:<22.15g} nearest {ne:<22.15g} rel_gap {g:.3g}" for k, pt, ne, g in rows[:12]]
    return 0, "\n".join(lines) + "\n" + _text_verdict(vd)


def _text_verdict(vd: dict) -> str:
    di = tuple(vd["deficiency_indices"])
    sa = "essentially self-adjoint (Carleman)" if vd["essentially_self_adjoint"] else "not essentially self-adjoint"
    table = f"{vd['table_verdict']} ({vd['table_row']})" if vd["table_verdict"] else "unclassified"
    return f"sum 1/f_n {vd['direct_verdict']}; deficiency indices {di}; {sa}; table: {table}\n"


def cmd_coherent(cfg: RunConfig) -> tuple[int, str]:
    p = cfg.params
    z = complex(cfg.extra["z"])
    st = coherent.coherent_state(p, z, cfg.sizes["ntrunc"])
    res = coherent.eigen_residual(st)
    norm = coherent.overlap(st, st)
    radius = coherent.convergence_radius(p)
    table = []
    for w in cfg.extra["zgrid"]:
        if abs(w) >= radius and w != 0:
            continue
        other = coherent.coherent_state(p, w, cfg.sizes["ntrunc"])
        table.append({"z2": w, "overlap": coherent.overlap(st, other), "overlap_series": coherent.overlap_series(p, z, w)})
    checks = [
        suites._check("coherent/residual", None, None, res, cfg.tolerances["coherent"]).as_dict(),
        suites._check("coherent/norm", norm, 1.0, abs(norm - 1), cfg.tolerances["overlap"]).as_dict(),
    ]
    payload = {
        "z": z,
        "convergence_radius": radius,
        "norm_factor": st.norm_factor,
        "eigen_residual": res,
        "n_trunc": st.n_trunc,
        "tail_bound": st.tail_bound,
        "overlaps": table,
    }
    if cfg.extra.get("coefficients"):
        payload["coefficients"] = st.coefficients
    if cfg.fmt == "json":
        return 0, dumps(_report(cfg, checks, **payload))
    if cfg.fmt == "csv":
        rows = [(_scalar(complex(r["z2"])), complex(r["overlap"]).real, complex(r["overlap"]).imag,
                 complex(r["overlap_series"]).real, complex(r["overlap_series"]).imag) for r in table]
        return 0, _csv(rows, ("z2", "overlap_re", "overlap_im", "overlap_series_re", "overlap_series_im"))
    lines = [f"z = {_fmt(z)}  radius {radius:g}  norm factor {st.norm_factor:.15g}",
             f"eigen residual {res:.3g}  <z|z> - 1 = {abs(norm - 1):.3g}"]
    lines += [f"  <z|{_fmt(complex(r['z2']))}> = {_fmt(complex(r['overlap']))}" for r in table]
    return 0, "\n".join(lines) + "\n"


COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "spectrum": cmd_spectrum, "coherent": cmd_coherent}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        rest, cli_tols = _split_tolerances(argv)
    except UsageError as exc:
        parser.error(str(exc))
    ns = parser.parse_args(rest)
    try:
        values, tols = _merge(ns, cli_tols)
        cfg = make_config(ns.command, values, tols)
        code, text = COMMANDS[ns.command](cfg)
    except (QDeformError, ConvergenceError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"qdeform {ns.command}: error: {msg}", file=sys.stderr)
        return 2
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
