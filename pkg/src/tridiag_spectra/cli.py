"""Command-line front end: coefficient tables, spectra, verification suites and transforms.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for invalid
parameters or configuration.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import checks
from .operators import SHIFT_A, SHIFT_B, JacobiOperatorParams, QOperatorParams
from .spectral import (
    asc_parameters,
    biorthogonal_gram,
    compare_spectrum,
    direct_eigenfunction_q1,
    direct_eigenfunction_q2,
    general_identity_lhs,
    general_identity_rhs,
    match_recurrence,
    predict_spectrum,
    truncated_spectrum,
    v_transform,
    v_transform_closed_form,
)
from .families import LittleQJacobi
from .tridiag import (
    birth_death_rates,
    closed_form_coeffs,
    connection_coeffs,
    pair_for,
    tridiag_coefficients,
)

__all__ = ["main", "build_parser", "RunConfig", "DEFAULT_TOLERANCES"]

CASES = ("jacobi", "q1", "q2")
SUITES = ("tridiag", "recurrence", "identity", "eigenfunction", "biortho", "all")

DEFAULT_TOLERANCES = {
    "offband": 1e-10,
    "band": 1e-10,
    "connection": 1e-11,
    "m-recurrence": 1e-11,
    "gamma-shift": 1e-12,
    "match-wilson": 1e-10,
    "match-askey-wilson": 1e-11,
    "identity": 1e-12,
    "transform": 1e-10,
    "eigenfunction": 1e-10,
    "biortho": 1e-7,
    "discrete": 1e-8,
    "band-edge": 1e-3,
    "min-eigenvalue": 1e-8,
}

# descriptive anchors naming the statement each check exercises
ANCHORS = {
    "offband": "tridiagonal action of T on the orthonormal basis",
    "band": "closed-form Jacobi matrix coefficients",
    "connection": "connection formula phi_n = A_n Phi_n + B_n Phi_{n-1}",
    "m-recurrence": "three-term recurrence for multiplication by r",
    "gamma-shift": "gamma-shift of the Jacobi matrix coefficients",
    "match-wilson": "Wilson recurrence identification (Jacobi case)",
    "match-askey-wilson": "Askey-Wilson recurrence identification (a-shift case)",
    "identity": "little q-Jacobi to Al-Salam-Chihara generating transform",
    "transform": "closed form of V applied to little q-Jacobi polynomials",
    "eigenfunction": "direct lattice eigenfunctions",
    "biortho": "biorthogonality of the transformed little q-Jacobi functions",
    "discrete": "discrete spectrum",
    "band-edge": "continuous spectrum",
    "min-eigenvalue": "nonnegative spectrum of the b-shift operator",
    "outside": "eigenvalues outside the continuous spectrum",
    "sign-rule": "birth-death sign rule",
}

Q1_ALPHA_SCALES = (0.8, 1.0, 1.25)
THETA_DEFAULT = 9
LATTICE_DEFAULT = 202
SIZE_DEFAULT = 400
N_MAX_DEFAULT = 12
T_DEFAULT = (0.1, 0.5)
IDENTITY_N_MAX = 6
BIORTHO_N_MAX = 5


class ConfigError(ValueError):
    """Invalid parameters or configuration (exit code 2)."""


@dataclass
class RunConfig:
    command: str
    case: str
    parameters: dict
    n_max: int = N_MAX_DEFAULT
    size: int = SIZE_DEFAULT
    lattice: int = LATTICE_DEFAULT
    suite: str = "all"
    t: tuple = T_DEFAULT
    theta_points: int = THETA_DEFAULT
    output_format: str = "json"
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))

    def operator_params(self):
        p = self.parameters
        if self.case == "jacobi":
            missing = [k for k in ("alpha", "beta") if p.get(k) is None]
            if missing:
                raise ConfigError(f"jacobi case needs --{' --'.join(missing)}")
            if (p.get("delta") is None) == (p.get("gamma") is None):
                raise ConfigError("jacobi case needs exactly one of --delta and --gamma")
            return JacobiOperatorParams(p["alpha"], p["beta"], p.get("delta"), p.get("gamma"))
        missing = [k for k in ("a", "b", "c", "q") if p.get(k) is None]
        if missing:
            raise ConfigError(f"{self.case} case needs --{' --'.join(missing)}")
        if p.get("gamma") is not None:
            raise ConfigError("gamma is fixed by c in the q-cases; drop --gamma")
        case = SHIFT_A if self.case == "q1" else SHIFT_B
        params = QOperatorParams(p["a"], p["b"], p["c"], p["q"], case)
        if case == SHIFT_B:
            pair_for(params)  # rejects b = 0
        return params

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "case": self.case,
            "parameters": {k: v for k, v in sorted(self.parameters.items()) if v is not None},
            "n_max": self.n_max,
            "size": self.size,
            "lattice": self.lattice,
            "suite": self.suite,
            "t": list(self.t),
            "theta_points": self.theta_points,
            "format": self.output_format,
            "tolerances": dict(sorted(self.tolerances.items())),
        }


# ---------------------------------------------------------------------------
# check rows


def _check(name: str, residual: float, tol: float, label: str | None = None) -> dict:
    ok = bool(np.isfinite(residual) and residual < tol)
    return {"name": label or name, "paper_anchor": ANCHORS[name], "residual": float(residual),
            "tolerance": float(tol), "pass": ok}


def _skipped(name: str, reason: str, label: str | None = None) -> dict:
    return {"name": label or name, "paper_anchor": ANCHORS[name], "residual": None, "tolerance": None,
            "pass": None, "skipped": reason}


# ---------------------------------------------------------------------------
# commands


def cmd_coeffs(cfg: RunConfig) -> dict:
    params = cfg.operator_params()
    pair = pair_for(params)
    rows = []
    for n in range(cfg.n_max + 1):
        A, B = connection_coeffs(pair, n)
        a, b = closed_form_coeffs(params, n)
        rows.append({"n": n, "A_n": A, "B_n": B, "a_n": a, "b_n": b})
    return {"config": cfg.as_dict(), "rows": rows, "checks": [], "summary": _summary([])}


def cmd_spectrum(cfg: RunConfig) -> dict:
    params = cfg.operator_params()
    pred = predict_spectrum(params)
    coeffs = tridiag_coefficients(pair_for(params), params.gamma, cfg.size + 1)
    trunc = truncated_spectrum(coeffs.a, coeffs.b, cfg.size)
    tol = cfg.tolerances
    report = compare_spectrum(pred, trunc, tol["band-edge"])
    rows = []
    for p, nearest, gap in report.nearest:
        rows.append(_check("discrete", gap, tol["discrete"], f"discrete point {p:.17g}"))
    unexplained = [x for x in report.outside
                   if not any(abs(x - p) < tol["discrete"] for p in pred.discrete_points)]
    if pred.containment_only:
        rows.append(_check("min-eigenvalue", max(0.0, -report.min_eigenvalue), tol["min-eigenvalue"]))
        try:
            rates = birth_death_rates(pair_for(params), params.gamma, cfg.size)
        except ValueError as exc:
            rows.append(_skipped("sign-rule", str(exc)))
        else:
            if rates.eta == 1:
                rows.append(_check("sign-rule", max(0.0, -report.min_eigenvalue), tol["min-eigenvalue"]))
            else:
                rows.append(_skipped("sign-rule", "eta = -1: the rule gives no sign"))
    else:
        rows.append(_check("outside", float(len(unexplained)), 0.5))
    spectrum = {
        "source": pred.source,
        "bands": [[lo, hi] for lo, hi in pred.continuous_bands],
        "discrete_points": list(pred.discrete_points),
        "containment_only": pred.containment_only,
        "eigenvalues": [float(x) for x in np.sort(trunc.eigenvalues)],
        "gaps": [{"point": p, "nearest": e, "gap": g} for p, e, g in report.nearest],
        "max_eigenvalue": report.max_eigenvalue,
        "min_eigenvalue": report.min_eigenvalue,
        "max_interior_gap": report.max_interior_gap,
        "fraction_in_band": report.fraction_in_band,
    }
    return {"config": cfg.as_dict(), "spectrum": spectrum, "checks": rows, "summary": _summary(rows)}


def _suite_tridiag(cfg, params) -> list:
    tol = cfg.tolerances
    rep = checks.tridiagonality(params, cfg.n_max)
    return [
        _check("offband", rep.offband, tol["offband"]),
        _check("band", rep.band, tol["band"]),
        _check("connection", checks.connection_residual(params, cfg.n_max), tol["connection"]),
        _check("m-recurrence", checks.m_recurrence_residual(params, cfg.n_max), tol["m-recurrence"]),
        _check("gamma-shift", checks.gamma_shift_residual(params, n_max=cfg.n_max), tol["gamma-shift"]),
    ]


def _suite_recurrence(cfg, params) -> list:
    name = "match-wilson" if cfg.case == "jacobi" else "match-askey-wilson"
    if cfg.case == "q2":
        return [_skipped(name, "the b-shift coefficients match no named family")]
    rep = match_recurrence(params, cfg.n_max)
    if rep.skipped:
        return [_skipped(name, rep.skipped)]
    return [_check(name, rep.max_error, cfg.tolerances[name])]


def _q1_only(cfg, name) -> list | None:
    if cfg.case != "q1":
        return [_skipped(name, "defined for the a-shift operator only")]
    return None


def _suite_identity(cfg, params) -> list:
    skip = _q1_only(cfg, "identity")
    if skip:
        return skip
    a, b, q = params.a, params.b, params.q
    C, D = asc_parameters(params)
    x = np.cos(_theta_grid(cfg.theta_points))
    rows = []
    for t in cfg.t:
        worst = 0.0
        for n in range(IDENTITY_N_MAX + 1):
            lhs = general_identity_lhs(n, t, x, a, b, C, D, q)
            rhs = general_identity_rhs(n, t, x, a, b, C, D, q)
            worst = max(worst, float(np.max(np.abs(lhs.value - rhs))))
        rows.append(_check("identity", worst, cfg.tolerances["identity"], f"identity t={t:.17g}"))
    rows.append(_check("transform", _transform_residual(cfg, params), cfg.tolerances["transform"]))
    return rows


def _band_points(pred, count: int = 5) -> list:
    lo, hi = pred.continuous_bands[0]
    return list(np.linspace(lo, hi, count + 2)[1:-1])


def _suite_eigenfunction(cfg, params) -> list:
    tol = cfg.tolerances["eigenfunction"]
    if cfg.case == "jacobi":
        return [_skipped("eigenfunction", "lattice eigenfunctions exist for the q-cases only")]
    K = cfg.lattice
    if cfg.case == "q1":
        pred = predict_spectrum(params)
        lams = _band_points(pred) + list(pred.discrete_points)
        build = direct_eigenfunction_q1
    else:
        lams = [0.5, 1.0, 2.0, 5.0]
        build = direct_eigenfunction_q2
    rows = []
    for lam in lams:
        y = build(params, lam, K)
        rows.append(_check("eigenfunction", checks.eigenfunction_residual(y, params, lam), tol,
                           f"eigenfunction lambda={lam:.17g}"))
    return rows


def _suite_biortho(cfg, params) -> list:
    skip = _q1_only(cfg, "biortho")
    if skip:
        return skip
    s = math.sqrt(params.a * params.q)
    A, B = asc_parameters(params)
    rows = []
    for alpha in Q1_ALPHA_SCALES:
        label = f"biortho alpha={alpha:.17g}"
        if not s < alpha < 1 / s:
            rows.append(_skipped("biortho", "alpha outside (sqrt(aq), 1/sqrt(aq))", label))
            continue
        if max(abs(A), abs(B), alpha * s, s / alpha) >= 1:
            rows.append(_skipped("biortho", "sigma has point masses", label))
            continue
        gram = biorthogonal_gram(params, alpha, BIORTHO_N_MAX)
        rows.append(_check("biortho", float(np.max(np.abs(gram))), cfg.tolerances["biortho"], label))
    return rows


def cmd_verify(cfg: RunConfig) -> dict:
    params = cfg.operator_params()
    suites = {
        "tridiag": _suite_tridiag,
        "recurrence": _suite_recurrence,
        "identity": _suite_identity,
        "eigenfunction": _suite_eigenfunction,
        "biortho": _suite_biortho,
    }
    chosen = list(suites) if cfg.suite == "all" else [cfg.suite]
    rows = []
    for name in chosen:
        for row in suites[name](cfg, params):
            row["suite"] = name
            rows.append(row)
    return {"config": cfg.as_dict(), "checks": rows, "summary": _summary(rows)}


def _theta_grid(points: int) -> np.ndarray:
    grid = np.linspace(0.0, math.pi, points)
    if points % 2 == 0:
        grid = np.sort(np.append(grid, math.pi / 2))
    return grid


def _transform_rows(cfg: RunConfig, params, n_max: int) -> list:
    theta = _theta_grid(cfg.theta_points)
    x = np.cos(theta)
    fam = LittleQJacobi(params.a, params.b, params.q)
    rows = []
    for n in range(n_max + 1):
        lhs = v_transform(lambda pts, n=n: fam.eval(n, pts), params, x).value
        rhs = v_transform_closed_form(params, n, x)
        for th, xv, l, r in zip(theta, x, lhs, rhs):
            rows.append({"n": n, "theta": float(th), "x": float(xv), "lhs": float(l), "rhs": float(r),
                         "abs_diff": float(abs(l - r))})
    return rows


def _transform_residual(cfg: RunConfig, params) -> float:
    return max(row["abs_diff"] for row in _transform_rows(cfg, params, IDENTITY_N_MAX))


def cmd_transform(cfg: RunConfig) -> dict:
    if cfg.case != "q1":
        raise ConfigError("the transform is defined for the a-shift operator (--case q1) only")
    params = cfg.operator_params()
    rows = _transform_rows(cfg, params, cfg.n_max)
    residual = max(row["abs_diff"] for row in rows)
    result = [_check("transform", residual, cfg.tolerances["transform"])]
    return {"config": cfg.as_dict(), "rows": rows, "checks": result, "summary": _summary(result)}


def _summary(rows: list) -> dict:
    passed = sum(1 for r in rows if r["pass"] is True)
    failed = sum(1 for r in rows if r["pass"] is False)
    skipped = sum(1 for r in rows if r["pass"] is None)
    return {"checks": len(rows), "passed": passed, "failed": failed, "skipped": skipped, "ok": failed == 0}


COMMANDS = {"coeffs": cmd_coeffs, "spectrum": cmd_spectrum, "verify": cmd_verify, "transform": cmd_transform}


# ---------------------------------------------------------------------------
# output


def _fmt(v) -> str:
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if not math.isfinite(v):
            return json.dumps(str(v))
        return format(v, ".17g")
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return json.dumps(v)


def dump_json(obj, indent: int = 0) -> str:
    """JSON with every float printed to 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dump_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_fmt(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dump_json(v, indent + 1) for v in obj) + "\n" + end + "]"
    return _fmt(obj)


CHECK_COLUMNS = ("name", "paper_anchor", "residual", "tolerance", "pass", "skipped")


def dump_csv(result: dict) -> str:
    import csv

    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    rows = result.get("rows")
    if rows:
        cols = list(rows[0])
    else:
        rows = result["checks"]
        cols = list(CHECK_COLUMNS)
    writer.writerow(cols)
    for r in rows:
        writer.writerow([_csv_cell(r.get(c)) for c in cols])
    return out.getvalue()


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


# ---------------------------------------------------------------------------
# argument handling


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tridiag-spectra", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("coeffs", "table of A_n, B_n, a_n, b_n"),
        ("spectrum", "predicted versus finite-section spectrum"),
        ("verify", "run a verification suite"),
        ("transform", "series versus closed form of the transform V on a theta grid"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", help="JSON file with the same keys as the flags")
        p.add_argument("--case", choices=CASES)
        for key in ("alpha", "beta", "delta", "gamma", "a", "b", "c", "q"):
            p.add_argument(f"--{key}", type=float)
        p.add_argument("--n-max", type=int)
        p.add_argument("--size", type=int, help="finite-section size N")
        p.add_argument("--lattice", type=int, help="lattice length K for eigenfunctions")
        p.add_argument("--suite", choices=SUITES)
        p.add_argument("--t", type=float, action="append", help="generating parameter (repeatable)")
        p.add_argument("--theta-points", type=int)
        p.add_argument("--format", choices=("json", "csv"))
        for tol in DEFAULT_TOLERANCES:
            p.add_argument(f"--tol-{tol}", type=float, dest=f"tol_{tol.replace('-', '_')}")
    return parser


def _normalise_key(k: str) -> str:
    return k.lstrip("-").replace("-", "_")


def _load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    out = {}
    for k, v in raw.items():
        key = _normalise_key(k)
        if key == "tolerances" and isinstance(v, dict):
            for tk, tv in v.items():
                out[f"tol_{_normalise_key(tk)}"] = tv
        else:
            out[key] = v
    return out


_INT_KEYS = ("n_max", "size", "lattice", "theta_points")
_PARAM_KEYS = ("alpha", "beta", "delta", "gamma", "a", "b", "c", "q")


def make_config(args: argparse.Namespace) -> RunConfig:
    merged = _load_config(args.config) if args.config else {}
    known = set(vars(args)) - {"config"}
    unknown = set(merged) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for k, v in vars(args).items():
        if k != "config" and v is not None:
            merged[k] = v
    case = merged.get("case")
    if case not in CASES:
        raise ConfigError(f"--case must be one of {', '.join(CASES)}")
    params = {}
    for k in _PARAM_KEYS:
        v = merged.get(k)
        if v is not None:
            try:
                params[k] = float(v)
            except (TypeError, ValueError):
                raise ConfigError(f"{k} must be a real number") from None
            if not math.isfinite(params[k]):
                raise ConfigError(f"{k} must be finite")
    cfg = RunConfig(args.command, case, params)
    for k in _INT_KEYS:
        v = merged.get(k)
        if v is not None:
            low = 0 if k == "n_max" else 1
            if isinstance(v, bool) or not isinstance(v, (int, float)) or int(v) != v or int(v) < low:
                raise ConfigError(f"{k.replace('_', '-')} must be an integer >= {low}")
            setattr(cfg, k, int(v))
    if cfg.lattice < 3:
        raise ConfigError("lattice must be at least 3")
    if merged.get("suite") is not None:
        if merged["suite"] not in SUITES:
            raise ConfigError(f"--suite must be one of {', '.join(SUITES)}")
        cfg.suite = merged["suite"]
    if merged.get("t") is not None:
        ts = merged["t"] if isinstance(merged["t"], (list, tuple)) else [merged["t"]]
        cfg.t = tuple(float(t) for t in ts)
        if any(not abs(t) < 1 for t in cfg.t):
            raise ConfigError("--t needs |t| < 1")
    if merged.get("format") is not None:
        cfg.output_format = merged["format"]
    for tol in DEFAULT_TOLERANCES:
        v = merged.get(f"tol_{tol.replace('-', '_')}")
        if v is not None:
            if not float(v) > 0:
                raise ConfigError(f"tolerance {tol} must be positive")
            cfg.tolerances[tol] = float(v)
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
        result = COMMANDS[cfg.command](cfg)
    except (ConfigError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = dump_csv(result) if cfg.output_format == "csv" else dump_json(result) + "\n"
    sys.stdout.write(text)
    return 0 if result["summary"]["ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
