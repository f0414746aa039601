"""Command-line interface.

Every subcommand accepts ``--alpha``, ``--r``, ``--q``, ``--s``, ``--output``
(``text``, ``json`` or ``csv``), ``--config FILE`` and ``--set key=value``
overrides of :class:`ContinuationConfig`.  Exit codes: 0 success, 1 usage,
2 verification tolerance unmet, 3 domain error, 4 precision or ambiguity.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from dataclasses import fields

import numpy as np

from . import beatty, continuation, diophantine, special
from .theta import EPS_QUAD, PhiContext, phi_direct, phi_transformed, psi, theta
from .continuation import ContinuationConfig
from .errors import BeattyZetaError, BudgetExceeded, DomainError, PrecisionError

__all__ = ["main", "run", "build_parser", "parse_r", "parse_s"]

EXIT_OK, EXIT_USAGE, EXIT_TOLERANCE, EXIT_DOMAIN, EXIT_PRECISION = 0, 1, 2, 3, 4
THREADS_ENV = "BEATTY_ZETA_THREADS"

_CFG_FIELDS = {f.name: f.type for f in fields(ContinuationConfig)}
_GENERAL_KEYS = ("alpha", "r", "q", "s", "output", "threads", "tol")
_DEFAULTS = {"alpha": "golden", "r": "0", "q": "0.5", "s": None, "output": "text", "threads": "1", "tol": None}
_LATTICE_RE = re.compile(r"^([+-]?\d*)\*?gamma([+-]\d+)?$")
_ALPHA_RE = re.compile(r"^(golden|sqrt2|quad:-?\d+,-?\d+,\d+,-?\d+|dec:[+-]?\d+(\.\d*)?)$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- parsing helpers ---------------------------------------------------------

def parse_s(text: str) -> complex:
    """``"re"`` or ``"re,im"`` to a complex number."""
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) not in (1, 2) or not parts[0]:
        raise UsageError(f"bad s {text!r}; expected re[,im]")
    try:
        vals = [float(p) for p in parts]
    except ValueError as exc:
        raise UsageError(f"bad s {text!r}") from exc
    return complex(vals[0], vals[1] if len(vals) == 2 else 0.0)


def parse_r(text: str, alpha) -> tuple[float, tuple[int, int] | None]:
    """A decimal twist, or ``k*gamma+l`` with the decomposition attached."""
    t = str(text).replace(" ", "")
    m = _LATTICE_RE.match(t)
    if m:
        ks = m.group(1)
        k = -1 if ks == "-" else 1 if ks in ("", "+") else int(ks)
        ell = int(m.group(2) or 0)
        r = float(k * diophantine.as_alpha(alpha).gamma.to_decimal(30) + ell)
        return r, (k, ell)
    try:
        return float(t), None
    except ValueError as exc:
        raise UsageError(f"bad r {text!r}; expected a decimal or k*gamma+l") from exc


def _parse_range(text: str) -> np.ndarray:
    """``a:b:n`` (inclusive, n points) or a comma list."""
    try:
        if ":" in text:
            a, b, n = text.split(":")
            return np.linspace(float(a), float(b), int(n))
        return np.array([float(x) for x in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}; expected a:b:n or a comma list") from exc


def read_config(path: str) -> dict[str, str]:
    """Flat ``key=value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for no, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{no}: expected key=value")
            key, val = (x.strip() for x in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _GENERAL_KEYS and key not in _CFG_FIELDS:
                raise UsageError(f"{path}:{no}: unknown key {key!r}")
            out[key] = val
    return out


def _convert(key: str, val: str):
    typ = _CFG_FIELDS[key]
    try:
        if typ in ("int", int):
            return int(float(val))
        return float(val)
    except ValueError as exc:
        raise UsageError(f"bad value for {key}: {val!r}") from exc


class Settings:
    """Merged view of defaults, config file, environment and flags."""

    def __init__(self, args: argparse.Namespace):
        file_vals = read_config(args.config) if args.config else {}
        merged = dict(_DEFAULTS)
        merged.update({k: v for k, v in file_vals.items() if k in _GENERAL_KEYS})
        if os.environ.get(THREADS_ENV):
            merged["threads"] = os.environ[THREADS_ENV]
        for key in _GENERAL_KEYS:
            v = getattr(args, key, None)
            if v is not None:
                merged[key] = v
        if getattr(args, "json", False):
            merged["output"] = "json"
        if merged["output"] not in ("text", "json", "csv"):
            raise UsageError(f"bad output {merged['output']!r}")
        self.output = merged["output"]
        try:
            self.threads = max(1, int(merged["threads"]))
        except ValueError as exc:
            raise UsageError(f"bad threads {merged['threads']!r}") from exc
        self.tol = None if merged["tol"] is None else float(merged["tol"])
        self._raw = merged

        overrides = {k: _convert(k, v) for k, v in file_vals.items() if k in _CFG_FIELDS}
        for item in args.set or []:
            if "=" not in item:
                raise UsageError(f"--set expects key=value, got {item!r}")
            k, v = (x.strip() for x in item.split("=", 1))
            k = k.replace("-", "_")
            if k not in _CFG_FIELDS:
                raise UsageError(f"unknown config key {k!r}")
            overrides[k] = _convert(k, v)
        self.cfg = ContinuationConfig().replace(**overrides)

    @property
    def alpha(self):
        spec = self._raw["alpha"].strip()
        if not _ALPHA_RE.match(spec):
            raise UsageError(f"bad alpha {spec!r}; expected golden | sqrt2 | quad:p,q,d,c | dec:<digits>")
        return diophantine.parse_alpha(spec)

    def r(self, alpha):
        return parse_r(self._raw["r"], alpha)

    @property
    def q(self) -> float:
        try:
            q = float(self._raw["q"])
        except ValueError as exc:
            raise UsageError(f"bad q {self._raw['q']!r}") from exc
        if not 0.0 < q < 1.0:
            raise DomainError("q must lie in (0, 1)")
        return q

    @property
    def s(self) -> complex:
        if self._raw["s"] is None:
            raise UsageError("--s is required")
        return parse_s(self._raw["s"])

    def context(self, kind: str = "beatty") -> PhiContext:
        alpha = self.alpha
        r, hit = self.r(alpha)
        cfg = self.cfg
        return PhiContext(alpha, r, self.q, kind=kind, K_max=cfg.K_max, tol=cfg.lattice_tol,
                          hit=hit, term_cap=cfg.term_cap)


# -- emission ------------------------------------------------------------------

def exact(value, method: str = "exact") -> dict:
    """Wrap an exactly known number like an EvalResult."""
    v = complex(value)
    return {"value": {"re": v.real, "im": v.imag}, "err_est": 0.0, "method": method}


def _num(x) -> str:
    return "%.17g" % x


def _is_eval(obj) -> bool:
    return isinstance(obj, dict) and "err_est" in obj and isinstance(obj.get("value"), dict)


def _fmt_complex(v: dict) -> str:
    if v["im"] == 0.0:
        return _num(v["re"])
    return f"{_num(v['re'])}{'+' if v['im'] >= 0 or math.isnan(v['im']) else '-'}{_num(abs(v['im']))}i"


def _flatten(obj, prefix: str = ""):
    if _is_eval(obj):
        yield prefix, f"{_fmt_complex(obj['value'])}  err_est={_num(obj['err_est'])}  method={obj['method']}"
        for k, v in obj.items():
            if k not in ("value", "err_est", "method"):
                yield from _flatten(v, f"{prefix}.{k}" if prefix else k)
    elif isinstance(obj, dict) and set(obj) == {"re", "im"}:
        yield prefix, _fmt_complex(obj)
    elif isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else k)
    elif isinstance(obj, list) and obj and all(isinstance(x, (int, np.integer)) for x in obj):
        yield prefix, " ".join(str(int(x)) for x in obj)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    elif isinstance(obj, float):
        yield prefix, _num(obj)
    else:
        yield prefix, "null" if obj is None else str(obj)


def render(obj, output: str) -> str:
    if output == "json":
        return json.dumps(obj, indent=2) + "\n"
    rows = list(_flatten(obj))
    if output == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(rows)
        return buf.getvalue()
    return "".join(f"{k}: {v}\n" for k, v in rows)


# -- subcommands -------------------------------------------------------------------

def cmd_cf(a, st):
    alpha = st.alpha
    cf = diophantine.cf_expand(alpha, a.depth)
    out = {"alpha": exact(alpha.value, "float-rounded"), "cf": cf,
           "convergents": [[p, q] for p, q in diophantine.convergents(cf, len(cf))]}
    per = alpha.periodic
    if per is not None:
        out["preperiod"], out["period"] = list(per[0]), list(per[1])
    return out


def cmd_type(a, st):
    alpha = st.alpha
    tau = diophantine.estimate_type(alpha, a.depth)
    return {"type_estimate": exact(tau, "periodic-cf" if alpha.periodic else "cf-growth")}


def cmd_beatty(a, st):
    alpha = st.alpha
    out = {"terms": [int(x) for x in beatty.beatty_terms(alpha, a.M)]}
    if a.count is not None:
        out["count"] = beatty.beatty_count(alpha, a.count)
    return out


def cmd_indicator(a, st):
    return {"n": a.n, "indicator": exact(beatty.indicator(st.alpha, a.n))}


def cmd_pulse(a, st):
    return {"t": a.t, "pulse": exact(beatty.pulse_wave_eval(st.alpha.gamma, a.t))}


def cmd_fourier(a, st):
    alpha = st.alpha
    out = {"k": a.k, "coefficient": special.EvalResult(
        beatty.fourier_coeff(alpha.gamma, a.k), 4e-16 / max(1, abs(a.k)), "closed-form").as_dict()}
    if a.n is not None:
        v, bound = beatty.truncated_indicator(alpha, a.n, a.K)
        out["truncated_indicator"] = special.EvalResult(v, bound, "calibrated-bound").as_dict()
        out["indicator"] = exact(beatty.indicator(alpha, a.n))
    return out


def cmd_discrepancy(a, st):
    pts = diophantine.kronecker_points(st.alpha.gamma, a.delta, a.M)
    rep = diophantine.star_discrepancy(pts)
    return {"M": rep.M, "d_star": exact(rep.d_star, "sorted-points"),
            "bounds": [exact(x, "sorted-points") for x in rep.d_extreme_bounds]}


def cmd_nearhits(a, st):
    alpha = st.alpha
    r, _ = st.r(alpha)
    hits = diophantine.near_hits(alpha.gamma, r, a.K, a.T)[: a.limit]
    return {"r": r, "hits": [{"k": h.k, "dist": exact(h.dist, "mod-1 reduction"), "nu": h.nu,
                              "nearest": h.nearest} for h in hits]}


def _theta_err(u: float) -> float:
    return 8 * EPS_QUAD * (1 + u**-0.5)


def cmd_theta(a, st):
    val = theta(a.v, a.w, a.u)
    return {"theta": special.EvalResult(val, _theta_err(a.u), "theta-series").as_dict()}


def cmd_psi(a, st):
    alpha = st.alpha
    r, _ = st.r(alpha)
    val = psi(r, st.q, a.u)
    return {"psi": special.EvalResult(val, _theta_err(a.u), "theta-series").as_dict()}


def cmd_phi(a, st):
    ctx = st.context()
    out = {}
    if a.repr in ("direct", "both"):
        out["direct"] = phi_direct(ctx, a.u).as_dict()
    if a.repr in ("transformed", "both"):
        out["transformed"] = phi_transformed(ctx, a.u, int(st.cfg.K_max)).as_dict()
    if a.repr == "both":
        d = complex(out["direct"]["value"]["re"], out["direct"]["value"]["im"])
        t = complex(out["transformed"]["value"]["re"], out["transformed"]["value"]["im"])
        out["difference"] = special.EvalResult(
            d - t, out["direct"]["err_est"] + out["transformed"]["err_est"], "combined").as_dict()
    return out


def cmd_riemann(a, st):
    return {"zeta": special.riemann_zeta(st.s).as_dict()}


def cmd_hurwitz(a, st):
    return {"hurwitz": special.hurwitz_zeta(st.q, st.s).as_dict()}


def cmd_lerch(a, st):
    r, _ = st.r(st.alpha)
    kw = {} if st.tol is None else {"tol": st.tol}
    return {"lerch": special.lerch_direct(r, st.q, st.s, **kw).as_dict()}


def cmd_zetasharp(a, st):
    r, _ = st.r(st.alpha)
    return {"zeta_sharp": special.zeta_sharp(r, st.q, st.s, cfg=st.cfg).as_dict()}


def cmd_zdirect(a, st):
    alpha = st.alpha
    r, hit = st.r(alpha)
    tol = st.cfg.direct_tol if st.tol is None else st.tol
    res = continuation.z_direct(alpha, r, st.q, st.s, tol=tol, cap=st.cfg.direct_cap,
                                hit="scan" if hit is None else hit)
    return {"z": res.as_dict()}


def cmd_zsharp(a, st):
    return {"z_sharp": continuation.z_sharp(st.context(), st.s, st.cfg, a.method).as_dict()}


def cmd_residue(a, st):
    return {"residue": continuation.residue_at_one(st.context(), st.cfg).as_dict()}


def cmd_scan(a, st):
    rows = continuation.grid_scan(st.context(), _parse_range(a.re), _parse_range(a.im), st.cfg,
                                  threads=st.threads, method=a.method)
    if st.output == "csv":
        return continuation.scan_to_csv(rows)
    out = []
    for row in rows:
        out.append({"s": {"re": row["s_re"], "im": row["s_im"]},
                    "value": {"re": row["val_re"], "im": row["val_im"]},
                    "err_est": row["err_est"], "method": row["region"],
                    "pole_coefficient": {"re": row["pole_re"], "im": row["pole_im"]}})
    return {"rows": out}


def cmd_verify(a, st):
    from .verify import run_suite

    results = run_suite(a.suite, threads=st.threads)
    ok = all(r.passed for r in results)
    if st.output == "text":
        text = "".join(r.line() + "\n" for r in results)
        text += f"{sum(r.passed for r in results)}/{len(results)} passed\n"
        return text, (EXIT_OK if ok else EXIT_TOLERANCE)
    out = {"suite": a.suite, "passed": ok,
           "checks": [{"name": r.name, "passed": r.passed,
                       "measured": exact(r.measured, "check"), "tolerance": r.tolerance,
                       "detail": r.detail} for r in results]}
    return out, (EXIT_OK if ok else EXIT_TOLERANCE)


COMMANDS = {
    "cf": (cmd_cf, "continued fraction and convergents of alpha"),
    "type": (cmd_type, "irrationality type estimate"),
    "beatty": (cmd_beatty, "Beatty sequence terms"),
    "indicator": (cmd_indicator, "indicator of the Beatty sequence at n"),
    "pulse": (cmd_pulse, "pulse wave at t"),
    "fourier": (cmd_fourier, "Fourier coefficient and truncated indicator"),
    "discrepancy": (cmd_discrepancy, "star discrepancy of {m*gamma + delta}"),
    "nearhits": (cmd_nearhits, "near resonances ||r - k*gamma||"),
    "theta": (cmd_theta, "theta function"),
    "psi": (cmd_psi, "Psi = e(-qr/2) Theta_{q,r}"),
    "phi": (cmd_phi, "Phi = Psi_alpha - gamma*Psi"),
    "riemann": (cmd_riemann, "Riemann zeta"),
    "hurwitz": (cmd_hurwitz, "Hurwitz zeta"),
    "lerch": (cmd_lerch, "Lipschitz-Lerch zeta by direct summation (Re s > 1)"),
    "zetasharp": (cmd_zetasharp, "symmetrised Lipschitz-Lerch zeta"),
    "zdirect": (cmd_zdirect, "Beatty zeta by direct summation (Re s > 1)"),
    "zsharp": (cmd_zsharp, "symmetrised Beatty zeta with continuation"),
    "residue": (cmd_residue, "residue of Z# at s = 1"),
    "scan": (cmd_scan, "grid scan of Z# (CSV or JSON)"),
    "verify": (cmd_verify, "acceptance checks"),
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("common options")
    g.add_argument("--alpha", help="golden | sqrt2 | quad:p,q,d,c | dec:<digits>")
    g.add_argument("--r", help="twist: decimal or k*gamma+l")
    g.add_argument("--q", help="shift in (0, 1)")
    g.add_argument("--s", help="complex argument re[,im]")
    g.add_argument("--output", choices=("text", "json", "csv"))
    g.add_argument("--json", action="store_true", help="same as --output json")
    g.add_argument("--config", help="file of key=value lines")
    g.add_argument("--set", action="append", metavar="KEY=VALUE", help="ContinuationConfig override")
    g.add_argument("--threads", help=f"worker threads (env {THREADS_ENV})")
    g.add_argument("--tol", help="tolerance override for direct sums")

    parser = _Parser(prog="beatty-zeta", description="Beatty zeta functions and their continuation.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sp = {name: sub.add_parser(name, parents=[common], help=h) for name, (_, h) in COMMANDS.items()}

    for name in ("cf", "type"):
        sp[name].add_argument("--depth", type=int, default=diophantine.DEFAULT_CF_DEPTH)
    sp["beatty"].add_argument("--M", type=int, default=10)
    sp["beatty"].add_argument("--count", type=int, help="also count terms <= N")
    sp["indicator"].add_argument("--n", type=int, required=True)
    sp["pulse"].add_argument("--t", type=float, required=True)
    sp["fourier"].add_argument("--k", type=int, default=1)
    sp["fourier"].add_argument("--n", type=int)
    sp["fourier"].add_argument("--K", type=int, default=256)
    sp["discrepancy"].add_argument("--M", type=int, default=100)
    sp["discrepancy"].add_argument("--delta", type=float, default=0.0)
    sp["nearhits"].add_argument("--K", type=int, default=1000)
    sp["nearhits"].add_argument("--T", type=float, default=0.01)
    sp["nearhits"].add_argument("--limit", type=int, default=20)
    sp["theta"].add_argument("--v", type=float, default=0.0)
    sp["theta"].add_argument("--w", type=float, default=0.0)
    for name in ("theta", "psi", "phi"):
        sp[name].add_argument("--u", type=float, required=True)
    sp["phi"].add_argument("--repr", choices=("direct", "transformed", "both"), default="both")
    for name in ("zsharp", "scan"):
        sp[name].add_argument("--method", choices=("auto", "direct", "continued"), default="auto")
    sp["scan"].add_argument("--re", required=True, help="a:b:n or comma list")
    sp["scan"].add_argument("--im", default="0", help="a:b:n or comma list")
    sp["verify"].add_argument("--suite", choices=("quick", "full"), default="quick")
    return parser


def _check_args(a):
    for key in ("M", "K", "depth", "limit"):
        v = getattr(a, key, None)
        if v is not None and v < 1:
            raise DomainError(f"{key} must be >= 1")
    u = getattr(a, "u", None)
    if u is not None and not u > 0:
        raise DomainError("u must be positive")


def run(argv=None, stdout=None, stderr=None) -> int:
    """Run the CLI and return the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        st = Settings(args)
        _check_args(args)
        result = COMMANDS[args.command][0](args, st)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except PrecisionError as exc:
        print(f"precision error: {exc}", file=stderr)
        return EXIT_PRECISION
    except (DomainError, BudgetExceeded) as exc:
        print(f"domain error: {exc}", file=stderr)
        return EXIT_DOMAIN
    except BeattyZetaError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"usage error: {exc}", file=stderr)
        return EXIT_USAGE
    code = EXIT_OK
    if isinstance(result, tuple):
        result, code = result
    stdout.write(result if isinstance(result, str) else render(result, st.output))
    return code


def main(argv=None) -> int:
    try:
        code = run(argv)
    except SystemExit as exc:  # --help
        code = exc.code if isinstance(exc.code, int) else EXIT_USAGE
    sys.exit(code)


if __name__ == "__main__":
    main()
