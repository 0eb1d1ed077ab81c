"""repcount command-line interface.

Thin wrappers over the library: every command's numeric output equals the
corresponding library call with the same seeds.  Results of the counting
and verification commands are cached as content-addressed JSON records
under $REPCOUNT_CACHE_DIR (default ~/.cache/repcount); the cache is
advisory and can be deleted at any time.

Exit codes: 0 ok, 2 input error, 3 budget refusal, 4 internal error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys as _sys
import time
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import __version__
from .circle import (
    ArcParams,
    classify_arc,
    exponential_sum,
    weyl_cs_check,
)
from .densities import (
    DensityConfig,
    chi_inf_slab,
    chi_p_auto,
    chi_p_exact,
    chi_p_pair_closed_form,
    chi_p_pair_convolution,
    chi_p_sampled,
    main_term,
    singular_series_truncated,
)
from .enumeration import (
    Box,
    count_boxed,
    count_lattice,
    count_representations,
    smith_normal_form,
)
from .errors import BudgetError, InputError
from .forms import Form, TargetForm, expand_system, parse_form
from .psi import (
    eccentricity,
    is_pseudo_diagonal,
    magnitude,
    normalize_psi,
)
from .rng import stream

SCHEMA_VERSION = "repcount-record/1"


# ---------------------------------------------------------------------------
# argument parsing helpers
# ---------------------------------------------------------------------------

def _parse_psi(text: str, m: int, d: Optional[int]) -> TargetForm:
    """Coefficient list `j_1..j_d:n`, comma separated, e.g. 11:2,12:1,22:2."""
    entries: Dict[tuple, int] = {}
    inferred_d = d
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ":" not in chunk:
            raise InputError(f"psi entry {chunk!r} must look like 12:3")
        idx, val = chunk.split(":", 1)
        if not idx.isdigit():
            raise InputError(f"psi index {idx!r} must be digits (one per factor)")
        j = tuple(sorted(int(ch) for ch in idx))
        if inferred_d is None:
            inferred_d = len(j)
        if len(j) != inferred_d:
            raise InputError(f"psi index {idx!r} has {len(j)} digits, expected {inferred_d}")
        if any(not 1 <= v <= m for v in j):
            raise InputError(f"psi index {idx!r} out of range 1..{m}")
        try:
            entries[j] = entries.get(j, 0) + int(val)
        except ValueError as exc:
            raise InputError(f"psi coefficient {val!r} is not an integer") from exc
    if inferred_d is None:
        raise InputError("empty psi")
    return TargetForm(m, inferred_d, entries)


def _parse_box(text: str) -> Box:
    try:
        bounds = tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise InputError(f"bad box {text!r}") from exc
    return Box(bounds)


def _parse_matrix(text: str) -> List[List[int]]:
    """Rows separated by ';', entries by ','."""
    try:
        return [[int(v) for v in row.split(",")] for row in text.split(";")]
    except ValueError as exc:
        raise InputError(f"bad matrix {text!r}") from exc


def _load_form(args) -> Form:
    if getattr(args, "form_file", None):
        text = Path(args.form_file).read_text().strip()
    elif args.form:
        text = args.form
    else:
        raise InputError("provide --form or --form-file")
    return parse_form(text, args.s)


def _emit(args, payload: dict, csv_rows: Optional[List[dict]] = None) -> None:
    fmt = getattr(args, "format", "text") or "text"
    out = getattr(args, "out", None)
    if fmt == "json":
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv" and csv_rows is not None:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(csv_rows[0].keys()))
        writer.writeheader()
        writer.writerows(csv_rows)
        text = buf.getvalue()
    else:
        text = "\n".join(f"{k}: {v}" for k, v in payload.items()) + "\n"
    if out:
        Path(out).write_text(text)
    _sys.stdout.write(text)


# ---------------------------------------------------------------------------
# result records and cache
# ---------------------------------------------------------------------------

def cache_dir() -> Path:
    env = os.environ.get("REPCOUNT_CACHE_DIR")
    return Path(env) if env else Path.home() / ".cache" / "repcount"


def instance_digest(payload: dict) -> str:
    canon = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def cache_read(digest: str) -> Optional[dict]:
    path = cache_dir() / f"{digest}.json"
    if path.exists():
        return json.loads(path.read_text())
    return None


def cache_write(digest: str, record: dict) -> None:
    d = cache_dir()
    d.mkdir(parents=True, exist_ok=True)
    tmp = d / f".{digest}.tmp.{os.getpid()}"
    tmp.write_text(json.dumps(record, indent=2, sort_keys=True))
    os.replace(tmp, d / f"{digest}.json")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_expand(args) -> int:
    form = _load_form(args)
    system = expand_system(form, args.m)
    names = lambda v: f"x{v + 1}"  # flat layout: block i coord n -> x_{(i-1)s+n}
    if args.format == "json":
        payload = {
            "form": form.canonical(),
            "m": args.m,
            "polynomials": {"".join(map(str, j)): p.text(names)
                            for j, p in system.polys.items()},
        }
        _sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        for j, p in system.polys.items():
            _sys.stdout.write(f"Phi_{''.join(map(str, j))}: {p.text(names)}\n")
    return 0


def cmd_analyze_psi(args) -> int:
    psi = _parse_psi(args.psi, args.m, args.d)
    payload: Dict[str, object] = {
        "m": psi.m,
        "d": psi.d,
        "r": psi.r,
        "coefficients": psi.canonical(),
    }
    try:
        payload["magnitude"] = magnitude(psi)
        payload["pseudo_diagonal"] = is_pseudo_diagonal(psi)
        payload["normalized"] = {
            "".join(map(str, j)): v for j, v in normalize_psi(psi).items()
        }
    except InputError as exc:
        payload["error"] = str(exc)
    try:
        payload["eccentricity"] = eccentricity(psi)
    except InputError as exc:
        payload["eccentricity_error"] = str(exc)
    _emit(args, payload)
    return 0


def _record_and_print_count(args, kind: str, value: int, instance: dict,
                            elapsed: float) -> int:
    digest = instance_digest({"kind": kind, **instance})
    record = {
        "schema": SCHEMA_VERSION,
        "digest": digest,
        "kind": kind,
        "instance": instance,
        "exact_count": value,
        "timings": {"seconds": elapsed},
        "version": __version__,
    }
    cache_write(digest, record)
    if getattr(args, "out", None):
        Path(args.out).write_text(json.dumps(record, indent=2, sort_keys=True))
    _sys.stdout.write(f"{value}\n")
    return 0


def cmd_count(args) -> int:
    form = _load_form(args)
    psi = _parse_psi(args.psi, args.m, args.d)
    t0 = time.perf_counter()
    value = count_representations(form, psi, budget=args.budget)
    instance = {"form": form.canonical(), "s": form.s, "psi": psi.canonical(), "m": psi.m}
    return _record_and_print_count(args, "count", value, instance, time.perf_counter() - t0)


def cmd_count_boxed(args) -> int:
    form = _load_form(args)
    psi = _parse_psi(args.psi, args.m, args.d)
    box = _parse_box(args.box)
    t0 = time.perf_counter()
    value = count_boxed(form, psi, box, budget=args.budget)
    instance = {"form": form.canonical(), "s": form.s, "psi": psi.canonical(),
                "m": psi.m, "box": list(box.bounds)}
    return _record_and_print_count(args, "count-boxed", value, instance,
                                   time.perf_counter() - t0)


def cmd_count_lattice(args) -> int:
    form = _load_form(args)
    c_matrix = _parse_matrix(args.c_matrix)
    t0 = time.perf_counter()
    value = count_lattice(form, c_matrix, args.p_bound, budget=args.budget)
    instance = {"form": form.canonical(), "s": form.s, "C": c_matrix, "P": args.p_bound}
    return _record_and_print_count(args, "count-lattice", value, instance,
                                   time.perf_counter() - t0)


def cmd_snf(args) -> int:
    res = smith_normal_form(_parse_matrix(args.c_matrix))
    payload = {
        "D": [list(r) for r in res.d],
        "U": [list(r) for r in res.u],
        "V": [list(r) for r in res.v],
        "diagonal": res.diagonal,
    }
    _sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_arcs(args) -> int:
    form = _load_form(args)
    system = expand_system(form, args.m)
    box = _parse_box(args.box)
    r = system.r
    if args.grid**r > 200_000:
        raise BudgetError(f"{args.grid ** r} grid points exceed the arcs budget")
    params = ArcParams(theta=args.theta, c=args.c, p_scale=args.p_scale, d=form.d)
    rows: List[dict] = []
    import itertools

    for combo in itertools.product(range(args.grid), repeat=r):
        alpha = [k / args.grid for k in combo]
        t_val = exponential_sum(system, alpha, box, budget=args.budget)
        cls = classify_arc(alpha, params)
        row = {f"alpha_{i + 1}": alpha[i] for i in range(r)}
        row.update({
            "re_T": t_val.real,
            "im_T": t_val.imag,
            "abs_T": abs(t_val),
            "kind": cls.kind,
            "q": cls.point.homogenized.q if cls.point else "",
        })
        rows.append(row)
    _emit(args, {"rows": rows}, csv_rows=rows)
    return 0


def cmd_chi_p(args) -> int:
    form = _load_form(args)
    psi = _parse_psi(args.psi, args.m, args.d)
    system = expand_system(form, psi.m)
    method = args.method
    if method in ("sampled",) and args.seed is None:
        raise InputError("--seed is required for sampled chi_p")
    if method == "auto":
        cfg = DensityConfig(seed=args.seed if args.seed is not None else 0,
                            chi_p_samples=args.samples, chi_p_limit=args.budget)
        if (args.p**args.level) ** system.nvars > args.budget and args.seed is None:
            raise InputError("--seed is required (instance too large for exact counting)")
        est = chi_p_auto(system, psi, args.p, args.level, cfg)
    elif method == "exact":
        est = chi_p_exact(system, psi, args.p, args.level, limit=args.budget)
    elif method == "closed":
        est = chi_p_pair_closed_form(form, psi, args.p)
    elif method == "convolution":
        est = chi_p_pair_convolution(form, psi, args.p, args.level)
    elif method == "sampled":
        est = chi_p_sampled(system, psi, args.p, args.level, args.samples, args.seed)
    else:
        raise InputError(f"unknown method {method!r}")
    _emit(args, {"p": args.p, "l": est.level.get("l", args.level), "value": est.value,
                 "stderr": est.stderr, "method": est.method, "note": est.note})
    return 0


def cmd_chi_inf(args) -> int:
    form = _load_form(args)
    psi = _parse_psi(args.psi, args.m, args.d)
    system = expand_system(form, psi.m)
    est = chi_inf_slab(system, normalize_psi(psi), args.eps, args.samples,
                       args.seed, threads=args.threads)
    _emit(args, {"value": est.value, "stderr": est.stderr, "eps": args.eps,
                 "samples": args.samples, "method": est.method})
    return 0


def cmd_series(args) -> int:
    form = _load_form(args)
    psi = _parse_psi(args.psi, args.m, args.d)
    system = expand_system(form, psi.m)
    est = singular_series_truncated(system, psi, args.qmax, budget=args.budget)
    _emit(args, {"q_max": args.qmax, "value": est.value, "method": est.method})
    return 0


def _density_config(args) -> DensityConfig:
    overrides = {}
    for item in args.l_override or []:
        p_txt, l_txt = item.split(":", 1)
        overrides[int(p_txt)] = int(l_txt)
    return DensityConfig(
        seed=args.seed,
        p_max=args.p_max,
        l_overrides=overrides,
        chi_p_samples=args.chi_p_samples,
        eps=args.eps,
        chi_inf_samples=args.samples,
        threads=args.threads,
    )


def cmd_main_term(args) -> int:
    form = _load_form(args)
    psi = _parse_psi(args.psi, args.m, args.d)
    cfg = _density_config(args)
    report = main_term(form, psi, cfg)
    payload = {
        "magnitude_factor": report.magnitude_factor,
        "chi_inf": report.chi_inf.value,
        "chi_inf_stderr": report.chi_inf.stderr,
        "euler_product": report.euler.value,
        "euler_stderr": report.euler.stderr,
        "euler_factors": {str(p): est.value for p, est in (report.euler.factors or ())},
        "prediction": report.prediction,
        "prediction_stderr": report.stderr,
        "obstructed": report.obstructed,
    }
    _emit(args, payload)
    return 0


def cmd_weyl_check(args) -> int:
    form = _load_form(args)
    system = expand_system(form, args.m)
    box = _parse_box(args.box)
    alphas: List[List[float]] = []
    if args.alpha:
        alphas.append([float(x) for x in args.alpha.split(",")])
    if args.random:
        if args.seed is None:
            raise InputError("--seed is required with --random")
        rng = stream("weyl-check-cli", args.seed)
        for _ in range(args.random):
            alphas.append([float(v) for v in rng.uniform(0, 1, size=system.r)])
    if not alphas:
        raise InputError("provide --alpha or --random N")
    rows = []
    for alpha in alphas:
        rep = weyl_cs_check(system, alpha, box, args.j1, budget=args.budget)
        rows.append({"alpha": ",".join(f"{a:.6f}" for a in alpha),
                     "lhs_squared": rep.lhs_squared,
                     "rhs_bound": rep.rhs_bound,
                     "holds": rep.holds})
    payload = {"holds_all": all(r["holds"] for r in rows), "checks": len(rows)}
    _emit(args, payload, csv_rows=rows)
    return 0 if payload["holds_all"] else 4


# ---------------------------------------------------------------------------
# verify: experiment orchestration
# ---------------------------------------------------------------------------

def _family_targets(spec: dict) -> List[tuple]:
    fam = spec.get("family")
    if not fam:
        raise InputError("experiment spec needs a 'family'")
    kind = fam.get("type")
    out = []
    if kind == "diag-scale":
        gram = fam["gram"]
        scales = fam["scales"]
        if not scales:
            raise InputError("family is empty")
        for n in scales:
            scaled = [[n * v for v in row] for row in gram]
            out.append((str(n), TargetForm.from_gram(scaled)))
    elif kind == "explicit":
        targets = fam["targets"]
        if not targets:
            raise InputError("family is empty")
        m = spec["m"]
        d = spec.get("d")
        for i, text in enumerate(targets):
            out.append((f"t{i}", _parse_psi(text, m, d)))
    else:
        raise InputError(f"unknown family type {kind!r}")
    return out


def cmd_verify(args) -> int:
    spec = json.loads(Path(args.spec).read_text())
    for key in ("form", "s", "m", "density"):
        if key not in spec:
            raise InputError(f"experiment spec is missing {key!r}")
    density = spec["density"]
    if "seed" not in density:
        raise InputError("density config must carry an explicit seed")
    form = parse_form(spec["form"], spec["s"])
    cfg = DensityConfig(
        seed=density["seed"],
        p_max=density.get("p_max", 53),
        l_overrides={int(k): int(v) for k, v in density.get("l_overrides", {}).items()},
        chi_p_samples=density.get("chi_p_samples", 200_000),
        eps=density.get("eps", 0.05),
        chi_inf_samples=density.get("chi_inf_samples", 1_000_000),
        threads=args.threads,
    )
    budget = spec.get("budget", 10**8)
    rows: List[dict] = []
    chi_inf_memo: Dict[str, object] = {}
    for label, psi in _family_targets(spec):
        digest = instance_digest({
            "kind": "verify-row",
            "form": form.canonical(),
            "s": form.s,
            "psi": psi.canonical(),
            "density": {
                "seed": cfg.seed, "p_max": cfg.p_max,
                "l_overrides": {str(k): v for k, v in sorted(cfg.l_overrides.items())},
                "chi_p_samples": cfg.chi_p_samples, "eps": cfg.eps,
                "chi_inf_samples": cfg.chi_inf_samples,
            },
            "version": __version__,
        })
        cached = cache_read(digest)
        if cached is not None:
            row = dict(cached["row"])
            row["cached"] = "yes"
            rows.append(row)
            continue
        row = {"n": label, "digest": digest, "cached": "no"}
        try:
            t0 = time.perf_counter()
            exact = count_representations(form, psi, budget=budget)
            report = _main_term_cached(form, psi, cfg, chi_inf_memo)
            elapsed = time.perf_counter() - t0
            row.update({
                "exact": exact,
                "magnitude_factor": report.magnitude_factor,
                "chi_inf": report.chi_inf.value,
                "chi_inf_stderr": report.chi_inf.stderr,
                "euler_product": report.euler.value,
                "euler_stderr": report.euler.stderr,
                "prediction": report.prediction,
                "prediction_stderr": report.stderr,
                "ratio": exact / report.prediction if report.prediction > 0 else "",
                "seconds": round(elapsed, 3),
                "error": "",
            })
            cache_write(digest, {"schema": SCHEMA_VERSION, "digest": digest,
                                 "row": row, "version": __version__})
        except Exception as exc:  # partial failure: mark the row, continue
            row.update({"exact": "", "prediction": "", "ratio": "",
                        "error": f"{type(exc).__name__}: {exc}"})
        rows.append(row)
    payload = {"form": form.canonical(), "rows": rows}
    _emit(args, payload, csv_rows=rows)
    return 0


def _main_term_cached(form, psi, cfg, memo):
    """main_term with the chi_inf slab shared across a diag-scale family."""
    from .densities import MainTermReport, euler_product
    from .psi import magnitude as _magnitude

    key = json.dumps(sorted(normalize_psi(psi).items(), key=str), default=str) \
        + f"|{cfg.eps}|{cfg.chi_inf_samples}|{cfg.seed}"
    sys_exp = expand_system(form, psi.m)
    if key not in memo:
        memo[key] = chi_inf_slab(sys_exp, normalize_psi(psi), cfg.eps,
                                 cfg.chi_inf_samples, cfg.seed, threads=cfg.threads)
    chi_inf = memo[key]
    euler = euler_product(sys_exp, psi, cfg.p_max, cfg)
    ms, rd = sys_exp.nvars, sys_exp.r * sys_exp.d
    mag_factor = float(_magnitude(psi)) ** ((ms - rd) / (psi.m * psi.d))
    prediction = mag_factor * chi_inf.value * euler.value
    stderr = mag_factor * math.hypot(chi_inf.stderr * euler.value,
                                     euler.stderr * chi_inf.value)
    return MainTermReport(mag_factor, chi_inf, euler, prediction, stderr,
                          euler.obstructed or chi_inf.value == 0.0)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="repcount",
        description="Count identical representations of forms by forms and "
                    "compare against the density prediction.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, form=True, psi=False, need_m=True):
        if form:
            p.add_argument("--form", help="form text, e.g. 'x1^2 + x2^2'")
            p.add_argument("--form-file", dest="form_file", help="file with the form text")
            p.add_argument("--s", type=int, required=True, help="number of variables")
        if need_m:
            p.add_argument("--m", type=int, required=True, help="number of parameters")
        if psi:
            p.add_argument("--psi", required=True,
                           help="coefficients j1..jd:n, e.g. 11:2,12:1,22:2")
            p.add_argument("--d", type=int, default=None, help="degree of psi (inferred)")
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")
        p.add_argument("--out", help="also write the output to this path")
        p.add_argument("--budget", type=int, default=10**8,
                       help="enumeration/evaluation budget")
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("expand", help="print the expanded system {Phi_j}")
    add_common(p)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("analyze-psi", help="magnitude, eccentricity, pseudo-diagonality")
    add_common(p, form=False, psi=True)
    p.set_defaults(func=cmd_analyze_psi)

    p = sub.add_parser("count", help="exact N(F; psi)")
    add_common(p, psi=True)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("count-boxed", help="exact boxed count")
    add_common(p, psi=True)
    p.add_argument("--box", required=True, help="P_1,...,P_m")
    p.set_defaults(func=cmd_count_boxed)

    p = sub.add_parser("count-lattice", help="exact N_C(P)")
    add_common(p, need_m=False)
    p.add_argument("--C", dest="c_matrix", required=True, help="rows a,b;c,d")
    p.add_argument("--P", dest="p_bound", type=float, required=True)
    p.set_defaults(func=cmd_count_lattice)

    p = sub.add_parser("snf", help="Smith normal form UCV = D")
    p.add_argument("--C", dest="c_matrix", required=True)
    p.set_defaults(func=cmd_snf)

    p = sub.add_parser("arcs", help="classify a grid of frequency vectors")
    add_common(p)
    p.add_argument("--box", required=True)
    p.add_argument("--grid", type=int, default=4, help="points per axis")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--P", dest="p_scale", type=float, required=True)
    p.set_defaults(func=cmd_arcs)

    p = sub.add_parser("chi-p", help="local density chi_p")
    add_common(p, psi=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--l", dest="level", type=int, default=1)
    p.add_argument("--method", choices=("auto", "exact", "sampled", "closed", "convolution"),
                   default="auto")
    p.add_argument("--samples", type=int, default=200_000)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_chi_p)

    p = sub.add_parser("chi-inf", help="real density (thickened slab Monte Carlo)")
    add_common(p, psi=True)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_chi_inf)

    p = sub.add_parser("series", help="truncated singular series")
    add_common(p, psi=True)
    p.add_argument("--qmax", type=int, required=True)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("main-term", help="assembled prediction with factor breakdown")
    add_common(p, psi=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--p-max", dest="p_max", type=int, default=53)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--chi-p-samples", dest="chi_p_samples", type=int, default=200_000)
    p.add_argument("--l-override", dest="l_override", action="append",
                   help="p:l, may repeat")
    p.set_defaults(func=cmd_main_term)

    p = sub.add_parser("verify", help="run an experiment spec and tabulate ratios")
    p.add_argument("--spec", required=True, help="experiment JSON file")
    p.add_argument("--format", choices=("text", "json", "csv"), default="csv")
    p.add_argument("--out", help="also write the table to this path")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("weyl-check", help="constant-one Cauchy-Schwarz check")
    add_common(p)
    p.add_argument("--box", required=True)
    p.add_argument("--j1", type=int, default=1)
    p.add_argument("--alpha", help="comma-separated frequency vector")
    p.add_argument("--random", type=int, default=0, help="also check N random alphas")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_weyl_check)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except BudgetError as exc:
        print(f"budget refused: {exc}", file=_sys.stderr)
        return 3
    except InputError as exc:
        print(f"input error: {exc}", file=_sys.stderr)
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)
    except Exception as exc:  # internal
        import traceback

        traceback.print_exc()
        print(f"internal error: {exc}", file=_sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
