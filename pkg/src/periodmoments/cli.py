"""Experiment driver: each subcommand runs one numerical experiment,
writes a deterministic CSV table plus a JSON summary with pass/fail
checks, and exits 0 (all checks pass), 1 (a numerical check failed), or
2 (configuration error).

Determinism: all sampling goes through numpy's default_rng seeded from
--seed; identical parameters and seed reproduce the CSV byte for byte
(wall-clock time is reported only in the JSON).  PERIOD_MOMENTS_PRECISION
overrides the default working digits; --config FILE.json supplies
defaults that explicit flags override.
"""

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from . import report, spectral
from .eisenstein_gl2 import completed_eisenstein_f64, residue_at_one
from .epstein import (
    det_from_y,
    dual_y,
    epstein_xi_f64,
    epstein_z_f64,
    gln_completed_eisenstein_f64,
)
from .modforms import cusp_dim, hecke_eigenforms
from .moment import moment_sweep, norm_quadrature, unfold_check
from .precision import PoleError, RangeError, default_precision, working_dps
from .rankin_selberg import RankinSelbergPair
from .special import dirichlet_beta, zeta

UNFOLD_TOL = 1e-4
STADE2_TOL = 1e-8
STADE3_TOL = 1e-4
NORM_TOL = 1e-6
RESIDUE_TOL = 1e-8
EPSTEIN_TOL = 1e-8
SLOPE_MAX = 1.3
RATIO_WINDOW = (0.125, 8.0)
LEMMA1_SLOPE_WINDOW = (-0.05, 0.02)
LEMMA1_MAX_OVER_MEDIAN = 3.0


def _forms_cache():
    cache = {}

    def get(k):
        if k not in cache:
            cache[k] = hecke_eigenforms(k)
        return cache[k]

    return get


_FORMS = _forms_cache()


# ---------------------------------------------------------------------------
# experiments: each returns (header, rows, checks, extra_params)


def run_moment(args, rng):
    k_lo = args.k_min + (args.k_min % 2)
    weights = [k for k in range(k_lo, args.k_max + 1, 2) if cusp_dim(k) >= 1]
    if not weights:
        raise RangeError("no weights with cusp forms in [%d, %d]" % (args.k_min, args.k_max))
    rows_data = moment_sweep(weights, forms_by_k={k: _FORMS(k) for k in weights}, eps=args.eps)
    header = ["k", "dim", "S_k", "S_k_str", "norm_fE", "bessel_slack", "slope_so_far"]
    rows = [
        [r["k"], r["dim"], r["S_k"], report.hp_str(r["S_k"]), r["norm_fE"],
         r["bessel_slack"], r["slope_so_far"]]
        for r in rows_data
    ]
    min_slack = min(r["bessel_slack"] for r in rows_data)
    checks = [report.check("min_bessel_slack", min_slack, 0.0, min_slack >= 0.0)]
    if len(rows_data) >= 2:
        slope = rows_data[-1]["slope_so_far"]
        checks.append(report.check("loglog_slope", slope, SLOPE_MAX, slope <= SLOPE_MAX))
    extra = {"weights": weights, "eps": args.eps}
    return header, rows, checks, extra


def run_unfold_check(args, rng):
    forms = _FORMS(args.k)
    rows = []
    worst = 0.0
    for i, f in enumerate(forms):
        for j, g in enumerate(forms):
            for s in args.s:
                d = unfold_check(f, g, s)
                worst = max(worst, d["rel_err"])
                rows.append([args.k, i, j, s, d["quadrature"],
                             report.hp_str(d["quadrature"]), d["afe"], d["rel_err"]])
    header = ["k", "i", "j", "s", "quadrature", "quadrature_str", "afe", "rel_err"]
    checks = [report.check("max_rel_err", worst, UNFOLD_TOL, worst <= UNFOLD_TOL)]
    return header, rows, checks, {"k": args.k, "s": args.s}


# five deterministic n=3 grid pairs, sup-norm <= 1
STADE3_GRID = [
    ((0.5, 0.5), (0.5, 0.5)),
    ((0.7, -0.3), (0.2, 0.4)),
    ((-0.6, 0.6), (0.5, -0.5)),
    ((0.3, 0.8), (0.6, 0.1)),
    ((0.9, 0.1), (-0.4, -0.7)),
]


def run_stade(args, rng):
    s_values = args.s if args.s else ([0.5, 1.0, 1.5] if args.n == 2 else [1.0])
    rows = []
    worst = 0.0
    eq11 = []
    if args.n == 2:
        header = ["n", "nu", "mu", "s", "lhs", "lhs_str", "rhs", "rel_err", "eq11_ratio"]
        for _ in range(args.samples):
            tn = rng.uniform(-2.0, 2.0)
            tm = float(np.clip(tn + rng.uniform(-1.0, 1.0), -2.0, 2.0))
            pn = spectral.spectral_params(2, [1j * tn])
            pm = spectral.spectral_params(2, [1j * tm])
            for s in s_values:
                r = spectral.stade_check(pn, pm, s)
                worst = max(worst, r["rel_err"])
                ratio = None
                if s == 0.5:
                    ball = spectral.plancherel_ball(pn, radius=1.0)["integral"]
                    ratio = abs(r["lhs"]) * math.sqrt(ball)
                    eq11.append(ratio)
                rows.append([2, tn, tm, s, r["lhs"].real,
                             report.hp_str(r["lhs"].real), r["rhs"].real,
                             r["rel_err"], ratio])
        tol = STADE2_TOL
    else:
        header = ["n", "nu1", "nu2", "mu1", "mu2", "s", "lhs", "lhs_str", "rhs", "rel_err"]
        pairs = list(STADE3_GRID[: args.samples])
        while len(pairs) < args.samples:
            pairs.append((tuple(rng.uniform(-1, 1, 2)), tuple(rng.uniform(-1, 1, 2))))
        for nu_t, mu_t in pairs:
            pn = spectral.spectral_params(3, [1j * v for v in nu_t])
            pm = spectral.spectral_params(3, [1j * v for v in mu_t])
            for s in s_values:
                r = spectral.stade_check(pn, pm, s)
                worst = max(worst, r["rel_err"])
                rows.append([3, nu_t[0], nu_t[1], mu_t[0], mu_t[1], s,
                             complex(r["lhs"]), report.hp_str(complex(r["lhs"])),
                             complex(r["rhs"]), r["rel_err"]])
        tol = STADE3_TOL
    checks = [report.check("max_rel_err", worst, tol, worst <= tol)]
    if eq11:
        lo, hi = RATIO_WINDOW
        checks.append(report.check("eq11_ratio_min", min(eq11), list(RATIO_WINDOW),
                                   lo <= min(eq11) <= hi))
        checks.append(report.check("eq11_ratio_max", max(eq11), list(RATIO_WINDOW),
                                   lo <= max(eq11) <= hi))
    return header, rows, checks, {"n": args.n, "samples": args.samples, "s": s_values}


def _draw_in_ball(rng, dim, radius):
    while True:
        t = rng.uniform(-radius, radius, dim)
        if float(np.linalg.norm(t)) <= radius:
            return t


def run_plancherel(args, rng):
    header = ["n"] + ["t%d" % (i + 1) for i in range(args.n - 1)] + [
        "integral", "integral_str", "proxy", "ratio"]
    rows = []
    ratios = []
    agreement = None
    for idx in range(args.centers):
        t = _draw_in_ball(rng, args.n - 1, 20.0)
        p = spectral.spectral_params(args.n, [1j * v for v in t])
        q = spectral.plancherel_ball(p, radius=args.radius, scheme="quadrature")
        if idx == 0:
            m = spectral.plancherel_ball(p, radius=args.radius, scheme="mc", seed=args.seed)
            agreement = abs(q["integral"] - m["integral"]) / q["integral"]
        ratios.append(q["ratio"])
        rows.append([args.n] + [float(v) for v in t]
                    + [q["integral"], report.hp_str(q["integral"]), q["proxy"], q["ratio"]])
    lo, hi = RATIO_WINDOW
    checks = [
        report.check("ratio_min", min(ratios), list(RATIO_WINDOW), lo <= min(ratios) <= hi),
        report.check("ratio_max", max(ratios), list(RATIO_WINDOW), lo <= max(ratios) <= hi),
        report.check("scheme_agreement", agreement, 0.01, agreement <= 0.01),
    ]
    return header, rows, checks, {"n": args.n, "centers": args.centers, "radius": args.radius}


def _random_gram(rng, n):
    # reject ill-conditioned draws and dets too close to 1 (a det=1 matrix
    # makes the balanced split coincide with split=1, which would reduce
    # the functional-equation check to a trivial rearrangement)
    while True:
        a = rng.normal(size=(n, n))
        m = a @ a.T + 0.25 * np.eye(n)
        det = float(np.linalg.det(m))
        cond = float(np.linalg.cond(m))
        if cond <= 60.0 and abs(det ** (-1.0 / n) - 1.0) >= 0.05:
            return m, det


def run_epstein_fe(args, rng):
    header = ["n", "idx", "rho", "xi_split1", "xi_split1_str", "xi_dual", "rel_err"]
    rows = []
    worst = 0.0
    for idx in range(args.samples):
        m, det = _random_gram(rng, args.n)
        rho = rng.uniform(0.3, args.n / 2 - 0.3)
        lhs = epstein_xi_f64(m, rho, split=1.0)
        rhs = det ** -0.5 * epstein_xi_f64(np.linalg.inv(m), args.n / 2 - rho, split=None)
        rel = abs(lhs - rhs) / abs(rhs)
        worst = max(worst, rel)
        rows.append([args.n, idx, rho, lhs, report.hp_str(lhs), rhs, rel])
    checks = [report.check("max_fe_rel_err", worst, EPSTEIN_TOL, worst <= EPSTEIN_TOL)]
    # classical identity Z(I_2, rho) = 2 zeta(rho) beta(rho)
    worst_id = 0.0
    for rho in (0.7, 1.3, 2.5):
        z = epstein_z_f64(np.eye(2), rho)
        with working_dps(30):
            want = float(2 * zeta(rho) * dirichlet_beta(rho))
        worst_id = max(worst_id, abs(z - want) / abs(want))
    checks.append(report.check("max_z2_identity_rel_err", worst_id, EPSTEIN_TOL,
                               worst_id <= EPSTEIN_TOL))
    return header, rows, checks, {"n": args.n, "samples": args.samples}


def run_lemma1(args, rng):
    n = args.n
    header = (["n"] + ["y%d" % (i + 1) for i in range(n - 1)]
              + ["det_z", "det_ztilde", "E_star", "E_star_str", "ratio"])
    rows = []
    dets = []
    ratios = []
    lo_y, hi_y = math.sqrt(3) / 2, 1e3
    for _ in range(args.samples):
        y = np.exp(rng.uniform(math.log(lo_y), math.log(hi_y), n - 1))
        x = np.eye(n)
        iu = np.triu_indices(n, k=1)
        x[iu] = rng.uniform(0.0, 1.0, len(iu[0]))
        e = gln_completed_eisenstein_f64(y, 0.5, x=x)
        dz = det_from_y(y)
        dzt = det_from_y(dual_y(y))
        denom = dz ** (0.5 + args.eps) + dzt ** (0.5 + args.eps)
        ratio = abs(e) / denom
        dets.append(dz)
        ratios.append(ratio)
        rows.append([n] + [float(v) for v in y]
                    + [dz, dzt, e, report.hp_str(e), ratio])
    slope = float(np.polyfit(np.log(dets), np.log(ratios), 1)[0])
    med = float(np.median(ratios))
    spread = max(ratios) / med
    lo, hi = LEMMA1_SLOPE_WINDOW
    checks = [
        report.check("ratio_slope", slope, list(LEMMA1_SLOPE_WINDOW), lo <= slope <= hi),
        report.check("max_over_median", spread, LEMMA1_MAX_OVER_MEDIAN,
                     spread <= LEMMA1_MAX_OVER_MEDIAN),
    ]
    return header, rows, checks, {"n": n, "samples": args.samples, "eps": args.eps}


RESIDUE_POINTS = [(0.0, 1.0), (0.3, 0.8), (-0.25, 1.7), (0.5, 2.5), (0.1, 0.9)]


def run_eisenstein_residue(args, rng):
    header = ["x", "y", "residue", "residue_str", "abs_err"]
    rows = []
    vals = []
    target = 3.0 / math.pi
    for x, y in RESIDUE_POINTS:
        r = residue_at_one(complex(x, y))
        rf = float(r)
        vals.append(rf)
        rows.append([x, y, rf, report.hp_str(r), abs(rf - target)])
    worst = max(abs(v - target) for v in vals)
    spread = max(vals) - min(vals)
    checks = [
        report.check("max_abs_err_vs_3_over_pi", worst, RESIDUE_TOL, worst <= RESIDUE_TOL),
        report.check("spread_across_points", spread, RESIDUE_TOL, spread <= RESIDUE_TOL),
    ]
    return header, rows, checks, {"points": len(RESIDUE_POINTS)}


def run_norm_crosscheck(args, rng):
    header = ["k", "form_index", "norm_quad", "norm_residue", "norm_residue_str", "rel_err"]
    rows = []
    worst = 0.0
    for k in args.k:
        for i, f in enumerate(_FORMS(k)):
            nq = norm_quadrature(f)
            nt = RankinSelbergPair(f).norm_theta()
            rel = abs(nq - nt) / nt
            worst = max(worst, rel)
            rows.append([k, i, nq, nt, report.hp_str(nt), rel])
    checks = [report.check("max_rel_err", worst, NORM_TOL, worst <= NORM_TOL)]
    return header, rows, checks, {"k": args.k}


EXPERIMENTS = {
    "moment": run_moment,
    "unfold-check": run_unfold_check,
    "stade": run_stade,
    "plancherel": run_plancherel,
    "epstein-fe": run_epstein_fe,
    "lemma1": run_lemma1,
    "eisenstein-residue": run_eisenstein_residue,
    "norm-crosscheck": run_norm_crosscheck,
}


# ---------------------------------------------------------------------------
# argument plumbing


def _add_common(p):
    p.add_argument("--seed", type=int, default=0, help="rng seed (default 0)")
    p.add_argument("--output", default=None, help="CSV path (default <experiment>.csv)")
    p.add_argument("--summary", default=None, help="JSON path (default CSV path with .json)")
    p.add_argument("--config", default=None, help="JSON file with default parameter values")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="periodmoments",
        description="numerical experiments for period integrals and Rankin-Selberg moments",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    subparsers = {}

    p = sub.add_parser("moment", help="second-moment sweep over even weights")
    p.add_argument("--k-min", type=int, default=12)
    p.add_argument("--k-max", type=int, default=40)
    p.add_argument("--eps", type=float, default=0.1)
    subparsers["moment"] = p

    p = sub.add_parser("unfold-check", help="two-route unfolding agreement at one weight")
    p.add_argument("--k", type=int, default=12)
    p.add_argument("--s", type=float, nargs="+", default=[0.5, 0.75])
    subparsers["unfold-check"] = p

    p = sub.add_parser("stade", help="Stade formula residuals")
    p.add_argument("--n", type=int, choices=(2, 3), default=2)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--s", type=float, nargs="+", default=None)
    subparsers["stade"] = p

    p = sub.add_parser("plancherel", help="spectral ball mass vs product proxy")
    p.add_argument("--n", type=int, choices=(2, 3), default=2)
    p.add_argument("--centers", type=int, default=20)
    p.add_argument("--radius", type=float, default=1.0)
    subparsers["plancherel"] = p

    p = sub.add_parser("epstein-fe", help="Epstein zeta functional equation residuals")
    p.add_argument("--n", type=int, choices=(2, 3, 4), default=2)
    p.add_argument("--samples", type=int, default=10)
    subparsers["epstein-fe"] = p

    p = sub.add_parser("lemma1", help="completed Eisenstein central-value bound on the Siegel set")
    p.add_argument("--n", type=int, choices=(2, 3, 4), default=2)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--eps", type=float, default=0.05)
    subparsers["lemma1"] = p

    p = sub.add_parser("eisenstein-residue", help="residue of E(z,s) at s=1 vs 3/pi")
    subparsers["eisenstein-residue"] = p

    p = sub.add_parser("norm-crosscheck", help="Petersson norm: quadrature vs residue route")
    p.add_argument("--k", type=int, nargs="+", default=[12])
    subparsers["norm-crosscheck"] = p

    for p in subparsers.values():
        _add_common(p)
    return parser, subparsers


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    prec = default_precision()
    import mpmath as mp

    mp.mp.dps = prec.working_digits
    parser, subparsers = build_parser()

    # --config supplies defaults; explicit flags still win
    if "--config" in argv:
        cfg_path = argv[argv.index("--config") + 1]
        try:
            with open(cfg_path, "r", encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            print("config error: %s" % exc, file=sys.stderr)
            return 2
        if not isinstance(cfg, dict):
            print("config error: top level must be a JSON object", file=sys.stderr)
            return 2
        for p in subparsers.values():
            p.set_defaults(**{k.replace("-", "_"): v for k, v in cfg.items()})

    args = parser.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    runner = EXPERIMENTS[args.experiment]

    t0 = time.time()
    try:
        header, rows, checks, extra = runner(args, rng)
    except (RangeError, PoleError) as exc:
        print("configuration error: %s" % exc, file=sys.stderr)
        return 2
    wall = time.time() - t0

    out_csv = args.output or ("%s.csv" % args.experiment)
    out_json = args.summary or (os.path.splitext(out_csv)[0] + ".json")
    report.write_csv(out_csv, header, rows)
    params = {"seed": args.seed}
    params.update(extra)
    report.write_json(out_json, args.experiment, params, checks, wall)

    for c in checks:
        print("check %-28s value=%-12.6g tol=%-14s %s"
              % (c["name"], c["value"], c["tolerance"], "PASS" if c["pass"] else "FAIL"))
    print("wrote %s and %s (%.1f s)" % (out_csv, out_json, wall))
    return 0 if report.all_pass(checks) else 1


if __name__ == "__main__":
    sys.exit(main())
