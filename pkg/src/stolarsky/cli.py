"""Command-line interface: ``stolarsky <subcommand> [flags]``."""
from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import discrepancy as disc
from . import energy, gegenbauer, io, optimize
from .kernels import make_kernel
from .sphere import constant_Cd, fibonacci_points

log = logging.getLogger("stolarsky")

COMMANDS = ("discrepancy", "energy", "verify-stolarsky", "optimize", "expand", "pd-check",
            "constants", "scaling")
SEED_ENV = "STOLARSKY_SEED"
DEFAULT_NS = (100, 200, 400, 800, 1600)


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    dim: int | None = None
    kernel: str | None = None
    delta: float | None = None
    family: str | None = None
    t: float | None = None
    mode: str = "both"
    samples: int = 200_000
    seed: int = 0
    n: int | None = None
    nmax: int = gegenbauer.DEFAULT_NMAX
    tol: float = gegenbauer.PD_TOL
    restarts: int = 8
    max_steps: int = 5000
    ns: tuple = DEFAULT_NS
    out: str | None = None
    expansion_out: str | None = None
    points_out: str | None = None
    csv: str | None = None
    extra: dict = field(default_factory=dict)

    def validate(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        need = {
            "discrepancy": ("input", "family"),
            "energy": ("input", "kernel"),
            "verify-stolarsky": ("input", "family"),
            "optimize": ("n", "dim", "kernel"),
            "expand": ("kernel", "dim"),
            "pd-check": ("kernel", "dim"),
            "constants": ("dim",),
            "scaling": (),
        }[self.command]
        missing = [f"--{k}" for k in need if getattr(self, k) is None]
        if missing:
            raise ValueError(f"{self.command} requires {', '.join(missing)}")
        if self.mode not in ("closed", "mc", "both"):
            raise ValueError("--mode must be closed, mc or both")
        if self.seed < 0:
            raise ValueError("--seed must be non-negative")


def _load(cfg):
    obj = io.load_pointset(cfg.input)
    if cfg.dim is not None and obj.dim != cfg.dim:
        raise ValueError(f"--dim {cfg.dim} conflicts with the file's dim {obj.dim}")
    return obj


def _family(cfg):
    return disc.DiscrepancyFamily.parse(cfg.family, cfg.t)


def _mc_dict(est):
    return {"value": est.value, "std_error": est.std_error, "samples": est.samples, "seed": est.seed}


def _cmd_discrepancy(cfg):
    target, fam = _load(cfg), _family(cfg)
    res = {"family": fam.kind, "t": fam.t, "dim": target.dim, "points": len(target)}
    if cfg.mode in ("closed", "both"):
        res["closed_form"] = disc.discrepancy_sq(target, fam)
    if cfg.mode in ("mc", "both"):
        res["monte_carlo"] = _mc_dict(disc.mc_discrepancy_sq(target, fam, cfg.samples, cfg.seed))
    return res


def _cmd_verify(cfg):
    target, fam = _load(cfg), _family(cfg)
    closed = disc.discrepancy_sq(target, fam)
    est = disc.mc_discrepancy_sq(target, fam, cfg.samples, cfg.seed)
    z = est.zscore(closed)
    return {
        "family": fam.kind, "t": fam.t, "dim": target.dim, "points": len(target),
        "closed_form": closed, "monte_carlo": _mc_dict(est), "zscore": z,
        "verdict": "PASS" if est.agrees_with(closed, 3.0) else "FAIL",
    }


def _cmd_energy(cfg):
    target = _load(cfg)
    K = make_kernel(cfg.kernel, cfg.delta)
    rep = energy.energy_gap(target, K, target.dim)
    return {"kernel": cfg.kernel, "delta": cfg.delta, "dim": target.dim,
            "discrete": rep.discrete, "continuous_sigma": rep.continuous_sigma, "gap": rep.gap}


def _cmd_optimize(cfg):
    K = make_kernel(cfg.kernel, cfg.delta)
    oc = optimize.OptimizerConfig(max_steps=cfg.max_steps, restarts=cfg.restarts, seed=cfg.seed)
    res = optimize.maximize_distance_sum(cfg.n, cfg.dim, K, oc)
    if cfg.points_out:
        io.save_pointset(res.points, cfg.points_out)
    out = {"n": cfg.n, "dim": cfg.dim, "kernel": cfg.kernel, "delta": K.delta, "value": res.value,
           "converged": res.converged, "restart": res.restart, "steps": res.trace[-1][0],
           "points": res.points.points, "symmetry_defect": optimize.symmetry_defect(res.points)}
    return out


def _expansion(cfg):
    lam = gegenbauer.lambda_for_dim(cfg.dim)
    return gegenbauer.expand_kernel(make_kernel(cfg.kernel, cfg.delta), lam, cfg.nmax)


def _cmd_expand(cfg):
    exp = _expansion(cfg)
    if cfg.expansion_out:
        io.export_expansion(exp, cfg.expansion_out)
    return {"kernel": cfg.kernel, "delta": cfg.delta, "dim": cfg.dim, "lambda": exp.lam,
            "n_max": exp.n_max, "coefficients": exp.coeffs, "truncation_error": exp.truncation_error}


def _cmd_pd(cfg):
    exp = _expansion(cfg)
    v = gegenbauer.is_positive_definite(exp, exp.lam, cfg.nmax, cfg.tol)
    return {"kernel": cfg.kernel, "delta": cfg.delta, "dim": cfg.dim, "n_max": exp.n_max,
            "is_pd": v.is_pd, "first_negative": v.first_negative, "tolerance": v.tolerance,
            "truncation_error": exp.truncation_error}


def _cmd_constants(cfg):
    from .kernels import GeodesicPow

    rows = []
    for d in range(1, cfg.dim + 1):
        rows.append({"d": d, "C_d": constant_Cd(d), "V_d": energy.vd(d),
                     "V_d_quadrature": energy.continuous_energy_sigma(GeodesicPow(2.0), d, "quad")})
    return {"table": rows}


def _cmd_scaling(cfg):
    ns = [int(n) for n in cfg.ns]
    rows = []
    for n in ns:
        d2 = disc.cap_discrepancy_sq(fibonacci_points(n))
        rows.append({"N": n, "cap_discrepancy_sq": d2, "cap_discrepancy": float(np.sqrt(max(d2, 0.0)))})
    x = np.log([r["N"] for r in rows])
    y = np.log([r["cap_discrepancy"] for r in rows])
    slope, intercept = np.polyfit(x, y, 1)
    if cfg.csv:
        with open(cfg.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=["N", "cap_discrepancy_sq", "cap_discrepancy"])
            w.writeheader()
            for r in rows:
                w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
    return {"dim": 2, "rows": rows, "slope": float(slope), "intercept": float(intercept),
            "target_slope": -0.75}


HANDLERS = {
    "discrepancy": _cmd_discrepancy,
    "energy": _cmd_energy,
    "verify-stolarsky": _cmd_verify,
    "optimize": _cmd_optimize,
    "expand": _cmd_expand,
    "pd-check": _cmd_pd,
    "constants": _cmd_constants,
    "scaling": _cmd_scaling,
}


def run_subcommand(cfg: RunConfig) -> dict:
    """Run one subcommand and return its report."""
    cfg.validate()
    start = time.perf_counter()
    results = HANDLERS[cfg.command](cfg)
    echo = {k: v for k, v in asdict(cfg).items() if v is not None and k != "extra"}
    return {
        "command": cfg.command,
        "config": echo,
        "inputs_digest": io.file_digest(cfg.input),
        "results": results,
        "seed": cfg.seed,
        "versions": io.versions(),
        "wall_time_s": time.perf_counter() - start,
    }


def _summary(report: dict) -> str:
    r = report["results"]
    cmd = report["command"]
    if cmd == "verify-stolarsky":
        mc = r["monte_carlo"]
        return (f"{r['family']}: closed {r['closed_form']:.10g}  mc {mc['value']:.10g} "
                f"+/- {mc['std_error']:.3g}  z={r['zscore']:.2f}  {r['verdict']}")
    if cmd == "scaling":
        lines = [f"N={row['N']:>6d}  D={row['cap_discrepancy']:.6e}" for row in r["rows"]]
        return "\n".join(lines + [f"slope {r['slope']:.4f} (target -0.75)"])
    if cmd == "constants":
        return "\n".join(f"d={row['d']:>3d}  C_d={row['C_d']:.15g}  V_d={row['V_d']:.15g}" for row in r["table"])
    if cmd == "pd-check":
        return f"positive definite: {r['is_pd']}" + (f" (first negative {r['first_negative']})" if not r["is_pd"] else "")
    if cmd == "optimize":
        return f"value {r['value']:.15g}  converged={r['converged']}  symmetry_defect={r['symmetry_defect']:.3g}"
    if cmd == "expand":
        return f"lambda={r['lambda']} n_max={r['n_max']} truncation_error={r['truncation_error']:.3g}"
    if cmd == "energy":
        return f"discrete {r['discrete']:.15g}  sigma {r['continuous_sigma']:.15g}  gap {r['gap']:.15g}"
    parts = []
    if "closed_form" in r:
        parts.append(f"closed {r['closed_form']:.12g}")
    if "monte_carlo" in r:
        parts.append(f"mc {r['monte_carlo']['value']:.12g} +/- {r['monte_carlo']['std_error']:.3g}")
    return f"{r['family']}: " + "  ".join(parts)


def build_parser() -> argparse.ArgumentParser:
    env_seed = os.environ.get(SEED_ENV)
    default_seed = int(env_seed) if env_seed else 0
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="point-set / measure file")
    common.add_argument("--dim", type=int, help="sphere dimension d")
    common.add_argument("--kernel", help="euclidean | geodesic | wedge | slice | inner")
    common.add_argument("--delta", type=float, help="kernel exponent (k for 'inner')")
    common.add_argument("--family", help="cap | hemisphere | wedge | slice (cap with --t: fixed height)")
    common.add_argument("--t", type=float, help="fixed cap height")
    common.add_argument("--mode", default="both", choices=("closed", "mc", "both"))
    common.add_argument("--samples", type=int, default=200_000)
    common.add_argument("--seed", type=int, default=default_seed,
                        help=f"random seed (default from ${SEED_ENV}, else 0)")
    common.add_argument("--n", type=int, help="number of points to optimize")
    common.add_argument("--nmax", type=int, default=gegenbauer.DEFAULT_NMAX)
    common.add_argument("--tol", type=float, default=gegenbauer.PD_TOL)
    common.add_argument("--restarts", type=int, default=8)
    common.add_argument("--max-steps", type=int, default=5000)
    common.add_argument("--ns", default=",".join(map(str, DEFAULT_NS)), help="comma-separated N values")
    common.add_argument("--out", help="write the JSON report here")
    common.add_argument("--expansion-out", help="expand: write the expansion file here")
    common.add_argument("--points-out", help="optimize: write the best configuration here")
    common.add_argument("--csv", help="scaling: write the N-sweep as CSV here")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="stolarsky", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = RunConfig(
        command=args.command, input=args.input, dim=args.dim, kernel=args.kernel, delta=args.delta,
        family=args.family, t=args.t, mode=args.mode, samples=args.samples, seed=args.seed, n=args.n,
        nmax=args.nmax, tol=args.tol, restarts=args.restarts, max_steps=args.max_steps,
        ns=tuple(int(v) for v in args.ns.split(",") if v.strip()), out=args.out,
        expansion_out=args.expansion_out, points_out=args.points_out, csv=args.csv,
    )
    try:
        report = run_subcommand(cfg)
        if cfg.out:
            io.save_report(report, cfg.out)
            print(_summary(report))
        else:
            print(io.dump_report(report))
    except (ValueError, OSError, TypeError, RuntimeError) as exc:
        print(f"stolarsky {cfg.command}: error: {exc}", file=sys.stderr)
        return 2
    if report["results"].get("verdict") == "FAIL":
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
