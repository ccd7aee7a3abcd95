"""Command-line interface.

Verbs:
  compute           one state -> JSON report (measure, bounds, discord, basis verdict)
  sweep             parameter grid -> CSV (or JSON) table
  reproduce         run the built-in acceptance checks, print a pass/fail table
  probe-conjecture  random search for large D among low-rank separable states

Determinism contract: the same command line with the same seed produces
byte-identical output.  NONCLASS_THREADS > 1 parallelizes sweep rows across
processes; rows are assembled in grid order either way.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import closed_forms as cf
from . import acceptance, families
from .core import InvalidStateError, load_density, random_density
from .discord import discord_numeric, fano_offdiagonal_defect, find_classical_basis
from .measure import OptimizerConfig, minimize_d

FAMILY_NAMES = ("bell", "werner", "schmidt-pure", "rank2-separable", "random")

# One source of truth for sweep output: --help text and emitted headers are
# both generated from this table.
SWEEP_COLUMNS = {
    "werner": ("family", "d", "p", "D_formula", "D_optimizer", "discord", "M_horodecki"),
    "schmidt-pure": ("family", "a", "D_formula", "D_optimizer", "discord", "M_horodecki"),
    "rank2-separable": ("family", "alpha", "beta", "D_formula", "D_optimizer", "discord", "M_horodecki"),
    "random": ("family", "seed", "D_formula", "D_optimizer", "discord", "M_horodecki"),
}

# descent on a d x d kernel is O(d^4) per step; past this it is not worth the wait
MAX_OPTIMIZER_DIM = 6


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _parse_floats(text: str):
    return [float(part) for part in text.split(",") if part != ""]


def _parse_ints(text: str):
    return [int(part) for part in text.split(",") if part != ""]


def _config(args) -> OptimizerConfig:
    return OptimizerConfig(restarts=args.restarts, tol=args.tol, seed=_parse_ints(args.seed)[0])


def _write_output(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


# --- compute ----------------------------------------------------------------------


def _resolve_state(args):
    """Positional argument is either a family name or a path to a JSON file."""
    name = args.state
    if name == "bell":
        return families.bell(), {}
    if name == "werner":
        params = cf.WernerParams(args.d, args.p)
        return cf.werner_state(params), {"d": args.d, "p": args.p}
    if name == "schmidt-pure":
        return families.schmidt_pure(args.a).to_density(), {"a": args.a}
    if name == "rank2-separable":
        ens = cf.rank2_separable_ensemble(args.alpha, args.beta)
        return ens.to_density(), {"alpha": args.alpha, "beta": args.beta}
    if name == "random":
        seed = _parse_ints(args.seed)[0]
        return random_density(2, 2, 4, seed), {"seed": seed}
    if os.path.exists(name):
        return load_density(name), {"path": name}
    raise ValueError(f"unknown family or missing file: {name!r} (families: {', '.join(FAMILY_NAMES)})")


COMPUTE_CSV_COLUMNS = (
    "state",
    "dim_a",
    "dim_b",
    "D",
    "method",
    "D_formula",
    "lower_bound",
    "upper_bound",
    "horodecki_m",
    "discord",
    "classical_basis_found",
    "classical_defect",
    "residual",
    "converged",
    "restarts_used",
)


def cmd_compute(args) -> int:
    rho, params = _resolve_state(args)
    config = _config(args)
    result = minimize_d(rho, config)
    report = {
        "state": args.state,
        "params": params,
        "dim_a": rho.dim_a,
        "dim_b": rho.dim_b,
        "D": result.value,
        "method": result.method,
        "residual": result.residual,
        "converged": result.converged,
        "restarts_used": result.restarts_used,
    }
    if args.state == "werner":
        report["D_formula"] = cf.werner_d(cf.WernerParams(args.d, args.p))
    elif rho.dim_a == 2:
        report["D_formula"] = cf.d_closed_2xN(rho)
    if rho.dim_a == 2:
        report["lower_bound"] = cf.lower_bound_2xN(rho)
        report["upper_bound"] = cf.upper_bound_2xN(rho)
        report["discord"] = discord_numeric(rho)
        if rho.dim_b == 2:
            report["horodecki_m"] = cf.horodecki_m(rho)
    if rho.dim_a <= MAX_OPTIMIZER_DIM:
        basis = find_classical_basis(rho, config)
        report["classical_basis_found"] = basis is not None
        if basis is not None:
            report["classical_defect"] = fano_offdiagonal_defect(rho, basis.matrix)
    if args.format == "json":
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        cells = [_fmt(report.get(col)) if col != "state" else args.state for col in COMPUTE_CSV_COLUMNS]
        text = ",".join(COMPUTE_CSV_COLUMNS) + "\n" + ",".join(cells) + "\n"
    _write_output(text, args.out)
    return 0


# --- sweep ------------------------------------------------------------------------


def _sweep_payloads(args):
    seed = _parse_ints(args.seed)
    if args.family == "werner":
        p_values = _parse_floats(args.p) if args.p is not None else [round(0.1 * k, 1) for k in range(11)]
        return [("werner", (args.d, p)) for p in p_values]
    if args.family == "schmidt-pure":
        a_values = _parse_floats(args.a) if args.a is not None else [round(0.1 * k, 1) for k in range(11)]
        return [("schmidt-pure", (a,)) for a in a_values]
    if args.family == "rank2-separable":
        alphas = _parse_floats(args.alpha) if args.alpha is not None else list(np.linspace(0.0, np.pi, 7))
        betas = _parse_floats(args.beta) if args.beta is not None else list(np.linspace(0.0, np.pi, 7))
        return [("rank2-separable", (alpha, beta)) for alpha in alphas for beta in betas]
    return [("random", (s,)) for s in (seed if len(seed) > 1 else range(seed[0], seed[0] + 10))]


def _sweep_row(payload):
    family, params, restarts, tol, opt_seed = payload
    config = OptimizerConfig(restarts=restarts, tol=tol, seed=opt_seed)
    discord_val = horodecki = None
    if family == "werner":
        d, p = params
        wp = cf.WernerParams(d, p)
        rho = cf.werner_state(wp)
        formula = cf.werner_d(wp)
        optimizer = minimize_d(rho, config, force_generic=(d == 2)).value if d <= MAX_OPTIMIZER_DIM else None
        discord_val = cf.werner_discord(wp)
        if d == 2:
            horodecki = cf.horodecki_m(rho)
    else:
        if family == "schmidt-pure":
            (a,) = params
            rho = families.schmidt_pure(a).to_density()
            formula = 2.0 * a * float(np.sqrt(1.0 - a * a))
        elif family == "rank2-separable":
            alpha, beta = params
            rho = cf.rank2_separable_ensemble(alpha, beta).to_density()
            formula = cf.d_closed_2xN(rho)
        else:
            (s,) = params
            rho = random_density(2, 2, 4, int(s))
            formula = cf.d_closed_2xN(rho)
        optimizer = minimize_d(rho, config, force_generic=True).value
        discord_val = discord_numeric(rho)
        horodecki = cf.horodecki_m(rho)
    return [family, *[_fmt(p) for p in params], _fmt(formula), _fmt(optimizer), _fmt(discord_val), _fmt(horodecki)]


def cmd_sweep(args) -> int:
    opt_seed = _parse_ints(args.seed)[0]
    payloads = [(family, params, args.restarts, args.tol, opt_seed) for family, params in _sweep_payloads(args)]
    threads = max(1, int(os.environ.get("NONCLASS_THREADS", "1")))
    if threads > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_sweep_row, payloads))
    else:
        rows = [_sweep_row(p) for p in payloads]
    columns = SWEEP_COLUMNS[args.family]
    meta = f"seed={args.seed} restarts={args.restarts} tol={args.tol!r}"
    if args.format == "csv":
        lines = [f"# {meta}", ",".join(columns)]
        lines.extend(",".join(row) for row in rows)
        text = "\n".join(lines) + "\n"
    else:
        payload = {
            "meta": {"seed": args.seed, "restarts": args.restarts, "tol": args.tol},
            "columns": list(columns),
            "rows": rows,
        }
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    _write_output(text, args.out)
    return 0


# --- reproduce and probe-conjecture ------------------------------------------------


def cmd_reproduce(args) -> int:
    results = acceptance.run_checks(args.filter)
    if not results:
        _write_output(f"no checks match filter {args.filter!r}\n", args.out)
        return 1
    _write_output(acceptance.format_table(results) + "\n", args.out)
    return 0 if all(r.passed for r in results) else 1


def cmd_probe_conjecture(args) -> int:
    base_seed = _parse_ints(args.seed)[0]
    trials = args.restarts
    best = {}
    for trial in range(trials):
        n_terms = 3 + (trial % 2)
        ens = families.random_separable_ensemble(n_terms, seed=base_seed + trial)
        rho = ens.to_density()
        value = cf.d_closed_2xN(rho)
        rank = int(np.linalg.matrix_rank(rho.matrix, tol=1e-10, hermitian=True))
        key = f"{n_terms}_terms"
        if key not in best or value > best[key]["D"]:
            best[key] = {"D": value, "seed": base_seed + trial, "rank": rank}
    report = {
        "trials": trials,
        "base_seed": base_seed,
        "best_found": best,
        "rank2_maximum": 0.5,
        "note": "best values found by random search; not a bound or a proof",
    }
    _write_output(json.dumps(report, indent=2, sort_keys=True) + "\n", args.out)
    return 0


# --- parser -----------------------------------------------------------------------


def _sweep_epilog() -> str:
    lines = ["CSV columns per family:"]
    width = max(len(name) for name in SWEEP_COLUMNS)
    for name, cols in SWEEP_COLUMNS.items():
        lines.append(f"  {name:<{width}}  {','.join(cols)}")
    lines.append("")
    lines.append("discord is the closed-form value for werner and numeric otherwise;")
    lines.append(f"D_optimizer is left empty for werner with d > {MAX_OPTIMIZER_DIM}.")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nonclass", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_format=None):
        p.add_argument("--restarts", type=int, default=32, help="optimizer restarts (probe-conjecture: trial budget)")
        p.add_argument("--tol", type=float, default=1e-10, help="optimizer convergence tolerance")
        p.add_argument("--seed", default="0", help="integer seed; sweep random accepts a comma list of row seeds")
        p.add_argument("--out", default=None, help="write output to this path instead of stdout")
        if with_format:
            p.add_argument("--format", choices=("json", "csv"), default=with_format, help="output format")

    p_compute = sub.add_parser("compute", help="analyze a single state (family name or JSON file path)")
    p_compute.add_argument("state", help=f"one of {', '.join(FAMILY_NAMES)}, or a path to a density-matrix JSON file")
    p_compute.add_argument("--d", type=int, default=2, help="werner subsystem dimension")
    p_compute.add_argument("--p", type=float, default=2 / 3, help="werner symmetric weight")
    p_compute.add_argument("--a", type=float, default=float(1 / np.sqrt(2)), help="first Schmidt coefficient")
    p_compute.add_argument("--alpha", type=float, default=float(np.pi), help="rank-2 ensemble B-side angle")
    p_compute.add_argument("--beta", type=float, default=float(np.pi / 2), help="rank-2 ensemble A-side angle")
    add_common(p_compute, with_format="json")
    p_compute.set_defaults(func=cmd_compute)

    p_sweep = sub.add_parser(
        "sweep",
        help="tabulate D over a parameter grid",
        epilog=_sweep_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p_sweep.add_argument("family", choices=tuple(SWEEP_COLUMNS))
    p_sweep.add_argument("--d", type=int, default=2, help="werner subsystem dimension")
    p_sweep.add_argument("--p", default=None, help="comma list of werner weights (default 0,0.1,...,1)")
    p_sweep.add_argument("--a", default=None, help="comma list of Schmidt coefficients (default 0,0.1,...,1)")
    p_sweep.add_argument("--alpha", default=None, help="comma list of B-side angles (default 7 points on [0, pi])")
    p_sweep.add_argument("--beta", default=None, help="comma list of A-side angles (default 7 points on [0, pi])")
    add_common(p_sweep, with_format="csv")
    p_sweep.set_defaults(func=cmd_sweep)

    p_repro = sub.add_parser("reproduce", help="run the acceptance checks and print a pass/fail table")
    p_repro.add_argument("--filter", default=None, help="run only checks whose name contains this substring")
    p_repro.add_argument("--out", default=None, help="write the table to this path instead of stdout")
    p_repro.set_defaults(func=cmd_reproduce)

    p_probe = sub.add_parser(
        "probe-conjecture",
        help="random search for large D among rank-3/4 separable two-qubit states",
    )
    add_common(p_probe)
    p_probe.set_defaults(func=cmd_probe_conjecture)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidStateError as exc:
        print(f"invalid density matrix: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
