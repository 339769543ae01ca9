"""Command line interface.

Subcommands: ``decompose`` (matrix kinds), ``tensor`` (per-mode orbit solve,
p sweep, lifting/subgroup checks), ``normalize`` (point clouds), ``verify``
(inequality and sparsifying-property battery).

Exit codes: 0 success, 1 error, 2 optimizer did not converge, 3 a verified
inequality or property was violated.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from .costs import Cost, check_sparsifying, parse_cost
from .decompose import goo_solve, recover, verify_inequalities
from .groups import parse_action, parse_group
from .io import (
    array_payload,
    dump_json,
    read_matrix_csv,
    read_points_csv,
    write_matrix_csv,
    write_points_csv,
    write_svg_scatter,
)
from .linalg import hull_area
from .optimize import NmOptions
from .pointcloud import (
    canonical_orientation_2d,
    center,
    hull_is_square,
    normalize_sl,
    pca_normalize,
    so_normalize,
    squareness,
)
from .tensor import lifting_gap, nnz_count, sparse_core_scan, subgroup_gap, tucker_goo

GAP_SLACK = 1e-4


def _add_nm_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=None)
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--f-tol", type=float, default=1e-12)
    p.add_argument("--x-tol", type=float, default=1e-10)
    p.add_argument("--init-scale", type=float, default=0.25)
    p.add_argument("--init-sigma", type=float, default=0.8)


def _options(args: argparse.Namespace, default_restarts: int = 32) -> NmOptions:
    return NmOptions(
        max_iters=args.max_iters,
        f_tol=args.f_tol,
        x_tol=args.x_tol,
        init_scale=args.init_scale,
        restarts=args.restarts if args.restarts is not None else default_restarts,
        seed=args.seed,
        init_sigma=args.init_sigma,
    )


def _options_payload(opts: NmOptions) -> dict:
    return {
        "max_iters": opts.max_iters,
        "f_tol": opts.f_tol,
        "x_tol": opts.x_tol,
        "init_scale": opts.init_scale,
        "restarts": opts.restarts,
        "seed": opts.seed,
        "init_sigma": opts.init_sigma,
    }


def _config_echo(args: argparse.Namespace) -> dict:
    # Full flag echo so every artifact is reproducible from its own metadata.
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _read_input(path: str):
    if path == "-":
        return sys.stdin
    return path


def _emit(payload: dict, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            dump_json(payload, fh)
    else:
        print(dump_json(payload))


def cmd_decompose(args: argparse.Namespace) -> int:
    m = read_matrix_csv(_read_input(args.input))
    opts = _options(args)
    if args.action:
        action = parse_action(args.action)
        cost = parse_cost(args.cost or "lp:1")
        sol = goo_solve(m, action, cost, opts)
        payload = {
            "version": __version__,
            "config": _config_echo(args),
            "kind": "custom",
            "action": args.action,
            "cost": cost.describe(),
            "objective": sol.objective,
            "converged": sol.converged,
            "evals": sol.evals,
            "restart_index": sol.restart_index,
            "core": array_payload(sol.core),
            "options": _options_payload(opts),
        }
        _emit(payload, args.out)
        return 0 if sol.converged else 2
    result = recover(args.kind, m, opts)
    payload = {
        "version": __version__,
        "config": _config_echo(args),
        "kind": result.kind,
        "objective": result.objective,
        "converged": result.converged,
        "evals": result.evals,
        "restart_index": result.restart_index,
        "core": array_payload(result.core),
        "canonical_core": None
        if result.canonical_core is None
        else array_payload(result.canonical_core),
        "factors": {name: array_payload(mat) for name, mat in result.factors.items()},
        "permutation": None
        if result.row_permutation is None
        else {
            "rows": [int(i) for i in result.row_permutation],
            "cols": [int(j) for j in result.col_permutation],
        },
        "signs": None if result.signs is None else list(result.signs),
        "residuals": {
            "reconstruction": result.reconstruction_residual,
            "off_pattern": result.off_pattern_residual,
        },
        "options": _options_payload(opts),
    }
    _emit(payload, args.out)
    return 0 if result.converged else 2


def _run_gap_check(args: argparse.Namespace, t: np.ndarray, cost, opts: NmOptions):
    if args.check == "lifting":
        if args.grouping:
            grouping = [
                [int(i) for i in grp.split(",") if i.strip()]
                for grp in args.grouping.split(";")
            ]
        else:
            grouping = [[0], list(range(1, t.ndim))]
        return lifting_gap(t, grouping, args.family, cost, opts)
    narrow = [g.strip() for g in args.narrow.split(";") if g.strip()]
    wide = [g.strip() for g in args.wide.split(";") if g.strip()]
    return subgroup_gap(
        t,
        narrow[0] if len(narrow) == 1 else narrow,
        wide[0] if len(wide) == 1 else wide,
        cost,
        opts,
    )


def cmd_tensor(args: argparse.Namespace) -> int:
    cost = parse_cost(args.cost)
    opts = _options(args)

    if args.check and args.seeds is not None:
        # Corpus mode: the check runs on generated tensors, no input needed.
        shape = tuple(int(s) for s in (args.shape or "2,2,2").split(","))
        cases = []
        all_hold = True
        for k in range(args.seeds):
            rng = np.random.default_rng((opts.seed, k))
            t = rng.standard_normal(shape)
            report = _run_gap_check(args, t, cost, opts)
            holds = report.holds(GAP_SLACK)
            all_hold = all_hold and holds
            cases.append(
                {
                    "seed": k,
                    "narrow_value": report.narrow_value,
                    "wide_value": report.wide_value,
                    "gap": report.gap,
                    "holds": holds,
                }
            )
        payload = {
            "version": __version__,
            "config": _config_echo(args),
            "check": {"name": args.check, "shape": list(shape), "cases": cases,
                      "all_hold": all_hold},
            "options": _options_payload(opts),
        }
        _emit(payload, args.out)
        return 0 if all_hold else 3

    if not args.input:
        raise ValueError("--input is required unless --check runs with --seeds")
    if not args.groups:
        raise ValueError("--groups is required for a tensor solve")
    t = read_matrix_csv(_read_input(args.input))
    if args.shape:
        want = tuple(int(s) for s in args.shape.split(","))
        if tuple(t.shape) != want:
            raise ValueError(f"input shape {tuple(t.shape)} does not match --shape {want}")
    specs = [parse_group(g) for g in args.groups.split(";") if g.strip()]

    result = tucker_goo(t, specs, cost, opts)
    payload = {
        "version": __version__,
        "config": _config_echo(args),
        "groups": [str(s) for s in specs],
        "cost": cost.describe(),
        "objective": result.objective,
        "converged": result.converged,
        "evals": result.evals,
        "restart_index": result.restart_index,
        "core": array_payload(result.core),
        "factors": [array_payload(f) for f in result.factors],
        "nnz_estimate": nnz_count(result.core, args.threshold),
        "options": _options_payload(opts),
    }

    if args.p_sweep:
        p_list = [float(p) for p in args.p_sweep.split(",") if p.strip()]
        scan = sparse_core_scan(t, specs, p_list, args.threshold, opts)
        payload["sweep"] = [
            {"p": s.p, "objective": s.objective, "nnz": s.nnz} for s in scan.steps
        ]
        payload["nnz_estimate"] = scan.nnz_estimate
        payload["core"] = array_payload(scan.core)

    violated = False
    if args.check:
        report = _run_gap_check(args, t, cost, opts)
        violated = not report.holds(GAP_SLACK)
        payload["check"] = {
            "name": args.check,
            "narrow_value": report.narrow_value,
            "wide_value": report.wide_value,
            "gap": report.gap,
            "holds": not violated,
        }

    _emit(payload, args.out)
    if violated:
        return 3
    return 0 if result.converged else 2


def cmd_normalize(args: argparse.Namespace) -> int:
    pts, label = read_points_csv(_read_input(args.input))
    centered, centroid = center(pts)
    opts = _options(args, default_restarts=64)

    converged = True
    if args.baseline == "pca":
        mapped, matrix = pca_normalize(centered)
        objective = float(np.max(np.abs(mapped)))
        method = "pca"
    elif args.baseline == "so":
        res = so_normalize(centered, opts)
        mapped, matrix, objective, converged = res.points, res.matrix, res.objective, res.converged
        method = "so"
    else:
        res = normalize_sl(centered, opts)
        mapped, matrix, objective, converged = res.points, res.matrix, res.objective, res.converged
        method = "sl"

    rot = np.eye(pts.shape[1])
    if pts.shape[1] == 2 and not args.no_orient:
        mapped, rot = canonical_orientation_2d(mapped)

    payload = {
        "version": __version__,
        "config": _config_echo(args),
        "method": method,
        "label": label,
        "objective": objective,
        "converged": converged,
        "infnorm": float(np.max(np.abs(mapped))),
        "matrix": array_payload(matrix @ rot),
        "centroid": [float(x) for x in centroid],
        "options": _options_payload(opts),
    }
    if pts.shape[1] == 2:
        payload["hull_area"] = hull_area(mapped)
        payload["squareness"] = squareness(mapped)
        payload["hull_is_square"] = hull_is_square(mapped)

    if args.out:
        write_points_csv(args.out, mapped, label=label)
    if args.svg:
        if pts.shape[1] != 2:
            raise ValueError("--svg requires 2-D points")
        write_svg_scatter(args.svg, mapped)
    _emit(payload, args.json)
    return 0 if converged else 2


def _random_density(rng: np.random.Generator, n: int) -> np.ndarray:
    a = rng.normal(size=(n, n))
    p = a @ a.T
    return p / np.trace(p)


def cmd_verify(args: argparse.Namespace) -> int:
    ps = [float(p) for p in args.ps.split(",") if p.strip()]
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    checks: list[dict] = []

    def add(name: str, ok: bool, detail: str) -> None:
        checks.append({"name": name, "ok": bool(ok), "detail": detail})

    if args.input:
        m = read_matrix_csv(_read_input(args.input))
        rep = verify_inequalities(m, ps)
        for row in rep.rows:
            add(
                f"lp-vs-schatten p={row.p:g}",
                row.holds,
                f"lp={row.lp:.12g} schatten={row.schatten:.12g} slack={row.slack:.3e}",
            )
        if rep.duality:
            add(
                f"duality p={rep.duality.p:g},q={rep.duality.q:g}",
                rep.duality.holds,
                "slacks=" + ",".join(f"{s:.3e}" for s in rep.duality.slacks),
            )
        if rep.entropy:
            add(
                "entropy-bound",
                rep.entropy.holds,
                f"vn={rep.entropy.von_neumann:.12g} entrywise={rep.entropy.entrywise:.12g}",
            )
    else:
        for k in range(args.seeds):
            rng = np.random.default_rng((args.seed, k))
            n = sizes[k % len(sizes)]
            m = rng.normal(size=(n, n + (k % 2)))
            rep = verify_inequalities(m, ps)
            ok = all(r.holds for r in rep.rows) and (rep.duality is None or rep.duality.holds)
            worst = min(
                [r.slack for r in rep.rows]
                + (list(rep.duality.slacks) if rep.duality else [])
            )
            add(f"inequalities seed={k} shape={m.shape}", ok, f"worst slack={worst:.3e}")
        for k in range(args.seeds):
            rng = np.random.default_rng((args.seed, 1000 + k))
            n = sizes[k % len(sizes)]
            rho = _random_density(rng, n)
            rep = verify_inequalities(rho, ps)
            ok = rep.entropy is not None and rep.entropy.holds
            detail = (
                f"vn={rep.entropy.von_neumann:.10g} entrywise={rep.entropy.entrywise:.10g}"
                if rep.entropy
                else "entropy section missing"
            )
            add(f"entropy seed={k} n={n}", ok, detail)

    # capped:0.5,1 is screened below its cap; beyond it the flat segment fails
    # the strict-concavity flag by design.
    catalog: list[tuple[str, Cost, list[float] | None]] = [
        ("lp:0.5", parse_cost("lp:0.5"), None),
        ("capped:0.5,1", parse_cost("capped:0.5,1"), list(np.linspace(0.05, 0.9, 18))),
        ("log1p", parse_cost("log1p"), None),
        ("entropy", parse_cost("entropy"), None),
    ]

    def flag_detail(rep) -> str:
        return (
            f"even={rep.even} f0={rep.nonneg_at_zero} subadd={rep.subadditive} "
            f"concave={rep.strictly_concave}"
        )

    for name, cost, cost_samples in catalog:
        rep = check_sparsifying(cost.scalar, samples=cost_samples)
        add(f"sparsifying {name}", rep.passed, flag_detail(rep))
    if args.include_log:
        rep = check_sparsifying(lambda x: math.log(abs(x)))
        add("sparsifying log|x| (claimed)", rep.passed, flag_detail(rep))

    all_ok = all(c["ok"] for c in checks)
    payload = {
        "version": __version__,
        "config": _config_echo(args),
        "all_ok": all_ok,
        "checks": checks,
    }
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            dump_json(payload, fh)
    for c in checks:
        print(f"{'PASS' if c['ok'] else 'FAIL'}  {c['name']}: {c['detail']}")
    print(("OK" if all_ok else "VIOLATIONS") + f" ({sum(c['ok'] for c in checks)}/{len(checks)})")
    return 0 if all_ok else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="goo", description=__doc__)
    parser.add_argument("--version", action="version", version=f"goo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="induced matrix decompositions")
    p.add_argument("--kind", default="svd",
                   help="svd | svd-complex | qr | lu | cholesky | schur | equivalence")
    p.add_argument("--input", required=True, help="matrix CSV ('-' for stdin)")
    p.add_argument("--out", default=None, help="result JSON path (default stdout)")
    p.add_argument("--action", default=None,
                   help="override: raw action syntax, e.g. two-sided:so:3,so:3")
    p.add_argument("--cost", default=None, help="cost syntax used with --action")
    _add_nm_flags(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("tensor", help="per-mode tensor orbit solve")
    p.add_argument("--input", default=None, help="tensor CSV ('-' for stdin)")
    p.add_argument("--groups", default=None, help="per-mode groups, e.g. sl:2;sl:2;sl:2")
    p.add_argument("--cost", default="lp:1")
    p.add_argument("--shape", default=None,
                   help="expected shape, e.g. 2,2,2 (validated; corpus shape in --seeds mode)")
    p.add_argument("--p-sweep", default=None, help="decreasing powers, e.g. 1,0.7,0.5")
    p.add_argument("--threshold", type=float, default=None, help="nnz significance threshold")
    p.add_argument("--check", choices=["lifting", "subgroup"], default=None)
    p.add_argument("--seeds", type=int, default=None,
                   help="run --check on this many generated tensors instead of --input")
    p.add_argument("--grouping", default=None,
                   help="unfold grouping for --check lifting, e.g. 0;1,2 (default: mode 0 vs rest)")
    p.add_argument("--family", default="so", help="group family for --check lifting")
    p.add_argument("--narrow", default="so", help="narrow family/groups for --check subgroup")
    p.add_argument("--wide", default="sl", help="wide family/groups for --check subgroup")
    p.add_argument("--out", default=None)
    _add_nm_flags(p)
    p.set_defaults(func=cmd_tensor)

    p = sub.add_parser("normalize", help="point-cloud normalization")
    p.add_argument("--input", required=True, help="point CSV ('-' for stdin)")
    p.add_argument("--baseline", choices=["pca", "so"], default=None,
                   help="use a baseline instead of the SL solver")
    p.add_argument("--out", default=None, help="normalized point CSV path")
    p.add_argument("--json", default=None, help="JSON sidecar path (default stdout)")
    p.add_argument("--svg", default=None, help="SVG scatter path")
    p.add_argument("--no-orient", action="store_true", help="skip canonical orientation")
    _add_nm_flags(p)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("verify", help="inequality and sparsifying-property battery")
    p.add_argument("--input", default=None, help="optional matrix CSV to verify")
    p.add_argument("--seeds", type=int, default=20, help="number of generated cases")
    p.add_argument("--sizes", default="2,3,4,5")
    p.add_argument("--ps", default="0.5,1,1.5,3")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--include-log", action="store_true",
                   help="also screen log|x| (a known non-sparsifying function)")
    p.add_argument("--json", default=None, help="machine-readable report path")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
