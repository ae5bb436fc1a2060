"""Command-line surface: deterministic, file-based workflows.

Exit codes: 0 ok, 2 usage, 3 infeasible request or malformed input,
4 violated construction invariant. Errors print machine-readable JSON on
stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import autogroup, codes, cqlu, css, emit, estimate, fileio, gf2, modkit, rnaa
from .codes import BudgetExceeded, CodeError
from .config import DEFAULT, Config
from .fileio import BundleError
from .modkit import InvariantViolation


def _read(path: str) -> str:
    with open(path) as fh:
        return fh.read()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load_config(args) -> Config:
    if getattr(args, "config", None):
        return Config.load(args.config)
    return DEFAULT


def cmd_code_simplex(args) -> None:
    _write(args.out, fileio.write_code_bundle(codes.simplex(args.r)))


def cmd_code_hgp(args) -> None:
    left = fileio.read_code_bundle(_read(args.left))
    right = fileio.read_code_bundle(_read(args.right))
    _write(args.out, fileio.write_css_bundle(css.hgp(left, right)))


def cmd_code_hgps(args) -> None:
    _write(args.out, fileio.write_css_bundle(css.hgps(args.r)))


def cmd_code_params(args) -> None:
    text = _read(args.infile)
    if fileio.is_css_bundle(text):
        code = fileio.read_css_bundle(text)
        d, source = code.d, "stored" if code.d is not None else "unknown"
        if args.brute_distance is not None:
            floor_ok = css.verify_min_weight_floor(code, args.brute_distance)
            report = {
                "n": code.n, "k": code.k, "d": d, "d_source": source,
                "min_weight_floor": {"wmax": args.brute_distance, "clean": floor_ok},
            }
        else:
            report = {"n": code.n, "k": code.k, "d": d, "d_source": source}
        print(f"[[{code.n},{code.k},{d if d is not None else '?'}]]")
    else:
        code = fileio.read_code_bundle(text)
        d, source = code.d, "stored" if code.d is not None else "unknown"
        if args.brute_distance is not None:
            d = codes.distance_bruteforce(code, max_n=args.brute_distance)
            source = "bruteforce"
        report = {"n": code.n, "k": code.k, "d": d, "d_source": source}
        print(f"[{code.n},{code.k},{d if d is not None else '?'}]")
    if args.out:
        _write(args.out, json.dumps(report, indent=2))


def cmd_auto_check(args) -> None:
    code = fileio.read_code_bundle(_read(args.code))
    sigma = fileio.read_permutation(_read(args.sigma))
    gadget = autogroup.check_automorphism(code, sigma)
    if gadget is None:
        report = {
            "sigma_cycles": sigma.cycle_notation(),
            "is_automorphism": False,
            "is_matrix_automorphism": False,
        }
    else:
        report = gadget.report()
    _write(args.out, json.dumps(report, indent=2))


def cmd_auto_convert(args) -> None:
    code = fileio.read_code_bundle(_read(args.code))
    sigmas = fileio.read_permutations(_read(args.sigmas))
    converted = modkit.matrix_automorphism_conversion(code, sigmas)
    _write(args.out, fileio.write_code_bundle(converted))


def cmd_embed(args) -> None:
    code = fileio.read_code_bundle(_read(args.code))
    gates = fileio.read_gates(_read(args.gates))
    completed, gadgets = modkit.automorphism_completion(code, gates)
    H_out, audit = modkit.ldpc_checks(completed, gates, flavor=args.flavor, audit=True)
    bundle_code = codes.make_code(completed.G, H_out)
    _write(args.out, fileio.write_code_bundle(bundle_code))
    report = {
        "n": completed.n,
        "k": completed.k,
        "flavor": args.flavor,
        "seed_row_bound_w": audit.seed_row_bound,
        "gate_sparsity_t": audit.sparsity,
        "stated_row_bound": audit.stated_bound,
        "measured_max_row": audit.measured_max_row,
        "measured_max_col": audit.measured_max_col,
        "gadgets": [g.report() for g in gadgets],
    }
    _write(args.report, json.dumps(report, indent=2))


def cmd_isa_certify(args) -> None:
    _write(args.out, json.dumps(cqlu.isa_report(args.r), indent=2))


def cmd_schedule(args) -> None:
    cfg = _load_config(args)
    code = fileio.read_css_bundle(_read(args.code))
    if args.calibrate_table2:
        from dataclasses import replace

        spacing = rnaa.calibrate_spacing(css.hgps(4), 3.9e-3, cfg)
        cfg = replace(cfg, spacing_um=spacing)
    elif args.spacing is not None:
        from dataclasses import replace

        cfg = replace(cfg, spacing_um=args.spacing)
    plan = rnaa.syndrome_schedule(code, cfg=cfg)
    _write(args.out, json.dumps(plan.to_json_dict(), indent=2))
    print(f"cycle_time_s {plan.total:.6g}", file=sys.stderr)


def cmd_estimate(args) -> None:
    cfg = _load_config(args)
    rows = []
    if args.kind == "ghz":
        for platform in ("cqlu", "surface-baseline"):
            rows.append(
                ("ghz", args.width, platform, estimate.estimate_ghz(args.width, platform, args.p, cfg))
            )
    elif args.kind == "msd":
        rows.append(
            ("msd", args.levels, "cqlu", estimate.estimate_msd(args.levels, args.protocol, args.p, "cqlu", cfg))
        )
        rows.append(
            ("msd", args.levels, "surface-baseline",
             estimate.estimate_msd(args.levels, args.protocol, args.p, "surface-baseline", cfg))
        )
    else:
        for platform in ("cqlu", "surface-baseline"):
            t_r = args.t_reaction if platform == "cqlu" else cfg.surface_reaction_s
            rows.append(
                ("adder", args.nbits, platform, estimate.estimate_adder(args.nbits, t_r, platform, cfg))
            )
    _write(args.out, estimate.estimates_to_csv(rows))


def cmd_estimate_ler(args) -> None:
    npts = max(2, args.points)
    ps = [args.p_min * (args.p_max / args.p_min) ** (i / (npts - 1)) for i in range(npts)]
    families = {
        "product": (estimate.HGPS_FIT, [m.d for m in estimate.product_family()]),
        "surface": (estimate.SURFACE_FIT, [3, 5, 7, 9, 11]),
        "shyps": (estimate.SHYPS_FIT, [4, 8, 16]),
        "injection": (estimate.INJECTION_FIT, [0]),
    }
    _write(args.out, estimate.ler_curve_csv(families, ps))


def cmd_estimate_footprint(args) -> None:
    targets = [10.0**-e for e in range(2, args.max_exponent + 1)]
    _write(args.out, estimate.footprint_curve_csv(targets, args.p))


def cmd_emit_memory(args) -> None:
    code = fileio.read_css_bundle(_read(args.code))
    text = emit.emit_memory_experiment(
        code, args.rounds, args.p, transversal_marker=args.transversal, basis=args.basis
    )
    _write(args.out, text)


def cmd_config_dump(args) -> None:
    cfg = _load_config(args)
    lines = []
    from dataclasses import fields

    for f in fields(cfg):
        lines.append(f"{f.name} = {getattr(cfg, f.name)}")
    _write(args.out, "\n".join(lines) + "\n")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="autoqec", description=__doc__)
    top.add_argument("--config", help="key-value config file overriding defaults")
    sub = top.add_subparsers(dest="command", required=True)

    code = sub.add_parser("code", help="construct codes and report parameters")
    code_sub = code.add_subparsers(dest="sub", required=True)
    p = code_sub.add_parser("simplex")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_code_simplex)
    p = code_sub.add_parser("hgp")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_code_hgp)
    p = code_sub.add_parser("hgps")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_code_hgps)
    p = code_sub.add_parser("params")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--brute-distance", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_code_params)

    auto = sub.add_parser("auto", help="certify automorphisms")
    auto_sub = auto.add_subparsers(dest="sub", required=True)
    p = auto_sub.add_parser("check")
    p.add_argument("--code", required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_auto_check)
    p = auto_sub.add_parser("convert")
    p.add_argument("--code", required=True)
    p.add_argument("--sigmas", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_auto_convert)

    p = sub.add_parser("embed", help="embed a gate group as automorphisms")
    p.add_argument("--code", required=True)
    p.add_argument("--gates", required=True)
    p.add_argument("--flavor", choices=("t", "m"), default="t")
    p.add_argument("--out")
    p.add_argument("--report")
    p.set_defaults(func=cmd_embed)

    isa = sub.add_parser("isa", help="instruction-set gadget reports")
    isa_sub = isa.add_subparsers(dest="sub", required=True)
    p = isa_sub.add_parser("certify")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_isa_certify)

    p = sub.add_parser("schedule", help="movement plan and cycle time")
    p.add_argument("--code", required=True)
    p.add_argument("--spacing", type=float, help="lattice spacing in um")
    p.add_argument(
        "--calibrate-table2",
        action="store_true",
        help="recalibrate spacing so the r=4 reference block cycles at 3.9 ms",
    )
    p.add_argument("--out")
    p.set_defaults(func=cmd_schedule)

    est = sub.add_parser("estimate", help="resource estimates as CSV")
    est_sub = est.add_subparsers(dest="kind", required=True)
    p = est_sub.add_parser("ghz")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--p", type=float, default=1e-3)
    p.add_argument("--out")
    p.set_defaults(func=cmd_estimate)
    p = est_sub.add_parser("msd")
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--protocol", choices=("15-1-3", "109-19-3-batched"), default="15-1-3")
    p.add_argument("--p", type=float, default=1e-3)
    p.add_argument("--out")
    p.set_defaults(func=cmd_estimate)
    p = est_sub.add_parser("adder")
    p.add_argument("--nbits", type=int, required=True)
    p.add_argument("--t-reaction", type=float, default=3.9e-3)
    p.add_argument("--out")
    p.set_defaults(func=cmd_estimate)
    p = est_sub.add_parser("ler", help="fit-model curves as CSV")
    p.add_argument("--p-min", type=float, default=2e-4)
    p.add_argument("--p-max", type=float, default=1e-2)
    p.add_argument("--points", type=int, default=25)
    p.add_argument("--out")
    p.set_defaults(func=cmd_estimate_ler)
    p = est_sub.add_parser("footprint", help="footprint-vs-target curves as CSV")
    p.add_argument("--p", type=float, default=1e-3)
    p.add_argument("--max-exponent", type=int, default=12)
    p.add_argument("--out")
    p.set_defaults(func=cmd_estimate_footprint)

    emitp = sub.add_parser("emit", help="emit stabilizer circuits")
    emit_sub = emitp.add_subparsers(dest="sub", required=True)
    p = emit_sub.add_parser("memory")
    p.add_argument("--code", required=True)
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--transversal", action="store_true")
    p.add_argument("--basis", choices=("Z", "X"), default="Z")
    p.add_argument("--out")
    p.set_defaults(func=cmd_emit_memory)

    cfgp = sub.add_parser("config", help="config snapshots")
    cfg_sub = cfgp.add_subparsers(dest="sub", required=True)
    p = cfg_sub.add_parser("dump")
    p.add_argument("--out")
    p.set_defaults(func=cmd_config_dump)
    return top


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except InvariantViolation as exc:
        print(json.dumps({"error": "invariant_violation", "message": str(exc)}), file=sys.stderr)
        return 4
    except (CodeError, BudgetExceeded, BundleError, gf2.DimensionError,
            autogroup.ClosureBoundExceeded, ValueError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
