"""Command-line front end: compute, validate, stats, and bench."""

from __future__ import annotations

import argparse
import sys
import time

from .errors import AlphaxError
from .io import (
    RadiusTable,
    balls_from_atoms,
    filter_atoms,
    parse_pdb_atoms,
    parse_xyzr,
    read_complex,
    stats_csv,
    write_complex,
)
from .pipeline import (
    STAGE_NAMES,
    PipelineConfig,
    closure_ok,
    compute_alpha_complex,
    default_workers,
)
from .synth import random_instance


def _add_input_flags(parser, required=True):
    parser.add_argument("--input", required=required, help="input file (xyzr or pdb)")
    parser.add_argument(
        "--format", choices=("xyzr", "pdb"), default=None,
        help="input format; default inferred from the file extension",
    )
    parser.add_argument("--radius-table", default=None,
                        help="radius table file with 'ELEMENT RADIUS' lines")
    parser.add_argument("--include-het", action="store_true",
                        help="keep non-water HETATM records (pdb)")
    parser.add_argument("--include-water", action="store_true",
                        help="keep water records (pdb)")
    parser.add_argument("--include-h", action="store_true",
                        help="keep hydrogen/deuterium atoms (pdb)")


def _add_random_flags(parser):
    parser.add_argument("--random", type=int, default=None, metavar="N",
                        help="generate a synthetic instance of N balls instead of reading a file")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--min-sep", type=float, default=1.0)
    parser.add_argument("--radius-range", default="1.0:2.0", metavar="LO:HI")
    parser.add_argument("--density", type=float, default=0.05,
                        help="balls per cubic angstrom for the sampling cube")
    parser.add_argument("--trials", type=int, default=1)


def _parse_radius_range(text):
    try:
        lo, hi = (float(p) for p in text.split(":"))
    except ValueError:
        raise ValueError(f"--radius-range must look like LO:HI, got {text!r}") from None
    return lo, hi


def _load_file(args):
    fmt = args.format
    if fmt is None:
        lower = args.input.lower()
        if lower.endswith(".xyzr"):
            fmt = "xyzr"
        elif lower.endswith((".pdb", ".ent")):
            fmt = "pdb"
        else:
            raise ValueError(
                f"cannot infer format of {args.input!r}; pass --format xyzr|pdb"
            )
    with open(args.input, "r", encoding="utf-8") as handle:
        text = handle.read()
    try:
        if fmt == "xyzr":
            return parse_xyzr(text)
        table = (
            RadiusTable.load(args.radius_table)
            if args.radius_table
            else RadiusTable.default()
        )
        atoms = filter_atoms(
            parse_pdb_atoms(text),
            include_het=args.include_het,
            include_water=args.include_water,
            include_hydrogens=args.include_h,
        )
        if not atoms:
            raise AlphaxError("all atoms were filtered out; see --include-* flags")
        return balls_from_atoms(atoms, table)
    except AlphaxError as exc:
        raise AlphaxError(f"{args.input}: {exc}") from exc


def _random_instance(args, seed):
    return random_instance(
        args.random,
        seed=seed,
        min_sep=args.min_sep,
        radius_range=_parse_radius_range(args.radius_range),
        density=args.density,
    )


def _config(args, mode=None, workers=None, chunk_size=None):
    return PipelineConfig(
        alpha=args.alpha,
        mode=mode if mode is not None else getattr(args, "mode", "grid"),
        chunk_size=chunk_size if chunk_size is not None else getattr(args, "chunk_size", None),
        workers=workers if workers is not None else (getattr(args, "workers", None) or default_workers()),
        biomolecule_mode=getattr(args, "biomolecule", False),
    )


def cmd_compute(args) -> int:
    balls = _load_file(args)
    k = compute_alpha_complex(balls, _config(args))
    document = write_complex(k)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(document)
    else:
        sys.stdout.write(document)
    if args.stats:
        sys.stderr.write(stats_csv(k))
    return 0


def cmd_validate(args) -> int:
    if args.random is None and args.input is None:
        raise ValueError("validate needs --input or --random N")
    trials = args.trials if args.random is not None else 1
    mismatches = 0
    properties_ok = True
    for trial in range(trials):
        if args.random is not None:
            balls = _random_instance(args, args.seed + trial)
            label = f"random n={args.random} seed={args.seed + trial}"
        else:
            balls = _load_file(args)
            label = args.input
        k_grid = compute_alpha_complex(balls, _config(args, mode="grid"))
        k_naive = compute_alpha_complex(balls, _config(args, mode="naive"))
        diff = k_grid.symmetric_difference(k_naive)
        trial_mismatches = sum(a.shape[0] + b.shape[0] for a, b in diff.values())
        mismatches += trial_mismatches
        counts = k_grid.counts()
        print(f"trial {trial + 1}/{trials} [{label}]: complex "
              f"(v={counts[0]}, e={counts[1]}, t={counts[2]}, T={counts[3]})")
        print("  symmetric difference: " + " ".join(
            f"dim{d}={diff[d][0].shape[0] + diff[d][1].shape[0]}" for d in range(4)))
        if trial_mismatches:
            shown = 0
            for d in range(4):
                for side, rows in zip(("grid-only", "naive-only"), diff[d]):
                    for row in rows:
                        if shown >= 20:
                            break
                        print(f"  {side}: dim {d} {tuple(int(v) for v in row)}")
                        shown += 1
        closed = closure_ok(k_grid) and closure_ok(k_naive)
        bigger = compute_alpha_complex(
            balls,
            PipelineConfig(
                alpha=args.alpha + 1.0,
                mode="grid",
                biomolecule_mode=getattr(args, "biomolecule", False),
            ),
        )
        monotone = k_grid.is_subcomplex_of(bigger)
        properties_ok = properties_ok and closed and monotone
        print(f"  closure: {'ok' if closed else 'VIOLATED'}   "
              f"monotonicity (alpha -> alpha+1): {'ok' if monotone else 'VIOLATED'}")
    print(f"{mismatches} mismatches across {trials} trial(s)")
    return 0 if mismatches == 0 and properties_ok else 1


def cmd_stats(args) -> int:
    with open(args.input, "r", encoding="utf-8") as handle:
        k = read_complex(handle.read())
    sys.stdout.write(stats_csv(k))
    return 0


def cmd_bench(args) -> int:
    if args.random is not None:
        balls = _random_instance(args, args.seed)
    elif args.input is not None:
        balls = _load_file(args)
    else:
        raise ValueError("bench needs --input or --random N")
    workers_list = [int(w) for w in str(args.workers).split(",")]
    print("repeat,workers,stage,seconds")
    for repeat in range(args.repeat):
        for workers in workers_list:
            times: dict[str, float] = {}
            start = time.perf_counter()
            k = compute_alpha_complex(
                balls, _config(args, mode="grid", workers=workers), stage_times=times)
            io_start = time.perf_counter()
            write_complex(k)
            times["io"] = time.perf_counter() - io_start
            total = time.perf_counter() - start
            # the tiny vertex step has no category of its own
            times["prune_edges"] = times.get("prune_edges", 0.0) + times.pop("prune_vertices", 0.0)
            for stage in STAGE_NAMES:
                print(f"{repeat},{workers},{stage},{times.get(stage, 0.0):.6f}")
            print(f"{repeat},{workers},total,{total:.6f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="alphax",
        description="Alpha complexes of weighted points in 3D, computed "
                    "directly (no Delaunay triangulation). Alpha is given in "
                    "power-distance units (squared angstroms).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="compute an alpha complex and write it out")
    _add_input_flags(c)
    c.add_argument("--alpha", type=float, required=True,
                   help="filtration threshold (squared angstroms)")
    c.add_argument("--output", default=None, help="output path (default stdout)")
    c.add_argument("--mode", choices=("grid", "naive"), default="grid")
    c.add_argument("--chunk-size", type=int, default=None,
                   help="balls per chunk in grid order (default: unlimited)")
    c.add_argument("--workers", type=int, default=None,
                   help="parallel workers (default: hardware, or ALPHAX_WORKERS)")
    c.add_argument("--biomolecule", action="store_true",
                   help="insert all vertices without a domination check")
    c.add_argument("--stats", action="store_true", help="emit stats CSV to stderr")
    c.set_defaults(func=cmd_compute)

    v = sub.add_parser("validate", help="compare the grid pipeline against the "
                                        "exhaustive oracle")
    _add_input_flags(v, required=False)
    _add_random_flags(v)
    v.add_argument("--alpha", type=float, required=True)
    v.add_argument("--biomolecule", action="store_true")
    v.set_defaults(func=cmd_validate)

    s = sub.add_parser("stats", help="print stats for a serialized complex")
    s.add_argument("--input", required=True)
    s.set_defaults(func=cmd_stats)

    b = sub.add_parser("bench", help="per-stage wall times as CSV (stage sums "
                                     "reflect CPU time when workers > 1)")
    _add_input_flags(b, required=False)
    _add_random_flags(b)
    b.add_argument("--alpha", type=float, required=True)
    b.add_argument("--repeat", type=int, default=1)
    b.add_argument("--workers", default="1", help="comma-separated worker counts")
    b.add_argument("--chunk-size", type=int, default=None)
    b.add_argument("--biomolecule", action="store_true")
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AlphaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
