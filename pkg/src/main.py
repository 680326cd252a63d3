import sys
import logging
import argparse
from pathlib import Path
from typing import Optional, Sequence

from src.bounds import dump_records, emit_table, gv_records, known_constructions, load_records, propagate_bounds
from src.contraction import contract_pa
from src.coset_search import SearchConfig, coset_search, verify_search_output
from src.distance import pa_hd
from src.errors import ClaimFailed, Exhausted, PermArrayError
from src.finite_field import field_of_order
from src.groups import materialize, parse_descriptor
from src.gv import gv_bound
from src.pa_format import read_pa, write_pa
from src.perm_array import PermArray, frobenius_coset_pa
from src.permutation import parse_permutation
from src.settings import configure_logging, get_settings

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_CLAIM_FAILED, EXIT_USAGE = 0, 1, 2


def _read_rep_list(path: Path, one_indexed: bool):
    """Raw permutation list, one per line; commas or spaces; '#' comments."""
    reps = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        text = raw.split("#", 1)[0].strip()
        if text:
            reps.append(parse_permutation(text, one_indexed=one_indexed, line=lineno))
    return reps


def _base_text(args: argparse.Namespace) -> str:
    text = args.base
    if getattr(args, "embed", None):
        text += f" embed={args.embed}"
    return text


# --- Subcommands ---

def cmd_gen(args: argparse.Namespace) -> int:
    if args.frobenius_cosets:
        pa = frobenius_coset_pa(field_of_order(args.frobenius_cosets))
    else:
        if not args.base:
            raise PermArrayError("gen needs --base or --frobenius-cosets")
        descriptor = parse_descriptor(_base_text(args), Path.cwd())
        reps = _read_rep_list(args.reps, args.one_indexed) if args.reps else []
        pa = PermArray(materialize(descriptor), reps, note=args.note or "")
        pa.check_distinct_cosets()
    report = pa_hd(pa)
    pa.d = report.min_distance if args.d is None else args.d
    write_pa(pa, args.out)
    print(f"wrote {args.out}: n={pa.n} size={pa.size} hd={report.min_distance}")
    return EXIT_OK


HD_MODES = {"exact": "exact-pairwise", "fast": "coset-shortcut"}


def cmd_hd(args: argparse.Namespace) -> int:
    pa = read_pa(args.file, one_indexed=args.one_indexed)
    report = pa_hd(pa, HD_MODES[args.mode], args.workers, target=args.target)
    print(report.render())
    if args.target is not None and report.min_distance < args.target:
        return EXIT_CLAIM_FAILED
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    pa = read_pa(args.file, one_indexed=args.one_indexed)
    try:
        report = verify_search_output(pa, claimed=args.claim, workers=args.workers)
    except ClaimFailed as e:
        w = e.report.witness
        print(f"FAIL claimed d={e.claimed} hd={e.report.min_distance}")
        print(f"witness {w[0]}: {pa.element(w[0]).to_text()}")
        print(f"witness {w[1]}: {pa.element(w[1]).to_text()}")
        return EXIT_CLAIM_FAILED
    print(f"OK n={pa.n} d={report.min_distance} size={pa.size}")
    return EXIT_OK


def cmd_contract(args: argparse.Namespace) -> int:
    pa = read_pa(args.file)
    contracted, certificate = contract_pa(pa, args.times, args.workers)
    write_pa(contracted, args.out)
    print(certificate.render())
    return EXIT_OK


def cmd_search(args: argparse.Namespace) -> int:
    base = materialize(parse_descriptor(_base_text(args), Path.cwd()))
    settings = get_settings()
    cfg = SearchConfig(
        d=args.d,
        seed=args.seed,
        max_candidates=args.max_candidates,
        require_tight=not args.no_tight,
        checkpoint_every=args.checkpoint_every or settings.checkpoint_every,
        workers=args.workers or settings.workers,
        max_cosets=args.max_cosets,
        checkpoint_path=args.out,
    )
    resume = read_pa(args.resume) if args.resume else None
    try:
        pa = coset_search(base, cfg, resume)
    except Exhausted as e:
        if e.pa is not None:
            write_pa(e.pa, args.out)
        print(f"exhausted after {e.tried} candidates", file=sys.stderr)
        return EXIT_USAGE
    write_pa(pa, args.out)
    print(f"cosets={len(pa.reps)} size={pa.size} d={cfg.d}")
    return EXIT_OK


def cmd_gv(args: argparse.Namespace) -> int:
    result = gv_bound(args.n, args.d)
    print(result.render())
    return EXIT_OK


def cmd_table(args: argparse.Namespace) -> int:
    n_range, d_range = tuple(args.n_range), tuple(args.d_range)
    records = load_records(args.records) if args.records else []
    if args.constructions:
        records += known_constructions(n_range)
    if args.gv:
        records += gv_records(n_range, d_range)
    if args.propagate:
        records = propagate_bounds(records, n_range, d_range)
    if args.dump:
        Path(args.dump).write_text(dump_records(records))
    print(emit_table(records, n_range, d_range), end="")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    from src.api import serve

    serve(args.host, args.port)
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    from src.evaluator import run_evaluation

    return EXIT_OK if run_evaluation(args.fallback_search, args.claim) else EXIT_CLAIM_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pa", description="Permutation array construction and certification")
    parser.add_argument("--log-level", default="", help="Overrides PA_LOG_LEVEL.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="Write a PA built from a group (and optional coset reps).")
    gen.add_argument("--base", help='Group descriptor, e.g. "AGAMMAL1 q=8".')
    gen.add_argument("--embed", type=int, help="Lift the base group to this many symbols.")
    gen.add_argument("--frobenius-cosets", type=int, metavar="Q", help="AGL(1,Q) plus its Frobenius cosets.")
    gen.add_argument("--reps", type=Path, help="Raw coset representatives, one per line.")
    gen.add_argument("--one-indexed", action="store_true", help="Representatives are printed 1-indexed.")
    gen.add_argument("--d", type=int, help="Claimed d to record (default: the verified hd).")
    gen.add_argument("--note", help="Provenance note for the file header.")
    gen.add_argument("--out", type=Path, required=True)
    gen.set_defaults(func=cmd_gen)

    hd = sub.add_parser("hd", help="Minimum Hamming distance of a PA file.")
    hd.add_argument("file", type=Path)
    hd.add_argument("--mode", choices=sorted(HD_MODES), default="fast")
    hd.add_argument("--target", type=int, help="Stop at the first pair closer than this; exit 1 if one exists.")
    hd.add_argument("--one-indexed", action="store_true")
    hd.add_argument("--workers", type=int)
    hd.set_defaults(func=cmd_hd)

    verify = sub.add_parser("verify", help="Certify the claimed d of a PA file.")
    verify.add_argument("file", type=Path)
    verify.add_argument("--claim", type=int, help="Override the file's d.")
    verify.add_argument("--one-indexed", "--import-one-indexed", dest="one_indexed", action="store_true")
    verify.add_argument("--workers", type=int)
    verify.set_defaults(func=cmd_verify)

    contract = sub.add_parser("contract", help="Remove the largest symbol `times` times.")
    contract.add_argument("file", type=Path)
    contract.add_argument("--times", type=int, default=1)
    contract.add_argument("--workers", type=int)
    contract.add_argument("--out", type=Path, required=True)
    contract.set_defaults(func=cmd_contract)

    search = sub.add_parser("search", help="Grow a PA by the randomized coset method.")
    search.add_argument("--base", required=True)
    search.add_argument("--embed", type=int)
    search.add_argument("--d", type=int, required=True)
    search.add_argument("--seed", type=int, default=0)
    search.add_argument("--max-candidates", type=int, default=1_000_000)
    search.add_argument("--max-cosets", type=int)
    search.add_argument("--no-tight", action="store_true", help="Drop the exact-distance acceptance condition.")
    search.add_argument("--resume", type=Path)
    search.add_argument("--workers", type=int)
    search.add_argument("--checkpoint-every", type=int)
    search.add_argument("--out", type=Path, required=True)
    search.set_defaults(func=cmd_search)

    gv = sub.add_parser("gv", help="Exact Gilbert-Varshamov bound.")
    gv.add_argument("--n", type=int, required=True)
    gv.add_argument("--d", type=int, required=True)
    gv.set_defaults(func=cmd_gv)

    table = sub.add_parser("table", help="Render a grid of M(n, d) lower bounds.")
    table.add_argument("--n-range", type=int, nargs=2, default=[4, 13], metavar=("LO", "HI"))
    table.add_argument("--d-range", type=int, nargs=2, default=[3, 12], metavar=("LO", "HI"))
    table.add_argument("--records", type=Path, help="File of `n d size tag` lines.")
    table.add_argument("--constructions", action="store_true", help="Add verified group constructions.")
    table.add_argument("--gv", action="store_true", help="Add Gilbert-Varshamov rows.")
    table.add_argument("--propagate", action="store_true", help="Close under the a/b/d rules.")
    table.add_argument("--dump", type=Path, help="Also write the records to this file.")
    table.set_defaults(func=cmd_table)

    serve = sub.add_parser("serve", help="Run the HTTP verification gateway.")
    serve.add_argument("--host", default="0.0.0.0")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(func=cmd_serve)

    evaluate = sub.add_parser("evaluate", help="Re-run the published claims.")
    evaluate.add_argument("--fallback-search", action="store_true")
    evaluate.add_argument("--claim", action="append", help="Run only the named claim(s).")
    evaluate.set_defaults(func=cmd_evaluate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level.upper())
    try:
        return args.func(args)
    except ClaimFailed as e:
        logger.error(str(e))
        return EXIT_CLAIM_FAILED
    except (PermArrayError, OSError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        sys.exit(130)
