"""Command-line surface: enumerate, pair, cheb, gram, det, verify, suite.

Reports stream as JSON lines (one object per claim); the table view is
rendered from those lines and is never the source of truth.  The suite
appends its lines to reports.jsonl in the cache directory.  Randomized
checks use a fixed published seed unless --seed overrides it, and suite
outcomes are independent of --jobs by construction: worker counts only
distribute point evaluations, never change what is computed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from mbgram import gram, properties
from mbgram.chebyshev import IdentityId, cheb_S, cheb_T, verify_identity
from mbgram.diagrams import Stratum, enumerate_stratum, parse_diagram, validate_diagram
from mbgram.gram import ConjectureId, DEFAULT_SEED, GramVariant
from mbgram.pairing import pair_trace
from mbgram.reporting import Report, ReportWriter, render_table
from mbgram.storage import resolve_cache_dir

PROFILES = ("quick", "full", "stretch")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--cache-dir", default=None,
                        help="cache directory (default: $MBGRAM_CACHE_DIR or ./cache)")
    parser.add_argument("--format", choices=("json", "table"), default="table")
    parser.add_argument("--jobs", type=int, default=1,
                        help="worker processes for evaluation points")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed for randomized checks (default: published constant)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mbgram",
        description="Crossingless Mobius-band connections, pairing Gram matrices, "
                    "and exact determinant checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_enum = sub.add_parser("enumerate", help="list diagrams of one stratum")
    p_enum.add_argument("--n", type=int, required=True)
    p_enum.add_argument("--stratum", choices=[s.value for s in Stratum], required=True)
    _add_common(p_enum)

    p_pair = sub.add_parser("pair", help="pairing value and trace of two diagrams")
    p_pair.add_argument("--m1", required=True, help='diagram text, e.g. "(2 5)(3 4)(1)(6)"')
    p_pair.add_argument("--m2", required=True)
    _add_common(p_pair)

    p_cheb = sub.add_parser("cheb", help="Chebyshev generators and identity checks")
    cheb_sub = p_cheb.add_subparsers(dest="cheb_command")
    p_cheb.add_argument("--kind", choices=("T", "S"), default=None)
    p_cheb.add_argument("--n", type=int, default=None)
    _add_common(p_cheb)
    p_cheb_verify = cheb_sub.add_parser("verify", help="verify one identity over a range")
    p_cheb_verify.add_argument("--id", required=True,
                               choices=[i.value for i in IdentityId])
    p_cheb_verify.add_argument("--kmax", "--max-index", dest="max_index", type=int,
                               default=None, help="largest parameter value")
    p_cheb_verify.add_argument("--json", action="store_true", help="JSON output")
    _add_common(p_cheb_verify)

    p_gram = sub.add_parser("gram", help="assemble (and cache) a Gram matrix")
    p_gram.add_argument("--n", type=int, required=True)
    p_gram.add_argument("--variant", choices=[v.value for v in GramVariant],
                        required=True)
    _add_common(p_gram)

    p_det = sub.add_parser("det", help="exact determinant of a Gram matrix")
    p_det.add_argument("--n", type=int, required=True)
    p_det.add_argument("--variant", choices=[v.value for v in GramVariant],
                       required=True)
    p_det.add_argument("--backend", choices=("auto", "bareiss", "interp"),
                       default="auto")
    _add_common(p_det)

    p_verify = sub.add_parser("verify", help="verify a determinant claim")
    group = p_verify.add_mutually_exclusive_group(required=True)
    group.add_argument("--conjecture", choices=[c.value for c in ConjectureId])
    group.add_argument("--theorem", choices=("3.6",))
    group.add_argument("--identity", choices=[i.value for i in IdentityId])
    p_verify.add_argument("--n", type=int, default=None)
    p_verify.add_argument("--method", choices=("exact", "randomized"), default="exact")
    p_verify.add_argument("--points", type=int, default=20)
    p_verify.add_argument("--max-index", type=int, default=None)
    _add_common(p_verify)

    p_suite = sub.add_parser("suite", help="run a verification profile end to end")
    p_suite.add_argument("--profile", choices=PROFILES, default="full")
    _add_common(p_suite)

    return parser


def _emit(args, reports: list, stream=None) -> None:
    stream = stream or sys.stdout
    if args.format == "json" or getattr(args, "json", False):
        for r in reports:
            stream.write(r.to_json_line() + "\n")
    else:
        stream.write(render_table(reports) + "\n")


def _cmd_enumerate(args) -> int:
    diagrams = enumerate_stratum(args.n, Stratum(args.stratum))
    if args.format == "json":
        for m in diagrams:
            sys.stdout.write(json.dumps(m.to_json_obj(), sort_keys=True) + "\n")
    else:
        for m in diagrams:
            sys.stdout.write(m.serialize() + "\n")
        sys.stdout.write(f"# {len(diagrams)} diagrams\n")
    return 0


def _cmd_pair(args) -> int:
    m1 = parse_diagram(args.m1)
    m2 = parse_diagram(args.m2)
    for name, m in (("m1", m1), ("m2", m2)):
        violations = validate_diagram(m)
        if violations:
            sys.stderr.write(f"{name} is not a valid diagram: {violations}\n")
            return 2
    trace = pair_trace(m1, m2)
    if args.format == "json":
        sys.stdout.write(json.dumps(trace, sort_keys=True) + "\n")
    else:
        sys.stdout.write(f"<m1, m2> = {trace['value']}\n")
        for comp in trace["components"]:
            psi = f" psi={comp['psi']}" if "psi" in comp else ""
            sys.stdout.write(f"  component {comp['vertices']}: {comp['class']}{psi}\n")
    return 0


def _cmd_cheb(args) -> int:
    if getattr(args, "cheb_command", None) == "verify":
        report = verify_identity(IdentityId.from_tag(args.id), max_index=args.max_index)
        _emit(args, [report])
        return 0 if report.passed() else 1
    if args.kind is None or args.n is None:
        sys.stderr.write("cheb: need --kind and --n (or the verify subcommand)\n")
        return 2
    poly = cheb_T(args.n) if args.kind == "T" else cheb_S(args.n)
    if args.format == "json":
        sys.stdout.write(json.dumps(poly.to_json_obj(), sort_keys=True) + "\n")
    else:
        sys.stdout.write(f"{args.kind}_{args.n} = {poly}\n")
    return 0


def _cmd_gram(args) -> int:
    gm = gram.get_gram(args.n, GramVariant(args.variant), cache_dir=args.cache_dir)
    if args.format == "json":
        sys.stdout.write(json.dumps(gm.to_json_obj(), sort_keys=True) + "\n")
    else:
        sys.stdout.write(f"# {gm.size}x{gm.size} {gm.variant.value} matrix, n={gm.n}\n")
        for m, row in zip(gm.basis, gm.entries):
            cells = "  ".join(str(e) for e in row)
            sys.stdout.write(f"{m.serialize()}: {cells}\n")
    return 0


def _cmd_det(args) -> int:
    det, provenance = gram.get_det(args.n, GramVariant(args.variant),
                                   cache_dir=args.cache_dir, jobs=args.jobs,
                                   backend=args.backend)
    if args.format == "json":
        obj = {"n": args.n, "variant": args.variant, **provenance,
               "det": det.to_json_obj()}
        sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")
    else:
        sys.stdout.write(f"det = {det}\n")
    return 0


def _cmd_verify(args) -> int:
    if args.identity is not None:
        report = verify_identity(IdentityId.from_tag(args.identity),
                                 max_index=args.max_index)
    elif args.theorem is not None:
        if args.n is None:
            sys.stderr.write("verify --theorem needs --n\n")
            return 2
        report = gram.verify_theorem_3_6(args.n, jobs=args.jobs,
                                         cache_dir=args.cache_dir)
    else:
        if args.n is None:
            sys.stderr.write("verify --conjecture needs --n\n")
            return 2
        report = gram.verify_conjecture(
            ConjectureId(args.conjecture), args.n, method=args.method,
            seed=args.seed, points=args.points, jobs=args.jobs,
            cache_dir=args.cache_dir)
    _emit(args, [report])
    return 0 if report.status != "FAIL" else 1


def suite_claims(profile: str, jobs: int, seed: int | None, cache_dir) -> list:
    """Ordered claim list for one profile; every entry is a zero-arg callable."""
    seed = DEFAULT_SEED if seed is None else seed
    claims: list = []

    def add(fn, *fn_args, **fn_kwargs):
        claims.append(lambda: fn(*fn_args, **fn_kwargs))

    # Chebyshev identity block (quick and up); the Cor2_6 check runs the
    # whole Mersenne product chain incrementally, so it needs no separate claim
    for ident in IdentityId:
        add(verify_identity, ident)

    # small fixtures and matrices (quick and up)
    add(properties.check_enumeration_counts, 2 if profile == "quick" else 6)
    add(properties.check_crosscap_pair_fixture)
    add(properties.check_tilde_block_fixture, cache_dir=cache_dir)
    add(gram.verify_conjecture, ConjectureId.C3_4, 1, cache_dir=cache_dir)
    add(gram.verify_conjecture, ConjectureId.C3_4, 2, cache_dir=cache_dir)
    add(gram.verify_conjecture, ConjectureId.C3_5, 2, cache_dir=cache_dir)
    add(gram.verify_conjecture, ConjectureId.C3_3, 2, cache_dir=cache_dir)
    add(gram.verify_theorem_3_6, 2, cache_dir=cache_dir)
    add(gram.verify_formula_identity, 8)

    if profile in ("full", "stretch"):
        for n in (3, 4):
            add(gram.verify_conjecture, ConjectureId.C3_5, n, jobs=jobs,
                cache_dir=cache_dir)
            add(gram.verify_conjecture, ConjectureId.C3_3, n, jobs=jobs,
                cache_dir=cache_dir)
            add(gram.verify_theorem_3_6, n, jobs=jobs, cache_dir=cache_dir)
        add(gram.verify_conjecture, ConjectureId.C3_4, 3, method="randomized",
            seed=seed, points=20, jobs=jobs, cache_dir=cache_dir)
        add(gram.verify_conjecture, ConjectureId.C5_1, 3, cache_dir=cache_dir)
        add(properties.check_transpose_symmetry, 4)
        add(properties.check_diagonal_law, 5)
        add(properties.check_winding_range, 5)
        add(properties.check_entry_profiles, 4)
        add(properties.check_det_backends_agree, cache_dir=cache_dir)

    if profile == "stretch":
        add(gram.verify_conjecture, ConjectureId.C3_5, 5, method="randomized",
            seed=seed, points=24, jobs=jobs, cache_dir=cache_dir)

    return claims


def run_suite(profile: str, jobs: int = 1, seed: int | None = None,
              cache_dir=None, stream=None, progress=None) -> tuple:
    """Run a profile; returns (exit_code, reports)."""
    cache_dir = resolve_cache_dir(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    reports_path = Path(cache_dir) / "reports.jsonl"
    writer = ReportWriter(stream)
    with open(reports_path, "a") as sink:
        for claim in suite_claims(profile, jobs, seed, cache_dir):
            report = claim()
            writer.emit(report)
            sink.write(report.to_json_line() + "\n")
            sink.flush()
            if progress is not None:
                progress.write(f"## {report.claim} [{report.tag}] {report.status} "
                               f"({report.duration_s:.2f}s)\n")
                progress.flush()
    return (1 if writer.any_failed() else 0), writer.reports


def _cmd_suite(args) -> int:
    started = time.perf_counter()
    stream = sys.stdout if args.format == "json" else None
    progress = sys.stderr if args.format != "json" else None
    code, reports = run_suite(args.profile, jobs=args.jobs, seed=args.seed,
                              cache_dir=args.cache_dir, stream=stream,
                              progress=progress)
    if args.format != "json":
        sys.stdout.write(render_table(reports) + "\n")
        failed = sum(r.status == "FAIL" for r in reports)
        skipped = sum(r.status == "SKIPPED" for r in reports)
        sys.stdout.write(
            f"# profile={args.profile} claims={len(reports)} failed={failed} "
            f"skipped={skipped} elapsed={time.perf_counter() - started:.1f}s\n")
    return code


_COMMANDS = {
    "enumerate": _cmd_enumerate,
    "pair": _cmd_pair,
    "cheb": _cmd_cheb,
    "gram": _cmd_gram,
    "det": _cmd_det,
    "verify": _cmd_verify,
    "suite": _cmd_suite,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return _COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
