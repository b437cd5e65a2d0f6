"""Batch command-line interface.

Subcommands: reduce, local, watson, check-regular, census, polygonal,
verify-identity.  All numeric I/O uses exact "p/q" strings; census-style
results stream as one self-contained JSON record per line below a header
line carrying the tool version and run configuration.  Exit codes:
0 success, 2 precondition/usage errors (naming the violated
precondition), 1 internal assertion failures.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from . import __version__, forms, padic, polygonal, reduction, regularity, watson
from .errors import InternalCheckError, QuadCosetError


class CliError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)

    def to_header(self) -> dict:
        return {"tool": "quadcoset", "version": __version__,
                "command": self.command, "params": self.params}


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def write_records(path, header: dict, records):
    lines = [_dumps(header)]
    lines += [_dumps(r) for r in records]
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_records(path):
    with open(path, "r", encoding="ascii") as fh:
        raw = fh.read().splitlines()
    if not raw:
        raise CliError(f"{path}: empty record file")
    out = []
    for i, line in enumerate(raw):
        try:
            out.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise CliError(f"{path}: malformed record on line {i + 1}: {exc}") from exc
    return out[0], out[1:]


def load_coset(path) -> forms.Coset:
    try:
        with open(path, "r", encoding="ascii") as fh:
            rec = json.load(fh)
        return forms.coset_from_record(rec)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        raise CliError(f"cannot read coset file {path}: {exc}") from exc


def _print_coset(c):
    print(_dumps(forms.coset_to_record(c)))


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("QUADCOSET_JOBS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# Subcommand handlers


def _cmd_reduce(args):
    c = load_coset(args.coset)
    red = reduction.reduce(c)
    print(f"minima: {[forms.frac_to_str(m) for m in red.minima]}")
    t, u = red.transform_applied
    print(f"transform T: {[list(r) for r in t]}  u: {list(u)}")
    _print_coset(red.coset)
    if args.output:
        write_records(
            args.output,
            RunConfig("reduce", {"coset": args.coset}).to_header(),
            [forms.coset_to_record(red.coset)],
        )
    return 0


def _cmd_local(args):
    c = load_coset(args.coset)
    p = args.prime
    if args.represents is not None:
        ok = padic.local_represents(c, p, args.represents)
        print(f"{args.represents} is {'represented' if ok else 'not represented'} over Z_{p}")
        return 0
    split = padic.jordan_decompose(c, p)
    for b in split.blocks:
        gram = [[forms.frac_to_str(x) for x in row] for row in b.gram]
        print(f"block scale {b.scale} rank {b.rank} gram {gram}")
    print(f"behaves well: {split.unimodular_rank() >= 2}")
    cls = padic.local_class(c, p)
    print(f"represented class: {cls.residue} + {p}^{cls.exponent} Z_{p}")
    prog = padic.progression_data(c)
    print(f"progression: {prog.r} mod {prog.a}")
    print(f"relevant primes: {padic.relevant_primes(c)}")
    return 0


def _cmd_watson(args):
    c = load_coset(args.coset)
    if args.chain:
        final, steps = watson.descend_chain(c)
        for s in steps:
            print(_dumps(s.to_record()))
        print("final:")
        _print_coset(final)
        records = [s.to_record() for s in steps]
    else:
        step = watson.coset_descend(c, args.prime)
        print(_dumps(step.to_record()))
        records = [step.to_record()]
    if args.output:
        write_records(
            args.output,
            RunConfig("watson", {"coset": args.coset, "prime": args.prime,
                                 "chain": bool(args.chain)}).to_header(),
            records,
        )
    return 0


def _census_style_record(c, verdict):
    _, steps = watson.descend_chain(c)
    return regularity.CensusRecord(
        coset=c,
        canonical_key=reduction.canonical_key(c),
        conductor=forms.conductor(c),
        discriminant=forms.discriminant(c),
        verdict=verdict,
        descent=tuple(steps),
    )


def _cmd_check_regular(args):
    c = load_coset(args.coset)
    verdict = regularity.check_regular(c, args.bound)
    print(f"status: {verdict.status}")
    if verdict.failure_witness is not None:
        w = verdict.failure_witness
        print(f"failure witness: {w.value} (local certificates {dict(w.local)})")
    print(f"locally represented <= {args.bound}: {verdict.locally_represented}")
    print(f"globally represented <= {args.bound}: {verdict.globally_represented}")
    if args.output:
        rec = _census_style_record(c, verdict)
        write_records(
            args.output,
            RunConfig("check-regular",
                      {"coset": args.coset, "bound": args.bound}).to_header(),
            [rec.to_record()],
        )
    if args.figure:
        from . import report
        report.regularity_figure(args.figure, c, verdict)
        print(f"figure written to {args.figure}")
    return 0


def _cmd_census(args):
    known = {}
    if args.resume and args.output and os.path.exists(args.output):
        _, raw = read_records(args.output)
        for rec in raw:
            r = regularity.record_from_dict(rec)
            known[r.canonical_key] = r
    records = regularity.census(
        conductor=args.conductor,
        disc_bound=forms.frac_from_str(args.disc_bound)
        if "/" in args.disc_bound else int(args.disc_bound),
        bound=args.bound,
        coeff_bound=forms.frac_from_str(args.coeff_bound)
        if "/" in args.coeff_bound else int(args.coeff_bound),
        diagonal_only=args.diagonal_only,
        jobs=args.jobs,
        known=known,
    )
    header = RunConfig(
        "census",
        {
            "conductor": args.conductor,
            "disc_bound": args.disc_bound,
            "bound": args.bound,
            "coeff_bound": args.coeff_bound,
            "diagonal_only": args.diagonal_only,
        },
    ).to_header()
    for r in records:
        status = r.verdict.status
        print(f"disc {forms.frac_to_str(r.discriminant)} conductor {r.conductor}: {status}")
    print(f"{len(records)} classes")
    if args.output:
        write_records(args.output, header, [r.to_record() for r in records])
    if args.figure:
        from . import report
        report.census_figure(args.figure, records)
        print(f"figure written to {args.figure}")
    return 0


def _cmd_polygonal(args):
    coeffs = tuple(int(x) for x in args.coeffs.split(","))
    g = polygonal.GonalForm(args.m, coeffs)
    if args.to_coset:
        coset, vmap = polygonal.to_coset(g)
        _print_coset(coset)
        print(f"value map: k -> {vmap.scale}*k + {vmap.offset}")
        return 0
    if args.represents is not None:
        ok = polygonal.gonal_represents(g, args.represents)
        print(f"{args.represents} is {'represented' if ok else 'not represented'}")
        return 0
    if args.universal_up_to is not None:
        missing = polygonal.first_missing(g, args.universal_up_to)
        if missing is None:
            print(f"universal up to {args.universal_up_to}")
        else:
            print(f"not universal: misses {missing}")
        return 0
    if args.regular_up_to is not None:
        verdict = polygonal.is_regular_up_to(g, args.regular_up_to)
        print(f"status: {verdict.status}")
        if verdict.failure_witness is not None:
            print(f"failure witness (coset value): {verdict.failure_witness.value}")
        return 0
    raise CliError("polygonal needs one of --represents, --universal-up-to, "
                   "--regular-up-to, --to-coset")


def _cmd_verify_identity(args):
    rep = regularity.verify_counting_identity(args.n_max)
    bad = [r for r in rep.rows if not (r.difference_ok and r.doubling_ok)]
    print(f"counting identity for n <= {args.n_max}: "
          f"{'holds' if rep.ok else f'FAILS at {bad[0].n}'}")
    if args.output:
        rows = [
            {
                "n": r.n,
                "r": r.coset_count,
                "r1": r.odd_form_count,
                "r2": r.sub_form_count,
            }
            for r in rep.rows
        ]
        write_records(
            args.output,
            RunConfig("verify-identity", {"n_max": args.n_max}).to_header(),
            rows,
        )
    if args.figure:
        from . import report
        report.identity_figure(args.figure, rep)
        print(f"figure written to {args.figure}")
    return 0 if rep.ok else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadcoset",
        description="Exact analysis of positive ternary quadratic polynomials "
                    "viewed as lattice cosets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="Minkowski-reduce a coset file")
    p.add_argument("--coset", required=True)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("local", help="p-adic data: Jordan blocks, local class")
    p.add_argument("--coset", required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--represents", type=int)
    p.set_defaults(func=_cmd_local)

    p = sub.add_parser("watson", help="Watson descent step or full chain")
    p.add_argument("--coset", required=True)
    p.add_argument("--prime", type=int, default=3)
    p.add_argument("--chain", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_watson)

    p = sub.add_parser("check-regular", help="genus-vs-global regularity check")
    p.add_argument("--coset", required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--output")
    p.add_argument("--figure")
    p.set_defaults(func=_cmd_check_regular)

    p = sub.add_parser("census", help="regularity census over a candidate box")
    p.add_argument("--conductor", type=int, required=True)
    p.add_argument("--disc-bound", required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--coeff-bound", required=True)
    p.add_argument("--diagonal-only", action="store_true")
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.add_argument("--output")
    p.add_argument("--resume", action="store_true")
    p.add_argument("--figure")
    p.set_defaults(func=_cmd_census)

    p = sub.add_parser("polygonal", help="m-gonal form queries")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--coeffs", required=True, help="comma-separated positive integers")
    p.add_argument("--represents", type=int)
    p.add_argument("--universal-up-to", type=int)
    p.add_argument("--regular-up-to", type=int)
    p.add_argument("--to-coset", action="store_true")
    p.set_defaults(func=_cmd_polygonal)

    p = sub.add_parser("verify-identity", help="triangular counting identity")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--output")
    p.add_argument("--figure")
    p.set_defaults(func=_cmd_verify_identity)

    return parser


def _validate(args):
    positive = [
        ("bound", getattr(args, "bound", None)),
        ("n_max", getattr(args, "n_max", None)),
        ("conductor", getattr(args, "conductor", None)),
        ("jobs", getattr(args, "jobs", None)),
        ("prime", getattr(args, "prime", None)),
    ]
    for name, value in positive:
        if value is not None and value < 1:
            raise CliError(f"--{name.replace('_', '-')} must be positive")
    p = getattr(args, "prime", None)
    if p is not None:
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise CliError(f"--prime must be a prime number, got {p}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (QuadCosetError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except InternalCheckError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
