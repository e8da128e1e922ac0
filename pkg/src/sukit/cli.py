"""Command-line interface.

Exit status: 0 success or true, 1 false or refuted, 2 inconclusive (search
bounds or caps reached), 3 input error (with ``error: <message>`` on stderr).
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from sukit.constructions import (
    DpWitnessError,
    connected_product,
    dp_witness,
    medvedev,
    star_failure,
)
from sukit.formula import ParseError, conj, Implies, parse, rename, to_text, variables
from sukit.frame import (
    CapExceededError,
    FrameFormatError,
    NotS4Error,
    enumerate_s4_frames,
    load_frame,
    random_s4_frame,
    roots,
)
from sukit.semantics import (
    Model,
    SearchBounds,
    find_countermodel,
    find_countervaluation,
    find_su_countermodel,
    format_model,
    load_model,
    satisfies,
)
from sukit.strong_union import (
    correspondence_check,
    describe_points,
    report_line,
    su_n_failure,
    uni_failure,
)

OK, FALSE, INCONCLUSIVE, INPUT_ERROR = 0, 1, 2, 3
DEFAULT_SEED = 0


class InputError(Exception):
    pass


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _nonnegative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {value}")
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route usage errors to the input-error status
        raise InputError(message)


def _formula(text: str):
    try:
        return parse(text)
    except ParseError as exc:
        raise InputError(f"cannot parse formula {text!r}: {exc}") from None


def _frame(path: str):
    try:
        return load_frame(path)[1]
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None


def _model(path: str) -> Model:
    try:
        return load_model(path)[1]
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text, end="" if text.endswith("\n") else "\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_parse(args) -> int:
    f = _formula(args.formula)
    print(to_text(f))
    return OK


def cmd_validate(args) -> int:
    F = _frame(args.frame)
    f = _formula(args.formula)
    hit = find_countervaluation(F, f, args.upset_cap)
    if hit is None:
        print("true")
        return OK
    masks, truth = hit
    print("false")
    for var in sorted(masks):
        print(f"val {var} = {describe_points(masks[var])}")
    bad = F.full & ~truth
    print(f"refuted at {describe_points(bad)}")
    return FALSE


def cmd_su2(args) -> int:
    F = _frame(args.frame)
    hit = su_n_failure(F, 2)
    print("true" if hit is None else "false")
    if hit is not None:
        w, (x, y) = hit
        print(f"no successor of {w} strongly unites {x} and {y}")
        return FALSE
    return OK


def cmd_uni(args) -> int:
    F = _frame(args.frame)
    hit = uni_failure(F)
    print("true" if hit is None else "false")
    if hit is not None:
        s, w, v = hit
        print(f"uni fails at {s} for {w} and {v}")
        return FALSE
    return OK


def cmd_medvedev(args) -> int:
    _emit(medvedev(args.size).to_text(args.name), args.output)
    return OK


def cmd_star(args) -> int:
    hit = star_failure(args.size)
    print("true" if hit is None else "false")
    if hit is not None:
        print("violated by " + " ".join(bin(m)[2:] for m in hit))
        return FALSE
    return OK


def cmd_product(args) -> int:
    P = connected_product(_frame(args.frame1), _frame(args.frame2))
    _emit(P.to_text(args.name), args.output)
    return OK


def cmd_prove(args) -> int:
    from sukit.prover import InstanceCapError, Status, parse_sequent, prove_ipc, prove_su

    try:
        seq = parse_sequent(args.sequent)
    except ParseError as exc:
        raise InputError(f"cannot parse sequent {args.sequent!r}: {exc}") from None
    if args.logic == "ipc":
        out = prove_ipc(seq)
    else:
        goal = seq.conclusion
        if seq.premises:
            goal = Implies(conj(sorted(seq.premises, key=to_text)), goal)
        try:
            out = prove_su(goal, args.depth, instance_cap=args.instance_cap)
        except InstanceCapError as exc:
            print(f"inconclusive: {exc}")
            return INCONCLUSIVE
    if args.quiet:
        print(out.status.value)
    else:
        print(out.to_text())
    return {Status.PROVABLE: OK, Status.NOT_PROVABLE: FALSE, Status.INCONCLUSIVE: INCONCLUSIVE}[out.status]


def cmd_countermodel(args) -> int:
    f = _formula(args.formula)
    if args.logic == "ipc":
        hit = find_countermodel(f, args.max_points, cap=args.upset_cap)
    else:
        extra = {} if args.upset_cap is None else {"upset_cap": args.upset_cap}
        bounds = SearchBounds(max_points=args.max_points, seed=args.seed,
                              random_frames=args.random_frames, **extra)
        hit = find_su_countermodel(f, bounds)
    if hit is None:
        print(f"no countermodel up to {args.max_points} points")
        return INCONCLUSIVE
    M, w = hit
    _emit(format_model(M, args.name, [f"refutes {to_text(f)} at {w}"]), args.output)
    return FALSE


def _refuting_root(M: Model, f, which: str) -> int:
    for r in sorted(roots(M.frame)):
        if not satisfies(M, r, f):
            return r
    rs = sorted(roots(M.frame))
    if not rs:
        raise InputError(f"{which} model has no root")
    return rs[0]


def cmd_dp_witness(args) -> int:
    M1, M2 = _model(args.model1), _model(args.model2)
    alpha, beta = _formula(args.alpha), _formula(args.beta)
    left = variables(alpha) | frozenset(M1.masks)
    right = variables(beta) | frozenset(M2.masks)
    shared = sorted(left & right)
    if shared:
        if not args.rename_apart:
            raise InputError(f"variables shared by both sides: {', '.join(shared)} (use --rename-apart)")
        taken = left | right
        mapping = {}
        for v in shared:
            k = 2
            while f"{v}_{k}" in taken:
                k += 1
            mapping[v] = f"{v}_{k}"
            taken = taken | {mapping[v]}
        beta = rename(beta, mapping)
        M2 = Model.from_masks(M2.frame, {mapping.get(v, v): m for v, m in M2.masks.items()})
    r1 = _refuting_root(M1, alpha, "first")
    r2 = _refuting_root(M2, beta, "second")
    try:
        W = dp_witness(M1, r1, alpha, M2, r2, beta)
    except DpWitnessError as exc:
        print(f"no witness: {exc}")
        return FALSE
    _emit(W.to_text(args.name), args.output)
    return OK


def cmd_correspondence(args) -> int:
    if args.enumerate is not None:
        frames = [(f"n{args.enumerate}-{i}", F) for i, F in enumerate(enumerate_s4_frames(args.enumerate))]
    else:
        if args.random is None or args.points is None:
            raise InputError("give --enumerate n, or --random k with --points n")
        frames = [
            (f"seed{args.seed}-{i}", random_s4_frame(args.points, args.seed * 1_000_003 + i))
            for i in range(args.random)
        ]
    agree = 0
    disagreements = []
    for fid, F in frames:
        rep = correspondence_check(F, args.upset_cap)
        if rep.agree:
            agree += 1
        else:
            disagreements.append(fid)
        if args.report:
            print(report_line(fid, F, args.upset_cap))
    print(f"{len(frames)} frames, {agree} agree")
    for fid in disagreements:
        print(f"disagreement on {fid}")
    return OK if not disagreements else FALSE


def cmd_verify_lemmas(args) -> int:
    from sukit.prover import check_structural_properties, verify_lemma_su_aa, verify_su_star
    from sukit.suites import check_products, frame_lemma_suites, frames_up_to

    ok = True
    report = verify_lemma_su_aa()
    print(report.to_text())
    ok &= report.passed
    for n in (1, 2, 3):
        good = verify_su_star(n)
        print(f"su* n={n}: {'pass' if good else 'fail'}")
        ok &= good
    structural = check_structural_properties(args.seed)
    print(structural.to_text())
    ok &= structural.passed
    for res in frame_lemma_suites(args.max_points):
        print(res.line())
        for v in res.violations:
            print(f"  {v}")
        ok &= res.passed
    for res in check_products(frames_up_to(args.product_points)):
        print(res.line())
        for v in res.violations:
            print(f"  {v}")
        ok &= res.passed
    print("all lemma checks pass" if ok else "some lemma checks failed")
    return OK if ok else FALSE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sukit", description="Strong-union intermediate logic toolkit")
    p.add_argument("--upset-cap", type=_positive, default=None,
                   help="maximum number of upsets enumerated per frame (default: SU_KIT_CAP_UPSETS or 2^20)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("parse", help="parse a formula and print it canonically")
    s.add_argument("formula")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("validate", help="decide frame validity of a formula")
    s.add_argument("frame")
    s.add_argument("formula")
    s.set_defaults(func=cmd_validate)

    for name, fn, text in (("su2", cmd_su2, "check (su2)"), ("uni", cmd_uni, "check (Uni)")):
        s = sub.add_parser(name, help=text)
        s.add_argument("frame")
        s.set_defaults(func=fn)

    s = sub.add_parser("medvedev", help="emit the Medvedev frame on k elements")
    s.add_argument("--size", type=_positive, required=True)
    s.add_argument("--name")
    s.add_argument("--output")
    s.set_defaults(func=cmd_medvedev)

    s = sub.add_parser("star", help="check the subset union property on k elements")
    s.add_argument("--size", type=_positive, required=True)
    s.set_defaults(func=cmd_star)

    s = sub.add_parser("product", help="emit the connected product of two frames")
    s.add_argument("frame1")
    s.add_argument("frame2")
    s.add_argument("--name", default="product")
    s.add_argument("--output")
    s.set_defaults(func=cmd_product)

    s = sub.add_parser("prove", help="search for a proof of a sequent")
    s.add_argument("--logic", choices=("ipc", "su"), default="ipc")
    s.add_argument("--depth", type=_nonnegative, default=1)
    s.add_argument("--instance-cap", type=_positive, default=10**5)
    s.add_argument("--quiet", action="store_true", help="print only the outcome")
    s.add_argument("sequent")
    s.set_defaults(func=cmd_prove)

    s = sub.add_parser("countermodel", help="search for a countermodel")
    s.add_argument("--max-points", type=_positive, default=4)
    s.add_argument("--logic", choices=("ipc", "su"), default="su")
    s.add_argument("--random-frames", type=_nonnegative, default=0)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--name", default="countermodel")
    s.add_argument("--output")
    s.add_argument("formula")
    s.set_defaults(func=cmd_countermodel)

    s = sub.add_parser("dp-witness", help="glue two countermodels under a common root")
    s.add_argument("model1")
    s.add_argument("model2")
    s.add_argument("alpha")
    s.add_argument("beta")
    s.add_argument("--rename-apart", action="store_true")
    s.add_argument("--name", default="dpwitness")
    s.add_argument("--output")
    s.set_defaults(func=cmd_dp_witness)

    s = sub.add_parser("correspondence", help="compare su validity with (su2) on many frames")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--enumerate", type=_positive, metavar="N")
    g.add_argument("--random", type=_positive, metavar="K")
    s.add_argument("--points", type=_positive)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--report", action="store_true", help="print one property line per frame")
    s.set_defaults(func=cmd_correspondence)

    s = sub.add_parser("verify-lemmas", help="run every lemma and property suite")
    s.add_argument("--max-points", type=_positive, default=5)
    s.add_argument("--product-points", type=_positive, default=3)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.set_defaults(func=cmd_verify_lemmas)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except (FrameFormatError, NotS4Error, ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except CapExceededError as exc:
        print(f"inconclusive: {exc}")
        return INCONCLUSIVE


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
