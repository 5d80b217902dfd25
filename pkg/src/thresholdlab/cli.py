"""Command-line entry point: ``thresholdlab {pc,q,verify,process,lemma31,kk}``.

Exit codes: 0 success/valid, 1 invalid certificate or failed check,
2 degenerate family, 3 infeasible schedule, 4 malformed input, 5 budget exceeded.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import documents as docs
from .cover import certificate_status, q_exact
from .errors import MalformedInput, ThresholdLabError
from .experiments import DEFAULT_CORPUS, FAMILIES, InstanceSpec, KKConfig, generate, run_kk_report
from .fragments import build_schedule, empirical_lemma31, lemma31_table, run_process, verify_transcript
from .hypergraph import Hypergraph, members
from .logspace import safe_exp
from .measures import MC_TRIALS, p_c_search
from .rng import RandomSeed

log = logging.getLogger("thresholdlab")
fmt = docs.fmt


def load_instance(source: str, ground: int | None = None) -> Hypergraph:
    """Generator spec like ``triangles:v=4`` or a path to a hypergraph document."""
    family = source.partition(":")[0]
    if family in FAMILIES and not Path(source).exists():
        h = generate(InstanceSpec.parse(source))
    else:
        h = docs.hypergraph_from_doc(docs.load(source))
    if ground is not None:
        if ground < h.n:
            raise MalformedInput(f"--ground {ground} is smaller than the instance's n={h.n}")
        h = Hypergraph.from_masks(ground, h.edges)
    return h


def _seed(args) -> RandomSeed:
    if args.seed is None:
        seed = RandomSeed.fresh()
        log.warning("no --seed given; using generated seed %d", seed.master)
        return seed
    return RandomSeed(args.seed)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_pc(args) -> int:
    h = load_instance(args.instance, args.ground)
    seed = _seed(args) if args.mode == "mc" else None
    r = p_c_search(h, args.mode, args.tol, seed, trials=args.trials)
    print(f"p_c\t{fmt(r.p)}")
    print(f"residual\t{fmt(r.residual)}")
    if r.estimate.trials:
        print(f"half_width\t{fmt(r.estimate.half_width)}\ttrials\t{r.estimate.trials}\tseed\t{seed.master}")
    if r.approximate:
        print("approximate\t1")
    return 0


def cmd_q(args) -> int:
    h = load_instance(args.instance, args.ground)
    r = q_exact(h, args.tol)
    print(f"q\t{fmt(r.q)}")
    print(f"witness\t{[members(s) for s in r.witness.sets]}\tcost\t{fmt(r.witness.cost)}")
    if args.out:
        docs.dump(docs.qresult_to_doc(r), args.out)
    if args.certificate_out:
        docs.dump(docs.certificate_to_doc(r.witness), args.certificate_out)
    return 0


def cmd_verify(args) -> int:
    h = load_instance(args.instance, args.ground)
    doc = docs.load(args.certificate)
    cert = docs.certificate_from_doc(doc.get("witness", doc) if isinstance(doc, dict) else doc)
    status, missed = certificate_status(cert, h)
    if missed is not None:
        print(f"{status}\tuncovered_edge\t{members(missed)}")
    else:
        print(f"{status}\tcost\t{fmt(cert.cost)}")
    return 0 if status == "VALID" else 1


def _replay(path: str) -> int:
    tr = docs.transcript_from_doc(docs.load(path))
    problems = verify_transcript(tr)
    for msg in problems:
        print(f"VIOLATION\t{msg}")
    print(f"replay\t{'OK' if not problems else 'FAILED'}\trounds\t{tr.i_max}\tsuccess\t{int(tr.terminated_successfully)}")
    return 0 if not problems else 1


def cmd_process(args) -> int:
    if args.replay:
        return _replay(args.replay)
    if args.instance is None or args.p is None:
        raise MalformedInput("process needs --instance and --p (or --replay FILE)")
    h = load_instance(args.instance, args.ground)
    schedule = build_schedule(args.L, args.ell or h.ell_bound, args.p, h.n, args.exploratory)
    seed = _seed(args)
    transcripts = [run_process(h, schedule, seed.child(seed.stream + k)) for k in range(args.runs)]
    for tr in transcripts:
        print(
            f"seed\t{tr.seed.master}/{tr.seed.stream}\ti_max\t{tr.i_max}\tgamma\t{schedule.gamma}"
            f"\tsuccess\t{int(tr.terminated_successfully)}\tcover_size\t{len(tr.assembled_cover)}"
        )
    if args.out:
        if len(transcripts) == 1:
            docs.dump(docs.transcript_to_doc(transcripts[0]), args.out)
        else:
            out = Path(args.out)
            for tr in transcripts:
                docs.dump(docs.transcript_to_doc(tr), out.with_name(f"{out.stem}-{tr.seed.stream}{out.suffix}"))
    if args.csv:
        Path(args.csv).write_text(docs.to_csv(docs.round_rows(transcripts), docs.ROUND_COLUMNS))
    if args.plot_dir:
        from .plotting import plot_round_costs

        Path(args.plot_dir).mkdir(parents=True, exist_ok=True)
        plot_round_costs(transcripts, Path(args.plot_dir) / "round_costs.png")
    bad = [tr for tr in transcripts if verify_transcript(tr)]
    return 1 if bad else 0


def cmd_lemma31(args) -> int:
    h = load_instance(args.instance, args.ground)
    table = lemma31_table(h, args.p, args.L)
    print(f"n\t{table.n}\tw\t{table.w}\tell\t{table.ell}\tL\t{fmt(table.L)}\tp\t{fmt(table.p)}")
    print("m\tpairs\tlhs\trhs_step\tholds")
    for row in table.good_rows():
        print(f"{row.m}\t{row.pairs}\t{fmt(row.lhs)}\t{fmt(row.rhs_step)}\t{int(row.holds)}")
    print(f"total\t\t{fmt(safe_exp(table.log_lhs_total))}\t{fmt(table.rhs_total)}\t{int(table.total_holds)}")
    ok = all(r.holds for r in table.good_rows()) and (table.L < 1024 or table.total_holds)
    if args.trials:
        sample = empirical_lemma31(h, args.p, args.L, args.trials, _seed(args))
        print(f"exact_mean_cost\t{fmt(table.mean_cost)}")
        print(f"sampled_mean_cost\t{fmt(sample.mean_cost)}\thalf_width\t{fmt(sample.mean_half_width)}")
        print(f"fail_rate\t{fmt(sample.fail_rate)}\tfail_bound\t{fmt(sample.fail_bound)}")
    return 0 if ok else 1


def read_corpus(path: str) -> list[InstanceSpec]:
    specs = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            specs.append(InstanceSpec.parse(line))
        except MalformedInput as exc:
            raise MalformedInput(f"{path}:{lineno}: {exc}") from None
    return specs


def cmd_kk(args) -> int:
    specs = read_corpus(args.corpus) if args.corpus else list(DEFAULT_CORPUS)
    config = KKConfig(
        tol=args.tol,
        seeds=args.seeds,
        master_seed=_seed(args).master,
        L=args.L,
        exploratory=args.exploratory,
        extra_ps=tuple(args.p or ()),
    )
    reports = [run_kk_report(s, config=config) for s in specs]
    _emit(docs.to_csv(docs.kk_rows(reports), docs.KK_COLUMNS), args.out)
    if args.json:
        docs.dump({"reports": [docs.kk_report_to_doc(r) for r in reports]}, args.json)
    if args.plot_dir:
        from .plotting import plot_kk

        Path(args.plot_dir).mkdir(parents=True, exist_ok=True)
        plot_kk(reports, Path(args.plot_dir) / "q_vs_pc.png")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thresholdlab", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, instance_required=True):
        p.add_argument("--instance", required=instance_required, help="generator spec (family:key=v,...) or document path")
        p.add_argument("--ground", type=int, help="embed the instance in a ground set of this size")
        p.add_argument("--seed", type=int)
        p.add_argument("--out")

    p = sub.add_parser("pc", help="threshold p_c by bisection")
    common(p)
    p.add_argument("--mode", choices=["exact", "mc"], default="exact")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--trials", type=int, default=MC_TRIALS)
    p.set_defaults(func=cmd_pc)

    p = sub.add_parser("q", help="expectation threshold q with a witness cover")
    common(p)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--certificate-out")
    p.set_defaults(func=cmd_q)

    p = sub.add_parser("verify", help="check a cover certificate against an instance")
    common(p)
    p.add_argument("--certificate", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("process", help="run or replay the random cover-construction process")
    common(p, instance_required=False)
    p.add_argument("--p", type=float)
    p.add_argument("--L", type=float, default=1024)
    p.add_argument("--ell", type=int, help="size bound (defaults to the largest edge)")
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--exploratory", action="store_true", help="allow L < 1024 or ell < 2")
    p.add_argument("--replay", help="re-verify a transcript document instead of running")
    p.add_argument("--csv", help="write per-round cost rows here")
    p.add_argument("--plot-dir")
    p.set_defaults(func=cmd_process)

    p = sub.add_parser("lemma31", help="exact fragment-counting table over all W")
    common(p)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--L", type=float, default=1024)
    p.add_argument("--trials", type=int, default=0)
    p.set_defaults(func=cmd_lemma31)

    p = sub.add_parser("kk", help="q, p_c and process statistics over a corpus")
    p.add_argument("--corpus", help="file with one generator spec per line")
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--L", type=float, default=1024)
    p.add_argument("--p", type=float, action="append", help="extra p at which to run the process")
    p.add_argument("--exploratory", action="store_true")
    p.add_argument("--out", help="CSV path (stdout if omitted)")
    p.add_argument("--json")
    p.add_argument("--plot-dir")
    p.set_defaults(func=cmd_kk)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ThresholdLabError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"MalformedInput: {exc}", file=sys.stderr)
        return MalformedInput.exit_code


if __name__ == "__main__":
    sys.exit(main())
