"""steinerlab command line: construct, validate, reduce, locus, tangent, classify, pipeline, acceptance."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .jumping import (BadPrimeError, JumpingPair, LocusReport, enumerate_locus, estimate_dimension,
                      reduce_mod)
from .linalg import FieldSpec
from .pipeline import EXIT_CODES, PipelineError, construct, load_datum, run_pipeline
from .reports import FORMATS, export_report, read_json, write_json
from .steiner import DatumError, reduce, validate
from .tangent import TangentReport, classify_maximal, tangent_dimension

log = logging.getLogger("steinerlab")


def _emit(obj, out, fmt="json"):
    text = export_report(obj, fmt, out)
    if out is None:
        sys.stdout.write(text)


def _primes(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad prime list {text!r}")


def cmd_construct(a) -> int:
    entry = {"family": a.family, "field": a.field}
    for key in ("a", "n", "s", "h0", "f0", "dim_x", "pad", "p", "seed", "tensor"):
        v = getattr(a, key)
        if v is not None:
            entry[key] = v
    if a.degrees:
        entry["degrees"] = [int(x) for x in a.degrees.split(",")]
    try:
        datum = construct(entry)
    except (DatumError, KeyError, ValueError) as exc:
        raise PipelineError("construct", str(exc)) from exc
    _emit(datum, a.out)
    return 0


def cmd_validate(a) -> int:
    datum = load_datum(a.datum)
    rep = validate(datum)
    _emit(rep, a.out)
    if not rep.accepted:
        log.error("validation failed: %s", "; ".join(rep.problems) or f"samples {rep.failures}")
        return EXIT_CODES["validate"]
    return 0


def cmd_reduce(a) -> int:
    red = reduce(load_datum(a.datum))
    log.info("split off %d trivial summands", red.p)
    _emit(red.reduced, a.out)
    return 0


def cmd_locus(a) -> int:
    datum = load_datum(a.datum)
    try:
        reports = [enumerate_locus(datum, q, witnesses=a.witnesses, workers=a.threads,
                                   with_j_image=a.j_image) for q in a.primes]
    except BadPrimeError as exc:
        raise PipelineError("locus", str(exc), exc.entry) from exc
    if len(reports) == 1:
        _emit(reports[0], a.out, a.format)
        return 0
    if a.out is None:
        for r in reports:
            _emit(r, None, a.format)
    else:
        out = Path(a.out)
        suffix = {"json": ".json", "csv": ".csv", "markdown": ".md"}[a.format]
        for r in reports:
            export_report(r, a.format, out.with_name(f"{out.stem}_q{r.q}{suffix}"))
    if len(reports) >= 2 or not datum.field.is_rational:
        est = estimate_dimension(reduce(datum).reduced, a.primes, reports={r.q: r for r in reports})
        log.info("estimated dim %d (consistent: %s)", est.estimated_dim, est.consistent)
    return 0


def _pairs(obj) -> list:
    if "sample_pairs" in obj:
        field = FieldSpec(int(obj["q"]))
        return [JumpingPair.from_json(p, field) for p in obj["sample_pairs"]]
    if isinstance(obj, list):
        return [JumpingPair.from_json(p) for p in obj]
    return [JumpingPair.from_json(obj)]


def cmd_tangent(a) -> int:
    datum = reduce(load_datum(a.datum)).reduced
    out = []
    try:
        for pair in _pairs(read_json(a.pair)):
            field = pair.gamma.field
            d = datum if field == datum.field else reduce_mod(datum, field.p)
            out.append(tangent_dimension(d, pair, strict=True, seed=a.seed))
    except DatumError as exc:
        raise PipelineError("tangent", str(exc)) from exc
    _emit(out if len(out) != 1 else out[0], a.out, a.format)
    return 0


def cmd_classify(a) -> int:
    datum = reduce(load_datum(a.datum)).reduced
    loci = [LocusReport.from_json(read_json(p)) for p in a.locus.split(",") if p]
    tangents = []
    if a.tangents:
        obj = read_json(a.tangents)
        tangents = [TangentReport.from_json(t) for t in (obj if isinstance(obj, list) else [obj])]
    try:
        verdict = classify_maximal(datum, loci, tangents)
    except DatumError as exc:
        raise PipelineError("classify", str(exc)) from exc
    _emit(verdict, a.out, a.format)
    return 0


def cmd_pipeline(a) -> int:
    res = run_pipeline(a.config, a.out, workers=a.threads)
    sys.stdout.write(export_report(res.rows, "markdown"))
    return 0


def cmd_acceptance(a) -> int:
    from .acceptance import reproduce_acceptance
    return reproduce_acceptance(a.filter, a.golden, a.write_golden)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="steinerlab", description=__doc__)
    p.add_argument("--version", action="version", version=f"steinerlab {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a datum from a named family")
    c.add_argument("--family", required=True,
                   choices=["binary", "veronese", "scroll", "segre", "tensor", "random"])
    c.add_argument("--field", default="Q")
    c.add_argument("--a", type=int)
    c.add_argument("--n", type=int)
    c.add_argument("--s", type=int)
    c.add_argument("--h0", type=int)
    c.add_argument("--f0", type=int)
    c.add_argument("--dim-x", dest="dim_x", type=int)
    c.add_argument("--degrees", help="scroll degrees, e.g. 1,1")
    c.add_argument("--pad", type=int, help="append this many zero columns")
    c.add_argument("--p", type=int, help="prime for --family random")
    c.add_argument("--seed", type=int, help="seed for --family random (required there)")
    c.add_argument("--tensor", help="multiplication tensor JSON for --family tensor")
    c.add_argument("--out")
    c.set_defaults(func=cmd_construct)

    for name, func, help_ in (("validate", cmd_validate, "check the probe sample points"),
                              ("reduce", cmd_reduce, "drop the trivial summand")):
        c = sub.add_parser(name, help=help_)
        c.add_argument("--datum", required=True)
        c.add_argument("--out")
        c.set_defaults(func=func)

    c = sub.add_parser("locus", help="enumerate jumping pairs over finite fields")
    c.add_argument("--datum", required=True)
    c.add_argument("--primes", type=_primes, default=[2, 3, 5])
    c.add_argument("--witnesses", type=int, default=8)
    c.add_argument("--j-image", action="store_true", help="also count distinct Γ")
    c.add_argument("--threads", type=int, default=None)
    c.add_argument("--format", choices=FORMATS, default="json")
    c.add_argument("--out", help="output file; with several primes _q<p> is added to the name")
    c.set_defaults(func=cmd_locus)

    c = sub.add_parser("tangent", help="tangent space dimension at jumping pairs")
    c.add_argument("--datum", required=True)
    c.add_argument("--pair", required=True, help="pair JSON, list of pairs, or a locus report")
    c.add_argument("--seed", type=int, default=None)
    c.add_argument("--format", choices=FORMATS, default="json")
    c.add_argument("--out")
    c.set_defaults(func=cmd_tangent)

    c = sub.add_parser("classify", help="classify a locus of maximal dimension")
    c.add_argument("--datum", required=True)
    c.add_argument("--locus", required=True, help="comma-separated locus report files")
    c.add_argument("--tangents")
    c.add_argument("--format", choices=FORMATS, default="json")
    c.add_argument("--out")
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("pipeline", help="run all stages from a config file")
    c.add_argument("config")
    c.add_argument("--out", required=True)
    c.add_argument("--threads", type=int, default=None)
    c.set_defaults(func=cmd_pipeline)

    c = sub.add_parser("acceptance", help="run the acceptance criteria")
    c.add_argument("--filter", help="criterion ids or tags, comma separated (e.g. classical)")
    c.add_argument("--golden", help="JSON file of expected records to compare against")
    c.add_argument("--write-golden", dest="write_golden", help="write the actual records here")
    c.set_defaults(func=cmd_acceptance)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except DatumError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
