"""
construct -> validate -> reduce -> locus -> tangent -> classify, driven by a
JSON config, with every intermediate result written as canonical JSON.

Config keys::

    {"seed": 0, "primes": [2, 3, 5], "witnesses": 8,
     "data": [{"family": "binary", "a": 1, "n": 2, "field": "Q"},
              {"family": "segre", "s": 2, "h0": 3, "f0": 1, "pad": 1},
              {"family": "random", "p": 3, "seed": 7},
              {"datum": "path/to/datum.json"}]}

Relative datum paths are resolved against the config file's directory.
"""

from __future__ import annotations

import logging
import random
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .linalg import FieldSpec
from .jumping import (BadPrimeError, DEFAULT_PRIMES, JLimits, LimitExceeded, enumerate_locus,
                      estimate_dimension, lower_bound, reduce_mod)
from .reports import RunManifest, export_report, read_json, write_json
from .schwarzenberger import (MultiplicationTensor, binary_mult_datum, full_segre_datum,
                              generic_schwarzenberger_datum, point_probe, scroll_datum, veronese_datum)
from .steiner import DatumError, SteinerDatum, VarietyProbe, pad_zero_columns, reduce, validate
from .tangent import ClassificationVerdict, classify_maximal, tangent_dimension, upper_bound

log = logging.getLogger(__name__)

STAGES = ("config", "construct", "validate", "reduce", "locus", "tangent", "classify")
EXIT_CODES = {stage: 2 + k for k, stage in enumerate(STAGES)}  # config=2 ... classify=8

class PipelineError(RuntimeError):
    def __init__(self, stage: str, message: str, witness=None):
        super().__init__(f"[{stage}] {message}" + (f" (witness: {witness})" if witness is not None else ""))
        self.stage = stage
        self.witness = witness

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.stage]


def construct(entry: dict, base: Path = Path(".")) -> SteinerDatum:
    """Build a datum from one config entry (a named family or a datum file).

    Reading a datum file is left to the validate stage, so a corrupted file
    is reported there; this returns None for file entries.
    """
    if "datum" in entry:
        return None
    family = entry.get("family")
    field = FieldSpec.parse(str(entry.get("field", "Q")))
    if family == "binary":
        d = binary_mult_datum(int(entry["a"]), int(entry["n"]), field)
    elif family == "veronese":
        d = veronese_datum(field)
    elif family == "scroll":
        d = scroll_datum(tuple(int(x) for x in entry.get("degrees", (1, 1))), int(entry.get("n", 1)), field)
    elif family == "segre":
        d = full_segre_datum(int(entry["s"]), int(entry["h0"]), int(entry.get("f0", 1)), field,
                             entry.get("dim_x"))
    elif family == "tensor":
        obj = read_json(base / entry["tensor"])
        m = MultiplicationTensor.from_json(obj, field)
        f0 = int(entry.get("f0", 1))
        probe = point_probe(field, int(entry["n"])) if "n" in entry else VarietyProbe.from_json(entry["probe"])
        d = generic_schwarzenberger_datum(m, f0, probe, label=entry.get("label", "tensor"))
    elif family == "random":
        from .corpus import random_reduced_datum
        if "seed" not in entry:
            raise DatumError("random data need an explicit seed")
        d = random_reduced_datum(random.Random(int(entry["seed"])), int(entry["p"]))
    else:
        raise DatumError(f"unknown family {family!r}")
    pad = int(entry.get("pad", 0))
    return pad_zero_columns(d, pad) if pad else d


def load_datum(path) -> SteinerDatum:
    try:
        return SteinerDatum.from_json(read_json(path))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise PipelineError("validate", f"cannot read datum {path}: {exc}") from exc


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "-", text).strip("-").lower() or "datum"


@dataclass
class PipelineResult:
    rows: list
    out_dir: Path
    manifest: RunManifest


def run_datum(datum: SteinerDatum, out: Path, primes, witnesses: int, workers: Optional[int],
              limits: Optional[JLimits] = None) -> dict:
    write_json(out / "datum.json", datum)

    rep = validate(datum)
    write_json(out / "validation.json", rep)
    if not rep.accepted:
        bad = rep.failures
        witness = datum.probe.sample_quotients[bad[0]].to_json()["entries"] if bad else None
        raise PipelineError("validate", f"{datum.label}: " + ("; ".join(rep.problems) or
                            f"fiber map not surjective at sample {bad[0]}"), witness)

    try:
        red = reduce(datum)
    except DatumError as exc:
        raise PipelineError("reduce", f"{datum.label}: {exc}") from exc
    write_json(out / "reduced.json", {"p": str(red.p), "kernel": red.kernel_basis.to_json(),
                                      "datum": red.reduced.to_json()})
    rd = red.reduced

    qs = list(primes) if datum.field.is_rational else [datum.field.p]
    loci, skipped = [], []
    for q in qs:
        try:
            loci.append(enumerate_locus(rd, q, witnesses=witnesses, workers=workers))
        except BadPrimeError as exc:
            skipped.append([str(q), str(exc)])
    if not loci or (datum.field.is_rational and len(loci) < 2):
        raise PipelineError("locus", f"{datum.label}: not enough good primes", skipped)
    for r in loci:
        write_json(out / f"locus_q{r.q}.json", r)
    est = estimate_dimension(rd, [r.q for r in loci], reports={r.q: r for r in loci})
    write_json(out / "estimate.json", est)

    tangents = []
    try:
        for r in loci:
            dq = reduce_mod(rd, r.q)
            for pair in r.sample_pairs:
                tangents.append(tangent_dimension(dq, pair, strict=True, estimated_dim=est.estimated_dim))
    except DatumError as exc:
        raise PipelineError("tangent", f"{datum.label}: {exc}") from exc
    write_json(out / "tangents.json", tangents)

    try:
        if len(loci) >= 2:
            verdict = classify_maximal(rd, loci, tangents, limits)
        else:
            verdict = ClassificationVerdict("Unclassified", {"reason": "a single prime is available"}, "")
    except (DatumError, LimitExceeded) as exc:
        raise PipelineError("classify", f"{datum.label}: {exc}") from exc
    write_json(out / "verdict.json", verdict)
    export_report(verdict, "markdown", out / "verdict.md")

    return {"label": datum.label, "field": datum.field.name, "t": datum.t, "t0": datum.t0,
            "lower_bound": lower_bound(rd), "estimated_dim": est.estimated_dim,
            "consistent": est.consistent, "upper_bound": upper_bound(rd),
            "max_tangent_dim": max((t.tangent_dim for t in tangents), default=None),
            "verdict": verdict.case}


def run_pipeline(config, out_dir, workers: Optional[int] = None) -> PipelineResult:
    """Run every configured datum through all stages.

    ``config`` is a path or an already-loaded dict.  Raises PipelineError on
    the first failing stage; its ``exit_code`` identifies the stage.
    """
    out_dir = Path(out_dir)
    manifest = RunManifest("pipeline")
    if isinstance(config, (str, Path)):
        base = Path(config).parent
        try:
            cfg = read_json(config)
        except (OSError, ValueError) as exc:
            raise PipelineError("config", f"cannot read config {config}: {exc}") from exc
        manifest.add_input(config)
    else:
        base, cfg = Path("."), dict(config)
    if not isinstance(cfg, dict) or not isinstance(cfg.get("data"), list):
        raise PipelineError("config", "config must be an object with a 'data' list")
    manifest.seed = int(cfg.get("seed", 0))
    primes = [int(q) for q in cfg.get("primes", DEFAULT_PRIMES)]
    witnesses = int(cfg.get("witnesses", 8))
    lim = cfg.get("limits", {})
    limits = JLimits(**{k: int(v) for k, v in lim.items()})

    rows = []
    for k, entry in enumerate(cfg["data"]):
        try:
            datum = construct(entry, base)
        except (DatumError, ValueError, KeyError, OSError) as exc:
            raise PipelineError("construct", f"entry {k}: {exc}", entry) from exc
        if datum is None:
            path = base / entry["datum"]
            datum = load_datum(path)
            manifest.add_input(path, entry["datum"])
        sub = out_dir / f"{k:02d}-{_slug(datum.label)}"
        log.info("running %s", datum.label)
        rows.append(run_datum(datum, sub, primes, witnesses, workers, limits))

    write_json(out_dir / "summary.json", rows)
    export_report(rows, "csv", out_dir / "summary.csv")
    export_report(rows, "markdown", out_dir / "summary.md")
    for p in sorted(out_dir.rglob("*")):
        if p.is_file() and p.name != "manifest.json":
            manifest.add_output(p, out_dir)
    write_json(out_dir / "manifest.json", manifest)
    return PipelineResult(rows, out_dir, manifest)
