"""Named test data and a seeded generator of random reduced Steiner data over F_p."""

from __future__ import annotations

import random

from .linalg import FieldSpec, Matrix
from .schwarzenberger import binary_mult_datum, full_segre_datum, scroll_datum, veronese_datum
from .steiner import SteinerDatum, VarietyProbe, pad_zero_columns, validate
from .tensor import subspaces


def corpus(field: FieldSpec = FieldSpec(0)) -> list:
    """Binary (a, n) for 1 <= a, n <= 3, the full Segre, Veronese and scroll data."""
    data = [binary_mult_datum(a, n, field) for a in range(1, 4) for n in range(1, 4)]
    data.append(full_segre_datum(2, 3, 1, field))
    data.append(veronese_datum(field))
    data.append(scroll_datum((1, 1), 1, field))
    return data


def padded_variants(datum: SteinerDatum, max_pad: int = 2) -> list:
    return [pad_zero_columns(datum, k) for k in range(1, max_pad + 1)]


def grassmannian_probe(field: FieldSpec, f0: int, h0: int) -> VarietyProbe:
    """X = G(f0, h0) itself, sampled at every F_p-point."""
    quotients = tuple(Matrix(field, f0, h0, rows) for rows in subspaces(h0, f0, field.p))
    g = f0 * (h0 - f0)
    return VarietyProbe(g, g, True, quotients)


def random_reduced_datum(rng: random.Random, p: int, max_tries: int = 200) -> SteinerDatum:
    """A random injective phi over F_p that is Steiner at every F_p-point of
    the Grassmannian G(f0, h0), which plays the role of X.

    s > f0 keeps dim X = f0 (h0 - f0) below s·rk(Q), outside the trivial
    range; t is drawn from [s·f0 + dim G, s·h0], as the rank bound requires.
    """
    field = FieldSpec(p)
    for _ in range(max_tries):
        f0 = rng.choice((1, 1, 2))
        h0 = rng.randint(f0 + 1, 4)
        s = rng.randint(f0 + 1, 3)
        g = f0 * (h0 - f0)
        t = rng.randint(s * f0 + g, s * h0)
        rows = [[rng.randrange(p) for _ in range(t)] for _ in range(s * h0)]
        phi = Matrix(field, s * h0, t, tuple(tuple(r) for r in rows))
        if phi.rank != t:
            continue
        probe = grassmannian_probe(field, f0, h0)
        datum = SteinerDatum(field, s, t, f0, h0, phi, probe, f"random(F{p},s={s},t={t},f0={f0},h0={h0})")
        if validate(datum).accepted:
            return datum
    raise RuntimeError("no valid random datum found")


def random_corpus(seed: int = 20240601, count: int = 50, primes=(3, 5)) -> list:
    rng = random.Random(seed)
    out = []
    for k in range(count):
        d = random_reduced_datum(rng, primes[k % len(primes)])
        out.append(SteinerDatum(d.field, d.s, d.t, d.f0, d.h0, d.phi, d.probe, f"{d.label}#{k}"))
    return out
