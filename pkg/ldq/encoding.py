"""
Canonical text encodings of triples, triple sets, valuations and solution
sets. Equal inputs always produce byte-identical text; this is the format of
the golden files.
"""
from __future__ import annotations

from typing import Iterable, Mapping

from .rdf import Triple, sorted_triples


def enc_triple(t: Triple) -> str:
    return f"⟨ {t.s} , {t.p} , {t.o} ⟩"


def enc_triple_set(triples: Iterable[Triple]) -> str:
    members = [enc_triple(t) for t in sorted_triples(set(triples))]
    if not members:
        return "⟨⟨ ⟩⟩"
    return "⟨⟨ " + " , ".join(members) + " ⟩⟩"


def enc_valuation(mu: Mapping) -> str:
    pairs = [f"{var} → {mu[var]}" for var in sorted(mu, key=lambda v: v.name)]
    if not pairs:
        return "⟨⟨ ⟩⟩"
    return "⟨⟨ " + " , ".join(pairs) + " ⟩⟩"


def sorted_valuations(solutions: Iterable[Mapping]) -> list:
    return sorted(solutions, key=enc_valuation)


def enc_solution_set(solutions: Iterable[Mapping]) -> str:
    return "".join(line + "\n" for line in sorted(enc_valuation(mu) for mu in solutions))
