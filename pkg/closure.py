"""
Cn-symmetric constant distance closure and the proper-flex verdict.

A pair {u, v} of non-adjacent vertices is a U-pair when every Cn-symmetric
NAC-colouring puts u and v in a common red or a common blue component. The
closure adds all U-pairs (orbit-wholesale) until none remain; a complete
closure certifies that no proper Cn-symmetric flexible placement exists.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import FrozenSet, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

import metrics
from formats import ClosureReportDocument, ClosureRoundDocument
from graph_core import Edge, SymmetricGraph, canonical_edge, edge_sort_key
from logging_setup import get_logger
from motion import check_proper_conditions
from nac import Colour, EdgeColouring, colour_labels
from settings import settings
from symmetry_nac import enumerate_cn_symmetric_nac

logger = get_logger(__name__)


class Verdict(str, Enum):
    NO_PROPER_PLACEMENT = "NO_PROPER_PLACEMENT"
    PROPER_PLACEMENT_EXISTS = "PROPER_PLACEMENT_EXISTS"
    UNDECIDED = "UNDECIDED"


class ClosureRound(BaseModel):
    """One closure step: the U-set found and the ω-orbits added for it."""

    u_pairs: Tuple[Edge, ...]
    orbits: Tuple[Tuple[Edge, ...], ...]

    @property
    def added(self) -> Tuple[Edge, ...]:
        return tuple(sorted((e for orbit in self.orbits for e in orbit), key=edge_sort_key))


class ClosureResult(BaseModel):
    closure_graph: SymmetricGraph
    rounds: List[ClosureRound] = Field(default_factory=list)
    complete: bool
    degenerate_pairs: Tuple[Edge, ...] = ()

    def to_document(self, verdict: Verdict) -> ClosureReportDocument:
        return ClosureReportDocument(
            complete=self.complete,
            rounds=[ClosureRoundDocument(added=[list(e) for e in r.added]) for r in self.rounds],
            degenerate_pairs=[list(e) for e in self.degenerate_pairs],
            verdict=verdict.value,
        )


def same_component_relation(g: SymmetricGraph, c: EdgeColouring) -> np.ndarray:
    """(u, v) -> u and v share a red or a blue component of c."""
    red = colour_labels(g, c, Colour.RED)
    blue = colour_labels(g, c, Colour.BLUE)
    return (red[:, None] == red[None, :]) | (blue[:, None] == blue[None, :])


def u_pairs(
    g: SymmetricGraph,
    max_orbits: Optional[int] = None,
    workers: Optional[int] = None,
) -> FrozenSet[Edge]:
    """Non-adjacent pairs joined by a path monochromatic in every Cn-symmetric NAC-colouring.

    With no such colouring the condition is vacuous and every non-adjacent
    pair is returned.
    """
    # conjugation swaps red and blue components, leaving the relation unchanged
    colourings = enumerate_cn_symmetric_nac(g, up_to_conjugation=True, max_orbits=max_orbits, workers=workers)
    relation = np.ones((g.order, g.order), dtype=bool)
    workers = settings.threads if workers is None else max(1, workers)
    if colourings:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            relations = list(pool.map(lambda c: same_component_relation(g, c), colourings))
        relation = np.logical_and.reduce(relations)
    relation &= ~g.adjacency
    relation = np.triu(relation, 1)
    return frozenset(canonical_edge(g.vertices[i], g.vertices[j]) for i, j in np.argwhere(relation))


def constant_distance_closure(
    g: SymmetricGraph,
    max_orbits: Optional[int] = None,
    workers: Optional[int] = None,
) -> ClosureResult:
    """Iterate G_i = G_{i-1} + U(G_{i-1}) to the fixpoint.

    Pairs of two invariant vertices cannot become edges of a Cn-symmetric
    graph; they are collected in degenerate_pairs and skipped.
    """
    current = g
    rounds: List[ClosureRound] = []
    degenerate: set = set()
    invariant = set(g.invariant_vertices)
    limit = max(1, g.order ** 2)

    with metrics.timed("closure"):
        while True:
            pairs = u_pairs(current, max_orbits=max_orbits, workers=workers)
            bad = {p for p in pairs if p[0] in invariant and p[1] in invariant}
            degenerate |= bad
            addable = pairs - bad
            if not addable:
                break
            if len(rounds) >= limit:
                raise RuntimeError(f"closure did not terminate within {limit} rounds")

            orbits = []
            covered: set = set()
            for pair in sorted(addable, key=edge_sort_key):
                if pair in covered:
                    continue
                orbit = current.orbit_of_pair(*pair)
                covered |= orbit
                orbits.append(tuple(sorted(orbit, key=edge_sort_key)))
            rounds.append(ClosureRound(u_pairs=tuple(sorted(pairs, key=edge_sort_key)), orbits=tuple(orbits)))
            current = current.with_edges(covered)
            metrics.CLOSURE_ROUNDS.inc()
            logger.info("closure round", round=len(rounds), added=len(covered), edges=current.size)

    result = ClosureResult(
        closure_graph=current,
        rounds=rounds,
        complete=current.is_complete(),
        degenerate_pairs=tuple(sorted(degenerate, key=edge_sort_key)),
    )
    logger.info("closure finished", rounds=len(rounds), complete=result.complete, degenerate=len(degenerate))
    return result


def extend_colouring(g: SymmetricGraph, extended: SymmetricGraph, c: EdgeColouring) -> EdgeColouring:
    """Colour each new edge uv by the colour of a monochromatic uv-path in c."""
    red = colour_labels(g, c, Colour.RED)
    red_edges = list(c.red)
    for u, v in extended.edges:
        if (u, v) in g.edge_index:
            continue
        if red[g.index[u]] == red[g.index[v]]:
            red_edges.append((u, v))
    return EdgeColouring.from_red_edges(extended, red_edges)


class ProperVerdict(BaseModel):
    verdict: Verdict
    reason: str
    closure: ClosureResult
    colouring: Optional[EdgeColouring] = None
    on_closure: bool = False


def proper_flex_verdict(
    g: SymmetricGraph,
    max_orbits: Optional[int] = None,
    workers: Optional[int] = None,
) -> ProperVerdict:
    """Decide proper Cn-symmetric flexibility where a certificate exists.

    NO_PROPER_PLACEMENT when the closure is complete or a degenerate pair of
    invariant vertices appears; PROPER_PLACEMENT_EXISTS when a Cn-symmetric
    NAC-colouring of G or of its closure meets the proper conditions;
    UNDECIDED otherwise.
    """
    closure = constant_distance_closure(g, max_orbits=max_orbits, workers=workers)
    if closure.degenerate_pairs:
        u, v = closure.degenerate_pairs[0]
        verdict = ProperVerdict(
            verdict=Verdict.NO_PROPER_PLACEMENT,
            reason=f"invariant vertices {u} and {v} keep a constant distance, both sit at the origin",
            closure=closure,
        )
    elif closure.complete:
        verdict = ProperVerdict(
            verdict=Verdict.NO_PROPER_PLACEMENT,
            reason="the constant distance closure is complete",
            closure=closure,
        )
    else:
        verdict = ProperVerdict(verdict=Verdict.UNDECIDED, reason="no certificate found", closure=closure)
        candidates = [(g, False)]
        if closure.rounds:
            candidates.append((closure.closure_graph, True))
        for graph, on_closure in candidates:
            found = next(
                (
                    c for c in enumerate_cn_symmetric_nac(graph, up_to_conjugation=True, max_orbits=max_orbits, workers=workers)
                    if check_proper_conditions(graph, c).ok
                ),
                None,
            )
            if found is not None:
                verdict = ProperVerdict(
                    verdict=Verdict.PROPER_PLACEMENT_EXISTS,
                    reason="a Cn-symmetric NAC-colouring meets the proper placement conditions",
                    closure=closure,
                    colouring=found,
                    on_closure=on_closure,
                )
                break
    logger.info("🔍 proper flex verdict", verdict=verdict.verdict.value, reason=verdict.reason)
    return verdict
