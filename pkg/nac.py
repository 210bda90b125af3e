"""
Red/blue edge colourings and NAC-colourings.

A colouring is NAC when it uses both colours and no cycle contains exactly
one edge of either colour. Checking uses the component form: a cycle with a
single blue edge exists iff some blue edge joins two vertices of one red
component (and symmetrically).
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from networkx.utils import UnionFind
from pydantic import BaseModel, ConfigDict

import metrics
from errors import ColouringError, SearchBoundExceeded
from formats import ColouringDocument
from graph_core import Edge, SymmetricGraph, Vertex, canonical_edge, edge_sort_key
from logging_setup import get_logger
from settings import settings

logger = get_logger(__name__)


class Colour(str, Enum):
    RED = "red"
    BLUE = "blue"

    @property
    def opposite(self) -> "Colour":
        return Colour.BLUE if self is Colour.RED else Colour.RED


class EdgeColouring(BaseModel):
    """A total red/blue assignment; both edge lists are in canonical order."""

    model_config = ConfigDict(frozen=True)

    red: Tuple[Edge, ...]
    blue: Tuple[Edge, ...]

    @classmethod
    def from_red_edges(cls, g: SymmetricGraph, red: Any) -> "EdgeColouring":
        red_set = {canonical_edge(str(u), str(v)) for u, v in red}
        unknown = red_set - set(g.edges)
        if unknown:
            raise ColouringError(f"red edges {sorted(unknown, key=edge_sort_key)} are not edges of the graph")
        return cls(
            red=tuple(e for e in g.edges if e in red_set),
            blue=tuple(e for e in g.edges if e not in red_set),
        )

    @classmethod
    def from_vector(cls, g: SymmetricGraph, is_red: Sequence[bool]) -> "EdgeColouring":
        return cls(
            red=tuple(e for e, r in zip(g.edges, is_red) if r),
            blue=tuple(e for e, r in zip(g.edges, is_red) if not r),
        )

    @classmethod
    def from_mask(cls, g: SymmetricGraph, mask: int) -> "EdgeColouring":
        """Inverse of mask(): bit |E|-1-i is set iff edge i is red."""
        m = g.size
        return cls.from_vector(g, [bool(mask >> (m - 1 - i) & 1) for i in range(m)])

    @classmethod
    def from_document(cls, g: SymmetricGraph, doc: ColouringDocument) -> "EdgeColouring":
        """Parse a colouring document; its union must be exactly E(G)."""
        red = [canonical_edge(*e) for e in doc.red if len(e) == 2]
        blue = [canonical_edge(*e) for e in doc.blue if len(e) == 2]
        if len(red) != len(doc.red) or len(blue) != len(doc.blue):
            raise ColouringError("colouring edges must be vertex pairs")
        both = set(red) & set(blue)
        if both:
            raise ColouringError(f"edges coloured twice: {sorted(both, key=edge_sort_key)}")
        covered = set(red) | set(blue)
        if len(covered) != len(red) + len(blue):
            raise ColouringError("an edge is listed twice in the colouring")
        missing = set(g.edges) - covered
        extra = covered - set(g.edges)
        if missing or extra:
            raise ColouringError(
                f"colouring does not cover E(G) exactly (missing {sorted(missing, key=edge_sort_key)}, "
                f"unknown {sorted(extra, key=edge_sort_key)})"
            )
        return cls.from_red_edges(g, red)

    def to_document(self) -> ColouringDocument:
        return ColouringDocument(red=[list(e) for e in self.red], blue=[list(e) for e in self.blue])

    @cached_property
    def red_set(self) -> FrozenSet[Edge]:
        return frozenset(self.red)

    def colour_of(self, u: Vertex, v: Vertex) -> Colour:
        return Colour.RED if canonical_edge(u, v) in self.red_set else Colour.BLUE

    def edges_of(self, colour: Colour) -> Tuple[Edge, ...]:
        return self.red if colour is Colour.RED else self.blue

    def red_vector(self, g: SymmetricGraph) -> np.ndarray:
        return np.array([e in self.red_set for e in g.edges], dtype=bool)

    def mask(self, g: SymmetricGraph) -> int:
        m = g.size
        return sum(1 << (m - 1 - i) for i, e in enumerate(g.edges) if e in self.red_set)

    @property
    def surjective(self) -> bool:
        return bool(self.red) and bool(self.blue)


def conjugate(c: EdgeColouring) -> EdgeColouring:
    """Swap the colour of every edge."""
    return EdgeColouring(red=c.blue, blue=c.red)


class MonochromaticComponents(BaseModel):
    """Connected components of (V(G), edges of one colour), smallest vertex first."""

    colour: Colour
    classes: Tuple[Tuple[Vertex, ...], ...]
    labels: Dict[Vertex, int]

    def component_of(self, v: Vertex) -> Tuple[Vertex, ...]:
        return self.classes[self.labels[v]]


def component_labels(g: SymmetricGraph, selected: np.ndarray) -> np.ndarray:
    """Component label per vertex for the subgraph of selected edges.

    Labels are numbered by the smallest vertex of each component.
    """
    uf = UnionFind(range(g.order))
    for u, v in g.edge_array[np.asarray(selected, dtype=bool)]:
        uf.union(int(u), int(v))
    roots = np.array([uf[i] for i in range(g.order)], dtype=np.int64)
    if not g.order:
        return roots
    _, first, inverse = np.unique(roots, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first)] = np.arange(len(first))
    return rank[inverse.reshape(-1)]


def colour_labels(g: SymmetricGraph, c: EdgeColouring, colour: Colour) -> np.ndarray:
    red = c.red_vector(g)
    return component_labels(g, red if colour is Colour.RED else ~red)


def monochromatic_components(g: SymmetricGraph, c: EdgeColouring, colour: Colour) -> MonochromaticComponents:
    labels = colour_labels(g, c, colour)
    count = int(labels.max()) + 1 if len(labels) else 0
    classes = [[] for _ in range(count)]
    for v, label in zip(g.vertices, labels):
        classes[label].append(v)
    return MonochromaticComponents(
        colour=colour,
        classes=tuple(tuple(cls) for cls in classes),
        labels={v: int(label) for v, label in zip(g.vertices, labels)},
    )


class NacCheck(BaseModel):
    """Outcome of is_nac; on failure either 'not surjective' or an almost-cycle witness."""

    ok: bool
    reason: Optional[str] = None
    edge: Optional[Edge] = None
    edge_colour: Optional[Colour] = None
    path: Optional[Tuple[Vertex, ...]] = None

    def witness(self) -> Optional[Dict[str, Any]]:
        if self.edge is None:
            return None
        return {"edge": list(self.edge), "colour": self.edge_colour.value, "path": list(self.path or ())}


def _monochromatic_path(g: SymmetricGraph, c: EdgeColouring, colour: Colour, u: Vertex, v: Vertex) -> Tuple[Vertex, ...]:
    return tuple(nx.shortest_path(g.to_networkx(c.edges_of(colour)), u, v))


def is_nac(g: SymmetricGraph, c: EdgeColouring) -> NacCheck:
    if not c.surjective:
        return NacCheck(ok=False, reason="not surjective")
    red = c.red_vector(g)
    for colour, closing in ((Colour.RED, ~red), (Colour.BLUE, red)):
        labels = component_labels(g, red if colour is Colour.RED else ~red)
        ends = g.edge_array[closing]
        hits = np.flatnonzero(labels[ends[:, 0]] == labels[ends[:, 1]]) if len(ends) else []
        if len(hits):
            edge = g.edges[int(np.flatnonzero(closing)[hits[0]])]
            return NacCheck(
                ok=False,
                reason="almost cycle",
                edge=edge,
                edge_colour=colour.opposite,
                path=_monochromatic_path(g, c, colour, *edge),
            )
    return NacCheck(ok=True)


def almost_cycle_oracle(g: SymmetricGraph, c: EdgeColouring) -> bool:
    """Definition-level NAC check by explicit enumeration of all cycles.

    Exponential; meant for small graphs and for cross-checking is_nac.
    """
    if not c.surjective:
        return False
    for cycle in nx.simple_cycles(g.to_networkx()):
        if len(cycle) < 3:
            continue
        reds = sum(c.colour_of(u, v) is Colour.RED for u, v in zip(cycle, cycle[1:] + cycle[:1]))
        blues = len(cycle) - reds
        if reds == 1 or blues == 1:
            return False
    return True


# -- branch-and-prune search --------------------------------------------------


@dataclass(frozen=True)
class SearchProblem:
    """Plain data handed to (possibly remote) search workers.

    Each unit is a group of edge indices that share one colour: single
    edges for NAC enumeration, edge orbits for the symmetric variant.
    """

    order: int
    size: int
    pairs: Tuple[Tuple[int, int], ...]
    units: Tuple[Tuple[int, ...], ...]
    forced_blue: Optional[int] = None
    limit: Optional[int] = None


@dataclass
class SearchOutcome:
    masks: List[int]
    nodes: int = 0
    pruned: int = 0


class _LimitReached(Exception):
    pass


def _extend(
    problem: SearchProblem,
    same: np.ndarray,
    other: np.ndarray,
    unit: Tuple[int, ...],
    other_edges: List[int],
) -> Optional[np.ndarray]:
    """Colour a unit, or return None if that closes an almost-cycle."""
    pairs = problem.pairs
    for e in unit:
        u, v = pairs[e]
        if other[u] == other[v]:
            return None
    labels = same.copy()
    for e in unit:
        u, v = pairs[e]
        a, b = labels[u], labels[v]
        if a != b:
            labels[labels == b] = a
    for e in other_edges:
        u, v = pairs[e]
        if labels[u] == labels[v]:
            return None
    return labels


def run_search(problem: SearchProblem, prefix: Tuple[bool, ...] = ()) -> SearchOutcome:
    """Depth-first search over unit colourings, pruning on closed almost-cycles."""
    outcome = SearchOutcome(masks=[])
    units = problem.units
    bits = [sum(1 << (problem.size - 1 - e) for e in unit) for unit in units]

    def recurse(pos, red, blue, red_edges, blue_edges, mask):
        outcome.nodes += 1
        if pos == len(units):
            if red_edges and blue_edges:
                outcome.masks.append(mask)
                if problem.limit is not None and len(outcome.masks) >= problem.limit:
                    raise _LimitReached
            return
        choices: Tuple[bool, ...] = (False,) if pos == problem.forced_blue else (False, True)
        if pos < len(prefix):
            choices = tuple(c for c in choices if c == prefix[pos])
        unit = units[pos]
        for is_red in choices:
            if is_red:
                labels = _extend(problem, red, blue, unit, blue_edges)
                if labels is None:
                    outcome.pruned += 1
                    continue
                recurse(pos + 1, labels, blue, red_edges + list(unit), blue_edges, mask | bits[pos])
            else:
                labels = _extend(problem, blue, red, unit, red_edges)
                if labels is None:
                    outcome.pruned += 1
                    continue
                recurse(pos + 1, red, labels, red_edges, blue_edges + list(unit), mask)

    start = np.arange(problem.order, dtype=np.int64)
    try:
        recurse(0, start, start.copy(), [], [], 0)
    except _LimitReached:
        pass
    return outcome


def spanning_tree_first(g: SymmetricGraph, units: Sequence[Tuple[int, ...]]) -> List[Tuple[int, ...]]:
    """Order units so that BFS spanning-forest edges come first."""
    rank: Dict[int, int] = {}
    graph = g.to_networkx()
    seen = set()
    for root in g.vertices:
        if root in seen:
            continue
        seen.add(root)
        for u, v in nx.bfs_edges(graph, root):
            seen.add(v)
            rank[g.edge_index[canonical_edge(u, v)]] = len(rank)
    offset = len(rank)
    for e in range(g.size):
        rank.setdefault(e, offset + e)
    return sorted(units, key=lambda unit: (min(rank[e] for e in unit), unit))


def solve(problem: SearchProblem, kind: str, workers: Optional[int] = None) -> List[int]:
    """Run a search, in parallel by prefix when workers > 1; masks come back sorted."""
    workers = settings.threads if workers is None else max(1, workers)
    with metrics.timed(f"enumerate_{kind}"):
        if workers <= 1 or len(problem.units) < 2 or problem.limit is not None:
            outcomes = [run_search(problem)]
        else:
            depth = min(len(problem.units), max(1, math.ceil(math.log2(workers)) + 1))
            prefixes = list(itertools.product((False, True), repeat=depth))
            with ProcessPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(run_search, itertools.repeat(problem), prefixes))
    masks = sorted(mask for outcome in outcomes for mask in outcome.masks)
    nodes = sum(o.nodes for o in outcomes)
    pruned = sum(o.pruned for o in outcomes)
    metrics.SEARCH_NODES.labels(kind=kind).inc(nodes)
    metrics.SEARCH_PRUNED.labels(kind=kind).inc(pruned)
    metrics.COLOURINGS_FOUND.labels(kind=kind).inc(len(masks))
    logger.info("search finished", kind=kind, units=len(problem.units), nodes=nodes, pruned=pruned, found=len(masks))
    return masks


def build_problem(
    g: SymmetricGraph,
    units: Sequence[Tuple[int, ...]],
    up_to_conjugation: bool,
    limit: Optional[int] = None,
) -> SearchProblem:
    ordered = spanning_tree_first(g, units)
    forced = None
    if up_to_conjugation and g.size:
        # representative of a conjugate pair: canonical edge 0 is blue
        forced = next(pos for pos, unit in enumerate(ordered) if 0 in unit)
    return SearchProblem(
        order=g.order,
        size=g.size,
        pairs=tuple((int(u), int(v)) for u, v in g.edge_array),
        units=tuple(tuple(unit) for unit in ordered),
        forced_blue=forced,
        limit=limit,
    )


def enumerate_nac(
    g: SymmetricGraph,
    up_to_conjugation: bool = False,
    max_edges: Optional[int] = None,
    workers: Optional[int] = None,
) -> List[EdgeColouring]:
    """All NAC-colourings of g, ordered by red-edge bitmask.

    Raises:
        SearchBoundExceeded: If |E| is over the configured bound.
    """
    bound = settings.max_edges if max_edges is None else max_edges
    if g.size > bound:
        raise SearchBoundExceeded("|E|", g.size, bound)
    problem = build_problem(g, [(e,) for e in range(g.size)], up_to_conjugation)
    return [EdgeColouring.from_mask(g, mask) for mask in solve(problem, "nac", workers)]


def has_nac_colouring(g: SymmetricGraph, max_edges: Optional[int] = None) -> bool:
    """Stop at the first NAC-colouring found."""
    bound = settings.max_edges if max_edges is None else max_edges
    if g.size > bound:
        raise SearchBoundExceeded("|E|", g.size, bound)
    problem = build_problem(g, [(e,) for e in range(g.size)], up_to_conjugation=True, limit=1)
    return bool(solve(problem, "nac"))
