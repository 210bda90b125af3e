"""
Cn-symmetric graphs: validation, the cyclic action and its orbits.

A Cn-symmetric graph is a simple graph with a generator permutation ω of
order exactly n that is a graph automorphism, such that every partially
invariant vertex is invariant and the invariant vertices form an independent
set.
"""

from __future__ import annotations

import math
from functools import cached_property, reduce
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from errors import InvalidGraphError
from formats import GraphDocument, vertex_sort_key
from logging_setup import get_logger

logger = get_logger(__name__)

Vertex = str
Edge = Tuple[Vertex, Vertex]


def canonical_edge(u: Vertex, v: Vertex) -> Edge:
    """Order the endpoints of an edge, smaller vertex first."""
    return (u, v) if vertex_sort_key(u) <= vertex_sort_key(v) else (v, u)


def edge_sort_key(e: Edge) -> Tuple[Any, Any]:
    return (vertex_sort_key(e[0]), vertex_sort_key(e[1]))


class ValidationIssue(BaseModel):
    kind: str
    message: str
    witness: Dict[str, Any] = Field(default_factory=dict)


class ValidationReport(BaseModel):
    """Structural errors and symmetry violations, all of them."""

    structural_errors: List[ValidationIssue] = Field(default_factory=list)
    violations: List[ValidationIssue] = Field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.structural_errors and not self.violations

    def summary(self) -> str:
        issues = self.structural_errors + self.violations
        if not issues:
            return "valid"
        return "; ".join(issue.message for issue in issues)


class OrbitPartition(BaseModel):
    """Orbits of the cyclic action; each class starts with its representative."""

    model_config = ConfigDict(frozen=True)

    classes: Tuple[Tuple[Any, ...], ...]

    @property
    def representatives(self) -> Tuple[Any, ...]:
        return tuple(cls[0] for cls in self.classes)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(cls) for cls in self.classes)

    def class_of(self, item: Any) -> Tuple[Any, ...]:
        for cls in self.classes:
            if item in cls:
                return cls
        raise KeyError(item)


def _cycles(omega: Mapping[Vertex, Vertex], order: Sequence[Vertex]) -> List[List[Vertex]]:
    seen = set()
    cycles = []
    for start in order:
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        v = omega[start]
        while v != start:
            cycle.append(v)
            seen.add(v)
            v = omega[v]
        cycles.append(cycle)
    return cycles


def _structural_issues(doc: GraphDocument) -> List[ValidationIssue]:
    issues: List[ValidationIssue] = []

    if doc.n < 2:
        issues.append(ValidationIssue(
            kind="order", message=f"symmetry order n={doc.n} must be at least 2", witness={"n": doc.n}
        ))

    seen = set()
    for v in doc.vertices:
        if v in seen:
            issues.append(ValidationIssue(kind="duplicate_vertex", message=f"vertex {v} declared twice", witness={"vertex": v}))
        seen.add(v)

    edges_seen = set()
    for raw in doc.edges:
        if len(raw) != 2:
            issues.append(ValidationIssue(kind="malformed_edge", message=f"edge {raw} is not a pair", witness={"edge": raw}))
            continue
        u, v = raw
        unknown = [x for x in (u, v) if x not in seen]
        if unknown:
            issues.append(ValidationIssue(
                kind="unknown_endpoint", message=f"edge {u}-{v} uses undeclared vertex {unknown[0]}",
                witness={"edge": [u, v], "vertex": unknown[0]},
            ))
            continue
        if u == v:
            issues.append(ValidationIssue(kind="loop", message=f"loop at {u}", witness={"edge": [u, v]}))
            continue
        key = frozenset((u, v))
        if key in edges_seen:
            issues.append(ValidationIssue(kind="duplicate_edge", message=f"edge {u}-{v} listed twice", witness={"edge": [u, v]}))
        edges_seen.add(key)

    missing = [v for v in doc.vertices if v not in doc.omega]
    if missing:
        issues.append(ValidationIssue(
            kind="omega_domain", message=f"omega is undefined on {missing[0]}", witness={"vertices": missing}
        ))
    foreign = [v for v in doc.omega if v not in seen]
    if foreign:
        issues.append(ValidationIssue(
            kind="omega_domain", message=f"omega maps undeclared vertex {foreign[0]}", witness={"vertices": foreign}
        ))
    images = [w for w in doc.omega.values()]
    bad_images = [w for w in images if w not in seen]
    if bad_images:
        issues.append(ValidationIssue(
            kind="omega_range", message=f"omega maps to undeclared vertex {bad_images[0]}", witness={"vertices": bad_images}
        ))
    elif len(set(images)) != len(images):
        clash = next(w for w in images if images.count(w) > 1)
        issues.append(ValidationIssue(
            kind="omega_not_bijective", message=f"omega is not a permutation ({clash} has two preimages)",
            witness={"vertex": clash},
        ))
    return issues


def _symmetry_violations(doc: GraphDocument) -> List[ValidationIssue]:
    violations: List[ValidationIssue] = []
    n = doc.n
    omega = doc.omega
    order = sorted(doc.vertices, key=vertex_sort_key)
    cycles = _cycles(omega, order)
    period = reduce(math.lcm, (len(c) for c in cycles), 1)

    if n % period != 0:
        v = next(c[0] for c in cycles if n % len(c) != 0)
        violations.append(ValidationIssue(
            kind="omega_power", message=f"omega^{n} is not the identity (moves {v})",
            witness={"vertex": v, "k": n},
        ))
    elif period != n:
        violations.append(ValidationIssue(
            kind="omega_order", message=f"order of omega is {period}, not {n}",
            witness={"order": period, "n": n},
        ))

    edge_set = {frozenset(e) for e in doc.edges}
    for u, v in doc.edges:
        image = frozenset((omega[u], omega[v]))
        if image not in edge_set:
            violations.append(ValidationIssue(
                kind="not_automorphism", message=f"omega maps edge {u}-{v} to non-edge {omega[u]}-{omega[v]}",
                witness={"edge": [u, v], "image": [omega[u], omega[v]]},
            ))

    for cycle in cycles:
        length = len(cycle)
        if 1 < length < n and n % length == 0:
            v = min(cycle, key=vertex_sort_key)
            violations.append(ValidationIssue(
                kind="partially_invariant", message=f"vertex {v} is fixed by omega^{length} but not by omega",
                witness={"vertex": v, "k": length},
            ))

    fixed = {c[0] for c in cycles if len(c) == 1}
    for u, v in doc.edges:
        if u in fixed and v in fixed:
            violations.append(ValidationIssue(
                kind="invariant_edge", message=f"invariant vertices {u} and {v} are adjacent",
                witness={"edge": [u, v]},
            ))
    return violations


def validate_symmetric_graph(g: Union[GraphDocument, "SymmetricGraph"]) -> ValidationReport:
    """Check every structural and symmetry condition and report all failures."""
    doc = g.to_document() if isinstance(g, SymmetricGraph) else g
    report = ValidationReport(structural_errors=_structural_issues(doc))
    if report.structural_errors:
        return report
    report.violations = _symmetry_violations(doc)
    if not report.valid:
        logger.debug("graph rejected", violations=len(report.violations))
    return report


class SymmetricGraph(BaseModel):
    """An immutable, validated Cn-symmetric graph in canonical form.

    Vertices are kept in natural order and re-indexed densely; every derived
    array below refers to that index.
    """

    model_config = ConfigDict(frozen=True)

    n: int
    vertices: Tuple[Vertex, ...]
    edges: Tuple[Edge, ...]
    omega: Dict[Vertex, Vertex]

    @classmethod
    def from_document(cls, doc: GraphDocument) -> "SymmetricGraph":
        report = validate_symmetric_graph(doc)
        if not report.valid:
            raise InvalidGraphError(report)
        vertices = tuple(sorted(doc.vertices, key=vertex_sort_key))
        edges = tuple(sorted((canonical_edge(u, v) for u, v in doc.edges), key=edge_sort_key))
        omega = {v: doc.omega[v] for v in vertices}
        return cls(n=doc.n, vertices=vertices, edges=edges, omega=omega)

    @classmethod
    def create(
        cls,
        vertices: Iterable[Any],
        edges: Iterable[Sequence[Any]],
        omega: Mapping[Any, Any],
        n: int,
    ) -> "SymmetricGraph":
        doc = GraphDocument(
            n=n,
            vertices=list(vertices),
            edges=[list(e) for e in edges],
            omega=dict(omega),
        )
        return cls.from_document(doc)

    def to_document(self) -> GraphDocument:
        return GraphDocument(
            n=self.n,
            vertices=list(self.vertices),
            edges=[list(e) for e in self.edges],
            omega=dict(self.omega),
        )

    def with_edges(self, extra: Iterable[Edge]) -> "SymmetricGraph":
        """A validated copy with additional edges."""
        return SymmetricGraph.create(self.vertices, list(self.edges) + [list(e) for e in extra], self.omega, self.n)

    # -- dense indexing -------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.vertices)

    @property
    def size(self) -> int:
        return len(self.edges)

    @cached_property
    def index(self) -> Dict[Vertex, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_index(self) -> Dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def edge_array(self) -> np.ndarray:
        """Endpoint indices, shape (|E|, 2)."""
        if not self.edges:
            return np.zeros((0, 2), dtype=np.int64)
        return np.array([[self.index[u], self.index[v]] for u, v in self.edges], dtype=np.int64)

    @cached_property
    def omega_array(self) -> np.ndarray:
        return np.array([self.index[self.omega[v]] for v in self.vertices], dtype=np.int64)

    @cached_property
    def powers_table(self) -> Tuple[np.ndarray, ...]:
        powers = [np.arange(self.order, dtype=np.int64)]
        for _ in range(1, self.n):
            powers.append(self.omega_array[powers[-1]])
        return tuple(powers)

    def power(self, k: int) -> np.ndarray:
        """ω^k as an index permutation."""
        return self.powers_table[k % self.n]

    @cached_property
    def edge_omega_array(self) -> np.ndarray:
        """The induced action γe := γuγv on edge indices."""
        images = []
        for u, v in self.edges:
            images.append(self.edge_index[canonical_edge(self.omega[u], self.omega[v])])
        return np.array(images, dtype=np.int64)

    @cached_property
    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.order, self.order), dtype=bool)
        if self.size:
            adj[self.edge_array[:, 0], self.edge_array[:, 1]] = True
            adj[self.edge_array[:, 1], self.edge_array[:, 0]] = True
        return adj

    @cached_property
    def invariant_mask(self) -> np.ndarray:
        return self.omega_array == np.arange(self.order)

    @property
    def invariant_vertices(self) -> Tuple[Vertex, ...]:
        return tuple(v for v, fixed in zip(self.vertices, self.invariant_mask) if fixed)

    def is_complete(self) -> bool:
        return self.size == self.order * (self.order - 1) // 2

    def apply(self, v: Vertex, k: int = 1) -> Vertex:
        return self.vertices[self.power(k)[self.index[v]]]

    def orbit_of_pair(self, u: Vertex, v: Vertex) -> FrozenSet[Edge]:
        """{γuγv : γ ∈ Cn} as canonical pairs."""
        return frozenset(canonical_edge(self.apply(u, k), self.apply(v, k)) for k in range(self.n))

    def to_networkx(self, edges: Optional[Iterable[Edge]] = None) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.edges if edges is None else edges)
        return graph


def vertex_orbits(g: SymmetricGraph) -> OrbitPartition:
    """⟨ω⟩-orbits of V(G) in natural order of their smallest vertex."""
    cycles = _cycles(g.omega, g.vertices)
    return OrbitPartition(classes=tuple(tuple(c) for c in cycles))


def edge_orbits(g: SymmetricGraph) -> OrbitPartition:
    """Orbits of E(G) under γe := γuγv, starting from the smallest edge."""
    image = {e: g.edges[j] for e, j in zip(g.edges, g.edge_omega_array)}
    return OrbitPartition(classes=tuple(tuple(c) for c in _cycles(image, g.edges)))


def edge_orbit_indices(g: SymmetricGraph) -> List[Tuple[int, ...]]:
    """edge_orbits as tuples of canonical edge indices."""
    return [tuple(g.edge_index[e] for e in cls) for cls in edge_orbits(g).classes]
