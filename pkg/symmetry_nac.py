"""
Cn-symmetric NAC-colourings.

A NAC-colouring is Cn-symmetric if it is constant on edge orbits and no edge
joins two distinct partially invariant components of the same colour.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel

from errors import PreconditionError, SearchBoundExceeded
from formats import CheckReportDocument
from graph_core import SymmetricGraph, Vertex, edge_orbit_indices
from logging_setup import get_logger
from nac import Colour, EdgeColouring, build_problem, colour_labels, is_nac, solve
from settings import settings

logger = get_logger(__name__)


class ComponentSymmetry(BaseModel):
    vertices: Tuple[Vertex, ...]
    stabilizer: Tuple[int, ...]
    partially_invariant: bool
    invariant: bool


class ComponentFlags(BaseModel):
    """Symmetry flags of every monochromatic component of one colour."""

    colour: Colour
    n: int
    components: Tuple[ComponentSymmetry, ...]

    def flags_of(self, v: Vertex) -> ComponentSymmetry:
        return next(comp for comp in self.components if v in comp.vertices)


def _stabilizers(g: SymmetricGraph, labels: np.ndarray) -> List[Tuple[int, ...]]:
    result = []
    for label in range(int(labels.max()) + 1 if len(labels) else 0):
        members = np.flatnonzero(labels == label)
        result.append(tuple(k for k in range(g.n) if np.all(labels[g.power(k)[members]] == label)))
    return result


def component_symmetry_flags(g: SymmetricGraph, c: EdgeColouring, colour: Colour) -> ComponentFlags:
    """Stabilizer {k : ω^k H = H} and invariance flags for each component H."""
    labels = colour_labels(g, c, colour)
    components = []
    for label, stabilizer in enumerate(_stabilizers(g, labels)):
        vertices = tuple(v for v, lab in zip(g.vertices, labels) if lab == label)
        components.append(ComponentSymmetry(
            vertices=vertices,
            stabilizer=stabilizer,
            partially_invariant=len(stabilizer) > 1,
            invariant=len(stabilizer) == g.n,
        ))
    return ComponentFlags(colour=colour, n=g.n, components=tuple(components))


class SymmetricNacReport(BaseModel):
    ok: bool
    reason: Optional[str] = None
    witness: Optional[Dict[str, Any]] = None

    def to_document(self) -> CheckReportDocument:
        return CheckReportDocument(ok=self.ok, reason=self.reason, witness=self.witness)


def partially_invariant_labels(g: SymmetricGraph, labels: np.ndarray) -> np.ndarray:
    return np.array([len(stab) > 1 for stab in _stabilizers(g, labels)], dtype=bool)


def is_cn_symmetric_nac(g: SymmetricGraph, c: EdgeColouring) -> SymmetricNacReport:
    """Check NAC, orbit constancy and the partially invariant component clause, in that order."""
    check = is_nac(g, c)
    if not check.ok:
        witness = check.witness()
        return SymmetricNacReport(ok=False, reason="not NAC", witness=witness or {"detail": check.reason})

    red = c.red_vector(g)
    image = g.edge_omega_array
    moved = np.flatnonzero(red != red[image]) if g.size else []
    if len(moved):
        e = int(moved[0])
        edge, target = g.edges[e], g.edges[int(image[e])]
        return SymmetricNacReport(
            ok=False,
            reason="not constant on edge orbits",
            witness={
                "edge": list(edge),
                "colour": c.colour_of(*edge).value,
                "image": list(target),
                "image_colour": c.colour_of(*target).value,
            },
        )

    for colour in (Colour.RED, Colour.BLUE):
        labels = colour_labels(g, c, colour)
        partial = partially_invariant_labels(g, labels)
        for u, v in g.edge_array:
            a, b = labels[u], labels[v]
            if a != b and partial[a] and partial[b]:
                comp_a = [w for w, lab in zip(g.vertices, labels) if lab == a]
                comp_b = [w for w, lab in zip(g.vertices, labels) if lab == b]
                edge = (g.vertices[u], g.vertices[v])
                return SymmetricNacReport(
                    ok=False,
                    reason="partially invariant components joined",
                    witness={
                        "colour": colour.value,
                        "components": [comp_a, comp_b],
                        "edge": list(edge),
                    },
                )
    return SymmetricNacReport(ok=True)


def require_cn_symmetric_nac(g: SymmetricGraph, c: EdgeColouring) -> None:
    """Raise PreconditionError naming the failed clause."""
    report = is_cn_symmetric_nac(g, c)
    if not report.ok:
        raise PreconditionError(f"colouring is not a Cn-symmetric NAC-colouring ({report.reason})", report.witness)


def enumerate_cn_symmetric_nac(
    g: SymmetricGraph,
    up_to_conjugation: bool = False,
    max_orbits: Optional[int] = None,
    workers: Optional[int] = None,
) -> List[EdgeColouring]:
    """All Cn-symmetric NAC-colourings, searching over edge-orbit assignments.

    Raises:
        SearchBoundExceeded: If the number of edge orbits is over the bound.
    """
    bound = settings.max_orbits if max_orbits is None else max_orbits
    orbits = edge_orbit_indices(g)
    if len(orbits) > bound:
        raise SearchBoundExceeded("#edge orbits", len(orbits), bound)
    problem = build_problem(g, orbits, up_to_conjugation)
    candidates = [EdgeColouring.from_mask(g, mask) for mask in solve(problem, "symnac", workers)]
    result = [c for c in candidates if is_cn_symmetric_nac(g, c).ok]
    logger.info("symmetric enumeration", orbits=len(orbits), candidates=len(candidates), symmetric=len(result))
    return result


def component_orbits(g: SymmetricGraph, c: EdgeColouring, colour: Colour) -> List[Tuple[Tuple[Vertex, ...], ...]]:
    """ω-orbits of the components of one colour that are not partially invariant.

    Orbit j is listed as (H_0, ..., H_{n-1}) with H_i = ω^i H_0, where H_0
    holds the smallest vertex of the orbit; orbits are ordered by that vertex.
    The colouring must be constant on edge orbits.
    """
    labels = colour_labels(g, c, colour)
    partial = partially_invariant_labels(g, labels)
    omega = g.omega_array
    orbits = []
    seen = set()
    # components are labelled by their smallest vertex, so the first label met
    # in an orbit belongs to the component holding the orbit's smallest vertex
    for label in range(len(partial)):
        if partial[label] or label in seen:
            continue
        members = np.flatnonzero(labels == label)
        chain = []
        current = members
        for _ in range(g.n):
            lab = int(labels[current[0]])
            seen.add(lab)
            chain.append(tuple(g.vertices[i] for i in np.flatnonzero(labels == lab)))
            current = omega[current]
        orbits.append(tuple(chain))
    return orbits
