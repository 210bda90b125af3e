"""
Rotationally symmetric flexes from Cn-symmetric NAC-colourings.

The grid construction places each vertex at p_t(v) = R(t)·ā(v) + b̄(v), where
ā is a rotated base point of the vertex's red component orbit and b̄ the same
for blue. Red edges keep ā equal, blue edges keep b̄ equal, so every edge
length is independent of t.
"""

from __future__ import annotations

import math
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from errors import BasePointError, PreconditionError
from formats import FrameDocument, MotionDocument, Point, round_float, round_point, vertex_sort_key
from graph_core import SymmetricGraph, Vertex
from logging_setup import get_logger
from nac import Colour, EdgeColouring, colour_labels
from settings import settings
from symmetry_nac import component_orbits, partially_invariant_labels, require_cn_symmetric_nac

logger = get_logger(__name__)


def rotation(theta: float) -> np.ndarray:
    """Counter-clockwise rotation matrix R(θ)."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def tau(n: int, k: int = 1) -> np.ndarray:
    """τ(ω^k), the 2kπ/n rotation."""
    return rotation(2 * math.pi * k / n)


def default_parameters(frames: Optional[int] = None) -> List[float]:
    """Uniform parameters on [0, 2π)."""
    frames = settings.frames if frames is None else frames
    return [2 * math.pi * i / frames for i in range(frames)]


def perturbed_parameters(ts: Sequence[float]) -> List[float]:
    """Shift every parameter by an irrational fraction of the sampling step."""
    step = 2 * math.pi / max(len(ts), 1)
    return [t + step / math.sqrt(7) for t in ts]


# -- base points --------------------------------------------------------------


class BasePoints(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    a: Tuple[Point, ...] = ()
    b: Tuple[Point, ...] = ()


def verify_base_points(bp: BasePoints, tolerance: Optional[float] = None) -> List[str]:
    """List the genericity conditions that fail; empty means usable."""
    tol = settings.tolerance if tolerance is None else tolerance
    problems = []
    a = [np.array(p) for p in bp.a]
    b = [np.array(p) for p in bp.b]
    rotations = [tau(bp.n, i) for i in range(bp.n)]

    for name, points in (("a", a), ("b", b)):
        for j, p in enumerate(points):
            if np.linalg.norm(p) <= tol:
                problems.append(f"{name}_{j + 1} is the origin")
        for j, p in enumerate(points):
            for jj, q in enumerate(points):
                if j == jj:
                    continue
                for i, rot in enumerate(rotations):
                    if np.linalg.norm(p - rot @ q) <= tol:
                        problems.append(f"{name}_{j + 1} = τ(ω)^{i} {name}_{jj + 1}")
    for j, p in enumerate(a):
        for jj, q in enumerate(b):
            for i, rot in enumerate(rotations):
                r = rot @ q
                cross = p[0] * r[1] - p[1] * r[0]
                if abs(cross) <= tol * max(1.0, np.linalg.norm(p) * np.linalg.norm(r)):
                    problems.append(f"a_{j + 1} and τ(ω)^{i} b_{jj + 1} are parallel")
    return problems


def _deterministic_points(m: int, k: int, n: int) -> BasePoints:
    a = tuple((j * math.cos(j / 7), j * math.sin(j / 7)) for j in range(1, m + 1))
    b = tuple(
        ((m + j) * math.cos(j / 7 + 1 / 14), (m + j) * math.sin(j / 7 + 1 / 14)) for j in range(1, k + 1)
    )
    return BasePoints(n=n, a=a, b=b)


def _sampled_points(m: int, k: int, n: int, seed: int, attempts: int) -> BasePoints:
    rng = np.random.default_rng(seed)
    for attempt in range(attempts):
        radii = rng.uniform(0.5, 2.5, size=m + k)
        angles = rng.uniform(0.0, 2 * math.pi, size=m + k)
        points = [(float(r * math.cos(phi)), float(r * math.sin(phi))) for r, phi in zip(radii, angles)]
        candidate = BasePoints(n=n, a=tuple(points[:m]), b=tuple(points[m:]))
        if not verify_base_points(candidate):
            logger.debug("base points sampled", attempt=attempt + 1, seed=seed)
            return candidate
    raise BasePointError(f"no generic base points for m={m}, k={k}, n={n} after {attempts} attempts")


def choose_base_points(m: int, k: int, n: int, seed: Optional[int] = None) -> BasePoints:
    """Base points satisfying the genericity conditions.

    Without a seed the deterministic scheme is used (red radii 1..m at angles
    j/7, blue radii m+1..m+k at angles j/7 + 1/14) and only falls back to
    sampling if the numerical re-check fails. With a seed, points are sampled.
    """
    if m < 0 or k < 0 or n < 2:
        raise ValueError(f"invalid base point request m={m}, k={k}, n={n}")
    attempts = settings.base_point_attempts
    if seed is not None:
        return _sampled_points(m, k, n, seed, attempts)
    points = _deterministic_points(m, k, n)
    problems = verify_base_points(points)
    if problems:
        logger.warning("⚠️ deterministic base points rejected, sampling instead", problems=problems[:3])
        return _sampled_points(m, k, n, 0, attempts)
    return points


# -- motions ------------------------------------------------------------------


class Placement(BaseModel):
    t: float = 0.0
    positions: Dict[Vertex, Point]

    def array(self, g: SymmetricGraph) -> np.ndarray:
        return np.array([self.positions[v] for v in g.vertices], dtype=float).reshape(-1, 2)

    def to_document(self) -> FrameDocument:
        return FrameDocument(
            t=round_float(self.t),
            positions={v: round_point(p) for v, p in self.positions.items()},
        )


class ParametricMotion(BaseModel):
    """The maps ā, b̄ defining p_t(v) = R(t)ā(v) + b̄(v)."""

    model_config = ConfigDict(frozen=True)

    n: int
    graph: SymmetricGraph
    abar: Dict[Vertex, Point]
    bbar: Dict[Vertex, Point]
    base_points: Optional[BasePoints] = None

    @cached_property
    def abar_array(self) -> np.ndarray:
        return np.array([self.abar[v] for v in self.graph.vertices], dtype=float).reshape(-1, 2)

    @cached_property
    def bbar_array(self) -> np.ndarray:
        return np.array([self.bbar[v] for v in self.graph.vertices], dtype=float).reshape(-1, 2)

    def positions_at(self, t: float) -> np.ndarray:
        return self.abar_array @ rotation(t).T + self.bbar_array

    def to_document(self, ts: Sequence[float]) -> MotionDocument:
        return MotionDocument(
            n=self.n,
            frames=[frame.to_document() for frame in sample_motion(self, ts)],
            abar={v: round_point(p) for v, p in self.abar.items()},
            bbar={v: round_point(p) for v, p in self.bbar.items()},
        )

    @classmethod
    def from_document(cls, g: SymmetricGraph, doc: MotionDocument) -> "ParametricMotion":
        if doc.abar is None or doc.bbar is None:
            raise PreconditionError("motion document carries no abar/bbar definition")
        if doc.n != g.n or set(doc.abar) != set(g.vertices) or set(doc.bbar) != set(g.vertices):
            raise PreconditionError("motion document does not match the graph")
        return cls(n=g.n, graph=g, abar=dict(doc.abar), bbar=dict(doc.bbar))


def _grid_values(
    g: SymmetricGraph,
    orbits: Sequence[Tuple[Tuple[Vertex, ...], ...]],
    points: Sequence[Point],
) -> Dict[Vertex, Point]:
    values: Dict[Vertex, Point] = {v: (0.0, 0.0) for v in g.vertices}
    for orbit, point in zip(orbits, points):
        for i, component in enumerate(orbit):
            x, y = tau(g.n, i) @ np.array(point)
            for v in component:
                values[v] = (float(x), float(y))
    return values


def construct_motion(
    g: SymmetricGraph,
    c: EdgeColouring,
    bp: Optional[BasePoints] = None,
    seed: Optional[int] = None,
) -> ParametricMotion:
    """Grid construction of a Cn-symmetric flex from a Cn-symmetric NAC-colouring.

    Raises:
        PreconditionError: If c is not a Cn-symmetric NAC-colouring of g, or bp
            does not match the component orbit counts.
    """
    require_cn_symmetric_nac(g, c)
    red_orbits = component_orbits(g, c, Colour.RED)
    blue_orbits = component_orbits(g, c, Colour.BLUE)
    m, k = len(red_orbits), len(blue_orbits)
    if bp is None:
        bp = choose_base_points(m, k, g.n, seed=seed)
    elif bp.n != g.n or len(bp.a) != m or len(bp.b) != k:
        raise PreconditionError(
            f"base points for m={len(bp.a)}, k={len(bp.b)}, n={bp.n} do not fit m={m}, k={k}, n={g.n}"
        )
    logger.info("motion constructed", n=g.n, red_orbits=m, blue_orbits=k)
    return ParametricMotion(
        n=g.n,
        graph=g,
        abar=_grid_values(g, red_orbits, bp.a),
        bbar=_grid_values(g, blue_orbits, bp.b),
        base_points=bp,
    )


def sample_motion(mo: ParametricMotion, ts: Sequence[float]) -> List[Placement]:
    """Evaluate p_t at each parameter."""
    frames = []
    for t in ts:
        positions = mo.positions_at(t)
        frames.append(Placement(
            t=float(t),
            positions={v: (float(x), float(y)) for v, (x, y) in zip(mo.graph.vertices, positions)},
        ))
    return frames


def require_frames_match(g: SymmetricGraph, frames: Sequence[Placement]) -> None:
    """Every frame must place exactly the vertices of g."""
    expected = set(g.vertices)
    for i, frame in enumerate(frames):
        placed = set(frame.positions)
        if placed != expected:
            raise PreconditionError(
                f"frame {i} does not place exactly the vertices of the graph",
                {
                    "frame": i,
                    "missing": sorted(expected - placed, key=vertex_sort_key),
                    "unknown": sorted(placed - expected, key=vertex_sort_key),
                },
            )


def placements_from_document(doc: MotionDocument, g: Optional[SymmetricGraph] = None) -> List[Placement]:
    """Frames of a motion document, checked against g when it is given."""
    frames = [Placement(t=frame.t, positions=dict(frame.positions)) for frame in doc.frames]
    if g is not None:
        if doc.n != g.n:
            raise PreconditionError(f"motion document has n={doc.n} but the graph has n={g.n}")
        require_frames_match(g, frames)
    return frames


# -- verification -------------------------------------------------------------


class Tolerances(BaseModel):
    equality: float = Field(default_factory=lambda: settings.tolerance)
    nontrivial_factor: float = Field(default_factory=lambda: settings.nontrivial_factor)
    injectivity: float = Field(default_factory=lambda: settings.injectivity_tolerance)


class VerificationReport(BaseModel):
    frames: int
    max_edge_length: float
    min_edge_length: float
    edge_length_residual: float
    symmetry_residual: float
    min_vertex_distance: List[float]
    non_injective_frames: List[int]
    nontriviality_margin: float
    nontriviality_threshold: float
    edge_lengths_ok: bool
    symmetry_ok: bool
    framework_ok: bool
    nontrivial: bool

    @property
    def passed(self) -> bool:
        return self.edge_lengths_ok and self.symmetry_ok and self.framework_ok and self.nontrivial

    def to_json(self) -> Dict[str, Any]:
        payload = self.model_dump()
        for key, value in payload.items():
            if isinstance(value, float):
                payload[key] = round_float(value)
        payload["min_vertex_distance"] = [round_float(x) for x in self.min_vertex_distance]
        payload["passed"] = self.passed
        return payload


def verify_motion(
    g: SymmetricGraph,
    frames: Sequence[Placement],
    tolerances: Optional[Tolerances] = None,
) -> VerificationReport:
    """Numerical residuals of a sampled flex: edge lengths, symmetry, injectivity, non-triviality."""
    tol = tolerances or Tolerances()
    if len(frames) < 2:
        raise PreconditionError("verify_motion needs at least two frames")
    require_frames_match(g, frames)
    x = np.stack([frame.array(g) for frame in frames])  # (F, V, 2)
    dist = np.linalg.norm(x[:, :, None, :] - x[:, None, :, :], axis=-1)  # (F, V, V)

    ends = g.edge_array
    lengths = dist[:, ends[:, 0], ends[:, 1]] if g.size else np.zeros((len(frames), 0))
    edge_residual = float(np.max(np.abs(lengths - lengths[0]))) if g.size else 0.0
    max_edge = float(lengths.max()) if g.size else 0.0
    min_edge = float(lengths.min()) if g.size else math.inf

    rotated = x @ tau(g.n).T
    symmetry_residual = float(np.max(np.linalg.norm(x[:, g.omega_array, :] - rotated, axis=-1))) if g.order else 0.0

    if g.order >= 2:
        masked = dist + np.where(np.eye(g.order, dtype=bool), np.inf, 0.0)
        min_distance = masked.min(axis=(1, 2))
    else:
        min_distance = np.zeros(0)
    non_injective = [int(i) for i in np.flatnonzero(min_distance <= tol.injectivity)]

    upper = np.triu(np.ones((g.order, g.order), dtype=bool), 1) & ~g.adjacency
    spread = dist.max(axis=0) - dist.min(axis=0)
    margin = float(spread[upper].max()) if upper.any() else 0.0
    threshold = tol.nontrivial_factor * max_edge

    report = VerificationReport(
        frames=len(frames),
        max_edge_length=max_edge,
        min_edge_length=min_edge if g.size else 0.0,
        edge_length_residual=edge_residual,
        symmetry_residual=symmetry_residual,
        min_vertex_distance=[float(d) for d in min_distance],
        non_injective_frames=non_injective,
        nontriviality_margin=margin,
        nontriviality_threshold=threshold,
        edge_lengths_ok=edge_residual <= tol.equality,
        symmetry_ok=symmetry_residual <= tol.equality,
        framework_ok=min_edge > tol.injectivity,
        nontrivial=margin > threshold,
    )
    if not report.passed:
        logger.info("motion verification failed", edge_residual=edge_residual, symmetry_residual=symmetry_residual,
                    margin=margin, min_edge=report.min_edge_length)
    return report


# -- proper placements --------------------------------------------------------


class ProperViolation(BaseModel):
    condition: int
    message: str
    witness: Dict[str, Any]


class ProperConditionsReport(BaseModel):
    ok: bool
    violations: List[ProperViolation] = Field(default_factory=list)


def check_proper_conditions(g: SymmetricGraph, c: EdgeColouring) -> ProperConditionsReport:
    """Sufficient conditions for a proper Cn-symmetric flexible placement.

    1. every blue and red component share at most one vertex;
    2. no two blue (red) partially invariant components are joined by a red (blue) path;
    3. at most one vertex lies in both a red and a blue partially invariant component.
    """
    require_cn_symmetric_nac(g, c)
    red = colour_labels(g, c, Colour.RED)
    blue = colour_labels(g, c, Colour.BLUE)
    red_partial = partially_invariant_labels(g, red)
    blue_partial = partially_invariant_labels(g, blue)
    violations: List[ProperViolation] = []

    shared: Dict[Tuple[int, int], List[Vertex]] = {}
    for v, r, b in zip(g.vertices, red, blue):
        shared.setdefault((int(r), int(b)), []).append(v)
    clash = next(((key, vs) for key, vs in shared.items() if len(vs) > 1), None)
    if clash is not None:
        (r, b), vs = clash
        violations.append(ProperViolation(
            condition=1,
            message=f"a blue and a red component share {len(vs)} vertices",
            witness={
                "red_component": [v for v, lab in zip(g.vertices, red) if lab == r],
                "blue_component": [v for v, lab in zip(g.vertices, blue) if lab == b],
                "shared": vs,
            },
        ))

    for colour, labels, partial, path_colour, path_labels in (
        (Colour.BLUE, blue, blue_partial, Colour.RED, red),
        (Colour.RED, red, red_partial, Colour.BLUE, blue),
    ):
        reached: Dict[int, Tuple[int, int]] = {}
        found = None
        for i, (lab, path_lab) in enumerate(zip(labels, path_labels)):
            if not partial[lab]:
                continue
            seen = reached.setdefault(int(path_lab), (int(lab), i))
            if seen[0] != lab:
                found = (seen[1], i)
                break
        if found is not None:
            u, v = g.vertices[found[0]], g.vertices[found[1]]
            graph = g.to_networkx(c.edges_of(path_colour))
            violations.append(ProperViolation(
                condition=2,
                message=f"two {colour.value} partially invariant components are joined by a {path_colour.value} path",
                witness={"colour": colour.value, "path": list(nx.shortest_path(graph, u, v))},
            ))

    doubly = [v for v, r, b in zip(g.vertices, red, blue) if red_partial[r] and blue_partial[b]]
    if len(doubly) > 1:
        violations.append(ProperViolation(
            condition=3,
            message="more than one vertex lies in a red and a blue partially invariant component",
            witness={"vertices": doubly[:2]},
        ))
    return ProperConditionsReport(ok=not violations, violations=violations)


class ProperPlacementReport(BaseModel):
    """Proper-placement conditions plus the injectivity of a sampled motion."""

    conditions: ProperConditionsReport
    frames: int
    non_injective_frames: List[int]
    perturbed_non_injective_frames: List[int]
    max_non_injective_frames: int

    @property
    def ok(self) -> bool:
        return (
            self.conditions.ok
            and len(self.non_injective_frames) <= self.max_non_injective_frames
            and not self.perturbed_non_injective_frames
        )

    def to_json(self) -> Dict[str, Any]:
        payload = self.model_dump(mode="json")
        payload["ok"] = self.ok
        return payload


def check_proper_placement(
    g: SymmetricGraph,
    c: EdgeColouring,
    frames: Optional[int] = None,
    seed: Optional[int] = None,
    tolerances: Optional[Tolerances] = None,
) -> ProperPlacementReport:
    """Sample the grid motion of c and count frames where two vertices coincide.

    A proper motion has only finitely many non-injective frames, so a
    re-sample at perturbed parameters must be injective everywhere.
    """
    conditions = check_proper_conditions(g, c)
    tol = tolerances or Tolerances()
    mo = construct_motion(g, c, seed=seed)
    ts = default_parameters(frames)
    sampled = verify_motion(g, sample_motion(mo, ts), tol)
    perturbed = verify_motion(g, sample_motion(mo, perturbed_parameters(ts)), tol)
    report = ProperPlacementReport(
        conditions=conditions,
        frames=len(ts),
        non_injective_frames=sampled.non_injective_frames,
        perturbed_non_injective_frames=perturbed.non_injective_frames,
        max_non_injective_frames=settings.max_non_injective_frames,
    )
    logger.info("proper placement check", ok=report.ok, non_injective=len(report.non_injective_frames))
    return report
