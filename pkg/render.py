"""
SVG frames of a sampled motion, one file per frame.

Output is deterministic: fixed hash salt, no date metadata, axes limits fixed
over the whole motion so that consecutive frames line up.
"""

import io
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import matplotlib

matplotlib.use("Agg")

import numpy as np  # noqa: E402
from matplotlib.collections import LineCollection  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402

from formats import write_bytes_atomic  # noqa: E402
from graph_core import SymmetricGraph  # noqa: E402
from logging_setup import get_logger  # noqa: E402
from motion import Placement, require_frames_match  # noqa: E402
from nac import Colour, EdgeColouring  # noqa: E402

logger = get_logger(__name__)

EDGE_COLOURS = {Colour.RED: "#c0392b", Colour.BLUE: "#2e5fa8"}
PLAIN_EDGE = "#444444"
VERTEX_COLOUR = "#111111"
INVARIANT_COLOUR = "#e6a700"

matplotlib.rcParams["svg.hashsalt"] = "symflex"
matplotlib.rcParams["svg.fonttype"] = "none"


def _limits(stack: np.ndarray) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    lo = stack.reshape(-1, 2).min(axis=0)
    hi = stack.reshape(-1, 2).max(axis=0)
    span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-9))
    margin = 0.1 * span
    cx, cy = (lo + hi) / 2
    half = span / 2 + margin
    return (cx - half, cx + half), (cy - half, cy + half)


def render_frame(
    g: SymmetricGraph,
    frame: Placement,
    limits: Tuple[Tuple[float, float], Tuple[float, float]],
    colouring: Optional[EdgeColouring] = None,
    labels: bool = True,
) -> bytes:
    """Draw one placement and return the SVG bytes."""
    pos = frame.array(g)
    fig = Figure(figsize=(4, 4))
    ax = fig.add_subplot(1, 1, 1)
    ax.set_xlim(*limits[0])
    ax.set_ylim(*limits[1])
    ax.set_aspect("equal")
    ax.axis("off")

    if g.size:
        ends = g.edge_array
        segments = np.stack([pos[ends[:, 0]], pos[ends[:, 1]]], axis=1)
        if colouring is None:
            colours = [PLAIN_EDGE] * g.size
        else:
            colours = [EDGE_COLOURS[colouring.colour_of(u, v)] for u, v in g.edges]
        ax.add_collection(LineCollection(segments, colors=colours, linewidths=2.0))

    fills = [INVARIANT_COLOUR if inv else VERTEX_COLOUR for inv in g.invariant_mask]
    ax.scatter(pos[:, 0], pos[:, 1], s=24, c=fills, zorder=3)
    if labels:
        for v, (x, y) in zip(g.vertices, pos):
            ax.annotate(v, (x, y), xytext=(4, 4), textcoords="offset points", fontsize=7)
    ax.set_title(f"t = {frame.t:.4f}", fontsize=8)

    buf = io.BytesIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    return buf.getvalue()


def render_frames(
    g: SymmetricGraph,
    frames: Sequence[Placement],
    out_dir: Union[str, Path],
    colouring: Optional[EdgeColouring] = None,
    every: int = 1,
    labels: bool = True,
) -> List[Path]:
    """Write frame_0000.svg, frame_0001.svg, ... for every `every`-th placement."""
    if not frames:
        return []
    require_frames_match(g, frames)
    every = max(1, every)
    stack = np.stack([frame.array(g) for frame in frames])
    limits = _limits(stack)
    out = Path(out_dir)
    written = []
    for i, frame in enumerate(frames[::every]):
        path = out / f"frame_{i:04d}.svg"
        write_bytes_atomic(path, render_frame(g, frame, limits, colouring=colouring, labels=labels))
        written.append(path)
    logger.info("✅ frames rendered", count=len(written), out_dir=str(out))
    return written
