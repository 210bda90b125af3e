"""
symflex command line.

    python cli.py validate graph.json
    python cli.py nac list graph.json --count-only
    python cli.py symnac list graph.json --up-to-conjugation
    python cli.py motion build graph.json colouring.json --frames 360 --out frames.json
    python cli.py motion verify frames.json --graph graph.json
    python cli.py closure graph.json
    python cli.py proper graph.json [colouring.json]
    python cli.py render frames.json --graph graph.json --out-dir svg/

JSON goes to stdout (or --out), logs to stderr. Exit codes: 0 success,
1 I/O or parse error, 2 invalid input or a negative check, 3 search bound
exceeded.
"""

import argparse
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from pydantic import BaseModel

import metrics
from closure import proper_flex_verdict
from errors import GraphFormatError, SearchBoundExceeded, SymflexError
from formats import (
    ColouringDocument,
    ColouringListDocument,
    GraphDocument,
    MotionDocument,
    dumps,
    dumps_payload,
    read_document,
    write_text_atomic,
)
from graph_core import SymmetricGraph, validate_symmetric_graph
from logging_setup import configure_logging, get_logger
from motion import (
    ParametricMotion,
    Tolerances,
    check_proper_placement,
    construct_motion,
    default_parameters,
    perturbed_parameters,
    placements_from_document,
    verify_motion,
)
from nac import Colour, EdgeColouring, almost_cycle_oracle, enumerate_nac, is_nac
from render import render_frames
from settings import SymflexSettings, settings
from symmetry_nac import component_symmetry_flags, enumerate_cn_symmetric_nac, is_cn_symmetric_nac

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_IO = 1
EXIT_INVALID = 2
EXIT_BOUND = 3


class Workspace(BaseModel):
    """Resolved input and output paths of one invocation."""

    graph: Optional[Path] = None
    colouring: Optional[Path] = None
    motion: Optional[Path] = None
    out: Optional[Path] = None
    out_dir: Optional[Path] = None
    seed: Optional[int] = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "Workspace":
        def resolve(name: str) -> Optional[Path]:
            value = getattr(args, name, None)
            return Path(value).resolve() if value else None

        return cls(
            graph=resolve("graph"),
            colouring=resolve("colouring"),
            motion=resolve("motion"),
            out=resolve("out"),
            out_dir=resolve("out_dir"),
            seed=getattr(args, "seed", None),
        )

    def check_inputs(self) -> None:
        for path in (self.graph, self.colouring, self.motion):
            if path is not None and not path.is_file():
                raise FileNotFoundError(f"no such file: {path}")

    def emit(self, text: str) -> None:
        if self.out is None:
            sys.stdout.write(text)
            sys.stdout.flush()
        else:
            write_text_atomic(self.out, text)


def effective_settings(args: argparse.Namespace) -> SymflexSettings:
    """The global settings with command line overrides applied."""
    overrides: Dict[str, Any] = {}
    for flag in ("max_edges", "max_orbits", "tolerance", "frames", "log_level"):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[flag] = value
    if getattr(args, "json_logs", False):
        overrides["log_json"] = True
    if not overrides:
        return settings
    return SymflexSettings.model_validate({**settings.model_dump(), **overrides})


def _graph(ws: Workspace) -> SymmetricGraph:
    return SymmetricGraph.from_document(read_document(ws.graph, GraphDocument))


def _colouring(ws: Workspace, g: SymmetricGraph) -> EdgeColouring:
    return EdgeColouring.from_document(g, read_document(ws.colouring, ColouringDocument))


def _tolerances(cfg: SymflexSettings) -> Tolerances:
    return Tolerances(
        equality=cfg.tolerance,
        nontrivial_factor=cfg.nontrivial_factor,
        injectivity=cfg.injectivity_tolerance,
    )


def _emit_list(ws: Workspace, args: argparse.Namespace, colourings: List[EdgeColouring]) -> int:
    if args.count_only:
        ws.emit(f"{len(colourings)}\n")
    else:
        ws.emit(dumps(ColouringListDocument([c.to_document() for c in colourings])))
    return EXIT_OK


# -- commands -----------------------------------------------------------------


def cmd_validate(args: argparse.Namespace, cfg: SymflexSettings, ws: Workspace) -> int:
    report = validate_symmetric_graph(read_document(ws.graph, GraphDocument))
    ws.emit(dumps_payload({"valid": report.valid, **report.model_dump(mode="json")}))
    if not report.valid:
        logger.warning("❌ graph is not Cn-symmetric", summary=report.summary())
        return EXIT_INVALID
    return EXIT_OK


def cmd_nac_list(args: argparse.Namespace, cfg: SymflexSettings, ws: Workspace) -> int:
    g = _graph(ws)
    colourings = enumerate_nac(g, up_to_conjugation=args.up_to_conjugation, max_edges=cfg.max_edges, workers=cfg.threads)
    return _emit_list(ws, args, colourings)


def cmd_nac_check(args: argparse.Namespace, cfg: SymflexSettings, ws: Workspace) -> int:
    g = _graph(ws)
    c = _colouring(ws, g)
    if args.oracle:
        ok = almost_cycle_oracle(g, c)
        payload = {"ok": ok, "reason": None if ok else "rejected by cycle enumeration", "witness": None}
    else:
        check = is_nac(g, c)
        payload = {"ok": check.ok, "reason": check.reason, "witness": check.witness()}
    ws.emit(dumps_payload(payload))
    return EXIT_OK if payload["ok"] else EXIT_INVALID


def cmd_symnac_list(args: argparse.Namespace, cfg: SymflexSettings, ws: Workspace) -> int:
    g = _graph(ws)
    colourings = enumerate_cn_symmetric_nac(
        g, up_to_conjugation=args.up_to_conjugation, max_orbits=cfg.max_orbits, workers=cfg.threads
    )
    return _emit_list(ws, args, colourings)


def cmd_symnac_check(args: argparse.Namespace, cfg: SymflexSettings, ws: Workspace) -> int:
    g = _graph(ws)
    report = is_cn_symmetric_nac(g, _colouring(ws, g))
    ws.emit(dumps(report.to_document()))
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_symnac_flags(args: argparse.Namespace, cfg: SymflexSettings, ws: Workspace) -> int:
    g = _graph(ws)
    c = _colouring(ws, g)
    payload = {
        colour.value: component_symmetry_flags(g, c, colour).model_dump(mode="json")["components"]
        for colour in (Colour.RED, Colour.BLUE)
    }
    ws.emit(dumps_payload(payload))
    return EXIT_OK


def cmd_motion_build(args: argparse.Namespace, cfg: SymflexSettings, ws: Workspace) -> int:
    g = _graph(ws)
    mo = construct_motion(g, _colouring(ws, g), seed=ws.seed)
    ws.emit(dumps(mo.to_document(default_parameters(cfg.frames))))
    return EXIT_OK


def cmd_motion_sample(args: argparse.Namespace, cfg: SymflexSettings, ws: Workspace) -> int:
    g = _graph(ws)
    mo = ParametricMotion.from_document(g, read_document(ws.motion, MotionDocument))
    ts = default_parameters(cfg.frames)
    if args.perturb:
        ts = perturbed_parameters(ts)
    ws.emit(dumps(mo.to_document(ts)))
    return EXIT_OK


def cmd_motion_verify(args: argparse.Namespace, cfg: SymflexSettings, ws: Workspace) -> int:
    g = _graph(ws)
    doc = read_document(ws.motion, MotionDocument)
    report = verify_motion(g, placements_from_document(doc, g), _tolerances(cfg))
    ws.emit(dumps_payload(report.to_json()))
    return EXIT_OK if report.passed else EXIT_INVALID


def cmd_closure(args: argparse.Namespace, cfg: SymflexSettings, ws: Workspace) -> int:
    g = _graph(ws)
    result = proper_flex_verdict(g, max_orbits=cfg.max_orbits, workers=cfg.threads)
    ws.emit(dumps(result.closure.to_document(result.verdict)))
    return EXIT_OK


def cmd_proper(args: argparse.Namespace, cfg: SymflexSettings, ws: Workspace) -> int:
    g = _graph(ws)
    if ws.colouring is not None:
        report = check_proper_placement(g, _colouring(ws, g), frames=cfg.frames, seed=ws.seed, tolerances=_tolerances(cfg))
        ws.emit(dumps_payload(report.to_json()))
        return EXIT_OK if report.ok else EXIT_INVALID

    result = proper_flex_verdict(g, max_orbits=cfg.max_orbits, workers=cfg.threads)
    ws.emit(dumps_payload({
        "verdict": result.verdict.value,
        "reason": result.reason,
        "colouring": result.colouring.to_document().model_dump(mode="json") if result.colouring else None,
        "on_closure": result.on_closure,
    }))
    return EXIT_OK


def cmd_render(args: argparse.Namespace, cfg: SymflexSettings, ws: Workspace) -> int:
    g = _graph(ws)
    c = _colouring(ws, g) if ws.colouring is not None else None
    frames = placements_from_document(read_document(ws.motion, MotionDocument), g)
    written = render_frames(g, frames, ws.out_dir, colouring=c, every=args.every, labels=not args.no_labels)
    ws.emit(dumps_payload({"frames": [p.name for p in written]}))
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="Write the JSON result here instead of stdout")
    common.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    common.add_argument("--json-logs", action="store_true", help="Emit logs as JSON lines on stderr")
    common.add_argument("--metrics-file", help="Write Prometheus metrics to this file after the command")

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--max-edges", type=int, help="Refuse NAC enumeration above this |E|")
    search.add_argument("--max-orbits", type=int, help="Refuse symmetric enumeration above this many edge orbits")

    listing = argparse.ArgumentParser(add_help=False)
    listing.add_argument("--up-to-conjugation", action="store_true", help="One colouring per conjugate pair")
    listing.add_argument("--count-only", action="store_true", help="Print only the number of colourings")

    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--frames", type=int, help="Number of parameters on [0, 2pi)")
    sampling.add_argument("--seed", type=int, help="Sample base points from this seed")

    parser = argparse.ArgumentParser(
        prog="symflex", description="Rotationally symmetric flexibility of graphs via NAC-colourings"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("validate", parents=[common], help="Check that a graph is Cn-symmetric")
    p.add_argument("graph")
    p.set_defaults(handler=cmd_validate)

    nac = commands.add_parser("nac", help="NAC-colourings").add_subparsers(dest="action", required=True)
    p = nac.add_parser("list", parents=[common, search, listing])
    p.add_argument("graph")
    p.set_defaults(handler=cmd_nac_list)
    p = nac.add_parser("check", parents=[common])
    p.add_argument("graph")
    p.add_argument("colouring")
    p.add_argument("--oracle", action="store_true", help="Check by explicit cycle enumeration")
    p.set_defaults(handler=cmd_nac_check)

    symnac = commands.add_parser("symnac", help="Cn-symmetric NAC-colourings").add_subparsers(dest="action", required=True)
    p = symnac.add_parser("list", parents=[common, search, listing])
    p.add_argument("graph")
    p.set_defaults(handler=cmd_symnac_list)
    p = symnac.add_parser("check", parents=[common])
    p.add_argument("graph")
    p.add_argument("colouring")
    p.set_defaults(handler=cmd_symnac_check)
    p = symnac.add_parser("flags", parents=[common], help="Symmetry flags of the monochromatic components")
    p.add_argument("graph")
    p.add_argument("colouring")
    p.set_defaults(handler=cmd_symnac_flags)

    motion = commands.add_parser("motion", help="Grid construction motions").add_subparsers(dest="action", required=True)
    p = motion.add_parser("build", parents=[common, sampling])
    p.add_argument("graph")
    p.add_argument("colouring")
    p.set_defaults(handler=cmd_motion_build)
    p = motion.add_parser("sample", parents=[common, sampling], help="Re-evaluate a built motion at new parameters")
    p.add_argument("motion")
    p.add_argument("--graph", required=True)
    p.add_argument("--perturb", action="store_true", help="Shift every parameter off the uniform grid")
    p.set_defaults(handler=cmd_motion_sample)
    p = motion.add_parser("verify", parents=[common])
    p.add_argument("motion")
    p.add_argument("--graph", required=True)
    p.add_argument("--tolerance", type=float, help="Residual tolerance for edge lengths and symmetry")
    p.set_defaults(handler=cmd_motion_verify)

    p = commands.add_parser("closure", parents=[common, search], help="Cn-symmetric constant distance closure")
    p.add_argument("graph")
    p.set_defaults(handler=cmd_closure)

    p = commands.add_parser("proper", parents=[common, search, sampling], help="Proper symmetric flexibility")
    p.add_argument("graph")
    p.add_argument("colouring", nargs="?")
    p.add_argument("--tolerance", type=float)
    p.set_defaults(handler=cmd_proper)

    p = commands.add_parser("render", parents=[common], help="SVG frames of a sampled motion")
    p.add_argument("motion")
    p.add_argument("--graph", required=True)
    p.add_argument("--colouring")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--every", type=int, default=1, help="Render every k-th frame")
    p.add_argument("--no-labels", action="store_true")
    p.set_defaults(handler=cmd_render)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    handler: Callable[..., int] = args.handler
    try:
        cfg = effective_settings(args)
    except ValueError as e:
        sys.stderr.write(f"❌ invalid option: {e}\n")
        return EXIT_INVALID
    configure_logging(cfg.log_level, cfg.log_json)

    try:
        ws = Workspace.from_args(args)
        ws.check_inputs()
        return handler(args, cfg, ws)
    except SearchBoundExceeded as e:
        logger.error("❌ search bound exceeded", error=str(e), bound=e.bound)
        sys.stderr.write(f"{e}\n")
        return EXIT_BOUND
    except (OSError, GraphFormatError) as e:
        logger.error("❌ cannot read input", error=str(e))
        sys.stderr.write(f"{e}\n")
        return EXIT_IO
    except SymflexError as e:
        logger.error("❌ command failed", error=str(e))
        sys.stderr.write(f"{e}\n")
        return EXIT_INVALID
    finally:
        if args.metrics_file:
            metrics.write_metrics(args.metrics_file)


if __name__ == "__main__":
    sys.exit(main())
