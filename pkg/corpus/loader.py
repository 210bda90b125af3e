from pathlib import Path
from typing import List, Optional

from formats import ColouringDocument, GraphDocument, read_document
from graph_core import SymmetricGraph
from logging_setup import get_logger
from nac import EdgeColouring

logger = get_logger(__name__)

FIXTURE_DIR = Path(__file__).parent / "fixtures"
COLOURING_SUFFIX = ".colouring.json"

# graphs that intentionally fail validation
INVALID = frozenset({"invalid_adjacent_invariants"})


def fixture_path(name: str) -> Path:
    return FIXTURE_DIR / f"{name}.json"


def fixture_names(include_invalid: bool = False) -> List[str]:
    """Graph fixtures in alphabetical order, colourings excluded."""
    names = sorted(
        p.name[: -len(".json")]
        for p in FIXTURE_DIR.glob("*.json")
        if not p.name.endswith(COLOURING_SUFFIX)
    )
    return [name for name in names if include_invalid or name not in INVALID]


def load_graph(name: str) -> SymmetricGraph:
    path = fixture_path(name)
    if not path.exists():
        logger.error("❌ unknown fixture", name=name)
        raise FileNotFoundError(path)
    return SymmetricGraph.from_document(read_document(path, GraphDocument))


def load_colouring(name: str, g: Optional[SymmetricGraph] = None) -> EdgeColouring:
    """The colouring shipped next to fixture `name` (twelve_c4, double_square_c2, spider_c4)."""
    g = g or load_graph(name)
    doc = read_document(FIXTURE_DIR / f"{name}{COLOURING_SUFFIX}", ColouringDocument)
    return EdgeColouring.from_document(g, doc)
