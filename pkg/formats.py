"""
JSON documents exchanged by the command line and the fixtures.

Documents are lenient pydantic models: they only check the JSON shape. The
semantic checks (unknown endpoints, loops, symmetry) belong to graph_core so
that every problem can be reported at once.
"""

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Type, TypeVar, Union

from pydantic import BaseModel, RootModel, ValidationError, field_validator

from errors import GraphFormatError

Point = Tuple[float, float]
M = TypeVar("M", bound=BaseModel)

SIGNIFICANT_DIGITS = 12


def vertex_sort_key(v: str) -> Tuple[int, int, str]:
    """Natural order: ASCII-digit ids by value, then the rest lexicographically.

    The id itself breaks ties, so distinct ids never compare equal ("01" < "1").
    """
    if v.isascii() and v.isdigit():
        return (0, int(v), v)
    return (1, 0, v)


def round_float(x: float) -> float:
    """Round to the number of significant digits used in every JSON output."""
    return float(f"{x:.{SIGNIFICANT_DIGITS}g}") + 0.0


def round_point(p: Any) -> Point:
    return (round_float(float(p[0])), round_float(float(p[1])))


def _as_ids(value: Any) -> Any:
    if isinstance(value, list):
        return [_as_ids(item) for item in value]
    if isinstance(value, (int, str)) and not isinstance(value, bool):
        return str(value)
    return value


class GraphDocument(BaseModel):
    """{ "n": 4, "vertices": [...], "edges": [[u, v], ...], "omega": {u: ω(u)} }"""

    n: int
    vertices: List[str]
    edges: List[List[str]]
    omega: Dict[str, str]

    @field_validator("vertices", "edges", mode="before")
    @classmethod
    def coerce_ids(cls, v: Any) -> Any:
        return _as_ids(v)

    @field_validator("omega", mode="before")
    @classmethod
    def coerce_omega(cls, v: Any) -> Any:
        if isinstance(v, dict):
            return {str(key): _as_ids(value) for key, value in v.items()}
        return v


class ColouringDocument(BaseModel):
    """{ "red": [[u, v], ...], "blue": [[u, v], ...] }"""

    red: List[List[str]]
    blue: List[List[str]]

    @field_validator("red", "blue", mode="before")
    @classmethod
    def coerce_ids(cls, v: Any) -> Any:
        return _as_ids(v)


class FrameDocument(BaseModel):
    t: float
    positions: Dict[str, Point]


class MotionDocument(BaseModel):
    """Sampled frames, optionally with the ā/b̄ data that generated them."""

    n: int
    frames: List[FrameDocument]
    abar: Optional[Dict[str, Point]] = None
    bbar: Optional[Dict[str, Point]] = None


class ClosureRoundDocument(BaseModel):
    added: List[List[str]]


class ClosureReportDocument(BaseModel):
    complete: bool
    rounds: List[ClosureRoundDocument]
    degenerate_pairs: List[List[str]]
    verdict: str


class CheckReportDocument(BaseModel):
    ok: bool
    reason: Optional[str] = None
    witness: Optional[Dict[str, Any]] = None


class ColouringListDocument(RootModel[List[ColouringDocument]]):
    pass


def dumps_payload(payload: Any) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def dumps(document: BaseModel) -> str:
    """Serialize a document deterministically (insertion order, fixed indent)."""
    return dumps_payload(document.model_dump(mode="json", exclude_none=isinstance(document, MotionDocument)))


def loads(text: str, model: Type[M]) -> M:
    try:
        return model.model_validate(json.loads(text))
    except (json.JSONDecodeError, ValidationError) as e:
        raise GraphFormatError(f"invalid {model.__name__}: {e}") from e


def read_document(path: Union[str, Path], model: Type[M]) -> M:
    """Read a document; OSError propagates, malformed content raises GraphFormatError."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return loads(text, model)


def write_bytes_atomic(path: Union[str, Path], data: bytes) -> None:
    """Write through a temporary file in the target directory, then rename."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_text_atomic(path: Union[str, Path], text: str) -> None:
    write_bytes_atomic(path, text.encode("utf-8"))
