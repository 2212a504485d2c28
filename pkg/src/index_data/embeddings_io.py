"""
Readers and writers for embedding files.

Binary layout (little endian):
    magic  b"EMB1"
    u32    count
    u32    dim
    u8     normalized flag
    f32    count x dim row-major matrix
    u64    count record ids

A JSON-lines alternate with one {"record_id": int, "vector": [...]} object per
line is accepted for interoperability.
"""

import json
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Union

import numpy as np

from ..errors import DimMismatch, EmbeddingFormatError
from .vectors import EmbeddingVector

MAGIC = b"EMB1"
HEADER = struct.Struct("<4sIIB")

PathLike = Union[str, Path]


@dataclass(frozen=True, eq=False)
class EmbeddingSet:
    """Embeddings as read from a file: ids aligned with matrix rows."""

    record_ids: np.ndarray
    matrix: np.ndarray
    normalized: bool = False

    @property
    def count(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[1])

    def vector(self, position: int) -> EmbeddingVector:
        return EmbeddingVector(self.matrix[position], self.normalized)

    def as_dict(self) -> Dict[int, EmbeddingVector]:
        return {int(rid): self.vector(i) for i, rid in enumerate(self.record_ids)}


def write_embeddings(path: PathLike, embeddings: EmbeddingSet) -> None:
    matrix = np.ascontiguousarray(embeddings.matrix, dtype="<f4")
    ids = np.ascontiguousarray(embeddings.record_ids, dtype="<u8")
    if matrix.ndim != 2 or ids.shape[0] != matrix.shape[0]:
        raise EmbeddingFormatError("record_ids must align with matrix rows")

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(HEADER.pack(MAGIC, matrix.shape[0], matrix.shape[1], int(embeddings.normalized)))
        f.write(matrix.tobytes())
        f.write(ids.tobytes())


def _read_binary(path: Path) -> EmbeddingSet:
    size = path.stat().st_size
    if size < HEADER.size:
        raise EmbeddingFormatError(f"{path}: file too short for an EMB1 header")
    with open(path, "rb") as f:
        magic, count, dim, flag = HEADER.unpack(f.read(HEADER.size))
    if magic != MAGIC:
        raise EmbeddingFormatError(f"{path}: bad magic {magic!r}")
    if dim == 0 and count:
        raise EmbeddingFormatError(f"{path}: zero dimension")

    expected = HEADER.size + count * dim * 4 + count * 8
    if size != expected:
        raise EmbeddingFormatError(f"{path}: expected {expected} bytes, found {size}")

    if count == 0:
        empty = np.zeros((0, dim), dtype=np.float32)
        return EmbeddingSet(np.zeros(0, dtype=np.uint64), empty, bool(flag))

    # the float block starts at an unaligned offset, so copy out of the map
    block = np.memmap(path, dtype="<f4", mode="r", offset=HEADER.size, shape=(count, dim))
    matrix = np.array(block, dtype=np.float32)
    del block
    ids = np.fromfile(path, dtype="<u8", count=count, offset=HEADER.size + count * dim * 4)
    return EmbeddingSet(ids.astype(np.uint64), matrix, bool(flag))


def _read_jsonl(path: Path) -> EmbeddingSet:
    ids: List[int] = []
    rows: List[List[float]] = []
    dim = None
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                record_id = int(obj["record_id"])
                vector = [float(x) for x in obj["vector"]]
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
                raise EmbeddingFormatError(f"{path}:{line_no}: {e}") from e
            if dim is None:
                dim = len(vector)
            elif len(vector) != dim:
                raise DimMismatch(dim, len(vector))
            ids.append(record_id)
            rows.append(vector)

    matrix = np.asarray(rows, dtype=np.float32).reshape(len(rows), dim or 0)
    return EmbeddingSet(np.asarray(ids, dtype=np.uint64), matrix, normalized=False)


def read_embeddings(path: PathLike) -> EmbeddingSet:
    """Read an EMB1 binary file or its JSON-lines alternate."""
    path = Path(path)
    if path.suffix.lower() in (".jsonl", ".json"):
        return _read_jsonl(path)
    with open(path, "rb") as f:
        head = f.read(len(MAGIC))
    if head == MAGIC:
        return _read_binary(path)
    return _read_jsonl(path)
