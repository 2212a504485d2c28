"""
Dense embedding vectors with float32 storage.
"""

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from ..errors import DegenerateVector, InvalidVector

NORM_TOLERANCE = 1e-5


@dataclass(frozen=True, eq=False)
class EmbeddingVector:
    values: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float32)
        if values.ndim != 1 or values.shape[0] == 0:
            raise InvalidVector(f"expected a non-empty 1-d vector, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise InvalidVector("vector contains non-finite values")
        if self.normalized:
            norm = float(np.linalg.norm(values.astype(np.float64)))
            if abs(norm - 1.0) > NORM_TOLERANCE:
                raise InvalidVector(f"vector flagged normalized but has norm {norm:.6f}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def of(cls, values: Union[Sequence[float], np.ndarray], normalized: bool = False):
        return cls(np.asarray(values, dtype=np.float32), normalized)

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])

    def __len__(self) -> int:
        return self.dim

    def __eq__(self, other) -> bool:
        if not isinstance(other, EmbeddingVector):
            return NotImplemented
        return self.normalized == other.normalized and np.array_equal(
            self.values, other.values
        )


def normalize(v: EmbeddingVector) -> EmbeddingVector:
    """Scale v to unit L2 norm so that dot product equals cosine."""
    values = v.values.astype(np.float64)
    norm = np.linalg.norm(values)
    if norm == 0.0:
        raise DegenerateVector("cannot normalize a zero vector")
    return EmbeddingVector((values / norm).astype(np.float32), normalized=True)


def normalize_rows(matrix: np.ndarray) -> np.ndarray:
    """Row-wise unit normalization of a 2-d array; zero rows are rejected."""
    m64 = matrix.astype(np.float64)
    norms = np.linalg.norm(m64, axis=1)
    zero_rows = np.flatnonzero(norms == 0.0)
    if zero_rows.size:
        raise DegenerateVector(f"cannot normalize zero rows at positions {zero_rows[:10].tolist()}")
    return (m64 / norms[:, None]).astype(np.float32)
