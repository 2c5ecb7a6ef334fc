"""Orthonormal dictionaries mapping sparse messages to codewords."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import hadamard

from .errors import DimensionMismatch, HadamardOrderInvalid, NonOrthonormalDictionary

ORTHO_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Dictionary:
    """One of ``identity``, ``hadamard`` (Sylvester, normalised) or ``explicit``."""

    kind: str = "identity"
    order: int | None = None
    matrix: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def identity(cls) -> "Dictionary":
        return cls("identity")

    @classmethod
    def hadamard(cls, order: int) -> "Dictionary":
        return cls("hadamard", order=order)

    @classmethod
    def explicit(cls, matrix) -> "Dictionary":
        u = np.asarray(matrix, dtype=float)
        u.setflags(write=False)
        return cls("explicit", order=u.shape[0], matrix=u)

    def __eq__(self, other):
        if not isinstance(other, Dictionary):
            return NotImplemented
        if (self.kind, self.order) != (other.kind, other.order):
            return False
        if self.matrix is None or other.matrix is None:
            return self.matrix is other.matrix
        return bool(np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash((self.kind, self.order))

    def validate(self, n: int) -> None:
        if self.kind == "identity":
            return
        if self.kind == "hadamard":
            order = n if self.order is None else self.order
            if order != n:
                raise DimensionMismatch(f"Hadamard order {order} != block length {n}")
            if n < 1 or n & (n - 1):
                raise HadamardOrderInvalid(f"Hadamard order must be a power of two, got {n}")
            return
        if self.kind == "explicit":
            u = self.matrix
            if u is None or u.ndim != 2 or u.shape != (n, n):
                raise DimensionMismatch(f"explicit dictionary must be {n}x{n}")
            if not np.all(np.isfinite(u)):
                raise NonOrthonormalDictionary("dictionary has non-finite entries")
            err = np.max(np.abs(u.T @ u - np.eye(n)))
            if err > ORTHO_TOL:
                raise NonOrthonormalDictionary(f"max |U^T U - I| = {err:.3e}")
            return
        raise ValueError(f"unknown dictionary kind {self.kind!r}")

    def to_json(self):
        if self.kind == "identity":
            return "identity"
        if self.kind == "hadamard":
            return "hadamard"
        return {"explicit": self.matrix.tolist()}

    @classmethod
    def from_json(cls, obj) -> "Dictionary":
        if obj is None or obj == "identity":
            return cls.identity()
        if obj == "hadamard":
            return cls("hadamard")
        if isinstance(obj, dict):
            if "explicit" in obj:
                return cls.explicit(obj["explicit"])
            if obj.get("kind") == "hadamard":
                return cls("hadamard", order=obj.get("order"))
        raise ValueError(f"unrecognised dictionary {obj!r}")


@lru_cache(maxsize=16)
def _hadamard_matrix(n: int) -> np.ndarray:
    h = hadamard(n).astype(float) / np.sqrt(n)
    h.setflags(write=False)
    return h


def _check(kind: Dictionary, n: int) -> None:
    if kind.kind == "hadamard" and (n < 1 or n & (n - 1)):
        raise HadamardOrderInvalid(f"Hadamard order must be a power of two, got {n}")
    if kind.kind in ("hadamard", "explicit") and kind.order is not None and kind.order != n:
        raise DimensionMismatch(f"dictionary order {kind.order} != vector length {n}")


def apply_dictionary(kind: Dictionary, x: np.ndarray) -> np.ndarray:
    """Return ``U @ x``; ``x`` may be a vector or a ``(T, N)`` batch of rows."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    _check(kind, n)
    if kind.kind == "identity":
        return x.copy()
    u = _hadamard_matrix(n) if kind.kind == "hadamard" else kind.matrix
    return x @ u.T


def invert_dictionary(kind: Dictionary, y: np.ndarray) -> np.ndarray:
    """Return ``U^T @ y``. Orthonormality keeps white noise white with the same sigma."""
    y = np.asarray(y, dtype=float)
    n = y.shape[-1]
    _check(kind, n)
    if kind.kind == "identity":
        return y.copy()
    u = _hadamard_matrix(n) if kind.kind == "hadamard" else kind.matrix
    return y @ u
