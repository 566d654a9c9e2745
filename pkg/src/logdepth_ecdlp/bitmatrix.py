"""Dense matrices over F2."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class BitMatrix:
    """A ``rows x cols`` matrix over F2 backed by a uint8 array."""

    rows: int
    cols: int
    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=np.uint8) & 1
        if bits.shape != (self.rows, self.cols):
            raise ValueError(f"bit storage {bits.shape} does not match {self.rows}x{self.cols}")
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_array(cls, array) -> BitMatrix:
        array = np.atleast_2d(np.asarray(array, dtype=np.uint8))
        return cls(array.shape[0], array.shape[1], array)

    @classmethod
    def from_columns(cls, columns: list[int], rows: int) -> BitMatrix:
        """Build from integer-packed columns (bit ``i`` of ``columns[j]`` is entry ``(i, j)``)."""
        bits = np.zeros((rows, len(columns)), dtype=np.uint8)
        for j, col in enumerate(columns):
            bits[:, j] = int_to_bits(col, rows)
        return cls(rows, len(columns), bits)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(n, n, np.eye(n, dtype=np.uint8))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(rows, cols, np.zeros((rows, cols), dtype=np.uint8))

    def __eq__(self, other):
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash((self.rows, self.cols, self.bits.tobytes()))

    def __repr__(self):
        body = "\n".join("  " + "".join(str(b) for b in row) for row in self.bits)
        return f"BitMatrix({self.rows}x{self.cols}\n{body})"

    def __matmul__(self, other):
        if isinstance(other, BitMatrix):
            if self.cols != other.rows:
                raise ValueError("inner dimensions differ")
            prod = (self.bits.astype(np.int64) @ other.bits.astype(np.int64)) & 1
            return BitMatrix(self.rows, other.cols, prod)
        vec = np.asarray(other, dtype=np.int64)
        if vec.shape[0] != self.cols:
            raise ValueError(f"vector of length {vec.shape[0]} for matrix with {self.cols} columns")
        return ((self.bits.astype(np.int64) @ vec) & 1).astype(np.uint8)

    def apply_int(self, value: int) -> int:
        """Matrix-vector product with an integer-packed vector; returns packed result."""
        return bits_to_int(self @ int_to_bits(value, self.cols))

    def row_weights(self) -> np.ndarray:
        return self.bits.sum(axis=1)

    def col_weights(self) -> np.ndarray:
        return self.bits.sum(axis=0)

    def rank(self) -> int:
        rows = [bits_to_int(r) for r in self.bits]
        rank = 0
        for bit in range(self.cols):
            pivot = next((i for i in range(rank, len(rows)) if rows[i] >> bit & 1), None)
            if pivot is None:
                continue
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            for i in range(len(rows)):
                if i != rank and rows[i] >> bit & 1:
                    rows[i] ^= rows[rank]
            rank += 1
        return rank


def int_to_bits(value: int, length: int) -> np.ndarray:
    """Little-endian bitvector (index 0 is the least significant bit)."""
    if value >> length:
        raise ValueError(f"value {value:#x} does not fit in {length} bits")
    return np.array([(value >> i) & 1 for i in range(length)], dtype=np.uint8)


def bits_to_int(bits) -> int:
    out = 0
    for i, b in enumerate(np.asarray(bits).ravel()):
        if b & 1:
            out |= 1 << i
    return out
