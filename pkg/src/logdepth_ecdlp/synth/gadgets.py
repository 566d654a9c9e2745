"""CNOT trees: fan-out, parity and constant F2-linear maps.

All trees are left-balanced with ties broken toward lower positions, so
a group ``[w0, w1, ..., w_{m-1}]`` is processed in ``ceil(log2 m)`` layers.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..bitmatrix import BitMatrix
from ..circuit import Circuit, CircuitBuilder
from .config import bennett


def _pad(groups) -> np.ndarray:
    groups = [np.asarray(g, dtype=np.int64) for g in groups]
    width = max((len(g) for g in groups), default=0)
    out = np.full((len(groups), width), -1, np.int64)
    for i, g in enumerate(groups):
        out[i, :len(g)] = g
    return out


def emit_fanout(b: CircuitBuilder, groups, reverse: bool = False):
    """Copy ``g[0]`` onto ``g[1:]`` (assumed |0>) for every group, in parallel.

    With ``reverse=True`` the same CNOTs are emitted in reverse order,
    returning the copies to |0>.
    """
    G = groups if isinstance(groups, np.ndarray) else _pad(groups)
    if G.size == 0:
        return
    L = G.shape[1]
    layers = []
    s = 1
    while s < L:
        src = G[:, :s]
        tgt = G[:, s:2 * s]
        src = src[:, :tgt.shape[1]]
        ok = tgt >= 0
        layers.append((src[ok], tgt[ok]))
        s *= 2
    for src, tgt in (reversed(layers) if reverse else layers):
        b.cx(src, tgt)


def _reduce_layers(G: np.ndarray):
    L = G.shape[1]
    s = 1
    while s < L:
        t_cols = np.arange(0, L, 2 * s)
        c_cols = t_cols + s
        keep = c_cols < L
        t, c = G[:, t_cols[keep]], G[:, c_cols[keep]]
        ok = c >= 0
        yield c[ok], t[ok]
        s *= 2


def emit_reduce(b: CircuitBuilder, groups):
    """XOR every group into its first wire (``g[0] ^= g[1] ^ ... ``), in place.

    The last wire of a group of length >= 2 is only ever read.
    """
    G = groups if isinstance(groups, np.ndarray) else _pad(groups)
    if G.size == 0:
        return
    for c, t in _reduce_layers(G):
        b.cx(c, t)


@lru_cache(maxsize=None)
def fanout_tree(m: int) -> Circuit:
    """``|x>|0...0> -> |x>|x...x>`` with ``m`` CNOTs in depth ``ceil(log2(m+1))``."""
    if m < 1:
        raise ValueError("fan-out needs m >= 1")
    b = CircuitBuilder()
    src = b.register("src", 1)
    copies = b.register("copies", m)
    emit_fanout(b, [np.concatenate([src, copies])])
    return b.build()


@lru_cache(maxsize=None)
def parity_tree(m: int) -> Circuit:
    """``target ^= src_0 ^ ... ^ src_{m-1}`` with the sources restored.

    The XOR is folded into ``src_0`` in ``ceil(log2 m)`` layers, copied to
    the target, then the fold is undone.
    """
    if m < 1:
        raise ValueError("parity needs m >= 1")
    b = CircuitBuilder()
    src = b.register("src", m)
    target = b.register("target", 1)
    bennett(b, "clean", lambda: (emit_reduce(b, [src]), src[:1])[1], target)
    return b.build()


def _tree_order(b: CircuitBuilder, orig: list, fresh: list) -> list:
    """Arrange a parity-tree row so that ``orig`` wires are never targets.

    A left-balanced reduction only writes even positions that have a
    partner, so originals go to odd slots or to the very end.
    """
    row = []
    while orig or fresh:
        if len(row) % 2 == 1:
            row.append(orig.pop(0) if orig else fresh.pop(0))
        elif fresh:
            row.append(fresh.pop(0))
        elif len(orig) == 1:
            row.append(orig.pop(0))
        else:
            row.append(int(b.ancilla(1)[0]))
    return row


def emit_matrix(b: CircuitBuilder, A: BitMatrix, inp: np.ndarray, writable: bool = False) -> np.ndarray:
    """Garbage-producing ``A @ inp``; returns the wire holding each output row.

    Input wires are left untouched unless ``writable`` (for callers that
    uncompute afterwards).  Rows of weight 0 return -1.
    """
    bits = A.bits
    inp = np.asarray(inp, dtype=np.int64)
    cw = bits.sum(axis=0)
    # fan-out: original wire plus (weight - 1) fresh copies per column
    copies = []
    for j in range(A.cols):
        extra = b.ancilla(max(int(cw[j]) - 1, 0))
        copies.append(np.concatenate([inp[j:j + 1], extra]))
    emit_fanout(b, [c for c in copies if len(c) > 1])
    used = [0] * A.cols
    rows = []
    for i in range(A.rows):
        orig, fresh = [], []
        for j in np.flatnonzero(bits[i]):
            used[j] += 1
            w = int(copies[j][used[j] % len(copies[j])])
            (orig if used[j] % len(copies[j]) == 0 else fresh).append(w)
        rows.append(fresh + orig if writable else _tree_order(b, orig, fresh))
    emit_reduce(b, [r for r in rows if len(r) > 1])
    return np.array([r[0] if r else -1 for r in rows], dtype=np.int64)


@lru_cache(maxsize=256)
def const_matrix_mul(A: BitMatrix, uncompute: str = "clean") -> Circuit:
    """``out ^= A @ in`` using CNOTs only.

    Depth is ``ceil(log2 maxcolweight) + ceil(log2 maxrowweight) + 1`` in
    garbage mode, twice the tree part plus one when cleaned.
    """
    b = CircuitBuilder()
    inp = b.register("in", A.cols)
    out = b.register("out", A.rows)

    def compute():
        res = emit_matrix(b, A, inp, writable=uncompute == "clean")
        keep = res >= 0
        return res[keep], out[keep]

    bennett(b, uncompute, compute)
    return b.build()
