"""Reversible GF(2^n) arithmetic: multiplier, constant linear maps, inverter."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..circuit import Circuit, CircuitBuilder
from ..field import (FieldElement, FieldSpec, build_reduction_matrix, constant_mul_matrix,
                     frobenius_matrix, itoh_tsuji_chain)
from .config import SynthConfig, bennett
from .gadgets import _pad, emit_fanout, emit_matrix, emit_reduce


def emit_mastrovito(b: CircuitBuilder, spec: FieldSpec, a, bb) -> np.ndarray:
    """Garbage-producing product ``a * bb``; returns the n result wires.

    Layers: operand fan-out, one layer of n^2 Toffolis, coefficient
    parity trees, fan-out of the high coefficients, reduction parity trees.
    """
    n = spec.n
    a = np.asarray(a, np.int64)
    bb = np.asarray(bb, np.int64)
    # inputs are only ever CNOT controls; the Toffolis act on n fresh copies
    acopy = b.ancilla(n * n).reshape(n, n)
    bcopy = b.ancilla(n * n).reshape(n, n)
    emit_fanout(b, np.concatenate([a[:, None], acopy], axis=1))
    emit_fanout(b, np.concatenate([bb[:, None], bcopy], axis=1))
    prod = b.ancilla(n * n).reshape(n, n)
    i, j = np.indices((n, n))
    # pair (i, j) uses copy j of a_i and copy i of b_j, so every copy is used once
    b.ccx(acopy[i, j].ravel(), bcopy[j, i].ravel(), prod.ravel())

    coeff = []
    for k in range(2 * n - 1):
        lo, hi = max(0, k - n + 1), min(k, n - 1)
        ii = np.arange(lo, hi + 1)
        coeff.append(prod[ii, k - ii])
    emit_reduce(b, _pad(coeff))
    roots = np.array([g[0] for g in coeff], np.int64)

    M = build_reduction_matrix(spec).bits
    cw = M.sum(axis=0)
    eta = []
    for j in range(n - 1):
        eta.append(np.concatenate([roots[n + j:n + j + 1], b.ancilla(max(int(cw[j]) - 1, 0))]))
    emit_fanout(b, [e for e in eta if len(e) > 1])
    used = [0] * (n - 1)
    rows = []
    for r in range(n):
        row = [roots[r]]
        for j in np.flatnonzero(M[r]):
            row.append(eta[j][used[j]])
            used[j] += 1
        rows.append(row)
    emit_reduce(b, _pad(rows))
    return roots[:n].copy()


@lru_cache(maxsize=64)
def mastrovito_mul(cfg: SynthConfig) -> Circuit:
    """``|a>|b>|c> -> |a>|b>|c + a*b>`` on registers ``a``, ``b``, ``out``.

    Garbage mode uses exactly n^2 Toffolis; clean mode replays the
    product computation in reverse, doubling that count.
    """
    n = cfg.n
    b = CircuitBuilder()
    a = b.register("a", n)
    bb = b.register("b", n)
    out = b.register("out", n)
    bennett(b, cfg.uncompute, lambda: emit_mastrovito(b, cfg.field, a, bb), out)
    b.meta["field"] = str(cfg.field)
    return b.build()


def _linear(cfg: SynthConfig, A) -> Circuit:
    n = cfg.n
    b = CircuitBuilder()
    inp = b.register("in", n)
    out = b.register("out", n)

    def compute():
        res = emit_matrix(b, A, inp, writable=cfg.uncompute == "clean")
        keep = res >= 0
        return res[keep], out[keep]

    bennett(b, cfg.uncompute, compute)
    b.meta["field"] = str(cfg.field)
    return b.build()


@lru_cache(maxsize=256)
def const_mul_circuit(cfg: SynthConfig, c: FieldElement | int) -> Circuit:
    """``out ^= c * in`` for a constant ``c`` fixed at synthesis time."""
    value = c.value if isinstance(c, FieldElement) else int(c)
    return _linear(cfg, constant_mul_matrix(cfg.field, value))


@lru_cache(maxsize=64)
def square_circuit(cfg: SynthConfig) -> Circuit:
    return _linear(cfg, frobenius_matrix(cfg.field, 1))


@lru_cache(maxsize=256)
def frobenius_circuit(cfg: SynthConfig, e: int) -> Circuit:
    """``out ^= in^(2^e)``."""
    return _linear(cfg, frobenius_matrix(cfg.field, e % cfg.n))


class FieldOps:
    """Emit field operations into fresh registers of a builder.

    Every operation allocates its own n-wire result, so independent
    operations never share wires and ASAP layering runs them in parallel.
    Sub-circuits are embedded in garbage mode; the caller decides whether
    to uncompute the whole computation.
    """

    def __init__(self, b: CircuitBuilder, cfg: SynthConfig):
        self.b = b
        self.cfg = cfg.garbage
        self.n = cfg.n

    def fresh(self) -> np.ndarray:
        return self.b.ancilla(self.n)

    def _embed(self, circ: Circuit, tag: str, **regs) -> np.ndarray:
        out = self.fresh()
        self.b.embed(circ, out=out, **regs)
        self.b.census[tag] += 1
        return out

    def add(self, u, v) -> np.ndarray:
        out = self.fresh()
        self.b.cx(u, out)
        self.b.cx(v, out)
        self.b.census["add"] += 1
        return out

    def mul(self, u, v) -> np.ndarray:
        return self._embed(mastrovito_mul(self.cfg), "mul", a=u, b=v)

    def cmul(self, c: int, u) -> np.ndarray:
        return self._embed(const_mul_circuit(self.cfg, int(c)), "const_mul", **{"in": u})

    def square(self, u) -> np.ndarray:
        return self._embed(square_circuit(self.cfg), "square", **{"in": u})

    def frob(self, u, e: int) -> np.ndarray:
        return self._embed(frobenius_circuit(self.cfg, e), "frobenius", **{"in": u})

    def inv(self, u) -> np.ndarray:
        return self._embed(itoh_tsuji_circuit(self.cfg), "inverse", a=u)


def emit_inverse(ops: FieldOps, a) -> np.ndarray:
    """Itoh-Tsuji chain: ``a^(2^(n-1) - 1)`` by the binary chain, then one squaring."""
    n = ops.n
    if n == 1:
        return ops.square(a)
    beta = a
    for op, k in itoh_tsuji_chain(n):
        if op == "double":
            beta = ops.mul(ops.frob(beta, k), beta)
        else:
            beta = ops.mul(ops.square(beta), a)
    return ops.square(beta)


@lru_cache(maxsize=64)
def itoh_tsuji_circuit(cfg: SynthConfig) -> Circuit:
    """``|a>|c> -> |a>|c + a^(2^n - 2)>`` on registers ``a``, ``out``."""
    n = cfg.n
    b = CircuitBuilder()
    a = b.register("a", n)
    out = b.register("out", n)
    ops = FieldOps(b, cfg)
    bennett(b, cfg.uncompute, lambda: emit_inverse(ops, a), out)
    b.meta["field"] = str(cfg.field)
    return b.build()
