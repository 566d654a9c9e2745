"""Point-level circuits on the Edwards curve: adder and affine conversion."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..circuit import Circuit, CircuitBuilder
from ..edwards import AffinePoint, _projective_add
from .config import SynthConfig, bennett
from .field_circuits import FieldOps, itoh_tsuji_circuit
from .gadgets import emit_fanout

POINT_REGS = ("X", "Y", "Z")


class _Schedule(FieldOps):
    # the addition schedule calls ``sq``
    def sq(self, u):
        return self.square(u)


def emit_point_add(b: CircuitBuilder, cfg: SynthConfig, p1, p2) -> tuple:
    """Garbage-producing projective sum of two ``(X, Y, Z)`` wire triples."""
    curve = cfg.need_curve()
    ops = _Schedule(b, cfg)
    return _projective_add(ops, curve.d1.value, curve.d2.value, *p1, *p2)


@lru_cache(maxsize=32)
def point_add_circuit(cfg: SynthConfig) -> Circuit:
    """``(P1, P2, 0) -> (P1, P2, P1 + P2)`` in projective coordinates.

    Registers ``X1 Y1 Z1 X2 Y2 Z2 X3 Y3 Z3``.  Each field operation gets
    fresh wires, so ASAP layering recovers the parallel schedule on its own.
    """
    n = cfg.n
    curve = cfg.need_curve()
    b = CircuitBuilder()
    p1 = [b.register(f"{r}1", n) for r in POINT_REGS]
    p2 = [b.register(f"{r}2", n) for r in POINT_REGS]
    p3 = [b.register(f"{r}3", n) for r in POINT_REGS]
    bennett(b, cfg.uncompute, lambda: np.concatenate(emit_point_add(b, cfg, p1, p2)), np.concatenate(p3))
    b.meta.update(field=str(cfg.field), curve=str(curve))
    return b.build()


def emit_to_affine(ops: FieldOps, X, Y, Z) -> tuple:
    zinv = ops.inv(Z)
    return ops.mul(X, zinv), ops.mul(Y, zinv)


@lru_cache(maxsize=32)
def proj_to_affine(cfg: SynthConfig) -> Circuit:
    """``(X, Y, Z, 0, 0) -> (X, Y, Z, X/Z, Y/Z)`` on registers ``X Y Z x y``."""
    n = cfg.n
    b = CircuitBuilder()
    X, Y, Z = (b.register(r, n) for r in POINT_REGS)
    x = b.register("x", n)
    y = b.register("y", n)
    ops = FieldOps(b, cfg)
    bennett(b, cfg.uncompute, lambda: np.concatenate(emit_to_affine(ops, X, Y, Z)), np.concatenate([x, y]))
    b.meta["field"] = str(cfg.field)
    return b.build()


def _point_wires(point: AffinePoint, target) -> list:
    # wires of ``target`` where the affine coordinates of ``point`` have a 1
    X, Y, _ = target
    n = len(X)
    wires = [X[i] for i in range(n) if point.x.value >> i & 1]
    wires += [Y[i] for i in range(n) if point.y.value >> i & 1]
    return wires


def emit_load_points(b: CircuitBuilder, items, reverse: bool = False):
    """Conditionally copy constant points into point registers, all in parallel.

    ``items`` holds ``(ctrl, point, (X, Y, Z))``; ``Z`` is set to 1
    unconditionally, so an unset control leaves the identity ``(0, 0, 1)``.
    The control fan-out is undone afterwards.  ``reverse=True`` emits the
    exact inverse.
    """
    groups, ctrls, targets = [], [], []
    for ctrl, point, reg in items:
        wires = _point_wires(point, reg)
        if not wires:
            continue
        group = np.concatenate([[ctrl], b.ancilla(len(wires) - 1)]).astype(np.int64)
        groups.append(group)
        ctrls.append(group)
        targets.append(np.asarray(wires, np.int64))
    ones = np.array([reg[2][0] for _, _, reg in items], np.int64)
    if not reverse:
        b.x(ones)
    if groups:
        emit_fanout(b, groups)
        b.cx(np.concatenate(ctrls), np.concatenate(targets))
        emit_fanout(b, groups, reverse=True)
    if reverse:
        b.x(ones)
