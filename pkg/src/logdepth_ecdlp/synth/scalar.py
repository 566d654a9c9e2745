"""Double-scalar multiplication ``|k>|l>|0> -> |k>|l>|kP + lQ>``.

Three organizations: sequential right-to-left, sequential left-to-right
with a shared doubling chain, and the log-depth adder tree.  All take
control registers ``k`` and ``l`` of n+1 bits and write the projective
result to ``X``, ``Y``, ``Z``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..circuit import Circuit, CircuitBuilder, ResourceReport
from ..edwards import AffinePoint, powers_of_two
from .config import SynthConfig, bennett
from .points import POINT_REGS, emit_load_points, emit_point_add


def _layout(b: CircuitBuilder, n: int):
    k = b.register("k", n + 1)
    l = b.register("l", n + 1)
    out = [b.register(r, n) for r in POINT_REGS]
    return k, l, out


def _point(b: CircuitBuilder, n: int) -> tuple:
    return tuple(b.ancilla(n) for _ in range(3))


def _add(b: CircuitBuilder, cfg: SynthConfig, p1, p2) -> tuple:
    b.census["point_add"] += 1
    return emit_point_add(b, cfg, p1, p2)


def _identity(b: CircuitBuilder, n: int) -> tuple:
    R = _point(b, n)
    b.x(R[2][0])
    return R


def _cond_add(b: CircuitBuilder, cfg: SynthConfig, R, ctrl: int, point: AffinePoint) -> tuple:
    # scratch <- ctrl ? point : identity;  R + scratch;  scratch -> 0
    S = _point(b, cfg.n)
    emit_load_points(b, [(ctrl, point, S)])
    out = _add(b, cfg, R, S)
    emit_load_points(b, [(ctrl, point, S)], reverse=True)
    return out


def _finish(b: CircuitBuilder, cfg: SynthConfig, out, compute, curve_meta) -> None:
    bennett(b, cfg.uncompute, lambda: np.concatenate(compute()), np.concatenate(out))
    b.meta.update(field=str(cfg.field), curve=str(cfg.need_curve()), **curve_meta)


@lru_cache(maxsize=16)
def seq_double_add_r2l(cfg: SynthConfig, P: AffinePoint, Q: AffinePoint) -> Circuit:
    """Right-to-left double-and-add over precomputed ``2^i P`` and ``2^i Q``."""
    n = cfg.n
    b = CircuitBuilder()
    k, l, out = _layout(b, n)
    Ps = powers_of_two(cfg.need_curve(), P, n + 1)
    Qs = powers_of_two(cfg.need_curve(), Q, n + 1)

    def compute():
        R = _identity(b, n)
        for i in range(n + 1):
            R = _cond_add(b, cfg, R, k[i], Ps[i])
            R = _cond_add(b, cfg, R, l[i], Qs[i])
        return R

    _finish(b, cfg, out, compute, {"adders": 2 * (n + 1)})
    return b.build()


@lru_cache(maxsize=16)
def seq_double_add_l2r(cfg: SynthConfig, P: AffinePoint, Q: AffinePoint) -> Circuit:
    """Left-to-right double-and-add processing ``k`` and ``l`` together.

    A doubling copies the accumulator and adds it to itself, so the chain
    has n doublings and 2(n+1) conditional additions of P and Q.
    """
    n = cfg.n
    b = CircuitBuilder()
    k, l, out = _layout(b, n)

    def compute():
        R = _identity(b, n)
        for i in range(n, -1, -1):
            if i < n:
                twin = _point(b, n)
                b.cx(np.concatenate(R), np.concatenate(twin))
                R = _add(b, cfg, R, twin)
                b.census["doubling"] += 1
            R = _cond_add(b, cfg, R, k[i], P)
            R = _cond_add(b, cfg, R, l[i], Q)
        return R

    _finish(b, cfg, out, compute, {"adders": 2 * (n + 1) + n})
    return b.build()


def _emit_leaves(b: CircuitBuilder, cfg: SynthConfig, k, l, P: AffinePoint, Q: AffinePoint) -> list:
    n = cfg.n
    curve = cfg.need_curve()
    items = []
    for reg, base in ((k, P), (l, Q)):
        for i, pt in enumerate(powers_of_two(curve, base, n + 1)):
            items.append((int(reg[i]), pt, _point(b, n)))
    emit_load_points(b, items)
    return [it[2] for it in items]


def _emit_tree(b: CircuitBuilder, cfg: SynthConfig, k, l, P, Q, stats: dict) -> tuple:
    n = cfg.n
    leaves = _emit_leaves(b, cfg, k, l, P, Q)
    width = 1 << (n).bit_length()  # next power of two >= n + 1
    sums = []
    layers = 0
    adders = 0
    for part in (leaves[:n + 1], leaves[n + 1:]):
        level = part + [None] * (width - len(part))
        depth = 0
        while len(level) > 1:
            nxt = []
            for left, right in zip(level[::2], level[1::2]):
                if left is None or right is None:
                    nxt.append(right if left is None else left)
                else:
                    nxt.append(_add(b, cfg, left, right))
                    adders += 1
            level = nxt
            depth += 1
        sums.append(level[0])
        layers = max(layers, depth)
    R, S = sums
    total = _add(b, cfg, R, S)
    stats.update(adders=adders + 1, adder_layers=layers + 1)
    return total


def leaf_init_circuit(cfg: SynthConfig, P: AffinePoint, Q: AffinePoint) -> Circuit:
    """Just the leaf initialization of :func:`double_scalar_tree`, for depth accounting."""
    b = CircuitBuilder()
    k, l, _ = _layout(b, cfg.n)
    _emit_leaves(b, cfg, k, l, P, Q)
    return b.build()


@lru_cache(maxsize=16)
def double_scalar_tree(cfg: SynthConfig, P: AffinePoint, Q: AffinePoint) -> Circuit:
    """Leaves ``k_i 2^i P`` and ``l_j 2^j Q`` summed by a balanced adder tree.

    Padding leaves are the identity known at synthesis time, so adders fed
    by them are dropped: 2(n+1)-1 adders in ceil(log2(n+1))+1 layers.
    """
    b = CircuitBuilder()
    _build_tree(b, cfg, P, Q)
    return b.build()


def _build_tree(b: CircuitBuilder, cfg: SynthConfig, P, Q):
    k, l, out = _layout(b, cfg.n)
    stats: dict = {}
    _finish(b, cfg, out, lambda: _emit_tree(b, cfg, k, l, P, Q, stats), {})
    b.meta.update(stats)
    b.meta["leaf_init_depth"] = leaf_init_circuit(cfg, P, Q).report().depth


def double_scalar_tree_report(cfg: SynthConfig, P: AffinePoint, Q: AffinePoint) -> tuple[ResourceReport, dict]:
    """Resource report of the tree without keeping its gates in memory."""
    b = CircuitBuilder(stream=True)
    _build_tree(b, cfg, P, Q)
    return b.report("double_scalar_tree", cfg.n), dict(b.meta, census=dict(b.census))
