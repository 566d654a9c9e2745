"""Full discrete-log circuit: Hadamards, oracle, affine conversion, QFTs."""

from __future__ import annotations

from ..circuit import Circuit, CircuitBuilder, ResourceReport, inverse
from ..edwards import AffinePoint
from .config import SynthConfig
from .points import POINT_REGS, proj_to_affine
from .qft import aqft_circuit, default_band
from .scalar import double_scalar_tree

STAGES = ("hadamard", "double_scalar", "conversion", "qft")


def _hadamards(n: int) -> Circuit:
    b = CircuitBuilder()
    b.h(b.register("k", n + 1))
    b.h(b.register("l", n + 1))
    return b.build()


def _qfts(m: int, band: int) -> Circuit:
    b = CircuitBuilder()
    qft = aqft_circuit(m, band=band)
    b.embed(qft, q=b.register("k", m))
    b.embed(qft, q=b.register("l", m))
    b.meta.update(qft.meta)
    return b.build()


def shor_dlog_circuit(cfg: SynthConfig, P: AffinePoint, Q: AffinePoint) -> Circuit:
    """Registers ``k``, ``l`` (n+1 qubits each, measured at the end) and the
    affine result ``x``, ``y``.

    The projective point registers are returned to |0> by running the
    double-scalar circuit backwards after the conversion.  Per-stage
    reports sit in ``meta["stages"]`` (in order: hadamard, double_scalar,
    conversion, qft); the backward pass is reported as ``meta["uncompute"]``.
    Both QFT outputs are bit reversed.
    """
    n = cfg.n
    m = n + 1
    band = cfg.qft_band if cfg.qft_band is not None else default_band(m)
    parts = {
        "hadamard": _hadamards(n),
        "double_scalar": double_scalar_tree(cfg, P, Q),
        "conversion": proj_to_affine(cfg),
        "qft": _qfts(m, band),
    }
    b = CircuitBuilder()
    k = b.register("k", m)
    l = b.register("l", m)
    pt = {r: b.register(r, n) for r in POINT_REGS}
    x = b.register("x", n)
    y = b.register("y", n)
    b.embed(parts["hadamard"], k=k, l=l)
    b.embed(parts["double_scalar"], k=k, l=l, **pt)
    oracle_wires = b.last_wires
    b.embed(parts["conversion"], x=x, y=y, **pt)
    back = inverse(parts["double_scalar"])
    b.embed(back, wires=oracle_wires)
    b.embed(parts["qft"], k=k, l=l)
    b.meta.update(field=str(cfg.field), curve=str(cfg.need_curve()), qft_band=band)
    b.meta["stages"] = [parts[s].report(s, n) for s in STAGES]
    b.meta["uncompute"] = back.report("uncompute", n)
    return b.build()


def stage_reports(c: Circuit) -> list[ResourceReport]:
    return list(c.meta["stages"])
