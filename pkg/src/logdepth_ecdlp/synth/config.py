"""Synthesis options and the compute/copy/uncompute wrapper."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from ..circuit import CircuitBuilder, Register
from ..edwards import CurveSpec
from ..field import FieldSpec

UNCOMPUTE_MODES = ("clean", "garbage")
_ALIASES = {"bennett_clean": "clean", "bennett": "clean", "keep_garbage": "garbage"}

# role name -> register, as found in ``Circuit.registers``
RegisterLayout = dict[str, Register]


@dataclass(frozen=True)
class SynthConfig:
    field: FieldSpec
    curve: CurveSpec | None = None
    uncompute: str = "clean"
    qft_band: int | None = None

    def __post_init__(self):
        mode = _ALIASES.get(self.uncompute, self.uncompute)
        if mode not in UNCOMPUTE_MODES:
            raise ValueError(f"uncompute must be one of {UNCOMPUTE_MODES}, got {self.uncompute!r}")
        object.__setattr__(self, "uncompute", mode)
        if self.curve is not None and self.curve.field != self.field:
            raise ValueError("curve is defined over a different field")

    @classmethod
    def for_curve(cls, curve: CurveSpec, **kw) -> SynthConfig:
        return cls(curve.field, curve, **kw)

    @property
    def n(self) -> int:
        return self.field.n

    @property
    def garbage(self) -> SynthConfig:
        return replace(self, uncompute="garbage")

    @property
    def clean(self) -> SynthConfig:
        return replace(self, uncompute="clean")

    def need_curve(self) -> CurveSpec:
        if self.curve is None:
            raise ValueError("this circuit needs a curve in its SynthConfig")
        return self.curve


def bennett(b: CircuitBuilder, mode: str, compute: Callable, out=None):
    """Run ``compute`` and XOR its result wires onto ``out``.

    ``compute()`` emits gates and returns either the result wires (then
    ``out`` must be given) or a ``(results, out)`` pair.  In clean mode the
    compute gates are then replayed in reverse, so every wire other than
    ``out`` returns to its initial value.
    """
    clean = mode == "clean"
    m = b.mark() if clean else None
    res = compute()
    if out is None:
        res, out = res
    seg = b.close(m) if clean else None
    b.cx(np.asarray(res, np.int64), np.asarray(out, np.int64))
    if clean:
        b.append_inverse(seg)
