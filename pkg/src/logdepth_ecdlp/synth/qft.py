"""Banded approximate quantum Fourier transform."""

from __future__ import annotations

from functools import lru_cache
import cmath
from math import ceil, log2, pi

from ..circuit import Circuit, CircuitBuilder


def dropped_error_bound(m: int, band: int) -> float:
    """Operator-norm bound on the distance to the exact QFT: the sum of
    ``|1 - exp(2 pi i / 2^k)|`` over every omitted controlled phase."""
    return sum((m - k + 1) * abs(1 - cmath.exp(2j * pi / 2 ** k)) for k in range(band + 1, m + 1))


def default_band(m: int, epsilon: float | None = None) -> int:
    """Cutoff ``ceil(log2 m) + ceil(log2(1/eps))`` with ``eps = 2^(-2m)`` unless given,
    raised if needed until :func:`dropped_error_bound` is at most ``eps``."""
    if epsilon is None:
        epsilon = 2.0 ** (-2 * m)
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    band = max(1, ceil(log2(m)) + ceil(log2(1 / epsilon)))
    while band < m and dropped_error_bound(m, band) > epsilon:
        band += 1
    return band


@lru_cache(maxsize=64)
def aqft_circuit(m: int, epsilon: float | None = None, band: int | None = None) -> Circuit:
    """QFT on register ``q`` keeping controlled phases ``2 pi / 2^k`` with ``k <= band``.

    Input bit ``i`` of ``x`` sits on ``q[i]``; the output is bit reversed,
    so bit ``i`` of ``y`` ends on ``q[m-1-i]``.  No swap network is emitted;
    readers relabel instead.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if band is None:
        band = default_band(m, epsilon)
    if band < 1:
        raise ValueError("band must be >= 1")
    b = CircuitBuilder()
    q = b.register("q", m)
    for j in range(m - 1, -1, -1):
        b.h(q[j])
        for t in range(j - 1, -1, -1):
            k = j - t + 1
            if k <= band:
                b.cp(q[t], q[j], k)
    b.meta.update(band=band, output_order="reversed")
    return b.build()
