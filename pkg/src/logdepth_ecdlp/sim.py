"""Verification engines: basis-state and statevector simulation, and the
exact measurement distribution of the discrete-log algorithm."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from . import _kernels
from .circuit import Circuit, GateKind
from .edwards import AffinePoint, CurveSpec, multiples, scalar_mul


class UnsupportedGateError(ValueError):
    pass


class SimulationLimitError(ValueError):
    pass


STATEVECTOR_MAX_QUBITS = 20
SHOR_MAX_BITS = 8


# ---------------------------------------------------------------------------
# basis-state simulation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BasisState:
    bits: tuple[int, ...]

    @classmethod
    def zeros(cls, width: int) -> BasisState:
        return cls((0,) * width)

    @classmethod
    def from_registers(cls, c: Circuit, **values: int) -> BasisState:
        bits = [0] * c.width
        for name, v in values.items():
            for i, q in enumerate(c.reg(name)):
                bits[q] = (v >> i) & 1
        return cls(tuple(bits))

    def register(self, c: Circuit, name: str) -> int:
        return sum(self.bits[q] << i for i, q in enumerate(c.reg(name)))


def _require_reversible(c: Circuit):
    bad = np.flatnonzero(c.kinds > GateKind.TOFFOLI)
    if len(bad):
        g = c.gate(int(bad[0]))
        raise UnsupportedGateError(f"basis simulation cannot apply {g.kind.name} (gate {int(bad[0])}: {g.to_text()})")


def _pack(lanes: np.ndarray, words: int) -> np.ndarray:
    buf = np.zeros(words * 64, np.uint8)
    buf[:len(lanes)] = lanes
    return np.packbits(buf, bitorder="little").view(np.uint64)


def _unpack(row: np.ndarray, batch: int) -> np.ndarray:
    return np.unpackbits(row.view(np.uint8), bitorder="little")[:batch]


def basis_sim(c: Circuit, state: BasisState) -> BasisState:
    """Run a reversible classical circuit on one basis state."""
    if len(state.bits) != c.width:
        raise ValueError(f"state has {len(state.bits)} bits, circuit width is {c.width}")
    _require_reversible(c)
    s = np.zeros((c.width, 1), np.uint64)
    s[:, 0] = np.asarray(state.bits, dtype=np.uint64)
    _kernels.run_reversible(c.kinds, c.qubits, s)
    return BasisState(tuple(int(b) & 1 for b in s[:, 0]))


class BatchRun:
    """Bit-sliced simulation of many basis inputs at once (one per bit lane)."""

    def __init__(self, c: Circuit, batch: int):
        _require_reversible(c)
        self.circuit = c
        self.batch = batch
        self.words = max(1, -(-batch // 64))
        self.state = np.zeros((c.width, self.words), np.uint64)

    def load(self, qubits, values) -> BatchRun:
        values = list(values)
        if len(values) != self.batch:
            raise ValueError(f"expected {self.batch} values, got {len(values)}")
        for i, q in enumerate(qubits):
            lanes = np.fromiter(((v >> i) & 1 for v in values), np.uint8, self.batch)
            self.state[q] = _pack(lanes, self.words)
        return self

    def set(self, name: str, values) -> BatchRun:
        return self.load(self.circuit.reg(name), values)

    def run(self) -> BatchRun:
        _kernels.run_reversible(self.circuit.kinds, self.circuit.qubits, self.state)
        return self

    def read(self, qubits) -> list[int]:
        out = [0] * self.batch
        for i, q in enumerate(qubits):
            lanes = _unpack(self.state[q], self.batch)
            for j in np.flatnonzero(lanes):
                out[j] |= 1 << i
        return out

    def get(self, name: str) -> list[int]:
        return self.read(self.circuit.reg(name))

    def dirty_qubits(self, exclude: list[str]) -> np.ndarray:
        """Qubits outside ``exclude`` registers that hold a 1 in any lane."""
        mask = np.ones(self.circuit.width, bool)
        for name in exclude:
            mask[self.circuit.reg(name)] = False
        busy = np.any(self.state != 0, axis=1)
        return np.flatnonzero(mask & busy)


def run_registers(c: Circuit, inputs: dict[str, list[int]]) -> BatchRun:
    batch = len(next(iter(inputs.values())))
    run = BatchRun(c, batch)
    for name, vals in inputs.items():
        run.set(name, vals)
    return run.run()


# ---------------------------------------------------------------------------
# statevector simulation
# ---------------------------------------------------------------------------

def _apply(state: np.ndarray, g_kind: int, ops, param: int, width: int) -> np.ndarray:
    # state shape: (2,)*width + (batch,); axis width-1-q holds qubit q
    ax = [width - 1 - q for q in ops]
    if g_kind == GateKind.H:
        a = ax[0]
        s0 = np.take(state, 0, axis=a)
        s1 = np.take(state, 1, axis=a)
        return np.stack([(s0 + s1), (s0 - s1)], axis=a) / np.sqrt(2.0)
    if g_kind == GateKind.CPHASE:
        k = abs(param)
        phase = np.exp((-1 if param < 0 else 1) * 2j * np.pi / 2 ** k)
        idx = [slice(None)] * state.ndim
        idx[ax[0]] = 1
        idx[ax[1]] = 1
        state = state.copy()
        state[tuple(idx)] *= phase
        return state
    # permutation gates: flip target where controls are 1
    *ctrl, tgt = ax
    idx = [slice(None)] * state.ndim
    for a in ctrl:
        idx[a] = 1
    sub = state[tuple(idx)]
    tgt_sub = tgt - sum(1 for a in ctrl if a < tgt)
    state = state.copy()
    state[tuple(idx)] = np.flip(sub, axis=tgt_sub)
    return state


def statevector_sim(c: Circuit, psi: np.ndarray, max_qubits: int = STATEVECTOR_MAX_QUBITS) -> np.ndarray:
    """Dense evolution of ``psi`` (shape ``(2^w,)`` or ``(2^w, batch)``).

    Basis index bit ``q`` is qubit ``q``.
    """
    w = c.width
    if w > max_qubits:
        raise SimulationLimitError(
            f"statevector simulation of {w} qubits needs {16 * 2 ** w:,} bytes per state; cap is {max_qubits} qubits")
    psi = np.asarray(psi, dtype=complex)
    single = psi.ndim == 1
    mat = psi.reshape(2 ** w, -1)
    state = mat.reshape((2,) * w + (mat.shape[1],))
    for i in range(len(c)):
        kind = int(c.kinds[i])
        n_ops = (1, 2, 3, 1, 2)[kind]
        state = _apply(state, kind, [int(q) for q in c.qubits[i, :n_ops]], int(c.params[i]), w)
    out = state.reshape(2 ** w, -1)
    return out[:, 0] if single else out


def unitary(c: Circuit) -> np.ndarray:
    return statevector_sim(c, np.eye(2 ** c.width, dtype=complex))


def exact_qft_matrix(m: int) -> np.ndarray:
    N = 2 ** m
    j = np.arange(N)
    return np.exp(2j * np.pi * np.outer(j, j) / N) / np.sqrt(N)


# ---------------------------------------------------------------------------
# the discrete-log measurement distribution
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShorDistribution:
    m: int
    probs: np.ndarray  # probs[u, v]

    def __post_init__(self):
        total = float(self.probs.sum())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"distribution sums to {total}")

    def top(self, count: int = 8) -> list[tuple[int, int, float]]:
        flat = np.argsort(-self.probs, axis=None, kind="stable")[:count]
        N = 2 ** self.m
        return [(int(i // N), int(i % N), float(self.probs.flat[i])) for i in flat]


def shor_distribution(c: CurveSpec, P: AffinePoint, Q: AffinePoint, m: int) -> ShorDistribution:
    """Exact outcome probabilities after the double-scalar oracle and the QFTs.

    ``prob(u, v) = 2^(-4m) * sum_R |sum_{kP + lQ = R} w^(uk + vl)|^2`` with
    ``w = exp(2 pi i / 2^m)``; the group element of every ``(k, l)`` comes
    from classical curve arithmetic.
    """
    if m > SHOR_MAX_BITS:
        raise SimulationLimitError(f"m = {m} needs 2^{2 * m} oracle evaluations; cap is m <= {SHOR_MAX_BITS}")
    N = 2 ** m
    from .edwards import _affine_add
    f, d1, d2 = c.field, c.d1.value, c.d2.value
    kP = multiples(c, P, N)
    lQ = multiples(c, Q, N)
    labels: dict[tuple[int, int], int] = {}
    classes = np.empty((N, N), np.int64)
    for k in range(N):
        for l in range(N):
            R = _affine_add(f, d1, d2, *kP[k], *lQ[l])
            classes[k, l] = labels.setdefault(R, len(labels))
    probs = np.zeros((N, N))
    for r in range(len(labels)):
        amp = np.fft.ifft2((classes == r).astype(float)) * (N * N)  # sum_k,l w^(uk+vl)
        probs += np.abs(amp) ** 2
    probs /= float(N) ** 4
    return ShorDistribution(m, probs)


def postprocess(sample: tuple[int, int], q: int, m: int, c: CurveSpec,
                P: AffinePoint, Q: AffinePoint) -> int | None:
    """Candidate discrete log from one outcome ``(u, v)``, verified on the curve.

    ``s = round(u q / 2^m)``, ``t = round(v q / 2^m)`` estimate a dual pair
    with ``t = r s (mod q)``; the candidate ``r = t s^-1`` is returned in
    ``1..q`` only if ``r P = Q``.
    """
    u, v = sample
    N = 2 ** m
    s = ((u * q * 2 + N) // (2 * N)) % q
    t = ((v * q * 2 + N) // (2 * N)) % q
    if gcd(s, q) != 1:
        return None
    r = (t * pow(s, -1, q)) % q or q
    return r if scalar_mul(c, r, P) == Q else None


def success_probability(dist: ShorDistribution, q: int, c: CurveSpec, P: AffinePoint, Q: AffinePoint) -> float:
    """Total probability of outcomes from which :func:`postprocess` recovers the log."""
    N = 2 ** dist.m
    total = 0.0
    for u in range(N):
        for v in range(N):
            p = dist.probs[u, v]
            if p > 0 and postprocess((u, v), q, dist.m, c, P, Q) is not None:
                total += p
    return total
