"""Gate-list circuit representation, ASAP depth and text serialization.

Gates live in three parallel numpy arrays (kind, operand qubits padded
with -1, phase parameter) so that circuits with millions of gates stay
cheap to build, remap and measure.

Text format::

    qubits <N>
    register <name> <start> <len>
    # field gf2n n=.. poly=0x..
    # curve edwards n=.. poly=0x.. d1=0x.. d2=0x..
    x q | cx c t | ccx c1 c2 t | h q | cp c t k | cpinv c t k
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import _kernels


class GateKind(enum.IntEnum):
    X = _kernels.X
    CNOT = _kernels.CX
    TOFFOLI = _kernels.CCX
    H = _kernels.H
    CPHASE = _kernels.CP


ARITY = {GateKind.X: 1, GateKind.CNOT: 2, GateKind.TOFFOLI: 3, GateKind.H: 1, GateKind.CPHASE: 2}
_MNEMONIC = {GateKind.X: "x", GateKind.CNOT: "cx", GateKind.TOFFOLI: "ccx", GateKind.H: "h"}
_FROM_MNEMONIC = {v: k for k, v in _MNEMONIC.items()}
_COUNT_KEYS = ("x", "cnot", "ccx", "h", "cp")

CSV_HEADER = "name,n,depth,width,x,cnot,ccx,h,cp,toffoli_depth"


class CircuitError(ValueError):
    pass


class ParseError(CircuitError):
    def __init__(self, lineno: int, reason: str):
        super().__init__(f"line {lineno}: {reason}")
        self.lineno = lineno
        self.reason = reason


@dataclass(frozen=True)
class Gate:
    """One gate.  ``CPHASE`` applies ``exp(+-2 pi i / 2^k)`` to ``|11>``; ``inverse`` selects the minus sign."""

    kind: GateKind
    qubits: tuple[int, ...]
    k: int = 0
    inverse: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if len(self.qubits) != ARITY[self.kind]:
            raise CircuitError(f"{self.kind.name} takes {ARITY[self.kind]} qubits, got {len(self.qubits)}")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"repeated operand in {self}")
        if min(self.qubits) < 0:
            raise CircuitError(f"negative qubit index in {self}")
        if self.kind == GateKind.CPHASE and self.k < 1:
            raise CircuitError("CPHASE needs k >= 1")

    def inverted(self) -> Gate:
        if self.kind == GateKind.CPHASE:
            return Gate(self.kind, self.qubits, self.k, not self.inverse)
        return self

    def to_text(self) -> str:
        ops = " ".join(str(q) for q in self.qubits)
        if self.kind == GateKind.CPHASE:
            return f"{'cpinv' if self.inverse else 'cp'} {ops} {self.k}"
        return f"{_MNEMONIC[self.kind]} {ops}"


@dataclass(frozen=True)
class Register:
    name: str
    start: int
    size: int

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.start, self.start + self.size, dtype=np.int64)


@dataclass(frozen=True)
class ResourceReport:
    name: str
    n: int
    depth: int
    width: int
    counts: dict = field(default_factory=dict)
    toffoli_depth: int = 0

    @property
    def gates(self) -> int:
        return sum(self.counts.values())

    def csv_row(self) -> str:
        c = [self.counts.get(k, 0) for k in _COUNT_KEYS]
        return ",".join(str(v) for v in (self.name, self.n, self.depth, self.width, *c, self.toffoli_depth))

    @classmethod
    def from_csv_row(cls, row: str) -> ResourceReport:
        parts = row.strip().split(",")
        if len(parts) != 10:
            raise ValueError(f"expected 10 CSV fields, got {len(parts)}")
        name, *nums = parts
        nums = [int(v) for v in nums]
        return cls(name, nums[0], nums[1], nums[2], dict(zip(_COUNT_KEYS, nums[3:8])), nums[8])


def _counts(kinds: np.ndarray) -> dict:
    hist = np.bincount(kinds, minlength=5)
    return {key: int(hist[i]) for i, key in enumerate(_COUNT_KEYS)}


class Circuit:
    """An immutable gate list over ``width`` qubits with named registers."""

    def __init__(self, width: int, kinds=None, qubits=None, params=None,
                 registers: dict[str, Register] | None = None, meta: dict | None = None):
        self.width = int(width)
        self.kinds = np.zeros(0, np.uint8) if kinds is None else np.ascontiguousarray(kinds, dtype=np.uint8)
        self.qubits = (np.zeros((0, 3), np.int32) if qubits is None
                       else np.ascontiguousarray(qubits, dtype=np.int32).reshape(-1, 3))
        self.params = (np.zeros(len(self.kinds), np.int16) if params is None
                       else np.ascontiguousarray(params, dtype=np.int16))
        self.registers = dict(registers or {})
        self.meta = dict(meta or {})
        for arr in (self.kinds, self.qubits, self.params):
            arr.setflags(write=False)
        self._report = None
        self._validate()

    def _validate(self):
        n = len(self.kinds)
        if self.qubits.shape[0] != n or self.params.shape[0] != n:
            raise CircuitError("gate arrays have inconsistent lengths")
        if n:
            if self.kinds.max() > 4:
                raise CircuitError("unknown gate kind code")
            arity = np.array([1, 2, 3, 1, 2])[self.kinds]
            used = np.arange(3)[None, :] < arity[:, None]
            q = self.qubits
            if np.any(used & ((q < 0) | (q >= self.width))):
                bad = int(np.argmax(np.any(used & ((q < 0) | (q >= self.width)), axis=1)))
                raise CircuitError(f"gate {bad} ({self.gate(bad).to_text()}) uses a qubit outside width {self.width}")
            if np.any(~used & (q != -1)):
                raise CircuitError("operand padding must be -1")
            dup = (q[:, 0] == q[:, 1]) & used[:, 1] | (q[:, 0] == q[:, 2]) & used[:, 2] | (q[:, 1] == q[:, 2]) & used[:, 2]
            if np.any(dup):
                raise CircuitError(f"gate {int(np.argmax(dup))} repeats an operand")
            cp = self.kinds == GateKind.CPHASE
            if np.any(cp & (self.params == 0)):
                raise CircuitError("CPHASE needs k >= 1")
        spans = sorted((r.start, r.start + r.size, r.name) for r in self.registers.values())
        for (s0, e0, n0), (s1, _, n1) in zip(spans, spans[1:]):
            if s1 < e0:
                raise CircuitError(f"registers {n0} and {n1} overlap")
        for r in self.registers.values():
            if r.start < 0 or r.size < 0 or r.start + r.size > self.width:
                raise CircuitError(f"register {r.name} lies outside width {self.width}")

    @classmethod
    def from_gates(cls, width: int, gates, registers=None, meta=None) -> Circuit:
        gates = list(gates)
        kinds = np.array([g.kind for g in gates], dtype=np.uint8)
        qubits = np.full((len(gates), 3), -1, dtype=np.int32)
        params = np.zeros(len(gates), dtype=np.int16)
        for i, g in enumerate(gates):
            qubits[i, :len(g.qubits)] = g.qubits
            if g.kind == GateKind.CPHASE:
                params[i] = -g.k if g.inverse else g.k
        return cls(width, kinds, qubits, params, registers, meta)

    def __len__(self):
        return len(self.kinds)

    def gate(self, i: int) -> Gate:
        kind = GateKind(int(self.kinds[i]))
        ops = tuple(int(q) for q in self.qubits[i, :ARITY[kind]])
        p = int(self.params[i])
        if kind == GateKind.CPHASE:
            return Gate(kind, ops, abs(p), p < 0)
        return Gate(kind, ops)

    @property
    def gates(self) -> Iterator[Gate]:
        return (self.gate(i) for i in range(len(self)))

    def reg(self, name: str) -> np.ndarray:
        return self.registers[name].indices

    @property
    def counts(self) -> dict:
        return _counts(self.kinds)

    def is_reversible_classical(self) -> bool:
        return bool(np.all(self.kinds <= GateKind.TOFFOLI))

    def report(self, name: str = "circuit", n: int = 0) -> ResourceReport:
        if self._report is None:
            last = np.zeros(self.width, np.int32)
            tlast = np.zeros(self.width, np.int32)
            d, td = _kernels.asap_layers(self.kinds, self.qubits, last, tlast) if len(self) else (0, 0)
            self._report = (int(d), int(td))
        d, td = self._report
        return ResourceReport(name, n, d, self.width, self.counts, td)

    def layers(self) -> np.ndarray:
        """ASAP layer (1-based) of every gate."""
        out = np.zeros(len(self), np.int64)
        last = np.zeros(self.width, np.int32)
        tlast = np.zeros(self.width, np.int32)
        for i in range(len(self)):
            _kernels.asap_layers(self.kinds[i:i + 1], self.qubits[i:i + 1], last, tlast)
            out[i] = last[self.qubits[i, 0]]
        return out

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return (self.width == other.width and self.registers == other.registers
                and np.array_equal(self.kinds, other.kinds) and np.array_equal(self.qubits, other.qubits)
                and np.array_equal(self.params, other.params)
                and self.meta.get("field") == other.meta.get("field")
                and self.meta.get("curve") == other.meta.get("curve"))

    def __repr__(self):
        return f"Circuit(width={self.width}, gates={len(self)}, registers={list(self.registers)})"


def depth(c: Circuit) -> ResourceReport:
    """ASAP-layered resource report of ``c``."""
    return c.report()


def compose(a: Circuit, b: Circuit) -> Circuit:
    """``a`` followed by ``b``."""
    if a.width != b.width:
        raise CircuitError(f"width mismatch: {a.width} vs {b.width}")
    if a.registers and b.registers and a.registers != b.registers:
        raise CircuitError("incompatible register layouts")
    return Circuit(a.width,
                   np.concatenate([a.kinds, b.kinds]),
                   np.concatenate([a.qubits, b.qubits]),
                   np.concatenate([a.params, b.params]),
                   a.registers or b.registers, {**b.meta, **a.meta})


def inverse(c: Circuit) -> Circuit:
    """Reverse gate order; CPHASE flips its sign, everything else is self-inverse."""
    return Circuit(c.width, c.kinds[::-1], c.qubits[::-1], -c.params[::-1], c.registers, c.meta)


def remap(c: Circuit, mapping, width: int) -> Circuit:
    """Relabel qubit ``q`` as ``mapping[q]`` in a circuit of the given width."""
    mapping = np.asarray(mapping, dtype=np.int64)
    q = np.where(c.qubits >= 0, mapping[np.maximum(c.qubits, 0)], -1)
    return Circuit(width, c.kinds, q, c.params)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def serialize(c: Circuit) -> str:
    lines = [f"qubits {c.width}"]
    for r in sorted(c.registers.values(), key=lambda r: r.start):
        lines.append(f"register {r.name} {r.start} {r.size}")
    for key in ("field", "curve"):
        if key in c.meta:
            lines.append(f"# {key} {c.meta[key]}")
    lines.extend(g.to_text() for g in c.gates)
    return "\n".join(lines) + "\n"


def parse(text: str) -> Circuit:
    width = None
    registers: dict[str, Register] = {}
    meta: dict = {}
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            key, _, rest = body.partition(" ")
            if key in ("field", "curve") and rest:
                meta[key] = rest.strip()
            continue
        tok = line.split()
        head = tok[0]
        try:
            args = [int(t) for t in tok[1:]] if head != "register" else None
        except ValueError:
            raise ParseError(lineno, f"non-integer operand in {line!r}") from None
        if head == "qubits":
            if width is not None:
                raise ParseError(lineno, "duplicate qubits header")
            if len(args) != 1 or args[0] < 0:
                raise ParseError(lineno, "qubits takes one non-negative count")
            width = args[0]
            continue
        if width is None:
            raise ParseError(lineno, "missing 'qubits <N>' header before first statement")
        if head == "register":
            if len(tok) != 4:
                raise ParseError(lineno, "register takes <name> <start> <len>")
            try:
                start, size = int(tok[2]), int(tok[3])
            except ValueError:
                raise ParseError(lineno, "register start/len must be integers") from None
            if tok[1] in registers:
                raise ParseError(lineno, f"duplicate register {tok[1]}")
            registers[tok[1]] = Register(tok[1], start, size)
            continue
        try:
            if head in _FROM_MNEMONIC:
                kind = _FROM_MNEMONIC[head]
                gate = Gate(kind, tuple(args))
            elif head in ("cp", "cpinv"):
                if len(args) != 3:
                    raise ParseError(lineno, f"{head} takes c t k")
                gate = Gate(GateKind.CPHASE, tuple(args[:2]), args[2], head == "cpinv")
            else:
                raise ParseError(lineno, f"unknown mnemonic {head!r}")
        except CircuitError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(lineno, str(exc)) from None
        if max(gate.qubits) >= width:
            raise ParseError(lineno, f"qubit index {max(gate.qubits)} outside width {width}")
        gates.append(gate)
    if width is None:
        raise ParseError(0, "empty circuit text")
    try:
        return Circuit.from_gates(width, gates, registers, meta)
    except CircuitError as exc:
        raise ParseError(0, str(exc)) from None


# ---------------------------------------------------------------------------
# builder
# ---------------------------------------------------------------------------

_FLUSH_THRESHOLD = 1 << 20


class CircuitBuilder:
    """Single-owner circuit construction.

    With ``stream=True`` gates are layered on the fly and discarded, so only
    :meth:`report` is available; gates inside an open :meth:`mark` are
    retained until the matching :meth:`uncompute`.
    """

    def __init__(self, stream: bool = False):
        self.stream = stream
        self.width = 0
        self.registers: dict[str, Register] = {}
        self.meta: dict = {}
        self.census: Counter = Counter()
        self._chunks: list[tuple[np.ndarray, np.ndarray, np.ndarray]] = []
        self._retained = 0
        self._marks: list[int] = []
        self.last_wires: np.ndarray | None = None
        # streaming state
        self._last = np.zeros(0, np.int32)
        self._tlast = np.zeros(0, np.int32)
        self._depth = 0
        self._tdepth = 0
        self._hist = np.zeros(5, np.int64)

    # -- allocation ----------------------------------------------------------

    def register(self, name: str, size: int) -> np.ndarray:
        if name in self.registers:
            raise CircuitError(f"duplicate register {name}")
        self.registers[name] = Register(name, self.width, size)
        return self.ancilla(size)

    def ancilla(self, size: int) -> np.ndarray:
        idx = np.arange(self.width, self.width + size, dtype=np.int64)
        self.width += size
        return idx

    # -- emission -------------------------------------------------------------

    def _emit(self, kind: int, *operands, params=None):
        cols = [np.atleast_1d(np.asarray(o, dtype=np.int64)) for o in operands]
        m = len(cols[0])
        if m == 0:
            return
        q = np.full((m, 3), -1, np.int32)
        for j, col in enumerate(cols):
            q[:, j] = col
        p = np.zeros(m, np.int16) if params is None else np.broadcast_to(np.asarray(params, np.int16), (m,)).copy()
        self._push(np.full(m, kind, np.uint8), q, p)

    def _push(self, kinds, qubits, params):
        self._chunks.append((kinds, qubits, params))
        self._retained += len(kinds)
        if self.stream and not self._marks and self._retained >= _FLUSH_THRESHOLD:
            self._flush()

    def x(self, q):
        self._emit(GateKind.X, q)

    def cx(self, c, t):
        self._emit(GateKind.CNOT, c, t)

    def ccx(self, a, b, t):
        self._emit(GateKind.TOFFOLI, a, b, t)

    def h(self, q):
        self._emit(GateKind.H, q)

    def cp(self, c, t, k: int, inverse: bool = False):
        self._emit(GateKind.CPHASE, c, t, params=-k if inverse else k)

    def embed(self, circ: Circuit, wires: np.ndarray | None = None, **bindings) -> dict[str, np.ndarray]:
        """Append ``circ`` with its registers bound to the given qubits.

        Qubits of ``circ`` not covered by a bound register are mapped to
        fresh ancillas, unless ``wires`` gives the full qubit map (as left
        in :attr:`last_wires` by a previous call).  Returns the qubits of
        every register of ``circ``.
        """
        if wires is not None:
            mapping = np.asarray(wires, np.int64)
            if len(mapping) != circ.width:
                raise CircuitError(f"wire map has {len(mapping)} entries, circuit width is {circ.width}")
            bindings = {}
        else:
            mapping = np.full(circ.width, -1, np.int64)
        for name, idx in bindings.items():
            r = circ.registers[name]
            idx = np.asarray(idx, dtype=np.int64)
            if len(idx) != r.size:
                raise CircuitError(f"register {name} has {r.size} qubits, bound to {len(idx)}")
            mapping[r.start:r.start + r.size] = idx
        free = mapping < 0
        mapping[free] = self.ancilla(int(free.sum()))
        self.last_wires = mapping
        q = np.where(circ.qubits >= 0, mapping[np.maximum(circ.qubits, 0)], -1).astype(np.int32)
        self._push(circ.kinds, q, circ.params)
        return {name: mapping[r.start:r.start + r.size] for name, r in circ.registers.items()}

    # -- uncomputation --------------------------------------------------------

    def mark(self) -> int:
        self._marks.append(len(self._chunks))
        return len(self._marks) - 1

    def close(self, mark: int) -> list:
        """Close ``mark`` and return the gate chunks emitted since it."""
        if mark != len(self._marks) - 1:
            raise CircuitError("marks must be closed innermost first")
        start = self._marks.pop()
        return self._chunks[start:]

    def append_inverse(self, segment: list):
        for kinds, qubits, params in reversed(segment):
            self._push(kinds[::-1], qubits[::-1], -params[::-1])

    def uncompute(self, mark: int):
        """Append the inverse of everything emitted since ``mark`` and close it."""
        self.append_inverse(self.close(mark))

    def release(self, mark: int):
        """Close ``mark`` without uncomputing."""
        if mark != len(self._marks) - 1:
            raise CircuitError("marks must be closed innermost first")
        self._marks.pop()

    # -- results --------------------------------------------------------------

    def _flush(self):
        if len(self._last) < self.width:
            grow = max(self.width, 2 * len(self._last))
            self._last = np.concatenate([self._last, np.zeros(grow - len(self._last), np.int32)])
            self._tlast = np.concatenate([self._tlast, np.zeros(grow - len(self._tlast), np.int32)])
        for kinds, qubits, _ in self._chunks:
            d, td = _kernels.asap_layers(kinds, qubits, self._last, self._tlast)
            self._depth = max(self._depth, int(d))
            self._tdepth = max(self._tdepth, int(td))
            self._hist += np.bincount(kinds, minlength=5)[:5]
        self._chunks.clear()
        self._retained = 0

    def build(self) -> Circuit:
        if self.stream:
            raise CircuitError("a streaming builder keeps no gates; use report()")
        if self._chunks:
            kinds = np.concatenate([c[0] for c in self._chunks])
            qubits = np.concatenate([c[1] for c in self._chunks])
            params = np.concatenate([c[2] for c in self._chunks])
        else:
            kinds = qubits = params = None
        meta = dict(self.meta)
        if self.census:
            meta["census"] = dict(self.census)
        return Circuit(self.width, kinds, qubits, params, self.registers, meta)

    def report(self, name: str = "circuit", n: int = 0) -> ResourceReport:
        if not self.stream:
            return self.build().report(name, n)
        if self._marks:
            raise CircuitError("cannot report with open marks")
        self._flush()
        counts = {key: int(self._hist[i]) for i, key in enumerate(_COUNT_KEYS)}
        return ResourceReport(name, n, self._depth, self.width, counts, self._tdepth)
