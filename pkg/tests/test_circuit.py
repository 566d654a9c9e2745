import numpy as np
import pytest

from logdepth_ecdlp.circuit import (CSV_HEADER, Circuit, CircuitBuilder, CircuitError, Gate, GateKind, ParseError,
                                    ResourceReport, compose, depth, inverse, parse, remap, serialize)
from logdepth_ecdlp.sim import BasisState, basis_sim


def test_gate_validation():
    with pytest.raises(CircuitError):
        Gate(GateKind.CNOT, (1, 1))
    with pytest.raises(CircuitError):
        Gate(GateKind.TOFFOLI, (0, 1))
    with pytest.raises(CircuitError):
        Circuit.from_gates(2, [Gate(GateKind.X, (2,))])


def test_empty_circuit_depth_zero():
    r = depth(Circuit(3))
    assert (r.depth, r.width, r.gates) == (0, 3, 0)


def test_asap_layering():
    c = Circuit.from_gates(4, [
        Gate(GateKind.CNOT, (0, 1)),
        Gate(GateKind.CNOT, (2, 3)),
        Gate(GateKind.TOFFOLI, (1, 3, 0)),
        Gate(GateKind.X, (2,)),
    ])
    assert list(c.layers()) == [1, 1, 2, 2]
    r = depth(c)
    assert (r.depth, r.toffoli_depth) == (2, 1)
    assert r.counts == {"x": 1, "cnot": 2, "ccx": 1, "h": 0, "cp": 0}


def test_toffoli_depth_follows_wires():
    # the second Toffoli depends on the first through the CNOT chain
    c = Circuit.from_gates(5, [
        Gate(GateKind.TOFFOLI, (0, 1, 2)),
        Gate(GateKind.CNOT, (2, 3)),
        Gate(GateKind.TOFFOLI, (3, 4, 0)),
    ])
    assert depth(c).toffoli_depth == 2


def test_text_roundtrip():
    b = CircuitBuilder()
    q = b.register("q", 3)
    b.h(q[0])
    b.cp(q[0], q[1], 3)
    b.cp(q[1], q[2], 2, inverse=True)
    b.ccx(q[0], q[1], q[2])
    b.x(q[2])
    b.meta["field"] = "gf2n n=3 poly=0xb"
    c = b.build()
    text = serialize(c)
    assert "cpinv 1 2 2" in text
    assert parse(text) == c


@pytest.mark.parametrize("text,lineno", [
    ("qubits 2\ncx 0 0\n", 2),
    ("qubits 2\nfoo 0 1\n", 2),
    ("cx 0 1\n", 1),
    ("qubits 2\n\nccx 0 1\n", 3),
    ("qubits 2\ncx 0 5\n", 2),
])
def test_parse_errors_carry_line_numbers(text, lineno):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.lineno == lineno


def test_inverse_reverses_and_negates():
    c = Circuit.from_gates(2, [Gate(GateKind.H, (0,)), Gate(GateKind.CPHASE, (0, 1), 3)])
    inv = inverse(c)
    assert inv.gate(0) == Gate(GateKind.CPHASE, (0, 1), 3, True)
    assert inv.gate(1) == Gate(GateKind.H, (0,))
    assert inverse(inv) == c


def test_compose_width_mismatch():
    with pytest.raises(CircuitError):
        compose(Circuit(2), Circuit(3))


def test_compose_then_inverse_is_identity():
    rng = np.random.default_rng(3)
    gates = []
    for _ in range(40):
        q = rng.choice(6, 3, replace=False)
        gates.append(Gate(GateKind.TOFFOLI, tuple(int(v) for v in q)))
        gates.append(Gate(GateKind.CNOT, (int(q[0]), int(q[2]))))
    c = Circuit.from_gates(6, gates)
    cc = compose(c, inverse(c))
    for v in range(64):
        s = BasisState(tuple((v >> i) & 1 for i in range(6)))
        assert basis_sim(cc, s) == s


def test_remap():
    c = Circuit.from_gates(2, [Gate(GateKind.CNOT, (0, 1))])
    r = remap(c, [3, 1], 4)
    assert r.gate(0).qubits == (3, 1)


def test_builder_embed_and_uncompute():
    inner = CircuitBuilder()
    a = inner.register("a", 1)
    t = inner.register("t", 1)
    anc = inner.ancilla(1)
    inner.cx(a, anc)
    inner.cx(anc, t)
    inner_c = inner.build()

    b = CircuitBuilder()
    x = b.register("x", 1)
    y = b.register("y", 1)
    m = b.mark()
    regs = b.embed(inner_c, a=x, t=y)
    b.uncompute(m)
    c = b.build()
    assert c.width == 3 and regs["a"][0] == x[0]
    # embed followed by its inverse restores everything
    for v in range(4):
        s = BasisState((v & 1, v >> 1, 0))
        assert basis_sim(c, s) == s


def test_streaming_builder_matches_materialized(monkeypatch):
    import logdepth_ecdlp.circuit as circuit_mod
    monkeypatch.setattr(circuit_mod, "_FLUSH_THRESHOLD", 97)
    rng = np.random.default_rng(0)
    ops = [tuple(int(v) for v in rng.choice(50, 3, replace=False)) for _ in range(3000)]
    full, stream = CircuitBuilder(), CircuitBuilder(stream=True)
    for b in (full, stream):
        b.ancilla(50)
        for a, c, t in ops:
            b.ccx(a, c, t)
            b.cx(t, a)
    assert stream.report("x") == full.report("x")


def test_csv_roundtrip():
    r = ResourceReport("mul", 8, 14, 238, {"x": 0, "cnot": 236, "ccx": 64, "h": 0, "cp": 0}, 1)
    assert r.csv_row() == "mul,8,14,238,0,236,64,0,0,1"
    assert ResourceReport.from_csv_row(r.csv_row()) == r
    assert CSV_HEADER == "name,n,depth,width,x,cnot,ccx,h,cp,toffoli_depth"
