import itertools

import numpy as np
import pytest

from logdepth_ecdlp.bitmatrix import BitMatrix
from logdepth_ecdlp.circuit import GateKind
from logdepth_ecdlp.sim import BasisState, basis_sim, run_registers
from logdepth_ecdlp.synth import const_matrix_mul, fanout_tree, parity_tree


def test_fanout_seven_copies():
    c = fanout_tree(7)
    r = c.report()
    assert (r.depth, r.counts["cnot"], r.gates) == (3, 7, 7)
    out = basis_sim(c, BasisState((1,) + (0,) * 7))
    assert out.bits == (1,) * 8


def test_fanout_single():
    r = fanout_tree(1).report()
    assert (r.depth, r.gates) == (1, 1)


@pytest.mark.parametrize("m", range(1, 20))
def test_fanout_depth_formula(m):
    c = fanout_tree(m)
    assert c.report().depth == int(np.ceil(np.log2(m + 1)))
    assert basis_sim(c, BasisState.zeros(m + 1)) == BasisState.zeros(m + 1)


def test_parity_eight_sources():
    c = parity_tree(8)
    # three folding layers, one copy, three restoring layers
    assert c.report().depth == 3 + 1 + 3
    assert set(c.kinds.tolist()) == {GateKind.CNOT}


def test_parity_single():
    assert parity_tree(1).report().gates == 1


@pytest.mark.parametrize("m", [1, 2, 3, 5, 8, 13])
def test_parity_values(m):
    c = parity_tree(m)
    values = list(range(2 ** m)) if m <= 8 else list(np.random.default_rng(m).integers(0, 2 ** m, 500))
    run = run_registers(c, {"src": [int(v) for v in values], "target": [1] * len(values)})
    assert run.get("target") == [1 ^ (bin(int(v)).count("1") & 1) for v in values]
    assert run.get("src") == [int(v) for v in values]


def test_identity_matrix_is_one_layer():
    c = const_matrix_mul(BitMatrix.identity(6))
    r = c.report()
    assert (r.depth, r.gates, c.width) == (1, 6, 12)


def test_all_ones_row_depth():
    A = BitMatrix.from_array([[1] * 8])
    # clean: fold of depth 3 on the inputs, copy, unfold
    assert const_matrix_mul(A, "clean").report().depth == 3 + 1 + 3
    # read-only inputs cost one extra folding layer
    assert const_matrix_mul(A, "garbage").report().depth == 4 + 1


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("mode", ["clean", "garbage"])
def test_random_matrices(seed, mode):
    rng = np.random.default_rng(seed)
    rows, cols = int(rng.integers(1, 9)), int(rng.integers(1, 9))
    A = BitMatrix.from_array(rng.integers(0, 2, (rows, cols)))
    c = const_matrix_mul(A, mode)
    xs = list(range(2 ** cols))
    outs = [int(v) for v in rng.integers(0, 2 ** rows, len(xs))]
    run = run_registers(c, {"in": xs, "out": outs})
    assert run.get("out") == [o ^ A.apply_int(x) for x, o in zip(xs, outs)]
    assert run.get("in") == xs
    if mode == "clean":
        assert len(run.dirty_qubits(["in", "out"])) == 0


def test_dense_matrix_never_writes_inputs():
    A = BitMatrix.from_array(np.ones((5, 5), dtype=np.uint8))
    c = const_matrix_mul(A, "garbage")
    targets = {int(q) for k, qs in zip(c.kinds, c.qubits) for q in qs[1:2]}
    assert not targets & set(c.reg("in").tolist())
    for x, o in itertools.product(range(32), [0]):
        run = run_registers(c, {"in": [x], "out": [o]})
        assert run.get("out") == [A.apply_int(x)]
