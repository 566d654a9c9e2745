import itertools

import numpy as np
import pytest

from logdepth_ecdlp.circuit import GateKind
from logdepth_ecdlp.field import FieldSpec
from logdepth_ecdlp.sim import run_registers
from logdepth_ecdlp.synth import (SynthConfig, const_mul_circuit, frobenius_circuit, itoh_tsuji_circuit,
                                  mastrovito_mul, square_circuit)
from logdepth_ecdlp.verify import check_inv_circuit, check_mul_circuit


def cfg(n, mode="clean"):
    return SynthConfig(FieldSpec.default(n), uncompute=mode)


def test_gf4_products_in_one_layer():
    c = mastrovito_mul(cfg(2, "garbage"))
    ccx = c.qubits[c.kinds == GateKind.TOFFOLI]
    # four Toffolis on pairwise disjoint wires, so one Toffoli layer
    assert len(ccx) == 4 and len(set(ccx.ravel().tolist())) == 12
    assert c.report().toffoli_depth == 1


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("mode", ["clean", "garbage"])
def test_mul_exhaustive(n, mode):
    f = FieldSpec.default(n)
    res = check_mul_circuit(mastrovito_mul(cfg(n, mode)), f, list(itertools.product(range(f.size), repeat=3)),
                            clean=mode == "clean")
    assert res.passed, res.witness


def test_mul_by_one_copies_a():
    f = FieldSpec.default(5)
    c = mastrovito_mul(cfg(5))
    run = run_registers(c, {"a": list(range(32)), "b": [1] * 32, "out": [0] * 32})
    assert run.get("out") == list(range(32))


@pytest.mark.parametrize("n", [2, 3, 4, 8, 16, 33])
def test_toffoli_counts(n):
    assert mastrovito_mul(cfg(n, "garbage")).counts["ccx"] == n * n
    assert mastrovito_mul(cfg(n, "clean")).counts["ccx"] == 2 * n * n


def test_clean_mode_doubles_depth_at_most():
    g = mastrovito_mul(cfg(16, "garbage")).report().depth
    c = mastrovito_mul(cfg(16, "clean")).report().depth
    assert c <= 2 * g


@pytest.mark.parametrize("n", [3, 4, 5])
def test_inverse_exhaustive(n):
    f = FieldSpec.default(n)
    res = check_inv_circuit(itoh_tsuji_circuit(cfg(n)), f, list(range(f.size)))
    assert res.passed, res.witness


def test_inverse_edge_values():
    c = itoh_tsuji_circuit(cfg(6))
    run = run_registers(c, {"a": [0, 1]})
    assert run.get("out") == [0, 1]


def test_inverse_multiplications_gf256():
    c = itoh_tsuji_circuit(cfg(8))
    census = c.meta["census"]
    assert census["mul"] == 4
    assert census["square"] == 3  # two chain increments and the final squaring
    assert census["frobenius"] == 2


def test_const_mul_identity_and_values():
    f = FieldSpec.default(8)
    one = const_mul_circuit(cfg(8), 1)
    assert one.report().depth == 1
    c = const_mul_circuit(cfg(8), f(0x1B))
    run = run_registers(c, {"in": list(range(256)), "out": [0] * 256})
    assert run.get("out") == [f.mul(0x1B, a) for a in range(256)]
    assert len(run.dirty_qubits(["in", "out"])) == 0
    assert set(c.kinds.tolist()) == {GateKind.CNOT}


def test_square_gf4_basis_element():
    run = run_registers(square_circuit(cfg(2)), {"in": [0b10], "out": [0]})
    assert run.get("out") == [0b11]


@pytest.mark.parametrize("n", [3, 5, 8])
def test_frobenius_circuits(n):
    f = FieldSpec.default(n)
    xs = list(range(f.size))
    for e in range(n + 1):
        run = run_registers(frobenius_circuit(cfg(n, "garbage"), e), {"in": xs, "out": [0] * len(xs)})
        assert run.get("out") == [f.frob(a, e) for a in xs]
        assert run.get("in") == xs
    ident = frobenius_circuit(cfg(n), n)
    assert ident.report().depth == 1


def test_mul_random_large():
    f = FieldSpec.default(16)
    rng = np.random.default_rng(5)
    triples = [tuple(int(v) for v in rng.integers(0, f.size, 3)) for _ in range(1000)]
    assert check_mul_circuit(mastrovito_mul(cfg(16)), f, triples).passed
