import itertools

import numpy as np
import pytest

from logdepth_ecdlp.circuit import Circuit, GateKind
from logdepth_ecdlp.edwards import double_scalar, enumerate_points
from logdepth_ecdlp.sim import BasisState, UnsupportedGateError, basis_sim, run_registers
from logdepth_ecdlp.synth import (STAGES, SynthConfig, double_scalar_tree, leaf_init_circuit, point_add_circuit,
                                  proj_to_affine, seq_double_add_l2r, seq_double_add_r2l, shor_dlog_circuit,
                                  stage_reports)
from logdepth_ecdlp.verify import (check_dsa_circuit, check_p2a_circuit, check_point_add_circuit,
                                   projective_pairs, toy_instance)

ALL_SCALARS = list(itertools.product(range(16), repeat=2))


@pytest.fixture(scope="module")
def toy3():
    curve, P, Q, q = toy_instance(3)
    return SynthConfig.for_curve(curve), curve, P, Q


@pytest.mark.parametrize("n", [3, 4])
@pytest.mark.parametrize("mode", ["clean", "garbage"])
def test_point_add_all_pairs(n, mode):
    curve, _, _, _ = toy_instance(n)
    c = point_add_circuit(SynthConfig.for_curve(curve, uncompute=mode))
    res = check_point_add_circuit(c, curve, projective_pairs(curve), clean=mode == "clean")
    assert res.passed, res.witness


def test_point_add_census_and_depth(toy3):
    cfg, curve, _, _ = toy3
    assert point_add_circuit(cfg).meta["census"] == {"mul": 21, "const_mul": 4, "square": 1, "add": 15}
    g = point_add_circuit(SynthConfig.for_curve(curve, uncompute="garbage"))
    # the schedule has multiplicative depth five
    assert g.report().toffoli_depth == 5


def test_point_add_identity(toy3):
    cfg, curve, P, _ = toy3
    c = point_add_circuit(cfg)
    run = run_registers(c, {"X1": [P.x.value], "Y1": [P.y.value], "Z1": [1], "X2": [0], "Y2": [0], "Z2": [1]})
    f = curve.field
    X, Y, Z = run.get("X3")[0], run.get("Y3")[0], run.get("Z3")[0]
    assert (f.div(X, Z), f.div(Y, Z)) == P.xy


@pytest.mark.parametrize("n", [3, 4])
def test_proj_to_affine_every_scaling(n):
    curve, _, _, _ = toy_instance(n)
    f = curve.field
    triples = [(f.mul(p.x.value, s), f.mul(p.y.value, s), s) for p in enumerate_points(curve) for s in range(1, f.size)]
    res = check_p2a_circuit(proj_to_affine(SynthConfig.for_curve(curve)), curve, triples)
    assert res.passed, res.witness


@pytest.mark.parametrize("build", [seq_double_add_r2l, seq_double_add_l2r, double_scalar_tree])
def test_double_scalar_variants_exhaustive(toy3, build):
    cfg, curve, P, Q = toy3
    res = check_dsa_circuit(build(cfg, P, Q), curve, P, Q, ALL_SCALARS)
    assert res.passed, res.witness


def test_double_scalar_garbage_mode(toy3):
    _, curve, P, Q = toy3
    cfg = SynthConfig.for_curve(curve, uncompute="garbage")
    res = check_dsa_circuit(double_scalar_tree(cfg, P, Q), curve, P, Q, ALL_SCALARS, clean=False)
    assert res.passed, res.witness


def test_adder_counts(toy3):
    cfg, _, P, Q = toy3
    assert seq_double_add_r2l(cfg, P, Q).meta["adders"] == 8
    assert seq_double_add_l2r(cfg, P, Q).meta["adders"] == 11
    tree = double_scalar_tree(cfg, P, Q)
    assert (tree.meta["adders"], tree.meta["adder_layers"]) == (7, 3)


def test_tree_is_shallower_than_sequential(toy3):
    cfg, _, P, Q = toy3
    tree = double_scalar_tree(cfg, P, Q).report().depth
    assert tree < seq_double_add_r2l(cfg, P, Q).report().depth
    assert tree < seq_double_add_l2r(cfg, P, Q).report().depth


def test_leaf_init_is_constant_depth(toy3):
    cfg, _, P, Q = toy3
    c = leaf_init_circuit(cfg, P, Q)
    assert c.report().depth == 3
    assert set(c.kinds.tolist()) <= {GateKind.X, GateKind.CNOT}


def test_shor_stages(toy3):
    cfg, _, P, Q = toy3
    c = shor_dlog_circuit(cfg, P, Q)
    reports = stage_reports(c)
    assert [r.name for r in reports] == list(STAGES)
    assert reports[0].depth == 1
    total = c.report().depth
    assert total <= sum(r.depth for r in reports) + c.meta["uncompute"].depth
    assert c.width == 5344
    with pytest.raises(UnsupportedGateError):
        basis_sim(c, BasisState.zeros(c.width))


def test_shor_oracle_part_clean(toy3):
    cfg, curve, P, Q = toy3
    c = shor_dlog_circuit(cfg, P, Q)
    # drop the Hadamard layer and the QFT tail: what is left is classical
    keep = c.kinds <= GateKind.TOFFOLI
    oracle = Circuit(c.width, c.kinds[keep], c.qubits[keep], c.params[keep], c.registers)
    run = run_registers(oracle, {"k": [k for k, _ in ALL_SCALARS], "l": [l for _, l in ALL_SCALARS]})
    exp = [double_scalar(curve, k, l, P, Q).xy for k, l in ALL_SCALARS]
    assert list(zip(run.get("x"), run.get("y"))) == exp
    assert len(run.dirty_qubits(["k", "l", "x", "y"])) == 0
