"""One test per acceptance criterion, at the stated tolerances.

Each test also enforces its runtime budget.
"""

import itertools
import time
from math import ceil, log2

import numpy as np
import pytest

from logdepth_ecdlp.circuit import compose, inverse
from logdepth_ecdlp.edwards import (ProjectivePoint, affine_add, enumerate_points, find_structural_curve,
                                    find_toy_curve, projective_add, scalar_mul)
from logdepth_ecdlp.field import FieldSpec, mastrovito_product, mul_schoolbook
from logdepth_ecdlp.sim import (BatchRun, exact_qft_matrix, postprocess, shor_distribution, statevector_sim,
                                success_probability, unitary)
from logdepth_ecdlp.synth import (SynthConfig, aqft_circuit, const_mul_circuit, double_scalar_tree,
                                  double_scalar_tree_report, fanout_tree, frobenius_circuit, itoh_tsuji_circuit,
                                  leaf_init_circuit, mastrovito_mul, parity_tree, point_add_circuit,
                                  proj_to_affine, seq_double_add_l2r, seq_double_add_r2l, square_circuit)
from logdepth_ecdlp.verify import check_inv_circuit, check_mul_circuit, check_p2a_circuit, toy_instance


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        if exc[0] is None:
            elapsed = time.perf_counter() - self.start
            assert elapsed < self.seconds, f"took {elapsed:.1f}s, budget {self.seconds}s"


def _rand(f, rng, count):
    nbytes = (f.n + 7) // 8
    return [int.from_bytes(rng.bytes(nbytes), "little") & f.mask for _ in range(count)]


def _ratios(ns, depths):
    return [d / ceil(log2(n)) ** 2 for n, d in zip(ns, depths)]


@pytest.mark.criterion(1, "Mastrovito identity")
def test_mastrovito_identity():
    rng = np.random.default_rng(1)
    with Budget(60):
        for n in (2, 3, 4, 5):
            f = FieldSpec.default(n)
            for a, b in itertools.product(range(f.size), repeat=2):
                assert mastrovito_product(f(a), f(b)) == mul_schoolbook(f(a), f(b)), (n, a, b)
        for n in (8, 16, 163, 233):
            f = FieldSpec.default(n)
            xs, ys = _rand(f, rng, 1000), _rand(f, rng, 1000)
            for a, b in zip(xs, ys):
                assert mastrovito_product(f(a), f(b)) == mul_schoolbook(f(a), f(b)), (n, a, b)


@pytest.mark.criterion(2, "multiplier circuit correctness")
@pytest.mark.parametrize("mode", ["garbage", "clean"])
def test_multiplier_circuit(mode):
    rng = np.random.default_rng(2)
    with Budget(300):
        for n in (2, 3, 4, 8, 16):
            f = FieldSpec.default(n)
            if n <= 3:
                triples = list(itertools.product(range(f.size), repeat=3))
            elif n == 4:
                triples = [(a, b, 0) for a, b in itertools.product(range(f.size), repeat=2)]
            else:
                triples = [tuple(_rand(f, rng, 3)) for _ in range(1000)]
            c = mastrovito_mul(SynthConfig(f, uncompute=mode))
            res = check_mul_circuit(c, f, triples, clean=mode == "clean")
            assert res.passed, res.witness
            # the product layer itself: n^2 Toffolis (clean mode runs it twice)
            assert c.counts["ccx"] == (n * n if mode == "garbage" else 2 * n * n)


@pytest.mark.criterion(3, "multiplier depth scaling")
def test_multiplier_depth_scaling():
    ns = [4, 8, 16, 32, 64, 128, 256, 512]
    with Budget(300):
        depths = [mastrovito_mul(SynthConfig(FieldSpec.default(n), uncompute="garbage")).report().depth for n in ns]
    diffs = np.diff(depths)
    x = [ceil(log2(n)) for n in ns]
    c1, c2 = np.polyfit(x, depths, 1)
    print(f"\nmul depths {dict(zip(ns, depths))}; diffs {diffs.tolist()}; fit C1={c1:.2f} C2={c2:.2f}")
    assert (diffs <= 8).all()


@pytest.mark.criterion(4, "inverter correctness and depth")
def test_inverter():
    rng = np.random.default_rng(4)
    with Budget(600):
        for n in (3, 4, 5, 8):
            f = FieldSpec.default(n)
            xs = list(range(f.size)) if n <= 5 else _rand(f, rng, 1000)
            for mode in ("clean", "garbage"):
                res = check_inv_circuit(itoh_tsuji_circuit(SynthConfig(f, uncompute=mode)), f, xs,
                                        clean=mode == "clean")
                assert res.passed, res.witness
        ns = [8, 16, 32, 64, 128]
        depths = [itoh_tsuji_circuit(SynthConfig(FieldSpec.default(n), uncompute="garbage")).report().depth
                  for n in ns]
    ratios = _ratios(ns, depths)
    print(f"\ninv depths {dict(zip(ns, depths))}; depth/ceil(log2 n)^2 {[round(r, 2) for r in ratios]}")
    # bounded by one constant: the smallest instance's ratio is never exceeded
    assert max(ratios) <= ratios[0]


def _projective_pairs(curve, rng):
    f = curve.field
    pts = enumerate_points(curve)
    for p1, p2 in itertools.product(pts, repeat=2):
        s1, s2 = (int(v) for v in rng.integers(1, f.size, 2))
        yield (ProjectivePoint.from_ints(f, f.mul(p1.x.value, s1), f.mul(p1.y.value, s1), s1),
               ProjectivePoint.from_ints(f, f.mul(p2.x.value, s2), f.mul(p2.y.value, s2), s2), p1, p2)


@pytest.mark.criterion(5, "point adder")
def test_point_adder():
    rng = np.random.default_rng(5)
    with Budget(600):
        for n in (3, 4):
            curve, _, _ = find_toy_curve(FieldSpec.default(n))
            f = curve.field
            cases = list(_projective_pairs(curve, rng))
            for mode in ("clean", "garbage"):
                c = point_add_circuit(SynthConfig.for_curve(curve, uncompute=mode))
                assert c.meta["census"] == {"mul": 21, "const_mul": 4, "square": 1, "add": 15}
                run = BatchRun(c, len(cases))
                for i, reg in enumerate(("X1", "Y1", "Z1", "X2", "Y2", "Z2")):
                    pt = 0 if i < 3 else 1
                    run.set(reg, [getattr(case[pt], "XYZ"[i % 3]).value for case in cases])
                run.run()
                X3, Y3, Z3 = run.get("X3"), run.get("Y3"), run.get("Z3")
                for i, (P1, P2, p1, p2) in enumerate(cases):
                    ref = projective_add(curve, P1, P2)
                    assert ref.to_affine() == affine_add(curve, p1, p2)
                    got = ProjectivePoint.from_ints(f, X3[i], Y3[i], Z3[i])
                    assert got.equivalent(ref), (n, mode, p1.xy, p2.xy)
                if mode == "clean":
                    assert len(run.dirty_qubits(["X1", "Y1", "Z1", "X2", "Y2", "Z2", "X3", "Y3", "Z3"])) == 0


@pytest.mark.criterion(6, "parallel double-and-add")
def test_double_scalar_tree():
    with Budget(900):
        curve, P, Q, q = toy_instance(3)
        cfg = SynthConfig.for_curve(curve)
        c = double_scalar_tree(cfg, P, Q)
        scalars = list(itertools.product(range(16), repeat=2))
        run = BatchRun(c, len(scalars)).set("k", [k for k, _ in scalars]).set("l", [l for _, l in scalars]).run()
        f = curve.field
        X, Y, Z = run.get("X"), run.get("Y"), run.get("Z")
        for i, (k, l) in enumerate(scalars):
            want = scalar_mul(curve, (k + 3 * l) % q, P)
            got = ProjectivePoint.from_ints(f, X[i], Y[i], Z[i]).to_affine()
            assert got == want, (k, l)
        assert len(run.dirty_qubits(["k", "l", "X", "Y", "Z"])) == 0
        assert c.meta["adder_layers"] == ceil(log2(3 + 1)) + 1 == 3
        ns = [7, 15, 31, 63]
        depths = []
        for n in ns:
            s_curve, sP, sQ = find_structural_curve(FieldSpec.default(n))
            report, meta = double_scalar_tree_report(SynthConfig.for_curve(s_curve), sP, sQ)
            assert meta["adder_layers"] == ceil(log2(n + 1)) + 1
            depths.append(report.depth)
    ratios = _ratios(ns, depths)
    print(f"\ntree depths {dict(zip(ns, depths))}; depth/ceil(log2 n)^2 {[round(r, 2) for r in ratios]}")
    assert max(ratios) <= ratios[0]


@pytest.mark.criterion(7, "projective to affine")
def test_proj_to_affine():
    rng = np.random.default_rng(7)
    with Budget(60):
        for n in (3, 4, 5):
            curve, _, _ = find_toy_curve(FieldSpec.default(n))
            f = curve.field
            pts = enumerate_points(curve)
            triples = []
            for _ in range(1000):
                p = pts[int(rng.integers(len(pts)))]
                s = int(rng.integers(1, f.size))
                triples.append((f.mul(p.x.value, s), f.mul(p.y.value, s), s))
            res = check_p2a_circuit(proj_to_affine(SynthConfig.for_curve(curve)), curve, triples)
            assert res.passed, res.witness


def _bit_reverse(m):
    return np.array([int(f"{i:0{m}b}"[::-1], 2) for i in range(2 ** m)])


@pytest.mark.criterion(8, "approximate QFT")
def test_aqft():
    with Budget(120):
        m, eps = 8, 2.0 ** -16
        c = aqft_circuit(m, eps)
        rng = np.random.default_rng(8)
        psi = rng.normal(size=(2 ** m, 100)) + 1j * rng.normal(size=(2 ** m, 100))
        psi /= np.linalg.norm(psi, axis=0)
        got = statevector_sim(c, psi)[_bit_reverse(m)]
        fid = np.abs(np.sum(np.conj(exact_qft_matrix(m) @ psi) * got, axis=0)) ** 2
        assert fid.min() >= 1 - eps
        for mm in range(1, 7):
            U = unitary(aqft_circuit(mm, band=mm))[_bit_reverse(mm)]
            assert np.linalg.norm(U - exact_qft_matrix(mm), 2) <= 1e-10
    print(f"\naqft m=8 eps=2^-16: band {c.meta['band']}, measured depth {c.report().depth}, "
          f"min fidelity {fid.min():.12f}")


@pytest.mark.criterion(9, "end-to-end discrete log")
def test_shor_end_to_end():
    with Budget(300):
        curve, P, q = find_toy_curve(FieldSpec.default(3))
        r = int(np.random.default_rng(9).integers(1, q))
        Q = scalar_mul(curve, r, P)
        m = 3 + 1
        dist = shor_distribution(curve, P, Q, m)
        p_star = success_probability(dist, q, curve, P, Q)
        found = {postprocess((u, v), q, m, curve, P, Q) for u, v, p in dist.top(2 ** (2 * m)) if p > 1e-12}
        found.discard(None)
    print(f"\nplanted r={r} (q={q}); recovered {sorted(found)}; p*={p_star:.6f}")
    assert found == {r}
    assert p_star > 0.1


def _reversible_kinds(n):
    f = FieldSpec.default(n)
    curve, P, Q, _ = toy_instance(n)
    for mode in ("clean", "garbage"):
        cfg = SynthConfig.for_curve(curve, uncompute=mode)
        yield f"mul[{mode}]", mastrovito_mul(cfg)
        yield f"inv[{mode}]", itoh_tsuji_circuit(cfg)
        yield f"square[{mode}]", square_circuit(cfg)
        yield f"const_mul[{mode}]", const_mul_circuit(cfg, 0b1011)
        yield f"frobenius[{mode}]", frobenius_circuit(cfg, 2)
        yield f"add[{mode}]", point_add_circuit(cfg)
        yield f"p2a[{mode}]", proj_to_affine(cfg)
        yield f"dsa-r2l[{mode}]", seq_double_add_r2l(cfg, P, Q)
        yield f"dsa-l2r[{mode}]", seq_double_add_l2r(cfg, P, Q)
        yield f"dsa-tree[{mode}]", double_scalar_tree(cfg, P, Q)
    yield "leaf_init", leaf_init_circuit(SynthConfig.for_curve(curve), P, Q)
    yield "fanout", fanout_tree(n)
    yield "parity", parity_tree(n)


@pytest.mark.criterion(10, "reversibility")
def test_reversibility():
    rng = np.random.default_rng(10)
    with Budget(120):
        for name, c in _reversible_kinds(4):
            cc = compose(c, inverse(c))
            run = BatchRun(cc, 100)
            values = [int.from_bytes(rng.bytes((c.width + 7) // 8), "little") & ((1 << c.width) - 1)
                      for _ in range(100)]
            run.load(range(c.width), values)
            run.run()
            assert run.read(range(c.width)) == values, name
