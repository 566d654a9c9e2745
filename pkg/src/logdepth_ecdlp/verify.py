"""Oracle-equivalence sweeps with witnesses for the first mismatch."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .circuit import Circuit
from .edwards import (AffinePoint, CompletenessViolation, CurveSpec, affine_add, double_scalar,
                      enumerate_points, find_toy_curve, projective_add, scalar_mul)
from .field import FieldSpec, itoh_tsuji_inverse, mastrovito_product, mul_schoolbook
from .sim import BatchRun, run_registers
from .synth import (SynthConfig, double_scalar_tree, itoh_tsuji_circuit, mastrovito_mul,
                    point_add_circuit, proj_to_affine, seq_double_add_l2r, seq_double_add_r2l)

EXHAUSTIVE_FIELD_MAX = 5
RANDOM_SAMPLES = 1000


@dataclass(frozen=True)
class CheckResult:
    name: str
    n: int
    cases: int
    failures: int = 0
    witness: str | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name} n={self.n} cases={self.cases} failures={self.failures}"
        return text if self.witness is None else f"{text}\n  witness: {self.witness}"


def _hex(v: int) -> str:
    return f"{v:#x}"


def _clean_report(run: BatchRun, keep: list[str]) -> str | None:
    dirty = run.dirty_qubits(keep)
    if len(dirty):
        return f"{len(dirty)} ancilla qubits not returned to 0 (first: q{int(dirty[0])})"
    return None


def _result(name: str, n: int, expected: list, got: list, describe) -> CheckResult:
    bad = [i for i, (e, g) in enumerate(zip(expected, got)) if e != g]
    if not bad:
        return CheckResult(name, n, len(expected))
    i = bad[0]
    return CheckResult(name, n, len(expected), len(bad), describe(i))


# ---------------------------------------------------------------------------
# classical arithmetic
# ---------------------------------------------------------------------------

def _pairs(f: FieldSpec, rng: np.random.Generator) -> list[tuple[int, int]]:
    if f.n <= EXHAUSTIVE_FIELD_MAX:
        return list(product(range(f.size), repeat=2))
    return [tuple(int(v) for v in _rand(f, rng, 2)) for _ in range(RANDOM_SAMPLES)]


def _rand(f: FieldSpec, rng: np.random.Generator, count: int) -> list[int]:
    # n may exceed 64 bits: draw byte strings
    nbytes = (f.n + 7) // 8
    return [int.from_bytes(rng.bytes(nbytes), "little") & f.mask for _ in range(count)]


def verify_field(ns, rng: np.random.Generator) -> list[CheckResult]:
    out = []
    for n in ns:
        f = FieldSpec.default(n)
        pairs = _pairs(f, rng)
        exp = [mul_schoolbook(f(a), f(b)).value for a, b in pairs]
        got = [mastrovito_product(f(a), f(b)).value for a, b in pairs]
        out.append(_result("field.mastrovito", n, exp, got, lambda i: (
            f"a={_hex(pairs[i][0])} b={_hex(pairs[i][1])} schoolbook={_hex(exp[i])} mastrovito={_hex(got[i])}")))
        xs = list(range(f.size)) if n <= EXHAUSTIVE_FIELD_MAX else _rand(f, rng, RANDOM_SAMPLES)
        exp = [f.inv(a) for a in xs]
        got = [itoh_tsuji_inverse(f(a))[0].value for a in xs]
        out.append(_result("field.itoh_tsuji", n, exp, got, lambda i: (
            f"a={_hex(xs[i])} fermat={_hex(exp[i])} itoh_tsuji={_hex(got[i])}")))
    return out


def verify_curve(ns) -> list[CheckResult]:
    out = []
    for n in ns:
        curve, P, _ = find_toy_curve(FieldSpec.default(n))
        f = curve.field
        pts = enumerate_points(curve)
        pairs = list(product(pts, repeat=2))
        exp, got = [], []
        for p1, p2 in pairs:
            try:
                exp.append(affine_add(curve, p1, p2).xy)
            except CompletenessViolation as exc:
                exp.append(f"violation: {exc}")
            scale = f(3 if f.size > 3 else 1)
            got.append(projective_add(curve, p1.to_projective(), p2.to_projective(scale)).to_affine().xy)
        out.append(_result("curve.projective_vs_affine", n, exp, got, lambda i: (
            f"P1={pairs[i][0].xy} P2={pairs[i][1].xy} affine={exp[i]} projective={got[i]}")))
    return out


# ---------------------------------------------------------------------------
# circuits
# ---------------------------------------------------------------------------

def check_mul_circuit(c: Circuit, f: FieldSpec, triples: list[tuple[int, int, int]], name: str = "circuit.mul",
                      clean: bool = True) -> CheckResult:
    A, B, C = (list(t) for t in zip(*triples))
    run = run_registers(c, {"a": A, "b": B, "out": C})
    exp = [(c0 ^ f.mul(a, b), a, b) for a, b, c0 in triples]
    got = list(zip(run.get("out"), run.get("a"), run.get("b")))
    res = _result(name, f.n, exp, got, lambda i: (
        f"a={_hex(A[i])} b={_hex(B[i])} c={_hex(C[i])} expected out={_hex(exp[i][0])} got out={_hex(got[i][0])}"
        f" (a->{_hex(got[i][1])}, b->{_hex(got[i][2])})"))
    if res.passed and clean and (msg := _clean_report(run, ["a", "b", "out"])):
        return CheckResult(name, f.n, len(triples), 1, msg)
    return res


def check_inv_circuit(c: Circuit, f: FieldSpec, xs: list[int], name: str = "circuit.inv",
                      clean: bool = True) -> CheckResult:
    run = run_registers(c, {"a": xs})
    exp = [(f.inv(a), a) for a in xs]
    got = list(zip(run.get("out"), run.get("a")))
    res = _result(name, f.n, exp, got, lambda i: (
        f"a={_hex(xs[i])} expected out={_hex(exp[i][0])} got out={_hex(got[i][0])} (a->{_hex(got[i][1])})"))
    if res.passed and clean and (msg := _clean_report(run, ["a", "out"])):
        return CheckResult(name, f.n, len(xs), 1, msg)
    return res


def _affine(f: FieldSpec, X: int, Y: int, Z: int):
    return None if Z == 0 else (f.div(X, Z), f.div(Y, Z))


def check_point_add_circuit(c: Circuit, curve: CurveSpec, pairs, name: str = "circuit.point_add",
                            clean: bool = True) -> CheckResult:
    """``pairs`` holds projective point pairs given as integer triples."""
    f = curve.field
    regs = ["X1", "Y1", "Z1", "X2", "Y2", "Z2"]
    inputs = {r: [p[i // 3][i % 3] for p in pairs] for i, r in enumerate(regs)}
    run = run_registers(c, inputs)
    X3, Y3, Z3 = run.get("X3"), run.get("Y3"), run.get("Z3")
    exp, got = [], []
    for i, (p1, p2) in enumerate(pairs):
        exp.append(_affine(f, *p1) and _affine(f, *p2) and affine_add(
            curve, AffinePoint.from_ints(f, *_affine(f, *p1)), AffinePoint.from_ints(f, *_affine(f, *p2))).xy)
        got.append(_affine(f, X3[i], Y3[i], Z3[i]))
    res = _result(name, f.n, exp, got, lambda i: (
        f"P1={pairs[i][0]} P2={pairs[i][1]} expected affine={exp[i]} got (X3,Y3,Z3)=({X3[i]},{Y3[i]},{Z3[i]})"))
    if res.passed and clean and (msg := _clean_report(run, regs + ["X3", "Y3", "Z3"])):
        return CheckResult(name, f.n, len(pairs), 1, msg)
    return res


def check_p2a_circuit(c: Circuit, curve: CurveSpec, triples, name: str = "circuit.proj_to_affine",
                      clean: bool = True) -> CheckResult:
    f = curve.field
    X, Y, Z = (list(t) for t in zip(*triples))
    run = run_registers(c, {"X": X, "Y": Y, "Z": Z})
    exp = [_affine(f, *t) for t in triples]
    got = list(zip(run.get("x"), run.get("y")))
    res = _result(name, f.n, exp, got, lambda i: f"(X,Y,Z)={triples[i]} expected {exp[i]} got {got[i]}")
    if res.passed and clean and (msg := _clean_report(run, ["X", "Y", "Z", "x", "y"])):
        return CheckResult(name, f.n, len(triples), 1, msg)
    return res


def check_dsa_circuit(c: Circuit, curve: CurveSpec, P: AffinePoint, Q: AffinePoint, scalars,
                      name: str = "circuit.double_scalar", clean: bool = True) -> CheckResult:
    f = curve.field
    K = [k for k, _ in scalars]
    L = [l for _, l in scalars]
    run = run_registers(c, {"k": K, "l": L})
    X, Y, Z = run.get("X"), run.get("Y"), run.get("Z")
    exp = [double_scalar(curve, k, l, P, Q).xy for k, l in scalars]
    got = [_affine(f, X[i], Y[i], Z[i]) for i in range(len(scalars))]
    res = _result(name, f.n, exp, got, lambda i: (
        f"k={K[i]} l={L[i]} expected {exp[i]} got (X,Y,Z)=({X[i]},{Y[i]},{Z[i]})"))
    if res.passed and clean and (msg := _clean_report(run, ["k", "l", "X", "Y", "Z"])):
        return CheckResult(name, f.n, len(scalars), 1, msg)
    return res


def _mul_triples(f: FieldSpec, rng) -> list[tuple[int, int, int]]:
    if f.n <= 3:
        return list(product(range(f.size), repeat=3))
    if f.n == 4:
        return [(a, b, 0) for a, b in product(range(f.size), repeat=2)]
    return [tuple(_rand(f, rng, 3)) for _ in range(RANDOM_SAMPLES)]


def toy_instance(n: int, r: int = 3) -> tuple[CurveSpec, AffinePoint, AffinePoint, int]:
    """The deterministic toy curve for ``n``, its base point, ``r P`` and the order."""
    curve, P, q = find_toy_curve(FieldSpec.default(n))
    return curve, P, scalar_mul(curve, r, P), q


def projective_pairs(curve: CurveSpec) -> list:
    """All point pairs, the second one scaled by a fixed non-trivial factor."""
    f = curve.field
    pts = enumerate_points(curve)
    s = 3 if f.size > 3 else 1
    return [((p1.x.value, p1.y.value, 1), (f.mul(p2.x.value, s), f.mul(p2.y.value, s), s))
            for p1 in pts for p2 in pts]


def verify_circuits(ns, rng: np.random.Generator) -> list[CheckResult]:
    out = []
    for n in ns:
        f = FieldSpec.default(n)
        for mode in ("garbage", "clean"):
            c = mastrovito_mul(SynthConfig(f, uncompute=mode))
            out.append(check_mul_circuit(c, f, _mul_triples(f, rng), f"circuit.mul[{mode}]", mode == "clean"))
        xs = list(range(f.size)) if n <= EXHAUSTIVE_FIELD_MAX else _rand(f, rng, RANDOM_SAMPLES)
        out.append(check_inv_circuit(itoh_tsuji_circuit(SynthConfig(f)), f, xs))
        if n < 3 or n > 5:
            continue
        curve, P, Q, _ = toy_instance(n)
        cfg = SynthConfig.for_curve(curve)
        out.append(check_point_add_circuit(point_add_circuit(cfg), curve, projective_pairs(curve)))
        triples = [(f.mul(p.x.value, s), f.mul(p.y.value, s), s)
                   for p in enumerate_points(curve) for s in range(1, f.size)]
        out.append(check_p2a_circuit(proj_to_affine(cfg), curve, triples))
        if n == 3:
            scalars = list(product(range(2 ** (n + 1)), repeat=2))
            for tag, fn in (("r2l", seq_double_add_r2l), ("l2r", seq_double_add_l2r), ("tree", double_scalar_tree)):
                out.append(check_dsa_circuit(fn(cfg, P, Q), curve, P, Q, scalars, f"circuit.dsa_{tag}"))
    return out


def verify_file(c: Circuit, kind: str, rng: np.random.Generator) -> CheckResult:
    """Check an exported circuit against the oracle of ``kind``.

    The field (and curve, for point circuits) come from the circuit's
    ``# field`` / ``# curve`` lines.
    """
    if "field" not in c.meta:
        raise ValueError("circuit text carries no '# field' line")
    f = FieldSpec.parse(c.meta["field"])
    if kind == "mul":
        return check_mul_circuit(c, f, _mul_triples(f, rng), "file.mul", clean=False)
    if kind == "inv":
        xs = list(range(f.size)) if f.n <= EXHAUSTIVE_FIELD_MAX else _rand(f, rng, RANDOM_SAMPLES)
        return check_inv_circuit(c, f, xs, "file.inv", clean=False)
    if "curve" not in c.meta:
        raise ValueError(f"{kind} circuits need a '# curve' line")
    curve = CurveSpec.parse(c.meta["curve"])
    if kind == "add":
        return check_point_add_circuit(c, curve, projective_pairs(curve), "file.add", clean=False)
    if kind == "p2a":
        triples = [(p.x.value, p.y.value, 1) for p in enumerate_points(curve)]
        return check_p2a_circuit(c, curve, triples, "file.p2a", clean=False)
    raise ValueError(f"no file oracle for kind {kind!r}; use mul, inv, add or p2a")


def run_suite(scope: str, n_max: int, seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    results: list[CheckResult] = []
    if scope in ("field", "all"):
        results += verify_field(range(2, n_max + 1), rng)
    if scope in ("curve", "all"):
        results += verify_curve(range(3, min(n_max, 8) + 1))
    if scope in ("circuits", "all"):
        results += verify_circuits(range(2, n_max + 1), rng)
    return results
