"""Acceptance gate: one verdict line per criterion, each at its stated tolerance."""

import io
import json
import math
import time
from contextlib import redirect_stderr, redirect_stdout

import numpy as np
import pytest

import cventropy.nongauss as ng
from cventropy import circuits, gaussian, verify
from cventropy.circuits import CircuitParams
from cventropy.cli import coeff_state_json, main
from cventropy.errors import ProductState

SEED = 7
SAMPLES = 200


@pytest.fixture(scope="module")
def gaussian_samples():
    params = verify.random_circuits(np.random.default_rng(SEED), SAMPLES)
    start = time.perf_counter()
    results = [verify.evaluate_gaussian(p) for p in params]
    return results, time.perf_counter() - start


def _tmsv_reference(r: float) -> float:
    if r == 0:
        return 0.0
    c2, s2 = math.cosh(r) ** 2, math.sinh(r) ** 2
    return c2 * math.log(c2) - s2 * math.log(s2)


def test_criterion_1_tmsv_identity(acceptance_report):
    e_dev = lam_dev = 0.0
    for r in verify.TMSV_RADII:
        p = CircuitParams(math.pi / 4, 0.0, complex(-r), complex(r))
        e_dev = max(e_dev, abs(circuits.entropy_closed_form(p) - _tmsv_reference(r)))
        lam = circuits.reduced_from_circuit(p).lam if r > 0 else 0.0
        lam_dev = max(lam_dev, abs(lam - math.tanh(r) ** 2))
    ok = e_dev < 1e-10 and lam_dev < 1e-12
    acceptance_report(1, "TMSV identity", ok, f"entropy dev {e_dev:.2e} < 1e-10, lambda dev {lam_dev:.2e} < 1e-12")
    assert ok


def test_criterion_2_route_equivalence(gaussian_samples, acceptance_report):
    results, elapsed = gaussian_samples
    route = max(abs(s.matrix_route - s.lam_route) for s in results)
    oracle = max(max(abs(s.matrix_route - s.oracle), abs(s.lam_route - s.oracle)) for s in results)
    ok = route < 1e-9 and oracle < 1e-8 and elapsed < 30.0
    acceptance_report(
        2, "route equivalence", ok,
        f"{len(results)} samples, route dev {route:.2e} < 1e-9, oracle dev {oracle:.2e} < 1e-8, {elapsed:.1f} s < 30 s",
    )
    assert ok


def test_criterion_3_normalization(gaussian_samples, acceptance_report):
    results, _ = gaussian_samples
    dev = max(abs(s.normalization - 1.0) for s in results)
    ok = dev < 1e-10
    acceptance_report(3, "normalization", ok, f"max |A sqrt(lam)/(1-lam) - 1| = {dev:.2e} < 1e-10")
    assert ok


def test_criterion_4_separability(gaussian_samples, acceptance_report):
    results, _ = gaussian_samples
    bad = sum(s.separable != (s.lam_route < 1e-8) for s in results)
    products = verify.product_circuits(np.random.default_rng(SEED))
    for p in products:
        E = circuits.circuit_entropy(p)
        try:
            sep = gaussian.is_separable(gaussian.reduce(circuits.bs_squeeze_coeffs(p)), 1e-8)
        except ProductState:
            sep = True
        bad += sep != (E < 1e-8)
    n_sep = sum(s.separable for s in results)
    ok = bad == 0
    acceptance_report(
        4, "separability", ok,
        f"{bad} disagreements over {len(results)} random + {len(products)} product states ({n_sep} random flagged separable)",
    )
    assert ok


def test_criterion_5_special_case(acceptance_report):
    res = verify.special_case_check(np.random.default_rng(SEED))
    ok = res.passed and res.count == 20
    acceptance_report(5, "special case", ok, f"{res.count} evaluations, max dev {res.max_dev:.2e} < 1e-9")
    assert ok


def test_criterion_6_nongaussian(acceptance_report):
    spec, total, _sym, ln2 = verify.nongauss_checks(max_total=10)
    ok = spec.passed and total.passed and ln2.passed and spec.count == 66 * 16
    acceptance_report(
        6, "non-Gaussian spectra", ok,
        f"{spec.count} cases, spectrum dev {spec.max_dev:.2e} < 1e-9, sum dev {total.max_dev:.2e} < 1e-10, "
        f"ln 2 dev {ln2.max_dev:.2e} < 1e-12",
    )
    assert ok


def test_criterion_7_oracle_self_checks(acceptance_report):
    unit, sym, drift = verify.oracle_checks(np.random.default_rng(SEED), samples=100)
    ok = unit.passed and sym.passed and drift.passed and unit.count == 100
    acceptance_report(
        7, "oracle self-checks", ok,
        f"unitarity {unit.max_dev:.2e} < 1e-12, symmetry {sym.max_dev:.2e} < 1e-10, drift {drift.max_dev:.2e} < 1e-9",
    )
    assert ok


def _cli(argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue()


def test_criterion_8_cli_contract(acceptance_report, monkeypatch):
    argv = ["verify", "--scope", "all", "--samples", str(SAMPLES), "--seed", str(SEED)]
    code1, out1 = _cli(argv)
    code2, out2 = _cli(argv)

    tmsv = circuits.bs_squeeze_coeffs(CircuitParams.tmsv(1.0))
    asym = coeff_state_json(tmsv)
    asym["M1"][0][1] = [-0.5, 0.0]
    singular = coeff_state_json(tmsv)
    singular["M2"] = [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]
    # M1 equal to the M12 correction leaves lambda = 1
    divergent = {
        "A0": 0.5,
        "M1": [[[0, 0], [-0.25, 0]], [[-0.25, 0], [0, 0]]],
        "M2": [[[0, 0], [-1, 0]], [[-1, 0], [0, 0]]],
        "M12": [[[-0.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]],
    }
    expected = {
        2: _cli(["sweep", "--param", "r", "--start", "0", "--stop", "1", "--steps", "1"])[0],
        3: _cli(["gaussian"], json.dumps(divergent), monkeypatch)[0],
        4: _cli(["gaussian"], json.dumps(asym), monkeypatch)[0],
        5: _cli(["gaussian"], json.dumps(singular), monkeypatch)[0],
    }
    monkeypatch.setattr(ng, "oracle_probabilities", lambda fp: np.array([1.0, 0.0]))
    expected[6] = _cli(["fock", "--n1", "1", "--n2", "0", "--theta", "0.7853981633974483", "--check"])[0]
    monkeypatch.undo()
    original = circuits.entropy_formula
    monkeypatch.setattr(circuits, "entropy_formula", lambda A, lam: -original(A, lam))
    expected[1] = _cli(["verify", "--scope", "gaussian", "--samples", "20", "--seed", str(SEED)])[0]

    codes_ok = all(k == v for k, v in expected.items())
    ok = code1 == 0 and out1 == out2 and codes_ok
    acceptance_report(
        8, "CLI contract", ok,
        f"verify exit {code1}, repeat identical: {out1 == out2}, exit codes {sorted(expected.items())}",
    )
    assert ok
