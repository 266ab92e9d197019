"""Randomised property suites cross-checking every entropy route.

Each check returns a :class:`CheckResult` holding the worst deviation seen and
the parameters that produced it.  Sampling is driven by a seeded
``numpy.random.Generator`` so a given seed always yields identical output.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import circuits, fock_oracle, gaussian, nongauss
from .circuits import CircuitParams
from .errors import ProductState

ROUTE_TOL = 1e-9
ORACLE_TOL = 1e-8
NORM_TOL = 1e-10
REDUCTION_TOL = 1e-10
SPECIAL_TOL = 1e-9
TMSV_TOL = 1e-10
LAMBDA_TOL = 1e-12
FOCK_SPEC_TOL = 1e-9
FOCK_SUM_TOL = 1e-10
UNITARY_TOL = 1e-12
SYMMETRY_TOL = 1e-10
DRIFT_TOL = 1e-9
SEPARABLE_TOL = 1e-8

MAX_ZETA = 1.5
TMSV_RADII = (0.0, 0.25, 0.5, 1.0, 1.5)


@dataclass
class CheckResult:
    name: str
    tol: float
    max_dev: float = 0.0
    count: int = 0
    worst: str = ""
    failures: list = field(default_factory=list)

    def record(self, dev: float, where: str) -> None:
        self.count += 1
        if not dev <= self.tol:  # NaN counts as failure
            self.failures.append(where)
        if not dev <= self.max_dev:
            self.max_dev = dev
            self.worst = where

    @property
    def passed(self) -> bool:
        return not self.failures and self.count > 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"{status}  {self.name:<30} n={self.count:<5d} max_dev={self.max_dev:.3e}  tol={self.tol:.0e}"
        if not self.passed:
            first = self.failures[0] if self.failures else "no samples"
            out += f"\n      counterexample: {first}"
        return out


def random_circuits(rng: np.random.Generator, n: int, max_zeta: float = MAX_ZETA) -> list[CircuitParams]:
    out = []
    for _ in range(n):
        theta, phi = rng.uniform(0.0, 2 * math.pi, size=2)
        mags = rng.uniform(0.0, max_zeta, size=2)
        args = rng.uniform(0.0, 2 * math.pi, size=2)
        z1, z2 = mags * np.exp(1j * args)
        out.append(CircuitParams(float(theta), float(phi), complex(z1), complex(z2)))
    return out


def product_circuits(rng: np.random.Generator, n: int = 20) -> list[CircuitParams]:
    """Equal squeezers with ``phi = 0``: ``delta`` vanishes for every ``theta``."""
    out = []
    for _ in range(n):
        z = rng.uniform(0.0, MAX_ZETA) * np.exp(1j * rng.uniform(0.0, 2 * math.pi))
        out.append(CircuitParams(float(rng.uniform(0.0, 2 * math.pi)), 0.0, complex(z), complex(z)))
    return out


def _fmt(p: CircuitParams) -> str:
    return (
        f"theta={p.theta!r} phi={p.phi!r} zeta1={p.zeta1.real!r},{p.zeta1.imag!r} "
        f"zeta2={p.zeta2.real!r},{p.zeta2.imag!r}"
    )


@dataclass(frozen=True)
class GaussianSample:
    params: CircuitParams
    closed: float
    lam_route: float
    matrix_route: float
    oracle: float
    reduction_dev: float
    normalization: float
    separable: bool
    root_dev: float


def evaluate_gaussian(p: CircuitParams) -> GaussianSample:
    closed = circuits.entropy_closed_form(p)
    o = fock_oracle.circuit_oracle(p.theta, p.phi, p.zeta1, p.zeta2)
    try:
        red = gaussian.reduce(circuits.bs_squeeze_coeffs(p))
        ref = circuits.reduced_from_circuit(p)
    except ProductState:
        return GaussianSample(p, closed, 0.0, 0.0, o.entropy, 0.0, 1.0, True, 0.0)
    lam_route = gaussian.entropy_gaussian(red)
    matrix_route = gaussian.entropy_matrix_route(red)
    rel = [
        abs(x - y) / max(1.0, abs(y))
        for x, y in ((red.a, ref.a), (red.b, ref.b), (red.c, ref.c), (red.d, ref.d), (red.A, ref.A))
    ]
    small, large = red.roots
    root_dev = abs(circuits.entropy_formula(red.A, small) - circuits.entropy_formula(red.A, large))
    return GaussianSample(
        params=p,
        closed=closed,
        lam_route=lam_route,
        matrix_route=matrix_route,
        oracle=o.entropy,
        reduction_dev=max(rel),
        normalization=red.normalization,
        separable=gaussian.is_separable(red, SEPARABLE_TOL),
        root_dev=root_dev,
    )


def _map(fn, items, jobs: int):
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def gaussian_checks(rng: np.random.Generator, samples: int, jobs: int = 1) -> list[CheckResult]:
    params = random_circuits(rng, samples)
    results = _map(evaluate_gaussian, params, jobs)

    route = CheckResult("route_equivalence", ROUTE_TOL)
    closed = CheckResult("closed_form_vs_lambda_route", ROUTE_TOL)
    oracle = CheckResult("oracle_agreement", ORACLE_TOL)
    reduction = CheckResult("reduction_routes", REDUCTION_TOL)
    norm = CheckResult("normalization", NORM_TOL)
    roots = CheckResult("root_indifference", ROUTE_TOL)
    sep = CheckResult("separability_consistency", 0.0)
    for s in results:
        where = _fmt(s.params)
        route.record(abs(s.matrix_route - s.lam_route), where)
        closed.record(abs(s.closed - s.lam_route), where)
        oracle.record(abs(s.closed - s.oracle), where)
        reduction.record(s.reduction_dev, where)
        norm.record(abs(s.normalization - 1.0), where)
        roots.record(s.root_dev, where)
        sep.record(float(s.separable != (s.lam_route < SEPARABLE_TOL)), where)

    for p in product_circuits(rng):
        E = circuits.circuit_entropy(p)
        try:
            separable = gaussian.is_separable(
                gaussian.reduce(circuits.bs_squeeze_coeffs(p)), SEPARABLE_TOL
            )
        except ProductState:
            separable = True
        sep.record(float(separable != (E < SEPARABLE_TOL)), _fmt(p))

    return [route, closed, oracle, reduction, norm, roots, sep, *tmsv_checks(), special_case_check(rng)]


def tmsv_checks() -> list[CheckResult]:
    res = CheckResult("tmsv_identity", TMSV_TOL)
    lam_res = CheckResult("tmsv_lambda", LAMBDA_TOL)
    for r in TMSV_RADII:
        p = CircuitParams.tmsv(r)
        res.record(abs(circuits.entropy_closed_form(p) - circuits.tmsv_entropy(r)), f"r={r}")
        try:
            lam = circuits.reduced_from_circuit(p).lam
        except ProductState:
            lam = 0.0
        lam_res.record(abs(lam - math.tanh(r) ** 2), f"r={r}")
    return [res, lam_res]


def special_case_pairs(rng: np.random.Generator, n: int = 10) -> list[tuple[float, float]]:
    return [tuple(float(x) for x in rng.uniform(-MAX_ZETA, MAX_ZETA, size=2)) for _ in range(n)]


def special_case_check(rng: np.random.Generator) -> CheckResult:
    res = CheckResult("special_case", SPECIAL_TOL)
    pairs = special_case_pairs(rng)
    for l, phi in ((0, 0.0), (1, math.pi / 2)):
        for s1, s2 in pairs:
            E = circuits.special_case_entropy(s1, s2, phi, l)
            ref = circuits.entropy_closed_form(circuits.special_case_params(s1, s2, phi))
            res.record(abs(E - ref), f"s1={s1!r} s2={s2!r} phi={phi!r}")
    return res


def theta_grid(n: int = 16) -> np.ndarray:
    """``n`` interior points of ``(0, pi/2)``."""
    return (np.arange(n) + 0.5) * (math.pi / 2) / n


def nongauss_checks(max_total: int = 10) -> list[CheckResult]:
    spec = CheckResult("fock_spectrum_vs_oracle", FOCK_SPEC_TOL)
    total = CheckResult("fock_spectrum_sum", FOCK_SUM_TOL)
    sym = CheckResult("fock_entropy_symmetry", SYMMETRY_TOL)
    ln2 = CheckResult("fock_1_0_ln2", 1e-12)
    for n1 in range(max_total + 1):
        for n2 in range(max_total + 1 - n1):
            for th in theta_grid():
                fp = nongauss.FockPair(n1, n2, float(th))
                probs = nongauss.bs_fock_probabilities(fp)
                ref = nongauss.oracle_probabilities(fp)
                where = f"n1={n1} n2={n2} theta={float(th)!r}"
                spec.record(float(np.max(np.abs(probs - ref))), where)
                total.record(abs(float(np.sum(probs)) - 1.0), where)
                E = nongauss.bs_fock_entropy(fp, check=False)
                E_swap = nongauss.bs_fock_entropy(nongauss.FockPair(n2, n1, float(th)), check=False)
                E_comp = nongauss.bs_fock_entropy(
                    nongauss.FockPair(n2, n1, math.pi / 2 - float(th)), check=False
                )
                sym.record(max(abs(E - E_swap), abs(E - E_comp)), where)
    ln2.record(abs(nongauss.bs_fock_entropy(nongauss.FockPair(1, 0, math.pi / 4)) - math.log(2)), "n1=1 n2=0")
    return [spec, total, sym, ln2]


def random_two_mode_state(rng: np.random.Generator, cutoff: int) -> fock_oracle.TwoModeAmplitudes:
    psi = rng.normal(size=(cutoff + 1, cutoff + 1)) + 1j * rng.normal(size=(cutoff + 1, cutoff + 1))
    n = np.arange(cutoff + 1)
    psi[n[:, None] + n[None, :] > cutoff] = 0.0
    psi /= np.linalg.norm(psi)
    return fock_oracle.TwoModeAmplitudes(psi, cutoff)


def oracle_checks(rng: np.random.Generator, samples: int, drift_samples: int = 10) -> list[CheckResult]:
    unit = CheckResult("beam_splitter_unitarity", UNITARY_TOL)
    sym = CheckResult("subsystem_entropy_symmetry", SYMMETRY_TOL)
    for _ in range(samples):
        state = random_two_mode_state(rng, int(rng.integers(1, 25)))
        theta, phi = (float(x) for x in rng.uniform(0.0, 2 * math.pi, size=2))
        out = fock_oracle.apply_beam_splitter(state, theta, phi)
        where = f"cutoff={state.cutoff} theta={theta!r} phi={phi!r}"
        unit.record(abs(math.sqrt(out.norm2) - math.sqrt(state.norm2)), where)
        e1 = fock_oracle.von_neumann_entropy(fock_oracle.schmidt_spectrum(out, keep=1))
        e2 = fock_oracle.von_neumann_entropy(fock_oracle.schmidt_spectrum(out, keep=2))
        sym.record(abs(e1 - e2), where)

    drift = CheckResult("cutoff_doubling_drift", DRIFT_TOL)
    for p in random_circuits(rng, drift_samples):
        o = fock_oracle.circuit_oracle(p.theta, p.phi, p.zeta1, p.zeta2)
        o2 = fock_oracle.circuit_oracle(p.theta, p.phi, p.zeta1, p.zeta2, cutoff=2 * o.cutoff)
        drift.record(abs(o.entropy - o2.entropy), _fmt(p) + f" cutoff={o.cutoff}")
    return [unit, sym, drift]


def run(scope: str = "all", seed: int = 7, samples: int = 200, jobs: int = 1) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    results: list[CheckResult] = []
    if scope in ("gaussian", "all"):
        results += gaussian_checks(rng, samples, jobs)
    if scope in ("fock", "all"):
        results += nongauss_checks()
        results += oracle_checks(rng, samples)
    return results
