"""Command-line interface.

Exit codes: 0 ok, 1 verify failure, 2 usage, 3 divergence, 4 invariant
violation, 5 degenerate reduction, 6 formula mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import jsonschema
import numpy as np

from . import circuits, fock_oracle, gaussian, nongauss, verify
from .circuits import CircuitParams
from .errors import CVEntropyError, FormulaMismatch, InvariantViolation, ProductState

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_MISMATCH = 6
CHECK_TOL = 1e-8
SEPARABLE_TOL = 1e-8
LN2 = math.log(2.0)

_COMPLEX_FLAGS = ("--zeta1", "--zeta2")

_C2 = {
    "type": "array",
    "minItems": 2,
    "maxItems": 2,
    "items": {
        "type": "array",
        "minItems": 2,
        "maxItems": 2,
        "items": {"type": "array", "minItems": 2, "maxItems": 2, "items": {"type": "number"}},
    },
}
GAUSSIAN_SCHEMA = {
    "type": "object",
    "required": ["A0", "M1", "M2", "M12"],
    "properties": {
        "A0": {"type": "number", "exclusiveMinimum": 0},
        "M1": _C2,
        "M2": _C2,
        "M12": _C2,
    },
}


class UsageError(Exception):
    pass


def num(x):
    """Round to 12 significant digits for output; complex as ``[re, im]``."""
    if x is None:
        return None
    if isinstance(x, complex):
        return [num(x.real), num(x.imag)]
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.12g}") + 0.0


def parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) == 1:
        parts.append("0")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}") from None


def _entropy_fields(E: float, bits: bool) -> dict:
    return {"entropy_bits": num(E / LN2)} if bits else {"entropy_nats": num(E)}


def _angle(value: float, degrees: bool) -> float:
    return math.radians(value) if degrees else value


# circuit ---------------------------------------------------------------------


def circuit_record(p: CircuitParams, check: bool = False, bits: bool = False) -> dict:
    k = circuits.circuit_coeffs(p)
    E = circuits.entropy_closed_form(p)
    try:
        red = circuits.reduced_from_circuit(p)
        lam, A, norm = red.lam, red.A, red.normalization
        separable = gaussian.is_separable(red, SEPARABLE_TOL)
    except ProductState:
        red, lam, A, norm, separable = None, 0.0, None, None, True
    rec = {
        **_entropy_fields(E, bits),
        "lambda": num(lam),
        "A": num(A),
        "alpha": num(k.alpha),
        "beta": num(k.beta_c),
        "delta": num(k.delta),
        "separable": separable,
        "normalization_check": num(norm),
        "tail_mass": None,
        "deviations": None,
    }
    if check:
        E_generic = circuits.circuit_entropy(p)
        E_matrix = gaussian.entropy_matrix_route(red) if red is not None else 0.0
        o = fock_oracle.circuit_oracle(p.theta, p.phi, p.zeta1, p.zeta2)
        rec["tail_mass"] = num(o.tail_mass)
        rec["deviations"] = {
            "entropy_matrix_route": num(E_matrix),
            "entropy_generic_reduction": num(E_generic),
            "entropy_oracle": num(o.entropy),
            "oracle_cutoff": o.cutoff,
            "matrix_route": num(abs(E_matrix - E)),
            "generic_reduction": num(abs(E_generic - E)),
            "oracle": num(abs(o.entropy - E)),
        }
    return rec


def cmd_circuit(args) -> int:
    theta = _angle(args.theta, args.degrees)
    phi = _angle(args.phi, args.degrees)
    try:
        p = CircuitParams(theta, phi, args.zeta1, args.zeta2)
    except InvariantViolation as exc:
        raise UsageError(str(exc)) from exc
    rec = circuit_record(p, check=args.check, bits=args.bits)
    _emit(rec)
    if args.check:
        devs = rec["deviations"]
        worst = max(devs["matrix_route"], devs["generic_reduction"], devs["oracle"])
        if worst > CHECK_TOL:
            print(f"route deviation {worst:.3e} exceeds {CHECK_TOL:.0e}", file=sys.stderr)
            return EXIT_MISMATCH
    return EXIT_OK


# gaussian --------------------------------------------------------------------


def _matrix_from_json(rows) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)


def gaussian_record(state: gaussian.GaussianCoeffState, bits: bool = False) -> dict:
    try:
        red = gaussian.reduce(state)
    except ProductState:
        return {
            **_entropy_fields(0.0, bits),
            "lambda": 0.0,
            "A": None,
            "separable": True,
            "normalization_check": None,
            "tail_mass": None,
            "deviations": None,
        }
    E = gaussian.entropy_gaussian(red)
    return {
        **_entropy_fields(E, bits),
        "lambda": num(red.lam),
        "A": num(red.A),
        "separable": gaussian.is_separable(red, SEPARABLE_TOL),
        "normalization_check": num(red.normalization),
        "tail_mass": None,
        "deviations": None,
    }


def cmd_gaussian(args) -> int:
    text = args.input.read() if args.input else sys.stdin.read()
    try:
        data = json.loads(text)
        jsonschema.validate(data, GAUSSIAN_SCHEMA)
    except (json.JSONDecodeError, jsonschema.ValidationError) as exc:
        msg = exc.message if isinstance(exc, jsonschema.ValidationError) else str(exc)
        raise UsageError(f"invalid coefficient JSON: {msg}") from exc
    state = gaussian.GaussianCoeffState(
        M1=_matrix_from_json(data["M1"]),
        M2=_matrix_from_json(data["M2"]),
        M12=_matrix_from_json(data["M12"]),
        A0=float(data["A0"]),
    )
    _emit(gaussian_record(state, bits=args.bits))
    return EXIT_OK


def coeff_state_json(state: gaussian.GaussianCoeffState) -> dict:
    """Inverse of the ``gaussian`` subcommand's input format."""

    def enc(m):
        return [[[float(z.real), float(z.imag)] for z in row] for row in m]

    return {"A0": state.A0, "M1": enc(state.M1), "M2": enc(state.M2), "M12": enc(state.M12)}


# fock ------------------------------------------------------------------------


def cmd_fock(args) -> int:
    theta = _angle(args.theta, args.degrees)
    try:
        fp = nongauss.FockPair(args.n1, args.n2, theta)
    except InvariantViolation as exc:
        raise UsageError(str(exc)) from exc
    probs = nongauss.bs_fock_probabilities(fp)
    rec = {
        "spectrum": [num(x) for x in probs],
        **_entropy_fields(nongauss.bs_fock_entropy(fp, check=False), args.bits),
        "oracle_spectrum": None,
        "deviations": None,
    }
    if args.check:
        ref = nongauss.oracle_probabilities(fp)
        dev = float(np.max(np.abs(probs - ref)))
        rec["oracle_spectrum"] = [num(x) for x in ref]
        rec["deviations"] = {"oracle": num(dev)}
        if dev > nongauss.ORACLE_TOL:
            _emit(rec)
            print(
                f"generating-function spectrum deviates from oracle by {dev:.3e}",
                file=sys.stderr,
            )
            return EXIT_MISMATCH
    _emit(rec)
    return EXIT_OK


# sweep -----------------------------------------------------------------------

SWEEP_PARAMS = (
    "theta",
    "phi",
    "zeta1_mag",
    "zeta1_phase",
    "zeta2_mag",
    "zeta2_phase",
    "r",
    "n1",
    "n2",
)
_ANGLE_PARAMS = ("theta", "phi", "zeta1_phase", "zeta2_phase")
_INT_PARAMS = ("n1", "n2")


@dataclass(frozen=True)
class SweepSpec:
    param: str
    start: float
    stop: float
    steps: int
    theta: float = math.pi / 4
    phi: float = 0.0
    zeta1: complex = 0j
    zeta2: complex = 0j
    n1: int = 1
    n2: int = 0

    def __post_init__(self):
        if self.param not in SWEEP_PARAMS:
            raise UsageError(f"unknown sweep parameter {self.param!r}")
        if self.steps < 2:
            raise UsageError(f"steps must be >= 2, got {self.steps}")
        if self.start == self.stop:
            raise UsageError("start and stop must differ")
        if self.param in _INT_PARAMS:
            vals = self.values()
            if np.any(np.abs(vals - np.round(vals)) > 1e-9) or np.any(vals < 0):
                raise UsageError(f"{self.param} sweep must land on nonnegative integers")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


def _polar_replace(z: complex, mag=None, phase=None) -> complex:
    m = abs(z) if mag is None else mag
    a = math.atan2(z.imag, z.real) if phase is None else phase
    return m * complex(math.cos(a), math.sin(a))


def sweep_point(spec: SweepSpec, value: float) -> dict:
    row = {spec.param: num(value), "entropy": None, "lambda": None, "separable": None, "error": ""}
    try:
        if spec.param in _INT_PARAMS:
            n1 = int(round(value)) if spec.param == "n1" else spec.n1
            n2 = int(round(value)) if spec.param == "n2" else spec.n2
            E = nongauss.bs_fock_entropy(nongauss.FockPair(n1, n2, spec.theta), check=False)
            row.update(entropy=E, separable=E < SEPARABLE_TOL)
            return row
        if spec.param == "r":
            p = CircuitParams.tmsv(value)
        else:
            theta, phi, z1, z2 = spec.theta, spec.phi, spec.zeta1, spec.zeta2
            if spec.param == "theta":
                theta = value
            elif spec.param == "phi":
                phi = value
            elif spec.param == "zeta1_mag":
                z1 = _polar_replace(z1, mag=value)
            elif spec.param == "zeta1_phase":
                z1 = _polar_replace(z1, phase=value)
            elif spec.param == "zeta2_mag":
                z2 = _polar_replace(z2, mag=value)
            elif spec.param == "zeta2_phase":
                z2 = _polar_replace(z2, phase=value)
            p = CircuitParams(theta, phi, z1, z2)
        E = circuits.entropy_closed_form(p)
        try:
            red = circuits.reduced_from_circuit(p)
            lam, sep = red.lam, gaussian.is_separable(red, SEPARABLE_TOL)
        except ProductState:
            lam, sep = 0.0, True
        row.update(entropy=E, separable=sep, **{"lambda": lam})
    except CVEntropyError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _sweep_worker(job):
    spec, value = job
    return sweep_point(spec, value)


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list[dict]:
    work = [(spec, float(v)) for v in spec.values()]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_sweep_worker, work))
    return [_sweep_worker(w) for w in work]


def format_sweep(rows: list[dict], param: str, fmt: str = "csv", bits: bool = False) -> str:
    ecol = "entropy_bits" if bits else "entropy_nats"
    out_rows = []
    for row in rows:
        E = row["entropy"]
        if E is not None and bits:
            E = E / LN2
        out_rows.append(
            {
                param: row[param],
                ecol: num(E),
                "lambda": num(row["lambda"]),
                "separable": row["separable"],
                "error": row["error"],
            }
        )
    if fmt == "jsonl":
        return "".join(json.dumps(r) + "\n" for r in out_rows)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([param, ecol, "lambda", "separable", "error"])
    for r in out_rows:
        w.writerow(
            [
                _csv_cell(r[param]),
                _csv_cell(r[ecol]),
                _csv_cell(r["lambda"]),
                "" if r["separable"] is None else str(r["separable"]).lower(),
                r["error"],
            ]
        )
    return buf.getvalue()


def _csv_cell(x) -> str:
    return "" if x is None else f"{x:.12g}"


def cmd_sweep(args) -> int:
    start, stop = args.start, args.stop
    if args.degrees and args.param in _ANGLE_PARAMS:
        start, stop = math.radians(start), math.radians(stop)
    spec = SweepSpec(
        param=args.param,
        start=start,
        stop=stop,
        steps=args.steps,
        theta=_angle(args.theta, args.degrees),
        phi=_angle(args.phi, args.degrees),
        zeta1=args.zeta1,
        zeta2=args.zeta2,
        n1=args.n1,
        n2=args.n2,
    )
    rows = run_sweep(spec, jobs=args.jobs)
    sys.stdout.write(format_sweep(rows, spec.param, args.format, args.bits))
    return EXIT_OK


# verify ----------------------------------------------------------------------


def cmd_verify(args) -> int:
    if args.samples < 1:
        raise UsageError("samples must be >= 1")
    print(f"verify scope={args.scope} seed={args.seed} samples={args.samples}")
    results = verify.run(args.scope, seed=args.seed, samples=args.samples, jobs=args.jobs)
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VERIFY if failed else EXIT_OK


# plumbing --------------------------------------------------------------------


def _emit(rec: dict) -> None:
    print(json.dumps(rec))


def _join_complex_flags(argv: list[str]) -> list[str]:
    # "--zeta1 -1,0" would be read as an unknown option by argparse
    out, it = [], iter(argv)
    for tok in it:
        if tok in _COMPLEX_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cventropy",
        description="Entanglement entropy of bipartite pure continuous-variable states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, angles=True):
        p.add_argument("--bits", action="store_true", help="report entropy in bits")
        if angles:
            p.add_argument("--degrees", action="store_true", help="angles are in degrees")

    p = sub.add_parser("circuit", help="beam splitter on two squeezed vacua")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--zeta1", type=parse_complex, default=0j, help="re,im")
    p.add_argument("--zeta2", type=parse_complex, default=0j, help="re,im")
    p.add_argument("--check", action="store_true", help="cross-check every route and the oracle")
    add_common(p)
    p.set_defaults(func=cmd_circuit)

    p = sub.add_parser("gaussian", help="coefficient-matrix JSON on stdin")
    p.add_argument("--input", type=argparse.FileType("r"), default=None)
    add_common(p, angles=False)
    p.set_defaults(func=cmd_gaussian)

    p = sub.add_parser("fock", help="Fock state |n1, n2> through a real beam splitter")
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--n2", type=int, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--check", action="store_true")
    add_common(p)
    p.set_defaults(func=cmd_fock)

    p = sub.add_parser("sweep", help="tabulate entropy along one parameter")
    p.add_argument("--param", choices=SWEEP_PARAMS, required=True)
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--theta", type=float, default=math.pi / 4)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--zeta1", type=parse_complex, default=0j)
    p.add_argument("--zeta2", type=parse_complex, default=0j)
    p.add_argument("--n1", type=int, default=1)
    p.add_argument("--n2", type=int, default=0)
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--jobs", type=int, default=1)
    add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the randomised cross-check suites")
    p.add_argument("--scope", choices=("gaussian", "fock", "all"), default="all")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_complex_flags(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FormulaMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except CVEntropyError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
