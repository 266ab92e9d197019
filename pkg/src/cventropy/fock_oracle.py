"""Brute-force truncated Fock-space oracle.

States are amplitude matrices ``psi[n1, n2]``.  The beam splitter conserves
the total photon number, so it is applied exactly on each block
``n1 + n2 = N`` by exponentiating the block generator; components above the
cutoff are discarded and reported as tail mass.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CutoffTooSmall, InvariantViolation

TAIL_TOL = 1e-12
DROP_BELOW = 1e-15
DEFAULT_MAX_CUTOFF = 512


def max_cutoff() -> int:
    return int(os.environ.get("CVE_MAX_CUTOFF", DEFAULT_MAX_CUTOFF))


@dataclass(frozen=True)
class TwoModeAmplitudes:
    psi: np.ndarray
    cutoff: int

    @property
    def norm2(self) -> float:
        return float(np.sum(np.abs(self.psi) ** 2))

    @property
    def tail_mass(self) -> float:
        return max(0.0, 1.0 - self.norm2)

    @classmethod
    def fock(cls, n1: int, n2: int, cutoff: int | None = None) -> "TwoModeAmplitudes":
        cutoff = n1 + n2 if cutoff is None else cutoff
        if n1 + n2 > cutoff:
            raise CutoffTooSmall(f"|{n1},{n2}> does not fit below cutoff {cutoff}")
        psi = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
        psi[n1, n2] = 1.0
        return cls(psi, cutoff)


@dataclass(frozen=True)
class Spectrum:
    """Reduced-state eigenvalues, descending, clamped at zero."""

    eigenvalues: np.ndarray

    @classmethod
    def from_values(cls, values) -> "Spectrum":
        v = np.asarray(values, dtype=float)
        if np.any(v < -1e-12):
            raise InvariantViolation(f"spectrum has negative entry {v.min():.3e}")
        v = np.sort(np.clip(v, 0.0, None))[::-1]
        return cls(v)

    def __len__(self):
        return len(self.eigenvalues)

    @property
    def total(self) -> float:
        return float(np.sum(self.eigenvalues))

    @property
    def dropped_mass(self) -> float:
        """Mass in entries too small to enter the entropy sum."""
        v = self.eigenvalues
        return float(np.sum(v[v <= DROP_BELOW]))


def squeezed_vacuum_amplitudes(
    zeta: complex, cutoff: int, tail_tol: float | None = TAIL_TOL
) -> np.ndarray:
    """Fock amplitudes of ``S(zeta)|0>`` for photon numbers ``0..cutoff``.

    ``<2n|S|0> = (-e^{i arg zeta} tanh r)^n sqrt((2n)!)/(2^n n!) / sqrt(cosh r)``.
    """
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    r = abs(zeta)
    x = -(zeta / r) * math.tanh(r) if r > 0 else 0j
    amps = np.zeros(cutoff + 1, dtype=complex)
    coef = 1.0 / math.sqrt(math.cosh(r))
    amps[0] = coef
    for n in range(1, cutoff // 2 + 1):
        coef = coef * x * math.sqrt((2 * n - 1) / (2 * n))
        amps[2 * n] = coef
    if tail_tol is not None:
        tail = 1.0 - float(np.sum(np.abs(amps) ** 2))
        if tail > tail_tol:
            raise CutoffTooSmall(f"squeezed vacuum tail {tail:.3e} at cutoff {cutoff}")
    return amps


def product_state(v1: np.ndarray, v2: np.ndarray, cutoff: int) -> TwoModeAmplitudes:
    """Tensor product, keeping only components with ``n1 + n2 <= cutoff``."""
    psi = np.outer(v1[: cutoff + 1], v2[: cutoff + 1])
    n = np.arange(cutoff + 1)
    psi[n[:, None] + n[None, :] > cutoff] = 0.0
    return TwoModeAmplitudes(psi, cutoff)


@lru_cache(maxsize=1024)
def _block_eigensystem(N: int) -> tuple[np.ndarray, np.ndarray]:
    """Eigensystem of ``i (a1^dag a2 - a1 a2^dag)`` on the block ``n1 + n2 = N``.

    Basis index ``k`` is ``|k, N - k>``.
    """
    k = np.arange(N)
    # <k+1, N-k-1| a1^dag a2 |k, N-k> = sqrt((k+1)(N-k))
    up = np.sqrt((k + 1.0) * (N - k))
    gen = np.zeros((N + 1, N + 1))
    gen[k + 1, k] = up
    gen[k, k + 1] = -up
    w, v = np.linalg.eigh(1j * gen)
    return w, v


def block_unitary(N: int, theta: float, phi: float) -> np.ndarray:
    """``exp[theta (a1^dag a2 e^{i phi} - a1 a2^dag e^{-i phi})]`` on block ``N``.

    The phase enters as ``P U(theta, 0) P^dag`` with ``P = exp(i phi n1)``.
    """
    w, v = _block_eigensystem(N)
    # exp(theta G0) = exp(-i theta H0) with H0 = i G0
    u = (v * np.exp(-1j * theta * w)) @ v.conj().T
    if phi:
        ph = np.exp(1j * phi * np.arange(N + 1))
        u = ph[:, None] * u * ph.conj()[None, :]
    return u


def _apply_block(N: int, theta: float, phi: float, block: np.ndarray) -> np.ndarray:
    # same as block_unitary(N, theta, phi) @ block without forming the matrix
    w, v = _block_eigensystem(N)
    if phi:
        ph = np.exp(1j * phi * np.arange(N + 1))
        block = ph.conj() * block
    out = v @ (np.exp(-1j * theta * w) * (v.conj().T @ block))
    return ph * out if phi else out


def apply_beam_splitter(
    state: TwoModeAmplitudes, theta: float, phi: float = 0.0
) -> TwoModeAmplitudes:
    psi = state.psi
    cutoff = state.cutoff
    out = np.zeros_like(psi)
    for N in range(cutoff + 1):
        k = np.arange(N + 1)
        block = psi[k, N - k]
        if not np.any(block):
            continue
        out[k, N - k] = _apply_block(N, theta, phi, block)
    return TwoModeAmplitudes(out, cutoff)


def reduced_density_matrix(state: TwoModeAmplitudes, keep: int = 1) -> np.ndarray:
    """``rho1 = psi psi^dag`` (``keep=1``) or ``rho2 = psi^T psi^*`` (``keep=2``)."""
    psi = state.psi
    if keep == 1:
        return psi @ psi.conj().T
    if keep == 2:
        return psi.T @ psi.conj()
    raise ValueError("keep must be 1 or 2")


def schmidt_spectrum(state: TwoModeAmplitudes, keep: int = 1) -> Spectrum:
    rho = reduced_density_matrix(state, keep)
    w = np.linalg.eigvalsh(rho)
    return Spectrum.from_values(w)


def von_neumann_entropy(s: Spectrum) -> float:
    v = s.eigenvalues
    v = v[v > DROP_BELOW]
    return float(-np.sum(v * np.log(v))) + 0.0  # no -0.0


def tmsv_schmidt(r: float, cutoff: int = 60, tail_tol: float | None = TAIL_TOL) -> Spectrum:
    if r < 0:
        raise ValueError("r must be >= 0")
    lam = math.tanh(r) ** 2
    vals = (1.0 - lam) * lam ** np.arange(cutoff + 1)
    tail = lam ** (cutoff + 1)
    if tail_tol is not None and tail > tail_tol:
        raise CutoffTooSmall(f"TMSV tail {tail:.3e} at cutoff {cutoff}")
    return Spectrum.from_values(vals)


def initial_cutoff(zeta1: complex, zeta2: complex) -> int:
    m = max(abs(zeta1), abs(zeta2))
    return 2 * math.ceil(5 * max(m, 0.5) * math.cosh(m))


def product_tail_mass(zeta1: complex, zeta2: complex, cutoff: int) -> float:
    """Probability of ``n1 + n2 > cutoff`` in ``S1 S2 |00>``.

    The beam splitter conserves ``n1 + n2``, so this is also the mass the
    truncated circuit state loses.
    """
    p1 = np.abs(squeezed_vacuum_amplitudes(zeta1, cutoff, tail_tol=None)) ** 2
    p2 = np.abs(squeezed_vacuum_amplitudes(zeta2, cutoff, tail_tol=None)) ** 2
    kept = float(np.sum(np.convolve(p1, p2)[: cutoff + 1]))
    return max(0.0, 1.0 - kept)


def adaptive_cutoff(zeta1: complex, zeta2: complex, tail_tol: float = TAIL_TOL) -> int:
    """Double from :func:`initial_cutoff` until the discarded mass is below ``tail_tol``."""
    ceiling = max_cutoff()
    cutoff = min(initial_cutoff(zeta1, zeta2), ceiling)
    while True:
        tail = product_tail_mass(zeta1, zeta2, cutoff)
        if tail < tail_tol:
            return cutoff
        if cutoff >= ceiling:
            raise CutoffTooSmall(
                f"tail mass {tail:.3e} still above {tail_tol:.1e} at ceiling cutoff {ceiling}"
            )
        cutoff = min(2 * cutoff, ceiling)


def circuit_state(theta, phi, zeta1, zeta2, cutoff: int) -> TwoModeAmplitudes:
    v1 = squeezed_vacuum_amplitudes(zeta1, cutoff, tail_tol=None)
    v2 = squeezed_vacuum_amplitudes(zeta2, cutoff, tail_tol=None)
    return apply_beam_splitter(product_state(v1, v2, cutoff), theta, phi)


@dataclass(frozen=True)
class OracleResult:
    entropy: float
    spectrum: Spectrum
    cutoff: int
    tail_mass: float


def circuit_oracle(
    theta: float,
    phi: float,
    zeta1: complex,
    zeta2: complex,
    cutoff: int | None = None,
    tail_tol: float = TAIL_TOL,
) -> OracleResult:
    """Entropy of ``B S1 S2 |00>`` by brute force.

    Without an explicit ``cutoff`` it starts from :func:`initial_cutoff` and
    doubles until the discarded mass is below ``tail_tol``.
    """
    if cutoff is None:
        cutoff = adaptive_cutoff(zeta1, zeta2, tail_tol)
    state = circuit_state(theta, phi, zeta1, zeta2, cutoff)
    spec = schmidt_spectrum(state)
    tail = state.tail_mass
    return OracleResult(von_neumann_entropy(spec), spec, cutoff, tail)
