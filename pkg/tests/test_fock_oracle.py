import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cventropy.circuits import tmsv_entropy
from cventropy.errors import CutoffTooSmall, InvariantViolation
from cventropy.fock_oracle import (
    Spectrum,
    TwoModeAmplitudes,
    adaptive_cutoff,
    apply_beam_splitter,
    block_unitary,
    circuit_oracle,
    product_tail_mass,
    schmidt_spectrum,
    squeezed_vacuum_amplitudes,
    tmsv_schmidt,
    von_neumann_entropy,
)

from conftest import TMSV_ENTROPY

QUARTER = math.pi / 4


def test_squeezed_amplitudes_ratio_and_norm():
    r = 0.8
    amps = squeezed_vacuum_amplitudes(r, 80)
    assert abs(amps[2] / amps[0]) == pytest.approx(math.tanh(r) / math.sqrt(2), rel=1e-14)
    assert np.all(amps[1::2] == 0)
    assert float(np.sum(np.abs(amps) ** 2)) == pytest.approx(1.0, abs=1e-12)


def test_squeezed_amplitudes_cutoff_too_small():
    with pytest.raises(CutoffTooSmall):
        squeezed_vacuum_amplitudes(1.2, 6)


def test_beam_splitter_single_photon():
    out = apply_beam_splitter(TwoModeAmplitudes.fock(1, 0), QUARTER)
    np.testing.assert_allclose(np.abs(out.psi[[1, 0], [0, 1]]) ** 2, [0.5, 0.5], atol=1e-15)
    assert von_neumann_entropy(schmidt_spectrum(out)) == pytest.approx(math.log(2), abs=1e-14)


def test_hong_ou_mandel():
    out = apply_beam_splitter(TwoModeAmplitudes.fock(1, 1), QUARTER)
    assert abs(out.psi[1, 1]) < 1e-15
    assert abs(out.psi[2, 0]) ** 2 == pytest.approx(0.5, abs=1e-15)
    assert abs(out.psi[0, 2]) ** 2 == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize("N", [0, 1, 4, 11])
def test_block_unitary_is_unitary(N):
    U = block_unitary(N, 0.9, 1.7)
    np.testing.assert_allclose(U.conj().T @ U, np.eye(N + 1), atol=1e-12)


def test_identity_at_zero_angle():
    rng = np.random.default_rng(3)
    psi = rng.normal(size=(6, 6)) + 0j
    n = np.arange(6)
    psi[n[:, None] + n[None, :] > 5] = 0
    state = TwoModeAmplitudes(psi, 5)
    np.testing.assert_allclose(apply_beam_splitter(state, 0.0, 0.4).psi, psi, atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 20), st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi), st.integers(0, 2**31))
def test_beam_splitter_preserves_norm(cutoff, theta, phi, seed):
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=(cutoff + 1,) * 2) + 1j * rng.normal(size=(cutoff + 1,) * 2)
    n = np.arange(cutoff + 1)
    psi[n[:, None] + n[None, :] > cutoff] = 0
    psi /= np.linalg.norm(psi)
    out = apply_beam_splitter(TwoModeAmplitudes(psi, cutoff), theta, phi)
    assert abs(out.norm2 - 1.0) < 1e-12
    e1 = von_neumann_entropy(schmidt_spectrum(out, 1))
    e2 = von_neumann_entropy(schmidt_spectrum(out, 2))
    assert abs(e1 - e2) < 1e-10


@pytest.mark.parametrize("r", sorted(TMSV_ENTROPY))
def test_tmsv_schmidt(r):
    s = tmsv_schmidt(r, cutoff=200)
    assert von_neumann_entropy(s) == pytest.approx(TMSV_ENTROPY[r], abs=1e-10)
    assert von_neumann_entropy(s) == pytest.approx(tmsv_entropy(r), abs=1e-10)
    with pytest.raises(CutoffTooSmall):
        tmsv_schmidt(2.0, cutoff=10)


def test_von_neumann_examples():
    assert von_neumann_entropy(Spectrum.from_values([1.0, 0.0])) == 0.0
    assert von_neumann_entropy(Spectrum.from_values([0.25] * 4)) == pytest.approx(math.log(4), abs=1e-15)
    with pytest.raises(InvariantViolation):
        Spectrum.from_values([1.1, -0.1])


def test_oracle_tmsv():
    o = circuit_oracle(QUARTER, 0.0, -1.0, 1.0)
    assert o.entropy == pytest.approx(TMSV_ENTROPY[1.0], abs=1e-10)
    assert o.tail_mass < 1e-12
    assert o.spectrum.total == pytest.approx(1.0, abs=1e-11)


def test_oracle_product_state_has_zero_entropy():
    assert circuit_oracle(0.6, 0.0, 0.7, 0.7).entropy < 1e-12


def test_adaptive_cutoff_respects_tail():
    c = adaptive_cutoff(1.2, 0.3j)
    assert product_tail_mass(1.2, 0.3j, c) < 1e-12


def test_cutoff_ceiling(monkeypatch):
    monkeypatch.setenv("CVE_MAX_CUTOFF", "16")
    with pytest.raises(CutoffTooSmall, match="ceiling"):
        circuit_oracle(QUARTER, 0.0, 1.5, -1.5)


def test_cutoff_doubling_drift():
    o = circuit_oracle(0.3, 1.1, 0.9j, -0.6)
    o2 = circuit_oracle(0.3, 1.1, 0.9j, -0.6, cutoff=2 * o.cutoff)
    assert abs(o.entropy - o2.entropy) < 1e-9
