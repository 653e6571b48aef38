import numpy as np
import pytest

from polsqueeze import StateParams, build_squeezed_thermal, oracle_correlation, oracle_odm
from polsqueeze.errors import CutoffTooSmall, DimensionTooLarge
from polsqueeze.fock import coherent_vector


def test_vacuum_projector():
    st = build_squeezed_thermal(0.0, 0.0, 16)
    expected = np.zeros((16, 16))
    expected[0, 0] = 1.0
    assert np.allclose(st.rho_v, expected, atol=1e-14)
    assert st.trace_deficit < 1e-14


def test_mean_occupation_matches_parameters():
    st = build_squeezed_thermal(0.3, 0.0, 40)
    assert oracle_correlation(st, 1, 1).real == pytest.approx(0.3, abs=1e-10)
    st = build_squeezed_thermal(0.3, 0.1, 60)
    nbar = 0.3 + 0.1 + 2 * 0.3 * 0.1
    assert oracle_correlation(st, 1, 1).real == pytest.approx(nbar, abs=1e-10)


def test_hermitian_psd():
    st = build_squeezed_thermal(0.5, 0.2, 60)
    assert np.allclose(st.rho_v, st.rho_v.T, atol=1e-12)
    assert np.linalg.eigvalsh(st.rho_v).min() >= -1e-12


def test_cutoff_guard():
    with pytest.raises(CutoffTooSmall):
        build_squeezed_thermal(1.0, 1.0, 40)
    st = build_squeezed_thermal(0.1, 0.0, 40)
    with pytest.raises(CutoffTooSmall):
        oracle_correlation(st, 15, 15)


def test_truncation_convergence():
    # raising the cutoff must not move converged moments
    for ns, nth in [(0.1, 0.0), (0.3, 0.1)]:
        a = oracle_correlation(build_squeezed_thermal(ns, nth, 60), 3, 3).real
        b = oracle_correlation(build_squeezed_thermal(ns, nth, 70), 3, 3).real
        assert abs(a - b) < 1e-10


def test_thermal_moments():
    st = build_squeezed_thermal(0.0, 1.0, 200)
    assert oracle_correlation(st, 2, 2).real == pytest.approx(2.0, rel=1e-9)


def test_coherent_factorization():
    # <(a^dag)^j a^k> = alpha^(j+k) for a real coherent state
    alpha = 0.9
    vec = coherent_vector(alpha, 60)
    a = np.diag(np.sqrt(np.arange(1, 60)), k=1)
    for j, k in [(1, 1), (2, 1), (2, 2), (3, 2)]:
        op = np.linalg.matrix_power(a.T, j) @ np.linalg.matrix_power(a, k)
        val = vec @ op @ vec
        assert val == pytest.approx(alpha ** (j + k), abs=1e-10)


def test_oracle_odm_product_state_no_entanglement():
    from polsqueeze import concurrence

    p = StateParams(1.0, 0.0, 0.2)
    mat = oracle_odm(p, 2, cutoff=60)
    rho = mat / np.trace(mat)
    assert concurrence(rho) == pytest.approx(0.0, abs=1e-12)


def test_oracle_odm_psd_and_size_guard():
    p = StateParams(1.0, 0.2, 0.05)
    mat = oracle_odm(p, 3, cutoff=60)
    rho = mat / np.trace(mat)
    assert np.linalg.eigvalsh(rho).min() >= -1e-10
    with pytest.raises(DimensionTooLarge):
        oracle_odm(p, 6)
