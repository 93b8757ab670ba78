import itertools
import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iuntf.analysis import coherence, guarantee_general
from iuntf.errors import InvalidSparsity, SingularSupport, ZeroSignal
from iuntf.frame import build_frame, gaussian_frame
from iuntf.solver import (
    SNR_CAP_DB,
    omp,
    random_sparse_signal,
    recover,
    run_trials,
    snr_db,
    success_rate,
    trial_rng,
)
from iuntf.unitary import dct, dft

log = logging.getLogger(__name__)


@pytest.fixture(scope="module")
def mub5():
    return build_frame(5, 5, 1, dft(5))


def sparsest_exact_supports(A, y, s_max, tol=1e-9):
    """Oracle: enumerate every support of size <= s_max, return the zero-residual ones of minimal size."""
    for size in range(1, s_max + 1):
        hits = []
        for S in itertools.combinations(range(A.shape[1]), size):
            sub = A[:, S]
            coef, *_ = np.linalg.lstsq(sub, y, rcond=None)
            if np.linalg.norm(y - sub @ coef) <= tol * np.linalg.norm(y):
                hits.append((S, coef))
        if hits:
            return hits
    return []


def test_single_atom(mub5):
    A = mub5.to_dense()
    for i in (0, 17, 124):
        res = omp(A, A[:, i], 1)
        e = np.zeros(125)
        e[i] = 1
        assert np.max(np.abs(res.estimate - e)) < 1e-12
        assert res.support == [i]


def test_input_validation():
    A = gaussian_frame(5, 8, 0)
    with pytest.raises(InvalidSparsity):
        omp(A, A[:, 0], 0)
    with pytest.raises(InvalidSparsity):
        omp(A, A[:, 0], 6)
    with pytest.raises(InvalidSparsity):
        random_sparse_signal(5, 6, 0)


def test_singular_support():
    # columns 0 and 1 coincide; once the residual vanishes column 1 is next
    A = np.array([[1.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]])
    with pytest.raises(SingularSupport):
        omp(A, np.array([1.0, 1.0, 0.0]), 3)


def test_ties_go_to_lowest_index():
    A = np.eye(3)
    assert omp(A, np.array([1.0, 1.0, 1.0]), 1).support == [0]


@pytest.mark.parametrize("seed", range(20))
def test_residual_monotone_and_orthogonal(seed):
    rng = np.random.default_rng(seed)
    for A in (gaussian_frame(20, 60, seed), build_frame(5, 3, 1, dct(3)).to_dense()):
        s = int(rng.integers(1, 10))
        x = random_sparse_signal(A.shape[1], s, rng).to_dense()
        res = omp(A, A @ x, s)
        assert all(b <= a + 1e-12 for a, b in zip(res.residual_norms, res.residual_norms[1:]))
        assert np.max(np.abs(A[:, res.support].conj().T @ res.residual)) < 1e-10


def test_guaranteed_regime_recovery(mub5):
    s_max = guarantee_general(coherence(mub5))
    assert s_max == 2
    A = mub5.to_dense()
    for s in range(1, s_max + 1):
        for i in range(100):
            sig = random_sparse_signal(125, s, trial_rng(99, s, i))
            out = recover(A, sig)
            assert out.exact and out.snr_db > 100
            assert sorted(out.support) == sig.support.tolist()


@pytest.mark.parametrize("seed", range(15))
def test_matches_exhaustive_oracle(seed):
    rng = np.random.default_rng(1000 + seed)
    A = rng.standard_normal((12, 20))
    A /= np.linalg.norm(A, axis=0)
    for s in (1, 2, 3):
        sig = random_sparse_signal(20, s, rng)
        x = sig.to_dense()
        y = A @ x
        hits = sparsest_exact_supports(A, y, s)
        assert hits, "the true support always has zero residual"
        unique = len(hits) == 1 and len(hits[0][0]) == s
        res = omp(A, y, s)
        omp_exact = res.residual_norms[-1] <= 1e-9 * np.linalg.norm(y)
        if s == 1:
            assert unique and omp_exact
            assert np.allclose(res.estimate, x, atol=1e-12)
        elif omp_exact != unique:
            log.info("seed %d s=%d: OMP %s, oracle %s", seed, s, omp_exact, unique)
        if omp_exact and unique:
            assert tuple(sorted(res.support)) == hits[0][0]


def test_random_sparse_signal():
    sig = random_sparse_signal(10, 10, 0)
    assert sig.support.tolist() == list(range(10))
    a, b = random_sparse_signal(50, 4, 5), random_sparse_signal(50, 4, 5)
    assert np.array_equal(a.support, b.support) and np.array_equal(a.values, b.values)
    assert np.all(np.diff(a.support) > 0)


def test_support_uniformity():
    rng = np.random.default_rng(31)
    counts = np.zeros(100)
    for _ in range(10_000):
        counts[random_sparse_signal(100, 5, rng).support] += 1
    freq = counts / 10_000
    assert np.all(np.abs(freq - 0.05) <= 0.01)


def test_snr_values():
    x = np.zeros(4)
    x[0] = 1.0
    assert snr_db(x, x) == SNR_CAP_DB
    y = x.copy()
    y[1] = 1e-10
    assert snr_db(x, y) == pytest.approx(100.0, abs=1e-9)
    y[1] = 1.0
    assert snr_db(x, y) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ZeroSignal):
        snr_db(np.zeros(3), np.ones(3))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_snr_rotation_invariant(seed):
    rng = np.random.default_rng(seed)
    n = 8
    x = rng.standard_normal(n)
    xh = x + 1e-3 * rng.standard_normal(n)
    Qm, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    assert snr_db(Qm @ x, Qm @ xh) == pytest.approx(snr_db(x, xh), abs=1e-8)


def test_success_rate(mub5):
    assert success_rate(mub5, 1, 50, 3) == 1.0
    assert success_rate(build_frame(6, 2, 1, dct(2)), 1, 50, 3) == 1.0
    for s in (1, 2):
        assert success_rate(mub5, s, 100, 7) == 1.0
    G = gaussian_frame(25, 125, 2)
    assert success_rate(G, 8, 40, 5) == success_rate(G, 8, 40, 5)


def test_run_trials_workers_do_not_change_results(mub5):
    a = run_trials(mub5, 9, 30, 4)
    b = run_trials(mub5, 9, 30, 4, workers=3)
    assert (a.successes, a.mean_snr_db) == (b.successes, b.mean_snr_db)


def test_run_trials_singular_policy():
    A = np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    with pytest.raises(SingularSupport):
        run_trials(A, 2, 20, 0)
    st_ = run_trials(A, 2, 20, 0, on_singular="fail")
    assert st_.singular + st_.successes <= 20 and st_.singular > 0
