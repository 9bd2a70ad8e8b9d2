"""End-to-end properties of both reconstruction methods on random fixtures."""

import time

import numpy as np
import pytest

from config.settings import RunConfig
from core.canonical import reconstruct_canonical, step1_basis_alignment, verify_latitude_properties
from core.errors import ImpureInput, InconsistentSigns
from core.inductive import bloch_action, reconstruct_inductive
from core.lift import LiftKind, phase_agreement
from core.linalg import basis_state, fidelity, projector
from core.sampling import haar_state, make_rng
from core.symmetry import (CountingOracle, compose, depolarizing_map, induced_by_transpose)
from tests.helpers import mixed_sign_oracle, random_oracle

RECONSTRUCTORS = (reconstruct_canonical, reconstruct_inductive)
INSTANCES = 50


@pytest.mark.parametrize("kind", ["unitary", "antiunitary"])
@pytest.mark.parametrize("dim", [2, 3, 4, 8, 16])
def test_round_trip_grid(kind, dim):
    rng = make_rng(1000 + dim)
    config = RunConfig()
    for _ in range(INSTANCES):
        oracle, U = random_oracle(kind, dim, rng)
        queries = [haar_state(dim, rng) for _ in range(100)]
        for reconstruct in RECONSTRUCTORS:
            result = reconstruct(oracle, config)
            assert result.kind == LiftKind(kind)
            for psi in queries:
                expected = U @ (psi if kind == "unitary" else psi.conj())
                assert fidelity(result.act(psi), expected) >= 1 - 1e-9
            if result.method == "canonical":
                assert len(set(result.record.eps_table.values())) == 1


def test_mixed_signs_are_rejected_with_a_triple():
    with pytest.raises(InconsistentSigns) as info:
        reconstruct_canonical(mixed_sign_oracle())
    j, k, l = info.value.witness["triple"]
    assert 1 <= j < k < l <= 3


def test_latitude_constancy_and_real_vector_invariance():
    rng = make_rng(4)
    for i in range(20):
        oracle, _ = random_oracle("unitary" if i % 2 else "antiunitary", 4, rng)
        _, aligned = step1_basis_alignment(oracle)
        report = verify_latitude_properties(aligned, 1 + i % 3, 4, n_real=20, seed=i)
        assert report.max_phi_spread < 1e-8
        assert len({p.eps for p in report.params}) == 1
        assert report.real_vectors_tested == 20
        assert report.max_real_infidelity < 1e-8


def test_qubit_classification():
    rng = make_rng(6)
    for kind, det in (("unitary", 1), ("antiunitary", -1)):
        signs = [bloch_action(random_oracle(kind, 2, rng)[0]).det_sign for _ in range(100)]
        assert signs.count(det) == 100


def test_coset_law():
    rng = make_rng(7)
    config = RunConfig(n_verify=20)
    kinds = ("unitary", "antiunitary")
    for i in range(25):
        kind_a, kind_b = kinds[rng.integers(2)], kinds[rng.integers(2)]
        A, _ = random_oracle(kind_a, 3, rng)
        B, _ = random_oracle(kind_b, 3, rng)
        result = reconstruct_canonical(compose(A, B), config)
        assert (result.kind == LiftKind.UNITARY) == (kind_a == kind_b)


@pytest.mark.parametrize("dim", [2, 3, 6])
def test_transpose_is_conjugation(dim):
    for reconstruct in RECONSTRUCTORS:
        result = reconstruct(induced_by_transpose(dim), RunConfig(n_verify=20))
        assert result.kind == LiftKind.ANTIUNITARY
        W = result.W / result.W[0, 0]
        assert np.max(np.abs(W - np.diag(np.diag(W)))) < 1e-9
        assert np.max(np.abs(W - np.eye(dim))) < 1e-9


@pytest.mark.parametrize("p", [0.1, 0.5, 1.0])
@pytest.mark.parametrize("dim", [2, 3])
def test_depolarizing_is_rejected(p, dim):
    M = depolarizing_map(p, dim).apply(projector(basis_state(dim, 1)))
    direct = 1.0 - float(np.trace(M @ M).real)
    assert direct == pytest.approx((dim - 1) / dim * (2 * p - p * p), abs=1e-12)
    for reconstruct in RECONSTRUCTORS:
        with pytest.raises(ImpureInput) as info:
            reconstruct(depolarizing_map(p, dim))
        assert abs(info.value.witness["purity_violation"] - direct) < 1e-12


def test_cross_method_agreement():
    rng = make_rng(9)
    config = RunConfig(n_verify=20)
    for i in range(50):
        kind = "unitary" if rng.integers(2) else "antiunitary"
        oracle, _ = random_oracle(kind, int(rng.integers(2, 9)), rng)
        canonical = reconstruct_canonical(oracle, config)
        inductive = reconstruct_inductive(oracle, config)
        assert canonical.kind == inductive.kind
        deviation, _ = phase_agreement(canonical.W, inductive.W)
        assert deviation < 1e-8


@pytest.mark.parametrize("kind", ["unitary", "antiunitary"])
def test_call_counting_changes_nothing(kind):
    oracle, _ = random_oracle(kind, 5, make_rng(11))
    config = RunConfig(n_verify=30)
    for reconstruct in RECONSTRUCTORS:
        plain = reconstruct(oracle, config)
        counter = CountingOracle(oracle)
        counted = reconstruct(counter, config)
        assert np.array_equal(plain.W, counted.W)
        assert plain.kind == counted.kind
        assert counter.calls == counted.oracle_calls
    assert counted.oracle_calls == 5 + 3 + 2 * 3 + 30
    assert reconstruct_canonical(oracle, config).oracle_calls == 5 + 2 * 4 + 5 * 4 + 1 + 30


def test_scale():
    oracle, U = random_oracle("unitary", 64, make_rng(12))
    start = time.perf_counter()
    results = [reconstruct(oracle) for reconstruct in RECONSTRUCTORS]
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    for result in results:
        deviation, _ = phase_agreement(U, result.W)
        assert deviation < 1e-8
