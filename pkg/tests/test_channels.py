import numpy as np
import pytest

from telecert.channels import (
    RngStream,
    measure_branches,
    measure_sample,
    random_bit,
    regenerate_zero,
    trash,
)
from telecert.statevec import DensityOperator, PureState, basis_state, partial_trace, tensor, to_density

SQ2 = np.sqrt(2)
PLUS = PureState(1, np.array([1, 1]) / SQ2)
EBIT = PureState(2, np.array([1, 0, 0, 1]) / SQ2)


def test_rng_reproducible_and_counted():
    a, b = RngStream(1234), RngStream(1234)
    assert [a.uniform() for _ in range(5)] == [b.uniform() for _ in range(5)]
    assert a.draws == 5
    assert RngStream(1234).uniform() != RngStream(1235).uniform()


def test_rng_substreams_order_independent():
    master = RngStream(99)
    s3_first = master.substream(3).uniform()
    s1 = master.substream(1).uniform()
    s3_again = RngStream(99).substream(3).uniform()
    assert s3_first == s3_again
    assert s3_first != s1


def test_random_bit_deterministic_and_fair():
    rng = RngStream(2024)
    first = random_bit(rng)
    assert first == random_bit(RngStream(2024))
    rng = RngStream(5)
    mean = np.mean([random_bit(rng) for _ in range(100_000)])
    assert 0.49 <= mean <= 0.51  # ~6 sigma band for N = 1e5


def test_random_bit_independent_of_measurements():
    rng = RngStream(17)
    state = tensor(PLUS, basis_state(1, 1))
    bits_g, bits_m = [], []
    for _ in range(10_000):
        bits_m.append(measure_sample(state, 0, rng).bit)
        bits_g.append(random_bit(rng))
    corr = np.corrcoef(bits_g, bits_m)[0, 1]
    assert abs(corr) <= 0.02


def test_measure_branches_plus():
    out = measure_branches(PLUS, 0)
    assert [o.bit for o in out] == [0, 1]
    assert out[0].probability == pytest.approx(0.5, abs=1e-12)
    assert out[1].probability == pytest.approx(0.5, abs=1e-12)
    assert out[0].probability + out[1].probability == pytest.approx(1.0, abs=1e-12)
    assert out[0].post_state.num_qubits == 0  # destructive: register shrinks


def test_measure_branches_dead_branch_flagged():
    out = measure_branches(basis_state(1, 1), 0)
    assert out[0].probability == 0.0 and out[0].post_state is None
    assert out[1].probability == 1.0


def test_measure_branch_probability_amplitude_oracle():
    theta = np.pi / 3
    state = PureState(2, np.array([np.cos(theta / 2), 0, 0, np.sin(theta / 2)]))
    out = measure_branches(state, 0)
    # independent amplitude-summing oracle
    p0 = sum(abs(a) ** 2 for i, a in enumerate(state.amplitudes) if not i >> 1)
    assert out[0].probability == pytest.approx(p0, abs=1e-12)
    assert p0 == pytest.approx(0.75, abs=1e-12)


def test_measure_sample_certain_and_product():
    out = measure_sample(basis_state(1, 0), 0, RngStream(0))
    assert out.bit == 0 and out.probability == 1.0 and out.post_state.num_qubits == 0
    out = measure_sample(tensor(PLUS, basis_state(1, 1)), 0, RngStream(0))
    np.testing.assert_allclose(out.post_state.amplitudes, [0, 1], atol=1e-15)


def test_measure_sample_frequencies():
    theta = np.pi / 3
    state = PureState(1, np.array([np.cos(theta / 2), np.sin(theta / 2)]))
    rng = RngStream(31)
    n = 20_000
    ones = sum(measure_sample(state, 0, rng).bit for _ in range(n))
    p1 = np.sin(theta / 2) ** 2
    assert abs(ones / n - p1) <= 4 * np.sqrt(p1 * (1 - p1) / n)


def test_trash_examples():
    np.testing.assert_allclose(trash(EBIT, 0).matrix, np.eye(2) / 2, atol=1e-15)
    np.testing.assert_allclose(trash(EBIT, 1).matrix, np.eye(2) / 2, atol=1e-15)
    np.testing.assert_allclose(trash(basis_state(2, 0b01), 1).matrix, [[1, 0], [0, 0]], atol=1e-15)


def test_trash_preserves_trace_and_accepts_density():
    rng = np.random.default_rng(3)
    v = rng.normal(size=8) + 1j * rng.normal(size=8)
    state = PureState(3, v / np.linalg.norm(v))
    rho = to_density(state)
    assert abs(trash(rho, 1).trace - rho.trace) < 1e-12
    assert abs(trash(state, 2).trace - 1.0) < 1e-12


def test_measure_then_discard_equals_trash():
    # the operational distinction: averaging the measurement branches
    # (probability-weighted) reproduces the record-free partial trace exactly
    rng = np.random.default_rng(11)
    for _ in range(10):
        v = rng.normal(size=8) + 1j * rng.normal(size=8)
        state = PureState(3, v / np.linalg.norm(v))
        for q in range(3):
            averaged = np.zeros((4, 4), dtype=complex)
            for out in measure_branches(state, q):
                if out.post_state is not None:
                    averaged += out.probability * to_density(out.post_state).matrix
            np.testing.assert_allclose(averaged, trash(state, q).matrix, atol=1e-12)


def test_regenerate_zero():
    empty = partial_trace(to_density(basis_state(1, 1)), {0})
    np.testing.assert_allclose(regenerate_zero(empty, 0).matrix, [[1, 0], [0, 0]], atol=1e-15)
    # the B-cheat pipeline: trash B's ebit share, then put |0> in his slot
    left = trash(EBIT, 1)
    got = regenerate_zero(left, 1)
    np.testing.assert_allclose(got.matrix, np.kron(np.eye(2) / 2, [[1, 0], [0, 0]]), atol=1e-15)
    # inserting at the front instead
    got_front = regenerate_zero(left, 0)
    np.testing.assert_allclose(got_front.matrix, np.kron([[1, 0], [0, 0]], np.eye(2) / 2),
                               atol=1e-15)


def test_regenerate_zero_validation():
    rho = DensityOperator(1, np.eye(2) / 2)
    with pytest.raises(ValueError):
        regenerate_zero(rho, 5)
