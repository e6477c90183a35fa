import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrange.models import (
    ConstraintViolationError,
    DimensionMismatchError,
    InfeasibleConstraintError,
)
from qrange.services.semi_hilbert import build_aspace
from qrange.services.sq_sampler import (
    inner,
    pair_from_xz,
    sample_sphere,
    sample_sq,
    sample_sq_a,
    swap,
    transport,
)
from qrange.utils.rng import haar_unitary, random_psd, stream

q_values = st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False)


@settings(max_examples=30, deadline=None)
@given(q=q_values, n=st.integers(2, 5), seed=st.integers(0, 2**32 - 1))
def test_sampled_pairs_satisfy_constraints(q, n, seed):
    batch = sample_sq(n, q, 64, seed)

    assert len(batch) == 64
    assert all(r < 1e-12 for r in batch.residuals().values())


def test_same_seed_same_stream():
    a = sample_sq(3, 0.4 + 0.2j, 100, seed=9)
    b = sample_sq(3, 0.4 + 0.2j, 100, seed=9)
    np.testing.assert_array_equal(a.x, b.x)
    np.testing.assert_array_equal(a.y, b.y)


def test_longer_samples_extend_shorter_ones():
    # 700 spans several shards at the test shard size
    short = sample_sq(3, 0.5, 300, seed=2)
    long = sample_sq(3, 0.5, 700, seed=2)
    np.testing.assert_array_equal(long.x[:300], short.x)
    np.testing.assert_array_equal(long.y[:300], short.y)


def test_x_stream_does_not_depend_on_q():
    np.testing.assert_array_equal(sample_sq(4, 0.1, 50, 5).x, sample_sq(4, 0.9j, 50, 5).x)
    np.testing.assert_array_equal(sample_sphere(4, 50, 5), sample_sq(4, 1.0, 50, 5).x)


def test_rotating_q_rotates_y():
    theta = 0.7
    base = sample_sq(3, 0.6, 80, seed=4)
    rotated = sample_sq(3, 0.6 * np.exp(1j * theta), 80, seed=4)
    np.testing.assert_allclose(rotated.y, np.exp(-1j * theta) * base.y, atol=1e-14)


def test_unit_modulus_q_gives_scaled_x():
    batch = sample_sq(3, 1j, 20, seed=1)
    assert batch.z is None
    np.testing.assert_allclose(batch.y, -1j * batch.x)


def test_one_dimensional_space_is_infeasible_below_unit_modulus():
    with pytest.raises(InfeasibleConstraintError):
        sample_sq(1, 0.5, 10, seed=0)
    assert len(sample_sq(1, 1.0, 10, seed=0)) == 10


def test_real_mode_needs_real_q():
    with pytest.raises(ConstraintViolationError):
        sample_sq(2, 0.5j, 10, seed=0, mode="real")
    batch = sample_sq(3, 0.5, 10, seed=0, mode="real")
    assert np.all(batch.x.imag == 0)
    assert np.all(batch.y.imag == 0)


def test_count_must_be_positive():
    with pytest.raises(ValueError):
        sample_sq(2, 0.5, 0, seed=0)


def test_pair_from_xz_builds_constrained_pair():
    x = np.array([1.0, 0.0])
    z = np.array([0.0, 1j])
    pair = pair_from_xz(x, z, 0.6)

    assert inner(pair.x, pair.y) == pytest.approx(0.6)
    assert np.linalg.norm(pair.y) == pytest.approx(1.0)


@pytest.mark.parametrize(
    "x, z, error",
    [
        (np.array([2.0, 0.0]), np.array([0.0, 1.0]), ConstraintViolationError),
        (np.array([1.0, 0.0]), np.array([1.0, 0.0]), ConstraintViolationError),
        (np.array([1.0, 0.0]), None, ConstraintViolationError),
        (np.array([1.0, 0.0]), np.array([0.0, 0.0, 1.0]), DimensionMismatchError),
    ],
)
def test_pair_from_xz_rejects_bad_inputs(x, z, error):
    with pytest.raises(error):
        pair_from_xz(x, z, 0.5)


def test_swap_conjugates_q():
    batch = sample_sq(3, 0.3 + 0.4j, 40, seed=8)
    swapped = swap(batch)

    assert swapped.q == pytest.approx(0.3 - 0.4j)
    assert all(r < 1e-12 for r in swapped.residuals().values())


def test_transport_preserves_constraints(rng):
    U = haar_unitary(rng, 4)
    moved = transport(sample_sq(4, 0.5j, 40, seed=3), U)
    assert all(r < 1e-12 for r in moved.residuals().values())


def test_a_constrained_pairs_satisfy_a_constraints():
    space = build_aspace(random_psd(stream(11), 4, 3))
    batch = sample_sq_a(space, 0.5, 200, seed=6, kappa=10.0)

    assert all(r < 1e-10 for r in batch.residuals().values())
    # the kernel component is visible in x but not in the A-constraints
    assert np.max(np.linalg.norm(batch.x, axis=1)) > 5


def test_a_constrained_sampling_needs_rank_two():
    space = build_aspace(np.diag([1.0, 0.0, 0.0]))
    with pytest.raises(InfeasibleConstraintError):
        sample_sq_a(space, 0.5, 10, seed=0)
