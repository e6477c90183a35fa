import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrange.models import InfeasibleConstraintError, OperatorTuple, SqBatch
from qrange.services import radius_search
from qrange.services.core_model import tuple_norm
from qrange.services.range_engine import radius_joint, sandwich_bounds
from qrange.services.sq_sampler import inner
from qrange.utils.rng import random_parts, stream


@pytest.mark.parametrize("q", [0.0, 0.3, 0.5, 0.7, 1.0])
def test_diag_radius_matches_closed_form(diag_tuple, q):
    estimate = radius_joint(diag_tuple, q, restarts=8, max_iters=300, seed=0)
    assert estimate.value == pytest.approx((1 + q) / 2, abs=1e-6)


def test_identity_radius_is_modulus_of_q():
    estimate = radius_joint(OperatorTuple.of(np.eye(3)), 0.3, restarts=4, seed=1)
    assert estimate.value == pytest.approx(0.3, abs=1e-12)


def test_zero_tuple_has_zero_radius():
    estimate = radius_joint(OperatorTuple.of(np.zeros((2, 2)), np.zeros((2, 2))), 0.5, restarts=4)
    assert estimate.value == 0.0


def test_one_dimensional_unit_q():
    estimate = radius_joint(OperatorTuple.of(np.array([[2 - 1j]])), 1j, restarts=2)
    assert estimate.value == pytest.approx(abs(2 - 1j))


def test_one_dimensional_infeasible():
    with pytest.raises(InfeasibleConstraintError):
        radius_joint(OperatorTuple.of(np.array([[1.0]])), 0.5)


def test_witness_satisfies_constraints_and_attains_value(rng):
    T = OperatorTuple(parts=random_parts(rng, 2, 3))
    q = 0.4 + 0.3j
    estimate = radius_joint(T, q, restarts=6, max_iters=300, seed=2)
    w = estimate.witness

    assert np.linalg.norm(w.x) == pytest.approx(1.0, abs=1e-10)
    assert np.linalg.norm(w.y) == pytest.approx(1.0, abs=1e-10)
    assert inner(w.x, w.y) == pytest.approx(q, abs=1e-10)
    values = np.einsum("n,inm,m->i", w.y.conj(), T.parts, w.x)
    assert np.linalg.norm(values) == pytest.approx(estimate.value, rel=1e-10)


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), q=st.floats(0.05, 0.95))
def test_radius_within_sandwich_bounds(seed, q):
    T = OperatorTuple(parts=random_parts(stream(seed), 2, 3))
    bounds = sandwich_bounds(T, q)
    estimate = radius_joint(T, q, restarts=8, max_iters=300, seed=seed)

    assert bounds.paper_lower <= bounds.corrected_lower
    assert estimate.value >= bounds.corrected_lower - 1e-3
    assert estimate.value <= bounds.upper + 1e-10


@pytest.mark.parametrize("xi", [2.0, 1j, -0.5, -4j])
def test_homogeneity_for_exact_scalars(rng, xi):
    T = OperatorTuple(parts=random_parts(rng, 2, 3))
    base = radius_joint(T, 0.6, restarts=6, max_iters=200, seed=3)
    scaled = radius_joint(T.scaled(xi), 0.6, restarts=6, max_iters=200, seed=3)
    assert scaled.value == pytest.approx(abs(xi) * base.value, rel=1e-12)


def test_warm_start_never_lowers_the_estimate(rng):
    T = OperatorTuple(parts=random_parts(rng, 1, 4))
    cold = radius_joint(T, 0.5, restarts=2, max_iters=100, seed=4)
    witness = cold.witness
    warm = radius_joint(T, 0.5, restarts=2, max_iters=100, seed=5, warm_starts=[(witness.x, witness.z)])

    assert warm.value >= cold.value - 1e-9
    assert warm.restarts == 3
    assert tuple_norm(T) + 1e-10 >= warm.value


def test_warm_start_without_z_gets_a_unit_z(monkeypatch):
    # random starts at e2 score 0, so the warm start at e1 holds the witness
    e1, e2 = np.eye(2, dtype=np.complex128)
    cold = SqBatch(x=e2[None], z=e1[None], y=(0.5 * e2 + np.sqrt(0.75) * e1)[None], q=0.5)
    monkeypatch.setattr(radius_search, "sample_sq", lambda *args, **kwargs: cold)

    T = OperatorTuple.of(np.diag([1.0, 0.0]))
    estimate = radius_joint(T, 0.5, restarts=1, max_iters=0, warm_starts=[(e1, None)])
    witness = estimate.witness

    np.testing.assert_allclose(witness.x, e1)
    assert np.linalg.norm(witness.z) == pytest.approx(1.0)
    assert abs(inner(witness.x, witness.z)) < 1e-12
    assert np.linalg.norm(witness.y) == pytest.approx(1.0)
    assert estimate.value == pytest.approx(0.5)
