import numpy as np
import pytest

from qrange.models import CloudMeta, OperatorTuple, PointCloud
from qrange.services import verify
from qrange.services.semi_hilbert import build_aspace
from qrange.services.verify import (
    TSING_MATRIX,
    TSING_Q,
    a_adjoint_range_checks,
    norm_equivalence_check,
    real_part_radius_check,
    run_suite,
    tsing_typo_report,
)
from qrange.utils.rng import random_matrix, random_parts
from test.factories import SuiteConfigFactory


@pytest.mark.parametrize(
    "checks",
    [
        ["identity"],
        ["radius.oracle", "radius.homogeneity", "radius.subadditivity"],
        ["norm", "sandwich.bounds"],
        ["semihilbert.adjoint", "semihilbert.kernel_escape", "semihilbert.reduction"],
    ],
)
def test_selected_checks_pass(checks):
    cfg = SuiteConfigFactory.build(seed=42, checks=checks)
    reports = run_suite(cfg)

    assert reports
    assert all(cfg.wants(r.check_id) for r in reports)
    failed = [(r.check_id, r.details) for r in reports if r.status == "fail"]
    assert not failed


@pytest.mark.parametrize(
    "checks",
    [
        ["convexity.single", "convexity.commuting", "convexity.span", "convexity.semihilbert"],
        ["convexity.refinement"],
        ["crange"],
        ["block"],
        ["spectral"],
        ["semihilbert.compression"],
        ["semihilbert.triangle"],
    ],
)
def test_density_checks_pass(checks):
    # set distances and defects are judged against dense clouds
    cfg = SuiteConfigFactory.build(seed=42, checks=checks, q_values=[0.5], samples=10_000, pair_count=500)
    reports = run_suite(cfg)

    assert reports
    assert all(cfg.wants(r.check_id) for r in reports)
    failed = [(r.check_id, r.details) for r in reports if r.status == "fail"]
    assert not failed


def test_reports_are_sorted_and_reproducible():
    cfg = SuiteConfigFactory.build(seed=3, checks=["identity.rotation", "identity.adjoint"])
    first = run_suite(cfg)
    second = run_suite(cfg)

    assert [r.check_id for r in first] == ["identity.adjoint", "identity.rotation"]
    assert [r.margin for r in first] == [r.margin for r in second]


def test_check_runs_the_same_alone_and_in_a_group():
    alone = run_suite(SuiteConfigFactory.build(seed=5, checks=["identity.affine"]))
    grouped = run_suite(SuiteConfigFactory.build(seed=5, checks=["identity"]))

    match = next(r for r in grouped if r.check_id == "identity.affine")
    assert alone[0].margin == match.margin


def test_definiteness_is_skipped_without_nonzero_q():
    cfg = SuiteConfigFactory.build(q_values=[0.0], checks=["radius.definiteness"])
    [report] = run_suite(cfg)

    assert report.check_id == "radius.definiteness"
    assert report.status == "skip"


def test_crashing_check_becomes_a_failed_report(monkeypatch):
    def explode(cfg, rng):
        raise RuntimeError("boom")

    monkeypatch.setitem(verify.CHECKS, "radius.oracle", explode)
    [report] = run_suite(SuiteConfigFactory.build(checks=["radius.oracle"]))

    assert report.status == "fail"
    assert "RuntimeError" in report.witnesses["error"]



def test_refinement_fails_for_a_range_with_a_hole(monkeypatch):
    def two_clusters(M, q, count, seed):
        rng = np.random.default_rng(seed)
        centers = np.where(np.arange(count) % 2 == 0, -10.0, 10.0)
        points = (centers + 0.01 * rng.standard_normal(count))[:, None].astype(np.complex128)
        meta = CloudMeta(n=M.shape[0], d=1, q=q, seed=seed, count=count, generator="clusters")
        return PointCloud(points=points, meta=meta)

    monkeypatch.setattr(verify, "cloud_single", two_clusters)
    [report] = run_suite(SuiteConfigFactory.build(seed=1, checks=["convexity.refinement"]))

    assert report.check_id == "convexity.refinement"
    assert report.status == "fail"


def test_tsing_corrected_center_passes_and_printed_fails():
    corrected = tsing_typo_report(TSING_MATRIX, TSING_Q, seed=42)
    printed = tsing_typo_report(TSING_MATRIX, TSING_Q, seed=42, count=2000, center="printed")

    assert corrected.status == "pass"
    assert printed.status == "fail"
    assert printed.witnesses["printed"] > printed.witnesses["corrected"]


def test_norm_equivalence(rng):
    T = OperatorTuple(parts=random_parts(rng, 3, 3))
    report = norm_equivalence_check(T, 0.5, samples=500, seed=1)
    assert report.status == "pass"
    assert report.margin >= 0


def test_real_part_radius(rng):
    T = OperatorTuple(parts=random_parts(rng, 2, 3))
    report = real_part_radius_check(T, 0.5 + 0.2j, restarts=8, max_iters=300, seed=2, tolerance=1e-3)
    assert report.status == "pass"


def test_a_adjoint_range_checks(rng):
    space = build_aspace(np.diag([1.0, 2.0, 0.0]))
    M = random_matrix(rng, 3)
    M = M - space.proj @ M @ (np.eye(3) - space.proj)
    report = a_adjoint_range_checks(M, space, 0.4, samples=300, restarts=8, max_iters=300, seed=3, tolerance=1e-3)
    assert report.status == "pass"


@pytest.mark.slow
def test_counterexample_and_tsing_checks_pass():
    cfg = SuiteConfigFactory.build(seed=42, checks=["counterexample", "tsing"], samples=10_000)
    reports = run_suite(cfg)

    assert {r.check_id for r in reports} >= {"tsing.center", "tsing.identity"}
    assert not [r.check_id for r in reports if r.status == "fail"]
