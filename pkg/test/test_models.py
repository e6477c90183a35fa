import json

import numpy as np
import pytest
from pydantic import ValidationError

from qrange.models import (
    CloudMeta,
    ConstraintViolationError,
    DimensionMismatchError,
    MalformedInputError,
    OperatorTuple,
    PointCloud,
    Report,
    SuiteConfig,
    TupleDocument,
    check_q,
    check_seed,
    q_split,
)
from test.factories import SuiteConfigFactory


def test_tuple_document_round_trip():
    T = OperatorTuple.of(np.array([[1, 2j], [0, -1]]), np.eye(2))
    text = json.dumps(TupleDocument.from_tuple(T).model_dump())

    parsed = TupleDocument.parse(text)

    assert parsed.d == 2
    assert parsed.n == 2
    np.testing.assert_array_equal(parsed.parts, T.parts)


@pytest.mark.parametrize(
    "document",
    [
        '{"n": 2, "d": 1, "matrices": [[[[1, 0], [0, 0]]]]}',
        '{"n": 1, "d": 2, "matrices": [[[[1, 0]]]]}',
        '{"n": 1, "d": 1, "matrices": [[[[1, 0, 0]]]]}',
        "not json",
    ],
)
def test_tuple_document_rejects_malformed(document):
    with pytest.raises(MalformedInputError):
        TupleDocument.parse(document)


def test_tuple_rejects_non_finite_entries():
    with pytest.raises(MalformedInputError):
        OperatorTuple.of(np.array([[np.nan]]))


def test_tuple_parts_must_share_shape():
    with pytest.raises(DimensionMismatchError):
        OperatorTuple.of(np.eye(2), np.eye(3))


def test_tuple_addition_checks_shapes():
    with pytest.raises(DimensionMismatchError):
        OperatorTuple.of(np.eye(2)) + OperatorTuple.of(np.eye(3))


def test_tuple_parts_are_read_only():
    T = OperatorTuple.of(np.eye(2))
    with pytest.raises(ValueError):
        T.parts[0, 0, 0] = 5


def test_check_q_accepts_boundary_and_rejects_outside():
    assert check_q(1 + 1e-13) == 1 + 1e-13
    assert check_q([0.0, 1.0]) == 1j
    with pytest.raises(ConstraintViolationError) as excinfo:
        check_q(1.5)
    assert excinfo.value.residual == pytest.approx(0.5)


def test_check_seed_range():
    assert check_seed(2**64 - 1) == 2**64 - 1
    with pytest.raises(ConstraintViolationError):
        check_seed(-1)


def test_q_split_at_zero_has_unit_phase():
    modulus, s, phase = q_split(0j)
    assert (modulus, s, phase) == (0.0, 1.0, 1 + 0j)


def test_point_cloud_meta_must_match_points():
    meta = CloudMeta(n=2, d=1, q=0.5, seed=0, count=3, generator="joint")
    with pytest.raises(ValidationError):
        PointCloud(points=np.zeros((2, 1)), meta=meta)


def test_point_cloud_real_view_layout():
    points = np.array([[1 + 2j, 3 + 4j]])
    meta = CloudMeta(n=2, d=2, q=0.5, seed=0, count=1, generator="joint")
    cloud = PointCloud(points=points, meta=meta)
    np.testing.assert_array_equal(cloud.real_view(), [[1, 2, 3, 4]])


def test_cloud_meta_serializes_q_as_pair():
    meta = CloudMeta(n=2, d=1, q=0.5 + 0.25j, seed=3, count=0, generator="joint")
    dumped = meta.model_dump(mode="json")
    assert dumped["q"] == [0.5, 0.25]
    assert CloudMeta.model_validate(dumped) == meta


def test_report_judge_sets_status_and_witness():
    passed = Report.judge("x", margin=-1e-12, tolerance=1e-10, seed=1, samples=1)
    failed = Report.judge("x", margin=-1.0, tolerance=1e-10, seed=1, samples=1)

    assert passed.status == "pass"
    assert failed.status == "fail"
    assert failed.witnesses == {"margin": -1.0}


def test_report_rejects_inconsistent_status():
    with pytest.raises(ValidationError):
        Report(check_id="x", status="pass", margin=-1.0, tolerance=0.0, seed=0, samples=1)


def test_report_rejects_non_finite_margin():
    with pytest.raises(ValidationError):
        Report.judge("x", margin=float("nan"), tolerance=0.0, seed=0, samples=1)


def test_suite_config_defaults_are_valid():
    cfg = SuiteConfig()
    assert cfg.seed == 42
    assert cfg.tsing_center == "corrected"


@pytest.mark.parametrize(
    "overrides",
    [
        {"dimensions": [1, 2]},
        {"q_values": [1.5]},
        {"instances": 0},
        {"tsing_center": "elsewhere"},
    ],
)
def test_suite_config_rejects_bad_values(overrides):
    with pytest.raises(ValidationError):
        SuiteConfig(**overrides)


def test_suite_config_selects_by_prefix():
    cfg = SuiteConfigFactory.build(checks=["identity", "radius.oracle"])

    assert cfg.wants("identity.rotation")
    assert cfg.wants("radius.oracle")
    assert not cfg.wants("radius.oracles")
    assert not cfg.wants("sandwich.bounds")
