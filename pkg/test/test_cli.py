import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from qrange.api.common import load_cloud, sidecar_path
from qrange.config import SHARD_SIZE
from qrange.main import main
from qrange.models import OperatorTuple
from qrange.services.range_engine import cloud_joint
from qrange.utils.svg import HULL_GID, POINTS_GID

ESCAPING = [[0, 0, 1], [0, 0, 0], [0, 0, 0]]
SVG = "{http://www.w3.org/2000/svg}"


def test_cloud_csv_round_trips_bit_exact(tmp_path, write_tuple):
    source = write_tuple(np.eye(2))
    out = tmp_path / "cloud.csv"

    code = main(["cloud", "--input", str(source), "--q", "0.5", "--count", "10", "--seed", "11", "--out", str(out)])

    assert code == 0
    assert out.read_text().splitlines()[0] == "re_1,im_1"
    assert sidecar_path(out).exists()
    cloud = load_cloud(out)
    np.testing.assert_allclose(cloud.points[:, 0], 0.5, atol=1e-13)
    expected = cloud_joint(OperatorTuple.of(np.eye(2)), 0.5, 10, 11, shard_size=SHARD_SIZE)
    np.testing.assert_array_equal(cloud.points, expected.points)


def test_cloud_json_to_stdout(capsys, write_tuple):
    source = write_tuple(np.diag([1.0, 0.0]), np.eye(2))

    assert main(["cloud", "--input", str(source), "--q", "0.3,0.4", "--count", "5", "--format", "json"]) == 0
    document = json.loads(capsys.readouterr().out)
    assert document["meta"]["count"] == 5
    assert document["meta"]["d"] == 2


def svg_group(root: ET.Element, gid: str) -> ET.Element:
    return next(g for g in root.iter(f"{SVG}g") if g.get("id") == gid)


def test_cloud_svg_has_one_marker_per_point(tmp_path, write_tuple):
    source = write_tuple(np.array([[1, 2], [0, 1j]]))
    out = tmp_path / "cloud.svg"

    code = main(["cloud", "--input", str(source), "--q", "0.5", "--count", "25", "--format", "svg", "--out", str(out)])

    assert code == 0
    root = ET.parse(out).getroot()
    assert len(list(svg_group(root, POINTS_GID).iter(f"{SVG}use"))) == 25
    assert len(list(svg_group(root, HULL_GID).iter(f"{SVG}path"))) == 1


def test_cloud_svg_projection_of_a_pair(tmp_path, write_tuple):
    source = write_tuple(np.diag([1.0, 0.0]), np.array([[0, 1], [1, 0]]))
    out = tmp_path / "pair.svg"

    args = ["--q", "0.5", "--count", "40", "--format", "svg", "--project", "0,2", "--out", str(out)]
    assert main(["cloud", "--input", str(source), *args]) == 0
    root = ET.parse(out).getroot()
    assert len(list(svg_group(root, POINTS_GID).iter(f"{SVG}use"))) == 40


def test_svg_is_byte_stable(tmp_path, write_tuple):
    source = write_tuple(np.array([[1, 2], [0, 1j]]))
    first, second = tmp_path / "a.svg", tmp_path / "b.svg"

    for out in (first, second):
        main(["cloud", "--input", str(source), "--q", "0.5", "--count", "10", "--format", "svg", "--out", str(out)])
    assert first.read_bytes() == second.read_bytes()


def test_cloud_svg_needs_out(write_tuple):
    source = write_tuple(np.eye(2))
    assert main(["cloud", "--input", str(source), "--q", "0.5", "--format", "svg"]) == 2


def test_one_dimensional_space_is_infeasible(write_tuple):
    source = write_tuple(np.array([[2.0]]))
    assert main(["cloud", "--input", str(source), "--q", "0.5"]) == 3


def test_malformed_document(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 2, "d": 1, "matrices": [[[[1, 0]]]]}))

    assert main(["cloud", "--input", str(bad), "--q", "0.5"]) == 2
    assert main(["cloud", "--input", str(tmp_path / "missing.json"), "--q", "0.5"]) == 2


@pytest.mark.parametrize("q", ["1.5", "0.9,0.9"])
def test_q_outside_unit_disk(write_tuple, q):
    source = write_tuple(np.eye(2))
    assert main(["cloud", "--input", str(source), "--q", q]) == 2


def test_unparsable_flag_exits_with_usage_error(write_tuple):
    source = write_tuple(np.eye(2))
    assert main(["cloud", "--input", str(source), "--q", "half"]) == 2


def test_radius_of_diagonal_projection(tmp_path, write_tuple):
    source = write_tuple(np.diag([1.0, 0.0]))
    out = tmp_path / "radius.json"

    assert main(["radius", "--input", str(source), "--q", "0.5", "--restarts", "8", "--out", str(out)]) == 0
    document = json.loads(out.read_text())
    assert document["value"] == pytest.approx(0.75, abs=1e-6)
    assert document["bounds"]["upper"] == pytest.approx(1.0)
    assert document["bounds"]["corrected_lower"] == pytest.approx(0.25)
    assert document["bounds"]["paper_lower"] == pytest.approx(0.5 / 3.5)


def test_radius_without_bounds_for_complex_q(capsys, write_tuple):
    source = write_tuple(np.diag([1.0, 0.0]))

    assert main(["radius", "--input", str(source), "--q", "0,0.5", "--restarts", "4"]) == 0
    document = json.loads(capsys.readouterr().out)
    assert document["bounds"] is None
    assert document["value"] == pytest.approx(0.75, abs=1e-6)


def test_spectra_of_diagonal_pair(capsys, write_tuple):
    source = write_tuple(np.diag([1.0, 2.0]), np.diag([3.0, 4.0]))

    assert main(["spectra", "--input", str(source), "--q", "0.5"]) == 0
    document = json.loads(capsys.readouterr().out)
    assert len(document["spectrum"]) == 2
    assert document["inclusion"]["status"] == "pass"


def test_spectra_rejects_non_commuting_tuple(write_tuple):
    source = write_tuple(np.array([[1, 0], [0, 0]]), np.array([[0, 0], [1, 0]]))
    assert main(["spectra", "--input", str(source)]) == 2


def test_semihilbert_full_plane_as_json(capsys, write_tuple):
    matrix = write_tuple(ESCAPING, name="m.json")
    weight = write_tuple(np.diag([1.0, 1.0, 0.0]), name="a.json")

    code = main(["semihilbert", "--input", str(matrix), "--a", str(weight), "--q", "0.5", "--format", "json"])

    assert code == 0
    assert json.loads(capsys.readouterr().out)["kind"] == "FullPlane"


def test_semihilbert_full_plane_as_csv_writes_nothing(tmp_path, write_tuple):
    matrix = write_tuple(ESCAPING, name="m.json")
    weight = write_tuple(np.diag([1.0, 1.0, 0.0]), name="a.json")
    out = tmp_path / "w.csv"

    code = main(["semihilbert", "--input", str(matrix), "--a", str(weight), "--q", "0.5", "--out", str(out)])

    assert code == 4
    assert not out.exists()
    assert not sidecar_path(out).exists()


def test_semihilbert_identity_weight_matches_cloud(tmp_path, write_tuple):
    M = np.array([[1, 1j], [0, -1]])
    matrix = write_tuple(M, name="m.json")
    weight = write_tuple(np.eye(2), name="a.json")
    out = tmp_path / "w.csv"

    args = ["--q", "0.4", "--count", "20", "--seed", "3", "--out"]
    assert main(["semihilbert", "--input", str(matrix), "--a", str(weight), *args, str(out)]) == 0
    assert main(["cloud", "--input", str(matrix), *args, str(tmp_path / "c.csv")]) == 0

    np.testing.assert_allclose(load_cloud(out).points, load_cloud(tmp_path / "c.csv").points, atol=1e-15)


def test_semihilbert_infinite_radius(capsys, write_tuple):
    matrix = write_tuple(ESCAPING, name="m.json")
    weight = write_tuple(np.diag([1.0, 1.0, 0.0]), name="a.json")

    code = main(["semihilbert", "--input", str(matrix), "--a", str(weight), "--q", "0.5", "--radius", "--restarts", "2"])

    assert code == 0
    assert json.loads(capsys.readouterr().out)["kind"] == "Infinite"


def test_semihilbert_needs_a_single_matrix(write_tuple):
    pair = write_tuple(np.eye(2), np.eye(2), name="m.json")
    weight = write_tuple(np.eye(2), name="a.json")
    assert main(["semihilbert", "--input", str(pair), "--a", str(weight), "--q", "0.5"]) == 2


def test_verify_printed_center_fails(tmp_path):
    out = tmp_path / "reports.json"

    code = main(
        ["verify", "--tsing-center", "printed", "--checks", "tsing.center", "--samples", "3000", "--out", str(out)]
    )

    assert code == 1
    reports = json.loads(out.read_text())
    assert [r["check_id"] for r in reports] == ["tsing.center"]
    assert reports[0]["status"] == "fail"


def test_verify_selected_check_passes(tmp_path):
    config = tmp_path / "suite.json"
    config.write_text(json.dumps({"instances": 3, "identity_samples": 50, "dimensions": [2], "tuple_lengths": [1]}))
    out = tmp_path / "reports.json"

    assert main(["verify", "--config", str(config), "--checks", "identity.affine", "--out", str(out)]) == 0
    [report] = json.loads(out.read_text())
    assert report["check_id"] == "identity.affine"
    assert report["status"] == "pass"


@pytest.mark.parametrize(
    "content",
    ['{"instances": 0}', '{"q_values": [[2.0, 0.0]]}', '{"unknown": 1}', "not json"],
)
def test_verify_invalid_config(tmp_path, content):
    config = tmp_path / "suite.json"
    config.write_text(content)
    assert main(["verify", "--config", str(config)]) == 2


def test_verify_missing_config(tmp_path):
    assert main(["verify", "--config", str(tmp_path / "nope.json")]) == 2
