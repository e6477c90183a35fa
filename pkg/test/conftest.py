import json
import os

# Quiet, small-shard defaults BEFORE any qrange imports read the environment
os.environ["QRANGE_LOG_LEVEL"] = "WARNING"
os.environ["QRANGE_SHARD_SIZE"] = "256"

import numpy as np
import pytest

from qrange.models import OperatorTuple, TupleDocument
from qrange.services.counterexamples import example_tuple
from qrange.utils.rng import stream


@pytest.fixture
def rng():
    return stream(1234)


@pytest.fixture
def diag_tuple():
    """(diag(1, 0)); ω_q = (1 + q)/2"""
    return OperatorTuple.of(np.diag([1.0, 0.0]))


@pytest.fixture
def example_pair():
    """([[1,0],[0,0]], [[0,0],[1,0]]); JtW_q is not convex"""
    return example_tuple()


@pytest.fixture
def write_tuple(tmp_path):
    """Write matrices as a tuple document and return its path"""

    def _write(*matrices, name: str = "tuple.json"):
        document = TupleDocument.from_tuple(OperatorTuple.of(*matrices))
        path = tmp_path / name
        path.write_text(json.dumps(document.model_dump()))
        return path

    return _write
