import json

import numpy as np
import pytest

from resonhhl.errors import FixtureError
from resonhhl.fixtures import default_fixture_path, fixture_checksum, load_fixture
from resonhhl.linalg_core import is_complex_symmetric


def test_fixture_contents(fx):
    assert fx.checksum_ok
    assert fx.h.shape == (8, 8)
    assert is_complex_symmetric(fx.h)
    assert fx.h[0, 0] == 5.916 - 7.1245j
    assert len(fx.e_diag) == 8
    assert (fx.iterations_first, fx.iterations_second) == (6, 5)


def test_checksum_detects_edit(tmp_path):
    record = json.loads(default_fixture_path().read_text())
    assert record["sha256"] == fixture_checksum(record)
    record["h_theta"]["re"][0] += 0.5
    path = tmp_path / "edited.json"
    path.write_text(json.dumps(record))
    with pytest.raises(FixtureError, match="checksum"):
        load_fixture(path)
    fx = load_fixture(path, verify_checksum=False)
    assert not fx.checksum_ok


def test_missing_fixture(tmp_path):
    with pytest.raises(FixtureError, match="fixture not found"):
        load_fixture(tmp_path / "absent.json")


def test_reference_vectors_unit_hermitian_norm(fx):
    # the first starting vector is printed unnormalized; the solver normalizes it
    assert np.linalg.norm(fx.seed_first) == pytest.approx(1.79298, abs=1e-5)
    for v in (fx.seed_second, fx.eigvec_first, fx.eigvec_second):
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=5e-3)
