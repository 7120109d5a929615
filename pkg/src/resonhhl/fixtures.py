"""Loader for the bundled theta = 20 deg reference fixture."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import FixtureError
from .linalg_core import matrix_from_dict

__all__ = ["Fixture", "default_fixture_path", "fixture_checksum", "load_fixture"]


def default_fixture_path() -> Path:
    return Path(str(resources.files("resonhhl") / "fixtures" / "h_theta20.json"))


def fixture_checksum(record: dict) -> str:
    """SHA-256 of the canonical JSON of every field except ``sha256``."""
    body = {k: v for k, v in record.items() if k != "sha256"}
    payload = json.dumps(body, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


def _pairs(rows) -> np.ndarray:
    return np.array([complex(re, im) for re, im in rows])


@dataclass(frozen=True)
class Fixture:
    h: np.ndarray
    seed_first: np.ndarray
    seed_second: np.ndarray
    eigvec_first: np.ndarray
    eigvec_second: np.ndarray
    ihhl_first: complex
    ihhl_second: complex
    iterations_first: int
    iterations_second: int
    e_diag: np.ndarray  # as printed (descending real part)
    table_ihhl: np.ndarray  # ascending real part
    table_diag: np.ndarray
    reference_resonance: complex
    checksum_ok: bool
    path: Path


def load_fixture(path: str | Path | None = None, verify_checksum: bool = True) -> Fixture:
    path = Path(path) if path is not None else default_fixture_path()
    try:
        record = json.loads(path.read_text())
    except FileNotFoundError as exc:
        raise FixtureError(f"fixture not found: {path}") from exc
    except (OSError, json.JSONDecodeError) as exc:
        raise FixtureError(f"cannot read fixture {path}: {exc}") from exc

    ok = record.get("sha256") == fixture_checksum(record)
    if verify_checksum and not ok:
        raise FixtureError(f"fixture checksum mismatch: {path}")
    try:
        return Fixture(
            h=matrix_from_dict(record["h_theta"]),
            seed_first=matrix_from_dict(record["seed_first"], vector=True),
            seed_second=matrix_from_dict(record["seed_second"], vector=True),
            eigvec_first=matrix_from_dict(record["eigvec_first"], vector=True),
            eigvec_second=matrix_from_dict(record["eigvec_second"], vector=True),
            ihhl_first=complex(*record["ihhl_first"]),
            ihhl_second=complex(*record["ihhl_second"]),
            iterations_first=int(record["iterations_first"]),
            iterations_second=int(record["iterations_second"]),
            e_diag=_pairs(record["e_diag"]),
            table_ihhl=_pairs(record["table_ihhl"]),
            table_diag=_pairs(record["table_diag"]),
            reference_resonance=complex(*record["reference_resonance"]),
            checksum_ok=ok,
            path=path,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FixtureError(f"malformed fixture {path}: {exc}") from exc
