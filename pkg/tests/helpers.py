"""Shared utilities for CLI-level tests."""

from __future__ import annotations

import json
import os
import shutil
import subprocess
import sys
from pathlib import Path

from vgc.matrix_groups import FIXTURE_DIR


def run_vgc(*args: str, env_extra: dict | None = None) -> subprocess.CompletedProcess:
    env = dict(os.environ)
    env.pop("VGC_FIXTURES", None)
    env.update(env_extra or {})
    return subprocess.run([sys.executable, "-m", "vgc.cli", *args], capture_output=True, env=env, timeout=300)


def copy_fixtures(dst: Path) -> Path:
    dst.mkdir(parents=True, exist_ok=True)
    for f in FIXTURE_DIR.glob("*.json"):
        shutil.copy(f, dst / f.name)
    return dst


def corrupt_d1(fixtures: Path) -> None:
    """Replace the omega entry of D1 by 1, so D1 becomes the identity."""
    path = fixtures / "g216.json"
    data = json.loads(path.read_text())
    d1 = data["generators"][data["labels"].index("D1")]
    assert d1[1][1] == {"n": 3, "coeffs": ["0", "1"]}
    d1[1][1] = {"n": 1, "coeffs": ["1"]}
    path.write_text(json.dumps(data, indent=1))
