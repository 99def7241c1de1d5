"""Shared fixtures: corpora generated through the primary toolkit's CLI."""

from __future__ import annotations

import json
import subprocess
from pathlib import Path

import pytest


def _generate(tmp_dir: Path, plan_line: str, seed: int, name: str) -> Path:
    config = tmp_dir / f"{name}.cfg"
    config.write_text(f"{plan_line}\nrng_seed = {seed}\n", encoding="utf-8")
    out = tmp_dir / f"{name}.csv"
    subprocess.run(
        ["goosekit", "generate", "--config", str(config), "--out", str(out),
         "--no-figures"],
        check=True, capture_output=True, text=True,
    )
    return out


@pytest.fixture(scope="session")
def shared_corpus(tmp_path_factory) -> Path:
    """The 1300-window corpus (100 per class, seed 42) from the generator CLI."""
    return _generate(tmp_path_factory.mktemp("shared"), "uniform_plan = 100", 42,
                     "corpus")


@pytest.fixture(scope="session")
def small_corpus(tmp_path_factory) -> Path:
    """A quick 78-window corpus (6 per class) for smoke tests."""
    return _generate(tmp_path_factory.mktemp("small"), "uniform_plan = 6", 5,
                     "small")


@pytest.fixture(scope="session")
def shared_manifest(shared_corpus) -> dict:
    return json.loads(
        Path(str(shared_corpus) + ".manifest.json").read_text(encoding="utf-8")
    )
