import dataclasses
from pathlib import Path

import pytest

from mysteryforge.assemble import assemble_game
from mysteryforge.config import ForgeConfig
from mysteryforge.fixtures import load_fixture_corpus
from mysteryforge.ingest import FixtureSource

ROOT = Path(__file__).resolve().parents[1]
STANDARD_FIXTURES = ROOT / "fixtures" / "standard"


@pytest.fixture(scope="session")
def standard_corpus():
    return load_fixture_corpus(STANDARD_FIXTURES)


@pytest.fixture(scope="session")
def standard_source(standard_corpus):
    return FixtureSource(standard_corpus)


@pytest.fixture()
def forge_config(tmp_path):
    return ForgeConfig(
        mode="fixture",
        fixtures_dir=str(STANDARD_FIXTURES),
        store_dir=str(tmp_path / "store"),
        cache_dir=str(tmp_path / "cache"),
    )


@pytest.fixture(scope="session")
def assembled(standard_source):
    """Memoized game assembly against the standard corpus.

    Generation is deterministic, so specs can be shared across tests; any
    test that mutates one must copy first.
    """
    base = ForgeConfig(mode="fixture", fixtures_dir=str(STANDARD_FIXTURES))
    cache = {}

    def get(victim="Albert Einstein", mode="wikimystery", seed=7, **overrides):
        key = (victim, mode, seed, tuple(sorted(overrides.items())))
        if key not in cache:
            config = dataclasses.replace(base, **overrides) if overrides else base
            cache[key] = assemble_game(standard_source, victim, mode, seed, config)
        return cache[key]

    return get
