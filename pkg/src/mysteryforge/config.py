"""Runtime configuration.

One JSON file drives everything: source mode, endpoint URLs, generation
knobs and the service's storage location. ``FORGE_CONFIG`` overrides the
config file path, ``FORGE_PORT`` the listen port.
"""

import json
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

ENV_CONFIG_PATH = "FORGE_CONFIG"
ENV_PORT = "FORGE_PORT"
DEFAULT_CONFIG_FILE = "forge.json"


@dataclass(frozen=True)
class Endpoints:
    sparql: str = "https://dbpedia.org/sparql"
    wiki: str = "https://en.wikipedia.org/api/rest_v1"
    commons: str = "https://commons.wikimedia.org/w/api.php"
    overpass: str = "https://overpass-api.de/api/interpreter"


@dataclass(frozen=True)
class ForgeConfig:
    mode: str = "fixture"  # fixture | live
    fixtures_dir: str = "fixtures/standard"
    store_dir: str = "var/store"
    cache_dir: str = "var/cache"
    endpoints: Endpoints = field(default_factory=Endpoints)
    timeout_s: float = 10.0
    retries: int = 2

    # generation knobs
    k: int = 5  # suspects per game: one culprit + k-1 innocents
    pool_cap: int = 20
    fan_out_cap: int = 16
    graph_depth: int = 2
    relatedness_weights: tuple = (0.5, 0.3, 0.2)  # direct edge, shared-neighbor Jaccard, inverse path length
    locations_cap: int = 8
    map_radius_deg: float = 0.02
    flag_threshold: float = 0.5  # image-confidence flag cutoff
    fidelity: str = "template"  # verbatim | template

    # evolutionary search
    evo_population: int = 32
    evo_generations: int = 100
    evo_tournament: int = 3
    evo_elitism: int = 2

    # metrics
    bias_top_n: int = 8

    # service
    listen_host: str = "127.0.0.1"
    listen_port: int = 8000
    static_dir: str = "frontend/dist"  # mounted at /app when present

    @property
    def exclusion_ledger(self) -> str:
        return str(Path(self.store_dir) / "exclusions.jsonl")


def _config_from_dict(data: dict) -> ForgeConfig:
    known = {f.name for f in fields(ForgeConfig)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    kwargs = dict(data)
    if "endpoints" in kwargs:
        kwargs["endpoints"] = Endpoints(**kwargs["endpoints"])
    if "relatedness_weights" in kwargs:
        kwargs["relatedness_weights"] = tuple(kwargs["relatedness_weights"])
    return ForgeConfig(**kwargs)


def load_config(path: str | None = None) -> ForgeConfig:
    """Load config from an explicit path, $FORGE_CONFIG, or ./forge.json.

    A missing default file yields built-in defaults; an explicitly named
    file must exist. $FORGE_PORT overrides the listen port either way.
    """
    explicit = path or os.environ.get(ENV_CONFIG_PATH)
    cfg_path = Path(explicit) if explicit else Path(DEFAULT_CONFIG_FILE)
    if cfg_path.exists():
        config = _config_from_dict(json.loads(cfg_path.read_text(encoding="utf-8")))
    elif explicit:
        raise FileNotFoundError(f"config file not found: {cfg_path}")
    else:
        config = ForgeConfig()
    port = os.environ.get(ENV_PORT)
    if port:
        config = replace(config, listen_port=int(port))
    return config
