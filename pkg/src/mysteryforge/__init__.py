"""mysteryforge: turn linked open data into solvable mystery adventures.

Pipeline: ingest articles (fixture corpus or live endpoints) -> knowledge
graph -> evolved suspect set -> clue chain, evidence and dialog -> a
canonical, replayable game file -> deterministic play sessions over HTTP
or the terminal.
"""

from .assemble import assemble_game, validate_solvability
from .config import ForgeConfig, load_config
from .errors import ForgeError
from .fixtures import load_fixture_corpus, write_fixture_corpus
from .gamespec import GameSpec
from .graph import KnowledgeGraph, build_graph, find_path, relatedness
from .ingest import FixtureSource
from .metrics import MaximalismScore, bias_audit, score_game
from .runtime import Action, GameState, apply_action, greedy_playthrough, new_session
from .service import create_app

__version__ = "0.1.0"

__all__ = [
    "Action",
    "ForgeConfig",
    "ForgeError",
    "FixtureSource",
    "GameSpec",
    "GameState",
    "KnowledgeGraph",
    "MaximalismScore",
    "apply_action",
    "assemble_game",
    "bias_audit",
    "build_graph",
    "create_app",
    "find_path",
    "greedy_playthrough",
    "load_config",
    "load_fixture_corpus",
    "new_session",
    "relatedness",
    "score_game",
    "validate_solvability",
    "write_fixture_corpus",
    "__version__",
]
