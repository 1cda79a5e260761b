"""Deterministic per-stage seed derivation.

Every generation stage draws from its own RNG so that changing one stage's
consumption pattern never shifts another stage's randomness. Derivation is
SHA-256 over "<seed>:<label>", truncated to 63 bits.
"""

import hashlib
import random


def derive_seed(seed: int, label: str) -> int:
    digest = hashlib.sha256(f"{seed}:{label}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") & (2**63 - 1)


def stage_rng(seed: int, label: str) -> random.Random:
    return random.Random(derive_seed(seed, label))
