"""Deterministic, domain-separated randomness.

One user-facing seed fans out into independent streams, one per purpose
(code sampling, scrambler, permutation, errors, measurement), so changing
how one purpose consumes randomness never perturbs the others.
"""

from __future__ import annotations

import hashlib
import random


def derive_stream(seed: int, label: str) -> random.Random:
    """A Random seeded from SHA-256 over (label, seed)."""
    digest = hashlib.sha256(f"{label}|{seed}".encode()).digest()
    return random.Random(int.from_bytes(digest, "little"))
