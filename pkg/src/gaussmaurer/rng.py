"""Labelled, independent random streams derived from one master seed."""

import hashlib

import numpy as np


def _label_key(label: str) -> int:
    return int.from_bytes(hashlib.blake2b(label.encode(), digest_size=8).digest(), "big")


def stream(seed: int, label: str, *extra: int) -> np.random.Generator:
    """Generator for ``label`` under master ``seed``; ``extra`` ints refine it."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(_label_key(label), *map(int, extra)))
    return np.random.default_rng(ss)
