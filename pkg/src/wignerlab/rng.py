"""Counter-based random streams for reproducible, coupled sampling.

Every random number used by the package is addressed by a key and a
position.  The key is a 64-bit seed produced by :func:`derive_seed`; the
position is an integer counter (for matrix entries, the swap ordering
index).  Uniforms at a given position never depend on how many other
positions were drawn, so the v- and w-entry arrays of a swapping
experiment can be regenerated piecewise and bit-exactly.

The bit generator is numpy's Philox4x64, which is counter based: raw
output word ``t`` is the ``t % 4``-th word of the block at counter
``t // 4``.
"""
from __future__ import annotations

import hashlib

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """The splitmix64 output finalizer on a Python int (mod 2**64)."""
    x = (x + _GOLDEN) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def _tag_hash(tag: str | int) -> int:
    if isinstance(tag, int):
        return tag & MASK64
    digest = hashlib.blake2b(str(tag).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def derive_seed(root_seed: int, trial_index: int, stream_tag: str | int = 0) -> int:
    """Mix a root seed, a trial index and a stream tag into a 64-bit seed.

    Deterministic; distinct tags (e.g. ``"v"`` and ``"w"``) give
    independent streams for the same trial.
    """
    h = splitmix64(root_seed & MASK64)
    h = splitmix64(h ^ (trial_index & MASK64))
    return splitmix64(h ^ _tag_hash(stream_tag))


def raw_words(seed: int, start: int, count: int) -> np.ndarray:
    """Raw uint64 words at positions ``start .. start+count-1`` of the stream keyed by ``seed``."""
    if start < 0 or count < 0:
        raise ValueError("start and count must be nonnegative")
    bg = np.random.Philox(key=seed & MASK64)
    block, offset = divmod(start, 4)
    if block:
        bg.advance(block)
    words = bg.random_raw(count + offset)
    return np.asarray(words, dtype=np.uint64)[offset:]


def uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """Uniforms in the open interval (0, 1) at the given stream positions.

    53 random bits per value, offset by half an ulp so 0 and 1 are never
    produced (inverse CDFs stay finite).
    """
    words = raw_words(seed, start, count)
    return ((words >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def generator(seed: int) -> np.random.Generator:
    """A numpy Generator for sequential (non-addressed) draws, e.g. bootstrap."""
    return np.random.Generator(np.random.Philox(key=seed & MASK64))
