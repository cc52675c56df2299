"""
Randomized equality tests and the least-differing-index search.

A test compares random-subset parities of the two strings; unequal
strings collide on one parity with probability 1/2, so a test with r
parities errs with probability 2^-r and never errs on equal strings.
"""
import logging
import math
from typing import Optional

import numpy as np

from app.config.constants import Fingerprint
from app.sampling.params import Direction, Transcript

logger = logging.getLogger(__name__)


def _mask(length: int) -> int:
    return (1 << length) - 1


def _random_bits(shared: np.random.Generator, length: int) -> int:
    if length == 0:
        return 0
    return int.from_bytes(shared.bytes((length + 7) // 8), "little") & _mask(length)


def fingerprint_equal(
        x_prefix: int,
        y_prefix: int,
        length: int,
        shared: np.random.Generator,
        transcript: Optional[Transcript] = None,
        repetitions: int = Fingerprint.PARITIES_PER_TEST,
) -> bool:
    """Probabilistic equality of two length-bit strings.

    Alice sends `repetitions` parity bits, Bob answers with one verdict bit.
    """
    x_prefix &= _mask(length)
    y_prefix &= _mask(length)
    equal = True
    for _ in range(repetitions):
        subset = _random_bits(shared, length)
        if (x_prefix & subset).bit_count() & 1 != (y_prefix & subset).bit_count() & 1:
            equal = False
    if transcript is not None:
        transcript.send(Direction.ALICE_TO_BOB, repetitions, "fingerprint")
        transcript.send(Direction.BOB_TO_ALICE, Fingerprint.FRAMING_BITS, "verdict")
    return equal


def amplified_repetitions(error: float) -> int:
    return math.ceil(math.log2(1 / error)) + Fingerprint.AMPLIFY_EXTRA


def _binary_search(x: int, y: int, length: int, shared: np.random.Generator,
                   transcript: Optional[Transcript]) -> int:
    """Smallest i whose prefix [0, i] tests unequal; length when none does."""
    lo, hi = 0, length
    while lo < hi:
        mid = (lo + hi) // 2
        if fingerprint_equal(x, y, mid + 1, shared, transcript):
            lo = mid + 1
        else:
            hi = mid
    return lo


def least_diff_index(
        x: int,
        y: int,
        length: int,
        error: float,
        shared: np.random.Generator,
        transcript: Optional[Transcript] = None,
) -> Optional[int]:
    """Least index where x and y differ, or None when they look equal.

    Each candidate from the binary search is verified: Alice sends bit i,
    and an amplified fingerprint checks the prefix before i. A rejected
    candidate restarts the search with fresh shared randomness.
    """
    if not 0 < error < 1:
        raise ValueError(f"error must be in (0, 1), got {error}")
    x &= _mask(length)
    y &= _mask(length)
    repetitions = amplified_repetitions(error)
    attempts = repetitions
    fallback: Optional[int] = None

    for attempt in range(attempts):
        candidate = _binary_search(x, y, length, shared, transcript)
        if candidate == length:
            if fingerprint_equal(x, y, length, shared, transcript, repetitions):
                return None
            continue
        if transcript is not None:
            transcript.send(Direction.ALICE_TO_BOB, 1, "bit")
            transcript.send(Direction.BOB_TO_ALICE, Fingerprint.FRAMING_BITS, "verdict")
        if (x >> candidate) & 1 != (y >> candidate) & 1:
            if fingerprint_equal(x, y, candidate, shared, transcript, repetitions):
                return candidate
            fallback = candidate
        logger.debug(f"[least_diff_index] attempt {attempt} rejected candidate {candidate}")

    return fallback
