"""
Two-party sampling of a near-uniform element of A xor B.

Alice draws a generator seed and sends it; both sides expand it into a
sequence X, build the first-appearance permutation sigma and permute their
characteristic vectors. The least index where the permuted vectors differ
maps back through sigma to the sampled element.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from app.core.rng import SeedStreams
from app.core.tokens import TokenSet
from app.sampling.fingerprint import least_diff_index
from app.sampling.generators import SequenceGenerator, permutation_from_sequence
from app.sampling.params import Direction, SamplingParams, Transcript
from app.utils.metrics import record_transcript

logger = logging.getLogger(__name__)


def permute_bits(bits: int, sigma: Tuple[int, ...]) -> int:
    """Bit i of the result is bit sigma[i] of the input."""
    out = 0
    for position, source in enumerate(sigma):
        if (bits >> source) & 1:
            out |= 1 << position
    return out


def sample_symdiff(
        a: TokenSet,
        b: TokenSet,
        eps: float,
        generator: SequenceGenerator,
        rng: np.random.Generator,
) -> Tuple[Optional[int], Transcript]:
    """One protocol run. Returns (element or None, transcript)."""
    if a.width != b.width:
        raise ValueError(f"width mismatch: {a.width} vs {b.width}")
    params = SamplingParams.from_eps(a.width, eps)
    transcript = Transcript()

    sequence = generator.sample(rng, params.k, params.d, params.alpha)
    transcript.send(Direction.ALICE_TO_BOB, generator.seed_bits(params.k, params.d, params.alpha), "seed")
    sigma = permutation_from_sequence(sequence, params.k)

    index = least_diff_index(
        permute_bits(a.bits, sigma),
        permute_bits(b.bits, sigma),
        params.k,
        params.subprotocol_error,
        rng,
        transcript,
    )
    record_transcript(transcript.protocol_bits)
    return (None if index is None else sigma[index]), transcript


@dataclass(frozen=True)
class SampleStats:
    histogram: Dict[int, int]
    empty_verdicts: int
    trials: int
    tv_distance: float
    mean_bits: float
    seed_bits: int
    bit_counts: Dict[int, int] = field(default_factory=dict)  # protocol bits -> trials


def total_variation_from_uniform(histogram: Dict[int, int], support: TokenSet, trials: int) -> float:
    """TV distance between the empirical output law (None included) and uniform on support."""
    if not support:
        empty = trials - sum(histogram.values())
        return 1.0 - empty / trials
    target = 1.0 / len(support)
    distance = sum(abs(histogram.get(t, 0) / trials - target) for t in support)
    distance += sum(count / trials for t, count in histogram.items() if t not in support)
    distance += (trials - sum(histogram.values())) / trials
    return distance / 2


def sample_distribution(
        a: TokenSet,
        b: TokenSet,
        eps: float,
        generator: SequenceGenerator,
        streams: SeedStreams,
        trials: int,
) -> SampleStats:
    """Monte Carlo of sample_symdiff over independent protocol randomness."""
    counts: Counter = Counter()
    bit_counts: Counter = Counter()
    empty = 0
    bits = 0
    seed_bits = 0
    for trial in range(trials):
        element, transcript = sample_symdiff(a, b, eps, generator, streams.stream("sample", trial))
        if element is None:
            empty += 1
        else:
            counts[element] += 1
        bits += transcript.protocol_bits
        bit_counts[transcript.protocol_bits] += 1
        seed_bits = transcript.seed_bits
    histogram = dict(sorted(counts.items()))
    return SampleStats(
        histogram=histogram,
        empty_verdicts=empty,
        trials=trials,
        tv_distance=total_variation_from_uniform(histogram, a ^ b, trials),
        mean_bits=bits / trials if trials else 0.0,
        seed_bits=seed_bits,
        bit_counts=dict(sorted(bit_counts.items())),
    )
