from app.sampling.fingerprint import fingerprint_equal, least_diff_index
from app.sampling.generators import (
    KeyedPrfGenerator,
    SequenceGenerator,
    SequenceSample,
    TrueRandomGenerator,
    first_appearance_probability,
    parse_generator_spec,
    permutation_from_sequence,
)
from app.sampling.params import Direction, SamplingParams, Transcript
from app.sampling.protocol import SampleStats, sample_distribution, sample_symdiff

__all__ = [
    'Direction',
    'KeyedPrfGenerator',
    'SampleStats',
    'SamplingParams',
    'SequenceGenerator',
    'SequenceSample',
    'Transcript',
    'TrueRandomGenerator',
    'fingerprint_equal',
    'first_appearance_probability',
    'least_diff_index',
    'parse_generator_spec',
    'permutation_from_sequence',
    'sample_distribution',
    'sample_symdiff',
]
