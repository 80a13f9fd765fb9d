"""Frequency-based similarity between geo-referenced corpora and the
reliability experiments built on it."""

from .features import (FeatureCounts, FeatureKind, Vocabulary, build_vocabulary, char_trigrams,
                       count_features, project, tokenize)
from .similarity import (FrequencyVector, UndefinedCorrelationError, chi_square_distance,
                         rank_with_ties, spearman_similarity)
from .stats import descriptive_stats, spearman_rank_correlation, welch_t_test

__version__ = "0.1.0"

__all__ = [
    "FeatureCounts", "FeatureKind", "FrequencyVector", "UndefinedCorrelationError",
    "Vocabulary", "build_vocabulary", "char_trigrams", "chi_square_distance",
    "count_features", "descriptive_stats", "project", "rank_with_ties",
    "spearman_rank_correlation", "spearman_similarity", "tokenize", "welch_t_test",
]
