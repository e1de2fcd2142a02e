"""Near-duplicate detection and the station syndication graph."""

from .lsh import (
    DEFAULT_BANDS,
    DEFAULT_ROWS,
    all_pairs,
    candidate_probability,
    lsh_candidates,
    ordered_pair,
)
from .minhash import (
    DEFAULT_NUM_HASHES,
    DEFAULT_SEED,
    DEFAULT_SHINGLE_WIDTH,
    MinHashSignature,
    TextTooShort,
    estimate_jaccard,
    exact_jaccard,
    minhash_signature,
    shingles,
    signature_of_shingles,
)
from .network import (
    DEFAULT_THETA,
    NarrativeSubgroup,
    NetworkResult,
    RefinementStats,
    SyndicationEdge,
    build_adjacency,
    build_syndication_network,
    degree_stats,
    detect_communities,
    find_subgroups,
    modularity,
    parse_member_id,
    refine_network,
)

__all__ = [
    "DEFAULT_BANDS",
    "DEFAULT_ROWS",
    "DEFAULT_NUM_HASHES",
    "DEFAULT_SEED",
    "DEFAULT_SHINGLE_WIDTH",
    "DEFAULT_THETA",
    "MinHashSignature",
    "NarrativeSubgroup",
    "NetworkResult",
    "RefinementStats",
    "SyndicationEdge",
    "TextTooShort",
    "all_pairs",
    "build_adjacency",
    "build_syndication_network",
    "candidate_probability",
    "degree_stats",
    "detect_communities",
    "estimate_jaccard",
    "exact_jaccard",
    "find_subgroups",
    "lsh_candidates",
    "minhash_signature",
    "modularity",
    "ordered_pair",
    "parse_member_id",
    "refine_network",
    "shingles",
    "signature_of_shingles",
]
