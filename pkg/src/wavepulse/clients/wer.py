"""Word error rate for transcript quality evaluation."""

from __future__ import annotations

import re
from typing import Sequence

_TOKEN_RE = re.compile(r"[\w']+")


def tokenize(text: str | Sequence[str]) -> list[str]:
    """Case-fold, strip punctuation, and split into word tokens.

    In-word apostrophes survive (``it's`` stays one token); everything else
    non-alphanumeric separates tokens.
    """
    if not isinstance(text, str):
        text = " ".join(text)
    return [t.strip("'") for t in _TOKEN_RE.findall(text.casefold()) if t.strip("'")]


def word_error_rate(reference: str | Sequence[str], hypothesis: str | Sequence[str]) -> float:
    """Token-level edit distance divided by reference length.

    Substitutions, insertions, and deletions all cost 1. The reference must
    be non-empty after tokenization.
    """
    ref = tokenize(reference)
    hyp = tokenize(hypothesis)
    if not ref:
        raise ValueError("word error rate is undefined for an empty reference")
    return _edit_distance(ref, hyp) / len(ref)


def _edit_distance(ref: list[str], hyp: list[str]) -> int:
    # two-row dynamic program over (len(ref)+1) x (len(hyp)+1)
    prev = list(range(len(hyp) + 1))
    for i, r in enumerate(ref, start=1):
        cur = [i] + [0] * len(hyp)
        for j, h in enumerate(hyp, start=1):
            cost = 0 if r == h else 1
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost)
        prev = cur
    return prev[-1]
