"""Independent reference implementations used to check the real code paths.

Everything here is deliberately naive: full O(n*m) edit-distance matrices,
per-day window rescans, per-row linear scans. The production code must agree
with these, never share code with them.
"""

from __future__ import annotations

from datetime import timedelta

import numpy as np


def reference_wer(ref_tokens, hyp_tokens) -> float:
    n, m = len(ref_tokens), len(hyp_tokens)
    d = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        d[i][0] = i
    for j in range(m + 1):
        d[0][j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            d[i][j] = min(
                d[i - 1][j] + 1,
                d[i][j - 1] + 1,
                d[i - 1][j - 1] + (ref_tokens[i - 1] != hyp_tokens[j - 1]),
            )
    return d[n][m] / n


def oracle_rolling(series, window_days):
    out = []
    for day, _ in series:
        vals = [
            v for d, v in series if day - timedelta(days=window_days - 1) <= d <= day
        ]
        out.append((day, sum(vals) / len(vals)))
    return out


def linear_scan(records, query, k, predicate=None):
    """records: (id, float32 vector, metadata) triples -> [(distance, id)]."""
    scored = []
    for rec_id, vec, meta in records:
        if predicate and not predicate(meta):
            continue
        diff = vec.astype(np.float64) - query
        scored.append((float(np.sum(diff * diff)), rec_id))
    scored.sort()
    return scored[:k]
