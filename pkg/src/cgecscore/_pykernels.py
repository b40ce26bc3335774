"""Pure-Python counting kernels (fallback backend).

Thin aggregation over the textcore primitives; cgecscore._fastkernels is the
compiled equivalent. Both emit exact integer statistics only, so any metric
computed on top is bit-identical regardless of backend.
"""

from __future__ import annotations

from collections import Counter
from typing import Sequence

from cgecscore.textcore import clipped_match, extract_ngrams


def ngram_clip_stats(
    hyp: str, refs: Sequence[str], max_order: int
) -> list[tuple[int, int]]:
    """(clipped match count, candidate n-gram total) for orders 1..max_order."""
    if max_order < 1:
        raise ValueError(f"max_order must be >= 1, got {max_order}")
    out = []
    for order in range(1, max_order + 1):
        cand = extract_ngrams(hyp, order)
        if cand.total == 0 or not refs:
            out.append((0, cand.total))
            continue
        ref_sets = [extract_ngrams(r, order) for r in refs]
        out.append((clipped_match(cand, ref_sets), cand.total))
    return out


def char_overlap(a: str, b: str) -> int:
    """Size of the character multiset intersection of two strings."""
    return sum((Counter(a) & Counter(b)).values())
