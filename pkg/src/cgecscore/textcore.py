"""Character-level text primitives shared by all metrics.

Everything here operates on Unicode scalar values: one CJK ideograph, one
full-width punctuation mark, or one ASCII letter each count as exactly one
character. No word segmentation is involved anywhere, which is the whole
point: scores must not depend on a segmenter.
"""

from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

_SURROGATE_LO = 0xD800
_SURROGATE_HI = 0xDFFF


@dataclass(frozen=True)
class NormalizationPolicy:
    """How raw sentences are cleaned before any comparison.

    Scores are only comparable under the same policy, so every emitted report
    embeds the policy that produced it. Defaults are deliberately minimal:
    trim surrounding whitespace and unify line endings, nothing else. NFC
    composition and internal-whitespace stripping are opt-in because they
    silently change character counts.

    Applying the same policy twice is a no-op (idempotent).
    """

    trim_surrounding_whitespace: bool = True
    unify_line_endings: bool = True
    apply_canonical_composition: bool = False
    strip_internal_whitespace: bool = False

    def as_dict(self) -> dict[str, bool]:
        return {
            "trim_surrounding_whitespace": self.trim_surrounding_whitespace,
            "unify_line_endings": self.unify_line_endings,
            "apply_canonical_composition": self.apply_canonical_composition,
            "strip_internal_whitespace": self.strip_internal_whitespace,
        }


DEFAULT_POLICY = NormalizationPolicy()


def normalize(text: str, policy: NormalizationPolicy = DEFAULT_POLICY) -> str:
    """Apply `policy` to `text` in a fixed order.

    1. trim surrounding whitespace
    2. unify line endings (CRLF and lone CR become LF)
    3. canonical composition (NFC), if enabled
    4. strip internal whitespace, if enabled
    """
    if policy.trim_surrounding_whitespace:
        text = text.strip()
    if policy.unify_line_endings:
        text = text.replace("\r\n", "\n").replace("\r", "\n")
    if policy.apply_canonical_composition:
        text = unicodedata.normalize("NFC", text)
    if policy.strip_internal_whitespace:
        text = "".join(ch for ch in text if not ch.isspace())
    return text


@dataclass(frozen=True)
class CharSequence:
    """An immutable sequence of Unicode scalar values."""

    chars: tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.chars)

    def __len__(self) -> int:
        return len(self.chars)

    def __iter__(self) -> Iterator[str]:
        return iter(self.chars)

    def __getitem__(self, index):
        return self.chars[index]


def tokenize_chars(text: str) -> CharSequence:
    """Split `text` into one element per Unicode scalar value.

    Rejects surrogate code points: they only appear when binary data was
    smuggled through a lenient decoder, and counting them as characters
    would corrupt every length-based statistic downstream.
    """
    for ch in text:
        if _SURROGATE_LO <= ord(ch) <= _SURROGATE_HI:
            raise ValueError(
                f"ill-formed Unicode: surrogate code point U+{ord(ch):04X}"
            )
    return CharSequence(tuple(text))


@dataclass(frozen=True)
class NGramMultiset:
    """Counted bag of fixed-order n-grams.

    Keys are tuples of scalar values, never re-joined strings, so there is
    no ambiguity about gram boundaries. `total` is the number of n-gram
    occurrences, i.e. max(0, sequence_length - order + 1).
    """

    order: int
    counts: Mapping[tuple[str, ...], int]
    total: int


def extract_ngrams(seq: CharSequence | Sequence[str], order: int) -> NGramMultiset:
    """Sliding-window n-grams of `seq` with multiplicity.

    Empty multiset when the sequence is shorter than `order`.
    """
    if order < 1:
        raise ValueError(f"n-gram order must be >= 1, got {order}")
    chars = seq.chars if isinstance(seq, CharSequence) else tuple(seq)
    span = len(chars) - order + 1
    if span <= 0:
        return NGramMultiset(order=order, counts={}, total=0)
    counts = Counter(chars[i : i + order] for i in range(span))
    return NGramMultiset(order=order, counts=dict(counts), total=span)


def clipped_match(
    candidate: NGramMultiset, references: Sequence[NGramMultiset]
) -> int:
    """Candidate n-gram count clipped by the per-gram maximum across references.

    This is the per-sentence numerator of the modified n-gram precision: for
    each gram in the candidate, count at most as many occurrences as the best
    single reference provides.
    """
    if not references:
        raise ValueError("need at least one reference multiset")
    for ref in references:
        if ref.order != candidate.order:
            raise ValueError(
                f"mixed n-gram orders: candidate has {candidate.order}, "
                f"reference has {ref.order}"
            )
    matched = 0
    for gram, count in candidate.counts.items():
        best = 0
        for ref in references:
            c = ref.counts.get(gram, 0)
            if c > best:
                best = c
        matched += count if count < best else best
    return matched
