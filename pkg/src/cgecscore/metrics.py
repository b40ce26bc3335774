"""The three character-level metrics and their corpus aggregation.

Reference-based:
  * sentence accuracy: fraction of hypotheses exactly matching some reference
  * char BLEU: geometric mean of clipped character n-gram precisions times a
    brevity penalty, aggregated at corpus level

Reference-less:
  * meaning preservation (MP): weighted harmonic mean of character-overlap
    precision and recall between a hypothesis and its source; MP' is the
    absolute distance of a system's mean MP from the corpus constant
    MP_average (the mean MP of gold references against their sources), so
    lower MP' means the system edits about as much as human correctors do.

All per-instance statistics are integers; floating-point work happens only
during aggregation, in corpus order, so reports are byte-deterministic for
any parallelism degree and either kernel backend.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from cgecscore import _kernels
from cgecscore.dataset import Corpus, EvaluationInstance, HypothesisSet
from cgecscore.textcore import DEFAULT_POLICY, NormalizationPolicy, normalize


@dataclass(frozen=True)
class BleuConfig:
    """Maximum n-gram order and per-order weights (default uniform)."""

    max_order: int = 4
    weights: tuple[float, ...] = ()

    def __post_init__(self):
        if self.max_order < 1:
            raise ValueError(f"max_order must be >= 1, got {self.max_order}")
        if not self.weights:
            object.__setattr__(
                self, "weights", tuple(1.0 / self.max_order for _ in range(self.max_order))
            )
        if len(self.weights) != self.max_order:
            raise ValueError(
                f"need {self.max_order} weights, got {len(self.weights)}"
            )
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be non-negative")
        if abs(math.fsum(self.weights) - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")


@dataclass(frozen=True)
class MeaningPreservationConfig:
    """Precision/recall trade-off parameter t, strictly between 0 and 1."""

    t: float = 0.85

    def __post_init__(self):
        if not 0.0 < self.t < 1.0:
            raise ValueError(f"t must be in (0, 1), got {self.t}")


@dataclass(frozen=True)
class PrecisionStat:
    """One modified n-gram precision with its integer parts."""

    order: int
    numerator: int
    denominator: int

    @property
    def defined(self) -> bool:
        return self.denominator > 0

    @property
    def value(self) -> float | None:
        if self.denominator == 0:
            return None
        return self.numerator / self.denominator


@dataclass(frozen=True)
class BrevityStat:
    """Brevity penalty with the summed lengths it was computed from.

    `hypothesis_chars` sums hypothesis lengths; `reference_chars` sums, per
    instance, the reference length closest to the hypothesis length (ties go
    to the shorter reference). `degenerate` marks the all-empty-hypotheses
    case, where the penalty is reported as a 0.0 sentinel.
    """

    hypothesis_chars: int
    reference_chars: int
    value: float
    degenerate: bool = False


@dataclass(frozen=True)
class BleuResult:
    value: float
    precisions: tuple[PrecisionStat, ...]
    geometric_mean: float
    brevity: BrevityStat
    zero_orders: tuple[int, ...]
    diagnostics: tuple[str, ...]


@dataclass(frozen=True)
class SentenceScore:
    instance_id: str
    exact_match: int
    meaning_preservation: float


@dataclass(frozen=True)
class MetricReport:
    system_name: str
    num_instances: int
    acc_sen: float
    bleu: BleuResult
    mp: float
    mp_average: float
    mp_prime: float
    per_sentence: tuple[SentenceScore, ...] | None = None


class _InstanceStats(NamedTuple):
    instance_id: str
    exact: int
    ngram: list[tuple[int, int]]  # (numerator, denominator) per order
    hyp_len: int
    closest_ref_len: int
    s_cm: float


def _normalized_refs(
    instance: EvaluationInstance, policy: NormalizationPolicy
) -> list[str]:
    return [normalize(r, policy) for r in instance.references]


def _closest_length(ref_lengths: Sequence[int], hyp_length: int) -> int:
    return min(ref_lengths, key=lambda length: (abs(length - hyp_length), length))


def _check_coverage(hyps: HypothesisSet, corpus: Corpus) -> None:
    missing = [inst.id for inst in corpus.instances if inst.id not in hyps.entries]
    extra = [rid for rid in hyps.entries if rid not in corpus.by_id]
    if missing or extra:
        parts = []
        if missing:
            parts.append(f"missing ids {missing[:5]!r}")
        if extra:
            parts.append(f"unknown ids {extra[:5]!r}")
        raise ValueError(
            f"hypotheses for system {hyps.system_name!r} do not cover the corpus: "
            + "; ".join(parts)
        )


def sentence_match(
    hypothesis: str,
    instance: EvaluationInstance,
    policy: NormalizationPolicy = DEFAULT_POLICY,
) -> int:
    """1 if the normalized hypothesis equals any normalized reference, else 0."""
    hyp = normalize(hypothesis, policy)
    return 1 if any(hyp == r for r in _normalized_refs(instance, policy)) else 0


def corpus_accuracy(
    hyps: HypothesisSet,
    corpus: Corpus,
    policy: NormalizationPolicy = DEFAULT_POLICY,
) -> float:
    """Mean of sentence_match over all instances."""
    if corpus.size == 0:
        raise ValueError("corpus is empty")
    _check_coverage(hyps, corpus)
    hits = sum(
        sentence_match(hyps.entries[inst.id], inst, policy) for inst in corpus.instances
    )
    return hits / corpus.size


def modified_precision(
    hyps: HypothesisSet,
    corpus: Corpus,
    order: int,
    policy: NormalizationPolicy = DEFAULT_POLICY,
) -> PrecisionStat:
    """Corpus-level clipped n-gram precision for one order.

    Numerator: per hypothesis, each n-gram counts at most as often as it
    appears in the best single reference, summed over instances. Denominator:
    total hypothesis n-gram count. Undefined (denominator 0) when every
    hypothesis is shorter than `order`.
    """
    if order < 1:
        raise ValueError(f"n-gram order must be >= 1, got {order}")
    _check_coverage(hyps, corpus)
    numerator = 0
    denominator = 0
    for inst in corpus.instances:
        hyp = normalize(hyps.entries[inst.id], policy)
        refs = _normalized_refs(inst, policy)
        num, den = _kernels.ngram_clip_stats(hyp, refs, order)[order - 1]
        numerator += num
        denominator += den
    return PrecisionStat(order=order, numerator=numerator, denominator=denominator)


def brevity_penalty(
    hyps: HypothesisSet,
    corpus: Corpus,
    policy: NormalizationPolicy = DEFAULT_POLICY,
) -> BrevityStat:
    """Corpus brevity penalty from summed lengths.

    Per instance the reference whose length is closest to the hypothesis
    length is selected (ties to the shorter); the penalty applies only when
    the summed hypothesis length falls below the summed selected reference
    length. Equal sums give exp(0) = 1, so the penalty is 1 whenever c >= r.
    """
    _check_coverage(hyps, corpus)
    c = 0
    r = 0
    for inst in corpus.instances:
        hyp_len = len(normalize(hyps.entries[inst.id], policy))
        ref_lens = [len(x) for x in _normalized_refs(inst, policy)]
        c += hyp_len
        r += _closest_length(ref_lens, hyp_len)
    if c == 0:
        return BrevityStat(hypothesis_chars=0, reference_chars=r, value=0.0, degenerate=True)
    value = 1.0 if c >= r else math.exp(1.0 - r / c)
    return BrevityStat(hypothesis_chars=c, reference_chars=r, value=value)


def _combine_bleu(
    precisions: Sequence[PrecisionStat],
    brevity: BrevityStat,
    config: BleuConfig,
) -> BleuResult:
    diagnostics = []
    zero_orders = []
    for stat in precisions:
        if not stat.defined:
            zero_orders.append(stat.order)
            diagnostics.append(f"P_{stat.order} undefined (no candidate n-grams)")
        elif stat.numerator == 0:
            zero_orders.append(stat.order)
            diagnostics.append(f"P_{stat.order} = 0")
    if brevity.degenerate:
        diagnostics.append("total hypothesis length is 0; BLEU defined as 0")
    if zero_orders or brevity.degenerate:
        return BleuResult(
            value=0.0,
            precisions=tuple(precisions),
            geometric_mean=0.0,
            brevity=brevity,
            zero_orders=tuple(zero_orders),
            diagnostics=tuple(diagnostics),
        )
    log_avg = math.fsum(
        w * math.log(stat.numerator / stat.denominator)
        for w, stat in zip(config.weights, precisions)
    )
    geometric_mean = math.exp(log_avg)
    return BleuResult(
        value=brevity.value * geometric_mean,
        precisions=tuple(precisions),
        geometric_mean=geometric_mean,
        brevity=brevity,
        zero_orders=(),
        diagnostics=tuple(diagnostics),
    )


def char_bleu(
    hyps: HypothesisSet,
    corpus: Corpus,
    config: BleuConfig | None = None,
    policy: NormalizationPolicy = DEFAULT_POLICY,
) -> BleuResult:
    """Corpus char BLEU: brevity penalty times the weighted log-average of
    the clipped n-gram precisions. No smoothing: any zero or undefined
    precision makes the score 0, with a diagnostic naming the order."""
    if corpus.size == 0:
        raise ValueError("corpus is empty")
    config = config or BleuConfig()
    precisions = [
        modified_precision(hyps, corpus, order, policy)
        for order in range(1, config.max_order + 1)
    ]
    brevity = brevity_penalty(hyps, corpus, policy)
    return _combine_bleu(precisions, brevity, config)


def mp_sentence(
    corrected: str,
    original: str,
    config: MeaningPreservationConfig | None = None,
    policy: NormalizationPolicy = DEFAULT_POLICY,
) -> float:
    """Character-overlap similarity between a corrected sentence and its source.

    m is the size of the character multiset intersection (order-insensitive);
    precision m/|corrected| and recall m/|original| combine as
    P*R / (t*P + (1-t)*R). Empty input on either side, or no overlap, gives 0.
    """
    config = config or MeaningPreservationConfig()
    c = normalize(corrected, policy)
    o = normalize(original, policy)
    if not c or not o:
        return 0.0
    m = _kernels.char_overlap(c, o)
    if m == 0:
        return 0.0
    p = m / len(c)
    r = m / len(o)
    t = config.t
    return (p * r) / (t * p + (1.0 - t) * r)


def mp_average(
    corpus: Corpus,
    config: MeaningPreservationConfig | None = None,
    policy: NormalizationPolicy = DEFAULT_POLICY,
) -> float:
    """Corpus constant: flat mean of mp_sentence(reference, source) over all
    (instance, reference) pairs. References are already exact-deduplicated at
    load, so duplicated gold strings cannot skew the mean."""
    if corpus.size == 0:
        raise ValueError("corpus is empty")
    config = config or MeaningPreservationConfig()
    scores = []
    for inst in corpus.instances:
        for ref in dict.fromkeys(inst.references):
            scores.append(mp_sentence(ref, inst.source, config, policy))
    return math.fsum(scores) / len(scores)


def mp_system(
    hyps: HypothesisSet,
    corpus: Corpus,
    config: MeaningPreservationConfig | None = None,
    policy: NormalizationPolicy = DEFAULT_POLICY,
) -> float:
    """Mean mp_sentence(hypothesis, source) over the corpus."""
    if corpus.size == 0:
        raise ValueError("corpus is empty")
    _check_coverage(hyps, corpus)
    config = config or MeaningPreservationConfig()
    scores = [
        mp_sentence(hyps.entries[inst.id], inst.source, config, policy)
        for inst in corpus.instances
    ]
    return math.fsum(scores) / len(scores)


def mp_prime(
    hyps: HypothesisSet,
    corpus: Corpus,
    config: MeaningPreservationConfig | None = None,
    policy: NormalizationPolicy = DEFAULT_POLICY,
) -> float:
    """|system MP - corpus MP_average|; lower means gold-like edit magnitude."""
    return abs(
        mp_system(hyps, corpus, config, policy) - mp_average(corpus, config, policy)
    )


def _instance_stats(
    pair: tuple[EvaluationInstance, str],
    policy: NormalizationPolicy,
    max_order: int,
    t: float,
) -> _InstanceStats:
    instance, hypothesis = pair
    hyp = normalize(hypothesis, policy)
    refs = _normalized_refs(instance, policy)
    source = normalize(instance.source, policy)

    exact = 1 if any(hyp == r for r in refs) else 0
    ngram = _kernels.ngram_clip_stats(hyp, refs, max_order)
    closest = _closest_length([len(r) for r in refs], len(hyp))

    s_cm = 0.0
    if hyp and source:
        m = _kernels.char_overlap(hyp, source)
        if m > 0:
            p = m / len(hyp)
            r = m / len(source)
            s_cm = (p * r) / (t * p + (1.0 - t) * r)

    return _InstanceStats(
        instance_id=instance.id,
        exact=exact,
        ngram=ngram,
        hyp_len=len(hyp),
        closest_ref_len=closest,
        s_cm=s_cm,
    )


def evaluate_system(
    hyps: HypothesisSet,
    corpus: Corpus,
    bleu_config: BleuConfig | None = None,
    mp_config: MeaningPreservationConfig | None = None,
    policy: NormalizationPolicy = DEFAULT_POLICY,
    jobs: int = 1,
    keep_per_sentence: bool = False,
) -> MetricReport:
    """Compute the full metric report for one system.

    Per-instance work may run on `jobs` threads; aggregation always walks
    instances in corpus order, so the report is identical for any `jobs`.
    """
    if corpus.size == 0:
        raise ValueError("corpus is empty")
    _check_coverage(hyps, corpus)
    bleu_config = bleu_config or BleuConfig()
    mp_config = mp_config or MeaningPreservationConfig()

    pairs = [(inst, hyps.entries[inst.id]) for inst in corpus.instances]

    def worker(pair):
        return _instance_stats(
            pair, policy=policy, max_order=bleu_config.max_order, t=mp_config.t
        )

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(worker, pairs))
    else:
        rows = [worker(pair) for pair in pairs]

    n = len(rows)
    acc = sum(row.exact for row in rows) / n

    numerators = [0] * bleu_config.max_order
    denominators = [0] * bleu_config.max_order
    c = 0
    r = 0
    for row in rows:
        c += row.hyp_len
        r += row.closest_ref_len
        for i, (num, den) in enumerate(row.ngram):
            numerators[i] += num
            denominators[i] += den
    precisions = [
        PrecisionStat(order=i + 1, numerator=numerators[i], denominator=denominators[i])
        for i in range(bleu_config.max_order)
    ]
    if c == 0:
        brevity = BrevityStat(hypothesis_chars=0, reference_chars=r, value=0.0, degenerate=True)
    else:
        brevity = BrevityStat(
            hypothesis_chars=c,
            reference_chars=r,
            value=1.0 if c >= r else math.exp(1.0 - r / c),
        )
    bleu = _combine_bleu(precisions, brevity, bleu_config)

    mp_val = math.fsum(row.s_cm for row in rows) / n
    mp_avg = mp_average(corpus, mp_config, policy)

    per_sentence = None
    if keep_per_sentence:
        per_sentence = tuple(
            SentenceScore(row.instance_id, row.exact, row.s_cm) for row in rows
        )

    return MetricReport(
        system_name=hyps.system_name,
        num_instances=n,
        acc_sen=acc,
        bleu=bleu,
        mp=mp_val,
        mp_average=mp_avg,
        mp_prime=abs(mp_val - mp_avg),
        per_sentence=per_sentence,
    )
