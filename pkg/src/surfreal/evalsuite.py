"""Evaluation: corpus BLEU-4, detokenization, error taxonomy, length buckets.

BLEU is unsmoothed corpus-level BLEU-4 built from associative match
counts, so bucket scores aggregate back to the corpus totals exactly.
The error taxonomy sorts each hypothesis into one of four mutually
exclusive classes: exact match, punctuation-only deviation,
inflection-only deviation, or other.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

from .conllu_io import UdSentence

MAX_ORDER = 4
DEFAULT_BOUNDARIES = (10, 20, 30, 40, 50, 60)


class ErrorCategory(Enum):
    EXACT_MATCH = "ExactMatch"
    PUNCTUATION_ONLY = "PunctuationOnly"
    INFLECTION_ONLY = "InflectionOnly"
    OTHER = "Other"


# --- BLEU -------------------------------------------------------------------


@dataclass
class BleuCounts:
    """Clipped-match and total n-gram counts for 1..4-grams plus lengths.

    Addition is associative and commutative, so corpus statistics can be
    computed by any parallel map + reduce over sentence pairs.
    """

    matched: list[int] = field(default_factory=lambda: [0] * MAX_ORDER)
    total: list[int] = field(default_factory=lambda: [0] * MAX_ORDER)
    hyp_len: int = 0
    ref_len: int = 0

    def __add__(self, other: "BleuCounts") -> "BleuCounts":
        return BleuCounts(
            matched=[a + b for a, b in zip(self.matched, other.matched)],
            total=[a + b for a, b in zip(self.total, other.total)],
            hyp_len=self.hyp_len + other.hyp_len,
            ref_len=self.ref_len + other.ref_len,
        )

    def score(self) -> float:
        """100 * BP * geometric mean of p1..p4; 0 when any precision is 0."""
        if self.hyp_len == 0:
            return 0.0
        log_sum = 0.0
        for n in range(MAX_ORDER):
            if self.total[n] == 0 or self.matched[n] == 0:
                return 0.0
            log_sum += math.log(self.matched[n] / self.total[n])
        bp = 1.0
        if self.hyp_len < self.ref_len:
            bp = math.exp(1.0 - self.ref_len / self.hyp_len)
        return 100.0 * bp * math.exp(log_sum / MAX_ORDER)


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def pair_counts(hyp: list[str], ref: list[str]) -> BleuCounts:
    counts = BleuCounts(hyp_len=len(hyp), ref_len=len(ref))
    for n in range(1, MAX_ORDER + 1):
        hyp_grams = _ngrams(hyp, n)
        if not hyp_grams:
            continue
        ref_grams = _ngrams(ref, n)
        counts.total[n - 1] = sum(hyp_grams.values())
        counts.matched[n - 1] = sum(
            min(c, ref_grams[g]) for g, c in hyp_grams.items() if g in ref_grams
        )
    return counts


def bleu4(hypotheses: list[list[str]], references: list[list[str]]) -> float:
    if not hypotheses:
        raise ValueError("empty hypothesis list")
    if len(hypotheses) != len(references):
        raise ValueError(f"{len(hypotheses)} hypotheses vs {len(references)} references")
    counts = BleuCounts()
    for hyp, ref in zip(hypotheses, references):
        counts = counts + pair_counts(hyp, ref)
    return counts.score()


# --- detokenization ---------------------------------------------------------

CLOSING_PUNCT = frozenset({".", ",", "!", "?", ":", ";", "%"})
OPEN_BRACKETS = frozenset({"(", "[", "{"})
CLOSE_BRACKETS = frozenset({")", "]", "}"})


def detokenize(tokens: list[str]) -> str:
    """Join tokens into natural orthography with a fixed rule list.

    Bracket escapes are restored first so escaped and literal brackets
    attach identically; then closing punctuation and contractions attach
    leftward, opening brackets rightward, and double quotes alternate by
    parity.  A bare apostrophe attaches leftward (possessive/closing).
    """
    out: list[str] = []
    glue_next = False
    dq_open = False
    for raw in tokens:
        token = {"-lrb-": "(", "-rrb-": ")"}.get(raw, raw)
        attach_left = False
        attach_right = False
        if token in CLOSING_PUNCT or token in CLOSE_BRACKETS:
            attach_left = True
        elif token in OPEN_BRACKETS:
            attach_right = True
        elif token == '"':
            if dq_open:
                attach_left = True
            else:
                attach_right = True
            dq_open = not dq_open
        elif token.startswith("'"):
            attach_left = True
        elif token == "n't":
            attach_left = True
        if out and (glue_next or attach_left):
            out[-1] += token
        else:
            out.append(token)
        glue_next = attach_right
    return " ".join(out)


# --- error taxonomy ---------------------------------------------------------


def classify_output(
    hyp_tokens: list[str],
    ref_sentence: UdSentence,
    extra_lemmas: dict[str, str] | None = None,
) -> ErrorCategory:
    """Assign one of the four error classes, checked in order.

    Inflection matching maps forms to lemmas through the reference
    sentence's own form->lemma table, then ``extra_lemmas`` (typically
    corpus-wide, so forms the reference sentence is missing still
    resolve), then identity.
    """
    ref_forms = [t.form for t in ref_sentence.tokens]
    if hyp_tokens == ref_forms:
        return ErrorCategory.EXACT_MATCH

    ref_punct = {t.form for t in ref_sentence.tokens if t.upos == "PUNCT"}
    ref_stripped = [t.form for t in ref_sentence.tokens if t.upos != "PUNCT"]
    hyp_stripped = [t for t in hyp_tokens if t not in ref_punct]
    if hyp_stripped == ref_stripped:
        return ErrorCategory.PUNCTUATION_ONLY

    if len(hyp_tokens) == len(ref_forms):
        table: dict[str, str] = {}
        for t in ref_sentence.tokens:
            table.setdefault(t.form, t.lemma)

        def lemma_of(form: str) -> str:
            hit = table.get(form)
            if hit is None and extra_lemmas is not None:
                hit = extra_lemmas.get(form)
            return hit if hit is not None else form

        if [lemma_of(t) for t in hyp_tokens] == [lemma_of(t) for t in ref_forms]:
            return ErrorCategory.INFLECTION_ONLY
    return ErrorCategory.OTHER


def corpus_lemma_table(ref_corpus: list[UdSentence]) -> dict[str, str]:
    """form -> lemma over a whole corpus, first occurrence winning."""
    table: dict[str, str] = {}
    for sentence in ref_corpus:
        for t in sentence.tokens:
            table.setdefault(t.form, t.lemma)
    return table


# --- buckets and the full report --------------------------------------------


@dataclass
class BucketRow:
    label: str
    count: int
    bleu: float | None
    counts: BleuCounts


def bucket_labels(boundaries: tuple[int, ...] | list[int]) -> list[str]:
    labels = [f"<{boundaries[0]}"]
    labels += [f"{a}-{b}" for a, b in zip(boundaries, boundaries[1:])]
    labels.append(f"{boundaries[-1]}+")
    return labels


def _bucket_sums(
    pairs: list[tuple[list[str], list[str]]], boundaries
) -> tuple[list[BleuCounts], list[int]]:
    n_buckets = len(boundaries) + 1
    sums = [BleuCounts() for _ in range(n_buckets)]
    counts = [0] * n_buckets
    for hyp, ref in pairs:
        idx = sum(1 for b in boundaries if len(ref) >= b)
        sums[idx] = sums[idx] + pair_counts(hyp, ref)
        counts[idx] += 1
    return sums, counts


def bucket_report(
    pairs: list[tuple[list[str], list[str]]],
    boundaries: tuple[int, ...] | list[int] = DEFAULT_BOUNDARIES,
) -> list[BucketRow]:
    """Corpus BLEU per reference-length bucket; empty buckets score None."""
    if list(boundaries) != sorted(set(boundaries)):
        raise ValueError("boundaries must be strictly increasing")
    sums, counts = _bucket_sums(pairs, boundaries)
    return [
        BucketRow(label=label, count=counts[i], counts=sums[i],
                  bleu=sums[i].score() if counts[i] else None)
        for i, label in enumerate(bucket_labels(boundaries))
    ]


@dataclass
class EvalReport:
    corpus_bleu: float
    bucket_bleu: list[BucketRow]
    error_counts: dict[ErrorCategory, int]
    total: int
    mode: str

    def format_table(self) -> str:
        lines = [f"mode: {self.mode}", f"sentences: {self.total}",
                 f"corpus BLEU-4: {self.corpus_bleu:.2f}", "", "category counts:"]
        for cat in ErrorCategory:
            lines.append(f"  {cat.value:<16} {self.error_counts[cat]:>6}")
        lines.append("")
        lines.append("BLEU by reference length:")
        for row in self.bucket_bleu:
            score = f"{row.bleu:.2f}" if row.bleu is not None else "-"
            lines.append(f"  {row.label:<6} {row.count:>6}  {score:>7}")
        return "\n".join(lines) + "\n"

    def format_kv(self) -> str:
        lines = [f"mode={self.mode}", f"total={self.total}",
                 f"corpus_bleu={self.corpus_bleu:.6f}"]
        for cat in ErrorCategory:
            lines.append(f"count_{cat.value}={self.error_counts[cat]}")
        for row in self.bucket_bleu:
            score = f"{row.bleu:.6f}" if row.bleu is not None else ""
            lines.append(f"bucket_{row.label}_count={row.count}")
            lines.append(f"bucket_{row.label}_bleu={score}")
        return "\n".join(lines) + "\n"


def _eval_chunk(
    hyps: list[list[str]],
    ref_sents: list[UdSentence],
    mode: str,
    table: dict[str, str],
    boundaries: tuple[int, ...],
) -> tuple[list[BleuCounts], list[int], Counter]:
    """Per-chunk statistics; merging chunks is field-wise addition."""
    refs = [s.forms() for s in ref_sents]
    if mode == "detokenized":
        pairs = [(detokenize(h).split(), detokenize(r).split()) for h, r in zip(hyps, refs)]
    else:
        pairs = list(zip(hyps, refs))
    sums, counts = _bucket_sums(pairs, boundaries)
    errors = Counter(
        classify_output(hyp, ref, extra_lemmas=table) for hyp, ref in zip(hyps, ref_sents)
    )
    return sums, counts, errors


def evaluate(
    hyps: list[list[str]],
    ref_corpus: list[UdSentence],
    mode: str = "tokenized",
    extra_lemmas: dict[str, str] | None = None,
    jobs: int = 1,
) -> EvalReport:
    """Assemble the full report for aligned hypothesis/reference corpora.

    BLEU and buckets follow ``mode``: tokenized compares token lists as
    given; detokenized renders both sides with :func:`detokenize` and
    compares the whitespace split.  Error classification is defined on
    tokenized text (exact match means the tokenized sentences agree), so
    it ignores the mode.  ``jobs`` splits the corpus into chunks whose
    statistics merge by addition; results do not depend on it.
    """
    if mode not in ("tokenized", "detokenized"):
        raise ValueError(f"unknown mode {mode!r}")
    if len(hyps) != len(ref_corpus):
        raise ValueError(f"{len(hyps)} hypotheses vs {len(ref_corpus)} references")
    if not hyps:
        raise ValueError("empty corpus")

    table = corpus_lemma_table(ref_corpus)
    if extra_lemmas:
        table.update(extra_lemmas)
    boundaries = DEFAULT_BOUNDARIES

    if jobs <= 1 or len(hyps) < 2 * jobs:
        chunks = [_eval_chunk(hyps, ref_corpus, mode, table, boundaries)]
    else:
        size = (len(hyps) + jobs - 1) // jobs
        spans = [(i, min(i + size, len(hyps))) for i in range(0, len(hyps), size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(
                pool.map(
                    _eval_chunk,
                    [hyps[a:b] for a, b in spans],
                    [ref_corpus[a:b] for a, b in spans],
                    [mode] * len(spans),
                    [table] * len(spans),
                    [boundaries] * len(spans),
                )
            )

    n_buckets = len(boundaries) + 1
    sums = [BleuCounts() for _ in range(n_buckets)]
    counts = [0] * n_buckets
    errors: Counter = Counter()
    for chunk_sums, chunk_counts, chunk_errors in chunks:
        sums = [a + b for a, b in zip(sums, chunk_sums)]
        counts = [a + b for a, b in zip(counts, chunk_counts)]
        errors.update(chunk_errors)

    corpus = BleuCounts()
    for s in sums:
        corpus = corpus + s
    rows = [
        BucketRow(label=label, count=counts[i], counts=sums[i],
                  bleu=sums[i].score() if counts[i] else None)
        for i, label in enumerate(bucket_labels(boundaries))
    ]
    return EvalReport(
        corpus_bleu=corpus.score(),
        bucket_bleu=rows,
        error_counts={cat: errors.get(cat, 0) for cat in ErrorCategory},
        total=len(hyps),
        mode=mode,
    )
