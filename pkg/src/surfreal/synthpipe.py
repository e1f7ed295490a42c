"""Synthetic shallow-task data from parsed unlabeled corpora.

A parsed corpus is read leniently (malformed blocks are counted, not
fatal), Unicode-normalized to NFC, filtered by sentence length and by
surface-vocabulary overlap against the original dataset, and the
survivors are shallow-transformed with per-sentence derived seeds.
Statistics reconcile exactly: every input block is kept or rejected for
exactly one reason.
"""

from __future__ import annotations

import unicodedata
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable

from .conllu_io import ConlluError, UdSentence, iter_blocks, parse_block
from .deptree import ShallowSentence, shallow_transform

REASON_LENGTH = "length"
REASON_OVERLAP = "overlap"


@dataclass(frozen=True)
class FilterPolicy:
    min_len: int = 5
    max_len: int = 50
    overlap_threshold: float = 0.8

    def __post_init__(self):
        if not 0 < self.min_len <= self.max_len:
            raise ValueError(f"need 0 < min_len <= max_len, got {self.min_len}, {self.max_len}")
        if not 0.0 <= self.overlap_threshold <= 1.0:
            raise ValueError(f"overlap_threshold must be in [0, 1], got {self.overlap_threshold}")


class Vocabulary:
    """Surface forms seen at least min_count times in the original data."""

    def __init__(self, counts: Counter, min_count: int):
        if min_count < 1:
            raise ValueError("min_count must be >= 1")
        self.counts = counts
        self.min_count = min_count
        self.tokens = {t for t, c in counts.items() if c >= min_count}

    def __contains__(self, token: str) -> bool:
        return token in self.tokens

    def __len__(self) -> int:
        return len(self.tokens)


def build_vocab(sentences: Iterable[list[str]], min_count: int) -> Vocabulary:
    counts = Counter()
    for tokens in sentences:
        counts.update(tokens)
    return Vocabulary(counts, min_count)


@dataclass(frozen=True)
class FilterDecision:
    keep: bool
    reason: str | None = None


def filter_sentence(tokens: list[str], vocab: Vocabulary, policy: FilterPolicy) -> FilterDecision:
    """Length test first, then instance-level vocabulary overlap.

    Overlap = in-vocab token count / token count, case-sensitive,
    punctuation included; the threshold comparison is inclusive.
    """
    n = len(tokens)
    if not policy.min_len <= n <= policy.max_len:
        return FilterDecision(False, REASON_LENGTH)
    in_vocab = sum(1 for t in tokens if t in vocab)
    if in_vocab / n < policy.overlap_threshold:
        return FilterDecision(False, REASON_OVERLAP)
    return FilterDecision(True)


@dataclass
class SynthStats:
    input_count: int = 0
    kept_count: int = 0
    rejected_by_length: int = 0
    rejected_by_overlap: int = 0
    rejected_malformed: int = 0

    def add(self, other: "SynthStats") -> None:
        self.input_count += other.input_count
        self.kept_count += other.kept_count
        self.rejected_by_length += other.rejected_by_length
        self.rejected_by_overlap += other.rejected_by_overlap
        self.rejected_malformed += other.rejected_malformed

    def reconciles(self) -> bool:
        return self.input_count == (
            self.kept_count
            + self.rejected_by_length
            + self.rejected_by_overlap
            + self.rejected_malformed
        )

    def as_report(self) -> str:
        return (
            f"input_count={self.input_count}\n"
            f"kept_count={self.kept_count}\n"
            f"rejected_by_length={self.rejected_by_length}\n"
            f"rejected_by_overlap={self.rejected_by_overlap}\n"
            f"rejected_malformed={self.rejected_malformed}\n"
        )


def nfc_sentence(sentence: UdSentence) -> UdSentence:
    tokens = [
        replace(t, form=unicodedata.normalize("NFC", t.form),
                lemma=unicodedata.normalize("NFC", t.lemma))
        for t in sentence.tokens
    ]
    return UdSentence(tokens=tokens, comments=list(sentence.comments),
                      ignored_lines=list(sentence.ignored_lines))


def _sift_blocks(
    blocks: list[list[str]], vocab: Vocabulary, policy: FilterPolicy
) -> tuple[list[UdSentence], SynthStats]:
    """Parse, normalize, and filter one batch of sentence blocks."""
    stats = SynthStats()
    kept: list[UdSentence] = []
    for block in blocks:
        stats.input_count += 1
        try:
            sentence = parse_block(block)
        except ConlluError:
            stats.rejected_malformed += 1
            continue
        sentence = nfc_sentence(sentence)
        decision = filter_sentence(sentence.forms(), vocab, policy)
        if not decision.keep:
            if decision.reason == REASON_LENGTH:
                stats.rejected_by_length += 1
            else:
                stats.rejected_by_overlap += 1
            continue
        stats.kept_count += 1
        kept.append(sentence)
    return kept, stats


def build_synthetic_dataset(
    text: str,
    vocab: Vocabulary,
    policy: FilterPolicy,
    rng_seed: int,
    jobs: int = 1,
) -> tuple[list[ShallowSentence], SynthStats]:
    """Filter a parsed corpus and shallow-transform the survivors.

    Output order follows input order; kept sentence number i (0-based)
    is transformed with seed rng_seed + i, so results do not depend on
    the number of worker processes.
    """
    blocks = list(iter_blocks(text.split("\n")))
    stats = SynthStats()
    kept: list[UdSentence] = []
    if jobs <= 1 or len(blocks) < 2 * jobs:
        kept, stats = _sift_blocks(blocks, vocab, policy)
    else:
        chunk = (len(blocks) + jobs - 1) // jobs
        shards = [blocks[i : i + chunk] for i in range(0, len(blocks), chunk)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for shard_kept, shard_stats in pool.map(
                _sift_blocks, shards, [vocab] * len(shards), [policy] * len(shards)
            ):
                kept.extend(shard_kept)
                stats.add(shard_stats)
    dataset = [shallow_transform(s, rng_seed + i) for i, s in enumerate(kept)]
    assert stats.reconciles()
    return dataset, stats
