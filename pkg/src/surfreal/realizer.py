"""Surface realization by restricted beam search.

The search space is deliberately narrow: every output token is an
inflection candidate of one input node, every node is used exactly
once, and the output length equals the node count.  Word-order and
inflection preferences come from a pluggable Scorer; the n-gram scorer
is the statistical reference implementation and the oracle scorer is a
test instrument that reproduces the aligned reference.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections import Counter
from dataclasses import dataclass

from .conllu_io import UdSentence, parse_pairs
from .deptree import NodeInfo, ShallowSentence
from .ngram import NGramModel

# morphological features that select an inflection; everything else
# (lexicalized or syntactic marks) is dropped from lexicon keys
KEPT_FEATS = frozenset({"Case", "Degree", "Mood", "Number", "Person", "Tense", "VerbForm"})


def feats_key(feats: str) -> tuple[tuple[str, str], ...]:
    kept = [(k, v) for k, v in parse_pairs(feats) if k in KEPT_FEATS]
    return tuple(sorted(kept))


def _rank_forms(counter: Counter) -> tuple[tuple[str, int], ...]:
    # descending count, ties by form string
    return tuple(sorted(counter.items(), key=lambda kv: (-kv[1], kv[0])))


class FormLexicon:
    """Observed surface forms per (lowercased lemma, upos, feature subset).

    Lookup never fails: (lemma, upos, feats) falls back to (lemma, upos),
    then (lemma,), then to the lemma string itself with count 1.
    """

    def __init__(self, full: dict, by_lemma_upos: dict, by_lemma: dict):
        self.full = full
        self.by_lemma_upos = by_lemma_upos
        self.by_lemma = by_lemma

    def candidates(self, lemma: str, upos: str, feats: str) -> tuple[tuple[str, int], ...]:
        key = (lemma.lower(), upos, feats_key(feats))
        hit = self.full.get(key)
        if hit is None:
            hit = self.by_lemma_upos.get((lemma.lower(), upos))
        if hit is None:
            hit = self.by_lemma.get(lemma.lower())
        if hit is None:
            hit = ((lemma, 1),)
        return hit

    def candidates_for(self, info: NodeInfo) -> tuple[tuple[str, int], ...]:
        return self.candidates(info.lemma, info.upos, info.feats)

    def is_relevant(self, lemma: str, upos: str) -> bool:
        """True when the (lemma, upos) pair has at least two observed forms."""
        hit = self.by_lemma_upos.get((lemma.lower(), upos))
        return hit is not None and len(hit) >= 2

    def forms_for_lemma_upos(self, lemma: str, upos: str) -> tuple[tuple[str, int], ...]:
        hit = self.by_lemma_upos.get((lemma.lower(), upos))
        if hit is None:
            hit = self.by_lemma.get(lemma.lower())
        if hit is None:
            hit = ((lemma, 1),)
        return hit


def build_form_lexicon(gold: list[UdSentence]) -> FormLexicon:
    full: dict[tuple, Counter] = {}
    by_lemma_upos: dict[tuple, Counter] = {}
    by_lemma: dict[str, Counter] = {}
    for sentence in gold:
        for t in sentence.tokens:
            lemma = t.lemma.lower()
            full.setdefault((lemma, t.upos, feats_key(t.feats)), Counter())[t.form] += 1
            by_lemma_upos.setdefault((lemma, t.upos), Counter())[t.form] += 1
            by_lemma.setdefault(lemma, Counter())[t.form] += 1
    return FormLexicon(
        full={k: _rank_forms(c) for k, c in full.items()},
        by_lemma_upos={k: _rank_forms(c) for k, c in by_lemma_upos.items()},
        by_lemma={k: _rank_forms(c) for k, c in by_lemma.items()},
    )


@dataclass(frozen=True)
class NodeHandle:
    """Identity plus payload of the tree node a candidate form realizes."""

    node_id: int
    info: NodeInfo


class Scorer(ABC):
    """Log-probability of a candidate continuation; pure and read-only."""

    @abstractmethod
    def score_next(self, history: list[str], candidate_form: str,
                   candidate_node: NodeHandle) -> float: ...


class NGramScorer(Scorer):
    def __init__(self, model: NGramModel):
        self.model = model

    def score_next(self, history, candidate_form, candidate_node) -> float:
        return self.model.logprob(candidate_form, history)


class OracleScorer(Scorer):
    """0 for the continuation matching the next reference position
    (right node and right surface form), -1e9 for everything else."""

    WRONG = -1e9

    def __init__(self, reference: ShallowSentence):
        if reference.alignment is None or reference.reference_forms is None:
            raise ValueError("oracle scorer needs an aligned reference")
        self.alignment = reference.alignment
        self.forms = reference.reference_forms

    def score_next(self, history, candidate_form, candidate_node) -> float:
        pos = len(history)
        if self.alignment.get(candidate_node.node_id) == pos and candidate_form == self.forms[pos]:
            return 0.0
        return self.WRONG


def oracle_scorer(reference: ShallowSentence) -> OracleScorer:
    return OracleScorer(reference)


def ngram_scorer(model: NGramModel) -> NGramScorer:
    return NGramScorer(model)


@dataclass(frozen=True)
class Hypothesis:
    emitted: tuple[tuple[int, str], ...]
    remaining: frozenset[int]
    score: float

    def forms(self) -> list[str]:
        return [form for _, form in self.emitted]


@dataclass
class RealizationResult:
    tokens: list[str]
    node_order: list[int]
    score: float
    beam_size: int


def allowed_continuations(
    hyp: Hypothesis, sentence: ShallowSentence, lexicon: FormLexicon
) -> list[tuple[int, str]]:
    """Every (unused node, candidate form) pair, in the canonical order:
    ascending node id, then descending form count, then form string."""
    out = []
    for node_id in sorted(hyp.remaining):
        for form, _count in lexicon.candidates_for(sentence.tree.nodes[node_id]):
            out.append((node_id, form))
    return out


def beam_realize(
    sentence: ShallowSentence,
    scorer: Scorer,
    beam_size: int,
    lexicon: FormLexicon,
) -> RealizationResult:
    """Beam search of exactly n steps over the restricted continuations.

    Hypotheses are ranked by score with ties broken by generation order
    (beam rank, then the canonical continuation order), so decoding is
    fully deterministic.  Retention is slot-nested rather than plain
    top-k: each survivor takes the lowest free beam slot at or above
    its parent's slot, and a hypothesis with no free slot left is
    pruned.  The slots 1..s then hold exactly what a width-s search
    would keep (slot 1 is the greedy chain), so the best final score
    never decreases as the beam widens.  With a beam at least as large
    as the number of reachable hypotheses nothing is ever pruned and
    the search is exhaustive.
    """
    if beam_size < 1:
        raise ValueError("beam_size must be >= 1")
    tree = sentence.tree
    n = tree.size()
    if n < 1:
        raise ValueError("sentence has no nodes")
    cands = {node_id: lexicon.candidates_for(tree.nodes[node_id]) for node_id in tree.node_ids()}
    handles = {node_id: NodeHandle(node_id, tree.nodes[node_id]) for node_id in tree.node_ids()}

    beam = [Hypothesis(emitted=(), remaining=frozenset(tree.nodes), score=0.0)]
    slots = [1]
    for _step in range(n):
        entries: list[Hypothesis] = []
        parent_slots: list[int] = []
        for hyp, parent_slot in zip(beam, slots):
            history = hyp.forms()
            for node_id in sorted(hyp.remaining):
                for form, _count in cands[node_id]:
                    delta = scorer.score_next(history, form, handles[node_id])
                    entries.append(
                        Hypothesis(
                            emitted=hyp.emitted + ((node_id, form),),
                            remaining=hyp.remaining - {node_id},
                            score=hyp.score + delta,
                        )
                    )
                    parent_slots.append(parent_slot)
        order = sorted(range(len(entries)), key=lambda i: -entries[i].score)  # stable

        # union-find over slots: next_free[s] chases the lowest free slot >= s;
        # beam_size + 1 is the overflow sentinel meaning "prune"
        next_free = list(range(beam_size + 2))

        def _free_slot(slot: int) -> int:
            root = slot
            while next_free[root] != root:
                root = next_free[root]
            while next_free[slot] != root:
                next_free[slot], slot = root, next_free[slot]
            return root

        beam, slots = [], []
        for i in order:
            slot = _free_slot(parent_slots[i])
            if slot > beam_size:
                continue
            next_free[slot] = slot + 1
            beam.append(entries[i])
            slots.append(slot)

    # the kept list is in score order (generation order on ties), so the
    # first element is the returned argmax
    best = beam[0]
    return RealizationResult(
        tokens=best.forms(),
        node_order=[node_id for node_id, _ in best.emitted],
        score=best.score,
        beam_size=beam_size,
    )


@dataclass
class CoverageReport:
    """How often the aligned reference form is among a node's candidates."""

    covered_nodes: int
    total_nodes: int
    covered_sentences: int
    total_sentences: int

    def as_kv(self) -> str:
        return (
            f"covered_nodes={self.covered_nodes}\n"
            f"total_nodes={self.total_nodes}\n"
            f"covered_sentences={self.covered_sentences}\n"
            f"total_sentences={self.total_sentences}\n"
        )


def lexicon_coverage(dataset: list[ShallowSentence], lexicon: FormLexicon) -> CoverageReport:
    """Diagnostic for oracle decoding: a node is covered when its reference
    form appears among its lexicon candidates; a missed node caps the
    oracle realization below exact match."""
    covered_nodes = total_nodes = covered_sents = 0
    counted_sents = 0
    for s in dataset:
        if s.alignment is None or s.reference_forms is None:
            continue
        counted_sents += 1
        all_covered = True
        for node_id, pos in s.alignment.items():
            total_nodes += 1
            ref_form = s.reference_forms[pos]
            if any(form == ref_form for form, _ in lexicon.candidates_for(s.tree.nodes[node_id])):
                covered_nodes += 1
            else:
                all_covered = False
        if all_covered:
            covered_sents += 1
    return CoverageReport(covered_nodes, total_nodes, covered_sents, counted_sents)
