"""Turn shallow trees into flat token sequences for sequence models.

Linearization is a depth-first pre-order walk from the root; the visit
order of each node's children is drawn uniformly at random per node, so
re-linearizing the same tree with different seeds yields different but
equally valid sequences.  Optional scoping brackets mark subtree
boundaries, and an optional form list appends the inflection candidates
for lemmas that have more than one.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .deptree import DepTree, ShallowSentence

OPEN = "("
CLOSE = ")"
FORMS_SEP = "<forms>"
SEGMENT_EQ = "="
SEGMENT_OR = "|"

# collision guard: these appear as literal tokens in source sequences,
# so literal parentheses in text are rewritten on ingestion
LRB = "-lrb-"
RRB = "-rrb-"


def escape_token(token: str) -> str:
    if token == "(":
        return LRB
    if token == ")":
        return RRB
    return token


@dataclass
class LinearSeq:
    """A linearized tree: ``tokens`` is the flat sequence, ``node_of``
    maps positions of lemma tokens back to tree node ids (markers and
    form-list tokens have no entry)."""

    tokens: list[str]
    node_of: dict[int, int] = field(default_factory=dict)

    def lemma_positions(self) -> list[int]:
        return sorted(self.node_of)

    def node_order(self) -> list[int]:
        """Node ids in traversal order."""
        return [self.node_of[p] for p in self.lemma_positions()]

    def text(self) -> str:
        return " ".join(self.tokens)


def linearize(s: ShallowSentence, rng_seed: int, scoped: bool = False) -> LinearSeq:
    """Emit the tree as a token sequence, deterministic for a fixed seed.

    Each node contributes its (escaped) lemma before any of its children;
    with ``scoped`` on, a node with children wraps all of its child
    subtrees in a single bracket pair.
    """
    rng = random.Random(rng_seed)
    tree = s.tree
    tokens: list[str] = []
    node_of: dict[int, int] = {}

    def walk(node_id: int) -> None:
        node_of[len(tokens)] = node_id
        tokens.append(escape_token(tree.nodes[node_id].lemma))
        kids = list(tree.kids(node_id))
        if not kids:
            return
        rng.shuffle(kids)
        if scoped:
            tokens.append(OPEN)
        for kid in kids:
            walk(kid)
        if scoped:
            tokens.append(CLOSE)

    walk(tree.root)
    return LinearSeq(tokens=tokens, node_of=node_of)


def append_form_list(seq: LinearSeq, lexicon, tree: DepTree) -> LinearSeq:
    """Append inflection candidates for each relevant node, in traversal order.

    A node is relevant when its (lemma, upos) pair has at least two
    distinct observed forms in the lexicon.  Each relevant node adds one
    segment ``lemma = form | form | ...`` after a reserved separator;
    with no relevant nodes the sequence is returned unchanged.
    """
    segments: list[list[str]] = []
    for node_id in seq.node_order():
        info = tree.nodes[node_id]
        if not lexicon.is_relevant(info.lemma, info.upos):
            continue
        forms = lexicon.forms_for_lemma_upos(info.lemma, info.upos)
        segment = [escape_token(info.lemma), SEGMENT_EQ]
        for i, (form, _count) in enumerate(forms):
            if i:
                segment.append(SEGMENT_OR)
            segment.append(escape_token(form))
        segments.append(segment)
    if not segments:
        return seq
    tokens = list(seq.tokens)
    tokens.append(FORMS_SEP)
    for segment in segments:
        tokens.extend(segment)
    return LinearSeq(tokens=tokens, node_of=dict(seq.node_of))


def emit_training_pairs(
    dataset: list[ShallowSentence],
    k_linearizations: int,
    scoped: bool,
    with_forms: bool,
    lexicon,
    rng_seed: int,
) -> list[tuple[str, str]]:
    """Emit k source/target lines per sentence, interleaved by epoch block.

    Block e holds one linearization of every sentence, so a trainer
    consuming the file in order sees each sentence once per block; the
    seed for sentence i in block e is ``rng_seed + e*len(dataset) + i``,
    distinct across all pairs.  Targets are the reference forms and never
    vary between blocks.
    """
    if k_linearizations < 1:
        raise ValueError("k_linearizations must be >= 1")
    targets = []
    for s in dataset:
        if s.reference_forms is None:
            raise ValueError("training pairs need reference forms for every sentence")
        targets.append(" ".join(escape_token(f) for f in s.reference_forms))
    pairs = []
    for e in range(k_linearizations):
        for i, s in enumerate(dataset):
            seq = linearize(s, rng_seed + e * len(dataset) + i, scoped=scoped)
            if with_forms:
                seq = append_form_list(seq, lexicon, s.tree)
            pairs.append((seq.text(), targets[i]))
    return pairs


def write_pair_files(pairs: list[tuple[str, str]], src_path, tgt_path) -> None:
    """Write parallel .src/.tgt files, one example per line."""
    with open(src_path, "w", encoding="utf-8") as src, open(tgt_path, "w", encoding="utf-8") as tgt:
        for source, target in pairs:
            src.write(source + "\n")
            tgt.write(target + "\n")
