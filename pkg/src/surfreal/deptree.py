"""Dependency trees and the shallow transform.

The shallow transform turns a fully ordered dependency parse into the
inputs of the word-ordering-plus-inflection task: token ids are
replaced by a uniformly random permutation (so linear order carries no
signal), surface forms are dropped, and the original order is kept
aside as the aligned reference.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from .conllu_io import (
    EMPTY,
    ConlluError,
    UdSentence,
    UdToken,
    misc_get,
    misc_with,
    misc_without,
)

ALIGN_KEY = "original_id"


@dataclass(frozen=True)
class NodeInfo:
    """Payload of one tree node: everything except the surface form."""

    lemma: str
    upos: str
    feats: str
    deprel: str


@dataclass
class DepTree:
    """Rooted tree over node ids. ``children`` lists are sorted ascending
    so traversal order is a function of the ids alone."""

    root: int
    nodes: dict[int, NodeInfo]
    children: dict[int, list[int]] = field(default_factory=dict)

    def __post_init__(self):
        for kids in self.children.values():
            kids.sort()

    def kids(self, node_id: int) -> list[int]:
        return self.children.get(node_id, [])

    def size(self) -> int:
        return len(self.nodes)

    def node_ids(self) -> list[int]:
        return sorted(self.nodes)


@dataclass
class ShallowSentence:
    """A shuffled tree plus, when known, the reference realization.

    ``alignment`` maps a shuffled node id to the position (0-based) of
    its token in the reference; it is None for synthetic data where no
    reference order exists.
    """

    tree: DepTree
    reference_forms: tuple[str, ...] | None = None
    alignment: dict[int, int] | None = None


def build_tree(sentence: UdSentence) -> DepTree:
    nodes = {
        t.id: NodeInfo(lemma=t.lemma, upos=t.upos, feats=t.feats, deprel=t.deprel)
        for t in sentence.tokens
    }
    children: dict[int, list[int]] = {}
    root = None
    for t in sentence.tokens:
        if t.head == 0:
            root = t.id
        else:
            children.setdefault(t.head, []).append(t.id)
    if root is None:
        raise ConlluError("sentence has no root")
    return DepTree(root=root, nodes=nodes, children=children)


def shallow_transform(sentence: UdSentence, seed: int) -> ShallowSentence:
    """Build the shallow-task instance for one parsed sentence.

    Node ids are renamed by a seeded uniform permutation; the same seed
    always yields the same instance.  ``alignment[new_id]`` gives the
    0-based reference position of the token that became ``new_id``.
    """
    n = len(sentence.tokens)
    perm = list(range(1, n + 1))
    random.Random(seed).shuffle(perm)
    # token at original position i (id i+1) is renamed to perm[i]
    rename = {i + 1: perm[i] for i in range(n)}

    nodes = {}
    children: dict[int, list[int]] = {}
    root = None
    alignment = {}
    for i, t in enumerate(sentence.tokens):
        new_id = rename[t.id]
        nodes[new_id] = NodeInfo(lemma=t.lemma, upos=t.upos, feats=t.feats, deprel=t.deprel)
        alignment[new_id] = i
        if t.head == 0:
            root = new_id
        else:
            children.setdefault(rename[t.head], []).append(new_id)
    assert root is not None
    tree = DepTree(root=root, nodes=nodes, children=children)
    return ShallowSentence(
        tree=tree,
        reference_forms=tuple(t.form for t in sentence.tokens),
        alignment=alignment,
    )


def strip_alignment(shallow: ShallowSentence) -> ShallowSentence:
    """The same instance without reference order or forms, as a realizer sees it."""
    return ShallowSentence(tree=shallow.tree, reference_forms=None, alignment=None)


def shallow_to_conllu(shallow: ShallowSentence) -> UdSentence:
    """Encode a shallow instance as a CoNLL-U sentence.

    Rows are ordered by node id, forms are ``_``, and when an alignment
    is present each row carries ``original_id=<refpos+1>`` in MISC.
    """
    tree = shallow.tree
    parent = {}
    for head, kids in tree.children.items():
        for k in kids:
            parent[k] = head
    tokens = []
    for node_id in tree.node_ids():
        info = tree.nodes[node_id]
        misc = EMPTY
        if shallow.alignment is not None:
            misc = misc_with(EMPTY, ALIGN_KEY, str(shallow.alignment[node_id] + 1))
        tokens.append(
            UdToken(
                id=node_id,
                form=EMPTY,
                lemma=info.lemma,
                upos=info.upos,
                xpos=EMPTY,
                feats=info.feats,
                head=parent.get(node_id, 0),
                deprel=info.deprel,
                deps=EMPTY,
                misc=misc,
            )
        )
    return UdSentence(tokens=tokens)


def shallow_from_conllu(
    sentence: UdSentence, reference_forms: tuple[str, ...] | None = None
) -> ShallowSentence:
    """Decode a shallow instance; inverse of :func:`shallow_to_conllu`.

    Alignment is reconstructed from ``original_id`` MISC entries when
    every token has one, else left as None.
    """
    tree = build_tree(sentence)
    alignment = {}
    for t in sentence.tokens:
        value = misc_get(t.misc, ALIGN_KEY)
        if value is None:
            alignment = None
            break
        alignment[t.id] = int(value) - 1
    if alignment is not None:
        positions = sorted(alignment.values())
        if positions != list(range(len(sentence.tokens))):
            raise ConlluError("original_id values are not a permutation of 1..n")
    return ShallowSentence(tree=tree, reference_forms=reference_forms, alignment=alignment)


def strip_alignment_conllu(sentence: UdSentence) -> UdSentence:
    """Remove ``original_id`` MISC entries from an encoded instance."""
    tokens = [
        t if misc_get(t.misc, ALIGN_KEY) is None
        else replace(t, misc=misc_without(t.misc, ALIGN_KEY))
        for t in sentence.tokens
    ]
    return UdSentence(tokens=tokens, comments=list(sentence.comments),
                      ignored_lines=list(sentence.ignored_lines))
