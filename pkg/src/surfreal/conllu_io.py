"""Bit-exact reading and writing of CoNLL-U files.

CoNLL-U is the Universal Dependencies interchange format: one token per
line with 10 tab-separated columns, ``#`` comment lines, ``_`` for empty
fields, and a blank line terminating each sentence.  Multiword-token
range lines (id like ``2-3``) and empty-node lines (id like ``5.1``) are
not part of the syntactic tree; they are kept verbatim, anchored to
their position, so that serializing a parsed file reproduces it byte
for byte.

Only UTF-8 text with LF line endings is supported.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator

EMPTY = "_"

_RANGE_ID = re.compile(r"^\d+-\d+$")
_DECIMAL_ID = re.compile(r"^\d+\.\d+$")
_INT_ID = re.compile(r"^\d+$")


class ConlluError(ValueError):
    """Malformed CoNLL-U input (strict mode) or invalid sentence structure."""


@dataclass(frozen=True)
class UdToken:
    """One syntactic-word row. ``feats`` and ``misc`` are kept as raw
    column strings so they round-trip exactly; use :func:`parse_pairs`
    for a key=value view."""

    id: int
    form: str
    lemma: str
    upos: str
    xpos: str
    feats: str
    head: int
    deprel: str
    deps: str
    misc: str

    def to_line(self) -> str:
        return "\t".join(
            (
                str(self.id),
                self.form,
                self.lemma,
                self.upos,
                self.xpos,
                self.feats,
                str(self.head),
                self.deprel,
                self.deps,
                self.misc,
            )
        )


@dataclass
class UdSentence:
    """One sentence block.

    ``comments`` holds the leading ``#`` lines verbatim.  ``ignored_lines``
    holds range lines, empty-node lines, and any stray mid-block comment as
    ``(anchor, line)`` pairs, where the line is emitted immediately before
    the token at index ``anchor`` (or after all tokens if ``anchor`` equals
    the token count).
    """

    tokens: list[UdToken]
    comments: list[str] = field(default_factory=list)
    ignored_lines: list[tuple[int, str]] = field(default_factory=list)

    def forms(self) -> list[str]:
        return [t.form for t in self.tokens]

    def root_id(self) -> int:
        for t in self.tokens:
            if t.head == 0:
                return t.id
        raise ConlluError("sentence has no root")


def parse_pairs(column: str) -> list[tuple[str, str]]:
    """Split a FEATS/MISC column into (key, value) pairs, in file order.

    ``_`` yields no pairs; a part without ``=`` becomes (part, "").
    """
    if column == EMPTY or column == "":
        return []
    pairs = []
    for part in column.split("|"):
        key, sep, value = part.partition("=")
        pairs.append((key, value if sep else ""))
    return pairs


def format_pairs(pairs: Iterable[tuple[str, str]]) -> str:
    parts = [f"{k}={v}" if v else k for k, v in pairs]
    return "|".join(parts) if parts else EMPTY


def misc_get(misc: str, key: str) -> str | None:
    for k, v in parse_pairs(misc):
        if k == key:
            return v
    return None


def misc_with(misc: str, key: str, value: str) -> str:
    """Return ``misc`` with ``key=value`` set, replacing any existing key."""
    pairs = [(k, v) for k, v in parse_pairs(misc) if k != key]
    pairs.append((key, value))
    return format_pairs(pairs)


def misc_without(misc: str, key: str) -> str:
    pairs = [(k, v) for k, v in parse_pairs(misc) if k != key]
    return format_pairs(pairs)


def iter_blocks(lines: Iterable[str]) -> Iterator[list[str]]:
    """Group an iterable of lines (no trailing newlines) into sentence blocks."""
    block: list[str] = []
    for line in lines:
        if line.strip() == "":
            if block:
                yield block
                block = []
        else:
            block.append(line)
    if block:
        yield block


def parse_block(lines: list[str]) -> UdSentence:
    """Parse one sentence block; raises ConlluError on any violation."""
    comments: list[str] = []
    ignored: list[tuple[int, str]] = []
    tokens: list[UdToken] = []
    for line in lines:
        if line.startswith("#"):
            if tokens:
                ignored.append((len(tokens), line))
            else:
                comments.append(line)
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise ConlluError(f"expected 10 columns, got {len(cols)}: {line!r}")
        tok_id = cols[0]
        if _RANGE_ID.match(tok_id) or _DECIMAL_ID.match(tok_id):
            ignored.append((len(tokens), line))
            continue
        if not _INT_ID.match(tok_id):
            raise ConlluError(f"non-integer token id {tok_id!r}")
        if not _INT_ID.match(cols[6]):
            raise ConlluError(f"non-integer head {cols[6]!r} for token {tok_id}")
        tokens.append(
            UdToken(
                id=int(tok_id),
                form=cols[1],
                lemma=cols[2],
                upos=cols[3],
                xpos=cols[4],
                feats=cols[5],
                head=int(cols[6]),
                deprel=cols[7],
                deps=cols[8],
                misc=cols[9],
            )
        )
    sentence = UdSentence(tokens=tokens, comments=comments, ignored_lines=ignored)
    validate_sentence(sentence)
    return sentence


def validate_sentence(sentence: UdSentence) -> None:
    """Check the tree invariants: ids are 1..n in order, single root,
    heads in range, no self-loops, fully connected (acyclic)."""
    tokens = sentence.tokens
    n = len(tokens)
    if n == 0:
        raise ConlluError("sentence has no token rows")
    for i, t in enumerate(tokens, start=1):
        if t.id != i:
            raise ConlluError(f"token ids must be 1..{n} in order, found {t.id} at row {i}")
        if t.head == t.id:
            raise ConlluError(f"token {t.id} has itself as head")
        if t.head > n:
            raise ConlluError(f"token {t.id} has dangling head {t.head}")
    roots = [t.id for t in tokens if t.head == 0]
    if len(roots) != 1:
        raise ConlluError(f"expected exactly one root, found {len(roots)}")
    # reachability from the root rules out cycles among non-root nodes
    children: dict[int, list[int]] = {}
    for t in tokens:
        children.setdefault(t.head, []).append(t.id)
    seen = set()
    stack = [roots[0]]
    while stack:
        node = stack.pop()
        seen.add(node)
        stack.extend(children.get(node, ()))
    if len(seen) != n:
        raise ConlluError("tree contains a cycle (not all tokens reachable from root)")


def parse_conllu(text: str, strict: bool = True) -> list[UdSentence]:
    """Parse CoNLL-U text into sentences.

    In strict mode any malformed block raises :class:`ConlluError`; in
    lenient mode malformed blocks are silently skipped (use
    :func:`parse_conllu_lenient` to get the skip count).
    """
    if strict:
        return [parse_block(block) for block in iter_blocks(text.split("\n"))]
    return parse_conllu_lenient(text)[0]


def parse_conllu_lenient(text: str) -> tuple[list[UdSentence], int]:
    """Parse leniently; returns (sentences, number of skipped blocks)."""
    sentences = []
    skipped = 0
    for block in iter_blocks(text.split("\n")):
        try:
            sentences.append(parse_block(block))
        except ConlluError:
            skipped += 1
    return sentences, skipped


def sentence_lines(sentence: UdSentence) -> list[str]:
    lines = list(sentence.comments)
    by_anchor: dict[int, list[str]] = {}
    for anchor, line in sentence.ignored_lines:
        by_anchor.setdefault(anchor, []).append(line)
    for i in range(len(sentence.tokens) + 1):
        lines.extend(by_anchor.get(i, ()))
        if i < len(sentence.tokens):
            lines.append(sentence.tokens[i].to_line())
    return lines


def serialize_conllu(sentences: Iterable[UdSentence]) -> str:
    """Serialize sentences; each block ends with one blank line.

    ``serialize_conllu(parse_conllu(text))`` is byte-identical for files
    already in this canonical shape (LF endings, single blank separators).
    """
    out: list[str] = []
    for sentence in sentences:
        out.extend(sentence_lines(sentence))
        out.append("")
    if not out:
        return ""
    return "\n".join(out) + "\n"


def read_conllu_file(path, strict: bool = True) -> list[UdSentence]:
    with open(path, encoding="utf-8") as fh:
        return parse_conllu(fh.read(), strict=strict)


def write_conllu_file(path, sentences: Iterable[UdSentence]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_conllu(sentences))


def copy_sentence(sentence: UdSentence, tokens: list[UdToken] | None = None) -> UdSentence:
    """Shallow copy, optionally with a replacement token list."""
    return UdSentence(
        tokens=list(sentence.tokens) if tokens is None else tokens,
        comments=list(sentence.comments),
        ignored_lines=list(sentence.ignored_lines),
    )


def replace_token(token: UdToken, **changes) -> UdToken:
    return replace(token, **changes)
