"""Interpolated n-gram language model used as the reference scorer.

Jelinek-Mercer interpolation: P_k = lam * ML_k + (1 - lam) * P_{k-1},
grounded in a uniform distribution over the vocabulary plus a reserved
unknown token.  A context never observed at order k contributes no
maximum-likelihood mass, so the query passes through to order k-1
unweighted; this keeps every conditional distribution normalized.

Models persist as sorted plain-text count files and reload to
bit-identical scores.
"""

from __future__ import annotations

import math
from collections import Counter

BOS = "<s>"
UNK = "<unk>"
_HEADER_TAG = "ngram-counts-v1"


class NGramModel:
    def __init__(self, order: int, lam: float, counts: dict[int, dict[tuple, Counter]],
                 vocab: set[str]):
        if order < 1:
            raise ValueError("order must be >= 1")
        if not 0 < lam < 1:
            raise ValueError("lambda must be strictly between 0 and 1")
        self.order = order
        self.lam = lam
        self.counts = counts
        self.vocab = vocab
        self.totals = {
            k: {ctx: sum(c.values()) for ctx, c in by_ctx.items()}
            for k, by_ctx in counts.items()
        }
        self._base = 1.0 / (len(vocab) + 1)  # vocab plus the unknown token
        self._memo: dict[tuple, float] = {}

    # queries ---------------------------------------------------------------

    def context_key(self, history: tuple[str, ...] | list[str]) -> tuple[str, ...]:
        """Last order-1 history tokens, left-padded with begin markers."""
        need = self.order - 1
        hist = tuple(history)[-need:] if need else ()
        return (BOS,) * (need - len(hist)) + hist

    def prob(self, token: str, history: tuple[str, ...] | list[str]) -> float:
        tok = token if token in self.vocab else UNK
        return self._p(self.order, tok, self.context_key(history))

    def _p(self, k: int, token: str, ctx: tuple[str, ...]) -> float:
        if k == 0:
            return self._base
        total = self.totals.get(k, {}).get(ctx, 0)
        lower = self._p(k - 1, token, ctx[1:])
        if total == 0:
            # nothing observed after this context at order k: defer entirely
            return lower
        ml = self.counts[k][ctx][token] / total
        return self.lam * ml + (1.0 - self.lam) * lower

    def logprob(self, token: str, history: tuple[str, ...] | list[str]) -> float:
        key = (token, self.context_key(history))
        cached = self._memo.get(key)
        if cached is None:
            cached = math.log(self.prob(token, history))
            self._memo[key] = cached
        return cached

    def __getstate__(self):
        state = dict(self.__dict__)
        state["_memo"] = {}
        return state

    # persistence -----------------------------------------------------------

    def save(self, path) -> None:
        lines = [f"{_HEADER_TAG}\torder={self.order}\tlambda={self.lam!r}\tvocab={len(self.vocab)}"]
        for k in sorted(self.counts):
            for ctx in sorted(self.counts[k]):
                for token in sorted(self.counts[k][ctx]):
                    lines.append(f"{k}\t{' '.join(ctx)}\t{token}\t{self.counts[k][ctx][token]}")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")

    @classmethod
    def load(cls, path) -> "NGramModel":
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().rstrip("\n").split("\t")
            if len(header) != 4 or header[0] != _HEADER_TAG:
                raise ValueError(f"not an n-gram count file: {path}")
            order = int(header[1].removeprefix("order="))
            lam = float(header[2].removeprefix("lambda="))
            vocab_size = int(header[3].removeprefix("vocab="))
            counts: dict[int, dict[tuple, Counter]] = {}
            for line in fh:
                k_str, ctx_str, token, count = line.rstrip("\n").split("\t")
                ctx = tuple(ctx_str.split(" ")) if ctx_str else ()
                counts.setdefault(int(k_str), {}).setdefault(ctx, Counter())[token] = int(count)
        vocab = {token for ctx_counts in counts.get(1, {}).values() for token in ctx_counts}
        if len(vocab) != vocab_size:
            raise ValueError(f"vocab size mismatch: header {vocab_size}, counted {len(vocab)}")
        return cls(order=order, lam=lam, counts=counts, vocab=vocab)


def train_ngram(references: list[list[str]], order: int = 3, lam: float = 0.7) -> NGramModel:
    """Count all k-grams (k <= order) ending at real-token positions.

    Sentences are left-padded with order-1 begin markers; no end marker
    is used.  Tokens may not contain whitespace or collide with the
    reserved markers.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if not 0 < lam < 1:
        raise ValueError("lambda must be strictly between 0 and 1")
    if not references:
        raise ValueError("empty training corpus")
    vocab: set[str] = set()
    counts: dict[int, dict[tuple, Counter]] = {k: {} for k in range(1, order + 1)}
    n_tokens = 0
    pad = (BOS,) * (order - 1)
    for sent in references:
        for token in sent:
            if token in (BOS, UNK):
                raise ValueError(f"reserved token {token!r} in training data")
            if token == "" or any(ch.isspace() for ch in token):
                raise ValueError(f"token {token!r} is empty or contains whitespace")
        padded = pad + tuple(sent)
        for i in range(order - 1, len(padded)):
            token = padded[i]
            vocab.add(token)
            n_tokens += 1
            for k in range(1, order + 1):
                ctx = padded[i - k + 1 : i]
                counts[k].setdefault(ctx, Counter())[token] += 1
    if n_tokens == 0:
        raise ValueError("empty training corpus")
    return NGramModel(order=order, lam=lam, counts=counts, vocab=vocab)
