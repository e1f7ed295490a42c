"""Deterministic toy English-like treebank generator for tests.

Produces valid UD-style sentences with genuine (tiny) morphology:
number agreement on nouns/verbs, am/'m clitic alternation on "be",
capitalized sentence-initial determiners, adjectives, prepositional
phrases, and arbitrarily long coordination chains.  Everything is
driven by one seeded RNG, so corpora are reproducible.
"""

from __future__ import annotations

import random

from surfreal.conllu_io import UdSentence, UdToken, validate_sentence

NOUNS = [
    ("story", "stories"), ("cat", "cats"), ("dog", "dogs"), ("house", "houses"),
    ("report", "reports"), ("idea", "ideas"), ("river", "rivers"), ("friend", "friends"),
    ("garden", "gardens"), ("letter", "letters"), ("window", "windows"),
    ("problem", "problems"), ("song", "songs"), ("road", "roads"), ("market", "markets"),
    ("teacher", "teachers"), ("student", "students"), ("village", "villages"),
    ("machine", "machines"), ("answer", "answers"), ("ship", "ships"), ("stone", "stones"),
    ("forest", "forests"), ("meeting", "meetings"), ("signal", "signals"),
]

# lemma -> (3sg present, plural present, past)
VERBS = [
    ("come", "comes", "come", "came"), ("see", "sees", "see", "saw"),
    ("like", "likes", "like", "liked"), ("find", "finds", "find", "found"),
    ("read", "reads", "read", "read"), ("write", "writes", "write", "wrote"),
    ("build", "builds", "build", "built"), ("hear", "hears", "hear", "heard"),
    ("make", "makes", "make", "made"), ("move", "moves", "move", "moved"),
    ("watch", "watches", "watch", "watched"), ("follow", "follows", "follow", "followed"),
]

ADJS = ["happy", "big", "red", "quiet", "bright", "old", "new", "small", "warm", "heavy"]
PREPS = ["from", "in", "on", "near", "with"]
PROPNS = ["AP", "Mary", "John", "Paris", "Rex"]

FEATS_NOUN = {"Sing": "Number=Sing", "Plur": "Number=Plur"}
FEATS_V3SG = "Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin"
FEATS_VPL = "Mood=Ind|Number=Plur|Person=3|Tense=Pres|VerbForm=Fin"
FEATS_VPAST = "Mood=Ind|Tense=Past|VerbForm=Fin"
FEATS_BE = {
    "am": "Mood=Ind|Number=Sing|Person=1|Tense=Pres|VerbForm=Fin",
    "'m": "Mood=Ind|Number=Sing|Person=1|Tense=Pres|VerbForm=Fin",
    "is": "Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin",
    "are": "Mood=Ind|Number=Plur|Person=3|Tense=Pres|VerbForm=Fin",
    "were": "Mood=Ind|Number=Plur|Person=3|Tense=Past|VerbForm=Fin",
}
PRONS = {
    "I": ("I", "Case=Nom|Number=Sing|Person=1|PronType=Prs", ("am", "'m")),
    "He": ("he", "Case=Nom|Gender=Masc|Number=Sing|Person=3|PronType=Prs", ("is",)),
    "They": ("they", "Case=Nom|Number=Plur|Person=3|PronType=Prs", ("are", "were")),
}


def tok(i: int, form: str, lemma: str, upos: str, feats: str, head: int, deprel: str) -> UdToken:
    return UdToken(id=i, form=form, lemma=lemma, upos=upos, xpos="_", feats=feats,
                   head=head, deprel=deprel, deps="_", misc="_")


def _sentence(tokens: list[UdToken]) -> UdSentence:
    s = UdSentence(tokens=tokens)
    validate_sentence(s)
    return s


class ToyLang:
    def __init__(self, seed: int):
        self.rng = random.Random(seed)

    # vocabulary picks ------------------------------------------------------

    def noun(self, number: str) -> tuple[str, str, str]:
        sing, plur = self.rng.choice(NOUNS)
        return (plur if number == "Plur" else sing, sing, FEATS_NOUN[number])

    def verb(self, number: str, tense: str) -> tuple[str, str, str]:
        lemma, v3, vpl, past = self.rng.choice(VERBS)
        if tense == "Past":
            return past, lemma, FEATS_VPAST
        if number == "Plur":
            return vpl, lemma, FEATS_VPL
        return v3, lemma, FEATS_V3SG

    def _nv(self, number: str | None = None, tense: str | None = None):
        number = number or self.rng.choice(("Sing", "Plur"))
        tense = tense or self.rng.choice(("Pres", "Past"))
        return self.noun(number), self.verb(number, tense)

    # templates -------------------------------------------------------------

    def short_iv(self) -> UdSentence:
        """The N V ."""
        (nf, nl, nfe), (vf, vl, vfe) = self._nv()
        return _sentence([
            tok(1, "The", "the", "DET", "Definite=Def|PronType=Art", 2, "det"),
            tok(2, nf, nl, "NOUN", nfe, 3, "nsubj"),
            tok(3, vf, vl, "VERB", vfe, 0, "root"),
            tok(4, ".", ".", "PUNCT", "_", 3, "punct"),
        ])

    def short_tv(self) -> UdSentence:
        """The N V a N ."""
        (nf, nl, nfe), (vf, vl, vfe) = self._nv()
        of, ol, ofe = self.noun("Sing")
        return _sentence([
            tok(1, "The", "the", "DET", "Definite=Def|PronType=Art", 2, "det"),
            tok(2, nf, nl, "NOUN", nfe, 3, "nsubj"),
            tok(3, vf, vl, "VERB", vfe, 0, "root"),
            tok(4, "a", "a", "DET", "Definite=Ind|PronType=Art", 5, "det"),
            tok(5, of, ol, "NOUN", ofe, 3, "obj"),
            tok(6, ".", ".", "PUNCT", "_", 3, "punct"),
        ])

    def short_pron_tv(self) -> UdSentence:
        """They V the N ."""
        vf, vl, vfe = self.verb("Plur", self.rng.choice(("Pres", "Past")))
        of, ol, ofe = self.noun(self.rng.choice(("Sing", "Plur")))
        return _sentence([
            tok(1, "They", "they", "PRON", PRONS["They"][1], 2, "nsubj"),
            tok(2, vf, vl, "VERB", vfe, 0, "root"),
            tok(3, "the", "the", "DET", "Definite=Def|PronType=Art", 4, "det"),
            tok(4, of, ol, "NOUN", ofe, 2, "obj"),
            tok(5, ".", ".", "PUNCT", "_", 2, "punct"),
        ])

    def copula(self, pron: str | None = None, be_form: str | None = None) -> UdSentence:
        """I am/'m ADJ . (and He/They variants)"""
        pron = pron or self.rng.choice(list(PRONS))
        lemma, feats, be_forms = PRONS[pron]
        be = be_form or self.rng.choice(be_forms)
        adj = self.rng.choice(ADJS)
        return _sentence([
            tok(1, pron, lemma, "PRON", feats, 3, "nsubj"),
            tok(2, be, "be", "AUX", FEATS_BE[be], 3, "cop"),
            tok(3, adj, adj, "ADJ", "Degree=Pos", 0, "root"),
            tok(4, ".", ".", "PUNCT", "_", 3, "punct"),
        ])

    def intrans_pp(self) -> UdSentence:
        """The N V P the N ."""
        (nf, nl, nfe), (vf, vl, vfe) = self._nv()
        prep = self.rng.choice(PREPS)
        of, ol, ofe = self.noun(self.rng.choice(("Sing", "Plur")))
        return _sentence([
            tok(1, "The", "the", "DET", "Definite=Def|PronType=Art", 2, "det"),
            tok(2, nf, nl, "NOUN", nfe, 3, "nsubj"),
            tok(3, vf, vl, "VERB", vfe, 0, "root"),
            tok(4, prep, prep, "ADP", "_", 6, "case"),
            tok(5, "the", "the", "DET", "Definite=Def|PronType=Art", 6, "det"),
            tok(6, of, ol, "NOUN", ofe, 3, "obl"),
            tok(7, ".", ".", "PUNCT", "_", 3, "punct"),
        ])

    def adj_tv(self) -> UdSentence:
        """The ADJ N V a ADJ N ."""
        (nf, nl, nfe), (vf, vl, vfe) = self._nv()
        a1, a2 = self.rng.choice(ADJS), self.rng.choice(ADJS)
        of, ol, ofe = self.noun("Sing")
        return _sentence([
            tok(1, "The", "the", "DET", "Definite=Def|PronType=Art", 3, "det"),
            tok(2, a1, a1, "ADJ", "Degree=Pos", 3, "amod"),
            tok(3, nf, nl, "NOUN", nfe, 4, "nsubj"),
            tok(4, vf, vl, "VERB", vfe, 0, "root"),
            tok(5, "a", "a", "DET", "Definite=Ind|PronType=Art", 7, "det"),
            tok(6, a2, a2, "ADJ", "Degree=Pos", 7, "amod"),
            tok(7, of, ol, "NOUN", ofe, 4, "obj"),
            tok(8, ".", ".", "PUNCT", "_", 4, "punct"),
        ])

    def attribution(self) -> UdSentence:
        """This N V from the PROPN :"""
        (nf, nl, nfe), (vf, vl, vfe) = self._nv(number="Sing")
        propn = self.rng.choice(PROPNS)
        return _sentence([
            tok(1, "This", "this", "DET", "Number=Sing|PronType=Dem", 2, "det"),
            tok(2, nf, nl, "NOUN", nfe, 3, "nsubj"),
            tok(3, vf, vl, "VERB", vfe, 0, "root"),
            tok(4, "from", "from", "ADP", "_", 6, "case"),
            tok(5, "the", "the", "DET", "Definite=Def|PronType=Art", 6, "det"),
            tok(6, propn, propn, "PROPN", "Number=Sing", 3, "obl"),
            tok(7, ":", ":", "PUNCT", "_", 3, "punct"),
        ])

    def chain(self, clauses: int) -> UdSentence:
        """The N V and the N V and ... . (coordination, arbitrary length)"""
        tokens: list[UdToken] = []
        root = 3  # position of the first verb
        for c in range(clauses):
            base = len(tokens)
            (nf, nl, nfe), (vf, vl, vfe) = self._nv()
            if c == 0:
                tokens.append(tok(1, "The", "the", "DET", "Definite=Def|PronType=Art", 2, "det"))
                tokens.append(tok(2, nf, nl, "NOUN", nfe, 3, "nsubj"))
                tokens.append(tok(3, vf, vl, "VERB", vfe, 0, "root"))
            else:
                verb_pos = base + 4
                tokens.append(tok(base + 1, "and", "and", "CCONJ", "_", verb_pos, "cc"))
                tokens.append(tok(base + 2, "the", "the", "DET", "Definite=Def|PronType=Art",
                                  base + 3, "det"))
                tokens.append(tok(base + 3, nf, nl, "NOUN", nfe, verb_pos, "nsubj"))
                tokens.append(tok(base + 4, vf, vl, "VERB", vfe, root, "conj"))
        tokens.append(tok(len(tokens) + 1, ".", ".", "PUNCT", "_", root, "punct"))
        return _sentence(tokens)

    # corpora ----------------------------------------------------------------

    SHORT = ("short_iv", "short_tv", "short_pron_tv", "copula")
    MEDIUM = ("intrans_pp", "adj_tv", "attribution", "short_tv", "copula")

    def sentence(self, kind: str = "medium") -> UdSentence:
        if kind == "short":
            return getattr(self, self.rng.choice(self.SHORT))()
        if kind == "medium":
            return getattr(self, self.rng.choice(self.MEDIUM))()
        if kind == "long":
            return self.chain(self.rng.randint(3, 8))
        if kind == "xlong":
            return self.chain(self.rng.randint(15, 18))
        if kind == "mixed":
            pick = self.rng.random()
            if pick < 0.55:
                return self.sentence("medium")
            if pick < 0.8:
                return self.sentence("short")
            if pick < 0.95:
                return self.sentence("long")
            return self.sentence("xlong")
        raise ValueError(f"unknown kind {kind!r}")

    def corpus(self, n: int, kind: str = "medium") -> list[UdSentence]:
        return [self.sentence(kind) for _ in range(n)]

    def corpus_with_oov(self, n: int, oov_rate: float, kind: str = "medium") -> list[UdSentence]:
        """Like corpus(), but some sentences get every content word swapped
        for a nonce, dropping them below any sane vocabulary-overlap bar."""
        out = []
        for i in range(n):
            s = self.sentence(kind)
            if self.rng.random() < oov_rate:
                for j, t in enumerate(s.tokens):
                    if t.upos in ("NOUN", "VERB", "ADJ", "PROPN"):
                        nonce = f"zq{i}x{j}"
                        s.tokens[j] = tok(t.id, nonce, nonce, t.upos, t.feats, t.head, t.deprel)
            out.append(s)
        return out
