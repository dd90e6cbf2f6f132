"""Tokenization, coarse POS tagging, candidate phrase extraction, and
corpus-wide collocation statistics.

Tagging is pluggable: the bundled RuleTagger is deterministic (closed-class
lexicon, suffix heuristics, capitalization), and load_pretagged() adapts
output from any external tagger onto the same coarse alphabet.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Iterable, Iterator, Protocol, Sequence

NOUN = "NOUN"
PROPER_NOUN = "PROPER_NOUN"
ADJECTIVE = "ADJECTIVE"
OTHER = "OTHER"
TAGS = frozenset({NOUN, PROPER_NOUN, ADJECTIVE, OTHER})

# chi-square(df=1) critical value for p = 0.001
CHI2_CRITICAL_P001 = 10.8276


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    position: int
    sentence: int


@dataclass(frozen=True)
class TaggedToken:
    surface: str
    normalized: str
    tag: str
    position: int
    sentence: int


@dataclass
class PhraseStat:
    """Occurrence record for one candidate phrase within one document."""

    count: int
    first_position: int
    surfaces: Counter

    def add(self, surface: str, position: int) -> None:
        self.count += 1
        self.surfaces[surface] += 1
        if position < self.first_position:
            self.first_position = position


@dataclass(frozen=True)
class ContingencyTable:
    """Observed 2x2 counts for a bigram (w1, w2).

    n11 counts (w1, w2) adjacencies, n12 counts w1 followed by anything
    else, n21 anything else followed by w2, n22 the rest.
    """

    n11: int
    n12: int
    n21: int
    n22: int

    def __post_init__(self) -> None:
        if min(self.n11, self.n12, self.n21, self.n22) < 0:
            raise ValueError("contingency counts must be nonnegative")

    @property
    def total(self) -> int:
        return self.n11 + self.n12 + self.n21 + self.n22

    def expected(self) -> tuple[float, float, float, float]:
        r1 = self.n11 + self.n12
        r2 = self.n21 + self.n22
        c1 = self.n11 + self.n21
        c2 = self.n12 + self.n22
        t = self.total
        return (r1 * c1 / t, r1 * c2 / t, r2 * c1 / t, r2 * c2 / t)


def assoc_score(table: ContingencyTable) -> float:
    """G-squared likelihood ratio statistic, natural log, 0*log(0) := 0."""
    if table.total <= 0:
        raise ValueError("empty contingency table")
    observed = (table.n11, table.n12, table.n21, table.n22)
    acc = 0.0
    for n, m in zip(observed, table.expected()):
        if n > 0:
            acc += n * math.log(n / m)
    return 2.0 * acc


@dataclass
class CollocationStats:
    """Corpus-wide bigram association scores and the significant subset."""

    tables: dict[str, ContingencyTable]
    scores: dict[str, float]
    significant: frozenset[str]


# Tokenizer: abbreviations with internal periods survive as single tokens
# and do not end the sentence; bare ./!/? runs do.
_TOKEN_RE = re.compile(
    r"(?P<abbr>(?:\w\.){2,}\w?)"
    r"|(?P<word>\w+(?:[-'’/.]\w+)*)"
    r"|(?P<term>[.!?]+)"
)


def tokenize(text: str) -> list[Token]:
    """Split text into word tokens, dropping punctuation.

    Sentence indices are recorded on each token; a sentence only advances
    after it has produced at least one token, so leading or repeated
    terminators cannot create empty sentences.
    """
    tokens: list[Token] = []
    sentence = 0
    emitted_in_sentence = False
    for m in _TOKEN_RE.finditer(text):
        if m.lastgroup == "term":
            if emitted_in_sentence:
                sentence += 1
                emitted_in_sentence = False
            continue
        surface = m.group()
        tokens.append(Token(
            surface=surface,
            normalized=surface.lower(),
            position=len(tokens),
            sentence=sentence,
        ))
        emitted_in_sentence = True
    return tokens


class Tagger(Protocol):
    def tag(self, tokens: Sequence[Token]) -> list[TaggedToken]: ...


_CLOSED_CLASS = frozenset("""
a an the this that these those each every some any no all both either neither
such other another same own more most few several much many
i you he she it we they me him her us them my your his its our their
mine yours hers ours theirs myself yourself himself herself itself ourselves
themselves who whom whose which what
of in on at by for with from to into onto over under between among through
during before after above below up down out off about against toward towards
upon within without across behind beyond near per via
and or but nor so yet because although though while if unless until since
when whenever where wherever as than whether
is are was were be been being am do does did done doing have has had having
will would shall should can could may might must
not very too also just only even still then there here now often however
thus moreover therefore
""".split())

DEFAULT_STOPWORDS = _CLOSED_CLASS

_ADJ_LEXICON = frozenset("""
latent new old large small big novel deep sparse dense high low common rare
strong weak simple complex random early late good bad fast slow long short
free full empty main key major minor broad narrow rich poor fine coarse
smooth rough modern recent ancient hot cold young
""".split())

_ADJ_SUFFIXES = ("ical", "ous", "ive", "ary", "able", "ible", "ful", "less",
                 "ish", "ic", "al")

# common nouns the suffix rules would otherwise misread as adjectives
_NOUN_OVERRIDES = frozenset("""
topic topics music logic magic critic critics traffic republic fabric
metric metrics clinic signal signals interval intervals journal journals
material materials crystal crystals metal metals animal animals trial
trials goal goals capital hospital proposal proposals summary boundary
library dictionary vocabulary variable table tables cable arrival approval
removal survival potential
""".split())

_DIGITS_RE = re.compile(r"[\d.,/\-]+")


class RuleTagger:
    """Deterministic coarse tagger.

    Precedence: closed-class words and numbers are OTHER; mixed
    digit-letter tokens, internal capitals, all-caps, and capitalized
    non-sentence-initial tokens are PROPER_NOUN; an adjective lexicon and
    suffix list mark ADJECTIVE; everything else defaults to NOUN.
    """

    def __init__(self, closed_class: frozenset[str] = _CLOSED_CLASS,
                 adjectives: frozenset[str] = _ADJ_LEXICON,
                 noun_overrides: frozenset[str] = _NOUN_OVERRIDES):
        self.closed_class = closed_class
        self.adjectives = adjectives
        self.noun_overrides = noun_overrides

    def tag(self, tokens: Sequence[Token]) -> list[TaggedToken]:
        out = []
        prev_sentence = -1
        for tok in tokens:
            sentence_initial = tok.sentence != prev_sentence
            prev_sentence = tok.sentence
            out.append(TaggedToken(
                surface=tok.surface,
                normalized=tok.normalized,
                tag=self._tag_one(tok, sentence_initial),
                position=tok.position,
                sentence=tok.sentence,
            ))
        return out

    def _tag_one(self, tok: Token, sentence_initial: bool) -> str:
        norm, surface = tok.normalized, tok.surface
        if norm in self.closed_class:
            return OTHER
        if _DIGITS_RE.fullmatch(surface):
            return OTHER
        has_alpha = any(c.isalpha() for c in surface)
        if has_alpha and any(c.isdigit() for c in surface):
            return PROPER_NOUN
        if any(c.isupper() for c in surface[1:]):
            return PROPER_NOUN
        if len(surface) >= 2 and surface.isupper():
            return PROPER_NOUN
        if surface[:1].isupper() and not sentence_initial:
            return PROPER_NOUN
        if norm in self.noun_overrides:
            return NOUN
        if norm in self.adjectives:
            return ADJECTIVE
        if len(norm) > 4 and norm.endswith(_ADJ_SUFFIXES):
            return ADJECTIVE
        return NOUN


_DEFAULT_TAGGER = RuleTagger()


def pos_tag(tokens: Sequence[Token], tagger: Tagger | None = None) -> list[TaggedToken]:
    return (tagger or _DEFAULT_TAGGER).tag(tokens)


_COARSE_TAG_MAP = {
    "NOUN": NOUN, "PROPER_NOUN": PROPER_NOUN, "ADJECTIVE": ADJECTIVE, "OTHER": OTHER,
    # Penn Treebank
    "NN": NOUN, "NNS": NOUN, "NNP": PROPER_NOUN, "NNPS": PROPER_NOUN,
    "JJ": ADJECTIVE, "JJR": ADJECTIVE, "JJS": ADJECTIVE,
}

_PUNCT_ONLY_RE = re.compile(r"[^\w]+")


def load_pretagged(path: str | Path) -> dict[str, list[TaggedToken]]:
    """Adapt external tagger output (TSV doc_id, position, surface, tag).

    Tags are mapped onto the coarse alphabet (Penn Treebank noun and
    adjective tags are recognized; anything unmapped becomes OTHER).
    Punctuation-only rows are dropped; a row whose surface is entirely
    sentence terminators advances the sentence. Positions are re-indexed
    over the surviving tokens, so file positions only define order.
    """
    raw: dict[str, list[tuple[int, str, str]]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 4:
                raise ValueError(f"{path}: line {lineno}: expected 4 fields")
            doc_id, pos_s, surface, tag = parts
            try:
                pos = int(pos_s)
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: bad position") from None
            rows = raw.setdefault(doc_id, [])
            if rows and pos <= rows[-1][0]:
                raise ValueError(
                    f"{path}: line {lineno}: positions must increase within a document"
                )
            rows.append((pos, surface, tag))

    out: dict[str, list[TaggedToken]] = {}
    for doc_id, rows in raw.items():
        tokens: list[TaggedToken] = []
        sentence = 0
        emitted = False
        for _, surface, tag in rows:
            if _PUNCT_ONLY_RE.fullmatch(surface):
                if emitted and set(surface) & set(".!?"):
                    sentence += 1
                    emitted = False
                continue
            tokens.append(TaggedToken(
                surface=surface,
                normalized=surface.lower(),
                tag=_COARSE_TAG_MAP.get(tag, OTHER),
                position=len(tokens),
                sentence=sentence,
            ))
            emitted = True
        out[doc_id] = tokens
    return out


def _by_sentence(tagged: Sequence[TaggedToken]) -> Iterator[list[TaggedToken]]:
    group: list[TaggedToken] = []
    for tok in tagged:
        if group and tok.sentence != group[-1].sentence:
            yield group
            group = []
        group.append(tok)
    if group:
        yield group


_SYMBOL = {NOUN: "N", PROPER_NOUN: "N", ADJECTIVE: "A", OTHER: "O"}
_NP_PATTERN = re.compile(r"A*N+")


def _record(table: dict[str, PhraseStat], phrase: str, surface: str, position: int) -> None:
    stat = table.get(phrase)
    if stat is None:
        table[phrase] = PhraseStat(count=1, first_position=position,
                                   surfaces=Counter({surface: 1}))
    else:
        stat.add(surface, position)


def extract_noun_phrases(
    tagged: Sequence[TaggedToken], stopwords: frozenset[str]
) -> dict[str, PhraseStat]:
    """Bigrams from (adjective)*(noun)+ pattern matches.

    A match of n tokens contributes its n-1 sliding bigram windows;
    single-noun matches are skipped, and any bigram containing a stopword
    is discarded. Keys are lowercased space-joined phrases.
    """
    out: dict[str, PhraseStat] = {}
    for sent in _by_sentence(tagged):
        symbols = "".join(_SYMBOL[t.tag] for t in sent)
        for m in _NP_PATTERN.finditer(symbols):
            span = sent[m.start():m.end()]
            if len(span) < 2:
                continue
            for a, b in zip(span, span[1:]):
                if a.normalized in stopwords or b.normalized in stopwords:
                    continue
                _record(out, f"{a.normalized} {b.normalized}",
                        f"{a.surface} {b.surface}", a.position)
    return out


def extract_proper_noun_unigrams(
    tagged: Sequence[TaggedToken], stopwords: frozenset[str]
) -> dict[str, PhraseStat]:
    """PROPER_NOUN tokens, stopword-filtered, keyed by normalized form."""
    out: dict[str, PhraseStat] = {}
    for tok in tagged:
        if tok.tag != PROPER_NOUN or tok.normalized in stopwords:
            continue
        _record(out, tok.normalized, tok.surface, tok.position)
    return out


def _adjacent_pairs(tokens: Sequence[Token | TaggedToken]) -> Iterator[tuple]:
    # bigrams never cross a sentence boundary
    for a, b in zip(tokens, tokens[1:]):
        if a.sentence == b.sentence:
            yield a, b


def _count_doc(tokens: Sequence[Token | TaggedToken]):
    bigrams: Counter = Counter()
    left: Counter = Counter()
    right: Counter = Counter()
    for a, b in _adjacent_pairs(tokens):
        bigrams[(a.normalized, b.normalized)] += 1
        left[a.normalized] += 1
        right[b.normalized] += 1
    return bigrams, left, right


def collocation_stats(docs: Iterable[Sequence[Token | TaggedToken]]) -> CollocationStats:
    """Score every adjacent bigram in the corpus with the G-squared test.

    The significant set keeps bigrams that pass the p < 0.001 cut and are
    positively associated (observed adjacency above expectation), i.e.
    pairs that co-occur more often than chance.
    """
    bigrams: Counter = Counter()
    left: Counter = Counter()
    right: Counter = Counter()
    for tokens in docs:
        b, l, r = _count_doc(tokens)
        bigrams.update(b)
        left.update(l)
        right.update(r)
    total = sum(bigrams.values())

    tables: dict[str, ContingencyTable] = {}
    scores: dict[str, float] = {}
    significant = set()
    for (w1, w2), n11 in bigrams.items():
        n12 = left[w1] - n11
        n21 = right[w2] - n11
        n22 = total - n11 - n12 - n21
        table = ContingencyTable(n11=n11, n12=n12, n21=n21, n22=n22)
        phrase = f"{w1} {w2}"
        tables[phrase] = table
        score = assoc_score(table)
        scores[phrase] = score
        if score > CHI2_CRITICAL_P001 and n11 > table.expected()[0]:
            significant.add(phrase)
    return CollocationStats(tables=tables, scores=scores,
                            significant=frozenset(significant))


def extract_significant_phrases(
    tagged: Sequence[TaggedToken],
    stats: CollocationStats,
    stopwords: frozenset[str],
) -> dict[str, PhraseStat]:
    """Adjacent bigrams of this document that are significant corpus-wide."""
    out: dict[str, PhraseStat] = {}
    for a, b in _adjacent_pairs(tagged):
        phrase = f"{a.normalized} {b.normalized}"
        if phrase not in stats.significant:
            continue
        if a.normalized in stopwords or b.normalized in stopwords:
            continue
        _record(out, phrase, f"{a.surface} {b.surface}", a.position)
    return out


@dataclass
class DocAnalysis:
    """Per-document extraction results consumed by the labeling stage."""

    doc_id: str
    n_tokens: int
    significant: dict[str, PhraseStat]
    noun_phrases: dict[str, PhraseStat]
    proper_nouns: dict[str, PhraseStat]


@dataclass
class CorpusAnalysis:
    docs: dict[str, DocAnalysis] = field(default_factory=dict)
    stats: CollocationStats | None = None


def _tag_text(text: str, tagger: Tagger) -> list[TaggedToken]:
    return tagger.tag(tokenize(text))


def _extract_doc(
    item: tuple[str, Sequence[TaggedToken]],
    stats: CollocationStats,
    stopwords: frozenset[str],
) -> DocAnalysis:
    doc_id, tagged = item
    return DocAnalysis(
        doc_id=doc_id,
        n_tokens=len(tagged),
        significant=extract_significant_phrases(tagged, stats, stopwords),
        noun_phrases=extract_noun_phrases(tagged, stopwords),
        proper_nouns=extract_proper_noun_unigrams(tagged, stopwords),
    )


def analyze_corpus(
    corpus,
    stopwords: frozenset[str],
    tagger: Tagger | None = None,
    pretagged: dict[str, list[TaggedToken]] | None = None,
    workers: int = 1,
) -> CorpusAnalysis:
    """Tokenize, tag, and extract candidates for every document.

    Counting folds associatively over documents, so the tag and extract
    phases parallelize across worker processes; merge order is fixed by
    document order, keeping results identical for any worker count.
    """
    tagger = tagger or _DEFAULT_TAGGER
    ids = [doc.id for doc in corpus]

    if pretagged is not None:
        missing = [i for i in ids if i not in pretagged]
        if missing:
            raise ValueError(f"pretagged input missing documents: {missing[:5]}")
        tagged_docs = [pretagged[i] for i in ids]
    elif workers > 1 and len(ids) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, len(ids) // (workers * 4))
            tagged_docs = list(pool.map(
                partial(_tag_text, tagger=tagger),
                [doc.text for doc in corpus], chunksize=chunk,
            ))
    else:
        tagged_docs = [_tag_text(doc.text, tagger) for doc in corpus]

    stats = collocation_stats(tagged_docs)

    items = list(zip(ids, tagged_docs))
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, len(items) // (workers * 4))
            analyses = list(pool.map(
                partial(_extract_doc, stats=stats, stopwords=stopwords),
                items, chunksize=chunk,
            ))
    else:
        analyses = [_extract_doc(item, stats, stopwords) for item in items]

    return CorpusAnalysis(docs={a.doc_id: a for a in analyses}, stats=stats)
