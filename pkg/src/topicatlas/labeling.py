"""Automatic topic labels from the documents themselves.

For a topic's document set D_S, every document contributes its most
prominent candidate phrases (noun-phrase bigrams that pass the corpus
collocation test, plus proper-noun unigrams). Candidates are then ranked
by how well their extraction separates D_S from the rest of the corpus
(information gain), and the survivors are re-sorted by a blend of corpus
frequency and the topic's own word probabilities. A top-words baseline is
included for side-by-side comparison.
"""

from __future__ import annotations

import math
import warnings
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from topicatlas.model import TopicModel, Vocabulary
from topicatlas.textprep import CorpusAnalysis, DocAnalysis, PhraseStat


class DegenerateSplitWarning(UserWarning):
    """D_S covers the whole corpus, so information gain cannot rank."""


@dataclass
class CandidateLabel:
    phrase: str
    display: str
    weight: float = 0.0
    extracted_from: set[str] = field(default_factory=set)
    corpus_frequency: int = 0
    ig: float = 0.0
    final_score: float = 0.0


@dataclass
class LabelSplit:
    """Top-C term lists per document, split into D_S and its complement."""

    pos: dict[str, tuple[str, ...]]
    neg: dict[str, tuple[str, ...]]

    def __post_init__(self) -> None:
        overlap = set(self.pos) & set(self.neg)
        if overlap:
            raise ValueError(f"documents on both sides of the split: {sorted(overlap)[:5]}")

    @property
    def size(self) -> int:
        return len(self.pos) + len(self.neg)

    @property
    def p_plus(self) -> float:
        return len(self.pos) / self.size

    @property
    def p_minus(self) -> float:
        return len(self.neg) / self.size


def prominence_weight(x: float, y: float) -> float:
    """Harmonic mean 2xy/(x+y) of frequency x and earliness y, 0 at 0+0."""
    if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
        raise ValueError(f"inputs must lie in [0, 1], got x={x}, y={y}")
    if x + y == 0.0:
        return 0.0
    return 2.0 * x * y / (x + y)


def _display_of(stat: PhraseStat) -> str:
    # most frequent surface variant; ties resolve to the smallest string
    return max(sorted(stat.surfaces), key=lambda s: stat.surfaces[s])


def _candidate_stats(analysis: DocAnalysis) -> dict[str, PhraseStat]:
    """(significant phrases intersect noun phrases) union proper nouns."""
    out = {
        phrase: stat
        for phrase, stat in analysis.noun_phrases.items()
        if phrase in analysis.significant
    }
    out.update(analysis.proper_nouns)
    return out


def doc_candidates(analysis: DocAnalysis, c: int) -> list[CandidateLabel]:
    """Top-C candidates of one document by prominence weight.

    x is occurrence count over token count, y is one minus the relative
    first-occurrence index; ties break toward the earlier first occurrence
    and then lexicographically.
    """
    if c < 1:
        raise ValueError("C must be at least 1")
    n = analysis.n_tokens
    if n == 0:
        return []
    candidates = []
    for phrase, stat in _candidate_stats(analysis).items():
        x = min(1.0, stat.count / n)
        y = 1.0 - stat.first_position / n
        candidates.append((
            prominence_weight(x, y), stat.first_position, phrase, _display_of(stat),
        ))
    candidates.sort(key=lambda t: (-t[0], t[1], t[2]))
    return [
        CandidateLabel(phrase=phrase, display=display, weight=weight)
        for weight, _, phrase, display in candidates[:c]
    ]


def entropy(p_plus: float) -> float:
    """Binary entropy in bits; 0 log 0 is taken as 0."""
    if not 0.0 <= p_plus <= 1.0:
        raise ValueError(f"proportion outside [0, 1]: {p_plus}")
    h = 0.0
    for p in (p_plus, 1.0 - p_plus):
        if p > 0.0:
            h -= p * math.log2(p)
    return h


def information_gain(label: str, split: LabelSplit) -> float:
    """Expected entropy reduction from segmenting documents on whether
    their top-C list contains the label."""
    if split.size == 0:
        raise ValueError("empty split")
    in_pos = sum(1 for terms in split.pos.values() if label in terms)
    in_neg = sum(1 for terms in split.neg.values() if label in terms)
    n_with = in_pos + in_neg
    if n_with == 0:
        raise ValueError(f"label {label!r} extracted from no document")
    n = split.size
    n_without = n - n_with
    h_all = entropy(len(split.pos) / n)
    h_with = entropy(in_pos / n_with)
    h_without = entropy((len(split.pos) - in_pos) / n_without) if n_without else 0.0
    gain = h_all - (n_with / n) * h_with - (n_without / n) * h_without
    # conditioning cannot raise entropy; trim any rounding residue
    return max(0.0, gain)


def _beta_mean(phrase: str, beta_row: np.ndarray, vocabulary: Vocabulary) -> float:
    # words missing from the vocabulary contribute probability 0
    total = 0.0
    words = phrase.split()
    for w in words:
        wid = vocabulary.id_of(w)
        if wid is not None:
            total += float(beta_row[wid])
    return total / len(words)


def final_resort(
    candidates: list[CandidateLabel],
    beta_row: np.ndarray,
    vocabulary: Vocabulary,
) -> list[CandidateLabel]:
    """Re-sort by the mean of normalized corpus frequency and normalized
    constituent-word probability mass; ties fall back to information gain,
    then to the phrase itself."""
    if not candidates:
        return []
    max_freq = max(c.corpus_frequency for c in candidates)
    means = {c.phrase: _beta_mean(c.phrase, beta_row, vocabulary) for c in candidates}
    max_mean = max(means.values())
    for c in candidates:
        freq_part = c.corpus_frequency / max_freq if max_freq > 0 else 0.0
        beta_part = means[c.phrase] / max_mean if max_mean > 0 else 0.0
        c.final_score = 0.5 * freq_part + 0.5 * beta_part
    return sorted(candidates, key=lambda c: (-c.final_score, -c.ig, c.phrase))


def build_split(
    d_s: set[str], analysis: CorpusAnalysis, c: int
) -> tuple[LabelSplit, dict[str, dict[str, CandidateLabel]]]:
    """Assemble per-document top-C lists, positives first.

    Returns the split plus each document's candidates keyed by phrase, so
    callers can merge display forms and counts without re-extraction.
    """
    pos: dict[str, tuple[str, ...]] = {}
    neg: dict[str, tuple[str, ...]] = {}
    per_doc: dict[str, dict[str, CandidateLabel]] = {}
    for doc_id, doc_analysis in analysis.docs.items():
        cands = doc_candidates(doc_analysis, c)
        per_doc[doc_id] = {cand.phrase: cand for cand in cands}
        terms = tuple(cand.phrase for cand in cands)
        if doc_id in d_s:
            pos[doc_id] = terms
        else:
            neg[doc_id] = terms
    return LabelSplit(pos=pos, neg=neg), per_doc


def _doc_occurrences(doc_analysis: DocAnalysis, phrase: str) -> PhraseStat | None:
    table = doc_analysis.noun_phrases if " " in phrase else doc_analysis.proper_nouns
    return table.get(phrase)


def docset_label(
    d_s: set[str],
    analysis: CorpusAnalysis,
    beta_row: np.ndarray,
    vocabulary: Vocabulary,
    c: int = 5,
    l: int = 1,
) -> list[CandidateLabel]:
    """Label the document set D_S against the rest of the analyzed corpus.

    Candidates are the union of top-C lists over D_S, scored by
    information gain over the positive/negative split, cut to the best C,
    re-sorted by final_resort, and truncated to L. When D_S covers every
    document the gain is identically zero; a warning is issued and the
    re-sort ordering decides alone.
    """
    if l > c:
        raise ValueError(f"L={l} must not exceed C={c}")
    if not d_s:
        raise ValueError("D_S is empty")
    universe = set(analysis.docs)
    stray = d_s - universe
    if stray:
        raise ValueError(f"D_S contains unanalyzed documents: {sorted(stray)[:5]}")
    if d_s == universe:
        warnings.warn(
            "D_S covers the entire corpus; information gain is degenerate "
            "and ranking falls back to the final re-sort",
            DegenerateSplitWarning,
            stacklevel=2,
        )

    split, per_doc = build_split(d_s, analysis, c)

    labels: dict[str, CandidateLabel] = {}
    for doc_id in split.pos:
        for phrase, cand in per_doc[doc_id].items():
            merged = labels.get(phrase)
            if merged is None:
                merged = CandidateLabel(phrase=phrase, display=cand.display)
                labels[phrase] = merged
            merged.extracted_from.add(doc_id)
    for doc_id in split.neg:
        for phrase in per_doc[doc_id]:
            if phrase in labels:
                labels[phrase].extracted_from.add(doc_id)

    surface_votes: dict[str, Counter] = {phrase: Counter() for phrase in labels}
    for doc_id in d_s:
        doc_analysis = analysis.docs[doc_id]
        for phrase, merged in labels.items():
            stat = _doc_occurrences(doc_analysis, phrase)
            if stat is not None:
                merged.corpus_frequency += stat.count
                surface_votes[phrase].update(stat.surfaces)
    for phrase, votes in surface_votes.items():
        if votes:
            labels[phrase].display = max(sorted(votes), key=lambda s: votes[s])

    for merged in labels.values():
        merged.ig = information_gain(merged.phrase, split)

    ranked = sorted(
        labels.values(),
        key=lambda cand: (-cand.ig, -cand.corpus_frequency, cand.phrase),
    )
    top = final_resort(ranked[:c], beta_row, vocabulary)
    return top[:l]


def lda_baseline_labels(
    beta_row: np.ndarray, vocabulary: Vocabulary, l: int
) -> list[str]:
    """The L highest-probability vocabulary terms, ties by word id."""
    row = np.asarray(beta_row).ravel()
    order = np.argsort(-row, kind="stable")
    return [vocabulary.term_of(int(wid)) for wid in order[:l]]


def label_topics(
    assignment,
    corpus,
    analysis: CorpusAnalysis,
    model: TopicModel,
    c: int = 5,
    l: int = 1,
) -> dict[int, list[CandidateLabel]]:
    """docset_label per topic over the argmax clustering.

    Topics that own no documents get an empty label list.
    """
    out: dict[int, list[CandidateLabel]] = {}
    for topic in range(model.n_topics):
        members = assignment.members(topic)
        if len(members) == 0:
            out[topic] = []
            continue
        d_s = {corpus[int(i)].id for i in members}
        beta_row = model.beta.getrow(topic).toarray().ravel()
        out[topic] = docset_label(d_s, analysis, beta_row, model.vocabulary, c=c, l=l)
    return out


def write_label_report(
    labels: dict[int, list[CandidateLabel]], path: str | Path
) -> None:
    """TSV: topic_id, rank, label, ig, final_score."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("topic_id\trank\tlabel\tig\tfinal_score\n")
        for topic in sorted(labels):
            for rank, cand in enumerate(labels[topic], start=1):
                fh.write(
                    f"{topic}\t{rank}\t{cand.display}\t{cand.ig!r}\t{cand.final_score!r}\n"
                )


def write_comparison_report(
    labels: dict[int, list[CandidateLabel]],
    model: TopicModel,
    l: int,
    path: str | Path,
) -> None:
    """Side-by-side TSV of extracted labels and the top-words baseline."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("topic_id\tdocset_labels\tlda_labels\n")
        for topic in sorted(labels):
            ours = ", ".join(cand.display for cand in labels[topic])
            beta_row = model.beta.getrow(topic).toarray().ravel()
            baseline = ", ".join(lda_baseline_labels(beta_row, model.vocabulary, l))
            fh.write(f"{topic}\t{ours}\t{baseline}\n")
