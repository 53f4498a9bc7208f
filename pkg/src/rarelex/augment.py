"""Parenthetical paraphrase injection: `word` becomes `word (paraphrase)`.

Matching is whole-word on the same segmentation the frequency counter
uses.  Non-abbreviations match case-insensitively, abbreviations only on
their exact surface (so "chf levels" never triggers the CHF expansion).
Every occurrence is annotated; a surface already followed by "(" is left
alone, which makes the transform idempotent.  Recorded spans make the
insertion reversible byte-for-byte.
"""

import re
from dataclasses import dataclass, field

from ._pytokenize import TOKEN_PATTERN
from .data import AnnotationSpan, Dataset, Example

__all__ = [
    "AugmentStats",
    "SplitStats",
    "find_matches",
    "augment_text",
    "strip_annotations",
    "augment_example",
    "augment_dataset",
    "save_augment_stats",
]

# Token boundaries in original (unfolded) coordinates; per-token folding
# happens at comparison time.  The character class is case-invariant, so
# segmenting the original agrees with the counter's fold-then-segment for
# everything except exotic case folds that change length.
_SPAN_RE = re.compile(TOKEN_PATTERN)


def _token_spans(text):
    return [(m.start(), m.end()) for m in _SPAN_RE.finditer(text)]


def _build_index(pmap):
    """Headword index keyed by first folded token, longest phrase first."""
    by_first = {}
    for headword, entry in pmap.entries.items():
        toks = tuple(_SPAN_RE.findall(headword.lower()))
        if not toks:
            continue
        by_first.setdefault(toks[0], []).append((toks, headword, entry))
    for cands in by_first.values():
        cands.sort(key=lambda c: (-len(c[0]), c[1]))
    return by_first


def _byte_offset(text, char_offset):
    return len(text[:char_offset].encode("utf-8"))


def _find(text, pmap):
    """All matches as (char_start, char_end, headword, entry), greedy
    left-to-right, longest candidate first, never overlapping."""
    by_first = _build_index(pmap)
    spans = _token_spans(text)
    folded = [text[s:e].lower() for s, e in spans]
    found = []
    i = 0
    while i < len(spans):
        advance = 1
        for toks, headword, entry in by_first.get(folded[i], ()):
            n = len(toks)
            if n > len(folded) - i or tuple(folded[i : i + n]) != toks:
                continue
            # Phrase-internal separators must be whitespace only.
            if n > 1 and not all(
                text[spans[j][1] : spans[j + 1][0]].isspace() for j in range(i, i + n - 1)
            ):
                continue
            start = spans[i][0]
            end = spans[i + n - 1][1]
            if entry.is_abbreviation and text[start:end] != headword:
                continue
            if not _already_annotated(text, end):
                found.append((start, end, headword, entry))
            advance = n
            break
        i += advance
    return found


def _already_annotated(text, end):
    j = end
    while j < len(text) and text[j] == " ":
        j += 1
    return j < len(text) and text[j] == "("


def find_matches(text, pmap, sentence_index=1):
    """Annotation spans for every map hit in `text` (offsets in UTF-8
    bytes of the unaugmented text, inserted_text filled)."""
    return [
        AnnotationSpan(
            sentence_index,
            _byte_offset(text, start),
            text[start:end],
            f" ({entry.paraphrase})",
        )
        for start, end, _, entry in _find(text, pmap)
    ]


def augment_text(text, pmap, sentence_index=1):
    """Insert each paraphrase after its matched surface.

    Single pass over the original text: inserted paraphrases are never
    re-annotated.  Returns (augmented_text, spans, matched_headwords).
    """
    matches = _find(text, pmap)
    pieces = []
    prev = 0
    spans = []
    words = []
    for start, end, headword, entry in matches:
        inserted = f" ({entry.paraphrase})"
        pieces.append(text[prev:end])
        pieces.append(inserted)
        prev = end
        spans.append(
            AnnotationSpan(sentence_index, _byte_offset(text, start), text[start:end], inserted)
        )
        words.append(headword)
    pieces.append(text[prev:])
    return "".join(pieces), spans, words


def strip_annotations(augmented, spans):
    """Remove exactly the recorded insertions, recovering the original
    text byte-for-byte."""
    buf = bytearray(augmented.encode("utf-8"))
    shift = 0
    for span in sorted(spans, key=lambda s: s.byte_offset):
        at = span.byte_offset + len(span.matched_surface.encode("utf-8")) + shift
        ins = span.inserted_text.encode("utf-8")
        if bytes(buf[at : at + len(ins)]) != ins:
            raise ValueError(f"recorded insertion not found at byte {at}")
        del buf[at : at + len(ins)]
    return buf.decode("utf-8")


def augment_example(ex, pmap):
    """Augment both sentences; label and id untouched.  The augmented
    flag marks examples that actually received an annotation."""
    s1, spans1, words1 = augment_text(ex.sentence1, pmap, sentence_index=1)
    s2, spans2, words2 = augment_text(ex.sentence2, pmap, sentence_index=2)
    spans = spans1 + spans2
    new_ex = Example(
        id=ex.id,
        sentence1=s1,
        sentence2=s2,
        label=ex.label,
        split=ex.split,
        augmented=bool(spans),
        annotations=spans,
    )
    return new_ex, words1 + words2


@dataclass
class SplitStats:
    words: set = field(default_factory=set)
    total_annotations: int = 0

    @property
    def distinct_words(self):
        return len(self.words)


@dataclass
class AugmentStats:
    per_split: dict = field(default_factory=dict)

    def record(self, split, words):
        stats = self.per_split.setdefault(split, SplitStats())
        stats.words.update(words)
        stats.total_annotations += len(words)


def augment_dataset(ds, pmap):
    """Augment every example, collecting per-split annotation statistics
    (distinct annotated words and total occurrences)."""
    if not ds.examples:
        raise ValueError("empty dataset")
    stats = AugmentStats()
    out = []
    for ex in ds.examples:
        new_ex, words = augment_example(ex, pmap)
        stats.record(ex.split, words)
        out.append(new_ex)
    return Dataset(out, name=ds.name), stats


def save_augment_stats(stats, path):
    """TSV: split, distinct annotated words, total annotations."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("split\tdistinct_words\ttotal_annotations\n")
        for split in sorted(stats.per_split):
            s = stats.per_split[split]
            fh.write(f"{split}\t{s.distinct_words}\t{s.total_annotations}\n")
