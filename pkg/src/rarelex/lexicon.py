"""Dictionary entry ingestion, gloss normalization, and medical filtering.

Consumes a pre-extracted JSONL lexicon (one record per sense: `word`,
`glosses`, `tags`, optional `abbrev`) rather than a raw wikitext dump.
Records sharing a headword merge into one entry.
"""

import json
from dataclasses import dataclass, field

__all__ = [
    "DictionaryEntry",
    "MedicalTagPolicy",
    "DEFAULT_MEDICAL_SUBSTRINGS",
    "ABBREVIATION_TAGS",
    "parse_entries",
    "filter_medical",
    "normalize_gloss",
    "normalize_entries",
    "save_entries",
]

DEFAULT_MEDICAL_SUBSTRINGS = ("medical", "medicine", "disease", "symptom", "pharma")

# Tags that mark an entry as an abbreviation, on top of the surface
# heuristic (2-6 chars, all uppercase letters).
ABBREVIATION_TAGS = frozenset({"abbreviation", "initialism", "acronym"})


@dataclass
class DictionaryEntry:
    headword: str
    glosses: list = field(default_factory=list)
    tags: set = field(default_factory=set)
    is_abbreviation: bool = False


@dataclass
class MedicalTagPolicy:
    """Ordered substrings; an entry is medical when any tag contains any
    of them ("pharmacology" matches "pharma")."""

    substrings: tuple = DEFAULT_MEDICAL_SUBSTRINGS

    def __post_init__(self):
        self.substrings = tuple(self.substrings)
        if not self.substrings:
            raise ValueError("tag policy needs at least one substring")
        for s in self.substrings:
            if s != s.lower():
                raise ValueError(f"tag policy substrings must be lowercase: {s!r}")

    def matches(self, tags):
        return any(sub in tag for tag in tags for sub in self.substrings)


def _looks_like_abbreviation(headword, tags):
    if tags & ABBREVIATION_TAGS:
        return True
    return 2 <= len(headword) <= 6 and headword.isalpha() and headword.isupper()


def parse_entries(source):
    """Parse the JSONL lexicon at `source` into merged DictionaryEntry's.

    Duplicate headwords merge: glosses concatenate in input order, tags
    union, the abbreviation flag ORs.  Malformed lines and missing fields
    raise with the line number.
    """
    by_word = {}
    order = []
    with open(source, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{source}:{lineno}: malformed JSON: {exc}") from None
            if not isinstance(rec, dict):
                raise ValueError(f"{source}:{lineno}: expected an object")
            for fieldname in ("word", "glosses", "tags"):
                if fieldname not in rec:
                    raise ValueError(f"{source}:{lineno}: missing field '{fieldname}'")
            word = rec["word"]
            if not isinstance(word, str) or not word:
                raise ValueError(f"{source}:{lineno}: field 'word' must be a non-empty string")
            glosses = rec["glosses"]
            tags = rec["tags"]
            if not isinstance(glosses, list) or any(not isinstance(g, str) for g in glosses):
                raise ValueError(f"{source}:{lineno}: field 'glosses' must be a string array")
            if not isinstance(tags, list) or any(not isinstance(t, str) for t in tags):
                raise ValueError(f"{source}:{lineno}: field 'tags' must be a string array")
            abbrev = rec.get("abbrev", False)
            if not isinstance(abbrev, bool):
                raise ValueError(f"{source}:{lineno}: field 'abbrev' must be a boolean")

            tagset = {t.lower() for t in tags}
            is_abbrev = abbrev or _looks_like_abbreviation(word, tagset)
            entry = by_word.get(word)
            if entry is None:
                by_word[word] = DictionaryEntry(word, list(glosses), tagset, is_abbrev)
                order.append(word)
            else:
                entry.glosses.extend(glosses)
                entry.tags |= tagset
                entry.is_abbreviation = entry.is_abbreviation or is_abbrev
    return [by_word[w] for w in order]


def filter_medical(entries, policy=None):
    """Keep entries whose tags match the policy, preserving order."""
    if policy is None:
        policy = MedicalTagPolicy()
    return [e for e in entries if policy.matches(e.tags)]


def _normalize_once(gloss):
    # Wiki links: [[target|display]] -> display, [[word]] -> word.
    out = []
    i = 0
    while i < len(gloss):
        if gloss.startswith("[[", i):
            end = gloss.find("]]", i + 2)
            if end != -1:
                inner = gloss[i + 2 : end]
                out.append(inner.rsplit("|", 1)[-1])
                i = end + 2
                continue
        out.append(gloss[i])
        i += 1
    text = " ".join("".join(out).split())
    if text.endswith(".") and not text.endswith(".."):
        text = text[:-1].rstrip()
    return text


def normalize_gloss(gloss):
    """Collapse whitespace, strip wiki-link brackets and one trailing
    period.  Idempotent; raises if nothing is left.

    A trailing run of 2+ periods is treated as an ellipsis and kept.
    """
    text = gloss
    while True:
        nxt = _normalize_once(text)
        if nxt == text:
            break
        text = nxt
    if not text:
        raise ValueError("empty gloss")
    return text


def normalize_entries(entries):
    """Normalize every gloss; entries whose glosses all normalize to
    nothing are dropped (markup noise, not competing paraphrases)."""
    kept = []
    for e in entries:
        glosses = []
        for g in e.glosses:
            try:
                glosses.append(normalize_gloss(g))
            except ValueError:
                continue
        if glosses:
            kept.append(DictionaryEntry(e.headword, glosses, set(e.tags), e.is_abbreviation))
    return kept


def save_entries(entries, path):
    """Write entries back out in the JSONL interchange format."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for e in entries:
            rec = {
                "word": e.headword,
                "glosses": e.glosses,
                "tags": sorted(e.tags),
                "abbrev": e.is_abbreviation,
            }
            fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")
