"""Selection of rare medical words and their single paraphrase.

A dictionary entry makes it into the final map iff:

  (a) its headword counts strictly below the threshold in the frequency
      table, OR the entry is an abbreviation (abbreviations bypass the
      rarity test only);
  (b) it has exactly one gloss;
  (c) that gloss contains no below-threshold token other than the
      headword's own tokens (a definition must not trade one rare word
      for another).

Every exclusion is counted per rule so that map sizes lagging rare-word
counts stay auditable.
"""

import json
from dataclasses import dataclass, field

from .freqcount import tokenize
from .lexicon import MedicalTagPolicy, filter_medical, normalize_entries

__all__ = [
    "SelectorConfig",
    "MapEntry",
    "ParaphraseMap",
    "ExclusionStats",
    "DEFAULT_THRESHOLD",
    "is_rare",
    "build_paraphrase_map",
    "select_paraphrases",
    "sweep_thresholds",
    "save_map",
    "load_map",
    "save_exclusions",
    "save_sweep_report",
]

DEFAULT_THRESHOLD = 200_000

EXCLUSION_RULES = (
    "non_medical",
    "not_rare",
    "multi_gloss",
    "rare_gloss_token",
    "duplicate_headword",
)


@dataclass
class SelectorConfig:
    threshold: int = DEFAULT_THRESHOLD

    def __post_init__(self):
        if self.threshold < 1:
            raise ValueError(f"threshold must be >= 1, got {self.threshold}")


@dataclass
class MapEntry:
    paraphrase: str
    is_abbreviation: bool


@dataclass
class ParaphraseMap:
    """Final headword -> single paraphrase mapping.

    Keys keep their dictionary surface (abbreviations match
    case-sensitively downstream); folded keys are unique.
    """

    entries: dict = field(default_factory=dict)
    config: SelectorConfig = field(default_factory=SelectorConfig)
    provenance: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.entries)


@dataclass
class ExclusionStats:
    included: int = 0
    non_medical: int = 0
    not_rare: int = 0
    multi_gloss: int = 0
    rare_gloss_token: int = 0
    duplicate_headword: int = 0

    def as_dict(self):
        return {
            "included": self.included,
            **{rule: getattr(self, rule) for rule in EXCLUSION_RULES},
        }


def is_rare(table, word, config):
    """Strictly-below-threshold test; absent words count zero and are rare."""
    return table.counts.get(word, 0) < config.threshold


def _headword_count(table, headword):
    # The table is keyed by folded tokens; a multiword headword never
    # appears there and therefore counts zero.
    return table.counts.get(headword.lower(), 0)


def build_paraphrase_map(table, medical, config=None, provenance=None):
    """Apply rules (a)-(c) to tag-filtered, gloss-normalized entries.

    Returns (ParaphraseMap, ExclusionStats).  An empty entry list gives an
    empty map; a zero-total table is an error because rarity would be
    meaningless.
    """
    if config is None:
        config = SelectorConfig()
    if table.total_tokens == 0:
        raise ValueError("empty table")

    stats = ExclusionStats()
    pmap = ParaphraseMap({}, config, dict(provenance or {}))
    seen_folded = set()
    for entry in medical:
        if not entry.is_abbreviation and _headword_count(table, entry.headword) >= config.threshold:
            stats.not_rare += 1
            continue
        if len(entry.glosses) != 1:
            stats.multi_gloss += 1
            continue
        gloss = entry.glosses[0]
        own_tokens = set(tokenize(entry.headword))
        if any(
            tok not in own_tokens and table.counts.get(tok, 0) < config.threshold
            for tok in tokenize(gloss)
        ):
            stats.rare_gloss_token += 1
            continue
        folded = entry.headword.lower()
        if folded in seen_folded:
            stats.duplicate_headword += 1
            continue
        seen_folded.add(folded)
        pmap.entries[entry.headword] = MapEntry(gloss, entry.is_abbreviation)
        stats.included += 1
    return pmap, stats


def select_paraphrases(table, entries, config=None, policy=None, provenance=None):
    """Full selection from unfiltered entries: medical tag filter, gloss
    normalization, then the rarity rules.  Tracks non-medical exclusions
    alongside the per-rule counts."""
    if policy is None:
        policy = MedicalTagPolicy()
    medical = filter_medical(entries, policy)
    n_non_medical = len(entries) - len(medical)
    pmap, stats = build_paraphrase_map(table, normalize_entries(medical), config, provenance)
    stats.non_medical = n_non_medical
    return pmap, stats


@dataclass
class SweepRow:
    threshold: int
    map_size: int
    exclusions: ExclusionStats
    # dataset name -> split -> (distinct annotated words, total annotations)
    dataset_stats: dict = field(default_factory=dict)


def sweep_thresholds(table, medical, thresholds, datasets=()):
    """One selection per threshold, plus annotation statistics per dataset
    split (how many distinct rare words get annotated, how often)."""
    from . import augment  # deferred: augment imports this module's types

    thresholds = list(thresholds)
    if not thresholds:
        raise ValueError("thresholds must be non-empty")
    if any(b <= a for a, b in zip(thresholds, thresholds[1:])):
        raise ValueError("thresholds must be strictly increasing")

    rows = []
    for threshold in thresholds:
        pmap, stats = build_paraphrase_map(table, medical, SelectorConfig(threshold))
        ds_stats = {}
        for ds in datasets:
            _, aug_stats = augment.augment_dataset(ds, pmap)
            ds_stats[ds.name] = {
                split: (s.distinct_words, s.total_annotations)
                for split, s in sorted(aug_stats.per_split.items())
            }
        rows.append(SweepRow(threshold, len(pmap), stats, ds_stats))
    return rows


def save_map(pmap, path):
    """JSONL `{word, paraphrase, abbrev}` sorted by word."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for word in sorted(pmap.entries):
            e = pmap.entries[word]
            rec = {"word": word, "paraphrase": e.paraphrase, "abbrev": e.is_abbreviation}
            fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")


def load_map(path, config=None, provenance=None):
    entries = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: malformed JSON: {exc}") from None
            for fieldname in ("word", "paraphrase"):
                if fieldname not in rec:
                    raise ValueError(f"{path}:{lineno}: missing field '{fieldname}'")
            entries[rec["word"]] = MapEntry(rec["paraphrase"], bool(rec.get("abbrev", False)))
    return ParaphraseMap(entries, config or SelectorConfig(), dict(provenance or {}))


def save_exclusions(stats, path):
    """Per-rule exclusion counts as two-column TSV."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key, value in stats.as_dict().items():
            fh.write(f"{key}\t{value}\n")


def save_sweep_report(rows, path):
    """TSV: threshold, map_size, then distinct/total columns per
    dataset split."""
    columns = ["threshold", "map_size"]
    seen = []
    for row in rows:
        for ds_name, splits in row.dataset_stats.items():
            for split in splits:
                key = (ds_name, split)
                if key not in seen:
                    seen.append(key)
    for ds_name, split in seen:
        columns.append(f"{ds_name}.{split}.distinct")
        columns.append(f"{ds_name}.{split}.total")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(columns) + "\n")
        for row in rows:
            cells = [str(row.threshold), str(row.map_size)]
            for ds_name, split in seen:
                distinct, total = row.dataset_stats.get(ds_name, {}).get(split, (0, 0))
                cells.append(str(distinct))
                cells.append(str(total))
            fh.write("\t".join(cells) + "\n")
