"""Task dataset types and their JSONL serialization.

An example is a sentence pair with a label (MedNLI class or MedSTS score
in [0,5]), a split tag, and, after augmentation, the recorded annotation
spans that make the insertion reversible.
"""

import json
from dataclasses import dataclass, field

__all__ = [
    "MEDNLI_LABELS",
    "SPLITS",
    "AnnotationSpan",
    "Example",
    "Dataset",
    "load_dataset",
    "save_dataset",
    "validate_for_task",
]

MEDNLI_LABELS = ("entailment", "neutral", "contradiction")
SPLITS = ("train", "dev", "test")


@dataclass
class AnnotationSpan:
    """One `word (paraphrase)` insertion.

    `byte_offset` is the UTF-8 byte offset of the matched surface in the
    unaugmented sentence; `inserted_text` goes immediately after the
    surface.  Offsets are byte-based because the files cross process and
    language boundaries.
    """

    sentence_index: int  # 1 or 2
    byte_offset: int
    matched_surface: str
    inserted_text: str


@dataclass
class Example:
    id: str
    sentence1: str
    sentence2: str
    label: object  # task label string or numeric score
    split: str
    augmented: bool = False
    annotations: list = field(default_factory=list)


@dataclass
class Dataset:
    examples: list
    name: str = ""

    def __post_init__(self):
        seen = set()
        for ex in self.examples:
            if ex.id in seen:
                raise ValueError(f"duplicate example id {ex.id!r}")
            seen.add(ex.id)

    def split(self, name):
        return [ex for ex in self.examples if ex.split == name]

    def __len__(self):
        return len(self.examples)


def _span_to_json(span):
    return {
        "sent": span.sentence_index,
        "offset": span.byte_offset,
        "word": span.matched_surface,
        "inserted": span.inserted_text,
    }


def _span_from_json(obj):
    return AnnotationSpan(obj["sent"], obj["offset"], obj["word"], obj["inserted"])


def load_dataset(path, name=None):
    examples = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: malformed JSON: {exc}") from None
            for fieldname in ("id", "sentence1", "sentence2", "label", "split"):
                if fieldname not in rec:
                    raise ValueError(f"{path}:{lineno}: missing field '{fieldname}'")
            if rec["split"] not in SPLITS:
                raise ValueError(f"{path}:{lineno}: unknown split {rec['split']!r}")
            examples.append(
                Example(
                    id=str(rec["id"]),
                    sentence1=rec["sentence1"],
                    sentence2=rec["sentence2"],
                    label=rec["label"],
                    split=rec["split"],
                    augmented=bool(rec.get("augmented", False)),
                    annotations=[_span_from_json(a) for a in rec.get("annotations", [])],
                )
            )
    return Dataset(examples, name=name if name is not None else str(path))


def save_dataset(ds, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for ex in ds.examples:
            rec = {
                "id": ex.id,
                "sentence1": ex.sentence1,
                "sentence2": ex.sentence2,
                "label": ex.label,
                "split": ex.split,
            }
            if ex.augmented:
                rec["augmented"] = True
                rec["annotations"] = [_span_to_json(s) for s in ex.annotations]
            fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")


def validate_for_task(ds, task):
    """Check every label against the task's label set / score range."""
    for ex in ds.examples:
        if task == "mednli":
            if ex.label not in MEDNLI_LABELS:
                raise ValueError(f"example {ex.id}: label {ex.label!r} not in {MEDNLI_LABELS}")
        elif task == "medsts":
            if not isinstance(ex.label, (int, float)) or isinstance(ex.label, bool):
                raise ValueError(f"example {ex.id}: score label must be numeric")
            if not 0 <= ex.label <= 5:
                raise ValueError(f"example {ex.id}: score {ex.label} outside [0, 5]")
        else:
            raise ValueError(f"unknown task {task!r}")
    return ds
