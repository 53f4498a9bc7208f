"""Deterministic seeded few-shot sampling.

Sampling must reproduce bit-for-bit across runs and platforms, so it uses
its own 64-bit generator (splitmix64) instead of a library RNG whose
stream could change between versions: ids are sorted lexicographically,
Fisher-Yates-shuffled with the seeded stream, and the first k are taken
(for MedSTS the next k become the dev set, disjoint by construction).
The test split is never touched.
"""

from dataclasses import dataclass, field

__all__ = ["SamplePlan", "Splitmix64", "seeded_shuffle", "sample_fewshot"]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4B28F
_MIX2 = 0x94D049BB133111EB


class Splitmix64:
    """splitmix64: counter advanced by the golden-ratio constant, output
    run through the standard two-round xor-multiply finalizer."""

    def __init__(self, seed):
        self._state = seed & _MASK64

    def next_uint64(self):
        self._state = (self._state + _GOLDEN) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def below(self, n):
        return self.next_uint64() % n


def seeded_shuffle(items, seed):
    """Fisher-Yates driven by Splitmix64(seed); input order irrelevant
    because items are sorted first."""
    out = sorted(items)
    rng = Splitmix64(seed)
    for i in range(len(out) - 1, 0, -1):
        j = rng.below(i + 1)
        out[i], out[j] = out[j], out[i]
    return out


@dataclass
class SamplePlan:
    k: int
    task: str
    seeds: list = field(default_factory=lambda: list(range(10)))

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.task not in ("mednli", "medsts"):
            raise ValueError(f"unknown task {self.task!r}")
        if len(set(self.seeds)) != len(self.seeds):
            raise ValueError("seeds must be distinct")


def _take(ds_split, ids):
    by_id = {ex.id: ex for ex in ds_split}
    return [by_id[i] for i in sorted(ids)]


def sample_fewshot(ds, plan, seed):
    """Draw the k-example train and dev subsets for one seed.

    MedNLI dev comes from the official dev split; MedSTS has no dev split,
    so dev is the next k of the shuffled train ids (train and dev never
    overlap).  Output order is by id for stable serialization.
    """
    train_pool = ds.split("train")
    if len(train_pool) < plan.k:
        raise ValueError(f"train split too small: need {plan.k}, have {len(train_pool)}")

    if plan.task == "mednli":
        dev_pool = ds.split("dev")
        if len(dev_pool) < plan.k:
            raise ValueError(f"dev split too small: need {plan.k}, have {len(dev_pool)}")
        train_ids = seeded_shuffle([ex.id for ex in train_pool], seed)[: plan.k]
        dev_ids = seeded_shuffle([ex.id for ex in dev_pool], seed)[: plan.k]
        return _take(train_pool, train_ids), _take(dev_pool, dev_ids)

    if len(train_pool) < 2 * plan.k:
        raise ValueError(
            f"train split too small for disjoint dev: need {2 * plan.k}, have {len(train_pool)}"
        )
    perm = seeded_shuffle([ex.id for ex in train_pool], seed)
    return _take(train_pool, perm[: plan.k]), _take(train_pool, perm[plan.k : 2 * plan.k])
