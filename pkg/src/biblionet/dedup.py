"""Fuzzy detection of near-duplicate author names.

Flags suspicious name pairs for human review; nothing is ever merged or
rewritten automatically.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from pathlib import Path

DEFAULT_THRESHOLD = 0.8


def levenshtein(a: str, b: str) -> int:
    """Edit distance with unit insert/delete/substitute costs."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(min(
                previous[j] + 1,        # delete from a
                current[j - 1] + 1,     # insert into a
                previous[j - 1] + (ca != cb),
            ))
        previous = current
    return previous[-1]


def similarity_ratio(a: str, b: str) -> float:
    """Normalized similarity (|a| + |b| - lev) / (|a| + |b|), in [0, 1]."""
    total = len(a) + len(b)
    if total == 0:
        raise ValueError("similarity of two empty strings is undefined")
    return (total - levenshtein(a, b)) / total


@dataclass(frozen=True)
class SuspectPair:
    """A name pair scoring at or above the report threshold."""

    name_a: str
    name_b: str
    ratio: float

    def __post_init__(self) -> None:
        if not self.name_a < self.name_b:
            raise ValueError("pair must be in canonical (lexicographic) order")


def find_suspect_pairs(
    names: list[str],
    threshold: float = DEFAULT_THRESHOLD,
    bucket_by_first_letter: bool = False,
) -> list[SuspectPair]:
    """All unordered name pairs with similarity >= threshold.

    Sorted by ratio descending, then lexicographically.  The length
    pruning below is exact (lev(a, b) >= ||a| - |b||, so short-vs-long
    pairs cannot reach the threshold); first-letter bucketing is an
    optional speedup that only compares names sharing a case-folded
    first character and may miss cross-bucket pairs.
    """
    if not 0 < threshold <= 1:
        raise ValueError(f"threshold must lie in (0, 1], got {threshold}")
    unique = sorted(dict.fromkeys(name for name in names if name))
    pairs = []
    for i, a in enumerate(unique):
        for b in unique[i + 1:]:
            if bucket_by_first_letter and a[:1].casefold() != b[:1].casefold():
                continue
            total = len(a) + len(b)
            if (total - abs(len(a) - len(b))) / total < threshold:
                continue
            ratio = similarity_ratio(a, b)
            if ratio >= threshold:
                pairs.append(SuspectPair(a, b, ratio))
    pairs.sort(key=lambda p: (-p.ratio, p.name_a, p.name_b))
    return pairs


def sample_names(names: list[str], size: int, seed: int) -> list[str]:
    """Seeded uniform sample (without replacement) of a name list."""
    unique = sorted(dict.fromkeys(names))
    if size >= len(unique):
        return unique
    return sorted(random.Random(seed).sample(unique, size))


def write_suspect_pairs_csv(pairs: list[SuspectPair], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["name_a", "name_b", "ratio"])
        for pair in pairs:
            writer.writerow([pair.name_a, pair.name_b, f"{pair.ratio:.6f}"])
