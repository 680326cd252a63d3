"""
Permutations of Z_n as dense image tuples.

Composition follows the left-to-right convention: (pi sigma)(i) = sigma(pi(i)),
so compose(pi, sigma) applies pi first.
"""
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import BadPermutation, DegreeMismatch

_SEPARATORS = re.compile(r"[,\s]+")


class Permutation:
    """images[i] = pi(i). Validated on construction; immutable and hashable."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(int(v) for v in images)
        n = len(images)
        seen = [False] * n
        for v in images:
            if not 0 <= v < n:
                raise BadPermutation(f"image {v} out of range for degree {n}")
            if seen[v]:
                raise BadPermutation(f"image {v} repeated")
            seen[v] = True
        self.images: Tuple[int, ...] = images

    @classmethod
    def trusted(cls, images: Iterable[int]) -> "Permutation":
        """Skip validation; for images produced by group actions."""
        obj = cls.__new__(cls)
        obj.images = tuple(int(v) for v in images)
        return obj

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls.trusted(range(n))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __getitem__(self, i: int) -> int:
        return self.images[i]

    def __len__(self) -> int:
        return len(self.images)

    def __iter__(self):
        return iter(self.images)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.images))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.images, dtype=np.int64)

    def to_text(self) -> str:
        return " ".join(str(v) for v in self.images)


@dataclass(frozen=True)
class CycleDecomposition:
    cycles: List[Tuple[int, ...]]
    fixed_points: List[int]
    length_histogram: Dict[int, int] = field(default_factory=dict)

    def has_cycle_of_length(self, length: int) -> bool:
        return self.length_histogram.get(length, 0) > 0

    def moved(self) -> int:
        """Points on cycles of length >= 2."""
        return sum(length * count for length, count in self.length_histogram.items() if length >= 2)


def _same_degree(pi: Permutation, sigma: Permutation) -> None:
    if pi.n != sigma.n:
        raise DegreeMismatch(f"degrees differ: {pi.n} vs {sigma.n}")


def identity(n: int) -> Permutation:
    return Permutation.identity(n)


def compose(pi: Permutation, sigma: Permutation) -> Permutation:
    """result(i) = sigma(pi(i))."""
    _same_degree(pi, sigma)
    s = sigma.images
    return Permutation.trusted(s[v] for v in pi.images)


def inverse(pi: Permutation) -> Permutation:
    out = [0] * pi.n
    for i, v in enumerate(pi.images):
        out[v] = i
    return Permutation.trusted(out)


def hamming(pi: Permutation, sigma: Permutation) -> int:
    _same_degree(pi, sigma)
    return sum(1 for a, b in zip(pi.images, sigma.images) if a != b)


def cycle_decomposition(pi: Permutation) -> CycleDecomposition:
    n = pi.n
    seen = [False] * n
    cycles: List[Tuple[int, ...]] = []
    fixed: List[int] = []
    for start in range(n):
        if seen[start]:
            continue
        cycle = []
        x = start
        while not seen[x]:
            seen[x] = True
            cycle.append(x)
            x = pi.images[x]
        cycles.append(tuple(cycle))
        if len(cycle) == 1:
            fixed.append(start)
    histogram = dict(Counter(len(c) for c in cycles))
    return CycleDecomposition(cycles=cycles, fixed_points=fixed, length_histogram=histogram)


def cycle_containing(pi: Permutation, x: int) -> Tuple[int, ...]:
    cycle = [x]
    y = pi.images[x]
    while y != x:
        cycle.append(y)
        y = pi.images[y]
    return tuple(cycle)


def embed(pi: Permutation, m: int) -> Permutation:
    """Extend pi to degree m >= n by fixing the new symbols n..m-1."""
    if m < pi.n:
        raise DegreeMismatch(f"cannot embed degree {pi.n} into degree {m}")
    return Permutation.trusted(pi.images + tuple(range(pi.n, m)))


def parse_permutation(text: str, one_indexed: bool = False, line: Optional[int] = None) -> Permutation:
    """
    Strict parser for space- or comma-separated images on one line.
    With one_indexed, every value is shifted down by one (printed listings).
    """
    tokens = [t for t in _SEPARATORS.split(text.strip()) if t]
    if not tokens:
        raise BadPermutation("empty permutation", line)
    try:
        values = [int(t) for t in tokens]
    except ValueError as e:
        raise BadPermutation(f"non-integer image ({e})", line)
    if one_indexed:
        values = [v - 1 for v in values]
    try:
        return Permutation(values)
    except BadPermutation as e:
        raise BadPermutation(e.reason, line)


def stack(perms: Sequence[Permutation]) -> np.ndarray:
    """Row matrix of images, shape (len(perms), n)."""
    if not perms:
        return np.zeros((0, 0), dtype=np.int64)
    return np.asarray([p.images for p in perms], dtype=np.int64)
