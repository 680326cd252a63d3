"""
Hamming-distance engine.

Group distances reduce to scans from the identity, coset unions reduce to one
scan per pair of representatives, and groups containing the cyclic shifts get
the displacement-histogram fast path.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel

from src.errors import (
    DegreeMismatch,
    IdenticalPolynomials,
    NotAPermutationPolynomial,
    NotASupergroupOfCyclic,
    TrivialGroup,
)
from src.finite_field import FieldSpec, FPoly, count_roots
from src.groups import MaterializedGroup
from src.perm_array import PermArray
from src.permutation import Permutation
from src.settings import get_settings

logger = logging.getLogger(__name__)

Method = Literal["pairwise", "group-shortcut", "coset-shortcut", "cyclic-fast"]

# rows x |G| x n booleans compared per block
_BLOCK_CELLS = 4_000_000


class DistanceReport(BaseModel):
    min_distance: int
    witness: Tuple[int, int]
    method: Method
    comparisons: int
    # a pair below the target ended the scan; min_distance may exceed the true hd
    stopped_early: bool = False

    def render(self) -> str:
        return f"hd={self.min_distance} witness={self.witness[0]},{self.witness[1]} method={self.method}"


# --- Exact pairwise scans ---

def _scan_rows(matrix: np.ndarray, rows: Sequence[int], target: Optional[int] = None) -> Tuple[int, int, int, int]:
    """
    (min distance, i, j, comparisons) over pairs (i, j > i) for i in rows. With a
    target, stops after the first row holding a pair closer than the target.
    """
    best = (matrix.shape[1] + 1, -1, -1)
    comparisons = 0
    for i in rows:
        rest = matrix[i + 1:]
        if not len(rest):
            continue
        dists = (rest != matrix[i]).sum(axis=1)
        j = int(np.argmin(dists))
        comparisons += len(rest)
        candidate = (int(dists[j]), i, i + 1 + j)
        if candidate < best:
            best = candidate
        if target is not None and best[0] < target:
            break
    return best[0], best[1], best[2], comparisons


def pairwise_hd(matrix: np.ndarray, workers: Optional[int] = None, target: Optional[int] = None) -> DistanceReport:
    """
    Minimum over all pairs of rows. Rows are dealt round-robin to worker
    processes; the merge keeps the smallest (distance, i, j) so the witness does
    not depend on scheduling. A target lets each scan stop once it finds a pair
    closer than the target: whether hd >= target is decided exactly as by the
    full scan, and hd itself is exact whenever it reaches the target.
    """
    count = matrix.shape[0]
    if count < 2:
        raise TrivialGroup("need at least two permutations to compare")
    workers = workers or get_settings().workers
    if workers <= 1 or count < 512:
        d, i, j, comparisons = _scan_rows(matrix, range(count - 1), target)
    else:
        chunks = [range(w, count - 1, workers) for w in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan_rows, [matrix] * workers, chunks, [target] * workers))
        d, i, j = min((p[0], p[1], p[2]) for p in parts if p[1] >= 0)
        comparisons = sum(p[3] for p in parts)
    stopped = target is not None and d < target
    return DistanceReport(
        min_distance=d, witness=(i, j), method="pairwise", comparisons=comparisons, stopped_early=stopped
    )


def hd_to_set(pi: np.ndarray, matrix: np.ndarray) -> Tuple[int, int]:
    """(distance, row index) from one permutation to the nearest row."""
    dists = (matrix != pi).sum(axis=1)
    j = int(np.argmin(dists))
    return int(dists[j]), j


def group_hd(group: MaterializedGroup) -> DistanceReport:
    """hd(G) = hd(e, G - {e}): one scan from the identity instead of all pairs."""
    if group.order < 2:
        raise TrivialGroup(f"{group.descriptor.to_text()} has a single element")
    m = group.matrix
    d, j = hd_to_set(m[0], m[1:])
    return DistanceReport(min_distance=d, witness=(0, j + 1), method="group-shortcut", comparisons=group.order - 1)


# --- Cyclic fast path ---

def hd_to_cyclic(pi: Permutation) -> Tuple[int, np.ndarray]:
    """
    Distance to C_n in one pass: D[j] starts at n and loses one for every m with
    pi(m) - m = j (mod n).
    """
    n = pi.n
    displacement = (pi.as_array() - np.arange(n)) % n
    D = n - np.bincount(displacement, minlength=n)
    return int(D.min()), D


def _cyclic_shift(n: int) -> Permutation:
    return Permutation.trusted((x + 1) % n for x in range(n))


def cyclic_coset_decomposition(group: MaterializedGroup) -> List[Permutation]:
    """Representatives sigma_t with G = union of sigma_t * C_n, each normalised to fix 0."""
    n = group.degree
    if not group.contains(_cyclic_shift(n)):
        raise NotASupergroupOfCyclic(f"{group.descriptor.to_text()} does not contain x -> x+1")
    covered = set()
    reps = []
    for g in group.elements:
        if g.images in covered:
            continue
        shift = g.images[0]
        rep = Permutation.trusted((v - shift) % n for v in g.images)
        reps.append(rep)
        for j in range(n):
            covered.add(tuple((v + j) % n for v in rep.images))
    return reps


def _cyclic_block(rows: np.ndarray, inv_reps: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per row: min distance to the union of rep * C_n, and the (t, j) achieving it."""
    k, n = rows.shape
    m = inv_reps.shape[0]
    shifted = rows[:, inv_reps]                      # (k, m, n): (rep_t^-1 * row)
    displacement = (shifted - np.arange(n)) % n
    flat = (np.arange(k * m).reshape(k, m, 1) * n + displacement).ravel()
    counts = np.bincount(flat, minlength=k * m * n).reshape(k, m * n)
    best = counts.argmax(axis=1)
    return n - counts.max(axis=1), best // n, best % n


def hd_to_cyclic_cosets(pi: Permutation, reps: Sequence[Permutation]) -> int:
    """min_i hd_to_cyclic(reps[i]^-1 * pi): distance to the union of reps[i] * C_n."""
    if not reps:
        raise DegreeMismatch("no coset representatives given")
    if any(r.n != pi.n for r in reps):
        raise DegreeMismatch("representative degree differs from the permutation")
    inv = np.argsort(np.asarray([r.images for r in reps]), axis=1)
    d, _, _ = _cyclic_block(pi.as_array()[None, :], inv)
    return int(d[0])


class CosetDistance:
    """
    Distance from permutations to a fixed group G, using the cyclic fast path
    when G contains the shift x -> x+1 and plain vectorized scans otherwise.
    """

    def __init__(self, group: MaterializedGroup, fast: bool = True):
        self.group = group
        self.matrix = group.matrix
        self.cyclic_reps: Optional[List[Permutation]] = None
        if fast and group.degree > 1:
            try:
                self.cyclic_reps = cyclic_coset_decomposition(group)
            except NotASupergroupOfCyclic:
                logger.debug(f"{group.descriptor.to_text()}: cyclic fast path unavailable")
        if self.cyclic_reps is not None:
            self._rep_array = np.asarray([r.images for r in self.cyclic_reps], dtype=np.int64)
            self._inv_reps = np.argsort(self._rep_array, axis=1)

    @property
    def method(self) -> Method:
        return "cyclic-fast" if self.cyclic_reps is not None else "coset-shortcut"

    def distances(self, rows: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """For each row sigma: min over g in G of hd(sigma, g), and the index of that g."""
        rows = np.atleast_2d(rows)
        if self.cyclic_reps is not None:
            return self._cyclic_distances(rows)
        size, n = self.matrix.shape
        block = max(1, _BLOCK_CELLS // max(1, size * n))
        mins, args = [], []
        for start in range(0, len(rows), block):
            chunk = rows[start:start + block]
            dists = (chunk[:, None, :] != self.matrix[None, :, :]).sum(axis=2)
            mins.append(dists.min(axis=1))
            args.append(dists.argmin(axis=1))
        return np.concatenate(mins), np.concatenate(args)

    def _cyclic_distances(self, rows: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        n = self.group.degree
        m = len(self.cyclic_reps)
        block = max(1, _BLOCK_CELLS // max(1, m * n))
        mins, args = [], []
        for start in range(0, len(rows), block):
            d, t, j = _cyclic_block(rows[start:start + block], self._inv_reps)
            mins.append(d)
            # element sigma_t * g_j maps x to sigma_t(x) + j
            args.append(np.asarray(
                [self.group.index[tuple(((self._rep_array[tt] + jj) % n).tolist())] for tt, jj in zip(t, j)],
                dtype=np.int64,
            ))
        return np.concatenate(mins), np.concatenate(args)


# --- PA distances ---

def pa_hd(
    pa: PermArray, mode: str = "coset-shortcut", workers: Optional[int] = None, target: Optional[int] = None
) -> DistanceReport:
    """
    Minimum distance of a PA. `exact-pairwise` compares every pair of
    materialized permutations; `coset-shortcut` takes the minimum of hd(G) and,
    for each pair of cosets, the distance from r_i^-1 r_j to G. Explicit
    listings always take the pairwise scan. A target ends the scan at the first
    pair of cosets closer than it (see pairwise_hd).
    Witness identifiers are element indices coset * |G| + g (see PermArray.element).
    """
    if pa.size < 2:
        raise TrivialGroup("a PA with a single permutation has no pair to compare")
    if mode == "exact-pairwise" or pa.is_explicit:
        return pairwise_hd(pa.materialize_all(), workers, target)

    order = pa.base.order
    candidates = []
    comparisons = 0
    if order > 1:
        within = group_hd(pa.base)
        candidates.append((within.min_distance, within.witness))
        comparisons += within.comparisons
    if len(pa.reps) == 1:
        d, w = candidates[0]
        return DistanceReport(min_distance=d, witness=w, method="group-shortcut", comparisons=comparisons)

    oracle = CosetDistance(pa.base)
    reps = pa.rep_matrix()
    inv = np.argsort(reps, axis=1)
    for i in range(len(reps) - 1):
        if target is not None and min(candidates)[0] < target:
            break
        sigma = reps[i + 1:][:, inv[i]]               # r_i^-1 * r_j for j > i
        mins, args = oracle.distances(sigma)
        comparisons += len(sigma) * order
        k = int(np.argmin(mins))
        j = i + 1 + k
        # hd(r_i^-1 r_j, g) = hd(r_i g, r_j)
        candidates.append((int(mins[k]), (i * order + int(args[k]), j * order)))
    d, w = min(candidates)
    stopped = target is not None and d < target
    return DistanceReport(
        min_distance=d, witness=w, method=oracle.method, comparisons=comparisons, stopped_early=stopped
    )


def poly_hd(spec: FieldSpec, f: FPoly, g: FPoly) -> int:
    """hd(f, g) = n - r(f - g) for distinct permutation polynomials."""
    for poly in (f, g):
        if len({poly(x) for x in spec.elements()}) != spec.n:
            raise NotAPermutationPolynomial(f"{poly} is not injective on GF({spec.n})")
    if f == g:
        raise IdenticalPolynomials("f and g coincide")
    return spec.n - count_roots(spec, f - g)
