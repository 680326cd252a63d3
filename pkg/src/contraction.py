"""
Contraction: delete the largest symbol n-1 from every permutation.

The position that mapped to n-1 inherits sigma(n-1). Each contraction lowers a
pairwise distance by at most 3, and by 3 only when sigma^-1 tau carries the
3-cycle (n-1 r s) with r = sigma(n-1), s = tau(n-1).
"""
import logging
from typing import Dict, Iterator, Optional, Tuple

import numpy as np
from pydantic import BaseModel

from src.distance import pa_hd, pairwise_hd
from src.errors import DegreeTooSmall, EqualPermutations
from src.groups import GroupDescriptor, MaterializedGroup, materialize
from src.perm_array import PermArray
from src.permutation import Permutation, compose, cycle_decomposition, hamming, inverse
from src.settings import get_settings

logger = logging.getLogger(__name__)

CHECKED_CYCLE_LENGTHS = (3, 5)

# rows x n cells per quotient block
_BLOCK_CELLS = 4_000_000


class ContractionCertificate(BaseModel):
    times: int
    source_hd: int
    # None when every permutation collapsed to one
    result_hd: Optional[int]
    cycle_conditions: Dict[int, Optional[bool]]
    source_size: int
    result_size: int
    duplicates_removed: int = 0

    def render(self) -> str:
        return (
            f"source_hd={self.source_hd} result_hd={self.result_hd} size={self.result_size} "
            f"cycle3_free={self.cycle_conditions.get(3)} cycle5_free={self.cycle_conditions.get(5)}"
        )


def contract(sigma: Permutation) -> Permutation:
    n = sigma.n
    if n < 2:
        raise DegreeTooSmall(f"cannot contract a permutation of degree {n}")
    last = n - 1
    tail = sigma.images[last]
    return Permutation.trusted(tail if v == last else v for v in sigma.images[:last])


def _contract_rows(matrix: np.ndarray) -> np.ndarray:
    last = matrix.shape[1] - 1
    body = matrix[:, :last].copy()
    hit = body == last
    body[hit] = np.broadcast_to(matrix[:, last:], body.shape)[hit]
    return body


def check_cycle_free(group: MaterializedGroup, length: int) -> bool:
    """No non-identity element of the group has a cycle of the given length."""
    if group.order % length != 0:
        # an L-cycle in g forces L | ord(g) | |G|
        return True
    return not any(cycle_decomposition(g).has_cycle_of_length(length) for g in group.elements[1:])


def _rows_with_cycle(rows: np.ndarray, length: int) -> bool:
    """Whether any row, read as x -> row[x], has a cycle of exactly `length`."""
    points = np.arange(rows.shape[1])
    power = rows
    proper = []
    for k in range(1, length):
        if length % k == 0:
            proper.append(power == points)
        power = np.take_along_axis(rows, power, axis=1)
    on_cycle = power == points
    for fixed in proper:
        on_cycle &= ~fixed
    return bool(on_cycle.any())


def _quotient_blocks(pa: PermArray) -> Iterator[np.ndarray]:
    """
    Row blocks whose cycle types are those of sigma^-1 tau over distinct sigma,
    tau in the PA: G - {e} within a coset, and (r_i^-1 r_j) G across cosets i < j,
    up to conjugation.
    """
    m = pa.base.matrix
    order, n = m.shape
    if order > 1:
        yield m[1:]
    reps = pa.rep_matrix()
    inv = np.argsort(reps, axis=1)
    step = max(1, _BLOCK_CELLS // (order * n))
    for i in range(len(reps) - 1):
        quotients = reps[i + 1:][:, inv[i]]
        for start in range(0, len(quotients), step):
            yield m[:, quotients[start:start + step]].reshape(-1, n)


def pa_cycle_conditions(pa: PermArray) -> Dict[int, Optional[bool]]:
    """
    For each checked length L, whether no sigma^-1 tau (sigma != tau in the PA)
    has an L-cycle. None when the quotients to scan exceed the pair count of a
    full pairwise verification at the configured cap.
    """
    if len(pa.reps) == 1:
        return {L: check_cycle_free(pa.base, L) for L in CHECKED_CYCLE_LENGTHS}
    k, order = len(pa.reps), pa.base.order
    scanned = (order - 1) + order * k * (k - 1) // 2
    cap = get_settings().verify_cap
    if scanned > cap * (cap - 1) // 2:
        logger.warning(f"{scanned} quotients exceed the cycle-check cap; cycle conditions left open")
        return {L: None for L in CHECKED_CYCLE_LENGTHS}
    found = {L: False for L in CHECKED_CYCLE_LENGTHS}
    for block in _quotient_blocks(pa):
        for L in CHECKED_CYCLE_LENGTHS:
            if not found[L] and _rows_with_cycle(block, L):
                found[L] = True
        if all(found.values()):
            break
    return {L: not found[L] for L in CHECKED_CYCLE_LENGTHS}


def contract_pa(pa: PermArray, times: int = 1, workers: Optional[int] = None) -> Tuple[PermArray, ContractionCertificate]:
    """
    Contract every permutation `times` times, drop duplicates, and re-verify the
    result exactly. The result is an explicit listing over the trivial group.
    """
    if times < 1:
        raise DegreeTooSmall(f"number of contractions must be >= 1, got {times}")
    if pa.n - times < 2:
        raise DegreeTooSmall(f"cannot contract degree {pa.n} {times} times")

    source = pa_hd(pa).min_distance
    matrix = pa.materialize_all()
    for _ in range(times):
        matrix = _contract_rows(matrix)

    _, first = np.unique(matrix, axis=0, return_index=True)
    kept = matrix[np.sort(first)]
    removed = len(matrix) - len(kept)
    if removed:
        logger.warning(f"{removed} permutations collided after {times} contraction(s)")

    result = pairwise_hd(kept, workers).min_distance if len(kept) > 1 else None
    if result is None:
        logger.warning(f"all {pa.size} permutations collapsed to one; no distance to report")
    elif result < source - 3 * times:
        logger.error(f"contraction lost more than {3 * times}: {source} -> {result}")

    conditions = pa_cycle_conditions(pa)

    certificate = ContractionCertificate(
        times=times,
        source_hd=source,
        result_hd=result,
        cycle_conditions=conditions,
        source_size=pa.size,
        result_size=len(kept),
        duplicates_removed=removed,
    )
    base = materialize(GroupDescriptor.trivial(pa.n - times))
    perms = [Permutation.trusted(row) for row in kept.tolist()]
    note = f"{pa.base.descriptor.to_text()} contracted {times} time(s)"
    contracted = PermArray(base, perms, d=result, note=note)
    logger.info(f"contraction: {certificate.render()}")
    return contracted, certificate


def contraction_drop(sigma: Permutation, tau: Permutation) -> int:
    """hamming(sigma, tau) - hamming(sigma^CT, tau^CT), always in 0..3."""
    if sigma == tau:
        raise EqualPermutations("contraction drop needs two distinct permutations")
    before = hamming(sigma, tau)
    return before - hamming(contract(sigma), contract(tau))


def has_drop_three(sigma: Permutation, tau: Permutation) -> bool:
    """Structural test: sigma^-1 tau contains the 3-cycle (n-1 r s)."""
    last = sigma.n - 1
    r, s = sigma[last], tau[last]
    if len({last, r, s}) < 3:
        return False
    rho = compose(inverse(sigma), tau)
    return rho[last] == r and rho[r] == s and rho[s] == last
