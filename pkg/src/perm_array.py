import logging
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel

from src.errors import MalformedPA
from src.finite_field import FieldSpec
from src.groups import (
    GroupDescriptor,
    MaterializedGroup,
    gen_agl1,
    materialize,
    poly_to_perm,
    smallest_prime_factor,
)
from src.permutation import Permutation, compose, identity, inverse

logger = logging.getLogger(__name__)


class StreamState(BaseModel):
    """PCG64 state of one search stream; the 128-bit words are kept as hex."""
    state: str
    inc: str
    has_uint32: int = 0
    uinteger: int = 0


class SearchCheckpoint(BaseModel):
    """
    Where a coset search stopped: `streams` are the stream states at the start of
    the round in progress, of which the first `offset` candidates were already
    arbitrated.
    """
    tried: int
    streak: int
    offset: int = 0
    streams: List[StreamState]


class PermArray:
    """
    A permutation array given as the union of left cosets rep * G of a base group.
    The identity is always coset 0 of a nontrivial base. An explicit listing uses
    the trivial group as base and keeps its rows exactly as given.
    """

    def __init__(
        self,
        base: MaterializedGroup,
        reps: Sequence[Permutation] = (),
        d: Optional[int] = None,
        seed: Optional[int] = None,
        note: str = "",
        search: Optional[SearchCheckpoint] = None,
    ):
        n = base.degree
        for r in reps:
            if r.n != n:
                raise MalformedPA(f"representative of degree {r.n} in a PA of degree {n}")
        self.base = base
        if base.order == 1:
            if not reps:
                raise MalformedPA("explicit listing is empty")
            self.reps: List[Permutation] = list(dict.fromkeys(reps))
        else:
            e = identity(n)
            self.reps = [e] + [r for r in reps if r != e]
        self.d = d
        self.seed = seed
        self.note = note
        self.search = search

    @classmethod
    def from_descriptor(cls, descriptor: GroupDescriptor, reps: Sequence[Permutation] = (), **kwargs) -> "PermArray":
        return cls(materialize(descriptor), reps, **kwargs)

    @classmethod
    def explicit(cls, perms: Sequence[Permutation], **kwargs) -> "PermArray":
        if not perms:
            raise MalformedPA("explicit listing is empty")
        return cls.from_descriptor(GroupDescriptor.trivial(perms[0].n), perms, **kwargs)

    @property
    def n(self) -> int:
        return self.base.degree

    @property
    def size(self) -> int:
        return len(self.reps) * self.base.order

    def element(self, index: int) -> Permutation:
        coset, g = divmod(index, self.base.order)
        return compose(self.reps[coset], self.base.elements[g])

    def materialize_all(self) -> np.ndarray:
        """All size x n images; row coset * |G| + g is reps[coset] * G[g]."""
        m = self.base.matrix
        return np.concatenate([m[:, np.asarray(r.images)] for r in self.reps], axis=0)

    def rep_matrix(self) -> np.ndarray:
        return np.asarray([r.images for r in self.reps], dtype=np.int64)

    def check_distinct_cosets(self) -> None:
        """No two representatives may share a coset of the base group."""
        if self.is_explicit:
            return
        inverses = [inverse(r) for r in self.reps]
        for i, inv in enumerate(inverses):
            for j in range(i + 1, len(self.reps)):
                if self.base.contains(compose(inv, self.reps[j])):
                    raise MalformedPA(f"representatives {i} and {j} lie in the same coset")

    @property
    def is_explicit(self) -> bool:
        return self.base.order == 1

    def with_reps(self, reps: Sequence[Permutation]) -> "PermArray":
        return PermArray(self.base, reps, d=self.d, seed=self.seed, note=self.note)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PermArray)
            and self.base.descriptor == other.base.descriptor
            and self.reps == other.reps
            and (self.d, self.seed, self.note) == (other.d, other.seed, other.note)
            and self.search == other.search
        )

    def __repr__(self) -> str:
        return f"PermArray({self.base.descriptor.to_text()}, cosets={len(self.reps)}, size={self.size}, d={self.d})"


def frobenius_coset_pa(spec: FieldSpec) -> PermArray:
    """
    AGL(1,q) united with x^(p^i) * AGL(1,q) for 1 <= i < s, s the smallest prime
    factor of k: hd >= q - p with s * q(q-1) permutations.
    """
    s = smallest_prime_factor(spec.k) if spec.k > 1 else 1
    reps = [poly_to_perm(spec, 1, 0, i) for i in range(s)]
    claimed = spec.n - spec.p if spec.k > 1 else spec.n - 1
    note = f"Frobenius cosets x^(p^i), 0 <= i < {s}"
    logger.info(f"GF({spec.n}): {s} Frobenius cosets of AGL(1,{spec.n}), claimed d={claimed}")
    return PermArray(gen_agl1(spec), reps, d=claimed, note=note)
