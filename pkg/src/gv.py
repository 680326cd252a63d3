"""
Gilbert-Varshamov baseline for permutation codes, in exact integers.

V(n, r) = sum_{k=0..r} C(n, k) D_k counts the permutations within distance r of
a fixed one; any maximal code of minimum distance d has at least n!/V(n, d-1)
words.
"""
from functools import lru_cache
from math import comb, factorial

from pydantic import BaseModel

from src.errors import BadRange


class GVResult(BaseModel):
    n: int
    d: int
    volume: int
    bound: int

    @property
    def ceiling(self) -> int:
        return -(-factorial(self.n) // self.volume)

    def render(self) -> str:
        return f"n={self.n} d={self.d} V={self.volume} gv={self.bound}"


@lru_cache(maxsize=None)
def derangements(k: int) -> int:
    """D_0 = 1, D_1 = 0, D_k = (k-1)(D_{k-1} + D_{k-2})."""
    if k < 0:
        raise BadRange(f"derangements of {k} symbols")
    prev, cur = 1, 0
    if k == 0:
        return prev
    for i in range(2, k + 1):
        prev, cur = cur, (i - 1) * (cur + prev)
    return cur


def sphere_volume(n: int, radius: int) -> int:
    return sum(comb(n, k) * derangements(k) for k in range(min(radius, n) + 1))


def gv_bound(n: int, d: int) -> GVResult:
    if not 2 <= d <= n:
        raise BadRange(f"need 2 <= d <= n, got n={n} d={d}")
    volume = sphere_volume(n, d - 1)
    return GVResult(n=n, d=d, volume=volume, bound=factorial(n) // volume)
