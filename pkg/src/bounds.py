"""
Lower-bound bookkeeping for M(n, d): verified constructions, GV rows, the
three arithmetic propagation rules and a fixed-width table renderer.
"""
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field

from src.distance import group_hd, pa_hd
from src.errors import Malformed
from src.finite_field import field_of_order, is_prime
from src.groups import GroupDescriptor, materialize, parse_descriptor
from src.gv import gv_bound
from src.perm_array import frobenius_coset_pa
from src.settings import get_settings

logger = logging.getLogger(__name__)

Tag = Literal["a", "b", "d", "t", "g", "m", "u", "r", "c", "v"]
Cell = Tuple[int, int]

MATHIEU_FILES = ("m11.gens", "m12.gens")


class BoundRecord(BaseModel):
    n: int = Field(..., ge=1)
    d: int = Field(..., ge=1)
    size: int = Field(..., ge=1)
    tag: Tag
    source: str = ""

    @property
    def cell(self) -> Cell:
        return self.n, self.d

    def to_line(self) -> str:
        return f"{self.n} {self.d} {self.size} {self.tag}"


def _prime_powers(limit: int) -> Iterable[int]:
    for q in range(2, limit + 1):
        p = next(f for f in range(2, q + 1) if q % f == 0)
        rest = q
        while rest % p == 0:
            rest //= p
        if rest == 1 and is_prime(p):
            yield q


def known_constructions(n_range: Tuple[int, int]) -> List[BoundRecord]:
    """Build every group-based construction with degree in n_range and record its verified hd."""
    lo, hi = n_range
    records: List[BoundRecord] = []

    def add_group(descriptor: GroupDescriptor, tag: Tag = "g") -> None:
        if not lo <= descriptor.degree <= hi:
            return
        group = materialize(descriptor)
        hd = group_hd(group).min_distance
        records.append(BoundRecord(n=group.degree, d=hd, size=group.order, tag=tag, source=descriptor.to_text()))

    for q in _prime_powers(hi):
        add_group(GroupDescriptor.agl1(q))
        add_group(GroupDescriptor.pgl2(q))
        spec = field_of_order(q)
        if spec.k > 1:
            add_group(GroupDescriptor.agammal1(q))
            add_group(GroupDescriptor.pgammal2(q))
            if lo <= q <= hi:
                pa = frobenius_coset_pa(spec)
                hd = pa_hd(pa).min_distance
                records.append(BoundRecord(n=q, d=hd, size=pa.size, tag="v", source=pa.note))
    for name in MATHIEU_FILES:
        descriptor = parse_descriptor(f"GENS file={name}")
        add_group(descriptor)
    for n in range(max(lo, 2), hi + 1):
        records.append(BoundRecord(n=n, d=n, size=n, tag="g", source=f"CYCLIC n={n}"))
    logger.info(f"{len(records)} verified constructions for {lo} <= n <= {hi}")
    return records


def gv_records(n_range: Tuple[int, int], d_range: Optional[Tuple[int, int]] = None) -> List[BoundRecord]:
    records = []
    for n in range(max(n_range[0], 2), n_range[1] + 1):
        d_lo, d_hi = d_range or (2, n)
        for d in range(max(d_lo, 2), min(d_hi, n) + 1):
            records.append(BoundRecord(n=n, d=d, size=gv_bound(n, d).bound, tag="t"))
    return records


def best_records(records: Iterable[BoundRecord]) -> Dict[Cell, BoundRecord]:
    best: Dict[Cell, BoundRecord] = {}
    for r in records:
        if r.cell not in best or r.size > best[r.cell].size:
            best[r.cell] = r
    return best


def propagate_bounds(
    records: Iterable[BoundRecord],
    n_range: Optional[Tuple[int, int]] = None,
    d_range: Optional[Tuple[int, int]] = None,
) -> List[BoundRecord]:
    """
    Close the records under
      a: M(n, d-1) >= M(n, d)
      b: M(n+1, d) >= M(n, d)
      d: M(n-1, d) >= ceil(M(n, d) / n)
    inside a fixed domain of cells. An existing bound is only replaced by a
    strictly larger one.
    """
    n_lo, n_hi = n_range or (2, get_settings().table_max_n)
    d_lo, d_hi = d_range or (2, n_hi)

    def inside(n: int, d: int) -> bool:
        return n_lo <= n <= n_hi and max(d_lo, 2) <= d <= min(d_hi, n)

    best = best_records(records)
    queue = sorted(best)
    while queue:
        n, d = queue.pop()
        size = best[(n, d)].size
        derived = [((n, d - 1), size, "a"), ((n + 1, d), size, "b")]
        if n - 1 >= d:
            derived.append(((n - 1, d), -(-size // n), "d"))
        for cell, value, tag in derived:
            if not inside(*cell):
                continue
            current = best.get(cell)
            if current is None or value > current.size:
                best[cell] = BoundRecord(n=cell[0], d=cell[1], size=value, tag=tag, source=f"M({n},{d})")
                queue.append(cell)
    return [best[c] for c in sorted(best)]


def emit_table(records: Iterable[BoundRecord], n_range: Tuple[int, int], d_range: Tuple[int, int]) -> str:
    """One row per n, one column per d; cells read `size_tag`, or `-` when unknown."""
    best = best_records(records)
    ns = range(n_range[0], n_range[1] + 1)
    ds = range(d_range[0], d_range[1] + 1)
    rows = [["n\\d"] + [str(d) for d in ds]]
    for n in ns:
        row = [str(n)]
        for d in ds:
            r = best.get((n, d))
            row.append(f"{r.size}_{r.tag}" if r else "-")
        rows.append(row)
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in rows) + "\n"


def load_records(path: Path) -> List[BoundRecord]:
    """Whitespace-separated `n d size tag` lines; '#' starts a comment."""
    records = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        text = raw.split("#", 1)[0].split()
        if not text:
            continue
        if len(text) != 4:
            raise Malformed(lineno, "expected `n d size tag`")
        try:
            records.append(BoundRecord(n=int(text[0]), d=int(text[1]), size=int(text[2]), tag=text[3]))
        except ValueError as e:
            raise Malformed(lineno, str(e).splitlines()[0])
    return records


def dump_records(records: Iterable[BoundRecord]) -> str:
    return "".join(r.to_line() + "\n" for r in records)
