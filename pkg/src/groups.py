"""
Explicit permutation groups under the canonical field labeling.

Field kinds act on the labels 0..q-1; the projective kinds add infinity as the
last label q. Every MaterializedGroup lists the identity first.
"""
import logging
import random
import re
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import CapExceeded, DegreeMismatch, MalformedPA, ZeroLeadingCoefficient
from src.finite_field import FieldElement, FieldSpec, field_of_order
from src.permutation import Permutation, compose, embed, identity, inverse, parse_permutation
from src.settings import get_settings

logger = logging.getLogger(__name__)


class GroupKind(str, Enum):
    AGL1 = "AGL1"
    PGL2 = "PGL2"
    AGAMMAL1 = "AGAMMAL1"
    PGAMMAL2 = "PGAMMAL2"
    CYCLIC = "CYCLIC"
    GENS = "GENS"
    TRIVIAL = "TRIVIAL"


FIELD_KINDS = {GroupKind.AGL1, GroupKind.PGL2, GroupKind.AGAMMAL1, GroupKind.PGAMMAL2}


@dataclass(frozen=True)
class GroupDescriptor:
    """Symbolic recipe for a known group; `embed` lifts it to a larger degree."""
    kind: GroupKind
    field: Optional[FieldSpec] = None
    n: Optional[int] = None
    generators: Tuple[Permutation, ...] = ()
    label: str = ""
    embed: Optional[int] = None

    @property
    def natural_degree(self) -> int:
        if self.kind in (GroupKind.AGL1, GroupKind.AGAMMAL1):
            return self.field.n
        if self.kind in (GroupKind.PGL2, GroupKind.PGAMMAL2):
            return self.field.n + 1
        if self.kind == GroupKind.GENS:
            return self.generators[0].n
        return self.n

    @property
    def degree(self) -> int:
        return self.embed or self.natural_degree

    def to_text(self) -> str:
        if self.kind in FIELD_KINDS:
            text = f"{self.kind.value} q={self.field.n}"
        elif self.kind == GroupKind.GENS:
            text = f"GENS file={self.label}"
        else:
            text = f"{self.kind.value} n={self.n}"
        if self.embed:
            text += f" embed={self.embed}"
        return text

    # --- constructors ---
    @classmethod
    def agl1(cls, q: int) -> "GroupDescriptor":
        return cls(GroupKind.AGL1, field=field_of_order(q))

    @classmethod
    def pgl2(cls, q: int) -> "GroupDescriptor":
        return cls(GroupKind.PGL2, field=field_of_order(q))

    @classmethod
    def agammal1(cls, q: int) -> "GroupDescriptor":
        return cls(GroupKind.AGAMMAL1, field=field_of_order(q))

    @classmethod
    def pgammal2(cls, q: int) -> "GroupDescriptor":
        return cls(GroupKind.PGAMMAL2, field=field_of_order(q))

    @classmethod
    def cyclic(cls, n: int) -> "GroupDescriptor":
        return cls(GroupKind.CYCLIC, n=n)

    @classmethod
    def trivial(cls, n: int) -> "GroupDescriptor":
        return cls(GroupKind.TRIVIAL, n=n)

    @classmethod
    def from_generators(cls, gens: Sequence[Permutation], label: str) -> "GroupDescriptor":
        if not gens:
            raise MalformedPA("generator list is empty")
        if len({g.n for g in gens}) != 1:
            raise DegreeMismatch("generators have different degrees")
        return cls(GroupKind.GENS, generators=tuple(gens), label=label)


_DESCRIPTOR = re.compile(r"^(?P<kind>[A-Z0-9]+)\s+(?P<params>.*)$")


def load_generators(path: Path) -> List[Permutation]:
    """One permutation per line, 0-indexed; '#' starts a comment."""
    gens = []
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        text = raw.split("#", 1)[0].strip()
        if text:
            gens.append(parse_permutation(text, line=lineno))
    return gens


def resolve_data_file(name: str, base_dir: Optional[Path] = None) -> Path:
    for root in (base_dir, Path.cwd(), get_settings().data_dir):
        if root is not None and (Path(root) / name).is_file():
            return Path(root) / name
    raise FileNotFoundError(f"generator file {name!r} not found")


def parse_descriptor(text: str, base_dir: Optional[Path] = None) -> GroupDescriptor:
    match = _DESCRIPTOR.match(text.strip())
    if not match:
        raise MalformedPA(f"bad group descriptor {text!r}")
    try:
        kind = GroupKind(match.group("kind"))
    except ValueError:
        raise MalformedPA(f"unknown group kind {match.group('kind')!r}")
    params: Dict[str, str] = {}
    for token in match.group("params").split():
        key, sep, value = token.partition("=")
        if not sep:
            raise MalformedPA(f"bad descriptor parameter {token!r}")
        params[key] = value
    try:
        embed_to = int(params["embed"]) if "embed" in params else None
        if kind in FIELD_KINDS:
            descriptor = GroupDescriptor(kind, field=field_of_order(int(params["q"])))
        elif kind == GroupKind.GENS:
            path = resolve_data_file(params["file"], base_dir)
            descriptor = GroupDescriptor.from_generators(load_generators(path), params["file"])
        else:
            descriptor = GroupDescriptor(kind, n=int(params["n"]))
    except KeyError as e:
        raise MalformedPA(f"descriptor {text!r} is missing parameter {e}")
    except ValueError as e:
        raise MalformedPA(f"descriptor {text!r}: {e}")
    if embed_to is not None:
        if embed_to < descriptor.natural_degree:
            raise MalformedPA(f"embed={embed_to} below natural degree {descriptor.natural_degree}")
        descriptor = GroupDescriptor(
            descriptor.kind, descriptor.field, descriptor.n, descriptor.generators, descriptor.label, embed_to
        )
    return descriptor


class MaterializedGroup:
    """
    A group given by its full element list; elements[0] is the identity.
    """

    def __init__(self, descriptor: GroupDescriptor, elements: List[Permutation]):
        self.descriptor = descriptor
        self.elements = elements
        self.index: Dict[Tuple[int, ...], int] = {g.images: i for i, g in enumerate(elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def degree(self) -> int:
        return self.elements[0].n

    @cached_property
    def matrix(self) -> np.ndarray:
        return np.asarray([g.images for g in self.elements], dtype=np.int64)

    def contains(self, pi: Permutation) -> bool:
        return pi.images in self.index

    def spot_check(self, samples: int = 200, seed: int = 0) -> bool:
        """Closure under g * h^-1 for random pairs."""
        rng = random.Random(seed)
        for _ in range(samples):
            g = self.elements[rng.randrange(self.order)]
            h = self.elements[rng.randrange(self.order)]
            if not self.contains(compose(g, inverse(h))):
                return False
        return True

    def __repr__(self) -> str:
        return f"MaterializedGroup({self.descriptor.to_text()}, order={self.order})"


def _finalize(descriptor: GroupDescriptor, perms: Iterable[Permutation]) -> MaterializedGroup:
    seen: Dict[Tuple[int, ...], Permutation] = {}
    for g in perms:
        seen.setdefault(g.images, g)
    elements = list(seen.values())
    e = identity(elements[0].n)
    if elements[0] != e:
        elements.remove(e)
        elements.insert(0, e)
    if len(elements) != expected_order(descriptor):
        logger.warning(f"{descriptor.to_text()}: built {len(elements)} elements, expected {expected_order(descriptor)}")
    return MaterializedGroup(descriptor, elements)


# --- Field constructions ---

def poly_to_perm(spec: FieldSpec, a: FieldElement, b: FieldElement, i: int = 0) -> Permutation:
    """x -> a * x^(p^i) + b on the n field labels."""
    if a == 0:
        raise ZeroLeadingCoefficient("a must be nonzero")
    return Permutation.trusted(spec.add(spec.mul(a, spec.frobenius(x, i)), b) for x in spec.elements())


def _semilinear_maps(spec: FieldSpec, exponents: Iterable[int]) -> Iterable[Permutation]:
    n = spec.n
    for i in exponents:
        twisted = [spec.frobenius(x, i) for x in range(n)]
        for a in range(1, n):
            scaled = [spec.mul(a, y) for y in twisted]
            for b in range(n):
                yield Permutation.trusted(spec.add(v, b) for v in scaled)


def gen_agl1(spec: FieldSpec) -> MaterializedGroup:
    return _finalize(GroupDescriptor(GroupKind.AGL1, field=spec), _semilinear_maps(spec, [0]))


def gen_agammal1(spec: FieldSpec) -> MaterializedGroup:
    """Union of the Frobenius-twisted copies x^(p^i) * AGL(1, n)."""
    return _finalize(GroupDescriptor(GroupKind.AGAMMAL1, field=spec), _semilinear_maps(spec, range(spec.k)))


def _projective_quadruples(spec: FieldSpec) -> Iterable[Tuple[int, int, int, int]]:
    """One (a, b, c, d) per projective class: the first nonzero of (c, a) is 1."""
    n = spec.n
    for d in range(1, n):
        for b in range(n):
            yield 1, b, 0, d
    for a in range(n):
        for d in range(n):
            ad = spec.mul(a, d)
            for b in range(n):
                if b != ad:
                    yield a, b, 1, d


def mobius_to_perm(spec: FieldSpec, a: int, b: int, c: int, d: int, i: int = 0) -> Permutation:
    """(a x^(p^i) + b) / (c x^(p^i) + d) on labels 0..n-1, infinity at label n."""
    inf = spec.n
    images = []
    for x in spec.elements():
        y = spec.frobenius(x, i)
        denominator = spec.add(spec.mul(c, y), d)
        if denominator != 0:
            images.append(spec.div(spec.add(spec.mul(a, y), b), denominator))
        else:
            images.append(inf)
    images.append(spec.div(a, c) if c != 0 else inf)
    return Permutation.trusted(images)


def _projective_maps(spec: FieldSpec, exponents: Iterable[int]) -> Iterable[Permutation]:
    for i in exponents:
        for a, b, c, d in _projective_quadruples(spec):
            yield mobius_to_perm(spec, a, b, c, d, i)


def gen_pgl2(spec: FieldSpec) -> MaterializedGroup:
    return _finalize(GroupDescriptor(GroupKind.PGL2, field=spec), _projective_maps(spec, [0]))


def gen_pgammal2(spec: FieldSpec) -> MaterializedGroup:
    return _finalize(GroupDescriptor(GroupKind.PGAMMAL2, field=spec), _projective_maps(spec, range(spec.k)))


# --- Other groups ---

def gen_cyclic(n: int) -> MaterializedGroup:
    """elements[j] = g_j : x -> x + j (mod n)."""
    elements = [Permutation.trusted((x + j) % n for x in range(n)) for j in range(n)]
    return MaterializedGroup(GroupDescriptor.cyclic(n), elements)


def gen_trivial(n: int) -> MaterializedGroup:
    return MaterializedGroup(GroupDescriptor.trivial(n), [identity(n)])


def closure_from_generators(
    gens: Sequence[Permutation], cap: Optional[int] = None, label: str = "generators"
) -> MaterializedGroup:
    """Breadth-first closure under right multiplication by the generators."""
    cap = cap or get_settings().closure_cap
    descriptor = GroupDescriptor.from_generators(gens, label)
    n = gens[0].n
    e = identity(n)
    elements = [e]
    index = {e.images}
    frontier = [e.images]
    gen_images = [g.images for g in gens]
    while frontier:
        upcoming = []
        for g in frontier:
            for s in gen_images:
                h = tuple(s[v] for v in g)
                if h not in index:
                    index.add(h)
                    elements.append(Permutation.trusted(h))
                    upcoming.append(h)
                    if len(elements) > cap:
                        logger.error(f"closure of {label} passed {cap} elements")
                        raise CapExceeded(cap)
        frontier = upcoming
    logger.info(f"closure of {label}: order {len(elements)} on {n} symbols")
    return MaterializedGroup(descriptor, elements)


@lru_cache(maxsize=32)
def materialize(descriptor: GroupDescriptor) -> MaterializedGroup:
    kind = descriptor.kind
    if kind == GroupKind.AGL1:
        group = gen_agl1(descriptor.field)
    elif kind == GroupKind.AGAMMAL1:
        group = gen_agammal1(descriptor.field)
    elif kind == GroupKind.PGL2:
        group = gen_pgl2(descriptor.field)
    elif kind == GroupKind.PGAMMAL2:
        group = gen_pgammal2(descriptor.field)
    elif kind == GroupKind.CYCLIC:
        group = gen_cyclic(descriptor.n)
    elif kind == GroupKind.TRIVIAL:
        group = gen_trivial(descriptor.n)
    else:
        group = closure_from_generators(list(descriptor.generators), label=descriptor.label)
    if descriptor.embed and group.degree != descriptor.embed:
        group = embed_group(group, descriptor.embed)
    if group.descriptor != descriptor:
        group = MaterializedGroup(descriptor, group.elements)
    return group


def embed_group(group: MaterializedGroup, m: int) -> MaterializedGroup:
    """Lift a whole group to degree m, fixing the new symbols (M12 inside S13)."""
    if m < group.degree:
        raise DegreeMismatch(f"cannot embed a group of degree {group.degree} into degree {m}")
    descriptor = replace(group.descriptor, embed=m)
    return MaterializedGroup(descriptor, [embed(g, m) for g in group.elements])


# --- Arithmetic helpers for the semilinear distance formula ---

def largest_proper_factor(k: int) -> int:
    """k* in q - p^(k*); 0 for k = 1 so that AGL(1, p) gives q - 1."""
    if k == 1:
        return 0
    return max(f for f in range(1, k) if k % f == 0)


def smallest_prime_factor(k: int) -> int:
    f = 2
    while f * f <= k:
        if k % f == 0:
            return f
        f += 1
    return k


def expected_order(descriptor: GroupDescriptor) -> Optional[int]:
    if descriptor.kind not in FIELD_KINDS:
        return descriptor.n if descriptor.kind == GroupKind.CYCLIC else None
    q, k = descriptor.field.n, descriptor.field.k
    base = q * (q - 1) if descriptor.kind in (GroupKind.AGL1, GroupKind.AGAMMAL1) else (q + 1) * q * (q - 1)
    return base * k if descriptor.kind in (GroupKind.AGAMMAL1, GroupKind.PGAMMAL2) else base


def semilinear_hd(spec: FieldSpec) -> int:
    """q - p^(k*), the distance of both semilinear groups over GF(q)."""
    return spec.n - spec.p ** largest_proper_factor(spec.k)
