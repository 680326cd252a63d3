"""
Exact arithmetic in GF(p^k) with a reproducible element labeling.

Element labels are integers in [0, p^k): the base-p digits of a label are the
coefficients (low degree first) of its residue polynomial modulo the field's
irreducible modulus. Label 0 is zero and label 1 is one. Multiplication runs
through exp/log tables built once per field.
"""
import logging
import re
from functools import lru_cache
from itertools import product
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from src.errors import (
    DegreeMismatch,
    DivisionByZero,
    ExponentOutOfRange,
    NotPrime,
    Reducible,
    ZeroPolynomial,
)

logger = logging.getLogger(__name__)

FieldElement = int

_SPEC_PATTERN = re.compile(r"^GF\((\d+)\^(\d+)\)/modulus=([\d,]+)$")


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


# --- Polynomials over Z_p (plain coefficient tuples, low degree first) ---

def _trim(coeffs: Sequence[int]) -> List[int]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return out


def _zp_mod(a: Sequence[int], m: Sequence[int], p: int) -> List[int]:
    """Remainder of a modulo the monic polynomial m over Z_p."""
    rem = _trim([c % p for c in a])
    dm = len(m) - 1
    while len(rem) - 1 >= dm and rem:
        lead = rem[-1]
        shift = len(rem) - 1 - dm
        for i, c in enumerate(m):
            rem[shift + i] = (rem[shift + i] - lead * c) % p
        rem = _trim(rem)
    return rem


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..k//2."""
    k = len(modulus) - 1
    for deg in range(1, k // 2 + 1):
        for low in product(range(p), repeat=deg):
            if not _zp_mod(modulus, low + (1,), p):
                return False
    return True


def smallest_irreducible(p: int, k: int) -> Tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree k (low-degree-first tuples)."""
    for low in product(range(p), repeat=k):
        candidate = low + (1,)
        if is_irreducible(candidate, p):
            return candidate
    raise Reducible((0,) * k + (1,))  # unreachable: irreducibles exist in every degree


# --- Field ---

class FieldSpec:
    """
    A concrete GF(p^k). Immutable after construction; all operations are pure.
    """

    def __init__(self, p: int, k: int, modulus: Tuple[int, ...]):
        self.p = p
        self.k = k
        self.modulus = tuple(modulus)
        self.n = p ** k
        self._exp: List[int] = []
        self._log: List[int] = []
        self._build_tables()

    # labels <-> coefficient digits
    def digits(self, a: FieldElement) -> List[int]:
        out = []
        for _ in range(self.k):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def from_digits(self, digits: Sequence[int]) -> FieldElement:
        value = 0
        for c in reversed(list(digits)[: self.k]):
            value = value * self.p + (c % self.p)
        return value

    def _mul_raw(self, a: FieldElement, b: FieldElement) -> FieldElement:
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        return self.from_digits(_zp_mod(prod, self.modulus, self.p) + [0] * self.k)

    def _build_tables(self) -> None:
        n = self.n
        if n == 2:
            self._exp, self._log = [1], [0, 0]
            return
        # x (label p) is tried first; it is primitive for most moduli
        candidates = [self.p] + [g for g in range(2, n) if g != self.p] if self.k > 1 else range(2, n)
        for g in candidates:
            exp = [1]
            value = g
            while value != 1:
                exp.append(value)
                value = self._mul_raw(value, g)
            if len(exp) == n - 1:
                log = [0] * n
                for i, v in enumerate(exp):
                    log[v] = i
                self._exp, self._log = exp, log
                logger.debug(f"GF({self.p}^{self.k}): primitive element {g}")
                return
        raise Reducible(self.modulus)

    # --- arithmetic ---
    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        if self.p == 2:
            return a ^ b
        if self.k == 1:
            return (a + b) % self.p
        return self.from_digits([x + y for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a: FieldElement) -> FieldElement:
        if self.p == 2:
            return a
        if self.k == 1:
            return (-a) % self.p
        return self.from_digits([-x for x in self.digits(a)])

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self.add(a, self.neg(b))

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.n - 1)]

    def inv(self, a: FieldElement) -> FieldElement:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self._exp[(-self._log[a]) % (self.n - 1)]

    def div(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self.mul(a, self.inv(b))

    def pow(self, a: FieldElement, e: int) -> FieldElement:
        if e == 0:
            return 1
        if a == 0:
            return 0
        return self._exp[(self._log[a] * e) % (self.n - 1)]

    def frobenius(self, a: FieldElement, i: int) -> FieldElement:
        if not 0 <= i < self.k:
            raise ExponentOutOfRange(f"frobenius exponent {i} not in [0, {self.k})")
        return self.pow(a, self.p ** i)

    def elements(self) -> range:
        return range(self.n)

    def render(self) -> str:
        return f"GF({self.p}^{self.k})/modulus=" + ",".join(str(c) for c in self.modulus)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldSpec) and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    def __repr__(self) -> str:
        return f"FieldSpec({self.render()})"


@lru_cache(maxsize=64)
def _cached_field(p: int, k: int, modulus: Tuple[int, ...]) -> FieldSpec:
    return FieldSpec(p, k, modulus)


def make_field(p: int, k: int = 1, modulus: Optional[Union["FPoly", Sequence[int]]] = None) -> FieldSpec:
    """Validate (p, k, modulus) and return the field; the modulus defaults to the smallest irreducible."""
    if not is_prime(p):
        raise NotPrime(p)
    if k < 1:
        raise DegreeMismatch(f"degree must be >= 1, got {k}")
    if modulus is None:
        return _cached_field(p, k, smallest_irreducible(p, k))

    coeffs = tuple(modulus.coeffs) if isinstance(modulus, FPoly) else tuple(int(c) for c in modulus)
    if len(coeffs) != k + 1 or coeffs[-1] != 1:
        raise DegreeMismatch(f"modulus must be monic of degree {k}, got {list(coeffs)}")
    if any(not 0 <= c < p for c in coeffs):
        raise DegreeMismatch(f"modulus coefficients must lie in Z_{p}")
    if not is_irreducible(coeffs, p):
        raise Reducible(coeffs)
    return _cached_field(p, k, coeffs)


def field_of_order(q: int) -> FieldSpec:
    """GF(q) for a prime power q with the default modulus."""
    for p in range(2, q + 1):
        if q % p == 0:
            k, rest = 0, q
            while rest % p == 0:
                rest //= p
                k += 1
            if rest != 1:
                raise NotPrime(q)
            return make_field(p, k)
    raise NotPrime(q)


def parse_field(text: str) -> FieldSpec:
    match = _SPEC_PATTERN.match(text.strip())
    if not match:
        raise DegreeMismatch(f"unrecognised field spec {text!r}")
    p, k = int(match.group(1)), int(match.group(2))
    return make_field(p, k, [int(c) for c in match.group(3).split(",")])


# --- Module-level operations ---

def f_add(spec: FieldSpec, a: FieldElement, b: FieldElement) -> FieldElement:
    return spec.add(a, b)


def f_mul(spec: FieldSpec, a: FieldElement, b: FieldElement) -> FieldElement:
    return spec.mul(a, b)


def f_inv(spec: FieldSpec, a: FieldElement) -> FieldElement:
    return spec.inv(a)


def frobenius(spec: FieldSpec, a: FieldElement, i: int) -> FieldElement:
    return spec.frobenius(a, i)


class FPoly:
    """Polynomial over a FieldSpec, coefficients low degree first, trailing zeros trimmed."""

    def __init__(self, spec: FieldSpec, coeffs: Iterable[FieldElement]):
        self.spec = spec
        self.coeffs: Tuple[int, ...] = tuple(_trim(coeffs))

    @classmethod
    def from_terms(cls, spec: FieldSpec, terms: Dict[int, FieldElement]) -> "FPoly":
        """Build from a sparse {exponent: coefficient} mapping."""
        top = max(terms) if terms else 0
        coeffs = [0] * (top + 1)
        for e, c in terms.items():
            coeffs[e] = c
        return cls(spec, coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: FieldElement) -> FieldElement:
        spec = self.spec
        total = 0
        for e, c in enumerate(self.coeffs):
            if c:
                total = spec.add(total, spec.mul(c, spec.pow(x, e)))
        return total

    def __add__(self, other: "FPoly") -> "FPoly":
        self._check(other)
        size = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (size - len(self.coeffs))
        b = other.coeffs + (0,) * (size - len(other.coeffs))
        return FPoly(self.spec, [self.spec.add(x, y) for x, y in zip(a, b)])

    def __neg__(self) -> "FPoly":
        return FPoly(self.spec, [self.spec.neg(c) for c in self.coeffs])

    def __sub__(self, other: "FPoly") -> "FPoly":
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FPoly) and self.spec == other.spec and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.spec, self.coeffs))

    def __repr__(self) -> str:
        return f"FPoly({list(self.coeffs)} over {self.spec.render()})"

    def _check(self, other: "FPoly") -> None:
        if self.spec != other.spec:
            raise DegreeMismatch("polynomials over different fields")


def count_roots(spec: FieldSpec, f: FPoly) -> int:
    """Number of roots of f in the field, by evaluation at all n elements: O(n * terms)."""
    if f.is_zero():
        raise ZeroPolynomial("the zero polynomial vanishes everywhere")
    return sum(1 for x in spec.elements() if f(x) == 0)


def subfield_size(spec: FieldSpec, i: int) -> int:
    """p^gcd(i, k): the number of roots of x^(p^i) - x."""
    return spec.p ** gcd(i, spec.k)
