"""
Exception hierarchy for PA construction and certification.
Every failure raised by the library derives from PermArrayError so the CLI and
the HTTP gateway can map them to exit codes / status codes in one place.
"""
from typing import Any, Optional


class PermArrayError(Exception):
    """Base class for all library errors."""


# --- Finite fields ---

class NotPrime(PermArrayError):
    def __init__(self, p: int):
        super().__init__(f"{p} is not prime")
        self.p = p


class Reducible(PermArrayError):
    def __init__(self, modulus):
        super().__init__(f"modulus {list(modulus)} is reducible")
        self.modulus = tuple(modulus)


class DegreeMismatch(PermArrayError):
    pass


class DivisionByZero(PermArrayError, ZeroDivisionError):
    pass


class ExponentOutOfRange(PermArrayError):
    pass


class ZeroPolynomial(PermArrayError):
    pass


# --- Groups ---

class ZeroLeadingCoefficient(PermArrayError):
    pass


class CapExceeded(PermArrayError):
    def __init__(self, cap: int):
        super().__init__(f"closure exceeded cap of {cap} elements")
        self.cap = cap


# --- Distances ---

class TrivialGroup(PermArrayError):
    pass


class MalformedPA(PermArrayError):
    pass


class NotASupergroupOfCyclic(PermArrayError):
    pass


class NotAPermutationPolynomial(PermArrayError):
    pass


class IdenticalPolynomials(PermArrayError):
    pass


# --- Contraction ---

class DegreeTooSmall(PermArrayError):
    pass


class EqualPermutations(PermArrayError):
    pass


# --- Search / bounds ---

class BaseTooWeak(PermArrayError):
    def __init__(self, group_hd: int, target: int):
        super().__init__(f"base group has hd {group_hd} < target {target}")
        self.group_hd = group_hd
        self.target = target


class Exhausted(PermArrayError):
    """Raised when a search gives up without adding a coset; `pa` holds the state reached."""

    def __init__(self, tried: int, pa: Any = None):
        super().__init__(f"no new coset after {tried} candidates")
        self.tried = tried
        self.pa = pa


class BadRange(PermArrayError):
    pass


class ClaimFailed(PermArrayError):
    """A claimed minimum distance did not verify; `report` carries the witness."""

    def __init__(self, claimed: int, report: Any):
        super().__init__(
            f"claimed d={claimed} but found hd={report.min_distance} "
            f"at witness {report.witness[0]},{report.witness[1]}"
        )
        self.claimed = claimed
        self.report = report


# --- File formats ---

class Malformed(PermArrayError):
    def __init__(self, line: int, reason: str, column: Optional[int] = None):
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {reason}")
        self.line = line
        self.column = column
        self.reason = reason


class BadPermutation(PermArrayError):
    def __init__(self, reason: str, line: Optional[int] = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{reason}")
        self.line = line
        self.reason = reason
