"""Exact arithmetic in the group of complex roots of unity.

Every label on a generalized Dynkin diagram is a root of unity, so the whole
toolkit runs on the group mu_infinity.  An element is stored as the reduced
exponent of exp(2*pi*i*num/den); no cyclotomic field arithmetic is needed
because all label formulas are multiplicative.
"""

from __future__ import annotations

import re
from math import gcd

__all__ = [
    "RootOfUnity",
    "rou",
    "ONE",
    "MINUS_ONE",
    "group",
    "primitive_group",
    "gf_elements",
    "gf_contains",
    "parse_token",
]


class RootOfUnity:
    """exp(2*pi*i*num/den) with 0 <= num < den and gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num: int, den: int):
        if den <= 0:
            raise ValueError("denominator must be positive")
        num %= den
        g = gcd(num, den)
        object.__setattr__(self, "num", num // g)
        object.__setattr__(self, "den", den // g)

    def __setattr__(self, name, value):  # immutable
        raise AttributeError("RootOfUnity is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, RootOfUnity)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __lt__(self, other: "RootOfUnity"):
        # Orders by denominator then numerator; only used for deterministic sorting.
        return (self.den, self.num) < (other.den, other.num)

    def __repr__(self):
        return f"RootOfUnity({self.num}, {self.den})"

    def __str__(self):
        return self.token()

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        return rou(self.num * other.den + other.num * self.den, self.den * other.den)

    def __pow__(self, e: int) -> "RootOfUnity":
        return rou(self.num * e, self.den)

    def inverse(self) -> "RootOfUnity":
        return rou(-self.num, self.den)

    @property
    def order(self) -> int:
        """Multiplicative order; equals the reduced denominator."""
        return self.den

    def is_one(self) -> bool:
        return self.den == 1

    def is_primitive(self, n: int) -> bool:
        """True iff this is a primitive n-th root of unity."""
        return self.den == n

    def token(self) -> str:
        if self.den == 1:
            return "1"
        if self.den == 2:
            return "-1"
        return f"e{self.den}^{self.num}"


_CACHE: dict[tuple[int, int], RootOfUnity] = {}


def rou(k: int, n: int) -> RootOfUnity:
    """Reduced representative of exp(2*pi*i*k/n); n must be >= 1."""
    if n <= 0:
        raise ValueError("order must be a positive integer")
    k %= n
    g = gcd(k, n)
    key = (k // g, n // g)
    cached = _CACHE.get(key)
    if cached is None:
        cached = _CACHE[key] = RootOfUnity(*key)
    return cached


ONE = rou(0, 1)
MINUS_ONE = rou(1, 2)


def group(n: int) -> tuple[RootOfUnity, ...]:
    """All n-th roots of unity, i.e. the group G_n."""
    return tuple(rou(k, n) for k in range(n))


def primitive_group(n: int) -> tuple[RootOfUnity, ...]:
    """The primitive n-th roots of unity, G_n'."""
    return tuple(rou(k, n) for k in range(n) if gcd(k, n) == 1)


_GF_ORDERS = (10, 12, 18)


def gf_elements() -> tuple[RootOfUnity, ...]:
    """The parameter set (G_10 u G_12 u G_18) \\ {1}, sorted deterministically."""
    out = set()
    for n in _GF_ORDERS:
        out.update(group(n))
    out.discard(ONE)
    return tuple(sorted(out))


def gf_contains(a: RootOfUnity) -> bool:
    """Membership in (G_10 u G_12 u G_18) \\ {1}."""
    return a.den != 1 and any(n % a.den == 0 for n in _GF_ORDERS)


_TOKEN_RE = re.compile(r"^e(\d+)\^(-?\d+)$")


def parse_token(tok: str) -> RootOfUnity:
    """Parse a label token: ``1``, ``-1`` or ``e{n}^{k}`` (unreduced accepted)."""
    tok = tok.strip()
    if tok == "1":
        return ONE
    if tok == "-1":
        return MINUS_ONE
    m = _TOKEN_RE.match(tok)
    if not m:
        raise ValueError(f"bad root-of-unity token: {tok!r}")
    n, k = int(m.group(1)), int(m.group(2))
    return rou(k, n)
