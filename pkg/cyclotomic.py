"""Exceptional moduli N(r), N'(r) and exact cyclotomic membership tests.

(zeta - 1)^r is tested against n in the power basis of Z[zeta] for zeta of
prime-power order. That ring is the full ring of integers of its field, so
coefficientwise divisibility by n decides membership in n times the
algebraic integers exactly.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, List, Optional, Tuple

from sympy import cyclotomic_poly, factorint, isprime, primerange

from errors import InvariantViolation, NotPrimeError, PreconditionError
from linalg import IntPolynomial

_log = logging.getLogger("monodromy.cyclotomic")

DEFAULT_DEGREE_CAP = 100


# ── Prime-power sets ───────────────────────────────────────────────

@dataclass(frozen=True)
class PrimePowerSet:
    elements: Tuple[int, ...]

    def __post_init__(self):
        if list(self.elements) != sorted(set(self.elements)):
            raise ValueError("PrimePowerSet elements must be sorted and distinct")
        for e in self.elements:
            if e < 1 or (e > 1 and len(factorint(e)) != 1):
                raise ValueError(f"{e} is not a prime power")

    @classmethod
    def of(cls, values: Iterable[int]) -> "PrimePowerSet":
        return cls(tuple(sorted(set(values))))

    def __contains__(self, n: int) -> bool:
        return n in self.elements

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __sub__(self, other: "PrimePowerSet") -> "PrimePowerSet":
        return PrimePowerSet(tuple(e for e in self.elements if e not in other))

    def issubset(self, other: "PrimePowerSet") -> bool:
        return all(e in other for e in self.elements)

    def __str__(self) -> str:
        return "{" + ", ".join(str(e) for e in self.elements) + "}"


def _check_r(r: int):
    if r < 1:
        raise PreconditionError(f"r must be a positive integer (got {r})")


def _prime_powers(r: int) -> Iterator[Tuple[int, int]]:
    """(ell, m) with m >= 1 and m*(ell-1) <= r."""
    for ell in primerange(2, r + 2):
        for m in range(1, r // (ell - 1) + 1):
            yield int(ell), m


def n_set(r: int) -> PrimePowerSet:
    """N(r) = {ell^m : 0 <= m(ell-1) <= r}, with 1 for m = 0."""
    _check_r(r)
    return PrimePowerSet.of([1] + [ell ** m for ell, m in _prime_powers(r)])


def n_prime_set(r: int) -> PrimePowerSet:
    """N'(r): N(r) without the ell^m, ell >= 5, that sit exactly on r = m(ell-1)."""
    _check_r(r)
    return PrimePowerSet.of([1] + [
        ell ** m for ell, m in _prime_powers(r)
        if m * (ell - 1) < r or ell in (2, 3)
    ])


def exceptional_difference(r: int) -> PrimePowerSet:
    return n_set(r) - n_prime_set(r)


# ── Cyclotomic polynomials ─────────────────────────────────────────

def _require_prime(ell: int):
    if not isprime(ell):
        raise NotPrimeError(f"{ell} is not prime")


def cyclotomic_prime_power(ell: int, s: int) -> IntPolynomial:
    """Phi_{ell^s}(x) = sum_{i<ell} x^(i*ell^(s-1))."""
    _require_prime(ell)
    if s < 1:
        raise PreconditionError("s must be a positive integer")
    step = ell ** (s - 1)
    coeffs = [0] * ((ell - 1) * step + 1)
    for i in range(ell):
        coeffs[i * step] = 1
    return IntPolynomial.from_coefficients(coeffs)


@lru_cache(maxsize=4096)
def cyclotomic(d: int) -> IntPolynomial:
    """Phi_d for any conductor d >= 1."""
    if d < 1:
        raise PreconditionError("cyclotomic conductor must be positive")
    poly = cyclotomic_poly(d, polys=True)
    return IntPolynomial.from_coefficients(int(c) for c in reversed(poly.all_coeffs()))


def valuation_threshold(ell: int, s: int, m: int) -> int:
    """m * ell^(s-1) * (ell-1): the least r with (zeta_{ell^s} - 1)^r in ell^m Z[zeta]."""
    _require_prime(ell)
    if s < 1 or m < 1:
        raise PreconditionError("s and m must be positive integers")
    return m * ell ** (s - 1) * (ell - 1)


# ── Membership ─────────────────────────────────────────────────────

def root_minus_one_membership(ell: int, s: int, r: int, n: int) -> bool:
    """True iff (zeta - 1)^r lies in n Z[zeta], zeta a primitive ell^s-th root of unity."""
    _require_prime(ell)
    if s < 1 or r < 0 or n < 1:
        raise PreconditionError("membership needs s >= 1, r >= 0 and n >= 1")
    phi = cyclotomic_prime_power(ell, s).coefficients
    deg = len(phi) - 1
    # coefficients of (x - 1)^j mod (Phi, n), in the power basis 1, x, ..., x^(deg-1)
    acc = [1 % n] + [0] * (deg - 1)
    for _ in range(r):
        shifted = [0] + acc
        for i in range(deg):
            shifted[i] -= acc[i]
        top = shifted[deg]
        if top:
            for i in range(deg):
                shifted[i] -= top * phi[i]
        acc = [c % n for c in shifted[:deg]]
    return not any(acc)


def groupring_bound(ell: int, s: int, m: int) -> int:
    """valuation_threshold, after checking that membership really holds there."""
    r = valuation_threshold(ell, s, m)
    if not root_minus_one_membership(ell, s, r, ell ** m):
        raise InvariantViolation(
            f"(zeta_{ell}^{s} - 1)^{r} is not divisible by {ell}^{m}; membership test is broken"
        )
    return r


def prime_power_orders(s_max: Optional[int] = None, degree_cap: int = DEFAULT_DEGREE_CAP) -> List[Tuple[int, int]]:
    """(ell, s) with ell^(s-1)(ell-1) <= degree_cap and s <= s_max, by ell then s."""
    out = []
    for ell in primerange(2, degree_cap + 2):
        ell = int(ell)
        s = 1
        while (s_max is None or s <= s_max) and ell ** (s - 1) * (ell - 1) <= degree_cap:
            out.append((ell, s))
            s += 1
    return out


def scan_witnesses(r: int, n: int, s_max: Optional[int] = None,
                   degree_cap: int = DEFAULT_DEGREE_CAP) -> List[Tuple[int, int]]:
    """Every (ell, s) in range for which zeta_{ell^s} != 1 satisfies (zeta - 1)^r in n."""
    _check_r(r)
    if n < 1:
        raise PreconditionError("n must be a positive integer")
    witnesses = [(ell, s) for ell, s in prime_power_orders(s_max, degree_cap)
                 if root_minus_one_membership(ell, s, r, n)]
    _log.debug("scan r=%d n=%d: %d witnesses", r, n, len(witnesses))
    return witnesses


def sharpness_scan(r: int, n: int, s_max: Optional[int] = None,
                   degree_cap: int = DEFAULT_DEGREE_CAP) -> Optional[Tuple[int, int]]:
    """First witness (ell, s), or None when the criterion cannot be defeated in range."""
    witnesses = scan_witnesses(r, n, s_max, degree_cap)
    return witnesses[0] if witnesses else None
