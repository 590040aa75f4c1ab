"""Unipotency, quasi-unipotency and Jordan-partition analysis.

Unipotency of an integer representative is decided over Z (characteristic
zero); reduction mod ell is a separate, explicit step.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import lcm
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np
from sympy import isprime, totient

from cyclotomic import cyclotomic
from errors import NotPrimeError, PreconditionError
from linalg import (
    ExactMatrix,
    IntPolynomial,
    charpoly,
    mat_pow,
    residue_array,
    residue_matmul,
    residue_matpow,
    residue_rank,
)

_log = logging.getLogger("monodromy.spectral")


# ── Unipotency over Z ──────────────────────────────────────────────

def unipotent_echelon(a: ExactMatrix) -> Optional[int]:
    """Least e with (a - I)^e = 0, or None if a is not unipotent."""
    if sum(a.rows[i][i] for i in range(a.dim)) != a.dim:
        # unipotent operators have trace dim
        return None
    nil = a.shift(-1)
    power = nil
    for e in range(1, a.dim + 1):
        if power.is_zero():
            return e
        power = power @ nil
    return None


def is_unipotent(a: ExactMatrix) -> bool:
    return unipotent_echelon(a) is not None


def is_neg_unipotent(a: ExactMatrix) -> bool:
    return is_unipotent(-a)


def unipotent_scalars(a: ExactMatrix) -> Tuple[int, ...]:
    """The gamma in (1, -1) for which gamma * a is unipotent."""
    return tuple(g for g in (1, -1) if is_unipotent(a.scale(g)))


def level2_check(a: ExactMatrix, m: int) -> bool:
    """True iff (a^m - I)^2 = 0."""
    if m < 1:
        raise PreconditionError("m must be a positive integer")
    d = mat_pow(a, m).shift(-1)
    return (d @ d).is_zero()


class Level2Evidence(NamedTuple):
    unipotent: bool
    square_zero: bool
    neg_unipotent: bool
    neg_square_zero: bool


def level2_evidence(a: ExactMatrix) -> Level2Evidence:
    """Unipotency of ±a next to (a ∓ I)^2 = 0, for the level-2 comparison."""
    minus, plus = a.shift(-1), a.shift(1)
    return Level2Evidence(
        unipotent=is_unipotent(a),
        square_zero=(minus @ minus).is_zero(),
        neg_unipotent=is_neg_unipotent(a),
        neg_square_zero=(plus @ plus).is_zero(),
    )


# ── Quasi-unipotency ───────────────────────────────────────────────

@dataclass(frozen=True)
class QuasiUnipotentReport:
    is_quasi_unipotent: bool
    order: Optional[int]
    cyclotomic_factors: Tuple[Tuple[int, int], ...]

    def to_json(self) -> Dict:
        return {
            "is_quasi_unipotent": self.is_quasi_unipotent,
            "order": self.order,
            "cyclotomic_factors": [[d, mult] for d, mult in self.cyclotomic_factors],
        }


@lru_cache(maxsize=64)
def conductor_candidates(dim: int) -> Tuple[int, ...]:
    """Conductors d with phi(d) <= dim; phi(d) >= sqrt(d/2) puts them all below 2*dim^2."""
    return tuple(d for d in range(1, 2 * dim * dim + 1) if totient(d) <= dim)


def is_quasi_unipotent(a: ExactMatrix) -> QuasiUnipotentReport:
    poly = charpoly(a)
    factors: List[Tuple[int, int]] = []
    for d in conductor_candidates(a.dim):
        if poly.degree == 0:
            break
        phi = cyclotomic(d)
        if phi.degree > poly.degree:
            continue
        mult = 0
        while True:
            quot, rem = poly.divmod_monic(phi)
            if not rem.is_zero():
                break
            poly = quot
            mult += 1
        if mult:
            factors.append((d, mult))
    complete = poly == IntPolynomial.constant(1)
    if not complete:
        _log.debug("characteristic polynomial keeps a non-cyclotomic factor %s", poly)
    order = lcm(*(d for d, _ in factors)) if complete else None
    return QuasiUnipotentReport(complete, order, tuple(factors))


# ── Jordan partitions over F_ell ───────────────────────────────────

@dataclass(frozen=True)
class JordanPartition:
    blocks: Tuple[int, ...]
    field_char: int

    def __post_init__(self):
        if any(b < 1 for b in self.blocks) or list(self.blocks) != sorted(self.blocks, reverse=True):
            raise ValueError("Jordan blocks must be positive and weakly decreasing")

    @property
    def dim(self) -> int:
        return sum(self.blocks)

    @property
    def largest(self) -> int:
        return self.blocks[0] if self.blocks else 0

    def to_json(self) -> Dict:
        return {"blocks": list(self.blocks), "field_char": self.field_char}


def _require_prime(ell: int):
    if not isprime(ell):
        raise NotPrimeError(f"{ell} is not prime")


def _nilpotent_part(a, ell: int) -> np.ndarray:
    """(a - I) mod ell as a numpy array; a may be an ExactMatrix or a residue array."""
    arr = residue_array(a.rows, ell) if isinstance(a, ExactMatrix) else np.asarray(a) % ell
    return (arr - np.identity(arr.shape[0], dtype=arr.dtype)) % ell


def _partition_from_ranks(ranks: List[int], ell: int) -> JordanPartition:
    """ranks[j] = rank (a-I)^j, ranks[0] = dim, ending at 0."""
    at_least = [ranks[j - 1] - ranks[j] for j in range(1, len(ranks))] + [0]
    blocks: List[int] = []
    for size in range(len(at_least) - 1, 0, -1):
        blocks.extend([size] * (at_least[size - 1] - at_least[size]))
    return JordanPartition(tuple(blocks), ell)


def jordan_partition_unipotent(a, ell: int) -> JordanPartition:
    """Block sizes from the rank sequence of (a - I)^j over F_ell.

    The number of blocks of size >= j is rank (a-I)^(j-1) - rank (a-I)^j.
    """
    _require_prime(ell)
    nil = _nilpotent_part(a, ell)
    dim = nil.shape[0]
    ranks = [dim]
    power = nil
    while ranks[-1] > 0:
        rank = residue_rank(power, ell)
        if rank == ranks[-1]:
            raise PreconditionError(f"operator is not unipotent mod {ell}")
        ranks.append(rank)
        power = residue_matmul(power, nil, ell)
    return _partition_from_ranks(ranks, ell)


def nilpotency_index_mod_prime(a, ell: int) -> int:
    """Least e with (a - I)^e = 0 mod ell, by bisection on directly computed powers."""
    _require_prime(ell)
    nil = _nilpotent_part(a, ell)
    dim = nil.shape[0]
    if residue_matpow(nil, dim, ell).any():
        raise PreconditionError(f"operator is not unipotent mod {ell}")
    lo, hi = 0, dim
    while lo < hi:
        mid = (lo + hi) // 2
        if residue_matpow(nil, mid, ell).any():
            lo = mid + 1
        else:
            hi = mid
    return lo


def jordan_partition_by_bisection(a, ell: int) -> JordanPartition:
    """Second oracle: nilpotency index by bisection, then each power by repeated squaring."""
    index = nilpotency_index_mod_prime(a, ell)
    nil = _nilpotent_part(a, ell)
    ranks = [nil.shape[0]] + [residue_rank(residue_matpow(nil, j, ell), ell) for j in range(1, index)] + [0]
    return _partition_from_ranks(ranks, ell)


def power_vanishes_mod_prime(a, e: int, ell: int) -> bool:
    """True iff (a - I)^e = 0 mod ell."""
    _require_prime(ell)
    return not residue_matpow(_nilpotent_part(a, ell), e, ell).any()
