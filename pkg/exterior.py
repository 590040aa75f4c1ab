"""Exterior powers of integer operators and the induced cohomology action.

The basis of the k-th exterior power is the set of k-element subsets of
{0, ..., dim-1}, each sorted ascending, ordered colexicographically. The same
order is used by every function here and by serialized reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb, gcd
from typing import Dict, List, Tuple

from sympy import isprime

from errors import DimensionMismatchError, NotPrimeError, PreconditionError
from linalg import ExactMatrix, mat_inverse_mod, mat_inverse_unimodular

Subset = Tuple[int, ...]


@dataclass(frozen=True)
class WedgeBasisIndex:
    dim: int
    k: int
    subsets: Tuple[Subset, ...]
    positions: Dict[Subset, int] = field(compare=False, repr=False, hash=False, default_factory=dict)

    def __len__(self) -> int:
        return len(self.subsets)

    def position(self, subset: Subset) -> int:
        return self.positions[tuple(subset)]


@lru_cache(maxsize=256)
def wedge_basis(dim: int, k: int) -> WedgeBasisIndex:
    if dim < 1 or not 1 <= k <= dim:
        raise PreconditionError(f"exterior degree k={k} must satisfy 1 <= k <= dim={dim}")
    subsets = tuple(sorted(combinations(range(dim), k), key=lambda s: s[::-1]))
    index = WedgeBasisIndex(dim, k, subsets, {s: i for i, s in enumerate(subsets)})
    if len(index) != comb(dim, k):
        raise AssertionError("wedge basis has the wrong size")
    return index


# ── Minors ─────────────────────────────────────────────────────────

def _minor_levels(a: ExactMatrix, k_max: int) -> List[Dict[Tuple[Subset, Subset], int]]:
    """Nonzero j x j minors of a for j = 1..k_max, keyed by (rows, cols).

    Level j is built from level j-1 by Laplace expansion along the first
    selected row; zero minors are not stored.
    """
    n = a.dim
    rows = a.rows
    level = {((i,), (j,)): rows[i][j] for i in range(n) for j in range(n) if rows[i][j]}
    levels: List[Dict[Tuple[Subset, Subset], int]] = [{}, level]
    for size in range(2, k_max + 1):
        prev = level
        level = {}
        col_sets = list(combinations(range(n), size))
        for row_set in combinations(range(n), size):
            head = rows[row_set[0]]
            tail = row_set[1:]
            for col_set in col_sets:
                total = 0
                for t, c in enumerate(col_set):
                    x = head[c]
                    if not x:
                        continue
                    sub = prev.get((tail, col_set[:t] + col_set[t + 1:]))
                    if sub:
                        total += -x * sub if t & 1 else x * sub
                if total:
                    level[(row_set, col_set)] = total
        levels.append(level)
    return levels


def _assemble(level: Dict[Tuple[Subset, Subset], int], basis: WedgeBasisIndex) -> ExactMatrix:
    subsets = basis.subsets
    return ExactMatrix(tuple(
        tuple(level.get((s, t), 0) for t in subsets)
        for s in subsets
    ))


def _check_degree(a: ExactMatrix, k: int):
    if not 1 <= k <= a.dim:
        raise PreconditionError(f"exterior degree k={k} must satisfy 1 <= k <= dim={a.dim}")


def wedge_power(a: ExactMatrix, k: int) -> ExactMatrix:
    """Matrix of the k-th exterior power: entry (S, T) is the minor with rows S and columns T."""
    _check_degree(a, k)
    if k == 1:
        return a
    levels = _minor_levels(a, k)
    return _assemble(levels[k], wedge_basis(a.dim, k))


def wedge_powers(a: ExactMatrix, k_max: int) -> List[ExactMatrix]:
    """[∧^1 a, ..., ∧^k_max a], sharing one minor recursion."""
    _check_degree(a, k_max)
    levels = _minor_levels(a, k_max)
    return [a] + [_assemble(levels[k], wedge_basis(a.dim, k)) for k in range(2, k_max + 1)]


# ── Cohomology action ──────────────────────────────────────────────

def cohomology_action(a: ExactMatrix, k: int) -> ExactMatrix:
    """Action on H^k: the transpose of ∧^k of the inverse."""
    _check_degree(a, k)
    return wedge_power(mat_inverse_unimodular(a), k).transpose()


def cohomology_action_mod(a: ExactMatrix, k: int, n: int) -> ExactMatrix:
    """cohomology_action over Z/nZ; entries in [0, n)."""
    _check_degree(a, k)
    return wedge_power(mat_inverse_mod(a, n), k).transpose().reduce_mod(n)


def wedge_functoriality_check(a: ExactMatrix, b: ExactMatrix, k: int) -> bool:
    if a.dim != b.dim:
        raise DimensionMismatchError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return wedge_power(a @ b, k) == wedge_power(a, k) @ wedge_power(b, k)


# ── Scalars in the kernel of ∧^k ───────────────────────────────────

def wedge_kernel_scalars(k: int, ell: int) -> int:
    """Number of k-th roots of unity in Z_ell, i.e. of scalars killed by ∧^k."""
    if k < 1:
        raise PreconditionError("k must be positive")
    if not isprime(ell):
        raise NotPrimeError(f"{ell} is not prime")
    if ell == 2:
        return 2 if k % 2 == 0 else 1
    return gcd(k, ell - 1)


def wedge_is_injective_on_scalars(k: int, ell: int) -> bool:
    return wedge_kernel_scalars(k, ell) == 1
