"""Generators for the representation families used by the suites and ``gen``.

Randomness always comes from a ``random.Random(seed)`` owned by the caller or
built from the seed, so a (family, parameters, seed) triple names one file.
"""

from __future__ import annotations

import random
from typing import Optional, Sequence, Tuple

import numpy as np
from sympy import isprime

from cyclotomic import cyclotomic_prime_power
from errors import NotPrimeError, PreconditionError
from inertia import CoefficientMode, InertiaRep
from linalg import (
    ExactMatrix,
    companion_matrix,
    direct_sum,
    identity,
    standard_symplectic_form,
)

DEFAULT_ELL = 5
ENTRY_RANGE = (-2, 2)

FAMILIES = ("semistable", "briefly-unstable", "example62", "example62-sign")


# ── Random unimodular and symplectic conjugators ───────────────────

def _elementary_product(dim: int, rng: random.Random, steps: int,
                        pick) -> Tuple[ExactMatrix, ExactMatrix]:
    """P and P^-1 for a product of elementary steps; pick(rng) -> list of (i, j, c)."""
    p = [list(row) for row in identity(dim).rows]
    p_inv = [list(row) for row in identity(dim).rows]
    for _ in range(steps):
        for i, j, c in pick(rng):
            # P <- P (I + c e_ij): column j += c * column i
            for row in p:
                row[j] += c * row[i]
            # P^-1 <- (I - c e_ij) P^-1: row i -= c * row j
            p_inv[i] = [x - c * y for x, y in zip(p_inv[i], p_inv[j])]
    return ExactMatrix.from_rows(p), ExactMatrix.from_rows(p_inv)


def _nonzero_entry(rng: random.Random) -> int:
    lo, hi = ENTRY_RANGE
    return rng.choice([c for c in range(lo, hi + 1) if c])


def random_unimodular(dim: int, rng: random.Random, steps: Optional[int] = None) -> Tuple[ExactMatrix, ExactMatrix]:
    """(P, P^-1) with P a product of elementary integer matrices, entries of each step in [-2, 2]."""
    if dim < 2:
        return identity(dim), identity(dim)

    def pick(r: random.Random):
        i, j = r.sample(range(dim), 2)
        return [(i, j, _nonzero_entry(r))]

    return _elementary_product(dim, rng, dim if steps is None else steps, pick)


def random_symplectic(d: int, rng: random.Random, steps: Optional[int] = None) -> Tuple[ExactMatrix, ExactMatrix]:
    """(P, P^-1) in Sp(2d, Z) for the form [[0, I], [-I, 0]].

    Each step is a symmetric transvection [[I, S], [0, I]] or [[I, 0], [S, I]]
    with S supported on one symmetric pair of entries.
    """
    def pick(r: random.Random):
        i, j = r.randrange(d), r.randrange(d)
        c = _nonzero_entry(r)
        upper = r.random() < 0.5
        pairs = {(i, j), (j, i)}
        if upper:
            return [(a, d + b, c) for a, b in sorted(pairs)]
        return [(d + a, b, c) for a, b in sorted(pairs)]

    return _elementary_product(2 * d, rng, 2 * d if steps is None else steps, pick)


def random_unimodular_residue(dim: int, p: int, rng: random.Random,
                              steps: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    """random_unimodular reduced mod p, built directly on numpy arrays for large dim."""
    p_mat = np.identity(dim, dtype=np.int64)
    p_inv = np.identity(dim, dtype=np.int64)
    for _ in range(3 * dim if steps is None else steps):
        i, j = rng.sample(range(dim), 2)
        c = _nonzero_entry(rng)
        p_mat[:, j] = (p_mat[:, j] + c * p_mat[:, i]) % p
        p_inv[i, :] = (p_inv[i, :] - c * p_inv[j, :]) % p
    return p_mat, p_inv


def random_symmetric(d: int, rng: random.Random) -> ExactMatrix:
    lo, hi = ENTRY_RANGE
    b = [[0] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            b[i][j] = b[j][i] = rng.randint(lo, hi)
    return ExactMatrix.from_rows(b)


def random_unitriangular(dim: int, rng: random.Random) -> ExactMatrix:
    lo, hi = ENTRY_RANGE
    return ExactMatrix.from_rows(
        [1 if i == j else (rng.randint(lo, hi) if j > i else 0) for j in range(dim)]
        for i in range(dim)
    )


# ── Building blocks ────────────────────────────────────────────────

def symmetric_block_unipotent(b: ExactMatrix) -> ExactMatrix:
    """[[I, B], [0, I]]: symplectic for the standard form when B is symmetric, (g - 1)^2 = 0."""
    d = b.dim
    rows = []
    for i in range(2 * d):
        row = [1 if i == j else 0 for j in range(2 * d)]
        if i < d:
            row[d:] = b.rows[i]
        rows.append(row)
    return ExactMatrix.from_rows(rows)


def _coerce_b(d: int, b: Optional[Sequence[Sequence[int]]], rng: random.Random) -> ExactMatrix:
    if d < 1:
        raise PreconditionError(f"d must be a positive integer (got {d})")
    if b is None:
        return random_symmetric(d, rng)
    mat = ExactMatrix.from_rows(b)
    if mat.dim != d or mat.transpose() != mat:
        raise PreconditionError(f"B must be a symmetric {d}x{d} matrix")
    return mat


def _integer_mode(ell: int) -> CoefficientMode:
    if not isprime(ell):
        raise NotPrimeError(f"{ell} is not prime")
    return CoefficientMode.integer(ell)


# ── Families ───────────────────────────────────────────────────────

def gen_semistable_family(d: int, seed: int = 0, b: Optional[Sequence[Sequence[int]]] = None,
                          conjugate: bool = False, ell: int = DEFAULT_ELL) -> InertiaRep:
    """tame = [[I, B], [0, I]], optionally conjugated by a random symplectic matrix."""
    rng = random.Random(seed)
    mode = _integer_mode(ell)
    tame = symmetric_block_unipotent(_coerce_b(d, b, rng))
    if conjugate:
        p, p_inv = random_symplectic(d, rng)
        tame = p @ tame @ p_inv
    return InertiaRep(mode, tame, (), standard_symplectic_form(d), f"semistable d={d} seed={seed}")


def gen_briefly_unstable_family(d: int, seed: int = 0, b: Optional[Sequence[Sequence[int]]] = None,
                                conjugate: bool = False, ell: int = DEFAULT_ELL,
                                wild_sign: bool = False) -> InertiaRep:
    """tame = -[[I, B], [0, I]]; with wild_sign, tame = [[I, B], [0, I]] and one wild generator -I."""
    base = gen_semistable_family(d, seed, b, conjugate, ell)
    label = f"briefly-unstable d={d} seed={seed}" + (" wild-sign" if wild_sign else "")
    if wild_sign:
        return InertiaRep(base.mode, base.tame, (-identity(2 * d),), base.form, label)
    return InertiaRep(base.mode, -base.tame, (), base.form, label)


def gen_example62(ell: int, a: int = 1) -> InertiaRep:
    """tame = I_{2a} ⊕ C(Phi_ell): a good-reduction factor times an order-ell twist."""
    if not isprime(ell):
        raise NotPrimeError(f"{ell} is not prime")
    if ell == 2:
        raise PreconditionError("ell must be odd for the companion construction; use example62-sign for ell = 2")
    if a < 1:
        raise PreconditionError(f"a must be a positive integer (got {a})")
    tame = direct_sum(identity(2 * a), companion_matrix(cyclotomic_prime_power(ell, 1)))
    return InertiaRep(CoefficientMode.integer(ell), tame, (), None, f"example62 ell={ell} a={a}")


def gen_example62_sign(a: int = 1) -> InertiaRep:
    """The ell = 2 variant: tame = I_{2a} ⊕ (-I_2)."""
    if a < 1:
        raise PreconditionError(f"a must be a positive integer (got {a})")
    tame = direct_sum(identity(2 * a), -identity(2))
    return InertiaRep(CoefficientMode.integer(2), tame, (), None, f"example62-sign a={a}")
