"""Exact integer and residue-class matrices and integer polynomials.

Integer matrices stand in for ℓ-adic operators: every "lies in n times the
matrix ring" condition becomes entrywise divisibility of an exact integer
matrix, so no truncated ℓ-adic arithmetic is ever needed. Exact work stays on
Python ints; prime-field elimination and powers go through numpy.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import reduce
from math import gcd
from operator import mul
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from sympy import isprime
from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from errors import (
    DimensionCapExceeded,
    DimensionMismatchError,
    NotInvertibleError,
    NotPrimeError,
    PreconditionError,
    RepresentationFileError,
)

_log = logging.getLogger("monodromy.linalg")

Row = Tuple[int, ...]


# ── Polynomials ────────────────────────────────────────────────────

@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients in ascending degree, trailing zeros trimmed."""

    coefficients: Tuple[int, ...]

    def __post_init__(self):
        if self.coefficients and self.coefficients[-1] == 0:
            raise ValueError("IntPolynomial coefficients must be trimmed; use from_coefficients()")

    @classmethod
    def from_coefficients(cls, coefficients: Iterable[int]) -> "IntPolynomial":
        coeffs = [int(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return cls(tuple(coeffs))

    @classmethod
    def constant(cls, c: int) -> "IntPolynomial":
        return cls.from_coefficients([c])

    @classmethod
    def x(cls) -> "IntPolynomial":
        return cls((0, 1))

    @classmethod
    def x_minus(cls, c: int) -> "IntPolynomial":
        """The linear polynomial x - c."""
        return cls.from_coefficients([-c, 1])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def is_monic(self) -> bool:
        return bool(self.coefficients) and self.coefficients[-1] == 1

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coefficients), len(other.coefficients))
        a = self.coefficients + (0,) * (n - len(self.coefficients))
        b = other.coefficients + (0,) * (n - len(other.coefficients))
        return IntPolynomial.from_coefficients(x + y for x, y in zip(a, b))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        if self.is_zero() or other.is_zero():
            return IntPolynomial(())
        out = [0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a:
                for j, b in enumerate(other.coefficients):
                    out[i + j] += a * b
        return IntPolynomial.from_coefficients(out)

    def __pow__(self, e: int) -> "IntPolynomial":
        if e < 0:
            raise ValueError("negative polynomial power")
        result = IntPolynomial.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divmod_monic(self, divisor: "IntPolynomial") -> Tuple["IntPolynomial", "IntPolynomial"]:
        """Exact division by a monic divisor: returns (quotient, remainder)."""
        if not divisor.is_monic():
            raise PreconditionError("polynomial division requires a monic divisor")
        rem = list(self.coefficients)
        dd = divisor.degree
        if len(rem) - 1 < dd:
            return IntPolynomial(()), self
        quot = [0] * (len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i]
            if c:
                quot[i - dd] = c
                for j, d in enumerate(divisor.coefficients):
                    rem[i - dd + j] -= c * d
        return IntPolynomial.from_coefficients(quot), IntPolynomial.from_coefficients(rem[:dd])

    def rem_monic(self, divisor: "IntPolynomial") -> "IntPolynomial":
        return self.divmod_monic(divisor)[1]

    def divisible_by(self, divisor: "IntPolynomial") -> bool:
        return self.rem_monic(divisor).is_zero()

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coefficients[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


# ── Matrices ───────────────────────────────────────────────────────

def _mul_rows(a: Sequence[Row], b: Sequence[Row]) -> Tuple[Row, ...]:
    cols = tuple(zip(*b))
    return tuple(tuple(sum(map(mul, row, col)) for col in cols) for row in a)


@dataclass(frozen=True)
class ExactMatrix:
    """Square matrix of arbitrary-precision integers, row-major and immutable."""

    rows: Tuple[Row, ...]

    def __post_init__(self):
        n = len(self.rows)
        if n == 0:
            raise DimensionMismatchError("matrix must have dimension at least 1")
        for row in self.rows:
            if len(row) != n:
                raise DimensionMismatchError(f"matrix is not square: row of length {len(row)} in a {n}-row matrix")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "ExactMatrix":
        return cls(tuple(tuple(int(v) for v in row) for row in rows))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        return self.rows[i][j]

    def _check_same_dim(self, other: "ExactMatrix"):
        if self.dim != other.dim:
            raise DimensionMismatchError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same_dim(other)
        return ExactMatrix(_mul_rows(self.rows, other.rows))

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same_dim(other)
        return ExactMatrix(tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same_dim(other)
        return ExactMatrix(tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __neg__(self) -> "ExactMatrix":
        return self.scale(-1)

    def scale(self, c: int) -> "ExactMatrix":
        return ExactMatrix(tuple(tuple(c * x for x in row) for row in self.rows))

    def shift(self, c: int) -> "ExactMatrix":
        """self + c*I."""
        return ExactMatrix(tuple(
            tuple(x + c if i == j else x for j, x in enumerate(row))
            for i, row in enumerate(self.rows)
        ))

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(tuple(zip(*self.rows)))

    def reduce_mod(self, n: int) -> "ExactMatrix":
        return ExactMatrix(tuple(tuple(x % n for x in row) for row in self.rows))

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.rows for x in row)

    def is_identity(self) -> bool:
        return all(x == (1 if i == j else 0) for i, row in enumerate(self.rows) for j, x in enumerate(row))

    def to_json(self) -> List[List[str]]:
        return [[str(x) for x in row] for row in self.rows]

    def __str__(self) -> str:
        width = max(len(str(x)) for row in self.rows for x in row)
        return "\n".join("[" + " ".join(str(x).rjust(width) for x in row) + "]" for row in self.rows)


def identity(n: int) -> ExactMatrix:
    return ExactMatrix(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))


def zero(n: int) -> ExactMatrix:
    return ExactMatrix(tuple((0,) * n for _ in range(n)))


def jordan_block(size: int, eigenvalue: int = 1) -> ExactMatrix:
    return ExactMatrix(tuple(
        tuple(eigenvalue if i == j else (1 if j == i + 1 else 0) for j in range(size))
        for i in range(size)
    ))


def companion_matrix(poly: IntPolynomial) -> ExactMatrix:
    """Companion matrix with ones on the subdiagonal and -coefficients in the last column."""
    if not poly.is_monic() or poly.degree < 1:
        raise PreconditionError("companion matrix needs a monic polynomial of degree >= 1")
    n = poly.degree
    rows = []
    for i in range(n):
        row = [0] * n
        if i > 0:
            row[i - 1] = 1
        row[n - 1] = -poly.coefficients[i]
        rows.append(tuple(row))
    return ExactMatrix(tuple(rows))


def direct_sum(*blocks: ExactMatrix) -> ExactMatrix:
    n = sum(b.dim for b in blocks)
    rows = []
    offset = 0
    for b in blocks:
        for row in b.rows:
            rows.append((0,) * offset + row + (0,) * (n - offset - b.dim))
        offset += b.dim
    return ExactMatrix(tuple(rows))


def standard_symplectic_form(d: int) -> ExactMatrix:
    """J0 = [[0, I_d], [-I_d, 0]]."""
    n = 2 * d
    rows = []
    for i in range(n):
        row = [0] * n
        if i < d:
            row[i + d] = 1
        else:
            row[i - d] = -1
        rows.append(tuple(row))
    return ExactMatrix(tuple(rows))


# ── Matrix JSON literal ────────────────────────────────────────────

def _parse_entry(value) -> int:
    if isinstance(value, bool):
        raise RepresentationFileError("matrix entries must be decimal integer strings, not booleans")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        text = value.strip()
        digits = text[1:] if text[:1] in "+-" else text
        if digits.isdigit() and digits.isascii():
            return int(text)
    raise RepresentationFileError(f"matrix entry {value!r} is not a decimal integer string")


def matrix_from_json(data, max_dim: int = 0) -> ExactMatrix:
    """Parse the array-of-arrays-of-strings literal; max_dim = 0 means no cap."""
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise RepresentationFileError("a matrix must be a non-empty JSON array of arrays")
    if max_dim and len(data) > max_dim:
        raise DimensionCapExceeded(
            f"matrix dimension {len(data)} exceeds the configured cap {max_dim} "
            f"(raise MONODROMY_MAX_DIM to allow it)"
        )
    try:
        return ExactMatrix.from_rows([_parse_entry(v) for v in row] for row in data)
    except DimensionMismatchError as e:
        raise RepresentationFileError(str(e)) from e


# ── Exact arithmetic ───────────────────────────────────────────────

def mat_mul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    return a @ b


def mat_pow(a: ExactMatrix, e: int) -> ExactMatrix:
    """a**e by repeated squaring; a**0 = I."""
    if e < 0:
        raise PreconditionError("mat_pow needs a nonnegative exponent")
    result = identity(a.dim)
    base = a
    while e:
        if e & 1:
            result = result @ base
        e >>= 1
        if e:
            base = base @ base
    return result


def mat_mul_mod(a: ExactMatrix, b: ExactMatrix, n: int) -> ExactMatrix:
    a._check_same_dim(b)
    return ExactMatrix(tuple(tuple(x % n for x in row) for row in _mul_rows(a.rows, b.rows)))


def mat_pow_mod(a: ExactMatrix, e: int, n: int) -> ExactMatrix:
    if e < 0:
        raise PreconditionError("mat_pow_mod needs a nonnegative exponent")
    result = identity(a.dim).reduce_mod(n)
    base = a.reduce_mod(n)
    while e:
        if e & 1:
            result = mat_mul_mod(result, base, n)
        e >>= 1
        if e:
            base = mat_mul_mod(base, base, n)
    return result


def _domain_matrix(rows: Sequence[Sequence[int]], domain=ZZ) -> DomainMatrix:
    return DomainMatrix([[domain(int(v)) for v in row] for row in rows], (len(rows), len(rows[0])), domain)


def charpoly(a: ExactMatrix) -> IntPolynomial:
    """det(xI - a), division free (Berkowitz over ZZ)."""
    descending = _domain_matrix(a.rows).charpoly()
    return IntPolynomial.from_coefficients(int(c) for c in reversed(descending))


def det(a: ExactMatrix) -> int:
    return int(_domain_matrix(a.rows).det())


def entries_divisible(a: ExactMatrix, n: int) -> bool:
    """True iff a lies in n * M(Z), i.e. every entry is 0 mod n."""
    if n < 1:
        raise PreconditionError("entries_divisible needs n >= 1")
    return all(x % n == 0 for row in a.rows for x in row)


def _require_prime(ell: int):
    if not isprime(ell):
        raise NotPrimeError(f"{ell} is not prime")


def _cayley_hamilton_adjoint(a: ExactMatrix, poly: IntPolynomial, n: int = 0) -> ExactMatrix:
    """S with a*S = -c0*I, built by Horner on the charpoly; entries reduced mod n if n."""
    c = poly.coefficients
    s = identity(a.dim)
    for i in range(a.dim - 1, 0, -1):
        s = (s @ a).shift(c[i])
        if n:
            s = s.reduce_mod(n)
    return s


def mat_inverse_unimodular(a: ExactMatrix) -> ExactMatrix:
    """Exact inverse of a matrix with determinant +1 or -1."""
    poly = charpoly(a)
    c0 = poly.coefficients[0] if poly.coefficients else 0
    if c0 not in (1, -1):
        d = c0 if a.dim % 2 == 0 else -c0
        raise NotInvertibleError(f"matrix is not invertible over the coefficient ring Z (det = {d})")
    # a^{-1} = -S / c0 and 1/c0 = c0 for c0 = ±1
    return _cayley_hamilton_adjoint(a, poly).scale(-c0)


def mat_inverse_mod(a: ExactMatrix, n: int) -> ExactMatrix:
    """Inverse over Z/nZ; entries in [0, n)."""
    if n < 1:
        raise PreconditionError("modulus must be positive")
    if n == 1:
        return zero(a.dim)
    poly = charpoly(a)
    c0 = poly.coefficients[0] if poly.coefficients else 0
    if gcd(c0, n) != 1:
        raise NotInvertibleError(f"matrix is not invertible over the coefficient ring Z/{n}Z (det shares a factor with {n})")
    factor = (-pow(c0, -1, n)) % n
    return _cayley_hamilton_adjoint(a, poly, n).scale(factor).reduce_mod(n)


def is_symplectic(a: ExactMatrix, form: ExactMatrix) -> bool:
    """True iff a^T * form * a == form."""
    a._check_same_dim(form)
    if form.transpose() != -form:
        raise PreconditionError("symplectic form must be antisymmetric")
    if det(form) == 0:
        raise PreconditionError("symplectic form is degenerate")
    return a.transpose() @ form @ a == form


def is_symplectic_mod(a: ExactMatrix, form: ExactMatrix, n: int) -> bool:
    a._check_same_dim(form)
    lhs = mat_mul_mod(mat_mul_mod(a.transpose(), form, n), a, n)
    return lhs == form.reduce_mod(n)


def rank_over_rationals(rows: Sequence[Sequence[int]]) -> int:
    """Exact rank over Q of a rectangular integer matrix."""
    if not rows or not rows[0]:
        return 0
    return int(_domain_matrix(rows, ZZ).convert_to(QQ).rank())


# ── Prime-field linear algebra (numpy) ─────────────────────────────

def residue_array(rows: Sequence[Sequence[int]], p: int) -> np.ndarray:
    """Rows reduced mod p as a numpy array.

    int64 is exact while width * (p-1)^2 stays below 2**62; larger primes fall
    back to object arrays of Python ints.
    """
    width = len(rows[0]) if rows else 0
    dtype = np.int64 if max(width, 1) * (p - 1) ** 2 < 2 ** 62 else object
    if dtype is object:
        _log.debug("modulus %d too large for int64 products at width %d; using object arrays", p, width)
    return np.array([[int(v) % p for v in row] for row in rows], dtype=dtype)


def residue_matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a @ b) % p


def residue_matpow(a: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.identity(a.shape[0], dtype=a.dtype) % p
    base = a
    while e:
        if e & 1:
            result = residue_matmul(result, base, p)
        e >>= 1
        if e:
            base = residue_matmul(base, base, p)
    return result


def residue_rank(m: np.ndarray, p: int) -> int:
    """Rank over F_p by Gaussian elimination; m must already be reduced mod p."""
    m = m.copy()
    nrows, ncols = m.shape
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        nonzero = np.nonzero(m[rank:, col])[0]
        if nonzero.size == 0:
            continue
        pivot = rank + int(nonzero[0])
        if pivot != rank:
            m[[rank, pivot]] = m[[pivot, rank]]
        inv = pow(int(m[rank, col]), -1, p)
        m[rank] = (m[rank] * inv) % p
        factors = m[:, col].copy()
        factors[rank] = 0
        m = (m - np.outer(factors, m[rank])) % p
        rank += 1
    return rank


def rank_mod_prime(a: ExactMatrix, ell: int) -> int:
    _require_prime(ell)
    return residue_rank(residue_array(a.rows, ell), ell)


def rank_rows_mod_prime(rows: Sequence[Sequence[int]], ell: int) -> int:
    """rank_mod_prime for a rectangular row list."""
    _require_prime(ell)
    if not rows:
        return 0
    return residue_rank(residue_array(rows, ell), ell)


def kernel_dim_mod_prime(a: ExactMatrix, ell: int) -> int:
    return a.dim - rank_mod_prime(a, ell)


def product(matrices: Sequence[ExactMatrix], dim: int) -> ExactMatrix:
    """Left-to-right product; the identity for an empty list."""
    return reduce(mat_mul, matrices, identity(dim))
