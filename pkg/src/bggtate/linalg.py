"""Exact dense linear algebra over GF(p) and Q.

Matrices are plain numpy arrays: ``int64`` with entries in ``[0, p)`` for a
prime field, ``object`` arrays of :class:`fractions.Fraction` for the
rationals.  Vectors are rows; a linear map ``A -> B`` is an
``(dim A) x (dim B)`` matrix acting by ``x @ M``, so composition is the
left-to-right product.

A :class:`Field` instance carries the characteristic and every operation
goes through it.  :class:`Matrix` wraps an array together with its field for
the public ``rref_rank`` entry point, where characteristic mismatches are
detected.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

DEFAULT_CHAR = 32003


class CharacteristicMismatch(ValueError):
    """Raised when objects over different fields are combined."""


class InconsistentSystem(ValueError):
    """Raised by :meth:`Field.solve_left` when no solution exists."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    q = 3
    while q * q <= p:
        if p % q == 0:
            return False
        q += 2
    return True


@dataclass(frozen=True)
class Field:
    """A prime field GF(char), or Q when ``char == 0``."""

    char: int = DEFAULT_CHAR

    def __post_init__(self):
        if self.char != 0:
            if not (_is_prime(self.char) and self.char < 2**31):
                raise ValueError(f"characteristic must be 0 or a prime < 2^31, got {self.char}")

    @property
    def is_prime_field(self) -> bool:
        return self.char != 0

    @property
    def dtype(self):
        # int64 matmul stays exact only while p^2 * (inner dim) < 2^63
        return np.int64 if self.is_prime_field else object

    def __str__(self) -> str:
        return f"GF({self.char})" if self.char else "QQ"

    # -- scalars -------------------------------------------------------------

    def scalar(self, x):
        """Coerce an int, Fraction or ``"p/q"`` string into the field."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.char:
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.char)) % self.char
            return int(x) % self.char
        return Fraction(x)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.char:
            return pow(int(x), -1, self.char)
        return 1 / Fraction(x)

    def neg(self, x):
        return (-x) % self.char if self.char else -x

    # -- arrays --------------------------------------------------------------

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        if self.char:
            return np.zeros((rows, cols), dtype=np.int64)
        out = np.empty((rows, cols), dtype=object)
        out.fill(Fraction(0))
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = 1 if self.char else Fraction(1)
        return out

    def array(self, data, shape=None) -> np.ndarray:
        """Build a field matrix from nested lists of ints/Fractions/strings."""
        raw = np.array(data, dtype=object)
        if shape is not None:
            raw = raw.reshape(shape)
        if raw.ndim == 1:
            raw = raw.reshape(1, -1) if raw.size else raw.reshape(0, 0)
        out = self.zeros(*raw.shape)
        for idx, v in np.ndenumerate(raw):
            out[idx] = self.scalar(v)
        return out

    def reduce(self, a: np.ndarray) -> np.ndarray:
        if self.char:
            return np.mod(a, self.char)
        return a

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] != b.shape[0]:
            raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
        if not self.char:
            if a.size == 0 or b.size == 0:
                return self.zeros(a.shape[0], b.shape[1])
            return a @ b
        inner = a.shape[1]
        p = self.char
        # float64 BLAS is exact while every partial sum stays below 2^53
        step = (2**53) // ((p - 1) * (p - 1) + 1)
        if step >= 1:
            af, bf = a.astype(np.float64), b.astype(np.float64)
            out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
            for s in range(0, inner, step):
                out = np.mod(out + (af[:, s:s + step] @ bf[s:s + step]).astype(np.int64), p)
            return out
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for s in range(inner):
            out = np.mod(out + np.outer(a[:, s], b[s]) % p, p)
        return out

    def add(self, a, b):
        return self.reduce(a + b)

    def sub(self, a, b):
        return self.reduce(a - b)

    def scale(self, c, a):
        return self.reduce(self.scalar(c) * a)

    def is_zero(self, a: np.ndarray) -> bool:
        return not np.any(a != 0)

    def random(self, rng: np.random.Generator, rows: int, cols: int, bound: int | None = None):
        """Uniform random matrix (entries in [-bound, bound] for Q)."""
        if self.char:
            return rng.integers(0, self.char, size=(rows, cols), dtype=np.int64)
        b = bound or 3
        return self.array(rng.integers(-b, b + 1, size=(rows, cols)).tolist(), shape=(rows, cols))

    # -- elimination ---------------------------------------------------------

    def rref(self, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
        """Reduced row echelon form and pivot columns.

        Pivots are the first nonzero entry of each column among the rows not
        yet used, scanning columns left to right and rows top to bottom.
        """
        r_mat = a.copy()
        rows, cols = r_mat.shape
        pivots: list[int] = []
        r = 0
        p = self.char
        for c in range(cols):
            if r == rows:
                break
            nz = np.flatnonzero(r_mat[r:, c] != 0)
            if nz.size == 0:
                continue
            k = r + int(nz[0])
            if k != r:
                r_mat[[r, k]] = r_mat[[k, r]]
            inv = self.inv(r_mat[r, c])
            if p:
                r_mat[r, c:] = np.mod(r_mat[r, c:] * inv, p)
            else:
                r_mat[r, c:] = r_mat[r, c:] * inv
            col = r_mat[:, c].copy()
            col[r] = 0
            hit = np.flatnonzero(col != 0)
            if hit.size:
                upd = np.outer(col[hit], r_mat[r, c:])
                if p:
                    r_mat[hit, c:] = np.mod(r_mat[hit, c:] - upd, p)
                else:
                    r_mat[hit, c:] = r_mat[hit, c:] - upd
            pivots.append(c)
            r += 1
        return r_mat, pivots

    def rank(self, a: np.ndarray) -> int:
        if a.size == 0:
            return 0
        # eliminate along the shorter side
        if a.shape[0] > a.shape[1]:
            a = a.T
        return len(self.rref(a)[1])

    def right_kernel(self, a: np.ndarray) -> np.ndarray:
        """Rows spanning ``{x : a @ x^T = 0}``."""
        cols = a.shape[1]
        r_mat, pivots = self.rref(a)
        pset = set(pivots)
        free = [c for c in range(cols) if c not in pset]
        out = self.zeros(len(free), cols)
        if free:
            out[np.arange(len(free)), free] = 1 if self.char else Fraction(1)
            if pivots:
                out[:, pivots] = self.reduce(-r_mat[: len(pivots)][:, free].T)
        return out

    def left_kernel(self, a: np.ndarray) -> np.ndarray:
        """Rows spanning ``{x : x @ a = 0}``, returned in RREF."""
        k = self.right_kernel(a.T)
        return self.rref(k)[0] if k.shape[0] else k

    def row_space(self, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
        """RREF basis of the row space (zero rows dropped) and its pivots."""
        r_mat, piv = self.rref(a)
        return r_mat[: len(piv)], piv

    def solve_left(self, b: np.ndarray, r: np.ndarray) -> np.ndarray:
        """Some ``x`` with ``x @ b = r``; raises :class:`InconsistentSystem`."""
        m, k = b.shape
        if r.shape[1] != k:
            raise ValueError("shape mismatch in solve_left")
        if r.shape[0] == 0:
            return self.zeros(0, m)
        # [b^T | r^T] eliminated on the b^T block
        aug = np.concatenate([b.T, r.T], axis=1)
        red, piv = self.rref(aug)
        if piv and piv[-1] >= m:
            raise InconsistentSystem("no solution to x @ b = r")
        x = self.zeros(m, r.shape[0])
        for i, pc in enumerate(piv):
            x[pc] = red[i, m:]
        if not self.is_zero(red[len(piv):, m:]):
            raise InconsistentSystem("no solution to x @ b = r")
        return x.T.copy()

    def inverse(self, a: np.ndarray) -> np.ndarray:
        n = a.shape[0]
        if a.shape != (n, n):
            raise ValueError("inverse of a non-square matrix")
        aug = np.concatenate([a, self.eye(n)], axis=1)
        red, piv = self.rref(aug)
        if piv[:n] != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return red[:, n:].copy()

    def coordinates(self, basis_rref: np.ndarray, pivots: list[int], v: np.ndarray) -> np.ndarray:
        """Coordinates of rows ``v`` in an RREF basis (rows must lie in its span)."""
        return v[:, pivots].copy()


class RrefResult(NamedTuple):
    rank: int
    rref: "Matrix"
    kernel_basis: "Matrix"
    pivot_cols: list[int]


@dataclass(frozen=True, eq=False)
class Matrix:
    """A dense matrix tagged with its field."""

    field: Field
    data: np.ndarray = dc_field(repr=False)

    @classmethod
    def from_rows(cls, field: Field, rows, ncols: int | None = None) -> "Matrix":
        rows = list(rows)
        if not rows:
            return cls(field, field.zeros(0, ncols or 0))
        return cls(field, field.array(rows))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def _check(self, other: "Matrix"):
        if self.field != other.field:
            raise CharacteristicMismatch(f"{self.field} vs {other.field}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix(self.field, self.field.mul(self.data, other.data))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix(self.field, self.field.add(self.data, other.data))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.data.shape == other.data.shape
                and bool(np.all(self.data == other.data)))

    def __hash__(self):
        return hash((self.field, self.data.shape, tuple(self.data.ravel().tolist())))

    def tolist(self):
        return self.data.tolist()

    def permute_rows(self, perm) -> "Matrix":
        return Matrix(self.field, self.data[list(perm)])

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.data.T.copy())


def rref_rank(a: Matrix, *others: Matrix) -> RrefResult:
    """Rank, RREF, left-kernel basis and pivot columns of ``a``.

    ``kernel_basis`` rows span ``{x : x @ a = 0}``.  Extra matrices may be
    passed to assert that they share ``a``'s field.
    """
    for o in others:
        a._check(o)
    f = a.field
    red, piv = f.rref(a.data)
    ker = f.left_kernel(a.data) if a.rows else f.zeros(0, 0)
    return RrefResult(len(piv), Matrix(f, red), Matrix(f, ker), piv)
