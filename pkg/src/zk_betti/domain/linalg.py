"""
zk-betti - Exact Linear Algebra

Matrix rank over prime fields and over the rationals. Every homology
dimension in the package is computed from these two kernels; floating point
never enters a rank.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np
from sympy import isprime

from .errors import FieldError

MAX_PRIME = 1 << 31


class FieldKind(str, Enum):
    """Coefficient field families."""
    RATIONALS = "RATIONALS"
    PRIME_FIELD = "PRIME_FIELD"


def check_prime(p: int) -> int:
    """Validate a prime modulus in the supported range 2..2^31."""
    if not isinstance(p, (int, np.integer)) or isinstance(p, bool):
        raise FieldError(f"modulus must be an integer, got {p!r}")
    p = int(p)
    if p < 2 or p > MAX_PRIME or not isprime(p):
        raise FieldError(f"modulus {p} is not a prime in 2..2^31")
    return p


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: the rationals or F_p."""
    kind: FieldKind
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind == FieldKind.PRIME_FIELD:
            object.__setattr__(self, "p", check_prime(self.p))
        elif self.p is not None:
            raise FieldError("RATIONALS takes no modulus")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(FieldKind.RATIONALS)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(FieldKind.PRIME_FIELD, p)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse the CLI/document grammar: ``q`` or ``f<p>`` (``f2``, ``f3``, ...)."""
        name = text.strip().lower()
        if name in {"q", "qq", "rationals"}:
            return cls.rationals()
        if name.startswith("f") and name[1:].isdigit():
            return cls.prime(int(name[1:]))
        raise FieldError(f"unknown field {text!r}; expected q or f<prime>")

    @property
    def name(self) -> str:
        return "q" if self.kind == FieldKind.RATIONALS else f"f{self.p}"

    def __str__(self) -> str:
        return self.name


DEFAULT_FIELD = FieldSpec.prime(2)


@dataclass(frozen=True, eq=False)
class IntegerMatrix:
    """Dense matrix of exact (arbitrary precision) integers.

    ``entries`` is a numpy object array of shape (rows, cols) holding Python
    ints, so products and Bareiss quotients never overflow.
    """
    rows: int
    cols: int
    entries: np.ndarray

    def __post_init__(self):
        if self.entries.shape != (self.rows, self.cols):
            raise ValueError(
                f"entries shape {self.entries.shape} does not match ({self.rows}, {self.cols})"
            )

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols, np.zeros((rows, cols), dtype=object))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntegerMatrix":
        data = [[int(x) for x in row] for row in rows]
        width = cols if cols is not None else (len(data[0]) if data else 0)
        entries = np.zeros((len(data), width), dtype=object)
        for r, row in enumerate(data):
            if len(row) != width:
                raise ValueError("ragged rows")
            entries[r, :] = row
        return cls(len(data), width, entries)

    def to_rows(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.entries]

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(self.cols, self.rows, self.entries.T.copy())

    def take_columns(self, columns: Iterable[int]) -> "IntegerMatrix":
        idx = list(columns)
        return IntegerMatrix(self.rows, len(idx), self.entries[:, idx].copy())

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}")
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return IntegerMatrix.zeros(self.rows, other.cols)
        return IntegerMatrix(self.rows, other.cols, self.entries.dot(other.entries))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and self.to_rows() == other.to_rows()

    def is_zero(self) -> bool:
        return not any(x != 0 for x in self.entries.flat)


def rank_mod_p(M: IntegerMatrix, p: int) -> int:
    """Rank of M with entries reduced mod p.

    Column-by-column Gaussian elimination with the first nonzero entry as
    pivot. Residues stay below 2^31, so int64 products cannot overflow.
    """
    p = check_prime(p)
    if M.rows == 0 or M.cols == 0:
        return 0
    A = np.array([[int(x) % p for x in row] for row in M.entries], dtype=np.int64)
    m, n = A.shape
    r = 0
    for c in range(n):
        nonzero = np.flatnonzero(A[r:, c])
        if nonzero.size == 0:
            continue
        pivot = r + int(nonzero[0])
        if pivot != r:
            A[[r, pivot], :] = A[[pivot, r], :]
        inv = pow(int(A[r, c]), -1, p)
        A[r, c:] = (A[r, c:] * inv) % p
        below = r + 1 + np.flatnonzero(A[r + 1:, c])
        if below.size:
            factors = A[below, c].reshape(-1, 1)
            A[below, c:] = (A[below, c:] - factors * A[r, c:]) % p
        r += 1
        if r == m:
            break
    return r


def rank_rational(M: IntegerMatrix) -> int:
    """Exact rank over the rationals by fraction-free (Bareiss) elimination."""
    if M.rows == 0 or M.cols == 0:
        return 0
    A = M.entries.copy()
    m, n = A.shape
    r = 0
    prev = 1
    for c in range(n):
        pivot = next((i for i in range(r, m) if A[i, c] != 0), None)
        if pivot is None:
            continue
        if pivot != r:
            A[[r, pivot], :] = A[[pivot, r], :]
        lead = A[r, c]
        for i in range(r + 1, m):
            # Bareiss step: the division by the previous pivot is exact.
            A[i, c + 1:] = (A[i, c + 1:] * lead - A[i, c] * A[r, c + 1:]) // prev
            A[i, c] = 0
        prev = lead
        r += 1
        if r == m:
            break
    return r


def rank(M: IntegerMatrix, field: FieldSpec) -> int:
    """Rank of M over ``field``."""
    if field.kind == FieldKind.RATIONALS:
        return rank_rational(M)
    return rank_mod_p(M, field.p)
