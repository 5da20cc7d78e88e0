"""Exact scalar rings (prime field, big integers) and dense linear algebra.

Everything here is exact: prime-field elements are canonical representatives
in [0, p), integer work never leaves the integers (fraction-free
elimination).  All values are immutable and all operations are pure
functions, so results may be shared freely across threads.

A vectorized elimination kernel (numpy int64 with split-limb products)
accelerates determinants modulo the default prime 2^61 - 1; the portable
pure-Python path covers every other modulus and doubles as the reference
implementation in cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    ArityMismatch,
    InvalidInput,
    InvalidModulus,
    InvalidShape,
    InvalidWord,
)
from .words import Word

try:
    import numpy as _np
except ImportError:  # pragma: no cover - numpy is a declared dependency
    _np = None

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover - optional accelerator
    _mpz = int

MERSENNE61 = (1 << 61) - 1

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def int_to_decimal(x: int) -> str:
    """Decimal string for integers of any size.

    str() on huge ints trips the interpreter's conversion-digit limit;
    chunking through divmod by 10^3000 stays under it at every step.
    """
    if -(10**3000) < x < 10**3000:
        return str(x)
    sign = "-" if x < 0 else ""
    x = abs(x)
    base = 10**3000
    chunks = []
    while x:
        x, r = divmod(x, base)
        chunks.append(r)
    head = str(chunks[-1])
    rest = "".join(str(c).zfill(3000) for c in reversed(chunks[:-1]))
    return sign + head + rest


def decimal_to_int(s: str) -> int:
    """Inverse of int_to_decimal, likewise immune to the digit limit."""
    s = s.strip()
    sign = -1 if s.startswith("-") else 1
    digits = s.lstrip("+-")
    if len(digits) <= 4000:
        return sign * int(digits)
    out = 0
    for i in range(0, len(digits), 3000):
        chunk = digits[i : i + 3000]
        out = out * 10 ** len(chunk) + int(chunk)
    return sign * out


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for all n < 3.3 * 10^24."""
    if n < 2:
        return False
    for small in _MR_WITNESSES:
        if n % small == 0:
            return n == small
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class ScalarRing:
    """Either F_p for a prime p < 2^62 or the ring of arbitrary integers."""

    kind: str  # "prime_field" | "big_integer"
    p: int | None = None

    def __post_init__(self):
        if self.kind == "prime_field":
            if self.p is None or self.p >= (1 << 62) or not is_prime(self.p):
                raise InvalidModulus(f"modulus must be a prime < 2^62, got {self.p}")
        elif self.kind == "big_integer":
            if self.p is not None:
                raise InvalidInput("big_integer ring takes no modulus")
        else:
            raise InvalidInput(f"unknown ring kind {self.kind!r}")

    def canon(self, x: int) -> int:
        return x % self.p if self.kind == "prime_field" else int(x)

    def to_json(self) -> dict:
        if self.kind == "prime_field":
            return {"kind": "prime_field", "p": str(self.p)}
        return {"kind": "big_integer"}

    @staticmethod
    def from_json(data: dict) -> "ScalarRing":
        if data["kind"] == "prime_field":
            return ScalarRing("prime_field", int(data["p"]))
        return ScalarRing("big_integer")


def prime_field(p: int) -> ScalarRing:
    return ScalarRing("prime_field", p)


def big_integer() -> ScalarRing:
    return ScalarRing("big_integer")


@dataclass(frozen=True)
class Matrix:
    """Dense matrix with row-major entries over a ScalarRing."""

    n_rows: int
    n_cols: int
    entries: tuple[int, ...]
    ring: ScalarRing

    def __post_init__(self):
        if self.n_rows < 1 or self.n_cols < 1:
            raise InvalidShape(f"bad shape {self.n_rows}x{self.n_cols}")
        if len(self.entries) != self.n_rows * self.n_cols:
            raise InvalidShape(
                f"{self.n_rows}x{self.n_cols} matrix needs "
                f"{self.n_rows * self.n_cols} entries, got {len(self.entries)}"
            )

    @staticmethod
    def from_rows(rows: list[list[int]], ring: ScalarRing) -> "Matrix":
        n_rows = len(rows)
        n_cols = len(rows[0])
        if any(len(r) != n_cols for r in rows):
            raise InvalidShape("ragged rows")
        entries = tuple(ring.canon(x) for row in rows for x in row)
        return Matrix(n_rows, n_cols, entries, ring)

    @staticmethod
    def identity(n: int, ring: ScalarRing) -> "Matrix":
        return Matrix(
            n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)), ring
        )

    @staticmethod
    def unit(n: int, i: int, j: int, ring: ScalarRing) -> "Matrix":
        """Elementary matrix e_{ij}, 1-based indices."""
        if not (1 <= i <= n and 1 <= j <= n):
            raise InvalidShape(f"unit position ({i}, {j}) outside [1, {n}]^2")
        entries = [0] * (n * n)
        entries[(i - 1) * n + (j - 1)] = 1
        return Matrix(n, n, tuple(entries), ring)

    @staticmethod
    def zeros(n: int, ring: ScalarRing) -> "Matrix":
        return Matrix(n, n, (0,) * (n * n), ring)

    @property
    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    def entry(self, i: int, j: int) -> int:
        """0-based accessor."""
        return self.entries[i * self.n_cols + j]

    def rows(self) -> list[list[int]]:
        nc = self.n_cols
        return [list(self.entries[r * nc : (r + 1) * nc]) for r in range(self.n_rows)]

    def transpose(self) -> "Matrix":
        return Matrix(
            self.n_cols,
            self.n_rows,
            tuple(
                self.entries[r * self.n_cols + c]
                for c in range(self.n_cols)
                for r in range(self.n_rows)
            ),
            self.ring,
        )

    def scale(self, c: int) -> "Matrix":
        ring = self.ring
        return Matrix(
            self.n_rows,
            self.n_cols,
            tuple(ring.canon(c * x) for x in self.entries),
            ring,
        )

    def add(self, other: "Matrix") -> "Matrix":
        self._check_compatible(other, same_shape=True)
        ring = self.ring
        return Matrix(
            self.n_rows,
            self.n_cols,
            tuple(ring.canon(a + b) for a, b in zip(self.entries, other.entries)),
            ring,
        )

    def mul(self, other: "Matrix") -> "Matrix":
        self._check_compatible(other)
        if self.n_cols != other.n_rows:
            raise InvalidShape(
                f"cannot multiply {self.n_rows}x{self.n_cols} by "
                f"{other.n_rows}x{other.n_cols}"
            )
        n, mid, m = self.n_rows, self.n_cols, other.n_cols
        a, b = self.entries, other.entries
        out = []
        if self.ring.kind == "prime_field":
            p = self.ring.p
            for i in range(n):
                arow = a[i * mid : (i + 1) * mid]
                for j in range(m):
                    out.append(
                        sum(arow[k] * b[k * m + j] for k in range(mid)) % p
                    )
        else:
            for i in range(n):
                arow = a[i * mid : (i + 1) * mid]
                for j in range(m):
                    out.append(sum(arow[k] * b[k * m + j] for k in range(mid)))
        return Matrix(n, m, tuple(out), self.ring)

    def _check_compatible(self, other: "Matrix", same_shape: bool = False):
        if self.ring != other.ring:
            raise InvalidInput("ring mismatch")
        if same_shape and (
            self.n_rows != other.n_rows or self.n_cols != other.n_cols
        ):
            raise InvalidShape("shape mismatch")

    def to_json(self) -> dict:
        if not self.is_square:
            raise InvalidShape("only square matrices serialize")
        return {
            "n": self.n_rows,
            "ring": self.ring.to_json(),
            "entries": [int_to_decimal(x) for x in self.entries],
        }

    @staticmethod
    def from_json(data: dict) -> "Matrix":
        ring = ScalarRing.from_json(data["ring"])
        n = int(data["n"])
        return Matrix(
            n, n, tuple(ring.canon(decimal_to_int(x)) for x in data["entries"]), ring
        )


@dataclass(frozen=True)
class MatrixTuple:
    """A tuple of g >= 2 square matrices of equal size over one ring."""

    matrices: tuple[Matrix, ...]

    def __post_init__(self):
        if len(self.matrices) < 2:
            raise InvalidInput("a matrix tuple needs at least 2 matrices")
        first = self.matrices[0]
        if not first.is_square:
            raise InvalidShape("tuple matrices must be square")
        for m in self.matrices[1:]:
            if m.n_rows != first.n_rows or m.n_cols != first.n_cols:
                raise InvalidShape("tuple matrices must share one size")
            if m.ring != first.ring:
                raise InvalidInput("tuple matrices must share one ring")

    @property
    def g(self) -> int:
        return len(self.matrices)

    @property
    def n(self) -> int:
        return self.matrices[0].n_rows

    @property
    def ring(self) -> ScalarRing:
        return self.matrices[0].ring

    def to_json(self) -> dict:
        return {"matrices": [m.to_json() for m in self.matrices]}


def evaluate_word(w: Word, t: MatrixTuple) -> Matrix:
    """Product of the tuple's matrices in the order of the word's letters."""
    if w.degree == 0:
        raise InvalidWord("cannot evaluate the empty word")
    if any(not 1 <= letter <= t.g for letter in w.letters):
        raise InvalidWord(
            f"word uses letters outside [1, {t.g}]: {w.letters}"
        )
    result = t.matrices[w.letters[0] - 1]
    for letter in w.letters[1:]:
        result = result.mul(t.matrices[letter - 1])
    return result


def vectorize(m: Matrix) -> tuple[int, ...]:
    """Row-major readout: component (i-1)*n + j holds entry (i, j)."""
    if not m.is_square:
        raise InvalidShape("vectorize requires a square matrix")
    return m.entries


def _check_uniform(ms: list[Matrix]) -> tuple[int, ScalarRing]:
    if not ms:
        raise ArityMismatch("need at least one matrix")
    first = ms[0]
    if not first.is_square:
        raise InvalidShape("matrices must be square")
    for m in ms[1:]:
        if m.n_rows != first.n_rows or m.n_cols != first.n_cols:
            raise InvalidInput("mixed matrix sizes")
        if m.ring != first.ring:
            raise InvalidInput("mixed rings")
    return first.n_rows, first.ring


def discriminant(ms: list[Matrix]) -> int:
    """Determinant of the n^2-by-n^2 matrix whose k-th column is vectorize(ms[k]).

    Exact over both rings: modular Gaussian elimination over a prime field,
    fraction-free (Bareiss) elimination over the integers.
    """
    n, ring = _check_uniform(ms)
    nn = n * n
    if len(ms) != nn:
        raise ArityMismatch(f"discriminant needs exactly {nn} matrices, got {len(ms)}")
    rows = [[ms[k].entries[r] for k in range(nn)] for r in range(nn)]
    if ring.kind == "prime_field":
        return _det_mod_p(rows, ring.p)
    return _det_bareiss(rows)


def rank(ms: list[Matrix]) -> int:
    """Rank of the vectorized collection; equals n^2 iff the span is full."""
    n, ring = _check_uniform(ms)
    rows = [list(m.entries) for m in ms]
    if ring.kind == "prime_field":
        return _rank_mod_p(rows, ring.p)
    return _rank_int(rows)


# --- elimination kernels ----------------------------------------------------


def _det_mod_p(rows: list[list[int]], p: int) -> int:
    n = len(rows)
    if _np is not None and p == MERSENNE61 and n >= 24:
        return _det_mersenne_np(rows)
    m = [list(r) for r in rows]
    det = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = p - det
        pk = m[k][k]
        det = det * pk % p
        inv = pow(pk, -1, p)
        rk = m[k]
        for i in range(k + 1, n):
            f = m[i][k]
            if f:
                f = f * inv % p
                ri = m[i]
                for j in range(k + 1, n):
                    ri[j] = (ri[j] - f * rk[j]) % p
    return det


_M61_LOW31 = (1 << 31) - 1
_M61_LOW30 = (1 << 30) - 1


def _np_fold(v):
    # v < 2^63 elementwise; result < 2^61 + 4 and congruent mod 2^61 - 1.
    return (v & MERSENNE61) + (v >> 61)


def _np_mulmod(a, b):
    """Elementwise a*b mod 2^61-1 for int64 arrays with entries in [0, 2^61).

    Split both factors at bit 31; every intermediate stays below 2^63:
      hh = a1*b1 < 2^60, contributes *2^62 == *2,
      mid = a1*b0 + a0*b1 < 2^62, split again at bit 30 so that
      mid*2^31 == (mid >> 30) + (mid & low30) * 2^31 with both parts < 2^61,
      ll = a0*b0 < 2^62.
    """
    a1 = a >> 31
    a0 = a & _M61_LOW31
    b1 = b >> 31
    b0 = b & _M61_LOW31
    hh = a1 * b1
    mid = a1 * b0 + a0 * b1
    s = (
        _np_fold(2 * hh)
        + (mid >> 30)
        + ((mid & _M61_LOW30) << 31)
        + _np_fold(a0 * b0)
    )
    s = _np_fold(_np_fold(s))
    return _np.where(s >= MERSENNE61, s - MERSENNE61, s)


def _det_mersenne_np(rows: list[list[int]]) -> int:
    p = MERSENNE61
    m = _np.array(rows, dtype=_np.int64)
    n = m.shape[0]
    det = 1
    for k in range(n):
        nz = _np.nonzero(m[k:, k])[0]
        if nz.size == 0:
            return 0
        piv = int(nz[0]) + k
        if piv != k:
            m[[k, piv]] = m[[piv, k]]
            det = p - det
        pk = int(m[k, k])
        det = det * pk % p
        if k + 1 == n:
            break
        inv = _np.int64(pow(pk, -1, p))
        f = _np_mulmod(m[k + 1 :, k : k + 1], inv)
        sub = m[k + 1 :, k:] - _np_mulmod(f, m[k : k + 1, k:])
        m[k + 1 :, k:] = _np.where(sub < 0, sub + p, sub)
    return det


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    m = [[x % p for x in r] for r in rows]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        rr = m[r]
        for i in range(r + 1, n_rows):
            f = m[i][c]
            if f:
                f = f * inv % p
                ri = m[i]
                for j in range(c, n_cols):
                    ri[j] = (ri[j] - f * rr[j]) % p
        r += 1
        if r == n_rows:
            break
    return r


def _det_bareiss(rows: list[list[int]]) -> int:
    """Fraction-free determinant; every division is exact by construction."""
    n = len(rows)
    m = [[_mpz(x) for x in r] for r in rows]
    sign = 1
    prev = _mpz(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if m[i][k]), None)
            if piv is None:
                return 0
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        pk = m[k][k]
        rk = m[k]
        for i in range(k + 1, n):
            ri = m[i]
            fik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * pk - fik * rk[j]) // prev
        prev = pk
    return sign * int(m[n - 1][n - 1])


def _rank_int(rows: list[list[int]]) -> int:
    """Rank over the rationals by fraction-free row elimination."""
    m = [[int(x) for x in r] for r in rows]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        rr = m[r]
        for i in range(r + 1, n_rows):
            ri = m[i]
            if ri[c]:
                a, b = rr[c], ri[c]
                ri[:] = [a * y - b * x for x, y in zip(rr, ri)]
                content = math.gcd(*ri)
                if content > 1:
                    ri[:] = [y // content for y in ri]
        r += 1
        if r == n_rows:
            break
    return r


# --- incremental span maintenance -------------------------------------------


@dataclass(frozen=True)
class SubspaceBasis:
    """Span of n-by-n matrices kept as echelonized vectorizations.

    `matrices` lists the independent representatives in insertion order;
    `vectors` are the echelon rows sorted by pivot column (pivots strictly
    increasing, one per row).  Over a prime field rows are fully reduced
    with unit pivots; over the integers rows are content-normalized with a
    positive leading entry and no pivot scaling.
    """

    n: int
    ring: ScalarRing
    matrices: tuple[Matrix, ...]
    vectors: tuple[tuple[int, ...], ...]
    pivots: tuple[int, ...]

    @staticmethod
    def empty(n: int, ring: ScalarRing) -> "SubspaceBasis":
        return SubspaceBasis(n, ring, (), (), ())

    @property
    def dimension(self) -> int:
        return len(self.vectors)

    def reduce(self, vec: list[int]) -> list[int]:
        """Reduce a vector against the basis; the zero vector means membership."""
        v = list(vec)
        if self.ring.kind == "prime_field":
            p = self.ring.p
            for row, c in zip(self.vectors, self.pivots):
                f = v[c] % p
                if f:
                    v = [(x - f * y) % p for x, y in zip(v, row)]
        else:
            for row, c in zip(self.vectors, self.pivots):
                if v[c]:
                    a, b = row[c], v[c]
                    v = [a * x - b * y for x, y in zip(v, row)]
                    content = math.gcd(*v)
                    if content > 1:
                        v = [x // content for x in v]
        return v


def span_insert(b: SubspaceBasis, m: Matrix) -> tuple[SubspaceBasis, bool]:
    """Insert a matrix into the span; returns (new basis, inserted flag)."""
    if m.n_rows != b.n or m.n_cols != b.n:
        raise InvalidInput(f"expected {b.n}x{b.n} matrix")
    if m.ring != b.ring:
        raise InvalidInput("ring mismatch")
    v = b.reduce(list(m.entries))
    pivot = next((c for c, x in enumerate(v) if x), None)
    if pivot is None:
        return b, False
    if b.ring.kind == "prime_field":
        p = b.ring.p
        inv = pow(v[pivot], -1, p)
        v = [x * inv % p for x in v]
        # keep reduced form: clear the new pivot column in existing rows
        new_rows = []
        for row in b.vectors:
            f = row[pivot]
            if f:
                row = tuple((x - f * y) % p for x, y in zip(row, v))
            new_rows.append(row)
    else:
        if v[pivot] < 0:
            v = [-x for x in v]
        new_rows = list(b.vectors)
    merged = sorted(list(zip(b.pivots, new_rows)) + [(pivot, tuple(v))])
    pivots = tuple(c for c, _ in merged)
    vectors = tuple(r for _, r in merged)
    return (
        SubspaceBasis(b.n, b.ring, b.matrices + (m,), vectors, pivots),
        True,
    )
