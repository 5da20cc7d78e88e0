"""Shared oracles: small independent implementations used to pin expected
values, kept deliberately separate from the library's code paths."""

from __future__ import annotations

from fractions import Fraction

import pytest

from sweepwords import exactalg


def det_cofactor(rows: list[list[int]]) -> int:
    """Cofactor-expansion determinant over the integers (exact, tiny sizes)."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * det_cofactor(minor)
    return total


def rank_fractions(rows: list[list[int]]) -> int:
    """Row rank via reduced echelon form over exact rationals."""
    m = [[Fraction(x) for x in row] for row in rows]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        m[r] = [x / m[r][c] for x in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
    return r


def mat(rows: list[list[int]], ring: exactalg.ScalarRing) -> exactalg.Matrix:
    return exactalg.Matrix.from_rows(rows, ring)


@pytest.fixture(scope="session")
def fp_default() -> exactalg.ScalarRing:
    return exactalg.prime_field((1 << 61) - 1)


@pytest.fixture(scope="session")
def fp101() -> exactalg.ScalarRing:
    return exactalg.prime_field(101)


@pytest.fixture(scope="session")
def zz() -> exactalg.ScalarRing:
    return exactalg.big_integer()
