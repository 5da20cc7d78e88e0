"""Deterministic integer tuples whose grid discriminant is provably nonzero.

The construction supports the matrices exactly on the variables of the
certificate monomial and fills each supported entry with a distinct power
of one base B.  Correctness is certified a posteriori: the discriminant of
the evaluated grid words is computed exactly over the integers, and a zero
result triggers base escalation (B <- B^2, bounded retries).  Everything is
deterministic, so runs are reproducible byte for byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidInput
from .exactalg import Matrix, MatrixTuple, big_integer, discriminant, int_to_decimal
from .words import (
    VarId,
    WordGrid,
    build_word_grid,
    certificate_monomial,
    degree_exponent,
)


def _variable_level(var: VarId, g: int) -> int:
    """Recursion level at which a support variable first appears.

    For letter 1 the diagonal variable (1, i, i) first occurs once the
    half-grid reaches i, i.e. at the smallest s with i <= g**(s-1).  For a
    letter k >= 2 the pair (i, j) satisfies |i - j| = (k-1) * g**(s-1).
    """
    k, i, j = var
    if k == 1:
        s = 1
        while g ** (s - 1) < i:
            s += 1
        return s
    gap, s = abs(i - j), 1
    while (k - 1) * g ** (s - 1) != gap:
        s += 1
        if (k - 1) * g ** (s - 1) > gap:
            raise InvalidInput(f"variable {var} is not on the support lattice")
    return s


def _support_order_key(var: VarId, g: int) -> tuple[int, int, int, int]:
    k, i, j = var
    return (k, _variable_level(var, g), i, j)


@dataclass(frozen=True)
class WitnessSpec:
    """Base, exponent assignment, and reported constants of one witness."""

    n: int
    g: int
    d: int
    base: int
    support: dict[VarId, int]  # variable -> exponent of the base
    m_constant: int

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "g": self.g,
            "d": self.d,
            "base": str(self.base),
            "support": [
                {"k": k, "i": i, "j": j, "exponent": e}
                for (k, i, j), e in sorted(self.support.items())
            ],
            "m_constant": str(self.m_constant),
        }


def build_witness(
    n: int, g: int, base_hint: int = 0, base_override: int | None = None
) -> tuple[WitnessSpec, MatrixTuple]:
    """Distinct-power integer tuple supported on the certificate variables.

    Exponents 0, 1, 2, .. follow the fixed order (letter, level, position);
    the base is max(base_hint, 2d * n^2 + 1) unless overridden outright.
    Off-support entries are zero.
    """
    if n < 2 or g < 2:
        raise InvalidInput(f"need n >= 2 and g >= 2, got n={n}, g={g}")
    d = degree_exponent(n, g)
    mono = certificate_monomial(n, g)
    variables = sorted(mono.exponents, key=lambda v: _support_order_key(v, g))
    support = {var: e for e, var in enumerate(variables)}
    if base_override is not None:
        if base_override < 2:
            raise InvalidInput(f"base must be >= 2, got {base_override}")
        base = base_override
    else:
        base = max(base_hint, 2 * d * n * n + 1)
    ring = big_integer()
    rows = [[[0] * n for _ in range(n)] for _ in range(g)]
    for (k, i, j), e in support.items():
        rows[k - 1][i - 1][j - 1] = base**e
    t = MatrixTuple(tuple(Matrix.from_rows(r, ring) for r in rows))
    spec = WitnessSpec(
        n=n,
        g=g,
        d=d,
        base=base,
        support=support,
        m_constant=math.factorial(n) * (n ** (2 * d - 1)) ** n,
    )
    return spec, t


def verify_witness(t: MatrixTuple, grid: WordGrid) -> int:
    """Exact integer discriminant of the evaluated grid words.

    Nonzero certifies the witness outright; zero means the base collided
    and the caller should escalate.
    """
    if t.ring.kind != "big_integer":
        raise InvalidInput("witness verification runs over the integers")
    if t.n != grid.n or t.g < grid.g:
        raise InvalidInput("tuple and grid sizes do not match")
    cache: dict[tuple[int, ...], Matrix] = {
        (k,): t.matrices[k - 1] for k in range(1, t.g + 1)
    }

    def ev(letters: tuple[int, ...]) -> Matrix:
        got = cache.get(letters)
        if got is None:
            got = ev(letters[:-1]).mul(cache[(letters[-1],)])
            cache[letters] = got
        return got

    return discriminant([ev(w.letters) for w in grid.flatten()])


@dataclass(frozen=True)
class WitnessReport:
    spec: WitnessSpec
    discriminant: int
    escalations: int

    @property
    def certified(self) -> bool:
        return self.discriminant != 0

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "discriminant": int_to_decimal(self.discriminant),
            "escalations": self.escalations,
            "certified": self.certified,
        }


def build_and_verify(
    n: int,
    g: int,
    base_hint: int = 0,
    base_override: int | None = None,
    max_escalations: int = 3,
    _verifier=verify_witness,
) -> tuple[WitnessReport, MatrixTuple]:
    """Build a witness and verify it, squaring the base on a zero result."""
    grid = build_word_grid(n, g)
    spec, t = build_witness(n, g, base_hint, base_override)
    escalations = 0
    value = _verifier(t, grid)
    while value == 0 and escalations < max_escalations:
        escalations += 1
        spec, t = build_witness(n, g, base_hint, spec.base**2)
        value = _verifier(t, grid)
    report = WitnessReport(spec=spec, discriminant=value, escalations=escalations)
    return report, t


def reported_constants(n: int, g: int) -> dict:
    """The comparison constants M and c_s as their printed formulas read.

    These are surfaced for reporting only; the witness itself never uses
    them (the distinct-power scheme plus exact verification replaces the
    original exponent tables).
    """
    d = degree_exponent(n, g)
    gbar = 1
    while gbar**d < n:
        gbar += 1
    c_values = []
    for s in range(1, d + 1):
        if s == 1:
            c_values.append(3)
        else:
            c_values.append(2 * gbar ** (s - 1) * (gbar - 1) + gbar ** (s - 2))
    return {
        "m_constant": str(math.factorial(n) * (n ** (2 * d - 1)) ** n),
        "gbar": gbar,
        "c_values": c_values,
        "c_sum": sum(c_values),
        "as_printed": True,
    }
