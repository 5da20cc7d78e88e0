"""Free-monoid words, the log-degree word grid, and its certificate monomial.

Letters are the integers 1..g; in every ordering letter 1 is the largest
(so the all-1 word comes first in a decreasing enumeration).  Words
serialize as strings over 'a', 'b', ... with letter 1 -> 'a'.

The central object is the n-by-n grid of words of degree 2*ceil(log_g(n))
whose entry (i, j) is v[i] followed by the reversal of v[j], where v is the
decreasing enumeration of all degree-d words.  Flattened row-major, the grid
supplies the n^2 candidate words whose evaluations should span the full
matrix algebra.  The companion certificate monomial assigns to every grid
position a product of matrix-entry variables tracing an index path from i
to j; the product over all positions isolates the identity permutation in
the expansion of the grid's discriminant, which is what makes the grid
certifiable in the first place.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

from .errors import InvalidInput, InvalidWord, TooLarge

_ALPHA = "abcdefghijklmnopqrstuvwxyz"

#: Variable identifier (k, i, j) for entry (i, j) of the k-th generic matrix.
VarId = tuple[int, int, int]


@dataclass(frozen=True)
class Word:
    """A word over the alphabet {1, .., g}; the empty tuple is the identity."""

    letters: tuple[int, ...]
    g: int

    def __post_init__(self):
        if self.g < 1:
            raise InvalidInput(f"alphabet size must be >= 1, got {self.g}")
        for letter in self.letters:
            if not 1 <= letter <= self.g:
                raise InvalidWord(
                    f"letter {letter} outside alphabet [1, {self.g}]"
                )

    @property
    def degree(self) -> int:
        return len(self.letters)

    def concat(self, other: Word) -> Word:
        if other.g != self.g:
            raise InvalidInput("cannot concatenate words over different alphabets")
        return Word(self.letters + other.letters, self.g)

    def reverse(self) -> Word:
        return Word(self.letters[::-1], self.g)

    def to_string(self) -> str:
        if self.g > len(_ALPHA):
            raise InvalidInput(f"string form supports g <= {len(_ALPHA)}")
        return "".join(_ALPHA[letter - 1] for letter in self.letters)

    @staticmethod
    def from_string(s: str, g: int) -> Word:
        letters = []
        for ch in s:
            idx = _ALPHA.find(ch)
            if idx < 0:
                raise InvalidWord(f"unexpected character {ch!r}")
            letters.append(idx + 1)
        return Word(tuple(letters), g)


def all_words(g: int, s: int) -> list[Word]:
    """All g**s words of degree s, in strictly decreasing lexicographic order.

    Letter 1 is the largest letter, so tuples in ascending natural order are
    words in decreasing order: (1,1) > (1,2) > (2,1) > (2,2) for g = 2.
    """
    if g < 2:
        raise InvalidInput(f"alphabet size must be >= 2, got {g}")
    if s < 0:
        raise InvalidInput(f"degree must be >= 0, got {s}")
    return [Word(t, g) for t in itertools.product(range(1, g + 1), repeat=s)]


def degree_exponent(n: int, g: int) -> int:
    """Smallest d with g**d >= n (the half-degree of the grid words)."""
    d = 0
    power = 1
    while power < n:
        power *= g
        d += 1
    return d


@dataclass(frozen=True)
class WordGrid:
    """An n-by-n array of degree-2d words; flattening is row-major."""

    n: int
    g: int
    d: int
    grid: tuple[tuple[Word, ...], ...]

    def entry(self, i: int, j: int) -> Word:
        """Grid entry at 1-based position (i, j)."""
        return self.grid[i - 1][j - 1]

    def flatten(self) -> list[Word]:
        """Words w_1, .., w_{n^2} with w_{(i-1)n+j} = entry (i, j)."""
        return [w for row in self.grid for w in row]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "g": self.g,
            "d": self.d,
            "grid": [[w.to_string() for w in row] for row in self.grid],
        }

    @staticmethod
    def from_json(data: dict) -> WordGrid:
        g = int(data["g"])
        grid = tuple(
            tuple(Word.from_string(s, g) for s in row) for row in data["grid"]
        )
        return WordGrid(int(data["n"]), g, int(data["d"]), grid)


def build_word_grid(n: int, g: int, d: int | None = None) -> WordGrid:
    """The n-by-n grid of degree-2d words, d = ceil(log_g n) unless overridden.

    For m = g**d the full m-by-m grid has entry (i, j) equal to
    v[i] * reverse(v[j]) where v enumerates the degree-d words decreasingly;
    equivalently entry (i, j) = outer(i) * middle(i_d, j_d) * outer(j) with
    outer(i) the letter ceil(i / g**(d-1)) and (i_d, j_d) the residues of
    (i, j) in [1, g**(d-1)].  For n < g**d the leading principal n-by-n
    subgrid is returned.  An explicit d must satisfy g**d >= n.
    """
    if n < 2 or g < 2:
        raise InvalidInput(f"need n >= 2 and g >= 2, got n={n}, g={g}")
    d_min = degree_exponent(n, g)
    if d is None:
        d = d_min
    elif d < d_min:
        raise InvalidInput(f"d={d} too small: g**d must be >= n={n}")
    # only the first n of the g**d degree-d words are ever referenced
    heads = itertools.islice(itertools.product(range(1, g + 1), repeat=d), n)
    v = [Word(t, g) for t in heads]
    rev = [w.reverse() for w in v]
    grid = tuple(
        tuple(v[i].concat(rev[j]) for j in range(n)) for i in range(n)
    )
    return WordGrid(n, g, d, grid)


@dataclass(frozen=True)
class CommMonomial:
    """A commutative monomial in matrix-entry variables x^(k)_{ij}.

    Keys are (k, i, j) with 1-based matrix positions; values are strictly
    positive exponents.  Variables with k = 1 are always diagonal (i == j)
    because the first matrix is taken diagonal in certificate bookkeeping.
    """

    exponents: dict[VarId, int]

    def __post_init__(self):
        for var, e in self.exponents.items():
            if e <= 0:
                raise InvalidInput(f"exponent of {var} must be positive, got {e}")

    def total_degree(self) -> int:
        return sum(self.exponents.values())

    def variables(self) -> list[VarId]:
        return sorted(self.exponents)

    def to_json(self) -> dict:
        return {
            "exponents": [
                {"k": k, "i": i, "j": j, "e": e}
                for (k, i, j), e in sorted(self.exponents.items())
            ],
            "total_degree": self.total_degree(),
        }


def _residue(i: int, h: int) -> int:
    """Representative of i mod h in [1, h]."""
    return (i - 1) % h + 1


def _block(i: int, h: int) -> int:
    """ceil(i / h): which of the g blocks of width h contains i."""
    return (i - 1) // h + 1


def _first_var(i: int, h: int) -> VarId:
    # The opening letter of the (i, j) grid word, traversed out of index i.
    a = _block(i, h)
    if a == 1:
        return (1, i, i)
    return (a, i, i - (a - 1) * h)


def _last_var(j: int, h: int) -> VarId:
    # The closing letter, traversed into index j.
    b = _block(j, h)
    if b == 1:
        return (1, j, j)
    return (b, j - (b - 1) * h, j)


def entry_variable_chain(n: int, g: int, i: int, j: int) -> list[VarId]:
    """Variables of the certificate factor at grid position (i, j), outermost
    level first: the opening/closing pair at each recursion depth."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise InvalidInput(f"position ({i}, {j}) outside [1, {n}]^2")
    d = degree_exponent(n, g)
    chain: list[VarId] = []
    while d >= 1:
        h = g ** (d - 1)
        chain.append(_first_var(i, h))
        chain.append(_last_var(j, h))
        i, j = _residue(i, h), _residue(j, h)
        d -= 1
    return chain


def certificate_monomial(n: int, g: int) -> CommMonomial:
    """The product over all n^2 grid positions of the recursive entry factors.

    Each factor contributes one opening and one closing variable per
    recursion level, so the factor has degree 2d and the product has total
    degree 2d * n^2.
    """
    if n < 2 or g < 2:
        raise InvalidInput(f"need n >= 2 and g >= 2, got n={n}, g={g}")
    exps: Counter[VarId] = Counter()
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for var in entry_variable_chain(n, g, i, j):
                exps[var] += 1
    return CommMonomial(dict(exps))


# --- symbolic expansion over generic matrices (hard-capped at n = 2) -------

Monomial = tuple[tuple[VarId, int], ...]  # sorted ((k,i,j), exponent) pairs


def _entry_polynomial(word: Word, n: int, i: int, j: int) -> dict[Monomial, int]:
    """Entry (i, j) of `word` evaluated at generic matrices, matrix 1 diagonal.

    Expands the sum over index paths i -> .. -> j; a step with letter 1 must
    stay in place (diagonal matrix), other letters may move anywhere.
    """
    states: list[tuple[int, Counter]] = [(i, Counter())]
    for letter in word.letters:
        nxt: list[tuple[int, Counter]] = []
        for pos, vars_used in states:
            if letter == 1:
                c = vars_used.copy()
                c[(1, pos, pos)] += 1
                nxt.append((pos, c))
            else:
                for target in range(1, n + 1):
                    c = vars_used.copy()
                    c[(letter, pos, target)] += 1
                    nxt.append((target, c))
        states = nxt
    poly: dict[Monomial, int] = {}
    for pos, vars_used in states:
        if pos != j:
            continue
        mono = tuple(sorted(vars_used.items()))
        poly[mono] = poly.get(mono, 0) + 1
    return poly


def _coefficient_in_product(
    factors: list[dict[Monomial, int]], target: Counter
) -> int:
    """Coefficient of `target` in the product of the factor polynomials."""

    def rec(idx: int, remaining: Counter) -> int:
        if idx == len(factors):
            return 1 if not +remaining else 0
        total = 0
        for mono, c in factors[idx].items():
            if all(remaining[v] >= e for v, e in mono):
                nxt = remaining.copy()
                for v, e in mono:
                    nxt[v] -= e
                    if nxt[v] == 0:
                        del nxt[v]
                total += c * rec(idx + 1, nxt)
        return total

    return rec(0, target)


def monomial_coefficient_bruteforce(
    grid: WordGrid, m: CommMonomial
) -> tuple[int, int]:
    """Search all (n^2)! column permutations of the grid's discriminant
    expansion for the monomial m.

    Returns (coefficient of m in the identity-permutation product, number of
    non-identity permutations whose product contains m).  Hard-capped at
    n = 2, where the sum has 24 terms.
    """
    n = grid.n
    if n > 2:
        raise TooLarge(f"permutation expansion has ({n * n})! terms; capped at n=2")
    flat = grid.flatten()
    nn = n * n
    # entry_polys[k][(i, j)]: entry (i, j) of word k evaluated symbolically
    entry_polys = [
        {
            (i, j): _entry_polynomial(flat[k], n, i, j)
            for i in range(1, n + 1)
            for j in range(1, n + 1)
        }
        for k in range(nn)
    ]
    positions = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    target = Counter(m.exponents)
    coeff_identity = 0
    other_hits = 0
    for sigma in itertools.permutations(range(nn)):
        factors = [
            entry_polys[sigma[idx]][pos] for idx, pos in enumerate(positions)
        ]
        coeff = _coefficient_in_product(factors, target)
        if sigma == tuple(range(nn)):
            coeff_identity = coeff
        elif coeff != 0:
            other_hits += 1
    return coeff_identity, other_hits
