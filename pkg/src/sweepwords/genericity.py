"""Randomized certification and length experiments over a large prime field.

A single sample point with nonvanishing discriminant certifies that the
word evaluations can be linearly independent; the per-trial failure bound
is (sum of word degrees) / p by the standard degree argument for random
evaluation of a nonzero polynomial, which for an n-by-n grid of degree-2d
words reads 2d * n^2 / p.  All-zero trials are reported as inconclusive,
never as a dependence claim.

Every randomized operation takes an explicit 64-bit seed.  Per-trial seeds
are derived with a SplitMix64 step on (seed, trial index), so a report is a
pure function of (seed, trials) no matter how trials are scheduled.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import Infeasible, InvalidInput, InvalidModulus, InvalidWord
from .exactalg import (
    Matrix,
    MatrixTuple,
    ScalarRing,
    SubspaceBasis,
    discriminant,
    prime_field,
    rank,
    span_insert,
)
from .words import Word, all_words, build_word_grid, degree_exponent

DEFAULT_PRIME = (1 << 61) - 1
_MASK64 = (1 << 64) - 1


def derive_trial_seed(seed: int, counter: int) -> int:
    """SplitMix64 of seed + (counter + 1) * golden-ratio increment."""
    z = (seed + (counter + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def sample_matrix(
    n: int, ring: ScalarRing, rng: random.Random, symmetric: bool = False
) -> Matrix:
    """Uniform matrix over F_p; symmetric sampling mirrors the upper triangle."""
    if ring.kind != "prime_field":
        raise InvalidInput("uniform sampling needs a finite scalar ring")
    p = ring.p
    if symmetric:
        entries = [0] * (n * n)
        for i in range(n):
            for j in range(i, n):
                x = rng.randrange(p)
                entries[i * n + j] = x
                entries[j * n + i] = x
        return Matrix(n, n, tuple(entries), ring)
    return Matrix(n, n, tuple(rng.randrange(p) for _ in range(n * n)), ring)


def sample_tuple(
    n: int,
    g: int,
    ring: ScalarRing,
    rng: random.Random,
    symmetric: bool = False,
) -> MatrixTuple:
    return MatrixTuple(
        tuple(sample_matrix(n, ring, rng, symmetric) for _ in range(g))
    )


def evaluate_words(words: list[Word], t: MatrixTuple) -> list[Matrix]:
    """Evaluate many words sharing prefix products (words must be nonempty)."""
    cache: dict[tuple[int, ...], Matrix] = {}
    for k in range(1, t.g + 1):
        cache[(k,)] = t.matrices[k - 1]

    def ev(letters: tuple[int, ...]) -> Matrix:
        got = cache.get(letters)
        if got is None:
            got = ev(letters[:-1]).mul(cache[(letters[-1],)])
            cache[letters] = got
        return got

    out = []
    for w in words:
        if w.degree == 0:
            raise InvalidWord("cannot evaluate the empty word")
        if any(not 1 <= letter <= t.g for letter in w.letters):
            raise InvalidWord(f"word uses letters outside [1, {t.g}]")
        out.append(ev(w.letters))
    return out


def words_digest(words: list[Word]) -> str:
    payload = "|".join(w.to_string() for w in words).encode()
    return hashlib.sha256(payload).hexdigest()


@dataclass(frozen=True)
class CertificationReport:
    n: int
    g: int
    d: int
    word_digest: str
    trials: int
    successes: int
    p: int
    seed: int
    trial_nonzero: tuple[bool, ...]
    single_trial_failure_bound: Fraction

    @property
    def certified(self) -> bool:
        return self.successes > 0

    @property
    def status(self) -> str:
        return "certified" if self.certified else "inconclusive"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "g": self.g,
            "d": self.d,
            "word_digest": self.word_digest,
            "trials": self.trials,
            "successes": self.successes,
            "p": str(self.p),
            "seed": self.seed,
            "trial_nonzero": list(self.trial_nonzero),
            "single_trial_failure_bound": str(self.single_trial_failure_bound),
            "status": self.status,
        }


def is_locally_linearly_independent(
    words: list[Word],
    n: int,
    g: int,
    p: int = DEFAULT_PRIME,
    trials: int = 3,
    seed: int = 0,
    symmetric: bool = False,
) -> CertificationReport:
    """Sample random tuples and evaluate the discriminant of the given words.

    One nonzero trial certifies that the words evaluate to a linearly
    independent family somewhere; zero successes are inconclusive (over a
    finite field only the positive direction is sound).
    """
    if len(words) != n * n:
        raise InvalidWord(f"need exactly {n * n} words, got {len(words)}")
    for w in words:
        if w.degree == 0 or any(not 1 <= letter <= g for letter in w.letters):
            raise InvalidWord(f"bad word {w.letters} for alphabet size {g}")
    if p <= (1 << 40):
        raise InvalidModulus(f"modulus must exceed 2^40, got {p}")
    ring = prime_field(p)
    if trials < 1:
        raise InvalidInput("need at least one trial")
    flags = []
    for trial in range(trials):
        rng = random.Random(derive_trial_seed(seed, trial))
        t = sample_tuple(n, g, ring, rng, symmetric)
        flags.append(discriminant(evaluate_words(words, t)) != 0)
    total_degree = sum(w.degree for w in words)
    return CertificationReport(
        n=n,
        g=g,
        d=max(w.degree for w in words),
        word_digest=words_digest(words),
        trials=trials,
        successes=sum(flags),
        p=p,
        seed=seed,
        trial_nonzero=tuple(flags),
        single_trial_failure_bound=Fraction(total_degree, p),
    )


def sweep_check(words: list[Word], t: MatrixTuple) -> bool:
    """True iff the word evaluations span the full n-by-n matrix algebra."""
    if len(words) < t.n * t.n:
        return False
    return rank(evaluate_words(words, t)) == t.n * t.n


@dataclass(frozen=True)
class LengthReport:
    n: int
    g: int
    dims: tuple[int, ...]
    length: int | None
    terminal_dim: int
    paz_bound: int
    log_bound: int

    # The stationary-chain index is always >= 1, so at n = 1 (where both
    # raw bounds are 0) the meaningful check floors the bound at 1.
    @property
    def within_log_bound(self) -> bool:
        return self.length is not None and self.length <= max(1, self.log_bound)

    @property
    def within_paz_bound(self) -> bool:
        return self.length is not None and self.length <= max(1, self.paz_bound)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "g": self.g,
            "dims": list(self.dims),
            "length": self.length,
            "terminal_dim": self.terminal_dim,
            "paz_bound": self.paz_bound,
            "log_bound": self.log_bound,
            "within_log_bound": self.within_log_bound,
            "within_paz_bound": self.within_paz_bound,
        }


def subspace_length(
    t: MatrixTuple, max_k: int | None = None, include_identity: bool = False
) -> LengthReport:
    """Grow the span of products of the tuple until the dimension stabilizes.

    Step k holds the span of all products of at most k tuple members; the
    reported chain ends with the first repeated dimension.  The identity is
    excluded unless requested (products of length zero are not counted).
    The length is None when max_k is hit before stabilization.
    """
    n = t.n
    if max_k is None:
        max_k = n * n + 1
    if max_k < 1:
        raise InvalidInput(f"max_k must be >= 1, got {max_k}")
    basis = SubspaceBasis.empty(n, t.ring)
    if include_identity:
        basis, _ = span_insert(basis, Matrix.identity(n, t.ring))
    fresh: list[Matrix] = []
    for m in t.matrices:
        basis, inserted = span_insert(basis, m)
        if inserted:
            fresh.append(m)
    dims = [basis.dimension]
    length = None
    for k in range(1, max_k + 1):
        nxt_fresh: list[Matrix] = []
        nxt = basis
        # products with one more factor; older basis members already
        # produced their successors in earlier steps
        for a in t.matrices:
            for b in fresh:
                nxt, inserted = span_insert(nxt, a.mul(b))
                if inserted:
                    nxt_fresh.append(nxt.matrices[-1])
        dims.append(nxt.dimension)
        if nxt.dimension == basis.dimension:
            length = k
            break
        basis, fresh = nxt, nxt_fresh
    return LengthReport(
        n=n,
        g=t.g,
        dims=tuple(dims),
        length=length,
        terminal_dim=dims[-1],
        paz_bound=2 * n - 2,
        log_bound=2 * degree_exponent(n, t.g),
    )


@dataclass(frozen=True)
class LengthExperimentSummary:
    n: int
    g: int
    p: int
    trials: int
    seed: int
    reports: tuple[LengthReport, ...]
    violations_log: int
    violations_paz: int

    @property
    def all_within_bounds(self) -> bool:
        return self.violations_log == 0 and self.violations_paz == 0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "g": self.g,
            "p": str(self.p),
            "trials": self.trials,
            "seed": self.seed,
            "reports": [r.to_json() for r in self.reports],
            "violations_log": self.violations_log,
            "violations_paz": self.violations_paz,
            "all_within_bounds": self.all_within_bounds,
        }


def generic_length_experiment(
    n: int,
    g: int,
    p: int = DEFAULT_PRIME,
    trials: int = 5,
    seed: int = 0,
    symmetric: bool = False,
    include_identity: bool = False,
) -> LengthExperimentSummary:
    """Sample tuples and check the length against both bounds per trial."""
    ring = prime_field(p)
    reports = []
    for trial in range(trials):
        rng = random.Random(derive_trial_seed(seed, trial))
        t = sample_tuple(n, g, ring, rng, symmetric)
        reports.append(subspace_length(t, include_identity=include_identity))
    return LengthExperimentSummary(
        n=n,
        g=g,
        p=p,
        trials=trials,
        seed=seed,
        reports=tuple(reports),
        violations_log=sum(1 for r in reports if not r.within_log_bound),
        violations_paz=sum(1 for r in reports if not r.within_paz_bound),
    )


def rosenthal_check(
    n: int, g: int, d: int, p: int = DEFAULT_PRIME, seed: int = 0
) -> bool:
    """Do ALL g^(2d) words of degree 2d span at a random point?

    Requires g^(2d) >= n^2.  Only the first gbar matrices need to be in
    general position, where gbar is the smallest integer with gbar^d >= n
    (g^(2d) >= n^2 already forces gbar <= g); the remaining matrices are
    arbitrary, and the check pads with zero matrices to demonstrate that
    the spanning never depends on them.
    """
    if g ** (2 * d) < n * n:
        raise Infeasible(
            f"g^(2d) = {g ** (2 * d)} < n^2 = {n * n}: no spanning is possible"
        )
    gbar = 1
    while gbar**d < n:
        gbar += 1
    ring = prime_field(p)
    rng = random.Random(derive_trial_seed(seed, 0))
    matrices = [sample_matrix(n, ring, rng) for _ in range(gbar)]
    matrices += [Matrix.zeros(n, ring) for _ in range(g - gbar)]
    t = MatrixTuple(tuple(matrices))
    words = all_words(g, 2 * d)
    return rank(evaluate_words(words, t)) == n * n


def grid_certification(
    n: int,
    g: int,
    p: int = DEFAULT_PRIME,
    trials: int = 3,
    seed: int = 0,
    d: int | None = None,
    symmetric: bool = False,
    inject_duplicate: bool = False,
) -> CertificationReport:
    """Certify the flattened word grid for (n, g); the usual entry point."""
    grid = build_word_grid(n, g, d)
    words = grid.flatten()
    if inject_duplicate and len(words) >= 2:
        words[1] = words[0]
    return is_locally_linearly_independent(
        words, n, g, p=p, trials=trials, seed=seed, symmetric=symmetric
    )


def random_words_certification(
    n: int,
    g: int,
    p: int = DEFAULT_PRIME,
    trials: int = 3,
    seed: int = 0,
    d: int | None = None,
    symmetric: bool = False,
) -> CertificationReport:
    """Exploratory harness: certify n^2 DISTINCT uniform words of degree 2d.

    Whether arbitrary word selections of this degree always certify is an
    open matter; this samples one selection per seed and reports what the
    discriminant says, nothing more.  The word sample draws its seed from
    counter = trials, after the per-trial counters.
    """
    if d is None:
        d = degree_exponent(n, g)
    s = 2 * d
    if g**s < n * n:
        raise InvalidInput(
            f"only {g**s} words of degree {s} exist, need {n * n} distinct"
        )
    rng = random.Random(derive_trial_seed(seed, trials))
    chosen: set[tuple[int, ...]] = set()
    while len(chosen) < n * n:
        chosen.add(tuple(rng.randrange(1, g + 1) for _ in range(s)))
    words = [Word(letters, g) for letters in sorted(chosen)]
    return is_locally_linearly_independent(
        words, n, g, p=p, trials=trials, seed=seed, symmetric=symmetric
    )
