"""Recursive labeled multigraphs and their edge-disjoint walk partitions.

The level-d graph on g**d vertices is built by scaling every edge of the
level-(d-1) graph by g^2, then attaching, for each vertex i <= g**(d-1),
2*g**d loops labeled 1 and g**d edges each way between i and
i + (k-1)*g**(d-1) labeled k for k = 2..g.  The whole edge multiset (scaled
by an optional factor m) decomposes into m walks of length 2d from i to j
for every ordered vertex pair (i, j), realizing every degree-2d word exactly
m times -- and it does so in exactly one way, which the backtracking counter
below verifies exhaustively.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import BudgetExceeded, InvalidInput
from .words import Word, all_words, degree_exponent, entry_variable_chain


@dataclass(frozen=True)
class LabeledMultigraph:
    """Directed multigraph on vertices 1..g**d with labels in [1, g]."""

    g: int
    d: int
    m: int
    edges: dict[tuple[int, int, int], int]  # (source, target, label) -> mult

    @property
    def n_vertices(self) -> int:
        return self.g**self.d

    def total_edges(self) -> int:
        return sum(self.edges.values())

    def label_counts(self) -> Counter[int]:
        counts: Counter[int] = Counter()
        for (_, _, label), mult in self.edges.items():
            counts[label] += mult
        return counts

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "d": self.d,
            "m": self.m,
            "edges": [
                {"from": u, "to": v, "label": label, "mult": mult}
                for (u, v, label), mult in sorted(self.edges.items())
            ],
        }

    @staticmethod
    def from_json(data: dict) -> "LabeledMultigraph":
        edges = {
            (int(e["from"]), int(e["to"]), int(e["label"])): int(e["mult"])
            for e in data["edges"]
        }
        return LabeledMultigraph(int(data["g"]), int(data["d"]), int(data["m"]), edges)

    def to_dot(self) -> str:
        lines = ["digraph walks {"]
        for (u, v, label), mult in sorted(self.edges.items()):
            style = "dashed" if label == 1 else "solid"
            lines.append(
                f'  {u} -> {v} [label="x{label} *{mult}", style={style}];'
            )
        lines.append("}")
        return "\n".join(lines)


def build_graph(g: int, d: int, m: int = 1) -> LabeledMultigraph:
    """The level-d graph with all multiplicities scaled by m."""
    if g < 2 or d < 0 or m < 1:
        raise InvalidInput(f"need g >= 2, d >= 0, m >= 1; got ({g}, {d}, {m})")
    edges: Counter[tuple[int, int, int]] = Counter()
    for level in range(1, d + 1):
        for key in edges:
            edges[key] *= g * g
        h = g ** (level - 1)
        new = g**level
        for i in range(1, h + 1):
            edges[(i, i, 1)] += 2 * new
            for k in range(2, g + 1):
                j = i + (k - 1) * h
                edges[(i, j, k)] += new
                edges[(j, i, k)] += new
    if m > 1:
        for key in edges:
            edges[key] *= m
    return LabeledMultigraph(g, d, m, dict(edges))


@dataclass(frozen=True)
class Walk:
    """A walk given by its start vertex and (target, label) steps."""

    start: int
    steps: tuple[tuple[int, int], ...]

    @property
    def end(self) -> int:
        return self.steps[-1][0] if self.steps else self.start

    @property
    def length(self) -> int:
        return len(self.steps)

    def edge_usage(self) -> Counter[tuple[int, int, int]]:
        usage: Counter[tuple[int, int, int]] = Counter()
        pos = self.start
        for target, label in self.steps:
            usage[(pos, target, label)] += 1
            pos = target
        return usage


def word_of_walk(w: Walk, g: int | None = None) -> Word:
    """The word read off the walk's labels in traversal order."""
    letters = tuple(label for _, label in w.steps)
    if g is None:
        g = max(letters, default=2)
    return Word(letters, g)


@dataclass(frozen=True)
class WalkPartition:
    """For each ordered pair (i, j), a tuple of walks from i to j."""

    n_side: int
    walks: dict[tuple[int, int], tuple[Walk, ...]]

    def all_walks(self) -> list[Walk]:
        return [w for _, ws in sorted(self.walks.items()) for w in ws]

    def edge_usage(self) -> Counter[tuple[int, int, int]]:
        usage: Counter[tuple[int, int, int]] = Counter()
        for walk in self.all_walks():
            usage.update(walk.edge_usage())
        return usage

    def to_json(self) -> dict:
        return {
            "n_side": self.n_side,
            "walks": [
                {
                    "from": i,
                    "to": j,
                    "walks": [
                        {"start": w.start, "steps": [list(s) for s in w.steps]}
                        for w in ws
                    ],
                }
                for (i, j), ws in sorted(self.walks.items())
            ],
        }


def derive_walks_from_certificate(n: int, g: int) -> WalkPartition:
    """Unfold the certificate factors into the canonical walk partition.

    Requires n to be an exact power of g.  The factor at position (i, j)
    opens with an edge i -> i_d, closes with an edge j_d -> j, and wraps the
    recursively derived middle between the residues, giving a walk of length
    2d from i to j whose word is the grid entry (i, j).
    """
    if g < 2 or n < 2:
        raise InvalidInput(f"need n >= 2 and g >= 2, got n={n}, g={g}")
    d = degree_exponent(n, g)
    if g**d != n:
        raise InvalidInput(f"n={n} is not a power of g={g}")
    walks = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            walks[(i, j)] = (Walk(i, tuple(_walk_steps(d, i, j, g))),)
    return WalkPartition(n, walks)


def scale_partition(partition: WalkPartition, m: int) -> WalkPartition:
    """Replicate every walk m times (the partition of the m-scaled graph)."""
    if m < 1:
        raise InvalidInput(f"scale must be >= 1, got {m}")
    return WalkPartition(
        partition.n_side,
        {pair: ws * m for pair, ws in partition.walks.items()},
    )


def _walk_steps(d: int, i: int, j: int, g: int) -> list[tuple[int, int]]:
    if d == 0:
        return []
    h = g ** (d - 1)
    a = (i - 1) // h + 1
    b = (j - 1) // h + 1
    i2 = (i - 1) % h + 1
    j2 = (j - 1) % h + 1
    return [(i2, a)] + _walk_steps(d - 1, i2, j2, g) + [(j, b)]


def walk_partition_matches_certificate(n: int, g: int) -> bool:
    """Edge usage of the derived partition equals the certificate exponents.

    Loops (i, i, 1) correspond to diagonal variables (1, i, i); an edge
    (u, v, k) with k >= 2 corresponds to the variable (k, u, v).
    """
    partition = derive_walks_from_certificate(n, g)
    usage = partition.edge_usage()
    expected: Counter[tuple[int, int, int]] = Counter()
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for (k, a, b) in entry_variable_chain(n, g, i, j):
                expected[(a, b, k)] += 1
    return usage == expected


def _partition_defect(
    graph: LabeledMultigraph, partition: WalkPartition
) -> str | None:
    """None if the partition satisfies both invariants, else a reason."""
    n_side = graph.n_vertices
    if partition.n_side != n_side:
        return f"partition side {partition.n_side} != graph side {n_side}"
    m = graph.m
    length = 2 * graph.d
    seen_words: Counter[tuple[int, ...]] = Counter()
    for i in range(1, n_side + 1):
        for j in range(1, n_side + 1):
            ws = partition.walks.get((i, j))
            if ws is None or len(ws) != m:
                return f"pair ({i}, {j}) does not carry exactly {m} walks"
            for w in ws:
                if w.start != i or w.end != j:
                    return f"walk at ({i}, {j}) runs {w.start} -> {w.end}"
                if w.length != length:
                    return f"walk at ({i}, {j}) has length {w.length} != {length}"
                seen_words[tuple(label for _, label in w.steps)] += 1
    if partition.edge_usage() != Counter(graph.edges):
        return "edge usage does not reproduce the multiplicity map"
    expected_words = Counter(
        {w.letters: m for w in all_words(graph.g, length)}
    )
    if seen_words != expected_words:
        return "walk words do not cover every word exactly m times"
    return None


def verify_partition(graph: LabeledMultigraph, partition: WalkPartition) -> bool:
    return _partition_defect(graph, partition) is None


class _Saturated(Exception):
    pass


def enumerate_partitions(
    graph: LabeledMultigraph, cap: int, budget: int = 100_000_000
) -> int:
    """Count walk partitions of the graph by exhaustive backtracking.

    Words are assigned in decreasing lexicographic order; each word's m
    walks are chosen in nondecreasing canonical order so that partitions
    are counted as multisets.  The count saturates at `cap`; exceeding the
    node-expansion budget raises BudgetExceeded instead of returning a
    count.
    """
    if cap < 2:
        raise InvalidInput(f"cap must be >= 2, got {cap}")
    g, d, m = graph.g, graph.d, graph.m
    n_side = graph.n_vertices
    words = [w.letters for w in all_words(g, 2 * d)]
    edges_rem: Counter[tuple[int, int, int]] = Counter(graph.edges)
    pair_rem = {
        (i, j): m
        for i in range(1, n_side + 1)
        for j in range(1, n_side + 1)
    }
    label_rem = graph.label_counts()
    # adjacency by (source, label), targets ascending for canonical order
    adj: dict[tuple[int, int], list[int]] = {}
    for (u, v, label) in sorted(graph.edges):
        adj.setdefault((u, label), []).append(v)
    # letters still needed by words[idx:] (m copies each), for the
    # equality prune: residual label counts must exactly match
    suffix_need: list[Counter[int]] = [Counter() for _ in range(len(words) + 1)]
    for idx in range(len(words) - 1, -1, -1):
        need = suffix_need[idx + 1].copy()
        for letter in words[idx]:
            need[letter] += m
        suffix_need[idx] = need
    if Counter({k: v for k, v in label_rem.items() if v}) != Counter(
        {k: v for k, v in suffix_need[0].items() if v}
    ):
        return 0

    state = {"nodes": 0, "count": 0}

    def candidate_walks(letters: tuple[int, ...]) -> list[tuple[int, tuple]]:
        found: list[tuple[int, tuple]] = []
        usage: Counter[tuple[int, int, int]] = Counter()
        steps: list[tuple[int, int]] = []

        def extend(pos: int, depth: int, start: int):
            state["nodes"] += 1
            if state["nodes"] > budget:
                raise BudgetExceeded(state["nodes"], budget)
            if depth == len(letters):
                found.append((start, tuple(steps)))
                return
            letter = letters[depth]
            for target in adj.get((pos, letter), ()):
                key = (pos, target, letter)
                if edges_rem[key] - usage[key] > 0:
                    usage[key] += 1
                    steps.append((target, letter))
                    extend(target, depth + 1, start)
                    steps.pop()
                    usage[key] -= 1

        for start in range(1, n_side + 1):
            extend(start, 0, start)
        return found

    def place(walk: tuple[int, tuple], sign: int):
        start, steps = walk
        pos = start
        for target, label in steps:
            edges_rem[(pos, target, label)] -= sign
            label_rem[label] -= sign
            pos = target
        pair_rem[(start, pos)] -= sign

    def search(word_idx: int, copy_idx: int, min_walk):
        if word_idx == len(words):
            state["count"] += 1
            if state["count"] >= cap:
                raise _Saturated
            return
        letters = words[word_idx]
        for walk in candidate_walks(letters):
            if min_walk is not None and walk < min_walk:
                continue
            start, steps = walk
            end = steps[-1][0] if steps else start
            if pair_rem[(start, end)] == 0:
                continue
            place(walk, 1)
            if copy_idx + 1 == m:
                need = suffix_need[word_idx + 1]
                if all(label_rem[k] == need[k] for k in range(1, g + 1)):
                    search(word_idx + 1, 0, None)
            else:
                search(word_idx, copy_idx + 1, walk)
            place(walk, -1)

    try:
        search(0, 0, None)
    except _Saturated:
        pass
    return state["count"]
