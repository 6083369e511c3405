"""Partial-matching diagrams, their structural predicates, and brute-force enumerators.

A diagram on ``n`` vertices is a set of arcs ``(i, j)`` with ``1 <= i < j <= n``
where every vertex has degree at most one.  The enumerators in this module are
exhaustive and exponential; they exist as ground truth for the closed formulas
in :mod:`pseudoknot.enumeration` and the series in :mod:`pseudoknot.series`.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator

Arc = tuple[int, int]

#: Sentinel for the minimum arc length / stack length of an arcless diagram.
INF = math.inf

DEFAULT_ORACLE_MAX = 16
ORACLE_ENV = "PSEUDOKNOT_ORACLE_MAX"


class DiagramError(ValueError):
    pass


class OracleSizeError(ValueError):
    """Raised when a brute-force enumeration is requested above the oracle bound."""


@dataclass(frozen=True)
class Diagram:
    n: int
    arcs: tuple[Arc, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise DiagramError(f"vertex count must be nonnegative, got {self.n}")
        arcs = tuple(sorted((int(i), int(j)) for i, j in self.arcs))
        seen: set[int] = set()
        for i, j in arcs:
            if not 1 <= i < j <= self.n:
                raise DiagramError(f"arc ({i}, {j}) invalid on {self.n} vertices")
            if i in seen or j in seen:
                raise DiagramError(f"arc ({i}, {j}) reuses a paired vertex")
            seen.update((i, j))
        object.__setattr__(self, "arcs", arcs)

    def partner(self) -> dict[int, int]:
        out = {}
        for i, j in self.arcs:
            out[i] = j
            out[j] = i
        return out

    def isolated(self) -> list[int]:
        paired = self.partner()
        return [v for v in range(1, self.n + 1) if v not in paired]

    def reversed(self) -> "Diagram":
        """Mirror image under ``v -> n + 1 - v``."""
        m = self.n + 1
        return Diagram(self.n, tuple((m - j, m - i) for i, j in self.arcs))

    def __len__(self):
        return len(self.arcs)


@dataclass(frozen=True)
class StructureClass:
    """The class of ``<k, lambda, sigma>`` structures."""

    k: int
    lam: int = 1
    sigma: int = 1

    def __post_init__(self):
        if self.k < 2 or self.lam < 1 or self.sigma < 1:
            raise ValueError(f"need k >= 2, lambda >= 1, sigma >= 1; got {self}")

    def __str__(self):
        return f"<{self.k},{self.lam},{self.sigma}>"


@dataclass(frozen=True)
class Stack:
    arcs: tuple[Arc, ...]

    @property
    def length(self) -> int:
        return len(self.arcs)

    @property
    def innermost(self) -> Arc:
        return self.arcs[-1]


@dataclass(frozen=True)
class StackDecomposition:
    stacks: tuple[Stack, ...] = field(default_factory=tuple)

    @property
    def lengths(self) -> list[int]:
        return [s.length for s in self.stacks]

    @property
    def min_length(self) -> float:
        return min(self.lengths, default=INF)


def crosses(a: Arc, b: Arc) -> bool:
    (i, j), (p, q) = a, b
    return i < p < j < q or p < i < q < j


def max_crossing(d: Diagram) -> int:
    """Size of the largest set of pairwise crossing arcs (0 for an arcless diagram).

    Maximum clique of the crossing graph by branch and bound; exponential in the
    number of arcs, fine for the handful of arcs seen at oracle scale.
    """
    arcs = d.arcs
    if not arcs:
        return 0
    nbrs = [
        {b for b in range(len(arcs)) if b != a and crosses(arcs[a], arcs[b])}
        for a in range(len(arcs))
    ]
    best = 1

    def expand(size: int, cand: set[int]):
        nonlocal best
        if size > best:
            best = size
        for v in sorted(cand):
            if size + len(cand) <= best:
                return
            cand = cand - {v}
            expand(size + 1, cand & nbrs[v])

    expand(0, set(range(len(arcs))))
    return best


def min_arc_length(d: Diagram) -> float:
    return min((j - i for i, j in d.arcs), default=INF)


def stack_decompose(d: Diagram) -> StackDecomposition:
    arc_set = set(d.arcs)
    stacks = []
    for i, j in d.arcs:
        if (i - 1, j + 1) in arc_set:
            continue  # not the outermost arc of its stack
        run = [(i, j)]
        while (run[-1][0] + 1, run[-1][1] - 1) in arc_set:
            run.append((run[-1][0] + 1, run[-1][1] - 1))
        stacks.append(Stack(tuple(run)))
    return StackDecomposition(tuple(stacks))


def is_member(d: Diagram, c: StructureClass) -> bool:
    if not d.arcs:
        return True
    return (
        min_arc_length(d) >= c.lam
        and stack_decompose(d).min_length >= c.sigma
        and max_crossing(d) <= c.k - 1
    )


def has_one_arc(d: Diagram) -> bool:
    return any(j - i == 1 for i, j in d.arcs)


def has_beta_arc(d: Diagram) -> bool:
    """True iff some arc (i, i+2) or (i, i+3) has only isolated vertices inside."""
    paired = d.partner()
    for i, j in d.arcs:
        if j - i in (2, 3) and all(v not in paired for v in range(i + 1, j)):
            return True
    return False


def is_core(d: Diagram) -> bool:
    """No two arcs of the form (i, j), (i+1, j-1)."""
    arc_set = set(d.arcs)
    return not any((i + 1, j - 1) in arc_set for i, j in d.arcs)


def core_map(d: Diagram) -> Diagram:
    """Contract every maximal stack to its innermost arc and relabel the survivors."""
    dropped: set[int] = set()
    for stack in stack_decompose(d).stacks:
        for i, j in stack.arcs[:-1]:
            dropped.update((i, j))
    keep = [v for v in range(1, d.n + 1) if v not in dropped]
    relabel = {v: idx for idx, v in enumerate(keep, start=1)}
    arcs = tuple(
        (relabel[i], relabel[j]) for i, j in d.arcs if i not in dropped
    )
    return Diagram(len(keep), arcs)


def classify(d: Diagram) -> tuple[int, float, float]:
    """Smallest ``(k, lambda, sigma)`` triple for which ``d`` is a member.

    ``k`` is at least 2; ``lambda`` and ``sigma`` are :data:`INF` for an arcless diagram.
    """
    return (
        max(2, max_crossing(d) + 1),
        min_arc_length(d),
        stack_decompose(d).min_length,
    )


# -- text format ---------------------------------------------------------------


def format_diagram(d: Diagram) -> str:
    lines = [f"n={d.n}"]
    lines.extend(f"{i} {j}" for i, j in d.arcs)
    return "\n".join(lines) + "\n"


def parse_diagram(text: str) -> Diagram:
    n = None
    arcs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            key, sep, value = line.partition("=")
            if not sep or key.strip() != "n":
                raise DiagramError(f"line {lineno}: expected 'n=<int>', got {raw!r}")
            try:
                n = int(value)
            except ValueError:
                raise DiagramError(f"line {lineno}: bad vertex count {value!r}") from None
            continue
        parts = line.split()
        if len(parts) != 2:
            raise DiagramError(f"line {lineno}: expected '<i> <j>', got {raw!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise DiagramError(f"line {lineno}: non-integer arc {raw!r}") from None
        if (i, j) in arcs:
            raise DiagramError(f"line {lineno}: duplicate arc ({i}, {j})")
        arcs.append((i, j))
    if n is None:
        raise DiagramError("missing 'n=<int>' header")
    return Diagram(n, tuple(arcs))


def read_diagram(path) -> Diagram:
    with open(path, encoding="utf-8") as fh:
        return parse_diagram(fh.read())


def write_diagram(d: Diagram, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_diagram(d))


# -- brute-force oracles -------------------------------------------------------


def oracle_bound() -> int:
    value = os.environ.get(ORACLE_ENV)
    if value is None:
        return DEFAULT_ORACLE_MAX
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"{ORACLE_ENV} must be an integer, got {value!r}") from None


def _check_size(n: int, bound: int | None):
    bound = oracle_bound() if bound is None else bound
    if n > bound:
        raise OracleSizeError(f"n={n} exceeds the brute-force oracle bound {bound}")


def iter_matchings(
    n: int, min_length: int = 1, arcs: int | None = None
) -> Iterator[Diagram]:
    """Every partial matching on [n] whose arcs all have length >= ``min_length``.

    Order is deterministic: the smallest undecided vertex is first left isolated,
    then paired with each admissible partner in ascending order.  With ``arcs``
    set, only matchings with exactly that many arcs are produced.
    """
    free = [True] * (n + 2)
    chosen: list[Arc] = []

    def rec(v: int) -> Iterator[Diagram]:
        while v <= n and not free[v]:
            v += 1
        if arcs is not None:
            remaining = sum(free[v : n + 1])
            if len(chosen) + remaining // 2 < arcs:
                return
        if v > n:
            if arcs is None or len(chosen) == arcs:
                yield Diagram(n, tuple(chosen))
            return
        free[v] = False
        yield from rec(v + 1)
        if arcs is None or len(chosen) < arcs:
            for w in range(v + min_length, n + 1):
                if free[w]:
                    free[w] = False
                    chosen.append((v, w))
                    yield from rec(v + 1)
                    chosen.pop()
                    free[w] = True
        free[v] = True

    yield from rec(1)


def enumerate_class(
    n: int, c: StructureClass, bound: int | None = None
) -> list[Diagram]:
    """All ``<k, lambda, sigma>`` structures on [n], by exhaustion.

    Candidates with an arc shorter than ``lambda`` are never generated; every
    candidate is then tested with :func:`is_member`.
    """
    _check_size(n, bound)
    return [d for d in iter_matchings(n, c.lam) if is_member(d, c)]


def _is_tstar(d: Diagram, k: int) -> bool:
    return not has_beta_arc(d) and max_crossing(d) <= k - 1


def enumerate_Tstar(n: int, h: int, k: int, bound: int | None = None) -> int:
    """Count k-noncrossing diagrams on [n] with h arcs, no 1-arc and no beta-arc."""
    _check_size(n, bound)
    return sum(1 for d in iter_matchings(n, 2, arcs=h) if _is_tstar(d, k))


def enumerate_Cstar(n: int, h: int, k: int, bound: int | None = None) -> int:
    """As :func:`enumerate_Tstar`, further restricted to core diagrams."""
    _check_size(n, bound)
    return sum(
        1 for d in iter_matchings(n, 2, arcs=h) if is_core(d) and _is_tstar(d, k)
    )


def count_by_arcs(diagrams: Iterable[Diagram]) -> dict[int, int]:
    out: dict[int, int] = {}
    for d in diagrams:
        out[len(d)] = out.get(len(d), 0) + 1
    return out
