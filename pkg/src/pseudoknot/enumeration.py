"""Exact counting formulas.

All quantities are Python integers.  Binomials and multinomials vanish on
negative or out-of-range arguments, which turns every sum below into a total
function of its parameters.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial

from .walks import M, f_partial

KINDS = ("T2_lambda", "Tk21", "Tstar", "Cstar", "T4sigma")


def binom(a: int, b: int) -> int:
    if a < 0 or b < 0 or b > a:
        return 0
    return comb(a, b)


@lru_cache(maxsize=None)
def secondary_count(lam: int, n: int) -> int:
    """Secondary structures on [n] whose arcs all have length >= ``lam``."""
    if lam < 1:
        raise ValueError(f"minimum arc length must be >= 1, got {lam}")
    if n < 0:
        return 0
    t = [1] * (n + 1)
    for m in range(lam + 1, n + 1):
        t[m] = t[m - 1] + sum(t[m - 2 - j] * t[j] for j in range(m - lam))
    return t[n]


def arc_selection(n: int, j1: int, j2: int, j3: int) -> int:
    """Ways to place j1 1-arcs, j2 beta2-arcs and j3 beta3-arcs on [n]."""
    rest = n - 2 * j1 - 3 * j2 - 4 * j3
    if min(j1, j2, j3, rest) < 0:
        return 0
    return factorial(n - j1 - 2 * j2 - 3 * j3) // (
        factorial(j1) * factorial(j2) * factorial(j3) * factorial(rest)
    )


def _signed_total(pos: int, neg: int, what: str) -> int:
    total = pos - neg
    if total < 0:
        raise ArithmeticError(f"{what} went negative ({total}); inclusion-exclusion bug")
    return total


@lru_cache(maxsize=None)
def t_star(k: int, n: int, h: int) -> int:
    """k-noncrossing diagrams on [n] with h arcs and neither 1-arcs nor beta-arcs."""
    if h < 0 or n < 0 or 2 * h > n:
        return 0
    pos = neg = 0
    for j1 in range(h + 1):
        for j2 in range(h + 1 - j1):
            for j3 in range(h + 1 - j1 - j2):
                removed = 2 * j1 + 3 * j2 + 4 * j3
                if removed > n:
                    break
                term = arc_selection(n, j1, j2, j3) * f_partial(
                    k, n - removed, n - 2 * h - j2 - 2 * j3
                )
                if (j1 + j2 + j3) % 2:
                    neg += term
                else:
                    pos += term
    return _signed_total(pos, neg, f"t_star({k}, {n}, {h})")


@lru_cache(maxsize=None)
def c_star(k: int, n: int, h: int) -> int:
    """Core diagrams counted by :func:`t_star`, via Moebius inversion over stacks."""
    if h == 0:
        return 1
    if h < 0:
        return 0
    pos = neg = 0
    for b in range(h):
        term = binom(h - 1, b) * t_star(k, n - 2 * h + 2 * b + 2, b + 1)
        if (h - b - 1) % 2:
            neg += term
        else:
            pos += term
    return _signed_total(pos, neg, f"c_star({k}, {n}, {h})")


def composition_count(b: int, parts: int, sigma: int) -> int:
    """Sequences of ``parts`` integers, each >= sigma - 1, summing to ``b``."""
    if parts < 1:
        return 0
    return binom(b + (2 - sigma) * parts - 1, parts - 1)


def _check_k4(k: int, sigma: int):
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if sigma < 3:
        raise ValueError(f"the arc-length-4 pipeline needs sigma >= 3, got {sigma}")


@lru_cache(maxsize=None)
def t4_sigma(k: int, sigma: int, n: int, h: int) -> int:
    """``<k, 4, sigma>`` structures on [n] with exactly h arcs."""
    _check_k4(k, sigma)
    if h == 0:
        return 1
    if h < 0 or 2 * h > n:
        return 0
    return sum(
        composition_count(b, h - b, sigma) * c_star(k, n - 2 * b, h - b)
        for b in range(sigma - 1, h)
    )


def t4_sigma_total(k: int, sigma: int, n: int) -> int:
    return sum(t4_sigma(k, sigma, n, h) for h in range(n // 2 + 1))


def tk21(k: int, n: int) -> int:
    """``<k, 2, 1>`` structures on [n] (no 1-arcs, arbitrary stacks)."""
    pos = neg = 0
    for b in range(n // 2 + 1):
        term = binom(n - b, b) * M(k, n - 2 * b)
        if b % 2:
            neg += term
        else:
            pos += term
    return _signed_total(pos, neg, f"tk21({k}, {n})")


@dataclass
class CountTable:
    """Exact counts keyed by ``n`` or ``(n, h)``, tagged with the formula used."""

    kind: str
    params: dict
    entries: dict = field(default_factory=dict)
    provenance: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown table kind {self.kind!r}")

    def series(self) -> list[tuple[int, int]]:
        """``(n, count)`` pairs in increasing n; per-h tables are summed over h."""
        totals: dict[int, int] = {}
        for key, value in self.entries.items():
            n = key[0] if isinstance(key, tuple) else key
            totals[n] = totals.get(n, 0) + value
        return sorted(totals.items())


def count_table(
    kind: str,
    n_max: int,
    *,
    k: int | None = None,
    sigma: int | None = None,
    lam: int | None = None,
    per_h: bool = False,
    n_min: int = 0,
) -> CountTable:
    """Tabulate one of the counting functions over ``n_min <= n <= n_max``."""
    ns = range(n_min, n_max + 1)
    if kind == "T2_lambda":
        entries = {n: secondary_count(lam, n) for n in ns}
        return CountTable(kind, {"lambda": lam}, entries, "secondary recursion")
    if kind == "Tk21":
        entries = {n: tk21(k, n) for n in ns}
        return CountTable(kind, {"k": k}, entries, "alternating sum over M_k")
    if kind in ("Tstar", "Cstar"):
        fn = t_star if kind == "Tstar" else c_star
        entries = {(n, h): fn(k, n, h) for n in ns for h in range(n // 2 + 1)}
        label = "inclusion-exclusion" if kind == "Tstar" else "moebius inversion"
        return CountTable(kind, {"k": k}, entries, label)
    if kind == "T4sigma":
        _check_k4(k, sigma)
        if per_h:
            entries = {
                (n, h): t4_sigma(k, sigma, n, h) for n in ns for h in range(n // 2 + 1)
            }
        else:
            entries = {n: t4_sigma_total(k, sigma, n) for n in ns}
        return CountTable(kind, {"k": k, "sigma": sigma, "lambda": 4}, entries, "core expansion")
    raise ValueError(f"unknown table kind {kind!r}")
