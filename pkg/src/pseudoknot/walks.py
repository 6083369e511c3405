"""k-noncrossing matchings counted as lattice walks in a Weyl chamber.

``f_k(2m, 0)`` is the number of walks of length ``2m`` with unit steps
``+-e_i`` in ``Z^{k-1}`` that stay in ``x_1 >= x_2 >= ... >= x_{k-1} >= 0``
and start and end at the origin.  The step set is symmetric, so a closed walk
of length ``2m`` is a pair of length-``m`` walks from the origin meeting at
their endpoint::

    f_k(2m, 0) = sum over chamber points s of N_m(s)^2

where ``N_m(s)`` counts confined walks from the origin to ``s``.  One forward
pass over the layers ``N_0, N_1, ...`` therefore yields every ``f_k(2m, 0)``.
"""
from __future__ import annotations

import threading
from math import comb

ChamberState = tuple[int, ...]


def in_chamber(s: ChamberState) -> bool:
    return all(a >= b for a, b in zip(s, s[1:])) and (not s or s[-1] >= 0)


def _step(layer: dict[ChamberState, int]) -> dict[ChamberState, int]:
    out: dict[ChamberState, int] = {}
    for s, c in layer.items():
        d = len(s)
        for i in range(d):
            x = s[i]
            # +e_i stays weakly decreasing iff the coordinate to the left is larger
            if i == 0 or s[i - 1] > x:
                t = s[:i] + (x + 1,) + s[i + 1 :]
                assert in_chamber(t)
                out[t] = out.get(t, 0) + c
            # -e_i: stay >= the coordinate to the right (or >= 0)
            if x > (s[i + 1] if i + 1 < d else 0):
                t = s[:i] + (x - 1,) + s[i + 1 :]
                assert in_chamber(t)
                out[t] = out.get(t, 0) + c
    return out


class WalkCountCache:
    """Incrementally extended table of ``f_k(2m, 0)`` for a fixed ``k``.

    ``cap`` bounds how many values are kept; a query beyond it is answered by a
    throwaway computation that does not grow the cache.
    """

    def __init__(self, k: int, cap: int | None = None):
        if k < 2:
            raise ValueError(f"crossing bound k must be >= 2, got {k}")
        self.k = k
        self.cap = cap
        self._values = [1]
        self._layer: dict[ChamberState, int] = {(0,) * (k - 1): 1}
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._values)

    def _advance(self):
        self._layer = _step(self._layer)
        self._values.append(sum(c * c for c in self._layer.values()))

    def get(self, m: int) -> int:
        if m < 0:
            raise ValueError(f"m must be nonnegative, got {m}")
        if self.cap is not None and m >= self.cap:
            return WalkCountCache(self.k).get(m)
        with self._lock:
            while len(self._values) <= m:
                self._advance()
            return self._values[m]

    def values(self, m_max: int) -> list[int]:
        self.get(m_max)
        return self._values[: m_max + 1]


_caches: dict[int, WalkCountCache] = {}
_caches_lock = threading.Lock()


def walk_cache(k: int) -> WalkCountCache:
    with _caches_lock:
        cache = _caches.get(k)
        if cache is None:
            cache = _caches[k] = WalkCountCache(k)
        return cache


def f_perfect(k: int, m: int) -> int:
    """Number of k-noncrossing perfect matchings on 2m points."""
    return walk_cache(k).get(m)


def f_partial(k: int, n: int, ell: int) -> int:
    """k-noncrossing partial matchings on [n] with exactly ``ell`` isolated vertices.

    Zero whenever the arguments are infeasible (negative, ``ell > n`` or
    ``n - ell`` odd); the inclusion-exclusion sums downstream rely on this.
    """
    if n < 0 or ell < 0 or ell > n or (n - ell) % 2:
        return 0
    return comb(n, ell) * f_perfect(k, (n - ell) // 2)


def M(k: int, n: int) -> int:
    """All k-noncrossing partial matchings on [n]."""
    return sum(f_partial(k, n, ell) for ell in range(n % 2, n + 1, 2))
