"""Truncated power series with exact rational coefficients, and the structure
generating functions built from them.

Every series carries an order ``N`` and stores the coefficients of
``x^0 .. x^N``.  Binary operations truncate to the smaller order.  No floating
point is used anywhere in this module.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .enumeration import c_star, t4_sigma_total, t_star
from .walks import f_perfect


class SeriesError(ValueError):
    pass


class NonUnitDivisionError(SeriesError, ZeroDivisionError):
    pass


class CompositionValuationError(SeriesError):
    pass


class Series:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable, order: int | None = None):
        cs = [Fraction(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise SeriesError(f"truncation order must be >= 0, got {order}")
        cs = cs[: order + 1]
        cs.extend([Fraction(0)] * (order + 1 - len(cs)))
        self.coeffs = cs

    # constructors

    @classmethod
    def zero(cls, order: int) -> "Series":
        return cls([], order)

    @classmethod
    def one(cls, order: int) -> "Series":
        return cls([1], order)

    @classmethod
    def monomial(cls, power: int, order: int, coeff=1) -> "Series":
        if power > order:
            return cls.zero(order)
        return cls([0] * power + [coeff], order)

    @classmethod
    def poly(cls, terms, order: int) -> "Series":
        """From ``{power: coeff}`` or ``(power, coeff)`` pairs; repeated powers add up."""
        cs = [0] * (order + 1)
        for p, c in terms.items() if isinstance(terms, dict) else terms:
            if p <= order:
                cs[p] += c
        return cls(cs, order)

    # basics

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n):
        return self.coeffs[n]

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Series):
            return self.order == other.order and self.coeffs == other.coeffs
        return NotImplemented

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:8])
        more = ", ..." if self.order >= 8 else ""
        return f"Series([{head}{more}], order={self.order})"

    def valuation(self) -> int | None:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def truncate(self, order: int) -> "Series":
        return Series(self.coeffs, min(order, self.order))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def to_ints(self) -> list[int]:
        if not self.is_integral():
            raise SeriesError("series has non-integral coefficients")
        return [c.numerator for c in self.coeffs]

    # arithmetic

    def _coerce(self, other) -> "Series":
        if isinstance(other, Series):
            return other
        return Series([other], self.order)

    def __add__(self, other):
        other = self._coerce(other)
        n = min(self.order, other.order)
        return Series([a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs)], n)

    __radd__ = __add__

    def __neg__(self):
        return Series([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Series):
            c = Fraction(other)
            return Series([a * c for a in self.coeffs], self.order)
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (n + 1)
        nz_b = [(j, y) for j, y in enumerate(b[: n + 1]) if y]
        for i in range(n + 1):
            x = a[i]
            if not x:
                continue
            lim = n - i
            for j, y in nz_b:
                if j > lim:
                    break
                out[i + j] += x * y
        return Series(out, n)

    __rmul__ = __mul__

    def inverse(self) -> "Series":
        a = self.coeffs
        if not a[0]:
            raise NonUnitDivisionError("cannot invert a series with zero constant term")
        n = self.order
        inv0 = 1 / a[0]
        out = [inv0] + [Fraction(0)] * n
        nz = [(i, c) for i, c in enumerate(a) if c and i]
        for m in range(1, n + 1):
            s = Fraction(0)
            for i, c in nz:
                if i > m:
                    break
                s += c * out[m - i]
            out[m] = -s * inv0
        return Series(out, n)

    def __truediv__(self, other):
        if not isinstance(other, Series):
            return self * (1 / Fraction(other))
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = Series.one(self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def shift(self, k: int) -> "Series":
        """Multiply by ``x^k``; a negative k divides and needs the low terms to vanish."""
        if k >= 0:
            return Series([0] * k + self.coeffs, self.order)
        if any(self.coeffs[:-k]):
            raise SeriesError(f"cannot divide by x^{-k}: low-order terms are nonzero")
        return Series(self.coeffs[-k:], self.order + k)

    def compose(self, inner: "Series") -> "Series":
        """``self(inner(x))``; the inner series must have zero constant term."""
        if inner.coeffs[0]:
            raise CompositionValuationError("inner series must have zero constant term")
        n = min(self.order, inner.order)
        result = Series.zero(n)
        for c in reversed(self.coeffs[: n + 1]):
            result = result * inner + c
        return result

    def sqrt(self) -> "Series":
        """Square root with constant term +sqrt(a0) by Newton iteration.

        The constant term must be a perfect rational square.
        """
        a0 = self.coeffs[0]
        r0 = _rational_sqrt(a0)
        if r0 is None or r0 == 0:
            raise SeriesError(f"constant term {a0} has no nonzero rational square root")
        root = Series([r0], self.order)
        prec = 1
        while True:
            root = (root + self / root) * Fraction(1, 2)
            if prec > self.order:
                return root
            prec *= 2

    def dump(self, recipe: str) -> str:
        lines = [f"# order={self.order} recipe={recipe}"]
        lines.extend(
            f"{n}\t{c.numerator}/{c.denominator}" for n, c in enumerate(self.coeffs)
        )
        return "\n".join(lines) + "\n"


def _rational_sqrt(q: Fraction) -> Fraction | None:
    from math import isqrt

    if q < 0:
        return None
    p, r = isqrt(q.numerator), isqrt(q.denominator)
    if p * p == q.numerator and r * r == q.denominator:
        return Fraction(p, r)
    return None


def parse_dump(text: str) -> tuple[Series, str]:
    """Inverse of :meth:`Series.dump`; returns the series and its recipe id."""
    order = recipe = None
    coeffs: list[Fraction] = []
    for line in text.splitlines():
        if line.startswith("#"):
            for tok in line[1:].split():
                key, _, val = tok.partition("=")
                if key == "order":
                    order = int(val)
                elif key == "recipe":
                    recipe = val
            continue
        if not line.strip():
            continue
        idx, frac = line.split("\t")
        if int(idx) != len(coeffs):
            raise SeriesError(f"coefficient index {idx} out of sequence")
        coeffs.append(Fraction(frac))
    if order is None or order != len(coeffs) - 1:
        raise SeriesError("missing or inconsistent order header")
    return Series(coeffs, order), recipe or ""


def series_arith(a: Series, b: Series, op: str) -> Series:
    ops = {
        "add": lambda: a + b,
        "sub": lambda: a - b,
        "mul": lambda: a * b,
        "div": lambda: a / b,
        "compose": lambda: a.compose(b),
    }
    if op not in ops:
        raise ValueError(f"unknown series operation {op!r}")
    return ops[op]()


# -- recipes -------------------------------------------------------------------


@dataclass(frozen=True)
class GFRecipe:
    kind: str  # secondary_closed_form | k2sigma | k4sigma
    k: int | None = None
    lam: int | None = None
    sigma: int | None = None
    order: int = 20

    @property
    def id(self) -> str:
        parts = [self.kind]
        for name in ("k", "lam", "sigma"):
            value = getattr(self, name)
            if value is not None:
                parts.append(f"{name}{value}")
        return "-".join(parts)

    def evaluate(self) -> Series:
        if self.kind == "secondary_closed_form":
            return gf_secondary(self.lam, self.order)
        if self.kind == "k2sigma":
            return gf_k2sigma(self.k, self.sigma, self.order)
        if self.kind == "k4sigma":
            return gf_k4sigma(self.k, self.sigma, self.order)
        raise ValueError(f"unknown recipe kind {self.kind!r}")


def _check_order(N: int):
    if N < 1:
        raise SeriesError(f"truncation order must be >= 1, got {N}")


def gf_secondary(lam: int, N: int) -> Series:
    """Closed-form generating function of secondary structures with arc length >= lam.

    The radical is expanded by Newton iteration; the sign is the one that
    cancels the double zero of the ``2(z^3 - z^2)`` denominator.
    """
    _check_order(N)
    if lam < 1:
        raise ValueError(f"minimum arc length must be >= 1, got {lam}")
    M = N + 2
    L = lam
    radicand = Series.poly(
        [(0, 1), (1, -4), (2, 4), (L + 1, -2), (L + 2, 4), (L + 3, -4), (2 * L + 2, 1)], M
    )
    root = radicand.sqrt()
    lead = Series.poly([(0, -1), (1, 2), (2, -2), (L + 1, 1)], M)
    for sign in (1, -1):
        num = lead + root * sign
        if num.valuation() is None or num.valuation() >= 2:
            break
    else:  # pragma: no cover - one branch always cancels
        raise SeriesError("no square-root branch cancels the denominator")
    den = Series.poly({0: -2, 1: 2}, M)  # 2(z^3 - z^2) / z^2
    return (num.shift(-2) / den).truncate(N)


def gf_secondary_functional(lam: int, N: int) -> Series:
    """Same series from ``T = 1 / (p(z) - z^2 T)`` with ``p = 1 - z + z^2 + ... + z^lam``.

    Each fixed-point pass fixes at least one more coefficient.
    """
    _check_order(N)
    p = Series.poly({0: 1, 1: -1, **{i: 1 for i in range(2, lam + 1)}}, N)
    z2 = Series.monomial(2, N)
    t = Series.one(N)
    for _ in range(N + 1):
        nxt = 1 / (p - z2 * t)
        if nxt == t:
            break
        t = nxt
    return t


def gf_w0_v0(sigma: int, N: int) -> tuple[Series, Series]:
    if sigma < 3:
        raise ValueError(f"sigma must be >= 3, got {sigma}")
    _check_order(N)
    den = Series.poly([(0, 1), (2, -1), (2 * sigma, 1)], N)
    w0 = den.inverse().shift(2 * sigma - 2).truncate(N)
    v0 = Series.poly({0: 1, 1: -1}, N) + w0 * Series.poly({2: 1, 3: 1, 4: 1}, N)
    return w0, v0


def _walk_sum(k: int, step: Series, N: int) -> Series:
    v = step.valuation()
    if v is None:
        return Series.one(N)
    if v < 1:
        raise CompositionValuationError("substituted series must vanish at 0")
    acc = Series.zero(N)
    power = Series.one(N)
    for n in range(N // v + 1):
        acc = acc + power * f_perfect(k, n)
        power = power * step
    return acc


def gf_k4sigma(k: int, sigma: int, N: int) -> Series:
    """Generating function of ``<k, 4, sigma>`` structures, truncated at ``x^N``.

    ``(sqrt(w0) x / v0)^(2n)`` is expanded as ``(w0 x^2 / v0^2)^n``, which has
    valuation ``2 sigma n``; no square root is ever taken.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    w0, v0 = gf_w0_v0(sigma, N)
    inv_v0 = v0.inverse()
    step = w0.shift(2).truncate(N) * inv_v0 * inv_v0
    return inv_v0 * _walk_sum(k, step, N)


def gf_k2sigma(k: int, sigma: int, N: int) -> Series:
    """Generating function of ``<k, 2, sigma>`` structures, truncated at ``x^N``."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if sigma < 1:
        raise ValueError(f"sigma must be >= 1, got {sigma}")
    _check_order(N)
    den = Series.poly([(0, 1), (2, -1), (2 * sigma, 1)], N)
    u0 = den.inverse().shift(2 * sigma - 2).truncate(N)
    x2 = Series.monomial(2, N)
    d = u0 * x2 - Series.monomial(1, N) + 1
    inv_d = d.inverse()
    step = u0 * x2 * inv_d * inv_d
    return inv_d * _walk_sum(k, step, N)


# -- bivariate identities ------------------------------------------------------


class Bivariate:
    """Polynomial in ``u`` (degree <= D) whose coefficients are series in ``x``."""

    def __init__(self, coeffs: Sequence[Series], D: int, N: int):
        cs = [c.truncate(N) for c in coeffs[: D + 1]]
        cs.extend(Series.zero(N) for _ in range(D + 1 - len(cs)))
        self.coeffs, self.D, self.N = cs, D, N

    def __eq__(self, other):
        return isinstance(other, Bivariate) and self.coeffs == other.coeffs

    def __add__(self, other):
        return Bivariate([a + b for a, b in zip(self.coeffs, other.coeffs)], self.D, self.N)

    def __mul__(self, other):
        out = [Series.zero(self.N) for _ in range(self.D + 1)]
        for i, a in enumerate(self.coeffs):
            if a.valuation() is None:
                continue
            for j, b in enumerate(other.coeffs[: self.D + 1 - i]):
                if b.valuation() is not None:
                    out[i + j] = out[i + j] + a * b
        return Bivariate(out, self.D, self.N)

    def scale(self, s: Series) -> "Bivariate":
        return Bivariate([c * s for c in self.coeffs], self.D, self.N)

    def substitute(self, s: Series) -> Series:
        """Replace ``u`` by a univariate series ``s`` of positive valuation."""
        out = Series.zero(self.N)
        power = Series.one(self.N)
        for c in self.coeffs:
            out = out + c * power
            power = power * s
        return out

    def substitute_bivariate(self, b: "Bivariate") -> "Bivariate":
        """Replace ``u`` by a bivariate ``b`` with no ``u^0`` term."""
        out = Bivariate([], self.D, self.N)
        power = Bivariate([Series.one(self.N)], self.D, self.N)
        for c in self.coeffs:
            out = out + power.scale(c)
            power = power * b
        return out


def _counts_bivariate(fn, k: int, N: int) -> Bivariate:
    D = N // 2
    coeffs = [Series([fn(k, n, h) for n in range(N + 1)], N) for h in range(D + 1)]
    return Bivariate(coeffs, D, N)


def tstar_bivariate(k: int, N: int) -> Bivariate:
    return _counts_bivariate(t_star, k, N)


def cstar_bivariate(k: int, N: int) -> Bivariate:
    return _counts_bivariate(c_star, k, N)


def moebius_identity_check(k: int, sigma: int, N: int) -> bool:
    """Check the stack-contraction identities linking T*, C* and the structure GF.

    To order ``x^N`` (and ``u^(N/2)``), all of the following must hold:

    * ``sum T*(n,h) u^h x^n == sum C*(n,h) (u / (1 - u x^2))^h x^n``
    * ``sum C*(n,h) (x^(2 sigma - 2) / (1 - x^2))^h x^n == sum_n T4(n) x^n``
    * ``x^(2 sigma - 2) / (1 - x^2) == w0 / (1 - w0 x^2)``
    * ``sum T*(n,h) w0^h x^n == gf_k4sigma(k, sigma, N)``
    """
    if N == 0:
        return t_star(k, 0, 0) == c_star(k, 0, 0) == t4_sigma_total(k, sigma, 0) == 1
    D = N // 2
    bt = tstar_bivariate(k, N)
    bc = cstar_bivariate(k, N)

    x2 = Series.monomial(2, N)
    geom = (1 - x2).inverse()
    # u / (1 - u x^2) = sum_j u^(j+1) x^(2j)
    sub = Bivariate([Series.zero(N)] + [x2**j for j in range(D)], D, N)
    if bc.substitute_bivariate(sub) != bt:
        return False

    stack_weight = Series.monomial(2 * sigma - 2, N) * geom
    totals = Series([t4_sigma_total(k, sigma, n) for n in range(N + 1)], N)
    if bc.substitute(stack_weight) != totals:
        return False

    w0, _ = gf_w0_v0(sigma, N)
    if w0 / (1 - w0 * x2) != stack_weight:
        return False

    return bt.substitute(w0) == gf_k4sigma(k, sigma, N)


def tstar_functional_check(k: int, N: int) -> bool:
    """Bivariate check of ``sum T*(n,h) w^h x^n == (1/v) sum f_k(2n,0) (w x^2 / v^2)^n``
    with ``v = 1 - x + w (x^2 + x^3 + x^4)``, to order ``x^N``, ``w^(N/2)``.
    """
    D = N // 2
    one = Bivariate([Series.one(N)], D, N)
    # 1 - v has x-valuation >= 1, so 1/v = sum_j (1 - v)^j terminates at j = N
    one_minus_v = Bivariate(
        [Series.monomial(1, N), -Series.poly({2: 1, 3: 1, 4: 1}, N)], D, N
    )
    inv_v = one
    power = one
    for _ in range(N):
        power = power * one_minus_v
        inv_v = inv_v + power
    step = Bivariate([Series.zero(N), Series.monomial(2, N)], D, N) * inv_v * inv_v
    acc = Bivariate([], D, N)
    power = one
    for n in range(D + 1):
        acc = acc + power.scale(Series([f_perfect(k, n)], N))
        power = power * step
    return inv_v * acc == tstar_bivariate(k, N)
