"""Dominant singularities and exponential growth rates.

Each structure class has a generating function of the form
``g(x) * F_k(theta(x))`` where ``F_k`` is the k-noncrossing matching series,
whose dominant singularity is ``rho_k = 1 / (2(k-1))``.  The growth rate is
``1 / gamma`` with ``gamma`` the smallest positive root of ``theta(x) = rho_k``.
Roots are located by a grid scan for the first sign change followed by
bisection in mpmath at 60 significant digits.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from fractions import Fraction

import mpmath
from mpmath import mpf

from .enumeration import CountTable

PRECISION = 60
DEFAULT_TOL = 1e-12
DEFAULT_STEP = 1e-3

KIND_LAMBDA = {"k21": 2, "k41": 4, "k2sigma": 2, "k4sigma": 4}
VERIFIED_K = range(3, 10)


class RootNotFoundError(ArithmeticError):
    """No sign change of ``theta(x) - rho`` on (0, 1)."""


class DenominatorVanishesError(ArithmeticError):
    pass


class NegativeRadicandError(ArithmeticError):
    pass


def rho(k: int) -> Fraction:
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    return Fraction(1, 2 * (k - 1))


def subexponential_exponent(k: int) -> float:
    """Exponent of n in the polynomial factor: ``-(k-1)^2 - (k-1)/2``."""
    return -((k - 1) ** 2) - (k - 1) / 2


def u_radicand(z):
    return 1 + 4 * z - 4 * z**2 - 6 * z**3 + 4 * z**4 + z**6


def r1_eval(z, sign: int = -1):
    """Evaluate ``r1(z) = -(-2z^2 + z^3 - 1 + sign*u(z)) / (2(1 - 2z - z^2 + z^4))``.

    ``u(z)`` is the positive square root of :func:`u_radicand`.  The default
    ``sign=-1`` picks the branch that is analytic at 0 with ``r1(0) = 1``;
    this is the branch that reproduces the ``<k, 4, 1>`` growth rates.
    ``sign=+1`` gives the other branch, with ``r1(0) = 0``.
    """
    with mpmath.workdps(PRECISION):
        z = mpf(z)
        rad = u_radicand(z)
        if rad < 0:
            raise NegativeRadicandError(f"u(z)^2 = {rad} < 0 at z = {z}")
        den = 2 * (1 - 2 * z - z**2 + z**4)
        if den == 0:
            raise DenominatorVanishesError(f"r1 denominator vanishes at z = {z}")
        return -(-2 * z**2 + z**3 - 1 + sign * mpmath.sqrt(rad)) / den


@dataclass(frozen=True)
class RootEquation:
    """``theta(x) = rho`` for one structure family.

    ``rho`` defaults to ``1 / (2(k-1))``; it can be overridden, which is only
    useful for exercising the solvers.
    """

    kind: str
    k: int
    sigma: int | None = None
    rho_override: Fraction | None = None

    def __post_init__(self):
        if self.kind not in KIND_LAMBDA:
            raise ValueError(f"unknown equation kind {self.kind!r}")
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")
        if self.kind in ("k2sigma", "k4sigma") and self.sigma is None:
            raise ValueError(f"{self.kind} needs sigma")
        if self.kind == "k4sigma" and self.sigma < 3:
            raise ValueError("k4sigma needs sigma >= 3")
        if self.kind == "k2sigma" and self.sigma < 1:
            raise ValueError("k2sigma needs sigma >= 1")

    @property
    def lam(self) -> int:
        return KIND_LAMBDA[self.kind]

    @property
    def stack(self) -> int:
        return self.sigma if self.sigma is not None else 1

    @property
    def rho(self) -> Fraction:
        return self.rho_override if self.rho_override is not None else rho(self.k)

    def denominators(self, x) -> list:
        """Denominators appearing in ``theta``; a sign change in any of them is a pole."""
        if self.kind == "k21":
            return [x * x - x + 1]
        if self.kind == "k41":
            r = r1_eval(-x * x)
            return [1 - 2 * (-x * x) - x**4 + x**8, 1 - x * r]
        s = self.sigma
        if self.kind == "k2sigma":
            base = x ** (2 * s) - x**2 + 1
            u0 = x ** (2 * s - 2) / base
            return [base, u0 * x * x - x + 1]
        base = 1 - x**2 + x ** (2 * s)
        w0 = x ** (2 * s - 2) / base
        return [base, 1 - x + w0 * (x**2 + x**3 + x**4)]

    def theta(self, x):
        with mpmath.workdps(PRECISION):
            x = mpf(x)
            if self.kind == "k21":
                return x / (x * x - x + 1)
            if self.kind == "k41":
                r = r1_eval(-x * x)
                return x * r / (1 - x * r)
            s = self.sigma
            if self.kind == "k2sigma":
                base = x ** (2 * s) - x**2 + 1
                u0 = x ** (2 * s - 2) / base
                return mpmath.sqrt(u0) * x / (u0 * x * x - x + 1)
            base = 1 - x**2 + x ** (2 * s)
            assert base > 0, "w0 must be positive on the search interval"
            w0 = x ** (2 * s - 2) / base
            v0 = 1 - x + w0 * (x**2 + x**3 + x**4)
            return mpmath.sqrt(w0) * x / v0

    def residual(self, x):
        with mpmath.workdps(PRECISION):
            return self.theta(x) - mpf(self.rho.numerator) / self.rho.denominator


@dataclass
class GrowthResult:
    k: int
    sigma: int
    lam: int
    gamma: mpf
    rate: mpf
    dominance_verified: bool
    iterations: int
    residual: mpf
    note: str = ""

    def row(self) -> dict:
        return {
            "k": self.k,
            "sigma": self.sigma,
            "lambda": self.lam,
            "gamma": mpmath.nstr(self.gamma, 12),
            "rate": mpmath.nstr(self.rate, 6),
            "dominance_verified": str(self.dominance_verified).lower(),
            "residual": mpmath.nstr(abs(self.residual), 3),
        }


GROWTH_CSV_HEADER = ("k", "sigma", "lambda", "gamma", "rate", "dominance_verified", "residual")


def growth_csv(results) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=GROWTH_CSV_HEADER, lineterminator="\n")
    writer.writeheader()
    for r in results:
        writer.writerow(r.row())
    return buf.getvalue()


def _signs(eq: RootEquation, x) -> tuple[int, list[int]]:
    """Sign of ``theta(x) - rho`` and of each denominator at ``x``."""
    with mpmath.workdps(PRECISION):
        dens = [mpmath.sign(d) for d in eq.denominators(x)]
        if 0 in dens:
            raise DenominatorVanishesError(f"{eq.kind} denominator vanishes at x = {x}")
        return int(mpmath.sign(eq.residual(x))), [int(d) for d in dens]


def first_bracket(eq: RootEquation, step: float = DEFAULT_STEP, lo=0.0, hi=1.0):
    """Scan ``(lo, hi)`` for the first sign change of ``theta - rho``.

    Returns ``(a, b)`` with a sign change on ``[a, b]``, or ``None`` if none
    was found before ``hi``.  A denominator changing sign first is an error.
    """
    with mpmath.workdps(PRECISION):
        h = mpf(str(step))
        x0 = mpf(lo) + h
        s0, d0 = _signs(eq, x0)
        if s0 == 0:
            return x0, x0
        i = 1
        while True:
            x1 = mpf(lo) + (i + 1) * h
            if x1 >= hi:
                return None
            s1, d1 = _signs(eq, x1)
            if d1 != d0:
                raise DenominatorVanishesError(
                    f"{eq.kind} denominator changes sign in [{x0}, {x1}] before any root"
                )
            if s1 != s0:
                return x0, x1
            x0, s0 = x1, s1
            i += 1


def _bisect(eq: RootEquation, a, b, tol: float):
    with mpmath.workdps(PRECISION):
        sa = mpmath.sign(eq.residual(a))
        if a == b:
            return a, 0
        it = 0
        tol = mpf(tol)
        while True:
            mid = (a + b) / 2
            it += 1
            r = eq.residual(mid)
            if r == 0:
                return mid, it
            if mpmath.sign(r) == sa:
                a = mid
            else:
                b = mid
            if b - a <= tol * mpf("1e-6") and abs(eq.residual((a + b) / 2)) <= tol:
                return (a + b) / 2, it
            if it > 1000:  # pragma: no cover - 60 digits run out long before
                raise ArithmeticError("bisection failed to converge")


def solve_growth(
    eq: RootEquation, tol: float = DEFAULT_TOL, step: float = DEFAULT_STEP
) -> GrowthResult:
    """Smallest root of ``theta(x) = rho`` in (0, 1) and the growth rate ``1/gamma``."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    try:
        bracket = first_bracket(eq, step)
    except (NegativeRadicandError, ValueError) as exc:
        raise RootNotFoundError(f"theta left its real domain before a root: {exc}") from exc
    if bracket is None:
        raise RootNotFoundError(f"no sign change of theta - rho on (0, 1) for {eq}")
    gamma, iterations = _bisect(eq, *bracket, tol)
    with mpmath.workdps(PRECISION):
        residual = eq.residual(gamma)
        rate = 1 / gamma
    verified = dominance_check(eq, gamma, step=step)
    note = "real-line scan only; complex roots not certified"
    if eq.kind == "k4sigma" and eq.k not in VERIFIED_K:
        verified = False
        note = f"dominance only established for k in 3..9; k={eq.k} not verified"
    return GrowthResult(
        k=eq.k,
        sigma=eq.stack,
        lam=eq.lam,
        gamma=gamma,
        rate=rate,
        dominance_verified=verified,
        iterations=iterations,
        residual=residual,
        note=note,
    )


def negative_branch_solutions(eq: RootEquation, step: float = DEFAULT_STEP, tol=DEFAULT_TOL):
    """Real solutions of ``theta(x) = -rho`` with ``0 < |x| < 1``.

    Both half-lines are scanned outward from 0 until ``|x|`` reaches 1 or theta
    leaves its real domain (negative radicand, pole).
    """
    flipped = replace(eq, rho_override=-eq.rho)
    found = []
    for direction in (1, -1):
        mirror = _Mirrored(flipped, direction)
        try:
            bracket = first_bracket(mirror, step)
        except (NegativeRadicandError, DenominatorVanishesError, ValueError):
            bracket = None
        if bracket is not None:
            t, _ = _bisect(mirror, *bracket, tol)
            found.append(direction * t)
    return found


@dataclass(frozen=True)
class _Mirrored:
    """``x -> eq(direction * x)`` so the bracket scan can walk either half-line."""

    eq: RootEquation
    direction: int

    @property
    def kind(self):
        return self.eq.kind

    def denominators(self, x):
        return self.eq.denominators(self.direction * x)

    def residual(self, x):
        return self.eq.residual(self.direction * x)


def dominance_check(eq: RootEquation, gamma, step: float = DEFAULT_STEP) -> bool:
    """True iff no real solution of ``theta(x) = -rho`` has modulus <= gamma.

    This covers the real line only; complex solutions are not examined.
    """
    with mpmath.workdps(PRECISION):
        bound = abs(mpf(gamma)) + mpf(DEFAULT_TOL)
        return all(abs(x) > bound for x in negative_branch_solutions(eq, step))


# -- empirical diagnostics -----------------------------------------------------


@dataclass
class RateEstimate:
    n: int
    rate: float
    corrected: float | None
    ratios: list[float] = field(default_factory=list)


def empirical_rate(counts: CountTable, window: int = 1, k: int | None = None) -> RateEstimate:
    """Ratio ``T(n+1)/T(n)`` at the largest available ``n``.

    ``corrected`` divides out the polynomial factor ``n^e`` with
    ``e = -(k-1)^2 - (k-1)/2``, when ``k`` is known.  ``ratios`` holds the last
    ``window`` consecutive ratios.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    series = counts.series()
    run = [series[-1]] if series else []
    for n, value in reversed(series[:-1]):
        if n != run[-1][0] - 1:
            break
        run.append((n, value))
    run.reverse()
    if len(run) < window + 1:
        raise ValueError(
            f"need {window + 1} consecutive entries, the table ends with {len(run)}"
        )
    ratios = [
        Fraction(b, a) for (_, a), (_, b) in zip(run[-window - 1 :], run[-window:])
    ]
    n = run[-2][0]
    rate = ratios[-1]
    k = k if k is not None else counts.params.get("k")
    corrected = None
    if k is not None and n > 0:
        corrected = float(rate) * (n / (n + 1)) ** subexponential_exponent(k)
    return RateEstimate(n, float(rate), corrected, [float(r) for r in ratios])


# -- reference data --------------------------------------------------------------

_Q0_ROOTS = {
    3: (4,),
    4: (2, 6),
    5: (4, 8),
    6: (2, 6, 10),
    7: (4, 8, 12),
    8: (2, 6, 10, 14),
    9: (4, 8, 12, 16),
}

# leading polynomial coefficients of the matching-series ODE, as {power: coeff};
# each bracket factors as prod (1 - d^2 z^2) over the tabulated root denominators
Q0_POLYNOMIALS = {
    3: {2: Fraction(1, 4), 4: -4},
    4: {6: 1, 8: -40, 10: 144},
    5: {8: 1, 10: -80, 12: 1024},
    6: {10: 1, 12: -140, 14: 4144, 16: -14400},
    7: {12: -1, 14: 224, 16: -12544, 18: 147456},
    8: {14: 1, 16: -336, 18: 31584, 20: -826624, 22: 2822400},
    9: {16: -1, 18: 480, 20: -69888, 22: 3358720, 24: -37748736},
}


def polynomial_roots_reference(k: int) -> frozenset[Fraction]:
    """Nonzero roots of the leading ODE coefficient of ``F_k``, for 3 <= k <= 9."""
    if k not in _Q0_ROOTS:
        raise ValueError(f"reference roots are only tabulated for 3 <= k <= 9, got {k}")
    roots = frozenset(
        s * Fraction(1, d) for d in _Q0_ROOTS[k] for s in (1, -1)
    )
    assert rho(k) in roots and -rho(k) in roots
    return roots
