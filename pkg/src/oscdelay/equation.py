"""Equation model, tail sums and canonical-form classification.

The model is the second-order half-linear delay recurrence

    D(r(z) * (D x(z))^alpha) + q(z) * x^alpha(d(z)) = 0,    z >= zeta0,

with forward difference D, delayed index d(z) = z - sigma or z - sigma + 1,
and alpha an odd/odd rational.  The key coefficient functionals are the
partial sums R(z) = sum_{s=zeta0}^{z-1} r(s)^(-1/alpha) and the tail sums
theta(z) = sum_{s=z}^{inf} r(s)^(-1/alpha); the equation is canonical when R
diverges and non-canonical when theta is finite.
"""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import DomainError, NonConvergentError
from .power import RationalExponent
from .sequences import Sequence


class DelayForm(enum.Enum):
    MINUS_SIGMA = "delay"            # forcing term at z - sigma
    MINUS_SIGMA_PLUS_ONE = "delay_plus_one"  # forcing term at z - sigma + 1


class FormClass(enum.Enum):
    CANONICAL = "canonical"
    NON_CANONICAL = "non_canonical"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class TailConfig:
    """Truncation policy for numeric tail sums.

    Terms are summed until term < tol_abs; the result is certified only when
    a geometric-ratio certificate holds over the trailing ratio_window terms
    (ratio <= ratio_max < 1), with tail_bound = term * rho / (1 - rho).
    When the certificate fails but the terms decay like a power s^(-p) with
    p > poly_min_exponent, an uncertified power-law tail estimate is added.
    Otherwise summation stops at max_terms, uncertified.
    """

    tol_abs: float = 1e-12
    max_terms: int = 1_000_000
    ratio_window: int = 8
    ratio_max: float = 0.99
    trend_tol: float = 1e-3
    block: int = 65536
    poly_min_exponent: float = 1.05
    fit_window: int = 64


@dataclass(frozen=True)
class TailSumResult:
    value: float
    truncation_index: int
    tail_bound: Optional[float]  # None = unknown
    certified: bool
    method: str

    def __post_init__(self):
        if self.certified and (self.tail_bound is None or self.tail_bound < 0):
            raise ValueError("certified results need a finite non-negative tail_bound")


@dataclass(frozen=True)
class HalfLinearEquation:
    r: Sequence
    q: Sequence
    alpha: RationalExponent
    sigma: int
    delay_form: DelayForm
    zeta0: int
    theta_closed_form: Optional[Sequence] = None

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be a non-negative integer")
        if self.delay_form is DelayForm.MINUS_SIGMA_PLUS_ONE and self.sigma < 1:
            raise ValueError("the z - sigma + 1 delay form requires sigma >= 1")

    def delayed_index(self, zeta: int) -> int:
        if self.delay_form is DelayForm.MINUS_SIGMA:
            return zeta - self.sigma
        return zeta - self.sigma + 1

    def inv_r_alpha(self, zeta: int) -> float:
        """r(zeta)^(-1/alpha); raises DomainError unless r(zeta) > 0."""
        rv = self.r(zeta)
        if rv <= 0:
            raise DomainError(f"r({zeta}) = {rv} is not positive")
        return rv ** (-self.alpha.den / self.alpha.num)

    def inv_r_alpha_array(self, s: np.ndarray) -> np.ndarray:
        rv = self.r.eval_array(s)
        if rv.size and not np.all(rv > 0):
            bad = int(np.asarray(s)[np.argmax(~(rv > 0))])
            raise DomainError(f"r({bad}) is not positive")
        with np.errstate(over="ignore"):
            return rv ** (-self.alpha.den / self.alpha.num)


def R_partial(eq: HalfLinearEquation, zeta: int) -> float:
    """Partial sum of r^(-1/alpha) from zeta0 to zeta - 1 (empty sum = 0)."""
    if zeta < eq.zeta0:
        raise DomainError(f"R is defined for zeta >= zeta0 = {eq.zeta0}, got {zeta}")
    if zeta == eq.zeta0:
        return 0.0
    terms = eq.inv_r_alpha_array(np.arange(eq.zeta0, zeta, dtype=float))
    if not np.all(np.isfinite(terms)):
        bad = eq.zeta0 + int(np.argmax(~np.isfinite(terms)))
        raise DomainError(f"r^(-1/alpha) not finite at index {bad}")
    return float(np.sum(terms))


def _fit_power_exponent(s: np.ndarray, t: np.ndarray) -> Optional[float]:
    """Least-squares slope of ln t against ln s; returns p with t ~ s^(-p)."""
    mask = (t > 0) & (s > 0)
    if mask.sum() < 4:
        return None
    ls = np.log(s[mask])
    lt = np.log(t[mask])
    ls -= ls.mean()
    denom = float(np.dot(ls, ls))
    if denom == 0.0:
        return None
    return float(-np.dot(ls, lt - lt.mean()) / denom)


def _poly_tail_estimate(s_last: float, t_last: float, p: float) -> float:
    """Euler-Maclaurin tail of c*s^(-p) past s_last, anchored at the last term."""
    m = s_last + 1.0
    scale = t_last * (m / s_last) ** (-p)
    return scale * (m / (p - 1.0) + 0.5 + p / (12.0 * m))


def _theta_numeric(eq: HalfLinearEquation, zeta: int, cfg: TailConfig) -> TailSumResult:
    block_sums: list[float] = []
    hist_t = np.empty(0)
    hist_s = np.empty(0)
    prev_min: Optional[float] = None
    s = zeta
    n_done = 0
    keep = max(cfg.fit_window, cfg.ratio_window + 1)

    while n_done < cfg.max_terms:
        m = min(cfg.block, cfg.max_terms - n_done)
        ss = np.arange(s, s + m, dtype=float)
        t = eq.inv_r_alpha_array(ss)
        if not np.all(np.isfinite(t)):
            raise NonConvergentError(
                f"tail terms overflow near index {s}: series looks divergent"
            )

        below = t <= cfg.tol_abs
        stop_at = int(np.argmax(below)) if bool(below.any()) else -1
        if stop_at >= 0:
            used_t, used_s = t[: stop_at + 1], ss[: stop_at + 1]
            block_sums.append(float(np.sum(used_t)))
            hist_t = np.concatenate([hist_t, used_t])[-keep:]
            hist_s = np.concatenate([hist_s, used_s])[-keep:]
            partial = math.fsum(block_sums)
            trunc = int(used_s[-1])

            nz = hist_t > 0
            win_t = hist_t[nz][-(cfg.ratio_window + 1):]
            if hist_t[-1] == 0.0 and win_t.size >= 2:
                # underflowed to zero after a decaying run: tail is below tol
                ratios = win_t[1:] / win_t[:-1]
                if float(ratios.max()) <= cfg.ratio_max:
                    return TailSumResult(partial, trunc, cfg.tol_abs, True, "geometric")
            if win_t.size == cfg.ratio_window + 1:
                ratios = win_t[1:] / win_t[:-1]
                rho = float(ratios.max())
                if rho <= cfg.ratio_max:
                    bound = float(win_t[-1]) * rho / (1.0 - rho)
                    return TailSumResult(partial, trunc, bound, True, "geometric")

            p = _fit_power_exponent(hist_s, hist_t)
            if p is not None and p > cfg.poly_min_exponent and hist_t[-1] > 0:
                tail = _poly_tail_estimate(float(used_s[-1]), float(used_t[-1]), p)
                return TailSumResult(partial + tail, trunc, None, False, "poly_tail")
            # tiny terms that decay too slowly to bound: keep summing
            if stop_at + 1 < m:
                rest = t[stop_at + 1:]
                block_sums[-1] += float(np.sum(rest))
                hist_t = np.concatenate([hist_t, rest])[-keep:]
                hist_s = np.concatenate([hist_s, ss[stop_at + 1:]])[-keep:]
        else:
            block_sums.append(float(np.sum(t)))
            hist_t = np.concatenate([hist_t, t])[-keep:]
            hist_s = np.concatenate([hist_s, ss])[-keep:]

        cur_min = float(t.min())
        if prev_min is not None and cur_min > 0 and cur_min >= (1.0 - cfg.trend_tol) * prev_min:
            raise NonConvergentError(
                f"tail terms not decreasing near index {s}: series looks divergent"
            )
        prev_min = cur_min
        s += m
        n_done += m

    return TailSumResult(math.fsum(block_sums), s - 1, None, False, "max_terms")


def _cross_check_cfg(cfg: TailConfig) -> TailConfig:
    return replace(cfg, tol_abs=max(cfg.tol_abs, 1e-9), max_terms=min(cfg.max_terms, 100_000))


@functools.lru_cache(maxsize=4096)
def _theta_cached(eq: HalfLinearEquation, zeta: int, cfg: TailConfig) -> TailSumResult:
    if eq.theta_closed_form is not None:
        value = eq.theta_closed_form(zeta)
        numeric = _theta_numeric(eq, zeta, _cross_check_cfg(cfg))
        if numeric.certified or numeric.method == "poly_tail":
            if abs(numeric.value - value) > 1e-3 * max(1.0, abs(value)):
                raise ValueError(
                    f"registered closed form for theta({zeta}) = {value} disagrees with "
                    f"numeric tail sum {numeric.value}"
                )
        return TailSumResult(float(value), zeta, 0.0, True, "closed_form")
    return _theta_numeric(eq, zeta, cfg)


def theta(eq: HalfLinearEquation, zeta: int, cfg: TailConfig = TailConfig()) -> TailSumResult:
    """Tail sum theta(zeta) = sum_{s=zeta}^{inf} r(s)^(-1/alpha).

    Uses the registered closed form when present (cross-checked against the
    numeric path); raises NonConvergentError when the terms fail the
    convergence screen.
    """
    return _theta_cached(eq, int(zeta), cfg)


def theta_extended(eq: HalfLinearEquation, zeta: int, cfg: TailConfig = TailConfig()) -> TailSumResult:
    """theta at possibly under-domain indices via theta(z) = theta(zeta0) + sum_{s=z}^{zeta0-1} r^(-1/alpha)(s).

    Raises DomainError when r is not evaluable (or not positive) on the gap.
    """
    if zeta >= eq.zeta0:
        return theta(eq, zeta, cfg)
    base = theta(eq, eq.zeta0, cfg)
    extra = math.fsum(eq.inv_r_alpha(s) for s in range(zeta, eq.zeta0))
    return TailSumResult(
        base.value + extra, base.truncation_index, base.tail_bound, base.certified,
        base.method + "+extension",
    )


def classify_form(eq: HalfLinearEquation, cfg: TailConfig = TailConfig()) -> FormClass:
    """Canonical / non-canonical / inconclusive, certifying rather than guessing.

    Canonical is declared only on a divergence witness (terms bounded away
    from zero on a trailing window); non-canonical only when the tail sum
    certifies finite.  Polynomially-decaying tails without a registered
    closed form stay inconclusive.
    """
    try:
        res = theta(eq, eq.zeta0, cfg)
    except NonConvergentError:
        return FormClass.CANONICAL
    if res.certified:
        return FormClass.NON_CANONICAL
    return FormClass.INCONCLUSIVE


@dataclass(frozen=True)
class Violation:
    hypothesis: str  # "H1" or "H2"
    index: Optional[int]
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    horizon: int
    violations: tuple = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(eq: HalfLinearEquation, horizon: int) -> ValidationReport:
    """Sample r and q on [zeta0, horizon] and report violated hypotheses.

    H1: r > 0 everywhere sampled.  H2: q >= 0 everywhere sampled and q > 0
    somewhere on the horizon.  Violations are report entries, not failures.
    """
    if horizon <= eq.zeta0:
        raise ValueError(f"horizon must exceed zeta0 = {eq.zeta0}")
    violations: list[Violation] = []
    h1_hit = h2_hit = False
    any_q_positive = False
    for z in range(eq.zeta0, horizon + 1):
        if not h1_hit:
            try:
                rv = eq.r(z)
            except DomainError as exc:
                violations.append(Violation("H1", z, f"r not evaluable: {exc}"))
                h1_hit = True
            else:
                if rv <= 0:
                    violations.append(Violation("H1", z, f"r({z}) = {rv} <= 0"))
                    h1_hit = True
        if not h2_hit:
            try:
                qv = eq.q(z)
            except DomainError as exc:
                violations.append(Violation("H2", z, f"q not evaluable: {exc}"))
                h2_hit = True
            else:
                if qv < 0:
                    violations.append(Violation("H2", z, f"q({z}) = {qv} < 0"))
                    h2_hit = True
                elif qv > 0:
                    any_q_positive = True
    if not h2_hit and not any_q_positive:
        violations.append(
            Violation("H2", None, f"q is identically zero on [{eq.zeta0}, {horizon}]")
        )
    return ValidationReport(horizon=horizon, violations=tuple(violations))
