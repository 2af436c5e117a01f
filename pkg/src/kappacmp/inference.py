"""Hypothesis test and confidence intervals for comparing two weighted kappas.

Inference targets the difference delta = kappa1(c) - kappa2(c) and the
ratio theta = kappa1(c) / kappa2(c) under the paired design. Variances and
the covariance come from the delta method applied to the multinomial cell
probabilities; the paired covariances Cov(Se1_hat, Se2_hat) = eps1/(n*p)
and Cov(Sp1_hat, Sp2_hat) = eps0/(n*q) carry the conditional dependence
between the tests into the kappa covariance.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from functools import lru_cache

from .data_model import PairedCounts
from .errors import (
    BootstrapFailedError,
    DegenerateKappaError,
    DomainError,
    FiellerInvalidError,
    InversionUndefinedError,
    LogIntervalError,
    NonEstimableError,
    UndefinedRatioError,
)
from .kappa_core import (
    TOL_YOUDEN,
    AccuracyEstimates,
    KappaPair,
    accuracy_from_counts,
    kappa_pair,
)
from .numerics import RandomStream, empirical_quantile, normal_cdf, normal_quantile, sample_beta, sample_multinomial

__all__ = [
    "BetaPrior",
    "Priors",
    "ConfidenceConfig",
    "ConfidenceInterval",
    "FiellerCoefficients",
    "KappaCovariance",
    "TestResult",
    "kappa_covariance",
    "bloch_test",
    "wald_diff_ci",
    "wald_ratio_ci",
    "log_ratio_ci",
    "fieller_ratio_ci",
    "fieller_interval",
    "bootstrap_ci",
    "bayesian_ci",
    "invert_ratio_ci",
    "reciprocal_ratio_ci",
]

# Substream tags so that analysis-level bootstrap and posterior draws never
# collide with the per-replicate streams used by coverage studies.
BOOTSTRAP_STREAM = 101
BAYES_STREAM = 102

_BOOTSTRAP_DRAW_FACTOR = 10  # total draw budget = factor * B before giving up


@dataclass(frozen=True)
class BetaPrior:
    """Parameters of a conjugate Beta prior."""

    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if self.alpha <= 0.0 or self.beta <= 0.0:
            raise DomainError(f"Beta prior parameters must be positive, got {self}")


@dataclass(frozen=True)
class Priors:
    """One Beta prior per estimated proportion (flat Beta(1,1) by default)."""

    se1: BetaPrior = BetaPrior()
    sp1: BetaPrior = BetaPrior()
    se2: BetaPrior = BetaPrior()
    sp2: BetaPrior = BetaPrior()
    p: BetaPrior = BetaPrior()


@dataclass(frozen=True)
class ConfidenceConfig:
    """Shared knobs for every interval construction."""

    conf: float = 0.95
    bootstrap_b: int = 2000
    bayes_m: int = 10000
    priors: Priors = Priors()
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.conf < 1.0:
            raise DomainError(f"confidence level must be in (0, 1), got {self.conf!r}")
        if self.bootstrap_b < 100:
            raise DomainError(f"bootstrap needs B >= 100, got {self.bootstrap_b}")
        if self.bayes_m < 1000:
            raise DomainError(f"posterior sampling needs M >= 1000, got {self.bayes_m}")

    @property
    def alpha(self) -> float:
        return 1.0 - self.conf

    @property
    def z(self) -> float:
        """Two-sided critical value z_{1-alpha/2}."""
        return normal_quantile(1.0 - self.alpha / 2.0)


@dataclass(frozen=True)
class ConfidenceInterval:
    target: str          # "difference", "ratio" or "inverse-ratio"
    method: str          # "wald", "logarithmic", "fieller", "bootstrap-bc", "bayesian-quantile"
    lower: float
    upper: float
    point: float
    corrected: bool = False

    def __post_init__(self):
        if self.lower > self.upper:
            raise DomainError(f"interval bounds out of order: ({self.lower}, {self.upper})")

    @property
    def half_width(self) -> float:
        return (self.upper - self.lower) / 2.0

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper

    @property
    def length(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class TestResult:
    z_stat: float
    p_value: float


@dataclass(frozen=True)
class KappaCovariance:
    """Delta-method variances and covariance of the two kappa estimates.

    ``a`` holds the 2x3 coefficient array (a_h1, a_h2, a_h3) that maps the
    variances of (Se_h, Sp_h, p) onto Var[kappa_h(c)]. var_theta and
    var_log_theta are None when kappa2 (or the product kappa1*kappa2) is
    zero, in which case the ratio-based intervals raise at point of use.
    """

    var1: float
    var2: float
    cov12: float
    a: tuple[tuple[float, float, float], tuple[float, float, float]]
    var_theta: float | None
    var_log_theta: float | None

    @property
    def se_delta(self) -> float:
        return math.sqrt(max(self.var1 + self.var2 - 2.0 * self.cov12, 0.0))


@dataclass(frozen=True)
class FiellerCoefficients:
    """Quadratic coefficients w_ij = kappa_i*kappa_j - sigma_ij * z^2.

    A discriminant that is zero up to rounding still yields the degenerate
    point interval; only a genuinely negative one invalidates the method.
    """

    w11: float
    w12: float
    w22: float

    @property
    def discriminant(self) -> float:
        raw = self.w12 * self.w12 - self.w11 * self.w22
        if raw < 0.0 and raw >= -1e-12 * max(self.w12 * self.w12,
                                             abs(self.w11 * self.w22)):
            return 0.0
        return raw

    @property
    def valid(self) -> bool:
        return self.w22 != 0.0 and self.discriminant >= 0.0


def _a_coefficients(acc: AccuracyEstimates, kappa: float, y: float, sp: float, c: float):
    p, q = acc.p, acc.q
    a1 = p * q - p * (q - c) * kappa
    a2 = a1 + (q - c) * kappa
    a3 = (1.0 - 2.0 * p) * y - ((1.0 - c - 2.0 * p) * y + sp + c - 1.0) * kappa
    return a1, a2, a3


def kappa_covariance(acc: AccuracyEstimates, kp: KappaPair, n: float) -> KappaCovariance:
    """Variances and covariance of the kappa estimates at sample size ``n``.

    Evaluating at n=1 gives the scale-free quantities n*Var and n*Cov,
    which is what the sample-size formula needs.
    """
    if n <= 0:
        raise DomainError(f"sample size must be positive, got {n!r}")
    # the algebra divides by Y_h; anti-informative estimates (negative Y)
    # still have well-defined variances and occur routinely in small samples
    if abs(acc.y1) <= TOL_YOUDEN or abs(acc.y2) <= TOL_YOUDEN:
        raise DegenerateKappaError(
            f"variance is degenerate at Youden indices ({acc.y1:g}, {acc.y2:g})")
    p, q, c = acc.p, acc.q, kp.c
    var_se1 = acc.se1 * (1.0 - acc.se1) / (n * p)
    var_se2 = acc.se2 * (1.0 - acc.se2) / (n * p)
    var_sp1 = acc.sp1 * (1.0 - acc.sp1) / (n * q)
    var_sp2 = acc.sp2 * (1.0 - acc.sp2) / (n * q)
    var_p = p * q / n
    cov_se = acc.eps1 / (n * p)
    cov_sp = acc.eps0 / (n * q)

    a1 = _a_coefficients(acc, kp.kappa1, acc.y1, acc.sp1, c)
    a2 = _a_coefficients(acc, kp.kappa2, acc.y2, acc.sp2, c)

    scale1 = (kp.kappa1 / (p * q * acc.y1)) ** 2
    scale2 = (kp.kappa2 / (p * q * acc.y2)) ** 2
    var1 = scale1 * (a1[0] ** 2 * var_se1 + a1[1] ** 2 * var_sp1 + a1[2] ** 2 * var_p)
    var2 = scale2 * (a2[0] ** 2 * var_se2 + a2[1] ** 2 * var_sp2 + a2[2] ** 2 * var_p)
    cov_scale = kp.kappa1 * kp.kappa2 / (p * p * q * q * acc.y1 * acc.y2)
    cov12 = cov_scale * (a1[0] * a2[0] * cov_se + a1[1] * a2[1] * cov_sp
                         + a1[2] * a2[2] * var_p)

    var_theta = None
    var_log_theta = None
    if kp.kappa2 != 0.0:
        k1, k2 = kp.kappa1, kp.kappa2
        var_theta = (k2 * k2 * var1 + k1 * k1 * var2 - 2.0 * k1 * k2 * cov12) / k2 ** 4
        if k1 != 0.0:
            var_log_theta = (var1 / (k1 * k1) + var2 / (k2 * k2)
                             - 2.0 * cov12 / (k1 * k2))
    return KappaCovariance(var1=var1, var2=var2, cov12=cov12, a=(a1, a2),
                           var_theta=var_theta, var_log_theta=var_log_theta)


def _analysis(counts: PairedCounts, c: float):
    acc = accuracy_from_counts(counts)
    kp = kappa_pair(acc, c)
    cov = kappa_covariance(acc, kp, counts.n)
    return acc, kp, cov


def bloch_test(counts: PairedCounts, c: float,
               config: ConfidenceConfig | None = None) -> TestResult:
    """Asymptotic z test of equal weighted kappas (two-sided)."""
    _, kp, cov = _analysis(counts, c)
    se = cov.se_delta
    if se == 0.0:
        if kp.delta == 0.0:
            # identical test columns: no evidence either way
            return TestResult(z_stat=0.0, p_value=1.0)
        raise DegenerateKappaError("zero standard error; the test statistic is undefined")
    z = kp.delta / se
    return TestResult(z_stat=z, p_value=2.0 * normal_cdf(-abs(z)))


def wald_diff_ci(counts: PairedCounts, c: float,
                 config: ConfidenceConfig | None = None) -> ConfidenceInterval:
    """Wald interval for the difference, inverting the z test."""
    config = config or ConfidenceConfig()
    _, kp, cov = _analysis(counts, c)
    half = config.z * cov.se_delta
    return ConfidenceInterval(target="difference", method="wald",
                              lower=kp.delta - half, upper=kp.delta + half,
                              point=kp.delta)


def wald_ratio_ci(counts: PairedCounts, c: float,
                  config: ConfidenceConfig | None = None) -> ConfidenceInterval:
    """Wald interval for the ratio from the delta-method variance of theta."""
    config = config or ConfidenceConfig()
    _, kp, cov = _analysis(counts, c)
    if cov.var_theta is None:
        raise UndefinedRatioError("kappa2 is zero; the ratio is undefined")
    theta = kp.theta
    half = config.z * math.sqrt(max(cov.var_theta, 0.0))
    return ConfidenceInterval(target="ratio", method="wald",
                              lower=theta - half, upper=theta + half, point=theta)


def log_ratio_ci(counts: PairedCounts, c: float,
                 config: ConfidenceConfig | None = None) -> ConfidenceInterval:
    """Interval for the ratio through the normal approximation of ln(theta)."""
    config = config or ConfidenceConfig()
    _, kp, cov = _analysis(counts, c)
    if kp.kappa1 <= 0.0 or kp.kappa2 <= 0.0:
        raise LogIntervalError(
            f"logarithmic interval needs positive kappas, got ({kp.kappa1:g}, {kp.kappa2:g})")
    theta = kp.theta
    spread = math.exp(config.z * math.sqrt(max(cov.var_log_theta, 0.0)))
    return ConfidenceInterval(target="ratio", method="logarithmic",
                              lower=theta / spread, upper=theta * spread, point=theta)


def fieller_interval(kappa1: float, kappa2: float, var1: float, var2: float,
                     cov12: float, z: float) -> tuple[float, float]:
    """Roots of the Fieller quadratic, lower root first.

    Invalid (raises) when the discriminant is negative or w22 is zero; a
    zero discriminant yields the degenerate point interval.
    """
    coeffs = FiellerCoefficients(
        w11=kappa1 * kappa1 - var1 * z * z,
        w12=kappa1 * kappa2 - cov12 * z * z,
        w22=kappa2 * kappa2 - var2 * z * z,
    )
    if not coeffs.valid:
        raise FiellerInvalidError(
            f"Fieller condition fails (w12^2 - w11*w22 = {coeffs.discriminant:g}, "
            f"w22 = {coeffs.w22:g})")
    root = math.sqrt(coeffs.discriminant)
    lo = (coeffs.w12 - root) / coeffs.w22
    hi = (coeffs.w12 + root) / coeffs.w22
    return (lo, hi) if lo <= hi else (hi, lo)


def fieller_ratio_ci(counts: PairedCounts, c: float,
                     config: ConfidenceConfig | None = None) -> ConfidenceInterval:
    """Fieller interval for the ratio of the two kappas."""
    config = config or ConfidenceConfig()
    _, kp, cov = _analysis(counts, c)
    lo, hi = fieller_interval(kp.kappa1, kp.kappa2, cov.var1, cov.var2,
                              cov.cov12, config.z)
    return ConfidenceInterval(target="ratio", method="fieller",
                              lower=lo, upper=hi, point=kp.theta)


def _replicate_kappas(counts: PairedCounts, c: float, b: int, stream: RandomStream,
                      need_ratio: bool) -> tuple[list[tuple[float, float]], int]:
    """Draw B estimable bootstrap replicates of (kappa1, kappa2).

    Resamples the 8-cell table from a multinomial with the observed
    proportions (distributionally identical to resampling subjects).
    Non-estimable replicates are redrawn up to a 10*B total draw budget.
    """
    n = int(round(counts.n))
    cells = counts.cells()
    probs = [cell / counts.n for cell in cells]
    pairs: list[tuple[float, float]] = []
    draws = 0
    budget = _BOOTSTRAP_DRAW_FACTOR * b
    while len(pairs) < b and draws < budget:
        draws += 1
        sample = sample_multinomial(probs, n, stream)
        rep = PairedCounts(*sample)
        try:
            acc = accuracy_from_counts(rep)
            kp = kappa_pair(acc, c)
        except (NonEstimableError, DegenerateKappaError):
            continue
        if need_ratio and kp.kappa2 == 0.0:
            continue
        pairs.append((kp.kappa1, kp.kappa2))
    if len(pairs) < b:
        raise BootstrapFailedError(
            f"only {len(pairs)} of {b} replicates were estimable within {budget} draws")
    return pairs, draws - b


def bootstrap_ci(counts: PairedCounts, c: float, target: str,
                 config: ConfidenceConfig | None = None,
                 stream: RandomStream | None = None) -> ConfidenceInterval:
    """Bias-corrected bootstrap interval for the difference or the ratio.

    The bias correction shifts the percentile levels by z0 = Phi^-1(A/B)
    where A counts replicate statistics below the plug-in estimate; A is
    clamped to [1, B-1] so z0 stays finite on degenerate data. ``point``
    is the plug-in estimate, which a strongly bias-corrected interval may
    legitimately exclude.
    """
    config = config or ConfidenceConfig()
    if target not in ("difference", "ratio"):
        raise DomainError(f"target must be 'difference' or 'ratio', got {target!r}")
    _, kp, _ = _analysis(counts, c)
    need_ratio = target == "ratio"
    point = kp.theta if need_ratio else kp.delta
    if stream is None:
        stream = RandomStream(config.seed, BOOTSTRAP_STREAM)
    b = config.bootstrap_b
    pairs, _ = _replicate_kappas(counts, c, b, stream, need_ratio)
    if need_ratio:
        stats = [k1 / k2 for k1, k2 in pairs]
    else:
        stats = [k1 - k2 for k1, k2 in pairs]
    a_count = sum(1 for v in stats if v < point)
    a_count = min(max(a_count, 1), b - 1)
    z0 = normal_quantile(a_count / b)
    alpha1 = normal_cdf(2.0 * z0 - config.z)
    alpha2 = normal_cdf(2.0 * z0 + config.z)
    return ConfidenceInterval(target=target, method="bootstrap-bc",
                              lower=empirical_quantile(stats, alpha1),
                              upper=empirical_quantile(stats, alpha2),
                              point=point)


def _posterior_params(counts: PairedCounts, priors: Priors):
    s, r, n = counts.s, counts.r, counts.n
    return (
        (counts.s11 + counts.s10 + priors.se1.alpha, s - counts.s11 - counts.s10 + priors.se1.beta),
        (counts.r01 + counts.r00 + priors.sp1.alpha, r - counts.r01 - counts.r00 + priors.sp1.beta),
        (counts.s11 + counts.s01 + priors.se2.alpha, s - counts.s11 - counts.s01 + priors.se2.beta),
        (counts.r10 + counts.r00 + priors.sp2.alpha, r - counts.r10 - counts.r00 + priors.sp2.beta),
        (s + priors.p.alpha, n - s + priors.p.beta),
    )


def _draw_posterior(counts: PairedCounts, priors: Priors, m: int,
                    stream: RandomStream) -> tuple[tuple[float, ...], ...]:
    params = _posterior_params(counts, priors)
    draws = []
    for _ in range(m):
        draws.append(tuple(sample_beta(a, b, stream) for a, b in params))
    return tuple(draws)


@lru_cache(maxsize=2)
def _cached_posterior_draws(counts: PairedCounts, priors: Priors, m: int,
                            seed: int, stream_tag: int):
    return _draw_posterior(counts, priors, m, RandomStream(seed, stream_tag))


def bayesian_ci(counts: PairedCounts, c: float, target: str,
                config: ConfidenceConfig | None = None,
                stream: RandomStream | None = None) -> ConfidenceInterval:
    """Equal-tail posterior quantile interval from conjugate Beta posteriors.

    M independent tuples (Se1, Sp1, Se2, Sp2, p) are drawn from the five
    Beta posteriors and pushed through the kappa formula; the reported
    point is the posterior mean of the target statistic. Draws with a
    non-positive Youden index are kept (the posterior ranges over all
    parameter values); ratio draws with kappa2 exactly zero are excluded.
    """
    config = config or ConfidenceConfig()
    if target not in ("difference", "ratio"):
        raise DomainError(f"target must be 'difference' or 'ratio', got {target!r}")
    if counts.s <= 0 or counts.r <= 0:
        accuracy_from_counts(counts)  # raises NonEstimableError with details
    if stream is None:
        draws = _cached_posterior_draws(counts, config.priors, config.bayes_m,
                                        config.seed, BAYES_STREAM)
    else:
        draws = _draw_posterior(counts, config.priors, config.bayes_m, stream)
    need_ratio = target == "ratio"
    stats = []
    zero_denominators = 0
    for se1, sp1, se2, sp2, p in draws:
        q = 1.0 - p
        q1 = p * se1 + q * (1.0 - sp1)
        q2 = p * se2 + q * (1.0 - sp2)
        k1 = p * q * (se1 + sp1 - 1.0) / (p * (1.0 - q1) * c + q * q1 * (1.0 - c))
        k2 = p * q * (se2 + sp2 - 1.0) / (p * (1.0 - q2) * c + q * q2 * (1.0 - c))
        if need_ratio:
            if k2 == 0.0:
                zero_denominators += 1  # measure-zero event; excluded but counted
                continue
            stats.append(k1 / k2)
        else:
            stats.append(k1 - k2)
    if zero_denominators:
        warnings.warn(f"{zero_denominators} of {config.bayes_m} posterior draws had "
                      "kappa2 exactly 0 and were excluded from the ratio quantiles",
                      stacklevel=2)
    alpha = config.alpha
    return ConfidenceInterval(target=target, method="bayesian-quantile",
                              lower=empirical_quantile(stats, alpha / 2.0),
                              upper=empirical_quantile(stats, 1.0 - alpha / 2.0),
                              point=math.fsum(stats) / len(stats))


def invert_ratio_ci(ci: ConfidenceInterval, theta_hat: float) -> ConfidenceInterval:
    """Interval for the reciprocal ratio theta' = 1/theta.

    Wald bounds are divided by theta_hat^2; every other method takes the
    reciprocal of each bound (which requires the original interval not to
    straddle zero).
    """
    if ci.target != "ratio":
        raise DomainError(f"can only invert a ratio interval, got target {ci.target!r}")
    if ci.method == "wald":
        if theta_hat == 0.0:
            raise InversionUndefinedError("theta_hat is zero; the Wald inversion is undefined")
        scale = theta_hat * theta_hat
        lower, upper = ci.lower / scale, ci.upper / scale
    else:
        if ci.lower <= 0.0 <= ci.upper:
            raise InversionUndefinedError(
                f"interval ({ci.lower:g}, {ci.upper:g}) straddles zero; reciprocal undefined")
        lower, upper = 1.0 / ci.upper, 1.0 / ci.lower
    return ConfidenceInterval(target="inverse-ratio", method=ci.method,
                              lower=lower, upper=upper,
                              point=1.0 / theta_hat if theta_hat != 0.0 else math.inf,
                              corrected=ci.corrected)


def reciprocal_ratio_ci(ci: ConfidenceInterval, theta_hat: float) -> ConfidenceInterval:
    """Plain reciprocal of both bounds, for any method (labeled alternative)."""
    if ci.target != "ratio":
        raise DomainError(f"can only invert a ratio interval, got target {ci.target!r}")
    if ci.lower <= 0.0 <= ci.upper:
        raise InversionUndefinedError(
            f"interval ({ci.lower:g}, {ci.upper:g}) straddles zero; reciprocal undefined")
    return ConfidenceInterval(target="inverse-ratio", method=ci.method,
                              lower=1.0 / ci.upper, upper=1.0 / ci.lower,
                              point=1.0 / theta_hat if theta_hat != 0.0 else math.inf,
                              corrected=ci.corrected)


def mark_corrected(ci: ConfidenceInterval) -> ConfidenceInterval:
    """Flag an interval as computed from continuity-corrected counts."""
    return replace(ci, corrected=True)
