"""Self-contained special functions and seeded samplers.

Everything here is pure stdlib so that seeded results are reproducible
across environments; nothing in the runtime path depends on an external
numerical library.
"""

from __future__ import annotations

import math

from .errors import DomainError

__all__ = [
    "RandomStream",
    "normal_cdf",
    "normal_quantile",
    "sample_beta",
    "sample_multinomial",
    "empirical_quantile",
]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_INV_2_53 = 2.0 ** -53


def _mix64(z: int) -> int:
    # SplitMix64 finalizer (Steele, Lea & Flood 2014); bijective on 64-bit words.
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class RandomStream:
    """Counter-based uniform generator identified by a (seed, stream) pair.

    Distinct (seed, stream) pairs give statistically independent sequences,
    so concurrent replicates can each own the stream derived from their
    replicate index and produce results that do not depend on scheduling.
    """

    __slots__ = ("seed", "stream", "_state", "_spare_gauss")

    def __init__(self, seed: int, stream: int = 0):
        self.seed = seed & _MASK64
        self.stream = stream & _MASK64
        self._state = _mix64(self.seed ^ _mix64((self.stream + 1) * _GOLDEN))
        self._spare_gauss: float | None = None

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return _mix64(self._state)

    def uniform(self) -> float:
        """Uniform draw in [0, 1)."""
        return (self.next_u64() >> 11) * _INV_2_53

    def uniform_open(self) -> float:
        """Uniform draw in (0, 1)."""
        while True:
            u = self.uniform()
            if u > 0.0:
                return u

    def gauss(self) -> float:
        """Standard normal draw (Marsaglia polar method)."""
        if self._spare_gauss is not None:
            g = self._spare_gauss
            self._spare_gauss = None
            return g
        while True:
            u = 2.0 * self.uniform() - 1.0
            v = 2.0 * self.uniform() - 1.0
            s = u * u + v * v
            if 0.0 < s < 1.0:
                f = math.sqrt(-2.0 * math.log(s) / s)
                self._spare_gauss = v * f
                return u * f

    def gamma(self, shape: float) -> float:
        """Gamma(shape, 1) draw via Marsaglia-Tsang squeeze rejection."""
        if shape <= 0.0:
            raise DomainError(f"gamma shape must be positive, got {shape}")
        if shape < 1.0:
            # boost: G(a) = G(a+1) * U^(1/a)
            return self.gamma(shape + 1.0) * self.uniform_open() ** (1.0 / shape)
        d = shape - 1.0 / 3.0
        c = 1.0 / math.sqrt(9.0 * d)
        while True:
            x = self.gauss()
            t = 1.0 + c * x
            if t <= 0.0:
                continue
            v = t * t * t
            u = self.uniform_open()
            xx = x * x
            if u < 1.0 - 0.0331 * xx * xx:
                return d * v
            if math.log(u) < 0.5 * xx + d * (1.0 - v + math.log(v)):
                return d * v


def normal_cdf(x: float) -> float:
    """Standard normal CDF, accurate to well below 1e-12 in absolute error."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


# Wichura's AS 241 rational approximations (PPND16), double precision.
_A = (
    3.3871328727963666080e0, 1.3314166789178437745e2, 1.9715909503065514427e3,
    1.3731693765509461125e4, 4.5921953931549871457e4, 6.7265770927008700853e4,
    3.3430575583588128105e4, 2.5090809287301226727e3,
)
_B = (
    1.0, 4.2313330701600911252e1, 6.8718700749205790830e2, 5.3941960214247511077e3,
    2.1213794301586595867e4, 3.9307895800092710610e4, 2.8729085735721942674e4,
    5.2264952788528545610e3,
)
_C = (
    1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
    3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
    2.27238449892691845833e-2, 7.74545014278341407640e-4,
)
_D = (
    1.0, 2.05319162663775882187e0, 1.67638483018380384940e0, 6.89767334985100004550e-1,
    1.48103976427480074590e-1, 1.51986665636164571966e-2, 5.47593808499534494600e-4,
    1.05075007164441684324e-9,
)
_E = (
    6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
    2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
    2.71155556874348757815e-5, 2.01033439929228813265e-7,
)
_F = (
    1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1, 1.48753612908506148525e-2,
    7.86869131145613259100e-4, 1.84631831751005468180e-6, 1.42151175831644588870e-15,
)


def _ratpoly(num: tuple, den: tuple, r: float) -> float:
    pn = 0.0
    for coef in reversed(num):
        pn = pn * r + coef
    pd = 0.0
    for coef in reversed(den):
        pd = pd * r + coef
    return pn / pd


def normal_quantile(q: float) -> float:
    """Inverse of the standard normal CDF (AS 241, PPND16)."""
    if not 0.0 < q < 1.0:
        raise DomainError(f"normal_quantile needs q in (0, 1), got {q}")
    d = q - 0.5
    if abs(d) <= 0.425:
        r = 0.180625 - d * d
        return d * _ratpoly(_A, _B, r)
    r = q if d < 0.0 else 1.0 - q
    r = math.sqrt(-math.log(r))
    if r <= 5.0:
        x = _ratpoly(_C, _D, r - 1.6)
    else:
        x = _ratpoly(_E, _F, r - 5.0)
    return -x if d < 0.0 else x


def sample_beta(alpha: float, beta: float, stream: RandomStream) -> float:
    """Beta(alpha, beta) draw in the open interval (0, 1)."""
    if alpha <= 0.0 or beta <= 0.0:
        raise DomainError(f"beta parameters must be positive, got ({alpha}, {beta})")
    while True:
        ga = stream.gamma(alpha)
        gb = stream.gamma(beta)
        total = ga + gb
        if total > 0.0:
            x = ga / total
            if 0.0 < x < 1.0:
                return x


_BINOM_CHUNK = 1000


def _binomial_chunk(n: int, p: float, stream: RandomStream) -> int:
    # CDF inversion; requires p <= 0.5 and n <= _BINOM_CHUNK so that the
    # starting mass (1-p)^n stays a normal double.
    u = stream.uniform()
    ratio = p / (1.0 - p)
    pmf = (1.0 - p) ** n
    cdf = pmf
    k = 0
    while u >= cdf and k < n:
        pmf *= ratio * (n - k) / (k + 1)
        k += 1
        cdf += pmf
    return k


def _binomial(n: int, p: float, stream: RandomStream) -> int:
    if n <= 0:
        return 0
    if p <= 0.0:
        return 0
    if p >= 1.0:
        return n
    if p > 0.5:
        return n - _binomial(n, 1.0 - p, stream)
    total = 0
    while n > _BINOM_CHUNK:
        total += _binomial_chunk(_BINOM_CHUNK, p, stream)
        n -= _BINOM_CHUNK
    return total + _binomial_chunk(n, p, stream)


def sample_multinomial(pi, n: int, stream: RandomStream) -> list[int]:
    """One multinomial draw of size ``n`` via sequential conditional binomials."""
    probs = [float(x) for x in pi]
    if not probs:
        raise DomainError("multinomial needs at least one category")
    if any(x < 0.0 for x in probs):
        raise DomainError("multinomial probabilities must be non-negative")
    if abs(sum(probs) - 1.0) > 1e-9:
        raise DomainError(f"multinomial probabilities must sum to 1, got {sum(probs)!r}")
    if n < 0 or n != int(n):
        raise DomainError(f"multinomial size must be a non-negative integer, got {n!r}")
    counts: list[int] = []
    remaining = int(n)
    mass = 1.0
    for pj in probs[:-1]:
        if remaining == 0 or mass <= 0.0:
            counts.append(0)
        else:
            cond = min(max(pj / mass, 0.0), 1.0)
            k = _binomial(remaining, cond, stream)
            counts.append(k)
            remaining -= k
        mass -= pj
    counts.append(remaining)
    return counts


def empirical_quantile(values, q: float) -> float:
    """Interpolating empirical quantile at one-based index q*(m-1)+1."""
    vals = sorted(values)
    if not vals:
        raise DomainError("empirical_quantile needs a non-empty sequence")
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"quantile level must be in [0, 1], got {q}")
    pos = q * (len(vals) - 1)
    lo = math.floor(pos)
    hi = math.ceil(pos)
    if lo == hi:
        return float(vals[lo])
    w = pos - lo
    return float(vals[lo]) * (1.0 - w) + float(vals[hi]) * w
