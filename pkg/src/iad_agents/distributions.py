"""Count generators and reference distributions for the NTD experiments.

Randomness comes from :class:`random.Random`, i.e. MT19937 seeded from an
integer, whose ``random()`` stream is stable across platforms and Python
versions. Every variate is derived from that stream by a fixed transform:

* normal: Box-Muller, both outputs of each uniform pair are used in turn;
* triangular, uniform, exponential: inverse CDF, one uniform per variate.

Variates are rounded to the nearest integer (half to even) and anything
below 1 is redrawn, so counts are always positive.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import InvalidSpec

_EPS = 1e-15
_TINY = 1e-300
_MAX_ITER = 10_000


# -- count generators -----------------------------------------------------

_SOURCE_ARITY = {"normal": 2, "triangular": 3, "uniform": 2, "exponential": 2}


def _parse_params(text: str) -> tuple[str, list[str]]:
    family, sep, rest = text.partition(":")
    if not sep or not rest.strip():
        raise InvalidSpec(f"expected 'family:p1,p2,...', got {text!r}")
    return family.strip().lower(), [p.strip() for p in rest.split(",")]


def _floats(parts: list[str], text: str) -> tuple[float, ...]:
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise InvalidSpec(f"non-numeric parameter in {text!r}") from None


@dataclass(frozen=True)
class DistributionSpec:
    """Source distribution of detection counts.

    Parameter order per family: ``normal(mean, sd)``,
    ``triangular(mode, low, high)``, ``uniform(low, high)``,
    ``exponential(shift, mean)`` where ``mean`` is that of the exponential
    part added on top of ``shift``.
    """

    family: str
    params: tuple[float, ...]

    def __post_init__(self):
        arity = _SOURCE_ARITY.get(self.family)
        if arity is None:
            raise InvalidSpec(f"unknown source family {self.family!r}")
        if len(self.params) != arity:
            raise InvalidSpec(f"{self.family} takes {arity} parameters, got {len(self.params)}")
        if not all(math.isfinite(p) for p in self.params):
            raise InvalidSpec("parameters must be finite")
        p = self.params
        if self.family == "normal" and p[1] <= 0:
            raise InvalidSpec("normal sd must be positive")
        if self.family == "triangular" and not (p[1] < p[2] and p[1] <= p[0] <= p[2]):
            raise InvalidSpec("triangular needs low <= mode <= high and low < high")
        if self.family == "uniform" and not p[0] < p[1]:
            raise InvalidSpec("uniform needs low < high")
        if self.family == "exponential" and p[1] <= 0:
            raise InvalidSpec("exponential mean must be positive")
        if self.family in ("triangular", "uniform") and max(p) < 0.5:
            raise InvalidSpec("support lies entirely below 1; no positive count can be drawn")

    @classmethod
    def parse(cls, text: str) -> "DistributionSpec":
        family, parts = _parse_params(text)
        return cls(family, _floats(parts, text))

    def __str__(self):
        return f"{self.family}:" + ",".join(f"{p:g}" for p in self.params)


class CountSampler:
    """Stream of positive integer counts for one (spec, seed) pair."""

    def __init__(self, spec: DistributionSpec, seed: int):
        self.spec = spec
        self._rng = random.Random(seed)
        self._spare: float | None = None

    def _standard_normal(self) -> float:
        if self._spare is not None:
            z, self._spare = self._spare, None
            return z
        u1 = 1.0 - self._rng.random()  # (0, 1]
        u2 = self._rng.random()
        r = math.sqrt(-2.0 * math.log(u1))
        self._spare = r * math.sin(2.0 * math.pi * u2)
        return r * math.cos(2.0 * math.pi * u2)

    def variate(self) -> float:
        fam, p = self.spec.family, self.spec.params
        if fam == "normal":
            return p[0] + p[1] * self._standard_normal()
        u = self._rng.random()
        if fam == "uniform":
            return p[0] + (p[1] - p[0]) * u
        if fam == "exponential":
            return p[0] - p[1] * math.log(1.0 - u)
        mode, low, high = p
        split = (mode - low) / (high - low)
        if u < split:
            return low + math.sqrt(u * (high - low) * (mode - low))
        return high - math.sqrt((1.0 - u) * (high - low) * (high - mode))

    def draw(self) -> int:
        while True:
            count = round(self.variate())
            if count >= 1:
                return count

    def draws(self, n: int) -> list[int]:
        return [self.draw() for _ in range(n)]


def generate_counts(spec: DistributionSpec, n: int, seed: int) -> list[int]:
    if n < 2:
        raise ValueError("need at least two counts")
    return CountSampler(spec, seed).draws(n)


# -- special functions ----------------------------------------------------

def _gamma_series(a: float, x: float) -> float:
    term = total = 1.0 / a
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_continued_fraction(a: float, x: float) -> float:
    # modified Lentz evaluation of Q(a, x)
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        d = _TINY if abs(d) < _TINY else d
        c = b + an / c
        c = _TINY if abs(c) < _TINY else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def regularized_gamma_p(a: float, x: float) -> float:
    """Regularized lower incomplete gamma ``P(a, x)``."""
    if a <= 0:
        raise ValueError("shape must be positive")
    if x <= 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        return _gamma_series(a, x)
    return 1.0 - _gamma_continued_fraction(a, x)


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    d = _TINY if abs(d) < _TINY else d
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = _TINY if abs(d) < _TINY else d
        c = 1.0 + aa / c
        c = _TINY if abs(c) < _TINY else c
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = _TINY if abs(d) < _TINY else d
        c = 1.0 + aa / c
        c = _TINY if abs(c) < _TINY else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h


def regularized_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta ``I_x(a, b)``."""
    if x <= 0:
        return 0.0
    if x >= 1:
        return 1.0
    front = math.exp(
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


# -- reference distributions ----------------------------------------------

_REF_ARITY = {"studentt": 1, "gamma": 2, "laplace": 2, "normal": 2}


@dataclass(frozen=True)
class ReferenceDist:
    """Reference CDF for KS comparisons.

    ``studentt(nu)``, ``gamma(alpha, beta)``, ``laplace(lam, mu)``,
    ``normal(mu, sigma)``. ``mode`` decides whether gamma's ``beta`` and
    laplace's ``lam`` are scales (default) or rates.
    """

    family: str
    params: tuple[float, ...]
    mode: str = "scale"

    def __post_init__(self):
        arity = _REF_ARITY.get(self.family)
        if arity is None:
            raise InvalidSpec(f"unknown reference family {self.family!r}")
        if len(self.params) != arity:
            raise InvalidSpec(f"{self.family} takes {arity} parameters, got {len(self.params)}")
        if self.mode not in ("scale", "rate"):
            raise InvalidSpec(f"mode must be 'scale' or 'rate', got {self.mode!r}")
        if not all(math.isfinite(p) for p in self.params):
            raise InvalidSpec("parameters must be finite")
        p = self.params
        positive = {"studentt": p[:1], "gamma": p, "laplace": p[:1], "normal": p[1:]}[self.family]
        if any(v <= 0 for v in positive):
            raise InvalidSpec(f"{self.family} parameters {p} out of range")

    @classmethod
    def parse(cls, text: str) -> "ReferenceDist":
        family, parts = _parse_params(text)
        mode = "scale"
        if parts and parts[-1].lower() in ("scale", "rate"):
            mode = parts.pop().lower()
        return cls(family, _floats(parts, text), mode)

    @property
    def label(self) -> str:
        body = ",".join(f"{p:g}" for p in self.params)
        suffix = f",{self.mode}" if self.family in ("gamma", "laplace") else ""
        return f"{self.family}({body}{suffix})"

    def __str__(self):
        return self.label

    def _scale(self, value: float) -> float:
        return value if self.mode == "scale" else 1.0 / value

    def cdf(self, x: float) -> float:
        fam, p = self.family, self.params
        if fam == "studentt":
            nu = p[0]
            if nu == 2:
                return 0.5 + x / (2.0 * math.sqrt(2.0 + x * x))
            if nu == 1:
                return 0.5 + math.atan(x) / math.pi
            tail = 0.5 * regularized_beta(nu / 2.0, 0.5, nu / (nu + x * x))
            return 1.0 - tail if x > 0 else tail
        if fam == "gamma":
            return regularized_gamma_p(p[0], x / self._scale(p[1]))
        if fam == "laplace":
            b, mu = self._scale(p[0]), p[1]
            if x < mu:
                return 0.5 * math.exp((x - mu) / b)
            return 1.0 - 0.5 * math.exp(-(x - mu) / b)
        mu, sigma = p
        return 0.5 * (1.0 + math.erf((x - mu) / (sigma * math.sqrt(2.0))))

    def sample(self, rng: random.Random, n: int) -> list[float]:
        fam, p = self.family, self.params

        def open_uniform() -> float:
            u = rng.random()
            while u == 0.0:
                u = rng.random()
            return u

        if fam == "studentt" and p[0] == 2:
            out = []
            for _ in range(n):
                u = open_uniform()
                out.append((2.0 * u - 1.0) / math.sqrt(2.0 * u * (1.0 - u)))
            return out
        if fam == "studentt":
            nu = p[0]
            return [rng.gauss(0.0, 1.0) / math.sqrt(rng.gammavariate(nu / 2.0, 2.0) / nu)
                    for _ in range(n)]
        if fam == "gamma":
            return [rng.gammavariate(p[0], self._scale(p[1])) for _ in range(n)]
        if fam == "laplace":
            b, mu = self._scale(p[0]), p[1]
            out = []
            for _ in range(n):
                u = open_uniform() - 0.5
                out.append(mu - b * math.copysign(1.0, u) * math.log1p(-2.0 * abs(u)))
            return out
        return [rng.gauss(p[0], p[1]) for _ in range(n)]


def reference_cdf(dist: ReferenceDist, x: float) -> float:
    return dist.cdf(x)
