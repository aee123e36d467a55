"""
growth.py
=========
High-precision evaluation of exponential polynomials, argument-principle
zero counting on circles |z| = r, and a regression estimate of how fast the
zero count grows.

Zero counting
-------------
    n(r) = (1/2πi) ∮ f'/f dz  =  (1/M) Σ_k z_k f'(z_k) / f(z_k),   z_k = r·e^{2πik/M}

The trapezoid rule is spectrally accurate on this periodic integrand, so the
sample count doubles (reusing earlier points) until the value sits within
``WINDING_TOL`` of the same integer on two consecutive levels.

Growth estimate
---------------
λ̂ is the least-squares slope of log n(r) against log r over radii with
n(r) >= 2.  Zeros are counted with multiplicity, so the estimate is labelled
"multiplicity-weighted"; functions with finitely many zeros report λ̂ = 0.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import mpmath
import numpy as np
import pandas as pd
from mpmath import mp
from tabulate import tabulate

from expdiff import config
from expdiff.algebra.exppoly import ExpPoly, ZPoly
from expdiff.algebra.scalars import Scalar, ScalarDomain
from expdiff.errors import (
    ContourTooCloseToZero,
    NonIntegerWinding,
    TooFewZeros,
    UnboundParameter,
    ZeroFunction,
)

__all__ = [
    "NumericContext",
    "Winding",
    "GrowthReport",
    "eval_scalar",
    "eval_numeric",
    "spot_check",
    "winding_number",
    "zero_count",
    "lambda_estimate",
    "parse_radii",
]

logger = logging.getLogger(__name__)

Numeric = Union[int, float, complex, str, "mpmath.mpf", "mpmath.mpc"]


@dataclass
class NumericContext:
    """
    Precision and parameter values for numeric work.

    Attributes:
        precision:       working precision in bits (>= 64).
        bindings:        numeric value of every declared parameter.
        initial_samples: contour samples on the first quadrature level.
        max_samples:     cap on contour samples.
        tolerance:       distance to the nearest integer accepted as converged.
        retries:         contour nudges before giving up near a zero.
    """

    precision: int = config.PRECISION
    bindings: Dict[str, Numeric] = field(default_factory=dict)
    initial_samples: int = config.INITIAL_SAMPLES
    max_samples: int = config.MAX_SAMPLES
    tolerance: float = config.WINDING_TOL
    retries: int = config.CONTOUR_RETRIES

    def __post_init__(self) -> None:
        if self.precision < 64:
            raise ValueError(f"precision must be at least 64 bits, got {self.precision}")
        if self.initial_samples < 4 or self.max_samples < self.initial_samples:
            raise ValueError("sample counts must satisfy 4 <= initial_samples <= max_samples")

    def generator_values(self, domain: ScalarDomain) -> List["mpmath.mpc"]:
        """Numeric values for (pi, *params); call inside the working precision."""
        values = [mpmath.mpc(mp.pi)]
        for name in domain.params:
            if name not in self.bindings:
                raise UnboundParameter(name)
            values.append(mpmath.mpc(mpmath.mpmathify(self.bindings[name])))
        return values


# ── exact -> numeric ──────────────────────────────────────────────────────────

def _gauss_value(c) -> "mpmath.mpc":
    re_part = mpmath.mpf(int(c.x.numerator)) / int(c.x.denominator)
    im_part = mpmath.mpf(int(c.y.numerator)) / int(c.y.denominator)
    return mpmath.mpc(re_part, im_part)


def _poly_value(poly, values: Sequence["mpmath.mpc"]) -> "mpmath.mpc":
    total = mpmath.mpc(0)
    for monom, coeff in poly.terms():
        term = _gauss_value(coeff)
        for v, e in zip(values, monom):
            if e:
                term *= v ** e
        total += term
    return total


def _frac_value(frac, values: Sequence["mpmath.mpc"]) -> "mpmath.mpc":
    return _poly_value(frac.numer, values) / _poly_value(frac.denom, values)


def _scalar_value(s: Scalar, values: Sequence["mpmath.mpc"]) -> "mpmath.mpc":
    total = mpmath.mpc(0)
    for arg, coeff in s:
        total += _frac_value(coeff, values) * mpmath.exp(_frac_value(arg, values))
    return total


def eval_scalar(s: Scalar, ctx: NumericContext) -> "mpmath.mpc":
    with mp.workprec(ctx.precision):
        return _scalar_value(s, ctx.generator_values(s.domain))


class _Compiled:
    """An ExpPoly with every coefficient already evaluated numerically."""

    def __init__(self, f: ExpPoly, values: Sequence["mpmath.mpc"]) -> None:
        self.terms: List[Tuple[List["mpmath.mpc"], List["mpmath.mpc"]]] = [
            (
                [_scalar_value(c, values) for c in coeff.coeffs],
                [_scalar_value(c, values) for c in exponent.coeffs],
            )
            for exponent, coeff in f.items()
        ]

    @staticmethod
    def _horner(coeffs: Sequence["mpmath.mpc"], z) -> "mpmath.mpc":
        acc = mpmath.mpc(0)
        for c in reversed(coeffs):
            acc = acc * z + c
        return acc

    def __call__(self, z) -> "mpmath.mpc":
        total = mpmath.mpc(0)
        for coeffs, exponent in self.terms:
            value = self._horner(coeffs, z)
            if exponent:
                value *= mpmath.exp(self._horner(exponent, z))
            total += value
        return total


def eval_numeric(f: ExpPoly, z: Numeric, ctx: NumericContext) -> "mpmath.mpc":
    """f(z) at the context precision."""
    with mp.workprec(ctx.precision):
        compiled = _Compiled(f, ctx.generator_values(f.domain))
        return compiled(mpmath.mpmathify(z))


def spot_check(
    f: ExpPoly,
    count: int,
    ctx: NumericContext,
    seed: int = 0,
    radius: float = 2.0,
) -> List[Tuple[complex, float]]:
    """|f| at ``count`` pseudo-random points of the square [-radius, radius]²."""
    rng = np.random.default_rng(seed)
    points = rng.uniform(-radius, radius, size=(count, 2))
    with mp.workprec(ctx.precision):
        compiled = _Compiled(f, ctx.generator_values(f.domain))
        out = []
        for x, y in points:
            z = complex(float(x), float(y))
            out.append((z, float(abs(compiled(mpmath.mpc(z.real, z.imag))))))
    return out


# ── winding numbers ───────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Winding:
    """
    Attributes:
        value:   raw quadrature value before rounding.
        count:   rounded zero count.
        samples: contour samples used on the last level.
        radius:  radius actually integrated over (after any nudges).
    """

    value: complex
    count: int
    samples: int
    radius: float


NEWTON_STEPS = 40


class _NearZero(Exception):
    def __init__(self, distance: float) -> None:
        self.distance = distance


def _level_sum(
    f: Callable, df: Callable, radius, indices: range, step: int, total: int, clearance
) -> "mpmath.mpc":
    acc = mpmath.mpc(0)
    for k in indices:
        z = radius * mpmath.expjpi(mpmath.mpf(2 * k * step) / total)
        fz = f(z)
        dfz = df(z)
        if fz == 0:
            raise _NearZero(0.0)
        if dfz != 0:
            distance = abs(fz / dfz)
            if distance < clearance:
                raise _NearZero(float(distance))
        acc += z * dfz / fz
    return acc


def _clearance(r: float, ctx: NumericContext) -> float:
    """Smallest zero-to-contour gap the quadrature resolves within ``ctx.max_samples``."""
    return config.CLEARANCE_SPACINGS * 2 * math.pi * r / ctx.max_samples


def _gap_to_contour(f: Callable, df: Callable, radius, m: int, clearance: float) -> Optional[float]:
    """
    Radial gap of a zero within ``clearance`` of the circle, or None.

    Newton iteration starts from every coarse sample whose step f/f' is
    shorter than the sample spacing.
    """
    spacing = 2 * mpmath.pi * radius / m
    for k in range(m):
        z = radius * mpmath.expjpi(mpmath.mpf(2 * k) / m)
        fz, dfz = f(z), df(z)
        if fz != 0 and (dfz == 0 or abs(fz / dfz) > spacing):
            continue
        for _ in range(NEWTON_STEPS):
            if fz == 0 or dfz == 0:
                break
            step = fz / dfz
            z -= step
            if abs(step) <= mp.eps * abs(z):
                break
            fz, dfz = f(z), df(z)
        gap = float(abs(abs(z) - radius))
        if gap < clearance:
            return gap
    return None


def _wind_once(f: Callable, df: Callable, r: float, clearance: float, ctx: NumericContext) -> Winding:
    radius = mpmath.mpf(r)
    m = ctx.initial_samples
    gap = _gap_to_contour(f, df, radius, m, clearance)
    if gap is not None:
        raise _NearZero(gap)
    total = _level_sum(f, df, radius, range(m), 1, m, clearance)
    previous: Optional[int] = None
    while True:
        value = total / m
        nearest = int(mpmath.nint(value.real))
        deviation = float(abs(value - nearest))
        logger.debug("r=%g samples=%d winding=%s deviation=%.3e", r, m, mpmath.nstr(value, 12), deviation)
        if deviation < ctx.tolerance:
            if previous == nearest:
                return Winding(complex(value), nearest, m, r)
            previous = nearest
        else:
            previous = None
        if 2 * m > ctx.max_samples:
            raise NonIntegerWinding(r, complex(value), m)
        # odd points of the doubled grid
        total += _level_sum(f, df, radius, range(1, 2 * m, 2), 1, 2 * m, clearance)
        m *= 2
        logger.debug("doubling contour samples to %d", m)


def winding_number(f: ExpPoly, r: float, ctx: NumericContext) -> Winding:
    """
    Argument-principle count of zeros in |z| <= r.

    A zero closer to the circle than ``CLEARANCE_SPACINGS`` sample spacings
    of the finest level would keep the quadrature from settling, so the
    radius is nudged outward by twice that clearance, up to ``ctx.retries``
    times.  The returned ``radius`` is the one actually integrated over.
    """
    if f.is_zero():
        raise ZeroFunction("zero counting")
    if r <= 0:
        raise ValueError(f"radius must be positive, got {r}")
    with mp.workprec(ctx.precision):
        values = ctx.generator_values(f.domain)
        compiled = _Compiled(f, values)
        derivative = _Compiled(f.derivative(), values)
        clearance = _clearance(r, ctx)
        radius = float(r)
        distance = 0.0
        for attempt in range(ctx.retries + 1):
            try:
                return _wind_once(compiled, derivative, radius, clearance, ctx)
            except _NearZero as exc:
                distance = exc.distance
                radius += 2 * clearance
                logger.info(
                    "zero within %.3e of |z| = %g; retrying with r = %g (attempt %d)",
                    distance, r, radius, attempt + 1,
                )
    raise ContourTooCloseToZero(radius, distance, ctx.retries)


def zero_count(f: ExpPoly, r: float, ctx: NumericContext) -> int:
    """Number of zeros of f in |z| <= r, counted with multiplicity."""
    return winding_number(f, r, ctx).count


# ── growth ────────────────────────────────────────────────────────────────────

def parse_radii(text: str) -> List[float]:
    """
    ``"geometric:r0,ratio,count"`` or an explicit list ``"10,20,40"``.

    Radii come back sorted and strictly increasing.
    """
    text = text.strip()
    if text.startswith("geometric:"):
        parts = text[len("geometric:"):].split(",")
        if len(parts) != 3:
            raise ValueError(f"expected geometric:r0,ratio,count, got {text!r}")
        r0, ratio, count = float(parts[0]), float(parts[1]), int(parts[2])
        if r0 <= 0 or ratio <= 1 or count < 1:
            raise ValueError(f"invalid geometric schedule {text!r}")
        return [r0 * ratio ** k for k in range(count)]
    radii = sorted(float(x) for x in text.split(",") if x.strip())
    if not radii or radii[0] <= 0:
        raise ValueError(f"radii must be positive numbers, got {text!r}")
    if len(set(radii)) != len(radii):
        raise ValueError(f"radii must be distinct, got {text!r}")
    return radii


@dataclass
class GrowthReport:
    """
    Zero counts over a radius schedule and the fitted growth exponent.

    Attributes:
        radii:       the radius schedule.
        counts:      n(r), zeros with multiplicity in |z| <= r.
        integrated:  N(r) ≈ n(r0)·log r0 + ∫_{r0}^{r} n(t)/t dt (trapezoid in log r).
        slope:       λ̂ (multiplicity-weighted); 0.0 when too few zeros.
        ci:          95% interval for the slope, when at least 3 points were fitted.
        sigma:       symbolic order of f.
        hyper_order: always 0 for exponential polynomials.
        status:      "fitted" or "too_few_zeros".
    """

    radii: List[float]
    counts: List[int]
    integrated: List[float]
    slope: float
    ci: Optional[Tuple[float, float]]
    sigma: int
    hyper_order: int = 0
    status: str = "fitted"
    label: str = "lambda_hat (multiplicity-weighted)"

    def to_frame(self) -> pd.DataFrame:
        df = pd.DataFrame({"r": self.radii, "n(r)": self.counts, "N(r)": self.integrated})
        df["log r"] = np.log(df["r"])
        df["log n(r)"] = np.log(df["n(r)"].where(df["n(r)"] > 0))
        return df

    def to_dict(self) -> dict:
        return {
            "radii": list(self.radii),
            "counts": list(self.counts),
            "integrated": list(self.integrated),
            "slope": self.slope,
            "ci": list(self.ci) if self.ci is not None else None,
            "label": self.label,
            "sigma": self.sigma,
            "hyper_order": self.hyper_order,
            "status": self.status,
        }

    def to_table(self) -> str:
        return tabulate(self.to_frame(), headers="keys", tablefmt="github", showindex=False, floatfmt=".4g")


def _integrated_counts(radii: Sequence[float], counts: Sequence[int]) -> List[float]:
    logs = np.log(np.asarray(radii, dtype=float))
    n = np.asarray(counts, dtype=float)
    steps = np.diff(logs) * (n[1:] + n[:-1]) / 2
    return list(n[0] * logs[0] + np.concatenate([[0.0], np.cumsum(steps)]))


def _fit_slope(radii: Sequence[float], counts: Sequence[int]) -> Tuple[float, Optional[Tuple[float, float]]]:
    x = np.log(np.asarray(radii, dtype=float))
    y = np.log(np.asarray(counts, dtype=float))
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    if len(x) < 3:
        return float(slope), None
    resid = y - (slope * x + intercept)
    s2 = float(resid @ resid) / (len(x) - 2)
    se = math.sqrt(s2 / float(((x - x.mean()) ** 2).sum()))
    return float(slope), (float(slope - 1.96 * se), float(slope + 1.96 * se))


def lambda_estimate(
    f: ExpPoly,
    radii: Sequence[float],
    ctx: NumericContext,
    strict: bool = False,
) -> GrowthReport:
    """
    Fit λ̂ over a radius schedule (at least 5 radii).

    A function whose count stays below 2 or does not grow over the
    schedule is reported with status ``too_few_zeros`` and λ̂ = 0;
    ``strict=True`` raises :class:`TooFewZeros` instead.
    """
    if f.is_zero():
        raise ZeroFunction("lambda_estimate")
    radii = sorted(float(r) for r in radii)
    if len(radii) < 5:
        raise ValueError(f"lambda_estimate needs at least 5 radii, got {len(radii)}")

    sigma = f.order().order
    counts = [zero_count(f, r, ctx) for r in radii]
    logger.info("zero counts %s over radii %s", counts, radii)
    if any(b < a for a, b in zip(counts, counts[1:])):
        logger.warning("zero counts are not monotone in r: %s", counts)

    integrated = _integrated_counts(radii, counts)
    fit = [(r, n) for r, n in zip(radii, counts) if n >= 2]
    if counts[-1] < 2 or len(set(counts)) == 1 or len(fit) < 2:
        if strict:
            raise TooFewZeros(counts[-1], radii[-1])
        logger.info("finitely many zeros detected; reporting lambda_hat = 0")
        return GrowthReport(radii, counts, integrated, 0.0, None, sigma, status="too_few_zeros")

    slope, ci = _fit_slope([r for r, _ in fit], [n for _, n in fit])
    return GrowthReport(radii, counts, integrated, slope, ci, sigma)
