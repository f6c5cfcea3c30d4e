"""Smooth weights, Mellin transforms and contour integrals.

The weight is the bump W(x) = exp(-sigma / ((x-1)(2-x))) on (1, 2).  Its
Mellin transform is an integral of a smooth, compactly supported function,
so the trapezoid rule in u = log x converges faster than any power of the
node count; 256 nodes already sit at machine precision.

Vertical-line integrals with Gamma-decaying integrands use the trapezoid rule
as well.  For an integrand analytic in a strip of half-width d around the
line, the error is O(exp(-2 pi d / step)), so step 0.05 is far past double
precision whenever the nearest singularity is 0.5 or more away.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .lfunction import ShiftPair
from .special import log_gamma

__all__ = [
    "WeightSpec",
    "ContourSpec",
    "KernelCheck",
    "DEFAULT_WEIGHT",
    "V_CONTOUR",
    "V_CONTOUR_SMALL_X",
    "MELLIN_CONTOUR",
    "weight_w",
    "weight_w_ab",
    "mellin_w",
    "mellin_inverse",
    "vertical_line_integral",
    "v_tilde",
    "v_ab",
    "h_kernel",
    "h_kernel_forms",
    "smoothed_abs_power",
    "kernel_identity_check",
]

_ENVELOPE_FLOOR = 1e-16


@dataclass(frozen=True)
class WeightSpec:
    """The bump weight and the quadrature used for its Mellin transform."""

    bump_sharpness: float = 1.0
    quadrature_nodes: int = 256

    def __post_init__(self):
        if self.bump_sharpness <= 0:
            raise ValueError("bump_sharpness must be positive")
        if self.quadrature_nodes < 16:
            raise ValueError("quadrature_nodes must be >= 16")

    def to_dict(self) -> dict:
        return {"bump_sharpness": self.bump_sharpness, "quadrature_nodes": self.quadrature_nodes}


@dataclass(frozen=True)
class ContourSpec:
    """A truncated vertical line Re(s) = real_part, |Im s| <= im_cutoff, sampled every `step`.

    `im_cutoff` is a ceiling; integrators stop earlier once the integrand
    envelope drops below 1e-16.
    """

    real_part: float = 1.0
    im_cutoff: float = 80.0
    step: float = 0.05

    def __post_init__(self):
        if self.step <= 0 or self.im_cutoff <= 0:
            raise ValueError("step and im_cutoff must be positive")
        ratio = self.im_cutoff / self.step
        if abs(ratio - round(ratio)) > 1e-9:
            raise ValueError("im_cutoff must be an integer multiple of step")

    def with_real_part(self, c: float) -> "ContourSpec":
        return ContourSpec(c, self.im_cutoff, self.step)

    def to_dict(self) -> dict:
        return {"real_part": self.real_part, "im_cutoff": self.im_cutoff, "step": self.step}


DEFAULT_WEIGHT = WeightSpec()
V_CONTOUR = ContourSpec(1.0, 80.0, 0.05)
# for x < 1 the factor x^-s on Re s = 1 inflates the integrand by 1/x before it
# cancels down to O(1); a line nearer the pole at 0 keeps that cancellation small
V_CONTOUR_SMALL_X = ContourSpec(0.25, 80.0, 0.05)
MELLIN_CONTOUR = ContourSpec(2.0, 1600.0, 0.5)


# ---------------------------------------------------------------------------
# weights


def weight_w(x, spec: WeightSpec = DEFAULT_WEIGHT):
    """The bump on (1, 2); zero elsewhere."""
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = (x > 1.0) & (x < 2.0)
    xi = x[inside]
    out[inside] = np.exp(-spec.bump_sharpness / ((xi - 1.0) * (2.0 - xi)))
    return float(out) if scalar else out


def weight_w_ab(x, shifts: ShiftPair, spec: WeightSpec = DEFAULT_WEIGHT):
    """x^(1 + (alpha+beta)/2) W(x)."""
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    w = np.asarray(weight_w(x, spec))
    out = np.zeros(x.shape, dtype=complex)
    pos = w > 0
    out[pos] = np.exp((1.0 + 0.5 * shifts.total) * np.log(x[pos])) * w[pos]
    return complex(out) if scalar else out


def _log_nodes(spec: WeightSpec) -> tuple[np.ndarray, float]:
    # interior trapezoid nodes in u = log x on [0, log 2]; the endpoints carry zero weight
    n = spec.quadrature_nodes
    h = math.log(2.0) / n
    return h * np.arange(1, n), h


def mellin_w(s, shifts: ShiftPair, spec: WeightSpec = DEFAULT_WEIGHT):
    """Mellin transform int_1^2 W_{alpha,beta}(x) x^s dx/x, vectorised over s."""
    scalar = np.ndim(s) == 0
    s = np.asarray(s, dtype=complex)
    u, h = _log_nodes(spec)
    f = weight_w_ab(np.exp(u), shifts, spec)
    kernel = np.exp(np.multiply.outer(s, u))
    out = h * (kernel @ f)
    return complex(out) if scalar else out


def _grid(contour: ContourSpec, height: float) -> np.ndarray:
    n = int(round(height / contour.step))
    return contour.step * np.arange(-n, n + 1)


def vertical_line_integral(func, contour: ContourSpec, adaptive: bool = True,
                           origin_residue: complex | None = None) -> complex:
    """(1/2 pi i) int_{(c)} func(s) ds by the trapezoid rule in Im s.

    `func` maps an array of points to integrand values.  With `adaptive`,
    the height grows in blocks of 5 until the integrand is below 1e-16 at
    both ends (capped at contour.im_cutoff).

    A simple pole at s = 0 close to the line limits the trapezoid rule to
    O(exp(-2 pi |c| / step)).  Passing its residue removes that error
    exactly: the rule sums 1/s to coth(pi c / step)/2 instead of sign(c)/2.
    """
    c = contour.real_part
    height = contour.im_cutoff
    if adaptive:
        probe = 10.0
        while probe < contour.im_cutoff:
            ends = func(np.array([c + 1j * probe, c - 1j * probe]))
            if np.max(np.abs(ends)) < _ENVELOPE_FLOOR:
                break
            probe += 5.0
        height = min(probe, contour.im_cutoff)
    t = _grid(contour, height)
    vals = func(c + 1j * t)
    # ds = i dt cancels the i in 1/(2 pi i)
    total = complex(contour.step * np.sum(vals) / (2.0 * math.pi))
    if origin_residue is not None:
        if c == 0:
            raise ValueError("vertical_line_integral: the line passes through the pole")
        alias = 0.5 * (1.0 / math.tanh(math.pi * c / contour.step) - math.copysign(1.0, c))
        total -= complex(origin_residue) * alias
    return total


def mellin_inverse(x, shifts: ShiftPair, spec: WeightSpec = DEFAULT_WEIGHT,
                   contour: ContourSpec = MELLIN_CONTOUR) -> complex:
    """(1/2 pi i) int_{(c)} W~_{alpha,beta}(w) x^-w dw; recovers W_{alpha,beta}(x).

    The transform decays faster than any power but not exponentially, so the
    default line runs to |Im w| = 1600.  Sampling at step 0.5 is exact up to
    aliasing at distance 4 pi in log x, far outside the support.
    """
    lx = math.log(x)
    return vertical_line_integral(lambda w: mellin_w(w, shifts, spec) * np.exp(-w * lx), contour,
                                  adaptive=False)


# ---------------------------------------------------------------------------
# the cutoff function of the approximate functional equation


def v_tilde(s, shifts: ShiftPair):
    """Gamma((s+1/2+alpha)/2) Gamma((s+1/2+beta)/2) (1 - (2s/(alpha+beta))^2).

    The polynomial factor is written as (t - 2s)(t + 2s)/t^2 with t = alpha+beta
    so that it vanishes exactly at s = +-t/2.
    """
    scalar = np.ndim(s) == 0
    s = np.asarray(s, dtype=complex)
    t = shifts.total
    if t == 0:
        raise ValueError("v_tilde: alpha + beta must be nonzero")
    g = np.exp(log_gamma((s + 0.5 + shifts.alpha) / 2.0) + log_gamma((s + 0.5 + shifts.beta) / 2.0))
    out = g * ((t - 2.0 * s) * (t + 2.0 * s) / (t * t))
    return complex(out) if scalar else out


def v_ab(x, shifts: ShiftPair, contour: ContourSpec | None = None):
    """(1/2 pi i) int_{(c)} V~(s) x^-s ds/s on the line Re(s) = contour.real_part.

    Vectorised over x; the integration height is chosen from the smallest x,
    where x^-s decays slowest.  Without an explicit contour the line is
    Re(s) = 1, moved to Re(s) = 1/4 when some x < 1 (any c > 0 gives the
    same integral).
    """
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x <= 0):
        raise ValueError("v_ab: x must be positive")
    lx = np.log(x)
    lx_min = float(lx.min())
    if contour is None:
        contour = V_CONTOUR if lx_min >= 0 else V_CONTOUR_SMALL_X
    c = contour.real_part

    def envelope(s):
        return v_tilde(s, shifts) * np.exp(-s * lx_min) / s

    height = contour.im_cutoff
    probe = 10.0
    while probe < contour.im_cutoff:
        if np.max(np.abs(envelope(np.array([c + 1j * probe, c - 1j * probe])))) < _ENVELOPE_FLOOR:
            break
        probe += 5.0
    height = min(probe, height)
    s = c + 1j * _grid(contour, height)
    base = v_tilde(s, shifts) / s
    vals = np.exp(-np.multiply.outer(lx, s)) @ base
    out = contour.step * vals / (2.0 * math.pi)
    if c > 0:
        # trapezoid alias of the pole at s = 0 (residue V~(0)); see vertical_line_integral
        out -= v_tilde(0.0, shifts) * 0.5 * (1.0 / math.tanh(math.pi * c / contour.step) - 1.0)
    return complex(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# the kernel H(w, z)


_POLE_DISTANCE = 1e-6


def _near_nonpositive_integer(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    k = np.round(z.real)
    return (k <= 0) & (np.abs(z - k) < _POLE_DISTANCE)


def _log_rgamma(z):
    """log(1/Gamma(z)) with -inf at the poles (where 1/Gamma vanishes)."""
    z = np.asarray(z, dtype=complex)
    out = np.full(z.shape, -np.inf + 0j)
    ok = ~_near_nonpositive_integer(z)
    if np.any(ok):
        out[ok] = -log_gamma(z[ok])
    return out


def _check_h_poles(w, z):
    if np.any(_near_nonpositive_integer(np.asarray(w) / 2.0)):
        raise ValueError("h_kernel: w is within 1e-6 of a pole of Gamma(w/2)")
    if np.any(_near_nonpositive_integer((z - np.asarray(w)) / 2.0)):
        raise ValueError("h_kernel: w is within 1e-6 of a pole of Gamma((z-w)/2)")
    if np.any(_near_nonpositive_integer(1.0 - np.asarray(z))):
        raise ValueError("h_kernel: z is within 1e-6 of a pole of Gamma(1-z)")


def h_kernel_forms(w, z):
    """Both closed forms of H(w, z): the sine form and the duplication form.

    sine form:        2^z sin(pi z/2) Gamma(1-z) Gamma(w/2) Gamma((z-w)/2)
                      / (Gamma((1-w)/2) Gamma((1-z+w)/2))
    duplication form: sqrt(pi) Gamma((1-z)/2) Gamma(w/2) Gamma((z-w)/2)
                      / (Gamma(z/2) Gamma((1-w)/2) Gamma((1-z+w)/2))
    """
    w = np.asarray(w, dtype=complex)
    z = complex(z)
    _check_h_poles(w, z)
    common = (log_gamma(w / 2.0) + log_gamma((z - w) / 2.0)
              + _log_rgamma((1.0 - w) / 2.0) + _log_rgamma((1.0 - z + w) / 2.0))
    first = cmath.exp(z * math.log(2.0) + log_gamma(1.0 - z)) * cmath.sin(math.pi * z / 2.0) * np.exp(common)
    log_front = 0.5 * math.log(math.pi) + log_gamma((1.0 - z) / 2.0) + _log_rgamma(z / 2.0)
    second = np.exp(log_front + common)
    return first, second


def h_kernel(w, z, cross_check: bool = False):
    """H(w, z), vectorised over w.

    With `cross_check`, both closed forms are evaluated and a relative
    disagreement above 1e-9 raises ArithmeticError.
    """
    scalar = np.ndim(w) == 0
    first, second = h_kernel_forms(w, z)
    if cross_check:
        scale = np.maximum(np.abs(first), 1e-300)
        if np.any(np.abs(first - second) > 1e-9 * scale):
            raise ArithmeticError("h_kernel: closed forms disagree")
    return complex(first) if scalar else first


# ---------------------------------------------------------------------------
# smoothed kernel identity


def smoothed_abs_power(r: float, z: complex, delta: float, nodes: int = 40) -> complex:
    """(1/2 delta) int_{-delta}^{delta} (|1 + e^xi r|^-z + |1 - e^xi r|^-z) d xi (Gauss-Legendre)."""
    x, wts = np.polynomial.legendre.leggauss(nodes)
    rr = r * np.exp(delta * x)
    vals = np.exp(-z * np.log(np.abs(1.0 + rr))) + np.exp(-z * np.log(np.abs(1.0 - rr)))
    return complex(0.5 * np.sum(wts * vals))


@dataclass(frozen=True)
class KernelCheck:
    r: float
    z: complex
    c: float
    delta: float
    lhs: complex
    lhs_smoothed: complex
    rhs: complex
    residual: float
    smoothing_bias: float
    ray_angle: float
    quad_error: float = field(default=0.0)

    def to_dict(self) -> dict:
        cx = lambda v: {"re": v.real, "im": v.imag}
        return {"r": self.r, "z": cx(self.z), "c": self.c, "delta": self.delta, "lhs": cx(self.lhs),
                "lhs_smoothed": cx(self.lhs_smoothed), "rhs": cx(self.rhs), "residual": self.residual,
                "smoothing_bias": self.smoothing_bias, "ray_angle": self.ray_angle,
                "quad_error": self.quad_error}


def _sinhc(x):
    x = np.asarray(x, dtype=complex)
    small = np.abs(x) < 1e-4
    out = np.empty_like(x)
    out[small] = 1.0 + x[small] ** 2 / 6.0
    out[~small] = np.sinh(x[~small]) / x[~small]
    return out


def _ray_angle(r: float, z: complex, c: float) -> float:
    if r < 1.0:
        # poles of Gamma(w/2) sit on the negative real axis
        return 0.75 * math.pi
    # poles of Gamma((z-w)/2) at w = z + 2k; the rays must pass below/above all of them
    worst = 0.0
    for k in range(0, 200):
        worst = max(worst, abs(math.atan2(abs(z.imag), z.real + 2 * k - c)))
    return max(math.pi / 4.0, 0.5 * (worst + math.pi / 2.0))


def kernel_identity_check(r: float, z: complex, c: float | None = None, delta: float = 1e-4,
                          epsabs: float = 1e-12, limit: int = 400) -> KernelCheck:
    """Compare |1+r|^-z + |1-r|^-z with the Mellin-Barnes integral of H(w, z) r^-w.

    The right side is the smoothed integral with the factor
    sinh(delta w)/(delta w), which converges absolutely.  Its vertical line
    Re w = c is rotated into two rays c + t e^(+-i theta) that lean toward the
    side where r^-w decays (right for r > 1, left for r < 1), without crossing
    any pole of H, so the integrand decays exponentially and the quadrature is
    accurate to near machine precision.  The residual compares against the
    equally smoothed left side; the smoothing bias is reported separately.
    """
    r = float(r)
    z = complex(z)
    if r <= 0 or r == 1.0:
        raise ValueError("kernel_identity_check: need r > 0, r != 1")
    if not 0.0 < z.real < 1.0:
        raise ValueError("kernel_identity_check: need 0 < Re z < 1")
    if c is None:
        c = 0.5 * z.real
    if not 0.0 < c < z.real:
        raise ValueError("kernel_identity_check: need 0 < c < Re z")
    lr = math.log(r)
    theta = _ray_angle(r, z, c)

    def f(w):
        return h_kernel(w, z) * cmath.exp(-w * lr) * complex(_sinhc(delta * w))

    total = 0j
    qerr = 0.0
    for sign in (1, -1):
        direction = cmath.exp(1j * sign * theta)
        val, err = integrate.quad(lambda t: f(c + t * direction), 0.0, np.inf, complex_func=True,
                                  epsabs=epsabs, epsrel=1e-11, limit=limit)
        total += sign * direction * val
        qerr += abs(err)
    rhs = total / (2j * math.pi)
    lhs = abs(1.0 + r) ** (-z) + abs(1.0 - r) ** (-z)
    lhs_s = smoothed_abs_power(r, z, delta)
    return KernelCheck(r=r, z=z, c=c, delta=delta, lhs=complex(lhs), lhs_smoothed=lhs_s, rhs=complex(rhs),
                       residual=abs(rhs - lhs_s), smoothing_bias=abs(lhs_s - lhs), ray_angle=theta,
                       quad_error=qerr / (2 * math.pi))
