"""Exact multiplicative arithmetic and truncated Euler products.

Integers are carried as `FactoredInt` (value plus prime factorization).
Every function that takes a FactoredInt also accepts a plain positive int.

Truncated products over primes return an `Estimate`: the value over
p <= prime_cutoff together with an error bar for the discarded tail.  The
tail bar bounds sum_{p > X} |local factor - 1| by c * p^(-sigma) summed with
the prime density 1.26 / log t (Rosser-Schoenfeld), i.e.

    tail <= 1.26 * c * X^(1 - sigma) / ((sigma - 1) log X),

and converts it to a bound on the product as |P_X| * (exp(tail) - 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Union

import numpy as np

from .special import DEFAULT_PROFILE, PrecisionProfile, riemann_zeta

__all__ = [
    "FactoredInt",
    "Estimate",
    "EulerProductConfig",
    "DEFAULT_EULER",
    "SIEVE_BOUND",
    "primes_up_to",
    "factorize",
    "as_factored",
    "euler_phi",
    "moebius",
    "phi_star",
    "phi_cap",
    "zeta_q",
    "euler_P",
    "euler_P_line",
    "r_factor",
    "r1_factor",
    "euler_phi_table",
    "phi_star_table",
    "phi_cap_table",
    "coprime_series_direct_sum",
    "coprime_series_closed_form",
    "totient_series_direct_sum",
    "totient_series_closed_form",
]

SIEVE_BOUND = 10**6
_PRIME_DENSITY_CONST = 1.26
_EPS = np.finfo(float).eps


def _sum_rounding(abs_sum: float, n: int) -> float:
    # numpy's pairwise summation: blocks of 128, then a binary tree
    return _EPS * (128 + math.log2(max(n, 2))) * abs_sum


@lru_cache(maxsize=8)
def primes_up_to(n: int) -> np.ndarray:
    """All primes <= n as an int64 array (Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    for i in range(2, math.isqrt(n) + 1):
        if is_p[i]:
            is_p[i * i::i] = False
    return np.flatnonzero(is_p).astype(np.int64)


@dataclass(frozen=True)
class FactoredInt:
    """A positive integer together with its factorization.

    `factors` holds (prime, exponent) pairs with strictly increasing primes.
    """

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.value < 1:
            raise ValueError("FactoredInt needs a positive value")
        prod = 1
        last = 1
        for p, e in self.factors:
            if e < 1 or p <= last:
                raise ValueError(f"bad factor list {self.factors}")
            prod *= p**e
            last = p
        if prod != self.value:
            raise ValueError(f"factors {self.factors} do not multiply to {self.value}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value


IntLike = Union[int, FactoredInt]


@lru_cache(maxsize=65536)
def factorize(n: int) -> FactoredInt:
    """Trial division against the prime sieve.

    Inputs above SIEVE_BOUND**2 are rejected.
    """
    n = int(n)
    if n < 1:
        raise ValueError("factorize: n must be >= 1")
    if n > SIEVE_BOUND**2:
        raise ValueError(f"factorize: {n} exceeds the supported bound {SIEVE_BOUND**2}")
    factors = []
    m = n
    limit = math.isqrt(m)
    for p in primes_up_to(min(SIEVE_BOUND, max(limit, 2))):
        p = int(p)
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
    if m > 1:
        factors.append((m, 1))
    return FactoredInt(n, tuple(factors))


def as_factored(n: IntLike) -> FactoredInt:
    return n if isinstance(n, FactoredInt) else factorize(int(n))


def euler_phi(n: IntLike) -> int:
    n = as_factored(n)
    out = 1
    for p, e in n.factors:
        out *= (p - 1) * p ** (e - 1)
    return out


def moebius(n: IntLike) -> int:
    n = as_factored(n)
    if any(e >= 2 for _, e in n.factors):
        return 0
    return -1 if len(n.factors) % 2 else 1


def phi_star(q: IntLike) -> int:
    """Number of primitive characters mod q, i.e. sum_{cd=q} mu(c) phi(d).

    Multiplicative with phi*(p) = p - 2 and phi*(p^k) = p^(k-2) (p-1)^2.
    """
    q = as_factored(q)
    out = 1
    for p, e in q.factors:
        out *= (p - 2) if e == 1 else p ** (e - 2) * (p - 1) ** 2
    return out


def phi_cap(q: IntLike, s) -> complex:
    """prod_{p | q} (1 - p^(-s)); the empty product is 1."""
    q = as_factored(q)
    out = complex(1.0)
    for p in q.primes:
        out *= 1.0 - p ** (-complex(s))
    return out


def zeta_q(q: IntLike, s, cfg: "EulerProductConfig | None" = None,
           prof: PrecisionProfile = DEFAULT_PROFILE) -> complex:
    """zeta(s) with the Euler factors at p | q removed: zeta(s) * phi_cap(q, s).

    `cfg` is accepted for interface symmetry with the other products; the
    value is exact up to the zeta evaluator, so no truncation is involved.
    """
    if complex(s) == 1.0:
        raise ValueError("zeta_q: pole at s = 1")
    return complex(riemann_zeta(complex(s), prof)) * phi_cap(q, s)


# ---------------------------------------------------------------------------
# truncated Euler products


@dataclass(frozen=True)
class Estimate:
    """A numerical value with an absolute error bar."""

    value: complex
    error: float

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))
        object.__setattr__(self, "error", float(self.error))

    def __complex__(self):
        return complex(self.value)

    def agrees_with(self, other, extra: float = 0.0) -> bool:
        other_err = other.error if isinstance(other, Estimate) else 0.0
        other_val = other.value if isinstance(other, Estimate) else other
        return abs(self.value - other_val) <= self.error + other_err + extra


@dataclass(frozen=True)
class EulerProductConfig:
    """Truncation control for infinite products over primes."""

    prime_cutoff: int = 10**6
    tail_estimate_mode: bool = True

    def __post_init__(self):
        if self.prime_cutoff < 2:
            raise ValueError("prime_cutoff must be >= 2")


DEFAULT_EULER = EulerProductConfig()


def _tail_bound(cutoff: int, coef: float, sigma: float) -> float:
    """Bound for sum_{p > cutoff} coef * p^(-sigma), sigma > 1."""
    if sigma <= 1.0:
        return math.inf
    x = float(cutoff)
    return _PRIME_DENSITY_CONST * coef * x ** (1.0 - sigma) / ((sigma - 1.0) * math.log(x))


def _truncated_product(local: Callable[[np.ndarray], np.ndarray], excluded: tuple[int, ...],
                       cfg: EulerProductConfig, tail_coef: float, tail_sigma: float) -> Estimate:
    primes = primes_up_to(cfg.prime_cutoff)
    if excluded:
        primes = primes[~np.isin(primes, np.array(excluded, dtype=np.int64))]
    if primes.size:
        factors = local(primes.astype(float))
        if np.any(factors == 0):
            raise ValueError("Euler product: a local factor vanishes")
        logs = np.log(factors.astype(complex))
        value = complex(np.exp(np.sum(logs)))
        # each log carries ~1 ulp of its factor, then the sum rounds
        rounding = abs(value) * (_EPS * primes.size + _sum_rounding(float(np.sum(np.abs(logs))), primes.size))
    else:
        value = complex(1.0)
        rounding = 0.0
    err = rounding
    if cfg.tail_estimate_mode:
        tail = _tail_bound(cfg.prime_cutoff, tail_coef, tail_sigma)
        err += abs(value) * math.expm1(tail) if math.isfinite(tail) else math.inf
    return Estimate(value, err)


def _power_sum_tail(cutoff: int, terms: list[tuple[float, complex]]) -> tuple[float, float]:
    # local factor - 1 = sum coef * p^(-exponent); bound it by c * p^(-sigma_min) for p > cutoff
    sigma = min(e.real for _, e in terms)
    x = float(cutoff)
    c = sum(abs(a) * x ** (sigma - e.real) for a, e in terms)
    return c, sigma


def euler_P(q: IntLike, w, s, cfg: EulerProductConfig = DEFAULT_EULER) -> Estimate:
    """P(q; w, s) = prod_{p not dividing q} of

        1 - p^-(s+w) - 2 p^-(1+w) + 2 p^-(1+s+w) + p^-(2+2w) - p^-(2+2w+s).

    Requires Re(w) > 0 and Re(s + w) > 1.
    """
    q = as_factored(q)
    w, s = complex(w), complex(s)
    if not (w.real > 0 and (s + w).real > 1):
        raise ValueError("euler_P: need Re(w) > 0 and Re(s+w) > 1")
    terms = [(-1.0, s + w), (-2.0, 1 + w), (2.0, 1 + s + w), (1.0, 2 + 2 * w), (-1.0, 2 + 2 * w + s)]

    def local(p):
        lp = np.log(p)
        return 1.0 + sum(a * np.exp(-e * lp) for a, e in terms)

    c, sigma = _power_sum_tail(cfg.prime_cutoff, terms)
    return _truncated_product(local, q.primes, cfg, c, sigma)


def euler_P_line(q: IntLike, w, s_values, cfg: EulerProductConfig = DEFAULT_EULER,
                 chunk: int = 64) -> tuple[np.ndarray, float]:
    """euler_P(q; w, s) at many s for one w; returns (values, largest error bar).

    With w fixed the local factor is A_p + B_p p^-s where
    A_p = (1 - p^-(1+w))^2 and B_p = -p^-w + 2 p^-(1+w) - p^-(2+2w),
    so each (s, p) pair costs a single complex power.
    """
    q = as_factored(q)
    w = complex(w)
    s_values = np.asarray(s_values, dtype=complex)
    flat = s_values.ravel()
    if not (w.real > 0 and np.all((flat + w).real > 1)):
        raise ValueError("euler_P: need Re(w) > 0 and Re(s+w) > 1")
    primes = primes_up_to(cfg.prime_cutoff)
    if q.primes:
        primes = primes[~np.isin(primes, np.array(q.primes, dtype=np.int64))]
    lp = np.log(primes.astype(float))
    p1w = np.exp(-(1 + w) * lp)
    coef_a = (1.0 - p1w) ** 2
    coef_b = -np.exp(-w * lp) + 2.0 * p1w - p1w * p1w
    out = np.empty(flat.shape, dtype=complex)
    diffs = np.diff(flat)
    progression = flat.size > 2 and np.all(np.abs(diffs - diffs[0]) <= 1e-12 * abs(diffs[0]))
    if progression:
        # equally spaced points: p^-s advances by the fixed ratio p^-ds, re-anchored every `chunk` steps
        ratio = np.exp(-diffs[0] * lp)
        for j in range(flat.size):
            if j % chunk == 0:
                powers = np.exp(-flat[j] * lp)
            else:
                powers = powers * ratio
            f = coef_a + coef_b * powers
            if np.any(f == 0):
                raise ValueError("Euler product: a local factor vanishes")
            out[j] = np.prod(f)
    else:
        for i in range(0, flat.size, chunk):
            f = coef_a + coef_b * np.exp(-np.multiply.outer(flat[i:i + chunk], lp))
            if np.any(f == 0):
                raise ValueError("Euler product: a local factor vanishes")
            # factors are within O(1/p) of 1, so the running product stays O(1)
            out[i:i + chunk] = np.prod(f, axis=1)
    err = float(np.max(np.abs(out))) * _EPS * (primes.size + 128 + math.log2(max(primes.size, 2))) * 4.0
    if cfg.tail_estimate_mode:
        s_worst = flat[np.argmin(flat.real)]
        terms = [(-1.0, s_worst + w), (-2.0, 1 + w), (2.0, 1 + s_worst + w), (1.0, 2 + 2 * w),
                 (-1.0, 2 + 2 * w + s_worst)]
        c, sigma = _power_sum_tail(cfg.prime_cutoff, terms)
        err += float(np.max(np.abs(out))) * math.expm1(_tail_bound(cfg.prime_cutoff, c, sigma))
    return out.reshape(s_values.shape), err


def _check_coprime(u: FactoredInt, v: FactoredInt):
    if math.gcd(u.value, v.value) != 1:
        raise ValueError(f"u={u.value} and v={v.value} must be coprime")


def r_factor(s, u: IntLike, v: IntLike, cfg: EulerProductConfig = DEFAULT_EULER) -> Estimate:
    """R(s; u, v) = prod_{p|v} (1 - p^(-s-1)) * prod_{p not dividing uv} (1 + 1/(p^(s+1)(p-1)))."""
    u, v = as_factored(u), as_factored(v)
    _check_coprime(u, v)
    s = complex(s)
    if s.real <= -1:
        raise ValueError("r_factor: need Re(s) > -1")
    finite = complex(1.0)
    for p in v.primes:
        finite *= 1.0 - p ** (-s - 1)

    def local(p):
        return 1.0 + np.exp(-(s + 1) * np.log(p)) / (p - 1.0)

    x = float(cfg.prime_cutoff)
    est = _truncated_product(local, tuple(sorted(set(u.primes) | set(v.primes))), cfg,
                             x / (x - 1.0), s.real + 2.0)
    return Estimate(finite * est.value, abs(finite) * est.error)


def r1_factor(w, u: IntLike, v: IntLike, cfg: EulerProductConfig = DEFAULT_EULER) -> Estimate:
    """R_1(w; u, v): the three-part product

        prod_{p|v} (1 - p^-(1+w))
        * prod_{p|u, p not dividing v} (1 + 1/(p^(1+w)(p-1)) - 1/(p-1))
        * prod_{p not dividing uv} (1 + (p^-w - 1)/(p(p-1))).
    """
    u, v = as_factored(u), as_factored(v)
    _check_coprime(u, v)
    w = complex(w)
    if w.real <= -1:
        raise ValueError("r1_factor: need Re(w) > -1")
    finite = complex(1.0)
    for p in v.primes:
        finite *= 1.0 - p ** (-1 - w)
    for p in u.primes:
        if v.value % p:
            finite *= 1.0 + 1.0 / (p ** (1 + w) * (p - 1)) - 1.0 / (p - 1)

    def local(p):
        return 1.0 + (np.exp(-w * np.log(p)) - 1.0) / (p * (p - 1.0))

    x = float(cfg.prime_cutoff)
    # |p^-w - 1| / (p(p-1)) <= 2 X/(X-1) p^-(2 + min(Re w, 0)) for p > X
    sigma = 2.0 + min(w.real, 0.0)
    coef = 2.0 * x / (x - 1.0)
    est = _truncated_product(local, tuple(sorted(set(u.primes) | set(v.primes))), cfg, coef, sigma)
    return Estimate(finite * est.value, abs(finite) * est.error)


# ---------------------------------------------------------------------------
# sieved tables used by the direct-summation oracles


def euler_phi_table(n: int) -> np.ndarray:
    """phi(k) for k = 0..n (entry 0 is 0)."""
    phi = np.arange(n + 1, dtype=np.int64)
    for p in primes_up_to(n):
        p = int(p)
        phi[p::p] -= phi[p::p] // p
    return phi


def phi_star_table(n: int) -> np.ndarray:
    """phi*(k) for k = 0..n (entry 0 is 0)."""
    out = np.arange(n + 1, dtype=np.int64)
    for p in primes_up_to(n):
        p = int(p)
        view = out[p::p]
        squares = view[p - 1::p] // (p * p) * (p - 1) ** 2
        view[:] = view // p * (p - 2)
        view[p - 1::p] = squares
    return out


def phi_cap_table(n: int, s) -> np.ndarray:
    """prod_{p|k} (1 - p^-s) for k = 0..n."""
    out = np.ones(n + 1, dtype=complex)
    s = complex(s)
    for p in primes_up_to(n):
        p = int(p)
        out[p::p] *= 1.0 - p ** (-s)
    return out


def _coprime_mask(n: int, m: int) -> np.ndarray:
    mask = np.ones(n + 1, dtype=bool)
    mask[0] = False
    for p in as_factored(m).primes:
        mask[p::p] = False
    return mask


def coprime_series_direct_sum(hk: IntLike, w, s, n_max: int = 10**6,
                       prof: PrecisionProfile = DEFAULT_PROFILE) -> Estimate:
    """sum_{q <= n_max, (q, hk) = 1} phi*(q) q^-(1+w) zeta_q(s), with a rigorous tail bar.

    The tail uses phi*(q) <= q and |zeta_q(s)| <= zeta(Re s).
    """
    w, s = complex(w), complex(s)
    if not (w.real > 1 and s.real > 1):
        raise ValueError("coprime_series_direct_sum: need Re(w), Re(s) > 1")
    hk = as_factored(hk)
    q = np.arange(n_max + 1, dtype=float)
    mask = _coprime_mask(n_max, hk.value)
    terms = np.zeros(n_max + 1, dtype=complex)
    qm = q[mask]
    terms[mask] = phi_star_table(n_max)[mask] * np.exp(-(1 + w) * np.log(qm)) * phi_cap_table(n_max, s)[mask]
    zs = complex(riemann_zeta(s, prof))
    value = zs * complex(np.sum(terms))
    tail = float(riemann_zeta(s.real, prof).real) * n_max ** (1 - w.real) / (w.real - 1)
    rounding = abs(zs) * _sum_rounding(float(np.sum(np.abs(terms))), n_max)
    return Estimate(value, tail + rounding)


def coprime_series_closed_form(hk: IntLike, w, s, cfg: EulerProductConfig = DEFAULT_EULER,
                        prof: PrecisionProfile = DEFAULT_PROFILE) -> Estimate:
    """zeta(w) zeta(s) Phi(hk, w) P(hk; w, s)."""
    p = euler_P(hk, w, s, cfg)
    pref = complex(riemann_zeta(complex(w), prof)) * complex(riemann_zeta(complex(s), prof)) * phi_cap(hk, w)
    return Estimate(pref * p.value, abs(pref) * p.error)


def totient_series_direct_sum(u: IntLike, v: IntLike, s, l_max: int = 10**6,
                       prof: PrecisionProfile = DEFAULT_PROFILE) -> Estimate:
    """sum_{l <= l_max, (l, v) = 1} 1/(phi(u l) l^s), tail-corrected.

    The summand has mean density kappa / l with kappa = R(0; u, v)/phi(u), so
    the tail beyond L is kappa L^-s / s.  That estimate is added to the value;
    its relative uncertainty is O(log L / L), and the bar charged is
    |tail| * (1 + log L) / sqrt(L), far above that.
    """
    u, v = as_factored(u), as_factored(v)
    _check_coprime(u, v)
    s = complex(s)
    if s.real <= 0:
        raise ValueError("totient_series_direct_sum: need Re(s) > 0 for convergence")
    phi = euler_phi_table(u.value * l_max)
    ell = np.arange(1, l_max + 1)
    mask = _coprime_mask(l_max, v.value)[1:]
    vals = 1.0 / phi[u.value * ell[mask]].astype(float) * np.exp(-s * np.log(ell[mask].astype(float)))
    direct = complex(np.sum(vals))
    kappa = r_factor(0.0, u, v).value / euler_phi(u)
    tail = kappa * l_max ** (-s) / s
    bar = abs(tail) * (1.0 + math.log(l_max)) / math.sqrt(l_max)
    bar += _sum_rounding(float(np.sum(np.abs(vals))), vals.size)
    return Estimate(direct + tail, bar)


def totient_series_closed_form(u: IntLike, v: IntLike, s, cfg: EulerProductConfig = DEFAULT_EULER,
                        prof: PrecisionProfile = DEFAULT_PROFILE) -> Estimate:
    """zeta(1+s) R(s; u, v) / phi(u)."""
    r = r_factor(s, u, v, cfg)
    pref = complex(riemann_zeta(1.0 + complex(s), prof)) / euler_phi(u)
    return Estimate(pref * r.value, abs(pref) * r.error)
