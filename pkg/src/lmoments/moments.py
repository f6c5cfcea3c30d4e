"""The twisted second moment over even primitive characters, and its predictions.

Brute force: for every modulus q with W(q/Q) > 0, enumerate the even
primitive characters, evaluate both completed L-values through Hurwitz zeta
and sum W(q/Q) Lambda(1/2+alpha, chi) Lambda(1/2+beta, conj chi) chi(h) conj chi(k).
Nothing here goes through the approximate functional equation; `s_sum` and
`afe_residual` exist to test that representation against the Hurwitz route.

Parallelism is over q.  Each modulus is an independent task and the per-q
partial sums are added in ascending q, so the result does not depend on the
worker count or completion order.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .arith import (
    DEFAULT_EULER,
    Estimate,
    EulerProductConfig,
    FactoredInt,
    IntLike,
    as_factored,
    euler_P,
    euler_P_line,
    phi_cap,
    phi_star,
)
from .characters import DirichletCharacter, even_primitive_count, even_primitive_table
from .lfunction import ShiftPair, completed_lambda, completed_lambdas, gamma_factor
from .special import DEFAULT_PROFILE, PrecisionProfile, log_gamma, riemann_zeta
from .transforms import (
    DEFAULT_WEIGHT,
    V_CONTOUR,
    ContourSpec,
    WeightSpec,
    mellin_w,
    v_ab,
    v_tilde,
    vertical_line_integral,
    weight_w,
)

__all__ = [
    "FamilySpec",
    "CoefficientVector",
    "MomentReport",
    "SweepReport",
    "BudgetExceeded",
    "DEFAULT_BUDGET",
    "THREADS_ENV",
    "default_threads",
    "family_moduli",
    "family_size",
    "s_sum",
    "afe_residual",
    "principal_polar_terms",
    "afe_residuals",
    "delta_bruteforce",
    "delta_bruteforce_cells",
    "main_term_theorem1",
    "main_term_executed",
    "diagonal_term",
    "diagonal_line_integral",
    "diagonal_residue",
    "moment_report",
    "weighted_sweep",
]

DEFAULT_BUDGET = 5 * 10**7
THREADS_ENV = "LMOMENTS_THREADS"
DIAGONAL_CONTOUR = ContourSpec(0.1, 80.0, 0.1)


class BudgetExceeded(RuntimeError):
    """The family is larger than the configured character budget."""


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class FamilySpec:
    """One cell of the moment: scale Q, shifts, weight and twist (h, k)."""

    scale_Q: float
    shifts: ShiftPair
    weight: WeightSpec = DEFAULT_WEIGHT
    twist_h: FactoredInt = field(default_factory=lambda: as_factored(1))
    twist_k: FactoredInt = field(default_factory=lambda: as_factored(1))

    def __post_init__(self):
        if self.scale_Q < 2:
            raise ValueError("scale_Q must be >= 2")
        object.__setattr__(self, "twist_h", as_factored(self.twist_h))
        object.__setattr__(self, "twist_k", as_factored(self.twist_k))

    @property
    def h(self) -> int:
        return self.twist_h.value

    @property
    def k(self) -> int:
        return self.twist_k.value

    def with_twist(self, h: IntLike, k: IntLike) -> "FamilySpec":
        return FamilySpec(self.scale_Q, self.shifts, self.weight, as_factored(h), as_factored(k))

    def with_shifts(self, shifts: ShiftPair) -> "FamilySpec":
        return FamilySpec(self.scale_Q, shifts, self.weight, self.twist_h, self.twist_k)

    def to_dict(self) -> dict:
        return {"Q": self.scale_Q, "h": self.h, "k": self.k, "shifts": self.shifts.to_dict(),
                "weight": self.weight.to_dict()}


@dataclass(frozen=True)
class CoefficientVector:
    """Coefficients lambda_h for a mollifier-style sweep, indexed by h >= 1."""

    entries: dict
    length_bound: int

    def __post_init__(self):
        clean = {}
        for h, v in self.entries.items():
            h = int(h)
            if h < 1 or h > self.length_bound:
                raise ValueError(f"coefficient index {h} outside [1, {self.length_bound}]")
            clean[h] = complex(v)
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    @classmethod
    def from_csv(cls, path, length_bound: int | None = None) -> "CoefficientVector":
        """Read a CSV file with header h,re,im; indices must be unique."""
        import csv

        entries = {}
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["h", "re", "im"]:
                raise ValueError("coefficient file needs the header h,re,im")
            for row in reader:
                h = int(row["h"])
                if h in entries:
                    raise ValueError(f"duplicate coefficient index {h}")
                entries[h] = complex(float(row["re"]), float(row["im"]))
        if not entries:
            raise ValueError("coefficient file has no rows")
        bound = length_bound if length_bound is not None else max(entries)
        return cls(entries, bound)

    def to_dict(self) -> dict:
        return {"length_bound": self.length_bound,
                "entries": [{"h": h, "re": v.real, "im": v.imag} for h, v in self.entries.items()]}


# ---------------------------------------------------------------------------
# the family


def family_moduli(Q: float, weight: WeightSpec = DEFAULT_WEIGHT) -> list[int]:
    """Integers q with W(q/Q) > 0, i.e. Q < q < 2Q."""
    lo = math.floor(Q) + 1
    hi = math.ceil(2 * Q) - 1
    return [q for q in range(lo, hi + 1) if weight_w(q / Q, weight) > 0]


def family_size(Q: float, weight: WeightSpec = DEFAULT_WEIGHT) -> int:
    """sum of phi*(q) over the family: the number of primitive characters touched."""
    return sum(phi_star(q) for q in family_moduli(Q, weight))


def _check_budget(Q: float, weight: WeightSpec, budget: int | None):
    if budget is None:
        return
    size = family_size(Q, weight)
    if size > budget:
        raise BudgetExceeded(f"family at Q={Q} has {size} primitive characters, budget {budget}")


@dataclass(frozen=True)
class _ModulusResult:
    q: int
    n_chars: int
    cells: np.ndarray
    sweep: complex
    error: float


def _modulus_task(args) -> _ModulusResult:
    q, Q, alpha, beta, weight, cells, coeffs, prof = args
    tab = even_primitive_table(q)
    n = tab.shape[0]
    if n == 0:
        return _ModulusResult(q, 0, np.zeros(len(cells), dtype=complex), 0j, 0.0)
    wq = weight_w(q / Q, weight)
    la = completed_lambdas(alpha, q, tab, prof)
    lb = completed_lambdas(beta, q, np.conj(tab), prof)
    prod = wq * la * lb
    cell_vals = np.array([np.sum(prod * tab[:, h % q] * np.conj(tab[:, k % q])) for h, k in cells],
                         dtype=complex)
    sweep = 0j
    if coeffs:
        amp = np.zeros(n, dtype=complex)
        for h, lam in coeffs:
            amp += lam / math.sqrt(h) * tab[:, h % q]
        sweep = complex(np.sum(prod * amp * np.conj(amp)))
    # per-L contract: |error| <= q * target_abs_error before the Gamma factor
    err_l = q * prof.target_abs_error
    ga, gb = abs(gamma_factor(q, alpha)), abs(gamma_factor(q, beta))
    err = float(wq * np.sum(np.abs(la) * gb + np.abs(lb) * ga) * err_l)
    return _ModulusResult(q, n, cell_vals, sweep, err)


def _run_family(Q: float, shifts: ShiftPair, weight: WeightSpec, cells, coeffs, prof: PrecisionProfile,
                threads: int | None, budget: int | None) -> list[_ModulusResult]:
    _check_budget(Q, weight, budget)
    threads = default_threads() if threads is None else max(1, int(threads))
    moduli = family_moduli(Q, weight)
    tasks = [(q, Q, shifts.alpha, shifts.beta, weight, tuple(cells), tuple(coeffs), prof) for q in moduli]
    if threads == 1 or len(tasks) <= 1:
        results = [_modulus_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_modulus_task, tasks, chunksize=max(1, len(tasks) // (4 * threads))))
    return sorted(results, key=lambda r: r.q)


def _reduce(results, pick, keep=lambda q: True) -> complex:
    total = 0j
    for r in results:
        if keep(r.q):
            total += pick(r)
    return total


def delta_bruteforce_cells(Q: float, shifts: ShiftPair, cells, weight: WeightSpec = DEFAULT_WEIGHT,
                           prof: PrecisionProfile = DEFAULT_PROFILE, threads: int | None = None,
                           budget: int | None = DEFAULT_BUDGET, coprime_filter: bool = False) -> list[Estimate]:
    """Brute-force moment for several (h, k) cells sharing one family pass."""
    cells = [(int(h), int(k)) for h, k in cells]
    results = _run_family(Q, shifts, weight, cells, (), prof, threads, budget)
    out = []
    for i, (h, k) in enumerate(cells):
        keep = (lambda q, hk=h * k: math.gcd(q, hk) == 1) if coprime_filter else (lambda q: True)
        value = _reduce(results, lambda r: r.cells[i], keep)
        err = sum(r.error for r in results if keep(r.q))
        out.append(Estimate(value, err))
    return out


def delta_bruteforce(spec: FamilySpec, prof: PrecisionProfile = DEFAULT_PROFILE, threads: int | None = None,
                     budget: int | None = DEFAULT_BUDGET, coprime_filter: bool = False) -> Estimate:
    """sum_q W(q/Q) sum_{chi even primitive} Lambda(1/2+a, chi) Lambda(1/2+b, conj chi) chi(h) conj chi(k).

    All q with W(q/Q) > 0 are included; `coprime_filter` restricts to (q, hk) = 1.
    """
    return delta_bruteforce_cells(spec.scale_Q, spec.shifts, [(spec.h, spec.k)], spec.weight, prof, threads,
                                  budget, coprime_filter)[0]


# ---------------------------------------------------------------------------
# main terms


def _check_total(shifts: ShiftPair):
    if shifts.total == 0:
        raise ValueError("alpha + beta = 0 is not supported; the main term is a limit there")


def _twist_parts(h: int, k: int):
    g = math.gcd(h, k)
    return g, h // g, k // g


def main_term_theorem1(spec: FamilySpec, prof: PrecisionProfile = DEFAULT_PROFILE) -> complex:
    """The q-by-q main term: a finite sum over the family with (q, hk) = 1.

    Each q contributes W(q/Q) times the even primitive count times

        (q/pi)^((a+b)/2) G(1/4+a/2) G(1/4+b/2) g^(1+a+b) / (h^(1/2+b) k^(1/2+a)) zeta_q(1+a+b)
      + (q/pi)^(-(a+b)/2) G(1/4-a/2) G(1/4-b/2) g^(1-a-b) / (h^(1/2-a) k^(1/2-b)) zeta_q(1-a-b)

    with g = (h, k).
    """
    sh = spec.shifts
    _check_total(sh)
    a, b = sh.alpha, sh.beta
    t = a + b
    h, k = spec.h, spec.k
    g = math.gcd(h, k)
    lh, lk, lg = math.log(h), math.log(k), math.log(g)
    gam_plus = np.exp(log_gamma(0.25 + a / 2) + log_gamma(0.25 + b / 2))
    gam_minus = np.exp(log_gamma(0.25 - a / 2) + log_gamma(0.25 - b / 2))
    twist_plus = np.exp((1 + t) * lg - (0.5 + b) * lh - (0.5 + a) * lk)
    twist_minus = np.exp((1 - t) * lg - (0.5 - a) * lh - (0.5 - b) * lk)
    z_plus = complex(riemann_zeta(1 + t, prof))
    z_minus = complex(riemann_zeta(1 - t, prof))
    total = 0j
    for q in family_moduli(spec.scale_Q, spec.weight):
        if math.gcd(q, h * k) != 1:
            continue
        count = even_primitive_count(q)
        if count == 0:
            continue
        lq = math.log(q / math.pi)
        plus = np.exp(0.5 * t * lq) * gam_plus * twist_plus * z_plus * phi_cap(q, 1 + t)
        minus = np.exp(-0.5 * t * lq) * gam_minus * twist_minus * z_minus * phi_cap(q, 1 - t)
        total += weight_w(q / spec.scale_Q, spec.weight) * float(count) * (plus + minus)
    return complex(total)


def _executed_piece(Q, sh: ShiftPair, h, k, weight, cfg, prof, sign: int):
    # sign = +1: the (alpha, beta) piece; sign = -1: the mirrored piece
    a, b = sh.alpha, sh.beta
    t = a + b
    g = math.gcd(h, k)
    lh, lk, lg = math.log(h), math.log(k), math.log(g)
    if sign > 0:
        wt = mellin_w(1.0, sh, weight)
        gam = np.exp(log_gamma(0.25 + a / 2) + log_gamma(0.25 + b / 2))
        twist = np.exp((1 + t) * lg - (0.5 + b) * lh - (0.5 + a) * lk)
    else:
        wt = mellin_w(1.0, sh.mirror(), weight)
        gam = np.exp(log_gamma(0.25 - a / 2) + log_gamma(0.25 - b / 2))
        twist = np.exp((1 - t) * lg - (0.5 - a) * lh - (0.5 - b) * lk)
    s = 1 + sign * t
    p = euler_P(h * k, 1.0, s, cfg)
    front = wt * np.exp(sign * 0.5 * t * math.log(Q / math.pi)) * gam * twist * complex(riemann_zeta(s, prof))
    return Estimate(front * p.value, abs(front) * p.error)


def main_term_executed(spec: FamilySpec, cfg: EulerProductConfig = DEFAULT_EULER,
                       prof: PrecisionProfile = DEFAULT_PROFILE, with_error: bool = False):
    """The closed form with the q-sum carried out:

        Q^2/2 Phi(hk, 1) ( W~_{a,b}(1) (Q/pi)^((a+b)/2) G(1/4+a/2) G(1/4+b/2)
                             g^(1+a+b) / (h^(1/2+b) k^(1/2+a)) zeta(1+a+b) P(hk; 1, 1+a+b)
                           + W~_{-b,-a}(1) (Q/pi)^(-(a+b)/2) G(1/4-a/2) G(1/4-b/2)
                             g^(1-a-b) / (h^(1/2-a) k^(1/2-b)) zeta(1-a-b) P(hk; 1, 1-a-b) ).

    Returns a complex number, or an Estimate carrying the Euler-product bar
    when `with_error` is set.
    """
    sh = spec.shifts
    _check_total(sh)
    Q, h, k = spec.scale_Q, spec.h, spec.k
    plus = _executed_piece(Q, sh, h, k, spec.weight, cfg, prof, +1)
    minus = _executed_piece(Q, sh, h, k, spec.weight, cfg, prof, -1)
    front = 0.5 * Q * Q * phi_cap(h * k, 1.0)
    value = front * (plus.value + minus.value)
    if with_error:
        return Estimate(value, abs(front) * (plus.error + minus.error))
    return complex(value)


def _diagonal_front(spec: FamilySpec) -> complex:
    a, b = spec.shifts.alpha, spec.shifts.beta
    Q, h, k = spec.scale_Q, spec.h, spec.k
    _, H, K = _twist_parts(h, k)
    return complex(np.exp(0.5 * (a + b) * math.log(Q / math.pi)) * Q * Q * phi_cap(h * k, 1.0)
                   / (2.0 * np.exp((0.5 + b) * math.log(H) + (0.5 + a) * math.log(K))))


def _diagonal_residue_core(spec: FamilySpec, cfg: EulerProductConfig, prof: PrecisionProfile) -> complex:
    # V~(0) W~(1) zeta(1+a+b) P(hk; 1, 1+a+b): the integrand times s, at s = 0
    sh = spec.shifts
    t = sh.total
    p_val, _ = euler_P_line(spec.h * spec.k, 1.0, np.array([1.0 + t]), cfg)
    return complex(v_tilde(0.0, sh) * mellin_w(1.0, sh, spec.weight) * complex(riemann_zeta(1.0 + t, prof))
                   * p_val[0])


def diagonal_line_integral(spec: FamilySpec, contour: ContourSpec = DIAGONAL_CONTOUR,
                           cfg: EulerProductConfig = DEFAULT_EULER, prof: PrecisionProfile = DEFAULT_PROFILE,
                           ) -> complex:
    """The diagonal contribution with its contour integral on Re(s) = contour.real_part.

        (Q/pi)^((a+b)/2) Q^2 Phi(hk, 1) / (2 H^(1/2+b) K^(1/2+a))
          * (1/2 pi i) int V~(s) W~_{a,b}(1+s) (Q/(pi H K))^s zeta(1+2s+a+b) P(hk; 1, 1+2s+a+b) ds/s

    with H = h/(h,k), K = k/(h,k).  Any line inside the region where the
    Euler product converges absolutely is accepted; `diagonal_term` adds the
    stricter requirement used for the reported value.
    """
    sh = spec.shifts
    _check_total(sh)
    t = sh.total
    Q, h, k = spec.scale_Q, spec.h, spec.k
    _, H, K = _twist_parts(h, k)
    if not (2.0 * contour.real_part + t.real > -1.0):
        raise ValueError("diagonal: contour leaves the region where the Euler product converges")
    if contour.real_part == 0.0:
        raise ValueError("diagonal: contour passes through the pole at s = 0")
    log_x = math.log(Q / (math.pi * H * K))

    def integrand(s):
        s = np.asarray(s, dtype=complex)
        zeta_arg = 1.0 + 2.0 * s + t
        p_vals, _ = euler_P_line(h * k, 1.0, zeta_arg, cfg)
        return (v_tilde(s, sh) * mellin_w(1.0 + s, sh, spec.weight) * np.exp(s * log_x)
                * riemann_zeta(zeta_arg, prof) * p_vals / s)

    integral = vertical_line_integral(integrand, contour,
                                      origin_residue=_diagonal_residue_core(spec, cfg, prof))
    return _diagonal_front(spec) * integral


def diagonal_term(spec: FamilySpec, contour: ContourSpec = DIAGONAL_CONTOUR,
                  cfg: EulerProductConfig = DEFAULT_EULER, prof: PrecisionProfile = DEFAULT_PROFILE) -> complex:
    """Diagonal contribution on a line Re(s) = eps > 0 with Re(1+2s+a+b) > 1."""
    eps = contour.real_part
    if not (eps > 0 and 2.0 * eps + spec.shifts.total.real > 0):
        raise ValueError("diagonal_term: need eps > 0 and Re(1 + 2 eps + alpha + beta) > 1")
    return diagonal_line_integral(spec, contour, cfg, prof)


def diagonal_residue(spec: FamilySpec, cfg: EulerProductConfig = DEFAULT_EULER,
                     prof: PrecisionProfile = DEFAULT_PROFILE) -> complex:
    """Residue of the diagonal integrand at s = 0, with the same prefactor.

    This is the (alpha, beta) piece of the executed main term with the
    Gamma factors V~(0) = G(1/4+a/2) G(1/4+b/2) and H, K in place of h, k.
    """
    _check_total(spec.shifts)
    return _diagonal_front(spec) * _diagonal_residue_core(spec, cfg, prof)


# ---------------------------------------------------------------------------
# approximate functional equation


@lru_cache(maxsize=64)
def _v_cutoff(shifts: ShiftPair, tol: float) -> float:
    # smallest x on a 0.5 grid beyond which |V| stays below tol
    xs = np.arange(0.5, 200.0, 0.5)
    vals = np.abs(v_ab(xs, shifts))
    above = np.flatnonzero(vals >= tol)
    return float(xs[above[-1] + 1]) if above.size else 0.5


def _one_sided_sum(shifts: ShiftPair, q: int, chi_tab: np.ndarray, tol: float) -> np.ndarray:
    """S(alpha, beta; chi) for each row of chi_tab, truncated at pi m n / q < X_cut."""
    a, b = shifts.alpha, shifts.beta
    # slack for the number of terms near the cutoff and their divisor multiplicity
    x_cut = _v_cutoff(shifts, tol / (q * (1.0 + math.log(q))))
    n_max = max(1, int(math.floor(x_cut * q / math.pi)))
    idx = np.arange(1, n_max + 1)
    cols = idx % q
    am = chi_tab[:, cols] * np.exp(-(0.5 + a) * np.log(idx))          # chi(m) m^-(1/2+a)
    bn = np.conj(chi_tab[:, cols]) * np.exp(-(0.5 + b) * np.log(idx))  # conj chi(n) n^-(1/2+b)
    conv = np.zeros((chi_tab.shape[0], n_max), dtype=complex)
    for m in range(1, n_max + 1):
        top = n_max // m
        conv[:, m - 1:m * top:m] += am[:, m - 1:m] * bn[:, :top]
    v = v_ab(math.pi * idx / q, shifts)
    front = np.exp(0.5 * (a + b) * math.log(q / math.pi))
    return front * (conv @ v)


def s_sum(shifts: ShiftPair, chi: DirichletCharacter, tol: float = 1e-10) -> complex:
    """(q/pi)^((a+b)/2) sum_{m,n} chi(m) conj chi(n) m^-(1/2+a) n^-(1/2+b) V_{a,b}(pi m n / q)."""
    if not (chi.is_even and chi.is_primitive):
        raise ValueError("s_sum: character must be even and primitive")
    return complex(_one_sided_sum(shifts, chi.modulus, chi.table[None, :], tol)[0])


def principal_polar_terms(shifts: ShiftPair, prof: PrecisionProfile = DEFAULT_PROFILE) -> complex:
    """Residues picked up between Re s = 1 and Re s = -1 when chi is the modulus-1 character.

    Lambda(w) = pi^(1/4 - w/2) Gamma(w/2) zeta(w) has residue pi^(1/4) at w = 1 and -pi^(1/4)
    at w = 0, so the two-sum identity gains four terms at s = +-1/2 - alpha, +-1/2 - beta.
    Nonprincipal characters have entire Lambda and no such terms.
    """
    _check_total(shifts)
    a, b = shifts.alpha, shifts.beta
    t = a + b
    lam = lambda w: complex(completed_lambdas(w - 0.5, 1, _PRINCIPAL_TAB, prof)[0])
    poly = lambda s: 1 - (2 * s / t) ** 2
    c = math.pi ** 0.25
    total = 0j
    for x, y in ((a, b), (b, a)):
        total += poly(0.5 - x) * lam(1 + y - x) / (0.5 - x)
        total += poly(-0.5 - x) * lam(y - x) / (0.5 + x)
    return c * total


_PRINCIPAL_TAB = np.ones((1, 1), dtype=complex)


def afe_residuals(shifts: ShiftPair, q: int, tol: float = 1e-10,
                  prof: PrecisionProfile = DEFAULT_PROFILE) -> np.ndarray:
    """afe_residual for every even primitive character mod q."""
    tab = even_primitive_table(q)
    if tab.shape[0] == 0:
        return np.zeros(0)
    s1 = _one_sided_sum(shifts, q, tab, tol)
    s2 = _one_sided_sum(shifts.mirror(), q, tab, tol)
    la = completed_lambdas(shifts.alpha, q, tab, prof)
    lb = completed_lambdas(shifts.beta, q, np.conj(tab), prof)
    polar = principal_polar_terms(shifts, prof) if q == 1 else 0.0
    return np.abs(s1 + s2 - la * lb - polar)


def afe_residual(shifts: ShiftPair, chi: DirichletCharacter, tol: float = 1e-10,
                 prof: PrecisionProfile = DEFAULT_PROFILE) -> float:
    """|S(a, b; chi) + S(-b, -a; chi) - Lambda(1/2+a, chi) Lambda(1/2+b, conj chi) - polar terms|.

    The polar terms vanish unless chi is the modulus-1 character.
    """
    lhs = completed_lambda(shifts.alpha, chi, prof) * completed_lambda(shifts.beta, chi.conj(), prof)
    polar = principal_polar_terms(shifts, prof) if chi.modulus == 1 else 0.0
    return abs(s_sum(shifts, chi, tol) + s_sum(shifts.mirror(), chi, tol) - lhs - polar)


# ---------------------------------------------------------------------------
# reports


@dataclass
class MomentReport:
    spec: FamilySpec
    brute_force: Estimate
    brute_force_coprime: Estimate
    theorem1_main: complex
    executed_main: complex
    executed_error: float
    diagonal_main: complex | None
    metadata: dict

    @property
    def relative_gap(self) -> float:
        return abs(self.brute_force.value / self.executed_main - 1.0)

    def to_dict(self) -> dict:
        cx = lambda v: None if v is None else {"re": v.real, "im": v.imag}
        return {
            "spec": self.spec.to_dict(),
            "brute_force": cx(self.brute_force.value),
            "brute_force_error": self.brute_force.error,
            "brute_force_coprime": cx(self.brute_force_coprime.value),
            "brute_force_coprime_error": self.brute_force_coprime.error,
            "theorem1_main": cx(self.theorem1_main),
            "executed_main": cx(self.executed_main),
            "executed_error": self.executed_error,
            "diagonal_main": cx(self.diagonal_main),
            "relative_gap": self.relative_gap,
            "metadata": self.metadata,
        }


def moment_report(spec: FamilySpec, cfg: EulerProductConfig = DEFAULT_EULER,
                  prof: PrecisionProfile = DEFAULT_PROFILE, contour: ContourSpec = DIAGONAL_CONTOUR,
                  threads: int | None = None, budget: int | None = DEFAULT_BUDGET,
                  with_diagonal: bool = True) -> MomentReport:
    """Brute force, both main-term forms and the diagonal term for one cell."""
    t0 = time.perf_counter()
    results = _run_family(spec.scale_Q, spec.shifts, spec.weight, [(spec.h, spec.k)], (), prof, threads, budget)
    t_brute = time.perf_counter() - t0
    hk = spec.h * spec.k
    brute = Estimate(_reduce(results, lambda r: r.cells[0]), sum(r.error for r in results))
    coprime = Estimate(_reduce(results, lambda r: r.cells[0], lambda q: math.gcd(q, hk) == 1),
                       sum(r.error for r in results if math.gcd(r.q, hk) == 1))
    thm1 = main_term_theorem1(spec, prof)
    executed = main_term_executed(spec, cfg, prof, with_error=True)
    diag = diagonal_term(spec, contour, cfg, prof) if with_diagonal else None
    meta = {
        "n_moduli": len(results),
        "n_characters": sum(r.n_chars for r in results),
        "runtime_brute_s": t_brute,
        "runtime_total_s": time.perf_counter() - t0,
        "threads": default_threads() if threads is None else int(threads),
    }
    return MomentReport(spec, brute, coprime, thm1, executed.value, executed.error, diag, meta)


@dataclass
class SweepReport:
    spec: FamilySpec
    coefficients: CoefficientVector
    brute: Estimate
    main: complex
    main_theorem1: complex
    metadata: dict

    @property
    def residual(self) -> complex:
        return self.brute.value - self.main

    def to_dict(self) -> dict:
        cx = lambda v: {"re": v.real, "im": v.imag}
        return {"spec": self.spec.to_dict(), "coefficients": self.coefficients.to_dict(),
                "brute": cx(self.brute.value), "brute_error": self.brute.error, "main": cx(self.main),
                "main_theorem1": cx(self.main_theorem1), "residual": cx(self.residual),
                "metadata": self.metadata}


def weighted_sweep(spec: FamilySpec, coeffs: CoefficientVector, cfg: EulerProductConfig = DEFAULT_EULER,
                   prof: PrecisionProfile = DEFAULT_PROFILE, threads: int | None = None,
                   budget: int | None = DEFAULT_BUDGET) -> SweepReport:
    """sum_{h,k} lambda_h conj(lambda_k) / sqrt(hk) times brute force and main term.

    The brute side reuses each Lambda product across all cells: per character
    it multiplies by |sum_h lambda_h chi(h) / sqrt(h)|^2.  The twist of `spec`
    is ignored.
    """
    t0 = time.perf_counter()
    items = tuple(coeffs.entries.items())
    results = _run_family(spec.scale_Q, spec.shifts, spec.weight, [], items, prof, threads, budget)
    brute = Estimate(_reduce(results, lambda r: r.sweep),
                     sum(r.error for r in results) * sum(abs(v) / math.sqrt(h) for h, v in items) ** 2)
    main = 0j
    main1 = 0j
    for h, lh in items:
        for k, lk in items:
            cell = spec.with_twist(h, k)
            c = lh * np.conj(lk) / math.sqrt(h * k)
            main += c * main_term_executed(cell, cfg, prof)
            main1 += c * main_term_theorem1(cell, prof)
    meta = {"n_moduli": len(results), "n_characters": sum(r.n_chars for r in results),
            "runtime_total_s": time.perf_counter() - t0,
            "threads": default_threads() if threads is None else int(threads)}
    return SweepReport(spec, coeffs, brute, complex(main), complex(main1), meta)
