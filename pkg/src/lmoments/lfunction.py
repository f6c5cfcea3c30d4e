"""Dirichlet L-values through the Hurwitz decomposition.

L(s, chi) = q^-s sum_{a=1}^{q} chi(a) zeta(s, a/q).  For a fixed modulus and
argument the q Hurwitz values are shared by every character, so a whole
family of L-values is one matrix-vector product against the character table.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .characters import DirichletCharacter, root_number
from .special import DEFAULT_PROFILE, PrecisionProfile, digamma, hurwitz_zeta, log_gamma

__all__ = [
    "ShiftPair",
    "hurwitz_table",
    "l_value",
    "l_values",
    "completed_lambda",
    "completed_lambdas",
    "gamma_factor",
    "functional_equation_residual",
]


@dataclass(frozen=True)
class ShiftPair:
    """The shifts (alpha, beta) of the second moment.

    Both must be nonzero with alpha != +-beta, and bounded by `shift_bound`
    in absolute value.
    """

    alpha: complex
    beta: complex
    shift_bound: float = 0.5

    def __post_init__(self):
        a, b = complex(self.alpha), complex(self.beta)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        if a == 0 or b == 0:
            raise ValueError("shifts must be nonzero")
        if a == b or a == -b:
            raise ValueError("shifts must satisfy alpha != +-beta")
        if abs(a) > self.shift_bound or abs(b) > self.shift_bound:
            raise ValueError(f"shifts exceed shift_bound={self.shift_bound}")

    @property
    def total(self) -> complex:
        return self.alpha + self.beta

    def mirror(self) -> "ShiftPair":
        """(alpha, beta) -> (-beta, -alpha), the second half of the approximate functional equation."""
        return ShiftPair(-self.beta, -self.alpha, self.shift_bound)

    def swap(self) -> "ShiftPair":
        return ShiftPair(self.beta, self.alpha, self.shift_bound)

    @classmethod
    def auto(cls, Q: float, shift_bound: float = 0.5) -> "ShiftPair":
        """Default shifts of size 1/log Q: (0.9/log Q, 0.4/log Q)."""
        if Q <= math.e:
            raise ValueError("auto shifts need Q > e")
        lq = math.log(Q)
        return cls(0.9 / lq, 0.4 / lq, shift_bound)

    def to_dict(self) -> dict:
        return {"alpha": {"re": self.alpha.real, "im": self.alpha.imag},
                "beta": {"re": self.beta.real, "im": self.beta.imag},
                "shift_bound": self.shift_bound}


@lru_cache(maxsize=1024)
def _hurwitz_table_cached(q: int, s: complex, prof: PrecisionProfile) -> np.ndarray:
    a = np.arange(1, q + 1) / q
    if s == 1:
        # regular part at the pole; the 1/(s-1) term cancels against sum chi(a) = 0
        tab = -digamma(a, prof)
    else:
        tab = hurwitz_zeta(s, a, prof)
    tab = np.asarray(tab, dtype=complex)
    tab.setflags(write=False)
    return tab


def hurwitz_table(q: int, s: complex, prof: PrecisionProfile = DEFAULT_PROFILE) -> np.ndarray:
    """zeta(s, a/q) for a = 1..q as a read-only array (cached per (q, s)).

    At s = 1 the table holds -psi(a/q) instead, the finite part of the pole.
    """
    return _hurwitz_table_cached(int(q), complex(s), prof)


def _values_from_table(q: int, s: complex, table: np.ndarray, hz: np.ndarray) -> np.ndarray:
    # table columns are residues 0..q-1; the Hurwitz table runs over a = 1..q
    cols = np.arange(1, q + 1) % q
    return (table[:, cols] @ hz) * cmath.exp(-s * math.log(q))


def l_value(s: complex, chi: DirichletCharacter, prof: PrecisionProfile = DEFAULT_PROFILE) -> complex:
    """L(s, chi) via Hurwitz zeta."""
    s = complex(s)
    q = chi.modulus
    trivial = chi.conductor.value == 1
    if s == 1 and trivial:
        raise ValueError("l_value: pole of the principal L-function at s = 1")
    return complex(_values_from_table(q, s, chi.table[None, :], hurwitz_table(q, s, prof))[0])


def l_values(s: complex, q: int, table: np.ndarray, prof: PrecisionProfile = DEFAULT_PROFILE) -> np.ndarray:
    """L(s, chi) for every row of a character table mod q."""
    s = complex(s)
    if table.shape[0] == 0:
        return np.zeros(0, dtype=complex)
    return _values_from_table(q, s, table, hurwitz_table(q, s, prof))


def gamma_factor(q: int, s: complex) -> complex:
    """(q/pi)^(s/2) Gamma(1/4 + s/2)."""
    s = complex(s)
    return cmath.exp(0.5 * s * math.log(q / math.pi) + log_gamma(0.25 + 0.5 * s))


def completed_lambda(s: complex, chi: DirichletCharacter, prof: PrecisionProfile = DEFAULT_PROFILE) -> complex:
    """Lambda(1/2 + s, chi) for even chi; `s` is the offset from the central point."""
    if not chi.is_even:
        raise ValueError("completed_lambda: character must be even")
    return gamma_factor(chi.modulus, s) * l_value(0.5 + complex(s), chi, prof)


def completed_lambdas(s: complex, q: int, table: np.ndarray, prof: PrecisionProfile = DEFAULT_PROFILE) -> np.ndarray:
    """Lambda(1/2 + s, chi) for every row of a table of even characters mod q."""
    return gamma_factor(q, s) * l_values(0.5 + complex(s), q, table, prof)


def functional_equation_residual(s: complex, chi: DirichletCharacter,
                                 prof: PrecisionProfile = DEFAULT_PROFILE) -> float:
    """|Lambda(1/2+s, chi) - eps(chi) Lambda(1/2-s, conj chi)| for even primitive chi."""
    eps = root_number(chi)
    left = completed_lambda(s, chi, prof)
    right = eps * completed_lambda(-complex(s), chi.conj(), prof)
    return abs(left - right)

