"""Dirichlet characters mod q built from the CRT decomposition of (Z/q)*.

Each prime-power component contributes one cyclic generator (two for 2^k,
k >= 3).  A character is an exponent vector over those generators; its
value at a unit n is exp(2 pi i * sum_j e_j log_j(n) / o_j).  Discrete logs
are tabulated once per group, so evaluation is a table lookup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product

import numpy as np

from .arith import FactoredInt, IntLike, as_factored, euler_phi, moebius

__all__ = [
    "LocalComponent",
    "DirichletGroup",
    "DirichletCharacter",
    "build_group",
    "enumerate_characters",
    "char_value",
    "character_table",
    "gauss_sum",
    "root_number",
    "even_primitive_table",
    "orthogonality_sum",
    "orthogonality_formula",
    "even_primitive_count",
]

_MAX_MODULUS = 10**6


def _primitive_root_mod_prime(p: int) -> int:
    if p == 2:
        return 1
    phi = p - 1
    qs = [f for f, _ in as_factored(phi).factors]
    for g in range(2, p):
        if all(pow(g, phi // f, p) != 1 for f in qs):
            return g
    raise ArithmeticError(f"no primitive root mod {p}")


@dataclass(frozen=True)
class LocalComponent:
    """Unit group of one prime power p^k, as a product of cyclic factors.

    `generators` are residues mod p^k; `orders` their orders; `logs` has shape
    (len(generators), p^k) with entry -1 at non-units.
    """

    p: int
    k: int
    generators: tuple[int, ...]
    orders: tuple[int, ...]
    logs: np.ndarray = field(repr=False, compare=False)

    @property
    def modulus(self) -> int:
        return self.p**self.k


def _local_component(p: int, k: int) -> LocalComponent:
    pk = p**k
    if p == 2:
        if k == 1:
            return LocalComponent(2, 1, (), (), np.zeros((0, 2), dtype=np.int64))
        if k == 2:
            logs = np.full((1, 4), -1, dtype=np.int64)
            logs[0, 1], logs[0, 3] = 0, 1
            return LocalComponent(2, 2, (3,), (2,), logs)
        order5 = 2 ** (k - 2)
        logs = np.full((2, pk), -1, dtype=np.int64)
        x = 1
        for b in range(order5):
            logs[0, x], logs[1, x] = 0, b
            logs[0, pk - x], logs[1, pk - x] = 1, b
            x = x * 5 % pk
        return LocalComponent(2, k, (pk - 1, 5), (2, order5), logs)
    g = _primitive_root_mod_prime(p)
    if k >= 2 and pow(g, p - 1, p * p) == 1:
        g += p
    order = (p - 1) * p ** (k - 1)
    logs = np.full((1, pk), -1, dtype=np.int64)
    x = 1
    for e in range(order):
        logs[0, x] = e
        x = x * g % pk
    return LocalComponent(p, k, (g % pk,), (order,), logs)


@dataclass(frozen=True, eq=False)
class DirichletGroup:
    """The dual group of (Z/q)*, described through its CRT generators."""

    modulus: FactoredInt
    components: tuple[LocalComponent, ...]

    @property
    def q(self) -> int:
        return self.modulus.value

    @cached_property
    def orders(self) -> tuple[int, ...]:
        return tuple(o for c in self.components for o in c.orders)

    @cached_property
    def local_generators(self) -> tuple[int, ...]:
        """Global residues mod q that project to one local generator and to 1 elsewhere."""
        out = []
        q = self.q
        for c in self.components:
            m = c.modulus
            rest = q // m
            for g in c.generators:
                # CRT: x = g mod m, x = 1 mod rest
                x = (g * rest * pow(rest, -1, m) + m * pow(m, -1, rest)) % q if rest > 1 else g % q
                out.append(x)
        return tuple(out)

    @cached_property
    def exponent(self) -> int:
        """lcm of the generator orders; all character values are N-th roots of unity."""
        return math.lcm(*self.orders) if self.orders else 1

    @cached_property
    def discrete_logs(self) -> np.ndarray:
        """Array (n_generators, q) of discrete logs; -1 marks non-units."""
        n = np.arange(self.q)
        rows = [c.logs[j][n % c.modulus] for c in self.components for j in range(c.logs.shape[0])]
        logs = np.array(rows, dtype=np.int64).reshape(len(rows), self.q)
        logs[:, ~self.unit_mask] = -1
        return logs

    @cached_property
    def unit_mask(self) -> np.ndarray:
        mask = np.ones(self.q, dtype=bool)
        for p in self.modulus.primes:
            mask[::p] = False
        if self.q == 1:
            mask[0] = True
        return mask

    @property
    def order(self) -> int:
        return euler_phi(self.modulus)

    def __repr__(self):
        return f"DirichletGroup(q={self.q}, orders={self.orders})"


@lru_cache(maxsize=512)
def _build_group_cached(q: int) -> DirichletGroup:
    fq = as_factored(q)
    comps = tuple(_local_component(p, k) for p, k in fq.factors)
    return DirichletGroup(fq, comps)


def build_group(q: IntLike) -> DirichletGroup:
    """Character group mod q; cached per modulus."""
    qv = int(q)
    if qv < 1:
        raise ValueError("build_group: q must be >= 1")
    if qv > _MAX_MODULUS:
        raise ValueError(f"build_group: q={qv} exceeds supported bound {_MAX_MODULUS}")
    return _build_group_cached(qv)


def _v(p: int, n: int) -> int:
    if n == 0:
        return 10**9
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _local_conductor_exponent(c: LocalComponent, exps: tuple[int, ...]) -> int:
    if c.p == 2:
        if c.k == 1:
            return 0
        if c.k == 2:
            return 2 if exps[0] % 2 else 0
        a, b = exps
        if b % c.orders[1]:
            return c.k - _v(2, b % c.orders[1])
        return 2 if a % 2 else 0
    e = exps[0] % c.orders[0]
    if e == 0:
        return 0
    # the character is trivial on 1 + p^j Z exactly when p^(k-j) divides e
    return c.k - min(_v(c.p, e), c.k - 1)


@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    """A character mod q given by its exponent vector."""

    group: DirichletGroup
    exponents: tuple[int, ...]

    def __post_init__(self):
        if len(self.exponents) != len(self.group.orders):
            raise ValueError("exponent vector has the wrong length")
        object.__setattr__(self, "exponents",
                           tuple(int(e) % o for e, o in zip(self.exponents, self.group.orders)))

    @property
    def modulus(self) -> int:
        return self.group.q

    @cached_property
    def conductor(self) -> FactoredInt:
        factors = []
        i = 0
        for c in self.group.components:
            n = len(c.orders)
            f = _local_conductor_exponent(c, self.exponents[i:i + n])
            i += n
            if f:
                factors.append((c.p, f))
        return FactoredInt(math.prod(p**f for p, f in factors), tuple(factors))

    @property
    def is_primitive(self) -> bool:
        return self.conductor.value == self.group.q

    @cached_property
    def parity(self) -> str:
        sign = 0
        i = 0
        for c in self.group.components:
            n = len(c.orders)
            if n:
                # -1 is the first generator at 2-power moduli and g^(order/2) otherwise,
                # so in both cases chi(-1) = (-1)^e
                sign += self.exponents[i]
            i += n
        return "odd" if sign % 2 else "even"

    @property
    def is_even(self) -> bool:
        return self.parity == "even"

    def conj(self) -> "DirichletCharacter":
        return DirichletCharacter(self.group, tuple(-e for e in self.exponents))

    @cached_property
    def table(self) -> np.ndarray:
        """chi(n) for n = 0..q-1."""
        return character_table(self.group, [self])[0]

    def __call__(self, n: int) -> complex:
        return char_value(self, n)

    def __eq__(self, other):
        return (isinstance(other, DirichletCharacter) and other.group.q == self.group.q
                and other.exponents == self.exponents)

    def __hash__(self):
        return hash((self.group.q, self.exponents))

    def __repr__(self):
        return f"DirichletCharacter(q={self.modulus}, exponents={self.exponents})"


def enumerate_characters(g: DirichletGroup, even_only: bool = False,
                         primitive_only: bool = False) -> list[DirichletCharacter]:
    """All characters of `g` passing the parity and primitivity filters.

    Characters come out in lexicographic order of exponent vectors.
    """
    if primitive_only and g.q % 4 == 2:
        return []
    out = []
    for exps in product(*(range(o) for o in g.orders)):
        chi = DirichletCharacter(g, exps)
        if primitive_only and not chi.is_primitive:
            continue
        if even_only and not chi.is_even:
            continue
        out.append(chi)
    return out


def char_value(chi: DirichletCharacter, n: int) -> complex:
    g = chi.group
    r = int(n) % g.q
    if math.gcd(r, g.q) != 1:
        return 0j
    if "table" in chi.__dict__:
        return complex(chi.table[r])
    logs = g.discrete_logs[:, r]
    phase = sum(Fraction(int(e) * int(l), o) for e, l, o in zip(chi.exponents, logs, g.orders))
    k = int(phase * g.exponent) % g.exponent
    return complex(_roots_of_unity(g.exponent)[k])


@lru_cache(maxsize=64)
def _roots_of_unity(n: int) -> np.ndarray:
    k = np.arange(n)
    roots = np.exp(2j * np.pi * k / n)
    # make the obvious real/imaginary values exact
    roots[(4 * k) % n == 0] = np.round(roots[(4 * k) % n == 0].real) + 1j * np.round(roots[(4 * k) % n == 0].imag)
    return roots


def character_table(g: DirichletGroup, chars) -> np.ndarray:
    """Matrix (len(chars), q) of character values; zero at non-units."""
    q = g.q
    if not len(chars):
        return np.zeros((0, q), dtype=complex)
    if not g.orders:
        return np.ones((len(chars), q), dtype=complex)
    n_exp = g.exponent
    scale = np.array([n_exp // o for o in g.orders], dtype=np.int64)
    exps = np.array([c.exponents for c in chars], dtype=np.int64) * scale
    logs = g.discrete_logs
    unit = g.unit_mask
    k = (exps @ np.where(logs >= 0, logs, 0)) % n_exp
    out = _roots_of_unity(n_exp)[k]
    out[:, ~unit] = 0
    return out


def gauss_sum(chi: DirichletCharacter) -> complex:
    """tau(chi) = sum_{a mod q} chi(a) e(a/q)."""
    q = chi.modulus
    a = np.arange(q)
    return complex(np.sum(chi.table * np.exp(2j * np.pi * a / q)))


def root_number(chi: DirichletCharacter) -> complex:
    """tau(chi) / sqrt(q) for even primitive chi."""
    if not chi.is_primitive:
        raise ValueError("root_number: character is not primitive")
    if not chi.is_even:
        raise ValueError("root_number: character is odd")
    return gauss_sum(chi) / math.sqrt(chi.modulus)


@lru_cache(maxsize=256)
def even_primitive_table(q: int) -> np.ndarray:
    """Value table (n_chars, q) of the even primitive characters mod q (read-only)."""
    g = build_group(q)
    tab = character_table(g, enumerate_characters(g, even_only=True, primitive_only=True))
    tab.setflags(write=False)
    return tab


def orthogonality_sum(q: IntLike, m: int, n: int) -> complex:
    """sum over even primitive chi mod q of chi(m) conj(chi(n)), by enumeration."""
    qv = int(q)
    if math.gcd(m * n, qv) != 1:
        raise ValueError("orthogonality_sum: need gcd(mn, q) = 1")
    tab = even_primitive_table(qv)
    return complex(np.sum(tab[:, m % qv] * np.conj(tab[:, n % qv])))


def orthogonality_formula(q: IntLike, m: int, n: int) -> Fraction:
    """Divisor-sum closed form of `orthogonality_sum`:

        1/2 ( sum_{d | q, d | m-n} phi(d) mu(q/d) + sum_{d | q, d | m+n} phi(d) mu(q/d) ).
    """
    qv = int(q)
    if math.gcd(m * n, qv) != 1:
        raise ValueError("orthogonality_formula: need gcd(mn, q) = 1")
    total = 0
    for d in _divisors(qv):
        w = euler_phi(d) * moebius(qv // d)
        if (m - n) % d == 0:
            total += w
        if (m + n) % d == 0:
            total += w
    return Fraction(total, 2)


def even_primitive_count(q: IntLike) -> Fraction:
    """Number of even primitive characters mod q (the divisor formula at m = n = 1)."""
    return orthogonality_formula(q, 1, 1)


def _divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in as_factored(n).factors:
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)
