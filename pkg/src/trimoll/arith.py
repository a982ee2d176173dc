"""Exact integer arithmetic substrate.

Prime sieve, factorization, the multiplicative functions mu and d3, and the
smoothness machinery used by the mollifier: P(n) (largest prime factor),
Omega(n) (prime factors below the smoothness cutoff X, with multiplicity)
and the truncation indicator that keeps Omega(n) below a cap.

The sieve and the smallest-prime-factor table are built once, grown lazily,
and never mutated afterwards, so every function here is safe for concurrent
readers.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ResourceError

# Memory budget for sieve allocations, in bytes (1 byte per candidate).
SIEVE_BUDGET_BYTES = 2**28

# Above this the SPF table stops growing and factorize falls back to
# trial division by sieved primes.
SPF_CAP = 10**7

_spf_lock = threading.Lock()
_spf: np.ndarray | None = None


def sieve_primes(limit: int) -> np.ndarray:
    """All primes <= limit, ascending, as an int64 array.

    limit < 2 returns an empty array. Raises ResourceError when the sieve
    allocation would exceed SIEVE_BUDGET_BYTES.
    """
    limit = int(limit)
    if limit < 2:
        return np.array([], dtype=np.int64)
    if limit + 1 > SIEVE_BUDGET_BYTES:
        raise ResourceError(
            f"sieve limit {limit} exceeds memory budget of {SIEVE_BUDGET_BYTES} bytes"
        )
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def primes_below(x: float) -> np.ndarray:
    """Primes strictly below the real cutoff x."""
    if x <= 2:
        return np.array([], dtype=np.int64)
    limit = math.ceil(x) - 1  # largest integer < x
    return sieve_primes(limit)


def _build_spf(limit: int) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = np.flatnonzero(spf[2:] == 0) + 2
    spf[rest] = rest
    return spf


def _spf_table(n: int) -> np.ndarray | None:
    """SPF table covering n, grown geometrically; None when n > SPF_CAP."""
    global _spf
    if n > SPF_CAP:
        return None
    table = _spf
    if table is not None and n < len(table):
        return table
    with _spf_lock:
        if _spf is None or n >= len(_spf):
            size = max(1 << 20, 1 << (int(n).bit_length() + 1))
            size = min(size, SPF_CAP + 1)
            _spf = _build_spf(size - 1)
        return _spf


@dataclass(frozen=True)
class Factorization:
    """n as an ordered list of (prime, exponent) pairs, primes increasing."""

    n: int
    factors: tuple[tuple[int, int], ...] = field(default_factory=tuple)

    def __iter__(self):
        return iter(self.factors)


def factorize(n: int) -> Factorization:
    """Prime factorization of n >= 1 (empty factor list for n = 1)."""
    n = int(n)
    if n < 1:
        raise DomainError(f"factorize requires n >= 1, got {n}")
    if n == 1:
        return Factorization(1, ())
    factors = []
    m = n
    table = _spf_table(n)
    if table is not None:
        while m > 1:
            p = int(table[m])
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
    else:
        for p in sieve_primes(math.isqrt(n)):
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
            factors.append((int(m), 1))
    factors.sort()
    return Factorization(n, tuple(factors))


def mobius(n: int) -> int:
    """Moebius function: 0 on non-squarefree n, else (-1)^(number of primes)."""
    fac = factorize(n)
    if any(e >= 2 for _, e in fac):
        return 0
    return -1 if len(fac.factors) % 2 else 1


def d3(n: int) -> int:
    """Ordered triple divisor count: number of (a,b,c) with abc = n."""
    out = 1
    for _, e in factorize(n):
        out *= (e + 1) * (e + 2) // 2
    return out


def d3_table(limit: int) -> np.ndarray:
    """d3(n) for 0 <= n <= limit via two divisor-convolution sieves."""
    limit = int(limit)
    d2 = np.zeros(limit + 1, dtype=np.int64)
    for d in range(1, limit + 1):
        d2[d::d] += 1
    out = np.zeros(limit + 1, dtype=np.int64)
    for d in range(1, limit + 1):
        out[d::d] += d2[1 : limit // d + 1]
    return out


def largest_prime_factor(n: int) -> int:
    """P(n) for n >= 2. Use is_x_smooth for the n = 1 convention."""
    if n < 2:
        raise DomainError(f"largest_prime_factor requires n >= 2, got {n}")
    return factorize(n).factors[-1][0]


def is_x_smooth(n: int, x: float) -> bool:
    """True when every prime factor of n is strictly below x; n = 1 is smooth."""
    if n == 1:
        return True
    return largest_prime_factor(n) < x


@dataclass(frozen=True)
class SmoothnessParams:
    """Cutoff X and the Omega cap for the truncation indicator.

    count_distinct switches Omega from with-multiplicity (the default used
    everywhere) to distinct-prime counting, for sensitivity runs.
    """

    X: float
    omega_cap: float
    count_distinct: bool = False

    def __post_init__(self):
        if not self.X > 1:
            raise DomainError(f"smoothness cutoff X must exceed 1, got {self.X}")
        if not self.omega_cap > 0:
            raise DomainError(f"omega cap must be positive, got {self.omega_cap}")


def omega_below(n: int, x: float, distinct: bool = False) -> int:
    """Number of prime factors of n below x, with multiplicity by default."""
    total = 0
    for p, e in factorize(n):
        if p < x:
            total += 1 if distinct else e
    return total


def i_star(n: int, sp: SmoothnessParams) -> int:
    """Truncation indicator: 1 iff Omega(n) < sp.omega_cap, else 0."""
    return 1 if omega_below(n, sp.X, sp.count_distinct) < sp.omega_cap else 0
