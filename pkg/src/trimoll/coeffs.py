"""Degree-3 Hecke coefficient families from per-prime Satake triples.

A coefficient family A(m,n) is realized through unitary triples
(alpha1, alpha2, alpha3) with alpha1*alpha2*alpha3 = 1: the local Euler
factor is prod_i (1 - alpha_i p^{-s})^{-1}, and A(p^a, p^b) is the Schur
polynomial s_{(a+b, a, 0)}(alpha). The bilinear Hecke relations then hold
exactly by construction, which is what the expansion operations here are
tested against.

Index convention (pinned by the Euler product): A(1,p) = e1(alpha) and
A(p,1) = e2(alpha), so A(1, p^a) is the coefficient of p^{-as} in the
local-factor power series.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field

import numpy as np

from .arith import factorize
from .errors import DomainError

log = logging.getLogger(__name__)

KINDS = ("eisenstein", "sym2_lift", "file", "random_unitary")

_UNITARY_TOL = 1e-12
_OVERFLOW_GUARD = 1e100


@dataclass
class SatakeSource:
    """Lazily computed per-prime Satake triples defining a family A(m,n).

    Construct through the factory functions (eisenstein, random_unitary,
    sym2_lift, from_file) rather than directly.
    """

    kind: str
    label: str
    seed: int | None = None
    data: dict[int, complex] = field(default_factory=dict)
    _triples: dict[int, tuple[complex, complex, complex]] = field(default_factory=dict)
    _pair_cache: dict[tuple[int, int, int], complex] = field(default_factory=dict)
    _tables: dict[str, np.ndarray] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock)
    _warned: set = field(default_factory=set)

    def triple(self, p: int) -> tuple[complex, complex, complex]:
        with self._lock:
            t = self._triples.get(p)
            if t is None:
                t = self._make_triple(p)
                prod = t[0] * t[1] * t[2]
                if abs(prod - 1) > 1e-9:
                    raise DomainError(
                        f"Satake triple at p={p} has product {prod}, expected 1"
                    )
                self._triples[p] = t
            return t

    def _make_triple(self, p):
        if self.kind == "eisenstein":
            return (1 + 0j, 1 + 0j, 1 + 0j)
        if self.kind == "random_unitary":
            rng = np.random.default_rng([self.seed, p])
            th1, th2 = rng.uniform(0.0, 2 * np.pi, 2)
            return (
                complex(np.exp(1j * th1)),
                complex(np.exp(1j * th2)),
                complex(np.exp(-1j * (th1 + th2))),
            )
        if self.kind == "sym2_lift":
            a = self.data.get(p)
            if a is None:
                if p not in self._warned:
                    log.warning("sym2_lift: no eigenvalue for p=%d, defaulting a(p)=0", p)
                    self._warned.add(p)
                a = 0.0
            a = float(np.real(a))
            if abs(a) > 2 + 1e-9:
                raise DomainError(f"sym2_lift eigenvalue |a({p})| = {abs(a)} exceeds 2")
            beta = complex(np.exp(1j * np.arccos(min(1.0, max(-1.0, a / 2.0)))))
            return (beta**2, 1 + 0j, np.conj(beta) ** 2)
        if self.kind == "file":
            c = self.data.get(p)
            if c is None:
                if p not in self._warned:
                    log.warning("file source: no coefficient for p=%d, defaulting A(1,p)=0", p)
                    self._warned.add(p)
                c = 0j
            # Roots of x^3 - c x^2 + conj(c) x - 1; unitary iff the data is.
            roots = np.roots([1.0, -c, np.conj(c), -1.0])
            return tuple(complex(r) for r in roots)
        raise DomainError(f"unknown Satake source kind {self.kind!r}")

    @property
    def unitary(self) -> bool:
        if self.kind in ("eisenstein", "sym2_lift", "random_unitary"):
            return True
        # File data may be non-unitary; probe the primes actually provided.
        return all(
            max(abs(abs(a) - 1) for a in self.triple(p)) < 1e-8 for p in self.data
        )


def eisenstein() -> SatakeSource:
    """The fully degenerate family: A(m,n) counts, A(1,n) = d3(n)."""
    return SatakeSource(kind="eisenstein", label="eisenstein")


def random_unitary(seed: int) -> SatakeSource:
    """Seeded random unitary triples; used for property tests."""
    return SatakeSource(kind="random_unitary", label=f"random_unitary[{seed}]", seed=seed)


def _parse_coeff_lines(lines, gl2: bool):
    data = {}
    last_p = 0
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split("\t") if "\t" in line else line.split()
        p = int(parts[0])
        if p <= last_p:
            raise DomainError(f"coefficient file primes must be ascending, got {p} after {last_p}")
        last_p = p
        if gl2:
            if len(parts) != 2:
                raise DomainError(f"expected 'p a_p' line, got {line!r}")
            data[p] = float(parts[1])
        else:
            if len(parts) != 3:
                raise DomainError(f"expected 'p re im' line, got {line!r}")
            data[p] = complex(float(parts[1]), float(parts[2]))
    return data


def sym2_lift(path) -> SatakeSource:
    """Symmetric-square family from a file of GL(2) eigenvalues `p \\t a_p`.

    Requires |a_p| <= 2; primes missing from the file default to a_p = 0
    with a logged warning.
    """
    with open(path, encoding="utf-8") as fh:
        data = _parse_coeff_lines(fh, gl2=True)
    return SatakeSource(kind="sym2_lift", label=f"sym2_lift[{path}]", data=data)


def from_file(path) -> SatakeSource:
    """Family with A(1,p) read from `p \\t re \\t im` lines.

    The triple at p is reconstructed as the roots of
    x^3 - A(1,p) x^2 + conj(A(1,p)) x - 1. A(n,1) is always computed from
    the triple itself, never by conjugating A(1,n), so non-unitary data
    stays self-consistent.
    """
    with open(path, encoding="utf-8") as fh:
        data = _parse_coeff_lines(fh, gl2=False)
    return SatakeSource(kind="file", label=f"file[{path}]", data=data)


def _homogeneous(alpha, kmax):
    """Complete homogeneous symmetric values h_0..h_kmax of a triple."""
    e1 = alpha[0] + alpha[1] + alpha[2]
    e2 = alpha[0] * alpha[1] + alpha[0] * alpha[2] + alpha[1] * alpha[2]
    e3 = alpha[0] * alpha[1] * alpha[2]
    h = [1 + 0j, e1]
    for k in range(2, kmax + 1):
        h.append(e1 * h[k - 1] - e2 * h[k - 2] + (e3 * h[k - 3] if k >= 3 else 0))
    return h


def schur_coefficient(src: SatakeSource, p: int, a: int, b: int) -> complex:
    """A(p^a, p^b): the Schur polynomial s_{(a+b, a, 0)} of the triple at p.

    For the eisenstein source this is (a+1)(b+1)(a+b+2)/2.
    """
    if a < 0 or b < 0:
        raise DomainError("exponents must be nonnegative")
    if a == 0 and b == 0:
        return 1 + 0j
    key = (p, a, b)
    with src._lock:
        val = src._pair_cache.get(key)
    if val is not None:
        return val
    alpha = src.triple(p)
    amax = max(abs(x) for x in alpha)
    if amax > 1.5 and amax ** (a + b + 1) > _OVERFLOW_GUARD:
        raise DomainError(
            f"Satake triple at p={p} too far from unitary for exponents ({a},{b})"
        )
    h = _homogeneous(alpha, a + b + 1)
    hm1 = h[a - 1] if a >= 1 else 0j
    val = h[a + b] * h[a] - h[a + b + 1] * hm1
    with src._lock:
        src._pair_cache[key] = val
    return val


def coefficient(src: SatakeSource, m: int, n: int) -> complex:
    """A(m,n) by joint multiplicativity over the primes of m and n."""
    if m < 1 or n < 1:
        raise DomainError("coefficient indices must be positive")
    if m == 1 and n == 1:
        return 1 + 0j
    em = dict(factorize(m).factors)
    en = dict(factorize(n).factors)
    out = 1 + 0j
    for p in sorted(set(em) | set(en)):
        out *= schur_coefficient(src, p, em.get(p, 0), en.get(p, 0))
    return out


def coefficient_table(src: SatakeSource, limit: int, side: str = "left") -> np.ndarray:
    """A(1,n) (side='left') or A(n,1) (side='right') for n = 0..limit.

    Multiplicative sieve over a smallest-prime-factor walk; entry 0 is 0.
    Tables are cached on the source and grown as needed.
    """
    if side not in ("left", "right"):
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    limit = int(limit)
    cached = src._tables.get(side)
    if cached is not None and len(cached) > limit:
        return cached[: limit + 1]
    out = np.zeros(limit + 1, dtype=np.complex128)
    out[1] = 1.0
    if limit >= 2:
        from .arith import _spf_table

        table = _spf_table(limit)
        for n in range(2, limit + 1):
            if table is not None:
                p = int(table[n])
            else:
                p = factorize(n).factors[0][0]
            m, e = n, 0
            while m % p == 0:
                m //= p
                e += 1
            if side == "left":
                local = schur_coefficient(src, p, 0, e)
            else:
                local = schur_coefficient(src, p, e, 0)
            out[n] = out[m] * local
    with src._lock:
        src._tables[side] = out
    return out


def _divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def hecke_expand_right(m1: int, m2: int, n: int) -> list[tuple[tuple[int, int], int]]:
    """Pairs (r1, r2) with A(m1,m2) A(n,1) = sum A(r1,r2).

    Enumerates d0 d1 d2 = n with d1 | m1, d2 | m2 and returns
    (m1 d0/d1, m2 d1/d2) with multiplicities aggregated.
    """
    if min(m1, m2, n) < 1:
        raise DomainError("expand arguments must be positive")
    counts: dict[tuple[int, int], int] = {}
    for d1 in _divisors(n):
        if m1 % d1:
            continue
        for d2 in _divisors(n // d1):
            if m2 % d2:
                continue
            d0 = n // (d1 * d2)
            pair = (m1 * d0 // d1, m2 * d1 // d2)
            counts[pair] = counts.get(pair, 0) + 1
    return sorted(counts.items())


def hecke_expand_left(m1: int, m2: int, n: int) -> list[tuple[tuple[int, int], int]]:
    """Pairs (r1, r2) with A(m1,m2) A(1,n) = sum A(r1,r2).

    Enumerates e0 e1 e2 = n with e1 | m2, e2 | m1 and returns
    (m1 e1/e2, m2 e0/e1) with multiplicities aggregated.
    """
    if min(m1, m2, n) < 1:
        raise DomainError("expand arguments must be positive")
    counts: dict[tuple[int, int], int] = {}
    for e1 in _divisors(n):
        if m2 % e1:
            continue
        for e2 in _divisors(n // e1):
            if m1 % e2:
                continue
            e0 = n // (e1 * e2)
            pair = (m1 * e1 // e2, m2 * e0 // e1)
            counts[pair] = counts.get(pair, 0) + 1
    return sorted(counts.items())
