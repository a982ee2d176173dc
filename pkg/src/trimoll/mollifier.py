"""The short mollifier: a triple sum over smooth squarefree indices.

The polynomial's term at N = n1 * n2^2 * n3^3 is

    mu(n1) |mu(n2)| mu(n3) A(1,n1) A(n2,1) [Omega(N) < cap]

over pairwise-coprime squarefree triples with all prime factors below the
cutoff X. Distinct triples give distinct N (coprimality plus squarefreeness),
so the builder asserts no collisions. Formally this truncates the inverse
Euler product: with no cap and full smooth support, M(s) * L_X(s) = 1
identically on X-smooth indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .arith import SmoothnessParams, primes_below
from .coeffs import SatakeSource, schur_coefficient
from .dirichlet import DirichletPolynomial
from .errors import DomainError, ResourceError

T_FLOOR = 1619  # exp(e^2) rounds up to this


@dataclass(frozen=True)
class MollifierParams:
    """Height T, cap multiplier k, exponent alpha, and derived quantities."""

    T: float
    k: float
    alpha: float
    sigma0: float
    X: float
    omega_cap: float


def make_params(T: float, k: float, alpha: float) -> MollifierParams:
    """Derive sigma0 = 1/2 + (loglog T)^{alpha-1}, X, and the Omega cap.

    Requires T >= 1619 and (T, alpha) compatible with sigma0 < 1: the
    latter needs loglog T > 2^{1/(1-alpha)}, which the floor alone does
    not guarantee.
    """
    if T < T_FLOOR:
        raise DomainError(f"T must be >= {T_FLOOR} (loglog T > 1), got {T}")
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0,1), got {alpha}")
    if k <= 0:
        raise DomainError(f"k must be positive, got {k}")
    llt = math.log(math.log(T))
    sigma0 = 0.5 + llt ** -(1.0 - alpha)
    if sigma0 >= 1:
        raise DomainError(
            f"sigma0 = {sigma0:.4f} >= 1 for T={T}, alpha={alpha}; raise T"
        )
    x = T ** (1.0 / llt ** (2.0 - alpha / 2.0))
    return MollifierParams(
        T=float(T), k=float(k), alpha=float(alpha),
        sigma0=sigma0, X=x, omega_cap=200.0 * k * llt,
    )


def build_mollifier(
    src: SatakeSource,
    params: MollifierParams,
    term_budget: int = 500_000,
    X_override: float | None = None,
    count_distinct: bool = False,
) -> DirichletPolynomial:
    """Enumerate the triple sum into a DirichletPolynomial.

    X_override substitutes a desk-scale cutoff for the formula value of X
    (the formula only leaves usable ranges for astronomically large T);
    params are retained in the description for reporting. Raises
    ResourceError with the partial count when the term budget is hit.
    """
    x_eff = params.X if X_override is None else float(X_override)
    if x_eff <= 1:
        raise DomainError(f"effective smoothness cutoff must exceed 1, got {x_eff}")
    cap = params.omega_cap
    primes = [int(p) for p in primes_below(x_eff)]
    inc1 = 1
    inc2 = 1 if count_distinct else 2
    inc3 = 1 if count_distinct else 3

    terms: dict[int, complex] = {}

    def record(n1, n2, n3, coef):
        n = n1 * n2 * n2 * n3 * n3 * n3
        if n in terms:
            raise AssertionError(f"triple collision at N={n}")
        if len(terms) >= term_budget:
            raise ResourceError(
                f"mollifier term budget {term_budget} exceeded",
                partial_count=len(terms),
            )
        terms[n] = coef

    def walk(i, n1, n2, n3, coef, omega):
        if i == len(primes):
            record(n1, n2, n3, coef)
            return
        p = primes[i]
        walk(i + 1, n1, n2, n3, coef, omega)
        if omega + inc1 < cap:
            walk(i + 1, n1 * p, n2, n3, -coef * schur_coefficient(src, p, 0, 1),
                 omega + inc1)
        if omega + inc2 < cap:
            walk(i + 1, n1, n2 * p, n3, coef * schur_coefficient(src, p, 1, 0),
                 omega + inc2)
        if omega + inc3 < cap:
            walk(i + 1, n1, n2, n3 * p, -coef, omega + inc3)

    walk(0, 1, 1, 1, 1 + 0j, 0)
    desc = (
        f"mollifier src={src.label} T={params.T:g} k={params.k:g} "
        f"alpha={params.alpha:g} sigma0={params.sigma0:.6g} X={x_eff:.6g} "
        f"cap={cap:.6g} distinct={count_distinct}"
    )
    return DirichletPolynomial(terms, desc)


def smoothness_of(params: MollifierParams, X_override: float | None = None,
                  count_distinct: bool = False) -> SmoothnessParams:
    """The SmoothnessParams matching a mollifier build."""
    x_eff = params.X if X_override is None else float(X_override)
    return SmoothnessParams(X=x_eff, omega_cap=params.omega_cap,
                            count_distinct=count_distinct)


def evaluate(poly: DirichletPolynomial, s: complex) -> complex:
    """Compensated evaluation of the polynomial at s (ascending index)."""
    return poly.evaluate(s)


@dataclass(frozen=True)
class MollifierCensus:
    term_count: int
    max_index: int
    l1_mass: float
    l2_mass: float


def mollifier_census(poly: DirichletPolynomial) -> MollifierCensus:
    return MollifierCensus(
        term_count=len(poly),
        max_index=poly.max_index(),
        l1_mass=poly.l1_mass(),
        l2_mass=poly.l2_mass(),
    )
