"""Sparse finite Dirichlet sums sum_n c_n n^{-s}.

Shared container for mollifiers, truncated L-series stand-ins, and the
bilinear mean-value machinery. The on-disk format is UTF-8 lines
``N <tab> re <tab> im`` in ascending N, with ``#`` comment/header lines.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ResourceError


@dataclass
class DirichletPolynomial:
    terms: dict[int, complex] = field(default_factory=dict)
    description: str = ""

    def __post_init__(self):
        for n in self.terms:
            if n < 1:
                raise DomainError(f"Dirichlet polynomial index {n} must be >= 1")

    def indices(self) -> np.ndarray:
        return np.array(sorted(self.terms), dtype=np.float64)

    def coefficients(self) -> np.ndarray:
        return np.array([self.terms[n] for n in sorted(self.terms)], dtype=np.complex128)

    def __len__(self) -> int:
        return len(self.terms)

    def max_index(self) -> int:
        return max(self.terms) if self.terms else 0

    def l1_mass(self) -> float:
        return float(math.fsum(abs(c) for _, c in sorted(self.terms.items())))

    def l2_mass(self) -> float:
        return math.sqrt(math.fsum(abs(c) ** 2 for _, c in sorted(self.terms.items())))

    def evaluate(self, s: complex) -> complex:
        """sum c_n n^{-s}, compensated, ascending n."""
        s = complex(s)
        re = []
        im = []
        for n in sorted(self.terms):
            v = self.terms[n] * np.exp(-s * math.log(n))
            re.append(v.real)
            im.append(v.imag)
        return complex(math.fsum(re), math.fsum(im))

    def evaluate_many(self, s: np.ndarray) -> np.ndarray:
        """Vectorized evaluation at an array of complex points."""
        s = np.asarray(s, dtype=np.complex128)
        if not self.terms:
            return np.zeros(s.shape, dtype=np.complex128)
        logn = np.log(self.indices())
        c = self.coefficients()
        flat = s.ravel()[:, None]
        vals = np.exp(-flat * logn[None, :]) @ c
        return vals.reshape(s.shape)

    def multiply(self, other: "DirichletPolynomial", budget: int = 2_000_000) -> "DirichletPolynomial":
        """Dirichlet product: coefficient of N collects c_a d_b over ab = N."""
        out: dict[int, complex] = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                n = a * b
                out[n] = out.get(n, 0j) + ca * cb
                if len(out) > budget:
                    raise ResourceError(
                        "Dirichlet product exceeded term budget", partial_count=len(out)
                    )
        return DirichletPolynomial(out, f"({self.description})*({other.description})")

    def minus_from_one(self) -> "DirichletPolynomial":
        """1 - self, as a polynomial."""
        out = {n: -c for n, c in self.terms.items()}
        out[1] = out.get(1, 0j) + 1.0
        return DirichletPolynomial(out, f"1-({self.description})")

    def at_sigma(self, sigma: float) -> tuple[np.ndarray, np.ndarray]:
        """(indices, c_n * n^{-sigma}): the pure-oscillation coefficients."""
        n = self.indices()
        return n, self.coefficients() * n**(-sigma)

    def save(self, path, header: list[str] | None = None) -> None:
        tmp = str(path) + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(f"# {self.description}\n")
            for line in header or []:
                fh.write(f"# {line}\n")
            for n in sorted(self.terms):
                c = self.terms[n]
                fh.write(f"{n}\t{c.real:.17g}\t{c.imag:.17g}\n")
        os.replace(tmp, path)

    @classmethod
    def load(cls, path) -> "DirichletPolynomial":
        terms: dict[int, complex] = {}
        desc = ""
        last = 0
        with open(path, encoding="utf-8") as fh:
            for raw in fh:
                line = raw.strip()
                if line.startswith("#"):
                    if not desc:
                        desc = line.lstrip("# ").strip()
                    continue
                if not line:
                    continue
                parts = line.split("\t")
                if len(parts) != 3:
                    raise DomainError(f"bad polynomial line {line!r}")
                n = int(parts[0])
                if n <= last:
                    raise DomainError("polynomial indices must be ascending")
                last = n
                terms[n] = complex(float(parts[1]), float(parts[2]))
        return cls(terms, desc)
