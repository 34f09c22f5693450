"""Sparse finite Fourier series in d variables, and square matrices of them.

A polynomial is a map from integer frequency vectors m in Z^d to complex
coefficients; evaluation substitutes exp(i<m, k>).  Coefficient arithmetic is
plain complex floating point while the frequency bookkeeping is exact integer
arithmetic.  Products prune coefficients below ``PRUNE_TOL`` so floating-point
dust cannot inflate the support; that pruning is the only inexact step in the
symbolic layer.
"""

from __future__ import annotations

import json
from typing import Iterable, Mapping

import numpy as np

IndexVector = tuple[int, ...]

# Coefficients with magnitude below this are dropped after every product.
PRUNE_TOL = 1e-14


class LaurentPoly:
    """Finite Fourier series: {m: c} represents sum_m c * exp(i<m, k>)."""

    __slots__ = ("dim", "coeffs")

    def __init__(self, dim: int, coeffs: Mapping[IndexVector, complex] | None = None):
        self.dim = int(dim)
        self.coeffs: dict[IndexVector, complex] = {}
        for m, c in (coeffs or {}).items():
            key = tuple(int(v) for v in m)
            if len(key) != self.dim:
                raise ValueError(f"frequency {key} has length {len(key)}, expected {self.dim}")
            c = complex(c)
            if c != 0:
                self.coeffs[key] = c

    @classmethod
    def zero(cls, dim: int) -> "LaurentPoly":
        return cls(dim)

    @classmethod
    def constant(cls, dim: int, value: complex) -> "LaurentPoly":
        return cls(dim, {(0,) * dim: value})

    @classmethod
    def monomial(cls, dim: int, m: Iterable[int], value: complex = 1.0) -> "LaurentPoly":
        return cls(dim, {tuple(int(v) for v in m): value})

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            s = out.get(m, 0) + c
            if s == 0:
                out.pop(m, None)
            else:
                out[m] = s
        return LaurentPoly(self.dim, out)

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._coerce(other))

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.dim, {m: -c for m, c in self.coeffs.items()})

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, float, complex)):
            return LaurentPoly(self.dim, {m: c * other for m, c in self.coeffs.items()})
        other = self._coerce(other)
        out: dict[IndexVector, complex] = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                key = tuple(a + b for a, b in zip(m1, m2))
                out[key] = out.get(key, 0) + c1 * c2
        return LaurentPoly(self.dim, out).prune()

    __rmul__ = __mul__
    __radd__ = __add__

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.dim != self.dim:
                raise ValueError("dimension mismatch")
            return other
        return LaurentPoly.constant(self.dim, other)

    def prune(self, tol: float = PRUNE_TOL) -> "LaurentPoly":
        return LaurentPoly(self.dim, {m: c for m, c in self.coeffs.items() if abs(c) >= tol})

    # -- queries -----------------------------------------------------------

    def coeff(self, m: Iterable[int]) -> complex:
        key = tuple(int(v) for v in m)
        if len(key) != self.dim:
            raise ValueError("frequency length mismatch")
        return self.coeffs.get(key, 0j)

    def eval(self, k) -> complex:
        k = np.asarray(k, dtype=float)
        if k.shape != (self.dim,):
            raise ValueError(f"quasimomentum must have length {self.dim}")
        if not self.coeffs:
            return 0j
        freqs, values = self._arrays()
        return complex(np.exp(1j * (freqs @ k)) @ values)

    def eval_grid(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at many quasimomenta at once; ``points`` is (npts, dim)."""
        points = np.asarray(points, dtype=float)
        if not self.coeffs:
            return np.zeros(points.shape[0], dtype=complex)
        freqs, values = self._arrays()
        return np.exp(1j * (points @ freqs.T)) @ values

    def _arrays(self) -> tuple[np.ndarray, np.ndarray]:
        items = sorted(self.coeffs.items())
        freqs = np.array([m for m, _ in items], dtype=float).reshape(len(items), self.dim)
        values = np.array([c for _, c in items], dtype=complex)
        return freqs, values

    def support(self) -> list[IndexVector]:
        return sorted(self.coeffs)

    def max_abs_frequency(self) -> int:
        """Largest |m_s| over the support, 0 for the zero polynomial."""
        return max((max(abs(v) for v in m) for m in self.coeffs if m), default=0)

    def conj_reflect(self) -> "LaurentPoly":
        """Conjugate coefficients and negate frequencies: the torus conjugate."""
        return LaurentPoly(self.dim, {tuple(-v for v in m): c.conjugate() for m, c in self.coeffs.items()})

    def is_real_on_torus(self, tol: float = 1e-12) -> bool:
        return self.max_diff(self.conj_reflect()) <= tol

    def max_diff(self, other: "LaurentPoly") -> float:
        other = self._coerce(other)
        keys = set(self.coeffs) | set(other.coeffs)
        return max((abs(self.coeffs.get(m, 0) - other.coeffs.get(m, 0)) for m in keys), default=0.0)

    def to_debug_json(self) -> str:
        """Dump as a JSON map '"m1,m2,...,md" -> [re, im]' for test fixtures."""
        doc = {
            ",".join(str(v) for v in m): [c.real, c.imag]
            for m, c in sorted(self.coeffs.items())
        }
        return json.dumps(doc)

    def __repr__(self) -> str:
        terms = ", ".join(f"{m}: {c:.6g}" for m, c in sorted(self.coeffs.items()))
        return f"LaurentPoly(dim={self.dim}, {{{terms}}})"


class LaurentMatrix:
    """Square matrix of LaurentPoly entries; the symbolic form of fiber operators."""

    __slots__ = ("dim", "size", "entries")

    def __init__(self, dim: int, entries: list[list[LaurentPoly]]):
        self.dim = int(dim)
        self.size = len(entries)
        for row in entries:
            if len(row) != self.size:
                raise ValueError("matrix must be square")
            for p in row:
                if p.dim != self.dim:
                    raise ValueError("dimension mismatch")
        self.entries = entries

    @classmethod
    def zeros(cls, dim: int, size: int) -> "LaurentMatrix":
        return cls(dim, [[LaurentPoly.zero(dim) for _ in range(size)] for _ in range(size)])

    @classmethod
    def identity(cls, dim: int, size: int) -> "LaurentMatrix":
        mat = cls.zeros(dim, size)
        for i in range(size):
            mat.entries[i][i] = LaurentPoly.constant(dim, 1.0)
        return mat

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        if other.size != self.size or other.dim != self.dim:
            raise ValueError("dimension mismatch")
        out = LaurentMatrix.zeros(self.dim, self.size)
        for i in range(self.size):
            for j in range(self.size):
                acc = LaurentPoly.zero(self.dim)
                for l in range(self.size):
                    left = self.entries[i][l]
                    if left.coeffs:
                        acc = acc + left * other.entries[l][j]
                out.entries[i][j] = acc.prune()
        return out

    def __add__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if other.size != self.size or other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return LaurentMatrix(
            self.dim,
            [
                [self.entries[i][j] + other.entries[i][j] for j in range(self.size)]
                for i in range(self.size)
            ],
        )

    def __sub__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        return self + other.scaled(-1.0)

    def scaled(self, factor: complex) -> "LaurentMatrix":
        return LaurentMatrix(
            self.dim, [[p * factor for p in row] for row in self.entries]
        )

    def power(self, n: int) -> "LaurentMatrix":
        if n < 0:
            raise ValueError("only nonnegative powers are defined")
        result = LaurentMatrix.identity(self.dim, self.size)
        for _ in range(n):
            result = result @ self
        return result

    def trace(self) -> LaurentPoly:
        acc = LaurentPoly.zero(self.dim)
        for i in range(self.size):
            acc = acc + self.entries[i][i]
        return acc

    def eval(self, k) -> np.ndarray:
        out = np.zeros((self.size, self.size), dtype=complex)
        for i in range(self.size):
            for j in range(self.size):
                out[i, j] = self.entries[i][j].eval(k)
        return out

    def eval_grid(self, points: np.ndarray) -> np.ndarray:
        """Stack of fiber matrices, shape (npts, size, size)."""
        points = np.asarray(points, dtype=float)
        out = np.zeros((points.shape[0], self.size, self.size), dtype=complex)
        for i in range(self.size):
            for j in range(self.size):
                if self.entries[i][j].coeffs:
                    out[:, i, j] = self.entries[i][j].eval_grid(points)
        return out

    def hermiticity_defect(self) -> float:
        """Largest coefficient deviation from entry(j,i) == conj-reflect(entry(i,j))."""
        worst = 0.0
        for i in range(self.size):
            for j in range(i, self.size):
                diff = self.entries[j][i].max_diff(self.entries[i][j].conj_reflect())
                worst = max(worst, diff)
        return worst

    def max_abs_frequency(self) -> int:
        return max(
            (p.max_abs_frequency() for row in self.entries for p in row), default=0
        )
