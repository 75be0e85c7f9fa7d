"""Exact spectral decomposition of distance regular graphs.

Eigenvalues come from the minimal polynomial of the adjacency matrix, found
as the first exact linear dependence among I, A, A^2, ...; its roots are
located by divisor search (family graphs have integral spectra).  The
primitive idempotent E_i is the Lagrange product prod_{j != i} (A - theta_j I)
/ (theta_i - theta_j), and multiplicities are idempotent traces.  Everything
is exact: matrices are integer arrays over a single common denominator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd, isqrt

import numpy as np

from .errors import SpectralIntegralityError
from .graphs import (
    DualPolarFamily,
    GrassmannFamily,
    GraphInstance,
    HammingFamily,
    JohnsonFamily,
    q_binomial,
    q_int,
)


def _array_gcd(arr, extra=0):
    g = extra
    for v in arr.reshape(-1).tolist():
        g = gcd(g, v)
        if g == 1:
            return 1
    return g


class RationalMatrix:
    """Exact rational matrix: integer numerators over one positive denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1, normalize=True):
        self.num = np.asarray(num, dtype=object)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            self.num = -self.num
            den = -den
        self.den = den
        if normalize:
            g = _array_gcd(self.num, self.den)
            if g > 1:
                self.num = self.num // g
                self.den //= g

    @classmethod
    def identity(cls, n):
        m = np.zeros((n, n), dtype=object)
        for i in range(n):
            m[i, i] = 1
        return cls(m)

    @classmethod
    def from_fraction_rows(cls, rows):
        den = 1
        for r in rows:
            for c in r:
                f = Fraction(c)
                den = den * f.denominator // gcd(den, f.denominator)
        num = [[int(Fraction(c) * den) for c in r] for r in rows]
        return cls(np.array(num, dtype=object), den)

    @property
    def shape(self):
        return self.num.shape

    def entry(self, i, j) -> Fraction:
        return Fraction(int(self.num[i, j]), self.den)

    def to_fraction_rows(self):
        return tuple(
            tuple(Fraction(int(v), self.den) for v in row)
            for row in self.num.tolist()
        )

    def __matmul__(self, other):
        return RationalMatrix(self.num @ other.num, self.den * other.den)

    def __add__(self, other):
        return RationalMatrix(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __sub__(self, other):
        return RationalMatrix(
            self.num * other.den - other.num * self.den, self.den * other.den
        )

    def scale(self, f) -> "RationalMatrix":
        f = Fraction(f)
        return RationalMatrix(self.num * f.numerator, self.den * f.denominator)

    def transpose(self):
        return RationalMatrix(self.num.transpose().copy(), self.den, normalize=False)

    def trace(self) -> Fraction:
        return Fraction(int(np.trace(self.num)), self.den)

    @property
    def is_zero(self) -> bool:
        return not any(self.num.reshape(-1).tolist())

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.den == other.den and np.array_equal(self.num, other.num)

    def apply(self, vec):
        """Matrix times a vector of rationals, returned as Fractions."""
        if len(vec) != self.shape[1]:
            raise ValueError(f"expected vector of length {self.shape[1]}")
        v = np.array([Fraction(x) for x in vec], dtype=object)
        out = self.num @ v
        return tuple(Fraction(x, self.den) for x in out.tolist())

    def __repr__(self):
        return f"RationalMatrix(shape={self.shape}, den={self.den})"


def solve_linear_combination(basis_rows, target):
    """Coefficients c with sum c_i * basis_i = target, or None.

    Exact Gaussian elimination over the rationals; the basis rows need not be
    independent (any valid combination is returned).
    """
    rows = [list(map(Fraction, r)) for r in basis_rows]
    t = list(map(Fraction, target))
    n = len(t)
    if any(len(r) != n for r in rows):
        raise ValueError("length mismatch")
    # eliminate on the transposed system: columns are basis vectors
    aug = [[rows[i][c] for i in range(len(rows))] + [t[c]] for c in range(n)]
    ncols = len(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, n) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    # rows below r must have zero right-hand side, else inconsistent
    if any(aug[i][-1] for i in range(r, n)):
        return None
    coeffs = [Fraction(0)] * ncols
    for row_idx, c in enumerate(pivots):
        coeffs[c] = aug[row_idx][-1]
    return tuple(coeffs)


def rational_rank(rows) -> int:
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return 0
    n = len(m[0])
    rank = 0
    for c in range(n):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][c]
        m[rank] = [x * inv for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# spectra


def adjacency_matrices(g: GraphInstance):
    """Distance-shell 0/1 matrices A_0 = I, A_1, ..., A_D as RationalMatrix."""
    return [
        RationalMatrix((g.dist == i).astype(int).astype(object), 1, normalize=False)
        for i in range(g.diameter + 1)
    ]


def _minimal_polynomial(a_int: np.ndarray):
    """Monic integer coefficients c_0..c_deg of the minimal polynomial of A."""
    n = a_int.shape[0]
    power = np.zeros((n, n), dtype=object)
    for i in range(n):
        power[i, i] = 1
    basis = []
    while True:
        basis.append(power.reshape(-1).tolist())
        power = power @ a_int
        coeffs = solve_linear_combination(basis, power.reshape(-1).tolist())
        if coeffs is not None:
            deg = len(basis)
            poly = [-c for c in coeffs] + [Fraction(1)]
            if any(c.denominator != 1 for c in poly):
                # cannot happen for integer matrices (Gauss), guard anyway
                raise SpectralIntegralityError("non-integer minimal polynomial")
            return [int(c) for c in poly]


def _divisors(n: int):
    n = abs(n)
    out = set()
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            out.add(d)
            out.add(n // d)
    return sorted(out)


def _integer_roots(poly):
    """Distinct integer roots of a monic squarefree integer polynomial.

    Raises SpectralIntegralityError if any root is not an integer.
    """
    coeffs = list(poly)
    roots = []
    while coeffs[0] == 0:
        roots.append(0)
        coeffs = coeffs[1:]
        if coeffs[0] == 0:
            raise SpectralIntegralityError("repeated root 0 in minimal polynomial")
    while len(coeffs) > 1:
        found = None
        for d in _divisors(coeffs[0]):
            for cand in (d, -d):
                acc = 0
                for c in reversed(coeffs):
                    acc = acc * cand + c
                if acc == 0:
                    found = cand
                    break
            if found is not None:
                break
        if found is None:
            raise SpectralIntegralityError(
                f"minimal polynomial {poly} has a non-integer root"
            )
        if found in roots:
            raise SpectralIntegralityError("repeated eigenvalue in minimal polynomial")
        roots.append(found)
        # deflate by (x - found)
        out = []
        carry = coeffs[-1]
        for c in reversed(coeffs[:-1]):
            out.append(carry)
            carry = c + found * carry
        assert carry == 0
        coeffs = list(reversed(out))
    return roots


@dataclass(eq=False)
class SpectralData:
    """Eigenvalues (descending), multiplicities, and primitive idempotents."""

    graph: GraphInstance
    eigenvalues: tuple
    multiplicities: tuple
    idempotents: tuple

    @property
    def count(self) -> int:
        return len(self.eigenvalues)

    def validate(self):
        """Full invariant battery; raises AssertionError on any failure."""
        g = self.graph
        n = g.vertex_count
        assert self.count == g.diameter + 1
        assert list(self.eigenvalues) == sorted(self.eigenvalues, reverse=True)
        assert sum(self.multiplicities) == n
        assert self.multiplicities[0] == 1
        assert all(m > 0 for m in self.multiplicities)
        a1 = adjacency_matrices(g)[1]
        ident = RationalMatrix.identity(n)
        total = None
        for theta, mult, e in zip(self.eigenvalues, self.multiplicities, self.idempotents):
            assert (e @ e) == e
            assert (a1 @ e) == e.scale(theta)
            assert e.trace() == mult
            total = e if total is None else total + e
        assert total == ident
        for i in range(self.count):
            for j in range(i + 1, self.count):
                assert (self.idempotents[i] @ self.idempotents[j]).is_zero
        return True


def eigenvalues(g: GraphInstance):
    """Distinct eigenvalues of the adjacency matrix with multiplicities.

    Returns a list of (eigenvalue, multiplicity), eigenvalues descending.
    """
    sd = spectral_data(g)
    return list(zip(sd.eigenvalues, sd.multiplicities))


def spectral_data(g: GraphInstance) -> SpectralData:
    a_int = (g.dist == 1).astype(int).astype(object)
    poly = _minimal_polynomial(a_int)
    thetas = sorted(_integer_roots(poly), reverse=True)
    if len(thetas) != g.diameter + 1:
        raise SpectralIntegralityError(
            f"{len(thetas)} eigenvalues for diameter {g.diameter}"
        )
    return spectral_from_eigenvalues(g, thetas)


def spectral_from_eigenvalues(g: GraphInstance, thetas) -> SpectralData:
    """Lagrange idempotents and multiplicities for known distinct eigenvalues.

    The eigenvalue list is trusted to be complete (idempotent traces catch a
    wrong one); used both by spectral_data and when rehydrating a cache.
    """
    thetas = tuple(thetas)
    a_int = (g.dist == 1).astype(int).astype(object)
    n = g.vertex_count
    idems = []
    mults = []
    for i, ti in enumerate(thetas):
        num = np.zeros((n, n), dtype=object)
        for r in range(n):
            num[r, r] = 1
        den = 1
        for j, tj in enumerate(thetas):
            if j == i:
                continue
            num = num @ a_int - tj * num
            den *= ti - tj
        e = RationalMatrix(num, den)
        tr = e.trace()
        if tr.denominator != 1 or tr <= 0:
            raise SpectralIntegralityError(f"idempotent trace {tr} not a positive integer")
        idems.append(e)
        mults.append(int(tr))
    return SpectralData(g, thetas, tuple(mults), tuple(idems))


def idempotent(g: GraphInstance, spectral: SpectralData, i: int) -> RationalMatrix:
    """Primitive idempotent onto the i-th eigenspace (0 = Perron)."""
    return spectral.idempotents[i]


def project(spectral: SpectralData, i: int, vec):
    """Orthogonal projection of a coordinate vector onto eigenspace i."""
    return spectral.idempotents[i].apply(vec)


# ---------------------------------------------------------------------------
# closed forms


def closed_form_eigenvalue(family, i: int) -> int:
    if isinstance(family, JohnsonFamily):
        n, k = family.n, family.k
        return (k - i) * (n - k - i) - i
    if isinstance(family, GrassmannFamily):
        q, n, k = family.q, family.n, family.k
        return q ** (i + 1) * q_int(k - i, q) * q_int(n - k - i, q) - q_int(i, q)
    if isinstance(family, HammingFamily):
        return (family.d - i) * family.e - family.d
    if isinstance(family, DualPolarFamily):
        q, d, e = family.q, family.d, family.e
        return q ** e * q_int(d - i, q) - q_int(i, q)
    raise ValueError(f"no closed form for {family!r}")


def closed_form_multiplicity(family, i: int) -> int:
    if isinstance(family, JohnsonFamily):
        n = family.n
        return comb(n, i) - (comb(n, i - 1) if i >= 1 else 0)
    if isinstance(family, GrassmannFamily):
        q, n = family.q, family.n
        return q_binomial(n, i, q) - (q_binomial(n, i - 1, q) if i >= 1 else 0)
    if isinstance(family, HammingFamily):
        return comb(family.d, i) * (family.e - 1) ** i
    if isinstance(family, DualPolarFamily):
        q, d, e = family.q, family.d, family.e
        qf = Fraction(q)
        out = qf ** i * q_binomial(d, i, q)
        out *= (1 + qf ** (d + e - 2 * i)) / (1 + qf ** (d + e - i))
        for j in range(1, i + 1):
            out *= (1 + qf ** (d + e - j)) / (1 + qf ** (j - e))
        assert out.denominator == 1
        return int(out)
    raise ValueError(f"no closed form for {family!r}")
