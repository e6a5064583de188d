"""Exact integer polynomials and the spectral data derived from them.

Coefficients are stored low degree first.  Everything except the final root
finding is integer or rational arithmetic; floats only enter when the
characteristic polynomial is handed to the numerical root solver.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exceptions import NotPolynomial


class IntegerPolynomial:
    """Polynomial with exact integer coefficients, low degree first."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable[int]):
        coeffs = [int(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coefficients = tuple(coeffs)

    # -- basic structure ----------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1 by convention."""
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def __eq__(self, other) -> bool:
        return isinstance(other, IntegerPolynomial) and self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def __repr__(self) -> str:
        return f"IntegerPolynomial({list(self.coefficients)})"

    def pretty(self, var: str = "t") -> str:
        if self.is_zero():
            return "0"
        out = []
        for i in range(self.degree, -1, -1):
            c = self.coefficients[i]
            if c == 0:
                continue
            mono = var + (f"^{i}" if i > 1 else "") if i > 0 else ""
            mag = abs(c)
            coef = "" if (mag == 1 and i > 0) else str(mag) + ("*" if i > 0 else "")
            piece = coef + mono
            if not out:
                out.append(("-" if c < 0 else "") + piece)
            else:
                out.append((" - " if c < 0 else " + ") + piece)
        return "".join(out)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "IntegerPolynomial") -> "IntegerPolynomial":
        n = max(len(self.coefficients), len(other.coefficients))
        a = list(self.coefficients) + [0] * (n - len(self.coefficients))
        b = list(other.coefficients) + [0] * (n - len(other.coefficients))
        return IntegerPolynomial(x + y for x, y in zip(a, b))

    def __neg__(self) -> "IntegerPolynomial":
        return IntegerPolynomial(-c for c in self.coefficients)

    def __sub__(self, other: "IntegerPolynomial") -> "IntegerPolynomial":
        return self + (-other)

    def __mul__(self, other: "IntegerPolynomial") -> "IntegerPolynomial":
        if self.is_zero() or other.is_zero():
            return IntegerPolynomial([])
        out = [0] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coefficients):
            if a == 0:
                continue
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return IntegerPolynomial(out)

    def __pow__(self, k: int) -> "IntegerPolynomial":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = IntegerPolynomial([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def exact_div(self, other: "IntegerPolynomial") -> "IntegerPolynomial":
        """Divide exactly over the integers; raise NotPolynomial otherwise."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return IntegerPolynomial([])
        rem = list(self.coefficients)
        div = other.coefficients
        lead = div[-1]
        out = [0] * (len(rem) - len(div) + 1)
        if len(out) <= 0:
            raise NotPolynomial("degree of divisor exceeds degree of dividend")
        for k in range(len(out) - 1, -1, -1):
            c = rem[k + len(div) - 1]
            if c % lead != 0:
                raise NotPolynomial("division leaves a fractional coefficient")
            q = c // lead
            out[k] = q
            if q:
                for j, d in enumerate(div):
                    rem[k + j] -= q * d
        if any(rem):
            raise NotPolynomial("division leaves a nonzero remainder")
        return IntegerPolynomial(out)

    def evaluate(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def derivative(self) -> "IntegerPolynomial":
        return IntegerPolynomial(i * c for i, c in enumerate(self.coefficients) if i > 0)

    # -- spectral helpers ---------------------------------------------------

    def squarefree_part(self) -> "IntegerPolynomial":
        """p / gcd(p, p'), up to sign; same root set with multiplicity one."""
        if self.degree <= 0:
            return IntegerPolynomial(self.coefficients)
        g = _poly_gcd_q(self.coefficients, self.derivative().coefficients)
        if len(g) == 1:
            return IntegerPolynomial(self.coefficients)
        num = _poly_div_q([Fraction(c) for c in self.coefficients], g)
        return _clear_denominators(num)

    def root_moduli(self) -> list[float]:
        """Moduli of the distinct complex roots, via the squarefree part."""
        sf = self.squarefree_part()
        if sf.degree <= 0:
            return []
        coeffs = [float(c) for c in reversed(sf.coefficients)]
        roots = np.roots(coeffs)
        roots = _polish_roots(sf, roots)
        return [abs(r) for r in roots]

    def spectral_radius(self) -> float:
        moduli = self.root_moduli()
        return max(moduli) if moduli else 0.0


def _poly_gcd_q(a: Sequence[int], b: Sequence[int]) -> list[Fraction]:
    """Monic gcd over the rationals, returned as a Fraction coefficient list."""
    fa = [Fraction(c) for c in a]
    fb = [Fraction(c) for c in b]
    while any(fb):
        fa, fb = fb, _poly_mod_q(fa, fb)
    while fa and fa[-1] == 0:
        fa.pop()
    if not fa:
        return [Fraction(1)]
    lead = fa[-1]
    return [c / lead for c in fa]


def _poly_mod_q(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    rem = list(a)
    while rem and rem[-1] == 0:
        rem.pop()
    bb = list(b)
    while bb and bb[-1] == 0:
        bb.pop()
    lead = bb[-1]
    while len(rem) >= len(bb):
        q = rem[-1] / lead
        off = len(rem) - len(bb)
        for j, d in enumerate(bb):
            rem[off + j] -= q * d
        rem.pop()
        while rem and rem[-1] == 0:
            rem.pop()
    return rem


def _poly_div_q(a: list[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    rem = list(a)
    bb = list(b)
    lead = bb[-1]
    out = [Fraction(0)] * (len(rem) - len(bb) + 1)
    for k in range(len(out) - 1, -1, -1):
        q = rem[k + len(bb) - 1] / lead
        out[k] = q
        if q:
            for j, d in enumerate(bb):
                rem[k + j] -= q * d
    assert not any(rem), "quotient by a non-divisor"
    return out


def _clear_denominators(coeffs: list[Fraction]) -> IntegerPolynomial:
    from math import lcm

    denom = 1
    for c in coeffs:
        denom = lcm(denom, c.denominator)
    return IntegerPolynomial(int(c * denom) for c in coeffs)


def _polish_roots(poly: IntegerPolynomial, roots: np.ndarray) -> np.ndarray:
    """A few Newton steps against the exact polynomial; roots are simple."""
    deriv = poly.derivative()
    p = [complex(c) for c in reversed(poly.coefficients)]
    dp = [complex(c) for c in reversed(deriv.coefficients)]
    out = []
    for r in roots:
        z = complex(r)
        for _ in range(6):
            fv = _horner(p, z)
            dv = _horner(dp, z)
            if dv == 0:
                break
            step = fv / dv
            z = z - step
            if abs(step) < 1e-15 * max(1.0, abs(z)):
                break
        out.append(z)
    return np.asarray(out)


def _horner(coeffs_high_first: list[complex], z: complex) -> complex:
    acc = 0j
    for c in coeffs_high_first:
        acc = acc * z + c
    return acc


def berkowitz_charpoly(matrix: Sequence[Sequence[int]]) -> IntegerPolynomial:
    """Characteristic polynomial det(tI - A), division free (Berkowitz).

    Exact over the integers for an integer matrix.
    """
    n = len(matrix)
    for row in matrix:
        if len(row) != n:
            raise ValueError("characteristic polynomial needs a square matrix")
    vec = _berkowitz_vector([[int(x) for x in row] for row in matrix])
    # vec is [1, c_{n-1}, ..., c_0] for t^n + c_{n-1} t^{n-1} + ... + c_0
    return IntegerPolynomial(list(reversed(vec)))


def _berkowitz_vector(a: list[list[int]]) -> list[int]:
    n = len(a)
    if n == 0:
        return [1]
    if n == 1:
        return [1, -a[0][0]]
    diag = a[0][0]
    row = a[0][1:]
    col = [a[i][0] for i in range(1, n)]
    sub = [a[i][1:] for i in range(1, n)]
    # Toeplitz column: [1, -a00, -R C, -R A C, -R A^2 C, ...]
    toeplitz = [1, -diag]
    t = col
    for i in range(n - 1):
        toeplitz.append(-sum(r * c for r, c in zip(row, t)))
        if i < n - 2:
            t = [sum(sub[j][k] * t[k] for k in range(n - 1)) for j in range(n - 1)]
    prev = _berkowitz_vector(sub)  # length n
    out = [0] * (n + 1)
    for i in range(n + 1):
        s = 0
        for j in range(len(prev)):
            k = i - j
            if 0 <= k < len(toeplitz):
                s += toeplitz[k] * prev[j]
        out[i] = s
    return out
