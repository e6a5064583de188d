"""Cartan and Coxeter data of a finite-dimensional gentle presentation.

Conventions: vertices are ordered as in the presentation, C[u][v] counts
nonzero paths u -> v, and the Coxeter matrix is Phi = -C^{-T} C.  The
characteristic polynomial is computed division free (Berkowitz); floats
appear only in the final spectral-radius step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exceptions import CartanNotUnimodular, NotTriviallyGraded
from .linalg import dense_det, int_inverse_unimodular, mat_mul_int
from .polynomials import IntegerPolynomial, berkowitz_charpoly
from .presentation import GentlePresentation


@dataclass(frozen=True)
class CoxeterData:
    cartan: tuple[tuple[int, ...], ...]
    coxeter: tuple[tuple[int, ...], ...]
    char_poly: IntegerPolynomial
    spectral_radius: float


def cartan_matrix(presentation: GentlePresentation) -> list[list[int]]:
    """C[u][v] = number of basis paths u -> v (diagonal counts e_v)."""
    index = {v: i for i, v in enumerate(presentation.vertices)}
    n = len(presentation.vertices)
    mat = [[0] * n for _ in range(n)]
    for path in presentation.path_basis():
        mat[index[path.source]][index[path.target]] += 1
    return mat


def graded_cartan(presentation: GentlePresentation) -> dict[tuple[str, str], dict[int, int]]:
    """Degree-refined path counts: (u, v) -> {degree: count}."""
    out: dict[tuple[str, str], dict[int, int]] = {}
    for path in presentation.path_basis():
        slot = out.setdefault((path.source, path.target), {})
        slot[path.degree] = slot.get(path.degree, 0) + 1
    return out


def coxeter(presentation: GentlePresentation) -> CoxeterData:
    """Coxeter matrix, exact characteristic polynomial and spectral radius.

    Requires a trivially graded presentation whose Cartan matrix is
    unimodular (equivalently, finite global dimension for gentle algebras).
    """
    if not presentation.is_trivially_graded():
        raise NotTriviallyGraded(
            "Coxeter pipeline needs a trivially graded presentation; "
            "graded inputs route to the surface pipeline")
    c = cartan_matrix(presentation)
    det = dense_det(c)
    if det not in (1, -1):
        raise CartanNotUnimodular(
            f"det C = {det}; the algebra has infinite global dimension")
    cinv = int_inverse_unimodular(c)
    cinv_t = [list(col) for col in zip(*cinv)]
    phi = [[-x for x in row] for row in mat_mul_int(cinv_t, c)]
    char = berkowitz_charpoly(phi)
    rho = char.spectral_radius()
    return CoxeterData(
        cartan=tuple(tuple(row) for row in c),
        coxeter=tuple(tuple(row) for row in phi),
        char_poly=char,
        spectral_radius=rho,
    )


def log_spectral_radius(data: CoxeterData) -> float:
    """Natural log of the spectral radius of the Coxeter matrix."""
    return math.log(data.spectral_radius)
