"""Twisted complexes of projectives over a gentle presentation.

Objects are formal shifted sums of vertex projectives P_v = Ae_v with
path-valued maps.  Conventions, fixed once for the whole engine:

* paths compose left to right: ``compose(p, q)`` traverses p first;
* Hom(P_u, P_v) is spanned by the nonzero paths u -> v;
* a term ``(v, n)`` is P_v placed in cohomological degree ``-n``, and the
  shift functor [k] adds k to every term shift;
* a map component from term i to term j carries paths of internal degree
  ``1 + n_j - n_i`` (twists are degree-one endomorphisms), so with trivial
  grading differentials run from shift n to shift n - 1;
* the Maurer-Cartan identity reads: for all i, k the sum over j of
  ``compose(maps[i, j], maps[j, k])`` vanishes.

Under these conventions ``hom_profile(X, Y)[n] = dim Hom(X, Y[n])`` with
the triangulated shift, and the Serre functor built in ``nakayama`` obeys
S^3 = [1] on the A_2 quiver.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .exceptions import AlgebraMismatch, EmptyComplex, EngineLimitation
from .linalg import dense_nullspace, sparse_rank
from .presentation import GentlePresentation, Path

PathVector = dict[int, Fraction]


class PathAlgebra:
    """Interned path basis of a finite-dimensional presentation."""

    def __init__(self, presentation: GentlePresentation):
        self.presentation = presentation
        self.paths: list[Path] = presentation.path_basis()
        self.index: dict[tuple[str, tuple[str, ...]], int] = {
            (p.source, p.arrows): i for i, p in enumerate(self.paths)}
        self.trivial: dict[str, int] = {
            v: self.index[(v, ())] for v in presentation.vertices}
        self.between: dict[tuple[str, str], list[int]] = {}
        for i, p in enumerate(self.paths):
            self.between.setdefault((p.source, p.target), []).append(i)
        self._compose_table: dict[tuple[int, int], Optional[int]] = {}

    def path(self, i: int) -> Path:
        return self.paths[i]

    def paths_between(self, u: str, v: str) -> list[int]:
        return self.between.get((u, v), [])

    def compose(self, i: int, j: int) -> Optional[int]:
        """Index of path_i followed by path_j, or None if zero."""
        key = (i, j)
        if key in self._compose_table:
            return self._compose_table[key]
        p, q = self.paths[i], self.paths[j]
        result: Optional[int] = None
        if p.target == q.source:
            result = self.index.get((p.source, p.arrows + q.arrows))
        self._compose_table[key] = result
        return result

    def path_id(self, source: str, arrows: Sequence[str]) -> int:
        return self.index[(source, tuple(arrows))]


def pv_add_scaled(target: PathVector, source: PathVector, scale: Fraction) -> None:
    for k, v in source.items():
        new = target.get(k, Fraction(0)) + scale * v
        if new:
            target[k] = new
        else:
            target.pop(k, None)


def pv_compose(algebra: PathAlgebra, first: PathVector, second: PathVector) -> PathVector:
    out: PathVector = {}
    for i, ci in first.items():
        for j, cj in second.items():
            k = algebra.compose(i, j)
            if k is None:
                continue
            new = out.get(k, Fraction(0)) + ci * cj
            if new:
                out[k] = new
            else:
                out.pop(k, None)
    return out


class TwistedComplex:
    """Formal shifted sum of projectives with path-valued twist maps."""

    def __init__(self, algebra: PathAlgebra,
                 terms: Sequence[tuple[str, int]],
                 maps: Mapping[tuple[int, int], PathVector],
                 validate: bool = True):
        self.algebra = algebra
        self.terms = tuple((str(v), int(n)) for v, n in terms)
        self.maps = {key: dict(pv) for key, pv in maps.items() if pv}
        if validate:
            self.validate()

    # -- structure ---------------------------------------------------------

    def validate(self) -> None:
        paths = self.algebra.paths
        for (i, j), pv in self.maps.items():
            vi, ni = self.terms[i]
            vj, nj = self.terms[j]
            for pid, coeff in pv.items():
                p = paths[pid]
                if p.source != vi or p.target != vj:
                    raise ValueError(f"component ({i},{j}) carries a path {p} off its terms")
                if p.degree != 1 + nj - ni:
                    raise ValueError(
                        f"component ({i},{j}): path degree {p.degree} != 1 + {nj} - {ni}")
        defects = self.mc_defect()
        if defects:
            raise ValueError(f"Maurer-Cartan identity fails at {sorted(defects)[:3]} ...")

    def mc_defect(self) -> dict[tuple[int, int], PathVector]:
        out_of: dict[int, list[int]] = {}
        for (i, j) in self.maps:
            out_of.setdefault(i, []).append(j)
        defects: dict[tuple[int, int], PathVector] = {}
        for (i, j), pv in self.maps.items():
            for k in out_of.get(j, []):
                comp = pv_compose(self.algebra, pv, self.maps[(j, k)])
                if comp:
                    slot = defects.setdefault((i, k), {})
                    pv_add_scaled(slot, comp, Fraction(1))
        return {key: pv for key, pv in defects.items() if pv}

    @property
    def num_terms(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def term_multiset(self) -> tuple[tuple[str, int], ...]:
        return tuple(sorted(self.terms))

    def lengths(self) -> tuple[int, int]:
        """(left, right) = (min term shift, max term shift)."""
        if not self.terms:
            raise EmptyComplex("lengths of the zero complex are undefined")
        shifts = [n for _, n in self.terms]
        return min(shifts), max(shifts)

    def is_minimal(self) -> bool:
        for (i, j), pv in self.maps.items():
            v = self.terms[i][0]
            if v == self.terms[j][0] and pv.get(self.algebra.trivial[v]):
                return False
        return True

    # -- functors ------------------------------------------------------------

    def shift(self, k: int) -> "TwistedComplex":
        return TwistedComplex(self.algebra,
                              [(v, n + k) for v, n in self.terms],
                              self.maps, validate=False)

    def direct_sum(self, other: "TwistedComplex") -> "TwistedComplex":
        if other.algebra is not self.algebra:
            raise AlgebraMismatch("direct sum needs a common algebra")
        off = len(self.terms)
        maps = dict(self.maps)
        for (i, j), pv in other.maps.items():
            maps[(i + off, j + off)] = pv
        return TwistedComplex(self.algebra, self.terms + other.terms, maps, validate=False)

    def negated(self) -> "TwistedComplex":
        return TwistedComplex(
            self.algebra, self.terms,
            {key: {p: -c for p, c in pv.items()} for key, pv in self.maps.items()},
            validate=False)


def projective(algebra: PathAlgebra, vertex: str) -> TwistedComplex:
    return TwistedComplex(algebra, [(vertex, 0)], {}, validate=False)


def generator(algebra: PathAlgebra) -> TwistedComplex:
    out = TwistedComplex(algebra, [], {}, validate=False)
    for v in algebra.presentation.vertices:
        out = out.direct_sum(projective(algebra, v))
    return out


def cone(phi: Mapping[tuple[int, int], PathVector],
         source: TwistedComplex, target: TwistedComplex) -> TwistedComplex:
    """Mapping cone of a closed degree-zero map source -> target."""
    shifted = source.shift(1).negated()
    total = shifted.direct_sum(target)
    off = len(source.terms)
    maps = dict(total.maps)
    for (i, j), pv in phi.items():
        if pv:
            maps[(i, j + off)] = dict(pv)
    return TwistedComplex(source.algebra, total.terms, maps)


def pv_inverse(algebra: PathAlgebra, pv: PathVector, vertex: str) -> PathVector:
    """Inverse of c*e_v + (positive-length loops); the loop part is nilpotent."""
    e = algebra.trivial[vertex]
    c = pv.get(e, Fraction(0))
    if not c:
        raise EngineLimitation("component has no identity part; cannot invert")
    nil = {p: -v / c for p, v in pv.items() if p != e}
    inv: PathVector = {e: Fraction(1) / c}
    power: PathVector = {e: Fraction(1)}
    while nil:
        power = pv_compose(algebra, power, nil)
        if not power:
            break
        pv_add_scaled(inv, power, Fraction(1) / c)
    return inv


def minimize(complex_: TwistedComplex) -> TwistedComplex:
    """Gaussian elimination of identity components; homotopy equivalence."""
    algebra = complex_.algebra
    terms = complex_.terms
    maps = {key: dict(pv) for key, pv in complex_.maps.items() if pv}
    alive = set(range(len(terms)))
    out_adj: dict[int, set[int]] = {}
    in_adj: dict[int, set[int]] = {}
    for (i, j) in maps:
        out_adj.setdefault(i, set()).add(j)
        in_adj.setdefault(j, set()).add(i)

    def has_identity(key) -> bool:
        i, j = key
        v = terms[i][0]
        return v == terms[j][0] and bool(maps[key].get(algebra.trivial[v]))

    worklist = [key for key in maps if key[0] != key[1] and has_identity(key)]

    def drop(key):
        if key in maps:
            del maps[key]
            out_adj[key[0]].discard(key[1])
            in_adj[key[1]].discard(key[0])

    while worklist:
        key = worklist.pop()
        i, j = key
        if i not in alive or j not in alive or key not in maps or not has_identity(key):
            continue
        inv = pv_inverse(algebra, maps[key], terms[i][0])
        into_j = [(x, maps[(x, j)]) for x in list(in_adj.get(j, ())) if x != i]
        out_i = [(y, maps[(i, y)]) for y in list(out_adj.get(i, ())) if y != j]
        for x in list(in_adj.get(j, ())):
            drop((x, j))
        for y in list(out_adj.get(i, ())):
            drop((i, y))
        for y in list(out_adj.get(j, ())):
            drop((j, y))
        for x in list(in_adj.get(i, ())):
            drop((x, i))
        alive.discard(i)
        alive.discard(j)
        for x, pv_xj in into_j:
            if x not in alive:
                continue
            left = pv_compose(algebra, pv_xj, inv)
            for y, pv_iy in out_i:
                if y not in alive:
                    continue
                corr = pv_compose(algebra, left, pv_iy)
                if not corr:
                    continue
                slot = maps.get((x, y))
                if slot is None:
                    slot = maps[(x, y)] = {}
                    out_adj.setdefault(x, set()).add(y)
                    in_adj.setdefault(y, set()).add(x)
                pv_add_scaled(slot, corr, Fraction(-1))
                if not slot:
                    drop((x, y))
                elif x != y and has_identity((x, y)):
                    worklist.append((x, y))

    order = sorted(alive)
    renum = {old: new for new, old in enumerate(order)}
    return TwistedComplex(
        complex_.algebra,
        [complex_.terms[i] for i in order],
        {(renum[i], renum[j]): pv for (i, j), pv in maps.items()},
        validate=False)


# -- Hom complexes ---------------------------------------------------------

def hom_complex_basis(x: TwistedComplex, y: TwistedComplex) -> dict[int, list[tuple[int, int, int]]]:
    """Basis of the Hom complex, per degree: triples (i, j, path_id)."""
    if x.algebra is not y.algebra:
        raise AlgebraMismatch("Hom needs a common algebra")
    algebra = x.algebra
    basis: dict[int, list[tuple[int, int, int]]] = {}
    for i, (vi, ni) in enumerate(x.terms):
        for j, (wj, mj) in enumerate(y.terms):
            for pid in algebra.paths_between(vi, wj):
                k = algebra.path(pid).degree - mj + ni
                basis.setdefault(k, []).append((i, j, pid))
    return basis


def hom_differential(x: TwistedComplex, y: TwistedComplex, k: int,
                     basis: dict[int, list[tuple[int, int, int]]]):
    """Sparse matrix of D: Hom^k -> Hom^{k+1}, D(f) = z_y f - (-1)^k f z_x."""
    algebra = x.algebra
    top = {trip: col for col, trip in enumerate(basis.get(k + 1, []))}
    sign = Fraction(-1) if k % 2 == 0 else Fraction(1)
    y_out: dict[int, list[int]] = {}
    for (a, b) in y.maps:
        y_out.setdefault(a, []).append(b)
    x_into: dict[int, list[int]] = {}
    for (a, b) in x.maps:
        x_into.setdefault(b, []).append(a)
    rows = []
    for (i, j, pid) in basis.get(k, []):
        row: dict[int, Fraction] = {}
        for j2 in y_out.get(j, []):
            for qid, c in y.maps[(j, j2)].items():
                rid = algebra.compose(pid, qid)
                if rid is None:
                    continue
                col = top.get((i, j2, rid))
                if col is not None:
                    row[col] = row.get(col, Fraction(0)) + c
        for i2 in x_into.get(i, []):
            for qid, c in x.maps[(i2, i)].items():
                rid = algebra.compose(qid, pid)
                if rid is None:
                    continue
                col = top.get((i2, j, rid))
                if col is not None:
                    row[col] = row.get(col, Fraction(0)) + sign * c
        rows.append({c: v for c, v in row.items() if v})
    return rows


def hom_profile(x: TwistedComplex, y: TwistedComplex) -> dict[int, int]:
    """dim Hom(X, Y[n]) for every n, exact cohomology of the Hom complex."""
    basis = hom_complex_basis(x, y)
    if not basis:
        return {}
    ranks: dict[int, int] = {}
    lo, hi = min(basis), max(basis)
    for k in range(lo - 1, hi + 1):
        if basis.get(k) and basis.get(k + 1):
            ranks[k] = sparse_rank(hom_differential(x, y, k, basis))
        else:
            ranks[k] = 0
    profile = {}
    for k in range(lo, hi + 1):
        dim = len(basis.get(k, [])) - ranks.get(k, 0) - ranks.get(k - 1, 0)
        if dim:
            profile[k] = dim
    assert all(d > 0 for d in profile.values())
    return profile


def hom_total_dim(profile: Mapping[int, int]) -> int:
    return sum(profile.values())


# -- isomorphism testing ---------------------------------------------------

def closed_degree_zero_maps(x: TwistedComplex, y: TwistedComplex
                            ) -> tuple[list[tuple[int, int, int]], list[list[Fraction]]]:
    """Basis triples of Hom^0 and a basis of the closed maps, as coefficient vectors."""
    basis = hom_complex_basis(x, y)
    slots = basis.get(0, [])
    if not slots:
        return [], []
    rows = hom_differential(x, y, 0, basis)
    ncols = len(basis.get(1, []))
    dense = [[Fraction(0)] * len(slots) for _ in range(ncols)]
    for r, row in enumerate(rows):
        for c, v in row.items():
            dense[c][r] = v
    kernel = dense_nullspace(dense, len(slots))
    return slots, kernel


def find_isomorphism(x: TwistedComplex, y: TwistedComplex,
                     attempts: int = 40, seed: int = 7):
    """A closed degree-zero map with invertible identity part, or None.

    Both complexes are assumed minimal.  A morphism of minimal twisted
    complexes is invertible iff it is invertible modulo positive-length
    paths, i.e. iff the scalar blocks of trivial-path coefficients between
    equal (vertex, shift) term groups are all nonsingular.
    """
    if x.algebra is not y.algebra:
        raise AlgebraMismatch("isomorphism test needs a common algebra")
    if x.term_multiset() != y.term_multiset():
        return None
    if x.is_zero():
        return {}
    slots, kernel = closed_degree_zero_maps(x, y)
    if not kernel:
        return None
    groups: dict[tuple[str, int], tuple[list[int], list[int]]] = {}
    for i, t in enumerate(x.terms):
        groups.setdefault(t, ([], []))[0].append(i)
    for j, t in enumerate(y.terms):
        groups.setdefault(t, ([], []))[1].append(j)
    trivial_slot: dict[tuple[int, int], int] = {}
    for col, (i, j, pid) in enumerate(slots):
        if pid == x.algebra.trivial[x.terms[i][0]] and x.terms[i] == y.terms[j]:
            trivial_slot[(i, j)] = col

    def invertible(vec: Sequence[Fraction]) -> bool:
        for (xs, ys) in groups.values():
            block = [[vec[trivial_slot[(i, j)]] if (i, j) in trivial_slot else Fraction(0)
                      for j in ys] for i in xs]
            if _fraction_det(block) == 0:
                return False
        return True

    candidates: list[list[Fraction]] = []
    candidates.extend(kernel)
    candidates.append([sum(col) for col in zip(*kernel)])
    rng = random.Random(seed)
    for _ in range(attempts):
        coeffs = [Fraction(rng.randint(-999983, 999983)) for _ in kernel]
        candidates.append([sum(c * v for c, v in zip(coeffs, col)) for col in zip(*kernel)])
    for vec in candidates:
        if invertible(vec):
            return {slots[c]: vec[c] for c in range(len(slots)) if vec[c]}
    return None


def is_isomorphic(x: TwistedComplex, y: TwistedComplex) -> bool:
    return find_isomorphism(x, y) is not None


def _fraction_det(matrix: list[list[Fraction]]) -> Fraction:
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    m = [row[:] for row in matrix]
    det = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if m[r][c]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        inv = Fraction(1) / m[c][c]
        for r in range(c + 1, n):
            if m[r][c]:
                f = m[r][c] * inv
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


# -- random objects for property tests --------------------------------------

def random_complex(algebra: PathAlgebra, rng: random.Random,
                   cones: int = 2, shift_range: int = 2) -> TwistedComplex:
    """Iterated cones of random closed maps between shifted projectives."""
    verts = algebra.presentation.vertices
    out = projective(algebra, rng.choice(verts)).shift(rng.randint(-shift_range, shift_range))
    for _ in range(cones):
        other = projective(algebra, rng.choice(verts)).shift(rng.randint(-shift_range, shift_range))
        if rng.random() < 0.5:
            src, dst = out, other
        else:
            src, dst = other, out
        slots, kernel = closed_degree_zero_maps(src, dst)
        if kernel and rng.random() < 0.9:
            coeffs = [Fraction(rng.randint(-3, 3)) for _ in kernel]
            vec = [sum(c * v for c, v in zip(coeffs, col)) for col in zip(*kernel)]
            phi: dict[tuple[int, int], PathVector] = {}
            for col, (i, j, pid) in enumerate(slots):
                if vec[col]:
                    phi.setdefault((i, j), {})[pid] = vec[col]
            out = minimize(cone(phi, src, dst))
        else:
            out = out.direct_sum(other)
        if out.is_zero():
            out = projective(algebra, rng.choice(verts))
    return out
