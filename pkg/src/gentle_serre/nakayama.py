"""Serre functor and Auslander-Reiten translate on twisted complexes.

The Serre functor is realised as the derived Nakayama functor: every
projective P_v is replaced by a precomputed minimal perfect replacement of
its Nakayama image, the injective I_v = D(e_v A), obtained from iterated
projective covers of syzygies in the category of graded modules.  A twisted
complex is then transported by lifting its path-valued twists through the
replacements and totalizing; the quadratic Maurer-Cartan defect that chain
lifts can leave behind (lifted relation products are only null-homotopic,
not zero) is repaired by explicit homotopy corrections before minimizing.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .exceptions import EngineLimitation, InfiniteGlobalDimension
from .linalg import dense_solve
from .presentation import GentlePresentation
from .twisted import (PathAlgebra, PathVector, TwistedComplex, minimize,
                      pv_add_scaled, pv_compose)


class _FactoredSolver:
    """Reusable exact solver for A x = b with A fixed: row reduce once."""

    def __init__(self, matrix: list[list[Fraction]], ncols: int):
        nrows = len(matrix)
        self.ncols = ncols
        self.nrows = nrows
        rows = [list(r) + [Fraction(1) if i == j else Fraction(0) for j in range(nrows)]
                for i, r in enumerate(matrix)]
        pivot_of_col: dict[int, int] = {}
        r = 0
        for c in range(ncols):
            pr = next((i for i in range(r, nrows) if rows[i][c]), None)
            if pr is None:
                continue
            rows[r], rows[pr] = rows[pr], rows[r]
            pv = rows[r][c]
            rows[r] = [x / pv for x in rows[r]]
            for i in range(nrows):
                if i != r and rows[i][c]:
                    f = rows[i][c]
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
            pivot_of_col[c] = r
            r += 1
            if r == nrows:
                break
        self.rank = r
        self.pivot_of_col = pivot_of_col
        # transform columns: E[:, k] for sparse right-hand sides
        self.e_cols = [[rows[i][ncols + k] for i in range(nrows)] for k in range(nrows)]

    def solve(self, rhs: dict[int, Fraction]) -> list[Fraction] | None:
        c = [Fraction(0)] * self.nrows
        for k, v in rhs.items():
            if not v:
                continue
            col = self.e_cols[k]
            for i in range(self.nrows):
                if col[i]:
                    c[i] += v * col[i]
        for i in range(self.rank, self.nrows):
            if c[i]:
                return None
        x = [Fraction(0)] * self.ncols
        for col, row in self.pivot_of_col.items():
            x[col] = c[row]
        return x

Vec = dict[int, Fraction]           # module element over an indexed basis
CoordVec = dict[tuple[int, int], Fraction]  # free cover element: (summand, path_id)


class _Injective:
    """I_v = D(e_v A): basis p* for paths p starting at v."""

    def __init__(self, algebra: PathAlgebra, vertex: str):
        self.algebra = algebra
        self.vertex = vertex
        self.basis: list[int] = [pid for pid, p in enumerate(algebra.paths)
                                 if p.source == vertex]
        self.pos = {pid: i for i, pid in enumerate(self.basis)}

    def block(self, i: int) -> tuple[str, int]:
        p = self.algebra.path(self.basis[i])
        return p.target, -p.degree

    def act_arrow(self, arrow: str, i: int) -> Optional[int]:
        """Index of arrow . p* = (p with its last arrow removed)* or None."""
        p = self.algebra.path(self.basis[i])
        if p.arrows and p.arrows[-1] == arrow:
            shorter = self.algebra.index.get((p.source, p.arrows[:-1]))
            if shorter is not None:
                return self.pos[shorter]
        return None

    def top(self) -> list[int]:
        """Indices of p* for right-inextensible p; a basis of I_v / rad I_v."""
        in_rad = set()
        for a in self.algebra.presentation.arrows:
            for i in range(len(self.basis)):
                j = self.act_arrow(a.name, i)
                if j is not None:
                    in_rad.add(j)
        return [i for i in range(len(self.basis)) if i not in in_rad]


class _FreeCover:
    """Free graded module ⊕_k P_{t_k} with generator degrees g_k."""

    def __init__(self, algebra: PathAlgebra, summands: list[tuple[str, int]]):
        self.algebra = algebra
        self.summands = summands
        self.coords: list[tuple[int, int]] = []
        for k, (t, _g) in enumerate(summands):
            for pid, p in enumerate(algebra.paths):
                if p.target == t:
                    self.coords.append((k, pid))
        self.coord_pos = {c: i for i, c in enumerate(self.coords)}

    def block(self, coord: tuple[int, int]) -> tuple[str, int]:
        k, pid = coord
        p = self.algebra.path(pid)
        return p.source, p.degree + self.summands[k][1]

    def prepend(self, vec: CoordVec, arrow_pid: int) -> CoordVec:
        out: CoordVec = {}
        for (k, pid), c in vec.items():
            rid = self.algebra.compose(arrow_pid, pid)
            if rid is not None:
                key = (k, rid)
                new = out.get(key, Fraction(0)) + c
                if new:
                    out[key] = new
                else:
                    out.pop(key, None)
        return out

    def prepend_path(self, vec: CoordVec, pid: int) -> CoordVec:
        path = self.algebra.path(pid)
        out = vec
        for name in reversed(path.arrows):
            apid = self.algebra.path_id(self.algebra.presentation.arrow_by_name[name].source,
                                        (name,))
            out = self.prepend(out, apid)
        return out


class Resolution:
    """Minimal projective resolution of one injective, with cover data."""

    def __init__(self, vertex: str, covers: list[_FreeCover],
                 diff: list[dict[tuple[int, int], PathVector]],
                 eps_images: list[Vec], injective: _Injective,
                 algebra: PathAlgebra):
        self.vertex = vertex
        self.covers = covers                    # one free cover per step
        self.diff = diff                        # diff[s]: gens of step s+1 -> step s
        self.eps_images = eps_images            # step-0 generator images in I_v
        self.injective = injective
        self.algebra = algebra
        self.terms: list[tuple[str, int]] = []
        self.steps: list[int] = []
        self.gen_of_term: list[tuple[int, int]] = []
        self.term_of_gen: dict[tuple[int, int], int] = {}
        for s, cover in enumerate(covers):
            for k, (t, g) in enumerate(cover.summands):
                self.term_of_gen[(s, k)] = len(self.terms)
                self.gen_of_term.append((s, k))
                self.terms.append((t, s - g))
                self.steps.append(s)
        maps: dict[tuple[int, int], PathVector] = {}
        for s, entries in enumerate(diff):
            for (k_src, k_dst), pv in entries.items():
                maps[(self.term_of_gen[(s + 1, k_src)],
                      self.term_of_gen[(s, k_dst)])] = pv
        self.complex = TwistedComplex(algebra, self.terms, maps, validate=True)


BlockMap = dict[tuple[int, int], PathVector]   # (source term, target term) -> paths


class NakayamaEngine:
    """Per-algebra cache of injective replacements and twist lifts."""

    def __init__(self, algebra: PathAlgebra, cutoff: int = 64):
        self.algebra = algebra
        self.cutoff = cutoff
        self._resolutions: dict[str, Resolution] = {}
        self._arrow_lifts: dict[str, BlockMap] = {}
        self._path_lifts: dict[int, BlockMap] = {}
        self._eps_blocks: dict[tuple[str, str, int], tuple] = {}
        self._diff_blocks: dict[tuple[str, int, str, int], tuple] = {}
        self._pair_corrections: dict[tuple[int, int], BlockMap] = {}
        self._homotopy_solvers: dict[tuple[str, str, int], tuple] = {}

    # -- resolutions --------------------------------------------------------

    def resolution(self, vertex: str) -> Resolution:
        if vertex not in self._resolutions:
            self._resolutions[vertex] = self._resolve(vertex)
        return self._resolutions[vertex]

    def _resolve(self, vertex: str) -> Resolution:
        algebra = self.algebra
        inj = _Injective(algebra, vertex)
        top = inj.top()
        summands = []
        eps_images: list[Vec] = []
        for i in top:
            t, g = inj.block(i)
            summands.append((t, g))
            eps_images.append({i: Fraction(1)})
        cover0 = _FreeCover(algebra, summands)
        covers = [cover0]
        diff: list[dict[tuple[int, int], PathVector]] = []

        def eps(vec: CoordVec) -> Vec:
            out: Vec = {}
            for (k, pid), c in vec.items():
                img = self._act_path_injective(inj, pid, eps_images[k])
                pv_add_scaled(out, img, c)
            return out

        kernel = self._kernel_of(cover0, eps)
        step = 0
        while kernel:
            step += 1
            if step > self.cutoff:
                raise InfiniteGlobalDimension(
                    f"resolution of the injective at {vertex!r} exceeds {self.cutoff} steps")
            prev_cover = covers[-1]
            gens = self._top_of_submodule(prev_cover, kernel)
            new_summands = []
            entries: dict[tuple[int, int], PathVector] = {}
            for g_idx, vec in enumerate(gens):
                v_blk, d_blk = prev_cover.block(next(iter(vec)))
                new_summands.append((v_blk, d_blk))
                for (k, pid), c in vec.items():
                    slot = entries.setdefault((g_idx, k), {})
                    slot[pid] = slot.get(pid, Fraction(0)) + c
            cover = _FreeCover(algebra, new_summands)
            covers.append(cover)
            diff.append({key: {p: c for p, c in pv.items() if c} for key, pv in entries.items()})

            def dmap(vec: CoordVec, gens=gens, prev=prev_cover) -> CoordVec:
                out: CoordVec = {}
                for (k, pid), c in vec.items():
                    img = prev.prepend_path(gens[k], pid)
                    for key, val in img.items():
                        new = out.get(key, Fraction(0)) + c * val
                        if new:
                            out[key] = new
                        else:
                            out.pop(key, None)
                return out

            kernel = self._kernel_of_free(cover, prev_cover, dmap)
        return Resolution(vertex, covers, diff, eps_images, inj, algebra)

    def _act_path_injective(self, inj: _Injective, pid: int, vec: Vec) -> Vec:
        path = self.algebra.path(pid)
        current = dict(vec)
        for name in reversed(path.arrows):
            nxt: Vec = {}
            for i, c in current.items():
                j = inj.act_arrow(name, i)
                if j is not None:
                    nxt[j] = nxt.get(j, Fraction(0)) + c
            current = nxt
            if not current:
                break
        return current

    def _kernel_of(self, cover: _FreeCover, image_fn) -> list[CoordVec]:
        """Kernel of cover -> injective, block by block, as coordinate vectors."""
        by_block: dict[tuple[str, int], list[int]] = {}
        for idx, coord in enumerate(cover.coords):
            by_block.setdefault(cover.block(coord), []).append(idx)
        kernel: list[CoordVec] = []
        for block, cols in sorted(by_block.items()):
            images = []
            for idx in cols:
                vec = image_fn({cover.coords[idx]: Fraction(1)})
                images.append(vec)
            kernel.extend(self._nullspace_from_images(cover, cols, images))
        return kernel

    def _kernel_of_free(self, cover: _FreeCover, prev: _FreeCover, dmap) -> list[CoordVec]:
        by_block: dict[tuple[str, int], list[int]] = {}
        for idx, coord in enumerate(cover.coords):
            by_block.setdefault(cover.block(coord), []).append(idx)
        kernel: list[CoordVec] = []
        for block, cols in sorted(by_block.items()):
            images = [dmap({cover.coords[idx]: Fraction(1)}) for idx in cols]
            kernel.extend(self._nullspace_from_images(cover, cols, images))
        return kernel

    @staticmethod
    def _nullspace_from_images(cover: _FreeCover, cols: list[int], images) -> list[CoordVec]:
        rows_index: dict = {}
        for img in images:
            for key in img:
                rows_index.setdefault(key, len(rows_index))
        matrix = [[Fraction(0)] * len(cols) for _ in range(len(rows_index))]
        for c, img in enumerate(images):
            for key, val in img.items():
                matrix[rows_index[key]][c] = val
        from .linalg import dense_nullspace
        null = dense_nullspace(matrix, len(cols))
        out = []
        for vec in null:
            coord_vec: CoordVec = {cover.coords[cols[c]]: v for c, v in enumerate(vec) if v}
            out.append(coord_vec)
        return out

    def _top_of_submodule(self, cover: _FreeCover, kernel: list[CoordVec]) -> list[CoordVec]:
        """Generators of K / rad K: kernel vectors independent mod arrow images."""
        arrow_pids = [self.algebra.path_id(a.source, (a.name,))
                      for a in self.algebra.presentation.arrows]
        rad_vectors: list[CoordVec] = []
        for vec in kernel:
            for apid in arrow_pids:
                img = cover.prepend(vec, apid)
                if img:
                    rad_vectors.append(img)
        index: dict = {}
        for vec in kernel + rad_vectors:
            for key in vec:
                index.setdefault(key, len(index))

        # row reduce rad first, then keep kernel vectors adding new pivots
        pivots: dict[int, dict[int, Fraction]] = {}

        def reduce(vec: CoordVec) -> dict[int, Fraction]:
            row = {index[key]: val for key, val in vec.items()}
            while row:
                lead = min(row)
                if lead not in pivots:
                    return row
                piv = pivots[lead]
                f = row[lead] / piv[lead]
                for c, v in piv.items():
                    new = row.get(c, Fraction(0)) - f * v
                    if new:
                        row[c] = new
                    else:
                        row.pop(c, None)
            return {}

        for vec in rad_vectors:
            row = reduce(vec)
            if row:
                pivots[min(row)] = row
        gens = []
        for vec in kernel:
            row = reduce(vec)
            if row:
                pivots[min(row)] = row
                gens.append(vec)
        for vec in gens:
            for (k, pid) in vec:
                assert self.algebra.path(pid).arrows, "cover is not minimal"
        return gens

    # -- lifting ------------------------------------------------------------

    def _solve_eps(self, res: Resolution, target: Vec) -> CoordVec:
        """y in Q_0 with eps(y) = target, deterministic solution."""
        if not target:
            return {}
        inj = res.injective
        cover = res.covers[0]
        blk = inj.block(next(iter(target)))
        key = (res.vertex, blk[0], blk[1])
        if key not in self._eps_blocks:
            cols = [idx for idx, coord in enumerate(cover.coords)
                    if cover.block(coord) == blk]
            rows = [i for i in range(len(inj.basis)) if inj.block(i) == blk]
            rowpos = {r: i for i, r in enumerate(rows)}
            matrix = [[Fraction(0)] * len(cols) for _ in rows]
            for c, idx in enumerate(cols):
                k, pid = cover.coords[idx]
                img = self._act_path_injective(inj, pid, res.eps_images[k])
                for r, val in img.items():
                    matrix[rowpos[r]][c] = val
            self._eps_blocks[key] = (cols, rowpos, matrix)
        cols, rowpos, matrix = self._eps_blocks[key]
        rhs = [Fraction(0)] * len(rowpos)
        for r, val in target.items():
            rhs[rowpos[r]] = val
        sol = dense_solve(matrix, rhs)
        if sol is None:
            raise EngineLimitation("cover preimage does not exist")
        return {cover.coords[cols[c]]: v for c, v in enumerate(sol) if v}

    def _solve_diff(self, res: Resolution, step: int, target: CoordVec) -> CoordVec:
        """y in Q_step with d(y) = target in Q_{step-1}."""
        if not target:
            return {}
        if step >= len(res.covers):
            raise EngineLimitation("lift needs a deeper resolution step than exists")
        cover = res.covers[step]
        prev = res.covers[step - 1]
        blk = prev.block(next(iter(target)))
        key = (res.vertex, step, blk[0], blk[1])
        if key not in self._diff_blocks:
            cols = [idx for idx, coord in enumerate(cover.coords)
                    if cover.block(coord) == blk]
            entries = res.diff[step - 1]
            gen_images: list[CoordVec] = []
            for k in range(len(cover.summands)):
                img: CoordVec = {}
                for (k_src, k_dst), pv in entries.items():
                    if k_src != k:
                        continue
                    for pid, c in pv.items():
                        keyc = (k_dst, pid)
                        img[keyc] = img.get(keyc, Fraction(0)) + c
                gen_images.append(img)
            rowpos: dict = {}
            columns = []
            for idx in cols:
                k, pid = cover.coords[idx]
                img = prev.prepend_path(gen_images[k], pid)
                columns.append(img)
                for keyc in img:
                    rowpos.setdefault(keyc, len(rowpos))
            matrix = [[Fraction(0)] * len(cols) for _ in range(len(rowpos))]
            for c, img in enumerate(columns):
                for keyc, val in img.items():
                    matrix[rowpos[keyc]][c] = val
            self._diff_blocks[key] = (cols, rowpos, matrix)
        cols, rowpos, matrix = self._diff_blocks[key]
        rhs = [Fraction(0)] * len(rowpos)
        for keyc, val in target.items():
            if keyc not in rowpos:
                raise EngineLimitation("syzygy preimage does not exist")
            rhs[rowpos[keyc]] = val
        sol = dense_solve(matrix, rhs)
        if sol is None:
            raise EngineLimitation("syzygy preimage does not exist")
        return {cover.coords[cols[c]]: v for c, v in enumerate(sol) if v}

    def arrow_lift(self, name: str) -> BlockMap:
        """Chain lift of the Nakayama image of one arrow, depth preserving."""
        if name in self._arrow_lifts:
            return self._arrow_lifts[name]
        arrow = self.algebra.presentation.arrow_by_name[name]
        res_u = self.resolution(arrow.source)
        res_w = self.resolution(arrow.target)
        lift: BlockMap = {}
        # gen-level images of the lift at each step: gen (s, k) -> CoordVec in Q_s(R_w)
        gen_images: dict[tuple[int, int], CoordVec] = {}
        for k in range(len(res_u.covers[0].summands)):
            nu_image = self._nu_arrow(name, res_u.injective, res_w.injective,
                                      res_u.eps_images[k])
            gen_images[(0, k)] = self._solve_eps(res_w, nu_image)
        for s in range(1, len(res_u.covers)):
            entries = res_u.diff[s - 1]
            for k in range(len(res_u.covers[s].summands)):
                target: CoordVec = {}
                for (k_src, k_dst), pv in entries.items():
                    if k_src != k:
                        continue
                    base = gen_images[(s - 1, k_dst)]
                    if not base:
                        continue
                    for pid, c in pv.items():
                        img = res_w.covers[s - 1].prepend_path(base, pid)
                        for keyc, val in img.items():
                            new = target.get(keyc, Fraction(0)) + c * val
                            if new:
                                target[keyc] = new
                            else:
                                target.pop(keyc, None)
                gen_images[(s, k)] = self._solve_diff(res_w, s, target) if target else {}
        for (s, k), vec in gen_images.items():
            src_term = res_u.term_of_gen[(s, k)]
            for (j, pid), c in vec.items():
                dst_term = res_w.term_of_gen[(s, j)]
                slot = lift.setdefault((src_term, dst_term), {})
                slot[pid] = slot.get(pid, Fraction(0)) + c
        lift = {key: {p: c for p, c in pv.items() if c} for key, pv in lift.items()}
        lift = {key: pv for key, pv in lift.items() if pv}
        self._arrow_lifts[name] = lift
        return lift

    def _nu_arrow(self, name: str, inj_u: _Injective, inj_w: _Injective, vec: Vec) -> Vec:
        """Nakayama image of an arrow: p* -> (p with leading arrow removed)*."""
        out: Vec = {}
        for i, c in vec.items():
            p = self.algebra.path(inj_u.basis[i])
            if p.arrows and p.arrows[0] == name:
                shorter = self.algebra.index.get(
                    (self.algebra.presentation.arrow_by_name[name].target, p.arrows[1:]))
                if shorter is not None:
                    j = inj_w.pos[shorter]
                    out[j] = out.get(j, Fraction(0)) + c
        return out

    def path_lift(self, pid: int) -> BlockMap:
        if pid in self._path_lifts:
            return self._path_lifts[pid]
        path = self.algebra.path(pid)
        if not path.arrows:
            res = self.resolution(path.source)
            lift = {(t, t): {self.algebra.trivial[res.terms[t][0]]: Fraction(1)}
                    for t in range(len(res.terms))}
        else:
            lift = self.arrow_lift(path.arrows[0])
            for name in path.arrows[1:]:
                lift = self._compose_block_maps(lift, self.arrow_lift(name))
        self._path_lifts[pid] = lift
        return lift

    def _compose_block_maps(self, first: BlockMap, second: BlockMap) -> BlockMap:
        out: BlockMap = {}
        for (a, b), pv1 in first.items():
            for (b2, c), pv2 in second.items():
                if b2 != b:
                    continue
                comp = pv_compose(self.algebra, pv1, pv2)
                if comp:
                    slot = out.setdefault((a, c), {})
                    pv_add_scaled(slot, comp, Fraction(1))
        return {key: pv for key, pv in out.items() if pv}

    # -- homotopy corrections for zero products -----------------------------

    def _homotopy_solver(self, vu: str, vw: str, deg_total: int):
        """Factored system for C with D C + C D = rhs between R_vu and R_vw.

        Unknown slots carry paths of degree m_c - m_a + deg_total - 1; rhs
        slots have degree m_c - m_a + deg_total, where m are the local term
        shifts of the two resolutions.
        """
        key = (vu, vw, deg_total)
        if key in self._homotopy_solvers:
            return self._homotopy_solvers[key]
        algebra = self.algebra
        res_u, res_w = self.resolution(vu), self.resolution(vw)
        unknowns: list[tuple[int, int, int]] = []
        for a, (va, ma) in enumerate(res_u.terms):
            for c, (vc, mc) in enumerate(res_w.terms):
                want = mc - ma + deg_total - 1
                for pid in algebra.paths_between(va, vc):
                    if algebra.path(pid).degree == want:
                        unknowns.append((a, c, pid))
        row_index: dict[tuple[int, int, int], int] = {}
        for a, (va, ma) in enumerate(res_u.terms):
            for c, (vc, mc) in enumerate(res_w.terms):
                want = mc - ma + deg_total
                for rid in algebra.paths_between(va, vc):
                    if algebra.path(rid).degree == want:
                        row_index[(a, c, rid)] = len(row_index)
        matrix = [[Fraction(0)] * len(unknowns) for _ in range(len(row_index))]
        for col, (b, c, pid) in enumerate(unknowns):
            for (a, b2), pv in res_u.complex.maps.items():
                if b2 != b:
                    continue
                for qid, cq in pv.items():
                    rid = algebra.compose(qid, pid)
                    if rid is not None:
                        matrix[row_index[(a, c, rid)]][col] += cq
            for (c2, c3), pv in res_w.complex.maps.items():
                if c2 != c:
                    continue
                for qid, cq in pv.items():
                    rid = algebra.compose(pid, qid)
                    if rid is not None:
                        matrix[row_index[(b, c3, rid)]][col] += cq
        solver = _FactoredSolver(matrix, len(unknowns))
        value = (unknowns, row_index, solver)
        self._homotopy_solvers[key] = value
        return value

    def _solve_block_homotopy(self, vu: str, vw: str, deg_total: int,
                              rhs: BlockMap) -> BlockMap:
        """C with D_w-after-C plus C-after-D_u equal to rhs (local indices)."""
        unknowns, row_index, solver = self._homotopy_solver(vu, vw, deg_total)
        vec: dict[int, Fraction] = {}
        for (a, c), pv in rhs.items():
            for rid, val in pv.items():
                slot = row_index.get((a, c, rid))
                if slot is None:
                    raise EngineLimitation("Maurer-Cartan defect outside the row space")
                vec[slot] = vec.get(slot, Fraction(0)) + val
        sol = solver.solve(vec)
        if sol is None:
            raise EngineLimitation("Maurer-Cartan correction system is inconsistent")
        out: BlockMap = {}
        for (slot, val) in zip(unknowns, sol):
            if val:
                a, c, pid = slot
                entry = out.setdefault((a, c), {})
                entry[pid] = entry.get(pid, Fraction(0)) + val
        return out

    def pair_correction(self, pid: int, qid: int) -> BlockMap:
        """Homotopy killing the lifted product of a zero composite p, q."""
        key = (pid, qid)
        if key in self._pair_corrections:
            return self._pair_corrections[key]
        algebra = self.algebra
        p, q = algebra.path(pid), algebra.path(qid)
        product = self._compose_block_maps(self.path_lift(pid), self.path_lift(qid))
        if not product:
            correction: BlockMap = {}
        else:
            rhs = {k: {r: -c for r, c in pv.items()} for k, pv in product.items()}
            correction = self._solve_block_homotopy(p.source, q.target,
                                                    p.degree + q.degree, rhs)
        self._pair_corrections[key] = correction
        return correction

    # -- the functor -----------------------------------------------------

    def serre(self, complex_: TwistedComplex) -> TwistedComplex:
        """Minimal twisted complex representing the Serre functor image."""
        algebra = self.algebra
        blocks: list[tuple[Resolution, int]] = []
        terms: list[tuple[str, int]] = []
        steps: list[int] = []
        block_of: list[int] = []
        block_vertex: list[str] = []
        block_shift: list[int] = []
        for b, (v, n) in enumerate(complex_.terms):
            res = self.resolution(v)
            off = len(terms)
            blocks.append((res, off))
            block_vertex.append(v)
            block_shift.append(n)
            for (t, m), s in zip(res.terms, res.steps):
                terms.append((t, m + n))
                steps.append(s)
                block_of.append(b)
        maps: dict[tuple[int, int], PathVector] = {}
        for (res, off) in blocks:
            for (a, b), pv in res.complex.maps.items():
                maps[(off + a, off + b)] = dict(pv)
        for (i, j), pv in complex_.maps.items():
            res_i, off_i = blocks[i]
            res_j, off_j = blocks[j]
            for pid, coeff in pv.items():
                for (a, b), lpv in self.path_lift(pid).items():
                    sign = Fraction(-1) if res_i.steps[a] % 2 else Fraction(1)
                    slot = maps.setdefault((off_i + a, off_j + b), {})
                    pv_add_scaled(slot, lpv, coeff * sign)
        # zero composites lift to null-homotopic, not zero, products: install
        # the cached homotopies for every adjacent pair through a relation
        out_of: dict[int, list[int]] = {}
        for (i, j) in complex_.maps:
            out_of.setdefault(i, []).append(j)
        for (i, u), pv1 in complex_.maps.items():
            for j in out_of.get(u, []):
                pv2 = complex_.maps[(u, j)]
                off_i, off_j = blocks[i][1], blocks[j][1]
                for pid, cp in pv1.items():
                    for qid, cq in pv2.items():
                        if algebra.compose(pid, qid) is not None:
                            continue
                        for (a, b), cpv in self.pair_correction(pid, qid).items():
                            slot = maps.setdefault((off_i + a, off_j + b), {})
                            pv_add_scaled(slot, cpv, cp * cq)
        maps = {key: pv for key, pv in maps.items() if pv}
        pre = TwistedComplex(algebra, terms, maps, validate=False)
        pre = self._correct_mc(pre, block_of, block_vertex, block_shift)
        pre.validate()
        return minimize(pre)

    def tau(self, complex_: TwistedComplex) -> TwistedComplex:
        return self.serre(complex_).shift(-1)

    # -- Maurer-Cartan repair ----------------------------------------------

    def _correct_mc(self, cx: TwistedComplex, block_of: list[int],
                    block_vertex: list[str], block_shift: list[int]) -> TwistedComplex:
        """Repair residual Maurer-Cartan defects, block pair by block pair.

        After the pair corrections the remaining defects involve at least
        three twist factors; their total path length grows every round, so
        the loop terminates by nilpotency of the path algebra.
        """
        algebra = self.algebra
        maps = {key: dict(pv) for key, pv in cx.maps.items()}
        block_offset: dict[int, int] = {}
        for t, b in enumerate(block_of):
            block_offset.setdefault(b, t)
        for _round in range(self.cutoff):
            current = TwistedComplex(algebra, cx.terms, maps, validate=False)
            defect = current.mc_defect()
            if not defect:
                return current
            by_pair: dict[tuple[int, int], BlockMap] = {}
            for (a, c), pv in defect.items():
                bi, bj = block_of[a], block_of[c]
                local = by_pair.setdefault((bi, bj), {})
                local[(a - block_offset[bi], c - block_offset[bj])] = \
                    {r: -v for r, v in pv.items()}
            for (bi, bj), local in by_pair.items():
                deg_total = block_shift[bj] - block_shift[bi] + 2
                correction = self._solve_block_homotopy(
                    block_vertex[bi], block_vertex[bj], deg_total, local)
                off_i, off_j = block_offset[bi], block_offset[bj]
                for (a, c), pv in correction.items():
                    slot = maps.setdefault((off_i + a, off_j + c), {})
                    pv_add_scaled(slot, pv, Fraction(1))
                    if not slot:
                        maps.pop((off_i + a, off_j + c), None)
        raise EngineLimitation("Maurer-Cartan correction did not converge")


def engine_for(presentation: GentlePresentation, cutoff: int = 64) -> NakayamaEngine:
    return NakayamaEngine(PathAlgebra(presentation), cutoff=cutoff)
