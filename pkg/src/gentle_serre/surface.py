"""Dissected-surface model of a gentle presentation.

The ribbon graph has one dot vertex per forbidden thread (carrying the
linear fan of quiver-vertex edge ends along the thread, with boundary gap
markers at both ends) and one edge per quiver vertex, the dual arc.
Relation cycles become interior dot vertices with a cyclic, gap-free fan;
they are reported as fully stopped boundary components.

Boundary walks are the faces of the fattened ribbon graph.  Each walk is a
cyclic sequence of corridors modelling a curve parallel to the boundary:
around every dot vertex the curve crosses the whole fan, picking up one
FarSide corridor per fan corner (a single arrow), and between consecutive
dot vertices it passes one marked point, a MarkedSide corridor whose
connecting path is the full arrow path of the permitted thread owning that
marked point.  The winding number is the signed corridor sum
``sum of +-(1 - deg sigma)``, the combinatorial grading drift of the curve.

Orientation is fixed once and calibrated by the hereditary A_n discs, which
must come out with winding number +2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .exceptions import GenusNotIntegral, InfiniteDimensional
from .invariants import BoundaryComponent, SurfaceInvariants
from .presentation import GentlePresentation, Thread


@dataclass(frozen=True)
class Position:
    """One end of a dual arc: a slot in some dot vertex's fan."""

    dot: int
    index: int


@dataclass(frozen=True)
class Corridor:
    side: str                     # "marked" | "far"
    sigma: tuple[str, ...]        # arrow names of the connecting path
    crossed: tuple[str, str]      # quiver vertices of the two crossed arcs
    sigma_degree: int

    def to_json(self) -> dict:
        return {"side": self.side, "sigma": list(self.sigma), "crossed": list(self.crossed)}


@dataclass(frozen=True)
class BoundaryWalk:
    component: int
    corridors: tuple[Corridor, ...]
    gap_dots: tuple[int, ...]     # dot indices visited through their gaps, in face order
    polygon_paths: tuple[tuple[str, ...], ...]  # permitted-thread paths met, one per stop
    fully_stopped: bool

    @property
    def stops(self) -> int:
        return sum(1 for c in self.corridors if c.side == "marked")

    def to_json(self) -> dict:
        return {
            "component": self.component,
            "fully_stopped": self.fully_stopped,
            "corridors": [c.to_json() for c in self.corridors],
        }


class DissectedSurface:
    """Ribbon-graph encoding of the dual dissection of a gentle presentation."""

    def __init__(self, presentation: GentlePresentation):
        self.presentation = presentation
        threads = presentation.threads()
        if any(t.kind == "permitted" and t.is_cycle for t in threads):
            raise InfiniteDimensional(
                "a relation-free cycle gives an unstopped boundary component; "
                "the surface model needs a finite-dimensional algebra")
        self.dots: list[Thread] = [t for t in threads if t.kind == "forbidden"]
        self.polygons: list[Thread] = [t for t in threads if t.kind == "permitted"]
        # isolated vertices carry a second trivial thread of each kind: the
        # dual arc still has two ends and its two polygon sides both exist.
        for v in presentation.vertices:
            if not presentation.incoming[v] and not presentation.outgoing[v]:
                self.dots.append(Thread("forbidden", (), (v,)))
                self.polygons.append(Thread("permitted", (), (v,)))
        self._index_positions()
        self._claim_polygon_corners()
        self.walks = self._trace_walks()

    # -- fan bookkeeping ----------------------------------------------------

    def _fan(self, dot: int) -> tuple[str, ...]:
        return self.dots[dot].vertices

    def _gapped(self, dot: int) -> bool:
        return not self.dots[dot].is_cycle

    def _index_positions(self) -> None:
        self.positions_of: dict[str, list[Position]] = {v: [] for v in self.presentation.vertices}
        self.arrow_source_pos: dict[str, Position] = {}
        self.arrow_target_pos: dict[str, Position] = {}
        for d, thread in enumerate(self.dots):
            for i, v in enumerate(thread.vertices):
                self.positions_of[v].append(Position(d, i))
            for j, name in enumerate(thread.arrows):
                self.arrow_source_pos[name] = Position(d, j)
                tgt = (j + 1) % len(thread.vertices) if thread.is_cycle else j + 1
                self.arrow_target_pos[name] = Position(d, tgt)
        for v, plist in self.positions_of.items():
            if len(plist) != 2:
                raise GenusNotIntegral(
                    f"vertex {v!r} has {len(plist)} fan positions, expected 2")

    def _other_position(self, vertex: str, pos: Position) -> Position:
        a, b = self.positions_of[vertex]
        if a == pos:
            return b
        if b == pos:
            return a
        raise GenusNotIntegral(f"position {pos} is not an occurrence of {vertex!r}")

    # -- polygon corner claims ------------------------------------------------

    def _claim_polygon_corners(self) -> None:
        """Attach each permitted thread's marked point to its two gap corners.

        A polygon's two boundary segments end on arc ends sitting right next
        to a gap: the slot before the gap on the "after" side of one dot and
        the slot after the gap on the "before" side of another.  Nontrivial
        polygons have these forced; trivial ones take the remaining corners.
        """
        self._before_claim: dict[Position, int] = {}
        self._after_claim: dict[Position, int] = {}

        def before_ok(pos: Position) -> bool:
            return (self._gapped(pos.dot) and pos.index == 0
                    and pos not in self._before_claim)

        def after_ok(pos: Position) -> bool:
            return (self._gapped(pos.dot) and pos.index == len(self._fan(pos.dot)) - 1
                    and pos not in self._after_claim)

        trivial = []
        for k, poly in enumerate(self.polygons):
            if poly.is_trivial:
                trivial.append(k)
                continue
            start = self._other_position(poly.vertices[0],
                                         self.arrow_source_pos[poly.arrows[0]])
            end = self._other_position(poly.vertices[-1],
                                       self.arrow_target_pos[poly.arrows[-1]])
            if not before_ok(start) or not after_ok(end):
                raise GenusNotIntegral(f"polygon {k} has no free boundary corners")
            self._before_claim[start] = k
            self._after_claim[end] = k
        for k in trivial:
            q1, q2 = self.positions_of[self.polygons[k].anchor]
            if before_ok(q1) and after_ok(q2):
                self._before_claim[q1] = k
                self._after_claim[q2] = k
            elif before_ok(q2) and after_ok(q1):
                self._before_claim[q2] = k
                self._after_claim[q1] = k
            else:
                raise GenusNotIntegral(f"trivial polygon {k} has no free boundary corners")
        for d in range(len(self.dots)):
            if self._gapped(d):
                first = Position(d, 0)
                last = Position(d, len(self._fan(d)) - 1)
                if first not in self._before_claim or last not in self._after_claim:
                    raise GenusNotIntegral(f"dot {d} has an unclaimed boundary corner")

    def polygon_at_gap(self, dot: int) -> Thread:
        """Permitted thread whose marked point follows ``dot`` along the boundary."""
        return self.polygons[self._before_claim[Position(dot, 0)]]

    # -- face tracing -----------------------------------------------------

    def _trace_walks(self) -> list[BoundaryWalk]:
        slots: list[Position] = []
        slot_id: dict[Position, int] = {}
        for d, thread in enumerate(self.dots):
            for i in range(len(thread.vertices)):
                pos = Position(d, i)
                slot_id[pos] = len(slots)
                slots.append(pos)
        alpha = [0] * len(slots)
        for v, (p, q) in ((v, tuple(ps)) for v, ps in self.positions_of.items()):
            alpha[slot_id[p]] = slot_id[q]
            alpha[slot_id[q]] = slot_id[p]

        def rotate(pos: Position) -> tuple[Position, bool]:
            """Next slot counterclockwise; flag True when the gap is passed."""
            fan_len = len(self._fan(pos.dot))
            nxt = pos.index + 1
            if nxt < fan_len:
                return Position(pos.dot, nxt), False
            return Position(pos.dot, 0), self._gapped(pos.dot)

        walks: list[BoundaryWalk] = []
        seen = [False] * len(slots)
        for start in range(len(slots)):
            if seen[start]:
                continue
            orbit_gap_dots: list[int] = []
            h = start
            while not seen[h]:
                seen[h] = True
                arrival = slots[alpha[h]]
                nxt, through_gap = rotate(arrival)
                if through_gap:
                    orbit_gap_dots.append(arrival.dot)
                h = slot_id[nxt]
            if h != start:
                raise GenusNotIntegral("face tracing did not close up")
            if not orbit_gap_dots:
                # faces meeting only interior dots do not occur for proper inputs
                if any(self._gapped(slots[s].dot) for s in self._orbit(start, alpha, rotate, slot_id, slots)):
                    raise GenusNotIntegral("gap-free face at a boundary dot")
                continue
            walks.append(self._walk_from_dots(len(walks), orbit_gap_dots))
        for thread in self.dots:
            if thread.is_cycle:
                walks.append(self._puncture_walk(len(walks), thread))
        return walks

    def _orbit(self, start, alpha, rotate, slot_id, slots):
        out = [start]
        h = slot_id[rotate(slots[alpha[start]])[0]]
        while h != start:
            out.append(h)
            h = slot_id[rotate(slots[alpha[h]])[0]]
        return out

    def _walk_from_dots(self, component: int, gap_dots: list[int]) -> BoundaryWalk:
        corridors: list[Corridor] = []
        polygon_paths: list[tuple[str, ...]] = []
        by_name = self.presentation.arrow_by_name
        for k, d in enumerate(gap_dots):
            thread = self.dots[d]
            # the parallel curve crosses the whole fan: one far corridor per corner
            for j in range(len(thread.arrows) - 1, -1, -1):
                name = thread.arrows[j]
                corridors.append(Corridor(
                    side="far",
                    sigma=(name,),
                    crossed=(thread.vertices[j + 1], thread.vertices[j]),
                    sigma_degree=by_name[name].degree,
                ))
            poly = self.polygon_at_gap(d)
            next_dot = gap_dots[(k + 1) % len(gap_dots)]
            next_fan = self._fan(next_dot)
            corridors.append(Corridor(
                side="marked",
                sigma=poly.arrows,
                crossed=(thread.vertices[0], next_fan[-1]),
                sigma_degree=sum(by_name[a].degree for a in poly.arrows),
            ))
            polygon_paths.append(poly.arrows)
        return BoundaryWalk(component, tuple(corridors), tuple(gap_dots),
                            tuple(polygon_paths), fully_stopped=False)

    def _puncture_walk(self, component: int, thread: Thread) -> BoundaryWalk:
        by_name = self.presentation.arrow_by_name
        n = len(thread.vertices)
        corridors = tuple(
            Corridor(side="far", sigma=(thread.arrows[j],),
                     crossed=(thread.vertices[(j + 1) % n], thread.vertices[j]),
                     sigma_degree=by_name[thread.arrows[j]].degree)
            for j in range(len(thread.arrows)))
        return BoundaryWalk(component, corridors, (), (), fully_stopped=True)

    # -- global invariants ---------------------------------------------------

    @property
    def num_dots(self) -> int:
        return len(self.dots)

    @property
    def num_edges(self) -> int:
        return len(self.presentation.vertices)

    def euler_characteristic(self) -> int:
        """chi of the surface; interior dots are opened into boundary circles."""
        cycles = sum(1 for t in self.dots if t.is_cycle)
        return self.num_dots - self.num_edges - cycles

    def genus(self) -> int:
        chi = self.euler_characteristic()
        twice = 2 - chi - len(self.walks)
        if twice < 0 or twice % 2:
            raise GenusNotIntegral(f"2 - chi - s = {twice} is not twice a genus")
        return twice // 2

    def is_boundary_parallel(self, vertex: str) -> bool:
        """Whether the primal arc dual to ``vertex`` is isotopic to a boundary segment.

        In a disc every arc is; otherwise the arc cuts off a one-arc polygon
        exactly when some end of it sits alone in a trivial forbidden fan.
        """
        inv = self.invariants()
        if inv.is_disc():
            return True
        return any(len(self._fan(pos.dot)) == 1 and self._gapped(pos.dot)
                   for pos in self.positions_of[vertex])

    def invariants(self) -> SurfaceInvariants:
        comps = []
        for walk in self.walks:
            omega = winding_number(walk)
            if walk.fully_stopped:
                comps.append(BoundaryComponent.stopped(winding=omega))
            else:
                comps.append(BoundaryComponent.mixed(walk.stops, omega))
        return SurfaceInvariants(self.genus(), tuple(comps))

    def to_json(self) -> dict:
        return {
            "dots": self.num_dots,
            "edges": self.num_edges,
            "euler_characteristic": self.euler_characteristic(),
            "walks": [w.to_json() for w in self.walks],
        }


def build_surface(presentation: GentlePresentation) -> DissectedSurface:
    return DissectedSurface(presentation)


def boundary_walks(surface: DissectedSurface) -> list[BoundaryWalk]:
    return list(surface.walks)


def winding_number(walk: BoundaryWalk, degrees: Optional[Mapping[str, int]] = None) -> int:
    """Signed corridor sum: +(1 - deg sigma) per marked, -(1 - deg sigma) per far."""
    total = 0
    for c in walk.corridors:
        deg = c.sigma_degree if degrees is None else sum(degrees[a] for a in c.sigma)
        total += (1 - deg) if c.side == "marked" else (deg - 1)
    return total


def surface_invariants(presentation: GentlePresentation) -> SurfaceInvariants:
    return build_surface(presentation).invariants()


def ag_pairs(presentation: GentlePresentation) -> tuple[tuple[int, int], ...]:
    """Multiset of (m_i, m_i - omega_i) over mixed components, sorted."""
    inv = surface_invariants(presentation)
    return tuple(sorted((c.stops, c.stops - c.winding) for c in inv.mixed))
