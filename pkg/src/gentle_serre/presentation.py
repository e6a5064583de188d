"""Graded gentle presentations: parsing, validation, paths and threads.

A presentation is a quiver with integer arrow degrees and a set of quadratic
monomial relations.  The relation pair ``["a", "b"]`` means the composite
"a then b" is zero.  Paths compose left to right throughout the library:
``p * q`` traverses p first, and Hom(P_u, P_v) is spanned by paths u -> v.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .exceptions import InfiniteDimensional, NotGentle, PresentationSyntaxError


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str
    degree: int = 0


@dataclass(frozen=True)
class Thread:
    """Maximal permitted or forbidden thread.

    ``vertices`` lists the vertex sequence: length ``len(arrows) + 1`` for a
    linear thread (a trivial thread has one vertex and no arrows) and length
    ``len(arrows)`` for a cycle, where ``vertices[i]`` is the source of
    ``arrows[i]`` and the last arrow closes up to ``vertices[0]``.
    """

    kind: str  # "permitted" | "forbidden"
    arrows: tuple[str, ...]
    vertices: tuple[str, ...]
    is_cycle: bool = False

    @property
    def is_trivial(self) -> bool:
        return not self.arrows and not self.is_cycle

    @property
    def anchor(self) -> str:
        if not self.is_trivial:
            raise ValueError("anchor is only defined for trivial threads")
        return self.vertices[0]


@dataclass(frozen=True)
class Path:
    """A nonzero path of the algebra; arrows () is the trivial path."""

    source: str
    target: str
    arrows: tuple[str, ...]
    degree: int

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    def __repr__(self) -> str:
        if self.is_trivial:
            return f"e_{self.source}"
        return "*".join(self.arrows)


class GentlePresentation:
    """Validated graded gentle presentation."""

    def __init__(self, vertices: Sequence[str], arrows: Sequence[Arrow],
                 relations: Iterable[tuple[str, str]]):
        self.vertices = tuple(str(v) for v in vertices)
        self.arrows = tuple(arrows)
        self.relations = frozenset((str(a), str(b)) for a, b in relations)
        self.arrow_by_name = {a.name: a for a in self.arrows}
        self.outgoing: dict[str, list[Arrow]] = {v: [] for v in self.vertices}
        self.incoming: dict[str, list[Arrow]] = {v: [] for v in self.vertices}
        self._validate()
        for a in self.arrows:
            self.outgoing[a.source].append(a)
            self.incoming[a.target].append(a)

    # -- validation -----------------------------------------------------

    def _validate(self) -> None:
        if not self.vertices:
            raise NotGentle("presentation has no vertices")
        if len(set(self.vertices)) != len(self.vertices):
            raise NotGentle("duplicate vertex ids")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise NotGentle("duplicate arrow ids")
        vset = set(self.vertices)
        for a in self.arrows:
            if a.source not in vset or a.target not in vset:
                raise NotGentle(f"arrow {a.name!r} references an unknown vertex")
        for (x, y) in self.relations:
            if x not in self.arrow_by_name or y not in self.arrow_by_name:
                raise NotGentle(f"relation ({x!r},{y!r}) references an unknown arrow")
            if self.arrow_by_name[x].target != self.arrow_by_name[y].source:
                raise NotGentle(f"relation ({x!r},{y!r}) is not a composable pair")
        out_count: dict[str, int] = {}
        in_count: dict[str, int] = {}
        for a in self.arrows:
            out_count[a.source] = out_count.get(a.source, 0) + 1
            in_count[a.target] = in_count.get(a.target, 0) + 1
        for v, n in out_count.items():
            if n > 2:
                raise NotGentle(f"vertex {v!r} has {n} outgoing arrows (at most 2 allowed)")
        for v, n in in_count.items():
            if n > 2:
                raise NotGentle(f"vertex {v!r} has {n} incoming arrows (at most 2 allowed)")
        # uniqueness of permitted/forbidden continuations on each side
        for a in self.arrows:
            succ = [b for b in self.arrows if b.source == a.target]
            forb = [b for b in succ if (a.name, b.name) in self.relations]
            perm = [b for b in succ if (a.name, b.name) not in self.relations]
            if len(forb) > 1:
                raise NotGentle(f"arrow {a.name!r} has two relation continuations")
            if len(perm) > 1:
                raise NotGentle(f"arrow {a.name!r} has two nonzero continuations")
            pred = [b for b in self.arrows if b.target == a.source]
            forb_p = [b for b in pred if (b.name, a.name) in self.relations]
            perm_p = [b for b in pred if (b.name, a.name) not in self.relations]
            if len(forb_p) > 1:
                raise NotGentle(f"arrow {a.name!r} ends two relations")
            if len(perm_p) > 1:
                raise NotGentle(f"arrow {a.name!r} continues two nonzero paths")

    # -- serialization ----------------------------------------------------

    @classmethod
    def from_json(cls, data: Mapping) -> "GentlePresentation":
        for field in ("vertices", "arrows"):
            if field not in data:
                raise PresentationSyntaxError(f"missing field {field!r}")
        if not isinstance(data["vertices"], list):
            raise PresentationSyntaxError("field 'vertices' must be a list")
        arrows = []
        for i, rec in enumerate(data["arrows"]):
            if not isinstance(rec, Mapping):
                raise PresentationSyntaxError(f"arrows[{i}] must be an object")
            for key in ("id", "from", "to"):
                if key not in rec:
                    raise PresentationSyntaxError(f"arrows[{i}] is missing {key!r}")
            degree = rec.get("degree", 0)
            if not isinstance(degree, int):
                raise PresentationSyntaxError(f"arrows[{i}].degree must be an integer")
            arrows.append(Arrow(str(rec["id"]), str(rec["from"]), str(rec["to"]), degree))
        relations = []
        for i, pair in enumerate(data.get("relations", [])):
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise PresentationSyntaxError(f"relations[{i}] must be a pair of arrow ids")
            relations.append((str(pair[0]), str(pair[1])))
        return cls([str(v) for v in data["vertices"]], arrows, relations)

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [{"id": a.name, "from": a.source, "to": a.target, "degree": a.degree}
                       for a in self.arrows],
            "relations": sorted([list(r) for r in self.relations]),
        }

    # -- continuation structure -------------------------------------------

    def permitted_successor(self, name: str) -> Optional[str]:
        a = self.arrow_by_name[name]
        for b in self.outgoing[a.target]:
            if (name, b.name) not in self.relations:
                return b.name
        return None

    def permitted_predecessor(self, name: str) -> Optional[str]:
        a = self.arrow_by_name[name]
        for b in self.incoming[a.source]:
            if (b.name, name) not in self.relations:
                return b.name
        return None

    def forbidden_successor(self, name: str) -> Optional[str]:
        a = self.arrow_by_name[name]
        for b in self.outgoing[a.target]:
            if (name, b.name) in self.relations:
                return b.name
        return None

    def forbidden_predecessor(self, name: str) -> Optional[str]:
        a = self.arrow_by_name[name]
        for b in self.incoming[a.source]:
            if (b.name, name) in self.relations:
                return b.name
        return None

    def is_trivially_graded(self) -> bool:
        return all(a.degree == 0 for a in self.arrows)

    # -- threads ------------------------------------------------------------

    def _chains(self, successor, predecessor) -> tuple[list[list[str]], list[list[str]]]:
        """Maximal chains and cycles of a partial permutation on arrows."""
        chains: list[list[str]] = []
        cycles: list[list[str]] = []
        seen: set[str] = set()
        for a in self.arrows:
            if a.name in seen or predecessor(a.name) is not None:
                continue
            chain = [a.name]
            seen.add(a.name)
            nxt = successor(a.name)
            while nxt is not None and nxt not in seen:
                chain.append(nxt)
                seen.add(nxt)
                nxt = successor(nxt)
            chains.append(chain)
        for a in self.arrows:
            if a.name in seen:
                continue
            cycle = [a.name]
            seen.add(a.name)
            nxt = successor(a.name)
            while nxt is not None and nxt != a.name:
                cycle.append(nxt)
                seen.add(nxt)
                nxt = successor(nxt)
            cycles.append(cycle)
        return chains, cycles

    def _thread_from_chain(self, kind: str, chain: list[str]) -> Thread:
        arrs = tuple(chain)
        verts = [self.arrow_by_name[chain[0]].source]
        for name in chain:
            verts.append(self.arrow_by_name[name].target)
        return Thread(kind, arrs, tuple(verts))

    def _thread_from_cycle(self, kind: str, cycle: list[str]) -> Thread:
        arrs = tuple(cycle)
        verts = tuple(self.arrow_by_name[name].source for name in cycle)
        return Thread(kind, arrs, verts, is_cycle=True)

    def threads(self) -> list[Thread]:
        """All maximal permitted and forbidden threads, classical conventions.

        A trivial permitted thread sits at v when v has at most one arrow on
        each side and the in/out pair, if both are present, composes to a
        nonzero path; a trivial forbidden thread dually requires the pair to
        be a relation.  An isolated vertex carries one trivial thread of each
        kind.
        """
        out: list[Thread] = []
        perm_chains, perm_cycles = self._chains(self.permitted_successor, self.permitted_predecessor)
        forb_chains, forb_cycles = self._chains(self.forbidden_successor, self.forbidden_predecessor)
        for chain in perm_chains:
            out.append(self._thread_from_chain("permitted", chain))
        for cycle in perm_cycles:
            out.append(self._thread_from_cycle("permitted", cycle))
        for chain in forb_chains:
            out.append(self._thread_from_chain("forbidden", chain))
        for cycle in forb_cycles:
            out.append(self._thread_from_cycle("forbidden", cycle))
        for v in self.vertices:
            if self._has_trivial_thread(v, forbidden=False):
                out.append(Thread("permitted", (), (v,)))
            if self._has_trivial_thread(v, forbidden=True):
                out.append(Thread("forbidden", (), (v,)))
        return out

    def _has_trivial_thread(self, v: str, forbidden: bool) -> bool:
        ins = self.incoming[v]
        outs = self.outgoing[v]
        if len(ins) > 1 or len(outs) > 1:
            return False
        if ins and outs:
            in_relation = (ins[0].name, outs[0].name) in self.relations
            return in_relation if forbidden else not in_relation
        return True

    # -- path basis ---------------------------------------------------------

    def has_relation_cycle(self) -> bool:
        return bool(self._chains(self.forbidden_successor, self.forbidden_predecessor)[1])

    def is_finite_dimensional(self) -> bool:
        """True iff there is no relation-free cyclic path."""
        return not self._chains(self.permitted_successor, self.permitted_predecessor)[1]

    def path_basis(self) -> list[Path]:
        """All nonzero paths: trivial paths plus segments of permitted threads."""
        if not self.is_finite_dimensional():
            raise InfiniteDimensional("a relation-free cycle makes the path basis infinite")
        paths = [Path(v, v, (), 0) for v in self.vertices]
        chains, _ = self._chains(self.permitted_successor, self.permitted_predecessor)
        for chain in chains:
            for i in range(len(chain)):
                deg = 0
                for j in range(i, len(chain)):
                    deg += self.arrow_by_name[chain[j]].degree
                    paths.append(Path(self.arrow_by_name[chain[i]].source,
                                      self.arrow_by_name[chain[j]].target,
                                      tuple(chain[i:j + 1]), deg))
        return paths


def parse_presentation(text: str) -> GentlePresentation:
    """Parse a JSON algebra file into a validated presentation."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PresentationSyntaxError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise PresentationSyntaxError("top level must be a JSON object")
    return GentlePresentation.from_json(data)
