"""Block-based Sierpinski gasket lattice.

Vertices are addressed by ``g`` symbols: the first ``g - 1`` pick a sub-block
(``T``, ``L``, ``R``) at each scale and the last one the position inside the
smallest triangle (``t``, ``l``, ``r``).  Reading the symbols as base-3 digits
(t=0, l=1, r=2, most significant first) gives the integer vertex id used
everywhere else in the package.

Port convention, fixed for every vertex:

* port 1 -> the external LINK edge (or a corner anchor for the three lattice
  corners),
* port 2 -> the next vertex of the block in the cyclic order t -> l -> r,
* port 3 -> the previous vertex of the block.

Side ``s`` of a vertex is the side opposite port ``s``, so side 1 is always the
side shared with the block loop.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import InvalidArgument, UnsupportedGeneration, ResourceLimit

MAX_GENERATION = 12

ANCHOR = -1
BLOCK = "BLOCK"
LINK = "LINK"
RING = "RING"
LATERAL = "LATERAL"

_LOWER = "tlr"
_UPPER = "TLR"

# Face-tracing rotation: arriving through port p, a loop leaves through
# _NEXT_PORT[p].  The side used at that vertex is the remaining index.
_NEXT_PORT = {1: 3, 2: 1, 3: 2}


def side_between(p: int, q: int) -> int:
    """Side index enclosed by ports ``p`` and ``q``."""
    return 6 - p - q


def address_to_id(address: str) -> int:
    vid = 0
    for ch in address:
        digit = _LOWER.find(ch.lower())
        if digit < 0:
            raise InvalidArgument(f"bad address symbol {ch!r}")
        vid = vid * 3 + digit
    return vid


def id_to_address(vid: int, generation: int) -> str:
    digits = []
    for _ in range(generation):
        vid, d = divmod(vid, 3)
        digits.append(d)
    digits.reverse()
    return "".join(_UPPER[d] for d in digits[:-1]) + _LOWER[digits[-1]]


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    kind: str
    level: int = 0  # LINK level k (>= 2); 0 for BLOCK edges

    @property
    def endpoints(self) -> tuple[int, int]:
        return (self.u, self.v)


@dataclass(frozen=True)
class Loop:
    kind: str
    scale: int
    incidences: tuple[tuple[int, int], ...]

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.incidences)

    def __len__(self) -> int:
        return len(self.incidences)


@dataclass
class Lattice:
    """Immutable gasket lattice of a fixed generation.

    Build instances with :func:`build_lattice`.
    """

    generation: int
    ports: tuple[tuple[int, int, int], ...]
    edges: tuple[Edge, ...]
    loops: tuple[Loop, ...]
    corners: tuple[int, int, int]
    _loop_at: tuple[tuple[int, int, int], ...] = field(repr=False)

    # -- basic queries -------------------------------------------------
    @property
    def n_vertices(self) -> int:
        return len(self.ports)

    @property
    def vertices(self) -> range:
        return range(self.n_vertices)

    @property
    def n_blocks(self) -> int:
        return self.n_vertices // 3

    def address(self, v: int) -> str:
        self._check_vertex(v)
        return id_to_address(v, self.generation)

    def vertex(self, address: str) -> int:
        if len(address) != self.generation:
            raise InvalidArgument(f"address {address!r} has wrong length for generation {self.generation}")
        return address_to_id(address)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(w for w in self.ports[v] if w != ANCHOR)

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def port_to(self, v: int, w: int) -> int:
        """Port index (1..3) at ``v`` whose attachment is ``w``."""
        try:
            return self.ports[v].index(w) + 1
        except ValueError:
            raise InvalidArgument(f"{w} is not attached to {v}") from None

    def loop_at(self, v: int, side: int) -> int:
        """Index of the loop carrying ``side`` of vertex ``v``."""
        return self._loop_at[v][side - 1]

    def loops_of(self, v: int) -> tuple[int, int, int]:
        return self._loop_at[v]

    def block_vertices(self, b: int) -> tuple[int, int, int]:
        return (3 * b, 3 * b + 1, 3 * b + 2)

    def edge_between(self, u: int, v: int) -> Edge:
        key = (min(u, v), max(u, v))
        try:
            return self._edge_index[key]
        except KeyError:
            raise InvalidArgument(f"no edge between {u} and {v}") from None

    @cached_property
    def _edge_index(self) -> dict[tuple[int, int], Edge]:
        return {(e.u, e.v): e for e in self.edges}

    def are_adjacent(self, u: int, v: int) -> bool:
        return v in self.ports[u]

    def loop_indices(self, kind: str) -> list[int]:
        return [i for i, lp in enumerate(self.loops) if lp.kind == kind]

    def _check_vertex(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < self.n_vertices):
            raise InvalidArgument(f"unknown vertex {v!r}")

    # -- metric --------------------------------------------------------
    def bfs(self, source: int, allowed: set[int] | None = None) -> dict[int, int]:
        """Shortest-path lengths from ``source``, optionally inside ``allowed``."""
        dist = {source: 0}
        queue = deque([source])
        while queue:
            x = queue.popleft()
            for y in self.ports[x]:
                if y == ANCHOR or y in dist:
                    continue
                if allowed is not None and y not in allowed:
                    continue
                dist[y] = dist[x] + 1
                queue.append(y)
        return dist

    @cached_property
    def diameter(self) -> int:
        best = 0
        for v in self.vertices:
            best = max(best, max(self.bfs(v).values()))
        return best

    def to_dict(self) -> dict:
        return {
            "generation": self.generation,
            "vertices": [
                {"id": v, "address": self.address(v), "degree": self.degree(v)} for v in self.vertices
            ],
            "edges": [{"u": e.u, "v": e.v, "kind": e.kind if e.kind == BLOCK else f"LINK{e.level}"} for e in self.edges],
            "loops": [
                {"kind": lp.kind, "scale": lp.scale, "incidences": [list(x) for x in lp.incidences]}
                for lp in self.loops
            ],
            "corners": list(self.corners),
            "diameter": self.diameter,
        }

    def serialize(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


# ----------------------------------------------------------------------
# construction
# ----------------------------------------------------------------------
def _link_partner(vid: int, generation: int) -> tuple[int, int]:
    """(partner id, LINK level) of the external edge at ``vid``; ANCHOR for corners."""
    digits = []
    x = vid
    for _ in range(generation):
        x, d = divmod(x, 3)
        digits.append(d)
    digits.reverse()
    y = digits[-1]
    run = 1
    while run < generation and digits[-1 - run] == y:
        run += 1
    if run == generation:
        return ANCHOR, 0
    parent = digits[-1 - run]
    partner = digits[: generation - 1 - run] + [y] + [parent] * run
    pid = 0
    for d in partner:
        pid = pid * 3 + d
    return pid, run + 1


def build_lattice(generation: int, max_generation: int = MAX_GENERATION) -> Lattice:
    """Build the generation-``generation`` gasket with ports, edges and loops."""
    if not isinstance(generation, int) or generation < 1:
        raise InvalidArgument(f"generation must be an integer >= 1, got {generation!r}")
    if generation > max_generation:
        raise ResourceLimit(f"generation {generation} exceeds cap {max_generation}")

    n = 3**generation
    ports = []
    links = []
    for v in range(n):
        base, pos = divmod(v, 3)
        partner, level = _link_partner(v, generation)
        ports.append((partner, 3 * base + (pos + 1) % 3, 3 * base + (pos + 2) % 3))
        if partner != ANCHOR and v < partner:
            links.append(Edge(v, partner, LINK, level))

    edges = []
    for b in range(n // 3):
        t, l, r = 3 * b, 3 * b + 1, 3 * b + 2
        edges += [Edge(t, l, BLOCK), Edge(l, r, BLOCK), Edge(t, r, BLOCK)]
    links.sort(key=lambda e: (e.level, e.u))
    edges += links

    corners = (0, (n - 1) // 2, n - 1)
    loops = _trace_loops(ports, corners, generation)

    loop_at = [[-1, -1, -1] for _ in range(n)]
    for i, lp in enumerate(loops):
        for v, s in lp.incidences:
            loop_at[v][s - 1] = i

    return Lattice(
        generation=generation,
        ports=tuple(ports),
        edges=tuple(edges),
        loops=tuple(loops),
        corners=corners,
        _loop_at=tuple(tuple(x) for x in loop_at),
    )


def _trace_loops(ports: Sequence[tuple[int, int, int]], corners: Sequence[int], generation: int) -> list[Loop]:
    used: set[tuple[int, int]] = set()  # (vertex, in-port)

    def walk(v: int, p: int) -> tuple[list[tuple[int, int]], bool]:
        inc = []
        start = (v, p)
        while True:
            used.add((v, p))
            q = _NEXT_PORT[p]
            inc.append((v, side_between(p, q)))
            w = ports[v][q - 1]
            if w == ANCHOR:
                return inc, False
            p = ports[w].index(v) + 1
            v = w
            if (v, p) == start:
                return inc, True

    laterals = []
    for c in corners:
        inc, closed = walk(c, 1)
        assert not closed
        laterals.append(inc)

    blocks, rings = [], []
    for v in range(len(ports)):
        for p in (1, 2, 3):
            if (v, p) in used:
                continue
            inc, closed = walk(v, p)
            assert closed
            k = inc.index(min(inc))
            inc = inc[k:] + inc[:k]
            if len(inc) == 3 and all(s == 1 for _, s in inc):
                blocks.append(Loop(BLOCK, 1, tuple(inc)))
            else:
                scale = (len(inc) // 3).bit_length()
                rings.append(Loop(RING, scale, tuple(inc)))

    blocks.sort(key=lambda lp: lp.incidences[0][0])
    rings.sort(key=lambda lp: (lp.scale, min(lp.vertices)))
    lats = [Loop(LATERAL, generation, tuple(inc)) for inc in laterals]
    lats.sort(key=lambda lp: sorted((lp.incidences[0][0], lp.incidences[-1][0])))
    return blocks + rings + lats


def expected_loop_count(generation: int) -> int:
    k = 3 ** (generation - 1)
    return k + (k - 1) // 2 + 3


def largest_four_loops(lattice: Lattice) -> tuple[int, int, int, int]:
    """Indices of the three laterals and the top-scale ring."""
    if lattice.generation < 2:
        raise UnsupportedGeneration("generation 1 has no ring loop")
    g = lattice.generation
    ring = [i for i, lp in enumerate(lattice.loops) if lp.kind == RING and lp.scale == g]
    lats = lattice.loop_indices(LATERAL)
    return tuple(sorted(ring + lats))  # type: ignore[return-value]


# ----------------------------------------------------------------------
# metric helpers
# ----------------------------------------------------------------------
def graph_distance(lattice: Lattice, u: int, v: int) -> int:
    lattice._check_vertex(u)
    lattice._check_vertex(v)
    return lattice.bfs(u)[v]


def subset_diameter(lattice: Lattice, subset: Iterable[int]) -> int:
    """Diameter of the subgraph induced by ``subset``."""
    nodes = set(subset)
    if not nodes:
        raise InvalidArgument("empty subset")
    for v in nodes:
        lattice._check_vertex(v)
    best = 0
    for v in nodes:
        dist = lattice.bfs(v, allowed=nodes)
        if len(dist) != len(nodes):
            raise InvalidArgument("subset is not connected in the induced subgraph")
        best = max(best, max(dist.values()))
    return best


def ball(lattice: Lattice, center: int, radius: int) -> set[int]:
    return {w for w, d in lattice.bfs(center).items() if d <= radius}


def connected_subsets_up_to(lattice: Lattice, max_diameter: int, max_size: int) -> Iterator[tuple[int, ...]]:
    """Connected vertex subsets with induced diameter and size bounded.

    Subsets are produced once each, as sorted tuples, ordered by their
    smallest vertex and then by the extension order of the ESU scheme.
    """
    if max_diameter < 0:
        raise InvalidArgument("max_diameter must be >= 0")
    if max_size < 1:
        return
    # graph distance lower-bounds the induced distance, so these balls prune safely
    near = [ball(lattice, v, max_diameter) for v in lattice.vertices]

    def extend(sub: list[int], ext: list[int], root: int, excl: set[int]):
        if subset_diameter(lattice, sub) <= max_diameter:
            yield tuple(sorted(sub))
        if len(sub) == max_size:
            return
        ext = list(ext)
        while ext:
            w = ext.pop(0)
            new_excl = excl | set(lattice.neighbors(w))
            extra = [
                u
                for u in lattice.neighbors(w)
                if u > root and u not in excl and u not in ext and all(u in near[s] for s in sub + [w])
            ]
            yield from extend(sub + [w], ext + sorted(extra), root, new_excl | {w})

    for v in lattice.vertices:
        start = [u for u in lattice.neighbors(v) if u > v and u in near[v]]
        excl = {v} | set(lattice.neighbors(v))
        yield from extend([v], sorted(start), v, excl)
