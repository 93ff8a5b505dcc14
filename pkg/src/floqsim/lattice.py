"""Lattice clusters for the kicked Ising / kicked CZ Floquet models.

A lattice is a finite planar cluster: sites, nearest-neighbour bonds, a
proper edge coloring into commuting gate layers, an ancilla group per bond
(bonds mediated by the same ancilla share one group), and a boundary/bulk
tag per site.

Kagome clusters are built as medial graphs of triangular-lattice flakes:
every triangle of T-lattice faces becomes a corner-sharing kagome triangle.
Two boundary styles exist: "complete" keeps every triangle intact (all site
coordinations even, so no charge-pumped sites), "tipcut" removes every site
that belongs to a single triangle, which leaves coordination-3 sites along
the boundary.  The named presets carry fixed boundary-site lists (hard
coded below and cross-checked against the geometric perimeter by the test
suite) and a fixed site numbering along a 1D path suitable for
matrix-product-state orderings.
"""
from __future__ import annotations

import itertools
import json
import math
import re
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

SQRT3 = math.sqrt(3.0)

Edge = tuple[int, int]

PRESET_NAMES = (
    "Kagome82",
    "Lieb40",
    "Kagome53-I",
    "Kagome53-II",
    "Square25",
    "Square24",
    "Square16",
    "Kagome30",
    "Kagome29",
    "Kagome21",
    "Kagome19",
    "Lieb21",
    "Lieb28",
    "Triangular19",
    "HeavyHex28",
)

# Reference boundary-site lists.  The three device-scale lattices use
# 1-based site labels in their reference numbering; everything else is
# 0-based.  Stored 0-based; the label offset is kept on the lattice.
_REFERENCE_BOUNDARY = {
    "Kagome82": (
        [1, 2, 3, 4, 5, 6, 7, 10, 11, 17, 18, 21, 22, 28, 29, 32, 33, 39, 40,
         43, 44, 50, 51, 54, 55, 61, 62, 65, 66, 72, 73, 76, 77, 78, 79, 80,
         81, 82],
        1,
    ),
    "Lieb40": (
        [1, 2, 3, 4, 5, 6, 7, 8, 11, 12, 18, 19, 22, 23, 29, 30, 33, 34, 35,
         36, 37, 38, 39, 40],
        1,
    ),
    "Kagome53-I": (
        [1, 2, 3, 4, 5, 6, 8, 9, 13, 14, 16, 17, 21, 22, 24, 25, 29, 30, 32,
         33, 37, 38, 40, 41, 45, 46, 48, 49, 50, 51, 52, 53],
        1,
    ),
    "Square25": (
        [0, 1, 2, 3, 4, 5, 9, 10, 14, 15, 19, 20, 21, 22, 23, 24],
        0,
    ),
    "Kagome30": (
        [0, 1, 2, 3, 4, 6, 7, 12, 13, 16, 17, 22, 23, 25, 26, 27, 28, 29],
        0,
    ),
    "Lieb21": (
        [0, 1, 2, 3, 4, 5, 7, 8, 12, 13, 15, 16, 17, 18, 19, 20],
        0,
    ),
}


class LatticeError(ValueError):
    pass


@dataclass(eq=False)
class Lattice:
    """Immutable lattice cluster.  Positions are for plotting only."""

    name: str
    positions: np.ndarray  # (L, 2)
    edges: tuple[Edge, ...]  # (i, j) with i < j, sorted
    edge_layer: tuple[int, ...]
    ancilla_of_edge: tuple[int, ...]
    boundary: frozenset[int]
    label_offset: int = 0
    # sublattice metadata used by ancilla-group strategies
    midpoints: frozenset[int] | None = None
    triangles: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=float)
        self.positions.setflags(write=False)
        self._validate()

    # -- basic accessors -------------------------------------------------
    @property
    def n_sites(self) -> int:
        return self.positions.shape[0]

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_layers(self) -> int:
        return 1 + max(self.edge_layer) if self.edges else 0

    @property
    def bulk(self) -> frozenset[int]:
        return frozenset(range(self.n_sites)) - self.boundary

    def site_tags(self, site: int) -> frozenset[str]:
        return frozenset({"boundary"} if site in self.boundary else {"bulk"})

    def coordination(self, site: int) -> int:
        if not (0 <= site < self.n_sites):
            raise LatticeError(f"site {site} out of range 0..{self.n_sites - 1}")
        return self._degrees()[site]

    def _degrees(self) -> np.ndarray:
        if not hasattr(self, "_deg"):
            deg = np.zeros(self.n_sites, dtype=int)
            for i, j in self.edges:
                deg[i] += 1
                deg[j] += 1
            self._deg = deg
        return self._deg

    def neighbors(self, site: int) -> tuple[int, ...]:
        if not hasattr(self, "_nbr"):
            nbr = defaultdict(list)
            for i, j in self.edges:
                nbr[i].append(j)
                nbr[j].append(i)
            self._nbr = {k: tuple(sorted(v)) for k, v in nbr.items()}
        return self._nbr.get(site, ())

    # -- validation ------------------------------------------------------
    def _validate(self):
        n = self.n_sites
        seen = set()
        for (i, j) in self.edges:
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise LatticeError(f"bad edge ({i},{j}) for {n} sites")
            if i > j:
                raise LatticeError(f"edge ({i},{j}) not stored as i<j")
            if (i, j) in seen:
                raise LatticeError(f"duplicate edge ({i},{j})")
            seen.add((i, j))
        if len(self.edge_layer) != len(self.edges):
            raise LatticeError("edge_layer length mismatch")
        if len(self.ancilla_of_edge) != len(self.edges):
            raise LatticeError("ancilla_of_edge length mismatch")
        at_site = defaultdict(list)
        for e, (i, j) in enumerate(self.edges):
            at_site[i].append(self.edge_layer[e])
            at_site[j].append(self.edge_layer[e])
        for s, layers in at_site.items():
            if len(layers) != len(set(layers)):
                raise LatticeError(f"edge coloring not proper at site {s}")
        groups = defaultdict(int)
        for g in self.ancilla_of_edge:
            groups[g] += 1
        if groups and not all(1 <= c <= 3 for c in groups.values()):
            raise LatticeError("ancilla group size outside 1..3")
        if not self.boundary <= set(range(n)):
            raise LatticeError("boundary tags reference unknown sites")

    # -- derived sets ------------------------------------------------------
    def charge_pump_set(self) -> frozenset[int]:
        """Sites with coordination = 1 or 3 (mod 4)."""
        deg = self._degrees()
        return frozenset(int(s) for s in np.nonzero(deg % 4 % 2)[0])

    def regions(self) -> dict[str, frozenset[int]]:
        pumped = self.charge_pump_set()
        allsites = frozenset(range(self.n_sites))
        return {
            "all": allsites,
            "boundary": self.boundary,
            "bulk": self.bulk,
            "pumped": pumped,
            "unpumped": allsites - pumped,
        }

    # -- serialization -----------------------------------------------------
    def to_json(self) -> str:
        doc = {
            "name": self.name,
            "n_sites": self.n_sites,
            "positions": [[float(x), float(y)] for x, y in self.positions],
            "edges": [
                [i, j, self.edge_layer[e], self.ancilla_of_edge[e]]
                for e, (i, j) in enumerate(self.edges)
            ],
            "tags": {"boundary": sorted(self.boundary)},
            "label_offset": self.label_offset,
        }
        if self.midpoints is not None:
            doc["midpoints"] = sorted(self.midpoints)
        if self.triangles:
            doc["triangles"] = [list(t) for t in self.triangles]
        return json.dumps(doc, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "Lattice":
        doc = json.loads(text)
        edges = tuple(sorted((min(i, j), max(i, j)) for i, j, _, _ in doc["edges"]))
        order = {
            (min(i, j), max(i, j)): (layer, anc)
            for i, j, layer, anc in doc["edges"]
        }
        return cls(
            name=doc.get("name", "custom"),
            positions=np.array(doc["positions"], dtype=float),
            edges=edges,
            edge_layer=tuple(order[e][0] for e in edges),
            ancilla_of_edge=tuple(order[e][1] for e in edges),
            boundary=frozenset(doc["tags"]["boundary"]),
            label_offset=int(doc.get("label_offset", 0)),
            midpoints=(
                frozenset(doc["midpoints"]) if "midpoints" in doc else None
            ),
            triangles=tuple(tuple(t) for t in doc.get("triangles", ())),
        )


# --------------------------------------------------------------------------
# free-function wrappers
# --------------------------------------------------------------------------

def coordination(lattice: Lattice, site: int) -> int:
    return lattice.coordination(site)


def charge_pump_set(lattice: Lattice) -> frozenset[int]:
    return lattice.charge_pump_set()


# --------------------------------------------------------------------------
# edge coloring
# --------------------------------------------------------------------------

def color_edges(n_sites: int, edges: tuple[Edge, ...]) -> list[int]:
    """Deterministic proper edge coloring with the minimum number of colors
    reachable by bounded backtracking (at most max-degree + 1, by Vizing).

    Edges are processed in sorted (i, j) order with lowest-feasible-color
    first, backtracking on dead ends.  All R_ZZ gates commute, so layer
    structure only fixes the order noise realizations sample gates in;
    determinism is what matters.
    """
    if not edges:
        return []
    deg = defaultdict(int)
    for i, j in edges:
        deg[i] += 1
        deg[j] += 1
    lo = max(deg.values())
    incident = defaultdict(list)
    for e, (i, j) in enumerate(edges):
        incident[i].append(e)
        incident[j].append(e)

    def attempt(k: int, budget: int) -> list[int] | None:
        color = [-1] * len(edges)
        nodes = 0
        order = sorted(range(len(edges)), key=lambda e: edges[e])

        def feasible(e: int, c: int) -> bool:
            i, j = edges[e]
            for f in incident[i]:
                if color[f] == c:
                    return False
            for f in incident[j]:
                if color[f] == c:
                    return False
            return True

        def rec(pos: int) -> bool:
            nonlocal nodes
            if pos == len(order):
                return True
            nodes += 1
            if nodes > budget:
                return False
            e = order[pos]
            for c in range(k):
                if feasible(e, c):
                    color[e] = c
                    if rec(pos + 1):
                        return True
                    color[e] = -1
            return False

        return color if rec(0) else None

    for k in range(lo, lo + 2):
        got = attempt(k, budget=200_000)
        if got is not None:
            return got
    # greedy always terminates (first-fit over sorted edges)
    color = [-1] * len(edges)
    for e in sorted(range(len(edges)), key=lambda e: edges[e]):
        used = set()
        i, j = edges[e]
        for f in incident[i]:
            used.add(color[f])
        for f in incident[j]:
            used.add(color[f])
        c = 0
        while c in used:
            c += 1
        color[e] = c
    return color


# --------------------------------------------------------------------------
# ancilla grouping
# --------------------------------------------------------------------------

def assign_ancillas(
    n_sites: int,
    edges: tuple[Edge, ...],
    strategy: str,
    triangles: tuple[tuple[int, int, int], ...] = (),
    midpoints: frozenset[int] | None = None,
) -> tuple[int, ...]:
    """Group bonds by the ancilla that mediates them.

    per_edge: one group per bond (M_a = 1).
    kagome_triangles: the three bonds of each elementary triangle share a
        group (bulk M_a = 3); leftover bonds get singleton groups.
    lieb_midpoints: the two bonds of each coordination-2 midpoint site share
        a group (M_a = 2).
    """
    eidx = {e: n for n, e in enumerate(edges)}
    if strategy == "per_edge":
        return tuple(range(len(edges)))
    if strategy == "kagome_triangles":
        tris = triangles or _find_triangles(edges)
        if not tris:
            raise LatticeError("kagome_triangles: graph has no triangles")
        group = [-1] * len(edges)
        g = 0
        for a, b, c in sorted(tris):
            es = [eidx.get(t) for t in ((a, b), (a, c), (b, c))]
            if any(e is None for e in es):
                continue
            if any(group[e] != -1 for e in es):
                continue
            for e in es:
                group[e] = g
            g += 1
        for e in range(len(edges)):
            if group[e] == -1:
                group[e] = g
                g += 1
        return tuple(group)
    if strategy == "lieb_midpoints":
        if midpoints is None:
            raise LatticeError(
                "lieb_midpoints: lattice carries no midpoint sublattice"
            )
        group = [-1] * len(edges)
        g = 0
        for m in sorted(midpoints):
            es = [n for n, (i, j) in enumerate(edges) if m in (i, j)]
            if len(es) > 2:
                raise LatticeError(f"midpoint {m} has {len(es)} bonds")
            for e in es:
                group[e] = g
            g += 1
        for e in range(len(edges)):
            if group[e] == -1:
                group[e] = g
                g += 1
        return tuple(group)
    raise LatticeError(
        f"unknown ancilla strategy {strategy!r}; "
        "expected per_edge | kagome_triangles | lieb_midpoints"
    )


def regroup_ancillas(lattice: Lattice, strategy: str) -> Lattice:
    """Same lattice with bonds regrouped under a different strategy."""
    groups = assign_ancillas(
        lattice.n_sites, lattice.edges, strategy,
        triangles=lattice.triangles, midpoints=lattice.midpoints,
    )
    return Lattice(
        name=lattice.name,
        positions=np.array(lattice.positions),
        edges=lattice.edges,
        edge_layer=lattice.edge_layer,
        ancilla_of_edge=groups,
        boundary=lattice.boundary,
        label_offset=lattice.label_offset,
        midpoints=lattice.midpoints,
        triangles=lattice.triangles,
    )


def _find_triangles(edges: tuple[Edge, ...]) -> list[tuple[int, int, int]]:
    es = set(edges)
    nbr = defaultdict(set)
    for i, j in edges:
        nbr[i].add(j)
        nbr[j].add(i)
    tris = set()
    for i, j in edges:
        for k in nbr[i] & nbr[j]:
            tris.add(tuple(sorted((i, j, k))))
    return sorted(tris)


# --------------------------------------------------------------------------
# geometric perimeter (outer planar face)
# --------------------------------------------------------------------------

def outer_boundary_sites(positions, edges) -> frozenset[int]:
    """Sites on the outer face, via half-edge rotation traversal."""
    n = len(positions)
    if n == 1:
        return frozenset({0})
    nbrs = defaultdict(list)
    for i, j in edges:
        nbrs[i].append(j)
        nbrs[j].append(i)
    rot = {}
    for u, vs in nbrs.items():
        rot[u] = sorted(
            vs,
            key=lambda v: math.atan2(
                positions[v][1] - positions[u][1],
                positions[v][0] - positions[u][0],
            ),
        )
    pos_in = {u: {v: i for i, v in enumerate(r)} for u, r in rot.items()}
    visited = set()
    best_cycle, best_area = None, None
    for i, j in edges:
        for he in ((i, j), (j, i)):
            if he in visited:
                continue
            cyc = []
            cur = he
            while cur not in visited:
                visited.add(cur)
                cyc.append(cur[0])
                u, v = cur
                w = rot[v][(pos_in[v][u] - 1) % len(rot[v])]
                cur = (v, w)
            area = 0.0
            for a in range(len(cyc)):
                x1, y1 = positions[cyc[a]]
                x2, y2 = positions[cyc[(a + 1) % len(cyc)]]
                area += x1 * y2 - x2 * y1
            if best_area is None or area < best_area:
                best_area, best_cycle = area, cyc
    return frozenset(best_cycle or range(n))


# --------------------------------------------------------------------------
# construction helpers
# --------------------------------------------------------------------------

def _number_sites(pos: dict, snake: bool) -> dict:
    """Row-major numbering bottom-up; optionally boustrophedon (MPS path)."""
    rows = defaultdict(list)
    for key, (x, y) in pos.items():
        rows[round(y, 6)].append((round(x, 6), key))
    num = {}
    i = 0
    for r, ry in enumerate(sorted(rows)):
        row = sorted(rows[ry])
        if snake and r % 2 == 1:
            row = row[::-1]
        for _, key in row:
            num[key] = i
            i += 1
    return num


def _assemble(
    name: str,
    pos: dict,
    edge_keys,
    snake: bool,
    strategy: str,
    triangles_keys=(),
    midpoint_keys=(),
    boundary_override: list[int] | None = None,
    label_offset: int = 0,
) -> Lattice:
    num = _number_sites(pos, snake)
    n = len(num)
    positions = np.zeros((n, 2))
    for key, i in num.items():
        positions[i] = pos[key]
    edges = tuple(
        sorted(tuple(sorted((num[a], num[b]))) for a, b in edge_keys)
    )
    layers = color_edges(n, edges)
    tris = tuple(
        sorted(tuple(sorted(num[v] for v in t)) for t in triangles_keys)
    )
    mids = frozenset(num[m] for m in midpoint_keys) if midpoint_keys else None
    groups = assign_ancillas(n, edges, strategy, triangles=tris, midpoints=mids)
    if boundary_override is not None:
        boundary = frozenset(boundary_override)
    else:
        boundary = outer_boundary_sites(positions, edges)
    return Lattice(
        name=name,
        positions=positions,
        edges=edges,
        edge_layer=tuple(layers),
        ancilla_of_edge=groups,
        boundary=boundary,
        label_offset=label_offset,
        midpoints=mids,
        triangles=tris,
    )


# -- kagome flakes -----------------------------------------------------------

def _axial_cart(q, r):
    return (q + 0.5 * r, 0.5 * SQRT3 * r)


def _kagome_from_vertices(name, vertices, tipcut, boundary_override=None,
                          label_offset=0) -> Lattice:
    V = set(vertices)
    qs = [q for q, _ in V]
    rs = [r for _, r in V]
    faces = []
    for q in range(min(qs) - 1, max(qs) + 1):
        for r in range(min(rs) - 1, max(rs) + 1):
            up = ((q, r), (q + 1, r), (q, r + 1))
            if all(v in V for v in up):
                faces.append(up)
            dn = ((q + 1, r), (q, r + 1), (q + 1, r + 1))
            if all(v in V for v in dn):
                faces.append(dn)
    membership = defaultdict(list)
    for fi, f in enumerate(faces):
        for pair in itertools.combinations(f, 2):
            membership[frozenset(pair)].append(fi)
    sites = set(membership)
    if tipcut:
        sites -= {e for e in sites if len(membership[e]) == 1}
    edge_keys = set()
    triangle_keys = []
    for f in faces:
        fe = [frozenset(p) for p in itertools.combinations(f, 2)]
        alive = [e for e in fe if e in sites]
        for pair in itertools.combinations(alive, 2):
            edge_keys.add(tuple(pair))
        if len(alive) == 3:
            triangle_keys.append(tuple(alive))
    pos = {}
    for e in sites:
        (q1, r1), (q2, r2) = tuple(e)
        x1, y1 = _axial_cart(q1, r1)
        x2, y2 = _axial_cart(q2, r2)
        pos[e] = (0.5 * (x1 + x2), 0.5 * (y1 + y2))
    return _assemble(
        name, pos, edge_keys, snake=True, strategy="kagome_triangles",
        triangles_keys=triangle_keys, boundary_override=boundary_override,
        label_offset=label_offset,
    )


def _axial_box(qhi, rhi, slo, shi):
    return {
        (q, r)
        for q in range(qhi + 1)
        for r in range(rhi + 1)
        if slo <= q + r <= shi
    }


def kagome(rows: int, cols: int, boundary_style: str = "complete") -> Lattice:
    """Generic kagome flake: medial graph of a (cols x rows) parallelogram
    patch of the triangular lattice.  boundary_style 'complete' keeps all
    triangles intact; 'tipcut' removes single-triangle tip sites, creating
    coordination-3 charge-pumped boundary sites."""
    if rows < 1 or cols < 1:
        raise LatticeError("kagome(rows, cols): need rows, cols >= 1")
    if boundary_style not in ("complete", "tipcut"):
        raise LatticeError("kagome boundary_style must be complete|tipcut")
    verts = _axial_box(cols, rows, 0, cols + rows)
    return _kagome_from_vertices(
        f"kagome({rows},{cols},{boundary_style})",
        verts,
        boundary_style == "tipcut",
    )


# -- square / lieb ------------------------------------------------------------

def _grid_graph(coords):
    S = set(coords)
    edge_keys = set()
    for (x, y) in S:
        for dx, dy in ((1, 0), (0, 1)):
            if (x + dx, y + dy) in S:
                edge_keys.add(((x, y), (x + dx, y + dy)))
    pos = {s: (float(s[0]), float(s[1])) for s in S}
    return pos, edge_keys


def square(w: int, h: int) -> Lattice:
    """Square-lattice patch of w x h plaquettes ((w+1)(h+1) sites)."""
    if w < 1 or h < 1:
        raise LatticeError("square(w, h): need w, h >= 1")
    pos, ek = _grid_graph(
        [(x, y) for x in range(w + 1) for y in range(h + 1)]
    )
    return _assemble(f"square({w},{h})", pos, ek, snake=False,
                     strategy="per_edge")


def _lieb_coords(w, h, cut_corners):
    S = set()
    for x in range(2 * w + 1):
        for y in range(2 * h + 1):
            if x % 2 == 0 or y % 2 == 0:
                S.add((x, y))
    if cut_corners:
        X, Y = 2 * w, 2 * h
        for cx, cy in ((0, 0), (X, 0), (0, Y), (X, Y)):
            S.discard((cx, cy))
            S.discard((cx + (1 if cx == 0 else -1), cy))
            S.discard((cx, cy + (1 if cy == 0 else -1)))
    return S


def lieb(w: int, h: int, boundary_style: str = "corner") -> Lattice:
    """Lieb lattice of w x h cells.  'corner' keeps the four extreme corner
    sites (coordination-3 pumped sites remain on each side); 'nocorner'
    removes each corner site together with its two midpoints, which makes
    every coordination even (no charge-pumped sites)."""
    if w < 1 or h < 1:
        raise LatticeError("lieb(w, h): need w, h >= 1")
    if boundary_style not in ("corner", "nocorner"):
        raise LatticeError("lieb boundary_style must be corner|nocorner")
    S = _lieb_coords(w, h, boundary_style == "nocorner")
    pos, ek = _grid_graph(S)
    midpoint_keys = [s for s in S if s[0] % 2 == 1 or s[1] % 2 == 1]
    return _assemble(
        f"lieb({w},{h},{boundary_style})", pos, ek, snake=False,
        strategy="lieb_midpoints", midpoint_keys=midpoint_keys,
    )


# -- triangular / heavy-hex ----------------------------------------------------

def _triangular19() -> Lattice:
    V = _axial_box(4, 4, 2, 6)  # hexagonal flake, radius 2: 19 sites
    edge_keys = set()
    for (q, r) in V:
        for o in ((q + 1, r), (q, r + 1), (q + 1, r - 1)):
            if o in V:
                edge_keys.add(((q, r), o))
    pos = {v: _axial_cart(*v) for v in V}
    return _assemble("Triangular19", pos, edge_keys, snake=False,
                     strategy="per_edge")


def _heavyhex28() -> Lattice:
    # One hexagon sitting on top of two: 13 vertex qubits + 15 edge qubits.
    S = {(x / 2, 0.0) for x in range(2, 7)}
    S |= {(1.0, 0.5), (3.0, 0.5)}
    S |= {(x / 2, 1.0) for x in range(0, 9)}
    S |= {(0.0, 1.5), (2.0, 1.5), (4.0, 1.5)}
    S |= {(x / 2, 2.0) for x in range(0, 9)}
    edge_keys = set()
    for (x, y) in S:
        if (x + 0.5, y) in S:
            edge_keys.add(((x, y), (x + 0.5, y)))
        if (x, y + 0.5) in S:
            edge_keys.add(((x, y), (x, y + 0.5)))
    pos = {s: s for s in S}
    return _assemble("HeavyHex28", pos, edge_keys, snake=False,
                     strategy="per_edge")


# --------------------------------------------------------------------------
# presets
# --------------------------------------------------------------------------

def _kagome_preset(name, qhi, rhi, slo, shi, tipcut):
    bset, off = _REFERENCE_BOUNDARY.get(name, (None, 0))
    override = sorted(b - off for b in bset) if bset else None
    lat = _kagome_from_vertices(
        name, _axial_box(qhi, rhi, slo, shi), tipcut,
        boundary_override=override, label_offset=off,
    )
    return lat


def _with_reference_boundary(name, lat: Lattice) -> Lattice:
    bset, off = _REFERENCE_BOUNDARY[name]
    return Lattice(
        name=name,
        positions=np.array(lat.positions),
        edges=lat.edges,
        edge_layer=lat.edge_layer,
        ancilla_of_edge=lat.ancilla_of_edge,
        boundary=frozenset(b - off for b in bset),
        label_offset=off,
        midpoints=lat.midpoints,
        triangles=lat.triangles,
    )


_BUILDERS = {
    # axial-box kagome flakes; tip-cut ones carry pumped boundary sites
    "Kagome82": lambda: _kagome_preset("Kagome82", 4, 8, 1, 11, True),
    "Kagome53-I": lambda: _kagome_preset("Kagome53-I", 3, 7, 0, 10, True),
    "Kagome53-II": lambda: _kagome_preset("Kagome53-II", 5, 3, 0, 8, False),
    "Kagome30": lambda: _kagome_preset("Kagome30", 4, 4, 2, 6, True),
    "Kagome29": lambda: _kagome_preset("Kagome29", 3, 3, 1, 5, False),
    "Kagome21": lambda: _kagome_preset("Kagome21", 3, 3, 0, 6, True),
    "Kagome19": lambda: _kagome_preset("Kagome19", 2, 3, 1, 4, False),
    "Lieb40": lambda: _with_reference_boundary("Lieb40", lieb(3, 3, "corner")),
    "Lieb21": lambda: _with_reference_boundary("Lieb21", lieb(2, 2, "corner")),
    "Lieb28": lambda: lieb(3, 3, "nocorner"),
    "Square25": lambda: _with_reference_boundary("Square25", square(4, 4)),
    "Square24": lambda: _square24(),
    "Square16": lambda: square(3, 3),
    "Triangular19": _triangular19,
    "HeavyHex28": _heavyhex28,
}


def _square24() -> Lattice:
    rows = {0: (2, 3), 1: (1, 4), 2: (0, 5), 3: (0, 5), 4: (1, 4), 5: (2, 3)}
    pos, ek = _grid_graph(
        [(x, y) for y, (a, b) in rows.items() for x in range(a, b + 1)]
    )
    return _assemble("Square24", pos, ek, snake=False, strategy="per_edge")


_GENERIC_RE = re.compile(
    r"^(square|kagome|lieb)\(\s*(\d+)\s*,\s*(\d+)\s*(?:,\s*([a-z]+)\s*)?\)$"
)


def build_preset(name: str) -> Lattice:
    """Build a named preset, or a generic builder spec such as
    'square(4,4)', 'kagome(3,5,tipcut)', 'lieb(3,3,nocorner)'."""
    if name in _BUILDERS:
        lat = _BUILDERS[name]()
        if lat.name != name:
            lat = Lattice(
                name=name, positions=np.array(lat.positions),
                edges=lat.edges, edge_layer=lat.edge_layer,
                ancilla_of_edge=lat.ancilla_of_edge, boundary=lat.boundary,
                label_offset=lat.label_offset, midpoints=lat.midpoints,
                triangles=lat.triangles,
            )
        return lat
    m = _GENERIC_RE.match(name.strip())
    if m:
        kind, a, b, style = m.group(1), int(m.group(2)), int(m.group(3)), m.group(4)
        if kind == "square":
            return square(a, b)
        if kind == "kagome":
            return kagome(a, b, style or "complete")
        return lieb(a, b, style or "corner")
    raise LatticeError(
        f"unknown preset {name!r}; valid names: {', '.join(PRESET_NAMES)} "
        "or square(w,h) / kagome(rows,cols,style) / lieb(w,h,style)"
    )


def from_edge_list(name: str, edges, positions=None) -> Lattice:
    """Small ad-hoc cluster (chains, stars, cycles) for operator checks."""
    edges = tuple(sorted((min(i, j), max(i, j)) for i, j in edges))
    n = 1 + max(max(e) for e in edges) if edges else 1
    if positions is None:
        ang = 2 * math.pi / max(n, 3)
        positions = [(math.cos(ang * i), math.sin(ang * i)) for i in range(n)]
    positions = np.asarray(positions, dtype=float)
    layers = color_edges(n, edges)
    groups = assign_ancillas(n, edges, "per_edge")
    boundary = outer_boundary_sites(positions, edges)
    return Lattice(
        name=name, positions=positions, edges=edges,
        edge_layer=tuple(layers), ancilla_of_edge=groups, boundary=boundary,
    )


def chain(n: int) -> Lattice:
    return from_edge_list(
        f"chain{n}", [(i, i + 1) for i in range(n - 1)],
        positions=[(float(i), 0.0) for i in range(n)],
    )


def cycle_graph(n: int) -> Lattice:
    return from_edge_list(
        f"cycle{n}", [(i, (i + 1) % n) for i in range(n)],
    )


def star(leaves: int) -> Lattice:
    pos = [(0.0, 0.0)] + [
        (math.cos(2 * math.pi * k / leaves), math.sin(2 * math.pi * k / leaves))
        for k in range(leaves)
    ]
    return from_edge_list(
        f"star{leaves}", [(0, k + 1) for k in range(leaves)], positions=pos
    )


def cross5() -> Lattice:
    """Centre site with four arms (the 5-site Lieb-style cross)."""
    pos = [(0.0, 0.0), (1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)]
    return from_edge_list(
        "cross5", [(0, 1), (0, 2), (0, 3), (0, 4)], positions=pos
    )
