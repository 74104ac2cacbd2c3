"""Glued-tetrahedra model of closed oriented 3-manifold triangulations.

A triangulation is a list of abstract tetrahedra with all four faces glued
in pairs.  Vertices, edges and faces of the quotient pseudo-manifold are
orbits of local simplices under the gluing maps, so two distinct edge
classes may well join the same pair of vertex classes.

Conventions fixed here and relied on everywhere downstream:

* Each tetrahedron has vertex slots 0..3; "face k" is the face opposite
  slot k.  A gluing of face k carries a permutation ``perm`` of all four
  slots sending local slots to the neighbor's slots, with ``perm[k]`` the
  neighbor's glued face.
* Orientation signs are propagated from tetrahedron 0 (sign +1).  Across a
  gluing with permutation parity p the coherence relation
  ``s1 * s2 * (-1)**p == -1`` must hold; the positively oriented vertex
  ordering of a tetrahedron is its stored slot order for sign +1 and the
  order with the first two slots swapped for sign -1.
* Every edge class carries a canonical direction: the (tail, head) slot
  direction of its first occurrence in scan order.  Directed occurrences
  are tracked so any local edge knows its sign relative to the class.
* An edge-star contribution orders the two off-edge slots (P, Q) so that
  (P, Q, tail, head) is an even permutation of the tetrahedron's positive
  ordering.  Swapping P and Q, or reversing the edge, flips the sign of
  every angle value built on top of this.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ParseError, ValidationError

Perm = tuple[int, int, int, int]

IDENTITY: Perm = (0, 1, 2, 3)

FILE_MAGIC = "pentachain-tri v1"


def compose(p: Perm, q: Perm) -> Perm:
    """Composition p after q: (p∘q)[i] = p[q[i]]."""
    return (p[q[0]], p[q[1]], p[q[2]], p[q[3]])


def inverse(p: Perm) -> Perm:
    out = [0, 0, 0, 0]
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def parity(seq: Sequence[int]) -> int:
    """0 for even permutations, 1 for odd."""
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return inv & 1


def transposition(a: int, b: int) -> Perm:
    out = [0, 1, 2, 3]
    out[a], out[b] = out[b], out[a]
    return tuple(out)


@dataclass(frozen=True)
class Gluing:
    """One face gluing: target tetrahedron and the 4-slot permutation."""

    neighbor: int
    perm: Perm


@dataclass(frozen=True)
class VertexClass:
    id: int
    members: tuple[tuple[int, int], ...]  # (tet, slot)

    @property
    def degree(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class EdgeClass:
    id: int
    members: tuple[tuple[int, tuple[int, int]], ...]  # (tet, (tail_slot, head_slot))
    tail: int  # vertex class ids
    head: int

    @property
    def degree(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class FaceClass:
    id: int
    members: tuple[tuple[int, int], ...]  # (tet, opposite slot)
    boundary: tuple[int, tuple[int, int, int]]  # first occurrence, ascending slots
    vertices: tuple[int, int, int]  # vertex class ids along the boundary order


@dataclass(frozen=True)
class EdgeStar:
    """All incidences of tetrahedra around an edge class.

    Each contribution is (tet, (P, Q), (tail_slot, head_slot)) with the
    even-permutation ordering rule applied; a tetrahedron meeting the edge
    class along several of its own edges appears once per incidence.
    """

    edge: EdgeClass
    contributions: tuple[tuple[int, tuple[int, int], tuple[int, int]], ...]


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        parent = self.parent
        root = x
        while parent.setdefault(root, root) != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


_SLOT_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


class Triangulation:
    """Validated closed oriented glued triangulation with quotient classes.

    Immutable after construction; bistellar moves build new instances.
    """

    def __init__(self, tets: Sequence[Sequence[Gluing]]):
        self.tets: tuple[tuple[Gluing, ...], ...] = tuple(
            tuple(face for face in row) for row in tets
        )
        if not self.tets:
            raise ValidationError("empty triangulation")
        self._validate_gluings()
        self.orientation_signs = self._propagate_signs()
        self._build_vertex_classes()
        self._build_edge_classes()
        self._build_face_classes()

    # -- validation ---------------------------------------------------

    def _validate_gluings(self):
        n = len(self.tets)
        for t, row in enumerate(self.tets):
            if len(row) != 4:
                raise ValidationError(f"tetrahedron {t} must glue exactly 4 faces")
            for k, g in enumerate(row):
                if not isinstance(g, Gluing):
                    raise ValidationError(f"tetrahedron {t} face {k} is not glued")
                if not 0 <= g.neighbor < n:
                    raise ValidationError(f"tetrahedron {t} face {k} glues to missing tetrahedron {g.neighbor}")
                if sorted(g.perm) != [0, 1, 2, 3]:
                    raise ValidationError(f"tetrahedron {t} face {k} has invalid permutation {g.perm}")
                partner = self.tets[g.neighbor][g.perm[k]]
                if not isinstance(partner, Gluing) or partner.neighbor != t or partner.perm != inverse(g.perm):
                    raise ValidationError(
                        f"gluing of tetrahedron {t} face {k} is not involutive"
                    )

    def _propagate_signs(self) -> tuple[int, ...]:
        n = len(self.tets)
        signs = [0] * n
        for start in range(n):
            if signs[start]:
                continue
            signs[start] = 1
            stack = [start]
            while stack:
                t = stack.pop()
                for g in self.tets[t]:
                    # coherence: s_t * s_n * (-1)^parity(perm) == -1
                    needed = -signs[t] * (-1 if parity(g.perm) else 1)
                    if signs[g.neighbor] == 0:
                        signs[g.neighbor] = needed
                        stack.append(g.neighbor)
                    elif signs[g.neighbor] != needed:
                        raise ValidationError(
                            "gluing table is not orientable: orientation propagation "
                            f"is inconsistent at tetrahedron {g.neighbor}"
                        )
        return tuple(signs)

    # -- quotient classes ---------------------------------------------

    def _build_vertex_classes(self):
        uf = _UnionFind()
        for t, row in enumerate(self.tets):
            for k, g in enumerate(row):
                for s in range(4):
                    if s != k:
                        uf.union((t, s), (g.neighbor, g.perm[s]))
        class_of: dict[tuple[int, int], int] = {}
        members: list[list[tuple[int, int]]] = []
        root_id: dict = {}
        for t in range(len(self.tets)):
            for s in range(4):
                root = uf.find((t, s))
                cid = root_id.get(root)
                if cid is None:
                    cid = len(members)
                    root_id[root] = cid
                    members.append([])
                class_of[(t, s)] = cid
                members[cid].append((t, s))
        self._vertex_of = class_of
        self.vertices = tuple(
            VertexClass(i, tuple(m)) for i, m in enumerate(members)
        )

    def _build_edge_classes(self):
        uf = _UnionFind()
        for t, row in enumerate(self.tets):
            for k, g in enumerate(row):
                for i in range(4):
                    if i == k:
                        continue
                    for j in range(4):
                        if j != k and j != i:
                            uf.union((t, i, j), (g.neighbor, g.perm[i], g.perm[j]))
        canonical_root: dict = {}
        order: list = []
        for t in range(len(self.tets)):
            for i, j in _SLOT_PAIRS:
                root = uf.find((t, i, j))
                mirror = uf.find((t, j, i))
                if root == mirror:
                    raise ValidationError(
                        f"edge ({t},{i},{j}) is identified with its own reverse; "
                        "the quotient is not an oriented manifold along this edge"
                    )
                if root not in canonical_root and mirror not in canonical_root:
                    canonical_root[root] = len(order)
                    order.append(root)
        edge_of: dict[tuple[int, int, int], tuple[int, int]] = {}
        members: list[list[tuple[int, tuple[int, int]]]] = [[] for _ in order]
        for t in range(len(self.tets)):
            for i, j in _SLOT_PAIRS:
                root = uf.find((t, i, j))
                if root in canonical_root:
                    eid, direction = canonical_root[root], (i, j)
                else:
                    eid, direction = canonical_root[uf.find((t, j, i))], (j, i)
                edge_of[(t, i, j)] = (eid, 1 if direction == (i, j) else -1)
                edge_of[(t, j, i)] = (eid, 1 if direction == (j, i) else -1)
                members[eid].append((t, direction))
        self._edge_of = edge_of
        edges = []
        for eid, occ in enumerate(members):
            occ.sort()
            t0, (i0, j0) = occ[0]
            edges.append(
                EdgeClass(eid, tuple(occ), self._vertex_of[(t0, i0)], self._vertex_of[(t0, j0)])
            )
        self.edges = tuple(edges)

    def _build_face_classes(self):
        uf = _UnionFind()
        for t, row in enumerate(self.tets):
            for k, g in enumerate(row):
                uf.union((t, k), (g.neighbor, g.perm[k]))
        face_of: dict[tuple[int, int], int] = {}
        members: list[list[tuple[int, int]]] = []
        root_id: dict = {}
        for t in range(len(self.tets)):
            for k in range(4):
                root = uf.find((t, k))
                cid = root_id.get(root)
                if cid is None:
                    cid = len(members)
                    root_id[root] = cid
                    members.append([])
                face_of[(t, k)] = cid
                members[cid].append((t, k))
        self._face_of = face_of
        faces = []
        for fid, occ in enumerate(members):
            t0, k0 = occ[0]
            slots = tuple(s for s in range(4) if s != k0)
            verts = tuple(self._vertex_of[(t0, s)] for s in slots)
            faces.append(FaceClass(fid, tuple(occ), (t0, slots), verts))
        self.faces = tuple(faces)

    # -- queries -------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.tets)

    def vertex_class(self, tet: int, slot: int) -> int:
        return self._vertex_of[(tet, slot)]

    def edge_class(self, tet: int, tail_slot: int, head_slot: int) -> tuple[int, int]:
        """Edge class id plus +1/-1 sign of this direction vs. canonical."""
        return self._edge_of[(tet, tail_slot, head_slot)]

    def face_class(self, tet: int, opposite_slot: int) -> int:
        return self._face_of[(tet, opposite_slot)]

    def f_vector(self) -> tuple[int, int, int, int]:
        return (len(self.vertices), len(self.edges), len(self.faces), len(self.tets))

    def positive_order(self, tet: int) -> tuple[int, int, int, int]:
        return IDENTITY if self.orientation_signs[tet] == 1 else (1, 0, 2, 3)

    def sequence_parity(self, tet: int, seq: Sequence[int]) -> int:
        """Parity of a slot sequence relative to the positive ordering."""
        pos = self.positive_order(tet)
        return parity([pos.index(s) for s in seq])

    def edge_star(self, edge: EdgeClass | int) -> EdgeStar:
        e = self.edges[edge] if isinstance(edge, int) else edge
        contributions = []
        for t, (i, j) in e.members:
            rest = [s for s in range(4) if s != i and s != j]
            if self.sequence_parity(t, (rest[0], rest[1], i, j)):
                rest.reverse()
            contributions.append((t, (rest[0], rest[1]), (i, j)))
        return EdgeStar(e, tuple(contributions))

    # -- serialization -------------------------------------------------

    def to_text(self) -> str:
        lines = [FILE_MAGIC, f"tetrahedra {len(self.tets)}"]
        for t, row in enumerate(self.tets):
            parts = " ".join(
                f"{g.neighbor}:{''.join(str(x) for x in g.perm)}" for g in row
            )
            lines.append(f"tet {t}: {parts}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Triangulation":
        lines = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if line:
                lines.append(line)
        if not lines or lines[0] != FILE_MAGIC:
            raise ParseError(f"missing header line {FILE_MAGIC!r}")
        if len(lines) < 2 or not lines[1].startswith("tetrahedra "):
            raise ParseError("missing 'tetrahedra <N>' line")
        try:
            count = int(lines[1].split()[1])
        except (IndexError, ValueError) as exc:
            raise ParseError("bad tetrahedron count") from exc
        if count <= 0:
            raise ParseError("tetrahedron count must be positive")
        if len(lines) != 2 + count:
            raise ParseError(f"expected {count} 'tet' lines, found {len(lines) - 2}")
        rows: list[list[Gluing]] = []
        for t, line in enumerate(lines[2:]):
            prefix = f"tet {t}:"
            if not line.startswith(prefix):
                raise ParseError(f"expected line starting with {prefix!r}, got {line!r}")
            fields = line[len(prefix):].split()
            if len(fields) != 4:
                raise ParseError(f"tet {t}: expected 4 gluing fields")
            row = []
            for field in fields:
                try:
                    target, perm_text = field.split(":")
                    neighbor = int(target)
                    perm = tuple(int(ch) for ch in perm_text)
                except ValueError as exc:
                    raise ParseError(f"tet {t}: bad gluing field {field!r}") from exc
                if len(perm) != 4 or sorted(perm) != [0, 1, 2, 3]:
                    raise ParseError(f"tet {t}: bad permutation in {field!r}")
                row.append(Gluing(neighbor, perm))
            rows.append(row)
        return cls(rows)

    @classmethod
    def from_file(cls, path) -> "Triangulation":
        with open(path, "r", encoding="utf-8") as handle:
            return cls.from_text(handle.read())


def build(gluings: Sequence[Sequence[Gluing]]) -> Triangulation:
    """Validate a gluing table and derive all quotient data."""
    return Triangulation(gluings)


def canonical_form(tri: Triangulation) -> tuple:
    """Label-independent encoding of the gluing table.

    Relabels tetrahedra by breadth-first search and minimizes the encoding
    over every (start tetrahedron, starting frame) choice, so two
    triangulations are combinatorially isomorphic iff their canonical forms
    are equal.  Intended for modest sizes; the search is O(T^2 * 24).
    """
    from itertools import permutations

    n = len(tri.tets)
    best = None
    for start in range(n):
        for frame in permutations(range(4)):
            table = _bfs_relabel(tri, start, frame)
            if best is None or table < best:
                best = table
    return best


def _bfs_relabel(tri: Triangulation, start: int, frame: Perm) -> tuple:
    index = {start: 0}
    slot_map = {start: frame}  # old slots -> new slots
    order = [start]
    head = 0
    out = []
    while head < len(order):
        t = order[head]
        head += 1
        sigma = slot_map[t]
        row = [None] * 4
        for s in range(4):
            g = tri.tets[t][s]
            if g.neighbor not in index:
                index[g.neighbor] = len(order)
                slot_map[g.neighbor] = compose(sigma, inverse(g.perm))
                order.append(g.neighbor)
            row[sigma[s]] = (index[g.neighbor], compose(slot_map[g.neighbor], compose(g.perm, inverse(sigma))))
        out.append(tuple(row))
    return tuple(out)


def isomorphic(a: Triangulation, b: Triangulation) -> bool:
    if a.size != b.size or a.f_vector() != b.f_vector():
        return False
    return canonical_form(a) == canonical_form(b)
