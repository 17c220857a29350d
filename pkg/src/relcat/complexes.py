"""Finite simplicial pairs and their exact rational (co)chain complexes.

A pair (X, B) is stored as face-closed sets of strictly increasing vertex
tuples; B is a subcomplex of X.  Simplices carry the canonical increasing
orientation, so boundary signs follow the standard ordered convention and
cup-product values are deterministic.  Relative (co)chains are modeled as
(co)chains vanishing on B-simplices: relative matrices simply drop the
B rows and columns.

All values are immutable after construction and every operation is a pure
function of its inputs, so concurrent evaluation is safe.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations

from . import linalg
from .errors import ValidationError

Simplex = tuple[int, ...]


def _canonical(raw) -> Simplex:
    verts = tuple(int(v) for v in raw)
    if len(set(verts)) != len(verts):
        raise ValidationError(f"repeated vertex in simplex {list(raw)}")
    if any(v < 0 for v in verts):
        raise ValidationError(f"negative vertex index in simplex {list(raw)}")
    return tuple(sorted(verts))


def closure(simplices) -> set[Simplex]:
    out: set[Simplex] = set()
    for s in simplices:
        s = _canonical(s)
        for k in range(1, len(s) + 1):
            out.update(combinations(s, k))
    return out


@dataclass(frozen=True)
class SimplicialPair:
    """Finite abstract simplicial pair (X, B)."""

    vertex_count: int
    simplex_set: frozenset[Simplex]
    b_set: frozenset[Simplex]
    _by_dim: dict = field(default_factory=dict, repr=False, compare=False)
    _index: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def dimension(self) -> int:
        return max((len(s) - 1 for s in self.simplex_set), default=-1)

    def simplices(self, degree: int, relative: bool = False) -> list[Simplex]:
        """Sorted degree-k simplices; relative mode omits B-simplices."""
        key = (degree, relative)
        if key not in self._by_dim:
            items = sorted(
                s
                for s in self.simplex_set
                if len(s) == degree + 1 and not (relative and s in self.b_set)
            )
            self._by_dim[key] = items
        return self._by_dim[key]

    def index(self, degree: int, relative: bool = False) -> dict[Simplex, int]:
        key = (degree, relative)
        if key not in self._index:
            self._index[key] = {
                s: i for i, s in enumerate(self.simplices(degree, relative))
            }
        return self._index[key]

    def vertices(self) -> list[int]:
        return [s[0] for s in self.simplices(0)]

    def edges(self) -> list[Simplex]:
        return self.simplices(1)

    def has(self, simplex) -> bool:
        return tuple(sorted(simplex)) in self.simplex_set

    def in_b(self, simplex) -> bool:
        return tuple(sorted(simplex)) in self.b_set

    def is_subcomplex_of(self, other: "SimplicialPair") -> bool:
        return self.simplex_set <= other.simplex_set

    def maximal_simplices(self) -> list[Simplex]:
        return _maximal(self.simplex_set)

    def maximal_b_simplices(self) -> list[Simplex]:
        return _maximal(self.b_set)

    def boundary_matrix(self, degree: int, relative: bool = False) -> linalg.Matrix:
        """Matrix of ∂_degree: C_degree -> C_{degree-1} over ℚ.

        Rows are (degree-1)-simplices, columns degree-simplices; in relative
        mode both index sets omit B and boundary terms landing in B vanish.
        """
        rows = self.simplices(degree - 1, relative)
        cols = self.simplices(degree, relative)
        row_index = self.index(degree - 1, relative)
        mat = [[Fraction(0)] * len(cols) for _ in rows]
        for j, s in enumerate(cols):
            for i, face in boundary_faces(s):
                r = row_index.get(face)
                if r is not None:
                    mat[r][j] = Fraction(-1) ** i
        return mat

    def coboundary_matrix(self, degree: int, relative: bool = False) -> linalg.Matrix:
        """Matrix of δ_degree: C^degree -> C^{degree+1} over ℚ (transpose of ∂)."""
        b = self.boundary_matrix(degree + 1, relative)
        cols = self.simplices(degree + 1, relative)
        rows = self.simplices(degree, relative)
        return [[b[i][j] for i in range(len(rows))] for j in range(len(cols))]

    def euler_characteristic(self, relative: bool = False) -> int:
        return sum(
            (-1) ** k * len(self.simplices(k, relative))
            for k in range(self.dimension + 1)
        )

    def b_pair(self) -> "SimplicialPair":
        """The subcomplex B as an absolute pair (B, ∅) on the same vertices."""
        return SimplicialPair(self.vertex_count, self.b_set, frozenset())


def boundary_faces(s: Simplex):
    for i in range(len(s)):
        yield i, s[:i] + s[i + 1 :]


def _maximal(simplices) -> list[Simplex]:
    by_dim: dict[int, set[Simplex]] = {}
    for s in simplices:
        by_dim.setdefault(len(s), set()).add(s)
    out = []
    for k, items in by_dim.items():
        larger = by_dim.get(k + 1, set())
        uppers = {f for t in larger for f in combinations(t, k)}
        out.extend(s for s in items if s not in uppers)
    return sorted(out)


def build_pair(raw, b_raw=(), vertex_count: int | None = None) -> SimplicialPair:
    """Close the given simplices under faces and validate B as a subcomplex."""
    simplices = closure(raw)
    b_simplices = closure(b_raw)
    bad = sorted(b_simplices - simplices)
    if bad:
        raise ValidationError(f"B-simplices not in X: {bad}")
    max_vertex = max((s[-1] for s in simplices), default=-1)
    if vertex_count is None:
        vertex_count = max_vertex + 1
    elif max_vertex >= vertex_count:
        raise ValidationError(
            f"vertex index {max_vertex} exceeds vertex_count {vertex_count}"
        )
    return SimplicialPair(vertex_count, frozenset(simplices), frozenset(b_simplices))


def betti(pair: SimplicialPair, degree: int, relative: bool = False) -> int:
    """rank H_degree(X; ℚ) or H_degree(X, B; ℚ) by exact rank-nullity."""
    if degree < 0 or degree > pair.dimension:
        return 0
    n = len(pair.simplices(degree, relative))
    r_in = linalg.rank(pair.boundary_matrix(degree, relative)) if degree > 0 else 0
    r_out = linalg.rank(pair.boundary_matrix(degree + 1, relative))
    return n - r_in - r_out


def product_pair(p: SimplicialPair, q: SimplicialPair) -> SimplicialPair:
    """Staircase (order-complex) triangulation of |X| x |Y|.

    Vertices are pairs (a, b) numbered a * q.vertex_count + b; the simplices
    are the monotone chains in the product vertex order whose projections
    are simplices of the factors.  B of the product is (B x Y) ∪ (X x D).
    """
    nq = q.vertex_count

    def vid(a: int, b: int) -> int:
        return a * nq + b

    def staircases(sigma: Simplex, tau: Simplex):
        ls, lt = len(sigma) - 1, len(tau) - 1
        for right_steps in combinations(range(ls + lt), ls):
            chain = [vid(sigma[0], tau[0])]
            i = j = 0
            for step in range(ls + lt):
                if step in right_steps:
                    i += 1
                else:
                    j += 1
                chain.append(vid(sigma[i], tau[j]))
            yield tuple(chain)

    def all_staircases(a_max, b_max):
        cells = []
        for sigma in a_max:
            for tau in b_max:
                cells.extend(staircases(sigma, tau))
        return cells

    top = all_staircases(p.maximal_simplices(), q.maximal_simplices())
    b_top = all_staircases(p.maximal_b_simplices(), q.maximal_simplices())
    b_top += all_staircases(p.maximal_simplices(), q.maximal_b_simplices())
    return build_pair(top, b_top, vertex_count=p.vertex_count * nq)


@dataclass(frozen=True)
class SubdivisionMap:
    """Carrier data of one barycentric subdivision.

    ``barycenter_of`` maps each subdivided vertex to the simplex it
    subdivides; ``last_vertex`` composes that with the max-vertex map,
    which is the standard simplicial homotopy inverse used to transport
    cochains back onto the subdivision.
    """

    base: SimplicialPair
    subdivided: SimplicialPair
    barycenter_of: dict[int, Simplex]
    vertex_id: dict[Simplex, int]

    def last_vertex(self, sd_vertex: int) -> int:
        return self.barycenter_of[sd_vertex][-1]

    def image_simplex(self, sd_simplex: Simplex) -> Simplex | None:
        """Image under the last-vertex map; None if the image degenerates."""
        image = tuple(self.last_vertex(v) for v in sd_simplex)
        if len(set(image)) != len(image):
            return None
        return tuple(sorted(image))

    def pull_back_cochain(self, values: dict[Simplex, Fraction], degree: int):
        """Transport a base k-cochain to the subdivision along last_vertex.

        The last-vertex map is monotone on each chain, so image tuples are
        already increasing and no orientation signs appear.
        """
        out = {}
        for s in self.subdivided.simplices(degree):
            image = self.image_simplex(s)
            val = values.get(image, Fraction(0)) if image is not None else Fraction(0)
            if val:
                out[s] = val
        return out

    def subdivide_path(self, vertices) -> list[int]:
        """Route a base edge path through the edge barycenters."""
        verts = list(vertices)
        if not verts:
            return []
        out = [self.vertex_id[(verts[0],)]]
        for u, v in zip(verts, verts[1:]):
            if u == v:
                continue
            edge = (min(u, v), max(u, v))
            out.append(self.vertex_id[edge])
            out.append(self.vertex_id[(v,)])
        return out


def barycentric_subdivide(p: SimplicialPair) -> tuple[SimplicialPair, SubdivisionMap]:
    """Barycentric subdivision plus the carrier data to transport cochains."""
    all_simplices = sorted(p.simplex_set, key=lambda s: (len(s), s))
    vertex_id = {s: i for i, s in enumerate(all_simplices)}
    barycenter_of = {i: s for s, i in vertex_id.items()}

    def flags(simplices):
        cells = []
        for s in _maximal(simplices):
            for perm in permutations(s):
                chain = tuple(
                    vertex_id[tuple(sorted(perm[: k + 1]))] for k in range(len(s))
                )
                cells.append(chain)
        return cells

    sd = build_pair(
        flags(p.simplex_set), flags(p.b_set), vertex_count=len(all_simplices)
    )
    return sd, SubdivisionMap(p, sd, barycenter_of, vertex_id)


def pair_to_json(pair: SimplicialPair) -> dict:
    return {
        "vertices": pair.vertex_count,
        "simplices": [list(s) for s in pair.maximal_simplices()],
        "B": [list(s) for s in pair.maximal_b_simplices()],
    }


def pair_from_json(data: dict) -> SimplicialPair:
    try:
        raw = data["simplices"]
    except KeyError as exc:
        raise ValidationError("complex JSON missing 'simplices'") from exc
    return build_pair(raw, data.get("B", ()), vertex_count=data.get("vertices"))


def load_pair(path: str) -> SimplicialPair:
    with open(path, "r", encoding="utf-8") as fh:
        return pair_from_json(json.load(fh))


def matrix_to_strings(mat: linalg.Matrix) -> list[list[str]]:
    """Rational matrix dump as arrays of "p/q" strings."""
    return [[str(x) for x in row] for row in mat]
