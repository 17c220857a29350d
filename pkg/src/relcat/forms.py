"""Closed 1-forms as simplicial 1-cocycles.

A continuous closed 1-form is a family of local potentials with locally
constant differences; its simplicial shadow is the edge cochain of potential
differences, and both induce the same period homomorphism.  That shadow is
what this module stores: one exact rational per oriented edge (i < j), with
the reversed edge carrying the negation, subject to the cocycle law on every
2-simplex.

Classes whose period lattice has rank above one cannot be realized by a
single rational cochain (finitely generated subgroups of ℚ are cyclic), so
they are modeled by tuples of rational forms read as a formal combination
with ℚ-independent real weights.  Every function below accepts either a
single ``OneForm`` or a sequence of them; periods then take values in ℚ^s.

The deck labeling sends each oriented edge to coordinates in the quotient of
first homology by the kernel of the period pairing; it is normalized by a
breadth-first spanning forest rooted at the least vertex of each component,
which fixes the labeling uniquely.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Mapping, Sequence

from . import linalg
from .complexes import SimplicialPair, Simplex
from .errors import ValidationError

Edge = tuple[int, int]
RationalTuple = tuple[Fraction, ...]


@dataclass(frozen=True)
class OneForm:
    """Real-valued simplicial 1-cochain; closedness is checked by validate()."""

    pair: SimplicialPair
    values: Mapping[Edge, Fraction]

    def __post_init__(self):
        missing = [e for e in self.pair.edges() if e not in self.values]
        if missing:
            raise ValidationError(f"missing edge values: {missing[:5]}")
        extra = [e for e in self.values if not self.pair.has(e)]
        if extra:
            raise ValidationError(f"values on non-edges: {extra[:5]}")

    def value(self, u: int, v: int) -> Fraction:
        """Value on the oriented edge u -> v (negated when u > v)."""
        if u < v:
            return Fraction(self.values[(u, v)])
        if v < u:
            return -Fraction(self.values[(v, u)])
        return Fraction(0)

    def __add__(self, other: "OneForm") -> "OneForm":
        if other.pair is not self.pair and other.pair != self.pair:
            raise ValidationError("forms live on different complexes")
        return OneForm(
            self.pair,
            {e: self.values[e] + other.values[e] for e in self.pair.edges()},
        )

    def __neg__(self) -> "OneForm":
        return OneForm(self.pair, {e: -v for e, v in self.values.items()})

    def scale(self, c) -> "OneForm":
        c = Fraction(c)
        return OneForm(self.pair, {e: c * v for e, v in self.values.items()})

    def is_zero(self) -> bool:
        return not any(self.values.values())


@dataclass(frozen=True)
class EdgePath:
    """Vertex sequence whose consecutive pairs span edges of the complex."""

    pair: SimplicialPair
    vertices: tuple[int, ...]

    def __post_init__(self):
        for u, v in zip(self.vertices, self.vertices[1:]):
            if u != v and not self.pair.has((min(u, v), max(u, v))):
                raise ValidationError(f"path step {u}->{v} is not an edge")

    @property
    def closed(self) -> bool:
        return len(self.vertices) >= 1 and self.vertices[0] == self.vertices[-1]

    def reversed(self) -> "EdgePath":
        return EdgePath(self.pair, tuple(reversed(self.vertices)))


def _as_forms(form) -> tuple[OneForm, ...]:
    if isinstance(form, OneForm):
        return (form,)
    forms = tuple(form)
    if not forms:
        raise ValidationError("empty form tuple")
    base = forms[0].pair
    if any(f.pair != base for f in forms[1:]):
        raise ValidationError("form tuple components live on different complexes")
    return forms


def validate(form: OneForm) -> list[Simplex]:
    """2-simplices violating the cocycle law; empty list means ok.

    The law ω(b,c) - ω(a,c) + ω(a,b) = 0 is the simplicial shadow of the
    defining locally-constant-difference condition.
    """
    violations = []
    for a, b, c in form.pair.simplices(2):
        if form.value(b, c) - form.value(a, c) + form.value(a, b):
            violations.append((a, b, c))
    return violations


def d(pair: SimplicialPair, potential: Mapping[int, Fraction]) -> OneForm:
    """Exact form of a vertex potential: ω(i, j) = potential(j) - potential(i)."""
    missing = [v for v in pair.vertices() if v not in potential]
    if missing:
        raise ValidationError(f"potential missing vertices: {missing[:5]}")
    values = {
        (i, j): Fraction(potential[j]) - Fraction(potential[i])
        for i, j in pair.edges()
    }
    return OneForm(pair, values)


def integrate(form: OneForm, path) -> Fraction:
    """Line integral along an edge path: the sum of oriented edge values."""
    if not isinstance(path, EdgePath):
        path = EdgePath(form.pair, tuple(path))
    total = Fraction(0)
    for u, v in zip(path.vertices, path.vertices[1:]):
        total += form.value(u, v)
    return total


def chain_integrate(form: OneForm, chain: Mapping[Simplex, Fraction]) -> Fraction:
    """Integral against a 1-chain given on canonical (i < j) edges."""
    total = Fraction(0)
    for edge, coeff in chain.items():
        total += coeff * form.value(edge[0], edge[1])
    return total


def _tuple_integrate(forms: Sequence[OneForm], path) -> RationalTuple:
    return tuple(integrate(f, path) for f in forms)


class _SpanningForest:
    """Depth-first spanning forest, descending into least neighbors first.

    Depth-first from the least vertex reproduces the path tree {01, 12}
    on a triangle boundary, which fixes the documented loop basis.
    """

    def __init__(self, pair: SimplicialPair):
        adjacency: dict[int, list[int]] = {v: [] for v in pair.vertices()}
        for u, v in pair.edges():
            adjacency[u].append(v)
            adjacency[v].append(u)
        for nbrs in adjacency.values():
            nbrs.sort(reverse=True)
        self.pair = pair
        self.parent: dict[int, int | None] = {}
        self.roots: list[int] = []
        self.component: dict[int, int] = {}
        self.tree_edges: set[Edge] = set()
        for v in pair.vertices():
            if v in self.parent:
                continue
            self.roots.append(v)
            self.parent[v] = None
            self.component[v] = len(self.roots) - 1
            stack = [(nbr, v) for nbr in adjacency[v]]
            while stack:
                cur, par = stack.pop()
                if cur in self.parent:
                    continue
                self.parent[cur] = par
                self.component[cur] = self.component[par]
                self.tree_edges.add((min(cur, par), max(cur, par)))
                stack.extend((nbr, cur) for nbr in adjacency[cur])

    def path_to_root(self, v: int) -> list[int]:
        out = [v]
        while self.parent[out[-1]] is not None:
            out.append(self.parent[out[-1]])
        return out

    def non_tree_edges(self) -> list[Edge]:
        return [e for e in self.pair.edges() if e not in self.tree_edges]

    def fundamental_loop(self, edge: Edge) -> EdgePath:
        """Loop of a non-tree edge (u, v): root to v in the tree, v -> u

        across the edge, then u back to the root."""
        u, v = edge
        up = self.path_to_root(v)
        down = self.path_to_root(u)
        return EdgePath(self.pair, tuple(reversed(up)) + tuple(down))

    def potentials(self, forms: Sequence[OneForm]) -> dict[int, RationalTuple]:
        """Tree potential per vertex, zero at each component root."""
        phi: dict[int, RationalTuple] = {}
        for v in self.pair.vertices():
            path = list(reversed(self.path_to_root(v)))
            phi[v] = _tuple_integrate(forms, path)
        return phi


def _lattice_basis(
    generators: Sequence[RationalTuple], width: int
) -> tuple[RationalTuple, ...]:
    """ℤ-basis (row Hermite form) of the subgroup of ℚ^width they generate."""
    nonzero = [g for g in generators if any(g)]
    if not nonzero:
        return ()
    denom = lcm(*(x.denominator for g in nonzero for x in g))
    rows = [[int(x * denom) for x in g] for g in nonzero]
    rows = _integer_hermite(rows)
    return tuple(
        tuple(Fraction(x, denom) for x in row) for row in rows if any(row)
    )


def _integer_hermite(rows: list[list[int]]) -> list[list[int]]:
    """Row-style Hermite normal form by exact gcd elimination."""
    rows = [list(r) for r in rows]
    width = len(rows[0])
    r = 0
    for c in range(width):
        block = [i for i in range(r, len(rows)) if rows[i][c]]
        if not block:
            continue
        while True:
            block = [i for i in range(r, len(rows)) if rows[i][c]]
            if len(block) <= 1:
                break
            block.sort(key=lambda i: abs(rows[i][c]))
            small = block[0]
            for i in block[1:]:
                q = rows[i][c] // rows[small][c]
                rows[i] = [a - q * b for a, b in zip(rows[i], rows[small])]
        piv = block[0]
        rows[r], rows[piv] = rows[piv], rows[r]
        if rows[r][c] < 0:
            rows[r] = [-x for x in rows[r]]
        for i in range(r):
            q = rows[i][c] // rows[r][c]
            if q:
                rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return [row for row in rows[:r] if any(row)]


@dataclass(frozen=True)
class PeriodVector:
    """Periods over the spanning-forest loop basis of the cycle space.

    ``values[i]`` is the ℚ^s period tuple of ``loops[i]``; ``lattice`` is a
    ℤ-basis of the subgroup of ℚ^s the periods generate and ``rank`` its
    rank (zero exactly when the class vanishes on first homology).
    """

    loops: tuple[EdgePath, ...]
    values: tuple[RationalTuple, ...]
    lattice: tuple[RationalTuple, ...]

    @property
    def rank(self) -> int:
        return len(self.lattice)

    def scalar_values(self) -> tuple[Fraction, ...]:
        if any(len(v) != 1 for v in self.values):
            raise ValidationError("scalar periods need a single-component form")
        return tuple(v[0] for v in self.values)


def periods(form) -> PeriodVector:
    """Period homomorphism data of a form (or tuple of forms)."""
    forms = _as_forms(form)
    forest = _SpanningForest(forms[0].pair)
    loops = tuple(forest.fundamental_loop(e) for e in forest.non_tree_edges())
    values = tuple(_tuple_integrate(forms, lp) for lp in loops)
    lattice = _lattice_basis(values, len(forms))
    return PeriodVector(loops, values, lattice)


def primitive(form: OneForm) -> dict[int, Fraction] | None:
    """Vertex potential f with d(f) = form, or None when a period is nonzero.

    Normalized to vanish at the least vertex of each connected component.
    """
    forest = _SpanningForest(form.pair)
    for e in forest.non_tree_edges():
        if integrate(form, forest.fundamental_loop(e)):
            return None
    return {v: phi[0] for v, phi in forest.potentials([form]).items()}


def restrict(form: OneForm, sub: SimplicialPair) -> OneForm:
    """Restriction realizing the class pulled back along the inclusion."""
    if not sub.is_subcomplex_of(form.pair):
        raise ValidationError("restriction target is not a subcomplex")
    return OneForm(sub, {e: form.values[e] for e in sub.edges()})


@dataclass(frozen=True)
class DeckLabeling:
    """Edge labels in ℤ^r for the deck group of the period-kernel covering.

    Labels vanish on spanning-forest edges, sum around a loop to the loop's
    class in the deck group, and pair with ``lattice`` back to the loop's
    ℚ^s period tuple.
    """

    pair: SimplicialPair
    lattice: tuple[RationalTuple, ...]
    tree_potential: Mapping[int, RationalTuple]
    labels: Mapping[Edge, tuple[int, ...]]
    tree_edges: frozenset[Edge]

    @property
    def rank(self) -> int:
        return len(self.lattice)

    @property
    def components(self) -> int:
        return len(self.lattice[0]) if self.lattice else 1

    def label(self, u: int, v: int) -> tuple[int, ...]:
        """Label of the oriented edge u -> v."""
        if u == v:
            return (0,) * self.rank
        if u < v:
            return self.labels[(u, v)]
        return tuple(-x for x in self.labels[(v, u)])

    def pairing(self, label: Sequence[int]) -> RationalTuple:
        """Period tuple of a deck element given in lattice coordinates."""
        width = len(self.lattice[0]) if self.lattice else 1
        out = [Fraction(0)] * width
        for coeff, base in zip(label, self.lattice):
            for i, x in enumerate(base):
                out[i] += coeff * x
        return tuple(out)

    def path_label(self, vertices: Sequence[int]) -> tuple[int, ...]:
        total = [0] * self.rank
        for u, v in zip(vertices, vertices[1:]):
            for i, x in enumerate(self.label(u, v)):
                total[i] += x
        return tuple(total)


def deck_labeling(form) -> DeckLabeling:
    """Spanning-forest-normalized labels of all edges in the deck group."""
    forms = _as_forms(form)
    pair = forms[0].pair
    forest = _SpanningForest(pair)
    phi = forest.potentials(forms)
    pv = periods(forms if len(forms) > 1 else forms[0])
    lattice = pv.lattice
    r = len(lattice)
    width = len(forms)

    coords_cache: dict[RationalTuple, tuple[int, ...]] = {}

    def coords(vec: RationalTuple) -> tuple[int, ...]:
        if not any(vec):
            return (0,) * r
        if vec in coords_cache:
            return coords_cache[vec]
        basis_rows = [list(row) for row in lattice]
        system = [[basis_rows[j][i] for j in range(r)] for i in range(width)]
        sol = linalg.solve(system, list(vec), r, Fraction(1))
        if sol is None or any(x.denominator != 1 for x in sol):
            raise ValidationError("period value outside its own lattice")
        out = tuple(int(x) for x in sol)
        coords_cache[vec] = out
        return out

    labels: dict[Edge, tuple[int, ...]] = {}
    for u, v in pair.edges():
        delta = tuple(
            phi[u][i] + f.value(u, v) - phi[v][i] for i, f in enumerate(forms)
        )
        labels[(u, v)] = coords(delta)
    return DeckLabeling(pair, lattice, phi, labels, frozenset(forest.tree_edges))


def subdivide_form(form: OneForm, sdmap) -> OneForm:
    """Transport a form onto a barycentric subdivision along last_vertex.

    The transported cochain represents the pulled-back class, so periods,
    deck labelings and every derived bound agree with the base form.
    """
    values = {}
    for edge in sdmap.subdivided.edges():
        image = sdmap.image_simplex(edge)
        if image is None:
            values[edge] = Fraction(0)
        else:
            a, b = sdmap.last_vertex(edge[0]), sdmap.last_vertex(edge[1])
            values[edge] = form.value(a, b)
    return OneForm(sdmap.subdivided, values)


def form_to_json(form: OneForm) -> dict:
    return {"edges": {f"{i}-{j}": str(v) for (i, j), v in sorted(form.values.items())}}


def form_from_json(pair: SimplicialPair, data: dict) -> OneForm:
    try:
        edges = data["edges"]
    except KeyError as exc:
        raise ValidationError("one-form JSON missing 'edges'") from exc
    values = {}
    for key, raw in edges.items():
        try:
            i, j = (int(x) for x in key.split("-"))
            values[(i, j)] = Fraction(raw)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"bad edge entry {key!r}: {raw!r}") from exc
    return OneForm(pair, values)


def load_form(pair: SimplicialPair, path: str) -> OneForm:
    with open(path, "r", encoding="utf-8") as fh:
        return form_from_json(pair, json.load(fh))
