"""Finite windows into the period-kernel covering space.

The covering with deck group ℤ^r is materialized over an axis-aligned box
of deck labels: the lift of a simplex at deck element g places vertex v_i at
label g + m(v_0, v_i), and a lift exists in the window exactly when all its
vertex labels stay inside the box.  The lifted potential is the spanning
tree potential shifted by the period pairing, so deck translation by h
shifts it by the pairing of h.

A verdict produced on a window certifies only what the window sees.  The
vocabulary is therefore movable-in-window / not-movable-in-window, with an
inconclusive error whenever a carrier touches the box frontier: enlarging
the box is the only honest fix, since the infinite cover is never held in
memory.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .complexes import Simplex, SimplicialPair, build_pair
from .errors import InconclusiveError, ValidationError
from .forms import DeckLabeling, RationalTuple, _as_forms, deck_labeling

Label = tuple[int, ...]
Lift = tuple[Simplex, Label]

MOVABLE = "movable-in-window"
NOT_MOVABLE = "not-movable-in-window"


def _perm_sign(seq: Sequence[int]) -> int:
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class CoveringWindow:
    """Box truncation of the period-kernel covering of the base pair."""

    base: SimplicialPair
    labeling: DeckLabeling
    box: tuple[tuple[int, int], ...]
    pair: SimplicialPair
    vertex_lifts: tuple[tuple[int, Label], ...]
    vertex_id: Mapping[tuple[int, Label], int]
    potential: tuple[RationalTuple, ...]
    lift_of: Mapping[Simplex, Lift]

    @property
    def rank(self) -> int:
        return self.labeling.rank

    def scalar_potential(self, vid: int, weight: RationalTuple | None = None):
        f = self.potential[vid]
        if weight is None:
            return sum(f, Fraction(0))
        return sum((w * x for w, x in zip(weight, f)), Fraction(0))

    def vertex_lift_label(self, vid: int) -> Label:
        return self.vertex_lifts[vid][1]

    def lift_simplex(self, simplex: Simplex, label: Label) -> tuple[Simplex, int]:
        """Window simplex and orientation sign of the lift (simplex, label)."""
        simplex = tuple(sorted(simplex))
        v0 = simplex[0]
        ids = []
        for v in simplex:
            offset = self.labeling.label(v0, v)
            g = tuple(a + b for a, b in zip(label, offset))
            key = (v, g)
            if key not in self.vertex_id:
                raise InconclusiveError(
                    f"lift of {simplex} at {label} leaves the window box"
                )
            ids.append(self.vertex_id[key])
        order = sorted(range(len(ids)), key=lambda k: ids[k])
        window_simplex = tuple(ids[k] for k in order)
        if not self.pair.has(window_simplex):
            raise InconclusiveError(
                f"lift of {simplex} at {label} is not materialized"
            )
        return window_simplex, _perm_sign([ids[k] for k in order] and ids)

    def frontier_distance(self, label: Label) -> int:
        return min(
            min(g - lo, hi - g) for g, (lo, hi) in zip(label, self.box)
        ) if self.box else 1

    def sublevel_vertices(
        self, cutoff: Fraction, weight: RationalTuple | None = None
    ) -> frozenset[int]:
        return frozenset(
            vid
            for vid in range(len(self.vertex_lifts))
            if self.scalar_potential(vid, weight) < cutoff
        )


def build_window(form, box) -> CoveringWindow:
    """Materialize all lifts whose vertex labels fall inside the box.

    For a class with trivial period lattice the covering is trivial and the
    window is the base complex itself (the box is ignored).
    """
    forms = _as_forms(form)
    labeling = deck_labeling(forms if len(forms) > 1 else forms[0])
    return build_window_from_labeling(labeling, box)


def build_window_from_labeling(labeling: DeckLabeling, box) -> CoveringWindow:
    base = labeling.pair
    r = labeling.rank
    if r == 0:
        box_t: tuple[tuple[int, int], ...] = ()
        labels = [()]
    else:
        box_t = tuple((int(lo), int(hi)) for lo, hi in box)
        if len(box_t) != r:
            raise ValidationError(f"box needs {r} coordinate ranges")
        if any(lo > hi for lo, hi in box_t):
            raise ValidationError("empty deck box")
        labels = [
            tuple(g)
            for g in itertools.product(*(range(lo, hi + 1) for lo, hi in box_t))
        ]

    vertex_lifts = sorted(
        ((v, g) for v in base.vertices() for g in labels), key=lambda p: (p[1], p[0])
    )
    vertex_id = {p: i for i, p in enumerate(vertex_lifts)}

    def in_box(g: Label) -> bool:
        return all(lo <= x <= hi for x, (lo, hi) in zip(g, box_t))

    window_simplices = []
    window_b = []
    lift_of: dict[Simplex, Lift] = {}
    for k in range(base.dimension + 1):
        for simplex in base.simplices(k):
            v0 = simplex[0]
            offsets = [labeling.label(v0, v) for v in simplex]
            for g in labels:
                vertex_labels = [
                    tuple(a + b for a, b in zip(g, off)) for off in offsets
                ]
                if not all(in_box(h) for h in vertex_labels):
                    continue
                ids = tuple(
                    sorted(vertex_id[(v, h)] for v, h in zip(simplex, vertex_labels))
                )
                window_simplices.append(ids)
                lift_of[ids] = (simplex, g)
                if base.in_b(simplex):
                    window_b.append(ids)

    pair = build_pair(
        window_simplices, window_b, vertex_count=len(vertex_lifts)
    )
    phi = labeling.tree_potential
    width = len(next(iter(phi.values()))) if phi else 1
    potential = []
    for v, g in vertex_lifts:
        shift = labeling.pairing(g) if r else (Fraction(0),) * width
        potential.append(tuple(a + b for a, b in zip(phi[v], shift)))
    return CoveringWindow(
        base,
        labeling,
        box_t,
        pair,
        tuple(vertex_lifts),
        vertex_id,
        tuple(potential),
        lift_of,
    )


@dataclass(frozen=True)
class InfinityNeighborhood:
    """Maximal subcomplex on the vertices with lifted potential below c."""

    window: CoveringWindow
    cutoff: Fraction
    weight: RationalTuple | None
    vertices: frozenset[int]
    simplices: frozenset[Simplex]

    @property
    def empty(self) -> bool:
        return not self.vertices


def neighborhood_of_infinity(
    window: CoveringWindow, cutoff, weight: RationalTuple | None = None
) -> InfinityNeighborhood:
    cutoff = Fraction(cutoff)
    vertices = window.sublevel_vertices(cutoff, weight)
    simplices = frozenset(
        s for s in window.pair.simplex_set if all(v in vertices for v in s)
    )
    return InfinityNeighborhood(window, cutoff, weight, vertices, simplices)


def window_chain(window: CoveringWindow, lifts: Mapping[Lift, Fraction], degree: int):
    """Convert a chain given on lifts into window-simplex coefficients."""
    out: dict[Simplex, Fraction] = {}
    for (simplex, label), coeff in lifts.items():
        ws, sign = window.lift_simplex(simplex, label)
        if len(ws) != degree + 1:
            raise ValidationError(f"chain entry {simplex} has wrong degree")
        out[ws] = out.get(ws, Fraction(0)) + sign * Fraction(coeff)
    return out


def _relative_boundary_residual(window, chain_vec, degree):
    mat = window.pair.boundary_matrix(degree, relative=True)
    if not mat:
        return []
    return [
        sum((mat[i][j] * chain_vec[j] for j in range(len(chain_vec))), Fraction(0))
        for i in range(len(mat))
    ]


def movable_in_window(
    window: CoveringWindow,
    cycle: Mapping,
    cutoff,
    degree: int | None = None,
    weight: RationalTuple | None = None,
) -> str:
    """Decide movability of a relative cycle into the sublevel carrier.

    The class is movable in the window when it lies in the image of the
    carrier's relative homology, i.e. the chain is a relative cycle of the
    carrier plus a relative boundary of the window.  The answer quantifies
    over this window only; carriers touching the box frontier are refused
    as inconclusive because the truncation could hide deck translates.
    """
    chain = _normalize_cycle(window, cycle, degree)
    degree = len(next(iter(chain))) - 1 if chain else degree
    if degree is None:
        raise ValidationError("empty chain needs an explicit degree")

    for ws in chain:
        if not chain[ws]:
            continue
        for vid in ws:
            if window.frontier_distance(window.vertex_lift_label(vid)) < 1:
                raise InconclusiveError(
                    "cycle carrier touches the window frontier; enlarge the box"
                )

    cols = window.pair.simplices(degree, relative=True)
    col_index = {s: i for i, s in enumerate(cols)}
    vec = [Fraction(0)] * len(cols)
    for ws, coeff in chain.items():
        if ws in window.pair.b_set:
            continue
        if ws not in col_index:
            raise ValidationError(f"chain entry {ws} is not a window simplex")
        vec[col_index[ws]] = Fraction(coeff)
    if not any(vec):
        return MOVABLE

    residual = _relative_boundary_residual(window, vec, degree)
    if any(residual):
        raise ValidationError("input chain is not a relative cycle on the window")

    carrier = neighborhood_of_infinity(window, cutoff, weight)
    span = linalg.SpanBuilder(len(cols))

    boundary = window.pair.boundary_matrix(degree + 1, relative=True)
    for j in range(len(boundary[0]) if boundary else 0):
        span.add([boundary[i][j] for i in range(len(boundary))])

    o_cols = [j for j, s in enumerate(cols) if s in carrier.simplices]
    if o_cols:
        d_in = window.pair.boundary_matrix(degree, relative=True)
        sub = [[d_in[i][j] for j in o_cols] for i in range(len(d_in))] if d_in else []
        if sub and sub[0]:
            kernel = linalg.nullspace(sub, len(o_cols), Fraction(1))
        else:
            kernel = [
                [Fraction(1) if k == i else Fraction(0) for k in range(len(o_cols))]
                for i in range(len(o_cols))
            ]
        for kvec in kernel:
            full = [Fraction(0)] * len(cols)
            for local, j in enumerate(o_cols):
                full[j] = kvec[local]
            span.add(full)

    return MOVABLE if span.contains(vec) else NOT_MOVABLE


def _normalize_cycle(window, cycle, degree):
    sample = next(iter(cycle), None)
    if sample is None:
        return {}
    if isinstance(sample, tuple) and len(sample) == 2 and isinstance(sample[0], tuple) and isinstance(sample[1], tuple):
        return window_chain(window, cycle, degree if degree is not None else len(sample[0]) - 1)
    return {tuple(k): Fraction(v) for k, v in cycle.items()}


@dataclass(frozen=True)
class StabilizationResult:
    """Stabilized intersection-of-images data along deck translates."""

    index: int
    dimension: int
    dims: tuple[int, ...]
    step: Label
    cutoffs: tuple[Fraction, ...]


def stabilize_images(
    window: CoveringWindow,
    k_box,
    degree: int,
    cutoff=Fraction(0),
    weight: RationalTuple | None = None,
    step: Label | None = None,
    max_steps: int = 16,
) -> StabilizationResult:
    """Least index where the image-intersection chain stops shrinking.

    Tracks V_n, the intersection of the images of the n-th translated
    sublevel's relative homology and of the compact piece K inside the
    window's relative homology.  Translates are realized as shifted
    sublevels of the lifted potential; the scan stops when the sublevel no
    longer reaches safely inside the box, and reports inconclusive if no
    stable tail of length two was seen by then.
    """
    if degree > window.pair.dimension:
        return StabilizationResult(1, 0, (0,), step or (), ())
    if window.rank == 0:
        raise InconclusiveError("trivial covering has no deck direction to translate")

    if step is None:
        pair0 = window.labeling.pairing((1,) + (0,) * (window.rank - 1))
        s0 = sum(pair0, Fraction(0)) if weight is None else sum(
            w * x for w, x in zip(weight, pair0)
        )
        sign = -1 if s0 > 0 else 1
        step = (sign,) + (0,) * (window.rank - 1)
    shift_tuple = window.labeling.pairing(step)
    shift = (
        sum(shift_tuple, Fraction(0))
        if weight is None
        else sum(w * x for w, x in zip(weight, shift_tuple))
    )
    if shift >= 0:
        raise ValidationError("translation step must strictly decrease the potential")

    cols = window.pair.simplices(degree, relative=True)
    ncols = len(cols)
    col_index = {s: i for i, s in enumerate(cols)}
    d_in = window.pair.boundary_matrix(degree, relative=True)
    d_out = window.pair.boundary_matrix(degree + 1, relative=True)

    boundary_span = linalg.SpanBuilder(ncols)
    for j in range(len(d_out[0]) if d_out else 0):
        boundary_span.add([d_out[i][j] for i in range(len(d_out))])

    def image_rows(simplices: frozenset[Simplex]) -> list[list[Fraction]]:
        sel = [j for j, s in enumerate(cols) if s in simplices]
        span = linalg.SpanBuilder(ncols)
        for row in boundary_span.rows:
            span.add(list(row))
        if sel:
            sub = [[d_in[i][j] for j in sel] for i in range(len(d_in))] if d_in else []
            if sub and sub[0]:
                kernel = linalg.nullspace(sub, len(sel), Fraction(1))
            else:
                kernel = [
                    [Fraction(1) if k == i else Fraction(0) for k in range(len(sel))]
                    for i in range(len(sel))
                ]
            for kvec in kernel:
                full = [Fraction(0)] * ncols
                for local, j in enumerate(sel):
                    full[j] = kvec[local]
                span.add(full)
        return span.rows

    k_box_t = tuple((int(lo), int(hi)) for lo, hi in k_box)
    k_vertices = frozenset(
        vid
        for vid, (v, g) in enumerate(window.vertex_lifts)
        if all(lo <= x <= hi for x, (lo, hi) in zip(g, k_box_t))
    )
    k_simplices = frozenset(
        s for s in window.pair.simplex_set if all(v in k_vertices for v in s)
    )
    u_k = image_rows(k_simplices)

    dims: list[int] = []
    cutoffs: list[Fraction] = []
    cutoff = Fraction(cutoff)
    for n in range(1, max_steps + 1):
        c_n = cutoff + n * shift
        carrier = neighborhood_of_infinity(window, c_n, weight)
        deep = any(
            window.frontier_distance(window.vertex_lift_label(vid)) >= 1
            for vid in carrier.vertices
        )
        if not deep:
            break
        u_n = image_rows(carrier.simplices)
        inter = linalg.intersection_basis(u_n, u_k, ncols, Fraction(1))
        dims.append(len(inter) - boundary_span.dim)
        cutoffs.append(c_n)

    if len(dims) < 2 or dims[-1] != dims[-2]:
        raise InconclusiveError(
            "window too small to observe stabilization; enlarge the box"
        )
    tail = dims[-1]
    index = 1 + max((i for i in range(len(dims)) if dims[i] != tail), default=-1) + 1
    return StabilizationResult(index, tail, tuple(dims), step, tuple(cutoffs))
