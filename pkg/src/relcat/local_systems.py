"""Flat line bundles and twisted simplicial cohomology over exact fields.

A flat line bundle on the deck group ℤ^r is its monodromy: either the
generic symbolic one (the i-th generator goes to the formal variable t_i)
or a numeric one with exact rational values.  Twisted coboundaries follow
the vertex-based trivialization: on a simplex, only the face dropping the
leading vertex picks up the monodromy of the leading edge's deck label;
every other face term is untwisted.  Specializing all variables to 1
recovers the untwisted matrices entry by entry.

Generic coefficients live in the fraction field ℚ(t_1..t_r); exact mode is
capped at r <= 3, beyond which a cross-checked random-specialization
surrogate is available.  Ranks and representatives come from field Gaussian
elimination; an independent fraction-free Bareiss route over the polynomial
ring is exposed for oracle-style cross checks and never shares intermediate
state with the main path.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Literal, Sequence

from sympy import QQ, factorint
from sympy.polys.fields import field as sympy_field

from . import linalg
from .complexes import Simplex, SimplicialPair, boundary_faces
from .errors import ComputationError, ValidationError
from .forms import DeckLabeling

EXACT_RANK_CAP = 3


@dataclass(frozen=True)
class FlatBundle:
    """Monodromy data of a complex flat line bundle over the deck group.

    ``values`` are the numeric monodromies of the lattice generators;
    ``inverted`` marks the dual of the generic bundle (variables t_i^-1).
    """

    kind: Literal["generic", "numeric"]
    rank: int
    values: tuple[Fraction, ...] = ()
    inverted: bool = False

    def __post_init__(self):
        if self.kind == "numeric":
            if len(self.values) != self.rank:
                raise ValidationError("numeric bundle needs one value per generator")
            if any(v == 0 for v in self.values):
                raise ValidationError("monodromy values must be units")


def generic_bundle(rank: int) -> FlatBundle:
    return FlatBundle("generic", rank)


def numeric_bundle(values: Sequence) -> FlatBundle:
    vals = tuple(Fraction(v) for v in values)
    return FlatBundle("numeric", len(vals), vals)


def trivial_bundle(rank: int) -> FlatBundle:
    return FlatBundle("numeric", rank, (Fraction(1),) * rank)


def dual(bundle: FlatBundle) -> FlatBundle:
    """Dual bundle: monodromy values inverted."""
    if bundle.kind == "generic":
        return replace(bundle, inverted=not bundle.inverted)
    return replace(bundle, values=tuple(1 / v for v in bundle.values))


@dataclass(frozen=True)
class Classification:
    verdict: Literal["transcendental", "algebraic", "unknown"]
    witness: str | None = None


def classify(bundle: FlatBundle) -> Classification:
    """Injectivity verdict for the monodromy map on the deck group ring.

    The generic symbolic bundle is transcendental: distinct Laurent
    monomials stay linearly independent.  Every numeric rational value q
    other than 0 satisfies the integer relation (den q) t - (num q), so
    numeric bundles over a nontrivial deck group are always algebraic; the
    witness prefers a multiplicative relation among the values when one
    exists.  An ``unknown`` verdict is reserved for value types the search
    cannot decide and is never treated as transcendental downstream.
    """
    if bundle.rank == 0:
        return Classification("transcendental", "trivial deck group, ring is Z")
    if bundle.kind == "generic":
        return Classification(
            "transcendental", "Laurent monomials are linearly independent"
        )
    for i, v in enumerate(bundle.values):
        if v == 1:
            return Classification("algebraic", f"t{i + 1} - 1")
        if v == -1:
            return Classification("algebraic", f"t{i + 1}^2 - 1")
    relation = _multiplicative_relation(bundle.values)
    if relation is not None:
        terms = "*".join(
            f"t{i + 1}^{a}" for i, a in enumerate(relation) if a
        )
        return Classification("algebraic", f"{terms} = 1")
    v0 = bundle.values[0]
    return Classification(
        "algebraic", f"{v0.denominator}*t1 - {v0.numerator}"
    )


def _multiplicative_relation(values: tuple[Fraction, ...]) -> tuple[int, ...] | None:
    """Integer exponents a with prod v_i^{a_i} = 1, or None if free."""
    primes = sorted(
        {p for v in values for p in factorint(v.numerator)}
        | {p for v in values for p in factorint(v.denominator)}
    )
    rows = []
    for v in values:
        num = factorint(v.numerator)
        den = factorint(v.denominator)
        rows.append([num.get(p, 0) - den.get(p, 0) for p in primes])
    # exponent vectors as columns; kernel vectors are candidate relations
    width = len(values)
    system = [[Fraction(rows[j][i]) for j in range(width)] for i in range(len(primes))]
    kernel = linalg.nullspace(system, width, Fraction(1))
    for vec in kernel:
        scale = 1
        for x in vec:
            scale = scale * x.denominator // _gcd(scale, x.denominator)
        ints = [int(x * scale) for x in vec]
        sign = 1
        for v, a in zip(values, ints):
            if v < 0 and a % 2:
                sign = -sign
        if sign == -1:
            ints = [2 * a for a in ints]
        if any(ints):
            return tuple(ints)
    return None


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


class CoefficientField:
    """Arithmetic context shared by twisted matrices and cochains."""

    name: str

    def from_fraction(self, q: Fraction):
        raise NotImplementedError

    def monomial(self, label: tuple[int, ...]):
        """Monodromy of a deck element in lattice coordinates."""
        raise NotImplementedError

    @property
    def zero(self):
        return self.from_fraction(Fraction(0))

    @property
    def one(self):
        return self.from_fraction(Fraction(1))


class RationalCoefficients(CoefficientField):
    """Plain ℚ, used for numeric bundles and untwisted computations."""

    name = "QQ"

    def __init__(self, values: tuple[Fraction, ...] = ()):
        self.values = values

    def from_fraction(self, q: Fraction) -> Fraction:
        return Fraction(q)

    def monomial(self, label: tuple[int, ...]) -> Fraction:
        out = Fraction(1)
        for v, g in zip(self.values, label):
            out *= v**g
        return out


class GenericCoefficients(CoefficientField):
    """Fraction field ℚ(t_1..t_r) of the generic symbolic bundle."""

    name = "QQ(t)"

    def __init__(self, rank: int, inverted: bool = False):
        if rank < 1:
            raise ValidationError("generic coefficients need rank >= 1")
        names = ",".join(f"t{i + 1}" for i in range(rank))
        self.field, *self.gens = sympy_field(names, QQ)
        self.ring = self.gens[0].numer.ring
        self.rank = rank
        self.inverted = inverted

    def from_fraction(self, q: Fraction):
        return self.field.ground_new(QQ(q.numerator, q.denominator))

    def monomial(self, label: tuple[int, ...]):
        out = self.one
        for t, g in zip(self.gens, label):
            e = -g if self.inverted else g
            if e:
                out *= t**e
        return out


def coefficient_field(bundle: FlatBundle) -> CoefficientField:
    if bundle.rank == 0 or bundle.kind == "numeric":
        return RationalCoefficients(bundle.values)
    if bundle.rank > EXACT_RANK_CAP:
        raise ComputationError(
            f"exact generic mode is capped at rank {EXACT_RANK_CAP}; "
            "use the random-specialization surrogate (mode='specialize')"
        )
    return GenericCoefficients(bundle.rank, bundle.inverted)


def twisted_coboundary(
    pair: SimplicialPair,
    labeling: DeckLabeling,
    bundle: FlatBundle,
    degree: int,
    relative: bool = False,
    fld: CoefficientField | None = None,
) -> linalg.Matrix:
    """Matrix of the twisted δ_degree: C^degree -> C^{degree+1}.

    Rows are (degree+1)-simplices and columns degree-simplices; only the
    0-th face term carries the monodromy of the label of the leading edge.
    """
    if labeling.pair != pair:
        raise ValidationError("labeling belongs to a different complex")
    if fld is None:
        fld = coefficient_field(bundle)
    rows = pair.simplices(degree + 1, relative)
    cols = pair.simplices(degree, relative)
    col_index = pair.index(degree, relative)
    zero = fld.zero
    one = fld.one
    mat = [[zero] * len(cols) for _ in rows]
    for i, tau in enumerate(rows):
        for face_pos, face in boundary_faces(tau):
            j = col_index.get(face)
            if j is None:
                continue
            if face_pos == 0:
                factor = fld.monomial(labeling.label(tau[0], tau[1]))
            else:
                factor = one if face_pos % 2 == 0 else -one
            mat[i][j] = mat[i][j] + factor
    return mat


def _generic_matrix_to_ring(mat: linalg.Matrix, fld: GenericCoefficients):
    """Clear Laurent denominators row by row; unit scaling keeps the rank."""
    gens = [fld.ring.gens[k] for k in range(fld.rank)]
    ring_rows = []
    for row in mat:
        shift = [0] * fld.rank
        entries = []
        for entry in row:
            if not entry:
                entries.append(None)
                continue
            num, den = entry.numer, entry.denom
            entries.append((num, den))
            for k in range(fld.rank):
                shift[k] = max(shift[k], den.degree(k))
        scale = fld.ring.one
        for t, e in zip(gens, shift):
            if e > 0:
                scale *= t**e
        out_row = []
        for item in entries:
            if item is None:
                out_row.append(fld.ring.zero)
            else:
                num, den = item
                out_row.append(num * scale.quo(den))
        ring_rows.append(out_row)
    return ring_rows


def fraction_free_rank(mat: linalg.Matrix, fld: CoefficientField) -> int:
    """Rank by fraction-free Bareiss elimination on the raw matrix.

    This is the oracle route: for generic coefficients it runs over the
    polynomial ring with exact divisions, sharing nothing with the field
    Gaussian elimination used by the main path.
    """
    if not mat or not mat[0]:
        return 0
    if isinstance(fld, GenericCoefficients):
        ring_mat = _generic_matrix_to_ring(mat, fld)
        return linalg.bareiss_rank(ring_mat, div=lambda a, b: a.quo(b))
    return linalg.bareiss_rank(mat)


@dataclass(frozen=True)
class TwistedCohomology:
    """Rank and reduced representative cocycles of one twisted degree."""

    degree: int
    relative: bool
    rank: int
    representatives: tuple[dict[Simplex, object], ...] | None
    field_name: str
    mode: str = "exact"


def twisted_cohomology(
    pair: SimplicialPair,
    labeling: DeckLabeling,
    bundle: FlatBundle,
    degree: int,
    relative: bool = False,
    mode: str = "exact",
    seed: int = 0,
) -> TwistedCohomology:
    """Twisted cohomology over the bundle's exact coefficient field.

    Representatives are kernel vectors of the twisted coboundary reduced
    against the coboundary span (deterministically, via rref elimination).
    In ``specialize`` mode two independent random rational specializations
    are cross-checked and only the rank is returned.
    """
    if bundle.kind == "generic" and labeling.rank != bundle.rank:
        raise ValidationError("bundle rank does not match the deck labeling")
    if mode == "specialize":
        return _specialized_rank(pair, labeling, bundle, degree, relative, seed)
    if mode != "exact":
        raise ValidationError(f"unknown mode {mode!r}")
    fld = coefficient_field(bundle)
    simplices = pair.simplices(degree, relative)
    n = len(simplices)
    if n == 0:
        return TwistedCohomology(degree, relative, 0, (), fld.name)
    out_mat = twisted_coboundary(pair, labeling, bundle, degree, relative, fld)
    kernel = linalg.nullspace(out_mat, n, fld.one)
    image_span = linalg.SpanBuilder(n)
    if degree > 0:
        in_mat = twisted_coboundary(pair, labeling, bundle, degree - 1, relative, fld)
        for j in range(len(in_mat[0]) if in_mat else 0):
            image_span.add([in_mat[i][j] for i in range(len(in_mat))])
    rep_span = linalg.SpanBuilder(n)
    for vec in kernel:
        rep_span.add(image_span.residual(vec))
    representatives = tuple(
        {s: row[i] for i, s in enumerate(simplices) if row[i]}
        for row in rep_span.rows
    )
    return TwistedCohomology(
        degree, relative, len(representatives), representatives, fld.name
    )


def _specialized_rank(pair, labeling, bundle, degree, relative, seed):
    if bundle.kind != "generic":
        raise ValidationError("specialization applies to the generic bundle")
    rng = random.Random(seed)
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
    ranks = []
    for _ in range(2):
        values = []
        for _ in range(bundle.rank):
            p, q = rng.sample(primes, 2)
            values.append(Fraction(p, q))
        spec = numeric_bundle(values)
        fld = RationalCoefficients(spec.values)
        n = len(pair.simplices(degree, relative))
        if n == 0:
            ranks.append(0)
            continue
        out_mat = twisted_coboundary(pair, labeling, spec, degree, relative, fld)
        r_out = linalg.rank(out_mat)
        r_in = 0
        if degree > 0:
            in_mat = twisted_coboundary(pair, labeling, spec, degree - 1, relative, fld)
            r_in = linalg.rank(in_mat)
        ranks.append(n - r_out - r_in)
    if ranks[0] != ranks[1]:
        raise ComputationError(
            f"specialized ranks disagree ({ranks[0]} vs {ranks[1]}); "
            "the class hit a non-generic locus, rerun with another seed"
        )
    return TwistedCohomology(degree, relative, ranks[0], None, "QQ", "specialize")


def oracle_cohomology_ranks(
    pair: SimplicialPair,
    labeling: DeckLabeling,
    bundle: FlatBundle,
    relative: bool = False,
) -> list[int]:
    """All cohomology ranks from fraction-free ranks of the raw matrices."""
    fld = coefficient_field(bundle)
    dim = pair.dimension
    delta_ranks = []
    for k in range(dim + 1):
        mat = twisted_coboundary(pair, labeling, bundle, k, relative, fld)
        delta_ranks.append(fraction_free_rank(mat, fld))
    out = []
    for k in range(dim + 1):
        n = len(pair.simplices(k, relative))
        r_out = delta_ranks[k]
        r_in = delta_ranks[k - 1] if k > 0 else 0
        out.append(n - r_out - r_in)
    return out


def untwisted_matrix(
    pair: SimplicialPair, degree: int, relative: bool = False
) -> linalg.Matrix:
    """δ over ℚ; equals the generic twisted matrix specialized at t = 1."""
    return pair.coboundary_matrix(degree, relative)


def specialize_at_one(mat: linalg.Matrix, fld: GenericCoefficients) -> linalg.Matrix:
    """Substitute every variable by 1, landing back in ℚ."""

    def poly_at_one(poly) -> Fraction:
        total = sum(poly.coeffs(), QQ(0))
        return Fraction(int(QQ.numer(total)), int(QQ.denom(total)))

    out = []
    for row in mat:
        out_row = []
        for entry in row:
            if not entry:
                out_row.append(Fraction(0))
            else:
                out_row.append(poly_at_one(entry.numer) / poly_at_one(entry.denom))
        out.append(out_row)
    return out


def bundle_to_json(bundle: FlatBundle) -> dict:
    if bundle.kind == "generic":
        return {"kind": "generic"}
    return {"kind": "numeric", "values": [str(v) for v in bundle.values]}


def bundle_from_json(data: dict, rank: int) -> FlatBundle:
    kind = data.get("kind")
    if kind == "generic":
        return generic_bundle(rank)
    if kind == "numeric":
        values = [Fraction(v) for v in data.get("values", [])]
        if len(values) != rank:
            raise ValidationError(
                f"numeric bundle has {len(values)} values for deck rank {rank}"
            )
        return numeric_bundle(values)
    raise ValidationError(f"unknown bundle kind {kind!r}")
