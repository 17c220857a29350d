"""relcat: desk-scale computations around closed 1-forms on simplicial pairs.

Subpackages cover exact simplicial (co)homology, simplicial one-forms and
their periods, finite covering-space windows, twisted cohomology over exact
function fields, cup-length lower bounds, and gradient-flow simulation on
parametric surfaces with boundary.
"""

__version__ = "0.1.0"

from .complexes import (
    SimplicialPair,
    barycentric_subdivide,
    betti,
    build_pair,
    product_pair,
)
from .errors import ComputationError, InconclusiveError, RelcatError, ValidationError
from .forms import (
    DeckLabeling,
    EdgePath,
    OneForm,
    PeriodVector,
    d,
    deck_labeling,
    integrate,
    periods,
    primitive,
    restrict,
    validate,
)

__all__ = [
    "SimplicialPair",
    "OneForm",
    "EdgePath",
    "PeriodVector",
    "DeckLabeling",
    "build_pair",
    "betti",
    "product_pair",
    "barycentric_subdivide",
    "validate",
    "d",
    "integrate",
    "periods",
    "primitive",
    "restrict",
    "deck_labeling",
    "RelcatError",
    "ValidationError",
    "ComputationError",
    "InconclusiveError",
    "__version__",
]
