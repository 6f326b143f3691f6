"""gcgeo: exact linear and differential algebra of T + T*.

Spinors, the Mukai pairing, maximal isotropics, twisted Courant brackets on
polynomial charts, generalized complex structures and their branes, all over
exact gaussian-rational scalars.
"""

__version__ = "0.1.0"

from .scalars import GaussRat, Poly, NoExactSquareRoot, MismatchedVariables
from .forms import MixedForm, CapacityError, mukai_coeff, mukai_pair
from .clifford import GenVector, SoElement, BlockTransform
from .charts import Chart
from .isotropics import (
    MaxIsotropic,
    NotIsotropic,
    NotPure,
    canonical_form,
    pure_spinor_line,
    null_space,
    graph_over_cotangent,
    transform,
    tensor_product,
)
from .gcs import (
    GCStructure,
    InvalidStructure,
    validate_gc,
    eigenbundle,
    gc_type,
    type_and_canonical_spinor,
    grading_project,
    poisson_of,
    darboux_point,
)
from .fields import (
    ClosedThreeForm,
    DiracFrame,
    courant_bracket,
    d_twisted,
    involutivity_tensor,
    schouten,
)
from .integrability import (
    check_spinor_integrability,
    nijenhuis_field,
    deform_by_bivector,
    modular_vector_field,
    hamiltonian_section,
)
from .algebroid import LiePair, complex_pair, lie_algebroid_differential, maurer_cartan
from .branes import SubmanifoldData, generalized_tangent, pullback_dirac, brane_check
