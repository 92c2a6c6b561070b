"""Exact computations around recollements of Auslander algebras of finite-type subcategories."""

__version__ = "0.1.0"

from .linalg import GF, QQ, FieldSpec, Matrix
from .algebra import Algebra, AlgebraPresentation, Arrow, build_algebra, linear_a, semisimple, truncated_polynomial
from .modules import Module, ModuleMap, direct_sum, dual, hom_basis, hom_dim
from .homological import (
    ext_dim,
    ext_dims,
    global_dimension,
    gorenstein_dimension,
    inj_dim,
    is_gorenstein_projective,
    minimal_presentation,
    proj_dim,
    projective_cover,
    syzygy,
)
from .krull_schmidt import (
    IndecomposableCatalog,
    decompose,
    end_ring,
    enumerate_indecomposables,
    is_isomorphic,
    knit,
    multiplicity_by_hom,
)
from .recollement import build_setup, gamma_map, is_mod0, v_lambda, v_rho, v_theta, zeta
from .tilting import check_cotilting, check_tilting, gprj_pipeline, morita_invariants, theorem41_audit
