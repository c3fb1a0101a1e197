"""Exact sheaf-cohomology engine for products of projective spaces and
smooth quadric hypersurfaces: block collections and their right duals,
regularity, and splitting criteria with certificates or witnesses."""

from .blocks import (BlockCollection, DualCollection, VerificationReport,
                     block_sum, collection_preset, orthogonality_check,
                     product_collection, regularity_collection, right_dual,
                     sigma_collection, spinor_kinds, standard_collection,
                     verify_nblock)
from .bundles import (BundleExpr, LineTwist, PsiSym, SpinorTwist, TangentWedge,
                      box_product, direct_sum, dual, is_symbolic, line_bundle,
                      make_bundle, rank_of, restrict_hyperplane, single,
                      spinor_dual_kind, spinor_rank, structure_sheaf,
                      twist_balanced, twist_by, validate_on, wedge)
from .cohomology import (CohomTable, bott_forms, bott_line, cohom, cohom_product,
                         convolve, euler_char, ext_dims, quadric_line,
                         spinor_pair, spinor_twist)
from .criteria import (CriterionReport, HypothesisTables, characterization_check,
                       is_normalized, qn_characterization_check, scan_window,
                       spi_check, tpq_check, trivial_summand_check)
from .dsl import format_bundle, format_term, parse_bundle
from .errors import (BlockcohError, BundleError, HypothesisViolation, ParseError,
                     PreconditionError, RecursionAmbiguityError, SpaceError,
                     SymbolicValueError, UnsupportedTensorError)
from .regularity import (RegularityReport, classical_regularity,
                         globally_generated_surrogate, is_qregular, is_regular,
                         min_balanced_reg, regularity_stability_check)
from .spaces import Factor, Space, make_space, parse_space, product_space

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
