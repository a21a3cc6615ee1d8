"""Exact invariants of finite point sets on Segre varieties."""

__version__ = "0.1.0"

from .errors import (BudgetExceededError, CenterHitError, DegeneracyError, DuplicatePointError,
                     FieldTooSmallError, FormatError, PreconditionError, SegreError, ShapeError,
                     UnsupportedFieldError)
from .field import FieldSpec
from .linalg import LinearSubspace, rank, span_intersect
from .projective import ProjPoint, cross_ratio, fit_pgl2, p1, projectively_equivalent
from .segre import (DefectReport, MPoint, PointSet, Shape, analyze, defect, e, essential_partition,
                    is_circuit, is_minimal, is_nondegenerate, is_strongly_essential,
                    minimal_subspace, segre_embed, x_rank)
from .curves import (RncCurve, construct_collinear_block, construct_extremal,
                     construct_p2p1_circuit, curve_point, enumerate_b_k, fit_multidegree_one,
                     random_curve)
from .enumerate import EnumTask, Filters, enumerate_sets
from .verify import (VerificationReport, verify_bounds, verify_five_point_circuits,
                     verify_four_point_circuits, verify_kernel_patterns)
