# -*- coding: utf-8 -*-

from .utils import T_DATA
from .utils import dumps_json
from .exc import HardyRellichLabError
from .exc import WeightSyntaxError
from .exc import UnknownIdentifierError
from .exc import UnboundParameterError
from .exc import EvaluationError
from .exc import GridError
from .exc import CatalogError
from .exc import IndefiniteFormError
from .exc import ConvergenceError
from .exc import ProfileSupportError
from .exc import PreconditionError
from .weightlang import WeightExpr
from .weightlang import ParamBinding
from .weightlang import CatalogEntry
from .weightlang import parse
from .weightlang import as_weight
from .weightlang import evaluate
from .weightlang import derivative
from .weightlang import to_sympy
from .weightlang import catalog
from .weightlang import catalog_names
from .grid import MeshKindEnum
from .grid import BoundaryEnum
from .grid import QuadRuleEnum
from .grid import RadialDomain
from .grid import GridSpec
from .grid import Grid
from .grid import build_grid
from .grid import quad_integral
from .grid import prolongation
from .modeforms import ModeIndex
from .modeforms import FormMatrix
from .modeforms import mode_coeff
from .modeforms import assemble_weighted_form
from .modeforms import hr_lhs_form
from .modeforms import hr_rhs_form
from .modeforms import rellich_rhs_form
from .modeforms import hardy_lhs_form
from .modeforms import mass_form
from .modeforms import RadialProfile
from .modeforms import bump_profile
from .modeforms import decompose_check
from .besselpair import VerdictEnum
from .besselpair import BesselCertificate
from .besselpair import solve_pair_ode
from .besselpair import ansatz_residual
from .besselpair import is_bessel_pair
from .besselpair import hardy_rellich_weight
from .besselpair import shift_dimension
from .conditions import ConditionEnum
from .conditions import ConditionReport
from .conditions import check_pointwise
from .conditions import check_integral
from .spectrum import ProblemEnum
from .spectrum import EigenPair
from .spectrum import min_gen_eig
from .spectrum import best_constant
from .spectrum import compute_best_constant
from .spectrum import inequality_margin
from .spectrum import compute_margin
from .spectrum import mellin_constant
from .spectrum import SpectralReport
from .spectrum import mode_scan
from .spectrum import SymmetryVerdict
from .spectrum import symmetry_verdict
from .spectrum import radial_equivalence_check
from .spectrum import remainder_constant
from .spectrum import UncertaintyEnum
from .spectrum import uncertainty_constant
from .spectrum import uncertainty_reference
from .spectrum import refine_best_constant
