"""Exact Gromov-Witten invariants of classifying stacks and banded gerbes over them."""
from .character_table import CharacterTable, Irrep, central_character, character_table, table_from_json
from .cocycles import (CentralExtensionData, TwoCocycleA, U1Cocycle, build_extension, extract_cocycle,
                       extract_extension, holonomy_cyclic, is_coboundary, product_cocycle, push_by_character,
                       validate_cocycle)
from .counting import (SurfaceGroupInstance, degree, fiber_classes, gluing_identity_check, omega,
                       omega_brute_force)
from .errors import CapExceeded, GerbeError, InvalidInput, VerificationFailure
from .exact_arith import Cyclotomic, Rational, root_of_unity
from .finite_group import (ConjClass, FiniteGroup, build_group, central_quotient, direct_product,
                           from_permutations, group_from_json)
from .gw_engine import (BandedData, GWQuery, cohft_axioms_check, gw_bg, lambda_cohft, transform_I, transform_J,
                        verify_decomposition, verify_product)
from .psi_integrals import PsiSpec, psi_integral
from .twisted_algebra import AlgebraElement, TwistedAlgebra, TwistedIrrep

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement", "BandedData", "CapExceeded", "CentralExtensionData", "CharacterTable", "ConjClass",
    "Cyclotomic", "FiniteGroup", "GWQuery", "GerbeError", "InvalidInput", "Irrep", "PsiSpec", "Rational",
    "SurfaceGroupInstance", "TwistedAlgebra", "TwistedIrrep", "TwoCocycleA", "U1Cocycle", "VerificationFailure",
    "build_extension", "build_group", "central_character", "central_quotient", "character_table",
    "cohft_axioms_check", "degree", "direct_product", "extract_cocycle", "extract_extension", "fiber_classes",
    "from_permutations", "gluing_identity_check", "group_from_json", "gw_bg", "holonomy_cyclic", "is_coboundary",
    "lambda_cohft", "omega", "omega_brute_force", "product_cocycle", "psi_integral", "push_by_character",
    "root_of_unity", "table_from_json", "transform_I", "transform_J", "validate_cocycle", "verify_decomposition",
    "verify_product",
]
