"""Exact computations with p-polynomials over F_q(t_1, ..., t_r).

Reducedness, universality, normal forms of systems, canonical forms modulo
F(R^n), standard permawound groups and residue witnesses, each returning
data that can be checked independently.
"""
__version__ = "0.1.0"

from .errors import InvariantError, ParseError, PreconditionError
from .gfq import GF
from .funcfield import FieldCtx, RatFunc, p_basis_expand
from .ppoly import AdditiveSubst, GroupPresentation, PPoly, compose, ore_left_divmod
from .parse import parse_field, parse_poly, parse_ppoly, parse_ratfunc
from .reduce import (hypersurface_filtration, homogenize, is_reduced, normalize_system,
                     phi_value, principal_zero, reduce_ppoly, replay_normalization)
from .universal import (classify, complete_to_universal, find_unrepresented, is_universal,
                        represent, standard_V, ubiquity_embed, weil_restrict_alpha_p)
from .canon import canonical_form, ext1_independence, ext1_reduce, hom_verify, is_in_image
from .residue import SparseLaurent, check_witness, eval_F_laurent, h1_witness, residue

__all__ = [
    "AdditiveSubst", "FieldCtx", "GF", "GroupPresentation", "InvariantError", "PPoly",
    "ParseError", "PreconditionError", "RatFunc", "SparseLaurent", "canonical_form",
    "check_witness", "classify", "complete_to_universal", "compose", "eval_F_laurent",
    "ext1_independence", "ext1_reduce", "find_unrepresented", "h1_witness", "hom_verify",
    "homogenize", "hypersurface_filtration", "is_in_image", "is_reduced", "is_universal",
    "normalize_system", "ore_left_divmod", "p_basis_expand", "parse_field", "parse_poly",
    "parse_ppoly", "parse_ratfunc", "phi_value", "principal_zero", "reduce_ppoly",
    "replay_normalization", "represent", "residue", "standard_V", "ubiquity_embed",
    "weil_restrict_alpha_p",
]
