"""Certified search for dilated configurations in difference sets and sumsets."""
from .dilates import (APWitness, Configuration, DilateWitness, admissible_dilates, ap_constant, ap_in_diffset, find_dilate,
                      threshold_bound, threshold_constant, threshold_density)
from .errors import (BoxMismatch, BudgetExceeded, DiffsetlabError, DomainTooSmall, IndexOverflow,
                     InvalidConfiguration, PointOutOfBox)
from .grid import Box, DiffSet, GridSet, SumSet, diff_membership, difference_set, make_grid_set, sum_set
from .poly import (IntPolynomial, PolySystem, PolyWitness, eval_poly, find_poly_witness, poly_domain,
                   poly_threshold_constant, square_difference_ap)
from .proof import (CoveringCollection, averaging_census, build_covering, fiber, literal_witness,
                    literal_witness_poly)
from .setfile import read_set_file, write_set_file
from .sumset import ap_in_sumset, best_translate, config_in_sumset

__version__ = "0.1.0"

__all__ = [
    "APWitness",
    "Box",
    "BoxMismatch",
    "BudgetExceeded",
    "Configuration",
    "CoveringCollection",
    "DiffSet",
    "DiffsetlabError",
    "DilateWitness",
    "DomainTooSmall",
    "GridSet",
    "IndexOverflow",
    "IntPolynomial",
    "InvalidConfiguration",
    "PointOutOfBox",
    "PolySystem",
    "PolyWitness",
    "SumSet",
    "admissible_dilates",
    "ap_constant",
    "ap_in_diffset",
    "ap_in_sumset",
    "averaging_census",
    "best_translate",
    "build_covering",
    "config_in_sumset",
    "diff_membership",
    "difference_set",
    "eval_poly",
    "fiber",
    "find_dilate",
    "find_poly_witness",
    "literal_witness",
    "literal_witness_poly",
    "make_grid_set",
    "poly_domain",
    "poly_threshold_constant",
    "read_set_file",
    "square_difference_ap",
    "sum_set",
    "threshold_bound",
    "threshold_constant",
    "threshold_density",
    "write_set_file",
]
