"""Cluster structure of flag minors on upper-triangular unipotent quotients of GL(n).

Cluster variables are computed as exact polynomials in the matrix entries,
labelled by their lex-leading exponent arrays (semistandard Young tableaux),
and the cones spanned by the labels of each seed are checked to form a fan.
"""

from .cluster import ClusterVariable, ExchangeGraph, Seed, cluster_variables, enumerate_seeds, initial_seed, mutate_seed
from .fan import Cone, cone_of_seed, cones_of_graph, coverage, quotient_project, verify_fan
from .poly import Polynomial, flag_minor, leading_array
from .quiver import Quiver, initial_quiver, mutate_quiver
from .ssyt import Array, GTPattern, Tableau, array_to_tableau, is_d_tight, tableau_to_array

__all__ = [
    "Array", "ClusterVariable", "Cone", "ExchangeGraph", "GTPattern", "Polynomial", "Quiver", "Seed",
    "Tableau", "array_to_tableau", "cluster_variables", "cone_of_seed", "cones_of_graph", "coverage",
    "enumerate_seeds", "flag_minor", "initial_quiver", "initial_seed", "is_d_tight", "leading_array",
    "mutate_quiver", "mutate_seed", "quotient_project", "tableau_to_array", "verify_fan",
]
