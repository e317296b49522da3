"""Exact decision procedures for Dehn functions, tameness and related invariants of
standard solvable groups presented by weight-graded nilpotent Lie algebras."""

from .classify import (DehnClass, DehnVerdict, cone_dimension, dehn_classify, gdv_cone_type,
                       gdv_equivalent, gdv_npc, hyperbolicity, p0, tac_invariants)
from .exactla import RationalMatrix, kernel_basis, rank, zero_in_hull
from .homology import boundary_matrix, chain_basis, homology_dim
from .liecore import FieldTag, GradedLieAlgebra, validate
from .tameness import segment_contains_zero, tameness_report
from .weightmod import WeightDiagram, diagram, exponential_radical, is_standard

__version__ = "0.1.0"
