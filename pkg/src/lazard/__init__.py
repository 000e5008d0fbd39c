"""Lazard correspondence between finite p-groups and nilpotent Lie rings."""
from .bchgroup import LazardBoundViolated, LazardGroup, exp_ring, recover_lie
from .cohomology import HypothesisViolated, SizeBoundExceeded, compare, h0, h1, h2
from .crossedmod import (
    GroupCrossedModule,
    LieCrossedModule,
    baer_sum_crossed,
    check_axioms,
    crossed_equivalent,
    exp_crossed,
    log_crossed,
)
from .freelie import bch_table
from .liering import NilLieRing, abelian, heisenberg
from .schur import compare_schur, schur
from .triples import GroupTriple, LieTriple, exp_triple, log_triple

__version__ = "0.1.0"

__all__ = [
    "GroupCrossedModule", "GroupTriple", "HypothesisViolated", "LazardBoundViolated", "LazardGroup",
    "LieCrossedModule", "LieTriple", "NilLieRing", "SizeBoundExceeded", "abelian", "baer_sum_crossed",
    "bch_table", "check_axioms", "compare", "compare_schur", "crossed_equivalent", "exp_crossed",
    "exp_ring", "exp_triple", "h0", "h1", "h2", "heisenberg", "log_crossed", "log_triple",
    "recover_lie", "schur",
]
