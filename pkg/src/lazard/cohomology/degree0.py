"""H^0 (invariants) and H_0 (coinvariants) on both sides."""
from __future__ import annotations

import numpy as np

from ..ring import InvariantFactors, Submodule, kernel, quotient_invariants
from ..triples import GroupTriple, LieTriple


def _stacked_kernel(mats, M) -> Submodule:
    if len(mats) == 0 or M.rank == 0:
        return M.full()
    A = np.concatenate([np.asarray(a, np.int64) for a in mats], axis=0)
    return M.span(kernel(A, M.exps, list(M.exps) * len(mats), M.p))


def h0(T) -> Submodule:
    """Fixed points {m : phi(g) m = m} or annihilated points {m : psi(a) m = 0}."""
    M = T.M
    if isinstance(T, LieTriple):
        return _stacked_kernel(list(T.psi), M)
    gens = T.G.generator_indices()
    return _stacked_kernel([(T.phi[g] - M.identity()) % M.orders[:, None] for g in gens], M)


def coinvariant_span(T) -> Submodule:
    """[M, G] resp. [M, L]: the first step of the action chain."""
    chain = T.chain()
    return chain[1] if len(chain) > 1 else chain[0]


def h0_co(T) -> InvariantFactors:
    S = coinvariant_span(T)
    return quotient_invariants(S.generators, T.M.exps, T.M.p)
