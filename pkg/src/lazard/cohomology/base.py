"""Cohomology groups as Z/B subquotients of an explicit cochain space."""
from __future__ import annotations

import numpy as np

from ..ring import InvariantFactors, Subquotient, Submodule


class HypothesisViolated(ValueError):
    """A theorem hypothesis (c < p, d < p-1, c+d < p, ...) fails."""


class SizeBoundExceeded(ValueError):
    pass


class CohomologyGroup:
    """Z/B inside (+) Z/p^orders with class coordinates.

    ``context`` carries whatever the producing side needs to translate
    between cochain vectors and full cocycle tables.
    """

    def __init__(self, Z, B, orders, p, *, side, degree, context=None):
        self.orders = tuple(int(o) for o in orders)
        self.p = p
        self.side = side
        self.degree = degree
        self.context = context
        n = len(self.orders)
        Z, B = np.asarray(Z, np.int64), np.asarray(B, np.int64)
        self.cocycles = Z.reshape(-1, n) if n else np.zeros((0, 0), np.int64)
        self.coboundaries = B.reshape(-1, n) if n else np.zeros((0, 0), np.int64)
        self._sq = Subquotient(self.cocycles, self.coboundaries, self.orders, p)
        self._zspan = Submodule(self.cocycles, self.orders, p)

    @property
    def invariants(self) -> InvariantFactors:
        return self._sq.invariants

    @property
    def order(self) -> int:
        return self._sq.order

    @property
    def moduli(self) -> tuple:
        return self._sq.moduli

    @property
    def representatives(self) -> np.ndarray:
        return self._sq.representatives

    def is_cocycle(self, u) -> bool:
        return self._zspan.contains(np.asarray(u, np.int64))

    def coords(self, u) -> np.ndarray:
        return self._sq.coords(np.asarray(u, np.int64))

    def element(self, coords) -> np.ndarray:
        return self._sq.element(coords)

    def is_zero(self, u) -> bool:
        return self._sq.is_zero(np.asarray(u, np.int64))

    def same_class(self, u, v) -> bool:
        return self.is_zero((np.asarray(u, np.int64) - np.asarray(v, np.int64)))

    def reduce(self, u) -> np.ndarray:
        return np.asarray(u, np.int64) % np.array([self.p**o for o in self.orders], np.int64)

    def random_class(self, rng) -> np.ndarray:
        c = np.array([rng.integers(0, m) for m in self.moduli], np.int64)
        return self.element(c)

    def __repr__(self):
        return f"CohomologyGroup(side={self.side}, degree={self.degree}, invariants={list(self.invariants)})"


def hom_is_isomorphism(images, src_moduli, tgt_moduli, p) -> bool:
    """Is x -> x @ images (class coordinates) an isomorphism?"""
    src = list(src_moduli)
    tgt = list(tgt_moduli)
    if InvariantFactors(src) != InvariantFactors(tgt):
        return False
    if not tgt:
        return True
    exps_t = [_exp(m, p) for m in tgt]
    imgs = np.asarray(images, np.int64).reshape(len(src), len(tgt))
    span = Submodule(imgs, exps_t, p)
    return span.order() == int(np.prod([int(m) for m in tgt], dtype=object))


def _exp(m, p):
    e = 0
    while m > 1:
        m //= p
        e += 1
    return e
