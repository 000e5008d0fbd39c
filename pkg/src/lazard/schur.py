"""Schur multipliers as the colimit of H^2(-, Z/p^i) along m -> p m."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bchgroup import FiniteGroup, LazardGroup
from .cohomology.base import CohomologyGroup, HypothesisViolated
from .cohomology.group import h2_group
from .cohomology.lie import h2_lie
from .cohomology.transport import transport_class
from .liering import NilLieRing
from .ring import subgroup_invariants, valuation
from .triples import GroupTriple, PModule, exp_triple, trivial_triple


def _cap(exponent: int, size: int, p: int) -> int:
    k, n = 0, 1
    while n < size:
        n *= p
        k += 1
    return exponent + k


def _group_exponent(G: FiniteGroup) -> int:
    e = max(G.element_order(g) for g in range(G.size))
    return valuation(e, G.prime)


def trivial_group_triple(G: FiniteGroup, i: int) -> GroupTriple:
    M = PModule(G.prime, (i,))
    return GroupTriple(G, M, np.ones((G.size, 1, 1), np.int64))


@dataclass
class Level:
    i: int
    H: CohomologyGroup
    up: np.ndarray | None = None  # class coordinates of iota(rep_k) in level i+1



def _inv(gens, moduli, p):
    exps = [valuation(int(m), p) for m in moduli]
    if not exps:
        return []
    g = np.asarray(gens, np.int64).reshape(-1, len(exps))
    return [int(x) for x in subgroup_invariants(g, exps, p)]


def _order(inv):
    return int(np.prod(inv, dtype=object)) if inv else 1


@dataclass
class MultiplierReport:
    side: str
    p: int
    cap: int
    levels: list = field(default_factory=list)  # dicts per level
    stable: list | None = None
    stabilization_level: int | None = None
    status: str = "inconclusive"
    extra: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "side": self.side,
            "p": self.p,
            "cap": self.cap,
            "levels": self.levels,
            "stable": self.stable,
            "stabilization_level": self.stabilization_level,
            "status": self.status,
            "extra_levels": self.extra,
        }


class SchurTower:
    """Lazily computed levels H^2(X, Z/p^i) with trivial action."""

    def __init__(self, obj, side: str):
        self.obj = obj
        self.side = side
        if side == "lie":
            self.p = obj.p
            self.cap = _cap(max(obj.exps, default=0), obj.size, obj.p)
        else:
            self.p = obj.prime
            self.cap = _cap(_group_exponent(obj), obj.size, self.p)
        self._levels: dict[int, Level] = {}

    def triple(self, i):
        if self.side == "lie":
            return trivial_triple(self.obj, (i,))
        return trivial_group_triple(self.obj, i)

    def level(self, i) -> Level:
        if i not in self._levels:
            T = self.triple(i)
            H = h2_lie(T) if self.side == "lie" else h2_group(T)
            self._levels[i] = Level(i, H)
        return self._levels[i]

    def up(self, i) -> np.ndarray:
        """Matrix of iota_i: H^2(Z/p^i) -> H^2(Z/p^{i+1}) on class coordinates."""
        lv, nxt = self.level(i), self.level(i + 1)
        if lv.up is None:
            reps = lv.H.representatives
            rows = [nxt.H.coords(self.p * np.asarray(u, np.int64)) for u in reps]
            lv.up = np.array(rows, np.int64).reshape(len(reps), len(nxt.H.moduli))
        return lv.up

    def image(self, i):
        """Generators (coords in level i+1) of the image of level i."""
        return self.up(i)

    def image_invariants(self, i):
        return _inv(self.image(i), self.level(i + 1).H.moduli, self.p)


def _check_class(obj, side):
    if side == "lie":
        c, p = obj.nilpotency_class(), obj.p
    else:
        c, p = obj.nilpotency_class(), obj.prime
    if c >= p - 1:
        raise HypothesisViolated(f"hypothesis violated: needs c < p-1 (c={c}, p={p})")


def schur(obj, *, extra_levels: int = 0, tower: SchurTower | None = None) -> MultiplierReport:
    """Multiplier of a NilLieRing or a FiniteGroup (trivial coefficients).

    Stops at the least i >= 2 where the images of level i-1 and level i
    have the same order and iota_i maps the first onto the second; the
    stable value is the image at that level.
    """
    side = "lie" if isinstance(obj, NilLieRing) else "group"
    _check_class(obj, side)
    tw = tower or SchurTower(obj, side)
    rep = MultiplierReport(side, tw.p, tw.cap)
    for i in range(1, tw.cap + 1):
        lv = tw.level(i)
        entry = {"level": i, "invariants": [int(x) for x in lv.H.invariants]}
        img = tw.image_invariants(i)
        entry["image_invariants"] = img
        rep.levels.append(entry)
        if i >= 2:
            prev = rep.levels[-2]["image_invariants"]
            # iota_i restricted to the image of level i-1
            comp = tw.image(i - 1) @ tw.up(i) % np.array(tw.level(i + 1).H.moduli, np.int64)
            comp_inv = _inv(comp, tw.level(i + 1).H.moduli, tw.p)
            if prev == img and _order(comp_inv) == _order(prev) == _order(img):
                rep.stable = img
                rep.stabilization_level = i
                rep.status = "certified"
                break
    if rep.stable is not None:
        for j in range(rep.stabilization_level + 1, rep.stabilization_level + 1 + extra_levels):
            rep.extra.append({"level": j, "image_invariants": tw.image_invariants(j)})
    return rep


@dataclass
class SchurComparison:
    lie: MultiplierReport
    group: MultiplierReport
    squares: list

    @property
    def equal(self) -> bool:
        return (
            self.lie.status == self.group.status == "certified"
            and self.lie.stable == self.group.stable
        )

    @property
    def verdict(self) -> str:
        if self.lie.status != "certified" or self.group.status != "certified":
            return "inconclusive"
        return "equal" if self.equal and all(s["commutes"] for s in self.squares) else "different"

    def to_json(self) -> dict:
        return {
            "lie": self.lie.to_json(),
            "group": self.group.to_json(),
            "squares": self.squares,
            "verdict": self.verdict,
        }


def compare_schur(L: NilLieRing, *, extra_levels: int = 0) -> SchurComparison:
    """Both multipliers, plus the squares iota o tau = tau o iota per level."""
    _check_class(L, "lie")
    G = LazardGroup(L)
    tl, tg = SchurTower(L, "lie"), SchurTower(G, "group")
    rl = schur(L, extra_levels=extra_levels, tower=tl)
    rg = schur(G, extra_levels=extra_levels, tower=tg)
    top = max(rl.stabilization_level or rl.cap, rg.stabilization_level or rg.cap)
    squares = []
    for i in range(1, top + 1):
        Ti, Tj = trivial_triple(L, (i,)), trivial_triple(L, (i + 1,))
        Gi, Gj = exp_triple(Ti, G), exp_triple(Tj, G)
        Hg_next = tg.level(i + 1).H
        ok = True
        for u in tl.level(i).H.representatives:
            a = transport_class(Tj, tl.p * np.asarray(u, np.int64), 2, TG=Gj)
            b = tl.p * np.asarray(transport_class(Ti, u, 2, TG=Gi), np.int64)
            if not Hg_next.same_class(a, b):
                ok = False
                break
        squares.append({"level": i, "commutes": ok})
    return SchurComparison(rl, rg, squares)
