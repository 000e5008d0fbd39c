"""Crossed modules 0 -> M -> H -> G1 -> G2 -> 1 for groups and Lie rings.

A group crossed module stores every map as a table over element indices:
``mu[h]``, ``eta[g, h] = g.h``, ``alpha[g]`` and ``iota[m]`` (over the
elements of M in PModule order).  On the Lie side the same data are
matrices: ``mu``, ``alpha`` and ``iota`` act on row vectors, and ``eta[i]``
is the derivation of the i-th basis element of g1 acting on columns.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .bchgroup import FiniteGroup, LazardGroup, size_bound
from .cohomology.base import HypothesisViolated
from .liering import NilLieRing, abelian, direct_sum, quotient_map, subring_ring
from .ring import LinearSolver, as_rows, kernel
from .triples import (
    GroupTriple,
    InvalidTriple,
    LieTriple,
    OutsideLazardRange,
    PModule,
    _lie_hom_violation,
    exp_triple,
    log_triple,
)


class InvalidCrossedModule(ValueError):
    pass


class BoundaryMismatch(ValueError):
    pass


REQUIREMENT = "c + d < p"


# ------------------------------------------------------------------ types

@dataclass(eq=False)
class GroupCrossedModule:
    H: FiniteGroup
    G1: FiniteGroup
    G2: FiniteGroup
    mu: np.ndarray
    eta: np.ndarray
    alpha: np.ndarray
    M: PModule
    iota: np.ndarray
    name: str = ""

    def __post_init__(self):
        self.mu = np.asarray(self.mu, np.int64).reshape(self.H.size)
        self.eta = np.asarray(self.eta, np.int64).reshape(self.G1.size, self.H.size)
        self.alpha = np.asarray(self.alpha, np.int64).reshape(self.G1.size)
        self.iota = np.asarray(self.iota, np.int64).reshape(self.M.size)

    side = "group"

    @property
    def p(self) -> int:
        return self.M.p

    def iota_basis(self) -> np.ndarray:
        """H indices of iota(e_k) for the standard generators of M."""
        return self.iota[self.M.index(np.eye(self.M.rank, dtype=np.int64))] if self.M.rank else np.zeros(0, np.int64)

    def module_action(self) -> np.ndarray:
        """The induced action of G1 on M, one matrix per element of G1."""
        M = self.M
        back = np.full(self.H.size, -1, np.int64)
        back[self.iota] = np.arange(M.size)
        els = M.elements()
        out = np.zeros((self.G1.size, M.rank, M.rank), np.int64)
        for k, h in enumerate(self.iota_basis()):
            img = back[self.eta[:, h]]
            if np.any(img < 0):
                raise InvalidCrossedModule("eta does not preserve iota(M)")
            out[:, :, k] = els[img]
        return out

    def __eq__(self, other):
        return (
            isinstance(other, GroupCrossedModule)
            and all(_same_group(a, b) for a, b in ((self.H, other.H), (self.G1, other.G1), (self.G2, other.G2)))
            and self.M == other.M
            and all(
                np.array_equal(getattr(self, k), getattr(other, k)) for k in ("mu", "eta", "alpha", "iota")
            )
        )

    __hash__ = None


@dataclass(eq=False)
class LieCrossedModule:
    g: NilLieRing
    g1: NilLieRing
    g2: NilLieRing
    mu: np.ndarray
    eta: np.ndarray
    alpha: np.ndarray
    M: PModule
    iota: np.ndarray
    name: str = ""

    def __post_init__(self):
        r, r1, r2 = self.g.rank, self.g1.rank, self.g2.rank
        self.mu = as_rows(self.mu, r1).reshape(r, r1) % self.g1.orders if r1 else np.zeros((r, 0), np.int64)
        self.alpha = as_rows(self.alpha, r2).reshape(r1, r2) % self.g2.orders if r2 else np.zeros((r1, 0), np.int64)
        self.eta = np.asarray(self.eta, np.int64).reshape(r1, r, r)
        if r:
            self.eta = self.eta % self.g.orders[:, None]
        self.iota = np.asarray(self.iota, np.int64).reshape(self.M.rank, r)
        if r:
            self.iota = self.iota % self.g.orders

    side = "lie"

    @property
    def p(self) -> int:
        return self.M.p

    def eta_of(self, y) -> np.ndarray:
        y = np.asarray(y, np.int64)
        out = np.einsum("i,ijk->jk", y, self.eta)
        return out % self.g.orders[:, None] if self.g.rank else out

    def module_action(self) -> np.ndarray:
        """psi on M for each basis element of g1 (columns are M coordinates)."""
        M, g = self.M, self.g
        solver = LinearSolver(self.iota.T, M.exps, g.exps, M.p)
        out = np.zeros((self.g1.rank, M.rank, M.rank), np.int64)
        for i in range(self.g1.rank):
            for k in range(M.rank):
                x = solver.solve((self.eta[i] @ self.iota[k]) % g.orders)
                if x is None:
                    raise InvalidCrossedModule("eta does not preserve iota(M)")
                out[i, :, k] = M.reduce(x)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, LieCrossedModule)
            and (self.g, self.g1, self.g2, self.M) == (other.g, other.g1, other.g2, other.M)
            and all(
                np.array_equal(getattr(self, k), getattr(other, k)) for k in ("mu", "eta", "alpha", "iota")
            )
        )

    __hash__ = None


def _same_group(a: FiniteGroup, b: FiniteGroup) -> bool:
    if isinstance(a, LazardGroup) and isinstance(b, LazardGroup):
        return a.lie == b.lie
    return a.size == b.size and np.array_equal(a.table(), b.table())


# ------------------------------------------------------------------ axioms

@dataclass
class AxiomReport:
    ok: bool
    violations: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": self.violations}


def check_axioms(X) -> AxiomReport:
    """Exhaustive check of (i), (ii) and the kernel/cokernel identifications."""
    out = _check_group(X) if isinstance(X, GroupCrossedModule) else _check_lie(X)
    return AxiomReport(not out, out)


def _v(axiom, message, witness=None):
    return {"axiom": axiom, "message": message, "witness": witness}


def _first(mask):
    idx = np.argwhere(mask)
    return [int(x) for x in idx[0]] if idx.size else None


def _check_group(X: GroupCrossedModule) -> list:
    H, G1, G2 = X.H, X.G1, X.G2
    T, T1, T2 = H.table(), G1.table(), G2.table()
    mu, eta, alpha = X.mu, X.eta, X.alpha
    out = []
    w = _first(mu[T] != T1[mu[:, None], mu[None, :]])
    if w:
        out.append(_v("mu", "mu is not a homomorphism", w))
    hinv = np.array([H.inv_idx(h) for h in range(H.size)], np.int64)
    ginv = np.array([G1.inv_idx(g) for g in range(G1.size)], np.int64)
    for g in range(G1.size):
        e = eta[g]
        if len(np.unique(e)) != H.size or np.any(e[T] != T[e[:, None], e[None, :]]):
            out.append(_v("eta", "eta(g) is not an automorphism of H", [g]))
            break
    for a in range(G1.size):
        w = _first(eta[T1[a]] != eta[a][eta])
        if w:
            out.append(_v("eta", "eta is not a homomorphism G1 -> Aut(H)", [a, w[0], w[1]]))
            break
    if out:
        return out
    for g in range(G1.size):
        w = _first(mu[eta[g]] != T1[T1[g, mu], ginv[g]])
        if w:
            out.append(_v("(i)", "mu(g.h) != g mu(h) g^-1", [g, w[0]]))
            break
    w = _first(eta[mu] != T[T, hinv[:, None]])
    if w:
        out.append(_v("(ii)", "mu(h).h' != h h' h^-1", w))
    out += _check_group_ends(X, T, T1, T2)
    return out


def _check_group_ends(X, T, T1, T2) -> list:
    H, G1, M = X.H, X.G1, X.M
    out = []
    ker = np.flatnonzero(X.mu == G1.identity)
    iota = X.iota
    if len(np.unique(iota)) != M.size:
        out.append(_v("kernel", "iota is not injective"))
    els = M.elements()
    madd = M.index(els[:, None, :] + els[None, :, :])
    w = _first(iota[madd] != T[iota[:, None], iota[None, :]])
    if w:
        out.append(_v("kernel", "iota is not a homomorphism", w))
    if not np.array_equal(np.sort(iota), ker):
        out.append(_v("kernel", "iota(M) != ker mu"))
    w = _first(T[ker][:, :] != T[:, ker].T)
    if w:
        out.append(_v("kernel", "ker mu is not central", [int(ker[w[0]]), w[1]]))
    alpha = X.alpha
    w = _first(alpha[T1] != T2[alpha[:, None], alpha[None, :]])
    if w:
        out.append(_v("cokernel", "alpha is not a homomorphism", w))
    if len(np.unique(alpha)) != X.G2.size:
        out.append(_v("cokernel", "alpha is not surjective"))
    if not np.array_equal(np.flatnonzero(alpha == X.G2.identity), np.unique(X.mu)):
        out.append(_v("cokernel", "ker alpha != im mu"))
    if not out and M.rank:
        act = X.module_action()
        bad = [int(g) for g in np.flatnonzero(alpha == X.G2.identity) if np.any(act[g] != np.eye(M.rank, dtype=np.int64))]
        if bad:
            out.append(_v("module", "action on M does not factor through G2", [bad[0]]))
    return out


def _check_lie(X: LieCrossedModule) -> list:
    g, g1, g2 = X.g, X.g1, X.g2
    out = []
    why = _lie_hom_violation(X.mu, g, g1)
    if why:
        out.append(_v("mu", why.replace("alpha", "mu")))
    mod = PModule(g.p, g.exps)
    for i in range(g1.rank):
        D = X.eta[i]
        if not mod.is_hom(D) or np.any((int(g1.orders[i]) * D) % g.orders[:, None]):
            out.append(_v("eta", f"eta({g1.labels[i]}) is not well defined", [i]))
            return out
        for a in range(g.rank):
            for b in range(g.rank):
                lhs = D @ g.C[a, b] % g.orders
                rhs = (g.bracket(D[:, a], g.basis_vector(b)) + g.bracket(g.basis_vector(a), D[:, b])) % g.orders
                if not np.array_equal(lhs, rhs):
                    out.append(_v("eta", f"eta({g1.labels[i]}) is not a derivation", [i, a, b]))
                    return out
    for i in range(g1.rank):
        for j in range(g1.rank):
            lhs = X.eta_of(g1.C[i, j])
            rhs = (X.eta[i] @ X.eta[j] - X.eta[j] @ X.eta[i]) % g.orders[:, None] if g.rank else lhs
            if not np.array_equal(lhs, rhs):
                out.append(_v("eta", "eta is not a Lie homomorphism", [i, j]))
                return out
    if out:
        return out
    for i in range(g1.rank):
        for a in range(g.rank):
            lhs = (X.eta[i][:, a] @ X.mu) % g1.orders
            if not np.array_equal(lhs, g1.bracket(g1.basis_vector(i), X.mu[a])):
                out.append(_v("(i)", "mu(eta(y) a) != [y, mu(a)]", [i, a]))
                break
        else:
            continue
        break
    for a in range(g.rank):
        E = X.eta_of(X.mu[a])
        bad = [b for b in range(g.rank) if not np.array_equal(E[:, b], g.bracket(g.basis_vector(a), g.basis_vector(b)))]
        if bad:
            out.append(_v("(ii)", "eta(mu(a)) b != [a, b]", [a, bad[0]]))
            break
    return out + _check_lie_ends(X)


def _check_lie_ends(X: LieCrossedModule) -> list:
    g, g1, g2, M = X.g, X.g1, X.g2, X.M
    out = []
    iota = X.iota
    if M.rank and np.any((M.orders[:, None] * iota) % g.orders):
        out.append(_v("kernel", "iota is not well defined"))
        return out
    img = g.span(iota)
    if img.order() != M.size:
        out.append(_v("kernel", "iota is not injective"))
    ker = g.span(kernel(X.mu.T, g.exps, g1.exps, g.p)) if g.rank else g.span([])
    if img != ker:
        out.append(_v("kernel", "iota(M) != ker mu"))
    for k in range(M.rank):
        for b in range(g.rank):
            if g.bracket(iota[k], g.basis_vector(b)).any():
                out.append(_v("kernel", "ker mu is not central", [k, b]))
                return out
    why = _lie_hom_violation(X.alpha, g1, g2)
    if why:
        out.append(_v("cokernel", why))
    if g2.span(X.alpha) != g2.full():
        out.append(_v("cokernel", "alpha is not surjective"))
    kal = g1.span(kernel(X.alpha.T, g1.exps, g2.exps, g1.p)) if g1.rank else g1.span([])
    if kal != g1.span(X.mu):
        out.append(_v("cokernel", "ker alpha != im mu"))
    if not out and M.rank:
        psi = X.module_action()
        for y in kal.generators:
            if (np.einsum("i,ijk->jk", y, psi) % M.orders[:, None]).any():
                out.append(_v("module", "action on M does not factor through g2", y.tolist()))
                break
    return out


def _require_valid(X):
    rep = check_axioms(X)
    if not rep.ok:
        raise InvalidCrossedModule("; ".join(v["message"] for v in rep.violations))


# ------------------------------------------------------------- transport

def _bound_cd(c, d, p, witness):
    if c + d >= p:
        exc = HypothesisViolated(
            f"hypothesis violated for crossed-module transport: needs {REQUIREMENT} (c={c}, d={d}, p={p})"
        )
        exc.witness = witness
        raise exc


def _gamma_witness(G: FiniteGroup) -> dict:
    gam = G.gamma_series()
    return {"class": len(gam) - 1 if len(gam) > 1 else 0, "orders": [int(len(s)) for s in gam]}


def log_crossed(X: GroupCrossedModule) -> LieCrossedModule:
    """Apply log objectwise; eta becomes the log of each automorphism."""
    _require_valid(X)
    for G in (X.H, X.G1, X.G2):
        if not isinstance(G, LazardGroup):
            raise TypeError("log_crossed needs LazardGroup carriers")
    H, G1, G2, M = X.H, X.G1, X.G2, X.M
    TM = GroupTriple(G1, M, X.module_action())
    c = max(G1.nilpotency_class(), G2.nilpotency_class())
    d = TM.action_length()
    _bound_cd(c, d, X.p, {"G1": _gamma_witness(G1), "G2": _gamma_witness(G2), "d": d})
    g = H.lie
    hg = H.generator_indices()
    mu = G1.to_element(X.mu[hg]).reshape(g.rank, G1.lie.rank)
    alpha = G2.to_element(X.alpha[G1.generator_indices()]).reshape(G1.lie.rank, G2.lie.rank)
    phi = np.zeros((G1.size, g.rank, g.rank), np.int64)
    for j, h in enumerate(hg):
        phi[:, :, j] = H.to_element(X.eta[:, h])
    els = g.elements()
    for x in range(G1.size):
        if not np.array_equal(g.index((els @ phi[x].T) % g.orders), X.eta[x]):
            raise InvalidCrossedModule("eta(g) is not additive on log H")
    try:
        eta = log_triple(GroupTriple(G1, PModule(g.p, g.exps), phi)).psi
    except (OutsideLazardRange, InvalidTriple) as exc:
        raise HypothesisViolated(
            f"hypothesis violated for crossed-module transport: needs the G1-action on H of length < p ({exc})"
        ) from exc
    iota = H.to_element(X.iota_basis()).reshape(M.rank, g.rank)
    return LieCrossedModule(g, G1.lie, G2.lie, mu, eta, alpha, M, iota, X.name)


def exp_crossed(Y: LieCrossedModule) -> GroupCrossedModule:
    """Inverse of log_crossed: BCH groups on the same coordinates."""
    _require_valid(Y)
    g, g1, g2, M = Y.g, Y.g1, Y.g2, Y.M
    TM = LieTriple(g1, M, Y.module_action())
    c = max(g1.nilpotency_class(), g2.nilpotency_class())
    d = TM.action_length()
    _bound_cd(c, d, Y.p, {"g1_class": g1.nilpotency_class(), "g2_class": g2.nilpotency_class(), "d": d})
    H, G1, G2 = LazardGroup(g), LazardGroup(g1), LazardGroup(g2)
    els, els1 = g.elements(), g1.elements()
    mu = g1.index((els @ Y.mu) % g1.orders) if g1.rank else np.zeros(g.size, np.int64)
    alpha = g2.index((els1 @ Y.alpha) % g2.orders) if g2.rank else np.zeros(g1.size, np.int64)
    try:
        phi = exp_triple(LieTriple(g1, PModule(g.p, g.exps), Y.eta), G1).phi
    except (OutsideLazardRange, InvalidTriple) as exc:
        raise HypothesisViolated(
            f"hypothesis violated for crossed-module transport: needs the g1-action on g of length < p ({exc})"
        ) from exc
    eta = np.array([g.index((els @ phi[x].T) % g.orders) for x in range(G1.size)], np.int64)
    iota = g.index((M.elements() @ Y.iota) % g.orders) if g.rank else np.zeros(M.size, np.int64)
    return GroupCrossedModule(H, G1, G2, mu, eta.reshape(G1.size, H.size), alpha, M, iota, Y.name)


# --------------------------------------------------------------- boundary

def boundary_mismatch(X, Y) -> str | None:
    """Why X and Y do not share (G1, G2, alpha, M with its action), or None."""
    if type(X) is not type(Y):
        return "one group and one Lie crossed module"
    if isinstance(X, GroupCrossedModule):
        if not (_same_group(X.G1, Y.G1) and _same_group(X.G2, Y.G2)):
            return "different G1 or G2"
    elif (X.g1, X.g2) != (Y.g1, Y.g2):
        return "different g1 or g2"
    if not np.array_equal(X.alpha, Y.alpha):
        return "different cokernel maps"
    if X.M != Y.M:
        return "different kernel modules"
    if not np.array_equal(X.module_action(), Y.module_action()):
        return "different actions on M"
    return None


def _present(ring: NilLieRing, pts, kernel_idx, mul):
    """exp of a subquotient ring standing for the subgroup ``pts`` mod ``kernel_idx``.

    ``pts`` are coordinates in ``ring`` of a subgroup of exp(ring); ``mul``
    multiplies positions in ``pts`` with the native group law.  Returns the
    group and the label of every point, after checking exhaustively that the
    labelling is a surjective homomorphism whose kernel is ``kernel_idx``.
    """
    pts = as_rows(pts, ring.rank)
    S = ring.span(pts)
    if S.order() != len(pts):
        raise ValueError("point set is not a subgroup")
    if S.order() == ring.size:
        R, basis = ring, np.eye(ring.rank, dtype=np.int64)
    else:
        R, basis = subring_ring(ring, S)
    solver = LinearSolver(basis.T, R.exps, ring.exps, ring.p)
    cR = as_rows([R.reduce(solver.solve(v)) for v in pts], R.rank)
    qm = quotient_map(R, R.span(cR[np.asarray(kernel_idx, np.int64)]))
    Q = qm.target
    GQ = LazardGroup(Q)
    labels = Q.index(qm(cR)) if Q.rank else np.zeros(len(pts), np.int64)
    # phi(x s) = phi(x) phi(s) on a generating set s forces a homomorphism
    n = len(pts)
    where = _positions(ring.index(pts))
    gens = where(ring.index(S.generators)) if S.generators.size else np.zeros(0, np.int64)
    seen = np.zeros(n, bool)
    seen[where(np.array([0]))] = True
    frontier = np.flatnonzero(seen)
    while frontier.size:
        nxt = np.unique(np.concatenate([mul(frontier, np.full(frontier.size, s)) for s in gens] or [frontier[:0]]))
        nxt = nxt[~seen[nxt]]
        seen[nxt] = True
        frontier = nxt
    if not seen.all():
        raise RuntimeError("additive generators do not generate the subgroup")
    every = np.arange(n)
    for s in gens:
        sv = np.full(n, s)
        if not np.array_equal(labels[mul(every, sv)], GQ.mul_idx(labels[every], labels[sv])):
            raise RuntimeError("subquotient labelling is not a homomorphism")
    counts = np.bincount(labels, minlength=GQ.size)
    if np.any(counts != len(kernel_idx)) or np.any(labels[np.asarray(kernel_idx, np.int64)] != 0):
        raise RuntimeError("subquotient labelling has the wrong kernel")
    return GQ, labels


def _positions(keys):
    order = np.argsort(keys)
    sk = keys[order]

    def pos(q):
        i = np.searchsorted(sk, q)
        if np.any(i >= len(sk)) or np.any(sk[np.minimum(i, len(sk) - 1)] != q):
            raise KeyError("element outside the point set")
        return order[i]

    return pos


def _need_lazard(*groups):
    for G in groups:
        if not isinstance(G, LazardGroup):
            raise TypeError("this construction needs LazardGroup carriers")


def baer_sum_crossed(X, Y):
    """Sum of two crossed modules with the same boundary.

    The pullback keeps the pairs (h, h') over the same element of G1, so the
    sum still maps onto im mu inside G1; the anti-diagonal copy of M is then
    divided out.
    """
    why = boundary_mismatch(X, Y)
    if why:
        raise BoundaryMismatch(why)
    _require_valid(X)
    _require_valid(Y)
    if isinstance(X, LieCrossedModule):
        return _baer_lie(X, Y)
    _need_lazard(X.H, Y.H)
    H, K, M = X.H, Y.H, X.M
    P = np.array([(h, k) for h in range(H.size) for k in np.flatnonzero(Y.mu == X.mu[h])], np.int64)
    keys = P[:, 0] * K.size + P[:, 1]
    pos = _positions(keys)
    TH, TK = H.table(), K.table()

    def mul(i, j):
        return pos(TH[P[i, 0], P[j, 0]] * K.size + TK[P[i, 1], P[j, 1]])

    pts = np.hstack([H.to_element(P[:, 0]), K.to_element(P[:, 1])])
    kinv = np.array([K.inv_idx(k) for k in Y.iota], np.int64)
    anti = pos(X.iota * K.size + kinv)
    GQ, lab = _present(direct_sum(H.lie, K.lie), pts, anti, mul)
    mu = np.zeros(GQ.size, np.int64)
    mu[lab] = X.mu[P[:, 0]]
    eta = np.zeros((X.G1.size, GQ.size), np.int64)
    for g in range(X.G1.size):
        eta[g, lab] = lab[pos(X.eta[g, P[:, 0]] * K.size + Y.eta[g, P[:, 1]])]
    iota = lab[pos(X.iota * K.size + K.identity)]
    return GroupCrossedModule(GQ, X.G1, X.G2, mu, eta, X.alpha, M, iota, f"{X.name}+{Y.name}")


def _baer_lie(X: LieCrossedModule, Y: LieCrossedModule) -> LieCrossedModule:
    g, h, g1, M, p = X.g, Y.g, X.g1, X.M, X.p
    D = direct_sum(g, h)
    r = g.rank
    S = D.span(kernel((np.vstack([X.mu, -Y.mu]) % g1.orders).T, D.exps, g1.exps, p)) if g1.rank else D.full()
    R, basis = subring_ring(D, S)
    solver = LinearSolver(basis.T, R.exps, D.exps, p)

    def to_R(v):
        x = solver.solve(D.reduce(v))
        if x is None:
            raise RuntimeError("vector outside the pullback")
        return R.reduce(x)

    anti = [to_R(np.concatenate([X.iota[k], -Y.iota[k]])) for k in range(M.rank)]
    qm = quotient_map(R, R.span(as_rows(anti, R.rank)))
    Q = qm.target
    lift = as_rows(qm.section, R.rank) @ basis % D.orders if Q.rank else np.zeros((0, D.rank), np.int64)
    mu = (lift[:, :r] @ X.mu) % g1.orders if Q.rank else np.zeros((0, g1.rank), np.int64)
    eta = np.zeros((g1.rank, Q.rank, Q.rank), np.int64)
    for i in range(g1.rank):
        for j in range(Q.rank):
            v = np.concatenate([X.eta[i] @ lift[j, :r], Y.eta[i] @ lift[j, r:]])
            eta[i, :, j] = qm(to_R(v))
    iota = np.array([qm(to_R(np.concatenate([X.iota[k], np.zeros(h.rank, np.int64)]))) for k in range(M.rank)], np.int64)
    return LieCrossedModule(Q, g1, X.g2, mu, eta, X.alpha, M, iota.reshape(M.rank, Q.rank), f"{X.name}+{Y.name}")


def negate_crossed(X):
    """Same crossed module with M identified through m -> -m."""
    if isinstance(X, LieCrossedModule):
        return LieCrossedModule(X.g, X.g1, X.g2, X.mu, X.eta, X.alpha, X.M, -X.iota, f"-{X.name}")
    neg = X.M.index(-X.M.elements())
    return GroupCrossedModule(X.H, X.G1, X.G2, X.mu, X.eta, X.alpha, X.M, X.iota[neg], f"-{X.name}")


def split_crossed(X):
    """The split crossed module M x ker(alpha) with the boundary of X."""
    if isinstance(X, LieCrossedModule):
        return _split_lie(X)
    _need_lazard(X.G1)
    G1, M = X.G1, X.M
    act = X.module_action()
    Kg = np.flatnonzero(X.alpha == X.G2.identity)
    els = M.elements()
    P = np.array([(m, k) for m in range(M.size) for k in Kg], np.int64)
    pos = _positions(P[:, 0] * G1.size + P[:, 1])
    T1 = G1.table()
    madd = M.index(els[:, None, :] + els[None, :, :])

    def mul(i, j):
        return pos(madd[P[i, 0], P[j, 0]] * G1.size + T1[P[i, 1], P[j, 1]])

    pts = np.hstack([els[P[:, 0]], G1.to_element(P[:, 1])])
    GQ, lab = _present(direct_sum(abelian(M.p, M.exps), G1.lie), pts, pos(np.array([G1.identity])), mul)
    mu = np.zeros(GQ.size, np.int64)
    mu[lab] = P[:, 1]
    ginv = np.array([G1.inv_idx(g) for g in range(G1.size)], np.int64)
    eta = np.zeros((G1.size, GQ.size), np.int64)
    for g in range(G1.size):
        mm = M.index(np.einsum("ij,nj->ni", act[g], els[P[:, 0]]))
        kk = T1[T1[g, P[:, 1]], ginv[g]]
        eta[g, lab] = lab[pos(mm * G1.size + kk)]
    iota = lab[pos(np.arange(M.size) * G1.size + G1.identity)]
    return GroupCrossedModule(GQ, G1, X.G2, mu, eta, X.alpha, M, iota, "split")


def _split_lie(X: LieCrossedModule) -> LieCrossedModule:
    g1, M, p = X.g1, X.M, X.p
    K = g1.span(kernel(X.alpha.T, g1.exps, X.g2.exps, p)) if X.g2.rank else g1.full()
    R, basis = subring_ring(g1, K)
    solver = LinearSolver(basis.T, R.exps, g1.exps, p)
    D = direct_sum(abelian(p, M.exps), R)
    m, r = M.rank, R.rank
    mu = np.vstack([np.zeros((m, g1.rank), np.int64), as_rows(basis, g1.rank).reshape(r, g1.rank)])
    psi = X.module_action()
    eta = np.zeros((g1.rank, m + r, m + r), np.int64)
    for i in range(g1.rank):
        eta[i, :m, :m] = psi[i]
        for j in range(r):
            eta[i, m:, m + j] = R.reduce(solver.solve(g1.bracket(g1.basis_vector(i), basis[j])))
    iota = np.hstack([np.eye(m, dtype=np.int64), np.zeros((m, r), np.int64)])
    return LieCrossedModule(D, g1, X.g2, mu, eta, X.alpha, M, iota, "split")


def inner_twist(X: GroupCrossedModule, h0: int) -> GroupCrossedModule:
    """Transport X along conjugation by h0; theta itself is an equivalence."""
    H = X.H
    hinv = H.inv_idx(h0)
    idx = np.arange(H.size)
    theta = H.mul_idx(H.mul_idx(h0, idx), hinv)
    inv = np.empty_like(theta)
    inv[theta] = idx
    eta = np.array([theta[X.eta[g][inv]] for g in range(X.G1.size)], np.int64)
    return GroupCrossedModule(H, X.G1, X.G2, X.mu[inv], eta, X.alpha, X.M, theta[X.iota], f"{X.name}^{h0}")


# ------------------------------------------------------------ equivalence

@dataclass
class EquivalenceResult:
    verdict: str
    witness: list | None = None
    reason: str = ""

    @property
    def value(self) -> bool | None:
        return {"equivalent": True, "not equivalent": False}.get(self.verdict)

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "witness": self.witness, "reason": self.reason}


UNDECIDED = "undecided at this scale"


def crossed_equivalent(X, Y, bound: int | None = None) -> EquivalenceResult:
    """Search, in lexicographic order, for f: H -> H' with mu' f = mu, f eta = eta' f, f iota = iota'."""
    why = boundary_mismatch(X, Y)
    if why:
        return EquivalenceResult("not equivalent", None, why)
    n1 = X.H.size if isinstance(X, GroupCrossedModule) else X.g.size
    n2 = Y.H.size if isinstance(Y, GroupCrossedModule) else Y.g.size
    if n1 != n2:
        return EquivalenceResult("not equivalent", None, f"orders differ: {n1} vs {n2}")
    bound = size_bound(X.p) if bound is None else bound
    if n1 > bound:
        return EquivalenceResult(UNDECIDED, None, f"|H| = {n1} exceeds the bound {bound}")
    f = _search_group(X, Y) if isinstance(X, GroupCrossedModule) else _search_lie(X, Y)
    if f is None:
        return EquivalenceResult("not equivalent", None, "no compatible isomorphism")
    return EquivalenceResult("equivalent", f.tolist(), "")


def _extend(H: FiniteGroup, K: FiniteGroup, images: dict):
    """The homomorphism with the given generator images, or None."""
    TH, TK = H.table(), K.table()
    f = np.full(H.size, -1, np.int64)
    f[H.identity] = K.identity
    frontier = [H.identity]
    gens = sorted(images)
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = TH[x, s]
                if f[y] < 0:
                    f[y] = TK[f[x], images[s]]
                    nxt.append(y)
        frontier = nxt
    if np.any(f < 0):
        return None
    for s in gens:
        if not np.array_equal(f[TH[:, s]], TK[f, images[s]]):
            return None
    return f


def _search_group(X: GroupCrossedModule, Y: GroupCrossedModule):
    H, K = X.H, Y.H
    forced = {int(a): int(b) for a, b in zip(X.iota_basis(), Y.iota_basis())}
    S = [int(s) for s in H.minimal_generators() if int(s) not in forced]
    cands = [np.flatnonzero(Y.mu == X.mu[s]) for s in S]
    for choice in product(*cands):
        images = dict(forced)
        images.update(zip(S, map(int, choice)))
        f = _extend(H, K, images)
        if f is None or len(np.unique(f)) != H.size:
            continue
        if not np.array_equal(Y.mu[f], X.mu) or not np.array_equal(f[X.iota], Y.iota):
            continue
        if all(np.array_equal(f[X.eta[g]], Y.eta[g][f]) for g in range(X.G1.size)):
            return f
    return None


def _search_lie(X: LieCrossedModule, Y: LieCrossedModule):
    g, h, g1 = X.g, Y.g, X.g1
    if g.rank == 0:
        return np.zeros((0, h.rank), np.int64) if h.size == 1 else None
    solver = LinearSolver(Y.mu.T, h.exps, g1.exps, g.p) if g1.rank else None
    fibre = sorted(h.span(Y.iota).elements())
    cands = []
    for i in range(g.rank):
        x0 = solver.solve(X.mu[i]) if solver else np.zeros(h.rank, np.int64)
        if x0 is None:
            return None
        rows = sorted({tuple(((x0 + np.array(k)) % h.orders).tolist()) for k in fibre})
        rows = [r for r in rows if not np.any((int(g.orders[i]) * np.array(r)) % h.orders)]
        cands.append(rows)
    for choice in product(*cands):
        F = np.array(choice, np.int64).reshape(g.rank, h.rank)
        if not np.array_equal((X.iota @ F) % h.orders, Y.iota):
            continue
        if _lie_hom_violation(F, g, h) or h.span(F).order() != h.size:
            continue
        if all(
            np.array_equal((X.eta[i].T @ F) % h.orders, (Y.eta[i] @ F.T).T % h.orders) for i in range(g1.rank)
        ):
            return F
    return None


# ---------------------------------------------------------- constructors

def conjugation_crossed(G: LazardGroup, N, name="") -> GroupCrossedModule:
    """N -> G -> G/N with eta by conjugation, built from the group table."""
    N = np.unique(np.asarray(N, np.int64))
    if not G.is_normal(N):
        raise ValueError("N is not normal in G")
    T = G.table()
    pos = _positions(N)
    GH, lab = _present(G.lie, G.to_element(N), pos(np.array([G.identity])), lambda i, j: pos(T[N[i], N[j]]))
    every = np.arange(G.size, dtype=np.int64)
    G2, alpha = _present(G.lie, G.to_element(every), N, lambda i, j: T[i, j])
    mu = np.zeros(GH.size, np.int64)
    mu[lab] = N
    ginv = np.array([G.inv_idx(g) for g in every], np.int64)
    eta = np.zeros((G.size, GH.size), np.int64)
    for g in every:
        eta[g, lab] = lab[pos(T[T[g, N], ginv[g]])]
    M = PModule(G.p, ())
    return GroupCrossedModule(GH, G, G2, mu, eta, alpha, M, np.array([GH.identity]), name)


def ideal_crossed(L: NilLieRing, I, name="") -> LieCrossedModule:
    """Inclusion of an ideal with the adjoint action; the kernel is 0."""
    I = I if not isinstance(I, np.ndarray) else L.span(I)
    R, basis = subring_ring(L, I)
    solver = LinearSolver(basis.T, R.exps, L.exps, L.p)
    qm = quotient_map(L, I)
    eta = np.zeros((L.rank, R.rank, R.rank), np.int64)
    for i in range(L.rank):
        for j in range(R.rank):
            eta[i, :, j] = R.reduce(solver.solve(L.bracket(L.basis_vector(i), basis[j])))
    M = PModule(L.p, ())
    return LieCrossedModule(R, L, qm.target, basis, eta, qm.matrix, M, np.zeros((0, R.rank), np.int64), name)


def module_crossed(T: LieTriple, name="") -> LieCrossedModule:
    """M -> L -> L with mu = 0: both axioms hold trivially."""
    L, M = T.L, T.M
    g = abelian(M.p, M.exps)
    return LieCrossedModule(
        g, L, L, np.zeros((M.rank, L.rank), np.int64), T.psi, np.eye(L.rank, dtype=np.int64),
        M, np.eye(M.rank, dtype=np.int64), name or T.name,
    )


def central_crossed(L: NilLieRing, Z, extra: int = 0, name="") -> LieCrossedModule:
    """L -> L/Z (+) (Z/p)^extra for a central ideal Z; g1 acts through L/Z."""
    Z = Z if not isinstance(Z, np.ndarray) else L.span(Z)
    qm = quotient_map(L, Z)
    Q = qm.target
    g1 = direct_sum(Q, abelian(L.p, [1] * extra)) if extra else Q
    mu = np.hstack([qm.matrix, np.zeros((L.rank, extra), np.int64)])
    eta = np.zeros((g1.rank, L.rank, L.rank), np.int64)
    for i in range(Q.rank):
        lift = qm.section[i]
        for j in range(L.rank):
            eta[i, :, j] = L.bracket(lift, L.basis_vector(j))
    R, basis = subring_ring(L, Z)
    M = PModule(L.p, R.exps)
    g2 = abelian(L.p, [1] * extra)
    alpha = np.vstack([np.zeros((Q.rank, extra), np.int64), np.eye(extra, dtype=np.int64)])
    return LieCrossedModule(L, g1, g2, mu, eta, alpha, M, basis, name)


def cyclic_crossed(p: int, k: int, name="") -> LieCrossedModule:
    """Z/p^2 -> Z/p -> 0 with M = Z/p included as m -> k p m (k = 0 gives the split one)."""
    if k % p == 0:
        g = abelian(p, [1, 1])
        mu = np.array([[0], [1]], np.int64)
        iota = np.array([[1, 0]], np.int64)
    else:
        g = abelian(p, [2])
        mu = np.array([[1]], np.int64)
        iota = np.array([[(k % p) * p]], np.int64)
    g1, g2 = abelian(p, [1]), NilLieRing(p, [])
    eta = np.zeros((1, g.rank, g.rank), np.int64)
    return LieCrossedModule(g, g1, g2, mu, eta, np.zeros((1, 0), np.int64), PModule(p, (1,)), iota, name or f"cyclic{k}")


def crossed_zoo(p: int = 5) -> list[LieCrossedModule]:
    """Small crossed modules with c + d < p, built on the Lie side."""
    from .liering import heisenberg
    from .triples import adjoint_triple, jordan_triple, trivial_triple

    Hs = heisenberg(p)
    center = Hs.span(np.array([[0, 0, 1]]))
    xz = Hs.span(np.array([[1, 0, 0], [0, 0, 1]]))
    out = [
        ideal_crossed(Hs, Hs.full(), "heis/whole"),
        ideal_crossed(Hs, center, "heis/center"),
        ideal_crossed(Hs, xz, "heis/xz"),
        central_crossed(Hs, center, 0, "heis/central"),
        central_crossed(Hs, center, 1, "heis/central+1"),
        module_crossed(trivial_triple(abelian(p, [1]), (1,)), "ab1/triv"),
        module_crossed(jordan_triple(abelian(p, [1]), 1), "ab1/jordan"),
        module_crossed(adjoint_triple(Hs), "heis/adjoint"),
        module_crossed(trivial_triple(abelian(p, [1, 1]), (2,)), "ab11/triv2"),
        cyclic_crossed(p, 0, "cyclic/split"),
        cyclic_crossed(p, 1, "cyclic/1"),
        cyclic_crossed(p, 2, "cyclic/2"),
    ]
    return out
