"""Exp/Log transport of cohomology classes, and functoriality along morphisms.

Degree 1 goes through the module extension X_f: exponentiate (or take the
log of) the action on X and read the crossed hom (derivation) off the last
column.  Degree 2 goes through the extension itself: the Lie extension ring
is exponentiated and the group cocycle is read against the section
a -> sum a_i beta_i; in the other direction the tails of log(E~) are
computed from the group law with the inverse BCH words.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import freelie
from ..bchgroup import CayleyGroup, LazardGroup, _pow_rational
from ..liering import NilLieRing, direct_sum, quotient_map, subring_ring
from ..ring import LinearSolver, Subquotient, kernel
from ..triples import (
    GroupTriple,
    LieTriple,
    PModule,
    TripleMorphism,
    exp_triple,
    log_triple,
    morphism_check,
)
from .base import CohomologyGroup, HypothesisViolated, hom_is_isomorphism
from .degree0 import coinvariant_span, h0
from .group import (
    ExtensionGroup,
    GroupCochains,
    GroupExtensionData,
    coset_quotient,
    baer_sum_group,
    cocycle_from_extension,
    h1_group,
    h2_group,
)
from .lie import (
    LieCochains,
    LieExtension,
    baer_sum_lie,
    h1_lie,
    h2_lie,
    lie_ring_from_factor_system,
    tails_from_extension,
)
from .modext import (
    ModuleExtension,
    baer_sum_module,
    crossed_hom_from_extension,
    derivation_from_extension,
    group_triple_of,
    lie_triple_of,
    module_extension_group,
    module_extension_lie,
)

# ------------------------------------------------------------- hypotheses

REQUIREMENT = {0: "c < p and d < p", 1: "c < p and d < p-1", 2: "c + d < p"}


def invariants_cd(T: LieTriple) -> tuple[int, int, int]:
    return T.L.nilpotency_class(), T.action_length(), T.L.p


def in_scope(T: LieTriple, degree: int) -> bool:
    c, d, p = invariants_cd(T)
    if degree == 0:
        return c < p and d < p
    if degree == 1:
        return c < p and d < p - 1
    if degree == 2:
        return c + d < p
    raise ValueError(f"degree must be 0, 1 or 2, not {degree}")


def require(T: LieTriple, degree: int):
    if not in_scope(T, degree):
        c, d, p = invariants_cd(T)
        raise HypothesisViolated(
            f"hypothesis violated for degree {degree}: needs {REQUIREMENT[degree]} (c={c}, d={d}, p={p})"
        )


# --------------------------------------------------------------- degree 1

def derivation_to_crossed_hom(T: LieTriple, u, TG: GroupTriple) -> np.ndarray:
    """Full crossed hom table on exp(L) for a derivation u (r x m)."""
    m = T.M.rank
    XT = lie_triple_of(T, module_extension_lie(T, u))
    XG = exp_triple(XT, TG.G)
    return XG.phi[:, :m, m] % T.M.orders


def crossed_hom_to_derivation(TG: GroupTriple, F) -> np.ndarray:
    m = TG.M.rank
    XG = group_triple_of(TG, module_extension_group(TG, F))
    XL = log_triple(XG)
    return (XL.psi[:, :m, m] % TG.M.orders).reshape(-1)


# --------------------------------------------------------------- degree 2

def _inv_iota_lie(ext: LieExtension, T: LieTriple):
    E, M = ext.E, T.M
    solver = LinearSolver(np.asarray(ext.iota).T, M.exps, E.exps, M.p)

    def inv(v):
        x = solver.solve(E.reduce(v))
        if x is None:
            raise ValueError("element outside the kernel")
        return M.reduce(x)

    return inv


def tails_to_group_cocycle(T: LieTriple, u, TG: GroupTriple, C: GroupCochains | None = None) -> np.ndarray:
    """Restricted group cocycle u(x, s) = sigma(x) sigma(s) sigma(xs)^-1 in exp(E)."""
    C = C or GroupCochains(TG)
    ext = lie_ring_from_factor_system(T, u)
    GE = LazardGroup(ext.E)
    L = T.L
    els = L.elements()
    sec = (els @ np.asarray(ext.section, np.int64)) % ext.E.orders
    xs = np.repeat(C.nonid, C.nS)
    ss = np.tile(C.S, len(C.nonid))
    xss = TG.G.mul_idx(xs, ss)
    w = GE.mul(GE.mul(sec[xs], sec[ss]), GE.inv(sec[xss]))
    inv = _inv_iota_lie(ext, T)
    return np.array([inv(v) for v in w], np.int64).reshape(-1)


def _word_ops(X):
    mul = lambda a, b: int(X.mul_idx(int(a), int(b)))  # noqa: E731
    inv = lambda a: int(X.inv_idx(int(a)))  # noqa: E731
    return mul, inv


def group_cocycle_to_tails(TG: GroupTriple, v, T: LieTriple, C: GroupCochains | None = None) -> np.ndarray:
    """Tails of log(E~) for the lifts beta_i = (0, exp b_i)."""
    C = C or GroupCochains(TG)
    f = C.expand2(v)
    X = ExtensionGroup(TG, f)
    L, M = T.L, T.M
    c, d, p = invariants_cd(T)
    h1, h2 = freelie.inverse_bch_words(max(c + d, 2))
    Eexp = max(L.exps) + (M.F if M.rank else 0)
    mul, inv = _word_ops(X)
    one = X.identity
    zero_m = np.zeros(M.rank, np.int64)
    beta = [int(X.join(zero_m, int(L.index(L.basis_vector(i))))) for i in range(L.rank)]

    def to_m(e):
        mv, x = X.split(e)
        if int(x) != TG.G.identity:
            raise RuntimeError("tail left the kernel")
        return mv

    def lsum(a, b):
        return freelie_eval(h1, a, b)

    def freelie_eval(word, a, b):
        out = one
        for tree, q in word:
            cw = freelie.commutator_word(tree, (a, b), mul, inv)
            out = mul(out, _pow_rational(mul, inv, one, cw, q, p, Eexp))
        return out

    LC = LieCochains(T)
    t = np.array([to_m(X.pow_idx(b, int(o))) for b, o in zip(beta, L.orders)], np.int64).reshape(L.rank, M.rank)
    s = np.zeros((L.rank, L.rank, M.rank), np.int64)
    for i, j in LC.pairs:
        acc = one
        for k in range(L.rank):
            ck = int(L.C[i, j, k])
            if ck:
                acc = lsum(acc, X.pow_idx(beta[k], ck))
        br = freelie_eval(h2, beta[i], beta[j])
        s[i, j] = to_m(lsum(br, inv(acc)))
    return LC.pack(t, s)


# ---------------------------------------------------------- public entry

def transport_class(T: LieTriple, u, degree: int, *, inverse: bool = False, TG: GroupTriple | None = None):
    """Lie class vector -> group class vector (or back with ``inverse``).

    Group vectors use the layout of GroupCochains(TG) with its default
    generators; TG defaults to exp_triple(T).
    """
    require(T, degree)
    TG = TG or exp_triple(T)
    if degree == 0:
        return np.asarray(u, np.int64) % T.M.orders
    if degree == 1:
        C = GroupCochains(TG)
        if inverse:
            return crossed_hom_to_derivation(TG, C.expand1(u))
        return C.restrict1(derivation_to_crossed_hom(T, u, TG))
    if degree == 2:
        if inverse:
            return group_cocycle_to_tails(TG, u, T)
        return tails_to_group_cocycle(T, u, TG)
    raise ValueError(f"degree must be 0, 1 or 2, not {degree}")


# ------------------------------------------------------ additivity checks

def baer_additivity_1(T: LieTriple, TG: GroupTriple, u, v, HG: CohomologyGroup) -> bool:
    """tau(u + v) equals the Baer sum of tau(u) and tau(v) in H^1(G)."""
    C = HG.context
    Fu = derivation_to_crossed_hom(T, u, TG)
    Fv = derivation_to_crossed_hom(T, v, TG)
    x = module_extension_group(TG, Fu)
    y = module_extension_group(TG, Fv)
    S = baer_sum_module(x, y, T.M)
    w = C.restrict1(crossed_hom_from_extension(TG, S))
    uv = (np.asarray(u) + np.asarray(v)) % np.tile(T.M.orders, T.L.rank)
    return HG.same_class(w, C.restrict1(derivation_to_crossed_hom(T, uv, TG)))


def baer_additivity_2(T: LieTriple, TG: GroupTriple, u, v, HL: CohomologyGroup, HG: CohomologyGroup) -> bool:
    C = HG.context
    fu = C.expand2(tails_to_group_cocycle(T, u, TG, C))
    fv = C.expand2(tails_to_group_cocycle(T, v, TG, C))
    S = baer_sum_group(TG, ExtensionGroup(TG, fu).data(), ExtensionGroup(TG, fv).data())
    w = C.restrict2(cocycle_from_extension(TG, S))
    uv = HL.reduce(np.asarray(u) + np.asarray(v))
    return HG.same_class(w, tails_to_group_cocycle(T, uv, TG, C))


def baer_sum_classes(T, degree: int, u, v, H: CohomologyGroup):
    """Baer sum of the extensions of u and v, read back as a cochain.

    ``T`` is a LieTriple or GroupTriple and ``H`` its cohomology group in
    ``degree``.  Returns (w, same) where ``same`` says whether w is in the
    class of u + v.
    """
    M = T.M
    if isinstance(T, LieTriple):
        if degree == 1:
            S = baer_sum_module(module_extension_lie(T, u), module_extension_lie(T, v), M)
            w = derivation_from_extension(T, S)
        else:
            S = baer_sum_lie(T, lie_ring_from_factor_system(T, u), lie_ring_from_factor_system(T, v))
            w = tails_from_extension(T, S)
    else:
        C = H.context
        if degree == 1:
            x, y = module_extension_group(T, C.expand1(u)), module_extension_group(T, C.expand1(v))
            w = C.restrict1(crossed_hom_from_extension(T, baer_sum_module(x, y, M)))
        else:
            x, y = ExtensionGroup(T, C.expand2(u)).data(), ExtensionGroup(T, C.expand2(v)).data()
            w = C.restrict2(cocycle_from_extension(T, baer_sum_group(T, x, y)))
    w = np.asarray(w, np.int64)
    return w, bool(H.same_class(w, H.reduce(np.asarray(u) + np.asarray(v))))


# ---------------------------------------------------------------- compare

@dataclass
class CompareReport:
    degree: int
    in_scope: bool
    lie: list
    group: list
    equal: bool
    bijective: bool | None = None
    additive: bool | None = None
    roundtrip: bool | None = None
    witnesses: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        if not self.in_scope:
            return "out of theorem scope"
        ok = self.equal and self.bijective is not False and self.additive is not False and self.roundtrip is not False
        return "equivalent" if ok else "not equivalent"

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "in_scope": self.in_scope,
            "invariant_factors": {"lie": self.lie, "group": self.group},
            "equal": self.equal,
            "bijective": self.bijective,
            "additive": self.additive,
            "roundtrip": self.roundtrip,
            "verdict": self.verdict,
            "witnesses": self.witnesses,
        }


def _compare0(T, TG, scope):
    from ..ring import quotient_invariants

    a, b = h0(T), h0(TG)
    ca, cb = coinvariant_span(T), coinvariant_span(TG)
    cl, cg = T.chain(), TG.chain()
    chains = len(cl) == len(cg) and all(x == y for x, y in zip(cl, cg))
    eq = a == b and ca == cb and chains
    wit = [] if eq else [{"fixed_equal": a == b, "coinvariants_equal": ca == cb, "chains_equal": chains}]
    return CompareReport(
        0,
        scope,
        [int(x) for x in quotient_invariants(ca.generators, T.M.exps, T.M.p)],
        [int(x) for x in quotient_invariants(cb.generators, T.M.exps, T.M.p)],
        eq,
        bijective=eq,
        witnesses=wit,
    )


def compare(T: LieTriple, degree: int, *, pairs: int = 5, seed: int = 0, baer: bool = True,
            TG: GroupTriple | None = None) -> CompareReport:
    """Both sides, equality of invariant factors, and transport evidence.

    Out-of-scope inputs are still computed when possible and marked.
    """
    scope = in_scope(T, degree)
    if TG is None:
        TG = exp_triple(T)
    if degree == 0:
        return _compare0(T, TG, scope)
    HL = h1_lie(T) if degree == 1 else h2_lie(T)
    HG = h1_group(TG) if degree == 1 else h2_group(TG)
    rep = CompareReport(
        degree, scope, [int(x) for x in HL.invariants], [int(x) for x in HG.invariants],
        HL.invariants == HG.invariants,
    )
    if not scope:
        return rep
    fwd = lambda u: transport_class(T, u, degree, TG=TG)  # noqa: E731
    back = lambda v: transport_class(T, v, degree, inverse=True, TG=TG)  # noqa: E731
    reps = HL.representatives
    imgs = [fwd(u) for u in reps]
    coords = np.array([HG.coords(v) for v in imgs], np.int64).reshape(len(reps), len(HG.moduli))
    rep.bijective = bool(hom_is_isomorphism(coords, HL.moduli, HG.moduli, T.M.p))
    rep.roundtrip = all(HL.same_class(back(v), u) for u, v in zip(reps, imgs))
    rng = np.random.default_rng(seed)
    add = True
    for _ in range(pairs):
        u, v = HL.random_class(rng), HL.random_class(rng)
        if degree == 1:
            ok = baer_additivity_1(T, TG, u, v, HG) if baer else True
        else:
            ok = baer_additivity_2(T, TG, u, v, HL, HG) if baer else True
        ok = ok and HG.same_class(fwd(HL.reduce(u + v)), (fwd(u) + fwd(v)))
        if not ok:
            add = False
            rep.witnesses.append({"pair": [u.tolist(), v.tolist()]})
            break
    rep.additive = add
    return rep


# ------------------------------------------------ functoriality (cochains)

def pullpush_group_cochain(T1: GroupTriple, T2: GroupTriple, m: TripleMorphism, f, degree: int) -> np.ndarray:
    """Full-table map f -> beta o f o (alpha x alpha)."""
    alpha = np.asarray(m.alpha, np.int64)
    beta = np.asarray(m.beta, np.int64)
    f = np.asarray(f, np.int64)
    if degree == 1:
        return (f[alpha] @ beta.T) % T2.M.orders
    return (f[np.ix_(alpha, alpha)] @ beta.T) % T2.M.orders


def pullpush_lie_cochain(T1: LieTriple, T2: LieTriple, m: TripleMorphism, u, degree: int) -> np.ndarray:
    A = np.asarray(m.alpha, np.int64).reshape(T2.L.rank, T1.L.rank)
    beta = np.asarray(m.beta, np.int64)
    if degree == 1:
        u1 = np.asarray(u, np.int64).reshape(T1.L.rank, T1.M.rank)
        return ((A @ u1) @ beta.T % T2.M.orders).reshape(-1)
    C1, C2 = LieCochains(T1), LieCochains(T2)
    g, f = C1.factor_system(u)
    idx = T1.L.index((T2.L.elements() @ A) % T1.L.orders)
    g2 = (g[np.ix_(idx, idx)] @ beta.T) % T2.M.orders
    f2 = (f[np.ix_(idx, idx)] @ beta.T) % T2.M.orders
    return C2.tails_from_factor_system(g2, f2)


# --------------------------------------------- functoriality (extensions)

def pullpush_group_extension(T1: GroupTriple, T2: GroupTriple, m: TripleMorphism,
                             ext: GroupExtensionData) -> GroupExtensionData:
    """Pull back along alpha, push out along beta.

    Elements of M2 x| P are keyed ((e * |G2| + g) * |M2| + m2), P acting
    through its G2 coordinate.
    """
    alpha = np.asarray(m.alpha, np.int64)
    beta = np.asarray(m.beta, np.int64)
    G2, M1, M2 = T2.G, T1.M, T2.M
    E = ext.E
    nG, n2 = G2.size, M2.size
    fib = [np.flatnonzero(ext.proj == g) for g in range(T1.G.size)]
    pkeys = np.concatenate([fib[alpha[g]] * nG + g for g in range(nG)])
    keys = (pkeys[:, None] * n2 + np.arange(n2)[None, :]).reshape(-1)
    els2 = M2.elements()

    def mul(k1, k2):
        k1, k2 = np.broadcast_arrays(k1, k2)
        p1, m1 = k1 // n2, k1 % n2
        p2, m2 = k2 // n2, k2 % n2
        g1 = p1 % nG
        pk = E.mul_idx(p1 // nG, p2 // nG) * nG + G2.mul_idx(g1, p2 % nG)
        mm = els2[m1] + np.einsum("...ij,...j->...i", T2.phi[g1], els2[m2])
        return pk * n2 + M2.index(mm % M2.orders)

    els1 = M1.elements()
    bm = M2.index((els1 @ beta.T) % M2.orders)
    neg = M1.index(-els1)
    D = (ext.iota[neg] * nG + G2.identity) * n2 + bm
    table, reps, label = coset_quotient(keys, mul, D)
    ident = (E.identity * nG + G2.identity) * n2
    Q = CayleyGroup(table, int(label(np.array([ident]))[0]), check=False)
    iota = label(ident + np.arange(n2, dtype=np.int64))
    proj = (reps // n2) % nG
    return GroupExtensionData(Q, iota, proj)


def _semidirect_ring(T2: LieTriple, P: NilLieRing, lcoord) -> NilLieRing:
    """M2 (+) P with [(m,x),(n,y)] = (psi(x) n - psi(y) m, [x,y])."""
    M = T2.M
    m, r = M.rank, P.rank
    n = m + r
    C = np.zeros((n, n, n), np.int64)
    for i in range(r):
        for j in range(r):
            C[m + i, m + j, m:] = P.C[i, j]
        ps = T2.psi_of(lcoord[i])
        for q in range(m):
            C[m + i, q, :m] = ps[:, q]
            C[q, m + i, :m] = -ps[:, q] % M.orders
    return NilLieRing(M.p, tuple(M.exps) + tuple(P.exps), C, check=False)


def pullpush_lie_extension(T1: LieTriple, T2: LieTriple, mor: TripleMorphism, ext: LieExtension) -> LieExtension:
    A = np.asarray(mor.alpha, np.int64).reshape(T2.L.rank, T1.L.rank)
    beta = np.asarray(mor.beta, np.int64)
    L1, L2, M1, M2 = T1.L, T2.L, T1.M, T2.M
    E = ext.E
    D = direct_sum(E, L2)
    K = np.vstack([np.asarray(ext.proj), -A]) % L1.orders
    S = D.span(kernel(K.T, D.exps, L1.exps, L1.p))
    P, basis = subring_ring(D, S)
    lcoord = basis[:, E.rank:] % L2.orders
    R = _semidirect_ring(T2, P, lcoord)
    psolve = LinearSolver(basis.T, P.exps, D.exps, L1.p)

    def in_P(v):
        c = psolve.solve(D.reduce(v))
        if c is None:
            raise ValueError("element outside the pull-back")
        return c

    m2 = M2.rank
    rel = []
    for q in range(M1.rank):
        mvec = np.concatenate([np.asarray(ext.iota)[q], np.zeros(L2.rank, np.int64)])
        rel.append(np.concatenate([beta[:, q] % M2.orders, -in_P(mvec)]))
    qm = quotient_map(R, np.array(rel, np.int64).reshape(-1, R.rank) % R.orders)
    Q = qm.target
    iota = np.array([qm(np.eye(R.rank, dtype=np.int64)[q]) for q in range(m2)], np.int64).reshape(m2, Q.rank)
    lifts = qm.section % R.orders
    proj = (lifts[:, m2:] @ lcoord) % L2.orders
    return LieExtension(Q, iota, proj.reshape(Q.rank, L2.rank))


def transport_along_morphism(T1, T2, mor: TripleMorphism, u, degree: int, level: str = "cochain"):
    """Class vector of T1 -> class vector of T2 along a morphism.

    ``level="extension"`` builds the pulled-back, pushed-out extension and
    reads its class; ``"cochain"`` applies beta o f o (alpha x alpha).
    """
    rep = morphism_check(mor, T1, T2)
    if not rep.ok:
        raise ValueError(f"not a morphism: {rep.reason}")
    if isinstance(T1, LieTriple):
        if level == "cochain" or degree == 0:
            if degree == 0:
                return (np.asarray(mor.beta) @ np.asarray(u)) % T2.M.orders
            return pullpush_lie_cochain(T1, T2, mor, u, degree)
        if degree == 1:
            X2 = _pullpush_module(module_extension_lie(T1, u), T1, T2, mor)
            return derivation_from_extension(T2, X2)
        ext = lie_ring_from_factor_system(T1, u)
        return tails_from_extension(T2, pullpush_lie_extension(T1, T2, mor, ext))
    C1, C2 = GroupCochains(T1), GroupCochains(T2)
    if degree == 0:
        return (np.asarray(mor.beta) @ np.asarray(u)) % T2.M.orders
    full = C1.expand1(u) if degree == 1 else C1.expand2(u)
    if level == "cochain":
        out = pullpush_group_cochain(T1, T2, mor, full, degree)
        return C2.restrict1(out) if degree == 1 else C2.restrict2(out)
    if degree == 1:
        X2 = _pullpush_module(module_extension_group(T1, full), T1, T2, mor)
        return C2.restrict1(crossed_hom_from_extension(T2, X2))
    data = ExtensionGroup(T1, full).data()
    return C2.restrict2(cocycle_from_extension(T2, pullpush_group_extension(T1, T2, mor, data)))


def _pullpush_module(ext: ModuleExtension, T1, T2, mor: TripleMorphism) -> ModuleExtension:
    """Restrict the acting object along alpha, push out along beta."""
    alpha = np.asarray(mor.alpha, np.int64)
    beta = np.asarray(mor.beta, np.int64)
    X, M1, M2 = ext.X, T1.M, T2.M
    if ext.side == "lie":
        A = alpha.reshape(T2.L.rank, T1.L.rank)
        acts = np.einsum("ki,ijl->kjl", A, ext.actions) % X.orders[:, None]
        own = T2.psi
    else:
        acts = ext.actions[alpha]
        own = T2.phi
    p = M1.p
    D = PModule(p, tuple(M2.exps) + X.exps)
    m2 = M2.rank
    rel = np.hstack([beta.T, -ext.iota.T]) % D.orders
    sq = Subquotient(np.eye(D.rank, dtype=np.int64), rel, D.exps, p)
    reps = sq.representatives
    Q = PModule(p, sq.exponents)

    def act(B, A):
        cols = [sq.coords(np.concatenate([B @ v[:m2], A @ v[m2:]]) % D.orders) for v in reps]
        return np.array(cols, np.int64).T.reshape(Q.rank, Q.rank)

    qacts = np.array([act(B, A) for B, A in zip(own, acts)], np.int64).reshape(-1, Q.rank, Q.rank)
    iota = np.array([sq.coords(np.eye(D.rank, dtype=np.int64)[q]) for q in range(m2)], np.int64)
    proj = (reps[:, m2:] @ ext.proj) % (p**ext.N)
    return ModuleExtension(Q, qacts, iota.T.reshape(Q.rank, m2), proj.reshape(-1), ext.N, ext.side)
