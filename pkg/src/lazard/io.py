"""Text format for rings, triples and crossed modules.

A ring file::

    [ring]
    p = 5
    class_hint = 2
    basis = ["x", "y", "z"]
    orders = [5, 5, 5]

    [brackets]
    "x,y" = { z = 1 }

Omitted pairs bracket to zero and [b_j, b_i] = -[b_i, b_j] is filled in.
A triple adds ``[module] orders = [...]`` (with an optional
``side = "group"``) and ``[action] x = [[...]]``, the matrix of psi(x), or
of phi(exp x) on the group side, acting on column vectors.

A crossed module file holds the rings under ``[g]``, ``[g1]`` and ``[g2]``
(each with its own ``ring`` and ``brackets`` tables) and the maps under
``[crossed]``.
"""
from __future__ import annotations

import hashlib
import sys

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .bchgroup import LazardGroup
from .liering import InvalidLieRing, NilLieRing, abelian
from .ring import valuation
from .triples import GroupTriple, InvalidTriple, LieTriple, PModule


class MalformedInput(ValueError):
    pass


def sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def loads(text: str) -> dict:
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise MalformedInput(f"not valid TOML: {exc}") from exc


def read(path) -> tuple[dict, bytes]:
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        return loads(raw.decode("utf-8")), raw
    except UnicodeDecodeError as exc:
        raise MalformedInput("input is not UTF-8") from exc


def _exp_of(order, p) -> int:
    order = int(order)
    e = valuation(order, p) if order > 0 else -1
    if order < 1 or p**e != order:
        raise MalformedInput(f"order {order} is not a power of p = {p}")
    return e


def _section(doc, key):
    if key not in doc or not isinstance(doc[key], dict):
        raise MalformedInput(f"missing [{key}] table")
    return doc[key]


# ------------------------------------------------------------------- rings

def ring_from_doc(doc: dict) -> NilLieRing:
    ring = _section(doc, "ring")
    try:
        p = int(ring["p"])
        basis = [str(b) for b in ring.get("basis", [])]
        orders = list(ring.get("orders", []))
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad [ring] table: {exc}") from exc
    if len(basis) != len(orders):
        raise MalformedInput("basis and orders differ in length")
    if len(set(basis)) != len(basis):
        raise MalformedInput("repeated basis label")
    exps = [_exp_of(o, p) for o in orders]
    r = len(basis)
    pos = {b: i for i, b in enumerate(basis)}
    C = np.zeros((r, r, r), np.int64)
    given = np.zeros((r, r), bool)
    for key, val in doc.get("brackets", {}).items():
        parts = [s.strip() for s in str(key).split(",")]
        if len(parts) != 2 or any(s not in pos for s in parts) or not isinstance(val, dict):
            raise MalformedInput(f"bad bracket entry {key!r}")
        i, j = pos[parts[0]], pos[parts[1]]
        v = np.zeros(r, np.int64)
        for lab, coef in val.items():
            if lab not in pos or not isinstance(coef, int):
                raise MalformedInput(f"bad coefficient {lab!r} in bracket {key!r}")
            v[pos[lab]] = coef
        if given[i, j]:
            raise MalformedInput(f"bracket {key!r} given twice")
        if given[j, i] and not np.array_equal((C[j, i] + v) % (p ** np.array(exps)), np.zeros(r)):
            raise MalformedInput(f"bracket {key!r} contradicts antisymmetry")
        C[i, j] = v
        given[i, j] = True
        if not given[j, i]:
            C[j, i] = -v
    if r:
        C %= p ** np.array(exps, np.int64)
    try:
        return NilLieRing(p, exps, C, basis)
    except InvalidLieRing as exc:
        raise MalformedInput(f"invalid Lie ring: {exc}") from exc


def dumps_ring(L: NilLieRing, class_hint: int | None = None, prefix: str = "") -> str:
    hint = L.nilpotency_class() if class_hint is None else class_hint
    out = [f"[{prefix}ring]", f"p = {L.p}", f"class_hint = {hint}"]
    out.append("basis = [" + ", ".join(f'"{b}"' for b in L.labels) + "]")
    out.append("orders = [" + ", ".join(str(int(o)) for o in L.orders) + "]")
    out += ["", f"[{prefix}brackets]"]
    for i in range(L.rank):
        for j in range(i + 1, L.rank):
            v = L.C[i, j]
            if v.any():
                terms = ", ".join(f"{L.labels[k]} = {int(v[k])}" for k in range(L.rank) if v[k])
                out.append(f'"{L.labels[i]},{L.labels[j]}" = {{ {terms} }}')
    return "\n".join(out) + "\n"


# ----------------------------------------------------------------- triples

def _matrix(val, n, what) -> np.ndarray:
    try:
        A = np.array(val, np.int64)
    except (TypeError, ValueError) as exc:
        raise MalformedInput(f"{what} is not an integer matrix") from exc
    if A.shape != (n, n) and not (n == 0 and A.size == 0):
        raise MalformedInput(f"{what} must be {n} x {n}")
    return A.reshape(n, n)


def triple_from_doc(doc: dict):
    """A LieTriple, or a GroupTriple on exp(L) when ``side = "group"``."""
    L = ring_from_doc(doc)
    mod = _section(doc, "module")
    M = PModule(L.p, [_exp_of(o, L.p) for o in mod.get("orders", [])])
    side = mod.get("side", "lie")
    if side not in ("lie", "group"):
        raise MalformedInput("module side must be 'lie' or 'group'")
    acts = doc.get("action", {})
    unknown = set(acts) - set(L.labels)
    if unknown:
        raise MalformedInput(f"action given for unknown basis elements {sorted(unknown)}")
    default = np.zeros((M.rank, M.rank), np.int64) if side == "lie" else np.eye(M.rank, dtype=np.int64)
    mats = [_matrix(acts[b], M.rank, f"action[{b}]") if b in acts else default for b in L.labels]
    try:
        if side == "lie":
            return LieTriple(L, M, np.array(mats, np.int64).reshape(L.rank, M.rank, M.rank))
        G = LazardGroup(L)
        images = {int(g): mats[i] for i, g in enumerate(G.generator_indices())}
        return GroupTriple.from_generators(G, M, images)
    except InvalidTriple as exc:
        raise MalformedInput(f"invalid triple: {exc}") from exc


def dumps_triple(T: LieTriple) -> str:
    out = [dumps_ring(T.L), "[module]", "orders = [" + ", ".join(str(int(o)) for o in T.M.orders) + "]", "", "[action]"]
    for i, b in enumerate(T.L.labels):
        if T.psi[i].any():
            rows = ", ".join("[" + ", ".join(str(int(x)) for x in row) + "]" for row in T.psi[i])
            out.append(f"{b} = [{rows}]")
    return "\n".join(out) + "\n"


def load_object(doc: dict):
    """A ring file gives a NilLieRing; a file with [module] gives a triple."""
    return triple_from_doc(doc) if "module" in doc else ring_from_doc(doc)


# ---------------------------------------------------------- crossed modules

def _rows(val, nrows, ncols, what) -> np.ndarray:
    if nrows == 0 or ncols == 0:
        return np.zeros((nrows, ncols), np.int64)
    try:
        A = np.array(val, np.int64)
    except (TypeError, ValueError) as exc:
        raise MalformedInput(f"{what} is not an integer matrix") from exc
    if A.shape != (nrows, ncols):
        raise MalformedInput(f"{what} must be {nrows} x {ncols}")
    return A


def crossed_from_doc(doc: dict):
    from . import crossedmod as cm

    g, g1, g2 = (ring_from_doc(_section(doc, k)) for k in ("g", "g1", "g2"))
    cr = _section(doc, "crossed")
    p = g.p
    if g1.p != p or g2.p != p:
        raise MalformedInput("rings use different primes")
    M = PModule(p, [_exp_of(o, p) for o in cr.get("module_orders", [])])
    side = cr.get("side", "lie")
    if side not in ("lie", "group"):
        raise MalformedInput("crossed side must be 'lie' or 'group'")
    mu = _rows(cr.get("mu", []), g.rank, g1.rank, "mu")
    alpha = _rows(cr.get("alpha", []), g1.rank, g2.rank, "alpha")
    iota = _rows(cr.get("iota", []), M.rank, g.rank, "iota")
    eta_doc = cr.get("eta", {})
    unknown = set(eta_doc) - set(g1.labels)
    if unknown:
        raise MalformedInput(f"eta given for unknown basis elements {sorted(unknown)}")
    default = np.zeros((g.rank, g.rank), np.int64) if side == "lie" else np.eye(g.rank, dtype=np.int64)
    eta = np.array(
        [_matrix(eta_doc[b], g.rank, f"eta[{b}]") if b in eta_doc else default for b in g1.labels], np.int64
    ).reshape(g1.rank, g.rank, g.rank)
    name = str(cr.get("name", ""))
    if side == "lie":
        return cm.LieCrossedModule(g, g1, g2, mu, eta, alpha, M, iota, name)
    return _group_crossed(g, g1, g2, mu, eta, alpha, M, iota, name)


def _group_crossed(g, g1, g2, mu, eta, alpha, M, iota, name):
    """Group crossed module from generator images on exp of the rings."""
    from . import crossedmod as cm

    H, G1, G2 = LazardGroup(g), LazardGroup(g1), LazardGroup(g2)

    def hom(A, B, rows, what):
        imgs = {int(s): B.to_index(rows[i]) for i, s in enumerate(A.generator_indices())}
        f = cm._extend(A, B, imgs)
        if f is None:
            raise MalformedInput(f"{what} does not define a homomorphism")
        return f

    mu_t = hom(H, G1, mu, "mu")
    alpha_t = hom(G1, G2, alpha, "alpha")
    MG = LazardGroup(abelian(M.p, M.exps))
    io_t = hom(MG, H, iota, "iota")[MG.to_index(M.elements())] if M.rank else np.array([H.identity])
    try:
        T = GroupTriple.from_generators(G1, PModule(g.p, g.exps), {int(s): eta[i] for i, s in enumerate(G1.generator_indices())})
    except InvalidTriple as exc:
        raise MalformedInput(f"eta does not define an action: {exc}") from exc
    els = g.elements()
    eta_t = np.array([g.index((els @ T.phi[x].T) % g.orders) if g.rank else [0] for x in range(G1.size)], np.int64)
    return cm.GroupCrossedModule(H, G1, G2, mu_t, eta_t, alpha_t, M, io_t, name)


def _mat_text(A) -> str:
    return "[" + ", ".join("[" + ", ".join(str(int(x)) for x in row) + "]" for row in A) + "]"


def dumps_crossed(Y) -> str:
    """Text for a crossed module; group ones need LazardGroup carriers."""
    from . import crossedmod as cm

    if isinstance(Y, cm.GroupCrossedModule):
        H, G1, G2 = Y.H, Y.G1, Y.G2
        g, g1, g2 = H.lie, G1.lie, G2.lie
        hg, g1g = H.generator_indices(), G1.generator_indices()
        mu = G1.to_element(Y.mu[hg]).reshape(g.rank, g1.rank)
        alpha = G2.to_element(Y.alpha[g1g]).reshape(g1.rank, g2.rank)
        iota = H.to_element(Y.iota_basis()).reshape(Y.M.rank, g.rank)
        eta = np.zeros((g1.rank, g.rank, g.rank), np.int64)
        for i, x in enumerate(g1g):
            for j, h in enumerate(hg):
                eta[i, :, j] = H.to_element(Y.eta[x, h])
        side, skip = "group", np.eye(g.rank, dtype=np.int64)
    else:
        g, g1, g2, mu, alpha, iota, eta = Y.g, Y.g1, Y.g2, Y.mu, Y.alpha, Y.iota, Y.eta
        side, skip = "lie", np.zeros((g.rank, g.rank), np.int64)
    parts = [dumps_ring(g, prefix="g."), dumps_ring(g1, prefix="g1."), dumps_ring(g2, prefix="g2.")]
    cr = ["[crossed]", f'side = "{side}"']
    if Y.name:
        cr.append(f'name = "{Y.name}"')
    cr.append("module_orders = [" + ", ".join(str(int(o)) for o in Y.M.orders) + "]")
    cr.append(f"mu = {_mat_text(mu)}")
    cr.append(f"alpha = {_mat_text(alpha)}")
    cr.append(f"iota = {_mat_text(iota)}")
    cr += ["", "[crossed.eta]"]
    for i, b in enumerate(g1.labels):
        if not np.array_equal(eta[i], skip):
            cr.append(f"{b} = {_mat_text(eta[i])}")
    return "\n".join(parts + ["\n".join(cr)]) + "\n"
