"""Hot integer kernels over Z/p^E.

Every kernel has a numba implementation and a numpy implementation with the
same contract; ``_accel.USE_NUMBA`` picks which one the public names bind to.
All arrays are int64 with entries in [0, p^E).  p^E must stay below 2**22 so
that accumulated products of residues fit in int64.
"""
import numpy as np

from ._accel import USE_NUMBA, njit

MAX_MODULUS = 2**22


# ---------------------------------------------------------------- numba path

@njit
def _inv_mod_nb(a, m):
    t, newt, r, newr = 0, 1, m, a % m
    while newr != 0:
        q = r // newr
        t, newt = newt, t - q * newt
        r, newr = newr, r - q * newr
    return t % m


@njit
def _val_nb(a, p, E):
    if a == 0:
        return E
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


@njit
def _howell_nb(A, p, E, npiv):
    mod = p**E
    n, m = A.shape
    W = np.zeros((n + npiv + 1, m), np.int64)
    for i in range(n):
        for j in range(m):
            W[i, j] = A[i, j] % mod
    nrows = n
    r = 0
    for c in range(npiv):
        if r >= nrows:
            break
        best = -1
        bv = E
        for i in range(r, nrows):
            x = W[i, c]
            if x != 0:
                v = _val_nb(x, p, E)
                if v < bv:
                    bv = v
                    best = i
                    if v == 0:
                        break
        if best < 0:
            continue
        if best != r:
            for j in range(m):
                tmp = W[r, j]
                W[r, j] = W[best, j]
                W[best, j] = tmp
        piv = p**bv
        inv = _inv_mod_nb(W[r, c] // piv, mod)
        for j in range(m):
            W[r, j] = (W[r, j] * inv) % mod
        for i in range(nrows):
            if i == r:
                continue
            x = W[i, c]
            if x == 0 or (i < r and x < piv):
                continue
            q = x // piv
            for j in range(c, m):
                W[i, j] = (W[i, j] - q * W[r, j]) % mod
        if bv > 0:
            s = p ** (E - bv)
            for j in range(m):
                W[nrows, j] = (W[r, j] * s) % mod
            nrows += 1
        r += 1
    return W[:nrows], r


@njit
def _smith_nb(R, p, E):
    mod = p**E
    nr, k = R.shape
    W = np.empty((nr, k), np.int64)
    for i in range(nr):
        for j in range(k):
            W[i, j] = R[i, j] % mod
    Q = np.eye(k, dtype=np.int64)
    Qi = np.eye(k, dtype=np.int64)
    vals = np.full(k, E, np.int64)
    t = 0
    while t < nr and t < k:
        bv = E
        bi = -1
        bj = -1
        for i in range(t, nr):
            for j in range(t, k):
                x = W[i, j]
                if x != 0:
                    v = _val_nb(x, p, E)
                    if v < bv:
                        bv = v
                        bi = i
                        bj = j
        if bi < 0:
            break
        if bi != t:
            for j in range(k):
                tmp = W[t, j]
                W[t, j] = W[bi, j]
                W[bi, j] = tmp
        if bj != t:
            for i in range(nr):
                tmp = W[i, t]
                W[i, t] = W[i, bj]
                W[i, bj] = tmp
            for i in range(k):
                tmp = Q[i, t]
                Q[i, t] = Q[i, bj]
                Q[i, bj] = tmp
                tmp = Qi[t, i]
                Qi[t, i] = Qi[bj, i]
                Qi[bj, i] = tmp
        piv = p**bv
        inv = _inv_mod_nb(W[t, t] // piv, mod)
        for j in range(k):
            W[t, j] = (W[t, j] * inv) % mod
        for i in range(t + 1, nr):
            x = W[i, t]
            if x != 0:
                q = x // piv
                for j in range(t, k):
                    W[i, j] = (W[i, j] - q * W[t, j]) % mod
        for j in range(t + 1, k):
            x = W[t, j]
            if x != 0:
                q = x // piv
                W[t, j] = 0
                for i in range(k):
                    Q[i, j] = (Q[i, j] - q * Q[i, t]) % mod
                    Qi[t, i] = (Qi[t, i] + q * Qi[j, i]) % mod
        vals[t] = bv
        t += 1
    return vals, Q, Qi


@njit
def _assoc_nb(table):
    n = table.shape[0]
    for a in range(n):
        for b in range(n):
            ab = table[a, b]
            for c in range(n):
                if table[ab, c] != table[a, table[b, c]]:
                    return a, b, c
    return -1, -1, -1


@njit
def _cocycle_nb(table, phi, f, orders):
    # phi(x) f(y,z) - f(xy,z) + f(x,yz) - f(x,y) == 0
    n = table.shape[0]
    r = orders.shape[0]
    for x in range(n):
        for y in range(n):
            xy = table[x, y]
            for z in range(n):
                yz = table[y, z]
                for i in range(r):
                    acc = 0
                    for j in range(r):
                        acc += phi[x, i, j] * f[y, z, j]
                    acc = acc - f[xy, z, i] + f[x, yz, i] - f[x, y, i]
                    if acc % orders[i] != 0:
                        return x, y, z
    return -1, -1, -1


# ---------------------------------------------------------------- numpy path

def _val_np(x, p, E):
    x = np.asarray(x, dtype=np.int64)
    v = np.where(x == 0, E, 0)
    y = x.copy()
    for _ in range(E):
        m = (y != 0) & (y % p == 0)
        if not m.any():
            break
        v = v + m
        y = np.where(m, y // p, y)
    return v


def _howell_np(A, p, E, npiv):
    mod = p**E
    n, m = A.shape
    W = np.zeros((n + npiv + 1, m), np.int64)
    W[:n] = A % mod
    nrows = n
    r = 0
    for c in range(npiv):
        if r >= nrows:
            break
        col = W[r:nrows, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        vals = _val_np(col[nz], p, E)
        best = r + nz[int(np.argmin(vals))]
        bv = int(vals.min())
        if best != r:
            W[[r, best]] = W[[best, r]]
        piv = p**bv
        inv = pow(int(W[r, c] // piv), -1, mod)
        W[r] = (W[r] * inv) % mod
        q = W[:nrows, c] // piv
        q[r] = 0
        rows = np.nonzero(q)[0]
        if rows.size:
            W[rows] = (W[rows] - np.outer(q[rows], W[r])) % mod
        if bv > 0:
            W[nrows] = (W[r] * p ** (E - bv)) % mod
            nrows += 1
        r += 1
    return W[:nrows], r


def _smith_np(R, p, E):
    mod = p**E
    W = np.array(R, dtype=np.int64) % mod
    nr, k = W.shape
    Q = np.eye(k, dtype=np.int64)
    Qi = np.eye(k, dtype=np.int64)
    vals = np.full(k, E, np.int64)
    t = 0
    while t < nr and t < k:
        sub = W[t:, t:]
        if not sub.any():
            break
        vv = _val_np(sub, p, E)
        bi, bj = np.unravel_index(int(np.argmin(vv)), vv.shape)
        bv = int(vv[bi, bj])
        bi += t
        bj += t
        if bi != t:
            W[[t, bi]] = W[[bi, t]]
        if bj != t:
            W[:, [t, bj]] = W[:, [bj, t]]
            Q[:, [t, bj]] = Q[:, [bj, t]]
            Qi[[t, bj]] = Qi[[bj, t]]
        piv = p**bv
        inv = pow(int(W[t, t] // piv), -1, mod)
        W[t] = (W[t] * inv) % mod
        q = W[t + 1:, t] // piv
        W[t + 1:] = (W[t + 1:] - np.outer(q, W[t])) % mod
        qc = W[t, t + 1:] // piv
        W[t, t + 1:] = 0
        Q[:, t + 1:] = (Q[:, t + 1:] - np.outer(Q[:, t], qc)) % mod
        Qi[t] = (Qi[t] + qc @ Qi[t + 1:]) % mod
        vals[t] = bv
        t += 1
    return vals, Q, Qi


def _assoc_np(table):
    n = table.shape[0]
    for a in range(n):
        lhs = table[table[a]]          # (ab)c indexed [b, c]
        rhs = table[a][table]          # a(bc)
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            return a, int(bad[0, 0]), int(bad[0, 1])
    return -1, -1, -1


def _cocycle_np(table, phi, f, orders):
    n = table.shape[0]
    for x in range(n):
        xy = table[x]                                   # [y]
        act = np.einsum("ij,yzj->yzi", phi[x], f)       # phi(x) f(y,z)
        val = act - f[xy] + f[x][table] - f[x][:, None, :]
        bad = np.argwhere((val % orders) != 0)
        if bad.size:
            return x, int(bad[0, 0]), int(bad[0, 1])
    return -1, -1, -1


# ---------------------------------------------------------------- dispatch

def _check_mod(p, E):
    if p**E >= MAX_MODULUS:
        raise OverflowError(f"modulus {p}^{E} too large for int64 kernels")


def howell(A, p, E, npiv=None, use_numba=None):
    """Howell elimination of the rows of ``A`` over Z/p^E.

    Pivots are searched only in the first ``npiv`` columns (default: all);
    row operations act on the full width, so trailing columns can carry a
    transform.  Returns ``(W, r)``: the rows (pivot rows first, then rows
    that vanish on the pivot columns) and the number of pivot rows.
    """
    _check_mod(p, E)
    A = np.ascontiguousarray(A, dtype=np.int64)
    if A.ndim != 2:
        raise ValueError("expected a 2-d array")
    if npiv is None:
        npiv = A.shape[1]
    fn = _howell_nb if (USE_NUMBA if use_numba is None else use_numba) else _howell_np
    W, r = fn(A, int(p), int(E), int(npiv))
    return np.array(W), int(r)


def smith(R, p, E, use_numba=None):
    """Local Smith reduction of relation rows ``R`` over Z/p^E.

    Returns ``(vals, Q, Qinv)``: pivot valuations (E where no pivot exists)
    and the column transform with its inverse, so ``x -> x @ Q`` maps the
    row span of ``R`` onto the span of ``diag(p**vals)``.
    """
    _check_mod(p, E)
    R = np.ascontiguousarray(R, dtype=np.int64)
    if R.ndim != 2:
        raise ValueError("expected a 2-d array")
    fn = _smith_nb if (USE_NUMBA if use_numba is None else use_numba) else _smith_np
    vals, Q, Qi = fn(R, int(p), int(E))
    return np.array(vals), np.array(Q), np.array(Qi)


def first_nonassociative(table, use_numba=None):
    """First triple (a, b, c) with (ab)c != a(bc), or None."""
    table = np.ascontiguousarray(table, dtype=np.int64)
    fn = _assoc_nb if (USE_NUMBA if use_numba is None else use_numba) else _assoc_np
    a, b, c = fn(table)
    return None if a < 0 else (int(a), int(b), int(c))


def first_cocycle_violation(table, phi, f, orders, use_numba=None):
    """First (x, y, z) where the normalized 2-cocycle identity fails, or None."""
    table = np.ascontiguousarray(table, dtype=np.int64)
    phi = np.ascontiguousarray(phi, dtype=np.int64)
    f = np.ascontiguousarray(f, dtype=np.int64)
    orders = np.ascontiguousarray(orders, dtype=np.int64)
    fn = _cocycle_nb if (USE_NUMBA if use_numba is None else use_numba) else _cocycle_np
    x, y, z = fn(table, phi, f, orders)
    return None if x < 0 else (int(x), int(y), int(z))
