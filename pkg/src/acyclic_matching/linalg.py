"""Row-echelon linear algebra over an exact field object.

The field ``F`` supplies ``zero``, ``one``, ``add``, ``sub``, ``mul``,
``inv``. Vectors are tuples, matrices are sequences of row tuples.
"""

from __future__ import annotations

import itertools


def rref(F, rows):
    """Reduced row-echelon form; returns ``(rows, pivots)`` without zero rows."""
    M = [list(r) for r in rows]
    if not M:
        return (), ()
    ncols = len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != F.zero), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(inv, x) for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != F.zero:
                k = M[i][c]
                M[i] = [F.sub(x, F.mul(k, y)) for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return tuple(tuple(row) for row in M[:r]), tuple(pivots)


def rank(F, rows) -> int:
    return len(rref(F, rows)[0])


def reduce_vector(F, v, echelon, pivots):
    """Residual of ``v`` after eliminating the pivot columns of an RREF basis.

    The residual is zero exactly when ``v`` lies in the row space; it is the
    projection onto the coordinate complement spanned by non-pivot columns.
    """
    v = list(v)
    for row, c in zip(echelon, pivots):
        k = v[c]
        if k != F.zero:
            v = [F.sub(x, F.mul(k, y)) for x, y in zip(v, row)]
    return tuple(v)


def is_zero(F, v) -> bool:
    return all(x == F.zero for x in v)


def nullspace(F, rows, ncols: int):
    """Basis of ``{x : M x = 0}`` for ``M`` with the given rows."""
    R, pivots = rref(F, rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        x = [F.zero] * ncols
        x[fc] = F.one
        for row, pc in zip(R, pivots):
            x[pc] = F.neg(row[fc])
        basis.append(tuple(x))
    return basis


def left_kernel(F, rows):
    """Basis of ``{y : sum_j y_j rows[j] = 0}``."""
    if not rows:
        return []
    m = len(rows)
    cols = list(zip(*rows))
    return nullspace(F, cols, m)


def intersect_rowspaces(F, U, W):
    """Zassenhaus: RREF basis of ``rowspace(U) & rowspace(W)``."""
    if not U or not W:
        return ()
    n = len(U[0])
    zero = (F.zero,) * n
    blocks = [tuple(u) + tuple(u) for u in U] + [tuple(w) + zero for w in W]
    R, pivots = rref(F, blocks)
    inter = [row[n:] for row, c in zip(R, pivots) if c >= n]
    return rref(F, inter)[0]


def matmul(F, X, Y):
    cols = list(zip(*Y))
    out = []
    for row in X:
        out_row = []
        for col in cols:
            acc = F.zero
            for a, b in zip(row, col):
                if a != F.zero and b != F.zero:
                    acc = F.add(acc, F.mul(a, b))
            out_row.append(acc)
        out.append(tuple(out_row))
    return tuple(out)


def vecmat(F, x, M):
    return matmul(F, [x], M)[0]


def identity(F, m: int):
    return tuple(tuple(F.one if i == j else F.zero for j in range(m)) for i in range(m))


def scalar_matrix(F, c, m: int):
    return tuple(tuple(c if i == j else F.zero for j in range(m)) for i in range(m))


def mat_scale(F, c, M):
    return tuple(tuple(F.mul(c, x) for x in row) for row in M)


def inverse(F, M):
    """Inverse of a square matrix, or ``None`` if singular."""
    m = len(M)
    aug = [tuple(row) + ident for row, ident in zip(M, identity(F, m))]
    R, pivots = rref(F, aug)
    if len(R) < m or pivots[m - 1] != m - 1:
        return None
    return tuple(tuple(row[m:]) for row in R)


def is_invertible(F, M) -> bool:
    return rank(F, M) == len(M)


def all_vectors(F, m: int):
    return itertools.product(list(F.elements()), repeat=m)


def general_linear_group(F, m: int):
    """Every invertible ``m x m`` matrix over a finite field, built row by row."""
    vecs = [v for v in all_vectors(F, m)]

    def extend(rows):
        if len(rows) == m:
            yield tuple(rows)
            return
        r = len(rows)
        for v in vecs:
            if rank(F, rows + [v]) == r + 1:
                yield from extend(rows + [v])

    yield from extend([])


def gl_order(q: int, m: int) -> int:
    out = 1
    for i in range(m):
        out *= q**m - q**i
    return out
