"""Independent reference computations used by the tests.

Nothing here shares code with the decoder engines: the SC tree is walked
recursively and path metrics are summed straight from their definition.
"""

import itertools

import numpy as np


def leaf_llrs_given_decisions(llr_plane, u_plane):
    """Layer-0 LLR of every position of one bit plane when the decisions ``u_plane`` are fixed.

    Recursive SC on u G_p with G_p = F^{(x)n}: the first half of u sees
    f(left, right); the second half sees g(left, right, partial sums).
    """
    llr_plane = [float(v) for v in llr_plane]
    u_plane = [int(v) for v in u_plane]

    def encode(u):
        if len(u) == 1:
            return list(u)
        h = len(u) // 2
        a, b = encode(u[:h]), encode(u[h:])
        return [x ^ y for x, y in zip(a, b)] + b

    def rec(llr, u):
        if len(llr) == 1:
            return [llr[0]]
        h = len(llr) // 2
        left, right = llr[:h], llr[h:]
        f = [np.sign(a) * np.sign(b) * min(abs(a), abs(b)) for a, b in zip(left, right)]
        out = rec(f, u[:h])
        v = encode(u[:h])
        g = [(1 - 2 * vi) * a + b for a, b, vi in zip(left, right, v)]
        return out + rec(g, u[h:])

    return rec(llr_plane, u_plane)


def path_metric(gf, llr, U):
    """sum_i sum_{j: sign(L_ij) != 1 - 2 u_ij} |L_ij| for symbols ``U`` (length N)."""
    llr = np.asarray(llr)
    N, n = llr.shape
    total = 0.0
    for j in range(n):
        u = [(int(s) >> j) & 1 for s in U]
        leaves = leaf_llrs_given_decisions(llr[:, j], u)
        for i in range(N):
            if np.sign(leaves[i]) != 1 - 2 * u[i]:
                total += abs(leaves[i])
    return total


def brute_force_min_metric(pt, llr):
    """Minimum path metric over every message, with all minimizers."""
    gf = pt.field
    best, argmins = np.inf, []
    for msg in itertools.product(range(gf.size), repeat=pt.K):
        fprime = gf.vecmat(np.array(msg), pt.E_inv)
        U = gf.vecmat(fprime, pt.M)
        m = path_metric(gf, llr, U)
        if m < best - 1e-9:
            best, argmins = m, [msg]
        elif abs(m - best) <= 1e-9:
            argmins.append(msg)
    return best, argmins


def poly_eval_codeword(gf, locators, msg):
    """Codeword by direct power sums sum_k F_k x^k, no Horner."""
    out = []
    for x in locators:
        acc = 0
        for k, c in enumerate(msg):
            acc ^= gf.mul(int(c), gf.pow(int(x), k))
        out.append(acc)
    return out


def clmul_mod(a, b, poly):
    """Carry-less multiply then long division by ``poly``, bit by bit."""
    deg = poly.bit_length() - 1
    r = 0
    for j in range(b.bit_length()):
        if (b >> j) & 1:
            r ^= a << j
    for k in range(r.bit_length() - 1, deg - 1, -1):
        if (r >> k) & 1:
            r ^= poly << (k - deg)
    return r


def rank_gf(gf, rows):
    """Rank by plain Gaussian elimination on python lists."""
    A = [list(map(int, r)) for r in rows]
    rank, ncols = 0, len(A[0]) if A else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(A)) if A[r][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = gf.inv(A[rank][c])
        A[rank] = [gf.mul(inv, x) for x in A[rank]]
        for r in range(len(A)):
            if r != rank and A[r][c]:
                f = A[r][c]
                A[r] = [x ^ gf.mul(f, y) for x, y in zip(A[r], A[rank])]
        rank += 1
    return rank


def kron_power(n):
    """F^{(x)n} by repeated np.kron."""
    F = np.array([[1, 0], [1, 1]], dtype=np.int64)
    out = np.array([[1]], dtype=np.int64)
    for _ in range(n):
        out = np.kron(out, F)
    return out
