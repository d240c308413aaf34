"""Re-interpretation of an eRS code as n binary polar codes.

With a permutation P and the polar kernel G_p = F^{(x)n}, every codeword is
C = U G_p P where U = F' M, M = E G P^{-1} G_p is in row-reduced echelon form
and F' = F E^{-1}. Pivot columns of M carry information symbols; the other
positions are frozen, either statically (all-zero column) or dynamically (a
linear combination of earlier information symbols).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .ers_code import ErsCode
from .galois import FieldSpec

INFO, STATIC, DYNAMIC = "info", "static", "dynamic"


class TransformError(ValueError):
    pass


# ---------------------------------------------------------------- kernel

def gp_matrix(n: int) -> np.ndarray:
    """n-fold Kronecker power of [[1, 0], [1, 1]] as a 0/1 int array."""
    if n < 1:
        raise TransformError("n must be >= 1")
    kernel = np.array([[1, 0], [1, 1]], dtype=np.int64)
    gp = kernel
    for _ in range(n - 1):
        gp = np.kron(gp, kernel)
    return gp


def polar_transform(u: np.ndarray) -> np.ndarray:
    """x = u G_p over GF(2) along the last axis (butterfly, O(N log N))."""
    x = np.array(u, dtype=np.int64, copy=True)
    N = x.shape[-1]
    step = 1
    while step < N:
        x = x.reshape(x.shape[:-1] + (N // (2 * step), 2, step))
        x[..., 0, :] ^= x[..., 1, :]
        x = x.reshape(x.shape[:-3] + (N,))
        step *= 2
    return x


# ----------------------------------------------------------- permutations

def _check_bijection(mapping, N: int) -> np.ndarray:
    mapping = np.asarray(mapping, dtype=np.int64)
    if mapping.shape != (N,) or sorted(mapping.tolist()) != list(range(N)):
        raise TransformError(f"permutation must be a bijection on 0..{N - 1}")
    return mapping


@dataclass(frozen=True, eq=False)
class Permutation:
    """Vector form of P: position ``i`` of u G_p is sent to codeword column ``map[i]``.

    Hence C'[i] = C[map[i]] de-permutes a codeword, and column i of G P^{-1}
    is column ``map[i]`` of G.
    """

    map: np.ndarray
    strategy: str = "custom"

    def __post_init__(self):
        m = _check_bijection(self.map, len(self.map))
        m.flags.writeable = False
        object.__setattr__(self, "map", m)

    @property
    def N(self) -> int:
        return len(self.map)

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Send polar-order entries along the last axis to codeword order."""
        out = np.empty_like(x)
        out[..., self.map] = x
        return out

    def digest(self) -> str:
        return hashlib.sha256(np.asarray(self.map, dtype=np.int64).tobytes()).hexdigest()[:16]

    def to_json(self) -> str:
        return json.dumps([int(v) for v in self.map])

    @classmethod
    def from_json(cls, text: str) -> "Permutation":
        return cls(np.array(json.loads(text), dtype=np.int64), "custom")


def bit_reverse(i: int, n: int) -> int:
    return int(format(i, f"0{n}b")[::-1], 2)


def natural_locator_permutation(code: ErsCode) -> Permutation:
    """Polar position r carries the locator whose integer value is r."""
    where = {int(x): i for i, x in enumerate(code.locators)}
    return Permutation(np.array([where[r] for r in range(code.N)]), "natural_locator")


def make_permutation(N: int, strategy: str = "identity", *, code: ErsCode | None = None,
                     mapping=None, profile=None, iterations: int = 2000, seed: int = 0,
                     start: Permutation | None = None) -> Permutation:
    """Build a permutation by strategy name.

    ``greedy_search`` needs ``code`` and a subchannel ``profile`` (anything with
    a ``pe`` array); ``natural_locator`` needs ``code``; ``custom`` needs ``mapping``.
    """
    if N < 1 or N & (N - 1):
        raise TransformError(f"N={N} is not a power of two")
    n = N.bit_length() - 1
    if strategy == "identity":
        return Permutation(np.arange(N), "identity")
    if strategy == "bit_reversal":
        return Permutation(np.array([bit_reverse(i, n) for i in range(N)]), "bit_reversal")
    if strategy == "natural_locator":
        if code is None:
            raise TransformError("natural_locator needs the code")
        return natural_locator_permutation(code)
    if strategy == "greedy_search":
        if code is None or profile is None:
            raise TransformError("greedy_search needs the code and a subchannel profile")
        return greedy_search(code, profile, iterations=iterations, seed=seed, start=start)
    if strategy == "custom":
        if mapping is None:
            raise TransformError("custom strategy needs a mapping")
        return Permutation(_check_bijection(mapping, N), "custom")
    if strategy == "random":
        rng = np.random.default_rng(seed)
        return Permutation(rng.permutation(N), "random")
    raise TransformError(f"unknown permutation strategy {strategy!r}")


# ------------------------------------------------------------------ RREF

def rref(gf: FieldSpec, X: np.ndarray):
    """Row-reduce ``X`` over GF(2^n).

    Pivoting: leftmost nonzero column, first nonzero row at or below the
    current one, pivot scaled to 1. Returns ``(R, E, pivots)`` with R = E X.
    Rows beyond the rank are left zero.
    """
    X = np.array(X, dtype=np.int64)
    rows, cols = X.shape
    aug = np.concatenate([X, np.eye(rows, dtype=np.int64)], axis=1)
    mt = gf.mul_table
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(aug[r:, c])
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            aug[[r, p]] = aug[[p, r]]
        lead = int(aug[r, c])
        if lead != 1:
            aug[r] = mt[aug[r], gf.inv(lead)]
        others = np.flatnonzero(aug[:, c])
        others = others[others != r]
        if others.size:
            aug[others] ^= mt[aug[others, c][:, None], aug[r][None, :]]
        pivots.append(c)
        r += 1
    return aug[:, :cols], aug[:, cols:], pivots


def pivot_columns(gf: FieldSpec, X: np.ndarray) -> list[int]:
    """Pivot columns of the RREF of X (no elimination matrix bookkeeping)."""
    X = np.array(X, dtype=np.int64)
    rows, cols = X.shape
    mt = gf.mul_table
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(X[r:, c])
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            X[[r, p]] = X[[p, r]]
        X[r] = mt[X[r], gf.inv(int(X[r, c]))]
        below = r + 1 + np.flatnonzero(X[r + 1:, c])
        if below.size:
            X[below] ^= mt[X[below, c][:, None], X[r][None, :]]
        pivots.append(c)
        r += 1
    return pivots


def rank_submatrix(gf: FieldSpec, M: np.ndarray, cols) -> int:
    """Rank over GF(2^n) of the columns ``cols`` of ``M``."""
    cols = list(cols)
    if not cols:
        return 0
    return len(pivot_columns(gf, np.asarray(M)[:, cols]))


def inverse_matrix(gf: FieldSpec, A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    R, E, piv = rref(gf, A)
    if len(piv) != A.shape[0]:
        raise TransformError("matrix is singular")
    return E


# --------------------------------------------------------- pre-transform

@dataclass(frozen=True, eq=False)
class PreTransform:
    """M = E G P^{-1} G_p in RREF plus the derived frozen-symbol structure.

    ``frozen_terms[i]`` lists ``(t, M[t, i])`` for the nonzero coefficients
    of frozen position ``i``; every t is below ``tau[i]``.
    """

    code: ErsCode
    perm: Permutation
    M: np.ndarray = field(repr=False)
    E: np.ndarray = field(repr=False)
    E_inv: np.ndarray = field(repr=False)
    A: tuple
    frozen_class: tuple
    tau: np.ndarray = field(repr=False)
    frozen_terms: dict = field(repr=False)

    @property
    def field(self) -> FieldSpec:
        return self.code.field

    @property
    def N(self) -> int:
        return self.code.N

    @property
    def K(self) -> int:
        return self.code.K

    @property
    def n(self) -> int:
        return self.code.n

    @property
    def is_info(self) -> np.ndarray:
        mask = np.zeros(self.N, dtype=bool)
        mask[list(self.A)] = True
        return mask

    def counts(self) -> dict:
        return {c: self.frozen_class.count(c) for c in (INFO, STATIC, DYNAMIC)}

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "K": self.K,
            "n": self.n,
            "prim_poly": self.field.prim_poly,
            "perm_strategy": self.perm.strategy,
            "perm": [int(v) for v in self.perm.map],
            "perm_digest": self.perm.digest(),
            "A": [int(v) for v in self.A],
            "frozen_class": list(self.frozen_class),
            "tau": [int(v) for v in self.tau],
            "M": self.M.tolist(),
            "E": self.E.tolist(),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def transformed_generator(code: ErsCode, perm: Permutation) -> np.ndarray:
    """G P^{-1} G_p over GF(2^n) (G_p embedded via 0 -> 0, 1 -> 1)."""
    if perm.N != code.N:
        raise TransformError("permutation length does not match the code")
    GPinv = np.asarray(code.G)[:, perm.map]
    return polar_transform_gf(GPinv)


def polar_transform_gf(X: np.ndarray) -> np.ndarray:
    """X G_p for an element matrix X: G_p is binary, so XOR butterflies suffice."""
    return polar_transform(X)


def pretransform(code: ErsCode, perm: Permutation) -> PreTransform:
    gf = code.field
    X = transformed_generator(code, perm)
    M, E, A = rref(gf, X)
    if len(A) < code.K:
        raise TransformError(f"rank(G) = {len(A)} < K = {code.K}")
    N = code.N
    tau = np.zeros(N, dtype=np.int64)
    classes = []
    terms = {}
    pivset = set(A)
    count = 0
    for i in range(N):
        tau[i] = count
        if i in pivset:
            classes.append(INFO)
            count += 1
            continue
        nz = np.flatnonzero(M[:, i])
        if nz.size and nz.max() >= tau[i]:
            raise TransformError(f"column {i} violates the echelon structure")
        classes.append(DYNAMIC if nz.size else STATIC)
        terms[i] = tuple((int(t), int(M[t, i])) for t in nz)
    for arr in (M, E):
        arr.flags.writeable = False
    E_inv = inverse_matrix(gf, E)
    E_inv.flags.writeable = False
    tau.flags.writeable = False
    return PreTransform(code, perm, M, E, E_inv, tuple(A), tuple(classes), tau, terms)


def frozen_value(pt: PreTransform, i: int, f_prime) -> int:
    """U_i = sum_{t < tau_i} F'_t M[t, i] for a frozen position i."""
    gf = pt.field
    acc = 0
    for t, coef in pt.frozen_terms[i]:
        acc ^= gf.mul(int(f_prime[t]), coef)
    return acc


def encode_via_transform(pt: PreTransform, msg) -> np.ndarray:
    """C = F' M G_p P with F' = F E^{-1}, computed bit plane by bit plane."""
    gf = pt.field
    msg = np.asarray(msg, dtype=np.int64)
    f_prime = gf.vecmat(msg, pt.E_inv)
    U = gf.vecmat(f_prime, pt.M)
    planes = gf.to_bits(U)  # (..., N, n)
    coded = polar_transform(np.moveaxis(planes, -1, -2))  # (..., n, N)
    codeword_bits = np.moveaxis(coded, -2, -1)  # (..., N, n) in polar order
    C_prime = gf.from_bit_planes(codeword_bits)
    return pt.perm.apply(C_prime)


def message_input(pt: PreTransform, msg) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(F', U)`` for a message."""
    gf = pt.field
    f_prime = gf.vecmat(np.asarray(msg, dtype=np.int64), pt.E_inv)
    return f_prime, gf.vecmat(f_prime, pt.M)


# ----------------------------------------------------------------- D set

def d_set(N: int, K: int) -> tuple[list[int], int]:
    """Return ``(D, a)`` with a = ceil(-log2(K/N)) and D = {2^a - 1, 2*2^a - 1, ..., N - 1}."""
    if not 1 <= K <= N:
        raise TransformError(f"K={K} outside 1..{N}")
    # exact integer form of ceil(log2(N / K))
    a = 0
    while K << a < N:
        a += 1
    step = 1 << a
    return list(range(step - 1, N, step)), a


# --------------------------------------------------------- greedy search

def _log_success(pe: np.ndarray, A) -> float:
    return float(np.sum(np.log1p(-np.minimum(pe[list(A)], 1 - 1e-300))))


def greedy_search(code: ErsCode, profile, iterations: int = 2000, seed: int = 0,
                  start: Permutation | None = None) -> Permutation:
    """Hill-climb over transpositions of P.

    Maximizes the SC success probability of the pivot set,
    sum_{i in A} log(1 - P_e(W_i)), which is the same ordering as minimizing
    the SC block error probability. Sideways moves are accepted so the walk
    can cross plateaus; stops early once A equals the D set.
    """
    gf = code.field
    pe = np.asarray(profile.pe if hasattr(profile, "pe") else profile, dtype=float)
    N = code.N
    D, _ = d_set(N, code.K)
    target = set(D) if len(D) == code.K else None
    rng = np.random.default_rng(seed)
    if start is None:
        candidates = [make_permutation(N, s, code=code) for s in ("natural_locator", "identity", "bit_reversal")]
    else:
        candidates = [start]
    scored = []
    for p in candidates:
        piv = pivot_columns(gf, transformed_generator(code, p))
        scored.append((_log_success(pe, piv), p, piv))
    best_score, best, piv = max(scored, key=lambda s: s[0])
    current = np.array(best.map)
    cur_score = best_score
    for _ in range(iterations):
        if target is not None and set(piv) == target:
            break
        i, j = rng.choice(N, 2, replace=False)
        trial = current.copy()
        trial[[i, j]] = trial[[j, i]]
        tpiv = pivot_columns(gf, polar_transform(np.asarray(code.G)[:, trial]))
        score = _log_success(pe, tpiv)
        if score >= cur_score:
            current, cur_score, piv = trial, score, tpiv
            if score > best_score:
                best_score, best = score, Permutation(trial.copy(), "greedy_search")
    if best.strategy != "greedy_search":
        best = Permutation(np.array(best.map), "greedy_search")
    return best


def pivot_profile(pt: PreTransform) -> dict:
    """Summary of where information symbols landed relative to the D set."""
    D, a = d_set(pt.N, pt.K)
    A = set(pt.A)
    return {
        "A": list(pt.A),
        "D": D,
        "a": a,
        "D_in_A": sum(1 for i in D if i in A),
        "D_static": [i for i in D if pt.frozen_class[i] == STATIC],
        "optimal_case_I": len(D) == pt.K and A == set(D),
        "counts": pt.counts(),
    }


__all__ = [
    "INFO", "STATIC", "DYNAMIC", "Permutation", "PreTransform", "TransformError",
    "gp_matrix", "polar_transform", "make_permutation", "natural_locator_permutation",
    "rref", "pivot_columns", "rank_submatrix", "inverse_matrix", "pretransform",
    "encode_via_transform", "message_input", "frozen_value", "d_set", "greedy_search",
    "pivot_profile", "bit_reverse", "transformed_generator",
]
