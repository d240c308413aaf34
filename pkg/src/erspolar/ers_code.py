"""Extended Reed-Solomon codes of length N = 2^n over GF(2^n)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .galois import FieldSpec


class CodeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ErsCode:
    """An (N = 2^n, K) eRS code.

    ``locators[i]`` is the evaluation point of codeword symbol ``i``; the zero
    element is always last so that ``C[N-1] = F(0) = F_0``. ``G[k, i]`` is
    ``locators[i]**k`` with ``0**0 = 1``.
    """

    field: FieldSpec
    K: int
    locators: np.ndarray
    G: np.ndarray = field(repr=False)

    @property
    def N(self) -> int:
        return self.field.size

    @property
    def n(self) -> int:
        return self.field.n

    @property
    def rate(self) -> float:
        return self.K / self.N


def alpha_power_locators(gf: FieldSpec) -> np.ndarray:
    """sigma_i = alpha^(i-1) for i = 1..N-1, listed first, then sigma_0 = 0."""
    return np.array([gf.alpha_pow(k) for k in range(gf.order)] + [0], dtype=np.int64)


def natural_binary_locators(gf: FieldSpec) -> np.ndarray:
    """Nonzero elements in increasing integer order, then 0."""
    return np.array(list(range(1, gf.size)) + [0], dtype=np.int64)


def generator_matrix(gf: FieldSpec, K: int, locators) -> np.ndarray:
    G = np.zeros((K, gf.size), dtype=np.int64)
    for i, x in enumerate(locators):
        for k in range(K):
            G[k, i] = gf.pow(int(x), k)
    return G


def code_new(gf: FieldSpec, K: int, locator_order="alpha_power") -> ErsCode:
    """Build an (N, K) eRS code.

    ``locator_order`` is ``"alpha_power"``, ``"natural_binary"`` or an explicit
    sequence of all N field elements ending with 0.
    """
    N = gf.size
    if not 1 <= K <= N:
        raise CodeError(f"K={K} outside 1..{N}")
    if isinstance(locator_order, str):
        if locator_order == "alpha_power":
            locators = alpha_power_locators(gf)
        elif locator_order == "natural_binary":
            locators = natural_binary_locators(gf)
        else:
            raise CodeError(f"unknown locator order {locator_order!r}")
    else:
        locators = np.asarray(list(locator_order), dtype=np.int64)
        if sorted(locators.tolist()) != list(range(N)):
            raise CodeError("custom locators must be a permutation of all field elements")
        if locators[-1] != 0:
            raise CodeError("the zero element must be the last locator")
    locators.flags.writeable = False
    G = generator_matrix(gf, K, locators)
    G.flags.writeable = False
    return ErsCode(gf, K, locators, G)


def _check_msg(code: ErsCode, msg) -> np.ndarray:
    msg = np.asarray(msg, dtype=np.int64)
    if msg.shape[-1] != code.K:
        raise CodeError(f"message length {msg.shape[-1]} != K={code.K}")
    if msg.size and (msg.min() < 0 or msg.max() >= code.N):
        raise CodeError("message symbols must be field elements")
    return msg


def encode_poly(code: ErsCode, msg) -> np.ndarray:
    """Evaluate F(x) = sum_k F_k x^k at every locator by Horner's rule."""
    msg = _check_msg(code, msg)
    gf = code.field
    out = np.zeros(code.N, dtype=np.int64)
    for i, x in enumerate(code.locators):
        acc = 0
        for coef in reversed(msg.tolist()):
            acc = gf.mul(acc, int(x)) ^ coef
        out[i] = acc
    return out


def encode_matrix(code: ErsCode, msg) -> np.ndarray:
    """C = F G over GF(2^n). Accepts a batch of messages along leading axes."""
    msg = _check_msg(code, msg)
    return code.field.vecmat(msg, code.G)


def gf_rank(gf: FieldSpec, A) -> int:
    """Rank of a matrix over GF(2^n) by Gaussian elimination."""
    A = np.array(A, dtype=np.int64)
    rows, cols = A.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(A[rank:, c])[0]
        if nz.size == 0:
            continue
        p = rank + nz[0]
        A[[rank, p]] = A[[p, rank]]
        A[rank] = gf.vmul(A[rank], gf.inv(int(A[rank, c])))
        others = np.nonzero(A[:, c])[0]
        others = others[others != rank]
        if others.size:
            A[others] ^= gf.mul_table[A[others, c][:, None], A[rank][None, :]]
        rank += 1
    return rank


def mds_check(code: ErsCode, trials: int | None = None, seed: int = 0, G=None):
    """Check that K-column submatrices of G have rank K.

    Exhaustive over all column subsets when ``trials`` is None (intended for
    N <= 16), otherwise ``trials`` random subsets. Returns ``(ok, failing_cols)``.
    """
    G = code.G if G is None else np.asarray(G)
    N, K = code.N, code.K
    if trials is None:
        subsets = itertools.combinations(range(N), K)
    else:
        rng = np.random.default_rng(seed)
        subsets = (tuple(sorted(rng.choice(N, K, replace=False).tolist())) for _ in range(trials))
    for cols in subsets:
        if gf_rank(code.field, G[:, list(cols)]) < K:
            return False, cols
    return True, None
