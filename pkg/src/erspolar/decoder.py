"""SC and SCL decoding of eRS codes as n coupled binary polar decoders.

All n bit planes run the same min-sum SC tree in lockstep; they share one
symbol-level decision per position. Frozen symbols are recomputed from the
information symbols already decided on each path.

The engines work on batches of frames: LLR arrays have shape ``(B, N, n)``
where ``llr[b, i, j]`` is the LLR of bit j of de-permuted symbol i.
Operation counts are deterministic functions of the code and list size, so
they are tallied per frame while the batch runs.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .transform import PreTransform, Permutation

LLR_MAX = 40.0

# flop cost of the elementary LLR operations (see README, "Operation counts")
F_FLOPS = 2  # min of magnitudes, sign
G_FLOPS = 2  # conditional sign flip, add


@dataclass
class OpCounters:
    gf_ops: int = 0
    flops: int = 0

    def __iadd__(self, other: "OpCounters") -> "OpCounters":
        self.gf_ops += other.gf_ops
        self.flops += other.flops
        return self

    def as_dict(self) -> dict:
        return asdict(self)


def counters_report(counters: OpCounters | list[OpCounters]) -> dict:
    """Per-frame totals, or the mean over a list of per-frame counters."""
    if isinstance(counters, OpCounters):
        return {"frames": 1, "gf_ops": counters.gf_ops, "flops": counters.flops}
    frames = len(counters)
    return {
        "frames": frames,
        "gf_ops": sum(c.gf_ops for c in counters) / max(frames, 1),
        "flops": sum(c.flops for c in counters) / max(frames, 1),
    }


# ----------------------------------------------------------- primitives

def f_fun(a, b):
    """Min-sum check-node update sign(a b) min(|a|, |b|)."""
    return np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))


def g_fun(a, b, u):
    """Variable-node update (1 - 2u) a + b."""
    return (1 - 2 * np.asarray(u, dtype=np.float64)) * a + b


def llr_from_channel(y, noise_var: float, perm: Permutation | None = None,
                     llr_max: float = LLR_MAX) -> np.ndarray:
    """BPSK (0 -> +1) LLRs 2 y' / sigma^2 of de-permuted observations, clipped.

    ``y`` has shape ``(..., N, n)`` in codeword symbol order.
    """
    if noise_var <= 0:
        raise ValueError("noise variance must be positive")
    y = np.asarray(y, dtype=np.float64)
    if perm is not None:
        y = y[..., perm.map, :]
    return np.clip(2.0 * y / noise_var, -llr_max, llr_max)


def _ctz(i: int) -> int:
    return (i & -i).bit_length() - 1


class _Plan:
    """Per-(PreTransform) schedule reused across frames."""

    def __init__(self, pt: PreTransform):
        self.pt = pt
        self.N, self.K, self.n = pt.N, pt.K, pt.n
        self.m = self.N.bit_length() - 1
        self.is_info = pt.is_info
        self.info_rank = np.cumsum(self.is_info) - 1  # t for i in A
        self.mul = pt.field.mul_table
        self.symbits = pt.field.to_bits(np.arange(pt.field.size)).astype(np.int8)  # (Q, n)
        self.top = [self.m - 1 if i == 0 else _ctz(i) for i in range(self.N)]
        E = np.asarray(pt.E)
        self.recover_gf_ops = self.K * self.K + self.K * (self.K - 1)
        self.E = E

    def tree_flops(self, i: int) -> int:
        """Flops per path per frame to bring the leaf LLRs of position i up to date."""
        total = 0
        for s in range(self.top[i], -1, -1):
            total += self.n * (1 << s) * (G_FLOPS if (i >> s) & 1 else F_FLOPS)
        return total

    def frozen_symbols(self, i: int, fprime: np.ndarray) -> np.ndarray:
        acc = np.zeros(fprime.shape[:-1], dtype=np.int64)
        for t, coef in self.pt.frozen_terms[i]:
            acc ^= self.mul[fprime[..., t], coef]
        return acc

    def frozen_gf_ops(self, i: int) -> int:
        return 2 * len(self.pt.frozen_terms[i])

    def recover_message(self, fprime: np.ndarray) -> np.ndarray:
        return self.pt.field.vecmat(fprime, self.E)


_PLANS: dict[int, _Plan] = {}


def _plan(pt: PreTransform) -> _Plan:
    plan = _PLANS.get(id(pt))
    if plan is None or plan.pt is not pt:
        plan = _Plan(pt)
        _PLANS[id(pt)] = plan
    return plan


def _update_tree(plan: _Plan, i: int, alpha: list, beta: list) -> None:
    for s in range(plan.top[i], -1, -1):
        parent = alpha[s + 1]
        h = 1 << s
        a, b = parent[..., :h], parent[..., h:]
        if (i >> s) & 1:
            alpha[s] = g_fun(a, b, beta[s])
        else:
            alpha[s] = f_fun(a, b)


def _update_partial_sums(i: int, m: int, bits: np.ndarray, beta: list) -> None:
    v = bits[..., None]
    for s in range(m):
        if not (i >> s) & 1:
            beta[s] = v
            return
        v = np.concatenate([beta[s] ^ v, v], axis=-1)


# ------------------------------------------------------------------- SC

def sc_decode_batch(pt: PreTransform, llr: np.ndarray):
    """Vectorized SC decoding of ``B`` frames.

    Returns ``(U_hat, F_hat, counters)`` with ``U_hat`` of shape ``(B, N)``,
    ``F_hat`` of shape ``(B, K)`` and per-frame :class:`OpCounters`.
    """
    plan = _plan(pt)
    llr = np.asarray(llr, dtype=np.float64)
    B = llr.shape[0]
    N, K, n, m = plan.N, plan.K, plan.n, plan.m
    alpha = [None] * (m + 1)
    alpha[m] = np.swapaxes(llr, -1, -2)  # (B, n, N)
    beta = [None] * m
    U = np.zeros((B, N), dtype=np.int64)
    fprime = np.zeros((B, K), dtype=np.int64)
    weights = 1 << np.arange(n)
    ops = OpCounters()
    for i in range(N):
        _update_tree(plan, i, alpha, beta)
        ops.flops += plan.tree_flops(i)
        leaf = alpha[0][..., 0]  # (B, n)
        if plan.is_info[i]:
            bits = (leaf < 0).astype(np.int8)
            sym = bits.astype(np.int64) @ weights
            fprime[:, plan.info_rank[i]] = sym
            ops.flops += n
        else:
            sym = plan.frozen_symbols(i, fprime)
            bits = plan.symbits[sym]
            ops.gf_ops += plan.frozen_gf_ops(i)
        U[:, i] = sym
        _update_partial_sums(i, m, bits, beta)
    F_hat = plan.recover_message(fprime)
    ops.gf_ops += plan.recover_gf_ops
    return U, F_hat, ops


def sc_decode(pt: PreTransform, llr: np.ndarray):
    """SC-decode one frame of LLRs with shape ``(N, n)``."""
    U, F, ops = sc_decode_batch(pt, np.asarray(llr)[None])
    return U[0], F[0], ops


# ------------------------------------------------------------------ SCL

@dataclass
class _Trace:
    sink: object

    def emit(self, **record) -> None:
        self.sink.write(json.dumps(record) + "\n")


def scl_decode_batch(pt: PreTransform, llr: np.ndarray, L: int, *, trace=None,
                     debug: bool = False):
    """Vectorized SCL decoding of ``B`` frames with list size ``L``.

    At an information position every surviving path is extended by all 2^n
    symbol values and the ``L`` candidates with the smallest metrics survive;
    ties go to the lower (parent index, symbol value). At a frozen position
    each path takes its forced symbol and pays the same penalty rule.

    Returns ``(U_hat, F_hat, metric, counters)``. ``trace`` is an optional
    text sink receiving one JSON line per position (frame 0 only). With
    ``debug`` every path metric is re-derived from scratch at each step.
    """
    if L < 1:
        raise ValueError("list size must be >= 1")
    plan = _plan(pt)
    llr = np.asarray(llr, dtype=np.float64)
    B = llr.shape[0]
    N, K, n, m = plan.N, plan.K, plan.n, plan.m
    Q = 1 << n
    symbits = plan.symbits
    alpha = [None] * (m + 1)
    alpha[m] = np.swapaxes(llr, -1, -2)[:, None]  # (B, 1, n, N)
    beta = [None] * m
    P = 1
    U = np.zeros((B, P, N), dtype=np.int64)
    fprime = np.zeros((B, P, K), dtype=np.int64)
    metric = np.zeros((B, P))
    ops = OpCounters()
    tracer = _Trace(trace) if trace is not None else None
    if debug:
        hist_llr = np.zeros((B, P, N, n))
        hist_bits = np.zeros((B, P, N, n), dtype=np.int8)
    rows = np.arange(B)[:, None]
    weights = 1 << np.arange(n)

    for i in range(N):
        _update_tree(plan, i, alpha, beta)
        ops.flops += P * plan.tree_flops(i)
        leaf = alpha[0][..., 0]  # (B, P, n)
        if leaf.shape[1] != P:
            leaf = np.broadcast_to(leaf, (B, P, n))
        absl = np.abs(leaf)
        hard = (leaf < 0).astype(np.int8)
        if plan.is_info[i]:
            # subset-sum doubling: cand[..., e] = metric + sum_{j in e} |L_j|
            cand = metric[:, :, None]
            for j in range(n):
                cand = np.concatenate([cand, cand + absl[:, :, j:j + 1]], axis=-1)
            hard_sym = hard.astype(np.int64) @ weights
            cand = np.take_along_axis(cand, np.arange(Q) ^ hard_sym[..., None], axis=-1)
            cand = cand.reshape(B, P * Q)
            newP = min(L, P * Q)
            order = np.argsort(cand, axis=1, kind="stable")[:, :newP]
            parent, sym = np.divmod(order, Q)
            ops.flops += P * (2 * n + Q - 1) + (P * Q if P * Q > newP else 0)
            step_pen = np.take_along_axis(cand, order, axis=1) - np.take_along_axis(metric, parent, axis=1)
            metric = np.take_along_axis(cand, order, axis=1)
            for s in range(1, m):
                if alpha[s] is not None:
                    alpha[s] = alpha[s][rows, parent]
            for s in range(m):
                if beta[s] is not None:
                    beta[s] = beta[s][rows, parent]
            U = U[rows, parent]
            fprime = fprime[rows, parent]
            if debug:
                hist_llr = hist_llr[rows, parent]
                hist_bits = hist_bits[rows, parent]
                leaf = leaf[rows, parent]
            P = newP
            fprime[:, :, plan.info_rank[i]] = sym
        else:
            sym = plan.frozen_symbols(i, fprime)
            step_pen = (absl * (symbits[sym] != hard)).sum(axis=-1)
            metric = metric + step_pen
            ops.gf_ops += P * plan.frozen_gf_ops(i)
            ops.flops += P * 3 * n
        bits = symbits[sym]
        U[:, :, i] = sym
        _update_partial_sums(i, m, bits, beta)
        if debug:
            hist_llr[:, :, i] = leaf
            hist_bits[:, :, i] = bits
            _check_metric(hist_llr[:, :, : i + 1], hist_bits[:, :, : i + 1], metric)
        if tracer is not None:
            tracer.emit(**{"i": i, "class": pt.frozen_class[i]}, symbols=sym[0].tolist(),
                        penalties=step_pen[0].tolist(), metrics=metric[0].tolist())

    best = np.argmin(metric, axis=1)
    U_best = U[np.arange(B), best]
    fp_best = fprime[np.arange(B), best]
    F_hat = plan.recover_message(fp_best)
    ops.gf_ops += plan.recover_gf_ops
    return U_best, F_hat, metric[np.arange(B), best], ops


def _check_metric(hist_llr, hist_bits, metric) -> None:
    """Recompute sum_i sum_{j: sign(L) != 1 - 2u} |L| and compare."""
    mismatch = np.sign(hist_llr) != (1 - 2 * hist_bits.astype(np.float64))
    fresh = np.where(mismatch, np.abs(hist_llr), 0.0).sum(axis=(-1, -2))
    if not np.allclose(fresh, metric, rtol=1e-12, atol=1e-9):
        raise AssertionError("path metric drifted from its from-scratch value")


def scl_decode(pt: PreTransform, llr: np.ndarray, L: int, *, trace=None, debug: bool = False):
    """SCL-decode one frame of LLRs with shape ``(N, n)``.

    Returns ``(U_hat, F_hat, metric, counters)``.
    """
    U, F, metric, ops = scl_decode_batch(pt, np.asarray(llr)[None], L, trace=trace, debug=debug)
    return U[0], F[0], float(metric[0]), ops


def sc_trace(pt: PreTransform, llr: np.ndarray, sink) -> None:
    """Write the SC decisions for one frame as newline-delimited JSON."""
    scl_decode(pt, llr, 1, trace=sink)


__all__ = [
    "LLR_MAX", "OpCounters", "counters_report", "f_fun", "g_fun", "llr_from_channel",
    "sc_decode", "sc_decode_batch", "scl_decode", "scl_decode_batch",
]
