"""Polarized subchannel error probabilities and SC performance bounds.

Two ways to get P_e(W_i) for a length-N binary polar code on BPSK/AWGN:

* ``ga_profile``: density evolution under the Gaussian approximation with
  Chung's two-piece phi function;
* ``mc_profile``: genie-aided SC on the all-zero codeword, counting the
  first-error events at each index.

Noise convention throughout: SNR is E_b/N_0 in dB, sigma^2 = 1 / (2 R 10^(snr/10)).
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._random import STREAM_PROFILE, keyed_rng
from .decoder import LLR_MAX, f_fun
from .transform import d_set

NOISE_CONVENTION = "sigma^2 = 1/(2*R*10^(snr_db/10)), E_b/N_0, BPSK 0->+1"
PHI_CONVENTION = "Chung: exp(-0.4527 x^0.86 + 0.0218) for x < 10, sqrt(pi/x) exp(-x/4) (1 - 10/(7x)) above"
MC_BLOCK = 8192


def noise_variance(snr_db: float, rate: float) -> float:
    if not 0 < rate <= 1:
        raise ValueError(f"rate {rate} outside (0, 1]")
    if math.isinf(snr_db) and snr_db > 0:
        return 0.0
    return 1.0 / (2.0 * rate * 10.0 ** (snr_db / 10.0))


def wilson_interval(k: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if n == 0:
        return 0.0, 1.0
    p = k / n
    denom = 1 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    lo = 0.0 if k == 0 else max(0.0, centre - half)
    hi = 1.0 if k == n else min(1.0, centre + half)
    return lo, hi


@dataclass
class SubchannelProfile:
    pe: np.ndarray
    method: str
    snr_db: float
    rate: float
    frames: int | None = None
    seed: int | None = None
    errors: np.ndarray | None = field(default=None, repr=False)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.pe = np.asarray(self.pe, dtype=np.float64)
        if np.any((self.pe < 0) | (self.pe > 1)):
            raise ValueError("subchannel error probabilities must lie in [0, 1]")
        if self.errors is not None:
            self.errors = np.asarray(self.errors, dtype=np.int64)

    @property
    def N(self) -> int:
        return len(self.pe)

    def sigma(self) -> np.ndarray:
        """Binomial standard error of each entry (MC), zero for GA."""
        if self.frames is None:
            return np.zeros_like(self.pe)
        return np.sqrt(self.pe * (1 - self.pe) / self.frames)

    def intervals(self) -> list[tuple[float, float]]:
        if self.errors is None:
            return [(float(p), float(p)) for p in self.pe]
        return [wilson_interval(int(k), self.frames) for k in self.errors]

    def to_dict(self) -> dict:
        out = {
            "N": self.N,
            "method": self.method,
            "snr_db": self.snr_db,
            "rate": self.rate,
            "noise_var": noise_variance(self.snr_db, self.rate),
            "noise_convention": NOISE_CONVENTION,
            "pe": [float(p) for p in self.pe],
        }
        if self.method == "monte_carlo":
            out.update(frames=self.frames, seed=self.seed, errors=[int(k) for k in self.errors],
                       wilson95=[list(ci) for ci in self.intervals()])
        out.update(self.meta)
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "SubchannelProfile":
        known = {"N", "method", "snr_db", "rate", "pe", "frames", "seed", "errors",
                 "noise_var", "noise_convention", "wilson95"}
        return cls(
            pe=np.array(d["pe"]), method=d["method"], snr_db=d["snr_db"], rate=d["rate"],
            frames=d.get("frames"), seed=d.get("seed"),
            errors=np.array(d["errors"]) if d.get("errors") is not None else None,
            meta={k: v for k, v in d.items() if k not in known},
        )

    @classmethod
    def from_json(cls, text: str) -> "SubchannelProfile":
        return cls.from_dict(json.loads(text))


# ------------------------------------------------------------------- GA

def _log_phi(x: float) -> float:
    if x <= 0:
        return 0.0
    if x < 10:
        return -0.4527 * x ** 0.86 + 0.0218
    return 0.5 * math.log(math.pi / x) - x / 4 + math.log1p(-10 / (7 * x))


def phi(x: float) -> float:
    return math.exp(_log_phi(x))


def phi_inv_log(log_y: float, hi: float | None = None, tol: float = 1e-12) -> float:
    """Solve log(phi(x)) = log_y by bisection."""
    if log_y >= 0:
        return 0.0
    lo = 0.0
    if hi is None:
        hi = 1.0
        while _log_phi(hi) > log_y:
            hi *= 2
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if _log_phi(mid) > log_y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def check_node_mean(m: float) -> float:
    """phi^{-1}(1 - (1 - phi(m))^2), evaluated as phi(m) (2 - phi(m)) in logs."""
    if m <= 0:
        return 0.0
    lp = _log_phi(m)
    log_y = lp + math.log(2 - math.exp(lp))
    hi = m
    while _log_phi(hi) > log_y:
        hi *= 2
    return phi_inv_log(log_y, hi=hi)


def q_function(x: float) -> float:
    return 0.5 * math.erfc(x / math.sqrt(2))


def ga_means(N: int, snr_db: float, rate: float) -> np.ndarray:
    n = N.bit_length() - 1
    if N != 1 << n:
        raise ValueError(f"N={N} is not a power of two")
    s2 = noise_variance(snr_db, rate)
    if s2 == 0:
        return np.full(N, np.inf)
    means = [2.0 / s2]
    for _ in range(n):
        means = [v for m in means for v in (check_node_mean(m), 2 * m)]
    return np.array(means)


def ga_profile(N: int, snr_db: float, rate: float) -> SubchannelProfile:
    """Gaussian-approximation profile; index bits are applied MSB first."""
    means = ga_means(N, snr_db, rate)
    pe = np.array([0.0 if math.isinf(m) else q_function(math.sqrt(m / 2)) for m in means])
    return SubchannelProfile(pe, "gaussian_approx", snr_db, rate, meta={"phi": PHI_CONVENTION})


# ------------------------------------------------------------------- MC

def genie_leaf_llrs(llr: np.ndarray) -> np.ndarray:
    """Leaf LLRs of every index when all earlier bits are known to be zero.

    ``llr`` has shape ``(B, N)``; the result is indexed by subchannel.
    """
    B, N = llr.shape
    x = llr.reshape(B, 1, N)
    h = N
    while h > 1:
        h //= 2
        a, b = x[..., :h], x[..., h:]
        x = np.stack([f_fun(a, b), a + b], axis=-2).reshape(B, -1, h)
    return x[..., 0]


def _mc_block(N: int, s2: float, seed: int, block: int, frames: int, llr_max: float) -> np.ndarray:
    rng = keyed_rng(seed, block, STREAM_PROFILE)
    y = 1.0 + math.sqrt(s2) * rng.standard_normal((frames, N))
    llr = np.clip(2.0 * y / s2, -llr_max, llr_max)
    return (genie_leaf_llrs(llr) < 0).sum(axis=0)


def mc_profile(N: int, snr_db: float, rate: float, frames: int, seed: int = 0,
               threads: int = 1, llr_max: float = LLR_MAX) -> SubchannelProfile:
    """Genie-aided Monte-Carlo profile; deterministic in (seed, frames)."""
    s2 = noise_variance(snr_db, rate)
    if s2 == 0:
        return SubchannelProfile(np.zeros(N), "monte_carlo", snr_db, rate, frames, seed,
                                 np.zeros(N, dtype=np.int64), meta={"llr_max": llr_max})
    sizes = [min(MC_BLOCK, frames - b * MC_BLOCK) for b in range(-(-frames // MC_BLOCK))]
    jobs = [(N, s2, seed, b, sz, llr_max) for b, sz in enumerate(sizes)]
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            counts = list(pool.map(lambda j: _mc_block(*j), jobs))
    else:
        counts = [_mc_block(*j) for j in jobs]
    errors = np.sum(counts, axis=0, dtype=np.int64) if counts else np.zeros(N, dtype=np.int64)
    return SubchannelProfile(errors / max(frames, 1), "monte_carlo", snr_db, rate, frames, seed,
                             errors, meta={"llr_max": llr_max, "block": MC_BLOCK})


def profile_agreement(mc: SubchannelProfile, ga: SubchannelProfile, rel: float = 0.5) -> list[int]:
    """Indices where MC and GA differ by more than max(2 sigma, rel * GA)."""
    sigma = np.sqrt(ga.pe * (1 - ga.pe) / mc.frames)
    tol = np.maximum(2 * np.maximum(sigma, mc.sigma()), rel * ga.pe)
    return [int(i) for i in np.flatnonzero(np.abs(mc.pe - ga.pe) > tol)]


# ------------------------------------------------------------ SC bounds

def sc_error_prob(profile, A, n: int) -> float:
    """1 - prod_{i in A} (1 - P_e(W_i))^n, accumulated in the log domain."""
    pe = np.asarray(profile.pe if hasattr(profile, "pe") else profile, dtype=np.float64)
    sel = pe[list(A)]
    if np.any(sel >= 1):
        return 1.0
    return float(-np.expm1(n * np.sum(np.log1p(-sel))))


@dataclass(frozen=True)
class Bound:
    value: float
    D: list
    a: int


def lower_bound(profile, N: int, K: int) -> Bound:
    """SC error-probability lower bound over the D set of an (N, K) eRS code."""
    D, a = d_set(N, K)
    n = N.bit_length() - 1
    return Bound(sc_error_prob(profile, D, n), D, a)


@dataclass(frozen=True)
class Violation:
    best: int
    other: int
    pe_best: float
    pe_other: float
    z: float
    significant: bool


def degradation_check(profile, a: int, z_threshold: float = 2.0) -> list[Violation]:
    """Find pairs with P_e(W_{theta 2^a - 1}) > P_e(W_{theta 2^a - delta}).

    For MC profiles each violation carries the z-score of the difference and
    is flagged significant when z exceeds ``z_threshold``; GA violations are
    always significant.
    """
    pe = np.asarray(profile.pe)
    N = len(pe)
    n = N.bit_length() - 1
    if not 0 <= a <= n:
        raise ValueError(f"a={a} outside 0..{n}")
    frames = getattr(profile, "frames", None)
    step = 1 << a
    out = []
    for theta in range(1, (N >> a) + 1):
        best = theta * step - 1
        for delta in range(2, step + 1):
            other = theta * step - delta
            if pe[best] > pe[other]:
                if frames:
                    var = (pe[best] * (1 - pe[best]) + pe[other] * (1 - pe[other])) / frames
                    z = (pe[best] - pe[other]) / math.sqrt(var) if var > 0 else math.inf
                else:
                    z = math.inf
                out.append(Violation(best, other, float(pe[best]), float(pe[other]), z, z > z_threshold))
    return out


# ------------------------------------------------------------- reference

# published SC lower bounds at 11 dB, keyed by (N, rate)
REFERENCE_BOUNDS = {
    (16, 0.25): 1.70e-4, (32, 0.25): 2.20e-3, (64, 0.25): 2.31e-2, (128, 0.25): 1.64e-1,
    (256, 0.25): 6.09e-1, (16, 0.50): 5.77e-5, (32, 0.50): 2.72e-4, (64, 0.50): 1.20e-3,
    (128, 0.50): 5.30e-3, (256, 0.50): 2.26e-2,
}
REFERENCE_SNR_DB = 11.0


def bound_grid(lengths, rates, snrs, method: str = "ga", frames: int | None = None,
               seed: int = 0, threads: int = 1) -> list[dict]:
    """Lower bound for every (N, R, snr) combination, one row each."""
    rows = []
    for snr in snrs:
        for R in rates:
            for N in lengths:
                K = max(1, round(R * N))
                if method == "ga":
                    prof = ga_profile(N, snr, K / N)
                else:
                    fr = frames if frames is not None else (10**6 if N <= 64 else 10**5)
                    prof = mc_profile(N, snr, K / N, fr, seed=seed, threads=threads)
                b = lower_bound(prof, N, K)
                rows.append({"snr_db": snr, "N": N, "K": K, "rate": K / N, "a": b.a,
                             "method": prof.method, "frames": prof.frames, "bound": b.value})
    return rows
