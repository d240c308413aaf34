"""BPSK/AWGN channel and the Monte-Carlo frame-error-rate harness.

Frame ``f`` draws its message and its noise from a Philox stream keyed by
``(seed, f)``. Frames are decoded in fixed-size chunks that may run on several
threads; the stopping rule is applied afterwards in frame order, so a run is
reproducible bit for bit whatever the thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from ._random import STREAM_FRAME, STREAM_MESSAGE, keyed_rng
from .analysis import NOISE_CONVENTION, noise_variance, wilson_interval
from .decoder import LLR_MAX, sc_decode_batch, scl_decode_batch
from .ers_code import ErsCode, encode_matrix
from .transform import PreTransform

CHUNK = 256


@dataclass(frozen=True)
class ChannelConfig:
    snr_db: float
    rate: float
    seed: int = 0
    llr_max: float = LLR_MAX

    @property
    def noise_var(self) -> float:
        return noise_variance(self.snr_db, self.rate)

    def to_dict(self) -> dict:
        return {**asdict(self), "noise_var": self.noise_var, "noise_convention": NOISE_CONVENTION}


@dataclass(frozen=True)
class DecoderSpec:
    kind: str = "sc"  # "sc" or "scl"
    L: int = 1

    @property
    def label(self) -> str:
        return "SC" if self.kind == "sc" else f"SCL({self.L})"

    def run(self, pt: PreTransform, llr: np.ndarray):
        if self.kind == "sc":
            _, F, ops = sc_decode_batch(pt, llr)
        elif self.kind == "scl":
            _, F, _, ops = scl_decode_batch(pt, llr, self.L)
        else:
            raise ValueError(f"unknown decoder {self.kind!r}")
        return F, ops


@dataclass(frozen=True)
class StopRule:
    min_errors: int = 100
    max_frames: int = 10**7

    def __post_init__(self):
        if self.min_errors < 1:
            raise ValueError("min_errors must be >= 1")


@dataclass
class FerResult:
    N: int
    K: int
    snr_db: float
    decoder: str
    L: int
    frames: int
    frame_errors: int
    gf_ops_mean: float
    flops_mean: float
    config: dict

    @property
    def fer(self) -> float:
        return self.frame_errors / self.frames if self.frames else 0.0

    @property
    def ci95(self) -> tuple[float, float]:
        return wilson_interval(self.frame_errors, self.frames)

    def sigma(self) -> float:
        p = self.fer
        return math.sqrt(p * (1 - p) / self.frames) if self.frames else 0.0

    def row(self) -> dict:
        lo, hi = self.ci95
        return {
            "snr_db": self.snr_db, "N": self.N, "K": self.K, "decoder": self.decoder,
            "L": self.L, "frames": self.frames, "errors": self.frame_errors, "fer": self.fer,
            "ci_lo": lo, "ci_hi": hi, "gf_ops_mean": self.gf_ops_mean, "flops_mean": self.flops_mean,
        }

    def to_dict(self) -> dict:
        return {**self.row(), "config": self.config}


CSV_FIELDS = ["snr_db", "N", "K", "decoder", "L", "frames", "errors", "fer", "ci_lo", "ci_hi",
              "gf_ops_mean", "flops_mean"]


def frame_noise(cfg: ChannelConfig, frame: int, shape) -> np.ndarray:
    """Unit-variance Gaussian noise for one frame, a function of (seed, frame) only."""
    return keyed_rng(cfg.seed, frame, STREAM_FRAME).standard_normal(shape)


def frame_message(code: ErsCode, cfg: ChannelConfig, frame: int) -> np.ndarray:
    return keyed_rng(cfg.seed, frame, STREAM_MESSAGE).integers(0, code.N, size=code.K)


def transmit(codeword, cfg: ChannelConfig, n: int, frame: int = 0) -> np.ndarray:
    """BPSK over AWGN: bit j of symbol i becomes (1 - 2b) + noise.

    Returns ``(N, n)`` observations in codeword order.
    """
    codeword = np.asarray(codeword, dtype=np.int64)
    clean = 1.0 - 2.0 * ((codeword[:, None] >> np.arange(n)) & 1)
    s2 = cfg.noise_var
    if s2 == 0:
        return clean
    return clean + math.sqrt(s2) * frame_noise(cfg, frame, clean.shape)


def observations_to_llr(y: np.ndarray, cfg: ChannelConfig, pt: PreTransform) -> np.ndarray:
    """De-permute and convert observations ``(..., N, n)`` to clipped LLRs."""
    y = np.asarray(y, dtype=np.float64)[..., pt.perm.map, :]
    s2 = cfg.noise_var
    if s2 == 0:
        return np.clip(y * cfg.llr_max, -cfg.llr_max, cfg.llr_max)
    return np.clip(2.0 * y / s2, -cfg.llr_max, cfg.llr_max)


def _run_chunk(code: ErsCode, pt: PreTransform, dec: DecoderSpec, cfg: ChannelConfig,
               start: int, count: int):
    gf = code.field
    msgs = np.array([frame_message(code, cfg, start + k) for k in range(count)])
    C = encode_matrix(code, msgs)
    y = 1.0 - 2.0 * gf.to_bits(C)
    if cfg.noise_var > 0:
        noise = np.array([frame_noise(cfg, start + k, (code.N, code.n)) for k in range(count)])
        y = y + math.sqrt(cfg.noise_var) * noise
    F, ops = dec.run(pt, observations_to_llr(y, cfg, pt))
    return np.any(F != msgs, axis=1), ops


def run_fer(code: ErsCode, pt: PreTransform, dec: DecoderSpec, cfg: ChannelConfig,
            stop: StopRule = StopRule(), threads: int = 1, chunk: int = CHUNK,
            progress=None) -> FerResult:
    """Simulate frames until ``stop.min_errors`` errors or ``stop.max_frames`` frames."""
    errors_seen = 0
    frames_done = 0
    ops = None
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        while frames_done < stop.max_frames and errors_seen < stop.min_errors:
            starts = []
            s = frames_done
            for _ in range(max(threads, 1)):
                if s >= stop.max_frames:
                    break
                starts.append((s, min(chunk, stop.max_frames - s)))
                s += starts[-1][1]
            if pool is not None:
                results = list(pool.map(lambda a: _run_chunk(code, pt, dec, cfg, *a), starts))
            else:
                results = [_run_chunk(code, pt, dec, cfg, *a) for a in starts]
            for errs, chunk_ops in results:
                ops = chunk_ops
                for e in errs:
                    frames_done += 1
                    errors_seen += int(e)
                    if errors_seen >= stop.min_errors:
                        break
                if errors_seen >= stop.min_errors:
                    break
            if progress is not None:
                progress(frames_done, errors_seen)
    finally:
        if pool is not None:
            pool.shutdown()
    config = {
        **cfg.to_dict(),
        "prim_poly": code.field.prim_poly,
        "perm_strategy": pt.perm.strategy,
        "perm_digest": pt.perm.digest(),
        "pivots": list(pt.A),
        "min_errors": stop.min_errors,
        "max_frames": stop.max_frames,
    }
    return FerResult(code.N, code.K, cfg.snr_db, dec.label, dec.L, frames_done, errors_seen,
                     float(ops.gf_ops) if ops else 0.0, float(ops.flops) if ops else 0.0, config)
