"""Random test matrices and the batch runner.

Matrices are generated in fixed chunks of ``CHUNK`` indices, each chunk from
its own ``numpy`` generator seeded with ``(seed, chunk)``; so matrix ``i`` of a
run depends only on the seed and ``i``, and a batch can be split among any
number of workers without changing a single bit of the reduced result.
"""

from __future__ import annotations

import math
import struct
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from . import epair as ep
from .baseline import lasv2_factors, lasv2_ref
from .fpcore import Format, get_format
from .matrix import Matrix2
from .oracle import ErrorStats, Factors, metrics, singular_values_exact
from .svd2 import Options, svd2

__all__ = ["CHUNK", "RunConfig", "BatchAbort", "generate", "generate_chunk", "regime_bounds", "run_matrix", "run_batch"]

CHUNK = 1024

PRECISIONS = {"single": "binary32", "double": "binary64", "binary32": "binary32", "binary64": "binary64"}
SHAPES = {"tri": "triangular", "triangular": "triangular", "gen": "general", "general": "general"}
REGIMES = ("circ", "bullet", "sigma")
ROUTINES = ("kog", "lasv2")


@dataclass(frozen=True)
class RunConfig:
    precision: str = "binary64"
    shape: str = "triangular"
    regime: str = "bullet"
    varsigma: int = 0
    count: int = 1 << 10
    seed: int = 0
    routine: str = "kog"
    threads: int = 1
    cr_hypot: bool = True
    exact_minus: bool = False
    kahan_det: bool = False

    def __post_init__(self):
        object.__setattr__(self, "precision", PRECISIONS.get(self.precision, self.precision))
        object.__setattr__(self, "shape", SHAPES.get(self.shape, self.shape))
        if self.precision not in ("binary32", "binary64"):
            raise ValueError(f"unknown precision {self.precision!r}")
        if self.shape not in ("triangular", "general"):
            raise ValueError(f"unknown shape {self.shape!r}")
        if self.regime not in REGIMES:
            raise ValueError(f"unknown regime {self.regime!r}")
        if self.routine not in ROUTINES:
            raise ValueError(f"unknown routine {self.routine!r}")
        if self.routine == "lasv2" and self.shape != "triangular":
            raise ValueError("lasv2 accepts only upper triangular matrices")
        if self.count < 0 or self.threads < 1:
            raise ValueError("count must be >= 0 and threads >= 1")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must fit in 64 bits")
        if self.regime == "sigma":
            fmt = self.fmt
            if not 1 <= self.varsigma <= fmt.emax - 2 - fmt.emin:
                raise ValueError(f"varsigma must be in [1, {fmt.emax - 2 - fmt.emin}]")
        elif self.varsigma:
            raise ValueError("varsigma applies only to the sigma regime")

    @property
    def fmt(self) -> Format:
        return get_format(self.precision)

    def options(self) -> Options:
        return Options(self.fmt, self.cr_hypot, self.exact_minus, self.kahan_det)


class BatchAbort(RuntimeError):
    """A NaN metric or a non-finite output; names the input bit patterns."""


# ---------------------------------------------------------------------------
# generation
# ---------------------------------------------------------------------------


def _magnitudes(rng: np.random.Generator, n: int, cfg: RunConfig) -> np.ndarray:
    fmt = cfg.fmt
    p = fmt.p
    if cfg.regime == "circ":
        # uniform in (0, 1) on the grid 2**-p
        k = rng.integers(1, 1 << p, size=n, dtype=np.int64)
        return np.ldexp(k.astype(np.float64), -p)
    lo = fmt.emin + (cfg.varsigma if cfg.regime == "sigma" else 0)
    hi = fmt.emax - 2
    e = rng.integers(lo, hi + 1, size=n, dtype=np.int64)
    m = rng.integers(0, 1 << (p - 1), size=n, dtype=np.int64) + (1 << (p - 1))
    # m * 2**(e - p + 1) lies in [2**e, 2**(e+1)), so within [2**lo, nu/4]
    return np.ldexp(m.astype(np.float64), (e - p + 1).astype(np.int32))


def regime_bounds(cfg: RunConfig) -> tuple[float, float]:
    """Closed interval holding every generated magnitude."""
    fmt = cfg.fmt
    if cfg.regime == "circ":
        return 2.0**-fmt.p, 1.0 - 2.0**-fmt.p
    return math.ldexp(fmt.mu, cfg.varsigma), fmt.nu / 4


def generate_chunk(cfg: RunConfig, chunk: int) -> np.ndarray:
    """Matrices ``chunk*CHUNK ... chunk*CHUNK + CHUNK - 1`` as an array (CHUNK, 4), row-major."""
    rng = np.random.default_rng([cfg.seed, chunk])
    n = CHUNK * 4
    mag = _magnitudes(rng, n, cfg)
    lo, hi = regime_bounds(cfg)
    if not (np.all(mag >= lo) and np.all(mag <= hi)):
        raise AssertionError(f"generated magnitude outside [{lo!r}, {hi!r}]")
    sign = rng.integers(0, 2, size=n, dtype=np.int8)
    X = np.where(sign == 1, -mag, mag).reshape(CHUNK, 4)
    if cfg.shape == "triangular":
        X[:, 2] = 0.0
    return X


@lru_cache(maxsize=4)
def _cached_chunk(cfg: RunConfig, chunk: int) -> np.ndarray:
    return generate_chunk(cfg, chunk)


def generate(cfg: RunConfig, index: int) -> Matrix2:
    """Matrix number ``index`` of the run described by cfg."""
    row = _cached_chunk(cfg, index // CHUNK)[index % CHUNK]
    return Matrix2(*map(float, row))


# ---------------------------------------------------------------------------
# running
# ---------------------------------------------------------------------------


def _bits(G: Matrix2) -> str:
    return "[" + ", ".join(struct.pack(">d", x).hex() for x in G) + "]"


def _coverage_keys(trace) -> list[str]:
    keys = [f"t:{trace.t}", f"path:{trace.path}"]
    if trace.urv:
        keys.append(f"urv:{trace.urv}")
    if trace.alg1:
        keys.append(f"alg1:{trace.alg1}")
    if trace.alg2:
        keys.append(f"alg2:{trace.alg2}")
    if trace.r_swap:
        keys.append("r_swap")
    if trace.p_sigma:
        keys.append("p_sigma")
    if trace.underflow:
        keys.append("underflow")
    return keys


def run_matrix(cfg: RunConfig, G: Matrix2, opts: Options | None = None):
    """Factor one matrix with the configured routine; returns (Factors, trace or None)."""
    if cfg.routine == "lasv2":
        U, V, a, b = lasv2_factors(lasv2_ref(G.g11, G.g12, G.g22, cfg.fmt))
        F = Factors(U, V, ep.from_scalar(a), ep.from_scalar(b))
        trace = None
    else:
        res = svd2(G, opts=opts or cfg.options())
        F = Factors(res.U, res.V, res.sigma1, res.sigma2)
        trace = res.trace
    if not all(math.isfinite(x) for x in (*F.U, *F.V, F.sigma1.f, F.sigma2.f)):
        raise BatchAbort(f"non-finite output for G = {_bits(G)} ({G!r}): {F!r}")
    return F, trace


def _run_chunk(args) -> ErrorStats:
    cfg, chunk = args
    stats = ErrorStats()
    opts = cfg.options()
    X = generate_chunk(cfg, chunk)
    n = min(CHUNK, cfg.count - chunk * CHUNK)
    for row in X[:n]:
        G = Matrix2(*map(float, row))
        F, trace = run_matrix(cfg, G, opts)
        m = metrics(G, F, singular_values_exact(G))
        try:
            stats.add(m)
        except ValueError as exc:
            raise BatchAbort(f"{exc} for G = {_bits(G)} ({G!r})") from None
        if trace is not None:
            stats.coverage.update(_coverage_keys(trace))
    return stats


def run_batch(cfg: RunConfig) -> ErrorStats:
    """Maxima of the error measures over the batch, with branch coverage counts."""
    nchunks = -(-cfg.count // CHUNK)
    jobs = [(replace(cfg, threads=1), c) for c in range(nchunks)]
    total = ErrorStats()
    if cfg.threads > 1 and nchunks > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            parts = list(pool.map(_run_chunk, jobs))
    else:
        parts = [_run_chunk(j) for j in jobs]
    for part in parts:  # fixed order
        total = total.merge(part)
    return total
