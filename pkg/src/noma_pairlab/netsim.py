"""Poisson cellular network and the Monte-Carlo pairing experiment.

BSs and users are dropped as homogeneous PPPs on a square, links get a
log-distance pathloss times unit-mean exponential (Rayleigh power) fading, and
each user attaches to the BS giving it the highest SINR with every other BS
transmitting at full power.

Every realization draws from its own RNG stream spawned from the master seed,
so results do not depend on how realizations are scheduled across threads.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from .errors import ConfigError
from .pairing import ALGORITHMS, SplitPolicy, evaluate_plan, run_algorithm
from .rates import DEFAULT_DR_TABLE, DrTable, UserChannel

log = logging.getLogger(__name__)

MIN_DISTANCE_KM = 0.01
THREADS_ENV = "NOMA_PAIRLAB_THREADS"


@dataclass(frozen=True)
class SimConfig:
    bs_density: float = 25.0  # per km^2
    user_density: float = 120.0  # per km^2
    region_side: float = 1.0  # km
    tx_power_dbm: float = 46.0
    noise_dbm: float = -104.0
    pathloss_a: float = 128.1  # dB at 1 km
    pathloss_b: float = 37.6  # dB per decade
    fading_scale: float = 1.0
    realizations: int = 80
    seed: int = 0
    beta: float = 0.13
    rate_model: str = "lr"
    split_policy: SplitPolicy = SplitPolicy()
    # users served by the BS nearest the region centre; None -> PPP users, all BSs
    users_per_bs: Optional[int] = None
    redraw_geometry: bool = True
    dr_table: DrTable = DEFAULT_DR_TABLE

    def validate(self) -> "SimConfig":
        for name in ("bs_density", "user_density", "region_side", "fading_scale"):
            v = getattr(self, name)
            if not np.isfinite(v) or v <= 0:
                raise ConfigError(f"{name} must be > 0, got {v}")
        if int(self.realizations) <= 0:
            raise ConfigError(f"realizations must be > 0, got {self.realizations}")
        if not 0.0 <= self.beta <= 1.0:
            raise ConfigError(f"beta must lie in [0, 1], got {self.beta}")
        if self.rate_model not in ("lr", "dr"):
            raise ConfigError(f"rate_model must be 'lr' or 'dr', got {self.rate_model!r}")
        if self.users_per_bs is not None and int(self.users_per_bs) <= 0:
            raise ConfigError(f"users_per_bs must be > 0, got {self.users_per_bs}")
        return self

    @property
    def area(self) -> float:
        return self.region_side ** 2

    @property
    def tx_power_mw(self) -> float:
        return 10.0 ** (self.tx_power_dbm / 10.0)

    @property
    def noise_mw(self) -> float:
        return 10.0 ** (self.noise_dbm / 10.0)


@dataclass
class NetworkSnapshot:
    bs_positions: np.ndarray  # (B, 2) km
    user_positions: np.ndarray  # (U, 2) km
    link_gain: np.ndarray  # (U, B) linear
    sinr_matrix: np.ndarray  # (U, B) SINR toward each BS
    association: np.ndarray  # (U,) serving BS index
    served_sinr: np.ndarray  # (U,) linear

    def users_of(self, bs: int) -> List[UserChannel]:
        idx = np.flatnonzero(self.association == bs)
        return [UserChannel(int(i), float(self.served_sinr[i])) for i in idx]


def _uniform_points(n, side, rng):
    return rng.uniform(0.0, side, size=(n, 2))


def deploy(config: SimConfig, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """Draw PPP base stations and users over the square region."""
    mean_bs = config.bs_density * config.area
    n_bs = rng.poisson(mean_bs)
    while n_bs == 0:
        log.info("realization with no base station discarded, redrawing")
        n_bs = rng.poisson(mean_bs)
    bs = _uniform_points(n_bs, config.region_side, rng)
    users = _uniform_points(rng.poisson(config.user_density * config.area), config.region_side, rng)
    return bs, users


def pathloss_db(d_km, config: SimConfig):
    d = np.maximum(np.asarray(d_km, dtype=float), MIN_DISTANCE_KM)
    return config.pathloss_a + config.pathloss_b * np.log10(d)


def fading_power(shape, config: SimConfig, rng: np.random.Generator) -> np.ndarray:
    """Rayleigh fading power |h|^2: exponential with mean ``fading_scale**2``."""
    return rng.exponential(config.fading_scale ** 2, size=shape)


def channel_gains(user_positions, bs_positions, config: SimConfig, rng) -> np.ndarray:
    """Linear (user, BS) power gains: pathloss times fading."""
    d = np.linalg.norm(user_positions[:, None, :] - bs_positions[None, :, :], axis=-1)
    mean = 10.0 ** (-pathloss_db(d, config) / 10.0)
    return mean * fading_power(d.shape, config, rng)


def sinr_matrix(link_gain: np.ndarray, config: SimConfig) -> np.ndarray:
    rx = config.tx_power_mw * link_gain
    total = rx.sum(axis=1, keepdims=True)
    return rx / (config.noise_mw + (total - rx))


def associate_and_sinr(bs_positions, user_positions, link_gain, config: SimConfig) -> NetworkSnapshot:
    """Attach every user to its max-SINR BS (ties -> lowest BS index)."""
    sinr = sinr_matrix(link_gain, config)
    assoc = np.argmax(sinr, axis=1) if sinr.size else np.zeros(0, dtype=int)
    served = sinr[np.arange(len(assoc)), assoc] if sinr.size else np.zeros(0)
    return NetworkSnapshot(bs_positions, user_positions, link_gain, sinr, assoc, served)


def snapshot(config: SimConfig, rng, bs_positions=None) -> NetworkSnapshot:
    if bs_positions is None:
        bs_positions, users = deploy(config, rng)
    else:
        users = _uniform_points(rng.poisson(config.user_density * config.area), config.region_side, rng)
    gains = channel_gains(users, bs_positions, config, rng)
    return associate_and_sinr(bs_positions, users, gains, config)


def tagged_bs(bs_positions, config: SimConfig) -> int:
    centre = np.full(2, config.region_side / 2.0)
    return int(np.argmin(np.linalg.norm(bs_positions - centre, axis=1)))


def tagged_cell_users(config: SimConfig, rng, bs_positions, n_users: int, batch: int = 256):
    """Drop uniform users until ``n_users`` of them attach to the tagged BS.

    Candidates attached elsewhere are discarded, so the accepted users follow
    the tagged cell's own SINR distribution (fading included).
    """
    tag = tagged_bs(bs_positions, config)
    pos, sinr = [], []
    while len(sinr) < n_users:
        cand = _uniform_points(batch, config.region_side, rng)
        gains = channel_gains(cand, bs_positions, config, rng)
        snap = associate_and_sinr(bs_positions, cand, gains, config)
        keep = np.flatnonzero(snap.association == tag)
        pos.extend(cand[keep])
        sinr.extend(snap.served_sinr[keep])
    return np.asarray(pos[:n_users]), np.asarray(sinr[:n_users])


@dataclass
class AlgorithmStats:
    algorithm: str
    mean_asr: float
    std_asr: float
    mean_user_rate: float
    std_user_rate: float
    mean_users: float
    realizations: int
    seed: int
    per_realization: List[float] = field(default_factory=list, repr=False)


def _thread_count(n_jobs: int) -> int:
    raw = os.environ.get(THREADS_ENV)
    cap = os.cpu_count() or 1
    if raw:
        try:
            cap = max(1, int(raw))
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return max(1, min(cap, n_jobs))


def _one_realization(config: SimConfig, algorithms, seq: np.random.SeedSequence, bs_fixed):
    rng = np.random.default_rng(seq)
    if config.users_per_bs is not None:
        bs = bs_fixed if bs_fixed is not None else deploy(config, rng)[0]
        _, sinr = tagged_cell_users(config, rng, bs, int(config.users_per_bs))
        cells = [[UserChannel(i, float(g)) for i, g in enumerate(sinr)]]
    else:
        snap = snapshot(config, rng, bs_fixed)
        cells = [snap.users_of(b) for b in range(len(snap.bs_positions))]
    totals, counts = {}, sum(len(c) for c in cells)
    for alg in algorithms:
        total = 0.0
        for users in cells:
            if not users:
                continue
            plan = run_algorithm(alg, users, config.beta, config.split_policy)
            total += evaluate_plan(plan, config.beta, config.rate_model, config.dr_table).total
        totals[alg] = total
    return totals, counts


def normalize_algorithms(algorithms: Iterable[str]) -> List[str]:
    algs = [a.strip().lower() for a in algorithms if a and a.strip()]
    if not algs:
        raise ConfigError("no algorithms requested")
    bad = [a for a in algs if a not in ALGORITHMS]
    if bad:
        raise ConfigError(f"unknown algorithm(s) {bad}; expected a subset of {list(ALGORITHMS)}")
    return list(dict.fromkeys(algs))


def run_experiment(config: SimConfig, algorithms: Iterable[str] = ALGORITHMS) -> Dict[str, AlgorithmStats]:
    """Average each algorithm's total sum rate over fading realizations.

    In ``users_per_bs`` mode only the tagged cell is evaluated; otherwise the
    sum rate is the network total over all cells of a realization.
    """
    config.validate()
    algs = normalize_algorithms(algorithms)
    n = int(config.realizations)
    root = np.random.SeedSequence(int(config.seed))
    geo_seq, *seqs = root.spawn(n + 1)
    bs_fixed = None
    if not config.redraw_geometry:
        bs_fixed = deploy(config, np.random.default_rng(geo_seq))[0]

    def job(i):
        return _one_realization(config, algs, seqs[i], bs_fixed)

    workers = _thread_count(n)
    if workers == 1:
        results = [job(i) for i in range(n)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, range(n)))  # map keeps realization order

    counts = np.array([c for _, c in results], dtype=float)
    out = {}
    for alg in algs:
        asr = np.array([t[alg] for t, _ in results])
        per_user = np.divide(asr, counts, out=np.zeros_like(asr), where=counts > 0)
        out[alg] = AlgorithmStats(
            algorithm=alg,
            mean_asr=float(asr.mean()),
            std_asr=float(asr.std(ddof=1)) if n > 1 else 0.0,
            mean_user_rate=float(per_user.mean()),
            std_user_rate=float(per_user.std(ddof=1)) if n > 1 else 0.0,
            mean_users=float(counts.mean()),
            realizations=n,
            seed=int(config.seed),
            per_realization=asr.tolist(),
        )
    return out


CONFIG_FIELDS = {f.name for f in fields(SimConfig)}


def with_overrides(config: SimConfig, **kw) -> SimConfig:
    return replace(config, **kw)
