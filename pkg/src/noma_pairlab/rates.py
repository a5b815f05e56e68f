"""OMA/NOMA SINRs and the log-rate (LR) and discrete-rate (DR) models.

Every function works on linear SINRs. Scalars go in, numpy floats come out;
numpy arrays are accepted as well and broadcast elementwise, which is what the
sweeps and the equivalence tests rely on.

Rates are in bits/s/Hz (log base 2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from .errors import ConfigError, DomainError, OrderingError


def db_to_linear(x_db):
    return np.power(10.0, np.asarray(x_db, dtype=float) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(np.asarray(x, dtype=float))


def _check_sinr(name, x):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or np.any(x < 0):
        raise DomainError(f"{name} must be finite and non-negative, got {x.tolist()}")
    return x


def _check_alpha(alpha_s):
    a = np.asarray(alpha_s, dtype=float)
    if not np.all((a > 0) & (a < 1)):
        raise DomainError(f"alpha_s must lie in (0, 1), got {alpha_s!r}")
    return a


def _check_beta(beta):
    b = np.asarray(beta, dtype=float)
    if not np.all((b >= 0) & (b <= 1)):
        raise DomainError(f"beta must lie in [0, 1], got {beta!r}")
    return b


def _out(x):
    # 0-d arrays become numpy scalars so callers can treat them as floats
    return x[()] if isinstance(x, np.ndarray) and x.ndim == 0 else x


@dataclass(frozen=True)
class UserChannel:
    user_id: Hashable
    gamma: float

    def __post_init__(self):
        g = float(self.gamma)
        if not np.isfinite(g) or g < 0:
            raise DomainError(f"user {self.user_id!r}: gamma must be finite and >= 0, got {g}")
        object.__setattr__(self, "gamma", g)

    @classmethod
    def from_db(cls, user_id, gamma_db: float) -> "UserChannel":
        return cls(user_id, float(db_to_linear(gamma_db)))

    @property
    def gamma_db(self) -> float:
        return float(linear_to_db(self.gamma)) if self.gamma > 0 else float("-inf")


@dataclass(frozen=True)
class PowerSplit:
    """Fraction of transmit power given to the strong user of a pair."""

    alpha_s: float

    def __post_init__(self):
        _check_alpha(self.alpha_s)
        object.__setattr__(self, "alpha_s", float(self.alpha_s))

    @property
    def alpha_w(self) -> float:
        return 1.0 - self.alpha_s


@dataclass(frozen=True)
class SicImperfection:
    beta: float = 0.0

    def __post_init__(self):
        _check_beta(self.beta)
        object.__setattr__(self, "beta", float(self.beta))


@dataclass(frozen=True)
class DrTable:
    """SINR-threshold staircase: rate of the highest threshold not above the SINR."""

    thresholds: tuple
    rates: tuple

    def __post_init__(self):
        thr = tuple(float(t) for t in self.thresholds)
        rates = tuple(float(r) for r in self.rates)
        if not thr:
            raise ConfigError("DR table needs at least one entry")
        if len(thr) != len(rates):
            raise ConfigError("DR table thresholds and rates differ in length")
        if np.any(np.diff(thr) <= 0) or np.any(np.diff(rates) <= 0):
            raise ConfigError("DR table thresholds and rates must be strictly increasing")
        object.__setattr__(self, "thresholds", thr)
        object.__setattr__(self, "rates", rates)

    @classmethod
    def from_entries(cls, entries: Sequence[tuple]) -> "DrTable":
        entries = list(entries)
        return cls(tuple(t for t, _ in entries), tuple(r for _, r in entries))

    @classmethod
    def from_db(cls, entries_db: Sequence[tuple]) -> "DrTable":
        return cls.from_entries([(float(db_to_linear(t)), r) for t, r in entries_db])


# 4-bit CQI spectral efficiencies with commonly used SINR switching points (dB).
# Implementation-chosen defaults; override through the simulation config.
_CQI_DB = (
    (-6.7, 0.1523), (-4.7, 0.2344), (-2.3, 0.3770), (0.2, 0.6016),
    (2.4, 0.8770), (4.3, 1.1758), (5.9, 1.4766), (8.1, 1.9141),
    (10.3, 2.4063), (11.7, 2.7305), (14.1, 3.3223), (16.3, 3.9023),
    (18.7, 4.5234), (21.0, 5.1152), (22.7, 5.5547),
)
DEFAULT_DR_TABLE = DrTable.from_db(_CQI_DB)


def oma_rate(gamma):
    """Normalized OMA rate ``0.5 * log2(1 + gamma)``.

    The half accounts for the two users splitting the resource orthogonally.
    """
    g = _check_sinr("gamma", gamma)
    return _out(0.5 * np.log2(1.0 + g))


def noma_sinr_pair(gamma_s, gamma_w, alpha_s, beta=0.0):
    """Post-superposition SINRs ``(gamma_hat_s, gamma_hat_w)`` of a NOMA pair.

    Parameters
    ----------
    gamma_s, gamma_w : float or array
        OMA SINRs of the strong and weak user; ``gamma_s >= gamma_w``.
    alpha_s : float, array or PowerSplit
        Power fraction of the strong user, in (0, 1).
    beta : float, array or SicImperfection
        Residual fraction of the weak user's signal left after SIC, in [0, 1].
    """
    if isinstance(alpha_s, PowerSplit):
        alpha_s = alpha_s.alpha_s
    if isinstance(beta, SicImperfection):
        beta = beta.beta
    gs = _check_sinr("gamma_s", gamma_s)
    gw = _check_sinr("gamma_w", gamma_w)
    if np.any(gs < gw):
        raise OrderingError(f"strong user SINR {gamma_s!r} below weak user SINR {gamma_w!r}")
    a = _check_alpha(alpha_s)
    b = _check_beta(beta)
    hat_s = a * gs / (1.0 + b * (1.0 - a) * gs)
    hat_w = (1.0 - a) * gw / (1.0 + a * gw)
    return _out(hat_s), _out(hat_w)


def noma_rates(gamma_hat_s, gamma_hat_w):
    """NOMA rates ``log2(1 + gamma_hat)``; no multiplexing penalty."""
    hs = _check_sinr("gamma_hat_s", gamma_hat_s)
    hw = _check_sinr("gamma_hat_w", gamma_hat_w)
    return _out(np.log2(1.0 + hs)), _out(np.log2(1.0 + hw))


def asr_noma(r_s, r_w):
    return _out(np.asarray(r_s, dtype=float) + np.asarray(r_w, dtype=float))


def asr_oma(gamma_s, gamma_w):
    return _out(np.asarray(oma_rate(gamma_s)) + np.asarray(oma_rate(gamma_w)))


def dr_rate(gamma, table: DrTable = DEFAULT_DR_TABLE, oma_flag: bool = False):
    """Staircase rate for ``gamma``; halved when the user is served by OMA."""
    if table is None or not table.thresholds:
        raise ConfigError("DR table is empty")
    g = _check_sinr("gamma", gamma)
    thr = np.asarray(table.thresholds)
    steps = np.concatenate(([0.0], table.rates))
    idx = np.searchsorted(thr, g, side="right")
    r = steps[idx]
    if oma_flag:
        r = 0.5 * r
    return _out(r)
