"""Link-level alpha/beta sweeps for one fixed user pair."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from .rates import DEFAULT_DR_TABLE, DrTable, dr_rate, noma_rates, noma_sinr_pair, oma_rate

SWEEP_COLUMNS = ("sweep_var", "value", "r_s_noma", "r_w_noma", "r_s_oma", "r_w_oma", "asr_noma", "asr_oma")


@dataclass(frozen=True)
class SweepRow:
    sweep_var: str
    value: float
    r_s_noma: float
    r_w_noma: float
    r_s_oma: float
    r_w_oma: float

    @property
    def asr_noma(self) -> float:
        return self.r_s_noma + self.r_w_noma

    @property
    def asr_oma(self) -> float:
        return self.r_s_oma + self.r_w_oma

    def as_tuple(self):
        return (self.sweep_var, self.value, self.r_s_noma, self.r_w_noma,
                self.r_s_oma, self.r_w_oma, self.asr_noma, self.asr_oma)


def _pair_rates(gamma_s, gamma_w, alpha_s, beta, rate_model, table):
    hat_s, hat_w = noma_sinr_pair(gamma_s, gamma_w, alpha_s, beta)
    if rate_model == "dr":
        return (dr_rate(hat_s, table), dr_rate(hat_w, table),
                dr_rate(gamma_s, table, oma_flag=True), dr_rate(gamma_w, table, oma_flag=True))
    r_s, r_w = noma_rates(hat_s, hat_w)
    return r_s, r_w, oma_rate(gamma_s), oma_rate(gamma_w)


def _rows(var, values, r_s, r_w, o_s, o_w) -> List[SweepRow]:
    n = len(values)
    r_s, r_w = np.broadcast_to(r_s, n), np.broadcast_to(r_w, n)
    return [SweepRow(var, float(v), float(a), float(b), float(o_s), float(o_w))
            for v, a, b in zip(values, r_s, r_w)]


def beta_sweep(gamma_s, gamma_w, alpha_s, betas, rate_model="lr", table: DrTable = DEFAULT_DR_TABLE):
    betas = np.asarray(betas, dtype=float)
    r_s, r_w, o_s, o_w = _pair_rates(gamma_s, gamma_w, alpha_s, betas, rate_model, table)
    return _rows("beta", betas, r_s, r_w, o_s, o_w)


def alpha_sweep(gamma_s, gamma_w, beta, alphas, rate_model="lr", table: DrTable = DEFAULT_DR_TABLE):
    alphas = np.asarray(alphas, dtype=float)
    r_s, r_w, o_s, o_w = _pair_rates(gamma_s, gamma_w, alphas, beta, rate_model, table)
    return _rows("alpha", alphas, r_s, r_w, o_s, o_w)


def sign_changes(values, diffs):
    """Grid intervals ``(lo, hi)`` across which ``diffs`` changes sign."""
    values, diffs = np.asarray(values), np.sign(np.asarray(diffs))
    idx = np.flatnonzero(diffs[:-1] * diffs[1:] < 0)
    return [(float(values[i]), float(values[i + 1])) for i in idx]
