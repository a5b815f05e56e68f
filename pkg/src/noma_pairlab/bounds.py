"""Closed-form bounds on the power split and the SIC residual of a NOMA pair.

Inside the open interval ``(alpha_lower_positivity, alpha_upper)`` the weak
user beats its OMA rate, and whenever ``beta < beta_upper_at_alpha`` the pair's
sum rate beats OMA. The interval is non-empty exactly when the SINR gap of the
pair exceeds the minimum SINR difference returned by :func:`msd`.

Bound values are returned raw (never clamped) so that sign changes stay
visible to the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, OrderingError, SingularityError
from .rates import _check_alpha, _check_beta, _out

SINGULAR_TOL = 1e-12
# relative gap under which the two pairability tests may disagree by rounding
_TIE_RTOL = 1e-9


def _positive(name, x):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or np.any(x <= 0):
        raise DomainError(f"{name} must be finite and > 0, got {x.tolist()}")
    return x


def _ordered_pair(gamma_s, gamma_w):
    gw = _positive("gamma_w", gamma_w)
    gs = _positive("gamma_s", gamma_s)
    if np.any(gs < gw):
        raise OrderingError(f"gamma_s={gamma_s!r} is below gamma_w={gamma_w!r}")
    return gs, gw


def alpha_upper(gamma_w):
    """Largest strong-user power fraction that keeps the weak user above OMA.

    ``(sqrt(1 + gamma_w) - 1) / gamma_w``, strictly decreasing from 0.5.
    """
    gw = _positive("gamma_w", gamma_w)
    # 1 / (sqrt(1+g) + 1) is the same quantity without cancellation at small g
    return _out(1.0 / (np.sqrt(1.0 + gw) + 1.0))


def alpha_lower_strong(gamma_s, beta=0.0):
    """Smallest strong-user power fraction giving the strong user more than OMA."""
    gs = _positive("gamma_s", gamma_s)
    b = _check_beta(beta)
    root = np.sqrt(1.0 + gs)
    return _out((1.0 + b * gs) * (root - 1.0) / (gs * (1.0 + b * root - b)))


def alpha_lower_positivity(gamma_s, gamma_w):
    """Lower end of the admissible split interval: ``1 / (sqrt(1+gs) + 1/sqrt(1+gw))``."""
    gs, gw = _ordered_pair(gamma_s, gamma_w)
    return _out(1.0 / (np.sqrt(1.0 + gs) + 1.0 / np.sqrt(1.0 + gw)))


def beta_upper_at_alpha(gamma_s, gamma_w, alpha_s):
    """SIC residual below which the pair's NOMA sum rate exceeds the OMA sum rate.

    Can be negative, in which case no beta in [0, 1] helps at this split.
    """
    gs, gw = _ordered_pair(gamma_s, gamma_w)
    a = _check_alpha(alpha_s)
    rs, rw = np.sqrt(1.0 + gs), np.sqrt(1.0 + gw)
    num = (1.0 + a * gs) * rw - (1.0 + a * gw) * rs
    den = gs * (1.0 - a) * (rs * (1.0 + a * gw) - rw)
    if np.any(np.abs(den) < SINGULAR_TOL):
        raise SingularityError("beta bound denominator vanishes")
    return _out(num / den)


def beta_upper_star(gamma_s, gamma_w):
    """SIC residual bound evaluated at the largest weak-user-safe split."""
    gs, gw = _ordered_pair(gamma_s, gamma_w)
    rs, rw = np.sqrt(1.0 + gs), np.sqrt(1.0 + gw)
    num = gw - gs + gs * rw - gw * rs
    den = gs * (rs - 1.0) * (gw - rw + 1.0)
    if np.any(np.abs(den) < SINGULAR_TOL):
        raise SingularityError("beta* denominator vanishes")
    out = np.where(gs == gw, 0.0, num / den)
    return _out(out)


def msd(gamma_s, gamma_w):
    """Minimum SINR difference a pair must exceed to be worth pairing."""
    gs, gw = _ordered_pair(gamma_s, gamma_w)
    rs, rw = np.sqrt(1.0 + gs), np.sqrt(1.0 + gw)
    return _out(gs - (rw - 1.0) * (rs * rw + 1.0) / rw)


def msd_satisfied(gamma_s, gamma_w) -> bool:
    """Strict pairing criterion ``gamma_s - gamma_w > msd(gamma_s, gamma_w)``."""
    return bool(gamma_s - gamma_w > msd(gamma_s, gamma_w))


@dataclass(frozen=True)
class FeasibleRegion:
    gamma_s: float
    gamma_w: float
    alpha_s: Optional[float]
    beta: float
    alpha_upper: float
    alpha_lower_strong: float
    alpha_lower_positivity: float
    beta_upper_at_alpha: Optional[float]
    beta_upper_star: float
    msd: float
    pairable: bool

    @property
    def interval(self):
        return self.alpha_lower_positivity, self.alpha_upper

    def contains(self, alpha_s: float) -> bool:
        return self.alpha_lower_positivity < alpha_s < self.alpha_upper

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def feasible_region(gamma_s, gamma_w, alpha_s=None, beta=0.0) -> FeasibleRegion:
    gs, gw = float(gamma_s), float(gamma_w)
    _ordered_pair(gs, gw)
    _check_beta(beta)
    a_up = float(alpha_upper(gw))
    a_pos = float(alpha_lower_positivity(gs, gw))
    d = float(msd(gs, gw))
    pairable = gs - gw > d
    # both tests are the same inequality rearranged; disagreement only at ties
    if pairable != (a_up > a_pos) and not math.isclose(a_up, a_pos, rel_tol=_TIE_RTOL):
        raise AssertionError(
            f"MSD test and interval test disagree for gamma_s={gs}, gamma_w={gw}"
        )
    b_alpha = None if alpha_s is None else float(beta_upper_at_alpha(gs, gw, alpha_s))
    return FeasibleRegion(
        gamma_s=gs,
        gamma_w=gw,
        alpha_s=None if alpha_s is None else float(alpha_s),
        beta=float(beta),
        alpha_upper=a_up,
        alpha_lower_strong=float(alpha_lower_strong(gs, beta)),
        alpha_lower_positivity=a_pos,
        beta_upper_at_alpha=b_alpha,
        beta_upper_star=float(beta_upper_star(gs, gw)),
        msd=d,
        pairable=bool(pairable),
    )
