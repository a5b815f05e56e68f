"""User pairing: adaptive pairing (A-UP) plus near-far and UCGD baselines.

All algorithms sort users by SINR (ties broken by ``user_id``) and return a
:class:`PairPlan`. Baselines pair unconditionally; A-UP only pairs users whose
SINR gap beats the minimum SINR difference and serves the rest with OMA.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, List, NamedTuple, Optional, Sequence

import numpy as np

from . import bounds
from .errors import ConfigError, DomainError, FeasibilityError
from .rates import (
    DEFAULT_DR_TABLE,
    DrTable,
    PowerSplit,
    UserChannel,
    dr_rate,
    noma_rates,
    noma_sinr_pair,
    oma_rate,
)

log = logging.getLogger(__name__)

ALGORITHMS = ("aup", "nf", "ucgd", "oma")
# baseline pairs with an empty split interval sit just under the weak-user bound
BASELINE_CLAMP = 1e-6


@dataclass(frozen=True)
class SplitPolicy:
    mode: str = "grid-argmax"
    grid_points: int = 101

    def __post_init__(self):
        if self.mode not in ("midpoint", "grid-argmax"):
            raise ConfigError(f"unknown split mode {self.mode!r}")
        if self.mode == "grid-argmax" and int(self.grid_points) < 2:
            raise ConfigError("grid-argmax needs at least 2 grid points")

    @classmethod
    def parse(cls, text: str) -> "SplitPolicy":
        """Parse ``midpoint`` or ``grid:<n>``."""
        text = text.strip().lower()
        if text == "midpoint":
            return cls("midpoint")
        if text.startswith("grid:"):
            try:
                n = int(text[5:])
            except ValueError:
                raise ConfigError(f"bad grid size in split policy {text!r}") from None
            return cls("grid-argmax", n)
        raise ConfigError(f"unknown split policy {text!r}")

    def __str__(self):
        return "midpoint" if self.mode == "midpoint" else f"grid:{self.grid_points}"


class Pair(NamedTuple):
    weak: UserChannel
    strong: UserChannel
    split: PowerSplit


@dataclass
class PairPlan:
    pairs: List[Pair] = field(default_factory=list)
    singles: List[UserChannel] = field(default_factory=list)

    def users(self) -> List[UserChannel]:
        out = []
        for p in self.pairs:
            out += [p.weak, p.strong]
        return out + list(self.singles)

    def covers(self, users: Iterable[UserChannel]) -> bool:
        """True when pairs and singles hold exactly the given users, once each."""
        ids = sorted(map(repr, (u.user_id for u in self.users())))
        return ids == sorted(map(repr, (u.user_id for u in users)))

    def pair_ids(self):
        return [(p.weak.user_id, p.strong.user_id) for p in self.pairs]

    def single_ids(self):
        return [u.user_id for u in self.singles]


class Groups(NamedTuple):
    g1: List[UserChannel]  # lower half, strongest first
    g2: List[UserChannel]  # upper half, weakest first
    median: Optional[UserChannel]


def sort_users(users: Iterable[UserChannel]) -> List[UserChannel]:
    return sorted(users, key=lambda u: (u.gamma, u.user_id))


def split_groups(users: Sequence[UserChannel]) -> Groups:
    """Split users into the two stacks A-UP walks, mid users on top of both.

    With an odd count the median user is set aside as an OMA user.
    """
    ordered = sort_users(users)
    median = None
    if len(ordered) % 2:
        median = ordered.pop(len(ordered) // 2)
    half = len(ordered) // 2
    return Groups(ordered[:half][::-1], ordered[half:], median)


def select_alpha(gamma_s, gamma_w, beta=0.0, policy: SplitPolicy = SplitPolicy()) -> PowerSplit:
    """Pick the strong-user power fraction strictly inside the admissible interval."""
    lo = float(bounds.alpha_lower_positivity(gamma_s, gamma_w))
    hi = float(bounds.alpha_upper(gamma_w))
    if not lo < hi:
        raise FeasibilityError(
            f"empty split interval ({lo:.6g}, {hi:.6g}) for gamma_s={gamma_s}, gamma_w={gamma_w}"
        )
    if policy.mode == "midpoint":
        return PowerSplit(0.5 * (lo + hi))
    n = int(policy.grid_points)
    grid = lo + (hi - lo) * np.arange(1, n + 1) / (n + 1)
    hat_s, hat_w = noma_sinr_pair(gamma_s, gamma_w, grid, beta)
    r_s, r_w = noma_rates(hat_s, hat_w)
    return PowerSplit(float(grid[int(np.argmax(r_s + r_w))]))


def _baseline_split(weak, strong, beta, policy):
    if weak.gamma <= 0:
        return PowerSplit(0.5 * (1.0 - BASELINE_CLAMP))
    try:
        return select_alpha(strong.gamma, weak.gamma, beta, policy)
    except FeasibilityError:
        return PowerSplit(float(bounds.alpha_upper(weak.gamma)) * (1.0 - BASELINE_CLAMP))


def _pairable(weak: UserChannel, strong: UserChannel) -> bool:
    if weak.gamma <= 0 or strong.gamma <= weak.gamma:
        return False
    return bounds.msd_satisfied(strong.gamma, weak.gamma)


def pair_aup(g1, g2, beta=0.0, policy: SplitPolicy = SplitPolicy(), extra_singles=()) -> PairPlan:
    """Adaptive user pairing over the two stacks from :func:`split_groups`.

    Each G1 user (strongest first) takes the first remaining G2 user that
    clears the MSD test; G2 users passed over stay on top for the next G1
    user. A G1 user that clears the test with nobody becomes an OMA user and
    takes the current top of G2 with it, so the outer pairs still form.
    """
    stack = list(g2)
    plan = PairPlan(singles=list(extra_singles))
    for weak in g1:
        for idx, strong in enumerate(stack):
            if _pairable(weak, strong):
                split = select_alpha(strong.gamma, weak.gamma, beta, policy)
                plan.pairs.append(Pair(weak, strong, split))
                del stack[idx]
                break
        else:
            plan.singles.append(weak)
            if stack:
                plan.singles.append(stack.pop(0))
    # unequal stacks only arise from hand-built inputs
    plan.singles.extend(stack)
    return plan


def aup(users, beta=0.0, policy: SplitPolicy = SplitPolicy()) -> PairPlan:
    g1, g2, median = split_groups(users)
    return pair_aup(g1, g2, beta, policy, extra_singles=[median] if median else ())


def _halves(users):
    ordered = sort_users(users)
    singles = []
    if len(ordered) % 2:
        singles.append(ordered.pop(len(ordered) // 2))
    return ordered, singles


def pair_near_far(users, beta=0.0, policy: SplitPolicy = SplitPolicy()) -> PairPlan:
    """Weakest with strongest, moving inward. No MSD gate."""
    ordered, singles = _halves(users)
    n = len(ordered)
    pairs = []
    for i in range(n // 2):
        w, s = ordered[i], ordered[n - 1 - i]
        pairs.append(Pair(w, s, _baseline_split(w, s, beta, policy)))
    return PairPlan(pairs, singles)


def pair_ucgd(users, beta=0.0, policy: SplitPolicy = SplitPolicy()) -> PairPlan:
    """i-th user of the lower half with the i-th of the upper half. No MSD gate."""
    ordered, singles = _halves(users)
    half = len(ordered) // 2
    pairs = []
    for i in range(half):
        w, s = ordered[i], ordered[i + half]
        pairs.append(Pair(w, s, _baseline_split(w, s, beta, policy)))
    return PairPlan(pairs, singles)


def oma_plan(users) -> PairPlan:
    return PairPlan([], sort_users(users))


def run_algorithm(name: str, users, beta=0.0, policy: SplitPolicy = SplitPolicy()) -> PairPlan:
    name = name.lower()
    if name == "aup":
        return aup(users, beta, policy)
    if name == "nf":
        return pair_near_far(users, beta, policy)
    if name == "ucgd":
        return pair_ucgd(users, beta, policy)
    if name == "oma":
        return oma_plan(users)
    raise ConfigError(f"unknown algorithm {name!r}; expected one of {ALGORITHMS}")


@dataclass
class RateReport:
    rate_model: str
    beta: float
    rates: dict  # user_id -> rate under the plan
    oma_rates: dict  # user_id -> rate the user would get under OMA
    total: float
    total_oma: float

    @property
    def n_users(self) -> int:
        return len(self.rates)


def evaluate_plan(
    plan: PairPlan,
    beta=0.0,
    rate_model: str = "lr",
    dr_table: DrTable = DEFAULT_DR_TABLE,
) -> RateReport:
    rate_model = rate_model.lower()
    if rate_model not in ("lr", "dr"):
        raise ConfigError(f"rate model must be 'lr' or 'dr', got {rate_model!r}")

    if rate_model == "lr":
        def single(g):
            return float(oma_rate(g))

        def paired(hat):
            return float(noma_rates(hat, 0.0)[0])
    else:
        def single(g):
            return float(dr_rate(g, dr_table, oma_flag=True))

        def paired(hat):
            return float(dr_rate(hat, dr_table, oma_flag=False))

    rates, oma = {}, {}
    for p in plan.pairs:
        if p.strong.gamma < p.weak.gamma:
            raise DomainError(f"pair {p.weak.user_id!r}/{p.strong.user_id!r} is misordered")
        hat_s, hat_w = noma_sinr_pair(p.strong.gamma, p.weak.gamma, p.split.alpha_s, beta)
        rates[p.strong.user_id] = paired(hat_s)
        rates[p.weak.user_id] = paired(hat_w)
        oma[p.strong.user_id] = single(p.strong.gamma)
        oma[p.weak.user_id] = single(p.weak.gamma)
    for u in plan.singles:
        rates[u.user_id] = oma[u.user_id] = single(u.gamma)
    return RateReport(
        rate_model=rate_model,
        beta=float(beta),
        rates=rates,
        oma_rates=oma,
        total=float(sum(rates.values())),
        total_oma=float(sum(oma.values())),
    )
