"""Independent reference computations used by the tests.

Nothing here calls the code paths it is used to check: rates are recomputed
with ``math``, pairability uses a closed form of the MSD test, and optimal
plans come from exhaustive enumeration.
"""

import math


def log_rates(gs, gw, alpha, beta):
    hat_s = alpha * gs / (1 + beta * (1 - alpha) * gs)
    hat_w = (1 - alpha) * gw / (1 + alpha * gw)
    return math.log2(1 + hat_s), math.log2(1 + hat_w)


def oma(g):
    return 0.5 * math.log2(1 + g)


def pairable_closed_form(gs, gw):
    """MSD test rewritten as sqrt(1+gs) > sqrt(1+gw) + 1 - 1/sqrt(1+gw)."""
    if not (gw > 0 and gs > gw):
        return False
    rw = math.sqrt(1 + gw)
    return math.sqrt(1 + gs) > rw + 1 - 1 / rw


def matchings(items, allowed):
    """Every partial matching of ``items`` using only pairs with ``allowed(a, b)``."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for m in matchings(rest, allowed):
        yield m
    for k, other in enumerate(rest):
        if allowed(first, other):
            for m in matchings(rest[:k] + rest[k + 1:], allowed):
                yield [(first, other)] + m


def best_plan_total(gammas, beta, split_of):
    """Best total rate over MSD-respecting partial matchings (rest served by OMA).

    ``split_of(gs, gw)`` returns the power fraction for a pair.
    """
    idx = list(range(len(gammas)))

    def ordered(a, b):
        return (b, a) if gammas[a] < gammas[b] else (a, b)

    def allowed(a, b):
        s, w = ordered(a, b)
        return pairable_closed_form(gammas[s], gammas[w])

    gain = {}
    for a in idx:
        for b in idx:
            if a < b and allowed(a, b):
                s, w = ordered(a, b)
                r_s, r_w = log_rates(gammas[s], gammas[w], split_of(gammas[s], gammas[w]), beta)
                gain[(a, b)] = r_s + r_w - oma(gammas[s]) - oma(gammas[w])
    base = sum(oma(g) for g in gammas)
    best, best_m = base, []
    for m in matchings(idx, allowed):
        total = base + sum(gain[p] for p in m)
        if total > best:
            best, best_m = total, m
    return best, best_m


def first_crossing(f, lo, hi, steps):
    """Grid points around the first sign change of ``f`` on [lo, hi]."""
    prev_x, prev = lo, f(lo)
    for i in range(1, steps + 1):
        x = lo + (hi - lo) * i / steps
        cur = f(x)
        if (prev > 0) != (cur > 0):
            return prev_x, x
        prev_x, prev = x, cur
    return None
