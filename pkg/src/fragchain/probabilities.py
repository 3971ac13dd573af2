"""Exact distributions of the chain fragmentation process.

Links 1..n break one per fragment per step (discrete chain) or independently
at exponential rates (continuous chain). The state is the set G of broken
links. Two evaluation routes exist for everything: closed-form/inclusion-
exclusion formulas driven by fragmentation trees, and brute-force transition
matrix or generator oracles; they are kept separate so they can be compared.

Discrete-chain quantities support an exact rational mode: pass rates as
Fraction values and every formula is evaluated in Fraction arithmetic with
no rounding anywhere. Float mode orders alternating sums by subset size and
accumulates with compensated (Neumaier) summation.

Key quantity: for a removed set S inside an interval I, lambda^I_S is the
probability that one step changes nothing, the product over the fragments J
of I left by S of (1 - rho(J)), with rho(empty) = 0. The lambda^L_G are also
the eigenvalues of the one-step transition matrix, which is triangular when
states are sorted by size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetError, ConsistencyError
from .fragments import (DEFAULT_BUDGET, Fragment, FragTree, catalan,
                        chain_fragments, enumerate_fragmentation_trees,
                        fragments_of)

MATRIX_MAX_N = 12
GENERATOR_MAX_N = 10


class RateSpec:
    """Validated per-link rates.

    mode "discrete": rho are per-step breaking probabilities, all strictly
    positive with total at most 1 (equality allowed). mode "continuous":
    rho are exponential rates, strictly positive. Rates given as Fraction
    (or int) values switch the discrete formulas into exact arithmetic.
    """

    def __init__(self, mode, rho):
        if mode not in ("discrete", "continuous"):
            raise ValueError(f"unknown mode {mode!r}")
        rho = {int(k): v for k, v in rho.items()}
        n = len(rho)
        if n == 0 or set(rho) != set(range(1, n + 1)):
            raise ValueError("rates must cover links 1..n exactly")
        self.exact = all(isinstance(v, (int, Fraction)) for v in rho.values())
        for k, v in rho.items():
            if not v > 0:
                raise ValueError(f"rate of link {k} must be strictly positive")
        if mode == "discrete":
            total = sum(rho[a] for a in range(1, n + 1))
            limit = 1 if self.exact else 1 + 1e-12
            if total > limit:
                raise ValueError("discrete rates must sum to at most 1")
        self.mode = mode
        self.n = n
        self._rho = rho

    def rho(self, alpha):
        return self._rho[alpha]

    def rho_sum(self, links):
        """Sum of rates over links, accumulated in ascending link order."""
        s = 0
        for a in sorted(links):
            s += self._rho[a]
        return s

    @property
    def one(self):
        return Fraction(1) if self.exact else 1.0

    def as_float(self):
        if not self.exact and all(isinstance(v, float) for v in self._rho.values()):
            return self
        return RateSpec(self.mode, {k: float(v) for k, v in self._rho.items()})

    def to_dict(self):
        return {"mode": self.mode, "n": self.n,
                "rho": {str(k): self._rho[k] for k in range(1, self.n + 1)}}

    def __repr__(self):
        return f"RateSpec({self.mode!r}, n={self.n}, exact={self.exact})"


def random_rates(n, rng, mode="discrete", total=1.0, exact=False):
    """Strictly positive random rates; discrete ones are normalized to the
    given total. Exact mode draws small integer numerators so Fraction
    arithmetic downstream stays fast."""
    if mode == "continuous":
        return RateSpec(mode, {a: 0.2 + 1.8 * rng.random() for a in range(1, n + 1)})
    nums = [rng.randint(1, 9) for _ in range(n)]
    s = sum(nums)
    if exact:
        tot = Fraction(total) if not isinstance(total, float) else Fraction(str(total))
        return RateSpec(mode, {a + 1: Fraction(nums[a]) * tot / s for a in range(n)})
    return RateSpec(mode, {a + 1: nums[a] * float(total) / s for a in range(n)})


def neumaier_sum(terms):
    """Compensated float summation; exact-mode callers sum directly."""
    s = 0.0
    c = 0.0
    for x in terms:
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
    return s + c


# -- lambda machinery ------------------------------------------------------


def lam_interval(rates, removed, lo, hi):
    """lambda^{[lo,hi]}_removed: product over the nonempty fragments J left
    by the sorted removed links of (1 - rho(J))."""
    acc = rates.one
    for frag in chain_fragments(lo, hi, removed):
        if not frag.empty:
            acc = acc * (1 - rates.rho_sum(frag))
    return acc


def lambda_value(rates, G, interval=None):
    """Public lambda: no-change probability of one step from state G inside
    the interval (defaults to the whole chain). Discrete mode only."""
    if rates.mode != "discrete":
        raise ValueError("lambda is a discrete-chain quantity")
    if interval is None:
        lo, hi = 1, rates.n
    elif isinstance(interval, Fragment):
        lo, hi = interval.lo, interval.hi
    else:
        lo, hi = interval
    g = sorted(G)
    if any(not lo <= a <= hi for a in g):
        raise ValueError("state must lie inside the interval")
    return lam_interval(rates, g, lo, hi)


def lambda_diff(rates, removed, lo, hi, method="auto"):
    """lambda^I_removed - lambda^I_empty by two routes.

    "direct" subtracts the two products. "expanded" cancels the shared bulk
    symbolically: sum of removed rates plus the alternating elementary
    symmetric sums of the fragment rates of order >= 2; preferred in float
    mode since it never subtracts nearby numbers. "auto" picks expanded for
    floats and direct for exact rates. The value is strictly positive for
    nonempty removed sets under valid rates; a nonpositive result raises
    ConsistencyError.
    """
    gaps = [rates.rho_sum(f) for f in chain_fragments(lo, hi, removed)
            if not f.empty]
    if method == "auto":
        method = "direct" if rates.exact else "expanded"
    if method == "direct":
        prod = rates.one
        for g in gaps:
            prod = prod * (1 - g)
        whole = rates.rho_sum(range(lo, hi + 1))
        val = prod - (1 - whole)
    elif method == "expanded":
        # elementary symmetric sums e_k of the gap rates
        coeffs = [rates.one]
        for g in gaps:
            coeffs = [coeffs[0]] + [coeffs[k] + g * coeffs[k - 1]
                                    for k in range(1, len(coeffs))] + [g * coeffs[-1]]
        val = rates.rho_sum(removed)
        sign = 1
        for k in range(2, len(coeffs)):
            val = val + sign * coeffs[k]
            sign = -sign
    else:
        raise ValueError(f"unknown method {method!r}")
    if removed and not val > 0:
        raise ConsistencyError(
            f"nonpositive waiting-rate denominator {val!r} on [{lo},{hi}]")
    return val


# -- closed forms ----------------------------------------------------------


def dist_continuous(G, rates, t):
    """P(state = G at time t) for the continuous chain, closed form."""
    if rates.mode != "continuous":
        raise ValueError("dist_continuous needs continuous rates")
    _check_time(t, "continuous")
    g = set(G)
    if not g <= set(range(1, rates.n + 1)):
        raise ValueError("links must lie in 1..n")
    p = 1.0
    for a in range(1, rates.n + 1):
        r = float(rates.rho(a))
        p *= (1.0 - math.exp(-r * t)) if a in g else math.exp(-r * t)
    return p


def _check_time(t, mode):
    if mode == "discrete":
        if isinstance(t, bool) or not isinstance(t, int) or t < 0:
            raise ValueError("discrete time must be a nonnegative integer")
    else:
        t = float(t)
        if not (t >= 0 and math.isfinite(t)):
            raise ValueError("time must be nonnegative and finite")


def _edge_submasks_by_size(tree):
    bits = [tree._bit[e] for e in tree.edges]
    k = len(bits)
    for combo in sorted(range(1 << k), key=lambda m: (m.bit_count(), m)):
        hmask = 0
        m = combo
        while m:
            low = m & -m
            hmask |= 1 << bits[low.bit_length() - 1]
            m ^= low
        yield combo.bit_count(), hmask


def _clamp_prob(raw, exact):
    if exact:
        if not 0 <= raw <= 1:
            raise ConsistencyError(f"exact probability {raw!r} outside [0, 1]")
        return raw
    if raw < -1e-10 or raw > 1 + 1e-10:
        raise ConsistencyError(f"probability {raw!r} outside [0, 1] past tolerance")
    return min(1.0, max(0.0, raw))


def tree_prob_continuous(tree, rates, t):
    """P(the continuous chain matches this fragmentation tree at time t).

    Inclusion-exclusion over the cut sets H of the tree's edges: each term is
    the chance that everything inside the stump component of H has broken,
    nothing outside has, weighted per vertex by rho(alpha) over the total
    rate of alpha's component. Summed smallest-H first with compensated
    accumulation, then verified and clamped to [0, 1].
    """
    if rates.mode != "continuous":
        raise ValueError("tree_prob_continuous needs continuous rates")
    _check_time(t, "continuous")
    t = float(t)
    n = rates.n
    if tree.n != n:
        raise ValueError("tree and rates disagree on n")
    total = rates.rho_sum(range(1, n + 1))
    if not tree.G:
        return math.exp(-float(total) * t)
    rho_f = {a: float(rates.rho(a)) for a in tree.G}
    msum_cache = {}

    def msum(mask):
        if mask not in msum_cache:
            msum_cache[mask] = math.fsum(rho_f[a] for a in tree._mask_links(mask))
        return msum_cache[mask]

    total_f = float(total)
    terms = []
    for size, hmask in _edge_submasks_by_size(tree):
        comp = tree.component_masks(hmask)
        stump_rho = msum(comp[tree.root])
        term = (1.0 - math.exp(-stump_rho * t)) * math.exp(-(total_f - stump_rho) * t)
        for a in tree.G:
            term *= rho_f[a] / msum(comp[a])
        terms.append(-term if size & 1 else term)
    return _clamp_prob(neumaier_sum(terms), False)


def tree_prob_discrete(tree, rates, t, method="auto"):
    """P(the discrete chain matches this fragmentation tree at time t).

    Inclusion-exclusion over cut sets H: terms combine the no-change
    eigenvalues lambda^L of the stump state with per-vertex waiting weights
    rho(alpha) / (lambda^{I_alpha}_{G_alpha(H)} - lambda^{I_alpha}_empty).
    Exact in rational mode; compensated float sum otherwise. `method`
    selects the denominator route (see lambda_diff).
    """
    if rates.mode != "discrete":
        raise ValueError("tree_prob_discrete needs discrete rates")
    _check_time(t, "discrete")
    n = rates.n
    if tree.n != n:
        raise ValueError("tree and rates disagree on n")
    if not tree.G:
        return lam_interval(rates, [], 1, n) ** t
    pow0 = lam_interval(rates, [], 1, n) ** t
    lam_pow = {}
    denom = {}
    terms = []
    for size, hmask in _edge_submasks_by_size(tree):
        comp = tree.component_masks(hmask)
        stump = comp[tree.root]
        if stump not in lam_pow:
            lam_pow[stump] = lam_interval(
                rates, sorted(tree._mask_links(stump)), 1, n) ** t
        factor = rates.one
        for a in tree.G:
            key = (a, comp[a])
            if key not in denom:
                denom[key] = lambda_diff(
                    rates, sorted(tree._mask_links(comp[a])),
                    tree.lo[a], tree.hi[a], method)
            factor = factor * rates.rho(a) / denom[key]
        term = (lam_pow[stump] - pow0) * factor
        terms.append(-term if size & 1 else term)
    raw = sum(terms) if rates.exact else neumaier_sum(terms)
    return _clamp_prob(raw, rates.exact)


def dist_discrete(G, rates, t, budget=DEFAULT_BUDGET, method="auto"):
    """P(state = G at time t) for the discrete chain: the sum of the matching
    probabilities of all fragmentation trees of G."""
    if rates.mode != "discrete":
        raise ValueError("dist_discrete needs discrete rates")
    _check_time(t, "discrete")
    trees = enumerate_fragmentation_trees(G, rates.n, budget)
    vals = [tree_prob_discrete(tr, rates, t, method) for tr in trees]
    if rates.exact:
        return sum(vals, Fraction(0))
    return math.fsum(vals)


def dist_discrete_endpoints(G, rates, t):
    """P(state = G at time t) when G only touches the chain ends.

    For G inside {1, n} the events {state contained in H} have probability
    (lambda^L_H)^t, and inclusion-exclusion gives
    P = sum over H of (-1)^{|G|-|H|} (lambda^L_H)^t. Rejects other G.
    """
    if rates.mode != "discrete":
        raise ValueError("dist_discrete_endpoints needs discrete rates")
    _check_time(t, "discrete")
    g = tuple(sorted(set(G)))
    ends = {1, rates.n}
    if not set(g) <= ends:
        raise ValueError("endpoint formula needs G inside {1, n}")
    total = Fraction(0) if rates.exact else 0.0
    k = len(g)
    for m in range(1 << k):
        h = [g[i] for i in range(k) if m >> i & 1]
        sign = -1 if (k - len(h)) & 1 else 1
        total = total + sign * lam_interval(rates, h, 1, rates.n) ** t
    return total if rates.exact else _clamp_prob(total, False)


# -- distribution tables ----------------------------------------------------


@dataclass
class DistTable:
    """Probabilities indexed by state, keys being sorted link tuples."""

    mode: str
    time: object
    entries: dict

    def __getitem__(self, G):
        return self.entries[tuple(sorted(G))]

    def items(self):
        return sorted(self.entries.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def total(self):
        vals = list(self.entries.values())
        if any(isinstance(v, Fraction) for v in vals):
            return sum(vals, Fraction(0))
        return math.fsum(vals)


def dist_discrete_all(rates, t, budget=DEFAULT_BUDGET, method="auto"):
    """Full DistTable over every subset of 1..n by the tree formula."""
    if rates.n > 20:
        raise ValueError("full tables are limited to n <= 20")
    entries = {}
    for mask in range(1 << rates.n):
        G = tuple(a + 1 for a in range(rates.n) if mask >> a & 1)
        entries[G] = dist_discrete(G, rates, t, budget, method)
    return DistTable("discrete", t, entries)


def dist_continuous_all(rates, t):
    """Full DistTable over every subset of 1..n by the closed form."""
    if rates.n > 20:
        raise ValueError("full tables are limited to n <= 20")
    entries = {}
    for mask in range(1 << rates.n):
        G = tuple(a + 1 for a in range(rates.n) if mask >> a & 1)
        entries[G] = dist_continuous(G, rates, t)
    return DistTable("continuous", t, entries)


# -- brute-force oracles -----------------------------------------------------


def _mask_links_n(mask):
    out = []
    a = 1
    while mask:
        if mask & 1:
            out.append(a)
        mask >>= 1
        a += 1
    return out


def transition_rows(rates):
    """One-step transition matrix of the discrete chain as sparse dict rows
    keyed by state bitmasks (bit a-1 = link a broken).

    Built straight from the definition: fragments break independently, each
    choosing one of its links (probability rho(alpha)) or nothing. Row
    construction multiplies factors in fragment order, so diagonal entries
    are bit-identical to lam_interval in float mode and equal in exact mode.
    """
    if rates.mode != "discrete":
        raise ValueError("transition_rows needs discrete rates")
    n = rates.n
    if n > MATRIX_MAX_N:
        raise ValueError(f"transition matrix limited to n <= {MATRIX_MAX_N}")
    one = rates.one
    rows = {}
    for state in range(1 << n):
        acc = [(0, one)]
        for frag in chain_fragments(1, n, _mask_links_n(state)):
            if frag.empty:
                continue
            choices = [(0, 1 - rates.rho_sum(frag))]
            choices += [(1 << (a - 1), rates.rho(a)) for a in frag]
            acc = [(m | bm, p * bp) for m, p in acc for bm, bp in choices]
        rows[state] = {state | m: p for m, p in acc}
    return rows


def transition_matrix_dist(rates, t):
    """DistTable of the discrete chain at time t from the transition matrix:
    the row of the empty state of the t-th power. Exact in rational mode,
    scipy sparse in float mode. Independent oracle for dist_discrete."""
    _check_time(t, "discrete")
    rows = transition_rows(rates)
    n = rates.n
    if rates.exact:
        v = {0: Fraction(1)}
        for _ in range(t):
            nxt = {}
            for s, p in v.items():
                for s2, q in rows[s].items():
                    nxt[s2] = nxt.get(s2, Fraction(0)) + p * q
            v = nxt
        entries = {tuple(_mask_links_n(m)): v.get(m, Fraction(0))
                   for m in range(1 << n)}
        return DistTable("discrete", t, entries)
    import numpy as np
    from scipy.sparse import csr_matrix
    data, ri, ci = [], [], []
    for s, row in rows.items():
        for s2, p in row.items():
            ri.append(s)
            ci.append(s2)
            data.append(p)
    P = csr_matrix((data, (ri, ci)), shape=(1 << n, 1 << n))
    v = np.zeros(1 << n)
    v[0] = 1.0
    for _ in range(t):
        v = v @ P
    entries = {tuple(_mask_links_n(m)): float(v[m]) for m in range(1 << n)}
    return DistTable("discrete", t, entries)


def generator_matrix_dist(rates, t):
    """DistTable of the continuous chain at time t via the exponential of the
    generator. Independent oracle for dist_continuous."""
    if rates.mode != "continuous":
        raise ValueError("generator_matrix_dist needs continuous rates")
    _check_time(t, "continuous")
    n = rates.n
    if n > GENERATOR_MAX_N:
        raise ValueError(f"generator matrix limited to n <= {GENERATOR_MAX_N}")
    import numpy as np
    from scipy.linalg import expm
    size = 1 << n
    Q = np.zeros((size, size))
    for s in range(size):
        for a in range(1, n + 1):
            bit = 1 << (a - 1)
            if not s & bit:
                Q[s, s | bit] = float(rates.rho(a))
        Q[s, s] = -Q[s].sum()
    P = expm(Q * float(t))
    entries = {tuple(_mask_links_n(m)): float(P[0, m]) for m in range(size)}
    return DistTable("continuous", float(t), entries)


def check_transition_spectrum(rates):
    """Structural report on the one-step matrix: is it triangular when states
    are sorted by size, and does the diagonal equal the lambda eigenvalues
    exactly (same-code-path floats, or exact Fractions)."""
    rows = transition_rows(rates)
    order = {s: i for i, s in enumerate(
        sorted(rows, key=lambda m: (m.bit_count(), m)))}
    triangular = True
    for s, row in rows.items():
        for s2 in row:
            if order[s2] < order[s]:
                triangular = False
    diag_exact = True
    max_err = 0
    for s in rows:
        lam = lam_interval(rates, _mask_links_n(s), 1, rates.n)
        d = rows[s].get(s, 0)
        if d != lam:
            diag_exact = False
            max_err = max(max_err, abs(float(d) - float(lam)))
    return {"states": len(rows), "triangular": triangular,
            "diagonal_exact": diag_exact, "max_diag_error": float(max_err)}
