"""Uniform random tree generation and automorphism-decomposition statistics.

Trees are drawn by the recursive method on the counting recurrence

    (n - 1) t_n = sum over m*d <= n-1 of t_(n-m*d) * m * t_m,

realized as: pick a term with probability proportional to its value, sample a
head of size n - m*d and one subtree of size m, then attach d identical copies
of that subtree to the head's root.  Each tree of size n has probability
exactly 1/t_n; the walk is over big integers, so nothing is approximated.

A decomposition sample then draws, per fixed node and per isomorphism class of
its children, a uniform permutation of the identical copies.  Fixed copies are
recursed into; moved copies contribute their whole subtrees to the forest
attached at that node.  Internal symmetries of moved subtrees never change any
of the reported statistics, so they are not drawn.
"""

from __future__ import annotations

import hashlib
import math
import random
import sys
from collections import Counter
from dataclasses import asdict, dataclass, field

from .families import divisor_weight_table, polya_int_table
from .oracle import LEAF, CanonicalTree, make_tree

MAX_SIZE = 10_000
MAX_SAMPLES = 100_000

SEED_RULE = "int.from_bytes(sha256(f'{master}:{label}').digest()[:8], 'big')"


def derived_seed(master_seed: int | str, label: int | str) -> int:
    digest = hashlib.sha256(f"{master_seed}:{label}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _divisors_desc(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return large[::-1] + small[::-1]


class TreeSampler:
    """Exact uniform sampler over the shared big-integer count tables."""

    def __init__(self) -> None:
        self._t: list[int] = [0, 1]  # t[n] trees of size n
        self._s: list[int] = [0, 1]  # s[k] = sum over d|k of d*t[d]
        # peeling recursion is ~sqrt(n) deep on average but heavy-tailed
        sys.setrecursionlimit(max(sys.getrecursionlimit(), 50_000))

    def extend(self, n: int) -> None:
        if len(self._t) <= n:
            self._t = polya_int_table(n)
            self._s = divisor_weight_table(n)

    def count(self, n: int) -> int:
        self.extend(n)
        return self._t[n]

    def sample(self, n: int, rng: random.Random) -> CanonicalTree:
        if n < 1:
            raise ValueError("tree size must be positive")
        if n > MAX_SIZE:
            raise ValueError(f"size budget exceeded: {n} > {MAX_SIZE}")
        self.extend(n)
        return self._sample(n, rng)

    def _sample(self, n: int, rng: random.Random) -> CanonicalTree:
        if n == 1:
            return LEAF
        t, s = self._t, self._s
        r = rng.randrange((n - 1) * t[n])
        # small heads carry most of the mass, so walk k = n - head downward
        for k in range(n - 1, 0, -1):
            w = t[n - k] * s[k]
            if r < w:
                break
            r -= w
        # r is uniform below t[n-k]*s[k]; its residue picks the repeated size
        b = r % s[k]
        for m in _divisors_desc(k):
            w = m * t[m]
            if b < w:
                break
            b -= w
        head = self._sample(n - k, rng)
        rep = self._sample(m, rng)
        kids = [c for c, mult in head.children for _ in range(mult)]
        kids.extend([rep] * (k // m))
        return make_tree(kids)


DEFAULT_SAMPLER = TreeSampler()


def sample_polya_tree(n: int, rng: random.Random) -> CanonicalTree:
    """One tree of size n, each of the t_n trees with probability 1/t_n."""
    return DEFAULT_SAMPLER.sample(n, rng)


# ---------------------------------------------------------------------------
# decomposition of (tree, uniform automorphism) into fixed-point statistics


@dataclass(frozen=True)
class DecompositionSample:
    n: int
    c_size: int
    l_max: int
    y_count: int
    forest_size_histogram: dict[int, int] = field(compare=False)
    seed: int | None = None

    def validate(self) -> None:
        hist = self.forest_size_histogram
        if self.c_size < 1:
            raise ValueError("the root is always fixed")
        if self.c_size + sum(m * c for m, c in hist.items()) != self.n:
            raise ValueError("fixed nodes plus forest nodes must cover the tree")
        if sum(hist.values()) != self.c_size:
            raise ValueError("one forest slot per fixed node")


def sample_decomposition(tree: CanonicalTree, rng: random.Random,
                         seed: int | None = None) -> DecompositionSample:
    """Statistics of the fixed-point tree of a uniform automorphism.

    Per fixed node and child class with multiplicity m, a uniform permutation
    of the m copies is drawn; its fixed copies stay in the fixed-point tree
    and every moved copy becomes one component of the forest at that node.
    """
    c_size = 0
    y_count = 0
    l_max = 0
    hist: Counter[int] = Counter()
    stack = [tree]
    while stack:
        node = stack.pop()
        c_size += 1
        forest_nodes = 0
        for child, mult in node.children:
            if mult == 1:
                stack.append(child)
                continue
            perm = list(range(mult))
            rng.shuffle(perm)
            fixed = sum(1 for i, p in enumerate(perm) if i == p)
            stack.extend([child] * fixed)
            moved = mult - fixed
            forest_nodes += moved * child.size
            y_count += moved
        hist[forest_nodes] += 1
        if forest_nodes > l_max:
            l_max = forest_nodes
    sample = DecompositionSample(tree.size, c_size, l_max, y_count,
                                 dict(hist), seed)
    sample.validate()
    return sample


# ---------------------------------------------------------------------------
# seeded experiments


@dataclass(frozen=True)
class StatsReport:
    n: int
    num_samples: int
    master_seed: str
    seed_rule: str
    first_seeds: tuple[int, ...]
    mean_c_size: float
    var_c_size: float
    half_width_c_size: float
    mean_l_max: float
    var_l_max: float
    half_width_l_max: float
    mean_y_count: float
    var_y_count: float
    half_width_y_count: float
    forest_size_distribution: dict[int, float] = field(compare=False)

    def to_dict(self) -> dict:
        return asdict(self)


def _mean_var(values: list[int]) -> tuple[float, float, float]:
    n = len(values)
    total = sum(values)
    mean = total / n
    if n == 1:
        return mean, 0.0, 0.0
    sq = sum(v * v for v in values)
    var = (sq - total * total / n) / (n - 1)
    return mean, var, 1.96 * math.sqrt(var / n)


def run_experiment(n: int, samples: int,
                   master_seed: int | str = 0) -> StatsReport:
    """Aggregate decomposition samples, bit-for-bit reproducible by seed."""
    if n > MAX_SIZE or samples > MAX_SAMPLES:
        raise ValueError(
            f"budget exceeded: n <= {MAX_SIZE}, samples <= {MAX_SAMPLES}")
    if samples < 1:
        raise ValueError("need at least one sample")
    seeds = []
    c_vals, l_vals, y_vals = [], [], []
    hist: Counter[int] = Counter()
    for i in range(samples):
        seed = derived_seed(master_seed, i)
        if i < 4:
            seeds.append(seed)
        rng = random.Random(seed)
        tree = sample_polya_tree(n, rng)
        dec = sample_decomposition(tree, rng, seed=seed)
        c_vals.append(dec.c_size)
        l_vals.append(dec.l_max)
        y_vals.append(dec.y_count)
        hist.update(dec.forest_size_histogram)
    slots = sum(hist.values())
    dist = {m: hist[m] / slots for m in sorted(hist)}
    mc, vc, hc = _mean_var(c_vals)
    ml, vl, hl = _mean_var(l_vals)
    my, vy, hy = _mean_var(y_vals)
    return StatsReport(n, samples, str(master_seed), SEED_RULE, tuple(seeds),
                       mc, vc, hc, ml, vl, hl, my, vy, hy, dist)


def lmax_check(n_values: list[int], samples: int, s: float = 0.5,
               master_seed: int | str = 0,
               exact_mean: bool = False) -> dict:
    """Largest-forest-size growth report.

    For each n, reports the fraction of samples whose l_max falls in
    (1 +- (log n)^-s) * (-2 log n / log rho) and the empirical mean against
    the second-order location (2 log n - 3 log log n)/|log rho| implied by
    the distribution shape P(L <= m) ~ exp(-c n rho^(m/2) m^(-3/2)).
    """
    if not 0 < s < 1:
        raise ValueError("s must lie in (0, 1)")
    from .asymptotics import lmax_exact_mean, solve_polya_singularity

    rho = solve_polya_singularity().rho
    log_rho = math.log(rho)
    rows = []
    for n in n_values:
        l_vals = []
        for i in range(samples):
            seed = derived_seed(master_seed, f"{n}:{i}")
            rng = random.Random(seed)
            tree = sample_polya_tree(n, rng)
            l_vals.append(sample_decomposition(tree, rng, seed=seed).l_max)
        center = -2.0 * math.log(n) / log_rho
        eps = math.log(n) ** (-s)
        lo, hi = (1.0 - eps) * center, (1.0 + eps) * center
        mean = sum(l_vals) / len(l_vals)
        row = {
            "n": n,
            "samples": samples,
            "interval": [lo, hi],
            "fraction_in_interval":
                sum(lo <= v <= hi for v in l_vals) / len(l_vals),
            "mean_l_max": mean,
            "mean_over_log_n": mean / math.log(n),
            "leading_ratio": -2.0 / log_rho,
            "second_order_location":
                (2.0 * math.log(n) - 3.0 * math.log(math.log(n))) / -log_rho,
        }
        if exact_mean:
            row["exact_mean_l_max"] = lmax_exact_mean(n, rho=rho)
        rows.append(row)
    return {"s": s, "master_seed": str(master_seed), "seed_rule": SEED_RULE,
            "rows": rows}
