"""Enumeration-vs-series equivalence matrix.

Every check recomputes one quantity along two structurally independent
routes (explicit tree/forest enumeration vs coefficient recurrences, or a
closed form vs brute-force automorphism enumeration) and demands exact
rational equality.  A single report row summarizes each equivalence over its
size range; `oracle_max` caps every range so the whole matrix stays cheap.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

from .families import (binary_int_table, cayley_coeffs, ctree_polynomials,
                       dforest_coeffs, hierarchy_int_table,
                       identity_tree_coeffs, pointed_coeffs, polya_int_table)
from .oracle import (aut_order, ctree_weight, cycle_type, enumerate_dforests,
                     enumerate_trees, fixed_point_polynomial, forest_weight,
                     is_identity_tree, naive_automorphisms,
                     naive_forest_weight, naive_signed_forest_weight,
                     plane_embeddings, pointed_tree_count,
                     signed_fixed_point_polynomial, signed_forest_weight,
                     _labeled_children)
from .series import UPoly


@dataclass(frozen=True)
class CheckRow:
    name: str
    max_n: int
    passed: bool
    detail: str

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class VerificationReport:
    oracle_max: int
    rows: tuple[CheckRow, ...]

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def to_dict(self) -> dict:
        return {"oracle_max": self.oracle_max,
                "all_passed": self.all_passed,
                "rows": [r.to_dict() for r in self.rows]}


def _row(name: str, max_n: int, failures: list[str]) -> CheckRow:
    if failures:
        return CheckRow(name, max_n, False, "; ".join(failures[:4]))
    return CheckRow(name, max_n, True, "exact match")


def _tree_census(max_n: int) -> CheckRow:
    t = polya_int_table(max_n)
    bad = [f"n={n}: {len(enumerate_trees(n))} != {t[n]}"
           for n in range(1, max_n + 1)
           if len(enumerate_trees(n)) != t[n]]
    return _row("tree census = t_n", max_n, bad)


def _outdegree_census(max_n: int) -> CheckRow:
    from .families import OmegaSet
    hier = hierarchy_int_table(max_n)
    bini = binary_int_table(max_n)
    omega_h = OmegaSet.parse("all-except:1")
    omega_b = OmegaSet.parse("0,2")
    bad = []
    for n in range(1, max_n + 1):
        ch = len(enumerate_trees(n, omega_h))
        cb = len(enumerate_trees(n, omega_b))
        if ch != hier[n]:
            bad.append(f"hierarchy n={n}: {ch} != {hier[n]}")
        if cb != bini[n]:
            bad.append(f"binary n={n}: {cb} != {bini[n]}")
    return _row("outdegree-filtered census", max_n, bad)


def _identity_census(max_n: int) -> CheckRow:
    r, _, _ = identity_tree_coeffs(max_n)
    bad = []
    for n in range(1, max_n + 1):
        c = sum(1 for t in enumerate_trees(n) if is_identity_tree(t))
        if c != r[n]:
            bad.append(f"n={n}: {c} != {r[n]}")
    return _row("rigid-tree census = r_n", max_n, bad)


def _aut_order_naive(max_n: int) -> CheckRow:
    bad = []
    for n in range(1, max_n + 1):
        for t in enumerate_trees(n):
            count = sum(1 for _ in naive_automorphisms(_labeled_children(t)))
            if count != aut_order(t):
                bad.append(f"{t.encoding}: {count} != {aut_order(t)}")
    return _row("aut order = brute-force count", max_n, bad)


def _fixed_point_rows(max_n: int) -> CheckRow:
    rows = ctree_polynomials(max_n)
    bad = []
    for n in range(1, max_n + 1):
        total = UPoly.zero()
        for t in enumerate_trees(n):
            total = total + fixed_point_polynomial(t)
        if total != rows.row(n):
            bad.append(f"n={n}")
    return _row("sum of t_T(u) = row polynomial", max_n, bad)


def _fixed_point_basics(max_n: int) -> CheckRow:
    bad = []
    for n in range(1, max_n + 1):
        for t in enumerate_trees(n):
            poly = fixed_point_polynomial(t)
            if poly.eval(1) != 1:
                bad.append(f"{t.encoding}: t_T(1) != 1")
            elif any(c < 0 for c in poly.coeffs):
                bad.append(f"{t.encoding}: negative probability")
            elif poly.derivative().eval(1) != pointed_tree_count(t):
                bad.append(f"{t.encoding}: mean != orbit count")
    return _row("t_T(u) is a probability law with mean |P(T)|", max_n, bad)


def _pointed_total(max_n: int) -> CheckRow:
    series = pointed_coeffs(max_n)
    bad = []
    for n in range(1, max_n + 1):
        total = sum(pointed_tree_count(t) for t in enumerate_trees(n))
        if total != series[n]:
            bad.append(f"n={n}: {total} != {series[n]}")
    return _row("sum of |P(T)| = [z^n] T/(1-T)", max_n, bad)


def _plane_total(max_n: int) -> CheckRow:
    bad = []
    for n in range(1, max_n + 1):
        total = sum(plane_embeddings(t) for t in enumerate_trees(n))
        catalan = math.comb(2 * (n - 1), n - 1) // n
        if total != catalan:
            bad.append(f"n={n}: {total} != {catalan}")
    return _row("plane embeddings sum to Catalan", max_n, bad)


def _ctree_weight_total(max_n: int) -> CheckRow:
    cayley = cayley_coeffs(max_n)
    bad = []
    for n in range(1, max_n + 1):
        total = sum(ctree_weight(t) for t in enumerate_trees(n))
        if total != cayley[n]:
            bad.append(f"n={n}: {total} != {cayley[n]}")
    return _row("sum of w(T) = n^(n-1)/n!", max_n, bad)


def _forest_weight_total(max_n: int) -> CheckRow:
    d = dforest_coeffs(max_n)
    bad = []
    for n in range(1, max_n + 1):
        total = sum((forest_weight(f) for f in enumerate_dforests(n)),
                    Fraction(0))
        if total != d[n]:
            bad.append(f"n={n}: {total} != {d[n]}")
    return _row("sum of forest weights = d_n", max_n, bad)


def _forest_weight_naive(max_n: int) -> CheckRow:
    bad = []
    for n in range(1, max_n + 1):
        for f in enumerate_dforests(n):
            if forest_weight(f) != naive_forest_weight(f):
                bad.append(f"n={n}: {f}")
    return _row("forest weight = fixed-point-free fraction", max_n, bad)


def _signed_weight_total(max_n: int) -> CheckRow:
    _, dstar, _ = identity_tree_coeffs(max_n)
    bad = []
    for n in range(1, max_n + 1):
        total = sum((signed_forest_weight(f)
                     for f in enumerate_dforests(n, identity_only=True)),
                    Fraction(0))
        if total != dstar[n]:
            bad.append(f"n={n}: {total} != {dstar[n]}")
    return _row("sum of signed weights = d*_n", max_n, bad)


def _signed_weight_naive(max_n: int) -> CheckRow:
    bad = []
    for n in range(1, max_n + 1):
        for f in enumerate_dforests(n, identity_only=True):
            if signed_forest_weight(f) != naive_signed_forest_weight(f):
                bad.append(f"n={n}: {f}")
    return _row("signed weight = signed enumeration", max_n, bad)


def _sign_balance_naive(max_n: int) -> CheckRow:
    # r_T(1) is 1 when every automorphism permutes nodes evenly, else 0;
    # rigid trees are the special case with only the identity automorphism
    bad = []
    for n in range(1, max_n + 1):
        for t in enumerate_trees(n):
            all_even = True
            for perm in naive_automorphisms(_labeled_children(t)):
                evens = sum(c for length, c in cycle_type(perm).items()
                            if length % 2 == 0)
                if evens % 2 == 1:
                    all_even = False
                    break
            expected = 1 if all_even else 0
            got = signed_fixed_point_polynomial(t).eval(1)
            if got != expected:
                bad.append(f"{t.encoding}: r_T(1)={got} != {expected}")
            if is_identity_tree(t) and got != 1:
                bad.append(f"{t.encoding}: rigid tree with r_T(1)={got}")
    return _row("r_T(1) = [all automorphisms even]", max_n, bad)


def _identity_r_sum(max_n: int) -> CheckRow:
    r, _, _ = identity_tree_coeffs(max_n)
    bad = []
    for n in range(1, max_n + 1):
        total = sum(signed_fixed_point_polynomial(t).eval(1)
                    for t in enumerate_trees(n) if is_identity_tree(t))
        if total != r[n]:
            bad.append(f"n={n}: {total} != {r[n]}")
    return _row("sum of r_T(1) over rigid trees = r_n", max_n, bad)


_CHECKS = (
    (_tree_census, 10),
    (_outdegree_census, 10),
    (_identity_census, 10),
    (_aut_order_naive, 8),
    (_fixed_point_rows, 8),
    (_fixed_point_basics, 8),
    (_pointed_total, 8),
    (_plane_total, 8),
    (_ctree_weight_total, 8),
    (_forest_weight_total, 10),
    (_forest_weight_naive, 8),
    (_signed_weight_total, 10),
    (_signed_weight_naive, 8),
    (_sign_balance_naive, 7),
    (_identity_r_sum, 8),
)


def run_verification(oracle_max: int = 8) -> VerificationReport:
    """Run every equivalence up to min(its nominal range, oracle_max)."""
    if oracle_max < 1:
        raise ValueError("oracle_max must be at least 1")
    rows = tuple(check(min(nominal, oracle_max))
                 for check, nominal in _CHECKS)
    return VerificationReport(oracle_max, rows)
