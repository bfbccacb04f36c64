"""Enumeration oracle checks: canonical trees, automorphisms, forests."""

from fractions import Fraction

import polyakit.families as fam
from polyakit.oracle import (
    LEAF,
    aut_order,
    chain,
    cycle_type,
    enumerate_dforests,
    enumerate_trees,
    fixed_point_polynomial,
    forest_weight,
    is_identity_tree,
    make_forest,
    make_tree,
    naive_automorphisms,
    plane_embeddings,
    pointed_tree_count,
    signed_fixed_point_polynomial,
    signed_forest_weight,
    _labeled_children,
)

F = Fraction


def cherry():
    return make_tree([LEAF, LEAF])


def star(leaves: int):
    return make_tree([LEAF] * leaves)


def test_enumeration_counts_match_table():
    t = fam.polya_int_table(10)
    for n in range(1, 11):
        assert len(enumerate_trees(n)) == t[n]


def test_enumeration_is_duplicate_free():
    trees = enumerate_trees(8)
    assert len({tr.encoding for tr in trees}) == len(trees)


def test_size_four_shapes():
    trees = enumerate_trees(4)
    assert len(trees) == 4
    assert sorted(aut_order(tr) for tr in trees) == [1, 1, 2, 6]


def test_chain_and_star():
    assert chain(5).size == 5
    assert aut_order(chain(5)) == 1
    assert is_identity_tree(chain(5))
    assert star(3).size == 4
    assert aut_order(star(3)) == 6


def test_cherry_polynomials():
    t = fixed_point_polynomial(cherry())
    assert t.coefficient(3) == F(1, 2) and t.coefficient(1) == F(1, 2)
    assert t.eval(1) == 1
    r = signed_fixed_point_polynomial(cherry())
    assert r.coefficient(3) == F(1, 2) and r.coefficient(1) == F(-1, 2)
    assert r.eval(1) == 0


def test_star_four_signed_polynomial():
    # 4 nodes: (1/6)(u^4 - 3u^2 + 2u)
    r = signed_fixed_point_polynomial(star(3))
    assert r.coefficient(4) == F(1, 6)
    assert r.coefficient(2) == F(-1, 2)
    assert r.coefficient(1) == F(1, 3)
    assert r.eval(1) == 0


def test_chain_polynomial_is_pure_power():
    t = fixed_point_polynomial(chain(6))
    assert t.coefficient(6) == 1 and t.degree == 6
    r = signed_fixed_point_polynomial(chain(6))
    assert r.coefficient(6) == 1


def test_even_automorphism_regression():
    # swapping two 2-chains is an even vertex permutation, so the signed
    # value at 1 is 1 although the tree is not an identity tree
    twin = make_tree([chain(2), chain(2)])
    assert not is_identity_tree(twin)
    assert signed_fixed_point_polynomial(twin).eval(1) == 1


def test_signed_value_detects_even_groups():
    # value 1 iff every automorphism is even, else 0
    for n in range(1, 8):
        for tree in enumerate_trees(n):
            ch = _labeled_children(tree)
            all_even = True
            for perm in naive_automorphisms(ch):
                parity = sum((length - 1) * count
                             for length, count in cycle_type(perm).items())
                if parity % 2 == 1:
                    all_even = False
                    break
            got = signed_fixed_point_polynomial(tree).eval(1)
            assert got == (1 if all_even else 0)


def test_fixed_point_polynomial_matches_naive():
    for n in range(1, 7):
        for tree in enumerate_trees(n):
            ch = _labeled_children(tree)
            counts: dict[int, int] = {}
            order = 0
            for perm in naive_automorphisms(ch):
                order += 1
                fixed = sum(1 for i, j in enumerate(perm) if i == j)
                counts[fixed] = counts.get(fixed, 0) + 1
            assert order == aut_order(tree)
            poly = fixed_point_polynomial(tree)
            for k, c in counts.items():
                assert poly.coefficient(k) == F(c, order)


def test_row_sums_match_ctree_polynomials():
    rows = fam.ctree_polynomials(7)
    for n in range(1, 8):
        total = {}
        for tree in enumerate_trees(n):
            p = fixed_point_polynomial(tree)
            for k in range(p.degree + 1):
                total[k] = total.get(k, F(0)) + p.coefficient(k)
        row = rows.row(n)
        for k, v in total.items():
            assert row.coefficient(k) == v


def test_pointed_counts():
    per_size = [0] * 7
    for n in range(1, 7):
        for tree in enumerate_trees(n):
            per_size[n] += pointed_tree_count(tree)
    p = fam.pointed_coeffs(6)
    assert per_size[1:] == [p[n] for n in range(1, 7)]


def test_plane_embeddings_and_catalan():
    import math
    assert plane_embeddings(chain(4)) == 1
    assert plane_embeddings(star(3)) == 1
    assert plane_embeddings(make_tree([LEAF, chain(2)])) == 2
    for n in range(1, 8):
        total = sum(plane_embeddings(t) for t in enumerate_trees(n))
        assert total == math.comb(2 * (n - 1), n - 1) // n


def test_forest_counts_small():
    assert len(enumerate_dforests(5)) == 1
    assert len(enumerate_dforests(6)) == 5


def test_forest_weights():
    pair = make_forest([(LEAF, 2)])
    assert forest_weight(pair) == F(1, 2)
    assert signed_forest_weight(pair) == F(-1, 2)
    # derangements of 4 items: 9 of 24
    quad = make_forest([(LEAF, 4)])
    assert forest_weight(quad) == F(9, 24)


def test_forest_weight_totals_match_series():
    d = fam.dforest_coeffs(9)
    for n in range(2, 10):
        total = sum(forest_weight(f) for f in enumerate_dforests(n))
        assert total == d[n]


def test_signed_forest_totals_match_series():
    _, dstar, _ = fam.identity_tree_coeffs(9)
    for n in range(2, 10):
        total = sum(signed_forest_weight(f)
                    for f in enumerate_dforests(n, identity_only=True))
        assert total == dstar[n]


def test_identity_tree_counts():
    r, _, _ = fam.identity_tree_coeffs(8)
    for n in range(1, 9):
        count = sum(1 for t in enumerate_trees(n) if is_identity_tree(t))
        assert count == r[n]


def test_outdegree_restricted_enumeration():
    binary = fam.OmegaSet.parse("0,2")
    for n in range(1, 10):
        for tree in enumerate_trees(n, outdegrees=binary):
            assert all(deg in (0, 2) for deg in _outdegrees(tree))


def _outdegrees(tree):
    out = [len(_expand(tree))]
    for child, mult in tree.children:
        out.extend(_outdegrees(child) * mult)
    return out


def _expand(tree):
    return [c for c, m in tree.children for _ in range(m)]
