"""Explicit enumeration of small trees and forests, with exact weights.

Everything here works on concrete tree objects, one structure at a time, so
it is deliberately independent of the series machinery: the recurrences in
families.py are validated against these enumerations in the test suite and
the verify command.

A tree is canonical: children are stored as (subtree, multiplicity) pairs
sorted by (size, encoding), so structural equality is string equality on the
parenthesis encoding.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Optional

from .families import OmegaSet
from .series import Q, UPoly

TREE_ENUMERATION_CAP = 14
FOREST_ENUMERATION_CAP = 12


@dataclass(frozen=True, eq=False)
class CanonicalTree:
    """Rooted unlabeled non-plane tree in canonical form."""

    children: tuple[tuple["CanonicalTree", int], ...]
    size: int
    encoding: str

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CanonicalTree) and self.encoding == other.encoding

    def __hash__(self) -> int:
        return hash(self.encoding)

    def __repr__(self) -> str:
        return f"CanonicalTree({self.encoding})"

    @property
    def outdegree(self) -> int:
        return sum(m for _, m in self.children)


LEAF = CanonicalTree((), 1, "()")


def make_tree(subtrees: Iterable[CanonicalTree]) -> CanonicalTree:
    """Root a multiset of subtrees, canonicalizing order."""
    counts: dict[CanonicalTree, int] = {}
    for t in subtrees:
        counts[t] = counts.get(t, 0) + 1
    pairs = sorted(counts.items(), key=lambda kv: (kv[0].size, kv[0].encoding))
    size = 1 + sum(t.size * m for t, m in pairs)
    encoding = "(" + "".join(t.encoding * m for t, m in pairs) + ")"
    return CanonicalTree(tuple(pairs), size, encoding)


def chain(n: int) -> CanonicalTree:
    t = LEAF
    for _ in range(n - 1):
        t = make_tree([t])
    return t


def star(leaves: int) -> CanonicalTree:
    return make_tree([LEAF] * leaves)


# ---------------------------------------------------------------------------
# enumeration

_tree_cache: dict[tuple[int, str], tuple[CanonicalTree, ...]] = {}


def enumerate_trees(n: int, outdegrees: Optional[OmegaSet] = None,
                    cap: int = TREE_ENUMERATION_CAP) -> tuple[CanonicalTree, ...]:
    """All canonical trees of size n, optionally with restricted outdegrees.

    Refuses n > cap: the counts grow like 2.956^n and the point of the
    oracle is small-size ground truth, not bulk generation.
    """
    if n > cap:
        raise ValueError(f"enumerate_trees(n={n}) exceeds cap {cap}; raise cap explicitly")
    if n < 1:
        return ()
    key = (n, outdegrees.describe() if outdegrees else "all")
    if key in _tree_cache:
        return _tree_cache[key]

    def admits(k: int) -> bool:
        if outdegrees is None:
            return True
        if outdegrees.allowed is not None:
            return k in outdegrees.allowed
        return k not in outdegrees.excluded

    if n == 1:
        result = (LEAF,) if admits(0) else ()
    else:
        pool: list[CanonicalTree] = []
        for k in range(1, n):
            pool.extend(enumerate_trees(k, outdegrees, cap))
        found: list[CanonicalTree] = []

        def build(remaining: int, max_index: int, chosen: list[CanonicalTree]) -> None:
            if remaining == 0:
                if admits(len(chosen)):
                    found.append(make_tree(chosen))
                return
            for idx in range(min(max_index, len(pool) - 1), -1, -1):
                t = pool[idx]
                if t.size > remaining:
                    continue
                chosen.append(t)
                build(remaining - t.size, idx, chosen)
                chosen.pop()

        build(n - 1, len(pool) - 1, [])
        result = tuple(sorted(found, key=lambda t: t.encoding))
    _tree_cache[key] = result
    return result


# ---------------------------------------------------------------------------
# per-tree invariants


@lru_cache(maxsize=None)
def aut_order(tree: CanonicalTree) -> int:
    """|Aut(T)| = prod over child classes of m! |Aut(child)|^m."""
    order = 1
    for child, m in tree.children:
        f = 1
        for k in range(2, m + 1):
            f *= k
        order *= f * aut_order(child) ** m
    return order


def is_identity_tree(tree: CanonicalTree) -> bool:
    return aut_order(tree) == 1


@lru_cache(maxsize=None)
def pointed_tree_count(tree: CanonicalTree) -> int:
    """Number of node orbits under Aut(T): copies of a child class merge."""
    return 1 + sum(pointed_tree_count(child) for child, _ in tree.children)


def _cycle_index_one_slot(poly: UPoly, m: int) -> UPoly:
    """Z(S_m; s_1 = poly, s_j = 1 for j >= 2) by the standard recurrence."""
    zs = [UPoly.constant(1)]
    for k in range(1, m + 1):
        acc = zs[k - 1] * poly
        for i in range(2, k + 1):
            acc = acc + zs[k - i]
        zs.append(acc.scale(Q(1, k)))
    return zs[m]


@lru_cache(maxsize=None)
def fixed_point_polynomial(tree: CanonicalTree) -> UPoly:
    """t_T(u) = average of u^(number of fixed nodes) over Aut(T).

    A child class (S, m) contributes Z(S_m; t_S(u), 1, ..., 1): copies on a
    nontrivial cycle of the wreath permutation contain no fixed node at all.
    """
    acc = UPoly.constant(1)
    for child, m in tree.children:
        acc = acc * _cycle_index_one_slot(fixed_point_polynomial(child), m)
    return acc.shift_marker(1)  # the root is always fixed


def _rising_factorial_over_mfact(x: Fraction, m: int) -> Fraction:
    """Z(S_m; x, x, ..., x) = x (x+1) ... (x+m-1) / m!."""
    num = Q(1)
    fact = 1
    for k in range(m):
        num *= x + k
        fact *= k + 1
    return num / fact


@lru_cache(maxsize=None)
def _sign_balance(tree: CanonicalTree) -> Fraction:
    """Average of (-1)^(number of cycles) over Aut(T) acting on nodes.

    This is the substitution value of a child class sitting on an even-length
    copy cycle: every induced node cycle gets even total length, hence -1.
    """
    acc = -Q(1)  # the root contributes a single 1-cycle
    for child, m in tree.children:
        acc *= _rising_factorial_over_mfact(_sign_balance(child), m)
    return acc


@lru_cache(maxsize=None)
def signed_fixed_point_polynomial(tree: CanonicalTree) -> UPoly:
    """r_T(u) = average of (-1)^(even node cycles) u^(fixed nodes) over Aut(T).

    Wreath recursion: a copy cycle of length j over child S composes its
    inner maps into one uniform element of Aut(S), and a node cycle of inner
    length l becomes one cycle of length j*l.  Hence the slot values
      j = 1: r_S(u);  j even: average of (-1)^cycles = _sign_balance(S);
      j odd >= 3: r_S(1), which is 1 for identity trees and else 0.
    """
    acc = UPoly.constant(1)
    for child, m in tree.children:
        r_child = signed_fixed_point_polynomial(child)
        slots: list[UPoly] = [r_child]
        even_val = UPoly.constant(_sign_balance(child))
        odd_val = UPoly.constant(r_child.eval(1))
        for j in range(2, m + 1):
            slots.append(even_val if j % 2 == 0 else odd_val)
        zs = [UPoly.constant(1)]
        for k in range(1, m + 1):
            part = UPoly.zero()
            for i in range(1, k + 1):
                part = part + slots[i - 1] * zs[k - i]
            zs.append(part.scale(Q(1, k)))
        acc = acc * zs[m]
    return acc.shift_marker(1)


@lru_cache(maxsize=None)
def plane_embeddings(tree: CanonicalTree) -> int:
    """Number of plane (ordered) trees collapsing to T: the root orders its
    child multiset in multinomial(d; m_1, ..., m_k) ways, children recurse."""
    d = tree.outdegree
    fact = 1
    for k in range(2, d + 1):
        fact *= k
    count = fact
    for child, m in tree.children:
        mf = 1
        for k in range(2, m + 1):
            mf *= k
        count //= mf
        count *= plane_embeddings(child) ** m
    return count


@lru_cache(maxsize=None)
def ctree_weight(tree: CanonicalTree) -> Fraction:
    """Labeled-tree weight w(T) = e(T) prod_k (1/k!)^(nodes of outdegree k);
    collapses to prod over child classes w(child)^m / m!."""
    w = Q(1)
    for child, m in tree.children:
        mf = 1
        for k in range(2, m + 1):
            mf *= k
        w *= ctree_weight(child) ** m / mf
    return w


# ---------------------------------------------------------------------------
# forests of repeated components


@dataclass(frozen=True, eq=False)
class ForestSpec:
    """Multiset of trees, every distinct component repeated at least twice."""

    components: tuple[tuple[CanonicalTree, int], ...]  # canonical order

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ForestSpec) and self.components == other.components

    def __hash__(self) -> int:
        return hash(tuple((t.encoding, m) for t, m in self.components))

    def __repr__(self) -> str:
        inner = " ".join(f"{t.encoding}^{m}" for t, m in self.components)
        return f"ForestSpec({inner})"

    @property
    def size(self) -> int:
        return sum(t.size * m for t, m in self.components)

    @property
    def num_trees(self) -> int:
        return sum(m for _, m in self.components)


def make_forest(pairs: Iterable[tuple[CanonicalTree, int]]) -> ForestSpec:
    pairs = sorted(pairs, key=lambda kv: (kv[0].size, kv[0].encoding))
    for _, m in pairs:
        if m < 2:
            raise ValueError("every forest component must repeat at least twice")
    return ForestSpec(tuple(pairs))


def enumerate_dforests(n: int, identity_only: bool = False,
                       cap: int = FOREST_ENUMERATION_CAP) -> tuple[ForestSpec, ...]:
    """All forests of total size n with every component multiplicity >= 2."""
    if n > cap:
        raise ValueError(f"enumerate_dforests(n={n}) exceeds cap {cap}; raise cap explicitly")
    if n < 0:
        return ()
    pool: list[CanonicalTree] = []
    for k in range(1, n // 2 + 1):
        for t in enumerate_trees(k):
            if not identity_only or is_identity_tree(t):
                pool.append(t)
    found: list[ForestSpec] = []

    def build(remaining: int, idx: int, chosen: list[tuple[CanonicalTree, int]]) -> None:
        if remaining == 0:
            found.append(make_forest(chosen))
            return
        if idx < 0:
            return
        build(remaining, idx - 1, chosen)
        t = pool[idx]
        for m in range(2, remaining // t.size + 1):
            chosen.append((t, m))
            build(remaining - m * t.size, idx - 1, chosen)
            chosen.pop()

    build(n, len(pool) - 1, [])
    return tuple(sorted(found, key=lambda f: repr(f)))


@lru_cache(maxsize=None)
def _derangements(m: int) -> int:
    if m == 0:
        return 1
    if m == 1:
        return 0
    return (m - 1) * (_derangements(m - 1) + _derangements(m - 2))


def forest_weight(forest: ForestSpec) -> Fraction:
    """Fraction of automorphisms that avoid fixed nodes, given none exist
    at the top: prod over classes of !m / m!.

    A node-level automorphism has no fixed node exactly when every class
    permutes its copies without fixed copies (a fixed copy pins its root),
    and inner maps on moved copies are unconstrained, so they cancel.
    """
    w = Q(1)
    for _, m in forest.components:
        fact = 1
        for k in range(2, m + 1):
            fact *= k
        w *= Q(_derangements(m), fact)
    return w


def signed_forest_weight(forest: ForestSpec) -> Fraction:
    """Signed companion for identity-tree forests.

    The sign lives on the cycle type of the copy permutation (one factor -1
    per even-length copy cycle, i.e. its sgn); summing sgn over derangements
    of S_m gives (-1)^(m-1) (m-1).
    """
    for t, m in forest.components:
        if not is_identity_tree(t):
            raise ValueError("signed weights are defined for identity-tree forests")
    w = Q(1)
    for _, m in forest.components:
        fact = 1
        for k in range(2, m + 1):
            fact *= k
        w *= Q((-1) ** (m - 1) * (m - 1), fact)
    return w


# ---------------------------------------------------------------------------
# naive cross-checks: explicit node-level automorphism enumeration


def _labeled_children(tree: CanonicalTree) -> list[list[int]]:
    """Adjacency as child index lists, root = 0, labels in DFS order."""
    children: list[list[int]] = []

    def visit(t: CanonicalTree) -> int:
        idx = len(children)
        children.append([])
        for child, m in t.children:
            for _ in range(m):
                children[idx].append(visit(child))
        return idx

    visit(tree)
    return children


def _subtree_sizes(children: list[list[int]]) -> list[int]:
    n = len(children)
    sizes = [1] * n
    for idx in range(n - 1, -1, -1):
        for c in children[idx]:
            sizes[idx] += sizes[c]
    return sizes


def naive_automorphisms(children: list[list[int]]) -> Iterator[tuple[int, ...]]:
    """All root-fixing adjacency-preserving node bijections, by backtracking.

    No isomorphism shortcuts: sibling images are tried permutation by
    permutation (pruned only by raw subtree size), so this is structurally
    independent of the canonical-form recursions it cross-checks.
    """
    sizes = _subtree_sizes(children)
    n = len(children)
    perm = [-1] * n

    def extend(queue: list[tuple[int, int]]) -> Iterator[tuple[int, ...]]:
        if not queue:
            yield tuple(perm)
            return
        u, v = queue[0]
        rest = queue[1:]
        cu, cv = children[u], children[v]
        for image in itertools.permutations(cv):
            if any(sizes[a] != sizes[b] for a, b in zip(cu, image)):
                continue
            for a, b in zip(cu, image):
                perm[a] = b
            yield from extend(rest + list(zip(cu, image)))
        for a in cu:
            perm[a] = -1

    perm[0] = 0
    yield from extend([(0, 0)])


def cycle_type(perm: tuple[int, ...]) -> dict[int, int]:
    """Map cycle length -> number of cycles of that length."""
    seen = [False] * len(perm)
    out: dict[int, int] = {}
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        v = start
        while not seen[v]:
            seen[v] = True
            v = perm[v]
            length += 1
        out[length] = out.get(length, 0) + 1
    return out


def naive_tree_census(tree: CanonicalTree) -> list[dict[int, int]]:
    """Cycle types of every automorphism of the tree (node level)."""
    return [cycle_type(p) for p in naive_automorphisms(_labeled_children(tree))]


def _forest_labeled_children(forest: ForestSpec) -> list[list[int]]:
    """The forest with a virtual root joining the component roots."""
    children: list[list[int]] = [[]]

    def visit(t: CanonicalTree) -> int:
        idx = len(children)
        children.append([])
        for child, m in t.children:
            for _ in range(m):
                children[idx].append(visit(child))
        return idx

    for t, m in forest.components:
        for _ in range(m):
            children[0].append(visit(t))
    return children


def naive_forest_weight(forest: ForestSpec) -> Fraction:
    """forest_weight by explicit enumeration over node-level automorphisms."""
    children = _forest_labeled_children(forest)
    total = 0
    free = 0
    for perm in naive_automorphisms(children):
        total += 1
        if all(perm[i] != i for i in range(1, len(perm))):
            free += 1
    return Q(free, total)


def naive_signed_forest_weight(forest: ForestSpec) -> Fraction:
    """signed_forest_weight by explicit enumeration.

    The sign is computed on the induced permutation of component copies, not
    on node cycles: that is the convention under which the signed weights
    sum to the coefficients of exp(sum_{i>=2} (-1)^(i-1) R(z^i)/i).
    """
    children = _forest_labeled_children(forest)
    roots = children[0]
    total = 0
    acc = 0
    for perm in naive_automorphisms(children):
        total += 1
        if any(perm[i] == i for i in range(1, len(perm))):
            continue
        induced = {r: perm[r] for r in roots}
        seen: set[int] = set()
        sign = 1
        for r in roots:
            if r in seen:
                continue
            length = 0
            v = r
            while v not in seen:
                seen.add(v)
                v = induced[v]
                length += 1
            if length % 2 == 0:
                sign = -sign
        acc += sign
    return Q(acc, total)
