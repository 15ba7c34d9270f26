import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symtile.errors import InternalInconsistency
from symtile.group import GroupContext, Subset, enumerate_subgroups, generated_subgroup, symplectic_orthogonal
from symtile.sets import (
    difference_set,
    dilate,
    equivalence_classes,
    is_periodic,
    is_spectral_pair,
    is_tiling_pair,
    stabilizer,
    support,
    tiling_by_coverage,
    tiling_by_differences,
    zero_set,
)

from .conftest import pts

Z4 = GroupContext(2, 2)
Z9 = GroupContext(3, 2)


def float_zero_set(A, form="symplectic"):
    """Zero set by floating-point evaluation: an independent reference."""
    ctx = A.ctx
    t = ctx.tables()
    pair = t.form if form == "symplectic" else t.dot
    idx = A.index_array()
    sums = np.exp(2j * np.pi * pair[idx, :] / ctx.n).sum(axis=0)
    return Subset.from_indices(ctx, np.flatnonzero(np.abs(sums) < 1e-9))


subsets = st.sampled_from([Z4, Z9]).flatmap(
    lambda ctx: st.sets(st.integers(0, ctx.order - 1), min_size=1).map(lambda s: Subset.from_indices(ctx, s))
)


def test_difference_set_examples(z4):
    assert difference_set(pts(z4, (0, 0))) == Subset.empty(z4)
    assert difference_set(pts(z4, (0, 0), (1, 0))) == pts(z4, (1, 0), (3, 0))
    K = pts(z4, (0, 0), (2, 0), (0, 2), (2, 2))
    assert difference_set(K) == pts(z4, (2, 0), (0, 2), (2, 2))


def test_zero_set_examples(z4):
    for H in enumerate_subgroups(z4):
        assert zero_set(H.members).members == symplectic_orthogonal(H).members.complement()
    assert len(zero_set(pts(z4, (0, 0)))) == 0
    square = pts(z4, (0, 0), (1, 0), (0, 1), (1, 1))
    assert pts(z4, (2, 0), (0, 2), (2, 2)).issubset(zero_set(square).members)
    with pytest.raises(ValueError):
        zero_set(Subset.empty(z4))
    with pytest.raises(ValueError):
        zero_set(square, "hermitian")


def test_tiling_examples(z4):
    square = pts(z4, (0, 0), (1, 0), (0, 1), (1, 1))
    K = pts(z4, (0, 0), (2, 0), (0, 2), (2, 2))
    assert is_tiling_pair(square, K)
    verdict = is_tiling_pair(K, K)
    assert not verdict and verdict.max_multiplicity == 4 and verdict.sizes_match
    assert is_tiling_pair(Subset.whole(z4), pts(z4, (0, 0)))
    assert not is_tiling_pair(square, pts(z4, (0, 0), (2, 0)))


def test_spectral_examples(z4):
    axis = Subset.from_elements(z4, [(x, 0) for x in range(4)])
    vertical = Subset.from_elements(z4, [(0, y) for y in range(4)])
    square = pts(z4, (0, 0), (1, 0), (0, 1), (1, 1))
    K = pts(z4, (0, 0), (2, 0), (0, 2), (2, 2))
    assert is_spectral_pair(axis, vertical)
    assert is_spectral_pair(square, K)
    assert not is_spectral_pair(square, pts(z4, (0, 0)))


def test_dilate_examples(z4):
    square = pts(z4, (0, 0), (1, 0), (0, 1), (1, 1))
    K = pts(z4, (0, 0), (2, 0), (0, 2), (2, 2))
    assert dilate(square, 1) == square
    assert dilate(square, 3) == pts(z4, (0, 0), (3, 0), (0, 3), (3, 3))
    assert is_tiling_pair(dilate(square, 3), K)
    assert dilate(K, 3) == K


def test_equivalence_classes_examples(z4, z9):
    ec = equivalence_classes(z4)
    assert ec.of((2, 0)) == pts(z4, (2, 0))
    assert ec.of((1, 0)) == pts(z4, (1, 0), (3, 0))
    assert len(ec) == 10
    # Z_9^2: 1 trivial + 4 order-3 classes + 12 order-9 classes
    assert len(equivalence_classes(z9)) == 17
    assert sorted(len(E) for E in equivalence_classes(z9).classes) == [1] + [2] * 4 + [6] * 12


def test_periodic_examples(z4):
    K = pts(z4, (0, 0), (2, 0), (0, 2), (2, 2))
    assert is_periodic(K).members == K
    assert is_periodic(pts(z4, (0, 0), (1, 0))) is None
    strip = Subset.from_elements(z4, [(x, y) for x in (0, 2) for y in range(4)])
    assert is_periodic(strip).members == strip


@settings(max_examples=80)
@given(subsets)
def test_zero_set_matches_float_evaluation(A):
    for form in ("symplectic", "euclidean"):
        assert zero_set(A, form).members == float_zero_set(A, form)


@settings(max_examples=80)
@given(subsets)
def test_zero_set_is_union_of_classes_and_misses_origin(A):
    Z = zero_set(A).members
    assert (0, 0) not in Z
    for E in equivalence_classes(A.ctx).classes:
        assert E.issubset(Z) or E.isdisjoint(Z)


@settings(max_examples=80)
@given(subsets)
def test_rotation_relation(A):
    ctx = A.ctx
    ze, zs = zero_set(A, "euclidean").members, zero_set(A, "symplectic").members
    for s1, s2 in ctx.elements():
        assert ((s1, s2) in ze) == (ctx.reduce(-s2, s1) in zs)


@settings(max_examples=80)
@given(subsets)
def test_uncertainty(A):
    assert len(A) * len(support(A)) >= A.ctx.order


@settings(max_examples=60)
@given(subsets, st.data())
def test_tiling_routes_agree(A, data):
    ctx = A.ctx
    B = Subset.from_indices(ctx, data.draw(st.sets(st.integers(0, ctx.order - 1), min_size=1)))
    assert tiling_by_differences(A, B) == tiling_by_coverage(A, B)[0]


@settings(max_examples=60)
@given(subsets, st.data())
def test_spectral_pair_is_symmetric(A, data):
    ctx = A.ctx
    S = Subset.from_indices(ctx, data.draw(st.sets(st.integers(0, ctx.order - 1), min_size=len(A), max_size=len(A))))
    assert is_spectral_pair(A, S) == is_spectral_pair(S, A)


@settings(max_examples=60)
@given(subsets, st.data())
def test_translation_invariance(A, data):
    h = A.ctx.element(data.draw(st.integers(0, A.ctx.order - 1)))
    assert zero_set(A.translate(h)).members == zero_set(A).members
    assert is_periodic(A.translate(h)) == is_periodic(A)


@settings(max_examples=60)
@given(subsets)
def test_stabilizer_is_exact(A):
    H = stabilizer(A)
    for h in A.ctx.elements():
        assert (A.translate(h) == A) == (h in H)


def test_difference_tiling_disagreement_raises(monkeypatch, z4):
    import symtile.sets as sets_mod

    monkeypatch.setattr(sets_mod, "tiling_by_coverage", lambda A, B: (False, 2))
    square = pts(z4, (0, 0), (1, 0), (0, 1), (1, 1))
    K = pts(z4, (0, 0), (2, 0), (0, 2), (2, 2))
    with pytest.raises(InternalInconsistency):
        sets_mod.is_tiling_pair(square, K)


@settings(max_examples=40)
@given(st.sampled_from([Z4, Z9]), st.data())
def test_dilation_of_subgroup_transversals(ctx, data):
    gens = [ctx.element(data.draw(st.integers(0, ctx.order - 1))) for _ in range(2)]
    H = generated_subgroup(ctx, gens)
    # a transversal of H: one element per coset, chosen by the drawn offsets
    cosets, picks = set(), []
    for g in ctx.elements():
        coset = H.members.translate(g)
        if coset.mask in cosets:
            continue
        cosets.add(coset.mask)
        picks.append(data.draw(st.sampled_from(coset.elements())))
    A = Subset.from_elements(ctx, picks)
    q = data.draw(st.integers(1, 50).filter(lambda q: math.gcd(q, len(A)) == 1))
    assert is_tiling_pair(A, H.members)
    assert is_tiling_pair(dilate(A, q), H.members)
