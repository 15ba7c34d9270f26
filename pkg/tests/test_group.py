import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symtile.group import (
    Element,
    GroupContext,
    Subset,
    Symplectomorphism,
    apply_symplectomorphism,
    cyclic_subgroup,
    enumerate_subgroups,
    find_symplectic_partner,
    generated_subgroup,
    inverse_mod,
    is_subgroup,
    symplectic_orthogonal,
)

from .conftest import pts

CONTEXTS = [GroupContext(p, m) for p, m in ((2, 1), (2, 2), (3, 1), (3, 2), (5, 1), (2, 3))]


@st.composite
def ctx_and_elements(draw, k=2):
    ctx = draw(st.sampled_from(CONTEXTS))
    els = [Element(draw(st.integers(0, ctx.n - 1)), draw(st.integers(0, ctx.n - 1))) for _ in range(k)]
    return ctx, els


def test_element_arith(z4):
    assert z4.add((3, 2), (2, 3)) == (1, 1)
    assert z4.neg((1, 0)) == (3, 0)
    assert z4.scale(3, (1, 2)) == (3, 2)


def test_out_of_range_elements_rejected(z4):
    with pytest.raises(ValueError):
        z4.add((4, 0), (0, 0))
    with pytest.raises(ValueError):
        z4.check((1, 2, 3))


def test_contexts_must_match(z4, z9):
    with pytest.raises(ValueError):
        Subset.whole(z4) & Subset.whole(z9)


def test_composite_p_rejected():
    with pytest.raises(ValueError):
        GroupContext(4, 1)
    with pytest.raises(ValueError):
        GroupContext(2, 0)


def test_symplectic_form(z4):
    assert z4.form((1, 0), (0, 1)) == 1
    assert z4.form((1, 2), (3, 1)) == 3
    assert all(z4.form(u, u) == 0 for u in z4.elements())


def test_element_order(z4):
    assert z4.element_order((0, 0)) == 1
    assert z4.element_order((2, 0)) == 2
    assert z4.element_order((1, 2)) == 4


def test_cyclic_subgroup(z4):
    assert cyclic_subgroup(z4, (0, 0)).members == pts(z4, (0, 0))
    assert cyclic_subgroup(z4, (2, 0)).members == pts(z4, (0, 0), (2, 0))
    assert cyclic_subgroup(z4, (1, 2)).members == pts(z4, (0, 0), (1, 2), (2, 0), (3, 2))


def test_symplectic_orthogonal_examples(z4):
    axis = generated_subgroup(z4, [(1, 0)])
    assert symplectic_orthogonal(axis).members == axis.members
    whole = generated_subgroup(z4, [(1, 0), (0, 1)])
    assert symplectic_orthogonal(whole).members == pts(z4, (0, 0))
    K = generated_subgroup(z4, [(2, 0), (0, 2)])
    assert symplectic_orthogonal(K).members == K.members


def test_symplectic_orthogonal_rejects_non_subgroup(z4):
    with pytest.raises(ValueError):
        symplectic_orthogonal(pts(z4, (0, 0), (1, 0)))


def test_enumerate_subgroups_examples(z4, z9):
    order4 = enumerate_subgroups(z4, 4)
    assert len(order4) == 7
    cyclic = [H for H in order4 if any(z4.element_order(g) == 4 for g in H.members)]
    assert len(cyclic) == 6
    assert len(enumerate_subgroups(z4, 2)) == 3
    assert [H.members for H in enumerate_subgroups(z9, 1)] == [pts(z9, (0, 0))]
    with pytest.raises(ValueError):
        enumerate_subgroups(z4, 3)


def test_enumerate_subgroups_total_z4(z4):
    # independent count: closures of all generator pairs, deduplicated
    seen = set()
    els = list(z4.elements())
    for u in els:
        for v in els:
            seen.add(generated_subgroup(z4, [u, v]).mask)
    subs = enumerate_subgroups(z4)
    assert len(subs) == len(seen) == 15
    assert [H.mask for H in subs] == sorted(seen)


def test_lagrangian_counts(z4, z9):
    for ctx, p in ((z4, 2), (z9, 3)):
        lag = enumerate_subgroups(ctx, ctx.n)
        cyclic = [H for H in lag if any(ctx.element_order(g) == ctx.n for g in H.members)]
        assert len(cyclic) == p * p + p
        assert len(lag) == p * p + p + 1


def test_symplectic_partner(z4):
    assert find_symplectic_partner((1, 0), generated_subgroup(z4, [(0, 1)])) == (0, 1)
    assert find_symplectic_partner((0, 1), generated_subgroup(z4, [(1, 0)])) == (3, 0)
    assert find_symplectic_partner((1, 2), generated_subgroup(z4, [(0, 1)])) == (0, 1)
    with pytest.raises(ValueError):
        find_symplectic_partner((1, 0), generated_subgroup(z4, [(1, 0)]))


def test_apply_symplectomorphism_examples(z4):
    S = Subset.from_elements(z4, [(x, 0) for x in range(4)])
    assert apply_symplectomorphism(Symplectomorphism.identity(4), S) == S
    rot = Symplectomorphism(4, 0, 1, -1, 0)
    assert apply_symplectomorphism(rot, S) == Subset.from_elements(z4, [(0, y) for y in range(4)])
    shear = Symplectomorphism(4, 1, 0, -2, 1)
    assert shear((1, 2)) == (1, 0)
    with pytest.raises(ValueError):
        Symplectomorphism(4, 2, 0, 0, 1)


def test_inverse_mod():
    assert inverse_mod(3, 4) == 3
    assert inverse_mod(2, 9) == 5
    with pytest.raises(ValueError):
        inverse_mod(3, 9)


@given(ctx_and_elements(3))
def test_form_bilinear_antisymmetric(data):
    ctx, (u, v, w) = data
    assert (ctx.form(u, v) + ctx.form(v, u)) % ctx.n == 0
    assert ctx.form(ctx.add(u, w), v) == (ctx.form(u, v) + ctx.form(w, v)) % ctx.n


@given(ctx_and_elements(2))
def test_element_order_is_power_of_p(data):
    ctx, (u, _) = data
    k = ctx.element_order(u)
    assert ctx.scale(k, u) == ctx.zero
    while k % ctx.p == 0:
        k //= ctx.p
    assert k == 1


@settings(max_examples=60)
@given(ctx_and_elements(2))
def test_double_orthogonal(data):
    ctx, gens = data
    H = generated_subgroup(ctx, gens)
    Hp = symplectic_orthogonal(H)
    assert len(H) * len(Hp) == ctx.order
    assert symplectic_orthogonal(Hp).members == H.members
    assert (Hp.members == H.members) == (len(H) == ctx.n)


@st.composite
def symplectomorphisms(draw):
    ctx = draw(st.sampled_from(CONTEXTS))
    n = ctx.n
    a, b, c = (draw(st.integers(0, n - 1)) for _ in range(3))
    # solve ad - bc = 1 for d when a is a unit, otherwise for c with b a unit
    if a % ctx.p:
        d = (1 + b * c) * inverse_mod(a, n) % n
        return ctx, Symplectomorphism(n, a, b, c, d)
    b = draw(st.sampled_from([u for u in range(1, n) if u % ctx.p]))
    d = draw(st.integers(0, n - 1))
    c = (a * d - 1) * inverse_mod(b, n) % n
    return ctx, Symplectomorphism(n, a, b, c, d)


@given(symplectomorphisms(), st.data())
def test_symplectomorphism_preserves_form(mc, data):
    ctx, M = mc
    u = Element(data.draw(st.integers(0, ctx.n - 1)), data.draw(st.integers(0, ctx.n - 1)))
    v = Element(data.draw(st.integers(0, ctx.n - 1)), data.draw(st.integers(0, ctx.n - 1)))
    assert ctx.form(M(u), M(v)) == ctx.form(u, v)
    assert (M.inverse() @ M).is_identity()


@settings(max_examples=40)
@given(symplectomorphisms(), st.data())
def test_symplectomorphism_maps_subgroups(mc, data):
    ctx, M = mc
    gens = [ctx.element(data.draw(st.integers(0, ctx.order - 1))) for _ in range(2)]
    H = generated_subgroup(ctx, gens)
    image = apply_symplectomorphism(M, H.members)
    assert len(image) == len(H)
    assert is_subgroup(image)
