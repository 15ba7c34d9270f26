"""The catalog of distinguished subgroups and classes of Z_{p^2} x Z_{p^2}.

Notation follows the usual projective labelling: K is the p-torsion
subgroup, K_k (k in 0..p-1 or INF) its order-p subgroups, H_{j,k} the cyclic
Lagrangians through K_k generated by h_{j,k}, E_{j,k} = H_{j,k} minus K_k the
generators of H_{j,k}, and C_{j,k} = {c * h_{j,k} : c in Z_p}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .group import (
    Element,
    GroupContext,
    Subgroup,
    Subset,
    Symplectomorphism,
    apply_symplectomorphism,
    cyclic_subgroup,
    generated_subgroup,
    inverse_mod,
    symplectic_orthogonal,
)
from .sets import equivalence_classes, zero_set

INF = math.inf


def proj_label(k) -> str | int:
    return "inf" if k == INF else int(k)


def parse_proj(text) -> int | float:
    if isinstance(text, str) and text.strip().lower() in ("inf", "infinity", "oo"):
        return INF
    return int(text)


def projective_line(p: int) -> list:
    return list(range(p)) + [INF]


def direction(k, p: int) -> Element:
    """A vector of Z_{p^2}^2 whose multiple by p generates K_k."""
    return Element(0, 1) if k == INF else Element(1, k)


@dataclass(frozen=True)
class StructureCatalog:
    ctx: GroupContext
    K: Subgroup
    K_k: dict
    h: dict
    H: dict
    E: dict
    C: dict

    @property
    def indices(self) -> list:
        return projective_line(self.ctx.p)

    @property
    def pairs(self) -> list:
        return [(j, k) for k in self.indices for j in range(self.ctx.p)]

    def K_perp(self, k) -> Subgroup:
        return symplectic_orthogonal(self.K_k[k])

    def delta_K(self, k) -> Subset:
        return self.K_k[k].members - Subset(self.ctx, 1)

    def E_union(self, k) -> Subset:
        out = Subset.empty(self.ctx)
        for j in range(self.ctx.p):
            out = out | self.E[j, k]
        return out

    def lagrangians(self) -> list[tuple[str, Subgroup]]:
        """K and every H_{j,k}, labelled, sorted by bit mask."""
        out = [("K", self.K)] + [(f"H[{j},{proj_label(k)}]", self.H[j, k]) for j, k in self.pairs]
        return sorted(out, key=lambda t: t[1].mask)


@lru_cache(maxsize=None)
def build_catalog(ctx: GroupContext) -> StructureCatalog:
    if ctx.m != 2:
        raise ValueError(f"the structure catalog needs m = 2, got m = {ctx.m}")
    p = ctx.p
    K = generated_subgroup(ctx, [(p, 0), (0, p)])
    K_k, h, H, E, C = {}, {}, {}, {}, {}
    for k in projective_line(p):
        u = direction(k, p)
        K_k[k] = cyclic_subgroup(ctx, ctx.scale(p, u))
        for j in range(p):
            hjk = Element(1, j * p + k) if k != INF else Element(j * p, 1)
            h[j, k] = hjk
            H[j, k] = cyclic_subgroup(ctx, hjk)
            E[j, k] = H[j, k].members - K_k[k].members
            C[j, k] = Subset.from_elements(ctx, (ctx.scale(c, hjk) for c in range(p)))
    cat = StructureCatalog(ctx, K, K_k, h, H, E, C)
    _check_catalog(cat)
    return cat


def _check_catalog(cat: StructureCatalog):
    from .sets import difference_set

    ctx, p = cat.ctx, cat.ctx.p
    assert len(cat.K) == p * p
    assert len({cat.K_k[k].mask for k in cat.indices}) == p + 1
    assert len({cat.H[jk].mask for jk in cat.pairs}) == p * p + p
    for k in cat.indices:
        inter, union = cat.K.members, cat.K.members
        for j in range(p):
            inter = inter & cat.H[j, k].members
            union = union | cat.H[j, k].members
        assert inter == cat.K_k[k].members
        assert union == cat.K_perp(k).members
        for j in range(p):
            assert difference_set(cat.C[j, k]).issubset(cat.E[j, k])
            assert len(cat.H[j, k]) == ctx.n


@dataclass(frozen=True)
class ZeroSetProfile:
    """Which K_k and E_{j,k} sit inside Z(1_A^sym)."""

    M: tuple
    M_prime: tuple
    e_membership: dict
    d: int | None

    def to_dict(self) -> dict:
        return {
            "M": [proj_label(k) for k in self.M],
            "M_prime": [proj_label(k) for k in self.M_prime],
            "E_in_zero_set": {
                f"{j},{proj_label(k)}": v for (j, k), v in sorted(self.e_membership.items(), key=_pair_key)
            },
            "d": self.d,
        }


def _pair_key(item):
    (j, k), _ = item
    return (k, j)


def profile_zero_set(A: Subset, cat: StructureCatalog | None = None) -> ZeroSetProfile:
    cat = cat or build_catalog(A.ctx)
    Z = zero_set(A).members
    M = tuple(k for k in cat.indices if cat.delta_K(k).issubset(Z))
    M_prime = tuple(k for k in cat.indices if k not in M)
    for k in M_prime:
        if not cat.delta_K(k).isdisjoint(Z):
            raise AssertionError("zero set is not a union of classes")
    e = {(j, k): cat.E[j, k].issubset(Z) for j, k in cat.pairs}
    p2 = A.ctx.p ** 2
    d = len(A) // p2 if len(A) % p2 == 0 else None
    return ZeroSetProfile(M, M_prime, e, d)


def difference_profile(A: Subset, cat: StructureCatalog | None = None) -> dict:
    """The same partition seen from the difference set: which K_k, E_{j,k} meet Delta A."""
    from .sets import difference_set

    cat = cat or build_catalog(A.ctx)
    D = difference_set(A)
    M = [k for k in cat.indices if not cat.delta_K(k).isdisjoint(D)]
    return {
        "M": [proj_label(k) for k in M],
        "M_prime": [proj_label(k) for k in cat.indices if k not in M],
        "E_meets_difference_set": {
            f"{j},{proj_label(k)}": not cat.E[j, k].isdisjoint(D) for j, k in sorted(cat.pairs, key=lambda t: (t[1], t[0]))
        },
    }


# normalisation -------------------------------------------------------------


def normalizing_symplectomorphism(target, ctx: GroupContext) -> Symplectomorphism:
    """A determinant-1 map sending target (of order p^t) to (p^(m-t), 0)."""
    target = ctx.check(target)
    if target == ctx.zero:
        raise ValueError("cannot normalise the identity")
    n = ctx.n
    t_order = ctx.element_order(target)
    scale = n // t_order
    g1, g2 = target.x1 // scale, target.x2 // scale
    # M^{-1} has columns g and a symplectic partner (x, y) of g
    if g1 % ctx.p:
        x, y = 0, inverse_mod(g1, n)
    else:
        x, y = -inverse_mod(g2, n), 0
    return Symplectomorphism(n, y, -x, -g2, g1)


def pair_normalizer(k, k2, ctx: GroupContext) -> Symplectomorphism:
    """A determinant-1 map with K_k -> K_0 and K_{k2} -> K_INF (k != k2)."""
    if k == k2:
        raise ValueError("projective indices must differ")
    n, p = ctx.n, ctx.p
    u, w = direction(k, p), direction(k2, p)
    d = (u.x1 * w.x2 - u.x2 * w.x1) % n
    dinv = inverse_mod(d, n)
    return Symplectomorphism(n, w.x2 * dinv, -w.x1 * dinv, -u.x2, u.x1)


def transport(M: Symplectomorphism, S: Subset) -> Subset:
    return apply_symplectomorphism(M, S)


def canonical_c(ctx: GroupContext, t: int) -> list[int]:
    """C_t in Z_{p^m}: digit t (most significant first) free, the rest zero."""
    return [c * ctx.p ** (ctx.m - t) for c in range(ctx.p)]


def canonical_d(ctx: GroupContext, t: int) -> list[int]:
    """D_t in Z_{p^m}: residues whose base-p digit at the p^(t-1) place is 0.

    This is the digit whose removal leaves the character sum over {0} x D_t
    nonvanishing exactly on elements of order p^t, so that Z_n x D_t has the
    zero set G minus (E_(p^(m-t),0) and 0).
    """
    p = ctx.p
    return [v for v in range(ctx.n) if (v // p ** (t - 1)) % p == 0]


# rendering -------------------------------------------------------------------


def render_grid(S: Subset, filled: str = "#", empty: str = ".") -> str:
    """ASCII picture of S: x1 grows to the right, x2 upward, origin bottom-left."""
    n = S.ctx.n
    rows = []
    for x2 in reversed(range(n)):
        rows.append("".join(filled if S.mask >> (x1 * n + x2) & 1 else empty for x1 in range(n)))
    return "\n".join(rows)


def classes_partition_ok(cat: StructureCatalog) -> bool:
    """{0}, the Delta K_k and the E_{j,k} are classes and partition G.

    For m = 2 every element of order p^2 generates a cyclic Lagrangian, so
    there is no further stratum to account for.
    """
    ctx = cat.ctx
    pieces = [Subset(ctx, 1)] + [cat.delta_K(k) for k in cat.indices]
    pieces += [cat.E[jk] for jk in cat.pairs]
    classes = {E.mask for E in equivalence_classes(ctx).classes}
    total = 0
    for P in pieces:
        if total & P.mask or P.mask not in classes:
            return False
        total |= P.mask
    return total == Subset.whole(ctx).mask
