"""Difference sets, zero sets, tiling and spectral pair predicates."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cyclotomic import exponent_matrix, vanishing_rows
from .errors import InternalInconsistency
from .group import (
    GroupContext,
    Subgroup,
    Subset,
    as_subgroup,
    cyclic_subgroup,
    indices_mask,
)

FORMS = ("symplectic", "euclidean")


def difference_set(A: Subset) -> Subset:
    """Nonzero differences a - a' of elements of A."""
    idx = A.index_array()
    if len(idx) < 2:
        return Subset.empty(A.ctx)
    diffs = A.ctx.tables().sub[np.ix_(idx, idx)]
    return Subset(A.ctx, indices_mask(np.unique(diffs)) & ~1)


@dataclass(frozen=True)
class ZeroSet:
    members: Subset
    form: str

    @property
    def mask(self) -> int:
        return self.members.mask

    def __contains__(self, xi) -> bool:
        return xi in self.members

    def __len__(self):
        return len(self.members)


def zero_set(A: Subset, form: str = "symplectic") -> ZeroSet:
    """Frequencies at which the transform of the indicator of A vanishes."""
    if form not in FORMS:
        raise ValueError(f"unknown form {form!r}")
    if not A.mask:
        raise ValueError("zero set of the empty set is undefined")
    return ZeroSet(Subset(A.ctx, _zero_mask(A, form)), form)


@lru_cache(maxsize=1 << 16)
def _zero_mask(A: Subset, form: str) -> int:
    ctx = A.ctx
    counts = exponent_matrix(A, form)
    vanish = vanishing_rows(counts, ctx.p, ctx.m)
    mask = indices_mask(np.flatnonzero(vanish))
    if form == "symplectic":
        _assert_class_closed(ctx, mask)
    return mask


def _assert_class_closed(ctx: GroupContext, mask: int):
    for E in equivalence_classes(ctx).classes:
        hit = mask & E.mask
        if hit and hit != E.mask:
            raise InternalInconsistency(f"zero set splits the class {E}")


def support(A: Subset, form: str = "symplectic") -> Subset:
    return zero_set(A, form).members.complement()


# tiling ------------------------------------------------------------------


@dataclass(frozen=True)
class TilingVerdict:
    """Outcome of is_tiling_pair; truthy iff A (+) B = G."""

    ok: bool
    sizes_match: bool
    shared_differences: Subset
    max_multiplicity: int

    def __bool__(self):
        return self.ok


def tiling_by_differences(A: Subset, B: Subset) -> bool:
    A._same(B)
    if len(A) * len(B) != A.ctx.order:
        return False
    return not (difference_set(A).mask & difference_set(B).mask)


def tiling_by_coverage(A: Subset, B: Subset) -> tuple[bool, int]:
    """Count how often each g is hit by a + b; returns (exact cover, max hits)."""
    A._same(B)
    a, b = A.index_array(), B.index_array()
    if not len(a) or not len(b):
        return False, 0
    hits = np.bincount(A.ctx.tables().add[np.ix_(a, b)].ravel(), minlength=A.ctx.order)
    return bool(np.all(hits == 1)), int(hits.max())


def is_tiling_pair(A: Subset, B: Subset) -> TilingVerdict:
    by_diff = tiling_by_differences(A, B)
    by_cover, multiplicity = tiling_by_coverage(A, B)
    if by_diff != by_cover:
        raise InternalInconsistency(
            f"tiling routes disagree on {A} and {B}: differences={by_diff}, coverage={by_cover}"
        )
    shared = difference_set(A) & difference_set(B)
    return TilingVerdict(by_diff, len(A) * len(B) == A.ctx.order, shared, multiplicity)


# spectra -----------------------------------------------------------------


def is_spectral_pair(A: Subset, S: Subset, form: str = "symplectic") -> bool:
    A._same(S)
    if len(A) != len(S) or not A.mask:
        return False
    return difference_set(S).issubset(zero_set(A, form).members)


# dilation, classes, periodicity ------------------------------------------


def dilate(A: Subset, q: int) -> Subset:
    return A.scaled(q)


@dataclass(frozen=True)
class EquivalenceClasses:
    """Partition of the group into generator sets of cyclic subgroups."""

    ctx: GroupContext
    classes: tuple  # of Subset, sorted by mask
    class_of: tuple  # element index -> position in classes

    def of(self, u) -> Subset:
        return self.classes[self.class_of[self.ctx.index(u)]]

    def __len__(self):
        return len(self.classes)


@lru_cache(maxsize=None)
def equivalence_classes(ctx: GroupContext) -> EquivalenceClasses:
    seen: dict[int, Subset] = {}
    for u in ctx.elements():
        H = cyclic_subgroup(ctx, u)
        if H.mask in seen:
            continue
        k = len(H)
        gens = [ctx.scale(c, u) for c in range(k) if c % ctx.p or k == 1]
        seen[H.mask] = Subset.from_elements(ctx, gens)
    classes = tuple(sorted(seen.values(), key=lambda E: E.mask))
    class_of = [0] * ctx.order
    for pos, E in enumerate(classes):
        for i in E.indices():
            class_of[i] = pos
    return EquivalenceClasses(ctx, classes, tuple(class_of))


def stabilizer(A: Subset) -> Subgroup:
    """All h with A + h = A."""
    ctx = A.ctx
    idx = A.index_array()
    add = ctx.tables().add
    members = []
    for h in range(ctx.order):
        if len(idx) == 0 or indices_mask(add[idx, h]) == A.mask:
            members.append(h)
    return as_subgroup(Subset.from_indices(ctx, members))


def is_periodic(A: Subset) -> Subgroup | None:
    """The stabilizer of A when it is nontrivial, else None."""
    H = stabilizer(A)
    return H if len(H) > 1 else None
