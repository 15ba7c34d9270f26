"""Arithmetic in the group Z_n x Z_n with n = p**m.

Elements are pairs of residues. Subsets are Python ints used as bit vectors,
bit ``x1 * n + x2`` standing for the element ``(x1, x2)`` (row-major order).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple

import numpy as np


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def inverse_mod(a: int, n: int) -> int:
    """Inverse of ``a`` modulo ``n`` via extended gcd; ValueError for non-units."""
    r0, r1 = a % n, n
    s0, s1 = 1, 0
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if r0 != 1:
        raise ValueError(f"{a} is not a unit modulo {n}")
    return s0 % n


class Element(NamedTuple):
    x1: int
    x2: int


@dataclass(frozen=True)
class GroupContext:
    """The ambient group Z_{p^m} x Z_{p^m}."""

    p: int
    m: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p!r}")
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m!r}")

    @property
    def n(self) -> int:
        return self.p ** self.m

    @property
    def order(self) -> int:
        return self.n * self.n

    # element level ---------------------------------------------------------

    def check(self, u) -> Element:
        """Validate that ``u`` is a reduced residue pair of this group."""
        x1, x2 = u
        n = self.n
        if not (0 <= x1 < n and 0 <= x2 < n):
            raise ValueError(f"{tuple(u)} is not an element of Z_{n} x Z_{n}")
        return Element(int(x1), int(x2))

    def reduce(self, x1: int, x2: int) -> Element:
        return Element(x1 % self.n, x2 % self.n)

    def index(self, u) -> int:
        u = self.check(u)
        return u.x1 * self.n + u.x2

    def element(self, i: int) -> Element:
        return Element(*divmod(i, self.n))

    def elements(self) -> Iterator[Element]:
        for i in range(self.order):
            yield self.element(i)

    @property
    def zero(self) -> Element:
        return Element(0, 0)

    def add(self, u, v) -> Element:
        u, v = self.check(u), self.check(v)
        return self.reduce(u.x1 + v.x1, u.x2 + v.x2)

    def sub(self, u, v) -> Element:
        u, v = self.check(u), self.check(v)
        return self.reduce(u.x1 - v.x1, u.x2 - v.x2)

    def neg(self, u) -> Element:
        u = self.check(u)
        return self.reduce(-u.x1, -u.x2)

    def scale(self, k: int, u) -> Element:
        u = self.check(u)
        return self.reduce(k * u.x1, k * u.x2)

    def form(self, u, v) -> int:
        """Symplectic form x1*y2 - x2*y1 mod n."""
        u, v = self.check(u), self.check(v)
        return (u.x1 * v.x2 - u.x2 * v.x1) % self.n

    def dot(self, u, v) -> int:
        u, v = self.check(u), self.check(v)
        return (u.x1 * v.x1 + u.x2 * v.x2) % self.n

    def element_order(self, u) -> int:
        u = self.check(u)
        return self.n // math.gcd(u.x1, u.x2, self.n)

    # index-level tables, shared by the vectorised code paths ---------------

    def tables(self) -> "Tables":
        return _tables(self.p, self.m)

    def __repr__(self):
        return f"GroupContext(p={self.p}, m={self.m})"


class Tables(NamedTuple):
    x1: np.ndarray  # first coordinate per index
    x2: np.ndarray
    form: np.ndarray  # form[i, j] = <e_i, e_j> mod n
    dot: np.ndarray
    neg: np.ndarray
    add: np.ndarray  # add[i, j] = index of e_i + e_j
    sub: np.ndarray  # sub[i, j] = index of e_i - e_j
    order: np.ndarray


@lru_cache(maxsize=None)
def _tables(p: int, m: int) -> Tables:
    n = p ** m
    idx = np.arange(n * n)
    x1, x2 = idx // n, idx % n
    dtype = np.int32
    form = ((x1[:, None] * x2[None, :] - x2[:, None] * x1[None, :]) % n).astype(dtype)
    dot = ((x1[:, None] * x1[None, :] + x2[:, None] * x2[None, :]) % n).astype(dtype)
    add = (((x1[:, None] + x1[None, :]) % n) * n + (x2[:, None] + x2[None, :]) % n).astype(dtype)
    sub = (((x1[:, None] - x1[None, :]) % n) * n + (x2[:, None] - x2[None, :]) % n).astype(dtype)
    neg = ((-x1 % n) * n + (-x2 % n)).astype(dtype)
    order = (n // np.gcd(np.gcd(x1, x2), n)).astype(dtype)
    for a in (form, dot, add, sub, neg, order):
        a.setflags(write=False)
    return Tables(x1, x2, form, dot, neg, add, sub, order)


# subsets -----------------------------------------------------------------


def mask_indices(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def indices_mask(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << int(i)
    return mask


@dataclass(frozen=True)
class Subset:
    """A subset of the group stored as a bit vector over canonical indices."""

    ctx: GroupContext
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.ctx.order:
            raise ValueError("mask has bits outside the group")

    @classmethod
    def from_elements(cls, ctx: GroupContext, elements: Iterable) -> "Subset":
        return cls(ctx, indices_mask(ctx.index(u) for u in elements))

    @classmethod
    def from_indices(cls, ctx: GroupContext, indices: Iterable[int]) -> "Subset":
        return cls(ctx, indices_mask(indices))

    @classmethod
    def whole(cls, ctx: GroupContext) -> "Subset":
        return cls(ctx, (1 << ctx.order) - 1)

    @classmethod
    def empty(cls, ctx: GroupContext) -> "Subset":
        return cls(ctx, 0)

    def indices(self) -> list[int]:
        return mask_indices(self.mask)

    def elements(self) -> list[Element]:
        return [self.ctx.element(i) for i in self.indices()]

    def index_array(self) -> np.ndarray:
        return np.array(self.indices(), dtype=np.int64)

    def __len__(self):
        return self.mask.bit_count()

    def __iter__(self):
        return iter(self.elements())

    def __contains__(self, u) -> bool:
        return bool(self.mask >> self.ctx.index(u) & 1)

    def _same(self, other: "Subset"):
        if other.ctx != self.ctx:
            raise ValueError(f"subsets live in different groups: {self.ctx} vs {other.ctx}")

    def __and__(self, other: "Subset") -> "Subset":
        self._same(other)
        return Subset(self.ctx, self.mask & other.mask)

    def __or__(self, other: "Subset") -> "Subset":
        self._same(other)
        return Subset(self.ctx, self.mask | other.mask)

    def __sub__(self, other: "Subset") -> "Subset":
        self._same(other)
        return Subset(self.ctx, self.mask & ~other.mask)

    def issubset(self, other: "Subset") -> bool:
        self._same(other)
        return self.mask & ~other.mask == 0

    def isdisjoint(self, other: "Subset") -> bool:
        self._same(other)
        return self.mask & other.mask == 0

    def complement(self) -> "Subset":
        return Subset(self.ctx, ((1 << self.ctx.order) - 1) & ~self.mask)

    def translate(self, h) -> "Subset":
        hi = self.ctx.index(h)
        add = self.ctx.tables().add
        return Subset.from_indices(self.ctx, (add[i, hi] for i in self.indices()))

    def sumset(self, other: "Subset") -> "Subset":
        """The set A + B (multiplicities dropped)."""
        self._same(other)
        add = self.ctx.tables().add
        a, b = self.index_array(), other.index_array()
        if not len(a) or not len(b):
            return Subset.empty(self.ctx)
        return Subset.from_indices(self.ctx, np.unique(add[np.ix_(a, b)]))

    def scaled(self, q: int) -> "Subset":
        return Subset.from_elements(self.ctx, (self.ctx.scale(q, u) for u in self))

    def as_lists(self) -> list[list[int]]:
        return [[u.x1, u.x2] for u in self]

    def __repr__(self):
        return f"Subset({self.ctx.p},{self.ctx.m}: {[tuple(u) for u in self]})"


# subgroups ---------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    members: Subset
    generators: tuple = field(default=(), compare=False)

    @property
    def ctx(self) -> GroupContext:
        return self.members.ctx

    @property
    def mask(self) -> int:
        return self.members.mask

    def __len__(self):
        return len(self.members)

    def __contains__(self, u):
        return u in self.members

    def __iter__(self):
        return iter(self.members)

    def __repr__(self):
        return f"Subgroup(order={len(self)}, generators={[tuple(g) for g in self.generators]})"


def cyclic_subgroup(ctx: GroupContext, u) -> Subgroup:
    u = ctx.check(u)
    k = ctx.element_order(u)
    return Subgroup(Subset.from_elements(ctx, (ctx.scale(i, u) for i in range(k))), (u,))


def generated_subgroup(ctx: GroupContext, generators: Iterable) -> Subgroup:
    gens = tuple(ctx.check(g) for g in generators)
    members = Subset(ctx, 1)  # {(0,0)}
    for g in gens:
        members = members.sumset(cyclic_subgroup(ctx, g).members)
    return Subgroup(members, gens)


def is_subgroup(S: Subset) -> bool:
    if not S.mask & 1:
        return False
    t = S.ctx.tables()
    idx = S.index_array()
    closed = indices_mask(np.unique(t.sub[np.ix_(idx, idx)]))
    return closed == S.mask


def as_subgroup(H) -> Subgroup:
    """Accept a Subgroup or a Subset that is closed; ValueError otherwise."""
    if isinstance(H, Subgroup):
        return H
    if not is_subgroup(H):
        raise ValueError("set is not closed under the group law")
    return Subgroup(H, tuple(H.elements()))


def symplectic_orthogonal(H) -> Subgroup:
    H = as_subgroup(H)
    ctx = H.ctx
    gens = [ctx.index(g) for g in H.generators] or [0]
    form = ctx.tables().form
    ok = np.all(form[:, gens] == 0, axis=1)
    return as_subgroup(Subset.from_indices(ctx, np.flatnonzero(ok)))


def enumerate_subgroups(ctx: GroupContext, order: int | None = None) -> list[Subgroup]:
    """All subgroups (optionally of one order), sorted by bit mask.

    Every subgroup of Z_n x Z_n is generated by at most two elements, so
    the list is the closure of sums of pairs of cyclic subgroups.
    """
    if order is not None and ctx.order % order:
        raise ValueError(f"order {order} does not divide {ctx.order}")
    cyclic: dict[int, Subgroup] = {}
    for u in ctx.elements():
        H = cyclic_subgroup(ctx, u)
        cyclic.setdefault(H.mask, H)
    found: dict[int, Subgroup] = dict(cyclic)
    cyc = sorted(cyclic.values(), key=lambda H: H.mask)
    for i, H1 in enumerate(cyc):
        for H2 in cyc[i + 1:]:
            S = H1.members.sumset(H2.members)
            if S.mask not in found:
                found[S.mask] = Subgroup(S, H1.generators + H2.generators)
    out = [H for H in found.values() if order is None or len(H) == order]
    return sorted(out, key=lambda H: H.mask)


def find_symplectic_partner(h, Hprime) -> Element:
    """Return h' in H' with <h, h'> = 1, given <h> (+) H' = G and ord(h) = n."""
    Hprime = as_subgroup(Hprime)
    ctx = Hprime.ctx
    h = ctx.check(h)
    if ctx.element_order(h) != ctx.n:
        raise ValueError(f"{tuple(h)} does not have order n={ctx.n}")
    H = cyclic_subgroup(ctx, h)
    if len(H) * len(Hprime) != ctx.order or (H.mask & Hprime.mask) != 1:
        raise ValueError("<h> and H' do not form a direct sum decomposition")
    for v in Hprime:
        if ctx.form(h, v) == 1:
            return v
    raise ValueError(f"no symplectic partner of {tuple(h)} in H'")


# symplectomorphisms --------------------------------------------------------


@dataclass(frozen=True)
class Symplectomorphism:
    """The 2x2 matrix [[a, b], [c, d]] over Z_n with determinant 1."""

    n: int
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, getattr(self, name) % self.n)
        if (self.a * self.d - self.b * self.c) % self.n != 1 % self.n:
            raise ValueError(f"determinant of {self.matrix()} is not 1 mod {self.n}")

    @classmethod
    def identity(cls, n: int) -> "Symplectomorphism":
        return cls(n, 1, 0, 0, 1)

    def matrix(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def __call__(self, u) -> Element:
        x1, x2 = u
        n = self.n
        return Element((self.a * x1 + self.b * x2) % n, (self.c * x1 + self.d * x2) % n)

    def inverse(self) -> "Symplectomorphism":
        return Symplectomorphism(self.n, self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other: "Symplectomorphism") -> "Symplectomorphism":
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return Symplectomorphism(self.n, a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def is_identity(self) -> bool:
        return (self.a, self.b, self.c, self.d) == (1, 0, 0, 1)


def apply_symplectomorphism(M: Symplectomorphism, S: Subset) -> Subset:
    if S.ctx.n != M.n:
        raise ValueError(f"matrix over Z_{M.n} applied to a subset of {S.ctx}")
    return Subset.from_elements(S.ctx, (M(u) for u in S))
