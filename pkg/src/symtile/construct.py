"""Explicit spectra for tiles and tiling complements for spectral sets.

Every construction follows a fixed recipe: translate the input so it
contains the identity, optionally change symplectic basis so a chosen class
becomes a coordinate class, build the witness in those coordinates, map it
back, and re-verify the result with the predicates in ``sets``. The basis
change and the translation are recorded on the certificate.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import AlreadyPeriodic, NotConstructible, PaperContradiction
from .group import (
    Element,
    GroupContext,
    Subset,
    Symplectomorphism,
    apply_symplectomorphism,
)
from .sets import (
    difference_set,
    equivalence_classes,
    is_periodic,
    is_spectral_pair,
    is_tiling_pair,
    zero_set,
)
from .structure import (
    INF,
    build_catalog,
    canonical_c,
    canonical_d,
    difference_profile,
    normalizing_symplectomorphism,
    pair_normalizer,
    proj_label,
    profile_zero_set,
)


@dataclass
class Certificate:
    ctx: GroupContext
    claim: str  # "tile" or "spectral"
    set: Subset
    witness: Subset
    method: str
    matrix: Symplectomorphism | None = None
    shift: Element = Element(0, 0)
    verified: bool = False
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.claim not in ("tile", "spectral"):
            raise ValueError(f"unknown claim {self.claim!r}")
        if self.matrix is None:
            self.matrix = Symplectomorphism.identity(self.ctx.n)

    def check(self) -> bool:
        """Re-run the independent predicate on (set, witness)."""
        if self.claim == "tile":
            return bool(is_tiling_pair(self.set, self.witness))
        return is_spectral_pair(self.set, self.witness)

    def validate(self) -> "Certificate":
        self.verified = self.check()
        return self

    def to_dict(self) -> dict:
        return {
            "group": {"p": self.ctx.p, "m": self.ctx.m},
            "claim": self.claim,
            "set": self.set.as_lists(),
            "witness": self.witness.as_lists(),
            "method": self.method,
            "normalization": {"matrix": self.matrix.matrix(), "shift": list(self.shift)},
            "verified": self.verified,
            "diagnostics": self.diagnostics,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Certificate":
        ctx = GroupContext(int(data["group"]["p"]), int(data["group"]["m"]))
        norm = data.get("normalization") or {}
        (a, b), (c, d) = norm.get("matrix", [[1, 0], [0, 1]])
        return cls(
            ctx,
            data["claim"],
            Subset.from_elements(ctx, data["set"]),
            Subset.from_elements(ctx, data["witness"]),
            data["method"],
            Symplectomorphism(ctx.n, a, b, c, d),
            Element(*norm.get("shift", [0, 0])),
            bool(data.get("verified", False)),
            dict(data.get("diagnostics") or {}),
        )


def _to_origin(A: Subset) -> tuple[Subset, Element]:
    """Translate A so that it contains (0,0); returns (shifted set, removed offset)."""
    if A.mask & 1:
        return A, Element(0, 0)
    a0 = A.ctx.element(A.indices()[0])
    return A.translate(A.ctx.neg(a0)), a0


def _finish(cert: Certificate) -> Certificate:
    cert.validate()
    if not cert.verified:
        raise NotConstructible(f"{cert.method} construction did not validate for {cert.set}")
    return cert


def _log_p(ctx: GroupContext, k: int) -> int:
    t = 0
    while k > 1:
        k //= ctx.p
        t += 1
    return t


def _normalized_class(ctx: GroupContext, E: Subset) -> tuple[Symplectomorphism, int]:
    g = ctx.element(E.indices()[0])
    return normalizing_symplectomorphism(g, ctx), _log_p(ctx, ctx.element_order(g))


def _axis_set(ctx: GroupContext, xs, ys) -> Subset:
    return Subset.from_elements(ctx, ((x, y) for x in xs for y in ys))


def _nontrivial_classes(ctx: GroupContext):
    return [E for E in equivalence_classes(ctx).classes if E.mask != 1]


# general m -----------------------------------------------------------------


def spectrum_for_small_tile(A: Subset) -> Certificate:
    """Spectrum of a size-p tile: a coordinate digit set C_t in a chosen basis."""
    ctx = A.ctx
    if len(A) != ctx.p:
        raise ValueError(f"expected |A| = {ctx.p}, got {len(A)}")
    A0, shift = _to_origin(A)
    Z = zero_set(A0).members
    inside = [E for E in _nontrivial_classes(ctx) if E.issubset(Z)]
    if not inside:
        raise NotConstructible("zero set is empty, so A is not a tile")
    M, t = _normalized_class(ctx, inside[0])
    S = apply_symplectomorphism(M.inverse(), _axis_set(ctx, canonical_c(ctx, t), [0]))
    return _finish(Certificate(ctx, "spectral", A, S, "LmTSp", M, shift, diagnostics={"t": t}))


def spectrum_for_large_tile(A: Subset) -> Certificate:
    """Spectrum Z_n x D_t (in a chosen basis) of a tile of size p^(2m-1)."""
    ctx = A.ctx
    if len(A) * ctx.p != ctx.order:
        raise ValueError(f"expected |A| = {ctx.order // ctx.p}, got {len(A)}")
    A0, shift = _to_origin(A)
    D = difference_set(A0)
    free = [E for E in _nontrivial_classes(ctx) if E.isdisjoint(D)]
    if not free:
        raise NotConstructible("every class meets the difference set, so A is not a tile")
    M, t = _normalized_class(ctx, free[0])
    S = apply_symplectomorphism(M.inverse(), _axis_set(ctx, range(ctx.n), canonical_d(ctx, t)))
    return _finish(Certificate(ctx, "spectral", A, S, "LmTSq", M, shift, diagnostics={"t": t}))


def _require_spectral(A: Subset, S: Subset):
    if not is_spectral_pair(A, S):
        raise ValueError("(A, S) is not a symplectic spectral pair")


def complement_for_large_spectral(A: Subset, S: Subset) -> Certificate:
    """Tiling complement C_t x {0} (in a chosen basis) of a large spectral set."""
    ctx = A.ctx
    if not ctx.order // ctx.p <= len(A) < ctx.order:
        raise ValueError(f"expected {ctx.order // ctx.p} <= |A| < {ctx.order}, got {len(A)}")
    _require_spectral(A, S)
    A0, shift = _to_origin(A)
    D = difference_set(A0)
    free = [E for E in _nontrivial_classes(ctx) if E.isdisjoint(D)]
    if not free:
        raise PaperContradiction("spectral set of this size meets every class in its differences")
    if len(A) * ctx.p != ctx.order:
        raise PaperContradiction(f"spectral set of size {len(A)} strictly between p^(2m-1) and p^(2m)")
    M, t = _normalized_class(ctx, free[0])
    B = apply_symplectomorphism(M.inverse(), _axis_set(ctx, canonical_c(ctx, t), [0]))
    return _finish(Certificate(ctx, "tile", A, B, "LmSTq", M, shift, diagnostics={"t": t}))


def _power_of_p(ctx: GroupContext, size: int) -> int | None:
    k, t = 1, 0
    while k < size:
        k *= ctx.p
        t += 1
    return t if k == size else None


def _trivial_spectrum(A: Subset) -> Certificate | None:
    ctx = A.ctx
    if len(A) == 1:
        return _finish(Certificate(ctx, "spectral", A, Subset(ctx, 1), "trivial"))
    if len(A) == ctx.order:
        return _finish(Certificate(ctx, "spectral", A, Subset.whole(ctx), "trivial"))
    return None


def _trivial_complement(A: Subset) -> Certificate | None:
    ctx = A.ctx
    if len(A) == 1:
        return _finish(Certificate(ctx, "tile", A, Subset.whole(ctx), "trivial"))
    if len(A) == ctx.order:
        return _finish(Certificate(ctx, "tile", A, Subset(ctx, 1), "trivial"))
    return None


# Z_{p^2} x Z_{p^2} -----------------------------------------------------------


def _lmp2_witness(ctx: GroupContext, k, k2) -> tuple[Subset, Symplectomorphism]:
    """K_0 (+) C_{0,INF} carried back along the basis change k -> 0, k2 -> INF."""
    cat = build_catalog(ctx)
    M = pair_normalizer(k, k2, ctx)
    W = cat.K_k[0].members.sumset(cat.C[0, INF])
    return apply_symplectomorphism(M.inverse(), W), M


def _require_m2(ctx: GroupContext):
    if ctx.m != 2:
        raise ValueError(f"this construction needs m = 2, got m = {ctx.m}")


def _not_a_tile_or_contradiction(A: Subset, B: Subset | None, message: str, profile):
    if B is None:
        from .oracle import find_tiling_complements

        if not find_tiling_complements(A, 1):
            raise NotConstructible("A is not a tile")
    raise PaperContradiction(message, profile)


def spectrum_for_tile(A: Subset, B: Subset | None = None) -> Certificate:
    """Spectrum of a tile in Z_{p^2} x Z_{p^2}, dispatching on |A|."""
    ctx = A.ctx
    _require_m2(ctx)
    p = ctx.p
    if B is not None and not is_tiling_pair(A, B):
        raise ValueError("(A, B) is not a tiling pair")
    trivial = _trivial_spectrum(A)
    if trivial:
        return trivial
    size = len(A)
    if size == p:
        return spectrum_for_small_tile(A)
    if size == p ** 3:
        return spectrum_for_large_tile(A)
    if size != p * p:
        raise NotConstructible(f"|A| = {size} is not a power of {p}, so A is not a tile")

    cat = build_catalog(ctx)
    A0, shift = _to_origin(A)
    Z = zero_set(A0).members
    prof = profile_zero_set(A0, cat)
    delta_K = cat.K.members - Subset(ctx, 1)
    diag = {"profile": prof.to_dict()}

    if delta_K.issubset(Z):
        return _finish(Certificate(ctx, "spectral", A, cat.K.members, "ThmMain-case-i", shift=shift, diagnostics=diag))

    if delta_K.isdisjoint(Z):
        method = "LmKC"
        if B is None:
            from .oracle import find_tiling_complements

            found = find_tiling_complements(A, 1)
            if not found:
                raise NotConstructible("A is not a tile")
            B = found[0]
            method = "oracle-fallback"
            diag["route"] = "LmKC"
        return _finish(Certificate(ctx, "spectral", A, B, method, shift=shift, diagnostics=diag))

    hits = [cat.H[j, k] for k in prof.M for j in range(p) if prof.e_membership[j, k]]
    if hits:
        H = min(hits, key=lambda H: H.mask)
        return _finish(Certificate(ctx, "spectral", A, H.members, "ThmMain-case-iii-a", shift=shift, diagnostics=diag))

    for k2 in prof.M_prime:
        if all(prof.e_membership[j, k2] for j in range(p)):
            k = prof.M[0]
            S, M = _lmp2_witness(ctx, k, k2)
            diag["pair"] = [proj_label(k), proj_label(k2)]
            return _finish(Certificate(ctx, "spectral", A, S, "LmP2i", M, shift, diagnostics=diag))

    _not_a_tile_or_contradiction(A, B, "tile of size p^2 reached the excluded zero-set pattern", prof.to_dict())


def _complement_catalog(ctx: GroupContext) -> list[tuple[str, Subset]]:
    """Lagrangians, K_k (+) C_{j,k'} and C_{j,k} (+) C_{j',k'} for k != k', by mask."""
    cat = build_catalog(ctx)
    out = {}
    for label, H in cat.lagrangians():
        out.setdefault(H.mask, (label, H.members))
    for k in cat.indices:
        for j, k2 in cat.pairs:
            if k2 == k:
                continue
            S = cat.K_k[k].members.sumset(cat.C[j, k2])
            out.setdefault(S.mask, (f"K[{proj_label(k)}]+C[{j},{proj_label(k2)}]", S))
    for j, k in cat.pairs:
        for j2, k2 in cat.pairs:
            if k2 == k:
                continue
            S = cat.C[j, k].sumset(cat.C[j2, k2])
            label = f"C[{j},{proj_label(k)}]+C[{j2},{proj_label(k2)}]"
            out.setdefault(S.mask, (label, S))
    return [out[key] for key in sorted(out)]


def complement_for_spectral(A: Subset, S: Subset) -> Certificate:
    """Tiling complement of a spectral set in Z_{p^2} x Z_{p^2}, dispatching on |A|."""
    ctx = A.ctx
    _require_m2(ctx)
    p = ctx.p
    _require_spectral(A, S)
    size = len(A)
    if size > 1 and (size % p or _power_of_p(ctx, size) is None):
        raise PaperContradiction(f"spectral set of size {size}, which is not a power of {p}")
    trivial = _trivial_complement(A)
    if trivial:
        return trivial
    if size >= p ** 3:
        return complement_for_large_spectral(A, S)
    A0, shift = _to_origin(A)
    S0, _ = _to_origin(S)
    if size == p * p:
        return _complement_p2(A, A0, S0, shift)
    return _complement_p(A, A0, shift)


def _complement_p2(A: Subset, A0: Subset, S0: Subset, shift) -> Certificate:
    ctx = A.ctx
    cat = build_catalog(ctx)
    D = difference_set(A0)
    for label, B in _complement_catalog(ctx):
        if len(B) * len(A) == ctx.order and D.isdisjoint(difference_set(B)):
            return _finish(Certificate(ctx, "tile", A, B, "ThmMain-case-p2-1", shift=shift, diagnostics={"catalog": label}))

    prof = difference_profile(A0, cat)
    M = [k for k in cat.indices if not cat.delta_K(k).isdisjoint(D)]
    M_prime = [k for k in cat.indices if k not in M]
    if not M_prime:
        return _finish(Certificate(ctx, "tile", A, S0, "LmKC", shift=shift, diagnostics={"profile": prof}))
    for k2 in M:
        if cat.E_union(k2).isdisjoint(D):
            k = M_prime[0]
            B, Mx = _lmp2_witness(ctx, k, k2)
            diag = {"profile": prof, "pair": [proj_label(k), proj_label(k2)]}
            return _finish(Certificate(ctx, "tile", A, B, "LmP2ii", Mx, shift, diagnostics=diag))
    raise PaperContradiction("spectral set of size p^2 reached an excluded difference pattern", prof)


def _complement_p(A: Subset, A0: Subset, shift) -> Certificate:
    ctx = A.ctx
    cat = build_catalog(ctx)
    D = difference_set(A0)
    prof = difference_profile(A0, cat)
    lagrangians = [(label, H.members) for label, H in cat.lagrangians() if D.isdisjoint(difference_set(H.members))]
    if not lagrangians:
        raise PaperContradiction("difference set of a size-p spectral set meets every Lagrangian", prof)

    for label, B in lagrangians:
        AB = difference_set(A0.sumset(B))
        for j, k in cat.pairs:
            if cat.E[j, k].isdisjoint(AB):
                W = B.sumset(cat.C[j, k])
                diag = {"profile": prof, "lagrangian": label, "extension": f"C[{j},{proj_label(k)}]"}
                return _finish(Certificate(ctx, "tile", A, W, "ThmMain-case-p-2.1", shift=shift, diagnostics=diag))
        for k in cat.indices:
            if cat.delta_K(k).isdisjoint(AB):
                W = B.sumset(cat.K_k[k].members)
                diag = {"profile": prof, "lagrangian": label, "extension": f"K[{proj_label(k)}]"}
                return _finish(Certificate(ctx, "tile", A, W, "ThmMain-case-p-2.1", shift=shift, diagnostics=diag))

    if all(label == "K" for label, _ in lagrangians):
        raise PaperContradiction("size-p spectral set with only K as a disjoint Lagrangian", prof)
    for k in cat.indices:
        Kperp = cat.K_perp(k).members
        if not (A0.issubset(Kperp) and cat.delta_K(k).isdisjoint(D)):
            continue
        for j in range(ctx.p):
            if cat.E[j, k].isdisjoint(D):
                g = ctx.element((Kperp.complement()).indices()[0])
                T = Subset.from_elements(ctx, (ctx.scale(c, g) for c in range(ctx.p)))
                W = cat.H[j, k].members.sumset(T)
                diag = {"profile": prof, "subgroup": f"K[{proj_label(k)}]^perp", "lagrangian": f"H[{j},{proj_label(k)}]"}
                return _finish(Certificate(ctx, "tile", A, W, "ThmMain-case-p-2.2.2", shift=shift, diagnostics=diag))
    raise PaperContradiction("size-p spectral set reached an excluded difference pattern", prof)


# any m: the dispatchers used by the command line ------------------------------


def construct_spectrum(A: Subset, B: Subset | None = None) -> Certificate:
    ctx = A.ctx
    if ctx.m == 2:
        return spectrum_for_tile(A, B)
    if B is not None and not is_tiling_pair(A, B):
        raise ValueError("(A, B) is not a tiling pair")
    trivial = _trivial_spectrum(A)
    if trivial:
        return trivial
    if len(A) == ctx.p:
        return spectrum_for_small_tile(A)
    if len(A) * ctx.p == ctx.order:
        return spectrum_for_large_tile(A)
    raise NotConstructible(f"no construction for |A| = {len(A)} with m = {ctx.m}")


def construct_complement(A: Subset, S: Subset) -> Certificate:
    ctx = A.ctx
    if ctx.m == 2:
        return complement_for_spectral(A, S)
    _require_spectral(A, S)
    trivial = _trivial_complement(A)
    if trivial:
        return trivial
    if len(A) * ctx.p >= ctx.order:
        return complement_for_large_spectral(A, S)
    raise NotConstructible(f"no construction for |A| = {len(A)} with m = {ctx.m}")


# periodic replacement -----------------------------------------------------------


def periodic_replacement(A: Subset, B: Subset, strict: bool = True) -> Certificate:
    """Replace one side of a non-periodic tiling pair by a periodic set.

    With strict=False the construction also runs on pairs that already have a
    periodic component, which is how it gets exercised in Z_4 x Z_4 where
    every tiling pair has one.
    """
    ctx = A.ctx
    _require_m2(ctx)
    if not is_tiling_pair(A, B):
        raise ValueError("(A, B) is not a tiling pair")
    for name, X in (("A", A), ("B", B)):
        if strict and is_periodic(X):
            raise AlreadyPeriodic(f"component {name} is already periodic; the identity replacement applies", name)

    swapped = len(A) < len(B)
    big, small = (B, A) if swapped else (A, B)
    side, W, method, note = _replace(big, small)
    if side == "big":
        big = W
    else:
        small = W
    first, second = (small, big) if swapped else (big, small)
    replaced = "A" if (side == "big") != swapped else "B"
    diag = {"replaced": replaced, "choice": note}
    cert = _finish(Certificate(ctx, "tile", first, second, method, diagnostics=diag))
    period = is_periodic(W)
    if period is None:
        raise NotConstructible("replacement component is not periodic")
    cert.diagnostics["period"] = [list(g) for g in period.members]
    return cert


def _replace(A: Subset, B: Subset):
    """A is the larger side. Returns (side, replacement, method, note), side in {"big", "small"}."""
    ctx = A.ctx
    p = ctx.p
    cat = build_catalog(ctx)
    A0, _ = _to_origin(A)
    B0, _ = _to_origin(B)
    if len(B) == 1:
        return "big", Subset.whole(ctx), "trivial", "G"
    if (len(A), len(B)) == (p ** 3, p):
        for k in cat.indices:
            if is_tiling_pair(A0, cat.K_k[k].members):
                return "small", cat.K_k[k].members, "periodic-Kk", f"K[{proj_label(k)}]"
        for k in cat.indices:
            Kperp = cat.K_perp(k).members
            if is_tiling_pair(Kperp, B0):
                return "big", Kperp, "periodic-Kperp", f"K[{proj_label(k)}]^perp"
        raise PaperContradiction("no periodic replacement for a (p^3, p) pair")
    if (len(A), len(B)) != (p * p, p * p):
        raise ValueError(f"unexpected sizes {len(A)}, {len(B)} for a tiling pair")

    D = difference_set(A0)
    meets_K = {k: not cat.delta_K(k).isdisjoint(D) for k in cat.indices}
    meets_E = {jk: not cat.E[jk].isdisjoint(D) for jk in cat.pairs}
    if all(meets_K.values()):
        return "big", cat.K.members, "periodic-K", "K"
    if not any(meets_K.values()):
        # A is a transversal of K
        return "small", cat.K.members, "periodic-K", "K"
    for j, k in cat.pairs:
        if meets_K[k] and meets_E[j, k]:
            return "big", cat.H[j, k].members, "periodic-H", f"H[{j},{proj_label(k)}]"
    for j, k in cat.pairs:
        if not meets_K[k] and not meets_E[j, k]:
            return "small", cat.H[j, k].members, "periodic-H", f"H[{j},{proj_label(k)}]"
    M = [k for k in cat.indices if meets_K[k]]
    M_prime = [k for k in cat.indices if not meets_K[k]]
    for k2 in M:
        if cat.E_union(k2).isdisjoint(D):
            W, _ = _lmp2_witness(ctx, M_prime[0], k2)
            return "small", W, "LmP2ii", f"pair {proj_label(M_prime[0])},{proj_label(k2)}"
    raise PaperContradiction("no periodic replacement for a (p^2, p^2) pair")
