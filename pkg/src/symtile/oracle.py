"""Brute-force ground truth for tiling and spectral status.

Nothing here calls the constructions in ``construct``: complements come from
an exact-cover search, spectra from a clique search in the graph whose edges
are differences lying in the zero set.
"""
from __future__ import annotations

import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from .cyclotomic import exponent_vector, is_vanishing_sum, remainder_rows
from .group import (
    GroupContext,
    Subset,
    enumerate_subgroups,
    generated_subgroup,
    indices_mask,
    mask_indices,
    symplectic_orthogonal,
)
from .sets import (
    difference_set,
    dilate,
    equivalence_classes,
    is_tiling_pair,
    tiling_by_coverage,
    tiling_by_differences,
    zero_set,
)

P2 = GroupContext(2, 2)
P3 = GroupContext(3, 2)


@dataclass
class SearchReport:
    population: str
    counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    elapsed: float = field(default=0.0, compare=False)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "population": self.population,
            "counts": {str(k): v for k, v in self.counts.items()},
            "failures": self.failures,
            "notes": self.notes,
            "elapsed": round(self.elapsed, 3),
            "ok": self.ok,
        }


# index-level helpers ----------------------------------------------------------


@lru_cache(maxsize=None)
def _lists(ctx: GroupContext):
    t = ctx.tables()
    return t.add.tolist(), t.sub.tolist(), t.neg.tolist()


def _translate_mask(ctx: GroupContext, mask: int, h: int) -> int:
    add = _lists(ctx)[0]
    out = 0
    for i in mask_indices(mask):
        out |= 1 << add[i][h]
    return out


def _diff_mask(ctx: GroupContext, idx: list[int]) -> int:
    sub = _lists(ctx)[1]
    out = 0
    for i in idx:
        row = sub[i]
        for j in idx:
            out |= 1 << row[j]
    return out & ~1


# exact cover ------------------------------------------------------------------


def _cover_search(ctx: GroupContext, A_idx: list[int], limit: int) -> list[int]:
    """Complements B of A with (0,0) in B, as masks, in search order."""
    N = ctx.order
    k = len(A_idx)
    if k == 0 or N % k:
        return []
    full = (1 << N) - 1
    add, sub, _ = _lists(ctx)
    tmask = [0] * N
    for b in range(N):
        m = 0
        for a in A_idx:
            m |= 1 << add[a][b]
        if m.bit_count() == k:
            tmask[b] = m
    # placements covering cell c: b = c - a
    cell_opts = [[(sub[c][a], tmask[sub[c][a]]) for a in A_idx] for c in range(N)]
    found: list[int] = []

    def dfs(covered: int, chosen: int):
        if covered == full:
            found.append(chosen)
            return len(found) >= limit
        best = None
        free = full & ~covered
        while free:
            low = free & -free
            c = low.bit_length() - 1
            free ^= low
            viable = [(b, m) for b, m in cell_opts[c] if m and not m & covered]
            if not viable:
                return False
            if best is None or len(viable) < len(best):
                best = viable
                if len(best) == 1:
                    break
        for b, m in best:
            if dfs(covered | m, chosen | 1 << b):
                return True
        return False

    if tmask[0]:
        dfs(tmask[0], 1)
    return found


def find_tiling_complements(A: Subset, limit: int = 1) -> list[Subset]:
    """Tiling complements of A containing (0,0), sorted by mask; at most ``limit``.

    Every complement is a translate of one of these, so an empty list means
    A is not a tile.
    """
    masks = _cover_search(A.ctx, A.indices(), limit)
    return [Subset(A.ctx, m) for m in sorted(masks)]


# cliques ------------------------------------------------------------------------


def _clique_search(ctx: GroupContext, zmask: int, k: int, limit: int) -> list[int]:
    """Sets S containing 0 with |S| = k and S - S minus 0 inside zmask."""
    if k == 1:
        return [1]
    if zmask.bit_count() < k - 1:
        return []
    nbr = {v: _translate_mask(ctx, zmask, v) for v in mask_indices(zmask)}
    found: list[int] = []

    def colour_bound(P: int) -> int:
        colours, U = 0, P
        while U:
            colours += 1
            Q = U
            while Q:
                low = Q & -Q
                v = low.bit_length() - 1
                U &= ~low
                Q &= ~low & ~nbr[v]
        return colours

    def dfs(chosen: int, size: int, P: int) -> bool:
        if size == k:
            found.append(chosen)
            return len(found) >= limit
        need = k - size
        if P.bit_count() < need or colour_bound(P) < need:
            return False
        while P:
            low = P & -P
            v = low.bit_length() - 1
            P ^= low
            if P.bit_count() + 1 < need:
                return False
            if dfs(chosen | low, size + 1, P & nbr[v]):
                return True
        return False

    dfs(1, 1, zmask)
    return found


def find_spectra(A: Subset, limit: int = 1, form: str = "symplectic") -> list[Subset]:
    """Spectra of A containing (0,0), sorted by mask; at most ``limit``."""
    if not A.mask:
        return []
    z = zero_set(A, form).mask
    return [Subset(A.ctx, m) for m in sorted(_clique_search(A.ctx, z, len(A), limit))]


# exhaustive tables ---------------------------------------------------------------


@dataclass
class ExhaustiveTables:
    """Per-subset status for every subset of a group with at most 16 elements."""

    ctx: GroupContext
    zero: np.ndarray  # symplectic zero-set mask per subset
    tile: np.ndarray  # bool
    spectral: np.ndarray  # bool
    complement: list  # one complement mask per subset (0 if none)
    spectrum: list  # one spectrum mask per subset (0 if none)

    def subsets(self, kind: str, size: int | None = None):
        table = self.tile if kind == "tile" else self.spectral
        for mask in np.flatnonzero(table):
            mask = int(mask)
            if size is None or mask.bit_count() == size:
                yield Subset(self.ctx, mask)


def bulk_zero_masks(ctx: GroupContext) -> np.ndarray:
    """Symplectic zero-set masks of all 2^|G| subsets (|G| <= 16)."""
    N, n = ctx.order, ctx.n
    if N > 16:
        raise ValueError("bulk enumeration is limited to groups of order <= 16")
    masks = np.arange(1 << N, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(N)) & 1).astype(np.int32)
    form = ctx.tables().form
    zero = np.zeros(1 << N, dtype=np.int64)
    for xi in range(1, N):
        onehot = np.zeros((N, n), dtype=np.int32)
        onehot[np.arange(N), form[:, xi]] = 1
        counts = bits @ onehot
        vanish = ~np.any(remainder_rows(counts, ctx.p, ctx.m), axis=1)
        zero |= vanish.astype(np.int64) << xi
    zero[0] = 0
    return zero


def _tile_chunk(args):
    p, m, lo, hi = args
    ctx = GroupContext(p, m)
    N = ctx.order
    out = []
    for mask in range(lo, hi):
        k = mask.bit_count()
        if k and N % k == 0:
            found = _cover_search(ctx, mask_indices(mask), 1)
            out.append(found[0] if found else 0)
        else:
            out.append(0)
    return out


def exhaustive_tables(ctx: GroupContext, threads: int = 1) -> ExhaustiveTables:
    N = ctx.order
    total = 1 << N
    zero = bulk_zero_masks(ctx)
    chunks = [(ctx.p, ctx.m, lo, min(total, lo + 4096)) for lo in range(0, total, 4096)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_tile_chunk, chunks))
    else:
        parts = [_tile_chunk(c) for c in chunks]
    complement = [m for part in parts for m in part]
    tile = np.array([m != 0 for m in complement])

    cache: dict[tuple[int, int], int] = {}
    spectrum = [0] * total
    for mask in range(1, total):
        key = (int(zero[mask]), mask.bit_count())
        if key not in cache:
            found = _clique_search(ctx, key[0], key[1], 1)
            cache[key] = found[0] if found else 0
        spectrum[mask] = cache[key]
    spectral = np.array([m != 0 for m in spectrum])
    return ExhaustiveTables(ctx, zero, tile, spectral, complement, spectrum)


# verification drivers ---------------------------------------------------------------


def _size_counts(tables: ExhaustiveTables) -> dict:
    sizes = np.array([bin(m).count("1") for m in range(len(tables.tile))])
    counts = {}
    for s in range(tables.ctx.order + 1):
        sel = sizes == s
        counts[s] = {
            "subsets": int(sel.sum()),
            "tiles": int(tables.tile[sel].sum()),
            "spectral": int(tables.spectral[sel].sum()),
        }
    return counts


def verify_fuglede(
    ctx: GroupContext,
    mode: str = "exhaustive",
    budget: int = 200,
    seed: int = 0,
    threads: int = 1,
    tables: ExhaustiveTables | None = None,
) -> SearchReport:
    """Compare tile status with spectral status over a population of subsets."""
    start = time.perf_counter()
    if mode == "exhaustive":
        if ctx.order > 16:
            raise ValueError("exhaustive mode needs a group with at most 16 elements")
        tables = tables or exhaustive_tables(ctx, threads)
        report = SearchReport(f"all subsets of Z_{ctx.n} x Z_{ctx.n}")
        report.counts = _size_counts(tables)
        for mask in np.flatnonzero(tables.tile != tables.spectral)[:20]:
            report.failures.append(_mismatch(Subset(ctx, int(mask)), bool(tables.tile[mask])))
        report.notes["mismatches"] = int(np.sum(tables.tile != tables.spectral))
        report.notes["complete"] = True
    elif mode == "sampled":
        report = _sampled(ctx, budget, seed)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    report.elapsed = time.perf_counter() - start
    return report


def _mismatch(A: Subset, tile: bool) -> dict:
    return {"set": A.as_lists(), "tile": tile, "spectral": not tile}


def tile_status(A: Subset) -> bool:
    return bool(_cover_search(A.ctx, A.indices(), 1))


def spectral_status(A: Subset) -> bool:
    return bool(find_spectra(A, 1))


def _bump(counts: dict, size: int, tile: bool, spectral: bool):
    c = counts.setdefault(size, {"subsets": 0, "tiles": 0, "spectral": 0})
    c["subsets"] += 1
    c["tiles"] += tile
    c["spectral"] += spectral


def random_transversal(H: Subset, rng: random.Random) -> Subset:
    """A random set meeting every coset of the subgroup H exactly once."""
    ctx = H.ctx
    seen, picks = 0, []
    order = list(range(ctx.order))
    rng.shuffle(order)
    for g in order:
        if seen >> g & 1:
            continue
        coset = _translate_mask(ctx, H.mask, g)
        seen |= coset
        picks.append(rng.choice(mask_indices(coset)))
    return Subset.from_indices(ctx, picks)


def generated_tiles(ctx: GroupContext, count: int, rng: random.Random) -> list[Subset]:
    """Tiles built as random transversals of random proper subgroups."""
    subgroups = [H for H in enumerate_subgroups(ctx) if 1 < len(H) < ctx.order]
    return [random_transversal(rng.choice(subgroups).members, rng) for _ in range(count)]


def _catalog_tiles(ctx: GroupContext) -> list[Subset]:
    if ctx.m != 2:
        return []
    from .structure import build_catalog

    cat = build_catalog(ctx)
    out = [cat.K.members] + [cat.H[jk].members for jk in cat.pairs] + [cat.C[jk] for jk in cat.pairs]
    out += [cat.K_k[k].members for k in cat.indices] + [cat.K_perp(k).members for k in cat.indices]
    return out


def _sampled(ctx: GroupContext, budget: int, seed: int) -> SearchReport:
    rng = random.Random(seed)
    report = SearchReport(f"sampled subsets of Z_{ctx.n} x Z_{ctx.n} (regression evidence, not a proof)")
    N, p = ctx.order, ctx.p
    classes = {"size-p": 0, "generated": 0, "random": 0}
    for rest in combinations(range(1, N), p - 1):
        A = Subset.from_indices(ctx, (0,) + rest)
        t, s = tile_status(A), spectral_status(A)
        _bump(report.counts, p, t, s)
        classes["size-p"] += 1
        if t != s:
            report.failures.append(_mismatch(A, t))
    for A in generated_tiles(ctx, budget, rng) + _catalog_tiles(ctx):
        t, s = tile_status(A), spectral_status(A)
        _bump(report.counts, len(A), t, s)
        classes["generated"] += 1
        if not (t and s):
            report.failures.append({"set": A.as_lists(), "tile": t, "spectral": s, "generated": True})
    for _ in range(budget):
        size = rng.randint(1, N)
        A = Subset.from_indices(ctx, rng.sample(range(N), size))
        t, s = tile_status(A), spectral_status(A)
        _bump(report.counts, size, t, s)
        classes["random"] += 1
        if t != s:
            report.failures.append(_mismatch(A, t))
    report.counts = dict(sorted(report.counts.items()))
    report.notes = {"classes": classes, "seed": seed, "budget": budget, "complete": False}
    return report


# lemma battery --------------------------------------------------------------------------


def _random_subset(ctx: GroupContext, rng: random.Random, lo: int = 1, hi: int | None = None) -> Subset:
    hi = hi or ctx.order
    return Subset.from_indices(ctx, rng.sample(range(ctx.order), rng.randint(lo, hi)))


def _structured_subset(ctx: GroupContext, rng: random.Random) -> Subset:
    """Disjoint translates of a random progression {c*g : c < p}; has nonempty zero set."""
    g = rng.randrange(1, ctx.order)
    base = Subset.from_elements(ctx, (ctx.scale(c, ctx.element(g)) for c in range(ctx.p)))
    if len(base) < ctx.p:
        return base
    mask = 0
    for _ in range(rng.randint(1, ctx.order // ctx.p)):
        tr = _translate_mask(ctx, base.mask, rng.randrange(ctx.order))
        if not tr & mask:
            mask |= tr
    return Subset(ctx, mask)


def _all_subgroup_contexts():
    return [P2, P3]


def _check_poisson(trials, rng, report):
    contexts = [GroupContext(p, m) for p, m in ((2, 1), (3, 1), (2, 3), (5, 1))]
    population = [H for ctx in _all_subgroup_contexts() for H in enumerate_subgroups(ctx)]
    for _ in range(trials):
        ctx = rng.choice(contexts + _all_subgroup_contexts())
        gens = [ctx.element(rng.randrange(ctx.order)) for _ in range(2)]
        population.append(generated_subgroup(ctx, gens))
    for H in population:
        ctx = H.ctx
        perp = symplectic_orthogonal(H).members
        for xi in range(ctx.order):
            v = exponent_vector(H.members, ctx.element(xi))
            if perp.mask >> xi & 1:
                ok = v[0] == len(H) and not v[1:].any()
            else:
                ok = is_vanishing_sum(v)
            if not ok:
                report.failures.append({"subgroup": H.members.as_lists(), "xi": list(ctx.element(xi))})
    return len(population)


def _check_zero_set(trials, rng, report):
    checked = 0
    for ctx in _all_subgroup_contexts():
        subgroups = enumerate_subgroups(ctx)
        for H in subgroups:
            perp = symplectic_orthogonal(H).members
            if zero_set(H.members).members != perp.complement():
                report.failures.append({"lemma": "Z(H) = G minus H^perp", "subgroup": H.members.as_lists()})
            checked += 1
        proper = [H for H in subgroups if 1 < len(H) < ctx.order]
        for _ in range(trials):
            H = rng.choice(proper)
            A = random_transversal(H.members, rng) if rng.random() < 0.5 else _random_subset(ctx, rng)
            dperp = difference_set(symplectic_orthogonal(H).members)
            predicted = len(A) * len(H) == ctx.order and dperp.issubset(zero_set(A).members)
            if predicted != bool(is_tiling_pair(A, H.members)):
                report.failures.append({"lemma": "complements of H", "set": A.as_lists(), "subgroup": H.members.as_lists()})
            checked += 1
    return checked


def _check_counting(trials, rng, report):
    """Draws (A, x) until ``trials`` pairs with x in Z(A) have been checked."""
    ctx = P3
    checked = drawn = 0
    while checked < trials and drawn < 50 * trials:
        drawn += 1
        A = _structured_subset(ctx, rng) if drawn % 2 else _random_subset(ctx, rng)
        zs = zero_set(A).members.indices()
        if not zs:
            continue
        x = ctx.element(rng.choice(zs))
        checked += 1
        big = symplectic_orthogonal(generated_subgroup(ctx, [ctx.scale(ctx.p, x)])).members
        small = symplectic_orthogonal(generated_subgroup(ctx, [x])).members
        if len(A & big) != ctx.p * len(A & small):
            report.failures.append({"set": A.as_lists(), "x": list(x)})
    report.notes["drawn"] = drawn
    return checked


def _check_uncertainty(trials, rng, report):
    ctx = P3
    population = [H.members for H in enumerate_subgroups(ctx)]
    population += [_random_subset(ctx, rng) for _ in range(trials)]
    population += [_structured_subset(ctx, rng) for _ in range(trials // 4)]
    for A in population:
        supp = ctx.order - len(zero_set(A).members)
        if len(A) * supp < ctx.order:
            report.failures.append({"set": A.as_lists(), "support": supp})
    return len(population)


def _check_gen_closure(trials, rng, report):
    checked = 0
    for ctx in (P2, P3):
        classes = equivalence_classes(ctx).classes
        for i in range(trials):
            A = _random_subset(ctx, rng) if i % 2 else _structured_subset(ctx, rng)
            # scalar path on purpose: independent of the batched zero-set code
            zmask = indices_mask(
                xi for xi in range(1, ctx.order) if is_vanishing_sum(exponent_vector(A, ctx.element(xi)))
            )
            for E in classes:
                hit = zmask & E.mask
                if hit and hit != E.mask:
                    report.failures.append({"set": A.as_lists(), "class": E.as_lists()})
            checked += 1
    return checked


def _check_annihilation(trials, rng, report):
    checked = 0
    for ctx in (P2, P3):
        subgroups = [(H, difference_set(H.members)) for H in enumerate_subgroups(ctx)]
        for i in range(trials):
            A = _random_subset(ctx, rng, 1, ctx.order - 1) if i % 2 else _structured_subset(ctx, rng)
            Z = zero_set(A).members
            for H, dH in subgroups:
                if len(H) > len(A) and dH.issubset(Z):
                    report.failures.append({"set": A.as_lists(), "subgroup": H.members.as_lists()})
            checked += 1
    return checked


def _check_rotation(trials, rng, report):
    checked = 0
    for ctx in (P2, P3):
        for i in range(trials):
            A = _random_subset(ctx, rng) if i % 2 else _structured_subset(ctx, rng)
            zs, ze = zero_set(A, "symplectic").members, zero_set(A, "euclidean").members
            for s in range(ctx.order):
                s1, s2 = ctx.element(s)
                if (ze.mask >> s & 1) != (zs.mask >> ctx.index(ctx.reduce(-s2, s1)) & 1):
                    report.failures.append({"set": A.as_lists(), "s": [s1, s2]})
            checked += 1
    return checked


def tiling_pairs(tables: ExhaustiveTables, max_size: int | None = None):
    """Every (A, B) with A a tile (of size <= max_size) and B a complement containing 0."""
    ctx = tables.ctx
    for A in tables.subsets("tile"):
        if max_size is not None and len(A) > max_size:
            continue
        for m in _cover_search(ctx, A.indices(), 1 << 30):
            yield A, Subset(ctx, m)


@lru_cache(maxsize=None)
def _p2_tables() -> ExhaustiveTables:
    return exhaustive_tables(P2)


def _check_dilation(trials, rng, report, tables=None):
    tables = tables or _p2_tables()
    checked = 0
    n = tables.ctx.n
    for A, B in tiling_pairs(tables, max_size=4):
        for q in range(1, n + 1):
            if math.gcd(q, len(A)) != 1:
                continue
            if not is_tiling_pair(dilate(A, q), B):
                report.failures.append({"set": A.as_lists(), "complement": B.as_lists(), "q": q})
            checked += 1
    ctx = P3
    subgroups = [H for H in enumerate_subgroups(ctx) if 1 < len(H) < ctx.order]
    for _ in range(trials):
        H = rng.choice(subgroups).members
        A = random_transversal(H, rng)
        q = rng.choice([q for q in range(1, 10 * ctx.n) if math.gcd(q, len(A)) == 1])
        if not is_tiling_pair(dilate(A, q), H):
            report.failures.append({"set": A.as_lists(), "complement": H.as_lists(), "q": q})
        checked += 1
    return checked


def _check_diff_classes(trials, rng, report, tables=None):
    tables = tables or _p2_tables()
    ctx = tables.ctx
    class_masks = [E.mask for E in equivalence_classes(ctx).classes if E.mask != 1]
    checked = 0
    for A, B in tiling_pairs(tables):
        da, db = _diff_mask(ctx, A.indices()), _diff_mask(ctx, B.indices())
        if da & db:
            report.failures.append({"set": A.as_lists(), "complement": B.as_lists(), "reason": "not a tiling pair"})
        for E in class_masks:
            if da & E and db & E:
                report.failures.append({"set": A.as_lists(), "complement": B.as_lists(), "class": mask_indices(E)})
        checked += 1
    return checked


def _check_tiling_routes(trials, rng, report):
    checked = 0
    for ctx in (P2, P3):
        subgroups = [H for H in enumerate_subgroups(ctx) if 1 < len(H) < ctx.order]
        for i in range(trials):
            H = rng.choice(subgroups).members
            A = random_transversal(H, rng)
            B = H if i % 2 else Subset.from_indices(ctx, rng.sample(range(ctx.order), len(H)))
            if tiling_by_differences(A, B) != tiling_by_coverage(A, B)[0]:
                report.failures.append({"set": A.as_lists(), "other": B.as_lists()})
            checked += 1
    return checked


def _check_pl3_premise(trials, rng, report):
    """Sets of size 2p^2 in Z_9 x Z_9 meeting the three zero-set premises must not be spectral."""
    from .structure import build_catalog

    ctx = P3
    cat = build_catalog(ctx)
    satisfied = 0
    candidates = []
    for j, k in cat.pairs:
        H = cat.H[j, k].members
        cosets = sorted({_translate_mask(ctx, H.mask, g) for g in range(ctx.order)})
        for _ in range(max(1, trials // len(cat.pairs))):
            a, b = rng.sample(cosets, 2)
            candidates.append(Subset(ctx, a | b))
    for A in candidates:
        Z = zero_set(A).members
        hit = None
        for (j0, k0) in cat.pairs:
            dH = cat.H[j0, k0].members - Subset(ctx, 1)
            if not dH.issubset(Z):
                continue
            for k1 in cat.indices:
                if k1 == k0 or not cat.E_union(k1).issubset(Z):
                    continue
                for k2 in cat.indices:
                    if k2 not in (k0, k1) and cat.delta_K(k2).issubset(Z):
                        hit = (j0, k0, k1, k2)
                        break
                if hit:
                    break
            if hit:
                break
        if hit is None:
            continue
        satisfied += 1
        if find_spectra(A, 1):
            report.failures.append({"set": A.as_lists(), "premise": [str(x) for x in hit]})
    report.notes["premise_satisfied"] = satisfied
    report.notes["vacuous"] = satisfied == 0
    return len(candidates)


LEMMAS = {
    "poisson": _check_poisson,
    "zero-set": _check_zero_set,
    "counting": _check_counting,
    "uncertainty": _check_uncertainty,
    "dilation": _check_dilation,
    "diff-classes": _check_diff_classes,
    "gen-closure": _check_gen_closure,
    "annihilation-bound": _check_annihilation,
    "rotation": _check_rotation,
    "tiling-routes": _check_tiling_routes,
    "pl3-premise": _check_pl3_premise,
}


def lemma_check(name: str, trials: int = 100, seed: int = 0) -> SearchReport:
    if name not in LEMMAS:
        raise ValueError(f"unknown lemma tag {name!r}; choose from {sorted(LEMMAS)}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    start = time.perf_counter()
    rng = random.Random(seed)
    report = SearchReport(f"lemma {name}")
    checked = LEMMAS[name](trials, rng, report)
    report.counts = {"checked": checked, "failures": len(report.failures)}
    report.notes.update({"seed": seed, "trials": trials})
    report.elapsed = time.perf_counter() - start
    return report
