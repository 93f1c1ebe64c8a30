"""Search for building data satisfying the degree-20 criterion.

The search never enumerates the ``L_chi``.  Pic(Y4) is torsion free, so
each ``L_chi`` is half the corresponding relation sum, and it exists iff
that sum is divisible by two.

Writing ``sigma(c)`` for the element whose ``D_sigma`` contains the curve
``c``, the two leading bits of ``sigma(c)`` say which anticanonical block
``c`` lies in (``00`` is the block of the subgroup ``<0001, 0010>``).  The
two trailing bits pick a slot inside the block.  Divisibility of every
relation sum is then a linear condition over F_2 on the sets

    T3 = {c : sigma(c)_3 = 1},   T4 = {c : sigma(c)_4 = 1},

namely that each has class sum divisible by two.  The vanishing condition
``h0(K + L_chi) = 0`` for a character with trailing bits ``(j3, j4)``
depends on ``T3``, ``T4`` or ``T3 ^ T4`` only, and always through the same
predicate.  So the search

1. lists the curve sets of class ``-K`` once;
2. picks three disjoint ones for the blocks ``01``, ``10``, ``11`` and
   a set for the ``00`` block with ``D(00) - K`` nef and big;
3. enumerates the even subsets ``T`` of the curves in use, keeping those
   that pass the vanishing predicate;
4. pairs them into ``(T3, T4)`` with ``T3 ^ T4`` also kept, and checks
   slot constraints (support, component budget, smooth ``D_sigma``).

Every hit is re-verified with :func:`dp5cover.analysis.check_theorem1`.
"""

from __future__ import annotations

import time
from collections.abc import Iterable, Iterator, Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations

from dp5cover.analysis import Theorem1Report, check_theorem1
from dp5cover.catalog import NamedCurve, default_catalog
from dp5cover.cover import BuildingData, EffectiveDivisor, verify_pardini
from dp5cover.errors import StructuralError
from dp5cover.group import N, GroupElement, characters, elements
from dp5cover.lattice import ANTICANONICAL, DivisorClass, canonical, h0, is_nef_and_big

PREFIXES = ((0, 0), (0, 1), (1, 0), (1, 1))
S4 = tuple(permutations((1, 2, 3, 4)))


@dataclass(frozen=True)
class SearchConfig:
    max_pencil_members: int = 1
    component_budget: int = 2
    sigma_support: frozenset[GroupElement] | None = None
    symmetry: bool = True
    time_budget: float | None = 60.0
    catalog: tuple[NamedCurve, ...] | None = None
    pinned: tuple[tuple[NamedCurve, GroupElement], ...] = ()
    workers: int = 1

    def __post_init__(self):
        if self.max_pencil_members < 0:
            raise StructuralError("max_pencil_members must be non-negative")
        if self.component_budget < 1:
            raise StructuralError("component_budget must be positive")
        if self.time_budget is not None and self.time_budget <= 0:
            raise StructuralError("time_budget must be positive")
        if self.workers < 1:
            raise StructuralError("workers must be positive")
        if self.sigma_support is not None:
            support = frozenset(self.sigma_support)
            for s in support:
                if s.n != N or s.is_zero():
                    raise StructuralError(f"sigma_support must hold non-identity elements, got {s}")
            object.__setattr__(self, "sigma_support", support)
        if self.catalog is not None:
            cat = tuple(sorted(set(self.catalog)))
            object.__setattr__(self, "catalog", cat)
        pins = dict(self.pinned)
        for c, s in pins.items():
            if s.is_zero():
                raise StructuralError(f"cannot pin {c.name} to the identity")
            if c not in self.curves():
                raise StructuralError(f"pinned curve {c.name} is not in the catalog")
            if s not in self.support():
                raise StructuralError(f"pinned curve {c.name} sits outside the sigma support")
        object.__setattr__(self, "pinned", tuple(sorted(pins.items())))

    def curves(self) -> tuple[NamedCurve, ...]:
        if self.catalog is not None:
            return self.catalog
        return tuple(default_catalog(self.max_pencil_members))

    def support(self) -> frozenset[GroupElement]:
        if self.sigma_support is None:
            return frozenset(elements(N, nonzero=True))
        return self.sigma_support

    def is_symmetric(self) -> bool:
        """True if the point permutations and member relabelings preserve the search space."""
        if self.pinned:
            return False
        cat = set(self.curves())
        if any({c.permute_points(p) for c in cat} != cat for p in S4):
            return False
        for i in range(1, 5):
            members = sorted(c.member for c in cat if c.kind == "f" and c.indices == (i,))
            if members != list(range(1, len(members) + 1)):
                return False
        return True

    @classmethod
    def from_dict(cls, data: Mapping) -> SearchConfig:
        known = {
            "max_pencil_members",
            "component_budget",
            "sigma_support",
            "symmetry",
            "time_budget",
            "catalog",
            "pinned",
            "workers",
        }
        unknown = set(data) - known
        if unknown:
            raise StructuralError(f"unknown search config keys: {', '.join(sorted(unknown))}")
        kw = dict(data)
        if kw.get("sigma_support") is not None:
            kw["sigma_support"] = frozenset(GroupElement.parse(s) for s in kw["sigma_support"])
        if kw.get("catalog") is not None:
            kw["catalog"] = tuple(NamedCurve.parse(s) for s in kw["catalog"])
        if kw.get("pinned"):
            kw["pinned"] = tuple(
                (NamedCurve.parse(c), GroupElement.parse(s)) for c, s in dict(kw["pinned"]).items()
            )
        return cls(**kw)

    @classmethod
    def shaped_like(cls, bd: BuildingData, **kw) -> SearchConfig:
        """Catalog and support restricted to the curves and slots used by ``bd``."""
        return cls(
            catalog=tuple(bd.branch_components()),
            sigma_support=frozenset(bd.nonempty()),
            **kw,
        )


@dataclass
class SearchResult:
    bd: BuildingData
    report: Theorem1Report
    canonical_form: str


@dataclass
class SearchStream:
    """Iterator over results; ``incomplete`` is set if the time budget ran out."""

    _it: Iterator[SearchResult]
    incomplete: bool = False
    stats: dict = field(default_factory=dict)

    def __iter__(self) -> SearchStream:
        return self

    def __next__(self) -> SearchResult:
        return next(self._it)


# --- canonical form -----------------------------------------------------


@lru_cache(maxsize=256)
def _perm_tables(curves: tuple[NamedCurve, ...]) -> list[list[tuple[tuple, int, str]]]:
    """For each point permutation: sort key, pencil index (0 if not a pencil
    member) and name of the image of every curve."""
    tables = []
    for perm in S4:
        row = []
        for c in curves:
            m = c.permute_points(perm)
            row.append((m.sort_key(), m.indices[0] if m.kind == "f" else 0, m.name))
        tables.append(row)
    return tables


def _d_part(slots: list[tuple[str, tuple[int, ...]]], table: list[tuple[tuple, int, str]]) -> tuple:
    counters = [0, 0, 0, 0, 0]
    relabel: dict[str, str] = {}
    out = []
    for label, comps in slots:
        names = []
        for _, pencil, name in sorted([table[i] for i in comps]):
            if pencil:
                if name not in relabel:
                    counters[pencil] += 1
                    relabel[name] = f"f{pencil}#{counters[pencil]}"
                name = relabel[name]
            names.append(name)
        out.append((label, tuple(names)))
    return tuple(out)


def _l_part(L: list[tuple[str, tuple[int, ...]]], perm: tuple[int, ...]) -> tuple:
    out = []
    for label, (a, *b) in L:
        moved = [0, 0, 0, 0]
        for i, x in enumerate(b):
            moved[perm[i] - 1] = x
        out.append((label, (a, *moved)))
    return tuple(out)


def _canonical_key(
    slots: list[tuple[str, tuple[int, ...]]],
    L: list[tuple[str, tuple[int, ...]]],
    tables: list[list[tuple[tuple, int, str]]],
) -> str:
    # L is determined by D, so the least D part fixes the orbit element.
    best_d, best_k = min((_d_part(slots, t), k) for k, t in enumerate(tables))
    l_part = _l_part(L, S4[best_k])
    return (
        "|".join(f"{s}:{','.join(names)}" for s, names in best_d)
        + ";"
        + "|".join(f"{c}:{','.join(map(str, v))}" for c, v in l_part)
    )


def serialize_key(bd: BuildingData) -> str:
    """Serialization used for canonical keys (identity permutation, no relabeling)."""
    d_part = "|".join(
        f"{s}:{','.join(c.name for c in bd.D[s].components)}" for s in sorted(bd.D) if bd.D[s]
    )
    l_part = "|".join(f"{c}:{','.join(map(str, v.coeffs))}" for c, v in sorted(bd.L.items()))
    return f"{d_part};{l_part}"


def canonicalize(bd: BuildingData) -> str:
    """Serialization of the least orbit element under point permutations and
    pencil-member relabelings, compared slot by slot on ``D``.

    Pencil members are renumbered in order of first appearance, which is the
    lexicographically least relabeling for a fixed point permutation.
    """
    curves = tuple(sorted(set(bd.branch_components())))
    index = {c: i for i, c in enumerate(curves)}
    slots = [
        (s.label(), tuple(index[c] for c in bd.D[s].components)) for s in sorted(bd.D) if bd.D[s]
    ]
    L = [(c.label(), v.coeffs) for c, v in sorted(bd.L.items())]
    return _canonical_key(slots, L, _perm_tables(curves))


# --- search -------------------------------------------------------------


@lru_cache(maxsize=None)
def _odd_pairing(chi: tuple[int, ...], sigma: tuple[int, ...]) -> bool:
    return sum(j & a for j, a in zip(chi, sigma)) & 1 == 1


def _mod2(cls: DivisorClass) -> int:
    mask = 0
    for k, c in enumerate(cls.coeffs):
        if c & 1:
            mask |= 1 << k
    return mask


def anticanonical_sets(curves: Sequence[NamedCurve]) -> list[tuple[int, ...]]:
    """Index sets of distinct curves whose classes sum to ``-K``."""
    target = ANTICANONICAL
    degs = [c.divisor_class.dot(target) for c in curves]
    classes = [c.divisor_class for c in curves]
    total_deg = target.square()
    out: list[tuple[int, ...]] = []

    def rec(start: int, chosen: list[int], acc: DivisorClass, deg: int) -> None:
        if deg == total_deg:
            if acc == target:
                out.append(tuple(chosen))
            return
        for i in range(start, len(curves)):
            # every catalog curve has positive anticanonical degree
            if degs[i] <= 0 or deg + degs[i] > total_deg:
                continue
            # the l-coefficient of -K is 3 and no curve has negative l-coefficient
            if acc.degree + classes[i].degree > target.degree:
                continue
            chosen.append(i)
            rec(i + 1, chosen, acc + classes[i], deg + degs[i])
            chosen.pop()

    rec(0, [], DivisorClass.zero(), 0)
    return out


def _orbit_rep(curves: Iterable[NamedCurve]) -> tuple:
    best = None
    for p in S4:
        moved = sorted(c.permute_points(p) for c in curves)
        counters: dict[int, int] = {}
        relabeled = []
        for c in moved:
            if c.kind == "f":
                i = c.indices[0]
                counters[i] = counters.get(i, 0) + 1
                c = c.with_member(counters[i])
            relabeled.append(c)
        key = tuple(sorted(c.sort_key() for c in relabeled))
        if best is None or key < best:
            best = key
    return best


class _Searcher:
    def __init__(self, cfg: SearchConfig):
        self.cfg = cfg
        self.curves = list(cfg.curves())
        self.support = cfg.support()
        self.pins = dict(cfg.pinned)
        self.classes = [c.divisor_class for c in self.curves]
        self.parity = [_mod2(c) for c in self.classes]
        self.coeffs = [c.coeffs for c in self.classes]
        self.meets = [[a.dot(b) != 0 for b in self.classes] for a in self.classes]
        self.KY = canonical()
        self.deadline = None if cfg.time_budget is None else time.monotonic() + cfg.time_budget
        self.timed_out = False
        self.stats = {"block_triples": 0, "gamma_sets": 0, "even_sets": 0, "candidates": 0}

        sets = anticanonical_sets(self.curves)
        self.blocks: dict[tuple[int, int], list[frozenset[int]]] = {}
        for prefix in PREFIXES[1:]:
            slots = [s for s in self.support if s.bits[:2] == prefix]
            must = {i for i, c in enumerate(self.curves) if c in self.pins and self.pins[c].bits[:2] == prefix}
            banned = {i for i, c in enumerate(self.curves) if c in self.pins and self.pins[c].bits[:2] != prefix}
            cands = []
            if slots:
                for s in sets:
                    fs = frozenset(s)
                    if must <= fs and not (fs & banned) and len(fs) <= len(slots) * cfg.component_budget:
                        cands.append(fs)
            self.blocks[prefix] = cands
        if cfg.symmetry and cfg.is_symmetric():
            seen = set()
            reps = []
            for fs in self.blocks[(0, 1)]:
                rep = _orbit_rep(self.curves[i] for i in fs)
                if rep not in seen:
                    seen.add(rep)
                    reps.append(fs)
            self.first_blocks = reps
        else:
            self.first_blocks = list(self.blocks[(0, 1)])
        self.gamma_slots = [s for s in self.support if s.bits[:2] == (0, 0)]

    def out_of_time(self) -> bool:
        if self.deadline is not None and time.monotonic() > self.deadline:
            self.timed_out = True
        return self.timed_out

    def run_first_block(self, x1: frozenset[int]) -> list[BuildingData]:
        found: list[BuildingData] = []
        for x2 in self.blocks[(1, 0)]:
            if x2 & x1:
                continue
            for x3 in self.blocks[(1, 1)]:
                if x3 & (x1 | x2):
                    continue
                if self.out_of_time():
                    return found
                self.stats["block_triples"] += 1
                used = x1 | x2 | x3
                for gamma in self._gamma_sets(used):
                    self.stats["gamma_sets"] += 1
                    found.extend(self._assign(x1, x2, x3, gamma))
        return found

    def _gamma_sets(self, used: frozenset[int]) -> Iterator[frozenset[int]]:
        must = {i for i, c in enumerate(self.curves) if c in self.pins and self.pins[c].bits[:2] == (0, 0)}
        free = [
            i
            for i in range(len(self.curves))
            if i not in used and i not in must and self.curves[i] not in self.pins
        ]
        cap = len(self.gamma_slots) * self.cfg.component_budget
        if len(must) > cap:
            return
        for k in range(0, min(cap - len(must), len(free)) + 1):
            for extra in combinations(free, k):
                g = frozenset(must) | frozenset(extra)
                A = sum((self.classes[i] for i in g), DivisorClass.zero()) - self.KY
                if is_nef_and_big(A):
                    yield g

    def _even_subsets(self, items: list[int]) -> list[int]:
        """Bitmasks (over positions in ``items``) of subsets with even class sum."""
        # Gaussian elimination over F_2 on (parity vector | subset mask)
        rows = [(self.parity[i], 1 << k) for k, i in enumerate(items)]
        basis: list[tuple[int, int]] = []
        kernel: list[int] = []
        for vec, mask in rows:
            for bvec, bmask in basis:
                if vec ^ bvec < vec:
                    vec ^= bvec
                    mask ^= bmask
            if vec:
                basis.append((vec, mask))
                basis.sort(reverse=True)
            else:
                kernel.append(mask)
        out = [0]
        for kmask in kernel:
            out += [m ^ kmask for m in out]
        return sorted(out)

    def _assign(self, x1, x2, x3, gamma) -> Iterator[BuildingData]:
        items = sorted(x1 | x2 | x3 | gamma)
        prefix_of = {}
        for prefix, blk in (((0, 1), x1), ((1, 0), x2), ((1, 1), x3), ((0, 0), gamma)):
            for i in blk:
                prefix_of[i] = prefix
        pos_mask = {}
        for k, i in enumerate(items):
            pos_mask[i] = 1 << k
        # u-masks: curves with j1*s1 + j2*s2 = 1, for the four j12
        u = {}
        for j12 in PREFIXES:
            m = 0
            for i in items:
                p = prefix_of[i]
                if (j12[0] & p[0]) ^ (j12[1] & p[1]):
                    m |= pos_mask[i]
            u[j12] = m
        gamma_mask = sum(pos_mask[i] for i in gamma)

        # pinned trailing bits constrain T3 / T4
        need3 = need4 = forbid3 = forbid4 = 0
        for i in items:
            c = self.curves[i]
            if c in self.pins:
                b = self.pins[c].bits
                if b[2]:
                    need3 |= pos_mask[i]
                else:
                    forbid3 |= pos_mask[i]
                if b[3]:
                    need4 |= pos_mask[i]
                else:
                    forbid4 |= pos_mask[i]

        evens = self._even_subsets(items)
        self.stats["even_sets"] += len(evens)
        good = set()
        for t in evens:
            if self._vanishing_ok(t, items, u):
                good.add(t)
        if not good:
            return
        good_sorted = sorted(good)
        for t3 in good_sorted:
            if t3 & need3 != need3 or t3 & forbid3:
                continue
            for t4 in good_sorted:
                if t4 & need4 != need4 or t4 & forbid4:
                    continue
                if (t3 ^ t4) not in good:
                    continue
                if gamma_mask & ~(t3 | t4):
                    continue
                self.stats["candidates"] += 1
                bd = self._build(items, prefix_of, pos_mask, t3, t4)
                if bd is not None:
                    yield bd

    def _vanishing_ok(self, t: int, items: list[int], u: dict) -> bool:
        for j12 in PREFIXES:
            s = u[j12] ^ t
            if not s:  # L_chi would be trivial
                return False
            total = [0] * 5
            for k, i in enumerate(items):
                if s >> k & 1:
                    for m, x in enumerate(self.coeffs[i]):
                        total[m] += x
            if any(x & 1 for x in total):
                return False
            if h0(DivisorClass(tuple(x // 2 + kc for x, kc in zip(total, self.KY.coeffs)))) > 0:
                return False
        return True

    def _build(self, items, prefix_of, pos_mask, t3, t4) -> BuildingData | None:
        slots: dict[GroupElement, list[int]] = {}
        for i in items:
            p = prefix_of[i]
            sigma = GroupElement((p[0], p[1], int(bool(t3 & pos_mask[i])), int(bool(t4 & pos_mask[i]))))
            if sigma not in self.support:
                return None
            slot = slots.setdefault(sigma, [])
            if len(slot) >= self.cfg.component_budget:
                return None
            if any(self.meets[i][o] for o in slot):
                return None
            slot.append(i)
        sums = {}
        for sigma, idx in slots.items():
            tot = [0] * 5
            for i in idx:
                for k, x in enumerate(self.coeffs[i]):
                    tot[k] += x
            sums[sigma] = tot
        L = {}
        for chi in characters(N, nontrivial=True):
            total = [0] * 5
            for sigma, tot in sums.items():
                if _odd_pairing(chi.bits, sigma.bits):
                    for k in range(5):
                        total[k] += tot[k]
            # even by construction of T3 and T4
            L[chi] = DivisorClass(tuple(x // 2 for x in total))
        D = {s: EffectiveDivisor(tuple(self.curves[i] for i in v)) for s, v in slots.items()}
        return BuildingData(D, L, N)


def _run_block(args) -> tuple[list[BuildingData], bool, dict]:
    cfg, x1, deadline = args
    s = _Searcher(cfg)
    s.deadline = deadline
    found = s.run_first_block(x1)
    return found, s.timed_out, s.stats


def enumerate_building_data(cfg: SearchConfig) -> SearchStream:
    """Stream every valid building data over the catalog, up to symmetry.

    Emission order is fixed by the catalog order.  With ``cfg.symmetry``
    results are deduplicated by canonical form; otherwise every raw hit is
    emitted.  If the time budget runs out the stream ends early and its
    ``incomplete`` flag is set.
    """
    searcher = _Searcher(cfg)
    stream = SearchStream(iter(()))
    stream.stats = searcher.stats

    def gen() -> Iterator[SearchResult]:
        seen: set[str] = set()

        def emit(batch: list[BuildingData]) -> Iterator[SearchResult]:
            for bd in batch:
                key = canonicalize(bd)
                if cfg.symmetry:
                    if key in seen:
                        continue
                    seen.add(key)
                report = check_theorem1(bd)
                if not (verify_pardini(bd).passed and report.passed):  # pragma: no cover
                    raise AssertionError(f"search produced invalid building data: {key}")
                yield SearchResult(bd, report, key)

        if cfg.workers == 1:
            for x1 in searcher.first_blocks:
                batch = searcher.run_first_block(x1)
                yield from emit(batch)
                if searcher.timed_out:
                    stream.incomplete = True
                    return
        else:
            jobs = [(cfg, x1, searcher.deadline) for x1 in searcher.first_blocks]
            with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                for batch, timed_out, stats in pool.map(_run_block, jobs):
                    for k, v in stats.items():
                        searcher.stats[k] += v
                    yield from emit(batch)
                    if timed_out:
                        stream.incomplete = True
        stream.stats["first_blocks"] = len(searcher.first_blocks)

    stream._it = gen()
    return stream
