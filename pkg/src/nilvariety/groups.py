"""Fully enumerated finite groups and the subgroup algebra built on them.

Elements are addressed by integer index (identity at 0, breadth-first order
from the generators). Groups up to ``table_threshold`` elements carry a full
multiplication table; larger ones multiply through vectorized arithmetic on
element coordinates. Every sweep below is expressed with ``batch_mul`` on
index arrays so both kinds behave identically.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .elements import Coset, Perm, QuotientMap, UniMatrix, compose_perm, compose_unitriangular
from .rng import XorShift64Star
from .words import CommutatorExpr, evaluate_indices, variables

log = logging.getLogger(__name__)

DEFAULT_TABLE_THRESHOLD = 8192
DEFAULT_CAP = 1 << 20
DEFAULT_LAW_BUDGET = 10**8
DEFAULT_VARIETY_BUDGET = 200_000
DEFAULT_ENGEL_CAP = 32
CHUNK = 1 << 18


class GroupTooLarge(RuntimeError):
    def __init__(self, cap: int, partial: int):
        super().__init__(f"group order exceeds cap {cap} (enumerated {partial} elements so far)")
        self.cap = cap
        self.partial = partial


class BudgetExceeded(RuntimeError):
    """Exhaustive sweep would exceed its work budget; use sample mode instead."""


class FiniteGroup:
    def __init__(self, elements: list, generators: list[int], gen_right: list[np.ndarray],
                 tree: tuple[np.ndarray, np.ndarray], name: str = "G",
                 table_threshold: int = DEFAULT_TABLE_THRESHOLD):
        self.elements = elements
        self.index = {e: i for i, e in enumerate(elements)}
        self.order = len(elements)
        self.generators = list(generators)
        self.name = name
        self._gen_right = gen_right
        self._tree = tree
        self._inv = np.array([self.index[e.inverse()] for e in elements], dtype=np.int64)
        self.table: Optional[np.ndarray] = None
        self._coords = None
        if self.order <= table_threshold:
            self.table = self._build_table()
            self._item = self.table.item
        else:
            self._setup_coordinates()

    # -- construction helpers --------------------------------------------------

    def _build_table(self) -> np.ndarray:
        # column j of the table is R_g applied to column parent(j), where j = parent(j) * g
        n = self.order
        dtype = np.int16 if n <= np.iinfo(np.int16).max else np.int32
        parent, pgen = self._tree
        rows = np.empty((n, n), dtype=dtype)
        rows[0] = np.arange(n)
        for j in range(1, n):
            rows[j] = self._gen_right[pgen[j]][rows[parent[j]]]
        return np.ascontiguousarray(rows.T)

    def _setup_coordinates(self):
        e0 = self.elements[0]
        if isinstance(e0, UniMatrix):
            base, compose = e0.m, (lambda A, B, n=e0.n, m=e0.m: compose_unitriangular(A, B, n, m))
        elif isinstance(e0, Perm):
            base, compose = e0.degree, compose_perm
        else:
            return
        coords = np.array([e.coords() for e in self.elements], dtype=np.int32).T.copy()
        width = coords.shape[0]
        if width * math.log2(max(base, 2)) >= 62:
            return
        wtype = np.int32 if base ** width < 1 << 31 else np.int64
        weights = base ** np.arange(width, dtype=wtype)
        keys = weights @ coords.astype(wtype)
        if base ** width <= 1 << 24:
            lookup = np.full(base ** width, -1, dtype=np.int64)
            lookup[keys] = np.arange(self.order)
            locate = lookup.__getitem__
        else:
            order = np.argsort(keys)
            skeys = keys[order]
            locate = lambda k: order[np.searchsorted(skeys, k)]
        self._coords = (coords, compose, weights, locate)

    # -- element access ------------------------------------------------------------

    def element(self, i: int):
        return self.elements[int(i)]

    def index_of(self, g) -> int:
        try:
            return self.index[g]
        except KeyError:
            raise ValueError(f"{g} is not an element of {self.name}") from None

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"<FiniteGroup {self.name} of order {self.order}>"

    # -- arithmetic on indices ------------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        if self.table is not None:
            return self._item(a, b)
        return self.index[self.elements[a] * self.elements[b]]

    def inv(self, a: int) -> int:
        return int(self._inv[a])

    def comm(self, a: int, b: int) -> int:
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    def conj(self, a: int, t: int) -> int:
        """``t^-1 a t``."""
        return self.mul(self.mul(self.inv(t), a), t)

    def power(self, a: int, k: int) -> int:
        return int(self.batch_power(np.asarray(a), k))

    def batch_mul(self, A, B) -> np.ndarray:
        A, B = np.broadcast_arrays(np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64))
        if self.table is not None:
            return self.table[A, B].astype(np.int64, copy=False)
        shape = A.shape
        A, B = A.ravel(), B.ravel()
        if self._coords is not None:
            coords, compose, weights, locate = self._coords
            out = np.empty(A.size, dtype=np.int64)
            for s in range(0, A.size, CHUNK):
                prod = compose(np.take(coords, A[s:s + CHUNK], axis=1), np.take(coords, B[s:s + CHUNK], axis=1))
                out[s:s + CHUNK] = locate(weights @ prod)
        else:
            els, index = self.elements, self.index
            out = np.fromiter((index[els[a] * els[b]] for a, b in zip(A.tolist(), B.tolist())),
                              dtype=np.int64, count=A.size)
        return out.reshape(shape)

    def batch_inv(self, A) -> np.ndarray:
        return self._inv[np.asarray(A, dtype=np.int64)]

    def batch_comm(self, A, B) -> np.ndarray:
        return self.batch_mul(self.batch_mul(self.batch_inv(A), self.batch_inv(B)), self.batch_mul(A, B))

    def batch_power(self, A, k: int) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        if k < 0:
            A, k = self.batch_inv(A), -k
        result = np.zeros_like(A)
        while k:
            if k & 1:
                result = self.batch_mul(result, A)
            k >>= 1
            if k:
                A = self.batch_mul(A, A)
        return result

    # -- cached invariants ----------------------------------------------------------------

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        orders[0] = 1
        active = np.arange(1, n)
        cur = active.copy()
        k = 1
        while active.size:
            cur = self.batch_mul(cur, active)
            k += 1
            done = cur == 0
            orders[active[done]] = k
            active, cur = active[~done], cur[~done]
        return orders

    @cached_property
    def class_labels(self) -> np.ndarray:
        """For each element, the smallest index in its conjugacy class."""
        n = self.order
        if n == 1:
            return np.zeros(1, dtype=np.int64)
        allx = np.arange(n)
        src, dst = [], []
        for g in set(self.generators):
            conj = self.batch_mul(self.batch_mul(self._inv[g], allx), g)
            src.append(allx)
            dst.append(conj)
        src, dst = np.concatenate(src), np.concatenate(dst)
        graph = coo_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(n, n))
        _, comp = connected_components(graph, directed=True, connection="weak")
        least = np.full(comp.max() + 1, n, dtype=np.int64)
        np.minimum.at(least, comp, allx)
        return least[comp]

    @cached_property
    def class_reps(self) -> np.ndarray:
        return np.unique(self.class_labels)

    @cached_property
    def right_regular(self) -> list[np.ndarray]:
        return list(self._gen_right)

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(self.mul(a, b) == self.mul(b, a) for a in gens for b in gens)


def close(generators: Sequence, cap: int = DEFAULT_CAP, name: str = "G",
          table_threshold: int = DEFAULT_TABLE_THRESHOLD) -> FiniteGroup:
    """Enumerate the group generated by ``generators`` breadth-first from the identity."""
    generators = list(generators)
    if not generators:
        raise ValueError("need at least one generator (the identity is allowed)")
    kind = type(generators[0])
    shape = _carrier_shape(generators[0])
    for g in generators:
        if type(g) is not kind or _carrier_shape(g) != shape:
            raise ValueError("generators must share one carrier kind and degree/dimension")
    identity = generators[0].identity_like()
    elements = [identity]
    index = {identity: 0}
    parent, pgen = [0], [0]
    right = [[] for _ in generators]
    i = 0
    while i < len(elements):
        e = elements[i]
        for k, g in enumerate(generators):
            p = e * g
            j = index.get(p)
            if j is None:
                j = len(elements)
                if j >= cap:
                    raise GroupTooLarge(cap, j)
                index[p] = j
                elements.append(p)
                parent.append(i)
                pgen.append(k)
            right[k].append(j)
        i += 1
    gen_right = [np.array(r, dtype=np.int64) for r in right]
    return FiniteGroup(elements, [index[g] for g in generators], gen_right,
                       (np.array(parent), np.array(pgen)), name=name,
                       table_threshold=table_threshold)


def _carrier_shape(g):
    if isinstance(g, Perm):
        return g.degree
    if isinstance(g, UniMatrix):
        return (g.n, g.m)
    if isinstance(g, Coset):
        return id(g.qmap)
    raise TypeError(f"unsupported group element {g!r}")


# -- subgroups -------------------------------------------------------------------------

class SubgroupHandle:
    """Sorted index set of a subgroup together with generators for it."""

    __slots__ = ("elements", "gens", "_set", "_mask")

    def __init__(self, mask: np.ndarray, gens: Iterable[int]):
        self._mask = mask
        self.elements = tuple(np.flatnonzero(mask).tolist())
        self.gens = tuple(int(g) for g in gens)
        self._set = None

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def mask(self) -> np.ndarray:
        return self._mask

    def __contains__(self, i) -> bool:
        return bool(self._mask[int(i)])

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return isinstance(other, SubgroupHandle) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def issubset(self, other: "SubgroupHandle") -> bool:
        return bool(np.all(other._mask[list(self.elements)]))

    def __repr__(self):
        return f"<SubgroupHandle order={self.order} gens={self.gens}>"


def _as_index(G: FiniteGroup, e) -> int:
    if isinstance(e, (int, np.integer)):
        if not 0 <= int(e) < G.order:
            raise ValueError(f"index {e} out of range for {G.name}")
        return int(e)
    return G.index_of(e)


def _grow(G: FiniteGroup, mask: np.ndarray, gens: Sequence[int], frontier: np.ndarray) -> np.ndarray:
    gens_arr = np.asarray(gens, dtype=np.int64)
    while frontier.size:
        prod = G.batch_mul(frontier[:, None], gens_arr[None, :]).ravel()
        new = np.unique(prod[~mask[prod]])
        mask[new] = True
        frontier = new
    return mask


class _Builder:
    """Incrementally grown subgroup: add elements, keep a short generator list."""

    def __init__(self, G: FiniteGroup):
        self.G = G
        self.mask = np.zeros(G.order, dtype=bool)
        self.mask[0] = True
        self.gens: list[int] = []

    def add(self, g: int) -> bool:
        if self.mask[g]:
            return False
        self.gens.append(g)
        members = np.flatnonzero(self.mask)
        self.mask = _grow(self.G, self.mask, self.gens, members)
        return True

    def handle(self) -> SubgroupHandle:
        return SubgroupHandle(self.mask.copy(), self.gens)


def whole(G: FiniteGroup) -> SubgroupHandle:
    return SubgroupHandle(np.ones(G.order, dtype=bool), [g for g in dict.fromkeys(G.generators) if g != 0])


def trivial(G: FiniteGroup) -> SubgroupHandle:
    m = np.zeros(G.order, dtype=bool)
    m[0] = True
    return SubgroupHandle(m, [])


def subgroup(G: FiniteGroup, elems: Iterable) -> SubgroupHandle:
    b = _Builder(G)
    for e in elems:
        b.add(_as_index(G, e))
    return b.handle()


def normal_closure(G: FiniteGroup, elems: Iterable, within: Optional[SubgroupHandle] = None) -> SubgroupHandle:
    """Smallest subgroup containing ``elems`` and normalized by ``within`` (default G)."""
    conjugators = list(within.gens) if within is not None else whole(G).gens
    b = _Builder(G)
    for e in elems:
        b.add(_as_index(G, e))
    i = 0
    while i < len(b.gens):
        s = b.gens[i]
        for t in conjugators:
            b.add(G.conj(s, t))
        i += 1
    return b.handle()


def is_normal(G: FiniteGroup, N: SubgroupHandle, within: Optional[SubgroupHandle] = None) -> bool:
    conjugators = within.gens if within is not None else whole(G).gens
    return all(G.conj(s, t) in N for s in N.gens for t in conjugators)


def commutator_subgroup(G: FiniteGroup, A: SubgroupHandle, B: SubgroupHandle) -> SubgroupHandle:
    """``[A, B]``: normal closure in ``<A, B>`` of the generator commutators."""
    comms = [G.comm(a, b) for a in A.gens for b in B.gens]
    if not comms:
        return trivial(G)
    ambient = subgroup(G, list(A.gens) + list(B.gens))
    return normal_closure(G, comms, within=ambient)


def lower_central_series(G: FiniteGroup, H: Optional[SubgroupHandle] = None) -> list[SubgroupHandle]:
    """``gamma_1 = H``, ``gamma_{i+1} = [gamma_i, H]``, until trivial or stationary."""
    H = whole(G) if H is None else H
    series = [H]
    while series[-1].order > 1:
        nxt = commutator_subgroup(G, series[-1], H)
        if nxt == series[-1]:
            break
        series.append(nxt)
    return series


def nilpotency_class(G: FiniteGroup, H: Optional[SubgroupHandle] = None) -> Optional[int]:
    """Class of ``H`` (default G), or None if it is not nilpotent."""
    series = lower_central_series(G, H)
    if series[-1].order > 1:
        return None
    return len(series) - 1


def is_nilpotent(G: FiniteGroup, H: Optional[SubgroupHandle] = None) -> bool:
    return nilpotency_class(G, H) is not None


def fitting(G: FiniteGroup) -> SubgroupHandle:
    """Subgroup generated by the elements whose normal closure is nilpotent.

    Joins of nilpotent normal subgroups are nilpotent, so once an element is
    inside the running join it qualifies without further work; only one
    element per conjugacy class needs testing.
    """
    if is_nilpotent(G):
        return whole(G)
    b = _Builder(G)
    for x in G.class_reps.tolist():
        if b.mask[x]:
            continue
        N = normal_closure(G, [x])
        if is_nilpotent(G, N):
            for g in N.gens:
                b.add(g)
    return b.handle()


def quotient(G: FiniteGroup, N: SubgroupHandle, table_threshold: int = DEFAULT_TABLE_THRESHOLD) -> FiniteGroup:
    """``G/N`` on canonical coset representatives (least index in each coset)."""
    if not is_normal(G, N):
        raise ValueError("subgroup is not normal")
    canon = np.full(G.order, -1, dtype=np.int64)
    members = np.asarray(N.elements, dtype=np.int64)
    for g in range(G.order):
        if canon[g] < 0:
            canon[G.batch_mul(g, members)] = g
    qmap = QuotientMap(G, canon)
    gens = [Coset(canon[g], qmap) for g in G.generators] or [Coset(0, qmap)]
    return close(gens, name=f"{G.name}/N{N.order}", table_threshold=table_threshold)


def fitting_height(G: FiniteGroup) -> Optional[int]:
    """Number of steps ``G <- G/F(G)`` to the trivial group; None if some F is trivial first."""
    height = 0
    while G.order > 1:
        F = fitting(G)
        if F.order == 1:
            return None
        G = quotient(G, F)
        height += 1
    return height


# -- power structure ----------------------------------------------------------------

def exponent(G: FiniteGroup) -> int:
    return math.lcm(*G.element_orders.tolist())


def power_subgroup(G: FiniteGroup, m: int) -> SubgroupHandle:
    if m < 1:
        raise ValueError("m must be positive")
    powers = np.unique(G.batch_power(np.arange(G.order), m))
    return subgroup(G, powers.tolist())


def prime_of_p_group(G: FiniteGroup) -> Optional[int]:
    """The prime p if |G| is a power of p (None for the trivial group or mixed orders)."""
    n = G.order
    if n == 1:
        return None
    p = next(q for q in range(2, n + 1) if n % q == 0)
    while n % p == 0:
        n //= p
    return p if n == 1 else None


def is_p_group(G: FiniteGroup, p: int) -> bool:
    n = G.order
    while n % p == 0:
        n //= p
    return n == 1


def is_powerful(G: FiniteGroup, p: int) -> bool:
    """``[G, G] <= G^p`` (odd p) or ``[G, G] <= G^4`` (p = 2)."""
    if not is_p_group(G, p):
        raise ValueError(f"{G.name} is not a {p}-group")
    W = whole(G)
    derived = commutator_subgroup(G, W, W)
    return derived.issubset(power_subgroup(G, 4 if p == 2 else p))


# -- sweeps -----------------------------------------------------------------------------

def engel_degree(G: FiniteGroup, cap: int = DEFAULT_ENGEL_CAP,
                 budget: int = DEFAULT_LAW_BUDGET) -> Optional[int]:
    """Least c with ``[x, y, ..., y] = 1`` (c copies of y) for all pairs, or None if above ``cap``.

    Engel chains are conjugation-equivariant, so ``y`` runs over class representatives.
    """
    ys = G.class_reps
    total = G.order * ys.size
    if total > budget:
        raise BudgetExceeded(f"engel sweep needs {total} pairs > budget {budget}")
    degree = 1
    for start in range(0, total, CHUNK):
        flat = np.arange(start, min(start + CHUNK, total))
        xs, yi = np.divmod(flat, ys.size)
        h, y = xs, ys[yi]
        for step in range(1, cap + 1):
            h = G.batch_comm(h, y)
            alive = h != 0
            if not alive.any():
                degree = max(degree, step)
                break
            h, y = h[alive], y[alive]
        else:
            return None
    return degree


@dataclass
class LawResult:
    holds: bool
    witness: Optional[dict[int, int]]
    mode: str
    examined: int

    def witness_elements(self, G: FiniteGroup) -> Optional[dict[int, object]]:
        if self.witness is None:
            return None
        return {i: G.element(g) for i, g in self.witness.items()}


def sample_assignments(n: int, k: int, count: int, seed: int) -> np.ndarray:
    """``count`` rows of ``k`` indices drawn in row order from the seeded generator."""
    rng = XorShift64Star(seed)
    return np.array(rng.indices(n, count * k), dtype=np.int64).reshape(count, k)


def law_check(G: FiniteGroup, expr: CommutatorExpr, mode: str = "exhaustive", count: int = 10_000,
              seed: int = 1, budget: int = DEFAULT_LAW_BUDGET) -> LawResult:
    """Does ``expr = 1`` hold in G?

    Exhaustive mode walks assignments in lexicographic order of
    ``(x_i1, x_i2, ...)`` (ascending variable index, element index), so the
    witness is the least counterexample. Sample mode reports "holds" when
    none of ``count`` seeded assignments is a counterexample.
    """
    vs = sorted(variables(expr))
    k, n = len(vs), G.order
    if mode == "exhaustive":
        total = n ** k
        if total > budget:
            raise BudgetExceeded(f"{n}^{k} = {total} assignments exceed budget {budget}; use sample mode")
        for start in range(0, total, CHUNK):
            flat = np.arange(start, min(start + CHUNK, total), dtype=np.int64)
            digits = np.unravel_index(flat, (n,) * k)
            vals = evaluate_indices(expr, G, dict(zip(vs, digits)))
            bad = np.flatnonzero(vals != 0)
            if bad.size:
                j = bad[0]
                return LawResult(False, {v: int(d[j]) for v, d in zip(vs, digits)}, mode, int(start + j + 1))
        return LawResult(True, None, mode, total)
    if mode == "sample":
        rows = sample_assignments(n, k, count, seed)
        for start in range(0, count, CHUNK):
            block = rows[start:start + CHUNK]
            vals = evaluate_indices(expr, G, {v: block[:, c] for c, v in enumerate(vs)})
            bad = np.flatnonzero(vals != 0)
            if bad.size:
                j = bad[0]
                return LawResult(False, {v: int(block[j, c]) for c, v in enumerate(vs)}, mode, int(start + j + 1))
        return LawResult(True, None, mode, count)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass
class VarietyResult:
    value: Optional[int]
    exact: bool
    examined: int
    witness: Optional[tuple[int, ...]] = None
    notes: list[str] = field(default_factory=list)


def variety_sweep(G: FiniteGroup, d: int, mode: str = "exhaustive", budget: int = DEFAULT_VARIETY_BUDGET,
                  count: int = 1000, seed: int = 1) -> VarietyResult:
    """Max class of a d-generated subgroup (None when one is not nilpotent).

    Exhaustive mode never measures the same subgroup twice and skips a tuple
    entry ``t`` whenever an earlier sibling ``t'`` already had ``t`` inside
    ``<prefix, t'>``: every completion through ``t`` then generates a subgroup
    of one already measured, which cannot have larger class (the same holds
    for entries inside ``<prefix>`` itself, including the identity). The first
    entry runs over conjugacy class representatives only. For nilpotent G the
    sweep stops as soon as a subgroup of class equal to that of G turns up.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    cache: dict[bytes, Optional[int]] = {}
    ceiling = nilpotency_class(G)

    def measure(mask: np.ndarray, gens: list[int]) -> Optional[int]:
        key = np.packbits(mask).tobytes()
        if key not in cache:
            cache[key] = nilpotency_class(G, SubgroupHandle(mask, [g for g in gens if g]))
        return cache[key]

    if mode == "sample":
        rows = sample_assignments(G.order, d, count, seed)
        best, witness = 0, None
        for row in rows.tolist():
            b = _Builder(G)
            for g in row:
                b.add(g)
            c = measure(b.mask, b.gens)
            if c is None:
                return VarietyResult(None, True, len(cache), tuple(row))
            if c > best:
                best, witness = c, tuple(row)
        return VarietyResult(best, False, count, witness, ["sampled: value is a lower bound"])
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")

    state = {"best": 0, "witness": None, "work": 0, "stop": False}

    class _Stop(Exception):
        pass

    def leaf(mask: np.ndarray, gens: list[int], tup: tuple[int, ...]):
        c = measure(mask, gens)
        if c is None:
            state["best"], state["witness"] = None, tup
            raise _Stop
        if c > state["best"] or state["witness"] is None:
            state["best"], state["witness"] = c, tup
            if ceiling is not None and c >= ceiling:
                raise _Stop

    def recurse(level: int, mask: np.ndarray, gens: list[int], prefix: tuple[int, ...]):
        # entries already inside <prefix> add nothing and are dominated by any other choice
        covered = mask.copy()
        pool = G.class_reps.tolist() if level == 1 else range(G.order)
        explored = False
        for t in pool:
            if covered[t]:
                continue
            explored = True
            state["work"] += 1
            if state["work"] > budget:
                raise BudgetExceeded(f"variety sweep exceeded {budget} subgroup closures; use sample mode")
            new_gens = gens + [t]
            new_mask = _grow(G, mask.copy(), new_gens, np.flatnonzero(mask))
            covered |= new_mask
            if level == d:
                leaf(new_mask, new_gens, prefix + (t,))
            else:
                recurse(level + 1, new_mask, new_gens, prefix + (t,))
        if not explored:
            leaf(mask, gens, prefix)

    start = np.zeros(G.order, dtype=bool)
    start[0] = True
    try:
        recurse(1, start, [], ())
    except _Stop:
        pass
    return VarietyResult(state["best"], True, state["work"], state["witness"])


def variety_class(G: FiniteGroup, d: int, mode: str = "exhaustive", **kw) -> Optional[int]:
    """Least c with every d-generated subgroup nilpotent of class <= c; None if there is none."""
    return variety_sweep(G, d, mode, **kw).value
