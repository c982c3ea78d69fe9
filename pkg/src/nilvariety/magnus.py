"""Truncated Magnus embedding and exact lower-central-series weights.

The free group embeds in the units of the noncommutative power series ring
``Z<<X_1, X_2, ...>>`` via ``x_i -> 1 + X_i``. A word lies in the k-th
lower central term exactly when its image minus 1 has no terms of degree
below k, so the weight of a word is the smallest degree of a nonconstant
term of its image.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from typing import Iterable, Mapping, Optional, Sequence

from .words import CommutatorExpr, FreeWord, Pow, Var, expand, formal_weight

log = logging.getLogger(__name__)

Monomial = tuple[int, ...]


class SparseSeries:
    """Element of ``Z<<X>>`` modulo terms of degree > ``D``.

    ``terms`` maps nonempty monomials (tuples of variable indices) to nonzero
    integer coefficients; the constant term is kept separately.
    """

    __slots__ = ("D", "const", "terms")

    def __init__(self, D: int, const: int = 0, terms: Optional[Mapping[Monomial, int]] = None):
        if D < 0:
            raise ValueError("truncation degree must be nonnegative")
        self.D = D
        self.const = int(const)
        self.terms: dict[Monomial, int] = {}
        if terms:
            for m, c in terms.items():
                if c and 0 < len(m) <= D:
                    self.terms[tuple(m)] = int(c)

    @classmethod
    def one(cls, D: int) -> "SparseSeries":
        return cls(D, 1)

    @classmethod
    def _wrap(cls, D, const, terms) -> "SparseSeries":
        s = cls.__new__(cls)
        s.D, s.const, s.terms = D, const, terms
        return s

    # -- queries ---------------------------------------------------------------

    def min_degree(self) -> Optional[int]:
        """Smallest degree of a nonconstant term, or None if there is none."""
        return min(map(len, self.terms), default=None)

    def component(self, k: int) -> dict[Monomial, int]:
        return {m: c for m, c in self.terms.items() if len(m) == k}

    def by_degree(self) -> dict[int, list[tuple[Monomial, int]]]:
        out: dict[int, list[tuple[Monomial, int]]] = defaultdict(list)
        for m, c in self.terms.items():
            out[len(m)].append((m, c))
        return dict(out)

    def truncate(self, D: int) -> "SparseSeries":
        D = min(D, self.D)
        return SparseSeries._wrap(D, self.const, {m: c for m, c in self.terms.items() if len(m) <= D})

    def __eq__(self, other):
        return (isinstance(other, SparseSeries) and self.D == other.D
                and self.const == other.const and self.terms == other.terms)

    def __repr__(self):
        return f"SparseSeries(D={self.D}, {self})"

    def __str__(self):
        return format_series(self)

    # -- ring operations ---------------------------------------------------------

    def __add__(self, other: "SparseSeries") -> "SparseSeries":
        D = min(self.D, other.D)
        out = {m: c for m, c in self.terms.items() if len(m) <= D}
        for m, c in other.terms.items():
            if len(m) <= D:
                v = out.get(m, 0) + c
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return SparseSeries._wrap(D, self.const + other.const, out)

    def __neg__(self) -> "SparseSeries":
        return SparseSeries._wrap(self.D, -self.const, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "SparseSeries") -> "SparseSeries":
        return self + (-other)

    def __mul__(self, other: "SparseSeries") -> "SparseSeries":
        return self.mul(other)

    def mul(self, other: "SparseSeries", D: Optional[int] = None,
            caps: Optional[Mapping[int, int]] = None) -> "SparseSeries":
        """Truncated product.

        ``caps`` drops every monomial whose degree in some variable ``i``
        exceeds ``caps[i]``. Those monomials span a two-sided ideal, so all
        retained coefficients are still exact.
        """
        D = min(self.D, other.D) if D is None else D
        out: dict[Monomial, int] = {}
        a0, b0 = self.const, other.const
        if b0:
            for m, c in self.terms.items():
                if len(m) <= D:
                    out[m] = c * b0
        if a0:
            for m, c in other.terms.items():
                if len(m) <= D:
                    out[m] = out.get(m, 0) + a0 * c
        A = sorted(self.by_degree().items())
        B = sorted(other.by_degree().items())
        get = out.get
        for da, la in A:
            for db, lb in B:
                if da + db > D:
                    break
                for m1, c1 in la:
                    for m2, c2 in lb:
                        m = m1 + m2
                        out[m] = get(m, 0) + c1 * c2
        out = {m: c for m, c in out.items() if c}
        if caps is not None:
            out = {m: c for m, c in out.items() if _within_caps(m, caps)}
        return SparseSeries._wrap(D, a0 * b0, out)

    def __pow__(self, k: int) -> "SparseSeries":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = SparseSeries.one(self.D)
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def inverse(self) -> "SparseSeries":
        """Inverse of a unit (constant term +1 or -1)."""
        if self.const not in (1, -1):
            raise ValueError("only series with constant term +-1 are invertible over Z")
        c = self.const
        nil = SparseSeries._wrap(self.D, 0, {m: -c * v for m, v in self.terms.items()})
        # (c + A)^-1 = c * sum_k (-c A)^k
        result = SparseSeries.one(self.D)
        power = SparseSeries.one(self.D)
        low = self.min_degree()
        if low is not None:
            for _ in range(self.D // low):
                power = power * nil
                if not power.terms:
                    break
                result = result + power
        if c == -1:
            result = -result
        return result


def _within_caps(m: Monomial, caps: Mapping[int, int]) -> bool:
    counts: dict[int, int] = {}
    for i in m:
        n = counts.get(i, 0) + 1
        if n > caps.get(i, 0):
            return False
        counts[i] = n
    return True


def format_series(s: SparseSeries) -> str:
    """Terms sorted by (degree, monomial), e.g. ``1 + X1X2 - X2X1``."""
    parts: list[str] = []
    if s.const:
        parts.append(str(s.const))
    for m in sorted(s.terms, key=lambda m: (len(m), m)):
        c = s.terms[m]
        mono = "".join(f"X{i}" for i in m)
        mag = "" if abs(c) == 1 else str(abs(c))
        if not parts:
            parts.append(("-" if c < 0 else "") + mag + mono)
        else:
            parts.append(("- " if c < 0 else "+ ") + mag + mono)
    return " ".join(parts) if parts else "0"


# -- embeddings -----------------------------------------------------------------

def magnus_embed(w: FreeWord, D: int, caps: Optional[Mapping[int, int]] = None) -> SparseSeries:
    """Image of a free word, multiplied out letter by letter.

    ``x_i -> 1 + X_i`` and ``x_i^-1 -> 1 - X_i + X_i^2 - ...``.
    """
    if D < 1:
        raise ValueError("truncation degree must be >= 1")
    terms: dict[Monomial, int] = {}
    const = 1
    for a in w.signed:
        i = abs(a)
        new = dict(terms)
        if a > 0:
            shifted = [((), const)] + list(terms.items())
            for m, c in shifted:
                if len(m) < D:
                    k = m + (i,)
                    new[k] = new.get(k, 0) + c
        else:
            for m, c in [((), const)] + list(terms.items()):
                k, sign = m, 1
                while len(k) < D:
                    k = k + (i,)
                    sign = -sign
                    new[k] = new.get(k, 0) + sign * c
        terms = {m: c for m, c in new.items() if c}
        if caps is not None:
            terms = {m: c for m, c in terms.items() if _within_caps(m, caps)}
    return SparseSeries._wrap(D, const, terms)


class WeightInvariantError(AssertionError):
    """A subexpression's image had a term below its formal weight."""


def magnus_series(expr: CommutatorExpr, D: int) -> SparseSeries:
    """Image of ``expr`` modulo degree > ``D``, computed through the tree.

    Uses ``[u, v] - 1 = u^-1 v^-1 (AB - BA)`` with ``A = u - 1``, ``B = v - 1``.
    Each node's image has no terms below its formal weight; every computed
    node is checked against that, so the truncations chosen for the
    children (``D - weight(sibling)``) are justified by the computation.
    """
    if D < 0:
        raise ValueError("truncation degree must be nonnegative")
    memo: dict[tuple[int, int], SparseSeries] = {}

    def series(e: CommutatorExpr, D: int) -> SparseSeries:
        D = max(D, 0)
        key = (id(e), D)
        if key in memo:
            return memo[key]
        if isinstance(e, Var):
            s = SparseSeries(D, 1, {(e.index,): 1})
        elif isinstance(e, Pow):
            s = series(e.base, D) ** e.exponent
        else:
            a, b = formal_weight(e.left), formal_weight(e.right)
            U, V = series(e.left, D - b), series(e.right, D - a)
            A = SparseSeries._wrap(U.D, 0, U.terms)
            B = SparseSeries._wrap(V.D, 0, V.terms)
            comm = A.mul(B, D) - B.mul(A, D)
            rest = D - a - b
            if rest >= 1 and comm.terms:
                ui = U.truncate(rest).inverse()
                vi = V.truncate(rest).inverse()
                comm = ui.mul(vi, rest).mul(comm, D)
            s = SparseSeries._wrap(D, 1, comm.terms)
        low = s.min_degree()
        w = formal_weight(e)
        if low is not None and low < w:
            raise WeightInvariantError(f"term of degree {low} below formal weight {w}")
        memo[key] = s
        return s

    return series(expr, D)


def gamma_weight(expr: CommutatorExpr, D: int) -> Optional[int]:
    """Largest k with ``expr`` in gamma_k of the free group, or None if it exceeds ``D``."""
    if D < 1:
        raise ValueError("truncation degree must be >= 1")
    if len(expand(expr)) == 0:
        raise ValueError("identity word has no weight")
    return magnus_series(expr, D).min_degree()


def leading_terms(expr: CommutatorExpr, D: int) -> dict[Monomial, int]:
    """Minimal-degree nonzero terms of the image (empty if the weight exceeds ``D``)."""
    s = magnus_series(expr, D)
    k = s.min_degree()
    return {} if k is None else s.component(k)


def is_law_of_Nc(expr: CommutatorExpr, c: int) -> bool:
    """True iff ``expr = 1`` holds in every nilpotent group of class <= c."""
    if c < 0:
        raise ValueError("class must be nonnegative")
    if c == 0:
        if len(expand(expr)) == 0:
            raise ValueError("identity word has no weight")
        return True
    return gamma_weight(expr, c) is None


# -- Witt numbers and ranks -------------------------------------------------------

def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius is defined on positive integers")
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def witt_number(r: int, n: int) -> int:
    """Rank of gamma_n / gamma_{n+1} for the free group of rank r."""
    if r < 1 or n < 1:
        raise ValueError("r and n must be positive")
    total = sum(mobius(d) * r ** (n // d) for d in range(1, n + 1) if n % d == 0)
    return total // n


def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q of an integer matrix by fraction-free (Bareiss) elimination."""
    M = [list(map(int, r)) for r in rows if any(r)]
    if not M:
        return 0
    ncols = len(M[0])
    rank, prev = 0, 1
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(M)) if M[i][col]), None)
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        p = M[rank][col]
        for i in range(rank + 1, len(M)):
            f = M[i][col]
            M[i] = [(p * M[i][j] - f * M[rank][j]) // prev for j in range(ncols)]
        prev = p
        rank += 1
        if rank == len(M):
            break
    return rank


def leading_components_rank(exprs: Iterable[CommutatorExpr], n: int) -> int:
    """Rank over Q of the degree-n Magnus components of ``exprs``."""
    comps = []
    for e in exprs:
        s = magnus_series(e, n)
        low = s.min_degree()
        if low is not None and low < n:
            raise ValueError(f"{e} has weight {low} < {n}")
        comp = s.component(n)
        if not comp:
            log.info("%s has weight above %d; contributes a zero row", e, n)
        comps.append(comp)
    monos = sorted({m for c in comps for m in c})
    col = {m: j for j, m in enumerate(monos)}
    rows = []
    for comp in comps:
        row = [0] * len(monos)
        for m, c in comp.items():
            row[col[m]] = c
        rows.append(row)
    return integer_rank(rows)
