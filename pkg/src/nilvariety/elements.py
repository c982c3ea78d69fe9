"""Concrete group elements: permutations, unitriangular matrices, and cosets.

Permutations act on the right: ``i^(pq) = (i^p)^q``. Internally points are
0-based; cycle notation and image arrays in files are 1-based.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


class Perm:
    __slots__ = ("images", "_hash")

    def __init__(self, images):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation of 0..{len(images) - 1}: {images}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def _raw(cls, images: tuple) -> "Perm":
        p = cls.__new__(cls)
        p.images = images
        p._hash = hash(images)
        return p

    @classmethod
    def from_cycles(cls, degree: int, *cycles) -> "Perm":
        """Build from 1-based cycles, e.g. ``Perm.from_cycles(3, (1, 2))``."""
        img = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a - 1] = b - 1
        return cls(img)

    @classmethod
    def from_image_array(cls, arr) -> "Perm":
        return cls([a - 1 for a in arr])

    def image_array(self) -> list[int]:
        return [a + 1 for a in self.images]

    @property
    def degree(self) -> int:
        return len(self.images)

    def __mul__(self, other: "Perm") -> "Perm":
        b = other.images
        return Perm._raw(tuple([b[i] for i in self.images]))

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, a in enumerate(self.images):
            inv[a] = i
        return Perm._raw(tuple(inv))

    def identity_like(self) -> "Perm":
        return Perm._raw(tuple(range(len(self.images))))

    def coords(self) -> tuple[int, ...]:
        return self.images

    def __eq__(self, other):
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self):
        return self._hash

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for i in range(len(self.images)):
            if i in seen or self.images[i] == i:
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j + 1)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def __str__(self):
        cyc = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) if cyc else "()"

    __repr__ = __str__


@lru_cache(maxsize=None)
def _upper_layout(n: int):
    """Positions of the strictly upper entries and the product rule on them."""
    pos = {}
    for i in range(n):
        for j in range(i + 1, n):
            pos[i, j] = len(pos)
    rule = []
    for (i, j), t in pos.items():
        rule.append((t, tuple((pos[i, k], pos[k, j]) for k in range(i + 1, j))))
    return pos, tuple(rule)


class UniMatrix:
    """Upper unitriangular ``n x n`` matrix over ``Z/m``.

    Only the strictly upper entries are stored, row-major.
    """

    __slots__ = ("n", "m", "entries", "_hash")

    def __init__(self, n: int, m: int, entries):
        entries = tuple(int(e) % m for e in entries)
        if len(entries) != n * (n - 1) // 2:
            raise ValueError("wrong number of upper entries")
        self.n, self.m, self.entries = n, m, entries
        self._hash = hash((n, m, entries))

    @classmethod
    def from_rows(cls, rows, m: int) -> "UniMatrix":
        n = len(rows)
        if m < 2:
            raise ValueError("modulus must be >= 2")
        up = []
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError("matrix is not square")
            for j, v in enumerate(row):
                if not 0 <= v < m:
                    raise ValueError(f"entry ({i + 1},{j + 1}) = {v} not reduced mod {m}")
                if i == j and v != 1:
                    raise ValueError(f"diagonal entry ({i + 1},{i + 1}) is {v}, expected 1")
                if i > j and v != 0:
                    raise ValueError(f"entry ({i + 1},{j + 1}) below the diagonal is nonzero")
                if i < j:
                    up.append(v)
        return cls(n, m, up)

    @classmethod
    def elementary(cls, n: int, m: int, i: int, j: int, value: int = 1) -> "UniMatrix":
        """Identity plus ``value`` at 1-based position (i, j), i < j."""
        pos, _ = _upper_layout(n)
        e = [0] * len(pos)
        e[pos[i - 1, j - 1]] = value
        return cls(n, m, e)

    def rows(self) -> list[list[int]]:
        pos, _ = _upper_layout(self.n)
        M = [[int(i == j) for j in range(self.n)] for i in range(self.n)]
        for (i, j), t in pos.items():
            M[i][j] = self.entries[t]
        return M

    def __mul__(self, other: "UniMatrix") -> "UniMatrix":
        a, b, m = self.entries, other.entries, self.m
        _, rule = _upper_layout(self.n)
        out = [0] * len(a)
        for t, terms in rule:
            s = a[t] + b[t]
            for p, q in terms:
                s += a[p] * b[q]
            out[t] = s % m
        u = UniMatrix.__new__(UniMatrix)
        u.n, u.m, u.entries = self.n, m, tuple(out)
        u._hash = hash((u.n, m, u.entries))
        return u

    def inverse(self) -> "UniMatrix":
        n, m, a = self.n, self.m, self.entries
        pos, _ = _upper_layout(n)
        inv = [0] * len(a)
        for d in range(1, n):
            for i in range(n - d):
                j = i + d
                s = a[pos[i, j]]
                for k in range(i + 1, j):
                    s += a[pos[i, k]] * inv[pos[k, j]]
                inv[pos[i, j]] = (-s) % m
        return UniMatrix(n, m, inv)

    def identity_like(self) -> "UniMatrix":
        return UniMatrix(self.n, self.m, [0] * len(self.entries))

    def coords(self) -> tuple[int, ...]:
        return self.entries

    def __eq__(self, other):
        return (isinstance(other, UniMatrix) and self.n == other.n and self.m == other.m
                and self.entries == other.entries)

    def __hash__(self):
        return self._hash

    def __str__(self):
        return "[" + "; ".join(" ".join(map(str, r)) for r in self.rows()) + "]"

    __repr__ = __str__


class QuotientMap:
    """Canonical coset representatives of a normal subgroup (minimal index per coset)."""

    def __init__(self, G, canon: np.ndarray):
        self.G = G
        self.canon = canon


class Coset:
    __slots__ = ("rep", "qmap")

    def __init__(self, rep: int, qmap: QuotientMap):
        self.rep = int(rep)
        self.qmap = qmap

    def __mul__(self, other: "Coset") -> "Coset":
        q = self.qmap
        return Coset(q.canon[q.G.mul(self.rep, other.rep)], q)

    def inverse(self) -> "Coset":
        q = self.qmap
        return Coset(q.canon[q.G.inv(self.rep)], q)

    def identity_like(self) -> "Coset":
        return Coset(0, self.qmap)

    def __eq__(self, other):
        return isinstance(other, Coset) and self.qmap is other.qmap and self.rep == other.rep

    def __hash__(self):
        return hash(self.rep)

    def __str__(self):
        return f"{self.qmap.G.element(self.rep)}N"

    __repr__ = __str__


# -- vectorized composition on coordinate arrays ---------------------------------
# Coordinates are stacked column-wise: shape (width, count), one column per element.

def compose_unitriangular(A: np.ndarray, B: np.ndarray, n: int, m: int) -> np.ndarray:
    """Column-wise products of stacked upper-entry coordinates."""
    _, rule = _upper_layout(n)
    out = A + B
    for t, terms in rule:
        row = out[t]
        for p, q in terms:
            row += A[p] * B[q]
    out %= m
    return out


def compose_perm(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return np.take_along_axis(B, A, axis=0)
