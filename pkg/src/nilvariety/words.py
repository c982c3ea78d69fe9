"""Commutator expressions, free words, and their evaluation in finite groups.

Conventions used throughout the package:

* ``[u, v] = u^-1 v^-1 u v``.
* Multi-entry brackets are left-normed: ``[a, b, c, d] = [[[a, b], c], d]``.

Text grammar (``parse_expr`` / ``format_expr`` round-trip exactly)::

    xN            variable N >= 1
    (c A B)       commutator [A, B]
    (p A k)       power A^k, k a nonzero integer
    [A,B,C,...]   left-normed bracket sugar, at least two entries

``format_expr`` always prints commutator chains with the bracket sugar, so
``format_expr(parse_expr(s)) == s`` holds for text written in that form.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import reduce
from typing import TYPE_CHECKING, Iterable, Iterator, Mapping, Union

import numpy as np

if TYPE_CHECKING:
    from .groups import FiniteGroup


@dataclass(frozen=True)
class Var:
    index: int

    def __post_init__(self):
        if not isinstance(self.index, int) or self.index < 1:
            raise ValueError(f"variable index must be a positive integer, got {self.index!r}")

    def __str__(self):
        return format_expr(self)


@dataclass(frozen=True)
class Comm:
    left: "CommutatorExpr"
    right: "CommutatorExpr"

    def __str__(self):
        return format_expr(self)


@dataclass(frozen=True)
class Pow:
    base: "CommutatorExpr"
    exponent: int

    def __post_init__(self):
        if not isinstance(self.exponent, int) or self.exponent == 0:
            raise ValueError(f"power exponent must be a nonzero integer, got {self.exponent!r}")

    def __str__(self):
        return format_expr(self)


CommutatorExpr = Union[Var, Comm, Pow]


def x(i: int) -> Var:
    return Var(i)


def bracket(*entries: CommutatorExpr) -> CommutatorExpr:
    """Left-normed commutator of two or more expressions."""
    if len(entries) < 2:
        raise ValueError("a bracket needs at least two entries")
    return reduce(Comm, entries)


# -- structural measures ------------------------------------------------------

def variables(expr: CommutatorExpr) -> set[int]:
    return set(multidegree(expr))


def var_count(expr: CommutatorExpr) -> int:
    """Largest variable index occurring in ``expr``."""
    return max(variables(expr))


def formal_weight(expr: CommutatorExpr) -> int:
    """Leaves count 1, commutators add, powers take the weight of their base."""
    if isinstance(expr, Var):
        return 1
    if isinstance(expr, Comm):
        return formal_weight(expr.left) + formal_weight(expr.right)
    return formal_weight(expr.base)


def multidegree(expr: CommutatorExpr) -> Counter:
    """Per-variable leaf counts matching ``formal_weight``."""
    if isinstance(expr, Var):
        return Counter({expr.index: 1})
    if isinstance(expr, Comm):
        return multidegree(expr.left) + multidegree(expr.right)
    return multidegree(expr.base)


def has_commutator(expr: CommutatorExpr) -> bool:
    if isinstance(expr, Var):
        return False
    if isinstance(expr, Comm):
        return True
    return has_commutator(expr.base)


# -- builders -----------------------------------------------------------------

def build_W(n: int) -> CommutatorExpr:
    """``W_1 = [x1,x2,x1,x2]``, ``W_n = [W_{n-1}, x_{n+1}, W_{n-1}, x_{n+1}]``."""
    if n < 1:
        raise ValueError("W_n is defined for n >= 1")
    w = bracket(x(1), x(2), x(1), x(2))
    for k in range(2, n + 1):
        w = bracket(w, x(k + 1), w, x(k + 1))
    return w


def build_V(n: int) -> CommutatorExpr:
    """``V_1 = [E, x3, E, x3]`` with ``E = [x2,x1,x1,x1,x1]``; ``V_n`` doubles like ``W_n``."""
    if n < 1:
        raise ValueError("V_n is defined for n >= 1")
    e = bracket(x(2), x(1), x(1), x(1), x(1))
    v = bracket(e, x(3), e, x(3))
    for k in range(2, n + 1):
        v = bracket(v, x(k + 2), v, x(k + 2))
    return v


def build_engel(c: int) -> CommutatorExpr:
    """``[x1, x2, ..., x2]`` with ``c`` copies of ``x2``."""
    if c < 1:
        raise ValueError("Engel words need c >= 1")
    return bracket(x(1), *([x(2)] * c))


def build_gamma_word(k: int) -> CommutatorExpr:
    """``[x1, ..., xk]``; the law defining class at most ``k - 1``."""
    if k < 2:
        raise ValueError("gamma words need k >= 2")
    return bracket(*(x(i) for i in range(1, k + 1)))


_hall_cache: dict[int, list[list[CommutatorExpr]]] = {}


def hall_basic_commutators(r: int, n: int) -> list[CommutatorExpr]:
    """Hall basic commutators of weight exactly ``n`` on ``x1..xr``.

    Ordering: ``x1 < x2 < ... < xr``, then by weight; within a weight by the
    pair (position of left factor, position of right factor). ``[a, b]`` is
    basic when ``a > b`` and, if ``a = [a1, a2]``, also ``a2 <= b``.
    """
    if r < 1 or n < 1:
        raise ValueError("r and n must be positive")
    layers = _hall_cache.setdefault(r, [[x(i) for i in range(1, r + 1)]])
    while len(layers) < n:
        w = len(layers) + 1
        pos: dict[CommutatorExpr, int] = {}
        for layer in layers:
            for c in layer:
                pos[c] = len(pos)
        new = []
        for wa in range(1, w):
            wb = w - wa
            for a in layers[wa - 1]:
                for b in layers[wb - 1]:
                    if pos[a] <= pos[b]:
                        continue
                    if isinstance(a, Comm) and pos[a.right] > pos[b]:
                        continue
                    new.append((pos[a], pos[b], Comm(a, b)))
        new.sort(key=lambda t: (t[0], t[1]))
        layers.append([c for _, _, c in new])
    return list(layers[n - 1])


# -- free words ---------------------------------------------------------------

class FreeWord:
    """Freely reduced word over ``x_i^{+1}, x_i^{-1}``; reduced on construction.

    Letters are stored as signed integers (``+i`` / ``-i``); ``letters`` gives
    them as ``(index, sign)`` pairs.
    """

    __slots__ = ("_w",)

    def __init__(self, letters: Iterable = ()):
        stack: list[int] = []
        for letter in letters:
            if isinstance(letter, tuple):
                i, s = letter
                if s not in (1, -1):
                    raise ValueError(f"letter sign must be +1 or -1, got {s!r}")
                letter = i * s
            if letter == 0:
                raise ValueError("generator indices are positive")
            if stack and stack[-1] == -letter:
                stack.pop()
            else:
                stack.append(letter)
        self._w = tuple(stack)

    @classmethod
    def _raw(cls, w: tuple[int, ...]) -> "FreeWord":
        obj = cls.__new__(cls)
        obj._w = w
        return obj

    @property
    def letters(self) -> tuple[tuple[int, int], ...]:
        return tuple((abs(a), 1 if a > 0 else -1) for a in self._w)

    @property
    def signed(self) -> tuple[int, ...]:
        return self._w

    def __len__(self):
        return len(self._w)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.letters)

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        a, b = self._w, other._w
        k = 0
        while k < len(a) and k < len(b) and a[-1 - k] == -b[k]:
            k += 1
        return FreeWord._raw(a[: len(a) - k] + b[k:])

    def inverse(self) -> "FreeWord":
        return FreeWord._raw(tuple(-a for a in reversed(self._w)))

    def __pow__(self, k: int) -> "FreeWord":
        base = self if k >= 0 else self.inverse()
        out = FreeWord()
        for _ in range(abs(k)):
            out = out * base
        return out

    def letter_counts(self) -> Counter:
        return Counter(abs(a) for a in self._w)

    def __eq__(self, other):
        return isinstance(other, FreeWord) and self._w == other._w

    def __hash__(self):
        return hash(self._w)

    def __repr__(self):
        return f"FreeWord({str(self)!r})"

    def __str__(self):
        if not self._w:
            return "1"
        return " ".join(f"x{a}" if a > 0 else f"x{-a}^-1" for a in self._w)


def generator(i: int) -> FreeWord:
    return FreeWord._raw((i,))


def expand(expr: CommutatorExpr) -> FreeWord:
    """The freely reduced word represented by ``expr``."""
    if isinstance(expr, Var):
        return generator(expr.index)
    if isinstance(expr, Comm):
        u, v = expand(expr.left), expand(expr.right)
        return u.inverse() * v.inverse() * u * v
    return expand(expr.base) ** expr.exponent


# -- evaluation ---------------------------------------------------------------

def _lookup(assignment: Mapping, i: int):
    try:
        return assignment[i]
    except KeyError:
        raise KeyError(f"assignment has no value for variable x{i}") from None


def evaluate_indices(expr: CommutatorExpr, G: "FiniteGroup", assignment: Mapping[int, object]):
    """Evaluate on element indices; values may be ints or equal-shape index arrays."""
    arrays = {i: np.asarray(v, dtype=np.int64) for i, v in assignment.items()}

    def ev(e):
        if isinstance(e, Var):
            return _lookup(arrays, e.index)
        if isinstance(e, Comm):
            return G.batch_comm(ev(e.left), ev(e.right))
        return G.batch_power(ev(e.base), e.exponent)

    for i in variables(expr):
        _lookup(arrays, i)
    out = ev(expr)
    return int(out) if out.ndim == 0 else out


def evaluate(expr: CommutatorExpr, assignment: Mapping[int, object], G: "FiniteGroup"):
    """Value of ``expr`` in ``G`` with ``x_i`` replaced by ``assignment[i]`` (group elements)."""
    for i in variables(expr):
        _lookup(assignment, i)
    idx = {i: G.index_of(g) for i, g in assignment.items()}
    return G.element(evaluate_indices(expr, G, idx))


def evaluate_word(word: FreeWord, assignment: Mapping[int, object], G: "FiniteGroup"):
    """Letter-by-letter evaluation of a free word; an independent path to ``evaluate``."""
    idx = {i: G.index_of(g) for i, g in assignment.items()}
    acc = 0
    for a in word.signed:
        g = _lookup(idx, abs(a))
        acc = G.mul(acc, g if a > 0 else G.inv(g))
    return G.element(acc)


# -- text form ----------------------------------------------------------------

class WordSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int, text: str):
        super().__init__(f"{msg} at position {pos}: {text!r}")
        self.pos = pos


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def error(self, msg):
        raise WordSyntaxError(msg, self.i, self.text)

    def skip(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.i] if self.i < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.i += 1

    def integer(self, signed: bool) -> int:
        self.skip()
        start = self.i
        if signed and self.i < len(self.text) and self.text[self.i] in "+-":
            self.i += 1
        while self.i < len(self.text) and self.text[self.i].isdigit():
            self.i += 1
        token = self.text[start:self.i]
        if not token.lstrip("+-"):
            self.i = start
            self.error("expected an integer")
        return int(token)

    def expr(self) -> CommutatorExpr:
        ch = self.peek()
        if ch == "x":
            self.i += 1
            start = self.i
            n = self.integer(signed=False)
            if n < 1:
                self.i = start
                self.error("variable index must be >= 1")
            return Var(n)
        if ch == "[":
            self.i += 1
            entries = [self.expr()]
            while self.peek() == ",":
                self.i += 1
                entries.append(self.expr())
            if len(entries) < 2:
                self.error("bracket needs at least two entries")
            self.expect("]")
            return bracket(*entries)
        if ch == "(":
            self.i += 1
            op = self.peek()
            if op not in ("c", "p"):
                self.error("expected 'c' or 'p' after '('")
            self.i += 1
            if self.i < len(self.text) and not self.text[self.i].isspace():
                self.error("expected whitespace after operator")
            a = self.expr()
            if op == "c":
                node = Comm(a, self.expr())
            else:
                self.skip()
                start = self.i
                k = self.integer(signed=True)
                if k == 0:
                    self.i = start
                    self.error("power exponent must be nonzero")
                node = Pow(a, k)
            self.expect(")")
            return node
        if not ch:
            self.error("unexpected end of input")
        self.error(f"unexpected character {ch!r}")


def parse_expr(text: str) -> CommutatorExpr:
    p = _Parser(text)
    e = p.expr()
    if p.peek():
        p.error("trailing input")
    return e


def format_expr(expr: CommutatorExpr) -> str:
    if isinstance(expr, Var):
        return f"x{expr.index}"
    if isinstance(expr, Pow):
        return f"(p {format_expr(expr.base)} {expr.exponent})"
    entries = []
    node = expr
    while isinstance(node, Comm):
        entries.append(node.right)
        node = node.left
    entries.append(node)
    return "[" + ",".join(format_expr(e) for e in reversed(entries)) + "]"
