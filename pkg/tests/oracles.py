"""Slow, independent reference computations used to cross-check the engine.

Everything here works on element objects with Python sets, never on the
index tables, and uses different characterizations where possible (e.g.
nilpotency via "elements of coprime order commute").
"""

from fractions import Fraction
from itertools import product
from math import gcd


def elements(G):
    return list(G.elements)


def generated(gens, identity):
    out = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = a * g
                if b not in out:
                    out.add(b)
                    nxt.append(b)
        frontier = nxt
    return frozenset(out)


def order_of(g, identity):
    k, h = 1, g
    while h != identity:
        h = h * g
        k += 1
    return k


def is_nilpotent_set(S, identity):
    """Finite group S is nilpotent iff any two elements of coprime order commute."""
    orders = {g: order_of(g, identity) for g in S}
    return all(a * b == b * a for a in S for b in S if gcd(orders[a], orders[b]) == 1)


def principal_normal_closure(G, x):
    els = elements(G)
    conj = {g.inverse() * x * g for g in els}
    return generated(list(conj), G.element(0))


def normal_lattice(G):
    """All normal subgroups: principal normal closures closed under pairwise join."""
    identity = G.element(0)
    lattice = {principal_normal_closure(G, x) for x in elements(G)}
    changed = True
    while changed:
        changed = False
        cur = list(lattice)
        for A, B in product(cur, cur):
            if A <= B or B <= A:
                continue
            J = generated(list(A | B), identity)
            if J not in lattice:
                lattice.add(J)
                changed = True
    return lattice


def fitting_oracle(G):
    identity = G.element(0)
    nil = [N for N in normal_lattice(G) if is_nilpotent_set(N, identity)]
    best = max(nil, key=len)
    assert all(N <= best for N in nil)
    return best


def comm(a, b):
    return a.inverse() * b.inverse() * a * b


def lcs_class(S, identity):
    """Class of the finite group S via the lower central series on element sets, or None."""
    S = frozenset(S)
    cur = S
    c = 0
    while len(cur) > 1:
        nxt = generated([comm(a, b) for a in cur for b in S], identity)
        if nxt == cur:
            return None
        cur = nxt
        c += 1
    return c


def rational_rank(rows):
    """Rank by Gaussian elimination over the rationals."""
    M = [[Fraction(v) for v in r] for r in rows]
    rank, col = 0, 0
    ncols = len(M[0]) if M else 0
    while rank < len(M) and col < ncols:
        piv = next((i for i in range(rank, len(M)) if M[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for i in range(len(M)):
            if i != rank and M[i][col] != 0:
                f = M[i][col] / M[rank][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[rank])]
        rank += 1
        col += 1
    return rank


def eval_elements(expr, assignment, identity):
    """Evaluate a commutator expression directly on element objects."""
    from nilvariety.words import Comm, Var

    if isinstance(expr, Var):
        return assignment[expr.index]
    if isinstance(expr, Comm):
        return comm(eval_elements(expr.left, assignment, identity), eval_elements(expr.right, assignment, identity))
    out, base = identity, eval_elements(expr.base, assignment, identity)
    for _ in range(expr.exponent):
        out = out * base
    return out
