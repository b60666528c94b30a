"""Shared helpers for the test suite: small concrete groups and naive oracles."""

from __future__ import annotations

import itertools

from gammapath.groups import CayleyGroup, CyclicProduct, IntegerGroup


def Z(*orders: int) -> CyclicProduct:
    return CyclicProduct(orders)


INTS = IntegerGroup()


def make_s3() -> CayleyGroup:
    """Symmetric group on 3 points; composition is left-to-right."""
    perms = sorted(itertools.permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    table = [
        [idx[tuple(b[a[x]] for x in range(3))] for b in perms]
        for a in perms
    ]
    return CayleyGroup(table, identity=idx[(0, 1, 2)], name="S3")


_Q8_MUL = {
    ("e", "e"): (1, "e"), ("e", "i"): (1, "i"), ("e", "j"): (1, "j"), ("e", "k"): (1, "k"),
    ("i", "e"): (1, "i"), ("i", "i"): (-1, "e"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
    ("j", "e"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "e"), ("j", "k"): (1, "i"),
    ("k", "e"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "e"),
}

Q8_NAMES = ["e", "-e", "i", "-i", "j", "-j", "k", "-k"]


def make_q8() -> CayleyGroup:
    """Quaternion group of order 8 with elements ordered e,-e,i,-i,j,-j,k,-k."""

    def decode(name: str) -> tuple[int, str]:
        return (-1, name[1]) if name.startswith("-") else (1, name)

    def encode(sign: int, letter: str) -> str:
        return letter if sign == 1 else "-" + letter

    idx = {name: n for n, name in enumerate(Q8_NAMES)}
    table = []
    for a in Q8_NAMES:
        row = []
        sa, la = decode(a)
        for b in Q8_NAMES:
            sb, lb = decode(b)
            sm, lm = _Q8_MUL[(la, lb)]
            row.append(idx[encode(sa * sb * sm, lm)])
        table.append(row)
    return CayleyGroup(table, identity=0, name="Q8")


def naive_max_packing(members) -> int:
    """Largest pairwise vertex-disjoint subfamily, by full subset enumeration."""
    sets = [frozenset(m.vertices) for m in members]
    best = 0
    for r in range(len(sets), 0, -1):
        if r <= best:
            break
        for combo in itertools.combinations(range(len(sets)), r):
            union = set()
            ok = True
            for i in combo:
                if sets[i] & union:
                    ok = False
                    break
                union |= sets[i]
            if ok:
                best = max(best, r)
                break
    return best


def naive_min_cover(members) -> int:
    """Smallest vertex set meeting every member, by subsets of increasing size."""
    sets = [frozenset(m.vertices) for m in members]
    if not sets:
        return 0
    universe = sorted(set().union(*sets), key=repr)
    for r in range(0, len(universe) + 1):
        for combo in itertools.combinations(universe, r):
            chosen = set(combo)
            if all(chosen & s for s in sets):
                return r
    raise AssertionError("unreachable")
