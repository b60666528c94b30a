"""Group arithmetic and the classification predicates for path-weight families.

Three kinds of groups are supported: products of cyclic groups (written
additively, elements are coordinate tuples), arbitrary finite groups given by
a Cayley table (elements are indices), and the integers.  All values are
immutable; every operation is a pure function.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

from .errors import GroupMismatchError, InternalInvariantError

INFINITE = math.inf


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factorization(n: int) -> dict[int, int]:
    factors: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def _invariant_factors_from_orders(orders: tuple[int, ...]) -> tuple[int, ...]:
    """Canonical d_1 | d_2 | ... | d_m decomposition of a product of cyclic groups."""
    by_prime: dict[int, list[int]] = {}
    for m in orders:
        for p, e in _prime_factorization(m).items():
            by_prime.setdefault(p, []).append(e)
    for exps in by_prime.values():
        exps.sort(reverse=True)
    width = max((len(v) for v in by_prime.values()), default=0)
    factors = []
    for i in range(width):
        d = 1
        for p, exps in by_prime.items():
            if i < len(exps):
                d *= p ** exps[i]
        factors.append(d)
    factors.sort()
    return tuple(factors)


def _partitions(n: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(n, 0, -1):
        for rest in _partitions(n - first):
            if not rest or rest[0] <= first:
                yield (first,) + rest


def abelian_types(order: int) -> list[tuple[int, ...]]:
    """All abelian groups of the given order, as invariant-factor tuples."""
    if order == 1:
        return [()]
    per_prime: list[list[tuple[int, ...]]] = []
    primes = sorted(_prime_factorization(order).items())
    for p, e in primes:
        per_prime.append([tuple(p ** k for k in part) for part in _partitions(e)])
    types = set()
    for combo in itertools.product(*per_prime):
        width = max(len(c) for c in combo)
        factors = []
        for i in range(width):
            d = 1
            for c in combo:
                if i < len(c):
                    d *= c[i]  # partitions are descending, so factor i is the i-th largest
            factors.append(d)
        factors.sort()
        types.add(tuple(factors))
    return sorted(types)


@dataclass(frozen=True)
class GroupElem:
    """An element of a specific group; value is a tuple, an index, or an int."""

    group: "GroupSpec"
    value: tuple | int

    def __add__(self, other: "GroupElem") -> "GroupElem":
        return self.group.add(self, other)

    def __neg__(self) -> "GroupElem":
        return self.group.neg(self)

    def __sub__(self, other: "GroupElem") -> "GroupElem":
        return self.group.add(self, self.group.neg(other))

    def __bool__(self) -> bool:
        return self != self.group.zero()

    def sort_key(self):
        return self.group.elem_sort_key(self)

    def to_json(self):
        return self.group.elem_to_json(self)

    def __repr__(self):
        return f"<{self.value!r} in {self.group.name}>"


class GroupSpec:
    """Shared interface of the three group kinds."""

    kind: str
    name: str
    is_abelian: bool
    is_finite: bool

    def _check(self, *elems: GroupElem) -> None:
        for e in elems:
            if e.group != self:
                raise GroupMismatchError(f"element {e!r} does not belong to {self.name}")

    def zero(self) -> GroupElem:
        raise NotImplementedError

    def add(self, a: GroupElem, b: GroupElem) -> GroupElem:
        raise NotImplementedError

    def neg(self, a: GroupElem) -> GroupElem:
        raise NotImplementedError

    def element(self, value) -> GroupElem:
        raise NotImplementedError

    def elements(self) -> list[GroupElem]:
        raise NotImplementedError

    @property
    def order(self) -> int | float:
        raise NotImplementedError

    def elem_sort_key(self, e: GroupElem):
        raise NotImplementedError

    def elem_to_json(self, e: GroupElem):
        raise NotImplementedError

    def elem_from_json(self, data) -> GroupElem:
        return self.element(data)

    def invariant_factors(self) -> tuple[int, ...]:
        """Invariant-factor decomposition; only for finite abelian groups."""
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def scale(self, n: int, e: GroupElem) -> GroupElem:
        """n-fold sum of e (n may be negative)."""
        self._check(e)
        if n < 0:
            return self.scale(-n, self.neg(e))
        acc = self.zero()
        for _ in range(n):
            acc = self.add(acc, e)
        return acc


class CyclicProduct(GroupSpec):
    """Direct product of cyclic groups Z/n1 x ... x Z/nk, written additively."""

    kind = "cyclic_product"
    is_abelian = True
    is_finite = True

    def __init__(self, orders: list[int] | tuple[int, ...]):
        orders = tuple(int(n) for n in orders)
        if any(n < 2 for n in orders):
            raise ValueError("cyclic factor orders must all be >= 2")
        self.orders = orders
        self._invariants = _invariant_factors_from_orders(orders)
        self._order = math.prod(orders) if orders else 1
        self.name = "x".join(f"Z/{n}" for n in orders) if orders else "trivial"
        self._hash = hash(("cyclic_product", orders))

    def __eq__(self, other):
        return isinstance(other, CyclicProduct) and other.orders == self.orders

    def __hash__(self):
        return self._hash

    @property
    def order(self) -> int:
        return self._order

    def zero(self) -> GroupElem:
        return GroupElem(self, (0,) * len(self.orders))

    def element(self, value) -> GroupElem:
        if isinstance(value, GroupElem):
            self._check(value)
            return value
        if isinstance(value, int):
            if len(self.orders) != 1:
                raise ValueError(f"{self.name} needs {len(self.orders)} coordinates")
            value = (value,)
        coords = tuple(int(c) % n for c, n in zip(value, self.orders, strict=True))
        return GroupElem(self, coords)

    def add(self, a: GroupElem, b: GroupElem) -> GroupElem:
        self._check(a, b)
        return GroupElem(self, tuple((x + y) % n for x, y, n in zip(a.value, b.value, self.orders)))

    def neg(self, a: GroupElem) -> GroupElem:
        self._check(a)
        return GroupElem(self, tuple((-x) % n for x, n in zip(a.value, self.orders)))

    def elements(self) -> list[GroupElem]:
        return [GroupElem(self, c) for c in itertools.product(*(range(n) for n in self.orders))]

    def elem_sort_key(self, e: GroupElem):
        return e.value

    def elem_to_json(self, e: GroupElem):
        return list(e.value)

    def invariant_factors(self) -> tuple[int, ...]:
        return self._invariants

    def to_json(self) -> dict:
        return {"type": "cyclic_product", "orders": list(self.orders)}


class CayleyGroup(GroupSpec):
    """Finite group given explicitly by its Cayley table; may be nonabelian.

    table[a][b] is the index of a+b; the group axioms are checked at
    construction time.
    """

    kind = "cayley"
    is_finite = True

    def __init__(self, table: list[list[int]] | tuple, identity: int = 0, name: str | None = None):
        tab = tuple(tuple(int(x) for x in row) for row in table)
        n = len(tab)
        if n < 1 or any(len(row) != n for row in tab):
            raise ValueError("Cayley table must be square and nonempty")
        if any(x < 0 or x >= n for row in tab for x in row):
            raise ValueError("Cayley table entries must be element indices")
        identity = int(identity)
        if not 0 <= identity < n:
            raise ValueError("identity index out of range")
        for a in range(n):
            if tab[a][identity] != a or tab[identity][a] != a:
                raise ValueError("identity element does not act as identity")
        for a in range(n):
            if identity not in tab[a]:
                raise ValueError(f"element {a} has no inverse")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if tab[tab[a][b]][c] != tab[a][tab[b][c]]:
                        raise ValueError("Cayley table is not associative")
        self.table = tab
        self.identity = identity
        self.size = n
        self.is_abelian = all(tab[a][b] == tab[b][a] for a in range(n) for b in range(n))
        self.name = name or f"cayley[{n}]"
        self._hash = hash(("cayley", tab, identity))
        self._inverse = tuple(tab[a].index(identity) for a in range(n))

    def __eq__(self, other):
        return (
            isinstance(other, CayleyGroup)
            and other.table == self.table
            and other.identity == self.identity
        )

    def __hash__(self):
        return self._hash

    @property
    def order(self) -> int:
        return self.size

    def zero(self) -> GroupElem:
        return GroupElem(self, self.identity)

    def element(self, value) -> GroupElem:
        if isinstance(value, GroupElem):
            self._check(value)
            return value
        idx = int(value)
        if not 0 <= idx < self.size:
            raise ValueError(f"element index {idx} out of range for {self.name}")
        return GroupElem(self, idx)

    def add(self, a: GroupElem, b: GroupElem) -> GroupElem:
        # left-to-right as written: a + b = table[a][b]
        self._check(a, b)
        return GroupElem(self, self.table[a.value][b.value])

    def neg(self, a: GroupElem) -> GroupElem:
        self._check(a)
        return GroupElem(self, self._inverse[a.value])

    def elements(self) -> list[GroupElem]:
        return [GroupElem(self, i) for i in range(self.size)]

    def elem_sort_key(self, e: GroupElem):
        return e.value

    def elem_to_json(self, e: GroupElem):
        return e.value

    def invariant_factors(self) -> tuple[int, ...]:
        if not self.is_abelian:
            raise ValueError("invariant factors are defined for abelian groups only")
        # The multiset {#elements killed by d : d | n} pins down the type.
        n = self.size
        divisors = [d for d in range(1, n + 1) if n % d == 0]
        counts = tuple(
            sum(1 for e in self.elements() if self.scale(d, e) == self.zero()) for d in divisors
        )
        for candidate in abelian_types(n):
            model = tuple(math.prod(math.gcd(d, f) for f in candidate) for d in divisors)
            if model == counts:
                return candidate
        raise InternalInvariantError(f"no abelian type matches {self.name}")

    def to_json(self) -> dict:
        return {"type": "cayley", "identity": self.identity, "table": [list(r) for r in self.table]}


class IntegerGroup(GroupSpec):
    """The additive group of integers, with arbitrary precision."""

    kind = "integers"
    is_abelian = True
    is_finite = False
    name = "Z"

    def __eq__(self, other):
        return isinstance(other, IntegerGroup)

    def __hash__(self):
        return hash("integers")

    @property
    def order(self) -> float:
        return INFINITE

    def zero(self) -> GroupElem:
        return GroupElem(self, 0)

    def element(self, value) -> GroupElem:
        if isinstance(value, GroupElem):
            self._check(value)
            return value
        if isinstance(value, str):
            value = int(value, 10)
        return GroupElem(self, int(value))

    def add(self, a: GroupElem, b: GroupElem) -> GroupElem:
        self._check(a, b)
        return GroupElem(self, a.value + b.value)

    def neg(self, a: GroupElem) -> GroupElem:
        self._check(a)
        return GroupElem(self, -a.value)

    def elements(self) -> list[GroupElem]:
        raise ValueError("the integers cannot be enumerated")

    def elem_sort_key(self, e: GroupElem):
        # 0 < 1 < -1 < 2 < -2 < ...: gives a deterministic "smallest witness" order
        return (abs(e.value), 0 if e.value >= 0 else 1)

    def elem_to_json(self, e: GroupElem):
        return str(e.value)

    def to_json(self) -> dict:
        return {"type": "integers"}


def group_from_json(data: dict) -> GroupSpec:
    kind = data.get("type")
    if kind == "cyclic_product":
        return CyclicProduct(data["orders"])
    if kind == "cayley":
        return CayleyGroup(data["table"], data.get("identity", 0))
    if kind == "integers":
        return IntegerGroup()
    raise ValueError(f"unknown group type {kind!r}")


def element_order(e: GroupElem) -> int | float:
    """Smallest n >= 1 with n*e = 0; INFINITE for a nonzero integer."""
    group = e.group
    zero = group.zero()
    if not group.is_finite:
        return 1 if e == zero else INFINITE
    acc = e
    n = 1
    while acc != zero:
        acc = group.add(acc, e)
        n += 1
    return n


def cyclic_subgroup(e: GroupElem) -> frozenset[GroupElem]:
    """The subgroup generated by e, as an explicit element set."""
    group = e.group
    if not group.is_finite:
        raise ValueError("cyclic subgroups of the integers are infinite")
    seen = {group.zero()}
    acc = e
    while acc not in seen:
        seen.add(acc)
        acc = group.add(acc, e)
    return frozenset(seen)


def subgroup_contains(generator: GroupElem, target: GroupElem) -> bool:
    generator.group._check(target)
    return target in cyclic_subgroup(generator)


def elements_of_order_at_most_2(group: GroupSpec) -> frozenset[GroupElem]:
    """Exactly the g with g + g = 0 (the admissible shift values)."""
    if not group.is_finite:
        return frozenset({group.zero()})
    zero = group.zero()
    return frozenset(g for g in group.elements() if group.add(g, g) == zero)


def find_halving(group: GroupSpec, ell: GroupElem) -> GroupElem | None:
    """Smallest g (canonical order) with g + g = ell, or None."""
    if not group.is_finite:
        raise ValueError("halving search requires a finite group")
    group._check(ell)
    for g in sorted(group.elements(), key=group.elem_sort_key):
        if group.add(g, g) == ell:
            return g
    return None


def _coset_order(g1: GroupElem, sub: frozenset[GroupElem]) -> int:
    """Order of g1 + <g2> in the quotient by the subgroup sub."""
    group = g1.group
    acc = g1
    n = 1
    while acc not in sub:
        acc = group.add(acc, g1)
        n += 1
    return n


def find_bad_pair(group: GroupSpec) -> tuple[GroupElem, GroupElem] | None:
    """Nonzero (g1, g2) whose coset of g1 has order > 2 modulo <g2>, or None.

    Deterministic: the lexicographically first pair in canonical element
    order.  Such a pair exists exactly when the group fails the zero-weight
    packing/covering dichotomy, and it parameterizes the grid counterexample.
    """
    if not group.is_finite or not group.is_abelian:
        raise ValueError("bad-pair search requires a finite abelian group")
    zero = group.zero()
    elems = sorted(group.elements(), key=group.elem_sort_key)
    for g1 in elems:
        if g1 == zero:
            continue
        for g2 in elems:
            if g2 == zero:
                continue
            if _coset_order(g1, cyclic_subgroup(g2)) > 2:
                return (g1, g2)
    return None


def _require_classifiable(group: GroupSpec) -> None:
    if group.is_finite and not group.is_abelian:
        raise ValueError("classification predicates apply to abelian groups")


def has_zero_path_ep(group: GroupSpec) -> bool:
    """Whether zero-weight terminal-linking paths admit a bounded dual cover.

    True exactly for elementary abelian 2-groups and cyclic groups of order 4
    or prime order.  The result is computed twice, from the invariant-factor
    decomposition and from the bad-pair search, and the two must agree.
    """
    _require_classifiable(group)
    if not group.is_finite:
        return False
    listed = _zero_ep_from_factors(group.invariant_factors())
    replayed = find_bad_pair(group) is None
    if listed != replayed:
        raise InternalInvariantError(
            f"zero-weight classification disagrees on {group.name}: "
            f"factor list says {listed}, bad-pair search says {replayed}"
        )
    return listed


def _zero_ep_from_factors(factors: tuple[int, ...]) -> bool:
    if all(f == 2 for f in factors):
        return True
    if len(factors) == 1 and (factors[0] == 4 or _is_prime(factors[0])):
        return True
    return False


def _ell_ep_from_list(group: GroupSpec, ell: GroupElem) -> bool:
    factors = group.invariant_factors()
    zero = group.zero()
    if all(f == 2 for f in factors):
        return ell == zero or factors == (2,)
    if factors == (4,):
        return ell == zero or group.add(ell, ell) == zero
    return len(factors) == 1 and _is_prime(factors[0])


def _ell_ep_by_replay(group: GroupSpec, ell: GroupElem) -> bool:
    """Re-derive the verdict by replaying the reduction chain step by step."""
    zero = group.zero()
    if ell == zero:
        return find_bad_pair(group) is None
    # A nonzero g whose cyclic subgroup misses ell yields a grid counterexample.
    for g in sorted(group.elements(), key=group.elem_sort_key):
        if g != zero and ell not in cyclic_subgroup(g):
            return False
    # Otherwise the order of ell must be prime, the group order a power of it,
    # and the subgroup generated by ell the unique one of that order.
    p = element_order(ell)
    if not _is_prime(p):
        raise InternalInvariantError(f"expected prime order for {ell!r}, got {p}")
    n = group.order
    while n % p == 0:
        n //= p
    if n != 1:
        raise InternalInvariantError(f"{group.name} is not a {p}-group")
    if sum(1 for g in group.elements() if element_order(g) == p) != p - 1:
        raise InternalInvariantError(f"{group.name} has several subgroups of order {p}")
    if group.order == 2:
        return True  # parity family; equivalent to the orientation-free model
    g = find_halving(group, ell)
    if g is None:
        raise InternalInvariantError(f"no halving element for {ell!r} in {group.name}")
    return find_bad_pair(group) is None


def has_weight_ep(group: GroupSpec, ell: GroupElem) -> bool:
    """Whether weight-ell terminal-linking paths admit a bounded dual cover.

    Computed twice (explicit list vs. proof replay); disagreement raises an
    internal error.
    """
    _require_classifiable(group)
    if not group.is_finite:
        return False
    group._check(ell)
    listed = _ell_ep_from_list(group, ell)
    replayed = _ell_ep_by_replay(group, ell)
    if listed != replayed:
        raise InternalInvariantError(
            f"weight classification disagrees on {group.name}, ell={ell!r}: "
            f"list says {listed}, replay says {replayed}"
        )
    return listed


def sumset(xs: set[GroupElem] | frozenset[GroupElem], ys: set[GroupElem] | frozenset[GroupElem]) -> frozenset[GroupElem]:
    """{x + y : x in X, y in Y}; checks the prime-field lower bound when it applies."""
    out = frozenset(x + y for x in xs for y in ys)
    if xs and ys:
        group = next(iter(xs)).group
        if group.is_finite and group.is_abelian:
            factors = group.invariant_factors()
            if len(factors) == 1 and _is_prime(factors[0]):
                p = factors[0]
                if len(out) < min(len(xs) + len(ys) - 1, p):
                    raise InternalInvariantError(
                        f"sumset bound violated over {group.name}: |X+Y|={len(out)}"
                    )
    return out


def iter_abelian_groups(max_order: int) -> Iterator[CyclicProduct]:
    """All finite abelian groups with order <= max_order, up to isomorphism."""
    for n in range(1, max_order + 1):
        for factors in abelian_types(n):
            yield CyclicProduct(factors)
