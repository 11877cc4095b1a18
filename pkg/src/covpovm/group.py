"""Finite groups as multiplication tables.

Groups are immutable tables over element indices 0..n-1 with human-readable
names.  The two non-abelian order-8 groups come with their standard 2x2
matrix realizations built from Pauli matrices; those matrices double as the
defining 2-dimensional irreducible representation elsewhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

_S1 = np.array([[0, 1], [1, 0]], dtype=complex)
_S2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
_S3 = np.array([[1, 0], [0, -1]], dtype=complex)
_I2 = np.eye(2, dtype=complex)

# Quaternion units as matrices: 1 -> id, i -> i*s1, j -> -i*s2, k -> i*s3.
QUATERNION_NAMES = ("1", "-1", "i", "-i", "j", "-j", "k", "-k")
QUATERNION_MATRICES = (
    _I2, -_I2, 1j * _S1, -1j * _S1, -1j * _S2, 1j * _S2, 1j * _S3, -1j * _S3,
)

DIHEDRAL8_NAMES = ("1", "-1", "is1", "-is1", "s2", "-s2", "s3", "-s3")
DIHEDRAL8_MATRICES = (
    _I2, -_I2, 1j * _S1, -1j * _S1, _S2, -_S2, _S3, -_S3,
)

# Associativity validation is O(n^3); beyond this order it becomes opt-in.
ASSOCIATIVITY_CHECK_LIMIT = 64


@dataclass(eq=False)
class FiniteGroup:
    """Group given by its multiplication table.

    ``mul[a, b]`` is the index of the product of elements ``a`` and ``b``.
    ``kind`` tags groups produced by the builders (e.g. ``"quaternion"``,
    ``"cyclic:8"``, ``"product(cyclic:2,cyclic:4)"``) so that the dual can be
    constructed downstream; table-only groups carry ``kind=None``.
    """

    names: tuple
    mul: np.ndarray
    kind: str | None = None
    check_associativity: bool | None = None
    identity: int = field(init=False)
    inverse: np.ndarray = field(init=False)

    def __post_init__(self):
        self.mul = np.asarray(self.mul, dtype=int)
        n = self.order
        if self.mul.shape != (n, n):
            raise DomainError(f"table shape {self.mul.shape} for {n} names")
        if n == 0:
            raise DomainError("a group needs at least the identity")
        full = np.arange(n)
        if not np.all(np.sort(self.mul, axis=1) == full[None, :]):
            raise DomainError("table is not a Latin square (rows)")
        if not np.all(np.sort(self.mul, axis=0) == full[:, None]):
            raise DomainError("table is not a Latin square (columns)")
        idents = [e for e in range(n)
                  if np.all(self.mul[e] == full) and np.all(self.mul[:, e] == full)]
        if len(idents) != 1:
            raise DomainError("table has no (or no unique) two-sided identity")
        self.identity = idents[0]
        do_assoc = self.check_associativity
        if do_assoc is None:
            do_assoc = n <= ASSOCIATIVITY_CHECK_LIMIT
        if do_assoc:
            ab = self.mul
            # mul[ab][a,b,c] = (ab)c and mul[:, ab][a,b,c] = a(bc)
            if not np.all(self.mul[ab, :] == self.mul[:, ab]):
                raise DomainError("table is not associative")
        inv = np.full(n, -1)
        for a in range(n):
            hits = np.nonzero(self.mul[a] == self.identity)[0]
            if hits.size != 1 or self.mul[hits[0], a] != self.identity:
                raise DomainError(f"element {a} lacks a two-sided inverse")
            inv[a] = hits[0]
        self.inverse = inv

    @property
    def order(self) -> int:
        return len(self.names)

    def op(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def element_order(self, a: int) -> int:
        k, cur = 1, a
        while cur != self.identity:
            cur = self.op(cur, a)
            k += 1
        return k

    def is_abelian(self) -> bool:
        return bool(np.all(self.mul == self.mul.T))

    def index_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise DomainError(f"no element named {name!r}") from None

    def order_census(self) -> dict:
        census: dict = {}
        for a in range(self.order):
            k = self.element_order(a)
            census[k] = census.get(k, 0) + 1
        return census


@dataclass(eq=False)
class Subgroup:
    parent: FiniteGroup
    members: tuple

    def __post_init__(self):
        self.members = tuple(sorted(set(int(m) for m in self.members)))
        g = self.parent
        for m in self.members:
            if not 0 <= m < g.order:
                raise DomainError(f"element index {m} out of range")
        mem = set(self.members)
        if g.identity not in mem:
            raise DomainError("subgroup is missing the identity")
        for a in self.members:
            if g.inverse[a] not in mem:
                raise DomainError("subgroup is not closed under inversion")
            for b in self.members:
                if g.op(a, b) not in mem:
                    raise DomainError("subgroup is not closed under the product")

    @property
    def order(self) -> int:
        return len(self.members)

    def names(self) -> tuple:
        return tuple(self.parent.names[m] for m in self.members)


@dataclass(eq=False)
class CosetSpace:
    """Left cosets gH with the natural G-action g'.(gH) = (g'g)H."""

    parent: FiniteGroup
    subgroup: Subgroup
    cosets: list = field(init=False)
    representatives: list = field(init=False)
    coset_of: np.ndarray = field(init=False)
    action: np.ndarray = field(init=False)

    def __post_init__(self):
        g, h = self.parent, self.subgroup
        if h.parent is not g:
            raise DomainError("subgroup belongs to a different group")
        seen = np.full(g.order, -1)
        cosets, reps = [], []
        for a in range(g.order):
            if seen[a] >= 0:
                continue
            coset = sorted(g.op(a, m) for m in h.members)
            idx = len(cosets)
            for c in coset:
                if seen[c] >= 0:
                    raise DomainError("cosets do not partition the group")
                seen[c] = idx
            cosets.append(coset)
            reps.append(a)
        self.cosets = cosets
        self.representatives = reps
        self.coset_of = seen
        self.action = np.empty((g.order, len(cosets)), dtype=int)
        for a in range(g.order):
            for c, rep in enumerate(reps):
                self.action[a, c] = seen[g.op(a, rep)]
        # g.(g'H) = (gg')H, checked over every pair
        for a in range(g.order):
            for b in range(g.order):
                if self.action[a, seen[b]] != seen[g.op(a, b)]:
                    raise DomainError("action table is inconsistent")

    @property
    def size(self) -> int:
        return len(self.cosets)

    def labels(self) -> tuple:
        return tuple(self.parent.names[r] for r in self.representatives)


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise DomainError("cyclic group order must be at least 1")
    table = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    return FiniteGroup(tuple(str(k) for k in range(n)), table, kind=f"cyclic:{n}")


def product_group(g1: FiniteGroup, g2: FiniteGroup) -> FiniteGroup:
    """Direct product; element (a, b) sits at index a * #G2 + b."""
    n1, n2 = g1.order, g2.order
    names = tuple(f"({na},{nb})" for na in g1.names for nb in g2.names)
    a = np.arange(n1 * n2) // n2
    b = np.arange(n1 * n2) % n2
    table = g1.mul[np.ix_(a, a)] * n2 + g2.mul[np.ix_(b, b)]
    kind = None
    if g1.kind and g2.kind:
        kind = f"product({g1.kind},{g2.kind})"
    return FiniteGroup(names, table, kind=kind)


def _group_from_matrices(names, matrices, kind) -> FiniteGroup:
    n = len(matrices)
    table = np.empty((n, n), dtype=int)
    for a in range(n):
        for b in range(n):
            prod = matrices[a] @ matrices[b]
            hits = [c for c in range(n) if np.abs(prod - matrices[c]).max() < 1e-12]
            if len(hits) != 1:
                raise DomainError("matrix set is not closed under the product")
            table[a, b] = hits[0]
    return FiniteGroup(tuple(names), table, kind=kind)


def quaternion_group() -> FiniteGroup:
    return _group_from_matrices(QUATERNION_NAMES, QUATERNION_MATRICES, "quaternion")


def dihedral8_group() -> FiniteGroup:
    return _group_from_matrices(DIHEDRAL8_NAMES, DIHEDRAL8_MATRICES, "dihedral8")


def _split_product_args(body: str) -> list:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(body[start:i])
            start = i + 1
    parts.append(body[start:])
    return parts


def build_group(kind: str) -> FiniteGroup:
    """Build a group from its kind string.

    Grammar: ``cyclic:N``, ``quaternion``, ``dihedral8``, or
    ``product(A,B)`` with A and B again kind strings.
    """
    kind = kind.strip()
    if kind == "quaternion":
        return quaternion_group()
    if kind == "dihedral8":
        return dihedral8_group()
    if kind.startswith("cyclic:"):
        try:
            n = int(kind.split(":", 1)[1])
        except ValueError:
            raise DomainError(f"bad cyclic order in {kind!r}") from None
        return cyclic_group(n)
    if kind.startswith("product(") and kind.endswith(")"):
        parts = _split_product_args(kind[len("product("):-1])
        if len(parts) < 2:
            raise DomainError(f"product needs two factors: {kind!r}")
        groups = [build_group(p) for p in parts]
        out = groups[0]
        for g in groups[1:]:
            out = product_group(out, g)
        return out
    raise DomainError(f"unknown group kind {kind!r}")


def subgroup_generated(g: FiniteGroup, generators) -> Subgroup:
    members = {g.identity}
    frontier = [g.identity]
    gens = [int(x) for x in generators]
    for x in gens:
        if not 0 <= x < g.order:
            raise DomainError(f"generator index {x} out of range")
    while frontier:
        a = frontier.pop()
        for x in gens:
            for b in (g.op(a, x), g.op(x, a)):
                if b not in members:
                    members.add(b)
                    frontier.append(b)
    return Subgroup(g, tuple(members))


def coset_space(g: FiniteGroup, h: Subgroup) -> CosetSpace:
    return CosetSpace(g, h)


def find_cyclic_transitive_subgroup(g: FiniteGroup, h: Subgroup):
    """Exhaustive scan for a single generator acting transitively on G/H.

    Scans every g0 in G, so ``None`` is a proof that no cyclic subgroup acts
    transitively on the coset space.
    """
    if h.order == g.order:
        raise DomainError("subgroup must be proper")
    cosets = coset_space(g, h)
    for g0 in range(g.order):
        sub = subgroup_generated(g, [g0])
        orbit = {int(cosets.action[x, 0]) for x in sub.members}
        if len(orbit) == cosets.size:
            return sub
    return None


def all_subgroups(g: FiniteGroup) -> list:
    """Every subgroup, by closure of generator sets; desk-scale orders only."""
    if g.order > 16:
        raise DomainError("subgroup enumeration is limited to order <= 16")
    found = {}
    frontier = [subgroup_generated(g, [])]
    found[frontier[0].members] = frontier[0]
    while frontier:
        sub = frontier.pop()
        for x in range(g.order):
            if x in sub.members:
                continue
            bigger = subgroup_generated(g, list(sub.members) + [x])
            if bigger.members not in found:
                found[bigger.members] = bigger
                frontier.append(bigger)
    return sorted(found.values(), key=lambda s: (s.order, s.members))


def group_to_json(g: FiniteGroup) -> dict:
    return {
        "order": g.order,
        "names": list(g.names),
        "mul": g.mul.tolist(),
    }


def group_from_json(data: dict) -> FiniteGroup:
    names = tuple(str(x) for x in data["names"])
    if len(names) != int(data["order"]):
        raise DomainError("order field disagrees with the name list")
    return FiniteGroup(names, np.asarray(data["mul"], dtype=int))
