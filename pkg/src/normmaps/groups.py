"""Finite groups, cosets, transversals and the wreath homomorphism.

Conventions used everywhere in the package:

* group elements are dense indices ``0 .. order-1``; labels are decorative;
* products compose right to left, ``mul[a, b] = a * b`` and for permutations
  ``(a * b)(x) = a(b(x))``, i.e. ``b`` acts first;
* cosets are left cosets ``t H``;
* permutations of ``{0, .., n-1}`` are tuples of images, printed 1-based.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

DEFAULT_ORDER_CAP = 10_000

Perm = tuple  # tuple of images of 0..m-1


class GroupError(ValueError):
    """Invalid group, subgroup or transversal data."""


class SizeError(GroupError):
    """A closure or enumeration exceeded its configured cap."""


# permutations
# ------------

def perm_compose(a: Perm, b: Perm) -> Perm:
    """Return ``a o b`` (apply ``b`` first)."""
    return tuple(a[x] for x in b)


def perm_inverse(a: Perm) -> Perm:
    inv = [0] * len(a)
    for i, x in enumerate(a):
        inv[x] = i
    return tuple(inv)


def perm_identity(m: int) -> Perm:
    return tuple(range(m))


def check_perm(p: Sequence[int]) -> None:
    if sorted(p) != list(range(len(p))):
        raise GroupError(f"not a permutation: {list(p)}")


def perm_from_cycles(cycles: Iterable[Sequence[int]], degree: int) -> Perm:
    """Build a permutation from 1-based cycles, e.g. ``[[1, 2, 3]]``."""
    img = list(range(degree))
    seen = set()
    for cyc in cycles:
        pts = [int(c) - 1 for c in cyc]
        for x in pts:
            if x < 0 or x >= degree or x in seen:
                raise GroupError(f"bad cycle {list(cyc)} for degree {degree}")
            seen.add(x)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a] = b
    return tuple(img)


def cycle_string(p: Perm) -> str:
    """1-based cycle notation, ``()`` for the identity."""
    seen = set()
    parts = []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc = []
        x = start
        while x not in seen:
            seen.add(x)
            cyc.append(x + 1)
            x = p[x]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


# groups
# ------

class FiniteGroup:
    """A finite group given by a total multiplication table.

    ``mul[a, b]`` is the index of ``a * b``. The table is validated on
    construction (closure, two-sided identity, inverses); associativity is
    checked by :meth:`is_associative` since it is cubic.
    """

    def __init__(self, table, identity: int = 0, labels: Sequence[str] | None = None,
                 perms: Sequence[Perm] | None = None):
        mul = np.array(table, dtype=np.int64)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
            raise GroupError("multiplication table must be a non-empty square")
        n = mul.shape[0]
        if mul.min() < 0 or mul.max() >= n:
            raise GroupError("multiplication table entries out of range")
        if not 0 <= identity < n:
            raise GroupError("identity index out of range")
        ar = np.arange(n)
        if not (np.array_equal(mul[identity], ar) and np.array_equal(mul[:, identity], ar)):
            raise GroupError("identity is not two-sided")
        for row in mul:
            if len(set(row.tolist())) != n:
                raise GroupError("multiplication table is not a Latin square")
        inv = np.argmax(mul == identity, axis=1)
        if not np.all(mul[inv, ar] == identity):
            raise GroupError("inverses are not two-sided")
        mul.setflags(write=False)
        inv.setflags(write=False)
        self.mul = mul
        self.inv = inv
        self.identity = int(identity)
        self.labels = tuple(labels) if labels is not None else tuple(f"g{i}" for i in range(n))
        self.perms = tuple(perms) if perms is not None else None

    @property
    def order(self) -> int:
        return self.mul.shape[0]

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.identity == other.identity and np.array_equal(self.mul, other.mul)

    def __hash__(self) -> int:
        return hash((self.order, self.identity, self.mul.tobytes()))

    def m(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def product(self, *elts: int) -> int:
        out = self.identity
        for e in elts:
            out = int(self.mul[out, e])
        return out

    def inverse(self, a: int) -> int:
        return int(self.inv[a])

    def is_associative(self) -> bool:
        mul = self.mul
        # (ab)c == a(bc) for all triples, vectorised over (a, b)
        for c in range(self.order):
            if not np.array_equal(mul[mul[:, :], c], mul[:, mul[:, c]]):
                return False
        return True

    def element_of_perm(self, p: Perm) -> int:
        if self.perms is None:
            raise GroupError("group has no permutation realisation")
        try:
            return self._perm_index[tuple(p)]
        except AttributeError:
            self._perm_index = {q: i for i, q in enumerate(self.perms)}
            return self._perm_index[tuple(p)]
        except KeyError:
            raise GroupError(f"{cycle_string(tuple(p))} is not in the group") from None

    def generated_subgroup(self, gens: Iterable[int]) -> "Subgroup":
        elts = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.mul[x, g])
                    if y not in elts:
                        elts.add(y)
                        nxt.append(y)
            frontier = nxt
        return Subgroup(self, elts)

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, [self.identity])

    def whole(self) -> "Subgroup":
        return Subgroup(self, range(self.order))


def group_from_permutations(generators: Sequence[Sequence[int]],
                            cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Close a set of permutations (0-based image tuples) under composition.

    Elements are numbered in breadth-first order from the identity, so the
    identity is always element 0.
    """
    gens = [tuple(int(x) for x in g) for g in generators]
    degree = max((len(g) for g in gens), default=1)
    gens = [g + tuple(range(len(g), degree)) for g in gens]
    for g in gens:
        check_perm(g)
    ident = perm_identity(degree)
    elts = [ident]
    index = {ident: 0}
    i = 0
    while i < len(elts):
        x = elts[i]
        for g in gens:
            y = perm_compose(x, g)
            if y not in index:
                if len(elts) >= cap:
                    raise SizeError(f"closure exceeds order cap {cap}")
                index[y] = len(elts)
                elts.append(y)
        i += 1
    n = len(elts)
    table = [[index[perm_compose(a, b)] for b in elts] for a in elts]
    return FiniteGroup(table, 0, [cycle_string(p) for p in elts], elts)


def symmetric_group(n: int) -> FiniteGroup:
    """Sigma_n with elements in lexicographic order of image tuples."""
    elts = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(elts)}
    table = [[index[perm_compose(a, b)] for b in elts] for a in elts]
    return FiniteGroup(table, 0, [cycle_string(p) for p in elts], elts)


def cyclic_group(n: int) -> FiniteGroup:
    if n == 1:
        return group_from_permutations([(0,)])
    return group_from_permutations([tuple((i + 1) % n for i in range(n))])


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    elements: tuple

    def __init__(self, parent: FiniteGroup, elements: Iterable[int]):
        elts = tuple(sorted({int(e) for e in elements}))
        object.__setattr__(self, "parent", parent)
        object.__setattr__(self, "elements", elts)
        s = set(elts)
        if parent.identity not in s:
            raise GroupError("subgroup does not contain the identity")
        for a in elts:
            if parent.inverse(a) not in s:
                raise GroupError("subgroup is not closed under inverses")
            for b in elts:
                if parent.m(a, b) not in s:
                    raise GroupError("subgroup is not closed under multiplication")
        object.__setattr__(self, "_local", {e: i for i, e in enumerate(elts)})

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g: int) -> bool:
        return g in self._local

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent == other.parent and self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, index={self.index})"

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    def local(self, g: int) -> int:
        """Position of a parent element inside ``elements``."""
        return self._local[g]

    def as_group(self) -> FiniteGroup:
        """The subgroup as a group in its own right, indexed by position.

        Since ``elements`` is sorted and contains the parent identity, local
        index ``k`` stands for parent element ``elements[k]``.
        """
        try:
            return self._as_group
        except AttributeError:
            pass
        p = self.parent
        table = [[self._local[p.m(a, b)] for b in self.elements] for a in self.elements]
        perms = None
        if p.perms is not None:
            perms = [p.perms[e] for e in self.elements]
        g = FiniteGroup(table, self._local[p.identity],
                        [p.labels[e] for e in self.elements], perms)
        object.__setattr__(self, "_as_group", g)
        return g


def cosets(g: FiniteGroup, h: Subgroup) -> list[tuple[int, ...]]:
    """Left cosets ``xH``, ordered by their least element index."""
    if h.parent != g:
        raise GroupError("subgroup does not belong to this group")
    seen = set()
    out = []
    for x in range(g.order):
        if x in seen:
            continue
        c = tuple(sorted(g.m(x, k) for k in h.elements))
        seen.update(c)
        out.append(c)
    out.sort(key=lambda c: c[0])
    return out


@dataclass(frozen=True, eq=False)
class Transversal:
    """Ordered left coset representatives ``t_1 = e, t_2, .., t_n``."""
    subgroup: Subgroup
    reps: tuple
    coset_of: tuple = field(repr=False)

    def __init__(self, subgroup: Subgroup, reps: Sequence[int]):
        g = subgroup.parent
        reps = tuple(int(r) for r in reps)
        object.__setattr__(self, "subgroup", subgroup)
        object.__setattr__(self, "reps", reps)
        if len(reps) != subgroup.index:
            raise GroupError(f"expected {subgroup.index} representatives, got {len(reps)}")
        if not reps or reps[0] != g.identity:
            raise GroupError("first representative must be the identity")
        coset_of = [-1] * g.order
        for i, t in enumerate(reps):
            if not 0 <= t < g.order:
                raise GroupError(f"representative {t} out of range")
            for k in subgroup.elements:
                x = g.m(t, k)
                if coset_of[x] != -1:
                    j = coset_of[x]
                    raise GroupError(
                        f"representatives {g.labels[reps[j]]} and {g.labels[t]} "
                        "lie in the same coset")
                coset_of[x] = i
        object.__setattr__(self, "coset_of", tuple(coset_of))

    @property
    def group(self) -> FiniteGroup:
        return self.subgroup.parent

    @property
    def n(self) -> int:
        return len(self.reps)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Transversal):
            return NotImplemented
        return self.subgroup == other.subgroup and self.reps == other.reps

    def __hash__(self) -> int:
        return hash(self.reps)


def transversal(g: FiniteGroup, h: Subgroup, policy: str | Sequence[int] = "minimal") -> Transversal:
    """Pick coset representatives.

    ``policy="minimal"`` takes the least element of each coset, with the
    identity coset first. A sequence is validated as an explicit choice.
    """
    if h.parent != g:
        raise GroupError("subgroup does not belong to this group")
    if isinstance(policy, str):
        if policy != "minimal":
            raise GroupError(f"unknown transversal policy {policy!r}")
        cs = cosets(g, h)
        k = next(i for i, c in enumerate(cs) if g.identity in c)
        reps = [g.identity] + [c[0] for i, c in enumerate(cs) if i != k]
        return Transversal(h, reps)
    return Transversal(h, policy)


# wreath products
# ---------------

@dataclass(frozen=True)
class WreathElement:
    """``(sigma; h_1, .., h_n)`` with ``sigma`` a 0-based image tuple and the
    ``h_i`` parent-group indices of subgroup elements."""
    sigma: tuple
    hs: tuple

    @property
    def n(self) -> int:
        return len(self.sigma)

    def label(self, group: FiniteGroup | None = None) -> str:
        hs = [group.labels[h] if group is not None else str(h) for h in self.hs]
        return f"({cycle_string(self.sigma)}; {', '.join(hs)})"


def wreath_mul(a: WreathElement, b: WreathElement, group: FiniteGroup) -> WreathElement:
    """``(s; h) * (t; k) = (s o t; h_{t(1)} k_1, .., h_{t(n)} k_n)``."""
    if a.n != b.n:
        raise GroupError(f"wreath elements of different degree {a.n} and {b.n}")
    sigma = perm_compose(a.sigma, b.sigma)
    hs = tuple(group.m(a.hs[b.sigma[i]], b.hs[i]) for i in range(a.n))
    return WreathElement(sigma, hs)


def alpha(g_elt: int, t: Transversal) -> WreathElement:
    """Solve ``g t_i = t_{sigma(i)} h_i`` for every representative."""
    g = t.group
    sigma = []
    hs = []
    for ti in t.reps:
        x = g.m(g_elt, ti)
        j = t.coset_of[x]
        sigma.append(j)
        hs.append(g.m(g.inverse(t.reps[j]), x))
    return WreathElement(tuple(sigma), tuple(hs))


class WreathGroup(FiniteGroup):
    """Sigma_n wr H realised as a finite group.

    Elements are enumerated with ``sigma`` in the order of
    :func:`symmetric_group` and, for each ``sigma``, the tuples ``hs`` in
    lexicographic order of subgroup position, so element 0 is the identity.
    """

    def __init__(self, n: int, base: Subgroup, cap: int = DEFAULT_ORDER_CAP):
        import math
        order = math.factorial(n) * base.order ** n
        if order > cap:
            raise SizeError(f"wreath product of order {order} exceeds cap {cap}")
        self.n = n
        self.base = base
        self.sym = symmetric_group(n)
        h_elts = base.elements
        hlocal = base.as_group()
        elements = [WreathElement(s, tuple(hs)) for s in self.sym.perms
                    for hs in itertools.product(h_elts, repeat=n)]
        self.elements = tuple(elements)
        self._index = {w: i for i, w in enumerate(elements)}
        # vectorised product: index = sigma_idx * |H|^n + sum local(h_i) |H|^(n-1-i)
        nh = base.order
        sig_idx = np.array([self.sym.element_of_perm(w.sigma) for w in elements])
        hloc = np.array([[base.local(h) for h in w.hs] for w in elements]).reshape(order, n)
        sigmas = np.array([w.sigma for w in elements]).reshape(order, n)
        weights = nh ** np.arange(n - 1, -1, -1)
        hmul = hlocal.mul
        table = np.empty((order, order), dtype=np.int64)
        for b in range(order):
            # h_{tau(i)} k_i for all a at once
            hprod = hmul[hloc[:, sigmas[b]], hloc[b][None, :]]
            s = self.sym.mul[sig_idx, sig_idx[b]]
            table[:, b] = s * nh ** n + hprod @ weights
        super().__init__(table, 0, [w.label(base.parent) for w in elements])

    def index_of(self, w: WreathElement) -> int:
        return self._index[w]

    def element(self, i: int) -> WreathElement:
        return self.elements[i]


def alpha_table(t: Transversal) -> tuple[WreathElement, ...]:
    return tuple(alpha(x, t) for x in range(t.group.order))
