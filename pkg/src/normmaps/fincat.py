"""Finite categories and functors, stored as composition tables.

Objects and morphisms are dense indices. ``table[g, f]`` is the index of
``g o f`` (``f`` first) and ``-1`` when ``cod(f) != dom(g)``.
"""
from __future__ import annotations

from typing import Callable, Hashable, Sequence

import numpy as np

from .groups import FiniteGroup, Subgroup, Transversal, alpha, symmetric_group


class CategoryError(ValueError):
    """Malformed category or functor data, or mismatched shapes."""


class FiniteCategory:
    """A finite category with object and morphism labels.

    Labels are only used for lookup and display. Two categories compare
    equal when their structure (counts, dom/cod, identities and composition
    table) agrees.
    """

    def __init__(self, objects: Sequence[Hashable], dom: Sequence[int], cod: Sequence[int],
                 identities: Sequence[int], table, morphisms: Sequence[Hashable] | None = None):
        self.objects = tuple(objects)
        self.dom = np.asarray(dom, dtype=np.int64).reshape(-1)
        self.cod = np.asarray(cod, dtype=np.int64).reshape(-1)
        self.identities = np.asarray(identities, dtype=np.int64).reshape(-1)
        m = len(self.dom)
        self.table = np.asarray(table, dtype=np.int64).reshape(m, m)
        self.morphisms = tuple(morphisms) if morphisms is not None else tuple(range(m))
        for arr in (self.dom, self.cod, self.identities, self.table):
            arr.setflags(write=False)
        if len(self.cod) != m or len(self.morphisms) != m:
            raise CategoryError("dom, cod and morphism labels differ in length")
        if len(self.identities) != len(self.objects):
            raise CategoryError("need one identity per object")
        self._ob_index = None
        self._mor_index = None

    @classmethod
    def build(cls, objects, morphisms, compose: Callable[[int, int], int]) -> "FiniteCategory":
        """Build from ``morphisms = [(label, dom, cod), ..]`` and a composition
        function on composable index pairs. Identities are found as the
        morphisms acting as two-sided units."""
        dom = [d for _, d, _ in morphisms]
        cod = [c for _, _, c in morphisms]
        m = len(morphisms)
        table = np.full((m, m), -1, dtype=np.int64)
        for f in range(m):
            for g in range(m):
                if dom[g] == cod[f]:
                    table[g, f] = compose(g, f)
        idents = []
        for x in range(len(objects)):
            cands = [i for i in range(m) if dom[i] == x and cod[i] == x
                     and all(table[i, f] == f for f in range(m) if cod[f] == x)
                     and all(table[g, i] == g for g in range(m) if dom[g] == x)]
            if not cands:
                raise CategoryError(f"object {objects[x]!r} has no identity")
            idents.append(cands[0])
        return cls(objects, dom, cod, idents, table, [lab for lab, _, _ in morphisms])

    # sizes and lookup

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_morphisms(self) -> int:
        return len(self.dom)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(objects={self.n_objects}, morphisms={self.n_morphisms})"

    def object_index(self, label) -> int:
        if self._ob_index is None:
            self._ob_index = {o: i for i, o in enumerate(self.objects)}
        return self._ob_index[label]

    def morphism_index(self, label) -> int:
        if self._mor_index is None:
            self._mor_index = {o: i for i, o in enumerate(self.morphisms)}
        return self._mor_index[label]

    def compose(self, g: int, f: int) -> int:
        r = int(self.table[g, f])
        if r < 0:
            raise CategoryError(f"morphisms {self.morphisms[g]!r} and {self.morphisms[f]!r} "
                                "are not composable")
        return r

    def identity(self, x: int) -> int:
        return int(self.identities[x])

    def hom(self, x: int, y: int) -> list[int]:
        return np.nonzero((self.dom == x) & (self.cod == y))[0].tolist()

    def composable_pairs(self) -> np.ndarray:
        """Array of ``(g, f)`` rows with ``cod f == dom g``."""
        return np.argwhere(self.table >= 0)

    def is_identity(self, f: int) -> bool:
        return int(self.identities[self.dom[f]]) == f

    def is_connected(self) -> bool:
        n = self.n_objects
        if n == 0:
            return False
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for d, c in zip(self.dom.tolist(), self.cod.tolist()):
            parent[find(d)] = find(c)
        return len({find(x) for x in range(n)}) == 1

    def components(self) -> list[list[int]]:
        """Connected components as sorted object lists."""
        n = self.n_objects
        comp = [-1] * n
        out = []
        adj = [[] for _ in range(n)]
        for d, c in zip(self.dom.tolist(), self.cod.tolist()):
            adj[d].append(c)
            adj[c].append(d)
        for s in range(n):
            if comp[s] >= 0:
                continue
            stack, members = [s], []
            comp[s] = len(out)
            while stack:
                x = stack.pop()
                members.append(x)
                for y in adj[x]:
                    if comp[y] < 0:
                        comp[y] = len(out)
                        stack.append(y)
            out.append(sorted(members))
        return out

    # equality and audit

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, FiniteCategory):
            return NotImplemented
        return (self.n_objects == other.n_objects
                and np.array_equal(self.dom, other.dom)
                and np.array_equal(self.cod, other.cod)
                and np.array_equal(self.identities, other.identities)
                and np.array_equal(self.table, other.table))

    def __hash__(self) -> int:
        return hash((self.n_objects, self.n_morphisms, self.table.tobytes()))

    def audit(self) -> str | None:
        """Check the category axioms exhaustively; return the first violation."""
        n, m = self.n_objects, self.n_morphisms
        dom, cod, t = self.dom, self.cod, self.table
        if m and (dom.min() < 0 or dom.max() >= n or cod.min() < 0 or cod.max() >= n):
            return "dom/cod out of range"
        for x, i in enumerate(self.identities.tolist()):
            if not (0 <= i < m and dom[i] == x and cod[i] == x):
                return f"identity of object {self.objects[x]!r} has wrong dom/cod"
        composable = cod[None, :] == dom[:, None]
        if not np.array_equal(t >= 0, composable):
            return "composition is not defined exactly on composable pairs"
        if m == 0:
            return None
        if t.max() >= m:
            return "composite out of range"
        g_idx, f_idx = np.nonzero(composable)
        r = t[g_idx, f_idx]
        bad = (dom[r] != dom[f_idx]) | (cod[r] != cod[g_idx])
        if bad.any():
            k = int(np.argmax(bad))
            return f"composite of {self.morphisms[g_idx[k]]!r} o {self.morphisms[f_idx[k]]!r} " \
                   "has wrong dom/cod"
        ident = self.identities
        ar = np.arange(m)
        if not np.array_equal(t[ident[cod], ar], ar):
            return "left identity law fails"
        if not np.array_equal(t[ar, ident[dom]], ar):
            return "right identity law fails"
        # (h g) f == h (g f) for all composable triples
        for h in range(m):
            gs = np.nonzero(t[h] >= 0)[0]
            if gs.size == 0:
                continue
            hg = t[h, gs]
            sub = t[gs]
            gg, ff = np.nonzero(sub >= 0)
            if gg.size == 0:
                continue
            left = t[hg[gg], ff]
            right = t[h, sub[gg, ff]]
            if not np.array_equal(left, right):
                k = int(np.argmax(left != right))
                return (f"associativity fails at ({self.morphisms[h]!r}, "
                        f"{self.morphisms[gs[gg[k]]]!r}, {self.morphisms[ff[k]]!r})")
        return None


class CatFunctor:
    """A functor between finite categories, given by index maps."""

    def __init__(self, source: FiniteCategory, target: FiniteCategory, ob_map, mor_map):
        self.source = source
        self.target = target
        self.ob_map = tuple(int(x) for x in ob_map)
        self.mor_map = tuple(int(x) for x in mor_map)
        if len(self.ob_map) != source.n_objects or len(self.mor_map) != source.n_morphisms:
            raise CategoryError("functor maps do not match the source category")

    def __repr__(self) -> str:
        return f"CatFunctor({self.source!r} -> {self.target!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, CatFunctor):
            return NotImplemented
        return (self.ob_map == other.ob_map and self.mor_map == other.mor_map
                and self.source == other.source and self.target == other.target)

    def __hash__(self) -> int:
        return hash((self.ob_map, self.mor_map))

    def __call__(self, f: int) -> int:
        return self.mor_map[f]

    def first_difference(self, other: "CatFunctor") -> int | None:
        """First source morphism where the two functors disagree."""
        for f, (a, b) in enumerate(zip(self.mor_map, other.mor_map)):
            if a != b:
                return f
        for x, (a, b) in enumerate(zip(self.ob_map, other.ob_map)):
            if a != b:
                return int(self.source.identities[x])
        return None

    def compose(self, first: "CatFunctor") -> "CatFunctor":
        """``self o first``."""
        if first.target != self.source:
            raise CategoryError("functors are not composable")
        return CatFunctor(first.source, self.target,
                          [self.ob_map[x] for x in first.ob_map],
                          [self.mor_map[f] for f in first.mor_map])

    def audit(self) -> str | None:
        """Check preservation of dom/cod, identities and composition."""
        s, t = self.source, self.target
        om = np.asarray(self.ob_map, dtype=np.int64)
        mm = np.asarray(self.mor_map, dtype=np.int64)
        if om.size and (om.min() < 0 or om.max() >= t.n_objects):
            return "object map out of range"
        if mm.size and (mm.min() < 0 or mm.max() >= t.n_morphisms):
            return "morphism map out of range"
        if mm.size:
            bad = (t.dom[mm] != om[s.dom]) | (t.cod[mm] != om[s.cod])
            if bad.any():
                return f"morphism {s.morphisms[int(np.argmax(bad))]!r} is sent with wrong dom/cod"
        for x in range(s.n_objects):
            if mm[s.identities[x]] != t.identities[om[x]]:
                return f"identity of {s.objects[x]!r} is not preserved"
        pairs = s.composable_pairs()
        if pairs.size:
            g, f = pairs[:, 0], pairs[:, 1]
            lhs = mm[s.table[g, f]]
            rhs = t.table[mm[g], mm[f]]
            bad = lhs != rhs
            if bad.any():
                k = int(np.argmax(bad))
                return (f"composition {s.morphisms[g[k]]!r} o {s.morphisms[f[k]]!r} "
                        "is not preserved")
        return None

    @classmethod
    def identity(cls, c: FiniteCategory) -> "CatFunctor":
        return cls(c, c, range(c.n_objects), range(c.n_morphisms))


# constructions
# -------------

def terminal_category() -> FiniteCategory:
    return FiniteCategory(["*"], [0], [0], [0], [[0]], ["id"])


def one_object_category(g: FiniteGroup) -> FiniteCategory:
    """The group as a one-object category; morphism ``k`` is element ``k``."""
    m = g.order
    return FiniteCategory(["*"], [0] * m, [0] * m, [g.identity], g.mul, g.labels)


def discrete_category(objects: Sequence[Hashable]) -> FiniteCategory:
    n = len(objects)
    table = np.full((n, n), -1, dtype=np.int64)
    table[np.arange(n), np.arange(n)] = np.arange(n)
    return FiniteCategory(objects, range(n), range(n), range(n), table,
                          [("id", o) for o in objects])


def poset_category(n: int, less_eq: Callable[[int, int], bool] | None = None) -> FiniteCategory:
    """The poset on ``0..n-1`` (default: the chain ``0 < 1 < ..``)."""
    le = less_eq or (lambda a, b: a <= b)
    mors = [((a, b), a, b) for a in range(n) for b in range(n) if le(a, b)]
    idx = {lab: i for i, (lab, _, _) in enumerate(mors)}
    return FiniteCategory.build(range(n), mors,
                                lambda g, f: idx[(mors[f][1], mors[g][2])])


class TranslationGroupoid(FiniteCategory):
    """Action groupoid of ``group`` on a finite set: morphisms ``(g, x): x -> g x``.

    Morphism ``(g, x)`` has index ``x * |G| + g``, so the morphisms out of an
    object are contiguous and ordered like the group.
    """

    def __init__(self, group: FiniteGroup, action, carrier: Sequence[Hashable] | None = None):
        act = np.asarray(action, dtype=np.int64)
        order = group.order
        if act.ndim != 2 or act.shape[0] != order:
            raise CategoryError("action table must have one row per group element")
        k = act.shape[1]
        if k and (act.min() < 0 or act.max() >= k):
            raise CategoryError("action table entries out of range")
        if not np.array_equal(act[group.identity], np.arange(k)):
            raise CategoryError("identity does not act trivially")
        for a in range(order):
            if sorted(act[a].tolist()) != list(range(k)):
                raise CategoryError("group element does not act by a bijection")
            # (ab) x == a (b x)
            if not np.array_equal(act[group.mul[a]], act[a][act]):
                raise CategoryError("table is not a group action")
        carrier = tuple(carrier) if carrier is not None else tuple(range(k))
        self.group = group
        self.action = act
        self.action.setflags(write=False)
        m = order * k
        xs = np.repeat(np.arange(k), order)
        gs = np.tile(np.arange(order), k)
        dom = xs
        cod = act[gs, xs]
        # (gamma, y) o (g, x) = (gamma g, x) when y = g x
        table = np.full((m, m), -1, dtype=np.int64)
        comp = cod[None, :] == dom[:, None]
        gi, fi = np.nonzero(comp)
        table[gi, fi] = xs[fi] * order + group.mul[gs[gi], gs[fi]]
        labels = [(group.labels[g], carrier[x]) for x, g in zip(xs.tolist(), gs.tolist())]
        idents = np.arange(k) * order + group.identity
        super().__init__(carrier, dom, cod, idents, table, labels)

    def mor(self, g: int, x: int) -> int:
        return x * self.group.order + g

    def parts(self, f: int) -> tuple[int, int]:
        """``(g, x)`` for a morphism index."""
        x, g = divmod(f, self.group.order)
        return g, x


def translation_groupoid(g: FiniteGroup, action, carrier=None) -> TranslationGroupoid:
    return TranslationGroupoid(g, action, carrier)


def coset_groupoid(t: Transversal) -> TranslationGroupoid:
    """``B_{G/H} G`` with object ``i`` the coset ``t_i H``."""
    g = t.group
    act = [[t.coset_of[g.m(x, r)] for r in t.reps] for x in range(g.order)]
    return TranslationGroupoid(g, act, [f"{g.labels[r]}H" for r in t.reps])


def symmetric_groupoid(n: int) -> TranslationGroupoid:
    """``B_n Sigma_n``: Sigma_n acting on ``{0, .., n-1}``."""
    s = symmetric_group(n)
    return TranslationGroupoid(s, [list(p) for p in s.perms], [str(i + 1) for i in range(n)])


class ProductCategory(FiniteCategory):
    """``A x B`` with object ``(a, b)`` at ``a |obB| + b`` and morphism
    ``(f, g)`` at ``f |morB| + g``."""

    def __init__(self, a: FiniteCategory, b: FiniteCategory):
        self.left, self.right = a, b
        na, nb = a.n_objects, b.n_objects
        ma, mb = a.n_morphisms, b.n_morphisms
        fa = np.repeat(np.arange(ma), mb)
        fb = np.tile(np.arange(mb), ma)
        dom = a.dom[fa] * nb + b.dom[fb]
        cod = a.cod[fa] * nb + b.cod[fb]
        ta = a.table[fa[:, None], fa[None, :]]
        tb = b.table[fb[:, None], fb[None, :]]
        table = np.where((ta >= 0) & (tb >= 0), ta * mb + tb, -1)
        oa = np.repeat(np.arange(na), nb)
        ob = np.tile(np.arange(nb), na)
        idents = a.identities[oa] * mb + b.identities[ob]
        objects = [(a.objects[i], b.objects[j]) for i, j in zip(oa.tolist(), ob.tolist())]
        mors = [(a.morphisms[i], b.morphisms[j]) for i, j in zip(fa.tolist(), fb.tolist())]
        super().__init__(objects, dom, cod, idents, table, mors)

    def pair(self, f: int, g: int) -> int:
        return f * self.right.n_morphisms + g

    def obj_pair(self, x: int, y: int) -> int:
        return x * self.right.n_objects + y

    def split(self, h: int) -> tuple[int, int]:
        return divmod(h, self.right.n_morphisms)


def product_category(a: FiniteCategory, b: FiniteCategory) -> ProductCategory:
    return ProductCategory(a, b)


def projection(p: ProductCategory, side: int) -> CatFunctor:
    """Projection of ``A x B`` onto ``A`` (side 0) or ``B`` (side 1)."""
    nb, mb = p.right.n_objects, p.right.n_morphisms
    obs = np.arange(p.n_objects)
    mors = np.arange(p.n_morphisms)
    if side == 0:
        return CatFunctor(p, p.left, obs // nb, mors // mb)
    return CatFunctor(p, p.right, obs % nb, mors % mb)


def to_terminal(c: FiniteCategory) -> CatFunctor:
    return CatFunctor(c, terminal_category(), [0] * c.n_objects, [0] * c.n_morphisms)


def wreath_base_category(n: int, h: Subgroup) -> ProductCategory:
    """``B_n Sigma_n x H``; object ``i`` is ``(i, *_H)``."""
    return ProductCategory(symmetric_groupoid(n), one_object_category(h.as_group()))


# transversal-induced functors
# ----------------------------

def _check_bg(t: Transversal, bg: TranslationGroupoid) -> None:
    if bg.group != t.group or bg.n_objects != t.n:
        raise CategoryError("groupoid was not built on G/H for this transversal")


def inclusion_iota(h: Subgroup, bg: TranslationGroupoid) -> CatFunctor:
    """``H -> B_{G/H} G``: the single object goes to ``eH`` (object 0)."""
    if bg.group != h.parent:
        raise CategoryError("groupoid is not over the subgroup's parent")
    src = one_object_category(h.as_group())
    eh = bg.action[:, 0]
    if any(eh[k] != 0 for k in h.elements):
        raise CategoryError("object 0 of the groupoid is not the coset eH")
    return CatFunctor(src, bg, [0], [bg.mor(k, 0) for k in h.elements])


def kappa(t: Transversal, bg: TranslationGroupoid) -> CatFunctor:
    """``B_{G/H} G -> H`` sending ``(g, t_i H)`` to ``h_i(g)``."""
    _check_bg(t, bg)
    h = t.subgroup
    tgt = one_object_category(h.as_group())
    mor = []
    for f in range(bg.n_morphisms):
        g, i = bg.parts(f)
        mor.append(h.local(alpha(g, t).hs[i]))
    return CatFunctor(bg, tgt, [0] * bg.n_objects, mor)


def beta(t: Transversal, bg: TranslationGroupoid,
         target: ProductCategory | None = None) -> CatFunctor:
    """``B_{G/H} G -> B_n Sigma_n x H``: ``t_i H -> i`` and
    ``(g, t_i H) -> ((sigma_g)_i, h_i(g))``."""
    _check_bg(t, bg)
    h = t.subgroup
    tgt = target if target is not None else wreath_base_category(t.n, h)
    sym = tgt.left
    mor = []
    for f in range(bg.n_morphisms):
        g, i = bg.parts(f)
        a = alpha(g, t)
        s = sym.group.element_of_perm(a.sigma)
        mor.append(tgt.pair(sym.mor(s, i), h.local(a.hs[i])))
    return CatFunctor(bg, tgt, [tgt.obj_pair(i, 0) for i in range(bg.n_objects)], mor)


def check_triangle(kappa_f: CatFunctor, beta_f: CatFunctor, proj: CatFunctor) -> bool:
    """True iff ``proj o beta == kappa`` on every object and morphism."""
    if not (beta_f.target == proj.source and proj.target == kappa_f.target
            and beta_f.source == kappa_f.source):
        raise CategoryError("triangle functors do not share sources and targets")
    return proj.compose(beta_f) == kappa_f
