"""Covering categories, Grothendieck constructions, sections and indexing
functors ``P: J -> (I^n minus fat diagonal) / Sigma_n``.

Unordered sets of objects or morphisms of ``I`` are stored as canonical
tuples: objects in ascending index order, morphisms ordered like their
domains.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .fincat import (CatFunctor, CategoryError, FiniteCategory, ProductCategory,
                     one_object_category, wreath_base_category)
from .groups import GroupError, SizeError, Subgroup, WreathGroup

DEFAULT_SECTIONS_CAP = 1_000_000


class CoveringError(CategoryError):
    """A functor that was required to be a covering category is not one."""


@dataclass
class CoveringReport:
    ok: bool
    kind: str | None = None          # not_functor | non_discrete_fiber | left_lift | right_lift
    message: str | None = None
    n: int | None = None             # common fiber size, when there is one
    fiber_sizes: tuple = ()

    def to_json(self) -> dict:
        return {"ok": self.ok, "kind": self.kind, "message": self.message,
                "n": self.n, "fiber_sizes": list(self.fiber_sizes)}


def _fibers(p: CatFunctor) -> list[tuple[int, ...]]:
    out = [[] for _ in range(p.target.n_objects)]
    for i, j in enumerate(p.ob_map):
        out[j].append(i)
    return [tuple(f) for f in out]


def is_covering_category(p: CatFunctor) -> CoveringReport:
    """Check unique left and right lifting of every arrow of the base."""
    problem = p.audit()
    if problem:
        return CoveringReport(False, "not_functor", problem)
    total, base = p.source, p.target
    fibers = _fibers(p)
    sizes = tuple(len(f) for f in fibers)
    for m in range(total.n_morphisms):
        if base.is_identity(p.mor_map[m]) and not total.is_identity(m):
            return CoveringReport(False, "non_discrete_fiber",
                                  f"non-identity morphism {total.morphisms[m]!r} lies over "
                                  f"the identity of {base.objects[base.dom[p.mor_map[m]]]!r}",
                                  fiber_sizes=sizes)
    left = Counter((p.mor_map[m], int(total.dom[m])) for m in range(total.n_morphisms))
    right = Counter((p.mor_map[m], int(total.cod[m])) for m in range(total.n_morphisms))
    for f in range(base.n_morphisms):
        for i in fibers[base.dom[f]]:
            c = left[(f, i)]
            if c != 1:
                return CoveringReport(False, "left_lift",
                                      f"{c} lifts of {base.morphisms[f]!r} start at "
                                      f"{total.objects[i]!r}", fiber_sizes=sizes)
        for i in fibers[base.cod[f]]:
            c = right[(f, i)]
            if c != 1:
                return CoveringReport(False, "right_lift",
                                      f"{c} lifts of {base.morphisms[f]!r} end at "
                                      f"{total.objects[i]!r}", fiber_sizes=sizes)
    n = sizes[0] if sizes and len(set(sizes)) == 1 else None
    if base.n_objects == 0:
        n = 0
    return CoveringReport(True, n=n, fiber_sizes=sizes)


class CoveringCategory:
    """A validated covering ``p: I -> J`` with cached fibers and lifts."""

    def __init__(self, p: CatFunctor):
        report = is_covering_category(p)
        if not report.ok:
            raise CoveringError(report.message)
        self.p = p
        self.report = report
        self.fibers = tuple(_fibers(p))
        if p.target.is_connected() and len(set(len(f) for f in self.fibers)) > 1:
            raise CoveringError("fibers over a connected base differ in size")
        total = p.source
        self._lift = {(p.mor_map[m], int(total.dom[m])): m for m in range(total.n_morphisms)}

    @property
    def total(self) -> FiniteCategory:
        return self.p.source

    @property
    def base(self) -> FiniteCategory:
        return self.p.target

    @property
    def n(self) -> int | None:
        return self.report.n

    def lift(self, f: int, i: int) -> int:
        """The unique morphism over ``f`` starting at ``i``."""
        return self._lift[(f, i)]

    def lifts(self, f: int) -> tuple[int, ...]:
        """All lifts of ``f``, in the order of their domains."""
        return tuple(self._lift[(f, i)] for i in self.fibers[self.base.dom[f]])


# set-valued diagrams and the set-based construction
# --------------------------------------------------

@dataclass(eq=False)
class FinSetIsoDiagram:
    """``P: J -> FinSet_iso``; ``maps[f][k]`` is the position in
    ``sets[cod f]`` of the image of ``sets[dom f][k]``."""
    J: FiniteCategory
    sets: tuple
    maps: tuple

    def __post_init__(self):
        self.sets = tuple(tuple(s) for s in self.sets)
        self.maps = tuple(tuple(int(x) for x in m) for m in self.maps)

    def audit(self) -> str | None:
        J = self.J
        if len(self.sets) != J.n_objects or len(self.maps) != J.n_morphisms:
            return "diagram does not match its shape"
        for f in range(J.n_morphisms):
            d, c = self.sets[J.dom[f]], self.sets[J.cod[f]]
            if sorted(self.maps[f]) != list(range(len(c))) or len(d) != len(c):
                return f"image of {J.morphisms[f]!r} is not a bijection"
        for x in range(J.n_objects):
            if self.maps[J.identities[x]] != tuple(range(len(self.sets[x]))):
                return f"identity of {J.objects[x]!r} is not sent to an identity"
        for g, f in J.composable_pairs().tolist():
            gf = J.table[g, f]
            if self.maps[gf] != tuple(self.maps[g][k] for k in self.maps[f]):
                return f"composition {J.morphisms[g]!r} o {J.morphisms[f]!r} is not preserved"
        return None


def grothendieck_set(P: FinSetIsoDiagram) -> CoveringCategory:
    """The covering category whose fiber over ``j`` is the discrete set ``P j``.

    Objects ``(j, x)`` are ordered by ``j`` then position of ``x``;
    morphisms ``(f, x)`` by ``f`` then position of ``x`` in ``P(dom f)``.
    """
    problem = P.audit()
    if problem:
        raise CategoryError(problem)
    J = P.J
    ob_off = np.cumsum([0] + [len(s) for s in P.sets]).tolist()
    objects = [(J.objects[j], x) for j in range(J.n_objects) for x in P.sets[j]]
    ob_map = [j for j in range(J.n_objects) for _ in P.sets[j]]
    mor_off = [0]
    for f in range(J.n_morphisms):
        mor_off.append(mor_off[-1] + len(P.sets[J.dom[f]]))
    m = mor_off[-1]
    dom, cod, labels, mor_map = [], [], [], []
    for f in range(J.n_morphisms):
        d, c = int(J.dom[f]), int(J.cod[f])
        for k, x in enumerate(P.sets[d]):
            dom.append(ob_off[d] + k)
            cod.append(ob_off[c] + P.maps[f][k])
            labels.append((J.morphisms[f], x))
            mor_map.append(f)
    table = np.full((m, m), -1, dtype=np.int64)
    for f in range(J.n_morphisms):
        for g in np.nonzero(J.table[:, f] >= 0)[0].tolist():
            gf = int(J.table[g, f])
            for k in range(len(P.sets[J.dom[f]])):
                # (g, Pf(x)) o (f, x) = (g f, x)
                table[mor_off[g] + P.maps[f][k], mor_off[f] + k] = mor_off[gf] + k
    idents = [mor_off[J.identities[j]] + k for j in range(J.n_objects)
              for k in range(len(P.sets[j]))]
    total = FiniteCategory(objects, dom, cod, idents, table, labels)
    return CoveringCategory(CatFunctor(total, J, ob_map, mor_map))


# categorified construction
# -------------------------

@dataclass(eq=False)
class CatValuedDiagram:
    """``P: J -> Cat`` given by a category per object and a functor per arrow."""
    J: FiniteCategory
    cats: tuple
    functors: tuple

    def audit(self) -> str | None:
        J = self.J
        if len(self.cats) != J.n_objects or len(self.functors) != J.n_morphisms:
            return "diagram does not match its shape"
        for f in range(J.n_morphisms):
            F = self.functors[f]
            if F.source != self.cats[J.dom[f]] or F.target != self.cats[J.cod[f]]:
                return f"functor for {J.morphisms[f]!r} has wrong source or target"
            problem = F.audit()
            if problem:
                return f"functor for {J.morphisms[f]!r}: {problem}"
        for x in range(J.n_objects):
            if self.functors[J.identities[x]] != CatFunctor.identity(self.cats[x]):
                return f"identity of {J.objects[x]!r} is not sent to an identity functor"
        for g, f in J.composable_pairs().tolist():
            if self.functors[J.table[g, f]] != self.functors[g].compose(self.functors[f]):
                return f"composition {J.morphisms[g]!r} o {J.morphisms[f]!r} is not preserved"
        return None


def grothendieck_cat(P: CatValuedDiagram) -> CatFunctor:
    """The opfibration ``C_P -> J`` of a Cat-valued diagram.

    A morphism ``(f, i, h): (j, i) -> (j', i')`` has ``f: j -> j'`` and
    ``h: (Pf)(i) -> i'`` in ``P j'``; composition is
    ``(g, i', k) o (f, i, h) = (g f, i, k o (Pg)(h))``.
    """
    problem = P.audit()
    if problem:
        raise CategoryError(problem)
    J = P.J
    ob_off = np.cumsum([0] + [c.n_objects for c in P.cats]).tolist()
    objects = [(J.objects[j], P.cats[j].objects[i]) for j in range(J.n_objects)
               for i in range(P.cats[j].n_objects)]
    ob_map = [j for j in range(J.n_objects) for _ in range(P.cats[j].n_objects)]
    mors = []          # (f, i, h)
    for f in range(J.n_morphisms):
        d, c = int(J.dom[f]), int(J.cod[f])
        F = P.functors[f]
        tgt = P.cats[c]
        for i in range(P.cats[d].n_objects):
            for h in np.nonzero(tgt.dom == F.ob_map[i])[0].tolist():
                mors.append((f, i, h))
    index = {key: k for k, key in enumerate(mors)}
    m = len(mors)
    dom = [ob_off[J.dom[f]] + i for f, i, _ in mors]
    cod = [ob_off[J.cod[f]] + int(P.cats[J.cod[f]].cod[h]) for f, i, h in mors]
    table = np.full((m, m), -1, dtype=np.int64)
    dom_arr = np.asarray(dom)
    for a, (f, i, h) in enumerate(mors):
        for b in np.nonzero(dom_arr == cod[a])[0].tolist():
            g, _, k = mors[b]
            G = P.functors[g]
            cat = P.cats[J.cod[g]]
            table[b, a] = index[(int(J.table[g, f]), i, cat.compose(k, G.mor_map[h]))]
    idents = [index[(int(J.identities[j]), i, int(P.cats[j].identities[i]))]
              for j in range(J.n_objects) for i in range(P.cats[j].n_objects)]
    labels = [(J.morphisms[f], P.cats[J.dom[f]].objects[i], P.cats[J.cod[f]].morphisms[h])
              for f, i, h in mors]
    total = FiniteCategory(objects, dom, cod, idents, table, labels)
    return CatFunctor(total, J, ob_map, [f for f, _, _ in mors])


def discrete_cat_diagram(P: FinSetIsoDiagram) -> CatValuedDiagram:
    """View a FinSet_iso diagram as a Cat-valued one with discrete fibers."""
    from .fincat import discrete_category
    cats = [discrete_category(s) for s in P.sets]
    funcs = [CatFunctor(cats[P.J.dom[f]], cats[P.J.cod[f]], P.maps[f], P.maps[f])
             for f in range(P.J.n_morphisms)]
    return CatValuedDiagram(P.J, tuple(cats), tuple(funcs))


# sections and functor categories
# -------------------------------

def _enumerate_functors(J: FiniteCategory, E: FiniteCategory, ob_cands, mor_cands, cap: int):
    """All functors ``J -> E`` with objects/morphisms drawn from the given
    candidate lists. ``mor_cands(f, s_dom, s_cod)`` yields candidates."""
    total = 1
    for c in ob_cands:
        total *= max(len(c), 1)
    if total > cap:
        raise SizeError(f"{total} object assignments exceed the cap {cap}")
    pairs = J.composable_pairs().tolist()
    by_last = [[] for _ in range(J.n_morphisms)]
    for g, f in pairs:
        by_last[max(g, f, int(J.table[g, f]))].append((g, f))
    out = []
    for obs in itertools.product(*ob_cands):
        vals = [-1] * J.n_morphisms

        def rec(k):
            if k == J.n_morphisms:
                out.append((tuple(obs), tuple(vals)))
                return
            d, c = obs[J.dom[k]], obs[J.cod[k]]
            if J.is_identity(k):
                cands = [int(E.identities[d])]
            else:
                cands = mor_cands(k, d, c)
            for v in cands:
                vals[k] = v
                if all(vals[int(J.table[g, f])] == E.table[vals[g], vals[f]]
                       for g, f in by_last[k]):
                    rec(k + 1)
            vals[k] = -1

        rec(0)
    return out


def _nat_transformations(J, E, s, t, comp_cands):
    """All natural transformations between functors ``s, t: J -> E``."""
    s_ob, s_mor = s
    t_ob, t_mor = t
    by_last = [[] for _ in range(J.n_objects)]
    for f in range(J.n_morphisms):
        by_last[max(int(J.dom[f]), int(J.cod[f]))].append(f)
    out = []
    comps = [-1] * J.n_objects

    def rec(x):
        if x == J.n_objects:
            out.append(tuple(comps))
            return
        for v in comp_cands(x, s_ob[x], t_ob[x]):
            comps[x] = v
            if all(E.table[t_mor[f], comps[J.dom[f]]] == E.table[comps[J.cod[f]], s_mor[f]]
                   for f in by_last[x]):
                rec(x + 1)
        comps[x] = -1

    rec(0)
    return out


def _category_of_functors(J, E, functors, comp_cands) -> FiniteCategory:
    n = len(functors)
    mors = []
    for a in range(n):
        for b in range(n):
            for comps in _nat_transformations(J, E, functors[a], functors[b], comp_cands):
                mors.append(((a, b, comps), a, b))
    index = {lab: k for k, (lab, _, _) in enumerate(mors)}

    def compose(g, f):
        (b, c, tg), (a, _, tf) = mors[g][0], mors[f][0]
        return index[(a, c, tuple(int(E.table[x, y]) for x, y in zip(tg, tf)))]

    return FiniteCategory.build(functors, mors, compose)


def sections(q: CatFunctor, cap: int = DEFAULT_SECTIONS_CAP) -> FiniteCategory:
    """Category of sections of ``q: E -> J``.

    Objects are functors ``s`` with ``q s = id_J`` (labelled by their object
    and morphism maps); morphisms are natural transformations whose
    components lie over identities.
    """
    E, J = q.source, q.target
    ob_cands = [[i for i in range(E.n_objects) if q.ob_map[i] == j] for j in range(J.n_objects)]
    over = {}
    for m in range(E.n_morphisms):
        over.setdefault((q.mor_map[m], int(E.dom[m]), int(E.cod[m])), []).append(m)
    funcs = _enumerate_functors(J, E, ob_cands, lambda f, d, c: over.get((f, d, c), []), cap)
    idents = J.identities
    return _category_of_functors(
        J, E, funcs, lambda x, d, c: over.get((int(idents[x]), d, c), []))


def functor_category(J: FiniteCategory, C: FiniteCategory,
                     cap: int = DEFAULT_SECTIONS_CAP) -> FiniteCategory:
    """``C^J``: all functors ``J -> C`` and natural transformations."""
    ob_cands = [list(range(C.n_objects))] * J.n_objects
    funcs = _enumerate_functors(J, C, ob_cands, lambda f, d, c: C.hom(d, c), cap)
    return _category_of_functors(J, C, funcs, lambda x, d, c: C.hom(d, c))


# indexing functors
# -----------------

def fat_diagonal_quotient(I: FiniteCategory, n: int) -> FiniteCategory:
    """``(I^n minus fat diagonal) / Sigma_n`` with unordered sets as sorted tuples.

    Objects are ascending ``n``-subsets of objects of ``I``. A morphism is a
    set of ``n`` morphisms with distinct domains and distinct codomains,
    stored in the order of its domains.
    """
    if I.n_objects < n:
        raise CategoryError(f"need at least {n} objects, got {I.n_objects}")
    objects = list(itertools.combinations(range(I.n_objects), n))
    ob_index = {o: k for k, o in enumerate(objects)}
    out_of = [np.nonzero(I.dom == x)[0].tolist() for x in range(I.n_objects)]
    mors = []
    for S in objects:
        for choice in itertools.product(*(out_of[x] for x in S)):
            cods = [int(I.cod[m]) for m in choice]
            if len(set(cods)) == n:
                mors.append((tuple(choice), ob_index[S], ob_index[tuple(sorted(cods))]))
    index = {lab: k for k, (lab, _, _) in enumerate(mors)}

    def compose(g, f):
        gs = {int(I.dom[m]): m for m in mors[g][0]}
        return index[tuple(int(I.table[gs[int(I.cod[m])], m]) for m in mors[f][0])]

    return FiniteCategory.build(objects, mors, compose)


class IndexingFunctor:
    """Data ``P_j`` (n distinct objects of ``I``) and ``P_f`` (a directed
    bijection of ``n`` morphisms) for every object and arrow of ``J``."""

    def __init__(self, J: FiniteCategory, I: FiniteCategory, n: int,
                 on_objects: Sequence[Sequence[int]], on_morphisms: Sequence[Sequence[int]]):
        self.J, self.I, self.n = J, I, int(n)
        self.on_objects = tuple(tuple(sorted(int(x) for x in s)) for s in on_objects)
        self.on_morphisms = tuple(
            tuple(sorted((int(m) for m in s), key=lambda m: (int(I.dom[m]), m)))
            for s in on_morphisms)
        if len(self.on_objects) != J.n_objects or len(self.on_morphisms) != J.n_morphisms:
            raise CategoryError("indexing data does not match J")

    def audit(self) -> str | None:
        J, I, n = self.J, self.I, self.n
        for j, S in enumerate(self.on_objects):
            if len(S) != n or len(set(S)) != n:
                return f"P({J.objects[j]!r}) is not a set of {n} distinct objects"
            if any(not 0 <= x < I.n_objects for x in S):
                return f"P({J.objects[j]!r}) has objects out of range"
        for f, ms in enumerate(self.on_morphisms):
            if any(not 0 <= m < I.n_morphisms for m in ms):
                return f"P({J.morphisms[f]!r}) has morphisms out of range"
            doms = [int(I.dom[m]) for m in ms]
            cods = sorted(int(I.cod[m]) for m in ms)
            if (len(ms) != n or tuple(doms) != self.on_objects[J.dom[f]]
                    or tuple(cods) != self.on_objects[J.cod[f]]):
                return f"P({J.morphisms[f]!r}) is not a directed bijection"
        for j in range(J.n_objects):
            want = tuple(int(I.identities[x]) for x in self.on_objects[j])
            if self.on_morphisms[J.identities[j]] != want:
                return f"P(id {J.objects[j]!r}) is not the set of identities"
        for g, f in J.composable_pairs().tolist():
            err = self.composite_mismatch(g, f)
            if err:
                return err
        return None

    def composites(self, g: int, f: int) -> tuple[int, ...]:
        """The set of composites of ``P_g`` after ``P_f``, in domain order."""
        I = self.I
        gs = {int(I.dom[m]): m for m in self.on_morphisms[g]}
        return tuple(int(I.table[gs[int(I.cod[m])], m]) for m in self.on_morphisms[f])

    def composite_mismatch(self, g: int, f: int) -> str | None:
        try:
            comp = self.composites(g, f)
        except KeyError:
            return f"P({self.J.morphisms[g]!r}) and P({self.J.morphisms[f]!r}) do not match up"
        if comp != self.on_morphisms[int(self.J.table[g, f])]:
            return (f"P of {self.J.morphisms[g]!r} o {self.J.morphisms[f]!r} is not the set of "
                    "composites")
        return None

    def to_functor(self, quotient: FiniteCategory | None = None) -> CatFunctor:
        """This data as a functor into :func:`fat_diagonal_quotient`."""
        Q = quotient if quotient is not None else fat_diagonal_quotient(self.I, self.n)
        return CatFunctor(self.J, Q, [Q.object_index(s) for s in self.on_objects],
                          [Q.morphism_index(s) for s in self.on_morphisms])


def covering_to_P(c: CoveringCategory) -> IndexingFunctor:
    """Fibers and lift sets of a covering over a connected base."""
    J = c.base
    if not J.is_connected():
        raise CoveringError("base category is not connected")
    return IndexingFunctor(J, c.total, c.n, c.fibers,
                           [c.lifts(f) for f in range(J.n_morphisms)])


def wreath_P(n: int, h: Subgroup, wreath: WreathGroup | None = None,
             base: ProductCategory | None = None) -> IndexingFunctor:
    """``P(*) = {1..n}``, ``P(sigma; h_1..h_n) = {(sigma_i, h_i)}`` over
    ``B_n Sigma_n x H``."""
    W = wreath if wreath is not None else WreathGroup(n, h)
    I = base if base is not None else wreath_base_category(n, h)
    J = one_object_category(W)
    sym = I.left
    on_mor = []
    for w in W.elements:
        s = sym.group.element_of_perm(w.sigma)
        on_mor.append([I.pair(sym.mor(s, i), h.local(w.hs[i])) for i in range(n)])
    return IndexingFunctor(J, I, n, [[I.obj_pair(i, 0) for i in range(n)]], on_mor)


@dataclass
class NonCoveringWitness:
    first: int               # wreath element indices
    second: int
    shared: int              # morphism of B_n Sigma_n x H in both P sets
    slot: int                # the i with h_i = h'_i
    P: IndexingFunctor = field(repr=False)


def non_covering_witness(n: int, h: Subgroup, P: IndexingFunctor | None = None) -> NonCoveringWitness:
    """Two distinct wreath elements whose P sets share a morphism.

    This shows the wreath indexing does not come from a covering category,
    where the lift sets of distinct arrows are disjoint.
    """
    if n < 2 or h.order < 2:
        raise GroupError("a witness needs n >= 2 and |H| >= 2")
    P = P if P is not None else wreath_P(n, h)
    sets = [set(s) for s in P.on_morphisms]
    for a in range(len(sets)):
        for b in range(a + 1, len(sets)):
            common = sets[a] & sets[b]
            if common:
                m = min(common)
                slot = P.on_morphisms[a].index(m)
                return NonCoveringWitness(a, b, m, slot, P)
    raise GroupError("no witness found")
