"""Desk-scale check that sections of the categorified Grothendieck
construction of ``j -> C^{P j}`` are the functor category ``C^I``, and that
tensoring sections fiberwise is the covering pushforward.

Here ``C`` is a small full subcategory of a monoidal instance, turned into
a :class:`FiniteCategory` by enumerating every morphism between the chosen
objects.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .cover import (CatValuedDiagram, FinSetIsoDiagram, functor_category, grothendieck_cat,
                    grothendieck_set, sections)
from .fincat import CatFunctor, FiniteCategory
from .monoidal import Diagram, MatrixInstance, MonoidalInstance, indexed_tensor_covering
from .sampling import pointed_maps


def _key(v):
    if isinstance(v, np.ndarray):
        return (v.shape, v.tobytes())
    return v


def _all_morphisms(C: MonoidalInstance, a, b) -> list:
    if isinstance(C, MatrixInstance):
        out = []
        for entries in itertools.product(range(C.p), repeat=a * b):
            out.append(C.matrix(np.array(entries, dtype=np.int64).reshape(b, a)))
        return out
    return list(pointed_maps(a, b))


@dataclass
class InstanceCategory:
    """A full subcategory of a monoidal instance on finitely many objects."""
    instance: MonoidalInstance
    objects: tuple
    category: FiniteCategory
    values: list = field(repr=False)

    @classmethod
    def build(cls, C: MonoidalInstance, objects) -> "InstanceCategory":
        objects = tuple(objects)
        mors, values = [], []
        for i, a in enumerate(objects):
            for j, b in enumerate(objects):
                for v in _all_morphisms(C, a, b):
                    mors.append((len(mors), i, j))
                    values.append(v)
        index = {(m[1], m[2], _key(v)): k for k, (m, v) in enumerate(zip(mors, values))}

        def compose(g, f):
            return index[(mors[f][1], mors[g][2], _key(C.compose(values[g], values[f])))]

        cat = FiniteCategory.build(list(objects), mors, compose)
        return cls(C, objects, cat, values)


def power_category(C: FiniteCategory, m: int) -> FiniteCategory:
    """``C^m`` for a discrete index set of size ``m``; labels are index tuples."""
    obs = list(itertools.product(range(C.n_objects), repeat=m))
    ob_index = {o: k for k, o in enumerate(obs)}
    mors = []
    for fs in itertools.product(range(C.n_morphisms), repeat=m):
        mors.append((fs, ob_index[tuple(int(C.dom[f]) for f in fs)],
                     ob_index[tuple(int(C.cod[f]) for f in fs)]))
    mor_index = {lab: k for k, (lab, _, _) in enumerate(mors)}

    def compose(g, f):
        return mor_index[tuple(int(C.table[a, b]) for a, b in zip(mors[g][0], mors[f][0]))]

    return FiniteCategory.build(obs, mors, compose)


def reindex_functor(A: FiniteCategory, B: FiniteCategory, positions) -> CatFunctor:
    """``C^m -> C^m`` moving coordinate ``k`` to ``positions[k]``."""
    def move(t):
        out = [0] * len(t)
        for k, v in enumerate(t):
            out[positions[k]] = v
        return tuple(out)
    return CatFunctor(A, B, [B.object_index(move(o)) for o in A.objects],
                      [B.morphism_index(move(m)) for m in A.morphisms])


def power_diagram(P: FinSetIsoDiagram, C: FiniteCategory) -> CatValuedDiagram:
    """``j -> C^{P j}`` with ``P f`` acting by moving coordinates."""
    J = P.J
    cats = [power_category(C, len(P.sets[j])) for j in range(J.n_objects)]
    funcs = [reindex_functor(cats[J.dom[f]], cats[J.cod[f]], P.maps[f])
             for f in range(J.n_morphisms)]
    return CatValuedDiagram(J, tuple(cats), tuple(funcs))


@dataclass
class SectionsReport:
    ok: bool
    n_sections: int
    n_functors: int
    object_bijection: bool
    hom_sizes_match: bool
    isomorphism: bool
    tensor_matches: bool
    message: str | None = None


def verify_sections_claim(P: FinSetIsoDiagram, ic: InstanceCategory) -> SectionsReport:
    """Compare ``sections(C_P -> J)`` with ``C^I`` and the fiberwise tensor of
    each section with ``indexed_tensor_covering``.

    A section ``s`` corresponds to the functor ``X: I -> C`` with
    ``X(j, x) = s(j)_x`` and ``X(f, x) = h_{Pf(x)}`` where ``s(f) = (f, s(j), h)``.
    """
    C, Cinst = ic.category, ic.instance
    J = P.J
    cover = grothendieck_set(P)
    I = cover.total
    PC = power_diagram(P, C)
    q = grothendieck_cat(PC)
    S = sections(q)
    F = functor_category(I, C)
    E = q.source
    ob_off = np.cumsum([0] + [c.n_objects for c in PC.cats]).tolist()
    i_off = np.cumsum([0] + [len(s) for s in P.sets]).tolist()

    def section_tuple(ob_e: int) -> tuple:
        j = q.ob_map[ob_e]
        return PC.cats[j].objects[ob_e - ob_off[j]]

    def to_functor(sec) -> tuple:
        obs_e, mors_e = sec
        X_obs = [0] * I.n_objects
        for j in range(J.n_objects):
            for k, c in enumerate(section_tuple(obs_e[j])):
                X_obs[i_off[j] + k] = c
        X_mors = [0] * I.n_morphisms
        for m in range(I.n_morphisms):
            f = cover.p.mor_map[m]
            d = int(I.dom[m])
            k = d - i_off[J.dom[f]]
            h = E.morphisms[mors_e[f]][2]
            X_mors[m] = h[P.maps[f][k]]
        return tuple(X_obs), tuple(X_mors)

    def fail(msg, **flags):
        base = dict(object_bijection=True, hom_sizes_match=True, isomorphism=True,
                    tensor_matches=True)
        base.update(flags)
        return SectionsReport(False, S.n_objects, F.n_objects, message=msg, **base)

    ob_map = []
    for sec in S.objects:
        fx = to_functor(sec)
        try:
            ob_map.append(F.object_index(fx))
        except (KeyError, ValueError):
            return fail(f"section {sec!r} is not a functor I -> C", object_bijection=False,
                        hom_sizes_match=False, isomorphism=False)
    if sorted(ob_map) != list(range(F.n_objects)):
        return fail("sections and functors are not in bijection", object_bijection=False,
                    hom_sizes_match=False, isomorphism=False)
    homs_ok = all(len(S.hom(a, b)) == len(F.hom(ob_map[a], ob_map[b]))
                  for a in range(S.n_objects) for b in range(S.n_objects))
    # natural transformations: component at (j, x) is coordinate x of the one at j
    mor_map = []
    for a_, b_, comps in S.morphisms:
        flat = [0] * I.n_objects
        for j in range(J.n_objects):
            for k, c in enumerate(E.morphisms[comps[j]][2]):
                flat[i_off[j] + k] = c
        mor_map.append(F.morphism_index((ob_map[a_], ob_map[b_], tuple(flat))))
    iso = CatFunctor(S, F, ob_map, mor_map)
    is_iso = (homs_ok and iso.audit() is None
              and sorted(mor_map) == list(range(F.n_morphisms)))
    if not (homs_ok and is_iso):
        return fail("hom sets differ", hom_sizes_match=homs_ok, isomorphism=is_iso)

    for sec in S.objects:
        X_obs, X_mors = to_functor(sec)
        X = Diagram(I, Cinst, [ic.objects[c] for c in X_obs], [ic.values[m] for m in X_mors])
        pushed = indexed_tensor_covering(cover, X)
        obs_e, mors_e = sec
        want_obs, want_mors = [], []
        for j in range(J.n_objects):
            want_obs.append(Cinst.tensor_objects([ic.objects[c] for c in section_tuple(obs_e[j])]))
        for f in range(J.n_morphisms):
            src = [ic.objects[c] for c in section_tuple(obs_e[J.dom[f]])]
            h = E.morphisms[mors_e[f]][2]
            # tensor of h in codomain order after the coordinate shuffle
            want_mors.append(Cinst.compose(Cinst.tensor_morphisms([ic.values[x] for x in h]),
                                           Cinst.permute(src, P.maps[f])))
        want = Diagram(J, Cinst, want_obs, want_mors)
        if pushed != want:
            return fail(f"fiberwise tensor of section {sec!r} differs from the pushforward",
                        tensor_matches=False)
    return SectionsReport(True, S.n_objects, F.n_objects, True, True, True, True)
