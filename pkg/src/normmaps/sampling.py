"""Seeded random diagrams and natural transformations, and the space of
natural transformations between two diagrams.

Random diagrams send every object of a connected component of the shape
to the same object, drawn uniformly from ``sizes`` (a matrix dimension, or
the number of non-basepoint elements of a pointed set), and every morphism
to an automorphism of it. Morphism values are found by a randomised
backtracking search, so any group relations of the shape are respected.
"""
from __future__ import annotations

import itertools

import numpy as np

from . import fflinalg
from .fincat import FiniteCategory
from .groups import SizeError
from .monoidal import (Diagram, DiagramMorphism, MatrixInstance, MonoidalInstance,
                       PointedMap, PointedSetInstance)


def _key(v):
    if isinstance(v, np.ndarray):
        return (v.shape, v.tobytes())
    return v


class _AutGroup:
    def __init__(self, C: MonoidalInstance, x):
        self.elements = C.automorphisms(x)
        index = {_key(a): i for i, a in enumerate(self.elements)}
        k = len(self.elements)
        self.mul = np.array([[index[_key(C.compose(a, b))] for b in self.elements]
                             for a in self.elements], dtype=np.int64).reshape(k, k)
        self.identity = index[_key(C.identity(x))]
        self.inv = np.argmax(self.mul == self.identity, axis=1)


def _object_for_size(C: MonoidalInstance, size: int):
    return size + 1 if isinstance(C, PointedSetInstance) else size


def random_functor_values(shape: FiniteCategory, groups: list, rng) -> list[int]:
    """Assign to each morphism an element of its component's group so that
    identities and composites are respected."""
    comp_of = [0] * shape.n_objects
    for k, comp in enumerate(shape.components()):
        for x in comp:
            comp_of[x] = k
    grp = [groups[comp_of[int(shape.dom[m])]] for m in range(shape.n_morphisms)]
    triples = [[] for _ in range(shape.n_morphisms)]
    for g, f in shape.composable_pairs().tolist():
        c = int(shape.table[g, f])
        t = (g, f, c)
        for a in {g, f, c}:
            triples[a].append(t)

    def assign(vals, m, v):
        vals[m] = v
        queue = [m]
        while queue:
            a = queue.pop()
            for g, f, c in triples[a]:
                G = grp[g]
                vg, vf, vc = vals[g], vals[f], vals[c]
                if vg >= 0 and vf >= 0:
                    want = int(G.mul[vg, vf])
                    if vc < 0:
                        vals[c] = want
                        queue.append(c)
                    elif vc != want:
                        return False
                elif vg >= 0 and vc >= 0:
                    vals[f] = int(G.mul[G.inv[vg], vc])
                    queue.append(f)
                elif vf >= 0 and vc >= 0:
                    vals[g] = int(G.mul[vc, G.inv[vf]])
                    queue.append(g)
        return True

    vals = [-1] * shape.n_morphisms
    for x in range(shape.n_objects):
        i = int(shape.identities[x])
        if not assign(vals, i, grp[i].identity):
            raise ValueError("inconsistent identities")

    def search(vals):
        try:
            m = vals.index(-1)
        except ValueError:
            return vals
        for v in rng.permutation(len(grp[m].elements)).tolist():
            trial = list(vals)
            if assign(trial, m, v):
                done = search(trial)
                if done is not None:
                    return done
        return None

    out = search(vals)
    if out is None:
        raise ValueError("no functor into the automorphism groups exists")
    return out


def random_diagram(shape: FiniteCategory, C: MonoidalInstance, rng,
                   sizes=(1, 2)) -> Diagram:
    comps = shape.components()
    objs_of_comp = [_object_for_size(C, int(rng.choice(sizes))) for _ in comps]
    groups = [_AutGroup(C, x) for x in objs_of_comp]
    comp_of = {}
    for k, comp in enumerate(comps):
        for x in comp:
            comp_of[x] = k
    vals = random_functor_values(shape, groups, rng)
    objects = [objs_of_comp[comp_of[x]] for x in range(shape.n_objects)]
    mors = [groups[comp_of[int(shape.dom[m])]].elements[v] for m, v in enumerate(vals)]
    return Diagram(shape, C, objects, mors)


def random_automorphism(C: MonoidalInstance, x, rng):
    """A uniformly random automorphism of ``x``, without enumerating them all."""
    if isinstance(C, PointedSetInstance):
        return PointedMap(x, (0,) + tuple(int(v) + 1 for v in rng.permutation(x - 1)))
    while True:
        a = C.matrix(rng.integers(C.p, size=(x, x)))
        if C.is_invertible(a):
            return a


def conjugate_diagram(X: Diagram, rng) -> tuple[Diagram, DiagramMorphism]:
    """A diagram isomorphic to ``X`` through random automorphism components,
    together with that isomorphism ``X -> Y``."""
    C = X.instance
    q = [random_automorphism(C, o, rng) for o in X.objects]
    s = X.shape
    mors = [C.compose(C.compose(q[s.cod[m]], X.morphisms[m]), C.invert(q[s.dom[m]]))
            for m in range(s.n_morphisms)]
    Y = Diagram(s, C, X.objects, mors)
    return Y, DiagramMorphism(X, Y, q)


# natural transformations
# -----------------------

def natural_transformation_basis(X: Diagram, Y: Diagram) -> list[list[np.ndarray]]:
    """Basis of the F_p-space of natural transformations ``X -> Y``.

    Unknowns are the entries of every component; each shape morphism
    ``m: a -> b`` contributes ``Y(m) t_a - t_b X(m) = 0``.
    """
    C = X.instance
    if not isinstance(C, MatrixInstance):
        raise TypeError("linear solve needs a matrix instance")
    s = X.shape
    shapes = [(Y.objects[x], X.objects[x]) for x in range(s.n_objects)]
    offs = np.cumsum([0] + [r * c for r, c in shapes]).tolist()
    nvar = offs[-1]
    rows = []
    for m in range(s.n_morphisms):
        if s.is_identity(m):
            continue
        a, b = int(s.dom[m]), int(s.cod[m])
        ym, xm = Y.morphisms[m], X.morphisms[m]
        block = np.zeros((ym.shape[0] * xm.shape[1], nvar), dtype=np.int64)
        # row-major vec: vec(A T B) = (A kron B^T) vec(T)
        block[:, offs[a]:offs[a + 1]] += np.kron(ym, np.eye(shapes[a][1], dtype=np.int64))
        block[:, offs[b]:offs[b + 1]] -= np.kron(np.eye(shapes[b][0], dtype=np.int64), xm.T)
        rows.append(block)
    system = np.vstack(rows) if rows else np.zeros((0, nvar), dtype=np.int64)
    basis = fflinalg.nullspace(system, C.p)
    out = []
    for vec in basis:
        out.append([C.matrix(vec[offs[x]:offs[x + 1]].reshape(shapes[x]))
                    for x in range(s.n_objects)])
    return out


def combine(C: MatrixInstance, basis, coeffs, shapes) -> list[np.ndarray]:
    comps = [np.zeros(sh, dtype=np.int64) for sh in shapes]
    for c, vec in zip(coeffs, basis):
        if c:
            for k in range(len(comps)):
                comps[k] = comps[k] + c * vec[k]
    return [C.matrix(a) for a in comps]


def pointed_maps(dom: int, cod: int):
    for tail in itertools.product(range(cod), repeat=dom - 1):
        yield PointedMap(cod, (0,) + tail)


def enumerate_natural_transformations(X: Diagram, Y: Diagram, cap: int = 100_000,
                                      only_isos: bool = False):
    """Backtracking enumeration of natural transformations between pointed-set
    diagrams. Returns ``(list, complete)``; ``complete`` is False when the
    cap on visited candidates was hit."""
    if only_isos:
        return pointed_isomorphisms(X, Y, cap)
    C = X.instance
    s = X.shape
    by_last = [[] for _ in range(s.n_objects)]
    for m in range(s.n_morphisms):
        by_last[max(int(s.dom[m]), int(s.cod[m]))].append(m)
    cands = [list(pointed_maps(X.objects[x], Y.objects[x])) for x in range(s.n_objects)]
    out = []
    comps = [None] * s.n_objects
    visited = 0

    def rec(x):
        nonlocal visited
        if x == s.n_objects:
            out.append(list(comps))
            return True
        for v in cands[x]:
            visited += 1
            if visited > cap:
                return False
            comps[x] = v
            if all(C.equal(C.compose(Y.morphisms[m], comps[s.dom[m]]),
                           C.compose(comps[s.cod[m]], X.morphisms[m])) for m in by_last[x]):
                if not rec(x + 1):
                    return False
        return True

    complete = rec(0)
    return out, complete


def pointed_isomorphisms(X: Diagram, Y: Diagram, cap: int = 100_000, limit: int | None = 1):
    """Natural isomorphisms of pointed-set diagrams, found point by point.

    Fixing the image ``b`` of a point ``a`` of ``X(x)`` forces the image of
    ``X(m)(a)`` to be ``Y(m)(b)`` for every arrow ``m`` out of ``x``; these
    consequences are propagated before the next choice. At most ``limit``
    isomorphisms are returned (all of them when ``limit`` is None).
    Returns ``(list, complete)`` like :func:`enumerate_natural_transformations`.
    """
    s = X.shape
    if X.objects != Y.objects:
        return [], True
    out_of = [np.nonzero(s.dom == x)[0].tolist() for x in range(s.n_objects)]
    points = [(x, a) for x in range(s.n_objects) for a in range(1, X.objects[x])]
    found = []
    visited = 0

    def propagate(phi, used, x, a, b):
        stack = [(x, a, b)]
        while stack:
            x, a, b = stack.pop()
            cur = phi[x][a]
            if cur >= 0:
                if cur != b:
                    return False
                continue
            if b in used[x]:
                return False
            phi[x][a] = b
            used[x].add(b)
            for m in out_of[x]:
                stack.append((int(s.cod[m]), X.morphisms[m].table[a], Y.morphisms[m].table[b]))
        return True

    def rec(phi, used, k):
        nonlocal visited
        while k < len(points) and phi[points[k][0]][points[k][1]] >= 0:
            k += 1
        if k == len(points):
            found.append([PointedMap(X.objects[x], tuple(phi[x])) for x in range(s.n_objects)])
            return limit is None or len(found) < limit
        x, a = points[k]
        for b in range(1, X.objects[x]):
            if b in used[x]:
                continue
            visited += 1
            if visited > cap:
                return False
            phi2 = [list(p) for p in phi]
            used2 = [set(u) for u in used]
            if propagate(phi2, used2, x, a, b) and not rec(phi2, used2, k + 1):
                return False
        return True

    phi0 = [[0] + [-1] * (X.objects[x] - 1) for x in range(s.n_objects)]
    used0 = [{0} for _ in range(s.n_objects)]
    done = rec(phi0, used0, 0)
    hit_limit = limit is not None and len(found) >= limit
    return found, done or hit_limit


def random_natural_transformation(X: Diagram, Y: Diagram, rng) -> DiagramMorphism:
    C = X.instance
    if isinstance(C, MatrixInstance):
        basis = natural_transformation_basis(X, Y)
        shapes = [(Y.objects[x], X.objects[x]) for x in range(X.shape.n_objects)]
        coeffs = rng.integers(C.p, size=len(basis)).tolist()
        return DiagramMorphism(X, Y, combine(C, basis, coeffs, shapes))
    found, complete = enumerate_natural_transformations(X, Y)
    if not complete:
        raise SizeError("too many natural transformations to sample from")
    return DiagramMorphism(X, Y, found[int(rng.integers(len(found)))])


class _SymGroup:
    def __init__(self, k: int):
        from .groups import symmetric_group
        g = symmetric_group(k)
        self.group = g
        self.elements = g.perms
        self.mul, self.inv, self.identity = g.mul, g.inv, g.identity


def random_finset_diagram(shape: FiniteCategory, rng, max_size: int = 3):
    """A seeded ``P: shape -> FinSet_iso`` with every set of one connected
    component of the same size, drawn from ``1..max_size``."""
    from .cover import FinSetIsoDiagram
    comps = shape.components()
    sizes = [int(rng.integers(1, max_size + 1)) for _ in comps]
    groups = [_SymGroup(k) for k in sizes]
    comp_of = {x: k for k, comp in enumerate(comps) for x in comp}
    vals = random_functor_values(shape, groups, rng)
    sets = [list(range(sizes[comp_of[x]])) for x in range(shape.n_objects)]
    maps = [groups[comp_of[int(shape.dom[m])]].elements[v] for m, v in enumerate(vals)]
    return FinSetIsoDiagram(shape, sets, maps)
