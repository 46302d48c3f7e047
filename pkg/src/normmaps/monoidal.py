"""Finite symmetric monoidal instances, diagrams and indexed tensor products.

Two instances are provided:

* :class:`MatrixInstance` -- finite-dimensional F_p vector spaces, objects are
  dimensions, morphisms are ``cod x dom`` integer matrices reduced mod ``p``,
  the tensor is the Kronecker product;
* :class:`PointedSetInstance` -- finite pointed sets ``{0, 1, .., m-1}`` with
  basepoint 0, basepoint-preserving maps and the smash product.

Tensors of a list are taken left to right; element ``(a_0, .., a_{n-1})`` of
a tensor is numbered in row-major order, factor 0 most significant.
"""
from __future__ import annotations

import itertools
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import fflinalg
from .cover import CoveringCategory, IndexingFunctor
from .fincat import CatFunctor, CategoryError, FiniteCategory
from .groups import Subgroup, WreathGroup, perm_inverse


class MonoidalInstance(ABC):
    """Interface for a strict-valued finite symmetric monoidal category."""

    name: str

    @abstractmethod
    def dom(self, f): ...

    @abstractmethod
    def cod(self, f): ...

    @abstractmethod
    def compose(self, g, f):
        """``g o f``."""

    @abstractmethod
    def identity(self, x): ...

    @property
    @abstractmethod
    def unit(self): ...

    @abstractmethod
    def tensor_objects(self, xs: Sequence): ...

    @abstractmethod
    def tensor_morphisms(self, fs: Sequence): ...

    @abstractmethod
    def permute(self, xs: Sequence, perm: Sequence[int]):
        """Reordering iso ``(x)_i xs[i] -> (x)_j xs[perm^-1 j]``: factor ``i``
        moves to position ``perm[i]``."""

    @abstractmethod
    def equal(self, f, g) -> bool: ...

    @abstractmethod
    def is_morphism(self, f) -> bool: ...

    @abstractmethod
    def automorphisms(self, x) -> list:
        """Every automorphism of ``x``; only used for small objects."""

    @abstractmethod
    def morphism_to_json(self, f): ...

    @abstractmethod
    def morphism_from_json(self, data, dom, cod): ...

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, MonoidalInstance) and self.name == other.name

    def __hash__(self) -> int:
        return hash(self.name)


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _shuffle_index(sizes: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """For each target multi-index (row-major over the reordered sizes),
    the source multi-index it comes from."""
    n = len(sizes)
    if n == 0:
        return np.zeros(1, dtype=np.int64)
    src = np.arange(math.prod(sizes), dtype=np.int64).reshape(tuple(sizes))
    # target axis perm[i] is source axis i
    return src.transpose(perm_inverse(tuple(perm))).reshape(-1)


class MatrixInstance(MonoidalInstance):
    def __init__(self, p: int = 2):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"matrix_f{p}"
        self._aut_cache = {}

    def matrix(self, rows) -> np.ndarray:
        a = np.mod(np.asarray(rows, dtype=np.int64), self.p)
        if a.ndim != 2:
            raise ValueError("matrices must be two-dimensional")
        return _freeze(a)

    def dom(self, f):
        return f.shape[1]

    def cod(self, f):
        return f.shape[0]

    def compose(self, g, f):
        if g.shape[1] != f.shape[0]:
            raise CategoryError("matrix shapes do not compose")
        return _freeze((g @ f) % self.p)

    def identity(self, x):
        return _freeze(np.eye(x, dtype=np.int64))

    @property
    def unit(self):
        return 1

    def tensor_objects(self, xs):
        return math.prod(xs)

    def tensor_morphisms(self, fs):
        out = np.ones((1, 1), dtype=np.int64)
        for f in fs:
            out = np.kron(out, f) % self.p
        return _freeze(out)

    def permute(self, xs, perm):
        idx = _shuffle_index(xs, perm)
        m = np.zeros((len(idx), len(idx)), dtype=np.int64)
        m[np.arange(len(idx)), idx] = 1
        return _freeze(m)

    def equal(self, f, g) -> bool:
        return f.shape == g.shape and np.array_equal(f, g)

    def is_morphism(self, f) -> bool:
        return (isinstance(f, np.ndarray) and f.ndim == 2
                and (f.size == 0 or (f.min() >= 0 and f.max() < self.p)))

    def automorphisms(self, x):
        if x in self._aut_cache:
            return self._aut_cache[x]
        if self.p ** (x * x) > 100_000:
            raise ValueError(f"GL_{x}(F_{self.p}) is too large to enumerate")
        out = []
        for k in range(self.p ** (x * x)):
            digits = np.array([(k // self.p ** e) % self.p for e in range(x * x)],
                              dtype=np.int64).reshape(x, x)
            if fflinalg.is_invertible(digits, self.p):
                out.append(_freeze(digits))
        self._aut_cache[x] = out
        return out

    def is_invertible(self, f) -> bool:
        return fflinalg.is_invertible(f, self.p)

    def invert(self, f):
        return _freeze(fflinalg.inverse(f, self.p))

    def morphism_to_json(self, f):
        return f.tolist()

    def morphism_from_json(self, data, dom, cod):
        a = np.asarray(data, dtype=np.int64).reshape(cod, dom)
        if a.size and (a.min() < 0 or a.max() >= self.p):
            raise ValueError(f"matrix entries must lie in 0..{self.p - 1}")
        return _freeze(a)


@dataclass(frozen=True)
class PointedMap:
    """Basepoint-preserving map ``{0..len(table)-1} -> {0..cod-1}``."""
    cod: int
    table: tuple

    @property
    def dom(self) -> int:
        return len(self.table)


class PointedSetInstance(MonoidalInstance):
    """Objects are sizes ``m >= 1`` of ``{0, .., m-1}``, basepoint 0."""

    name = "pointed_set"

    def dom(self, f):
        return f.dom

    def cod(self, f):
        return f.cod

    def compose(self, g, f):
        if g.dom != f.cod:
            raise CategoryError("pointed maps do not compose")
        return PointedMap(g.cod, tuple(g.table[x] for x in f.table))

    def identity(self, x):
        return PointedMap(x, tuple(range(x)))

    @property
    def unit(self):
        return 2

    def tensor_objects(self, xs):
        return 1 + math.prod(x - 1 for x in xs)

    def tensor_morphisms(self, fs):
        csz = [f.cod - 1 for f in fs]
        table = [0]
        for a in itertools.product(*(range(1, f.dom) for f in fs)):
            img = [f.table[x] for f, x in zip(fs, a)]
            if 0 in img:
                table.append(0)
                continue
            k = 0
            for v, size in zip(img, csz):
                k = k * size + (v - 1)
            table.append(k + 1)
        return PointedMap(1 + math.prod(csz), tuple(table))

    def permute(self, xs, perm):
        idx = _shuffle_index([x - 1 for x in xs], perm)
        # idx[target] = source; invert to a map source -> target
        table = [0] * (len(idx) + 1)
        for tgt, src in enumerate(idx.tolist()):
            table[src + 1] = tgt + 1
        return PointedMap(len(table), tuple(table))

    def equal(self, f, g) -> bool:
        return f == g

    def is_morphism(self, f) -> bool:
        return (isinstance(f, PointedMap) and f.dom >= 1 and f.table[0] == 0
                and all(0 <= v < f.cod for v in f.table))

    def automorphisms(self, x):
        return [PointedMap(x, (0,) + p) for p in itertools.permutations(range(1, x))]

    def is_invertible(self, f) -> bool:
        return f.dom == f.cod and sorted(f.table) == list(range(f.dom))

    def invert(self, f):
        return PointedMap(f.dom, tuple(int(i) for i in np.argsort(f.table)))

    def morphism_to_json(self, f):
        return list(f.table)

    def morphism_from_json(self, data, dom, cod):
        f = PointedMap(int(cod), tuple(int(v) for v in data))
        if f.dom != dom or not self.is_morphism(f):
            raise ValueError("invalid pointed map")
        return f


def get_instance(name: str) -> MonoidalInstance:
    if name == "pointed_set":
        return PointedSetInstance()
    if name.startswith("matrix_f"):
        return MatrixInstance(int(name[len("matrix_f"):]))
    raise ValueError(f"unknown instance {name!r}")


# diagrams
# --------

class Diagram:
    """A functor from a finite category into a monoidal instance."""

    def __init__(self, shape: FiniteCategory, instance: MonoidalInstance,
                 objects: Sequence, morphisms: Sequence):
        self.shape = shape
        self.instance = instance
        self.objects = tuple(objects)
        self.morphisms = tuple(morphisms)
        if len(self.objects) != shape.n_objects or len(self.morphisms) != shape.n_morphisms:
            raise CategoryError("diagram does not match its shape")

    def __repr__(self) -> str:
        return f"Diagram({self.shape!r}, {self.instance.name})"

    def __getitem__(self, f: int):
        return self.morphisms[f]

    def first_difference(self, other: "Diagram") -> int | None:
        """First shape morphism where the two diagrams differ (identity
        morphisms stand for differing objects)."""
        if self.shape != other.shape or self.instance != other.instance:
            raise CategoryError("diagrams have different shapes or instances")
        for x, (a, b) in enumerate(zip(self.objects, other.objects)):
            if a != b:
                return int(self.shape.identities[x])
        eq = self.instance.equal
        for f, (a, b) in enumerate(zip(self.morphisms, other.morphisms)):
            if not eq(a, b):
                return f
        return None

    def __eq__(self, other) -> bool:
        if not isinstance(other, Diagram):
            return NotImplemented
        if self.shape != other.shape or self.instance != other.instance:
            return False
        return self.first_difference(other) is None

    __hash__ = None

    def audit(self) -> str | None:
        """Full functor audit: dom/cod, identities and every composite."""
        s, C = self.shape, self.instance
        for f, v in enumerate(self.morphisms):
            if not C.is_morphism(v):
                return f"value at {s.morphisms[f]!r} is not a morphism"
            if C.dom(v) != self.objects[s.dom[f]] or C.cod(v) != self.objects[s.cod[f]]:
                return f"value at {s.morphisms[f]!r} has wrong dom/cod"
        for x in range(s.n_objects):
            if not C.equal(self.morphisms[s.identities[x]], C.identity(self.objects[x])):
                return f"identity of {s.objects[x]!r} is not preserved"
        for g, f in s.composable_pairs().tolist():
            lhs = self.morphisms[s.table[g, f]]
            rhs = C.compose(self.morphisms[g], self.morphisms[f])
            if not C.equal(lhs, rhs):
                return f"composition {s.morphisms[g]!r} o {s.morphisms[f]!r} is not preserved"
        return None


class DiagramMorphism:
    """A natural transformation between diagrams of the same shape."""

    def __init__(self, source: Diagram, target: Diagram, components: Sequence):
        if source.shape != target.shape or source.instance != target.instance:
            raise CategoryError("diagram morphism between different shapes or instances")
        self.source = source
        self.target = target
        self.components = tuple(components)
        if len(self.components) != source.shape.n_objects:
            raise CategoryError("need one component per object")

    @property
    def shape(self) -> FiniteCategory:
        return self.source.shape

    @property
    def instance(self) -> MonoidalInstance:
        return self.source.instance

    def audit(self) -> str | None:
        """Check every naturality square."""
        s, C = self.shape, self.instance
        for x, c in enumerate(self.components):
            if C.dom(c) != self.source.objects[x] or C.cod(c) != self.target.objects[x]:
                return f"component at {s.objects[x]!r} has wrong dom/cod"
        for f in range(s.n_morphisms):
            d, c = int(s.dom[f]), int(s.cod[f])
            lhs = C.compose(self.target.morphisms[f], self.components[d])
            rhs = C.compose(self.components[c], self.source.morphisms[f])
            if not C.equal(lhs, rhs):
                return f"naturality fails at {s.morphisms[f]!r}"
        return None

    def then(self, other: "DiagramMorphism") -> "DiagramMorphism":
        """Vertical composite ``other o self``."""
        C = self.instance
        return DiagramMorphism(self.source, other.target,
                               [C.compose(b, a) for a, b in zip(self.components,
                                                                other.components)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiagramMorphism):
            return NotImplemented
        C = self.instance
        return (self.source == other.source and self.target == other.target
                and all(C.equal(a, b) for a, b in zip(self.components, other.components)))

    __hash__ = None

    @classmethod
    def identity(cls, x: Diagram) -> "DiagramMorphism":
        return cls(x, x, [x.instance.identity(o) for o in x.objects])


# operations
# ----------

def pullback(F: CatFunctor, X: Diagram) -> Diagram:
    """Precompose ``X`` with ``F``."""
    if F.target != X.shape:
        raise CategoryError("functor target is not the diagram's shape")
    return Diagram(F.source, X.instance, [X.objects[x] for x in F.ob_map],
                   [X.morphisms[f] for f in F.mor_map])


def pullback_morphism(F: CatFunctor, t: DiagramMorphism) -> DiagramMorphism:
    return DiagramMorphism(pullback(F, t.source), pullback(F, t.target),
                           [t.components[x] for x in F.ob_map])


def ordered_tensor(C: MonoidalInstance, values: Sequence, cod_objects: Sequence,
                   target_positions: Sequence[int]):
    """Tensor ``values`` in the given (domain) order, then reorder so the
    factor from slot ``k`` lands at ``target_positions[k]``."""
    t = C.tensor_morphisms(values)
    ident = all(p == k for k, p in enumerate(target_positions))
    if ident:
        return t
    return C.compose(C.permute(cod_objects, target_positions), t)


def _tensor_along(I: FiniteCategory, X: Diagram, cod_order: Sequence[int], morphs: Sequence[int]):
    C = X.instance
    pos = {x: k for k, x in enumerate(cod_order)}
    cods = [int(I.cod[m]) for m in morphs]
    return ordered_tensor(C, [X.morphisms[m] for m in morphs],
                          [X.objects[c] for c in cods], [pos[c] for c in cods])


def indexed_tensor_covering(c: CoveringCategory, X: Diagram) -> Diagram:
    """Monoidal pushforward along a covering: fiberwise tensor on objects,
    tensor of the lifts (reordered into the codomain fiber) on arrows."""
    I, J = c.total, c.base
    if X.shape != I:
        raise CategoryError("diagram is not defined on the covering's total category")
    C = X.instance
    obs = [C.tensor_objects([X.objects[i] for i in c.fibers[j]]) for j in range(J.n_objects)]
    mors = []
    for f in range(J.n_morphisms):
        lifts = [c.lift(f, i) for i in c.fibers[J.dom[f]]]
        mors.append(_tensor_along(I, X, c.fibers[J.cod[f]], lifts))
    return Diagram(J, C, obs, mors)


def general_indexed_tensor(P: IndexingFunctor, X: Diagram) -> Diagram:
    """``P^tensor(X)``: tensor over ``P_j`` on objects, over ``P_f`` on arrows."""
    if X.shape != P.I:
        raise CategoryError("diagram is not defined on the indexing category")
    C, J = X.instance, P.J
    obs = [C.tensor_objects([X.objects[i] for i in P.on_objects[j]]) for j in range(J.n_objects)]
    mors = [_tensor_along(P.I, X, P.on_objects[J.cod[f]], P.on_morphisms[f])
            for f in range(J.n_morphisms)]
    return Diagram(J, C, obs, mors)


def n_smash(n: int, h: Subgroup, X: Diagram, wreath: WreathGroup | None = None) -> Diagram:
    """The n-fold smash power on ``Sigma_n wr H``:
    ``(sigma; h_1..h_n) -> tensor_i X((sigma)_i, h_i)`` reordered by sigma.

    ``X`` lives on ``B_n Sigma_n x H`` as built by ``wreath_base_category``.
    """
    from .fincat import one_object_category
    W = wreath if wreath is not None else WreathGroup(n, h)
    I = X.shape
    if not hasattr(I, "left") or I.n_objects != n or I.right.n_morphisms != h.order:
        raise CategoryError("diagram is not defined on B_n Sigma_n x H")
    sym = I.left
    C = X.instance
    obj = C.tensor_objects([X.objects[i] for i in range(n)])
    mors = []
    for w in W.elements:
        s = sym.group.element_of_perm(w.sigma)
        vals = [X.morphisms[I.pair(sym.mor(s, i), h.local(w.hs[i]))] for i in range(n)]
        cods = [X.objects[w.sigma[i]] for i in range(n)]
        mors.append(ordered_tensor(C, vals, cods, w.sigma))
    return Diagram(one_object_category(W), C, [obj], mors)


def map_indexed_tensor(P: IndexingFunctor, f: DiagramMorphism) -> DiagramMorphism:
    """Componentwise tensor ``tensor_{i in P_j} f_i`` of a diagram morphism."""
    C = f.instance
    src = general_indexed_tensor(P, f.source)
    tgt = general_indexed_tensor(P, f.target)
    comps = [C.tensor_morphisms([f.components[i] for i in P.on_objects[j]])
             for j in range(P.J.n_objects)]
    return DiagramMorphism(src, tgt, comps)


def map_indexed_tensor_covering(c: CoveringCategory, f: DiagramMorphism) -> DiagramMorphism:
    C = f.instance
    comps = [C.tensor_morphisms([f.components[i] for i in c.fibers[j]])
             for j in range(c.base.n_objects)]
    return DiagramMorphism(indexed_tensor_covering(c, f.source),
                           indexed_tensor_covering(c, f.target), comps)
