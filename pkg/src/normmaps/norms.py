"""The two norm composites and the commuting-diagram verifier.

For ``H <= G`` of index ``n`` and a transversal ``t``:

* ``hhr_norm`` pulls ``X`` back along ``kappa: B_{G/H}G -> H`` and pushes it
  forward along the covering ``p: B_{G/H}G -> G`` by the fiberwise tensor;
* ``gm_norm`` pulls ``X`` back to ``B_n Sigma_n x H``, takes the n-fold smash
  power over ``Sigma_n wr H`` and restricts along ``alpha: G -> Sigma_n wr H``.

``verify_theorem`` checks the two cells of the comparison square
separately so a failure points at the triangle or at the lower square.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .cover import CoveringCategory, IndexingFunctor, wreath_P
from .fincat import (CatFunctor, CategoryError, FiniteCategory, ProductCategory,
                     TranslationGroupoid, beta, check_triangle, coset_groupoid,
                     inclusion_iota, kappa, one_object_category, projection,
                     wreath_base_category)
from .groups import FiniteGroup, Subgroup, Transversal, WreathGroup, alpha, transversal
from .monoidal import (Diagram, DiagramMorphism, MatrixInstance, MonoidalInstance,
                       indexed_tensor_covering, map_indexed_tensor,
                       map_indexed_tensor_covering, n_smash, pullback, pullback_morphism)
from .sampling import (combine, enumerate_natural_transformations,
                       natural_transformation_basis)


@dataclass(eq=False)
class NormContext:
    """Every artifact induced by one transversal, built together."""
    G: FiniteGroup
    H: Subgroup
    t: Transversal
    reps: tuple                  # the representatives the checks compare against
    bg: TranslationGroupoid
    G_cat: FiniteCategory
    H_cat: FiniteCategory
    base: ProductCategory        # B_n Sigma_n x H
    W: WreathGroup
    W_cat: FiniteCategory
    p: CoveringCategory
    kappa: CatFunctor
    beta: CatFunctor
    c: CatFunctor                # projection B_n Sigma_n x H -> H
    alpha: CatFunctor            # G -> Sigma_n wr H as one-object categories
    iota: CatFunctor
    _wreath_P: Any = field(default=None, repr=False)

    @classmethod
    def build(cls, G: FiniteGroup, H: Subgroup, t: Transversal | None = None) -> "NormContext":
        t = t if t is not None else transversal(G, H)
        if t.subgroup != H:
            raise CategoryError("transversal is for a different subgroup")
        n = t.n
        bg = coset_groupoid(t)
        G_cat = one_object_category(G)
        cover = CoveringCategory(CatFunctor(bg, G_cat, [0] * n,
                                            [bg.parts(f)[0] for f in range(bg.n_morphisms)]))
        base = wreath_base_category(n, H)
        W = WreathGroup(n, H)
        W_cat = one_object_category(W)
        a = CatFunctor(G_cat, W_cat, [0], [W.index_of(alpha(g, t)) for g in range(G.order)])
        ctx = cls(G, H, t, t.reps, bg, G_cat, one_object_category(H.as_group()), base, W, W_cat,
                  cover, kappa(t, bg), beta(t, bg, base), projection(base, 1), a,
                  inclusion_iota(H, bg))
        if not check_triangle(ctx.kappa, ctx.beta, ctx.c):
            raise CategoryError("kappa and beta do not form a commuting triangle")
        return ctx

    @property
    def n(self) -> int:
        return self.t.n

    @property
    def wreath_indexing(self) -> IndexingFunctor:
        if self._wreath_P is None:
            self._wreath_P = wreath_P(self.n, self.H, self.W, self.base)
        return self._wreath_P

    def describe(self) -> dict:
        return {"G_order": self.G.order, "H": [self.G.labels[h] for h in self.H.elements],
                "transversal": [self.G.labels[r] for r in self.reps]}


def _check_input(ctx: NormContext, X: Diagram) -> None:
    if X.shape != ctx.H_cat:
        raise CategoryError("X must be a diagram on the one-object category H")


def hhr_norm(ctx: NormContext, X: Diagram) -> Diagram:
    """``p_*^tensor(kappa^* X)``."""
    _check_input(ctx, X)
    return indexed_tensor_covering(ctx.p, pullback(ctx.kappa, X))


def gm_norm(ctx: NormContext, X: Diagram) -> Diagram:
    """``alpha^*(n^smash(c^* X))``."""
    _check_input(ctx, X)
    return pullback(ctx.alpha, n_smash(ctx.n, ctx.H, pullback(ctx.c, X), ctx.W))


def hhr_norm_morphism(ctx: NormContext, f: DiagramMorphism) -> DiagramMorphism:
    return map_indexed_tensor_covering(ctx.p, pullback_morphism(ctx.kappa, f))


def gm_norm_morphism(ctx: NormContext, f: DiagramMorphism) -> DiagramMorphism:
    smashed = map_indexed_tensor(ctx.wreath_indexing, pullback_morphism(ctx.c, f))
    return pullback_morphism(ctx.alpha, smashed)


# verification
# ------------

@dataclass
class TheoremReport:
    upper_triangle: bool
    lower_square: bool
    total: bool
    counterexample: dict | None = None
    failed_check: str | None = None

    def to_json(self, ctx: NormContext | None = None, instance: str | None = None) -> dict:
        out = {}
        if ctx is not None:
            out["G"] = list(ctx.G.labels)
            out["H"] = [ctx.G.labels[h] for h in ctx.H.elements]
            out["transversal"] = [ctx.G.labels[r] for r in ctx.reps]
        if instance is not None:
            out["instance"] = instance
        out.update({"upper_triangle": self.upper_triangle, "lower_square": self.lower_square,
                    "total": self.total, "counterexample": self.counterexample})
        if self.failed_check:
            out["failed_check"] = self.failed_check
        return out


def _value_json(C: MonoidalInstance, v):
    return C.morphism_to_json(v)


def _diagram_mismatch(name: str, lhs: Diagram, rhs: Diagram) -> dict | None:
    f = lhs.first_difference(rhs)
    if f is None:
        return None
    C = lhs.instance
    return {"check": name, "morphism": str(lhs.shape.morphisms[f]),
            "lhs": _value_json(C, lhs.morphisms[f]), "rhs": _value_json(C, rhs.morphisms[f])}


def _functor_mismatch(name: str, lhs: CatFunctor, rhs: CatFunctor) -> dict | None:
    f = lhs.first_difference(rhs)
    if f is None:
        return None
    return {"check": name, "morphism": str(lhs.source.morphisms[f]),
            "lhs": str(lhs.target.morphisms[lhs.mor_map[f]]),
            "rhs": str(rhs.target.morphisms[rhs.mor_map[f]])}


def _upper_checks(ctx: NormContext, X: Diagram) -> dict | None:
    G, H, reps, bg = ctx.G, ctx.H, ctx.reps, ctx.bg
    for name, F in (("kappa_functor", ctx.kappa), ("beta_functor", ctx.beta)):
        problem = F.audit()
        if problem:
            return {"check": name, "morphism": None, "lhs": problem, "rhs": None}
    hg = ctx.H_cat
    for f in range(bg.n_morphisms):
        g, i = bg.parts(f)
        j = int(bg.cod[f])
        h = H.elements[ctx.kappa.mor_map[f]]
        # g t_i = t_j kappa(g_i)
        if G.m(g, reps[i]) != G.m(reps[j], h):
            return {"check": "kappa_transversal", "morphism": str(bg.morphisms[f]),
                    "lhs": G.labels[G.m(g, reps[i])], "rhs": G.labels[G.m(reps[j], h)]}
        sym_f, _ = ctx.base.split(ctx.beta.mor_map[f])
        s, i2 = ctx.base.left.parts(sym_f)
        if i2 != i or ctx.base.left.cod[sym_f] != j:
            return {"check": "beta_transversal", "morphism": str(bg.morphisms[f]),
                    "lhs": str(ctx.base.morphisms[ctx.beta.mor_map[f]]),
                    "rhs": f"a morphism {i + 1} -> {j + 1}"}
    if not check_triangle(ctx.kappa, ctx.beta, ctx.c):
        return _functor_mismatch("triangle", ctx.c.compose(ctx.beta), ctx.kappa)
    return _diagram_mismatch("triangle_pullback", pullback(ctx.beta, pullback(ctx.c, X)),
                             pullback(ctx.kappa, X))


def _lower_checks(ctx: NormContext, X: Diagram) -> dict | None:
    G, H, reps = ctx.G, ctx.H, ctx.reps
    problem = ctx.alpha.audit()
    if problem:
        return {"check": "alpha_homomorphism", "morphism": None, "lhs": problem, "rhs": None}
    for g in range(G.order):
        w = ctx.W.element(ctx.alpha.mor_map[g])
        for i in range(ctx.n):
            lhs = G.m(g, reps[i])
            rhs = G.m(reps[w.sigma[i]], w.hs[i])
            if lhs != rhs:
                return {"check": "alpha_transversal", "morphism": G.labels[g],
                        "lhs": G.labels[lhs], "rhs": G.labels[rhs]}
    Y = pullback(ctx.c, X)
    left = indexed_tensor_covering(ctx.p, pullback(ctx.beta, Y))
    right = pullback(ctx.alpha, n_smash(ctx.n, ctx.H, Y, ctx.W))
    return _diagram_mismatch("lower_square", left, right)


def verify_theorem(ctx: NormContext, X: Diagram) -> TheoremReport:
    """Check the upper triangle and the lower square of the comparison diagram
    for the input ``X``, and that both norms agree strictly."""
    _check_input(ctx, X)
    cex = None
    failed = None
    try:
        up = _upper_checks(ctx, X)
    except (CategoryError, IndexError, KeyError) as exc:
        up = {"check": "upper_triangle", "morphism": None, "lhs": str(exc), "rhs": None}
    try:
        low = _lower_checks(ctx, X)
    except (CategoryError, IndexError, KeyError) as exc:
        low = {"check": "lower_square", "morphism": None, "lhs": str(exc), "rhs": None}
    agree = None
    if up is None and low is None:
        agree = _diagram_mismatch("norms_agree", hhr_norm(ctx, X), gm_norm(ctx, X))
    for c in (up, low, agree):
        if c is not None:
            cex = {k: c[k] for k in ("morphism", "lhs", "rhs")}
            failed = c["check"]
            break
    return TheoremReport(up is None, low is None, up is None and low is None and agree is None,
                         cex, failed)


# corruption for negative controls
# --------------------------------

CORRUPTIBLE = ("alpha", "beta", "kappa", "transversal")


def corrupt(ctx: NormContext, artifact: str, position: int | None = None) -> NormContext:
    """Copy of ``ctx`` with a single value of one artifact altered.

    ``alpha``/``beta``/``kappa``: one morphism image is replaced by another
    morphism of the target. ``transversal``: one representative is replaced,
    inside its coset when ``H`` is nontrivial, while the induced functors
    are kept. Raises ValueError when the artifact admits no other value.
    """
    if artifact == "transversal":
        k = ctx.n - 1 if position is None else position
        if k == 0:
            raise ValueError("t_1 = e is fixed")
        old = ctx.reps[k]
        if ctx.H.order > 1:
            new = ctx.G.m(old, next(h for h in ctx.H.elements if h != ctx.H.parent.identity))
        else:
            new = next(g for g in range(ctx.G.order) if g != old)
        reps = ctx.reps[:k] + (new,) + ctx.reps[k + 1:]
        return dataclasses.replace(ctx, reps=reps)
    if artifact not in ("alpha", "beta", "kappa"):
        raise ValueError(f"unknown artifact {artifact!r}")
    F: CatFunctor = getattr(ctx, artifact)
    if F.target.n_morphisms < 2:
        raise ValueError(f"{artifact} has a single possible value")
    src = F.source
    m = position if position is not None else next(
        f for f in range(src.n_morphisms) if not src.is_identity(f))
    mor = list(F.mor_map)
    mor[m] = (mor[m] + 1) % F.target.n_morphisms
    bad = CatFunctor(src, F.target, F.ob_map, mor)
    return dataclasses.replace(ctx, **{artifact: bad})


# natural isomorphism search
# --------------------------

@dataclass
class IsoSearch:
    morphism: DiagramMorphism | None
    definitive: bool        # True when the whole search space was covered
    searched: int

    @property
    def found(self) -> bool:
        return self.morphism is not None

    @property
    def exhausted(self) -> bool:
        """Cap reached without an answer either way."""
        return self.morphism is None and not self.definitive


def find_natural_isomorphism(X: Diagram, Y: Diagram, cap: int = 100_000,
                             rng: np.random.Generator | None = None) -> IsoSearch:
    """Search for an invertible natural transformation ``X -> Y``.

    Matrix diagrams: solve for the space of natural transformations and test
    its elements for invertibility, all of them when there are at most
    ``cap``, otherwise ``cap`` random ones. Pointed-set diagrams:
    backtracking over families of bijections.
    """
    if X.shape != Y.shape or X.instance != Y.instance:
        raise CategoryError("diagrams have different shapes or instances")
    C = X.instance
    if X.objects != Y.objects and any(
            a != b for a, b in zip(X.objects, Y.objects)):
        return IsoSearch(None, True, 0)
    if isinstance(C, MatrixInstance):
        basis = natural_transformation_basis(X, Y)
        shapes = [(Y.objects[x], X.objects[x]) for x in range(X.shape.n_objects)]
        k = len(basis)
        total = C.p ** k
        rng = rng if rng is not None else np.random.default_rng(0)
        if total <= cap:
            coeff_iter = (np.unravel_index(i, (C.p,) * k) if k else () for i in range(total))
        else:
            coeff_iter = (rng.integers(C.p, size=k) for _ in range(cap))
        searched = 0
        for coeffs in coeff_iter:
            searched += 1
            comps = combine(C, basis, [int(c) for c in coeffs], shapes)
            if all(C.is_invertible(a) for a in comps):
                return IsoSearch(DiagramMorphism(X, Y, comps), True, searched)
        return IsoSearch(None, total <= cap, searched)
    found, complete = enumerate_natural_transformations(X, Y, cap, only_isos=True)
    if found:
        return IsoSearch(DiagramMorphism(X, Y, found[0]), True, len(found))
    return IsoSearch(None, complete, cap if not complete else 0)
