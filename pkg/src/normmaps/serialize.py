"""JSON encodings for groups, categories, functors, indexing data and diagrams."""
from __future__ import annotations

from .cover import CatValuedDiagram, FinSetIsoDiagram, IndexingFunctor
from .fincat import CatFunctor, FiniteCategory
from .groups import FiniteGroup, Subgroup, Transversal, perm_from_cycles
from .monoidal import Diagram, MonoidalInstance, get_instance


class InputError(ValueError):
    """Malformed JSON input."""


def _require(data, key):
    if not isinstance(data, dict) or key not in data:
        raise InputError(f"missing key {key!r}")
    return data[key]


# groups

def group_from_json(data, cap: int | None = None) -> FiniteGroup:
    from .suite import group_from_cycles
    if isinstance(data, dict) and "generators" in data:
        gens = data["generators"]
        if not isinstance(gens, list):
            raise InputError("generators must be a list of cycle lists")
        return group_from_cycles(gens, data.get("degree"), cap)
    if isinstance(data, dict) and "table" in data:
        return FiniteGroup(data["table"], int(data.get("identity", 0)), data.get("labels"))
    raise InputError("group JSON needs 'generators' or 'table'")


def subgroup_from_json(G: FiniteGroup, data) -> Subgroup:
    if isinstance(data, dict) and "elements" in data:
        return Subgroup(G, data["elements"])
    if isinstance(data, dict) and "generators" in data:
        if G.perms is None:
            raise InputError("subgroup generators need a permutation group")
        degree = len(G.perms[0])
        return G.generated_subgroup(G.element_of_perm(perm_from_cycles(c, degree))
                                    for c in data["generators"])
    raise InputError("subgroup JSON needs 'elements' or 'generators'")


def transversal_from_json(H: Subgroup, data) -> Transversal:
    return Transversal(H, _require(data, "reps"))


def transversal_to_json(t: Transversal) -> dict:
    return {"reps": list(t.reps)}


# categories and functors

def category_to_json(c: FiniteCategory) -> dict:
    return {
        "objects": c.n_objects,
        "morphisms": [{"dom": int(d), "cod": int(k)} for d, k in zip(c.dom, c.cod)],
        "compose": [[int(v) if v >= 0 else None for v in row] for row in c.table],
        "identities": [int(i) for i in c.identities],
        "object_labels": [str(o) for o in c.objects],
        "morphism_labels": [str(m) for m in c.morphisms],
    }


def category_from_json(data) -> FiniteCategory:
    try:
        n = int(_require(data, "objects"))
        mors = _require(data, "morphisms")
        dom = [int(m["dom"]) for m in mors]
        cod = [int(m["cod"]) for m in mors]
        table = [[-1 if v is None else int(v) for v in row] for row in _require(data, "compose")]
        idents = [int(i) for i in _require(data, "identities")]
    except (TypeError, KeyError, ValueError) as exc:
        raise InputError(f"malformed category: {exc}") from None
    m = len(mors)
    if len(table) != m or any(len(row) != m for row in table):
        raise InputError("compose table must be square in the number of morphisms")
    objects = data.get("object_labels") or list(range(n))
    labels = data.get("morphism_labels") or list(range(m))
    c = FiniteCategory(objects, dom, cod, idents, table if m else [], labels)
    problem = c.audit()
    if problem:
        raise InputError(f"not a category: {problem}")
    return c


def functor_to_json(F: CatFunctor) -> dict:
    return {"ob_map": list(F.ob_map), "mor_map": list(F.mor_map)}


def functor_from_json(data, source: FiniteCategory, target: FiniteCategory) -> CatFunctor:
    return CatFunctor(source, target, _require(data, "ob_map"), _require(data, "mor_map"))


def indexing_to_json(P: IndexingFunctor) -> dict:
    return {"n": P.n, "on_objects": [list(s) for s in P.on_objects],
            "on_morphisms": [list(s) for s in P.on_morphisms]}


def indexing_from_json(data, J: FiniteCategory, I: FiniteCategory) -> IndexingFunctor:
    obs = _require(data, "on_objects")
    n = int(data.get("n", len(obs[0]) if obs else 0))
    return IndexingFunctor(J, I, n, obs, _require(data, "on_morphisms"))


def finset_diagram_from_json(data) -> FinSetIsoDiagram:
    J = category_from_json(_require(data, "J"))
    sets = [list(range(s)) if isinstance(s, int) else list(s)
            for s in _require(data, "on_objects")]
    return FinSetIsoDiagram(J, sets, _require(data, "on_morphisms"))


def cat_diagram_from_json(data) -> CatValuedDiagram:
    J = category_from_json(_require(data, "J"))
    cats = [category_from_json(c) for c in _require(data, "on_objects")]
    funcs = []
    for f, fd in enumerate(_require(data, "on_morphisms")):
        funcs.append(functor_from_json(fd, cats[J.dom[f]], cats[J.cod[f]]))
    return CatValuedDiagram(J, tuple(cats), tuple(funcs))


# diagrams

def diagram_to_json(X: Diagram) -> dict:
    C = X.instance
    return {"instance": C.name, "on_objects": list(X.objects),
            "on_morphisms": [C.morphism_to_json(v) for v in X.morphisms]}


def diagram_from_json(data, shape: FiniteCategory, instance: MonoidalInstance | None = None) -> Diagram:
    C = instance if instance is not None else get_instance(_require(data, "instance"))
    if data.get("instance", C.name) != C.name:
        raise InputError(f"diagram is for instance {data['instance']!r}, not {C.name!r}")
    obs = [int(o) for o in _require(data, "on_objects")]
    mors = _require(data, "on_morphisms")
    if len(obs) != shape.n_objects or len(mors) != shape.n_morphisms:
        raise InputError("diagram does not match the shape category")
    try:
        vals = [C.morphism_from_json(v, obs[shape.dom[f]], obs[shape.cod[f]])
                for f, v in enumerate(mors)]
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad morphism value: {exc}") from None
    X = Diagram(shape, C, obs, vals)
    problem = X.audit()
    if problem:
        raise InputError(f"diagram is not a functor: {problem}")
    return X

