"""Builtin (G, H) pairs and seeded inputs for the verification suite."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fincat import FiniteCategory
from .groups import FiniteGroup, Subgroup, group_from_permutations, perm_from_cycles
from .monoidal import Diagram, MonoidalInstance
from .sampling import random_diagram

# groups as permutation generators (1-based cycles) with subgroup generators
SUITE_DATA = {
    "C2/e": {"degree": 2, "generators": [[[1, 2]]], "subgroup": []},
    "C4/C2": {"degree": 4, "generators": [[[1, 2, 3, 4]]], "subgroup": [[[1, 3], [2, 4]]]},
    "S3/C2": {"degree": 3, "generators": [[[1, 2]], [[1, 2, 3]]], "subgroup": [[[1, 2]]]},
    "S3/C3": {"degree": 3, "generators": [[[1, 2]], [[1, 2, 3]]], "subgroup": [[[1, 2, 3]]]},
    "D4/Z": {"degree": 4, "generators": [[[1, 2, 3, 4]], [[1, 3]]],
             "subgroup": [[[1, 3], [2, 4]]]},
    # regular representation of Q8: i and j
    "Q8/C4": {"degree": 8, "generators": [[[1, 2, 3, 4], [5, 6, 7, 8]],
                                          [[1, 5, 3, 7], [2, 8, 4, 6]]],
              "subgroup": [[[1, 2, 3, 4], [5, 6, 7, 8]]]},
}

SUITE_INSTANCES = ("matrix_f2", "matrix_f3", "pointed_set")


@dataclass
class SuiteCase:
    name: str
    G: FiniteGroup
    H: Subgroup


def group_from_cycles(generators, degree: int | None = None, cap: int | None = None) -> FiniteGroup:
    if degree is None:
        degree = max([max(c) for gen in generators for c in gen if c] + [1])
    perms = [perm_from_cycles(g, degree) for g in generators]
    if cap is None:
        return group_from_permutations(perms)
    return group_from_permutations(perms, cap=cap)


def subgroup_from_cycles(G: FiniteGroup, generators) -> Subgroup:
    degree = len(G.perms[0])
    return G.generated_subgroup(G.element_of_perm(perm_from_cycles(g, degree))
                                for g in generators)


def suite_case(name: str) -> SuiteCase:
    d = SUITE_DATA[name]
    G = group_from_cycles(d["generators"], d["degree"])
    return SuiteCase(name, G, subgroup_from_cycles(G, d["subgroup"]))


def suite_cases() -> list[SuiteCase]:
    return [suite_case(name) for name in SUITE_DATA]


def seeded_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng([seed, *key])


def seeded_diagram(shape: FiniteCategory, instance: MonoidalInstance, seed: int,
                   *key: int, sizes=(1, 2)) -> Diagram:
    return random_diagram(shape, instance, seeded_rng(seed, *key), sizes)


def detecting_diagram(H: Subgroup, instance: MonoidalInstance) -> Diagram:
    """A faithful H-diagram of size at least 2: H permutes the first |H|
    basis vectors (or non-basepoint elements) by left multiplication."""
    from .fincat import one_object_category
    from .monoidal import MatrixInstance, PointedMap
    hg = H.as_group()
    size = max(2, hg.order)
    shape = one_object_category(hg)
    mors = []
    for h in range(hg.order):
        img = list(range(size))
        for k in range(hg.order):
            img[k] = hg.m(h, k)
        if isinstance(instance, MatrixInstance):
            m = np.zeros((size, size), dtype=np.int64)
            m[img, np.arange(size)] = 1
            mors.append(instance.matrix(m))
        else:
            mors.append(PointedMap(size + 1, (0,) + tuple(v + 1 for v in img)))
    obj = size if isinstance(instance, MatrixInstance) else size + 1
    return Diagram(shape, instance, [obj], mors)
