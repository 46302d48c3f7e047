"""Exact equivariant norm maps over finite symmetric monoidal categories.

Two constructions of the norm ``N_H^G`` from H-diagrams to G-diagrams are
implemented (pull back along ``kappa`` then tensor over the fibers of the
coset covering, or smash n times then restrict along ``alpha``) together
with a checker showing that they agree on the nose.
"""
from .cover import (CatValuedDiagram, CoveringCategory, CoveringError, CoveringReport,
                    FinSetIsoDiagram, IndexingFunctor, covering_to_P, functor_category,
                    grothendieck_cat, grothendieck_set, is_covering_category,
                    non_covering_witness, sections, wreath_P)
from .fincat import (CatFunctor, CategoryError, FiniteCategory, beta, check_triangle, kappa,
                     one_object_category, translation_groupoid)
from .groups import (FiniteGroup, GroupError, SizeError, Subgroup, Transversal, WreathGroup,
                     alpha, cyclic_group, symmetric_group, transversal, wreath_mul)
from .monoidal import (Diagram, DiagramMorphism, MatrixInstance, PointedSetInstance,
                       general_indexed_tensor, get_instance, indexed_tensor_covering,
                       map_indexed_tensor, n_smash, pullback)
from .norms import (NormContext, TheoremReport, corrupt, find_natural_isomorphism, gm_norm,
                    hhr_norm, verify_theorem)

__version__ = "0.1.0"

__all__ = [
    "CatFunctor", "CatValuedDiagram", "CategoryError", "CoveringCategory", "CoveringError",
    "CoveringReport", "Diagram", "DiagramMorphism", "FinSetIsoDiagram", "FiniteCategory",
    "FiniteGroup", "GroupError", "IndexingFunctor", "MatrixInstance", "NormContext",
    "PointedSetInstance", "SizeError", "Subgroup", "TheoremReport", "Transversal",
    "WreathGroup", "alpha", "beta", "check_triangle", "corrupt", "covering_to_P",
    "cyclic_group", "find_natural_isomorphism", "functor_category", "general_indexed_tensor",
    "get_instance", "gm_norm", "grothendieck_cat", "grothendieck_set", "hhr_norm",
    "indexed_tensor_covering", "is_covering_category", "kappa", "map_indexed_tensor",
    "n_smash", "non_covering_witness", "one_object_category", "pullback", "sections",
    "symmetric_group", "translation_groupoid", "transversal", "verify_theorem", "wreath_P",
    "wreath_mul",
]
