import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normmaps.cover import (CatValuedDiagram, CoveringCategory, CoveringError, FinSetIsoDiagram,
                            IndexingFunctor, covering_to_P, discrete_cat_diagram,
                            fat_diagonal_quotient, functor_category, grothendieck_cat,
                            grothendieck_set, is_covering_category, non_covering_witness,
                            sections, wreath_P)
from normmaps.fincat import (CatFunctor, coset_groupoid, discrete_category, one_object_category,
                             poset_category, product_category, projection, symmetric_groupoid,
                             terminal_category, to_terminal, translation_groupoid,
                             wreath_base_category)
from normmaps.groups import (GroupError, WreathGroup, cyclic_group, symmetric_group, transversal,
                             wreath_mul)
from normmaps.monoidal import get_instance
from normmaps.sampling import random_finset_diagram
from normmaps.sections_check import InstanceCategory, power_diagram, verify_sections_claim

C2_CAT = one_object_category(cyclic_group(2))
SWAP_P = FinSetIsoDiagram(C2_CAT, [[0, 1]], [[0, 1], [1, 0]])


def _relabel_equal(a, b, ob, mor):
    """``ob``/``mor`` map indices of ``a`` to ``b`` and respect all structure."""
    if sorted(ob) != list(range(b.n_objects)) or sorted(mor) != list(range(b.n_morphisms)):
        return False
    for f in range(a.n_morphisms):
        if ob[a.dom[f]] != b.dom[mor[f]] or ob[a.cod[f]] != b.cod[mor[f]]:
            return False
    return all(mor[a.table[g, f]] == b.table[mor[g], mor[f]]
               for g, f in a.composable_pairs().tolist())


def _coset_projection(G, H):
    t = transversal(G, H)
    bg = coset_groupoid(t)
    return CatFunctor(bg, one_object_category(G), [0] * bg.n_objects,
                      [bg.parts(f)[0] for f in range(bg.n_morphisms)])


def test_covering_examples(s3_c2):
    G, H = s3_c2
    rep = is_covering_category(_coset_projection(G, H))
    assert rep.ok and rep.n == 3
    base = wreath_base_category(2, cyclic_group(2).whole())
    rep = is_covering_category(projection(base, 1))
    assert not rep.ok and rep.kind == "non_discrete_fiber"
    c = poset_category(3)
    rep = is_covering_category(CatFunctor.identity(c))
    assert rep.ok and rep.n == 1


def test_covering_lift_failures():
    c = poset_category(2)
    # two objects over the point: the arrow between them sits over the identity
    assert is_covering_category(to_terminal(c)).kind == "non_discrete_fiber"
    # discrete 1-object category over the 2-chain misses a lift
    d = discrete_category(["a"])
    p = CatFunctor(d, c, [0], [c.identity(0)])
    assert is_covering_category(p).kind == "left_lift"


def test_empty_covering():
    empty = discrete_category([])
    rep = is_covering_category(to_terminal(empty))
    assert rep.ok and rep.n == 0


def test_covering_category_rejects():
    base = wreath_base_category(2, cyclic_group(2).whole())
    with pytest.raises(CoveringError):
        CoveringCategory(projection(base, 1))


def test_grothendieck_set_examples():
    J = poset_category(2)
    S = ["a", "b", "c"]
    const = FinSetIsoDiagram(J, [S, S], [[0, 1, 2]] * J.n_morphisms)
    c = grothendieck_set(const)
    assert c.total.n_objects == len(S) * J.n_objects
    star = FinSetIsoDiagram(terminal_category(), [[0, 1, 2]], [[0, 1, 2]])
    c = grothendieck_set(star)
    assert c.total == discrete_category([0, 1, 2])
    c = grothendieck_set(SWAP_P)
    b2 = symmetric_groupoid(2)
    # (f, x) at f*2 + x versus (g, x) at x*2 + g
    mor = [(m % 2) * 2 + m // 2 for m in range(4)]
    assert _relabel_equal(c.total, b2, [0, 1], mor)


def test_grothendieck_cat_examples():
    J = poset_category(2)
    C = one_object_category(symmetric_group(3))
    const = CatValuedDiagram(J, (C, C), tuple(CatFunctor.identity(C) for _ in range(3)))
    q = grothendieck_cat(const)
    prod = product_category(C, J)
    assert (q.source.n_objects, q.source.n_morphisms) == (prod.n_objects, prod.n_morphisms)
    # (f, i, h) -> (h, f) in C x J
    E = q.source
    ob = [prod.obj_pair(i % C.n_objects, i // C.n_objects) for i in range(E.n_objects)]
    mor = [prod.pair(C.morphism_index(h), J.morphism_index(f)) for f, _, h in E.morphisms]
    assert _relabel_equal(E, prod, ob, mor)

    star = terminal_category()
    trivial = CatValuedDiagram(J, (star, star), tuple(CatFunctor.identity(star) for _ in range(3)))
    q = grothendieck_cat(trivial)
    assert q.source == J


def test_grothendieck_cat_hand_count():
    J = poset_category(2)
    star = terminal_category()
    P = CatValuedDiagram(J, (star, C2_CAT),
                         (CatFunctor.identity(star), CatFunctor(star, C2_CAT, [0], [0]),
                          CatFunctor.identity(C2_CAT)))
    q = grothendieck_cat(P)
    # over id_0: 1, over 0 -> 1: |C2| = 2, over id_1: 2
    assert (q.source.n_objects, q.source.n_morphisms) == (2, 5)
    assert q.source.audit() is None and q.audit() is None


def test_set_and_cat_constructions_agree_on_discrete_fibers():
    rng = np.random.default_rng(5)
    for J in (C2_CAT, poset_category(3), symmetric_groupoid(2)):
        P = random_finset_diagram(J, rng)
        assert grothendieck_cat(discrete_cat_diagram(P)) == grothendieck_set(P).p


def test_sections_examples():
    J = C2_CAT
    C = poset_category(2)
    const = CatValuedDiagram(J, (C,), (CatFunctor.identity(C),) * 2)
    S = sections(grothendieck_cat(const))
    F = functor_category(J, C)
    assert S.n_objects == F.n_objects
    assert sorted(len(S.hom(a, b)) for a in range(S.n_objects) for b in range(S.n_objects)) == \
        sorted(len(F.hom(a, b)) for a in range(F.n_objects) for b in range(F.n_objects))
    ident = sections(CatFunctor.identity(poset_category(3)))
    assert ident.n_objects == 1


@pytest.mark.parametrize("objects", [[1, 2], [1, 2, 3]])
def test_sections_claim_pointed_sets(objects):
    ic = InstanceCategory.build(get_instance("pointed_set"), objects)
    rep = verify_sections_claim(SWAP_P, ic)
    assert rep.ok, rep.message
    assert rep.n_sections == rep.n_functors


def test_sections_claim_matrices_and_bigger_base():
    ic = InstanceCategory.build(get_instance("matrix_f2"), [1, 2])
    assert verify_sections_claim(SWAP_P, ic).ok
    P = FinSetIsoDiagram(symmetric_groupoid(2), [[0], [0]], [[0]] * 4)
    ic = InstanceCategory.build(get_instance("pointed_set"), [1, 2, 3])
    assert verify_sections_claim(P, ic).ok
    assert power_diagram(SWAP_P, ic.category).audit() is None


def test_fat_diagonal_quotient_examples():
    d = discrete_category(list(range(3)))
    q = fat_diagonal_quotient(d, 3)
    assert (q.n_objects, q.n_morphisms) == (1, 1)
    q = fat_diagonal_quotient(symmetric_groupoid(2), 2)
    assert q.n_objects == 1
    assert set(q.morphisms) == {(0, 2), (1, 3)}
    assert q.audit() is None
    b = symmetric_groupoid(3)
    q1 = fat_diagonal_quotient(b, 1)
    mor = [q1.morphism_index((m,)) for m in range(b.n_morphisms)]
    assert _relabel_equal(b, q1, [q1.object_index((x,)) for x in range(b.n_objects)], mor)


def test_covering_to_P_examples(s3_c2):
    G, H = s3_c2
    c = CoveringCategory(_coset_projection(G, H))
    P = covering_to_P(c)
    assert P.on_objects == ((0, 1, 2),)
    bg = c.total
    for g in range(G.order):
        assert P.on_morphisms[g] == tuple(bg.mor(g, x) for x in range(3))
    assert P.audit() is None
    J = poset_category(2)
    ident = covering_to_P(CoveringCategory(CatFunctor.identity(J)))
    assert ident.on_objects == ((0,), (1,))
    assert ident.on_morphisms == tuple((f,) for f in range(J.n_morphisms))
    with pytest.raises(CoveringError):
        covering_to_P(CoveringCategory(CatFunctor.identity(discrete_category([0, 1]))))


def test_round_trip_recovers_P():
    rng = np.random.default_rng(11)
    for J in (C2_CAT, poset_category(3), symmetric_groupoid(2),
              one_object_category(symmetric_group(3))):
        P = random_finset_diagram(J, rng)
        c = grothendieck_set(P)
        Q = covering_to_P(c)
        assert Q.audit() is None
        I = c.total
        for f in range(J.n_morphisms):
            for k, m in enumerate(Q.on_morphisms[f]):
                # the lift from the k-th point of P(dom f) ends at P(f)(k)
                dom_pos = Q.on_objects[J.dom[f]].index(int(I.dom[m]))
                cod_pos = Q.on_objects[J.cod[f]].index(int(I.cod[m]))
                assert dom_pos == k and cod_pos == P.maps[f][k]


def test_wreath_P_examples():
    c2 = cyclic_group(2)
    H = c2.whole()
    P1 = wreath_P(1, H)
    assert P1.J.n_morphisms == H.order and P1.audit() is None
    base = wreath_base_category(2, H)
    W = WreathGroup(2, H)
    P = wreath_P(2, H, W, base)
    sym = base.left
    swap = sym.group.element_of_perm((1, 0))
    for a, b in itertools.product(range(2), repeat=2):
        w = W.index_of(type(W.element(0))((1, 0), (a, b)))
        assert set(P.on_morphisms[w]) == {base.pair(sym.mor(swap, 0), a),
                                          base.pair(sym.mor(swap, 1), b)}


@pytest.mark.parametrize("n,hord", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_wreath_P_composites_exhaustive(n, hord):
    H = cyclic_group(hord).whole()
    W = WreathGroup(n, H)
    P = wreath_P(n, H, W)
    assert P.audit() is None
    for a, b in itertools.product(range(W.order), repeat=2):
        assert P.composite_mismatch(a, b) is None
        assert W.element(W.m(a, b)) == wreath_mul(W.element(a), W.element(b), H.parent)
    assert P.to_functor().audit() is None


def test_non_covering_witness_examples():
    H = cyclic_group(2).whole()
    w = non_covering_witness(2, H)
    W = WreathGroup(2, H)
    assert (W.element(w.first), W.element(w.second)) == (
        type(W.element(0))((0, 1), (0, 0)), type(W.element(0))((0, 1), (0, 1)))
    base = wreath_base_category(2, H)
    assert w.shared == base.pair(base.left.mor(base.left.group.identity, 0), 0)
    with pytest.raises(GroupError):
        non_covering_witness(2, cyclic_group(2).trivial_subgroup())
    w3 = non_covering_witness(3, H)
    assert w3.shared in set(w3.P.on_morphisms[w3.first]) & set(w3.P.on_morphisms[w3.second])


_SHAPES = [C2_CAT, poset_category(2), poset_category(3), symmetric_groupoid(2),
           one_object_category(cyclic_group(3)),
           translation_groupoid(cyclic_group(3), [[0, 1, 2], [1, 2, 0], [2, 0, 1]])]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(range(len(_SHAPES))), st.integers(0, 2 ** 32 - 1))
def test_grothendieck_set_is_always_a_covering(k, seed):
    J = _SHAPES[k]
    P = random_finset_diagram(J, np.random.default_rng(seed))
    assert P.audit() is None
    c = grothendieck_set(P)
    rep = is_covering_category(c.p)
    assert rep.ok
    if J.is_connected():
        assert rep.n == len(P.sets[0])
        assert covering_to_P(c).audit() is None


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 3), st.integers(0, 2 ** 32 - 1))
def test_indexing_audit_rejects_tampering(n, seed):
    H = cyclic_group(2).whole()
    P = wreath_P(n, H)
    rng = np.random.default_rng(seed)
    f = int(rng.integers(1, P.J.n_morphisms))
    mors = [list(s) for s in P.on_morphisms]
    other = int(rng.integers(P.J.n_morphisms))
    if set(mors[other]) == set(mors[f]):
        return
    mors[f] = mors[other]
    bad = IndexingFunctor(P.J, P.I, n, P.on_objects, mors)
    assert bad.audit() is not None
