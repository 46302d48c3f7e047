import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normmaps.groups import (GroupError, SizeError, Subgroup, Transversal, WreathElement,
                             WreathGroup, alpha, cosets, cyclic_group, group_from_permutations,
                             perm_compose, perm_inverse, symmetric_group, transversal,
                             wreath_mul)
from normmaps.suite import SUITE_DATA, suite_case

from conftest import all_pairs, brute_closure, cyc


def test_composition_is_right_to_left():
    a, b = cyc([[1, 2]], 3), cyc([[2, 3]], 3)
    # (a*b)(x) = a(b(x)): 1 -> 1 -> 2, 2 -> 3 -> 3, 3 -> 2 -> 1
    ab = perm_compose(a, b)
    assert ab == tuple(a[b[x]] for x in range(3))
    assert ab == cyc([[1, 2, 3]], 3)


@pytest.mark.parametrize("gens,degree,order", [
    ([[[1, 2]]], 2, 2),
    ([[[1, 2]], [[1, 2, 3]]], 3, 6),
    ([[[1, 2, 3, 4]], [[1, 3]]], 4, 8),
])
def test_closure_orders(gens, degree, order):
    perms = [cyc(g, degree) for g in gens]
    G = group_from_permutations(perms)
    assert G.order == order
    assert set(G.perms) == brute_closure(perms, degree)
    assert G.perms[G.identity] == tuple(range(degree))


def test_closure_cap():
    with pytest.raises(SizeError):
        group_from_permutations([cyc([[1, 2]], 5), cyc([[1, 2, 3, 4, 5]], 5)], cap=100)


@pytest.mark.parametrize("name", list(SUITE_DATA))
def test_suite_groups_are_groups(name):
    case = suite_case(name)
    G = case.G
    assert G.is_associative()
    for a, b in all_pairs(G.order):
        assert G.perms[G.m(a, b)] == perm_compose(G.perms[a], G.perms[b])
    for a in range(G.order):
        assert G.perms[G.inverse(a)] == perm_inverse(G.perms[a])
    assert G.order % case.H.order == 0


def test_suite_orders():
    orders = {name: (suite_case(name).G.order, suite_case(name).H.order) for name in SUITE_DATA}
    assert orders == {"C2/e": (2, 1), "C4/C2": (4, 2), "S3/C2": (6, 2), "S3/C3": (6, 3),
                      "D4/Z": (8, 2), "Q8/C4": (8, 4)}


def test_q8_is_quaternion():
    G = suite_case("Q8/C4").G
    squares = {G.m(a, a) for a in range(G.order)}
    # one element of order 2, which is every non-identity square
    assert squares == {G.identity, next(a for a in range(G.order)
                                        if a != G.identity and G.m(a, a) == G.identity)}


def test_d4_subgroup_is_center():
    case = suite_case("D4/Z")
    G = case.G
    center = [z for z in range(G.order) if all(G.m(z, g) == G.m(g, z) for g in range(G.order))]
    assert list(case.H.elements) == center


def test_bad_tables_rejected():
    with pytest.raises(GroupError):
        from normmaps.groups import FiniteGroup
        FiniteGroup([[0, 1], [1, 1]])
    with pytest.raises(GroupError):
        from normmaps.groups import FiniteGroup
        FiniteGroup([[1, 0], [0, 1]], identity=0)


def test_cosets_examples(s3, s3_c2):
    c2 = cyclic_group(2)
    assert cosets(c2, c2.trivial_subgroup()) == [(0,), (1,)]
    G, H = s3_c2
    cs = cosets(G, H)
    # oracle: distinct sets {g h}
    oracle = {frozenset(G.m(g, h) for h in H.elements) for g in range(G.order)}
    assert {frozenset(c) for c in cs} == oracle
    assert len(cs) == 3 and all(len(c) == 2 for c in cs)
    assert cosets(G, G.whole()) == [tuple(range(G.order))]


def test_transversal_examples(s3_c2):
    c2 = cyclic_group(2)
    assert transversal(c2, c2.trivial_subgroup()).reps == (0, 1)
    G, H = s3_c2
    t = transversal(G, H)
    assert t.n == 3 and t.reps[0] == G.identity
    e, c123, c13 = (G.element_of_perm(cyc(x, 3)) for x in ([], [[1, 2, 3]], [[1, 3]]))
    with pytest.raises(GroupError, match="same coset"):
        transversal(G, H, [e, c123, c13])


def test_transversal_rejects_bad_first_and_count(s3_c2):
    G, H = s3_c2
    t = transversal(G, H)
    with pytest.raises(GroupError):
        Transversal(H, t.reps[1:] + t.reps[:1])
    with pytest.raises(GroupError):
        Transversal(H, t.reps[:2])


def _alpha_oracle(G, t, g):
    """Solve g t_i = t_j h by trying every j and h."""
    out_s, out_h = [], []
    for ti in t.reps:
        sols = [(j, h) for j, tj in enumerate(t.reps) for h in t.subgroup.elements
                if G.m(g, ti) == G.m(tj, h)]
        assert len(sols) == 1
        out_s.append(sols[0][0])
        out_h.append(sols[0][1])
    return WreathElement(tuple(out_s), tuple(out_h))


def test_alpha_s3_example(s3_c2):
    G, H = s3_c2
    el = lambda c: G.element_of_perm(cyc(c, 3))
    t = Transversal(H, [el([]), el([[1, 2, 3]]), el([[1, 3, 2]])])
    a = alpha(el([[1, 2]]), t)
    assert a == _alpha_oracle(G, t, el([[1, 2]]))
    assert a.sigma == cyc([[2, 3]], 3)
    assert a.hs == (el([[1, 2]]),) * 3


def test_alpha_identity_and_subgroup(s3_c2):
    G, H = s3_c2
    t = transversal(G, H)
    assert alpha(G.identity, t) == WreathElement((0, 1, 2), (G.identity,) * 3)
    for h in H.elements:
        a = alpha(h, t)
        assert a.sigma[0] == 0 and a.hs[0] == h


@pytest.mark.parametrize("name", list(SUITE_DATA))
def test_alpha_homomorphism_and_cocycle(name):
    case = suite_case(name)
    G = case.G
    for t in (transversal(G, case.H),):
        al = [alpha(g, t) for g in range(G.order)]
        for g in range(G.order):
            assert al[g] == _alpha_oracle(G, t, g)
        for gam, g in all_pairs(G.order):
            prod = G.m(gam, g)
            assert wreath_mul(al[gam], al[g], G) == al[prod]
            assert al[prod].sigma == perm_compose(al[gam].sigma, al[g].sigma)
            for i in range(t.n):
                assert al[prod].hs[i] == G.m(al[gam].hs[al[g].sigma[i]], al[g].hs[i])


def test_wreath_mul_examples():
    c2 = cyclic_group(2)
    H = c2.whole()
    e, g = 0, 1
    ident = WreathElement((0, 1), (e, e))
    assert wreath_mul(ident, ident, c2) == ident
    for a, b, c, d in itertools.product(range(2), repeat=4):
        lhs = wreath_mul(WreathElement((1, 0), (a, b)), WreathElement((1, 0), (c, d)), c2)
        assert lhs == WreathElement((0, 1), (c2.m(b, c), c2.m(a, d)))
    assert g in H


def _wreath_as_perms(n, H):
    """Sigma_n wr H acting on n x |H| points: (s; h)(i, x) = (s(i), h_i x)."""
    G = H.parent
    hl = list(H.elements)
    k = len(hl)
    out = {}
    for s in itertools.permutations(range(n)):
        for hs in itertools.product(hl, repeat=n):
            img = [0] * (n * k)
            for i in range(n):
                for xi, x in enumerate(hl):
                    img[i * k + xi] = s[i] * k + hl.index(G.m(hs[i], x))
            out[WreathElement(s, hs)] = tuple(img)
    return out


@pytest.mark.parametrize("n,hord", [(2, 1), (2, 2), (3, 2), (2, 3)])
def test_wreath_group_matches_permutation_model(n, hord):
    c = cyclic_group(hord)
    H = c.whole()
    W = WreathGroup(n, H)
    assert W.order == math.factorial(n) * hord ** n
    assert W.is_associative()
    model = _wreath_as_perms(n, H)
    rev = {p: w for w, p in model.items()}
    for a, b in all_pairs(W.order):
        wa, wb = W.element(a), W.element(b)
        prod = W.element(W.m(a, b))
        assert prod == wreath_mul(wa, wb, c)
        assert rev[perm_compose(model[wa], model[wb])] == prod
    assert W.element(W.identity) == WreathElement(tuple(range(n)), (0,) * n)


def test_wreath_cap():
    with pytest.raises(SizeError):
        WreathGroup(4, cyclic_group(3).whole(), cap=100)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_alpha_random_transversal(data):
    name = data.draw(st.sampled_from(list(SUITE_DATA)))
    case = suite_case(name)
    G, H = case.G, case.H
    cs = cosets(G, H)
    k = next(i for i, c in enumerate(cs) if G.identity in c)
    others = [c for i, c in enumerate(cs) if i != k]
    order = data.draw(st.permutations(range(len(others))))
    reps = [G.identity] + [data.draw(st.sampled_from(others[j])) for j in order]
    t = Transversal(H, reps)
    g = data.draw(st.integers(0, G.order - 1))
    a = alpha(g, t)
    for i in range(t.n):
        assert G.m(g, reps[i]) == G.m(reps[a.sigma[i]], a.hs[i])
        assert a.hs[i] in H


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5), st.data())
def test_subgroup_of_symmetric_group(n, data):
    G = symmetric_group(n)
    gens = data.draw(st.lists(st.integers(0, G.order - 1), max_size=2))
    H = G.generated_subgroup(gens)
    assert isinstance(H, Subgroup)
    assert G.order % H.order == 0
    assert sum(len(c) for c in cosets(G, H)) == G.order
    hg = H.as_group()
    assert hg.is_associative()
    assert all(H.elements[hg.m(a, b)] == G.m(H.elements[a], H.elements[b])
               for a, b in all_pairs(H.order))
