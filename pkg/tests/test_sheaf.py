import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import STRONG, model
from p1k import sheaf as sh
from p1k.errors import NotChainMap, RangeViolation, ShapeMismatch
from p1k.sheaf import O, ChainMap, SheafComplex, SheafMorphism


def _t(m, n):
    return m.basis_element(n, 0)


def _hom_dim_oracle(m, src, tgt, reach=6):
    """Count basis elements x of R_n, n in a wide window, whose left
    multiplication sends R_{<=k} into R_{<=k'} and R_{>=-l} into R_{>=-l'},
    tested on actual products with every basis element nearby."""
    (k, l), (k2, l2) = src, tgt
    total = 0
    for n in range(-2 * reach, 2 * reach + 1):
        for x in m.component_elements(n):
            ok = True
            for deg in list(range(k - reach, k + 1)) + list(range(-l, -l + reach + 1)):
                for y in m.component_elements(deg):
                    p = x * y
                    if p.is_zero():
                        continue
                    if deg <= k and p.hi > k2:
                        ok = False
                    if deg >= -l and p.lo < -l2:
                        ok = False
            total += ok
    return total


@pytest.mark.parametrize("name", STRONG)
@pytest.mark.parametrize("src,tgt", [((0, 0), (1, 0)), ((0, 0), (-1, 0)), ((1, -1), (2, 1)), ((2, 2), (0, 1)), ((-1, 1), (0, 2))])
def test_hom_basis_against_oracle(name, src, tgt):
    m = model(name)
    assert len(sh.hom_basis(m, src, tgt)) == _hom_dim_oracle(m, src, tgt)


def test_hom_basis_examples(laurent, board):
    assert [r.element for r in sh.hom_basis(laurent, (0, 0), (1, 0))] == [laurent.unit, _t(laurent, 1)]
    assert sh.hom_basis(board, (0, 0), (-1, 0)) == []
    assert len(sh.hom_basis(board, (0, 0), (1, 0))) == 9


def test_compose_monomials(laurent):
    t = _t(laurent, 1)
    f = SheafMorphism(laurent, O(0, 0), O(1, 0), [[t]])
    g = SheafMorphism(laurent, O(1, 0), O(2, 0), [[t]])
    assert sh.compose(g, f) == SheafMorphism(laurent, O(0, 0), O(2, 0), [[_t(laurent, 2)]])


def test_compose_errors(laurent):
    t = _t(laurent, 1)
    f = SheafMorphism(laurent, O(0, 0), O(1, 0), [[t]])
    with pytest.raises(ShapeMismatch):
        sh.compose(f, f)
    bad = SheafMorphism(laurent, O(1, 0), O(2, 0), [[_t(laurent, 2)]])
    with pytest.raises(RangeViolation):
        sh.compose(bad, f)


def test_shape_mismatch(laurent):
    with pytest.raises(ShapeMismatch):
        SheafMorphism(laurent, O(0, 0), O(1, 0) + O(0, 0), [[laurent.unit]])


def test_twist_of_morphism(laurent):
    t = _t(laurent, 1)
    f = SheafMorphism(laurent, O(0, 0), O(1, 0), [[t]])
    assert sh.twist(f, 1, 0) == SheafMorphism(laurent, O(1, 0), O(2, 0), [[t]])
    assert sh.twist(O(2, -1) + O(0, 0), 1, 1) == O(3, 0) + O(1, 1)


def test_validate_range(laurent):
    f = SheafMorphism(laurent, O(0, 0), O(1, 0), [[_t(laurent, 2)]])
    rep = sh.validate(f)
    assert not rep and "degree 2 outside [0,1]" in rep.problems[0]


def test_validate_catches_dd(laurent):
    one = laurent.unit
    cx = SheafComplex(
        laurent,
        {2: O(0, 0), 1: O(0, 0), 0: O(0, 0)},
        {2: SheafMorphism(laurent, O(0, 0), O(0, 0), [[one]]), 1: SheafMorphism(laurent, O(0, 0), O(0, 0), [[one]])},
    )
    assert sh.validate(cx).problems == ["d_1 o d_2 != 0"]


def test_cone_examples(laurent):
    one, t = laurent.unit, _t(laurent, 1)
    C = sh.cone(SheafMorphism.identity(laurent, O(0, 0)))
    assert C.levels == {0: O(0, 0), 1: O(0, 0)}
    assert C.d(1).entries == ((one,),)
    Y = SheafComplex(laurent, {0: O(1, 2), 1: O(0, 0)}, {1: SheafMorphism(laurent, O(0, 0), O(1, 2), [[t]])})
    zero_map = ChainMap(SheafComplex(laurent, {}), Y, {})
    assert sh.cone(zero_map) == Y
    C = sh.cone(SheafMorphism(laurent, O(0, 0), O(1, 0), [[t]]))
    assert C.levels == {0: O(1, 0), 1: O(0, 0)} and C.d(1).entries == ((t,),)


def test_cone_rejects_non_chain_map(laurent):
    one = laurent.unit
    X = SheafComplex(laurent, {0: O(0, 0), 1: O(0, 0)}, {1: SheafMorphism(laurent, O(0, 0), O(0, 0), [[one]])})
    f = ChainMap(X, X, {0: SheafMorphism.identity(laurent, O(0, 0))})
    with pytest.raises(NotChainMap):
        sh.cone(f)


def test_psi_identity_is_cone_of_identity(laurent):
    one = laurent.unit
    C = sh.R0FreeComplex(laurent, {0: 1, 1: 1}, {1: [[one]]})
    assert sh.psi(0, 0, C) == sh.cone(SheafMorphism.identity(laurent, O(0, 0)))
    assert sh.psi(-1, 0, sh.R0FreeComplex.free(laurent, 2)).level(0) == O(-1, 0) + O(-1, 0)


def test_psi_rejects_positive_degree_entries(laurent):
    C = sh.R0FreeComplex(laurent, {0: 1, 1: 1}, {1: [[_t(laurent, 1)]]})
    with pytest.raises(ShapeMismatch):
        sh.psi(0, 0, C)


@pytest.mark.parametrize("name", STRONG)
@pytest.mark.parametrize("k,l", [(0, 0), (1, -1), (-2, 1), (3, 3)])
def test_cartesian_exact(name, k, l):
    cx, exact = sh.cartesian_sequence(model(name), k, l)
    assert exact and sh.validate(cx)


def test_cartesian_exact_without_strong_grading():
    # degreewise the sequence only sees filtration pieces of R, so k[t] is fine too
    poly = model("polynomial")
    for k in range(-2, 3):
        for l in range(-2, 3):
            assert sh.cartesian_sequence(poly, k, l)[1]


def test_random_complex_deterministic(board):
    a = sh.random_complex(board, 2, seed=11)
    b = sh.random_complex(board, 2, seed=11)
    assert a == b
    assert sh.validate(a)
    single = sh.random_complex(board, 0, seed=3)
    assert list(single.levels) == [0] and not single.differentials


def test_random_complex_vect0(laurent):
    for s in range(10):
        assert sh.random_complex(laurent, 2, seed=s, vect0=True).is_vect0()


@pytest.mark.parametrize("name", STRONG)
def test_random_isomorphism_is_chain_map(name):
    m = model(name)
    rng = np.random.default_rng(4)
    C = sh.random_complex(m, 1, seed=4)
    phi = sh.random_isomorphism(m, C, rng)
    phi.check()
    assert phi.source == C and sh.validate(phi.target)


def test_shift_signs(laurent):
    f = SheafMorphism(laurent, O(0, 0), O(1, 0), [[_t(laurent, 1)]])
    C = SheafComplex.from_morphism(f)
    S = C.shift(1)
    assert S.levels == {1: O(1, 0), 2: O(0, 0)}
    assert S.d(2) == -f
    assert C.shift(2).d(3) == f


# --- properties -------------------------------------------------------------------------


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(STRONG), st.integers(0, 10**6), st.integers(-2, 2), st.integers(-2, 2))
def test_twist_preserves_validity(name, seed, a, b):
    C = sh.random_complex(model(name), 2, seed=seed)
    T = C.twist(a, b)
    assert sh.validate(T)
    assert T.twist(-a, -b) == C


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(STRONG), st.integers(0, 10**6))
def test_cone_of_random_map_is_complex(name, seed):
    m = model(name)
    rng = np.random.default_rng(seed)
    A = sh.random_twist_sum(m, rng, 2, (-2, 2))
    B = sh.random_twist_sum(m, rng, 2, (-2, 2))
    f = sh.random_morphism(m, A, B, rng)
    assert f.is_valid()
    C = sh.cone(f)
    assert sh.validate(C) and C.levels[0] == B and C.levels[1] == A


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(STRONG), st.integers(0, 10**6))
def test_composition_associative(name, seed):
    m = model(name)
    rng = np.random.default_rng(seed)
    X = [sh.random_twist_sum(m, rng, 2, (-2, 2)) for _ in range(4)]
    f, g, h = (sh.random_morphism(m, X[i], X[i + 1], rng) for i in range(3))
    assert sh.compose(h, sh.compose(g, f)) == sh.compose(sh.compose(h, g), f)
