import json

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from p1k import graded_ring as gr
from p1k.errors import SchemaError, WindowTooSmall


# --- multiplication ---------------------------------------------------------------


def test_laurent_monomials(laurent):
    t = lambda n: laurent.basis_element(n, 0)
    assert t(2) * t(3) == t(5)
    assert t(-4) * t(4) == laurent.unit


def test_checkerboard_matrix_units(board):
    a = board.matrix_unit(1, 3, 1)
    b = board.matrix_unit(3, 1, -1)
    assert a * b == board.matrix_unit(1, 1, 0)
    assert b * a == board.matrix_unit(3, 3, 0)
    assert (a * a).is_zero()


def _board_matrix(board, n, idx):
    """The basis element as an explicit 3x3 matrix over Q[t, 1/t]."""
    t = sympy.Symbol("t")
    i, j, s = board._basis(n)[idx]
    M = sympy.zeros(3, 3)
    M[i, j] = t**s
    return M


def test_checkerboard_against_matrix_oracle(board):
    for n in range(-3, 4):
        for m in range(-3, 4):
            T = board.mul_tensor(n, m)
            for a in range(board.dim(n)):
                for b in range(board.dim(m)):
                    expected = _board_matrix(board, n, a) * _board_matrix(board, m, b)
                    got = sympy.zeros(3, 3)
                    for c, coeff in enumerate(T[a, b]):
                        if coeff:
                            got += coeff * _board_matrix(board, n + m, c)
                    assert sympy.simplify(got - expected) == sympy.zeros(3, 3)


def test_checkerboard_dims(board):
    assert [board.dim(n) for n in range(-3, 4)] == [4, 5, 4, 5, 4, 5, 4]
    assert board.basis(1) == ["e13t", "e23t", "e31", "e32"]


# F_4 = F_2[w]/(w^2 + w + 1), elements as pairs (a, b) meaning a + b w
def _f4_mul(x, y):
    a, b = x
    c, d = y
    # (a + bw)(c + dw) = ac + (ad + bc) w + bd (w + 1)
    return ((a * c + b * d) % 2, (a * d + b * c + b * d) % 2)


def _f4_frob(x, times):
    for _ in range(times):
        x = _f4_mul(x, x)
    return x


def test_twisted_laurent_against_f4_oracle(tl4):
    basis = [(1, 0), (0, 1)]
    for n in range(-3, 4):
        for m in range(-3, 4):
            T = tl4.mul_tensor(n, m)
            for i in range(2):
                for j in range(2):
                    expected = _f4_mul(basis[i], _f4_frob(basis[j], n % 2))
                    assert tuple(int(v) for v in T[i, j]) == expected


def test_twisted_laurent_is_noncommutative(tl4):
    w = tl4.basis_element(0, 1)
    u = tl4.basis_element(1, 0)
    assert w * u != u * w


# --- strong grading --------------------------------------------------------------


def test_laurent_pou(laurent):
    pou = gr.partition_of_unity(laurent, 5)
    assert pou.pairs == ((laurent.basis_element(5, 0), laurent.basis_element(-5, 0)),)
    assert pou.verify()


def test_polynomial_has_no_negative_pou():
    assert gr.partition_of_unity(gr.polynomial(), -1) is None
    assert gr.is_strongly_graded(gr.polynomial()) == gr.Refutation(-1)


def test_checkerboard_pou(board):
    pou = gr.partition_of_unity(board, 1)
    assert pou.total() == board.unit
    assert all(lam.degrees == [1] and rho.degrees == [-1] for lam, rho in pou.pairs)
    cert = gr.is_strongly_graded(board)
    assert isinstance(cert, gr.Certificate) and cert.pou_neg.verify()


@pytest.mark.parametrize("k,l,expected", [(2, 3, True), (1, 1, True), (-1, 1, True)])
def test_component_product_strong(board, laurent, k, l, expected):
    assert gr.check_component_product(laurent, k, l) is expected
    assert gr.check_component_product(board, k, l) is expected


def test_component_product_polynomial():
    assert not gr.check_component_product(gr.polynomial(), 1, -1)
    assert gr.check_component_product(gr.polynomial(), 1, 2)


def test_projectivity_certificates(laurent, board):
    db = gr.projectivity_certificate(laurent, 3)
    assert db.generators == [laurent.basis_element(3, 0)]
    assert gr.projectivity_certificate(laurent, 0).pairs == ((laurent.unit, laurent.unit),)
    db = gr.projectivity_certificate(board, 1)
    assert len(db.pairs) >= 3 and db.verify()


def test_crossed_product_witnesses(laurent, tl4, board):
    w = gr.crossed_product_witness(laurent)
    assert w and w.unit * w.inverse == laurent.unit
    w = gr.crossed_product_witness(tl4)
    assert w and w.inverse * w.unit == tl4.unit
    w = gr.crossed_product_witness(board)
    assert w.kind == "nonexistence_by_dimension" and w.dims == (4, 5)


# --- ring specs ------------------------------------------------------------------


@pytest.mark.parametrize(
    "spec",
    [
        {"family": "laurent", "field": "Q"},
        {"family": "polynomial", "field": "Fp:5"},
        {"family": "twisted_laurent", "field": "Fp:2", "q": 4},
        {"family": "checkerboard", "field": "Q", "v": [0, 0, 1], "period": 2},
    ],
)
def test_spec_round_trip(spec):
    model = gr.model_from_spec(spec)
    assert model.to_spec() == spec
    assert gr.model_from_spec(model.to_spec()) is model


@pytest.mark.parametrize(
    "spec",
    [
        {"family": "moebius"},
        {"family": "laurent", "colour": "red"},
        {"family": "laurent", "field": "Fp:4"},
        {"family": "twisted_laurent", "field": "Q", "q": 4},
        [1, 2],
    ],
)
def test_bad_specs(spec):
    with pytest.raises(SchemaError):
        gr.model_from_spec(spec)


def test_load_ring(tmp_path):
    p = tmp_path / "r.json"
    p.write_text(json.dumps({"family": "checkerboard"}))
    assert gr.load_ring(p).dim(0) == 5
    p.write_text("{")
    with pytest.raises(SchemaError):
        gr.load_ring(p)


def _dual_numbers_spec():
    # k[e]/(e^2) in degree 0, k in degree 1, R_1 R_1 = 0; window [0, 1]
    return {
        "family": "table",
        "field": "Q",
        "window": [0, 1],
        "dims": {"0": 2, "1": 1},
        "mul": [
            [0, 0, 0, 0, [1, 0]], [0, 0, 0, 1, [0, 1]], [0, 1, 0, 0, [0, 1]],
            [0, 0, 1, 0, [1]], [1, 0, 0, 0, [1]],
        ],
        "unit": [1, 0],
    }


def test_table_model():
    model = gr.model_from_spec(_dual_numbers_spec())
    e = model.basis_element(0, 1)
    assert (e * e).is_zero()
    assert model.dim(1) == 1
    with pytest.raises(WindowTooSmall):
        model.dim(2)
    with pytest.raises(WindowTooSmall):
        gr.is_strongly_graded(model)
    assert gr.model_from_spec(model.to_spec()).to_spec() == model.to_spec()


def test_table_model_rejects_non_associative():
    spec = _dual_numbers_spec()
    spec["mul"][1] = [0, 0, 0, 1, [1, 1]]  # 1 * e = 1 + e breaks the unit law
    with pytest.raises(SchemaError):
        gr.model_from_spec(spec)


def test_table_model_rejects_bad_entry():
    spec = _dual_numbers_spec()
    spec["mul"].append([1, 0, 1, 0, [1]])
    with pytest.raises(SchemaError):
        gr.model_from_spec(spec)


# --- properties ----------------------------------------------------------------------


def _random_elt(model, rng, lo, hi):
    return model.element({n: model.field.random(rng, size=model.dim(n)) for n in range(lo, hi + 1)})


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["laurent", "twisted_laurent", "checkerboard"]), st.integers(0, 2**32 - 1))
def test_ring_axioms(name, seed):
    from conftest import model

    m = model(name)
    rng = np.random.default_rng(seed)
    x, y, z = (_random_elt(m, rng, -2, 2) for _ in range(3))
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert m.unit * x == x == x * m.unit


@settings(max_examples=30, deadline=None)
@given(st.integers(-4, 4), st.integers(0, 2**32 - 1))
def test_left_mult_matrix_matches_multiply(n, seed):
    board = gr.checkerboard()
    rng = np.random.default_rng(seed)
    a = _random_elt(board, rng, 1, 1)
    x = _random_elt(board, rng, n, n)
    L = gr.left_mult_matrix(a, 1, n)
    got = L.dot(x.component(n)) if x.support else np.zeros(board.dim(n + 1), dtype=object)
    assert (a * x).component(n + 1).tolist() == list(got)
