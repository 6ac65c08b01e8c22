import json

import numpy as np
import pytest

from multicomplex.core import Multicomplex, one, unit
from multicomplex.documents import (
    IDEMPOTENT,
    STANDARD,
    DocumentError,
    doc_to_ket,
    doc_to_matrix,
    doc_to_number,
    dumps,
    ket_to_doc,
    loads,
    matrix_to_doc,
    number_to_doc,
    render_complex,
    render_idempotent,
    render_standard,
)
from multicomplex.hilbert import Ket
from multicomplex.idempotent import IdempotentRep, epsilon, to_idempotent
from multicomplex.linalg import McMatrix
from oracles import dyadic_number, random_number


def test_number_document_shapes():
    doc = number_to_doc(unit(2, [2]), IDEMPOTENT)
    assert doc == {"n": 2, "rep": "idempotent", "coeffs": [[0.0, -1.0], [0.0, 1.0]]}
    assert number_to_doc(one(2))["coeffs"] == [1.0, 0.0, 0.0, 0.0]


@pytest.mark.parametrize("level", range(1, 7))
def test_dyadic_documents_roundtrip_bit_exactly(rng, level):
    for _ in range(20):
        x = dyadic_number(rng, level)
        reps = [STANDARD, IDEMPOTENT] if level >= 2 else [STANDARD]
        for rep in reps:
            text = dumps(number_to_doc(x, rep))
            assert doc_to_number(loads(text)) == x
            assert dumps(number_to_doc(doc_to_number(loads(text)), rep)) == text


def test_random_standard_documents_roundtrip_bit_exactly(rng):
    x = random_number(rng, 4)
    assert doc_to_number(loads(dumps(number_to_doc(x)))) == x


def test_matrix_and_ket_roundtrip(rng):
    slices = rng.integers(-4, 5, (4, 3, 3)) / 2 + 1j * rng.integers(-4, 5, (4, 3, 3)) / 4
    a = McMatrix(3, slices)
    for rep in (STANDARD, IDEMPOTENT):
        back = doc_to_matrix(loads(dumps(matrix_to_doc(a, rep))))
        assert np.array_equal(back.slices, a.slices)
    v = Ket(3, slices[:, :, 0])
    for rep in (STANDARD, IDEMPOTENT):
        assert np.array_equal(doc_to_ket(loads(dumps(ket_to_doc(v, rep)))).slices, v.slices)


def test_matrix_rows_may_be_nested():
    flat = {"n": 2, "m": 2, "rep": "standard",
            "entries": [[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0]]}
    nested = dict(flat, entries=[flat["entries"][:2], flat["entries"][2:]])
    assert np.array_equal(doc_to_matrix(flat).slices, doc_to_matrix(nested).slices)
    assert np.array_equal(doc_to_matrix(flat).slices, McMatrix.identity(2, 2).slices)


def test_dumps_format():
    assert dumps({"a": [0.0, -0.0, 1.0, 0.1, 3]}) == '{"a": [0, 0, 1, 0.10000000000000001, 3]}\n'
    with pytest.raises(DocumentError):
        dumps({"a": float("nan")})


@pytest.mark.parametrize("text", [
    '{"n": 2, "rep": "standard", "coeffs": [NaN, 0, 0, 0]}',
    '{"n": 2, "rep": "standard", "coeffs": [Infinity, 0, 0, 0]}',
    '{"n": 2, "rep": "standard", "coeffs": [1, 0, 0]}',
    '{"n": 2, "rep": "polar", "coeffs": [1, 0, 0, 0]}',
    '{"n": 2, "rep": "idempotent", "coeffs": [[1, 0], [1]]}',
    '{"n": 1, "rep": "idempotent", "coeffs": [[1, 0]]}',
    '{"n": 0, "rep": "standard", "coeffs": [1]}',
    '{"n": true, "rep": "standard", "coeffs": [1, 0]}',
    '{"rep": "standard", "coeffs": [1, 0]}',
    '{"n": 1, "rep": "standard", "coeffs": ["1", 0]}',
    '[1, 2]',
    '{"n": 1,',
])
def test_malformed_number_documents(text):
    with pytest.raises(DocumentError):
        doc_to_number(loads(text))


def test_malformed_matrix_documents():
    base = {"n": 2, "m": 2, "rep": "standard", "entries": [[1, 0, 0, 0]] * 3}
    with pytest.raises(DocumentError):
        doc_to_matrix(base)
    with pytest.raises(DocumentError):
        doc_to_matrix(dict(base, m=0))
    with pytest.raises(DocumentError):
        doc_to_ket(dict(base, m=2))


def test_rendering():
    assert render_standard(Multicomplex(2, [1, 2, 0, -1])) == "1 + 2·i1 - i1i2"
    assert render_standard(Multicomplex(2, [0, 0, 0, 0])) == "0"
    assert render_standard(Multicomplex(1, [-1 / 3, 0])) == "-0.333333"
    assert render_idempotent(IdempotentRep(2, [3, 4])) == "3·ε1 + 4·ε2"
    assert render_idempotent(IdempotentRep(2, [1j, 1 - 2j])) == "i1·ε1 + (1 - 2·i1)·ε2"
    assert render_idempotent(epsilon(3, 2)) == "ε3"
    assert render_complex(-1j) == "-i1"
    assert json.loads(dumps(number_to_doc(to_idempotent(one(2)), IDEMPOTENT)))["coeffs"] == [[1, 0], [1, 0]]
