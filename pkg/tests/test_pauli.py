import numpy as np
import pytest

from qblue.errors import DimensionCapError
from qblue.pauli import (
    PauliSum, format_pauli, identity_sum, is_hermitian_pauli, multiply_terms,
    parse_pauli, pauli_allclose, pauli_sum, pauli_to_matrix, simplify,
    single_letter,
)

import oracle


def test_single_letter_products():
    assert multiply_terms((1, "X"), (1, "Y")) == (1j, "Z")
    assert multiply_terms((1, "Y"), (1, "X")) == (-1j, "Z")
    assert multiply_terms((1, "Y"), (1, "Z")) == (1j, "X")
    assert multiply_terms((1, "Z"), (1, "X")) == (1j, "Y")
    assert multiply_terms((1, "X"), (1, "X")) == (1, "I")


def test_disjoint_support_product():
    assert multiply_terms((2, "XI"), (3, "IY")) == (6, "XY")


def test_product_matches_matrix_oracle():
    rng = np.random.default_rng(0)
    for _ in range(60):
        n = int(rng.integers(1, 5))
        s1 = "".join(rng.choice(list("IXYZ"), n))
        s2 = "".join(rng.choice(list("IXYZ"), n))
        c1 = complex(rng.normal(), rng.normal())
        c2 = complex(rng.normal(), rng.normal())
        c3, s3 = multiply_terms((c1, s1), (c2, s2))
        want = (c1 * oracle.pauli_string_matrix(s1)) @ \
               (c2 * oracle.pauli_string_matrix(s2))
        got = c3 * oracle.pauli_string_matrix(s3)
        assert oracle.max_norm(got, want) < 1e-12


def test_multiply_is_associative():
    rng = np.random.default_rng(1)
    for _ in range(40):
        terms = []
        for _ in range(3):
            s = "".join(rng.choice(list("IXYZ"), 3))
            terms.append((complex(rng.normal(), rng.normal()), s))
        a, b, c = terms
        left = multiply_terms(multiply_terms(a, b), c)
        right = multiply_terms(a, multiply_terms(b, c))
        assert left[1] == right[1]
        assert left[0] == pytest.approx(right[0])


def test_simplify_merges():
    p = pauli_sum(1, [(0.5, "X"), (0.5, "X")])
    assert p.terms == ((1.0 + 0j, "X"),)


def test_simplify_cancels_to_zero():
    p = pauli_sum(1, [(1.0, "X"), (-1.0, "X")])
    assert p.terms == ()


def test_simplify_is_idempotent_and_sorted():
    p = pauli_sum(2, [(1, "ZZ"), (2, "IX"), (1, "ZZ"), (0.5, "XI")])
    assert [s for _, s in p.terms] == ["IX", "XI", "ZZ"]
    assert pauli_allclose(simplify(p), p)


def test_hopping_expansion():
    # (X+iY)/2 (x) (X-iY)/2 plus the swapped product
    half = 0.5
    up = pauli_sum(1, [(half, "X"), (half * 1j, "Y")])
    dn = pauli_sum(1, [(half, "X"), (-half * 1j, "Y")])
    total = up.tensor(dn) + dn.tensor(up)
    assert pauli_allclose(total, pauli_sum(2, [(0.5, "XX"), (0.5, "YY")]))
    want = 0.5 * (np.kron(oracle.X, oracle.X) + np.kron(oracle.Y, oracle.Y))
    assert oracle.max_norm(pauli_to_matrix(total), want) < 1e-12


def test_is_hermitian_pauli():
    assert is_hermitian_pauli(pauli_sum(2, [(1.0, "XX")]))
    assert not is_hermitian_pauli(pauli_sum(1, [(1j, "X")]))


def test_hermiticity_criterion_matches_matrix():
    rng = np.random.default_rng(4)
    for _ in range(40):
        n = int(rng.integers(1, 4))
        terms = []
        for _ in range(int(rng.integers(1, 5))):
            s = "".join(rng.choice(list("IXYZ"), n))
            c = complex(rng.normal(), rng.normal() * rng.integers(0, 2))
            terms.append((c, s))
        p = pauli_sum(n, terms)
        m = pauli_to_matrix(p)
        assert is_hermitian_pauli(p) == (oracle.max_norm(m, m.conj().T) < 1e-12)


def test_pauli_to_matrix_values():
    assert oracle.max_norm(pauli_to_matrix(pauli_sum(1, [(1, "Z")])),
                           np.diag([1, -1])) == 0
    assert oracle.max_norm(pauli_to_matrix(identity_sum(2)), np.eye(4)) == 0


def test_pauli_to_matrix_respects_algebra():
    rng = np.random.default_rng(9)
    for _ in range(20):
        n = int(rng.integers(1, 4))
        t1 = [(complex(rng.normal()), "".join(rng.choice(list("IXYZ"), n)))
              for _ in range(2)]
        t2 = [(complex(rng.normal()), "".join(rng.choice(list("IXYZ"), n)))
              for _ in range(2)]
        p1, p2 = pauli_sum(n, t1), pauli_sum(n, t2)
        assert oracle.max_norm(pauli_to_matrix(p1 * p2),
                               pauli_to_matrix(p1) @ pauli_to_matrix(p2)) < 1e-12
        assert oracle.max_norm(pauli_to_matrix(p1 + p2),
                               pauli_to_matrix(p1) + pauli_to_matrix(p2)) < 1e-12


def test_matrix_dimension_cap():
    with pytest.raises(DimensionCapError):
        pauli_to_matrix(identity_sum(13))


def test_mixed_lengths_rejected():
    with pytest.raises(ValueError):
        pauli_sum(2, [(1, "X")])
    with pytest.raises(ValueError):
        multiply_terms((1, "X"), (1, "XX"))


def test_text_format_roundtrip():
    p = pauli_sum(4, [(0.125, "XXYY"), (-0.25j, "ZIZI")])
    text = format_pauli(p)
    assert "(+0.125000000000+0.000000000000i) XXYY" in text
    assert pauli_allclose(parse_pauli(text), p)


def test_single_letter_helper():
    p = single_letter(3, 1, "Z", 2.0)
    assert p.terms == ((2 + 0j, "IZI"),)
