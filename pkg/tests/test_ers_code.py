import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from erspolar.ers_code import CodeError, code_new, encode_matrix, encode_poly, mds_check
from erspolar.galois import field_new

from oracles import poly_eval_codeword, rank_gf


def message(n, K):
    return st.lists(st.integers(0, (1 << n) - 1), min_size=K, max_size=K)


def test_row_zero_and_last_column():
    code = code_new(field_new(3), 3)
    assert code.G[0].tolist() == [1] * 8
    assert code.G[:, 7].tolist() == [1, 0, 0]


def test_locators_alpha_power_then_zero():
    gf = field_new(4)
    code = code_new(gf, 4)
    assert code.locators.tolist() == [gf.alpha_pow(k) for k in range(15)] + [0]


def test_every_8_columns_of_16_8_full_rank_exhaustive():
    gf = field_new(4)
    code = code_new(gf, 8)
    ok, cols = mds_check(code)
    assert ok and cols is None
    # spot-check the checker against an independent rank routine
    for cols in itertools.islice(itertools.combinations(range(16), 8), 0, 12870, 997):
        assert rank_gf(gf, code.G[:, list(cols)]) == 8


def test_mds_small_codes():
    assert mds_check(code_new(field_new(3), 4))[0]
    assert mds_check(code_new(field_new(4), 15))[0]


def test_mds_sampled_mode():
    assert mds_check(code_new(field_new(5), 16), trials=200, seed=3)[0]


def test_corrupted_generator_fails_mds():
    code = code_new(field_new(3), 4)
    G = np.array(code.G)
    G[2] = 0
    ok, cols = mds_check(code, G=G)
    assert not ok and len(cols) == 4


def test_bad_custom_locators():
    gf = field_new(3)
    with pytest.raises(CodeError):
        code_new(gf, 2, [0, 1, 2, 3, 4, 5, 6, 7])
    with pytest.raises(CodeError):
        code_new(gf, 2, [1, 1, 2, 3, 4, 5, 6, 0])
    with pytest.raises(CodeError):
        code_new(gf, 9)


def test_custom_locators_accepted():
    gf = field_new(3)
    code = code_new(gf, 2, [7, 6, 5, 4, 3, 2, 1, 0])
    assert code.G[1].tolist() == [7, 6, 5, 4, 3, 2, 1, 0]


def test_zero_and_unit_messages():
    code = code_new(field_new(5), 15)
    zero = np.zeros(15, dtype=int)
    unit = zero.copy()
    unit[0] = 1
    assert not encode_poly(code, zero).any() and not encode_matrix(code, zero).any()
    assert encode_poly(code, unit).tolist() == [1] * 32
    assert encode_matrix(code, unit).tolist() == [1] * 32


def test_constant_polynomial():
    code = code_new(field_new(4), 1)
    assert encode_poly(code, [9]).tolist() == [9] * 16


def test_poly_and_matrix_agree_on_random_messages():
    gf = field_new(5)
    code = code_new(gf, 15)
    rng = np.random.default_rng(0)
    msgs = rng.integers(0, 32, size=(10_000, 15))
    batch = encode_matrix(code, msgs)
    for k in range(0, 10_000, 50):
        assert np.array_equal(encode_poly(code, msgs[k]), batch[k])
    for k in range(20):
        assert batch[k].tolist() == poly_eval_codeword(gf, code.locators, msgs[k])


@given(st.integers(1, 8), st.data())
def test_parity_symbol_and_linearity(K, data):
    gf = field_new(3)
    code = code_new(gf, K)
    F1 = np.array(data.draw(message(3, K)))
    F2 = np.array(data.draw(message(3, K)))
    a = data.draw(st.integers(0, 7))
    C1 = encode_poly(code, F1)
    C2 = encode_poly(code, F2)
    if K < 8:
        # sum over all nonzero x of x^k vanishes for 0 < k < N-1, and is 1 for k = 0
        acc = 0
        for c in C1[:-1]:
            acc ^= int(c)
        assert acc == C1[-1]
    assert C1[-1] == F1[0]
    lhs = encode_poly(code, gf.vmul(a, F1) ^ F2)
    assert np.array_equal(lhs, gf.vmul(a, C1) ^ C2)


@pytest.mark.parametrize("K", [1, 2, 3])
def test_min_distance_exhaustive_gf8(K):
    code = code_new(field_new(3), K)
    weights = [
        int(np.count_nonzero(encode_matrix(code, list(m))))
        for m in itertools.product(range(8), repeat=K) if any(m)
    ]
    assert min(weights) == 8 - K + 1
