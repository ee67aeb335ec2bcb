import itertools
import random

import pytest

from regencodes.counting import OpCounter
from regencodes.errors import (
    DuplicateIndex,
    FieldTooSmall,
    MissingHelper,
    NotSkewSymmetric,
    ParamsInvalid,
    WrongHelperCount,
    WrongMessageLength,
)
from regencodes.gf import binary_field, fermat_field, prime_field
from regencodes.matrix import FieldMatrix, is_skew_symmetric, mat_inv, submatrix_rows
from regencodes.rbt import (
    RbtParams,
    decision,
    extract_payloads,
    helper_repair_symbol,
    rbt_build_encoding,
    rbt_build_message,
    rbt_encode,
    rbt_encode_systematic,
    rbt_partial_plan,
    rbt_reconstruct_full,
    rbt_reconstruct_partial,
    rbt_repair,
    remapped_message,
    source_block,
    source_from_codeword,
)

F4 = binary_field(2)
F7 = prime_field(7)
REF4 = RbtParams(F4, 5, 3)  # n = q+1 doubly-extended case


def rand_message(params, rng):
    return [rng.randrange(params.field.q) for _ in range(params.B)]


def test_params():
    assert REF4.d == 4 and REF4.alpha == 4 and REF4.B == 9
    with pytest.raises(FieldTooSmall):
        RbtParams(F4, 6, 3)
    with pytest.raises(ParamsInvalid):
        RbtParams(F7, 5, 5)


def test_message_matrix_reference_layout():
    # strict upper triangle of [S T] filled row-major with u1..u9
    u = list(range(1, 10))
    params = RbtParams(prime_field(11), 5, 3)
    m = rbt_build_message(params, u)
    f = params.field
    want = [
        [0, 1, 2, 3, 4],
        [f.neg(1), 0, 5, 6, 7],
        [f.neg(2), f.neg(5), 0, 8, 9],
        [f.neg(3), f.neg(6), f.neg(8), 0, 0],
        [f.neg(4), f.neg(7), f.neg(9), 0, 0],
    ]
    assert m.tolist() == want
    assert is_skew_symmetric(m)


def test_message_matrix_zero_and_length():
    assert rbt_build_message(REF4, [0] * 9).tolist() == [[0] * 5] * 5
    with pytest.raises(WrongMessageLength):
        rbt_build_message(REF4, [0] * 8)


def test_message_matrix_skew_random():
    rng = random.Random(0)
    params = RbtParams(F7, 6, 3)
    for _ in range(50):
        assert is_skew_symmetric(rbt_build_message(params, rand_message(params, rng)))


def test_encoding_matrix_reference_values():
    w = F4.omega
    w2 = F4.mul(w, w)
    w4 = F4.mul(w2, w2)
    psi = rbt_build_encoding(REF4)
    assert psi.tolist() == [
        [1, 0, 0, 0, 0],
        [1, 1, 1, 0, 0],
        [1, w, w2, 0, 0],
        [1, w2, w4, 1, 0],
        [0, 0, 1, 0, 1],
    ]


def test_encoding_matrix_systematic_top_block():
    params = RbtParams(prime_field(11), 8, 3, systematic=True)
    psi = rbt_build_encoding(params)
    for i in range(3):
        row = [0] * 8
        row[i] = 1
        assert psi.row(i) == row


def test_encoding_matrix_invertible_sweep():
    f11 = prime_field(11)
    for n in range(2, 9):
        for k in range(1, n):
            for systematic in (False, True):
                mat_inv(rbt_build_encoding(RbtParams(f11, n, k, systematic=systematic)))


def test_phi_any_k_rows_independent():
    for params in (REF4, RbtParams(F7, 6, 3), RbtParams(F7, 8, 4, systematic=True)):
        psi = rbt_build_encoding(params)
        phi = FieldMatrix(params.field, psi.a[:, : params.k])
        for subset in itertools.combinations(range(params.n), params.k):
            mat_inv(submatrix_rows(phi, subset))


def test_encode_zero_and_char2_signfix():
    cw = rbt_encode(REF4, [0] * 9)
    assert cw.check.tolist() == [[0] * 5] * 5
    rng = random.Random(1)
    u = rand_message(REF4, rng)
    # char 2: check matrix equals the raw congruence elementwise
    from regencodes.matrix import congruence

    m = rbt_build_message(REF4, u)
    psi = rbt_build_encoding(REF4)
    assert rbt_encode(REF4, u).check == congruence(psi, m)


def test_encode_symmetry_gf7():
    rng = random.Random(2)
    params = RbtParams(F7, 6, 3)
    for _ in range(50):
        cw = rbt_encode(params, rand_message(params, rng))
        a = cw.check.a
        assert (a == a.T).all() and (a.diagonal() == 0).all()


def test_signfix_involution():
    from regencodes.rbt import sign_fix

    rng = random.Random(3)
    params = RbtParams(F7, 6, 3)
    m = rbt_build_message(params, rand_message(params, rng))
    assert sign_fix(params, sign_fix(params, m)) == m


def test_repair_round_trip_and_zero_ops():
    rng = random.Random(4)
    for params in (REF4, RbtParams(F7, 6, 3)):
        for _ in range(20):
            cw = rbt_encode(params, rand_message(params, rng))
            frags = {f.node: f for f in cw.fragments()}
            for failed in range(1, params.n + 1):
                counter = OpCounter()
                responses = [
                    (i, helper_repair_symbol(frags[i], failed))
                    for i in range(1, params.n + 1)
                    if i != failed
                ]
                repaired = rbt_repair(params, responses, failed, counter)
                assert repaired == frags[failed]
                assert counter.mul == 0 and counter.add == 0


def test_repair_validation():
    cw = rbt_encode(REF4, [1, 2, 3, 0, 1, 2, 3, 0, 1])
    frags = {f.node: f for f in cw.fragments()}
    responses = [(i, helper_repair_symbol(frags[i], 5)) for i in (1, 2, 3)]
    with pytest.raises(WrongHelperCount):
        rbt_repair(REF4, responses, 5)
    bad = responses + [(5, 0)]
    with pytest.raises(MissingHelper):
        rbt_repair(REF4, bad, 5)


def test_reconstruct_full_exhaustive():
    rng = random.Random(5)
    params = RbtParams(F7, 6, 3)
    for _ in range(10):
        u = rand_message(params, rng)
        cw = rbt_encode(params, u)
        for subset in itertools.combinations(range(1, 7), 3):
            frags = [cw.fragment(i) for i in subset]
            assert rbt_reconstruct_full(params, frags) == u


def test_reconstruct_zero():
    cw = rbt_encode(REF4, [0] * 9)
    assert rbt_reconstruct_full(REF4, [cw.fragment(i) for i in (2, 4, 5)]) == [0] * 9


def test_systematic_encode_matches_remapped_congruence():
    rng = random.Random(6)
    params = RbtParams(F7, 6, 3, systematic=True)
    for _ in range(30):
        u = rand_message(params, rng)
        block = source_block(params, u)
        direct = rbt_encode_systematic(params, block)
        via_congruence = rbt_encode(params, remapped_message(params, block))
        assert direct.check == via_congruence.check
        assert source_from_codeword(direct) == u


def test_systematic_source_rows_verbatim():
    rng = random.Random(7)
    params = RbtParams(prime_field(11), 7, 3, systematic=True)
    u = rand_message(params, rng)
    cw = rbt_encode_systematic(params, source_block(params, u))
    assert source_from_codeword(cw) == u


def test_systematic_v_block_skew():
    rng = random.Random(8)
    params = RbtParams(F7, 6, 3, systematic=True)
    for _ in range(50):
        u = rand_message(params, rng)
        m = rbt_build_message(params, remapped_message(params, source_block(params, u)))
        psi = rbt_build_encoding(params)
        from regencodes.matrix import congruence

        c_hat = congruence(psi, m)
        v = FieldMatrix(params.field, c_hat.a[3:, 3:])
        assert is_skew_symmetric(v)


def test_systematic_rejects_bad_block():
    params = RbtParams(F7, 6, 3, systematic=True)
    block = source_block(params, [1] * params.B)
    bad = FieldMatrix(params.field, block.a.copy())
    bad.a[0, 0] = 1  # nonzero diagonal in U_L
    with pytest.raises(NotSkewSymmetric):
        rbt_encode_systematic(params, bad)
    with pytest.raises(ParamsInvalid):
        rbt_encode_systematic(RbtParams(F7, 6, 3), block)


def test_systematic_reconstruct_fast_path_agrees():
    rng = random.Random(9)
    params = RbtParams(F7, 6, 3, systematic=True)
    u = rand_message(params, rng)
    cw = rbt_encode_systematic(params, source_block(params, u))
    sys_frags = [cw.fragment(i) for i in (1, 2, 3)]
    other = [cw.fragment(i) for i in (2, 4, 6)]
    assert rbt_reconstruct_full(params, sys_frags) == u
    assert rbt_reconstruct_full(params, other) == u


def test_decision_tables_k5_k6():
    expected_k5 = {
        (1, 5): 1, (1, 4): 4, (2, 5): 5, (2, 4): 2, (3, 5): 3,
        (3, 4): 4, (4, 5): 5, (1, 3): 1, (2, 3): 3, (1, 2): 2,
    }
    for (j, l), want in expected_k5.items():
        assert decision(j, l) == want
    expected_k6 = {
        (1, 6): 6, (2, 6): 2, (3, 6): 6, (4, 6): 4, (5, 6): 6,
        (1, 5): 1, (2, 5): 5, (3, 5): 3, (4, 5): 5,
        (1, 4): 4, (2, 4): 2, (3, 4): 4,
        (1, 3): 1, (2, 3): 3,
        (1, 2): 2,
    }
    for (j, l), want in expected_k6.items():
        assert decision(j, l) == want


def test_partial_plan_totals_and_balance():
    for n in range(2, 11):
        for k in range(1, n):
            params = RbtParams(prime_field(13) if n <= 13 else fermat_field(), n, k)
            plan = rbt_partial_plan(params, list(range(1, k + 1)))
            assert plan.total_symbols == params.B
            counts = [len(p) for p in plan.positions]
            if k % 2 == 1:
                assert all(c == (n - 1) - (k - 1) // 2 for c in counts)
            else:
                for slot, c in enumerate(counts, start=1):
                    save = k // 2 - 1 if slot % 2 == 1 else k // 2
                    assert c == (n - 1) - save


def test_partial_plan_k1():
    params = RbtParams(F7, 6, 1)
    plan = rbt_partial_plan(params, [4])
    assert plan.total_symbols == params.B == 5


def test_partial_plan_duplicate_nodes():
    with pytest.raises(DuplicateIndex):
        rbt_partial_plan(RbtParams(F7, 6, 3), [1, 1, 2])


def test_partial_reconstruct_matches_full():
    rng = random.Random(10)
    params = RbtParams(F7, 6, 3)
    for _ in range(50):
        u = rand_message(params, rng)
        cw = rbt_encode(params, u)
        connected = rng.sample(range(1, 7), 3)
        plan = rbt_partial_plan(params, connected)
        payloads = extract_payloads(cw, plan)
        assert rbt_reconstruct_partial(params, plan, payloads) == u


def test_partial_reconstruct_zero():
    params = RbtParams(F7, 6, 3)
    cw = rbt_encode(params, [0] * params.B)
    plan = rbt_partial_plan(params, [1, 3, 5])
    assert rbt_reconstruct_partial(params, plan, extract_payloads(cw, plan)) == [0] * params.B


def test_exhaustive_small_n_everything():
    # reconstruction from every k-subset and repair of every failure, n <= 8
    rng = random.Random(11)
    f11 = prime_field(11)
    for n in range(2, 8):
        for k in range(1, n):
            params = RbtParams(f11, n, k)
            u = rand_message(params, rng)
            cw = rbt_encode(params, u)
            frags = {f.node: f for f in cw.fragments()}
            for failed in range(1, n + 1):
                responses = [(i, helper_repair_symbol(frags[i], failed))
                             for i in frags if i != failed]
                assert rbt_repair(params, responses, failed) == frags[failed]
            for subset in itertools.combinations(range(1, n + 1), k):
                assert rbt_reconstruct_full(params, [frags[i] for i in subset]) == u
