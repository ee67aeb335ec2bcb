"""Built-in invariant suites behind the `selftest` CLI subcommand.

Small-n exhaustive checks of the properties every deployment relies on:
field axioms, MDS subsets, codec round trips, zero-cost repair, and
download accounting.  Returns True when every suite passes.
"""

from __future__ import annotations

import itertools
import random
import tempfile
from pathlib import Path

from ..counting import OpCounter
from ..fragments import Fragment
from ..gf import binary_field, fermat_field, ntt_evaluate, ntt_points, prime_field
from ..matrix import mat_inv, submatrix_rows, vandermonde, extended_vandermonde
from ..mbr import (
    MbrParams,
    mbr_encode,
    mbr_extract_payloads,
    mbr_partial_plan,
    mbr_reconstruct_full,
    mbr_reconstruct_partial,
    repair_from_fragments,
)
from ..poly import poly_eval
from ..psrs import PsrsMessage, decode_full_eval, decode_full_genpoly, encode_eval, encode_genpoly, eval_params, genpoly_params
from ..rbt import (
    RbtParams,
    decision,
    extract_payloads,
    helper_repair_symbol,
    rbt_encode,
    rbt_partial_plan,
    rbt_reconstruct_full,
    rbt_reconstruct_partial,
    rbt_repair,
)
from ..shah import ShahParams, helper_repair_packet, shah_encode, shah_reconstruct, shah_repair
from .fragio import read_fragment, write_fragment


def _suite_field_axioms():
    for field in (prime_field(7), binary_field(2)):
        q = field.q
        for a in range(q):
            for b in range(q):
                assert field.add(a, b) == field.add(b, a)
                for c in range(q):
                    assert field.mul(a, field.add(b, c)) == field.add(
                        field.mul(a, b), field.mul(a, c)
                    )
                if b:
                    assert field.mul(field.inv(b), b) == 1
    ff = fermat_field()
    assert ff.mul(65536, 65536) == 1


def _suite_mds_matrices():
    f7 = prime_field(7)
    v = vandermonde(f7, 6, 3)
    for rows in itertools.combinations(range(6), 3):
        mat_inv(submatrix_rows(v, rows))
    e = extended_vandermonde(binary_field(2), 5, 3)
    for rows in itertools.combinations(range(5), 3):
        mat_inv(submatrix_rows(e, rows))


def _suite_ntt():
    ff = fermat_field()
    rng = random.Random(0)
    for size in (2, 8, 32, 64):
        pts = [int(e) for e in ntt_points(ff, size)]
        coeffs = [rng.randrange(ff.q) for _ in range(size)]
        assert ntt_evaluate(ff, coeffs, size) == [poly_eval(ff, coeffs, x) for x in pts]


def _suite_psrs():
    rng = random.Random(1)
    f7 = prime_field(7)
    ev = eval_params(f7, 6, 3, 4)
    gp = genpoly_params(f7, 6, 3, 4)
    for _ in range(3):
        msg = PsrsMessage(tuple(rng.randrange(7) for _ in range(3)), (rng.randrange(7),))
        cw = encode_eval(ev, msg)
        assert tuple(cw[:3]) == msg.a
        for subset in itertools.combinations(range(1, 7), 4):
            assert decode_full_eval(ev, [(p, cw[p - 1]) for p in subset]) == msg
        c = encode_genpoly(gp, msg)
        for subset in itertools.combinations(range(6), 4):
            assert decode_full_genpoly(gp, [(t, c[t]) for t in subset]) == msg


def _suite_rbt():
    rng = random.Random(2)
    params = RbtParams(binary_field(2), 5, 3)
    u = [rng.randrange(4) for _ in range(params.B)]
    cw = rbt_encode(params, u)
    frags = {f.node: f for f in cw.fragments()}
    for failed in range(1, 6):
        counter = OpCounter()
        responses = [(i, helper_repair_symbol(frags[i], failed)) for i in frags if i != failed]
        assert rbt_repair(params, responses, failed, counter) == frags[failed]
        assert counter.mul == 0 and counter.add == 0
    for subset in itertools.combinations(range(1, 6), 3):
        assert rbt_reconstruct_full(params, [frags[i] for i in subset]) == u
    plan = rbt_partial_plan(params, [1, 3, 5])
    assert plan.total_symbols == params.B
    assert rbt_reconstruct_partial(params, plan, extract_payloads(cw, plan)) == u


def _suite_mbr():
    rng = random.Random(3)
    params = MbrParams(prime_field(7), 6, 3, 4)
    u = [rng.randrange(7) for _ in range(params.B)]
    frags = mbr_encode(params, u)
    for subset in itertools.combinations(range(1, 7), 3):
        assert mbr_reconstruct_full(params, [frags[i - 1] for i in subset]) == u
    for failed in range(1, 7):
        helpers = [i for i in range(1, 7) if i != failed][:4]
        assert repair_from_fragments(params, [frags[i - 1] for i in helpers], failed) \
            == frags[failed - 1]
    for scheme in ("lower", "upper"):
        plan = mbr_partial_plan(params, [1, 2, 4], scheme)
        assert plan.total_symbols == params.B
        assert mbr_reconstruct_partial(params, plan, mbr_extract_payloads(frags, plan)) == u


def _suite_shah():
    rng = random.Random(4)
    params = ShahParams(binary_field(6), 5, 3)
    u = [rng.randrange(64) for _ in range(params.B)]
    frags = {f.node: f for f in shah_encode(params, u)}
    for failed in range(1, 6):
        counter = OpCounter()
        responses = [(i, helper_repair_packet(params, frags[i], failed))
                     for i in frags if i != failed]
        assert shah_repair(params, responses, failed, counter) == frags[failed]
        assert counter.mul == 0 and counter.add == 0
    for subset in itertools.combinations(range(1, 6), 3):
        assert shah_reconstruct(params, [frags[i] for i in subset]) == u


def _suite_decision_tables():
    k5 = {(1, 5): 1, (1, 4): 4, (2, 5): 5, (2, 4): 2, (3, 5): 3,
          (3, 4): 4, (4, 5): 5, (1, 3): 1, (2, 3): 3, (1, 2): 2}
    assert all(decision(j, l) == v for (j, l), v in k5.items())


def _suite_fragment_files():
    with tempfile.TemporaryDirectory() as tmp:
        for field, count in ((prime_field(7), 4), (binary_field(16), 5), (fermat_field(), 3)):
            frag = Fragment("mbr-psrs", 2, tuple((i * 7919) % field.q for i in range(count)))
            path = Path(tmp) / f"frag_{field.kind}.rgc"
            write_fragment(path, field, 6, 3, count, frag)
            rfield, n, k, d, rfrag = read_fragment(path)
            assert (rfield, n, k, d, rfrag) == (field, 6, 3, count, frag)


SUITES = [
    ("field-axioms", _suite_field_axioms),
    ("mds-matrices", _suite_mds_matrices),
    ("ntt", _suite_ntt),
    ("psrs", _suite_psrs),
    ("rbt", _suite_rbt),
    ("mbr", _suite_mbr),
    ("shah", _suite_shah),
    ("decision-tables", _suite_decision_tables),
    ("fragment-files", _suite_fragment_files),
]


def run_selftest(out=print) -> bool:
    ok = True
    for name, suite in SUITES:
        try:
            suite()
            out(f"selftest {name}: ok")
        except Exception as exc:  # report and keep going
            ok = False
            out(f"selftest {name}: FAIL ({exc})")
    return ok
