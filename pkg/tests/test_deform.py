import numpy as np
import pytest

from quiverdef import deform as D
from quiverdef import homalg as H
from quiverdef import reps as R
from quiverdef.corpus import corpus_get
from quiverdef.gf import Matrix, rank


def test_first_order_lifts_projective_empty(d3r1222):
    assert D.first_order_lifts(R.projective(d3r1222, 0)) == []


def test_first_order_lifts_simple(d3r1222):
    lifts = D.first_order_lifts(R.simple(d3r1222, 0))
    assert len(lifts) == 1
    for lift in lifts:
        lift.check_valid()


def test_cocycle_count_matches_ext(d3r1222, table_modules):
    for name, m in table_modules.items():
        setup = D.deformation_setup(m)
        assert setup.tangent_dim == H.ext_dim(m, m, 1), name


def test_gauge_inside_cocycles(d3r1222):
    m = R.string_module(d3r1222, "delta*beta")
    setup = D.deformation_setup(m)
    if setup.gauge.size and setup.d_matrix.size:
        assert not ((setup.d_matrix @ setup.gauge) % 2).any()


def test_trivial_lift_always_extends(d3r1222):
    m = R.string_module(d3r1222, "beta")
    lift = D.TruncatedLift.trivial(m, 3)
    lift.check_valid()
    fam = D.extend_lift(lift)
    assert fam is not None
    fam.particular.check_valid()
    assert fam.particular.order == 4
    # the extension kernel contains the gauge subspace
    setup = D.deformation_setup(m)
    joint = np.hstack([setup.cocycles, setup.gauge])
    assert rank(joint, 2) == rank(setup.cocycles, 2)


def test_versal_table_spot(d3r1222, table_modules):
    rep = D.versal_classify(table_modules["S0"], 8)
    assert (rep.verdict, rep.order, rep.tangent_dim, rep.universal) == ("truncated", 2, 1, True)
    rep = D.versal_classify(table_modules["0/1"], 8)
    assert (rep.verdict, rep.tangent_dim) == ("trivial", 0)


def test_versal_projective_trivial_universal(d3r1222):
    rep = D.versal_classify(R.projective(d3r1222, 2), 8)
    assert rep.verdict == "trivial" and rep.universal


def test_oracle_agreement_spot(d3r1222, table_modules):
    for name in ("S0", "0/1", "0/1/2"):
        m = table_modules[name]
        rep = D.versal_classify(m, 8)
        oracle = D.brute_force_obstruction_order(m, 4)
        assert D.oracle_agrees(rep, oracle), name


def test_brute_force_budget_guard(d3r1222):
    s0 = R.simple(d3r1222, 0)
    with pytest.raises(D.BruteForceBudgetExceeded):
        D.brute_force_obstruction_order(s0, 4, entry_budget_bits=0)


def test_gauge_invariance_under_conjugation(d3r1222, table_modules):
    rng = np.random.default_rng(31)
    for name in ("S1", "1/2"):
        m = table_modules[name]
        base = D.versal_classify(m, 8).invariant_fields()
        for _ in range(5):
            g = [
                R.random_invertible(d, 2, rng) if d else Matrix.identity(0, 2)
                for d in m.dims
            ]
            conj = R.conjugate(m, g)
            assert D.versal_classify(conj, 8).invariant_fields() == base, name


def test_scaling_invariance_over_gf3(d3r1222_p3):
    s0 = R.simple(d3r1222_p3, 0)
    r1 = D.versal_classify(s0, 8, first_order_scale=1)
    r2 = D.versal_classify(s0, 8, first_order_scale=2)
    assert r1.invariant_fields() == r2.invariant_fields()


def test_summand_stability(d3r1222, table_modules):
    m = table_modules["S2"]
    base = D.versal_classify(m, 8)
    for i in range(3):
        ds = R.direct_sum(m, R.projective(d3r1222, i))
        rep = D.versal_classify(ds, 8)
        assert rep.invariant_fields() == base.invariant_fields()


def test_syzygy_stability(d3r1222, table_modules):
    for name in ("S0", "0/1"):
        m = table_modules[name]
        om = H.syzygy(m, 1)
        if H.stable_end_dim(m) == 1 and H.stable_end_dim(om) == 1:
            assert (
                D.versal_classify(om, 8).verdict
                == D.versal_classify(m, 8).verdict
            ), name


def test_truncated_ring_validation():
    with pytest.raises(ValueError):
        D.TruncatedCoefficientRing(0, 2)
    with pytest.raises(ValueError):
        D.TruncatedCoefficientRing(2, 4)
    ring = D.TruncatedCoefficientRing(2, 2)
    assert ring.order == 2


def test_lift_reduction_enforced(d3r1222):
    m = R.simple(d3r1222, 0)
    coeffs = {
        a: [Matrix(mat.a + (1 if a == 0 else 0), 2), Matrix.zeros(mat.rows, mat.cols, 2)]
        for a, mat in enumerate(m.mats)
    }
    with pytest.raises(ValueError):
        D.TruncatedLift(m, 2, coeffs)


def test_report_json_shape(d3r1222):
    rep = D.versal_classify(R.simple(d3r1222, 1), 8, module_name="S1")
    js = rep.to_json()
    assert set(js) == {
        "module",
        "field",
        "tangent_dim",
        "verdict",
        "order",
        "ring",
        "universal",
        "branches_explored",
        "elapsed_ms",
    }
