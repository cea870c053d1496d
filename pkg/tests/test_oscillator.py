from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qdeform.errors import DomainError, UnknownPreset
from qdeform.oscillator import (
    FLAVORS,
    PRESET_NAMES,
    DeformationParams,
    build_operator,
    classify_self_adjointness,
    hamiltonian_spectrum,
    log_concavity_holds,
    parameter_grid,
    preset,
    q_bracket,
    raabe_statistic,
    structure_function,
    structure_sequence,
    table_representatives,
    table_verdict,
    truncated_position_spectrum,
    verify_defining_relations,
)


def f_direct(p: DeformationParams, n: int) -> float:
    # f_n^2 = q^(2 alpha (n+1) + beta) [n+1]_{q'} with [m] = (q'^m - 1)/(q' - 1)
    qp = p.q ** (p.l - 1)
    br = n + 1 if p.l == 1 else (qp ** (n + 1) - 1) / (qp - 1)
    return math.sqrt(p.q ** (2 * p.alpha * (n + 1) + p.beta) * br)


params_st = st.builds(
    DeformationParams,
    st.floats(-1.5, 1.5),
    st.floats(-2, 2),
    st.floats(-1.5, 3.0),
    st.sampled_from([0.2, 0.5, 0.8, 1.5, 3.0]),
)


@given(p=params_st, n=st.integers(0, 60))
def test_structure_function_definition(p, n):
    assert structure_function(p, n) == pytest.approx(f_direct(p, n), rel=1e-12)


def test_structure_function_below_zero_is_zero():
    assert structure_function(preset("hermite_I"), -1) == 0.0


def test_classical_preset_gives_sqrt_n():
    f = structure_sequence(preset("classical"), 50)
    np.testing.assert_allclose(f, np.sqrt(np.arange(1, 51)), rtol=1e-15)


def test_bm_a_is_symmetric_q_number():
    q = 0.4
    p = preset("bm_a", q)
    n = np.arange(30)
    sym = (q ** -(n + 1) - q ** (n + 1)) / (1 / q - q)
    np.testing.assert_allclose(structure_sequence(p, 30) ** 2, sym, rtol=1e-13)


def test_bm_b_defaults_to_q_above_one():
    p = preset("bm_b")
    assert p.q == 2.0 and (p.alpha, p.beta, p.l) == (-0.5, 1.0, 3.0)


def test_q_bracket_limits():
    assert q_bracket(np.array([5.0]), 0.0)[0] == 5.0
    # [m] with u = ln 2 is 2^m - 1
    assert q_bracket(np.array([10.0]), math.log(2.0))[0] == pytest.approx(1023.0, rel=1e-14)


def test_structure_sequence_survives_large_indices():
    # log route: q'^n overflows doubles well before n = 5000
    p = DeformationParams(0.0, 0.0, 3.0, 2.0)
    f = structure_sequence(p, 5000)
    assert np.all(np.isfinite(f[:400]))


def test_presets_resolve():
    for name in PRESET_NAMES:
        p = preset(name, l=2.5) if name == "symmetric" else preset(name)
        assert isinstance(p, DeformationParams)
    assert preset("symmetric(2.5)").l == 2.5
    assert preset("bm_a") == preset("biedenharn_macfarlane_a")


def test_preset_errors():
    with pytest.raises(UnknownPreset):
        preset("nope")
    with pytest.raises(DomainError):
        preset("hermite_I", q=2.0)
    with pytest.raises(DomainError):
        preset("bm_b", q=0.5)
    with pytest.raises(DomainError):
        preset("symmetric")


@pytest.mark.parametrize("bad", [dict(q=1.0), dict(q=-0.5), dict(alpha=float("nan"))])
def test_params_validation(bad):
    kw = dict(alpha=0.0, beta=0.0, l=1.0, q=0.5) | bad
    with pytest.raises(DomainError):
        DeformationParams(**kw)


@pytest.mark.parametrize("flavor", FLAVORS)
def test_matvec_matches_matrix(flavor):
    op = build_operator(preset("hermite_II"), flavor, 12)
    v = np.random.default_rng(1).normal(size=12)
    np.testing.assert_allclose(op.matvec(v), op.to_matrix() @ v, rtol=1e-13)


def test_position_is_sum_of_ladders_and_momentum_hermitian():
    p = preset("hermite_I")
    Q = build_operator(p, "position", 10).to_matrix()
    A = build_operator(p, "lowering", 10).to_matrix()
    Ad = build_operator(p, "raising", 10).to_matrix()
    P = build_operator(p, "momentum", 10).to_matrix()
    np.testing.assert_allclose(Q, A + Ad)
    np.testing.assert_allclose(Ad, A.T)
    np.testing.assert_allclose(P, P.conj().T)


def test_hamiltonian_matches_ladder_products():
    p = DeformationParams(0.3, -0.4, 1.7, 0.6)
    H = build_operator(p, "hamiltonian", 20).to_matrix()
    A = build_operator(p, "lowering", 21).to_matrix()
    Ad = A.T
    direct = (A @ Ad + Ad @ A)[:20, :20]
    np.testing.assert_allclose(np.diag(H), np.diag(direct), rtol=1e-13)


def test_classical_hamiltonian_odd_integers():
    np.testing.assert_allclose(hamiltonian_spectrum(preset("classical"), 100), 2 * np.arange(101) + 1, atol=1e-12)


@pytest.mark.parametrize("name", ["classical", "bm_a", "bm_b", "hermite_I", "hermite_II", "symmetric(2.0)"])
def test_defining_relations_hold(name):
    rep = verify_defining_relations(preset(name), 64)
    assert rep.passed, [(c.name, c.max_rel_deviation) for c in rep.checks]


def test_defining_relations_detect_a_wrong_structure_function():
    # a structure function for different parameters breaks the q-commutator
    p = DeformationParams(0.3, 0.2, 1.5, 0.5)
    wrong = DeformationParams(0.31, 0.2, 1.5, 0.5)
    from qdeform import oscillator

    A = build_operator(wrong, "lowering", 16).to_matrix()
    aad, ada = (A @ A.T)[:15, :15], (A.T @ A)[:15, :15]
    n = np.arange(15)
    rhs = p.q ** (2 * p.alpha * (n + 1) + p.beta) * p.qprime**n
    dev = np.max(np.abs(np.diag(aad - p.q ** (2 * p.alpha) * ada) - rhs))
    assert dev > 1e-3
    assert oscillator.verify_defining_relations(p, 16).passed


def test_truncated_spectrum_classical_is_hermite_zeros():
    dim = 20
    ev = truncated_position_spectrum(preset("classical"), dim)
    zeros = np.sort(np.polynomial.hermite_e.hermeroots([0] * dim + [1]))[::-1]
    np.testing.assert_allclose(ev, zeros, rtol=1e-12, atol=1e-12)


def test_truncated_spectrum_matches_dense_solver_on_mild_case():
    p = DeformationParams(0.1, 0.0, 1.2, 0.7)
    dim = 30
    dense = np.sort(np.linalg.eigvalsh(build_operator(p, "position", dim).to_matrix()))[::-1]
    np.testing.assert_allclose(truncated_position_spectrum(p, dim), dense, rtol=1e-10, atol=1e-12)


def test_classification_examples():
    v = classify_self_adjointness(DeformationParams(-1.0, 0.0, 2.0, 0.5))
    assert v.series_convergent and v.deficiency_indices == (1, 1)
    assert v.table_verdict == "convergent" and v.agrees_with_table
    c = classify_self_adjointness(preset("classical"))
    assert c.carleman_condition_holds and c.deficiency_indices == (0, 0)
    assert c.table_row == "unclassified"


def test_raabe_statistic_classical():
    # f_n = sqrt(n + 1): R -> 1/2, so sum 1/f_n diverges
    assert raabe_statistic(preset("classical")) == pytest.approx(0.5, abs=1e-5)


def test_table_representatives_all_agree():
    reps = table_representatives()
    assert len(reps) == 8
    for label, p in reps:
        v = classify_self_adjointness(p)
        assert v.table_row.startswith(label), (label, v.table_row)
        assert v.agrees_with_table, label


@pytest.mark.parametrize("alpha,l", [(0.0, 2.0), (0.7, 1.0), (0.5, 0.5)])
def test_table_boundaries_unclassified(alpha, l):
    row, verdict = table_verdict(DeformationParams(alpha, 0.0, l, 0.5))
    assert row == "unclassified" and verdict is None


def test_alpha_zero_is_not_a_boundary_when_l_below_one():
    row, verdict = table_verdict(DeformationParams(0.0, 0.0, 0.5, 0.5))
    assert verdict == "convergent" and "row 3" in row


def test_log_concavity():
    assert log_concavity_holds(preset("hermite_I"))
    assert log_concavity_holds(preset("classical"))


def test_parameter_grid_shape():
    g = parameter_grid([-1, 0, 1], [0.5, 2.0], 0.5)
    assert len(g) == 6 and g[0] == DeformationParams(-1, 0.0, 0.5, 0.5)
