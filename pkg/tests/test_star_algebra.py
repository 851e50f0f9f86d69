import math

import numpy as np
import pytest

from kvnext import (
    LeftIdeal,
    StarAlgebra,
    extend_functional,
    extend_functional_unital,
    f_max,
    fn_on_positive,
    gns,
    induced_operator,
    is_admissible,
    is_hilbert_bounded,
    is_representable,
    validate_algebra,
)
from kvnext.errors import (
    AssociativityFail,
    BoundNotDominating,
    NonPsdGram,
    NoUnit,
    NotHilbertBounded,
    NotRepresentable,
)
from kvnext.star_algebra import functional_leq, whole_algebra_ideal
from util_gen import (
    delta_algebra,
    fn_sup_oracle,
    m2_algebra,
    m2_first_column_ideal,
    nilpotent_algebra,
    rng_for,
    rotated_commutative,
    rotated_ideal,
)

M2 = m2_algebra()
M2_IDEAL = m2_first_column_ideal()
M2_F = np.array([1.0, 0.0], dtype=complex)  # f(a E11 + c E21) = a
TRACE = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex)


def z2_group_algebra() -> StarAlgebra:
    mult = np.zeros((2, 2, 2), dtype=complex)
    mult[0, 0, 0] = mult[0, 1, 1] = mult[1, 0, 1] = mult[1, 1, 0] = 1.0
    return StarAlgebra(
        mult=mult, invol=np.eye(2, dtype=complex), unit=np.array([1.0, 0.0])
    )


def random_m2_functional(rng):
    """f(a E11 + c E21) = mu a + nu c with mu > 0: always extendible."""
    mu = float(rng.uniform(0.5, 2.0))
    nu = complex(rng.standard_normal(), rng.standard_normal())
    return np.array([mu, nu], dtype=complex)


def test_validate_algebra_examples():
    assert validate_algebra(M2, M2_IDEAL).ok
    assert validate_algebra(z2_group_algebra(), whole_algebra_ideal(z2_group_algebra())).ok

    broken = delta_algebra(2).mult.copy()
    broken[0, 0, 1] = 1.0  # b0 b0 = b0 + b1 breaks associativity
    bad = StarAlgebra(mult=broken, invol=np.eye(2, dtype=complex))
    report = validate_algebra(bad, whole_algebra_ideal(bad))
    assert "associativity" in report.failures
    with pytest.raises(AssociativityFail):
        report.raise_if_invalid()


def test_ideal_closure_detected():
    # span{E12} is not a left ideal of M2
    basis = np.zeros((4, 1), dtype=complex)
    basis[1, 0] = 1.0
    report = validate_algebra(M2, LeftIdeal(basis))
    assert "ideal_closure" in report.failures


def test_induced_operator_examples():
    zero = induced_operator(M2, M2_IDEAL, np.zeros(2))
    assert np.allclose(zero.action, 0.0)
    assert np.allclose(zero.gram(), np.zeros((2, 2)))

    op = induced_operator(M2, M2_IDEAL, M2_F)
    assert np.allclose(op.gram(), np.eye(2), atol=1e-12)

    with pytest.raises(NonPsdGram):
        induced_operator(M2, M2_IDEAL, np.array([-1.0, 0.0]))


def test_hilbert_bound_examples():
    assert is_hilbert_bounded(M2, M2_IDEAL, np.zeros(2)).constant == 0.0
    report = is_hilbert_bounded(M2, M2_IDEAL, M2_F)
    assert report.bounded and report.constant == pytest.approx(1.0, abs=1e-12)


def test_nilpotent_functional_admissible_but_not_hilbert_bounded():
    algebra = nilpotent_algebra()
    ideal = LeftIdeal(np.eye(3, dtype=complex)[:, 1:])  # span{t, t^2}
    f = np.array([0.0, 1.0], dtype=complex)  # f(t) = 0, f(t^2) = 1
    assert validate_algebra(algebra, ideal).ok
    assert is_admissible(algebra, ideal, f).admissible
    report = is_hilbert_bounded(algebra, ideal, f)
    assert not report.bounded and math.isinf(report.constant)
    with pytest.raises(NotHilbertBounded):
        extend_functional(algebra, ideal, f)
    # the unital shortcut cannot rescue it either: the unit never reaches
    # the ideal through the form, and the failure is surfaced
    with pytest.raises(NotHilbertBounded):
        extend_functional_unital(algebra, ideal, f)


def test_admissibility_lambdas_for_matrix_units():
    report = is_admissible(M2, M2_IDEAL, M2_F)
    assert report.admissible
    assert np.allclose(report.lambdas, np.ones(4), atol=1e-9)


def test_admissibility_zero_functional():
    report = is_admissible(M2, M2_IDEAL, np.zeros(2))
    assert report.admissible and np.allclose(report.lambdas, 0.0)


def test_gns_empty_and_m2():
    empty = gns(M2, M2_IDEAL, np.zeros(2))
    assert empty.r == 0 and empty.zeta.size == 0

    data = gns(M2, M2_IDEAL, M2_F)
    assert data.r == 2
    assert np.linalg.norm(data.zeta) ** 2 == pytest.approx(1.0, abs=1e-12)


def _star_hom_residuals(algebra, data):
    m = algebra.m
    mult_res = max(
        float(
            np.linalg.norm(
                data.pi[i] @ data.pi[j]
                - sum(algebra.mult[i, j, k] * data.pi[k] for k in range(m))
            )
        )
        for i in range(m)
        for j in range(m)
    )
    star_res = max(
        float(
            np.linalg.norm(
                data.pi[i].conj().T
                - sum(algebra.invol[i, k] * data.pi[k] for k in range(m))
            )
        )
        for i in range(m)
    )
    vec_res = max(
        float(np.linalg.norm(data.pi[i] @ data.zeta - data.j_star_full[:, i]))
        for i in range(m)
    )
    return mult_res, star_res, vec_res


def test_gns_star_homomorphism_residuals():
    rng = rng_for(71)
    for trial in range(20):
        if trial % 2 == 0:
            algebra, ideal, f = M2, M2_IDEAL, random_m2_functional(rng)
        else:
            k = int(rng.integers(1, 5))
            algebra, to_rot, data_t = rotated_commutative(rng, k)
            support = sorted(
                set(int(s) for s in rng.integers(0, k, size=max(1, k // 2 + 1)))
            )
            ideal = rotated_ideal(data_t["transform"], support)
            f = rng.uniform(0.2, 2.0, size=len(support)).astype(complex)
        data = gns(algebra, ideal, f)
        mult_res, star_res, vec_res = _star_hom_residuals(algebra, data)
        assert mult_res <= 1e-10
        assert star_res <= 1e-10
        assert vec_res <= 1e-10
        # zeta represents f on the embedded ideal: f(a) = <class of A a, zeta>
        for l in range(ideal.p):
            coords = data.j_star_full @ ideal.basis[:, l]
            assert np.vdot(data.zeta, coords) == pytest.approx(
                complex(f[l]), abs=1e-10
            )
        f_n = extend_functional(algebra, ideal, f)
        restriction = ideal.basis.T @ f_n
        assert np.max(np.abs(restriction - f)) <= 1e-10 * (1 + np.max(np.abs(f)))


def test_extend_functional_m2_vector_state():
    f_n = extend_functional(M2, M2_IDEAL, M2_F)
    assert np.allclose(f_n, [1.0, 0.0, 0.0, 0.0], atol=1e-12)


def test_extend_functional_zero():
    assert np.allclose(extend_functional(M2, M2_IDEAL, np.zeros(2)), np.zeros(4))


def test_unital_path_agrees_and_bound_dominated():
    rng = rng_for(83)
    for _ in range(10):
        f = random_m2_functional(rng)
        via_gns = extend_functional(M2, M2_IDEAL, f)
        via_unit = extend_functional_unital(M2, M2_IDEAL, f)
        assert np.max(np.abs(via_gns - via_unit)) <= 1e-8 * (1 + np.max(np.abs(via_gns)))
        bound = is_hilbert_bounded(M2, M2_IDEAL, f).constant
        f_n_at_unit = float(np.real(np.dot(M2.unit, via_gns)))
        assert bound <= f_n_at_unit + 1e-8


def test_no_unit_error():
    mult = delta_algebra(2).mult
    algebra = StarAlgebra(mult=mult, invol=np.eye(2, dtype=complex))
    with pytest.raises(NoUnit):
        extend_functional_unital(algebra, whole_algebra_ideal(algebra), np.ones(2))


def test_fn_on_positive_examples():
    assert fn_on_positive(M2, M2_IDEAL, M2_F, np.zeros(4)) == 0.0
    e11 = np.array([1.0, 0, 0, 0])
    assert fn_on_positive(M2, M2_IDEAL, M2_F, e11) == pytest.approx(1.0, abs=1e-12)


def test_fn_on_positive_against_sup_oracle():
    rng = rng_for(97)
    for trial in range(8):
        f = random_m2_functional(rng)
        x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        closed = fn_on_positive(M2, M2_IDEAL, f, x)
        brute = fn_sup_oracle(M2, M2_IDEAL, f, x, rng, samples=10_000)
        assert closed == pytest.approx(brute, rel=1e-4, abs=1e-9)


def test_is_representable_examples():
    assert is_representable(M2, np.zeros(4))
    assert is_representable(M2, TRACE)
    assert not is_representable(M2, np.array([0.0, 1.0, 0.0, 0.0]))


def test_f_max_trivial_bound():
    f_n = extend_functional(M2, M2_IDEAL, M2_F)
    result = f_max(M2, M2_IDEAL, M2_F, f_n)
    assert np.max(np.abs(result - f_n)) <= 1e-9


def test_f_max_m2_trace_interval():
    result = f_max(M2, M2_IDEAL, M2_F, TRACE)
    f_n = extend_functional(M2, M2_IDEAL, M2_F)
    # the trace extends f, so it is itself the maximal extension below it
    assert np.max(np.abs(result - TRACE)) <= 1e-9
    assert functional_leq(M2, f_n, result)
    assert functional_leq(M2, result, TRACE)
    # sampled interval members h(x) = tr(x diag(1, s)) extend f exactly
    for s in (0.0, 0.25, 0.75, 1.0):
        h = np.array([1.0, 0.0, 0.0, s], dtype=complex)
        assert is_representable(M2, h)
        assert functional_leq(M2, f_n, h) and functional_leq(M2, h, result)
        restriction = M2_IDEAL.basis.T @ h
        assert np.allclose(restriction, M2_F, atol=1e-12)


def test_f_max_not_dominating_certificate():
    small = 0.5 * extend_functional(M2, M2_IDEAL, M2_F)
    with pytest.raises(BoundNotDominating):
        f_max(M2, M2_IDEAL, M2_F, small)


def test_f_max_rejects_unrepresentable_bound():
    g = np.array([0.0, 1.0, 0.0, 0.0], dtype=complex)
    with pytest.raises(NotRepresentable):
        f_max(M2, M2_IDEAL, M2_F, g)


def test_commutative_closed_forms():
    rng = rng_for(113)
    for _ in range(20):
        k = int(rng.integers(2, 5))
        algebra, to_rot, data = rotated_commutative(rng, k)
        support = sorted(set(int(s) for s in rng.integers(0, k, size=k // 2 + 1)))
        off = [i for i in range(k) if i not in support]
        ideal = rotated_ideal(data["transform"], support)
        w = rng.uniform(0.1, 2.0, size=len(support))
        f = w.astype(complex)

        # Hilbert bound is the total mass of the point weights
        hb = is_hilbert_bounded(algebra, ideal, f)
        assert hb.bounded and hb.constant == pytest.approx(float(np.sum(w)), rel=1e-8)

        # minimal extension puts zero weight off the support
        delta_f_n = np.zeros(k)
        for idx, s in enumerate(support):
            delta_f_n[s] = w[idx]
        f_n = extend_functional(algebra, ideal, f)
        assert np.max(np.abs(f_n - to_rot(delta_f_n))) <= 1e-8

        # maximal extension below g fills the complement with g's weights
        g_delta = delta_f_n + 0.0
        g_delta[off] = rng.uniform(0.5, 2.0, size=len(off))
        g_delta[list(support)] += rng.uniform(0.0, 1.0, size=len(support))
        g = to_rot(g_delta)
        result = f_max(algebra, ideal, f, g)
        expected_delta = delta_f_n.copy()
        expected_delta[off] = g_delta[off]
        assert np.max(np.abs(result - to_rot(expected_delta))) <= 1e-7

        # interval characterization, both directions
        for _ in range(4):
            h_delta = expected_delta.copy()
            h_delta[off] = rng.uniform(0.0, 1.0, size=len(off)) * g_delta[off]
            h = to_rot(h_delta)
            assert is_representable(algebra, h)
            assert functional_leq(algebra, h, g)
            assert functional_leq(algebra, f_n, h)
            assert functional_leq(algebra, h, result)
            assert np.max(np.abs(ideal.basis.T @ h - f)) <= 1e-8
        if off:
            bad = expected_delta.copy()
            bad[support[0]] += 0.3  # no longer extends f
            h_bad = to_rot(bad)
            inside = functional_leq(algebra, f_n, h_bad) and functional_leq(
                algebra, h_bad, result
            )
            assert not inside
