import json
import math

import jsonschema
import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from rskernel import identities as ids
from rskernel.barnes import barnes_integral
from rskernel.gammas import gamma_pm, gamma_pm2
from rskernel.errors import PinchedContourError
from rskernel.identities import REPORT_SCHEMA, SuiteConfig, VerificationReport, run_suite


# -- report semantics --------------------------------------------------------

finite = st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False)


@given(finite, finite, st.floats(1e-15, 1e-2))
def test_report_deviation_invariants(lhs, rhs, tol):
    r = VerificationReport.compare("x", {}, lhs, rhs, tol)
    assert r.abs_dev == pytest.approx(abs(lhs - rhs))
    assert 0 <= r.rel_dev
    assert r.rel_dev <= 2.0 + 1e-12
    symmetric = VerificationReport.compare("x", {}, rhs, lhs, tol)
    assert symmetric.rel_dev == r.rel_dev and symmetric.passed == r.passed
    if r.rel_dev <= tol:
        assert r.passed


def test_report_small_values_use_absolute_deviation():
    r = VerificationReport.compare("x", {}, 1e-12, -1e-12, 1e-9)
    assert r.rel_dev == pytest.approx(2.0)
    assert r.passed
    big = VerificationReport.compare("x", {}, 10.0, 10.0 + 1e-6, 1e-9)
    assert not big.passed


def test_report_inequality_relation():
    assert VerificationReport.compare("x", {}, 1.0, 2.0, 0.0, relation="le").passed
    r = VerificationReport.compare("x", {}, 3.0, 2.0, 0.0, relation="le")
    assert not r.passed and r.rel_dev == pytest.approx(0.5)
    with pytest.raises(ValueError):
        VerificationReport.compare("x", {}, 1.0, 2.0, 0.1, relation="ge")


@pytest.mark.parametrize("make", [
    lambda: VerificationReport.compare("id", {"S": 0.49 + 0.6j, "n": np.int64(2)}, 1 + 2j, 1 + 2.0000001j, 1e-6),
    lambda: VerificationReport.untestable("id", {"t": 1e-4}, 1e-5, "pinched"),
])
def test_report_json_round_trip_and_schema(make):
    r = make()
    d = json.loads(r.to_json())
    jsonschema.validate(d, REPORT_SCHEMA)
    back = VerificationReport.from_json(r.to_json())
    assert back.to_json() == r.to_json()
    assert back.status == r.status


def test_untestable_is_skipped_not_failed():
    r = VerificationReport.untestable("id", {}, 1e-5, "pinched")
    assert r.skipped and r.status == "skip"
    assert ids.all_passed([r])


# -- trivial and closed-form identities ----------------------------------------

def test_binomial_sum_small_cases():
    # N = 0 gives 1; N = 1 gives 1 - a/s ... against the gamma ratio directly
    assert ids.binomial_gamma_sum(0, 0.3, 0.7) == 1
    r = ids.verify_binomial_gamma_sum(3, 1.5 + 0.5j, -2.2 + 1j)
    assert r.passed and r.rel_dev < 1e-13
    # s an integer in 0..N-1: the sum vanishes
    assert ids.verify_binomial_gamma_sum(4, 0.7, 2.0).passed


def test_random_binomial_cases_are_deterministic_and_away_from_poles():
    a = ids.random_binomial_cases(50)
    assert a == ids.random_binomial_cases(50)
    for _, s in a:
        assert abs(s) <= 5.0


@pytest.mark.parametrize("t1", [0.8, 2.5])
def test_residue_constant_even_in_t1(t1):
    plus, minus = ids.verify_residue_constant(t1), ids.verify_residue_constant(-t1)
    assert plus.passed and minus.passed
    assert plus.lhs == pytest.approx(minus.lhs, rel=1e-15)


@given(st.complex_numbers(max_magnitude=1.0), st.integers(0, 3), st.floats(0.3, 2.0))
def test_sine_partition_property(S, n, t2):
    # the identity needs both denominators away from zero; near a zero the
    # two terms blow up and cancel, so the residual is measured against them
    dens = (ids.sin_pi(0.5 + 1j * t2 - n - S), ids.sin_pi(0.5 - 1j * t2 - n) * ids.sin_pi(1.5 + 1j * t2 - n - S))
    assume(min(abs(complex(d)) for d in dens) > 1e-2)
    first, second = ids.sine_partition_terms(S, n, t2)
    assert abs(first + second - 1.0) <= 1e-14 * max(1.0, abs(first), abs(second)) * 10


def test_sine_partition_degenerate_denominator():
    with pytest.raises(ZeroDivisionError):
        ids.sine_partition_terms(0.5 + 0.5j, 0, 0.5)


def test_jacobi_moment_one_case():
    r = ids.verify_jacobi_moment(1, 0.7, 0.9)
    assert r.passed


@pytest.mark.parametrize("kind", ["first", "second"])
def test_nested_closed_form_symmetries(kind):
    base = ids.nested_kernel_closed_form(kind, 0.4, 0.49)
    assert abs(base.imag) < 1e-12 * abs(base)
    assert ids.nested_kernel_closed_form(kind, -0.4, 0.49) == pytest.approx(base, rel=1e-12)
    S = 0.49 + 0.6j
    assert ids.nested_kernel_closed_form(kind, 0.4, S.conjugate()) == pytest.approx(
        ids.nested_kernel_closed_form(kind, 0.4, S).conjugate(), rel=1e-12)


def test_nested_pinch_is_reported():
    with pytest.raises(PinchedContourError):
        ids.nested_kernel_integral("first", 1e-4, 0.49)
    r = ids.verify_nested_kernel("first", 1e-4, 0.49)
    assert r.skipped


@pytest.mark.slow
def test_nested_integral_real_for_real_S():
    val = ids.nested_kernel_integral("second", 0.4, 0.49)
    assert abs(val.imag) < 1e-9 * abs(val)


# -- suite machinery -----------------------------------------------------------

def test_select_ids_prefix_and_errors():
    assert ids.select_ids(["whittaker"]) == ["whittaker-mellin", "whittaker-bessel"]
    assert ids.select_ids(["kernel-barnes-pair"]) == ["kernel-barnes-pair", "kernel-barnes-pair-shifted"]
    assert ids.select_ids([]) == list(ids.REGISTRY)
    with pytest.raises(KeyError):
        ids.select_ids(["no-such-identity"])


def test_quick_ids_are_registered():
    assert set(ids.QUICK_IDS) <= set(ids.REGISTRY)


def _strip_time(reports):
    out = []
    for r in reports:
        d = r.to_dict()
        d.pop("runtime_ms")
        out.append(json.dumps(d, sort_keys=True))
    return out


def test_suite_is_deterministic_and_thread_order_stable():
    cfg = dict(filters=("sine-partition", "theta-inversion", "residue-constant"))
    serial = run_suite(SuiteConfig(**cfg))
    again = run_suite(SuiteConfig(**cfg))
    threaded = run_suite(SuiteConfig(threads=4, **cfg))
    assert _strip_time(serial) == _strip_time(again) == _strip_time(threaded)
    order = [r.identity_id for r in serial]
    assert order == sorted(order, key=list(ids.REGISTRY).index)
    for r in serial:
        jsonschema.validate(r.to_dict(), REPORT_SCHEMA)


def test_suite_tolerance_override_and_spectral_choice():
    reps = run_suite(SuiteConfig(filters=("residue-constant",), t1=1.7, tol=1e-3))
    assert len(reps) == 1
    assert reps[0].tol == 1e-3
    assert reps[0].inputs["t1"] == 1.7


def test_suite_turns_errors_into_failed_reports(monkeypatch):
    def boom(cfg):
        def case():
            raise PinchedContourError("forced")
        return [case]

    monkeypatch.setitem(ids.REGISTRY, "residue-constant", ("forced failure", boom))
    reps = run_suite(SuiteConfig(filters=("residue-constant",)))
    assert len(reps) == 1 and not reps[0].passed and "forced" in reps[0].note
    jsonschema.validate(reps[0].to_dict(), REPORT_SCHEMA)


def test_summary_table_lists_each_identity_once():
    reps = run_suite(SuiteConfig(filters=ids.QUICK_IDS))
    table = ids.summary_table(reps)
    lines = table.splitlines()
    assert len(lines) == 1 + len(ids.QUICK_IDS)
    assert all(line.rstrip().endswith("PASS") for line in lines[1:])
    assert math.isfinite(sum(r.runtime_ms for r in reps))


# -- worked examples for individual identities -----------------------------------

def test_binomial_sum_first_orders():
    a, s = 1.2 + 0.7j, -0.4 + 1.9j
    assert ids.binomial_gamma_sum(1, a, s) == pytest.approx(-s, rel=1e-15)
    assert ids.verify_binomial_gamma_sum(6, a, s).rel_dev <= 1e-12


def test_sine_partition_at_zero_and_mirrored_t2():
    first, second = ids.sine_partition_terms(0.0, 1, 1.3)
    assert first == pytest.approx(1.0, abs=1e-15) and second == 0
    for t2 in (1.3, -1.3):
        assert ids.verify_sine_partition(0.49 + 0.7j, 2, t2).abs_dev <= 1e-12


@pytest.mark.parametrize("t1", [0.8, 2.5])
def test_residue_constant_times_gamma_pair(t1):
    r = ids.verify_residue_constant(t1)
    assert r.lhs * complex(gamma_pm(0.5, 1j * t1)) == pytest.approx(math.pi / 2, rel=1e-14)


def test_jacobi_moment_examples():
    assert ids.verify_jacobi_moment(0, 0.7, 1.1).rel_dev <= 1e-7
    assert ids.verify_jacobi_moment(3, 0.3, 0.9).rel_dev <= 1e-6
    # at n = 0 the polynomial factor is 1 and Γ(1)/Γ(1/2) = π^{-1/2}
    it, it0 = 0.7j, 1.1j
    reduced = gamma_pm2(0.25, it, it0) / (gamma_pm(0.75, it) * gamma_pm(0.5, it0) * math.sqrt(math.pi))
    assert ids.jacobi_moment_closed_form(0, 0.7, 1.1) == pytest.approx(complex(reduced), rel=1e-14)


def test_kernel_barnes_pair_examples():
    for r in ids.verify_kernel_barnes_pair(0, 0.745, 0.49 + 0.7j):
        assert r.rel_dev <= 1e-6
    for r in ids.verify_kernel_barnes_pair(2, 0.5, 0.49 + 0.3j):
        assert r.rel_dev <= 1e-5


def test_kernel_barnes_pair_sign_of_t1():
    # t1 enters through ± pairs only, so flipping it gives the same integrand
    from types import SimpleNamespace

    sp = ids.DEFAULT_SPECTRAL
    flipped = SimpleNamespace(t1=-sp.t1, t2=sp.t2, s1=0.5 - 1j * sp.t1, s2=sp.s2)
    for f, g in zip(ids._shifted_pair_integrands(0, 0.745, 0.49 + 0.7j, sp),
                    ids._shifted_pair_integrands(0, 0.745, 0.49 + 0.7j, flipped)):
        assert f.numerator == g.numerator and f.denominator == g.denominator
        assert barnes_integral(f, -0.255) == pytest.approx(barnes_integral(g, -0.255), rel=1e-12)


def test_whittaker_mellin_examples():
    sp = ids.DEFAULT_SPECTRAL
    assert ids.verify_whittaker_mellin(1.2, 1, 1, sp).rel_dev <= 1e-6
    assert ids.verify_whittaker_mellin(0.6, 1, 1, sp).rel_dev <= 1e-5
    # m only rescales the argument: the m = 4 transform is 4^{1-S} times the m = 1 one
    S = 1.2
    one = ids.whittaker_pair_mellin_barnes(S, 0, 1, 1, sp)
    four = ids.whittaker_pair_mellin_barnes(S, 0, 1, 4, sp)
    assert four == pytest.approx(4 ** (1 - S) * one, rel=1e-10)


def test_hahn_series_at_zero_argument():
    r = ids.verify_hahn_generating_series(ids.SeriesParams(x=0.0))
    assert r.passed


def test_coset_sums_use_either_sign_of_representative(monkeypatch):
    from rskernel import theta

    z = 0.25 + 1.5j
    base = theta.coset_theta_sum(z, 2)
    monkeypatch.setattr(theta, "COSETS", tuple(-g for g in theta.COSETS))
    assert theta.coset_theta_sum(z, 2) == pytest.approx(base, rel=1e-13)


@pytest.mark.slow
def test_nested_integral_even_in_t():
    a = ids.nested_kernel_integral("first", 0.4, 0.49 + 0.6j)
    b = ids.nested_kernel_integral("first", -0.4, 0.49 + 0.6j)
    assert b == pytest.approx(a, rel=1e-8)
