"""End-to-end gate: every cross-route validation check at its stated tolerance.

Each test runs one check from :mod:`qfel.validate`, prints its report line,
and asserts the verdict.  Two checks compare truncated closed forms against
exact propagation at tolerances the truncations cannot meet (see the check
details and README); their failures are informative, not regressions, and the
tolerances stay where they are.
"""

import pytest

from qfel.validate import run_all, shared_context


@pytest.fixture(scope="module")
def verdicts():
    results = {r.name: r for r in run_all(shared_context())}
    return results


def _gate(verdicts, name):
    result = verdicts[name]
    print(result.line())
    assert result.passed, result.detail


def test_low_gain_peak_gains(verdicts):
    _gate(verdicts, "low-gain peak gains")


def test_second_resonance_closed_form_populations(verdicts):
    _gate(verdicts, "second-resonance closed-form populations")


def test_first_resonance_collective_dynamics(verdicts):
    _gate(verdicts, "first-resonance collective dynamics")


def test_second_resonance_collective_dynamics(verdicts):
    _gate(verdicts, "second-resonance collective dynamics")


def test_mean_field_integration_oracle(verdicts):
    _gate(verdicts, "mean-field integration oracle")


def test_maximum_length_shorthand_accuracy(verdicts):
    _gate(verdicts, "maximum-length shorthand accuracy")


def test_special_functions(verdicts):
    _gate(verdicts, "special functions")


def test_dense_propagator_oracle_equivalence(verdicts):
    _gate(verdicts, "dense-propagator oracle equivalence")


def test_conservation_suite(verdicts):
    _gate(verdicts, "conservation suite")
