import json

import numpy as np

from gaugekit.laws import SUITES, CheckRecord, RunReport, make_rng, run_suite


def test_rng_is_counter_based_and_stream_separated():
    a = make_rng(7, "bidual").standard_normal(5)
    b = make_rng(7, "bidual").standard_normal(5)
    c = make_rng(7, "flows").standard_normal(5)
    np.testing.assert_array_equal(a, b)
    assert not np.allclose(a, c)
    assert isinstance(make_rng(0, "x").bit_generator, np.random.Philox)


def test_report_is_byte_stable():
    one = json.dumps(run_suite("dual_gauge", seed=3).to_json())
    two = json.dumps(run_suite("dual_gauge", seed=3).to_json())
    assert one == two


def test_checks_sorted_by_name():
    rep = run_suite("inequality", seed=1)
    names = [c.name for c in rep.checks]
    assert names == sorted(names)
    assert rep.passed and rep.exit_code == 0


def test_failing_report_exit_code():
    rep = RunReport("x", 0, [CheckRecord("a", True, 0.0, 1.0), CheckRecord("b", False, 2.0, 1.0)])
    assert not rep.passed and rep.exit_code == 1
    assert rep.checks[1].summary().startswith("FAIL b")


def test_suite_registry():
    assert set(SUITES) == {"triangle", "bidual", "dual_gauge", "inequality", "reversal", "flows",
                           "isoperimetric", "capacity", "sections", "mazur_ulam", "involution"}
