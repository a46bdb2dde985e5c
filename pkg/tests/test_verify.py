from aluthge_lab.verify import SCHEMA_VERSION, SUITES, run_verification


def test_each_suite_passes():
    for name in ("transform", "shift", "dominance", "quadrature"):
        report = run_verification(name, seed=42)
        assert report["passed"], [c for c in report["checks"] if not c["passed"]]


def test_report_shape_and_determinism():
    a = run_verification("dominance", seed=3)
    b = run_verification("dominance", seed=3)
    assert a == b
    assert a["schema_version"] == SCHEMA_VERSION
    for c in a["checks"]:
        assert set(c) >= {"tag", "statement", "residual", "tolerance", "comparison", "passed", "suite"}
    assert set(SUITES) == {"transform", "quadrature", "dynamics", "shift", "numrange", "dominance"}
