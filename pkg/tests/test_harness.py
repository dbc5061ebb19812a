from itl import harness
from itl.harness import FuzzConfig, fuzz_soundness


def test_all_fixtures_pass():
    results = harness.run_fixtures()
    assert len(results) >= 20
    assert all(r.ok for r in results), [r for r in results if not r.ok]


def test_broken_fixture_fails_cleanly():
    case = {"name": "missing", "kind": "kripke", "model": "nope.itl", "formula": "p", "at": "w0", "expect": True}
    (r,) = harness.run_fixtures([case])
    assert not r.ok and r.detail.startswith("error:")


def test_every_full_system_pair_separated():
    matrix = harness.distinctness_matrix("full")
    assert len(harness.systems_distinct(matrix)) == 6
    cell = {(e.formula, e.system): e.status for e in matrix}
    assert cell[("cd", "itl-cd")] == "axiom" and cell[("cd", "itl-fs")] == "refuted"
    assert cell[("fs-next", "itl-fs")] == "axiom" and cell[("fs-next", "itl-cd")] == "refuted"
    assert cell[("bi", "itl-cd")] == "derived"


def test_expected_failures_are_found():
    rep = fuzz_soundness(FuzzConfig("itl-fs", "nonopen", 100, seed=2))
    assert rep.verdict == "pass" and rep.expected_found and not rep.unexpected
    assert {c.schema for c in rep.expected_found} <= {"fs-next", "fs-dia"}


def test_cd_counterexample_on_the_line():
    rep = fuzz_soundness(FuzzConfig("itl-cd", "real", 60, seed=1))
    assert not rep.unexpected
    assert rep.verdict in ("pass", "suspicious")


def test_no_counterexample_means_suspicious():
    rep = fuzz_soundness(FuzzConfig("itl-fs", "nonopen", 1, seed=0))
    if not rep.expected_found:
        assert rep.verdict == "suspicious"


def test_unsound_schema_table():
    assert harness.unsound_schemas(harness.system("itl1"), "cont") == {"fs-next", "fs-dia"}
    assert harness.unsound_schemas(harness.system("itl1"), "real") == {"cd", "bi"}
    assert harness.unsound_schemas(harness.system("itl-cd"), "open") == set()
