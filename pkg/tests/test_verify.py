import pytest

from ncgdesk.verify import BATTERIES, VerificationReport, run_batteries


@pytest.mark.parametrize("name", sorted(BATTERIES))
def test_each_battery_passes_small_run(name):
    count = 5 if name in ("th4", "th5") else 10
    report = BATTERIES[name](31, count)
    assert report.ok, report.failures
    assert report.instances == count


def test_reports_are_seed_deterministic():
    a = BATTERIES["th6"](7, 8)
    b = BATTERIES["th6"](7, 8)
    assert a.to_json() == b.to_json()


def test_report_json_shape():
    report = VerificationReport("th1", 3, 2, [{"instance": 1}])
    doc = report.to_json()
    assert doc == {"theorem": "th1", "instances": 3, "passes": 2,
                   "failures": [{"instance": 1}]}
    assert not report.ok


def test_run_batteries_rejects_unknown():
    with pytest.raises(KeyError):
        run_batteries(["nope"], 0, 1)


def test_run_batteries_order_preserved():
    reports = run_batteries(["th8", "th7"], 5, 4)
    assert [r.theorem for r in reports] == ["th8", "th7"]
