import json

import pytest

from ecledger.cli import main
from ecledger.curve import E1, E2, WeierstrassCurve
from ecledger.ledger import (
    CITED_DEPENDENCIES,
    VERIFIED,
    CheckRecord,
    LedgerOptions,
    emit_report,
    report_from_json,
    run_ledger,
)

FAST = LedgerOptions(prime_bound=500, l_list=(3,), terms=500, precision_bits=96, padic_digits=12)

EXPECTED_E1_IDS = [
    "invariants",
    "reduction-3",
    "reduction-5",
    "conductor",
    "tamagawa-product",
    "torsion",
    "isogeny-degree-2",
    "mod8-order",
    "mod8-det-subgroup",
    "mod8-fixed-points",
    "surjectivity-l3",
    "surjectivity-l5",
    "surjectivity-l7",
    "surjectivity-residual",
    "ordinary-criterion",
    "lvalue-ratio",
    "linv-5",
] + [rid for rid, _ in CITED_DEPENDENCIES]


@pytest.fixture(scope="module")
def e1_report():
    return run_ledger(E1, LedgerOptions(prime_bound=1000))


def test_e1_overall_verified(e1_report):
    assert e1_report.overall == VERIFIED


def test_e1_record_ids_complete(e1_report):
    assert [r.id for r in e1_report.records] == EXPECTED_E1_IDS


def test_cited_records_exactly_once(e1_report):
    cited = [r for r in e1_report.records if r.method == "cited"]
    ids = [r.id for r in cited]
    assert len(ids) == len(set(ids))
    assert {rid for rid, _ in CITED_DEPENDENCIES} <= set(ids)
    for r in cited:
        assert r.status == "cited"


def test_status_method_invariant(e1_report):
    for r in e1_report.records:
        assert (r.status == "cited") == (r.method == "cited")
        if r.method == "computed":
            assert r.status in ("pass", "fail", "unsupported")


def test_key_results_recorded(e1_report):
    assert "product=8" in e1_report.record("tamagawa-product").result
    assert "structure=Z/2 x Z/4" in e1_report.record("torsion").result
    assert "ratio=1/8" in e1_report.record("lvalue-ratio").result
    assert "|G|=16" in e1_report.record("mod8-order").result
    assert "fixed(G)==fixed(H): True" in e1_report.record("mod8-fixed-points").result
    assert "valuation=1" in e1_report.record("linv-5").result
    assert "kernel=(-13/4,9/8)" in e1_report.record("isogeny-degree-2").result


def test_json_emission_deterministic(e1_report):
    a = emit_report(run_ledger(E1, FAST), "json-text")
    b = emit_report(run_ledger(E1, FAST), "json-text")
    assert a == b
    assert a.encode() == b.encode()


def test_json_roundtrip(e1_report):
    text = emit_report(e1_report, "json-text")
    back = report_from_json(text)
    assert back == e1_report
    assert back.overall == e1_report.overall
    json.loads(text)  # valid JSON


def test_human_text_one_line_per_record(e1_report):
    text = emit_report(e1_report, "human-text")
    for r in e1_report.records:
        assert any(r.claim in line for line in text.splitlines())
    assert f"overall: {VERIFIED}" in text


def test_e2_ledger_verifies():
    report = run_ledger(E2, FAST)
    assert report.overall == VERIFIED
    assert "structure=Z/2 x Z/4" in report.record("torsion").result
    assert report.record("mod8-order").status == "unsupported"
    assert "skipped: external image data unavailable" in report.record("mod8-order").result


def test_additive_curve_marked_unsupported():
    report = run_ledger(WeierstrassCurve(0, 0, 0, 0, 1), FAST)
    unsupported = {r.id for r in report.records if r.status == "unsupported"}
    assert {"reduction-2", "reduction-3", "conductor", "tamagawa-product", "lvalue-ratio"} <= unsupported


def test_checkrecord_invariant_enforced():
    with pytest.raises(AssertionError):
        CheckRecord("x", "claim", "cited", "none", "oops", "pass")


def test_cli_ledger_exit_codes(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main([
        "ledger", "--curve", "1,1,1,-10,-10", "--prime-bound", "500",
        "--l-list", "3", "--terms", "500", "--format", "json", "--out", str(out),
    ])
    assert code == 0
    parsed = json.loads(out.read_text())
    assert parsed["overall"] == VERIFIED
    # a curve whose mod-3 image is genuinely proper fails certification
    code = main([
        "ledger", "--curve", "0,-1,1,-10,-20", "--prime-bound", "500",
        "--l-list", "5", "--terms", "500", "--format", "json", "--out", str(out),
    ])
    assert code == 1


def test_cli_subcommands_run(tmp_path, capsys):
    for argv in (
        ["invariants"],
        ["local"],
        ["torsion"],
        ["count", "--prime-bound", "30"],
        ["image-mod8"],
        ["lvalue", "--terms", "500"],
        ["linv", "--padic-digits", "12"],
    ):
        assert main(argv) == 0
        assert capsys.readouterr().out


def test_cli_image_mod8_skips_other_curves(capsys):
    assert main(["image-mod8", "--curve", "1,1,1,-5,2"]) == 1
    assert "skipped" in capsys.readouterr().out
