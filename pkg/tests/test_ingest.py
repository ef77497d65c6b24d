import json

import pytest

from normspec.catalog import UnknownCatalogName, catalog
from normspec.cli import main
from normspec.group import GroupError
from normspec.ingest import (
    GroupDocument,
    MalformedCycle,
    ParseError,
    RunConfig,
    catalog_document,
    document_to_group,
    export_dot,
    group_spaces,
    parse_cycles,
    parse_group_document,
    run,
    serialize_group_document,
    specialization_reduction,
)
from normspec.lattice import enumerate_normal_subgroups

DOCS = [
    '{"kind":"catalog","payload":"S3"}',
    '{"kind":"cayley","payload":[[0,1],[1,0]]}',
    '{"kind":"permutation","payload":{"degree":3,"gens":["(0 1 2)","(0 1)"]}}',
    '{"kind":"cayley","id":"z3","payload":{"table":[[0,1,2],[1,2,0],[2,0,1]],"names":["e","a","b"]}}',
    '{"kind":"product","id":"p","payload":{"factors":["Z2",{"kind":"catalog","payload":"Z3"}]}}',
    '{"format_version":1,"kind":"permutation","id":"c4","payload":{"degree":4,"gens":[[1,2,3,0]]}}',
]


def test_catalog_document():
    doc = parse_group_document(DOCS[0])
    assert doc == GroupDocument("catalog", "S3", "S3", 1)
    assert document_to_group(doc).order == 6


def test_cayley_document():
    doc = parse_group_document(DOCS[1])
    g = document_to_group(doc)
    assert g.order == 2 and doc.id.startswith("cayley-")


def test_permutation_document():
    assert document_to_group(parse_group_document(DOCS[2])).order == 6


def test_product_document():
    g = document_to_group(parse_group_document(DOCS[4]))
    assert g.order == 6 and g.is_abelian()


@pytest.mark.parametrize("text", DOCS)
def test_round_trip(text):
    doc = parse_group_document(text)
    again = parse_group_document(serialize_group_document(doc))
    assert again == doc
    assert serialize_group_document(again) == serialize_group_document(doc)


@pytest.mark.parametrize(
    "text, line",
    [
        ('{"kind": "cayley",\n "payload": [[0,1],[1,0]', 2),
        ('{"kind": "cayley",\n  "payload": [[0,1],[1]]}', 2),
        ('{"kind": "ring", "payload": 1}', 1),
        ('[1, 2]', 1),
        ('{"kind": "catalog"}', 1),
        ('{"format_version": 2, "kind": "catalog", "payload": "S3"}', 1),
    ],
)
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as info:
        parse_group_document(text)
    assert info.value.line == line and info.value.column >= 1


def test_unknown_catalog_name():
    with pytest.raises(UnknownCatalogName):
        parse_group_document('{"kind":"catalog","payload":"S9"}')


def test_cycles():
    assert parse_cycles("(0 1 2)", 3) == [1, 2, 0]
    assert parse_cycles("(0 1)(2 3)", 4) == [1, 0, 3, 2]
    assert parse_cycles("(0,2)", 3) == [2, 1, 0]
    assert parse_cycles("1", 3) == [0, 1, 2]
    for bad in ["(0 1", "(0 5)", "(0 0)", "(0 1)(1 2)", "(a b)", "x(0 1)"]:
        with pytest.raises(MalformedCycle):
            parse_cycles(bad, 3)
    with pytest.raises(MalformedCycle):
        parse_group_document('{"kind":"permutation","payload":{"degree":3,"gens":["(0 3)"]}}')


def test_bad_table_is_group_error():
    doc = parse_group_document('{"kind":"cayley","payload":[[0,1],[1,1]]}')
    with pytest.raises(GroupError):
        document_to_group(doc)


# DOT


def test_hasse_dot_s3(s3):
    text = export_dot(enumerate_normal_subgroups(s3), "hasse")
    assert text.count("[label=") == 3 and text.count("->") == 2
    assert 'n0 [label="{1}"]' in text
    lines = text.splitlines()
    last_node = max(i for i, l in enumerate(lines) if "[label=" in l)
    first_edge = min(i for i, l in enumerate(lines) if "->" in l)
    assert last_node < first_edge


def test_dot_trivial():
    text = export_dot(enumerate_normal_subgroups(catalog("trivial")), "hasse")
    assert text.count("[label=") == 1 and "->" not in text


def test_specialization_dot_z6(z6):
    _, plus = group_spaces(enumerate_normal_subgroups(z6))
    text = export_dot(plus, "specialization")
    assert text.count("[label=") == 3
    assert "n0 -> n1;" in text and "n0 -> n2;" in text and text.count("->") == 2


def test_specialization_reduction_preorder():
    # 0 and 1 equivalent, both below 2
    spec = [[1, 1, 1], [1, 1, 1], [0, 0, 1]]
    assert specialization_reduction(spec) == [(0, 1), (0, 2), (1, 2)]


def test_dot_flavor_errors(s3):
    L = enumerate_normal_subgroups(s3)
    with pytest.raises(ValueError):
        export_dot(L, "specialization")
    with pytest.raises(ValueError):
        export_dot(group_spaces(L)[0], "hasse")
    with pytest.raises(ValueError):
        export_dot(L, "sideways")


# runs


def test_run_s3_z6():
    res = run(RunConfig([catalog_document("S3"), catalog_document("Z6")]))
    assert res.exit_code == 0
    reports = json.loads(res.outputs["report.json"])
    assert [r["group_id"] for r in reports] == ["S3", "Z6"]
    for r in reports:
        assert r["n_plus_space"]["verdict"] and r["hypothesis_holds"]
        assert r["schema_version"] == 1 and r["timings_ms"] is None
    expected_keys = {"group_id", "order", "normal_subgroup_count", "maximal_normal_subgroups",
                     "hypothesis_holds", "n_space", "n_plus_open", "n_plus_space",
                     "closure_identity", "intersection_identity", "join_compactness", "seed",
                     "caps", "timings_ms"}
    assert expected_keys <= set(reports[0])


def test_run_trivial_exits_zero():
    res = run(RunConfig([catalog_document("trivial")], emit=("report-json", "report-text")))
    assert res.exit_code == 0
    assert json.loads(res.outputs["report.json"])[0]["status"] == "hypothesis_failed"
    assert "hypothesis_failed" in res.outputs["report.txt"]


def test_run_input_error():
    bad = parse_group_document('{"kind":"cayley","id":"bad","payload":[[0,1],[1,1]]}')
    res = run(RunConfig([bad, catalog_document("S3")]))
    assert res.exit_code == 1
    entries = json.loads(res.outputs["report.json"])
    assert entries[0]["status"] == "input_error" and entries[1]["status"] == "verified"


def test_run_duplicate_ids():
    assert run(RunConfig([catalog_document("S3"), catalog_document("S3")])).exit_code == 1


def test_run_assertion_failure(monkeypatch):
    from normspec import verify

    monkeypatch.setattr(verify, "join_family", lambda lat, fam: lat.bottom_index)
    res = run(RunConfig([catalog_document("Z6")]))
    assert res.exit_code == 2
    assert json.loads(res.outputs["report.json"])[0]["status"] == "assertion_failed"


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig([], order_cap=0)
    with pytest.raises(ValueError):
        RunConfig([], emit=())
    with pytest.raises(ValueError):
        RunConfig([], emit=("pdf",))


def test_run_writes_files(tmp_path):
    res = run(RunConfig([catalog_document("S3")], out_dir=str(tmp_path),
                        emit=("report-json", "report-text", "dot-hasse", "dot-specialization")))
    assert res.exit_code == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == [
        "S3.hasse.dot", "S3.specialization.dot", "report.json", "report.txt"]


# CLI


def test_cli_verify_stdout(capsys):
    assert main(["verify", "--catalog", "S3"]) == 0
    out = capsys.readouterr().out
    assert json.loads(out)[0]["group_id"] == "S3"


def test_cli_corrupted_file(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"kind": "cayley", "payload": [[0, 1], [1, 0]', encoding="utf-8")
    assert main(["verify", "--file", str(p)]) == 1
    assert "ParseError" in capsys.readouterr().err


def test_cli_file_and_catalog(tmp_path, capsys):
    p = tmp_path / "z2.json"
    p.write_text(DOCS[1], encoding="utf-8")
    code = main(["verify", "--file", str(p), "--catalog", "Q8", "--emit", "report-text"])
    assert code == 0
    out = capsys.readouterr().out
    assert "group Q8" in out and "group cayley-" in out


def test_cli_catalog_list(capsys):
    assert main(["catalog", "--list"]) == 0
    names = capsys.readouterr().out.split()
    assert "S5" in names and "Q8" in names


def test_cli_export_dot(capsys):
    assert main(["export-dot", "--catalog", "Z6", "--flavor", "specialization"]) == 0
    assert capsys.readouterr().out.count("->") == 2
    assert main(["export-dot", "--catalog", "S3"]) == 0
    assert capsys.readouterr().out.count("->") == 2
    assert main(["export-dot", "--catalog", "nope"]) == 1


def test_cli_bad_emit():
    with pytest.raises(SystemExit):
        main(["verify", "--catalog", "S3", "--emit", "pdf"])
