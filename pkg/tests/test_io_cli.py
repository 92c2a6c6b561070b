import json

import pytest

from conftest import DATA, fleet_catalog
from relaus.cli import main, render_markdown, run
from relaus.io import (
    InputError,
    algebra_digest,
    catalog_to_json,
    module_from_json,
    module_to_json,
    parse_algebra,
    parse_catalog,
    parse_module,
    setup_digest,
)
from relaus.krull_schmidt import is_isomorphic, knit

L2 = str(DATA / "lambda2.json")
KA2 = str(DATA / "kA2.json")


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj, indent=2))
    return str(p)


def test_parse_data_files():
    assert parse_algebra(L2).dim == 2
    # empty relation list and N = 2 on an acyclic quiver: the path algebra
    a = parse_algebra(KA2)
    assert a.dim == 3 and a.presentation.relations == []
    s = parse_module(DATA / "S.json", parse_algebra(L2))
    assert s.dim == 1 and s.name == "S"


def test_invalid_json_reports_line(tmp_path):
    p = write(tmp_path, "bad.json", '{\n  "field": {"kind": "rational"},\n  oops\n}')
    with pytest.raises(InputError) as err:
        parse_algebra(p)
    assert err.value.pointer.endswith(":3:3")


@pytest.mark.parametrize(
    "patch, pointer",
    [
        ({"field": {"kind": "prime", "p": 4}}, "field.p"),
        ({"field": {"kind": "complex"}}, "field.kind"),
        ({"relations": [[{"coeff": "1", "path": ["x", "y"]}]]}, "relations[0][0].path[1]"),
        ({"relations": [[{"coeff": 0.5, "path": ["x", "x"]}]]}, "relations[0][0].coeff"),
        ({"nilpotency_bound": "2"}, "nilpotency_bound"),
    ],
)
def test_algebra_schema_errors(patch, pointer):
    data = json.loads((DATA / "lambda2.json").read_text())
    data.update(patch)
    with pytest.raises(InputError) as err:
        parse_algebra(data)
    assert err.value.pointer == pointer


def test_module_errors():
    a = parse_algebra(L2)
    good = json.loads((DATA / "lambda2_regular.json").read_text())
    # x acting as the identity does not satisfy x^2 = 0
    bad = dict(good, arrows={"x": [["1", "0"], ["0", "1"]]})
    with pytest.raises(InputError, match="x.x"):
        module_from_json(bad, a)
    with pytest.raises(InputError) as err:
        module_from_json(dict(good, arrows={"y": [["0"]]}), a)
    assert err.value.pointer == "arrows.y"
    with pytest.raises(InputError) as err:
        module_from_json(dict(good, algebra_digest="0" * 64), a)
    assert err.value.pointer == "algebra_digest"
    with pytest.raises(InputError) as err:
        module_from_json(dict(good, arrows={"x": [["0", "1"]]}), a)
    assert err.value.pointer == "arrows.x"


def test_module_round_trip():
    a = parse_algebra(KA2)
    for c in knit(a).modules:
        back = module_from_json(module_to_json(c), a)
        assert is_isomorphic(back, c) is not None


def test_catalog_round_trip_digest(tmp_path):
    a = parse_algebra(str(DATA / "lambda3.json"))
    cat = knit(a)
    p = write(tmp_path, "cat.json", catalog_to_json(cat))
    again = parse_catalog(p, a)
    assert setup_digest(again) == setup_digest(cat)
    assert [c.name for c in again.modules] == [c.name for c in cat.modules]


def test_digest_is_stable():
    a = parse_algebra(L2)
    assert algebra_digest(a.presentation) == json.loads((DATA / "S.json").read_text())["algebra_digest"]


# cli -------------------------------------------------------------------------------------

def test_zeta_command():
    cert, code = run(["zeta", "--algebra", L2, "--module", str(DATA / "S.json")])
    assert code == 0
    dims = cert["report"]["dims"]
    assert [dims[k] for k in ("K", "theta_lambda", "zeta", "theta_rho", "L")] == [1, 2, 1, 2, 1]
    assert cert["report"]["theta_lambda_counit_iso"]


def test_check_tilting_command():
    cert, code = run(["check-tilting", "--algebra", L2, "--catalog", "auto"])
    assert code == 0
    assert cert["report"]["T"]["verdict"] == "both"
    assert cert["provenance"] == {"cotilting": "verified", "tilting": "verified"}
    assert cert["flags"]["ext_bound"] == 6 and cert["flags"]["max_dim"] == 8 and cert["flags"]["max_steps"] == 10000


def test_gprj_command_on_kA2():
    cert, code = run(["gprj-pipeline", "--algebra", KA2])
    assert code == 0
    assert cert["report"]["cm_free"] is True
    assert cert["report"]["gdim"] == 1


def test_negative_verdict_exit_code():
    # X = mod kA2 is not left perpendicular to kA2
    assert run(["auslander", "--algebra", KA2])[1] == 2


def test_exit_code_for_bad_files(tmp_path, capsys):
    assert main(["auslander", "--algebra", str(tmp_path / "missing.json")]) == 4
    bad = write(tmp_path, "bad.json", "{")
    assert main(["zeta", "--algebra", bad, "--module", bad]) == 4
    assert main(["zeta", "--algebra", L2]) == 4
    assert main(["no-such-command"]) == 4
    err = capsys.readouterr().err
    assert "input error" in err


def test_budget_exit_code():
    # a one-step budget cannot finish the submodule enumeration
    cert, code = run(["check-tilting", "--algebra", L2, "--max-steps", "1"])
    assert code == 3
    assert any("assumed" in r for r in cert["verdict"]["reasons"])


def test_export_and_reimport(tmp_path):
    out = str(tmp_path / "cat.json")
    cert, code = run(["indecomposables", "--algebra", L2, "--export", out, "--oracle-prime", "2"])
    assert code == 0 and cert["report"]["oracle"]["agrees"]
    cert2, code2 = run(["auslander", "--algebra", L2, "--catalog", out])
    assert code2 == 0
    assert cert2["report"]["setup_digest"] == cert["report"]["setup_digest"]


def test_certificates_are_deterministic(tmp_path):
    argv = ["ttf-audit", "--algebra", L2, "--samples", "12"]
    a, _ = run(argv)
    b, _ = run(argv)
    assert a.pop("timing") is not None and b.pop("timing") is not None
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_markdown_and_out(tmp_path, capsys):
    out = str(tmp_path / "c.json")
    assert main(["gorenstein", "--algebra", L2, "--out", out, "--markdown"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("# relaus gorenstein")
    cert = json.loads(open(out).read())
    assert cert["report"]["gdim"] == 0
    assert render_markdown(cert) == text


def test_morita_compare_command():
    cert, code = run(["morita-compare", "--algebra", L2, "--other", str(DATA / "lambda3.json")])
    assert code == 0
    assert cert["report"]["cm_auslander_algebras"] == "distinguished"
    assert [cert["report"]["cm_invariants"][k]["simples"] for k in ("first", "second")] == [2, 3]


def test_catalog_file_matches_fleet(tmp_path):
    a = parse_algebra(L2)
    assert len(knit(a)) == len(fleet_catalog("L2"))
