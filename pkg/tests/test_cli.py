import io
import json
from pathlib import Path

import pytest

from parhom import cli, homology
from parhom.errors import ParseError
from parhom.exactalg import GF, QQ
from parhom.cli import build_module, parse_group_shorthand, parse_spec, run, run_command

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv, "--json")
    assert err == ""
    return code, json.loads(out)


def write(tmp_path, text, name="p.toml"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


# --- parsing ---------------------------------------------------------------------------

@pytest.mark.parametrize("text,order", [("C4", 4), ("S3", 6), ("D4", 8), ("C2xC2", 4)])
def test_group_shorthand(text, order):
    assert parse_group_shorthand(text).order == order


@pytest.mark.parametrize("name", sorted(p.name for p in FIX.glob("*.toml")))
def test_fixtures_validate(name):
    code, data = call_json("validate", "--spec", str(FIX / name))
    assert code == 0 and data["exit_code"] == 0


def test_ring_defaults_to_rationals(tmp_path):
    p = write(tmp_path, '[group]\nkind = "cyclic"\nn = 2\n[module]\nkind = "trivial"\n')
    assert parse_spec(p).ring == QQ


def test_malformed_toml_reports_position(tmp_path):
    p = write(tmp_path, '[group]\nkind = "cyclic\n')
    with pytest.raises(ParseError, match="line 2"):
        parse_spec(p)
    code, _, err = call("validate", "--spec", p)
    assert code == 1 and "error" in err


def test_missing_pi_entry(tmp_path):
    p = write(tmp_path, '[group]\nkind = "cyclic"\nn = 3\n[module]\nkind = "partial_rep"\n'
                        '[module.pi]\n"1" = [[1]]\n"g" = [[1]]\n')
    code, data = call_json("validate", "--spec", p)
    assert code == 1
    assert "every group element" in data["error"]["message"]
    assert "g^2" in data["error"]["message"]


def test_axiom_violation_lists_violations(tmp_path):
    p = write(tmp_path, 'ring = "Z"\n[group]\nkind = "cyclic"\nn = 2\n[module]\n'
                        'kind = "partial_rep"\n[module.pi]\n"1" = [[1, 0], [0, 1]]\n'
                        '"g" = [[0, 1], [0, 0]]\n')
    code, data = call_json("validate", "--spec", p)
    assert code == 1
    assert data["error"]["kind"] == "PartialRepAxiomViolation"
    assert [1, 1, "a"] in data["error"]["violations"]


def test_non_prime_field_rejected():
    code, _, err = call("semigroup", "--group", "C2", "--ring", "GF4")
    assert code == 1 and "prime" in err


def test_build_module_kinds():
    G = parse_group_shorthand("C3")
    assert build_module(G, QQ, {"kind": "regular"}).rank == 8
    assert build_module(G, QQ, {"kind": "B"}).rank == 4
    assert build_module(G, GF(2), {"kind": "restricted_translation",
                                   "subset": ["1", "g"]}).rank == 2
    assert build_module(G, QQ, {"kind": "group_algebra"}, "right").side == "right"


# --- commands --------------------------------------------------------------------------

def test_semigroup_c2():
    code, data = call_json("semigroup", "--group", "C2")
    assert code == 0 and (data["order_S"], data["dim_B"]) == (3, 2)
    code, out, _ = call("semigroup", "--group", "C2")
    assert "|S(G)| = 3" in out and "dim B = 2" in out


def test_semigroup_table():
    code, data = call_json("semigroup", "--group", "C3", "--table")
    n = data["order_S"]
    assert n == 8 and len(data["table"]) == n and all(len(r) == n for r in data["table"])


def test_compare_homology_c2_diag():
    code, data = call_json("compare", "homology", "--spec", str(FIX / "c2_diag.toml"))
    assert code == 0 and data["ok"]
    partial = [(r["betti"], r["torsion"]) for r in data["rows"] if r["side"] == "partial"]
    assert partial == [(2, []), (0, [2]), (0, []), (0, [2])]


def test_compare_cohomology_trivial():
    code, data = call_json("compare", "cohomology", "--spec", str(FIX / "c2_trivial.toml"))
    assert code == 0 and data["ok"]


def test_globalize_c2cubed_kernel():
    code, out, _ = call("globalize", "--spec", str(FIX / "c2cubed_nonglobalizable.toml"))
    assert code == 0
    assert "iota kernel rank 1" in out
    assert "(1, 1, 1, -1, -1, -1)" in out


def test_globalize_c3_external():
    code, data = call_json("globalize", "--spec", str(FIX / "c3_two_globalizations.toml"))
    assert code == 0
    ext = {g["name"]: g for g in data["external_globalizations"]}
    assert ext["V"]["ok"] and ext["W"]["ok"]
    assert (ext["W"]["free_rank"], ext["W"]["torsion"]) == (2, [2])
    assert (ext["V"]["free_rank"], ext["V"]["torsion"]) == (3, [])


def test_shapiro_fixture():
    code, data = call_json("shapiro", "--spec", str(FIX / "c4_shapiro.toml"))
    assert code == 0 and data["ok"] and data["subgroup"] == [0, 2]


def test_certify_s3():
    code, data = call_json("certify-projective", "--group", "S3", "--show-hom")
    assert code == 0 and data["ok"] and data["hom_trivial_dim"] == 1


def test_homology_text_lines():
    code, out, _ = call("homology", "--spec", str(FIX / "c2_diag.toml"), "--max-degree", "2")
    assert code == 0
    assert [l for l in out.splitlines() if l.startswith("H_")] == ["H_0 = Z^2", "H_1 = Z/2",
                                                                  "H_2 = 0"]


def test_guardrail_exit_code():
    code, data = call_json("homology", "--group", "S3", "--max-degree", "9")
    assert code == 3 and data["error"]["kind"] == "MatrixTooLarge"


def test_theorem_violation_exit_code(monkeypatch):
    fake = [homology.HomologySummary(5, (), QQ)] * 4
    monkeypatch.setattr(homology, "global_homology", lambda N, n: fake)
    code, out, _ = call("compare", "homology", "--group", "C2")
    assert code == 2 and "NO" in out


def _pretty(ring, betti, torsion):
    name = "Z" if ring == "Z" else ring
    parts = [name if betti == 1 else f"{name}^{betti}"] if betti else []
    parts += [f"Z/{d}" for d in torsion]
    return " + ".join(parts) or "0"


@pytest.mark.parametrize("argv", [("cohomology", "--spec", str(FIX / "c2_trivial.toml")),
                                  ("homology", "--spec", str(FIX / "c2_diag.toml")),
                                  ("compare", "homology", "--spec", str(FIX / "c2_diag.toml"))])
def test_json_matches_text(argv):
    _, data = call_json(*argv)
    _, out, _ = call(*argv)
    text = out.splitlines()
    for r in data["rows"]:
        cell = _pretty(data["ring"], r["betti"], r["torsion"])
        hits = [l for l in text if l.split()[0] in (f"H_{r['degree']}", f"H^{r['degree']}",
                                                    str(r["degree"]))]
        assert hits and cell in hits[0], (r, hits)


def test_output_is_deterministic():
    args = ("globalize", "--spec", str(FIX / "s3_restricted.toml"), "--json")
    assert call(*args)[1] == call(*args)[1]


def test_main_exits_with_code():
    with pytest.raises(SystemExit) as exc:
        cli.main(["semigroup", "--group", "C2", "--json"])
    assert exc.value.code == 0


def test_run_command_on_parsed_problem(tmp_path):
    p = write(tmp_path, 'ring = "Z"\n[group]\nkind = "cyclic"\nn = 2\n[module]\nkind = "trivial"\n')
    spec = parse_spec(p)
    code, out = run_command(spec, "homology", max_degree=1)
    assert code == 0
    assert [(r["betti"], r["torsion"]) for r in out.data["rows"]] == [(1, []), (0, [2])]
    code, out = run_command(spec, "homology", max_degree=-1)
    assert code == 1


def test_prime_check_in_problem_file(tmp_path):
    p = write(tmp_path, 'ring = "GF4"\n[group]\nkind = "cyclic"\nn = 2\n[module]\nkind = "trivial"\n')
    code, data = call_json("validate", "--spec", p)
    assert code == 1 and "p must be prime" in data["error"]["message"]


def test_rational_entries(tmp_path):
    # an idempotent written with fractions: projection onto (1, 1)
    p = write(tmp_path, '[group]\nkind = "cyclic"\nn = 2\n[module]\nkind = "partial_rep"\n'
                        '[module.pi]\n"1" = [[1, 0], [0, 1]]\n'
                        '"g" = [["1/2", "1/2"], ["1/2", "1/2"]]\n')
    code, data = call_json("homology", "--spec", p, "--max-degree", "1")
    assert code == 0 and data["rows"][0]["betti"] == 2
