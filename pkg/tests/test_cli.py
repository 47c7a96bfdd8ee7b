import json
import subprocess
import sys

import pytest

from cayleytm.algebra import TruncatedPoly
from cayleytm.cli import FAILED, OK, USAGE, main
from cayleytm.compiler import compile_machine
from cayleytm.serialize import (FormatError, basis_from_dict, basis_to_dict, group_from_dict,
                                load_group, machine_from_dict, poly_from_dict, poly_to_dict,
                                read_json, standard_from_dict, standard_to_dict)
from conftest import fixture_path as fx


def call(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def call_json(capsys, *argv):
    code, out, _ = call(capsys, *argv, "--format", "json")
    return code, json.loads(out)


class TestDocumentedInvocations:
    def test_validate(self, capsys):
        assert call(capsys, "validate", "--group", fx("z.json"))[0] == OK

    def test_bisim(self, capsys):
        code, out, _ = call(capsys, "bisim", "--machine", fx("succ.json"), "--group", fx("dihedral.json"),
                            "--input", "111", "--fuel", "10000")
        assert code == OK

    def test_escape(self, capsys):
        code, out, _ = call(capsys, "escape", "--group", fx("z.json"), "--element", "+1", "--verify", "2000")
        assert code == OK
        assert "(+1)^ω" in out


class TestSubcommands:
    def test_validate_rejects_finite(self, capsys):
        code, data = call_json(capsys, "validate", "--group", fx("z5.json"))
        assert code == FAILED and data["valid"] is False

    def test_validate_rejects_missing_inverse(self, capsys):
        assert call(capsys, "validate", "--group", fx("z_noinverse.json"))[0] == FAILED

    def test_run_graph_machine(self, capsys):
        code, data = call_json(capsys, "run", "--machine", fx("succ_z.json"), "--group", fx("z.json"),
                               "--cell", "+1=1", "--cell", "+1+1=1")
        assert code == OK
        assert data["halt"] == "terminal"

    def test_run_trace_is_tsv(self, capsys):
        code, out, _ = call(capsys, "run", "--machine", fx("walk_z.json"), "--group", fx("z.json"),
                            "--fuel", "5")
        assert code == OK
        assert out.splitlines()[0].split("\t") == ["step", "state", "head", "read", "write", "move"]

    def test_run_standard_machine(self, capsys):
        code, data = call_json(capsys, "run", "--machine", fx("succ.json"), "--group", fx("z2.json"),
                               "--input", "11")
        assert code == OK and data["halt"] == "terminal"
        assert data["state"] == "C(accept)"

    def test_quiet(self, capsys):
        code, out, _ = call(capsys, "validate", "--group", fx("z.json"), "--quiet")
        assert code == OK and out == ""

    def test_wordproblem(self, capsys):
        code, data = call_json(capsys, "wordproblem", "--group", fx("dihedral.json"), "--u", "abab",
                               "--v", "baba")
        assert code == OK
        assert data["walk"] is False and data["oracle"] == "not-equal"
        code, data = call_json(capsys, "wordproblem", "--group", fx("f2.json"), "--u", "xX", "--v", "")
        assert data["walk"] is True and data["agree"] is True

    def test_treeorder(self, capsys):
        code, data = call_json(capsys, "treeorder", "--group", fx("dihedral.json"), "--depth", "4",
                               "--minimal-path")
        assert data["words"] == ["abab"]
        code, data = call_json(capsys, "treeorder", "--group", fx("z.json"), "--depth", "3", "--r", "3")
        assert data["words"] == ["ε", "-1", "-1 -1"]

    def test_evensubword(self, capsys):
        code, data = call_json(capsys, "evensubword", "--word", "abab", "--depth", "1")
        assert code == OK and (data["start"], data["end"]) == (0, 3)
        assert call(capsys, "evensubword", "--word", "ab", "--depth", "1")[0] == FAILED

    def test_pirillo(self, capsys):
        code, data = call_json(capsys, "evensubword", "--word", "aaaa", "--depth", "1", "--pirillo")
        assert code == OK and (data["first"], data["second"]) == ("aa", "aa")
        assert call(capsys, "evensubword", "--word", "abab", "--depth", "1", "--pirillo")[0] == FAILED

    def test_binomial(self, capsys):
        code, data = call_json(capsys, "algebra", "binomial", "--d", "3")
        assert code == OK and all(data["inverse"].values())

    def test_gs_series(self, capsys):
        code, data = call_json(capsys, "algebra", "gs-series", "--d", "2", "--r", fx("gs_r.json"),
                               "--terms", "50", "--eps", "1/4")
        assert code == OK
        assert data["coefficients"][:4] == [1, 2, 4, 8]
        assert data["nonnegative"] and data["bound_check"]

    def test_relator(self, capsys):
        code, data = call_json(capsys, "algebra", "relator", "--word", "aa", "--rlo", "1", "--degree", "4")
        assert code == OK
        assert data["components"] == [{"degree": 2, "monomials": ["x1^2"]}]
        assert call(capsys, "algebra", "relator", "--word", "a", "--rlo", "1", "--degree", "4")[0] == FAILED

    def test_member(self, capsys):
        code, data = call_json(capsys, "algebra", "member", "--poly", fx("poly_x1_16.json"),
                               "--basis", fx("basis_powers.json"), "--degree", "16")
        assert code == OK and data["member"] is True
        code, data = call_json(capsys, "algebra", "member", "--poly", fx("poly_x1x2.json"),
                               "--basis", fx("basis_powers.json"), "--degree", "16")
        assert data["member"] is False

    def test_escape_tables(self, capsys):
        code, data = call_json(capsys, "escape", "--group", fx("dihedral.json"), "--element", "ab")
        assert code == OK
        assert data["alpha"] == {"0": [], "1": [[0, 0]]}
        assert data["gamma"] == {"0": 1, "1": 0}

    def test_escape_finite_order(self, capsys):
        assert call(capsys, "escape", "--group", fx("dihedral.json"), "--element", "a")[0] == FAILED

    def test_escape_verification_failure(self, capsys):
        code, data = call_json(capsys, "escape", "--group", fx("z23.json"), "--element=-3+2",
                               "--mmax", "1", "--verify", "20")
        assert code == FAILED and data["verified"] is False


class TestUsageErrors:
    def test_no_subcommand(self, capsys):
        assert call(capsys)[0] == USAGE

    def test_unknown_flag(self, capsys):
        assert call(capsys, "validate", "--group", fx("z.json"), "--bogus")[0] == USAGE

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = call(capsys, "validate", "--group", str(tmp_path / "none.json"))
        assert code == USAGE and "validate" in err

    def test_bad_json(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{", encoding="utf-8")
        assert call(capsys, "validate", "--group", str(path))[0] == USAGE

    def test_bad_word(self, capsys):
        assert call(capsys, "wordproblem", "--group", fx("z.json"), "--u", "q", "--v", "")[0] == USAGE

    def test_negative_fuel(self, capsys):
        assert call(capsys, "run", "--machine", fx("walk_z.json"), "--group", fx("z.json"),
                    "--fuel", "-1")[0] == USAGE

    def test_help(self, capsys):
        assert call(capsys, "--help")[0] == OK


class TestRoundTrips:
    def test_compiled_machine_reloads(self, capsys, tmp_path):
        out = tmp_path / "compiled.json"
        assert call(capsys, "compile", "--machine", fx("succ.json"), "--group", fx("dihedral.json"),
                    "--out", str(out))[0] == OK
        data = read_json(out)
        graph = load_group(fx("dihedral.json"))
        spec = machine_from_dict(data, graph)
        assert len(spec.transitions) == len(data["transitions"])
        compiled = compile_machine(standard_from_dict(read_json(fx("succ.json"))), graph)
        assert len(spec.states) == len(compiled.states)

    def test_compiled_json_names_are_unique(self, capsys):
        code, data = call_json(capsys, "compile", "--machine", fx("palindrome.json"),
                               "--group", fx("dihedral.json"))
        assert code == OK
        assert len(set(data["states"])) == len(data["states"])
        assert len(set(data["alphabet"])) == len(data["alphabet"])
        keys = [(row[0], row[1]) for row in data["transitions"]]
        assert len(set(keys)) == len(keys)

    def test_standard_machine(self):
        data = read_json(fx("palindrome.json"))
        tm = standard_from_dict(data)
        assert standard_from_dict(standard_to_dict(tm)) == tm

    def test_poly_and_basis(self):
        p = TruncatedPoly.parse(["1", "x1^2*x2", "x2*x1"], 2, 5)
        assert poly_from_dict(poly_to_dict(p), cap=5) == p
        basis = basis_from_dict(read_json(fx("basis_powers.json")))
        assert basis_from_dict(basis_to_dict(basis)).polys == basis.polys

    def test_json_output_is_deterministic(self, capsys):
        argv = ("escape", "--group", fx("f2.json"), "--element", "xyX", "--format", "json")
        assert call(capsys, *argv) == call(capsys, *argv)


class TestFormats:
    def test_unknown_kind(self):
        with pytest.raises(FormatError):
            group_from_dict({"kind": "lie"})

    def test_missing_inverses(self):
        with pytest.raises(FormatError):
            group_from_dict({"kind": "free_group", "generators": ["x", "X"]})

    def test_bad_move(self):
        with pytest.raises(FormatError):
            machine_from_dict({"states": ["q"], "alphabet": ["_"], "blank": "_", "start": "q",
                               "transitions": [["q", "_", "q", "_", "L"]]}, load_group(fx("z.json")))

    def test_bad_row(self):
        with pytest.raises(FormatError):
            standard_from_dict({"transitions": [["q", "_"]]})


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cayleytm", "validate", "--group", fx("z.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
