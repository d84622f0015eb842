"""Command-line driver: subcommands, stream discipline, exit codes."""

from __future__ import annotations

import subprocess
import sys

import pytest

from caext.cli import main
from caext.errors import ResourceLimit

CHAIN = """\
(set-logic QF_ABV)
(declare-const v Bool)
(declare-const w Bool)
(declare-const a (Array (_ BitVec 2) Bool))
(declare-const i1 (_ BitVec 2))
(declare-const j1 (_ BitVec 2))
(declare-const i2 (_ BitVec 2))
(declare-const j2 (_ BitVec 2))
(declare-const u1 Bool)
(declare-const u2 Bool)
(declare-const u3 Bool)
(declare-const u4 Bool)
(assert (= (store ((as const (Array (_ BitVec 2) Bool)) v) i1 u1)
           (store a j1 u2)))
(assert (= (store a i2 u3)
           (store ((as const (Array (_ BitVec 2) Bool)) w) j2 u4)))
{extra}(check-sat)
{get_model}"""


def chain_file(tmp_path, *, extra="", get_model=False, name="f.smt2"):
    path = tmp_path / name
    path.write_text(CHAIN.format(
        extra=extra, get_model="(get-model)\n" if get_model else ""))
    return path


def const_eq_file(tmp_path, *, negate_defaults=True):
    path = tmp_path / "consts.smt2"
    neg = "(assert (not (= v w)))\n" if negate_defaults else ""
    path.write_text(
        "(declare-const v Bool)\n(declare-const w Bool)\n"
        "(assert (= ((as const (Array Bool Bool)) v)"
        " ((as const (Array Bool Bool)) w)))\n"
        f"{neg}(check-sat)\n")
    return path


class TestSolve:
    def test_sat_chain_with_equal_defaults(self, tmp_path, capsys):
        path = chain_file(tmp_path, extra="(assert (= v w))\n")
        assert main(["solve", str(path)]) == 0
        out = capsys.readouterr()
        assert out.out == "sat\n"
        assert out.err == ""

    def test_sat_chain_with_distinct_defaults(self, tmp_path, capsys):
        path = chain_file(tmp_path, extra="(assert (not (= v w)))\n")
        assert main(["solve", str(path)]) == 0
        assert capsys.readouterr().out == "sat\n"

    def test_unsat_const_array_equality(self, tmp_path, capsys):
        path = const_eq_file(tmp_path)
        assert main(["solve", str(path)]) == 0
        out = capsys.readouterr()
        assert out.out == "unsat\n"
        assert out.err == ""

    def test_get_model_prints_definitions(self, tmp_path, capsys):
        path = chain_file(tmp_path, get_model=True)
        assert main(["solve", str(path)]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "sat"
        defs = [l for l in out[1:] if l]
        assert len(defs) == 11
        assert all(l.startswith("(define-fun ") for l in defs)

    def test_model_roundtrips_through_validate(self, tmp_path, capsys):
        path = chain_file(tmp_path, get_model=True,
                          extra="(assert (not (= v w)))\n")
        assert main(["solve", str(path)]) == 0
        lines = capsys.readouterr().out.splitlines()[1:]
        model_path = tmp_path / "model.smt2"
        model_path.write_text("\n".join(lines) + "\n")
        assert main(["validate", str(path), str(model_path)]) == 0
        assert capsys.readouterr().out == "valid\n"

    def test_stats_go_to_stderr(self, tmp_path, capsys):
        path = chain_file(tmp_path, extra="(assert (not (= v w)))\n")
        assert main(["solve", str(path), "--stats", "--check-model"]) == 0
        out = capsys.readouterr()
        assert out.out == "sat\n"
        assert "refinements:" in out.err
        assert "lemmas.const_congruence: 1" in out.err

    def test_replay_flag_accepted(self, tmp_path, capsys):
        path = chain_file(tmp_path)
        assert main(["solve", str(path), "--replay-reasons", "off",
                     "--stats"]) == 0
        out = capsys.readouterr()
        assert out.out == "sat\n"
        assert "replay-reasons: off" in out.err

    def test_budget_zero_reports_unknown(self, tmp_path, capsys):
        path = tmp_path / "wide.smt2"
        decls = "\n".join(f"(declare-const x{k} (_ BitVec 3))"
                          for k in range(8))
        pairs = "\n".join(
            f"(assert (not (= x{a} x{b})))"
            for a in range(8) for b in range(a + 1, 8))
        path.write_text(f"{decls}\n{pairs}\n(check-sat)\n")
        assert main(["solve", str(path), "--budget", "0"]) == 0
        assert capsys.readouterr().out == "unknown\n"

    def test_missing_file_is_usage_error(self, tmp_path, capsys):
        assert main(["solve", str(tmp_path / "missing.smt2")]) == 1
        out = capsys.readouterr()
        assert out.out == ""
        assert "error" in out.err

    def test_malformed_file_is_usage_error(self, tmp_path, capsys):
        path = tmp_path / "broken.smt2"
        path.write_text("(assert (= x y)\n")
        assert main(["solve", str(path)]) == 1
        out = capsys.readouterr()
        assert out.out == ""
        assert "unclosed" in out.err

    def test_resource_limit_maps_to_exit_3(self, tmp_path, capsys,
                                           monkeypatch):
        import caext.cli as cli_module

        def boom(*args, **kwargs):
            raise ResourceLimit("refinement limit exceeded")

        monkeypatch.setattr(cli_module, "check_sat", boom)
        path = chain_file(tmp_path)
        assert main(["solve", str(path)]) == 3
        assert "resource limit" in capsys.readouterr().err


class TestValidate:
    def test_wrong_model_names_failing_assertion(self, tmp_path, capsys):
        path = const_eq_file(tmp_path, negate_defaults=False)
        model_path = tmp_path / "model.smt2"
        model_path.write_text(
            "(define-fun v () Bool true)\n(define-fun w () Bool false)\n")
        assert main(["validate", str(path), str(model_path)]) == 0
        out = capsys.readouterr().out
        assert out.startswith("invalid (= ")

    def test_missing_constants_are_zero_filled(self, tmp_path, capsys):
        path = tmp_path / "f.smt2"
        path.write_text("(declare-const x Bool)\n(declare-const y Bool)\n"
                        "(assert (= x y))\n(check-sat)\n")
        model_path = tmp_path / "m.smt2"
        model_path.write_text("(define-fun x () Bool false)\n")
        assert main(["validate", str(path), str(model_path)]) == 0
        assert capsys.readouterr().out == "valid\n"

    def test_model_with_array_value(self, tmp_path, capsys):
        path = tmp_path / "f.smt2"
        path.write_text(
            "(declare-const a (Array Bool Bool))\n"
            "(assert (= (select a true) true))\n"
            "(assert (= (select a false) false))\n(check-sat)\n")
        model_path = tmp_path / "m.smt2"
        model_path.write_text(
            "(define-fun a () (Array Bool Bool) "
            "(store ((as const (Array Bool Bool)) true) false false))\n")
        assert main(["validate", str(path), str(model_path)]) == 0
        assert capsys.readouterr().out == "valid\n"


class TestFuzz:
    def test_summary_line(self, capsys):
        assert main(["fuzz", "--count", "20", "--seed", "11"]) == 0
        out = capsys.readouterr()
        assert out.err == ""
        assert out.out.startswith("20 instances: 20 agree, 0 disagree")

    def test_bad_bounds_flag(self, capsys):
        assert main(["fuzz", "--count", "1", "--bounds", "nope=3"]) == 1
        assert "usage error" in capsys.readouterr().err

    def test_bounds_override_accepted(self, capsys):
        assert main(["fuzz", "--count", "5", "--seed", "2",
                     "--bounds", "max_free_constants=5"]) == 0
        assert "5 instances: 5 agree" in capsys.readouterr().out


class TestGen:
    def test_writes_parseable_native_file(self, tmp_path, capsys):
        assert main(["gen", "--crafted", "1,1,1,1",
                     "--out", str(tmp_path)]) == 0
        written = capsys.readouterr().out.strip()
        assert written.endswith("crafted_z1_1-1-1_bv2_bool_0.smt2")
        assert main(["solve", written]) == 0
        assert capsys.readouterr().out == "sat\n"

    def test_quantified_variant(self, tmp_path, capsys):
        assert main(["gen", "--crafted", "0,0,0", "--quantified",
                     "--index-sort", "bv1", "--element-sort", "bv1",
                     "--out", str(tmp_path)]) == 0
        written = capsys.readouterr().out.strip()
        text = (tmp_path / written.split("/")[-1]).read_text()
        assert "as const" not in text
        assert text.count("forall") == 2

    def test_seed_lands_in_filename(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("CAEXT_SEED", "5")
        assert main(["gen", "--crafted", "0,0,0",
                     "--out", str(tmp_path)]) == 0
        assert capsys.readouterr().out.strip().endswith("_5.smt2")
        assert main(["gen", "--crafted", "0,0,0", "--seed", "7",
                     "--out", str(tmp_path)]) == 0
        assert capsys.readouterr().out.strip().endswith("_7.smt2")

    def test_bad_shape_rejected(self, tmp_path, capsys):
        assert main(["gen", "--crafted", "2,1,1",
                     "--out", str(tmp_path)]) == 1
        assert "usage error" not in capsys.readouterr().out

    def test_bad_sort_rejected(self, tmp_path, capsys):
        assert main(["gen", "--crafted", "0,0,0", "--index-sort", "int",
                     "--out", str(tmp_path)]) == 1
        assert "unknown sort" in capsys.readouterr().err


class TestSeedPlumbing:
    def test_env_seed_must_be_integer(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("CAEXT_SEED", "eleven")
        path = chain_file(tmp_path)
        assert main(["solve", str(path)]) == 1
        assert "CAEXT_SEED" in capsys.readouterr().err

    def test_flag_overrides_bad_env(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("CAEXT_SEED", "eleven")
        path = chain_file(tmp_path)
        assert main(["solve", str(path), "--seed", "4"]) == 0
        assert capsys.readouterr().out == "sat\n"


class TestEntryPoint:
    def test_module_invocation(self, tmp_path):
        path = const_eq_file(tmp_path)
        proc = subprocess.run(
            [sys.executable, "-m", "caext.cli", "solve", str(path)],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert proc.stdout == "unsat\n"

    def test_unknown_command(self):
        proc = subprocess.run(
            [sys.executable, "-m", "caext.cli", "frobnicate"],
            capture_output=True, text=True)
        assert proc.returncode == 1
        assert proc.stdout == ""
