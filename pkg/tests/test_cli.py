import json

import pytest

from fundgroup.domain.models import OutputFormat
from fundgroup.services.cli.main import main, session_config, _parse_args


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_decompose_text(capsys):
    code, out = run(capsys, "decompose", "[[0,3/2],[2/3,0]]")
    assert code == 0
    assert out == "perm=(1 2) diag=3/2,2/3\n"


def test_decompose_json_document(capsys):
    code, out = run(capsys, "--format", "json", "decompose", "[0,3/2;2/3,0]")
    document = json.loads(out)
    assert code == 0
    assert document["schema_version"] == 1
    assert document["kind"] == "decompose"
    assert document["result"]["diag"] == ["3/2", "2/3"]
    assert len(document["config_hash"]) == 32


def test_flags_after_the_subcommand():
    args = _parse_args(["decompose", "[1]", "--bound-units", "3", "--format", "json"])
    config = session_config(args)
    assert config.bounds.units == 3
    assert config.output_format == OutputFormat.JSON
    assert config.bounds.primes == 16


def test_envelope_of_sample(capsys):
    code, out = run(capsys, "envelope", "m2m3.alg")
    assert code == 0
    assert "status         exact (realized)" in out
    assert "closed form    matches" in out


def test_envelope_too_many_traces(capsys):
    code, out = run(capsys, "envelope", "n7.alg")
    assert code == 3
    assert out == ""


def test_envelope_max_n_flag(capsys):
    code, _ = run(capsys, "envelope", "m2m3.alg", "--max-n", "1")
    assert code == 3


def test_bad_literal_is_a_usage_error(capsys):
    code, out = run(capsys, "decompose", "[[1,x],[0,1]]")
    assert code == 2
    assert out == ""


def test_not_monomial(capsys):
    code, _ = run(capsys, "decompose", "[[1,1],[0,1]]")
    assert code != 0


def test_invalid_session_flag(capsys):
    code, _ = run(capsys, "--stages", "0", "bratteli", "dims", "small.brt")
    assert code == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_stab_and_transporter(capsys):
    code, out = run(capsys, "stab", "[1;sqrt(5)] default=0")
    assert code == 0
    assert "<2+sqrt(5)>" in out
    code, out = run(capsys, "transporter", "[1] default=0", "[1] default=0 except 2:inf")
    assert code == 0
    assert "proven" in out.lower() or "empty" in out.lower()


def test_group_commands(capsys):
    code, out = run(capsys, "--format", "json", "conjugate", "S2", "perm=e diag=2,3")
    assert code == 0
    cosets = json.loads(out)["result"]["group"]["cosets"]
    assert [c["text"] for c in cosets][-1] == "perm=(1 2) diag=3/2,2/3"

    code, out = run(capsys, "--format", "json", "detgroup", "perm=e diag=2,2; S2")
    assert code == 2

    code, out = run(capsys, "--format", "json", "detgroup", "perm=e diag=2,2")
    assert json.loads(out)["result"]["det_group"]["generators"] == ["4"]


def test_weightediso(capsys):
    code, out = run(capsys, "weightediso", "S2", "perm=(1 2) diag=3/2,2/3")
    assert code == 0
    assert "P " in out


def test_dual(capsys):
    code, out = run(capsys, "--format", "json", "dual", "weighted.alg")
    assert code == 0
    assert json.loads(out)["result"]["rows"] == [["9/5", "-3/5"], ["-4/5", "8/5"]]


def test_bratteli_dims(capsys):
    code, out = run(capsys, "--format", "json", "bratteli", "dims", "small.brt")
    assert code == 0
    stages = json.loads(out)["result"]["stages"]
    assert [row["dims"] for row in stages] == [[1, 1], [3, 3], [9, 9], [36, 36]]


def test_bratteli_simple(capsys):
    code, out = run(capsys, "bratteli", "simple", "small.brt")
    assert code == 0
    assert "simple         yes" in out


def test_bratteli_check_needs_closed_form(capsys):
    code, _ = run(capsys, "bratteli", "check", "small.brt")
    assert code == 3


def test_bratteli_check_simpleaf(capsys):
    code, out = run(capsys, "--stages", "3", "bratteli", "check", "simpleaf.brt")
    assert code == 0
    assert "compatible     yes" in out


def test_bratteli_samples_membership(capsys):
    code, out = run(capsys, "bratteli", "samples", "simpleaf.brt", "--stage", "1", "--vector", "1,1")
    assert code == 0
    assert "member         yes" in out


def test_selftest_small_run(capsys):
    code, out = run(capsys, "selftest", "--cases", "5", "--equivariance-cases", "2", "--seed", "7")
    assert code == 0
    assert out.rstrip().endswith("checks passed")


def test_weightediso_search_failure_exits_unknown(capsys):
    code, out = run(capsys, "--format", "json", "weightediso", "perm=e diag=2,1; perm=e diag=1,3", "perm=e diag=2,3; perm=e diag=1,2")
    assert code == 4
    assert json.loads(out)["result"]["status"] == "unknown_within_bounds"
