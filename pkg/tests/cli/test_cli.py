import io
import json
from pathlib import Path

import pytest

import laurentcf.cli
from laurentcf import VERSION, config
from laurentcf.cli import RunConfig, build_parser, dispatch, get_registered_commands, register_command
from laurentcf.errors import ConfigError

SCHEMA = json.loads((Path(laurentcf.cli.__file__).parent / "schema.json").read_text())


@pytest.fixture(autouse=True)
def clear_config():
    config.clear()
    yield
    config.clear()


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = dispatch(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run_cli(*argv, "--json")
    assert code == 0, err
    return json.loads(out)


def test_measure():
    """q=2, k=2, m=3 has 16 quotient pairs and measure 1/4."""
    payload = run_json("measure", "--q", "2", "--k", "2", "--m", "3")
    assert payload == {
        "q": 2,
        "k": 2,
        "m": 3,
        "event": "equal",
        "count": 16,
        "measure_num": "1",
        "measure_den": "4",
        "tail_num": "3",
        "tail_den": "4",
    }


def test_measure_human():
    code, out, _ = run_cli("measure", "--k", "2", "--m", "3")
    assert code == 0
    assert out == "count=16 measure=1/4 (0.25) tail=3/4 (0.75)\n"


def test_measure_tail_from():
    """Degree sums of two quotients reach 3 except on the 4 cylinders of degrees (1, 1)."""
    payload = run_json("measure", "--k", "2", "--tail-from", "3")
    assert payload == {"q": 2, "k": 2, "m": 3, "event": "tail", "measure_num": "3", "measure_den": "4"}
    code, out, _ = run_cli("measure", "--q", "3", "--tail-from", "2")
    assert code == 0
    assert out == "tail(m>=2)=1/3 (0.333333333333)\n"


@pytest.mark.parametrize(
    "argv,flag",
    [
        (["--tail-from", "0"], "--tail-from"),
        (["--m", "0"], "--m"),
    ],
)
def test_measure_rejects_empty_range(argv, flag):
    code, _, err = run_cli("measure", *argv)
    assert code == 2
    assert flag in err


def test_measure_targets_are_exclusive(capsys):
    assert dispatch(["measure", "--m", "3", "--tail-from", "3"]) == 2
    assert "not allowed with" in capsys.readouterr().err


def test_dimension_linear():
    payload = run_json("dimension", "--q", "2", "--k", "1", "--phi", "linear:1")
    assert payload["value"] == pytest.approx(0.8232, abs=5e-5)
    assert payload["case"] == "0<B<inf"
    assert payload["estimate"] is False


def test_dimension_G():
    payload = run_json("dimension", "--phi", "exp:2", "--set", "G")
    assert payload["value"] == {"num": "1", "den": "3"}


def test_dimension_extras():
    payload = run_json("dimension", "--k", "2", "--phi", "linear:1", "--M", "40", "--gamma")
    assert payload["s_kM"] < payload["value"]
    assert payload["gamma"]["s_tilde"] > payload["value"]


def test_dimension_truncation_without_root():
    code, _, err = run_cli("dimension", "--phi", "linear:50", "--M", "2")
    assert code == 1
    assert "CaseError" in err and "increase M" in err


def test_dimension_extras_need_finite_B():
    code, _, err = run_cli("dimension", "--phi", "exp:2", "--M", "10")
    assert code == 2
    assert "--M" in err


def test_expand_human():
    code, out, _ = run_cli("expand", "--x", "z/z^2+1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "[0; z, z]"
    assert lines[1] == "certified 2 of 2 (terminated)"
    assert lines[-1] == "P_2/Q_2 = (z)/(z^2+1)"


def test_expand_series():
    payload = run_json("expand", "--q", "3", "--x", "int=z; frac=1,0,0,0,0,0")
    assert payload["int_part"] == "z"
    assert payload["quotients"][0] == "z"
    assert payload["terminated"] is False


def test_expand_csv():
    code, out, _ = run_cli("expand", "--x", "z/z^3+1", "--csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "i,quotient,degree,certified"
    assert lines[1:] == ["1,z^2,2,True", "2,z,1,True"]


def test_measure_sweep_csv():
    code, out, _ = run_cli("measure", "--k", "2", "--sweep", "1..3", "--csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "q,k,m,count,measure.num,measure.den"
    assert len(lines) == 4


def test_count_brute():
    payload = run_json("count", "--q", "3", "--k", "2", "--m", "3", "--brute")
    assert payload["count"] == payload["brute"] == 2 * 4 * 27
    assert payload["agree"] is True


def test_cantor_holder():
    payload = run_json(
        "cantor", "--k", "2", "--B", "1", "--M", "2", "--eps", "0.05",
        "--depth", "5", "--relaxed", "3", "--start", "1",
    )
    assert payload["strict"] is False
    assert payload["n_seq"] == [3]
    assert len(payload["rows"]) == 5


def test_cantor_bad_eps():
    code, _, err = run_cli("cantor", "--B", "1", "--M", "4", "--eps", "0.9", "--depth", "3")
    assert code == 2
    assert "--eps" in err


def test_mc_degree():
    payload = run_json("mc", "--n-samples", "300", "--stat", "degree", "--max-degree", "4")
    assert payload["total"] == 300
    assert [r["degree"] for r in payload["rows"]] == [1, 2, 3, 4]


def test_mc_tail_needs_phi():
    code, _, err = run_cli("mc", "--n-samples", "10", "--stat", "tail")
    assert code == 2
    assert "--phi" in err


def test_dirichlet_witness():
    payload = run_json("dirichlet", "--x", "z/z^2+1", "--t", "4")
    assert payload["witness"]["P"] == "1"
    assert payload["witness"]["Q"] == "z"
    assert payload["witness"]["error"] == {"num": "1", "den": "4"}
    assert payload["distance_to_lattice"] == {"num": "1", "den": "2"}


def test_dirichlet_criterion():
    payload = run_json(
        "dirichlet", "--x", "int=0; frac=1,0,1,0,0,0,1,0", "--phi", "scaled:1/2", "--n-range", "1..4"
    )
    assert payload["holds"] is False
    assert payload["first_failure"] == 1
    assert payload["finite_range"] is True


def test_dirichlet_needs_an_action():
    code, _, err = run_cli("dirichlet", "--x", "z/z^2+1")
    assert code == 2


def test_dirichlet_bad_t():
    code, _, err = run_cli("dirichlet", "--x", "z/z^2+1", "--t", "1")
    assert code == 2
    assert "--t" in err


def test_domain_failure_exits_1():
    code, _, err = run_cli("dirichlet", "--x", "int=0; frac=1,0,1,0", "--t", "100")
    assert code == 1
    assert "CertificationError" in err


class TestExitCodes:
    def test_bad_q(self):
        code, out, err = run_cli("measure", "--q", "4", "--m", "3")
        assert code == 2
        assert out == ""
        assert "--q" in err and "not prime" in err

    def test_bad_number(self):
        code, _, err = run_cli("expand", "--x", "int=z; frac=2")
        assert code == 2
        assert "--x" in err

    def test_unknown_command(self, capsys):
        assert dispatch(["frobnicate"]) == 2

    def test_missing_command(self, capsys):
        assert dispatch([]) == 2

    def test_version(self, capsys):
        assert dispatch(["--version"]) == 0
        assert capsys.readouterr().out.strip() == f"laurentcf {VERSION}"


@pytest.mark.parametrize(
    "argv",
    [
        ["expand", "--x", "z/z^2+1"],
        ["measure", "--k", "2", "--m", "3"],
        ["measure", "--k", "2", "--tail-from", "3"],
        ["measure", "--sweep", "1..3"],
        ["count", "--m", "4", "--brute"],
        ["dimension", "--phi", "linear:1"],
        ["cantor", "--k", "2", "--B", "1", "--M", "2", "--eps", "0.05", "--depth", "5", "--relaxed", "3", "--check", "mass"],
        ["mc", "--n-samples", "200", "--stat", "indep"],
        ["dirichlet", "--x", "z/z^2+1", "--t", "4", "--distance", "2"],
    ],
)
def test_json_matches_schema(argv):
    payload = run_json(*argv)
    schema = SCHEMA["commands"][argv[0]]
    assert set(schema["required"]) <= set(payload)
    alternatives = [set(alt["required"]) for alt in schema.get("oneOf", [])]
    if alternatives:
        assert sum(alt <= set(payload) for alt in alternatives) == 1


def test_schema_lists_every_command():
    build_parser()
    assert set(SCHEMA["commands"]) == set(get_registered_commands())


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("LAURENTCF_BUDGET", "10")
    config.clear()
    code, _, err = run_cli("count", "--m", "6", "--brute")
    assert code == 2
    assert "--brute" in err
    code, out, _ = run_cli("count", "--m", "6", "--brute", "--budget", "100")
    assert code == 0
    assert "agree=True" in out


def test_output_is_reproducible():
    argv = ["mc", "--n-samples", "400", "--seed", "5", "--stat", "indep", "--json"]
    assert run_cli(*argv)[1] == run_cli(*argv)[1]


def test_out_file(tmp_path):
    path = tmp_path / "measure.json"
    code, out, _ = run_cli("measure", "--k", "2", "--m", "3", "--json", "--out", str(path))
    assert code == 0
    assert out == ""
    assert json.loads(path.read_text())["count"] == 16


def test_output_mode_from_environment(monkeypatch):
    monkeypatch.setenv("LAURENTCF_OUTPUT", "json")
    config.clear()
    _, out, _ = run_cli("measure", "--k", "2", "--m", "3")
    assert json.loads(out)["count"] == 16


class TestRunConfig:
    def test_parse(self):
        run = RunConfig.parse("q=3,k=2,output=json,precision=auto")
        assert (run.q, run.k, run.output, run.precision) == (3, 2, "json", None)

    def test_empty(self):
        assert RunConfig.parse("") == RunConfig()

    @pytest.mark.parametrize(
        "raw,flag",
        [("q=4", "--q"), ("k=0", "--k"), ("output=xml", "--output"), ("q=x", "--q"), ("bogus=1", "--run")],
    )
    def test_errors(self, raw, flag):
        with pytest.raises(ConfigError) as info:
            RunConfig.parse(raw)
        assert info.value.flag == flag


def test_register_command_rejects_duplicates():
    build_parser()
    with pytest.raises(ValueError):

        @register_command("measure")
        class Again:
            help = "duplicate"
