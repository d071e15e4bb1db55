import json

import pytest

from n2zhu import cli


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("N2ZHU_CACHE_DIR", str(tmp_path))
    return tmp_path


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_jacobi(capsys, cache_dir):
    code, out, _ = _run(capsys, "algebra", "check-jacobi", "--algebra", "ns2", "--p", "3",
                        "--pp", "2", "--window", "4")
    rep = json.loads(out)
    assert code == 0 and rep["violations"] == [] and rep["window"] == 4


def test_invalid_p_exits_2(capsys, cache_dir):
    code, out, err = _run(capsys, "singular", "search", "--module", "vacuum-ns2", "--p", "1",
                          "--pp", "1", "--level", "3", "--charge", "0")
    assert code == 2
    assert "p >= 2" in err and not out


def test_bad_usage_exits_2(capsys, cache_dir):
    assert _run(capsys, "zhu")[0] == 2
    assert _run(capsys, "char", "--module", "verma-ns2", "--p", "3", "--pp", "2",
                "--max-level", "x/y")[0] == 2


def test_singular_search_and_cache(capsys, cache_dir):
    argv = ("singular", "search", "--module", "vac", "--p", "4", "--pp", "1",
            "--level", "3", "--charge", "0")
    code, first, _ = _run(capsys, *argv)
    assert code == 0
    rep = json.loads(first)
    assert rep["dimension"] == 1
    assert set(rep["vectors"][0]) == {"J[-3]", "L[-3]", "G+[-3/2] G-[-3/2]", "L[-2] J[-1]",
                                      "J[-1] J[-1] J[-1]"}
    assert any(cache_dir.iterdir())
    code, second, _ = _run(capsys, *argv)
    assert second == first
    code, third, _ = _run(capsys, *argv, "--no-cache")
    assert third == first


def test_corrupt_cache_is_a_miss(capsys, cache_dir):
    argv = ("char", "--module", "verma-ns2", "--h", "1/3", "--j", "1/5", "--p", "3",
            "--pp", "2", "--max-level", "2")
    code, first, _ = _run(capsys, *argv)
    assert code == 0
    files = [f for f in cache_dir.rglob("*") if f.is_file()]
    assert files
    for f in files:
        f.write_text("garbage")
    code, again, _ = _run(capsys, *argv)
    assert code == 0 and again == first


def test_char_csv(capsys, cache_dir):
    code, out, _ = _run(capsys, "char", "--module", "verma-ns2", "--h", "1/3", "--j", "1/5",
                        "--p", "3", "--pp", "2", "--max-level", "1", "--format", "csv")
    rows = out.strip().splitlines()
    assert code == 0 and rows[0] == "level,charge,dim"
    assert "1,1/5,3" in rows


def test_zhu_sigma(capsys, cache_dir):
    code, out, _ = _run(capsys, "zhu", "sigma", "--p", "4", "--pp", "1", "--express-singular")
    rep = json.loads(out)
    assert code == 0 and rep["proportional_to_reference"] is True


def test_fz_fusion_negative_j(capsys, cache_dir):
    code, out, _ = _run(capsys, "fz", "fusion", "--j", "-1/3")
    rep = json.loads(out)
    assert code == 0 and rep["dimension"] == 2
    assert sorted(rep["summands"]) == ["C_1/3", "Pi C(-1)"]


def test_bgg_verify(capsys, cache_dir):
    code, out, _ = _run(capsys, "bgg", "verify", "--variant", "n2-parabolic", "--p", "3",
                        "--pp", "2", "--r", "1", "--max-level", "3")
    assert code == 0 and json.loads(out)["match"] is True


def test_reproduce_single(capsys, cache_dir):
    code, out, _ = _run(capsys, "reproduce", "--criterion", "5")
    assert code == 0 and "PASS" in out


def test_window_parsing():
    assert cli._join_negative_values(["--window", "-1/2", "3/2", "--no-cache"]) == \
        ["--window=-1/2,3/2", "--no-cache"]
    assert cli._join_negative_values(["--odd", "--j", "-1/3"]) == ["--odd", "--j=-1/3"]


def test_run_is_deterministic(tmp_path):
    cfg = cli.RunConfig(command="char", p=3, pp=2, module="verma-ns2", h=1, j=0, max_level=2,
                        cache_dir=str(tmp_path))
    assert cli.run(cfg, use_cache=False) == cli.run(cfg, use_cache=False) == cli.run(cfg)
