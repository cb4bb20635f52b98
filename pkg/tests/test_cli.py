import io

import pytest

from seqweb.cli import Config, config_from_args, main

ARITH = "www.dau.com/arith"


def run_cli(config, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = main(config, io.StringIO(stdin), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def paths(pages_dir):
    return [str(pages_dir), str(pages_dir / "scoping")]


def test_query1(paths):
    cfg = Config(paths, query="%s => www.dau.com/query1." % ARITH)
    code, out, err = run_cli(cfg, "5\n")
    assert code == 0 and err == ""
    assert out.splitlines() == ["5", "fib:", "8", "yes"]


def test_query2_prints_degree(paths):
    cfg = Config(paths, query="%s => www.dau.com/query2." % ARITH)
    code, out, _ = run_cli(cfg, "5\n")
    assert out.splitlines() == ["5", "its fib:", "8", "twin prime", "yes", "degree: (ok |> ok)"]


def test_nurse_session(pages_dir, paths):
    cfg = Config(paths + [str(pages_dir / "nurse.swb")], query="www.dau.com/query3.")
    code, out, _ = run_cli(cfg, "Kim\n150\n130\n")
    assert code == 0
    assert out.splitlines()[:2] == ["150", "130"]


def test_answers_and_failure(pages_dir):
    cfg = Config([str(pages_dir / "arith.swb")], query="fib(10, Y).")
    assert run_cli(cfg) == (0, "Y = 89\nyes\n", "")
    cfg = Config([str(pages_dir / "arith.swb")], query="fib(3, 4).")
    assert run_cli(cfg) == (1, "no\n", "")


def test_errors_exit_2(pages_dir, tmp_path):
    code, _, err = run_cli(Config(query="p(."))
    assert code == 2 and err.startswith("error:")
    code, _, err = run_cli(Config(query="X is Y + 1."))
    assert code == 2 and "unbound" in err
    bad = tmp_path / "bad.swb"
    bad.write_text("p(a).")
    assert run_cli(Config([str(bad)], query="p(a)."))[0] == 2


def test_script_input(paths, tmp_path):
    script = tmp_path / "in.txt"
    script.write_text("5\n")
    cfg = Config(paths, query="%s => www.dau.com/query1." % ARITH, script=str(script))
    assert run_cli(cfg)[1].splitlines()[:3] == ["5", "fib:", "8"]


def test_trace_on_stderr(paths):
    cfg = Config(paths, query="%s => www.dau.com/query1." % ARITH, trace=True)
    _, _, err = run_cli(cfg, "5\n")
    lines = err.splitlines()
    assert lines[0] == "0 read 5"
    assert "write fib:" in " ".join(lines)


def test_map_loader(pages_dir):
    cfg = Config(url_maps=["www.dau.com=%s" % pages_dir], query="%s => www.dau.com/query1." % ARITH)
    assert run_cli(cfg, "3\n")[1].splitlines() == ["3", "fib:", "3", "yes"]


def test_repl(pages_dir):
    cfg = Config([str(pages_dir / "arith.swb")])
    code, out, err = run_cli(cfg, "fib(5, X).\ncube(2,\n Y), Z is Y.\nnope(.\nhalt.\nfib(1, X).\n")
    assert code == 0
    assert "X = 8" in out and "Z = 8" in out
    assert "|  " in out
    assert err.count("error:") == 1
    assert out.count("yes") == 2


def test_deterministic(paths):
    cfg = Config(paths, query="%s => www.dau.com/query2." % ARITH, trace=True)
    assert run_cli(cfg, "5\n") == run_cli(cfg, "5\n")


def test_args():
    cfg = config_from_args(["--load", "a", "--load", "b", "--query", "p.", "--trace",
                            "--no-occurs-check", "--max-depth", "7"])
    assert cfg.page_paths == ["a", "b"] and cfg.trace and not cfg.occurs_check
    assert cfg.limits.max_depth == 7
    with pytest.raises(SystemExit):
        config_from_args(["--max-steps", "0"])
