import json

from click.testing import CliRunner

from geophylo.cli import main

from test_instance_io import T3_DOC


def _write_t3(tmp_path):
    path = tmp_path / "t3.geo"
    path.write_text(T3_DOC)
    return str(path)


def test_generate_round_trips(tmp_path):
    out = str(tmp_path / "u.geo")
    r = CliRunner().invoke(main, [
        "generate", "--kind", "uniform", "--n", "8", "--seed", "4", "-o", out,
    ])
    assert r.exit_code == 0, r.output
    from geophylo.instance_io import read_instance

    assert read_instance(out).n == 8


def test_optimize_exact_t3(tmp_path):
    r = CliRunner().invoke(main, [
        "optimize", _write_t3(tmp_path), "--mode", "s", "--solver", "ilp",
    ])
    assert r.exit_code == 0, r.output
    body = json.loads(r.output)
    assert body["crossings"] == 1 and body["optimal"]


def test_optimize_internal_with_pin(tmp_path):
    cons = tmp_path / "cons.json"
    cons.write_text(json.dumps({"pins": {"l3": 1}}))
    r = CliRunner().invoke(main, [
        "optimize", _write_t3(tmp_path), "--mode", "internal",
        "--measure", "xhop", "--constraints", str(cons),
    ])
    assert r.exit_code == 0, r.output
    assert json.loads(r.output)["order"][0] == "l3"


def test_exit_codes(tmp_path):
    bad = tmp_path / "bad.geo"
    bad.write_text("tree ((l1,l2,l3);\nmap 4 4\n")
    r = CliRunner().invoke(main, ["optimize", str(bad)])
    assert r.exit_code == 1

    cons = tmp_path / "cons.json"
    cons.write_text(json.dumps({"pins": {"l1": 1, "l2": 1}}))
    r = CliRunner().invoke(main, [
        "optimize", _write_t3(tmp_path), "--constraints", str(cons),
    ])
    assert r.exit_code == 2


def test_render_to_file(tmp_path):
    out = str(tmp_path / "t3.svg")
    r = CliRunner().invoke(main, [
        "render", _write_t3(tmp_path), "--mode", "po", "-o", out,
    ])
    assert r.exit_code == 0, r.output
    assert "<svg" in open(out).read()


def test_bench_rows(tmp_path):
    r = CliRunner().invoke(main, [
        "bench", "--kind", "coastline", "--sizes", "10", "--seeds", "2",
        "--solvers", "ilp,td", "--mode", "s",
    ])
    assert r.exit_code == 0, r.output
    lines = r.output.strip().splitlines()
    assert lines[0].startswith("instance,solver,")
    assert len(lines) == 1 + 2 * 2
    # heuristic never beats exact on the same instance
    rows = [dict(zip(lines[0].split(","), l.split(","))) for l in lines[1:]]
    by_inst = {}
    for row in rows:
        by_inst.setdefault(row["instance"], {})[row["solver"]] = int(row["crossings"])
    for vals in by_inst.values():
        assert vals["td"] >= vals["ilp"]


def test_reduce_maxcut(tmp_path):
    graph = tmp_path / "k3.txt"
    graph.write_text("1 2\n1 3\n2 3\n")
    out = str(tmp_path / "k3.geo")
    r = CliRunner().invoke(main, [
        "reduce-maxcut", str(graph), "-c", "2", "--mode", "po", "-o", out,
    ])
    assert r.exit_code == 0, r.output
    body = json.loads(r.output)
    assert body["k_threshold"] == 13 and body["k_fix"] == 9
    from geophylo.instance_io import read_instance

    assert read_instance(out).n == 40
