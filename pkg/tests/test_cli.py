import json
import subprocess
import sys

import pytest

from normmaps import serialize as ser
from normmaps.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, main
from normmaps.cover import is_covering_category
from normmaps.fincat import (CatFunctor, coset_groupoid, discrete_category, one_object_category,
                             poset_category, projection, terminal_category, to_terminal,
                             wreath_base_category)
from normmaps.groups import cosets, cyclic_group, transversal

S3 = {"degree": 3, "generators": [[[1, 2]], [[1, 2, 3]]]}
C2_IN_S3 = {"generators": [[[1, 2]]]}


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def _run(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def _s3_files(tmp_path):
    g = _write(tmp_path / "g.json", S3)
    h = _write(tmp_path / "h.json", C2_IN_S3)
    return g, h


def test_suite_seed_0_passes(tmp_path, capsys):
    code, rep = _run(["verify-theorem", "--suite", "--seed", "0", "--count", "5"], tmp_path)
    assert code == EXIT_OK
    assert rep["all_total"] and rep["count"] == 6 * 3 * 5
    assert "0 failed" in capsys.readouterr().err


def test_single_case_report(tmp_path):
    g, h = _s3_files(tmp_path)
    code, rep = _run(["verify-theorem", "--group", g, "--subgroup", h, "--instance",
                      "matrix_f2", "--count", "3"], tmp_path)
    assert code == EXIT_OK
    for r in rep["reports"]:
        assert r["total"] and r["upper_triangle"] and r["lower_square"]
        assert r["counterexample"] is None
        assert len(r["G"]) == 6 and len(r["H"]) == 2 and len(r["transversal"]) == 3
        assert r["instance"] == "matrix_f2" and r["case"] == "custom"
    code, rep = _run(["verify-theorem", "--suite", "S3/C2", "--count", "2"], tmp_path, "b.json")
    assert code == EXIT_OK and all(r["total"] for r in rep["reports"])


def test_corrupted_transversal_file_is_an_input_error(tmp_path, capsys):
    g, h = _s3_files(tmp_path)
    G = ser.group_from_json(S3)
    H = ser.subgroup_from_json(G, C2_IN_S3)
    # two representatives of the same coset
    c = cosets(G, H)[1]
    t = _write(tmp_path / "t.json", {"reps": [G.identity, c[0], c[1]]})
    code, rep = _run(["verify-theorem", "--group", g, "--subgroup", h, "--transversal", t],
                     tmp_path)
    assert code == EXIT_INPUT and rep is None
    assert "error" in capsys.readouterr().err
    good = _write(tmp_path / "t2.json", ser.transversal_to_json(transversal(G, H)))
    code, _ = _run(["verify-theorem", "--group", g, "--subgroup", h, "--transversal", good,
                    "--count", "1"], tmp_path)
    assert code == EXIT_OK


@pytest.mark.parametrize("bad", [
    "not json",
    json.dumps({"degree": 3}),
    json.dumps({"generators": [[[1, 5]]], "degree": 3}),
])
def test_malformed_group_file(tmp_path, bad):
    g = tmp_path / "g.json"
    g.write_text(bad)
    h = _write(tmp_path / "h.json", C2_IN_S3)
    assert main(["verify-theorem", "--group", str(g), "--subgroup", h]) == EXIT_INPUT


def test_missing_and_unknown_inputs(tmp_path):
    assert main(["verify-theorem", "--group", str(tmp_path / "nope.json"),
                 "--subgroup", "x"]) == EXIT_INPUT
    assert main(["verify-theorem", "--suite", "A5/e"]) == EXIT_INPUT
    assert main(["verify-theorem"]) == EXIT_INPUT


def test_cap_rejects_large_groups(tmp_path):
    g, h = _s3_files(tmp_path)
    assert main(["verify-theorem", "--group", g, "--subgroup", h, "--cap", "4"]) == EXIT_INPUT


def _covering_file(tmp_path, p, name):
    return _write(tmp_path / name, {"source": ser.category_to_json(p.source),
                                    "target": ser.category_to_json(p.target),
                                    "functor": ser.functor_to_json(p)})


def test_check_covering_commands(tmp_path, capsys):
    G = ser.group_from_json(S3)
    H = ser.subgroup_from_json(G, C2_IN_S3)
    bg = coset_groupoid(transversal(G, H))
    p = CatFunctor(bg, one_object_category(G), [0] * bg.n_objects,
                   [bg.parts(f)[0] for f in range(bg.n_morphisms)])
    code, rep = _run(["check-covering", "--input", _covering_file(tmp_path, p, "a.json")],
                     tmp_path, "ra.json")
    assert code == EXIT_OK and rep["ok"] and rep["n"] == 3

    base = wreath_base_category(2, cyclic_group(2).whole())
    code, rep = _run(["check-covering", "--input",
                      _covering_file(tmp_path, projection(base, 1), "b.json")],
                     tmp_path, "rb.json")
    assert code == EXIT_FAIL and not rep["ok"] and rep["kind"] == "non_discrete_fiber"

    capsys.readouterr()
    code, rep = _run(["check-covering", "--input",
                      _covering_file(tmp_path, to_terminal(discrete_category([])), "c.json")],
                     tmp_path, "rc.json")
    assert code == EXIT_OK and rep["ok"] and rep["n"] == 0
    assert "n = 0" in capsys.readouterr().err


def test_check_covering_malformed(tmp_path):
    cat = ser.category_to_json(poset_category(2))
    cat["compose"] = cat["compose"][:-1]
    f = _write(tmp_path / "bad.json", {"source": cat, "target": cat,
                                       "functor": {"ob_map": [0, 1], "mor_map": [0, 1, 2]}})
    assert main(["check-covering", "--input", f]) == EXIT_INPUT
    f = _write(tmp_path / "bad2.json", {"source": ser.category_to_json(poset_category(2))})
    assert main(["check-covering", "--input", f]) == EXIT_INPUT


def _finset_file(tmp_path, J, sets, maps, name="P.json"):
    return _write(tmp_path / name, {"J": ser.category_to_json(J), "on_objects": sets,
                                    "on_morphisms": maps})


def test_grothendieck_constant_P(tmp_path):
    J = poset_category(3)
    f = _finset_file(tmp_path, J, [4, 4, 4], [[0, 1, 2, 3]] * J.n_morphisms)
    code, out = _run(["grothendieck", "--input", f], tmp_path)
    assert code == EXIT_OK
    assert out["source"]["objects"] == 4 * 3
    assert len(out["source"]["morphisms"]) == 4 * J.n_morphisms
    # round trip through check-covering
    rt = _write(tmp_path / "rt.json", out)
    code, rep = _run(["check-covering", "--input", rt], tmp_path, "rep.json")
    assert code == EXIT_OK and rep["ok"] and rep["n"] == 4


def test_grothendieck_pointwise_terminal(tmp_path):
    J = one_object_category(cyclic_group(3))
    f = _finset_file(tmp_path, J, [1], [[0]] * 3)
    code, out = _run(["grothendieck", "--input", f], tmp_path)
    src = ser.category_from_json(out["source"])
    p = ser.functor_from_json(out["functor"], src, ser.category_from_json(out["target"]))
    # the projection is bijective on objects and morphisms, so an isomorphism
    assert code == EXIT_OK
    assert sorted(p.ob_map) == list(range(J.n_objects))
    assert sorted(p.mor_map) == list(range(J.n_morphisms))
    assert p.audit() is None


def test_grothendieck_cat_mode(tmp_path):
    J = poset_category(2)
    star = terminal_category()
    C = one_object_category(cyclic_group(2))
    data = {"J": ser.category_to_json(J),
            "on_objects": [ser.category_to_json(star), ser.category_to_json(C)],
            "on_morphisms": [ser.functor_to_json(F) for F in
                             (CatFunctor.identity(star), CatFunctor(star, C, [0], [0]),
                              CatFunctor.identity(C))]}
    f = _write(tmp_path / "P.json", data)
    code, out = _run(["grothendieck", "--mode", "cat", "--input", f], tmp_path)
    assert code == EXIT_OK
    assert out["source"]["objects"] == 2 and len(out["source"]["morphisms"]) == 5


def test_grothendieck_invalid_P(tmp_path):
    J = one_object_category(cyclic_group(2))
    # the generator acts by a non-involution on a 3-element set
    f = _finset_file(tmp_path, J, [3], [[0, 1, 2], [1, 2, 0]])
    assert main(["grothendieck", "--input", f]) == EXIT_INPUT


def test_norm_both_is_equal(tmp_path):
    for case in ("C4/C2", "S3/C2", "Q8/C4"):
        for inst in ("matrix_f2", "pointed_set"):
            code, out = _run(["norm", "--suite", case, "--instance", inst, "--seed", "3"],
                             tmp_path)
            assert code == EXIT_OK and out["verdict"] == "equal"
            assert out["hhr"] == out["gm"]


def test_norm_n1_returns_the_input(tmp_path):
    g = _write(tmp_path / "g.json", S3)
    h = _write(tmp_path / "h.json", {"generators": S3["generators"]})
    G = ser.group_from_json(S3)
    from normmaps.suite import seeded_diagram
    from normmaps.monoidal import get_instance
    X = seeded_diagram(one_object_category(G), get_instance("matrix_f3"), 1)
    xf = _write(tmp_path / "x.json", ser.diagram_to_json(X))
    for construction in ("hhr", "gm"):
        code, out = _run(["norm", "--group", g, "--subgroup", h, "--diagram", xf, "--instance",
                          "matrix_f3", "--construction", construction], tmp_path)
        assert code == EXIT_OK
        assert out == json.loads((tmp_path / "x.json").read_text())


def test_norm_trivial_one_dim(tmp_path):
    x = _write(tmp_path / "x.json", {"instance": "matrix_f2", "on_objects": [1],
                                     "on_morphisms": [[[1]], [[1]]]})
    code, out = _run(["norm", "--suite", "S3/C2", "--diagram", x], tmp_path)
    assert code == EXIT_OK
    for key in ("hhr", "gm"):
        assert out[key]["on_objects"] == [1]
        assert all(m == [[1]] for m in out[key]["on_morphisms"])


def test_norm_shape_mismatch(tmp_path):
    x = _write(tmp_path / "x.json", {"instance": "matrix_f2", "on_objects": [1],
                                     "on_morphisms": [[[1]]] * 3})
    assert main(["norm", "--suite", "S3/C2", "--diagram", x]) == EXIT_INPUT
    assert main(["norm", "--suite", "--instance", "matrix_f2"]) == EXIT_INPUT


def test_determinism(tmp_path):
    argv = ["verify-theorem", "--suite", "S3/C3", "--seed", "7", "--count", "4"]
    main([*argv, "--out", str(tmp_path / "a.json")])
    main([*argv, "--out", str(tmp_path / "b.json")])
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    assert not any(p.name.startswith(".tmp-") for p in tmp_path.iterdir())


def test_module_entry_point(tmp_path):
    out = tmp_path / "o.json"
    proc = subprocess.run([sys.executable, "-m", "normmaps", "verify-theorem", "--suite",
                           "C2/e", "--count", "2", "--out", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(out.read_text())["all_total"]
    proc = subprocess.run([sys.executable, "-m", "normmaps", "norm", "--suite", "C2/e",
                           "--construction", "hhr"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["on_objects"]
