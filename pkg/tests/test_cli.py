import io
import json
import random

import pytest
from conftest import posets
from hypothesis import given
from hypothesis import strategies as st

from finspace.cli import (InputError, Workspace, format_data, format_group, format_map,
                          format_poset, main, parse_data, parse_group, parse_map, parse_poset,
                          parse_workspace)
from finspace.poset import monotone_maps
from finspace.sheafdata import random_data
from finspace.zlin import FgAbGroup, IntMatrix

CONE = """
poset C { a b c d m ; a<c a<d b<c b<d c<m d<m }
poset Sig { 0 1 ; 0<1 }
map f : C -> Sig { a:0 b:0 c:0 d:0 m:1 }
map g : C -> pt { a:p b:p c:p d:p m:p }
"""


def run(argv, files=None, tmp_path=None):
    args = []
    for k, text in enumerate(files or []):
        p = tmp_path / f"in{k}.fs"
        p.write_text(text)
        args += ["-f", str(p)]
    out, err = io.StringIO(), io.StringIO()
    code = main(args + argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@st.composite
def groups(draw):
    orders = draw(st.lists(st.sampled_from([0, 0, 2, 3, 4, 12]), max_size=4))
    return FgAbGroup.from_orders(orders)


@given(groups())
def test_group_literal_round_trip(g):
    h = parse_group(format_group(g))
    assert h.invariants == g.invariants
    assert h.relations == g.relations


def test_group_literals():
    assert parse_group("Z/2 + Z^2").invariants == (2, (2,))
    assert parse_group("0").is_zero()
    g = parse_group("Z^2/[[2, 0], [2, 4]]")
    assert g.invariants == (0, (2, 4))
    assert parse_group(format_group(g)).relations == g.relations
    with pytest.raises(InputError):
        parse_group("Q")


@given(posets(max_size=6))
def test_poset_round_trip(x):
    assert parse_poset(format_poset(x, "X")) == x


@given(posets(max_size=4), posets(max_size=3))
def test_map_round_trip(x, y):
    ws = Workspace.with_builtins()
    ws.posets["X"], ws.posets["Y"] = x, y
    for k, f in enumerate(monotone_maps(x, y)[:5]):
        assert parse_map(format_map(f, f"f{k}", "X", "Y"), ws) == f


@given(posets(max_size=5), st.integers(0, 10 ** 6))
def test_data_round_trip(x, seed):
    f = random_data(x, random.Random(seed))
    ws = Workspace.with_builtins()
    ws.posets["X"] = x
    g = parse_data(format_data(f, "F", "X"), ws)
    assert g.stalks == f.stalks
    assert all(g.res(i, j) == f.res(i, j) for i, j in x.covers())


def test_flat_row_and_column_matrices():
    ws = parse_workspace("data F on Sigma { 0: Z ; 1: Z^2 ; 0->1: [1 2] }")
    assert ws.data["F"].res(0, 1) == IntMatrix([[1], [2]])


def test_error_line_numbers():
    text = "poset X { a b ; a<b }\n\nmap f : X -> Y { a:p }\n"
    with pytest.raises(InputError) as e:
        parse_workspace(text, source="in.fs")
    assert e.value.line == 3
    assert str(e.value).startswith("in.fs:3:")
    with pytest.raises(InputError) as e:
        parse_workspace("poset X { a b ; a<b }\ndata F on X {\n a: Z ; b: Z\n a->b: [1 2 3] }")
    assert e.value.line == 4


def test_non_monotone_map_is_an_input_error():
    with pytest.raises(InputError):
        parse_workspace("map f : Sigma -> Sigma { 0:1 1:0 }")


def test_non_functorial_data_is_an_input_error():
    with pytest.raises(InputError):
        parse_workspace("data F on Sigma { 0: Z/2 ; 1: Z ; 0->1: [1] }")


def test_exit_codes(tmp_path):
    assert run(["cohomology", "S1"])[0] == 0
    assert run(["classify", "f"], [CONE], tmp_path)[0] == 0
    assert run(["verify", "base-change", "f"], [CONE], tmp_path)[0] == 1
    assert run(["verify", "base-change", "g"], [CONE], tmp_path)[0] == 0
    assert run(["cohomology", "nowhere"])[0] == 2
    assert run(["no-such-command"])[0] == 2
    code, _, err = run(["cohomology", "X"], ["poset X { a b ;\n a<b\n b<a }"], tmp_path)
    assert code == 2 and ":1:" in err


def test_cohomology_output():
    code, out, _ = run(["homology", "S1", "Z/2"])
    assert code == 0
    assert "H_1" in out and "Z/2" in out
    code, out, _ = run(["--json", "cohomology", "S2"])
    rows = json.loads(out)["degrees"]
    assert [(r["degree"], r["group"]) for r in rows] == [(0, "Z"), (1, "0"), (2, "Z")]


def test_json_is_deterministic(tmp_path):
    a = run(["verify", "supports", "f", "--json"], [CONE], tmp_path)[1]
    b = run(["verify", "supports", "f", "--json"], [CONE], tmp_path)[1]
    assert a == b
    data = json.loads(a)
    assert data["consistent"] is True


def test_golden_base_change_failures(tmp_path):
    code, out, _ = run(["--json", "verify", "base-change", "f"], [CONE], tmp_path)
    w = json.loads(out)["sides"]["cohomology"]["witness"]
    assert (w["degree"], w["source"], w["target"]) == (1, {"0": [1, []]}, {"0": [1, []], "1": [1, []]})
    j = "poset T { c g ; c<g }\nposet G { g }\nmap j : G -> T { g:g }\n"
    code, out, _ = run(["--json", "verify", "base-change", "j"], [j], tmp_path)
    w = json.loads(out)["sides"]["cohomology"]["witness"]
    assert (w["degree"], w["y"], w["source"], w["target"]) == (0, "c", {"0": [1, []]}, {})


def test_sphere_and_barycentric_output_parse_back():
    code, out, _ = run(["sphere", "2", "--name", "S"])
    assert code == 0
    x = parse_poset(out)
    assert len(x) == 6
    code, out, _ = run(["barycentric", "S1"])
    ws = parse_workspace(out)
    assert any(len(p) == 8 for p in ws.posets.values())


def test_fiber_and_duality_commands(tmp_path):
    code, out, _ = run(["verify", "fiber", "g"], [CONE], tmp_path)
    assert code == 0
    assert run(["verify", "duality", "S2"])[0] == 0
    assert run(["verify", "top-duality", "S1"])[0] == 0
    assert run(["dualizing", "S1"])[0] == 0
    assert run(["local-cohomology", "S1", "--closed", "a"])[0] == 0
    assert run(["direct-image", "g", "Z"], [CONE], tmp_path)[0] == 0
