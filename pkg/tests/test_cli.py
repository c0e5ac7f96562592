import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from grafcat import jsonio
from grafcat.bm import BMMorphism, bm_corolla, bm_identity, bm_point, compose_bm
from grafcat.cospan_equiv import phi, phi1_graph
from grafcat.etale import identity_etale
from grafcat.graph_core import corolla
from grafcat.kleisli import identity_refinement

SRC = str(Path(__file__).resolve().parent.parent / "src")
ENV = dict(os.environ, PYTHONPATH=SRC)


def run(*argv, expect=0):
    proc = subprocess.run(
        [sys.executable, "-m", "grafcat.cli", *argv],
        capture_output=True, text=True, env=ENV,
    )
    assert proc.returncode == expect, (argv, proc.returncode, proc.stderr)
    return proc


@pytest.fixture
def save(tmp_path):
    def _save(name, doc):
        path = tmp_path / name
        path.write_text(jsonio.dumps(doc))
        return str(path)

    return _save


def make_contract(LOOP):
    return BMMorphism(LOOP, bm_point(), {}, {"v": "v"}, {"f1": "f2", "f2": "f1"})


# -- validate -------------------------------------------------------------------

def test_validate_ok(save):
    proc = run("validate", save("c3.json", jsonio.graph_to_json(corolla(3))))
    assert json.loads(proc.stdout)["ok"] is True


def test_validate_reports_problems(save):
    doc = jsonio.graph_to_json(corolla(1))
    doc["involution"] = {"1": "1", "1*": "1*"}
    proc = run("validate", save("bad.json", doc), expect=1)
    assert "fixpoint-free" in proc.stdout


def test_parse_errors_exit_two(tmp_path):
    empty = tmp_path / "broken.json"
    empty.write_text("{}")
    assert run("validate", str(empty), expect=2).returncode == 2
    notjson = tmp_path / "notjson.json"
    notjson.write_text("{nope")
    assert run("validate", str(notjson), expect=2).returncode == 2
    assert run("validate", str(tmp_path / "absent.json"), expect=2).returncode == 2


def test_validate_classifies_morphisms(save, LOOP):
    proc = run("validate", save("m.json", jsonio.bm_morphism_to_json(make_contract(LOOP))))
    cls = json.loads(proc.stdout)["classification"]
    assert cls["contraction"] and cls["compression"] and not cls["grafting"]


def test_file_references_resolve(save, LOOP):
    save("loop.json", jsonio.bm_graph_to_json(LOOP))
    save("pt.json", jsonio.bm_graph_to_json(bm_point()))
    doc = jsonio.bm_morphism_to_json(make_contract(LOOP))
    doc["source"] = {"$file": "loop.json"}
    doc["target"] = {"$file": "pt.json"}
    proc = run("validate", save("m.json", doc))
    assert json.loads(proc.stdout)["ok"] is True


# -- compose / factorise / phi / pushout --------------------------------------------

def test_compose(save, LOOP):
    m = save("m.json", jsonio.bm_morphism_to_json(make_contract(LOOP)))
    ident = save("id.json", jsonio.bm_morphism_to_json(bm_identity(bm_point())))
    proc = run("compose", m, ident)
    assert jsonio.bm_morphism_from_json(json.loads(proc.stdout)) == make_contract(LOOP)


def test_compose_rejects_mismatched(save, LOOP):
    m = save("m.json", jsonio.bm_morphism_to_json(make_contract(LOOP)))
    other = save("id.json", jsonio.bm_morphism_to_json(bm_identity(bm_corolla(2))))
    assert run("compose", m, other, expect=1).returncode == 1


def test_factorise(save, LOOP):
    contract = make_contract(LOOP)
    proc = run("factorise", save("m.json", jsonio.bm_morphism_to_json(contract)))
    doc = json.loads(proc.stdout)
    middle = jsonio.bm_graph_from_json(doc["middle"])
    assert middle.involution == {"f1": "f2", "f2": "f1"}
    g = jsonio.bm_morphism_from_json(doc["grafting"])
    c = jsonio.bm_morphism_from_json(doc["compression"])
    assert compose_bm(g, c) == contract


def test_phi(save, LOOP):
    contract = make_contract(LOOP)
    proc = run("phi", save("m.json", jsonio.bm_morphism_to_json(contract)))
    assert jsonio.cospan_from_json(json.loads(proc.stdout)) == phi(contract)


def test_pushout_identity(save, LOOP):
    jl = phi1_graph(LOOP)
    r = save("r.json", jsonio.refinement_to_json(identity_refinement(jl)))
    c = save("c.json", jsonio.etale_to_json(identity_etale(jl)))
    proc = run("pushout", r, c)
    doc = json.loads(proc.stdout)
    assert jsonio.refinement_from_json(doc["refinement"]) == identity_refinement(jl)


# -- enumeration and equivalence ------------------------------------------------------

def test_enumerate_deterministic():
    proc = run("enumerate", "--max-vertices", "1", "--max-flags", "2")
    assert len(json.loads(proc.stdout)) == 5
    again = run("enumerate", "--max-vertices", "1", "--max-flags", "2")
    assert proc.stdout == again.stdout


def test_hom_count(save):
    c2 = save("c2.json", jsonio.bm_graph_to_json(bm_corolla(2)))
    proc = run("hom-count", c2, c2)
    doc = json.loads(proc.stdout)
    assert doc["bm_count"] == 2
    assert doc["cospan_count"] == 2
    assert doc["bijection_verified"]


def test_check_equivalence_output():
    proc = run("check-equivalence", "--max-vertices", "1", "--max-flags", "2")
    rows = proc.stdout.strip().split("\n")
    assert len(rows) == 26    # header line + 25 pair lines
    assert "graphs" in json.loads(rows[0])
    assert all(json.loads(r)["bijection_verified"] for r in rows[1:])
    assert "all pairs pass" in proc.stderr


# -- dot export -------------------------------------------------------------------------

def test_export_dot(save, LOOP):
    proc = run("export-dot", save("c3.json", jsonio.graph_to_json(corolla(3))))
    assert "--" in proc.stdout and "invis" in proc.stdout
    again = run("export-dot", save("c3b.json", jsonio.graph_to_json(corolla(3))))
    assert proc.stdout == again.stdout
    loop = run("export-dot", save("loop.json", jsonio.bm_graph_to_json(LOOP)))
    assert loop.stdout.count("--") == 1


def test_output_flag(save, tmp_path):
    out = tmp_path / "out.json"
    run("validate", save("c3.json", jsonio.graph_to_json(corolla(3))), "-o", str(out))
    assert json.loads(out.read_text())["ok"] is True


def test_unknown_subcommand():
    assert run("frobnicate", expect=2).returncode == 2
