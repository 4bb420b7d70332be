"""File format round trips, schema diagnostics, CLI determinism and exit codes."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from ainfcat.cli import parse_space
from ainfcat.core import verify_ainf
from ainfcat.fileformat import (
    InputError,
    category_to_json,
    load_category,
    load_morphism,
    morphism_to_json,
)
from ainfcat.fixtures import FIXTURES, coproduct_morphism, dual_numbers, ground_ring
from ainfcat.strata import annulus, bidisc, disc, interpolation, punctured_disc


def dump(cat, morphisms=None) -> bytes:
    return json.dumps(category_to_json(cat, morphism_tables=morphisms)).encode()


def run_cli(args: list[str]):
    proc = subprocess.run(
        [sys.executable, "-m", "ainfcat.cli", *args],
        capture_output=True,
        text=True,
    )
    return proc


# -- format round trips -------------------------------------------------------


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_round_trip(name):
    cat = FIXTURES[name]()
    loaded = load_category(dump(cat))
    assert loaded.category.objects == sorted(cat.objects)
    assert sum(1 for _ in loaded.category.generators()) == sum(1 for _ in cat.generators())
    assert verify_ainf(loaded.category, 3).passed
    for d in cat.mu:
        assert loaded.category.mu.get(d, {}) == cat.mu[d]


def test_morphism_round_trip():
    phi = coproduct_morphism("cone_algebra", 1)
    cat = phi.source.cat
    tables = [morphism_to_json("m1", "*", phi)]
    loaded = load_category(dump(cat, morphisms=tables))
    phi2 = load_morphism(loaded, "m1")
    assert phi2.n == 1
    assert phi2.components.keys() == phi.components.keys()


def test_undeclared_generator_rejected():
    raw = category_to_json(ground_ring())
    raw["operations"][0]["terms"][0]["inputs"][0] = ["*", "*", "ghost"]
    with pytest.raises(InputError) as exc:
        load_category(json.dumps(raw).encode())
    assert "ghost" in str(exc.value)


def test_schema_violation_has_path():
    raw = category_to_json(ground_ring())
    raw["ring"] = "Z7"
    with pytest.raises(InputError) as exc:
        load_category(json.dumps(raw).encode())
    assert "/ring" in str(exc.value)


def test_degree_rule_violation_rejected():
    raw = category_to_json(ground_ring())
    raw["hom"][0]["generators"].append({"name": "bad", "degree": 5})
    raw["operations"][0]["terms"].append(
        {"inputs": [["*", "*", "e"], ["*", "*", "e"]], "output": ["*", "*", "bad"], "coefficient": 1}
    )
    with pytest.raises(InputError):
        load_category(json.dumps(raw).encode())


# -- space spec parsing --------------------------------------------------------


def test_parse_space_forms():
    assert parse_space("R_4") == disc(4)
    assert parse_space("R4") == disc(4)
    assert parse_space("R_2|1|1") == bidisc(2, 1)
    assert parse_space("R_{2|1|1}") == bidisc(2, 1)
    assert parse_space("R_3^1") == punctured_disc(3)
    assert parse_space("C_2^-") == annulus(2)
    assert parse_space("C2") == annulus(2)
    assert parse_space("P_3") == interpolation(3)


# -- CLI behaviour ---------------------------------------------------------------


def test_cli_validate_pass_and_determinism(tmp_path):
    path = tmp_path / "cat.json"
    path.write_bytes(dump(dual_numbers()))
    first = run_cli(["validate", str(path), "--json"])
    second = run_cli(["validate", str(path), "--json"])
    assert first.returncode == 0
    assert first.stdout == second.stdout
    payload = json.loads(first.stdout)
    assert payload["verdict"] == "pass"


def test_cli_validate_detects_mutation(tmp_path):
    raw = category_to_json(dual_numbers())
    for term in raw["operations"][0]["terms"]:
        if term["inputs"][0][2] == "e" and term["inputs"][1][2] == "eps":
            term["coefficient"] = -term["coefficient"]
            break
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(raw))
    proc = run_cli(["validate", str(path)])
    assert proc.returncode == 1
    assert "witness" in proc.stdout


def test_cli_schema_error_exit_2(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{\"format\": \"nope\"}")
    proc = run_cli(["validate", str(path)])
    assert proc.returncode == 2
    assert "input error" in proc.stderr


def test_cli_hh_ground_ring(tmp_path):
    path = tmp_path / "ground.json"
    path.write_bytes(dump(ground_ring()))
    proc = run_cli(["hh", str(path), "--max-length", "3", "--json"])
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["groups"]["0"] == "Z"
    assert payload["stable"]["0"] is True
    assert all(v == "0" for k, v in payload["groups"].items() if k != "0")


def test_cli_strata_table():
    proc = run_cli(["strata", "R_4", "--json"])
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["count"] == 5


def test_cli_strata_bad_space():
    proc = run_cli(["strata", "Q_7"])
    assert proc.returncode == 2


def test_cli_generate_emit_and_separate_process_replay(tmp_path):
    catpath = tmp_path / "split.json"
    run_cli(["fixture", "split_summand_pair", "-o", str(catpath)])
    cert = tmp_path / "cert.json"
    emit = run_cli(
        ["generate", str(catpath), "--object", "K", "--subcategory", "L", "--max-length", "1", "--emit", str(cert), "--json"]
    )
    assert emit.returncode == 0
    payload = json.loads(emit.stdout)
    assert payload["verdict"] == "generated"
    # replay through a fresh process
    replay = run_cli(["generate", str(catpath), "--object", "K", "--replay", str(cert), "--json"])
    assert replay.returncode == 0
    assert json.loads(replay.stdout)["verdict"] == "generated"
    # a tampered certificate is refuted
    data = json.loads(cert.read_text())
    data["tau"][0]["coefficient"] *= 3
    cert.write_text(json.dumps(data))
    bad = run_cli(["generate", str(catpath), "--object", "K", "--replay", str(cert), "--json"])
    assert bad.returncode == 1
    assert json.loads(bad.stdout)["verdict"] == "refuted-at-bound"


def test_cli_generate_inconclusive_exit_1(tmp_path):
    catpath = tmp_path / "zero.json"
    run_cli(["fixture", "two_object_with_zero", "-o", str(catpath)])
    proc = run_cli(["generate", str(catpath), "--object", "K", "--subcategory", "Z0", "--max-length", "2", "--json"])
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["verdict"] == "inconclusive"


def test_cli_cardy_telescoping(tmp_path):
    catpath = tmp_path / "dual.json"
    run_cli(["fixture", "dual_numbers", "-o", str(catpath)])
    proc = run_cli(["cardy", str(catpath), "--morphism", "coproduct_n1", "--max-length", "2", "--json"])
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["homotopy_equation"]["passed"] and payload["homology_comparison"]["passed"]


def test_cli_cardy_chain_map_tables(tmp_path):
    # explicit closed complex + map tables: a miniature self-configuration
    from ainfcat.bimodules import hom_complex, mu_composition_map, tensor_over_category, yoneda_module
    from ainfcat.complexes import compose
    from ainfcat.hochschild import cc_of_delta, truncated_cc

    phi = coproduct_morphism("dual_numbers", 1)
    cat = phi.source.cat
    cc = truncated_cc(cat, 2)
    tcx = tensor_over_category(yoneda_module(cat, "*", "right"), yoneda_module(cat, "*", "left"), 2)
    mucc = compose(mu_composition_map(cat, "*", tcx), cc_of_delta(phi, cc, tcx))
    hom_cx = hom_complex(cat, "*", "*")

    closed = {
        "basis": [{"name": g.name, "degree": g.degree} for k in hom_cx.degrees() for g in hom_cx.basis[k]],
        "differential": [],
    }
    oc_entries = []
    for k in cc.degrees():
        for w in cc.basis[k]:
            for g, c in mucc.chain(w).items():
                oc_entries.append(
                    {"word": [[x.source, x.target, x.name] for x in w], "output": g.name, "coefficient": c}
                )
    co_entries = [
        {"input": g.name, "output": [g.source, g.target, g.name], "coefficient": 1}
        for k in hom_cx.degrees()
        for g in hom_cx.basis[k]
    ]
    raw = category_to_json(cat, morphism_tables=[morphism_to_json("m", "*", phi)])
    raw["cardy"] = {
        "morphism": "m",
        "degree": 1,
        "closed_complex": closed,
        "chain_maps": {"oc": sorted(oc_entries, key=str), "co": co_entries},
    }
    path = tmp_path / "cardy.json"
    path.write_text(json.dumps(raw))
    proc = run_cli(["cardy", str(path), "--morphism", "m", "--max-length", "2", "--json"])
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["verdict"] == "pass"


def test_cli_threads_env_validated(tmp_path):
    path = tmp_path / "g.json"
    path.write_bytes(dump(ground_ring()))
    proc = subprocess.run(
        [sys.executable, "-m", "ainfcat.cli", "validate", str(path)],
        capture_output=True, text=True, env={"AINFCAT_THREADS": "bogus", "PATH": "/usr/bin:/bin"},
    )
    assert proc.returncode == 2


def test_cli_hh_ring_override(tmp_path):
    path = tmp_path / "dn.json"
    path.write_bytes(dump(dual_numbers()))
    proc = run_cli(["hh", str(path), "--max-length", "2", "--ring", "F2", "--json"])
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert all("Z/2" in v or v == "0" for v in payload["groups"].values())


def test_with_ring_reduction():
    from ainfcat.core import with_ring

    cat = with_ring(dual_numbers(), "F2")
    assert cat.ring == "F2"
    assert verify_ainf(cat, 4).passed
    with pytest.raises(ValueError):
        with_ring(cat, "Z")
