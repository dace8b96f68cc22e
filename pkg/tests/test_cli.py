import json

import pytest

from autarc.autoarc import endo_presentation
from autarc.cli import CacheError, CountCache, Scenario, ValidationError, main, resolve_settings, build_parser
from autarc.count import BudgetExceeded
from autarc.fatpoints import monomial_fatpoint
from autarc.zeta import cusp_closed_form


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def result(out):
    return json.loads(out)["result"]


def test_truncate(capsys):
    code, out, _ = run(capsys, "truncate", "y^2 - x^3", "3")
    assert code == 0 and result(out)["rank"] == 7
    code, out, _ = run(capsys, "truncate", "y^2 - x^3", "0")
    assert result(out)["rank"] == 1
    code, _, err = run(capsys, "truncate", "y^2 - x^3 + 1", "3")
    assert code == 2 and "origin" in err
    code, out, _ = run(capsys, "truncate", "(y - 1)^2 - x^3", "3", "--translate", "0,1")
    assert code == 0 and result(out)["rank"] == 7
    code, _, _ = run(capsys, "truncate", "y^2 - z", "3")
    assert code == 2


def test_presentation_commands(capsys):
    code, out, _ = run(capsys, "endo", "--monomial", "1,2")
    pres = result(out)
    assert code == 0 and len(pres["variables"]) == 2 and len(pres["equations"]) == 2
    code, out, _ = run(capsys, "jet", "y^2 - x^3", "2")
    pres = result(out)
    assert len(pres["variables"]) == 6 and len(pres["equations"]) == 3
    code, out, _ = run(capsys, "hom", "--monomial", "1,3", "--target-vars", "u")
    assert result(out)["equations"] == []
    code, out, _ = run(capsys, "aut", "--germ", "y^2 - x^3", "--level", "2")
    assert code == 0 and result(out)["variables"][-1]["name"] == "z"
    code, out, _ = run(capsys, "endo", "--ideal", "x^2", "--ideal", "y^2", "--latex")
    assert code == 0 and out.startswith(r"\begin{aligned}")
    code, _, _ = run(capsys, "endo", "--germ", "y^2 - x^3")
    assert code == 2
    code, _, _ = run(capsys, "endo", "--ideal", "x^2")
    assert code == 2  # y is free: not zero-dimensional


def test_count_and_cache(tmp_path, capsys):
    pres = tmp_path / "e3.json"
    cache = tmp_path / "cache.jsonl"
    assert main(["endo", "--monomial", "1,3", "--out", str(pres)]) == 0
    code, out, _ = run(capsys, "count", str(pres), "--primes", "2,3,5", "--cache", str(cache))
    assert code == 0
    assert [s["count"] for s in result(out)["samples"]] == [4, 9, 25]
    first = tmp_path / "r1.json"
    second = tmp_path / "r2.json"
    main(["count", str(pres), "--primes", "2,3,5", "--cache", str(cache), "--out", str(first)])
    main(["count", str(pres), "--primes", "2,3,5", "--cache", str(cache), "--out", str(second)])
    assert first.read_bytes() == second.read_bytes()
    meta = json.loads((tmp_path / "r2.json.meta.json").read_text())
    assert meta["cache"]["hits"] == 3 and meta["cache"]["misses"] == 0
    assert len(cache.read_text().splitlines()) == 3


def test_budget_exceeded_is_recorded(tmp_path, capsys):
    pres = tmp_path / "big.json"
    cache = tmp_path / "cache.jsonl"
    main(["endo", "--germ", "y^2 - x^3", "--level", "4", "--out", str(pres)])
    code, out, _ = run(capsys, "count", str(pres), "--primes", "3", "--budget", "10", "--cache", str(cache))
    assert code == 1
    assert result(out)["samples"] == [{"q": 3, "status": "budget_exceeded", "budget": 10}]
    rec = json.loads(cache.read_text())
    assert rec["status"] == "budget_exceeded" and rec["count"] is None


def test_cache_integrity(tmp_path):
    path = tmp_path / "cache.jsonl"
    a = endo_presentation(monomial_fatpoint(1, 3).algebra)
    b = endo_presentation(monomial_fatpoint(1, 4).algebra)
    cache = CountCache(str(path))
    assert cache.counter(10 ** 6)(a, 3) == 9
    with pytest.raises(CacheError):
        cache.store(a, 3, 10, 10 ** 6)
    # a forged record whose digest points at a different presentation
    rec = json.loads(path.read_text())
    rec["digest"] = b.digest
    rec["q"] = 5
    with open(path, "a") as fh:
        fh.write(json.dumps(rec) + "\n")
    with pytest.raises(CacheError):
        CountCache(str(path)).lookup(b, 5, 10 ** 6)
    # contradictory counts in the file are refused at load time
    rec = json.loads(path.read_text().splitlines()[0])
    rec["count"] = 8
    with open(path, "a") as fh:
        fh.write(json.dumps(rec) + "\n")
    with pytest.raises(CacheError):
        CountCache(str(path))


def test_cached_budget_failures_are_reused_only_for_smaller_budgets(tmp_path):
    cache = CountCache(str(tmp_path / "c.jsonl"))
    pres = endo_presentation(monomial_fatpoint(1, 3).algebra)
    cache.store(pres, 3, None, 100)
    with pytest.raises(BudgetExceeded):
        cache.counter(50)(pres, 3)
    assert cache.counter(10 ** 6)(pres, 3) == 9


def test_class_command(tmp_path, capsys):
    pres = tmp_path / "e3.json"
    samples = tmp_path / "s.json"
    main(["endo", "--monomial", "1,3", "--out", str(pres)])
    code, out, _ = run(capsys, "class", str(pres))
    assert code == 0 and result(out)["class"] == "L^2"
    code, out, _ = run(capsys, "class", str(pres), "--claimed", "L^2", "--primes", "2,3,5")
    assert code == 0 and result(out)["passed"]
    code, out, _ = run(capsys, "class", str(pres), "--claimed", "L^3", "--primes", "2,3")
    assert code == 1 and not result(out)["passed"]
    main(["count", str(pres), "--primes", "2,3,5,7", "--out", str(samples)])
    code, out, _ = run(capsys, "class", "--samples", str(samples))
    assert code == 0 and result(out)["class"] == "L^2" and result(out)["degree_bound"] == 2
    code, _, _ = run(capsys, "class", "--samples", str(samples), "--degree-bound", "1")
    assert code == 1
    code, _, _ = run(capsys, "class", "--samples", str(samples), "--degree-bound", "3")
    assert code == 2


def test_zeta_command(tmp_path, capsys):
    scenario = tmp_path / "cusp.json"
    scenario.write_text(json.dumps({
        "germ": "y^2 - x^3", "levels": 2, "claimed": {"0": "1", "1": "L^4", "2": "L^7"},
        "primes": [2, 3], "policy": {"kind": "explicit", "n": [1, 3, 5]}}))
    code, out, _ = run(capsys, "zeta", "--scenario", str(scenario))
    assert code == 0 and result(out)["series"]["coefficients"] == ["L^-1", "L", "L^2"]
    code, out, _ = run(capsys, "zeta", "--scenario", str(scenario), "--policy", "degree", "--latex")
    assert out.strip() == "1 + t + t^{2} + O(t^{3})"
    code, out, _ = run(capsys, "zeta", "--germ", "y - x^2", "--series", "classical", "--fiber-dim", "1",
                       "--levels", "3")
    assert result(out)["series"]["coefficients"] == ["L"] * 4
    code, _, _ = run(capsys, "zeta", "--scenario", str(scenario), "--policy-n", "1,2")
    assert code == 2
    code, _, _ = run(capsys, "zeta", "--scenario", str(scenario), "--claim", "1=L^5")
    assert code == 1


def test_fit_command(tmp_path, capsys):
    path = tmp_path / "series.json"
    path.write_text(json.dumps(cusp_closed_form().expand(14).to_json()))
    code, out, _ = run(capsys, "fit", str(path))
    assert code == 0 and result(out)["form"]["factors"] == [[0, 1], [1, 3]] and result(out)["matches"]
    geo = tmp_path / "geo.json"
    geo.write_text(json.dumps({"truncation": 8, "coefficients": ["L^%d" % i for i in range(9)]}))
    code, out, _ = run(capsys, "fit", str(geo), "--latex")
    assert out.strip() == r"\frac{1}{(1-\mathbb{L}t)}"
    code, _, _ = run(capsys, "fit", str(geo), "--max-a", "0")
    assert code == 1


def test_verify_command(capsys):
    code, out, err = run(capsys, "verify", "lemma42")
    assert code == 0 and result(out)["passed"] and "PASS" in err
    code, _, _ = run(capsys, "verify", "no-such-suite")
    assert code == 2


def test_settings_precedence(tmp_path):
    parser = build_parser()
    scenario = Scenario(germ="y^2 - x^3", primes=(2, 3), budget=500)
    args = parser.parse_args(["count", "p.json"])
    s = resolve_settings(args, scenario, env={})
    assert s.primes == (2, 3) and s.budget == 500
    s = resolve_settings(args, scenario, env={"AUTARC_PRIMES": "5,7", "AUTARC_LATEX": "1"})
    assert s.primes == (5, 7) and s.budget == 500 and s.fmt == "latex"
    args = parser.parse_args(["count", "p.json", "--primes", "11", "--json"])
    s = resolve_settings(args, scenario, env={"AUTARC_PRIMES": "5,7", "AUTARC_LATEX": "1"})
    assert s.primes == (11,) and s.fmt == "json"
    with pytest.raises(ValidationError):
        resolve_settings(parser.parse_args(["count", "p.json", "--primes", "4"]), None, env={})


def test_scenario_digest_and_validation():
    a = Scenario.from_json({"germ": "y^2 - x^3", "levels": 2, "primes": [2, 3]})
    b = Scenario.from_json({"primes": [2, 3], "levels": 2, "germ": "y^2 - x^3"})
    assert a.digest == b.digest
    assert Scenario.from_json(a.to_json()) == a
    a.validate()
    for bad in ({"levels": 2}, {"germ": "y^2 - x^3", "monomial": [1, 2]}, {"germ": "y^2 - x^3", "levels": -1},
                {"germ": "y^2 - x^3", "primes": [4]}, {"germ": "y^2 - x^3", "claimed": {"5": "L"}},
                {"germ": "y^2 - x^3", "policy": {"kind": "explicit", "n": [1]}}):
        with pytest.raises(ValueError):
            Scenario.from_json(bad).validate()
    with pytest.raises(ValidationError):
        Scenario.from_json({"germ": "y", "colour": "blue"})
