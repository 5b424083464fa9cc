import json
from concurrent.futures import ProcessPoolExecutor

from xijensen.cache import ENV_VAR, OracleCache, default_cache_dir
from xijensen.oracle import gamma_coeff
from xijensen.realeval import EvalContext, to_sci


def _put_many(args):
    directory, start = args
    c = OracleCache(directory)
    for n in range(start, start + 10):
        c.put("gamma", n, 20, f"{n}.0e-1", "1e-30")
    return start


def test_put_get_prefers_smallest_sufficient(tmp_path):
    c = OracleCache(tmp_path)
    assert c.get("xi", 3, 20) is None
    c.put("xi", 3, 40, "1.5e+0", "1e-45")
    c.put("xi", 3, 25, "1.4e+0", "1e-30")
    assert c.get("xi", 3, 20)["digits"] == 25
    assert c.get("xi", 3, 30)["digits"] == 40
    assert c.get("xi", 3, 50) is None
    c.put("xi", 3, 25, "1.41e+0", "1e-30")  # replace, not duplicate
    assert c.stats()["xi"]["entries"] == 2


def test_concurrent_writers_lose_nothing(tmp_path):
    with ProcessPoolExecutor(max_workers=4) as pool:
        list(pool.map(_put_many, [(str(tmp_path), s) for s in (0, 10, 20, 30)]))
    doc = json.loads((tmp_path / "gamma.json").read_text())
    assert sorted(e["n"] for e in doc["entries"]) == list(range(40))
    assert not list(tmp_path.glob("*.tmp"))


def test_stats_and_clear(tmp_path):
    c = OracleCache(tmp_path)
    c.put("xi", 1, 20, "1e+0", "1e-25")
    c.put("gamma", 1, 20, "1e+0", "1e-25")
    c.put("gamma", 7, 30, "1e+0", "1e-35")
    st = c.stats()
    assert st["gamma"]["entries"] == 2 and st["gamma"]["n_max"] == 7 and st["gamma"]["max_digits"] == 30
    assert c.clear("xi") == 1
    assert c.kinds() == ["gamma"]
    assert c.clear() == 1
    assert c.kinds() == []


def test_env_var_sets_default(monkeypatch, tmp_path):
    monkeypatch.setenv(ENV_VAR, str(tmp_path / "here"))
    assert default_cache_dir() == tmp_path / "here"


def test_cached_oracle_value_is_identical(tmp_path):
    c = OracleCache(tmp_path)
    ctx = EvalContext.for_index(12, 25)
    first = gamma_coeff(12, ctx, c)
    assert c.get("gamma", 12, 25) is not None
    second = gamma_coeff(12, EvalContext.for_index(12, 25), c)
    assert to_sci(first.value, 25) == to_sci(second.value, 25)
    assert to_sci(first.error, 4) == to_sci(second.error, 4)
