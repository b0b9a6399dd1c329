import json
import math
import struct

import numpy as np
import pytest

from orbitsieve import arith, cache, cli, config as config_mod, runner
from orbitsieve.errors import ConfigError, CorruptCacheError


# --- cache -----------------------------------------------------------------------


def test_cache_round_trip(tmp_path, table_1e4):
    path = tmp_path / "t.mutbl"
    cache.cache_write(table_1e4, path)
    back = cache.cache_read(path)
    assert back.limit == table_1e4.limit
    assert np.array_equal(back.mu, table_1e4.mu)
    assert np.array_equal(back.lam, table_1e4.lam)
    assert np.array_equal(back.is_prime.astype(bool), table_1e4.is_prime.astype(bool))
    # writing the read-back table reproduces identical bytes
    path2 = tmp_path / "t2.mutbl"
    cache.cache_write(back, path2)
    assert path.read_bytes() == path2.read_bytes()


def test_cache_layout_is_pinned(tmp_path):
    table = arith.sieve(5)  # mu: 1,-1,-1,0,-1  lam: 1,-1,-1,1,-1  primes: 2,3,5
    path = tmp_path / "five.mutbl"
    cache.cache_write(table, path)
    blob = path.read_bytes()
    assert blob[:8] == b"MUTBL001"
    assert struct.unpack("<Q", blob[8:16])[0] == 5
    # mu codes (LSB first): 1,2,2,0 -> 0b00101001 = 0x29 ; then 2 -> 0x02
    assert blob[16:18] == bytes([0x29, 0x02])
    # lam codes: 1,2,2,1 -> 0b01101001 = 0x69 ; then 2
    assert blob[18:20] == bytes([0x69, 0x02])
    # prime flags for 1..5: 0,1,1,0,1 -> 0b10110 = 0x16
    assert blob[20:21] == bytes([0x16])
    assert len(blob) == 16 + 2 + 2 + 1


def test_cache_truncation_detected(tmp_path, table_1e4):
    path = tmp_path / "t.mutbl"
    cache.cache_write(table_1e4, path)
    blob = path.read_bytes()
    path.write_bytes(blob[:-10])
    with pytest.raises(CorruptCacheError, match="truncated"):
        cache.cache_read(path)


def test_cache_bad_magic(tmp_path):
    path = tmp_path / "bad.mutbl"
    path.write_bytes(b"NOTATBL1" + b"\x00" * 32)
    with pytest.raises(CorruptCacheError, match="magic"):
        cache.cache_read(path)


def test_cache_version_mismatch(tmp_path, table_1e4):
    path = tmp_path / "t.mutbl"
    cache.cache_write(table_1e4, path)
    blob = bytearray(path.read_bytes())
    blob[5:8] = b"002"
    path.write_bytes(bytes(blob))
    with pytest.raises(CorruptCacheError, match="version"):
        cache.cache_read(path)


def test_cache_reserved_code_detected(tmp_path):
    blob = b"MUTBL001" + struct.pack("<Q", 4) + bytes([0xFF]) + bytes([0x55]) + bytes([0x00])
    path = tmp_path / "r.mutbl"
    path.write_bytes(blob)
    with pytest.raises(CorruptCacheError, match="reserved"):
        cache.cache_read(path)


# --- config ----------------------------------------------------------------------


def test_config_unknown_key_named():
    with pytest.raises(ConfigError, match="'frobnicate'"):
        config_mod.validate_config({"kind": "sieve", "n": 10, "frobnicate": 1})


def test_config_missing_key_named():
    with pytest.raises(ConfigError, match="'n'"):
        config_mod.validate_config({"kind": "sieve"})


def test_config_bad_kind():
    with pytest.raises(ConfigError, match="kind"):
        config_mod.validate_config({"kind": "nope"})


def test_config_limit_consistency():
    with pytest.raises(ConfigError, match="sieve_limit"):
        config_mod.validate_config(
            {
                "kind": "correlate",
                "n": 100,
                "sieve_limit": 10,
                "system": {"kind": "torus", "alpha": [0.5]},
                "observable": {"id": "one"},
            }
        )


def test_config_bad_system_kind():
    with pytest.raises(ConfigError, match="system.kind"):
        config_mod.build_system({"kind": "weird"})


def test_config_bad_observable():
    with pytest.raises(ConfigError, match="observable id"):
        config_mod.build_observable({"id": "nope"})
    with pytest.raises(ConfigError, match="haar"):
        config_mod.build_observable({"id": "torus_char", "params": {"m": [1]}, "subtract": "haar"})


def test_config_sl2_explicit_start_matrix():
    spec = config_mod.build_system({"kind": "sl2", "s": 2.0, "start": [[1, 0], [0.5, 1]]})
    assert spec.kind == "sl2" and spec.step_element == 2.0
    base = spec.start_point.base_point()
    assert abs(base.imag) > 0  # reduced representative exists


def test_config_checkpoints_pass_through(tmp_path):
    cfg = {
        "kind": "equidist",
        "n": 100,
        "checkpoints": [10, 50, 100],
        "out": str(tmp_path),
        "system": {"kind": "torus", "alpha": [0.3]},
        "observable": {"id": "one"},
    }
    assert runner.run(cfg) == 0
    lines = (tmp_path / "equidist_series.csv").read_text().splitlines()
    assert [row.split(",")[0] for row in lines[2:]] == ["10", "50", "100"]


def test_config_hash_ignores_out_and_threads():
    base = {"kind": "sieve", "n": 10, "seed": 1}
    h1 = config_mod.config_hash({**base, "out": "a", "threads": 1})
    h2 = config_mod.config_hash({**base, "out": "b", "threads": 8})
    assert h1 == h2
    assert h1 != config_mod.config_hash({**base, "seed": 2})


# --- runner ----------------------------------------------------------------------


def test_run_sieve_writes_summary(tmp_path, capsys):
    status = runner.run({"kind": "sieve", "n": 1000, "out": str(tmp_path)})
    assert status == 0
    assert "S(1000) = 2" in capsys.readouterr().out
    lines = (tmp_path / "sieve_summary.csv").read_text().splitlines()
    assert lines[0].startswith("# config=") and "seed=0" in lines[0]
    assert lines[1] == "N,mertens"
    assert lines[-1] == "1000,2"


def test_run_sieve_cache_transparent_rebuild(tmp_path):
    cache_path = tmp_path / "c.mutbl"
    cfg = {"kind": "sieve", "n": 500, "out": str(tmp_path), "cache": str(cache_path)}
    assert runner.run(cfg) == 0
    assert cache_path.exists()
    first = cache_path.read_bytes()
    assert runner.run(cfg) == 0  # second run reuses the cache
    assert cache_path.read_bytes() == first


def test_run_correlate_deterministic(tmp_path):
    cfg = {
        "kind": "correlate",
        "n": 2000,
        "out": None,
        "system": {"kind": "torus", "alpha": [math.sqrt(2) % 1]},
        "observable": {"id": "torus_char", "params": {"m": [1]}},
    }
    for d in ("a", "b"):
        cfg["out"] = str(tmp_path / d)
        assert runner.run(dict(cfg)) == 0
    a = (tmp_path / "a" / "correlate_series.csv").read_bytes()
    b = (tmp_path / "b" / "correlate_series.csv").read_bytes()
    assert a == b


def test_run_equidist_svg_self_contained(tmp_path):
    cfg = {
        "kind": "equidist",
        "n": 2000,
        "out": str(tmp_path),
        "system": {"kind": "sl2", "s": 1.0, "start": "generic"},
        "observable": {"id": "sl2_step", "params": {"threshold": 2.0, "width": 0.25}},
    }
    assert runner.run(cfg) == 0
    svg = (tmp_path / "equidist_series.svg").read_text()
    assert svg.startswith("<?xml")
    assert "<svg" in svg and "config=" in svg
    assert "http://www.w3.org/2000/svg" in svg  # namespace only
    assert "href" not in svg and "url(" not in svg  # no external assets


def test_run_orbit(tmp_path):
    cfg = {
        "kind": "orbit",
        "n": 50,
        "out": str(tmp_path),
        "system": {"kind": "heisenberg", "u": [0.3, 0.4, 0.1]},
        "observable": {"id": "heis_char", "params": {"m1": 1, "m2": 0}},
    }
    assert runner.run(cfg) == 0
    lines = (tmp_path / "orbit.csv").read_text().splitlines()
    assert lines[1] == "n,re,im"
    assert len(lines) == 52


def test_run_pairs(tmp_path):
    modes = [[m] for m in range(-8, 9) if m != 0]
    coeffs = [(1 + abs(m[0])) ** -2 for m in modes]
    cfg = {
        "kind": "pairs",
        "n": 5000,
        "out": str(tmp_path),
        "pairs": [[2, 3], [3, 5]],
        "system": {"kind": "torus", "alpha": [math.sqrt(2) % 1]},
        "observable": {"id": "torus_poly", "params": {"modes": modes, "coeffs": coeffs}},
    }
    assert runner.run(cfg) == 0
    lines = (tmp_path / "pairs_sweep.csv").read_text().splitlines()
    assert lines[1] == "p,q,absA,bound,pass"
    assert len(lines) == 4
    spec_lines = (tmp_path / "pairs_spectrum.csv").read_text().splitlines()
    assert spec_lines[1] == "m0,re,im"
    assert len(spec_lines) == 2 + 17  # one row per mode, zero mode included
    assert spec_lines[2].startswith("-8,0.012345679012345678,")  # (1+8)^-2, 17 digits


def test_run_bsz_small(tmp_path):
    cfg = {
        "kind": "bsz",
        "n": 5000,
        "m": 500,
        "tau": 0.5,
        "allowed_exceptions": 0,
        "out": str(tmp_path),
        "system": {"kind": "sl2", "s": 1.0, "start": "generic"},
        "observable": {
            "id": "sl2_step",
            "params": {"threshold": 2.0, "width": 0.25},
            "subtract": "haar",
        },
    }
    assert runner.run(cfg) == 0
    pair_lines = (tmp_path / "bsz_pairs.csv").read_text().splitlines()
    assert pair_lines[1] == "p,q,magnitude,violate_flag"
    assert len(pair_lines) == 2 + 6  # primes {2,3,5,7}
    assert "verdict: PASS" in (tmp_path / "bsz_verdict.txt").read_text()


def test_run_algebra_check(tmp_path):
    cfg = {"kind": "algebra-check", "trials": 25, "seed": 42, "out": str(tmp_path)}
    assert runner.run(cfg) == 0
    lines = (tmp_path / "algebra_report.csv").read_text().splitlines()
    assert lines[1] == "check,trials,failures"
    assert all(line.endswith(",0") for line in lines[2:])


def test_runner_rejects_invalid_config(tmp_path):
    with pytest.raises(ConfigError):
        runner.run({"kind": "sieve", "n": 100, "out": str(tmp_path), "bogus": True})


# --- cli -------------------------------------------------------------------------


def test_cli_sieve(tmp_path, capsys):
    status = cli.main(["sieve", "--n", "1000", "--out", str(tmp_path)])
    assert status == 0
    assert "S(1000) = 2" in capsys.readouterr().out


def test_cli_config_file(tmp_path, capsys):
    cfg_path = tmp_path / "exp.json"
    cfg_path.write_text(json.dumps({"kind": "sieve", "n": 500, "out": str(tmp_path / "o")}))
    assert cli.main(["sieve", "--config", str(cfg_path)]) == 0
    assert (tmp_path / "o" / "sieve_summary.csv").exists()


def test_cli_env_overrides(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("ORBITSIEVE_OUT", str(tmp_path / "env_out"))
    monkeypatch.setenv("ORBITSIEVE_SEED", "99")
    assert cli.main(["sieve", "--n", "200"]) == 0
    head = (tmp_path / "env_out" / "sieve_summary.csv").read_text().splitlines()[0]
    assert "seed=99" in head


def test_cli_flag_beats_env(tmp_path, monkeypatch):
    monkeypatch.setenv("ORBITSIEVE_OUT", str(tmp_path / "env_out"))
    assert cli.main(["sieve", "--n", "200", "--out", str(tmp_path / "flag_out")]) == 0
    assert (tmp_path / "flag_out").exists()
    assert not (tmp_path / "env_out").exists()


def test_cli_config_error_exit_code(tmp_path):
    cfg_path = tmp_path / "bad.json"
    cfg_path.write_text(json.dumps({"kind": "sieve", "n": 100, "wrong_key": 1}))
    assert cli.main(["sieve", "--config", str(cfg_path)]) == 2
