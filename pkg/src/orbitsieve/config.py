"""Experiment configuration: a single declarative JSON file.

JSON via the stdlib is the pinned dialect (nested key-value pairs,
human-editable, stable).  Validation reports the offending key by name.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from . import dynsys
from .errors import ConfigError

__all__ = ["KINDS", "load_config", "validate_config", "config_hash",
           "build_system", "build_observable"]

KINDS = ("sieve", "correlate", "bsz", "orbit", "equidist", "pairs", "algebra-check")

_COMMON_KEYS = {"kind", "out", "seed", "threads"}

_KIND_KEYS = {
    "sieve": {"required": {"n"}, "optional": {"cache"}},
    "correlate": {
        "required": {"n", "system", "observable"},
        "optional": {"checkpoints", "cache", "sieve_limit"},
    },
    "bsz": {
        "required": {"n", "m", "tau", "system", "observable"},
        "optional": {"cache", "allowed_exceptions", "sieve_limit"},
    },
    "orbit": {"required": {"n", "system", "observable"}, "optional": set()},
    "equidist": {
        "required": {"n", "system", "observable"},
        "optional": {"checkpoints"},
    },
    "pairs": {"required": {"n", "pairs", "system", "observable"}, "optional": set()},
    "algebra-check": {"required": set(), "optional": {"trials"}},
}

_DEFAULTS = {"seed": 0, "threads": 1, "out": "out"}


def load_config(path) -> dict:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    return raw


def validate_config(raw: dict) -> dict:
    """Apply defaults and check the key set; returns the merged config."""
    cfg = dict(_DEFAULTS)
    cfg.update(raw)
    kind = cfg.get("kind")
    if kind not in KINDS:
        raise ConfigError(f"key 'kind' must be one of {', '.join(KINDS)}; got {kind!r}")
    spec = _KIND_KEYS[kind]
    allowed = _COMMON_KEYS | spec["required"] | spec["optional"]
    for key in cfg:
        if key not in allowed:
            raise ConfigError(f"unknown key '{key}' for experiment kind '{kind}'")
    for key in spec["required"]:
        if key not in cfg:
            raise ConfigError(f"missing required key '{key}' for experiment kind '{kind}'")
    if "n" in cfg:
        if not isinstance(cfg["n"], int) or cfg["n"] < 1:
            raise ConfigError("key 'n' must be a positive integer")
    if cfg.get("checkpoints") is not None:
        cps = cfg["checkpoints"]
        if (
            not isinstance(cps, list)
            or not cps
            or any(not isinstance(c, int) or c < 1 for c in cps)
            or any(b <= a for a, b in zip(cps, cps[1:]))
        ):
            raise ConfigError("key 'checkpoints' must be a strictly increasing list of positive integers")
        if cps[-1] > cfg.get("n", cps[-1]):
            raise ConfigError("key 'checkpoints' exceeds key 'n'")
    if not isinstance(cfg["seed"], int) or cfg["seed"] < 0:
        raise ConfigError("key 'seed' must be a non-negative integer")
    if not isinstance(cfg["threads"], int) or cfg["threads"] < 1:
        raise ConfigError("key 'threads' must be a positive integer")
    limit = cfg.get("sieve_limit")
    if limit is not None and cfg.get("n", 0) > limit:
        raise ConfigError("key 'n' exceeds key 'sieve_limit'")
    if "system" in cfg:
        build_system(cfg["system"])  # raises ConfigError on bad sub-keys
    if "observable" in cfg:
        build_observable(cfg["observable"])
    return cfg


def config_hash(cfg: dict) -> str:
    """Hash of the experiment-defining keys (output location and thread
    count do not change the data, so they are excluded)."""
    core = {k: v for k, v in cfg.items() if k not in ("out", "threads")}
    blob = json.dumps(core, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]


def build_system(sys_cfg: dict) -> dynsys.SystemSpec:
    """SystemSpec from the config sub-object."""
    if not isinstance(sys_cfg, dict):
        raise ConfigError("key 'system' must be an object")
    kind = sys_cfg.get("kind")
    try:
        if kind == "torus":
            return dynsys.torus_system(sys_cfg["alpha"], sys_cfg.get("start"))
        if kind == "heisenberg":
            return dynsys.heisenberg_system(sys_cfg["u"], sys_cfg.get("start"))
        if kind == "sl2":
            start = sys_cfg.get("start", "generic")
            start_m = None if start == "generic" else start
            return dynsys.sl2_system(sys_cfg.get("s", 1.0), start_m)
        if kind == "product":
            base = build_system(sys_cfg["base"])
            p, q = sys_cfg["powers"]
            return dynsys.product_system(base, p, q)
    except KeyError as exc:
        raise ConfigError(f"system kind '{kind}' is missing key '{exc.args[0]}'") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad system config: {exc}") from exc
    raise ConfigError(
        f"key 'system.kind' must be torus|heisenberg|sl2|product; got {kind!r}"
    )


def build_observable(obs_cfg: dict) -> dynsys.Observable:
    """Observable from the config sub-object; 'subtract' may be a number
    or "haar" (analytic mean, sl2_step only)."""
    if not isinstance(obs_cfg, dict):
        raise ConfigError("key 'observable' must be an object")
    oid = obs_cfg.get("id")
    params = dict(obs_cfg.get("params", {}))
    extra = set(obs_cfg) - {"id", "params", "subtract"}
    if extra:
        raise ConfigError(f"unknown observable key '{sorted(extra)[0]}'")
    try:
        factory = dynsys._BUILTIN_FACTORIES[oid]
    except KeyError:
        raise ConfigError(f"unknown observable id {oid!r}") from None
    try:
        obs = factory(params)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad params for observable '{oid}': {exc}") from exc
    subtract = obs_cfg.get("subtract", 0.0)
    if subtract == "haar":
        if oid != "sl2_step":
            raise ConfigError("'subtract': \"haar\" is only defined for sl2_step")
        subtract = dynsys.sl2_step_haar_mean(
            params["threshold"], params.get("width", 0.25)
        )
    if subtract:
        obs = dynsys.Observable(obs.observable_id, obs.params, complex(subtract), obs.bound)
    return obs
