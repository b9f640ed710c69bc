"""Run-configuration loading, schema validation and canonical hashing.

One JSON document describes one run. Validation is strict: unknown keys are
rejected and violations are reported with the dotted path of the offending
key. The canonical SHA-256 of the effective configuration (defaults and any
seed override applied) goes into every output file's provenance line.
"""

from __future__ import annotations

import copy
import hashlib
import json

from jsonschema import Draft202012Validator


class ConfigError(ValueError):
    pass


_NUMBER = {"type": "number"}
_NUMBER_ARRAY = {"type": "array", "items": _NUMBER, "minItems": 1}
_SEED = {"type": "integer", "minimum": 0}

_BOX = {
    "type": "object",
    "additionalProperties": False,
    "required": ["lower", "upper"],
    "properties": {"lower": _NUMBER_ARRAY, "upper": _NUMBER_ARRAY},
}

_BUMP = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "amplitudes": _NUMBER_ARRAY,
        "widths": _NUMBER_ARRAY,
        "centers": _NUMBER_ARRAY,
        "design_box": _BOX,
        "uncertainty_box": _BOX,
    },
}


def _problem(require_design: bool) -> dict:
    required = ["benchmark"] + (["design"] if require_design else [])
    return {
        "type": "object",
        "additionalProperties": False,
        "required": required,
        "properties": {
            "benchmark": {"enum": ["mv1", "mv4", "bump"]},
            "n": {"type": "integer", "minimum": 1},
            "design": _NUMBER_ARRAY,
            "bump": _BUMP,
        },
    }


_MC = {
    "type": "object",
    "additionalProperties": False,
    "required": ["count", "seed"],
    "properties": {
        "count": {"type": "integer", "minimum": 2},
        "mode": {"enum": ["frozen", "redrawn"]},
        "seed": _SEED,
    },
}

_QUANTILES = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "formulation": {"enum": ["F1", "F2", "F3"]},
        "levels": _NUMBER_ARRAY,
        "many": {"type": "integer", "minimum": 1},
        "epsilon": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 0.5},
    },
}

_GA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["population_size", "generations", "seed"],
    "properties": {
        "population_size": {"type": "integer", "minimum": 4},
        "generations": {"type": "integer", "minimum": 0},
        "crossover_prob": {"type": "number", "minimum": 0, "maximum": 1},
        "mutation_rate": {"type": "number", "minimum": 0, "maximum": 1},
        "strength": {"type": "number", "exclusiveMinimum": 0},
        "elite_fraction": {"type": "number", "minimum": 0, "maximum": 1},
        "bits_per_variable": {"type": "integer", "minimum": 8, "maximum": 64},
        "walk_length": {"type": "integer", "minimum": 1},
        "seed": _SEED,
    },
}

_BOOTSTRAP = {
    "type": "object",
    "additionalProperties": False,
    "required": ["level", "seed"],
    "properties": {
        "level": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "n_replicates": {"type": "integer", "minimum": 100},
        "m_grid": {"type": "array", "items": {"type": "integer", "minimum": 1},
                   "minItems": 1},
        "samples_file": {"type": "string"},
        "dump_coverage": {"type": "boolean"},
        "seed": _SEED,
    },
}

_EVIDENCE = {
    "type": "object",
    "additionalProperties": False,
    "required": ["bpa", "count", "seed"],
    "properties": {
        "bpa": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["interval", "mass"],
                    "properties": {
                        "interval": {"type": "array", "items": _NUMBER,
                                     "minItems": 2, "maxItems": 2},
                        "mass": {"type": "number"},
                    },
                },
            },
        },
        "thresholds": _NUMBER_ARRAY,
        "count": {"type": "integer", "minimum": 1},
        "seed": _SEED,
    },
}

_COMPOSE = {
    "type": "object",
    "additionalProperties": False,
    "required": ["front_csv", "n"],
    "properties": {
        "front_csv": {"type": "string"},
        "n": {"type": "integer", "minimum": 2},
    },
}

_OUTPUT = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "directory": {"type": "string"},
        "formats": {
            "type": "array",
            "items": {"enum": ["csv", "png"]},
            "minItems": 1,
        },
    },
}


def _command_schema(required: dict, optional: dict) -> dict:
    return {
        "type": "object",
        "additionalProperties": False,
        "required": sorted(required),
        "properties": {**required, **optional, "output": _OUTPUT},
    }


SCHEMAS = {
    "ecdf": _command_schema(
        {"problem": _problem(require_design=True), "mc": _MC}, {}
    ),
    "optimize": _command_schema(
        {"problem": _problem(require_design=False), "quantiles": _QUANTILES,
         "mc": _MC, "ga": _GA},
        {},
    ),
    "bootstrap": _command_schema(
        {"bootstrap": _BOOTSTRAP},
        {"problem": _problem(require_design=True), "mc": _MC},
    ),
    "evidence": _command_schema(
        {"problem": _problem(require_design=True), "evidence": _EVIDENCE}, {}
    ),
    "bench": _command_schema(
        {"problem": _problem(require_design=False)},
        {"compose": _COMPOSE, "quantiles": _QUANTILES, "mc": _MC},
    ),
}

_DEFAULTS = {
    "problem": {"n": 1},
    "mc": {"mode": "frozen"},
    "ga": {
        "crossover_prob": 1.0,
        "mutation_rate": 0.5,
        "strength": 0.06,
        "elite_fraction": 0.2,
        "bits_per_variable": 32,
        "walk_length": 3,
    },
    "bootstrap": {"n_replicates": 2000, "dump_coverage": False},
    "output": {"formats": ["csv", "png"]},
}


def validate_config(command: str, raw: dict) -> dict:
    """Validate against the command's schema and fill in defaults."""
    if command not in SCHEMAS:
        raise ConfigError(f"unknown command {command!r}")
    validator = Draft202012Validator(SCHEMAS[command])
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = ".".join(str(p) for p in err.absolute_path) or "<root>"
        raise ConfigError(f"config error at {path}: {err.message}")

    cfg = copy.deepcopy(raw)
    cfg.setdefault("output", {})
    for section, defaults in _DEFAULTS.items():
        if section in cfg:
            for key, value in defaults.items():
                cfg[section].setdefault(key, value)
    if "quantiles" in cfg:
        chosen = [k for k in ("formulation", "levels", "many") if k in cfg["quantiles"]]
        if len(chosen) != 1:
            raise ConfigError(
                "config error at quantiles: exactly one of 'formulation', "
                "'levels' or 'many' is required"
            )
    return cfg


def apply_seed_override(cfg: dict, seed: int | None) -> dict:
    """Override every per-section seed from one master seed.

    mc/bootstrap/evidence get the master seed itself and ga gets seed+1, so
    the optimizer stream stays distinct from the Monte Carlo stream.
    """
    if seed is None:
        return cfg
    cfg = copy.deepcopy(cfg)
    for section in ("mc", "bootstrap", "evidence"):
        if section in cfg:
            cfg[section]["seed"] = int(seed)
    if "ga" in cfg:
        cfg["ga"]["seed"] = int(seed) + 1
    return cfg


def config_hash(cfg: dict) -> str:
    canonical = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
