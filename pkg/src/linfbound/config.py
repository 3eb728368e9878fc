"""Flat ``key = value`` experiment configuration files.

Grammar: one assignment per line, ``#`` starts a comment, list values are
comma-separated.  Recognised keys::

    label        = zipf-100
    distribution = zipf(100, 1.1) | uniform(100) | probs:<csv> | counts:<csv>
    n            = 100, 1000, 10000
    delta        = 0.05 | 1/n^2
    methods      = all | baseline, th2, th4, ...
    m            = auto | <even int>
    split        = 0.99, 0.01
    reps         = 10000
    seed         = 0
    k            = 5

Relative CSV paths resolve against the config file's directory.
"""

from __future__ import annotations

import re
from importlib import resources
from pathlib import Path

from .bounds import BoundSpec, Method, parse_method
from .distributions import Distribution, InvalidArgument, read_distribution_csv, uniform, zipf
from .ingest import load_frequency_csv, to_distribution
from .montecarlo import DeltaRule, ExperimentConfig

KNOWN_KEYS = {"label", "distribution", "n", "delta", "methods", "m", "split", "reps", "seed", "k"}

_CALL = re.compile(r"^\s*(zipf|uniform)\s*\(([^)]*)\)\s*$", re.I)


def parse_kv(text: str, source: str = "<config>") -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidArgument(f"{source}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower()
        if key not in KNOWN_KEYS:
            raise InvalidArgument(f"{source}:{lineno}: unknown key {key!r}")
        if key in out:
            raise InvalidArgument(f"{source}:{lineno}: key {key!r} given twice")
        out[key] = value
    return out


def _split_list(v: str) -> list[str]:
    return [s.strip() for s in v.split(",") if s.strip()]


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("linfbound") / "data" / name))


def parse_distribution(text: str, base: Path | None = None) -> Distribution:
    m = _CALL.match(text)
    if m:
        args = _split_list(m.group(2))
        try:
            if m.group(1).lower() == "zipf":
                if len(args) != 2:
                    raise InvalidArgument("zipf takes (A, s)")
                return zipf(int(args[0]), float(args[1]))
            if len(args) != 1:
                raise InvalidArgument("uniform takes (A)")
            return uniform(int(args[0]))
        except ValueError as exc:
            raise InvalidArgument(f"bad distribution {text!r}: {exc}") from None
    kind, sep, rest = text.partition(":")
    if not sep or kind.strip() not in ("probs", "counts", "fixture"):
        raise InvalidArgument(f"bad distribution {text!r}; use zipf(A,s), uniform(A), probs:<csv>, counts:<csv>")
    kind, rest = kind.strip(), rest.strip()
    if kind == "fixture":
        return to_distribution(load_frequency_csv(fixture_path(rest), "counts"))
    path = Path(rest)
    if base is not None and not path.is_absolute():
        path = base / path
    if kind == "probs":
        return read_distribution_csv(path)
    return to_distribution(load_frequency_csv(path, "counts"))


def parse_methods(text: str, delta: float, m: str, split: list[float]) -> tuple[BoundSpec, ...]:
    names = list(Method) if text.strip().lower() == "all" else [parse_method(s) for s in _split_list(text)]
    mval: int | str = "auto" if m.strip().lower() == "auto" else int(m)
    specs = []
    for meth in names:
        if meth.uses_split:
            specs.append(BoundSpec(meth, delta, split[0] * delta, split[1] * delta, mval if meth.uses_m else "auto"))
        else:
            specs.append(BoundSpec(meth, delta, m=mval if meth.uses_m else "auto"))
    return tuple(specs)


def build_config(kv: dict[str, str], base: Path | None = None) -> ExperimentConfig:
    for required in ("distribution", "n"):
        if required not in kv:
            raise InvalidArgument(f"config is missing {required!r}")
    dist = parse_distribution(kv["distribution"], base)
    try:
        ns = [int(float(s)) for s in _split_list(kv["n"])]
        rule = DeltaRule.parse(kv.get("delta", "0.05"))
        split = [float(s) for s in _split_list(kv.get("split", "0.99, 0.01"))]
        reps = int(kv.get("reps", "10000"))
        seed = int(kv.get("seed", "0"))
        k = int(kv["k"]) if "k" in kv else None
    except ValueError as exc:
        raise InvalidArgument(f"bad config value: {exc}") from None
    if len(split) != 2 or sum(split) > 1 + 1e-12:
        raise InvalidArgument("split must be two fractions summing to at most 1")
    nominal = rule.delta(ns[0]) if ns else 0.05
    methods = parse_methods(kv.get("methods", "all"), nominal, kv.get("m", "auto"), split)
    return ExperimentConfig(dist, kv.get("label", "experiment"), tuple(ns), rule, methods,
                            reps, seed, k)


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    return build_config(parse_kv(path.read_text(encoding="utf-8"), str(path)), path.parent)


PRESETS: dict[str, list[dict[str, str]]] = {
    "fig1": [
        {"label": "fig1-zipf", "distribution": "zipf(100, 1.1)", "n": "100, 1000, 10000, 100000",
         "delta": "0.05"},
        {"label": "fig1-uniform", "distribution": "uniform(100)", "n": "100, 1000, 10000, 100000",
         "delta": "0.05"},
    ],
    "fig2": [
        {"label": "fig2-zipf", "distribution": "zipf(100, 1.1)", "n": "1000, 3000, 10000, 30000, 100000",
         "delta": "1/n^2"},
        {"label": "fig2-uniform", "distribution": "uniform(100)", "n": "1000, 3000, 10000, 30000, 100000",
         "delta": "1/n^2"},
    ],
    "smoke": [
        {"label": "smoke", "distribution": "zipf(100, 1.1)", "n": "100, 1000", "delta": "0.05", "reps": "1"},
    ],
    "fig3-census": [
        {"label": "fig3-census", "distribution": "fixture:census_synthetic.csv", "n": "10000",
         "delta": "0.05", "k": "5", "methods": "baseline, th2, cor21, th4"},
    ],
}


def preset_configs(name: str, overrides: dict[str, str] | None = None) -> list[ExperimentConfig]:
    if name not in PRESETS:
        raise InvalidArgument(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return [build_config({**kv, **(overrides or {})}) for kv in PRESETS[name]]
