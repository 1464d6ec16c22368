"""Sweep configuration: YAML schema, validation and environment overrides.

A config file looks like::

    schema_version: 1
    instances:
      - functions: [square, exp]
        maps: [identity, "scaled:0.7"]
        a: 0.5
        b: 1.5
        alpha: [0.5, 1.0, 2.0]
        lambda: [0.5, 0.25]
        q: [1.5, 2.0]
    quadrature:
      rel_tol: 1.0e-10
    certification_grid: [21, 21, 99]
    output: {format: json, path: null}
    falsify:
      a: [0.25, 1.0]
      length: [0.25, 1.0]

Every section except ``schema_version`` and ``instances`` is optional.
Unknown keys are rejected, and each error message carries the line number
of the offending entry.
"""

from __future__ import annotations

import math
import os
from dataclasses import asdict, dataclass, replace
from importlib import resources

import yaml

from ..errors import ConfigError, DomainError
from ..fracquad import DEFAULT_CONFIG, QuadratureConfig
from ..preinvex import DEFAULT_GRID, get_function, get_map

__all__ = [
    "SCHEMA_VERSION",
    "InstanceGroup",
    "FalsifySpec",
    "OutputSpec",
    "SweepConfig",
    "load_config",
    "parse_config",
    "default_config",
    "DEFAULT_CONFIG_TEXT",
    "env_jobs",
]

SCHEMA_VERSION = 1

_TOP_KEYS = {"schema_version", "instances", "quadrature", "certification_grid", "output", "falsify"}
_GROUP_KEYS = {"functions", "maps", "a", "b", "alpha", "lambda", "q"}
_QUAD_KEYS = {"rel_tol", "abs_tol", "max_panels", "nodes_per_panel", "singularity_policy"}
_OUTPUT_KEYS = {"format", "path"}
_FALSIFY_KEYS = {"functions", "maps", "a", "length", "alpha", "lambda", "q", "top_k"}


@dataclass(frozen=True)
class InstanceGroup:
    """Cartesian product of ids and parameter lists."""

    functions: tuple[str, ...]
    maps: tuple[str, ...]
    a: float
    b: float
    alpha: tuple[float, ...]
    lam: tuple[float, ...] = (0.5,)
    q: tuple[float, ...] = (2.0,)

    def combinations(self):
        for fn in self.functions:
            for mp in self.maps:
                for al in self.alpha:
                    for la in self.lam:
                        for q in self.q:
                            yield (fn, mp, self.a, self.b, al, la, q)


@dataclass(frozen=True)
class FalsifySpec:
    """Ranges that random falsification trials are drawn from (uniformly)."""

    functions: tuple[str, ...] = ("const", "square", "exp", "exp_neg", "sqshift", "pow32")
    maps: tuple[str, ...] = ("identity", "scaled:0.7")
    a: tuple[float, float] = (0.25, 1.0)
    length: tuple[float, float] = (0.1, 0.9)
    alpha: tuple[float, float] = (0.1, 3.0)
    lam: tuple[float, float] = (0.05, 0.5)
    q: tuple[float, float] = (1.1, 5.0)
    top_k: int = 10


@dataclass(frozen=True)
class OutputSpec:
    format: str = "json"
    path: str | None = None


@dataclass(frozen=True)
class SweepConfig:
    instances: tuple[InstanceGroup, ...]
    quadrature: QuadratureConfig = DEFAULT_CONFIG
    certification_grid: tuple[int, int, int] = DEFAULT_GRID
    output: OutputSpec = OutputSpec()
    falsify: FalsifySpec = FalsifySpec()
    schema_version: int = SCHEMA_VERSION

    def combinations(self):
        """All instance parameter tuples, sorted and de-duplicated."""
        seen = set()
        for group in self.instances:
            seen.update(group.combinations())
        return sorted(seen)

    def to_dict(self) -> dict:
        """Plain-data echo of the configuration (used in reports)."""
        out = {
            "schema_version": self.schema_version,
            "instances": [],
            "quadrature": asdict(self.quadrature),
            "certification_grid": list(self.certification_grid),
            "output": asdict(self.output),
            "falsify": {},
        }
        for g in self.instances:
            out["instances"].append({
                "functions": list(g.functions), "maps": list(g.maps), "a": g.a, "b": g.b,
                "alpha": list(g.alpha), "lambda": list(g.lam), "q": list(g.q),
            })
        fz = self.falsify
        out["falsify"] = {
            "functions": list(fz.functions), "maps": list(fz.maps), "a": list(fz.a),
            "length": list(fz.length), "alpha": list(fz.alpha), "lambda": list(fz.lam),
            "q": list(fz.q), "top_k": fz.top_k,
        }
        return out


# -- line bookkeeping ---------------------------------------------------------


def _line_map(node, path=(), out=None):
    """Map each key path to the 1-based line where its value starts."""
    if out is None:
        out = {}
    out[path] = node.start_mark.line + 1
    if isinstance(node, yaml.MappingNode):
        for k, v in node.value:
            key = k.value
            out[path + (key,)] = k.start_mark.line + 1
            _line_map(v, path + (key,), out)
            out[path + (key,)] = k.start_mark.line + 1
    elif isinstance(node, yaml.SequenceNode):
        for i, v in enumerate(node.value):
            _line_map(v, path + (i,), out)
    return out


class _Ctx:
    def __init__(self, lines):
        self.lines = lines

    def fail(self, path, message):
        p = tuple(path)
        while p and p not in self.lines:
            p = p[:-1]
        name = ".".join(str(x) for x in path) or "<root>"
        raise ConfigError(f"{name}: {message}", line=self.lines.get(p), field=name)

    def mapping(self, value, path, allowed):
        if not isinstance(value, dict):
            self.fail(path, "expected a mapping")
        for k in value:
            if k not in allowed:
                self.fail(tuple(path) + (k,),
                          f"unknown key {k!r}; allowed: {', '.join(sorted(allowed))}")
        return value

    def number(self, value, path, *, positive=False, integer=False):
        if isinstance(value, bool):
            self.fail(path, f"expected a number, got {value!r}")
        if isinstance(value, str):
            # PyYAML reads 1e-10 (no dot) as a string
            try:
                value = float(value)
            except ValueError:
                self.fail(path, f"expected a number, got {value!r}")
        if not isinstance(value, (int, float)) or not math.isfinite(value):
            self.fail(path, f"expected a finite number, got {value!r}")
        if integer:
            if value != int(value):
                self.fail(path, f"expected an integer, got {value!r}")
            value = int(value)
        else:
            value = float(value)
        if positive and not value > 0:
            self.fail(path, f"must be > 0, got {value!r}")
        return value

    def number_list(self, value, path, check=None):
        if not isinstance(value, list):
            value = [value]
        if not value:
            self.fail(path, "must not be empty")
        out = []
        for i, v in enumerate(value):
            x = self.number(v, tuple(path) + (i,))
            if check is not None:
                msg = check(x)
                if msg:
                    self.fail(tuple(path) + (i,), msg)
            out.append(x)
        return tuple(out)

    def id_list(self, value, path, resolver, kind):
        if isinstance(value, str):
            value = [value]
        if not isinstance(value, list) or not value:
            self.fail(path, f"expected a non-empty list of {kind} ids")
        for i, v in enumerate(value):
            try:
                resolver(str(v))
            except (KeyError, DomainError) as exc:
                msg = exc.args[0] if exc.args else str(exc)
                self.fail(tuple(path) + (i,), msg)
        return tuple(str(v) for v in value)

    def range_pair(self, value, path, check=None):
        if not isinstance(value, list) or len(value) != 2:
            self.fail(path, "expected a [low, high] pair")
        lo, hi = (self.number(v, tuple(path) + (i,)) for i, v in enumerate(value))
        if lo > hi:
            self.fail(path, f"low {lo} exceeds high {hi}")
        for i, x in enumerate((lo, hi)):
            msg = check(x) if check else None
            if msg:
                self.fail(tuple(path) + (i,), msg)
        return (lo, hi)


def _alpha_ok(x):
    return None if x > 0 else f"alpha must be > 0, got {x!r}"


def _lambda_ok(x):
    return None if 0 < x <= 0.5 else f"lambda must lie in (0, 1/2], got {x!r}"


def _q_ok(x):
    return None if x > 1 else f"q must be > 1, got {x!r}"


def _parse_group(ctx, raw, path):
    ctx.mapping(raw, path, _GROUP_KEYS)
    for req in ("functions", "maps", "a", "b", "alpha"):
        if req not in raw:
            ctx.fail(path, f"missing required key {req!r}")
    a = ctx.number(raw["a"], path + ("a",))
    b = ctx.number(raw["b"], path + ("b",))
    if not a < b:
        ctx.fail(path + ("b",), f"need a < b, got a={a}, b={b}")
    return InstanceGroup(
        functions=ctx.id_list(raw["functions"], path + ("functions",), get_function, "function"),
        maps=ctx.id_list(raw["maps"], path + ("maps",), get_map, "map"),
        a=a,
        b=b,
        alpha=ctx.number_list(raw["alpha"], path + ("alpha",), _alpha_ok),
        lam=ctx.number_list(raw.get("lambda", [0.5]), path + ("lambda",), _lambda_ok),
        q=ctx.number_list(raw.get("q", [2.0]), path + ("q",), _q_ok),
    )


def _parse_quadrature(ctx, raw, path):
    ctx.mapping(raw, path, _QUAD_KEYS)
    kw = {}
    for k in ("rel_tol", "abs_tol"):
        if k in raw:
            kw[k] = ctx.number(raw[k], path + (k,))
    for k in ("max_panels", "nodes_per_panel"):
        if k in raw:
            kw[k] = ctx.number(raw[k], path + (k,), positive=True, integer=True)
    if "singularity_policy" in raw:
        kw["singularity_policy"] = str(raw["singularity_policy"])
    try:
        return DEFAULT_CONFIG.replace(**kw)
    except (DomainError, ValueError) as exc:
        ctx.fail(path, str(exc))


def _parse_falsify(ctx, raw, path):
    ctx.mapping(raw, path, _FALSIFY_KEYS)
    base = FalsifySpec()
    kw = {}
    if "functions" in raw:
        kw["functions"] = ctx.id_list(raw["functions"], path + ("functions",), get_function, "function")
    if "maps" in raw:
        kw["maps"] = ctx.id_list(raw["maps"], path + ("maps",), get_map, "map")
    checks = {"a": None, "length": lambda x: None if x > 0 else "length must be > 0",
              "alpha": _alpha_ok, "lambda": _lambda_ok, "q": _q_ok}
    for k, check in checks.items():
        if k in raw:
            kw["lam" if k == "lambda" else k] = ctx.range_pair(raw[k], path + (k,), check)
    if "top_k" in raw:
        kw["top_k"] = ctx.number(raw["top_k"], path + ("top_k",), positive=True, integer=True)
    return replace(base, **kw)


def parse_config(text: str, *, apply_env: bool = True) -> SweepConfig:
    """Parse and validate config text; raises :class:`ConfigError`."""
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError(f"malformed config: {getattr(exc, 'problem', exc)}",
                          line=mark.line + 1 if mark else None) from None
    if node is None:
        raise ConfigError("config is empty")
    ctx = _Ctx(_line_map(node))
    ctx.mapping(data, (), _TOP_KEYS)

    if "schema_version" not in data:
        ctx.fail((), "missing required key 'schema_version'")
    version = ctx.number(data["schema_version"], ("schema_version",), integer=True)
    if version != SCHEMA_VERSION:
        ctx.fail(("schema_version",), f"unsupported schema_version {version}; expected {SCHEMA_VERSION}")

    if "instances" not in data:
        ctx.fail((), "missing required key 'instances'")
    raw_groups = data["instances"]
    if not isinstance(raw_groups, list):
        ctx.fail(("instances",), "expected a list of instance groups")
    groups = tuple(_parse_group(ctx, g, ("instances", i)) for i, g in enumerate(raw_groups))

    quad = _parse_quadrature(ctx, data["quadrature"], ("quadrature",)) if "quadrature" in data else DEFAULT_CONFIG

    grid = DEFAULT_GRID
    if "certification_grid" in data:
        raw = data["certification_grid"]
        if not isinstance(raw, list) or len(raw) != 3:
            ctx.fail(("certification_grid",), "expected [n_u, n_v, n_t]")
        grid = tuple(ctx.number(v, ("certification_grid", i), positive=True, integer=True)
                     for i, v in enumerate(raw))

    output = OutputSpec()
    if "output" in data:
        raw = ctx.mapping(data["output"], ("output",), _OUTPUT_KEYS)
        fmt = raw.get("format", "json")
        if fmt not in ("json", "csv"):
            ctx.fail(("output", "format"), f"format must be json or csv, got {fmt!r}")
        path = raw.get("path")
        output = OutputSpec(fmt, None if path is None else str(path))

    falsify = _parse_falsify(ctx, data["falsify"], ("falsify",)) if "falsify" in data else FalsifySpec()

    cfg = SweepConfig(groups, quad, grid, output, falsify, version)
    return apply_env_overrides(cfg) if apply_env else cfg


def apply_env_overrides(cfg: SweepConfig, environ=None) -> SweepConfig:
    """Apply ``FRACINEQ_RTOL`` / ``FRACINEQ_ATOL`` to the quadrature settings."""
    env = os.environ if environ is None else environ
    kw = {}
    for var, name in (("FRACINEQ_RTOL", "rel_tol"), ("FRACINEQ_ATOL", "abs_tol")):
        raw = env.get(var)
        if raw:
            try:
                kw[name] = float(raw)
            except ValueError:
                raise ConfigError(f"{var} must be a number, got {raw!r}", field=var) from None
    if not kw:
        return cfg
    try:
        return replace(cfg, quadrature=cfg.quadrature.replace(**kw))
    except (DomainError, ValueError) as exc:
        raise ConfigError(f"environment override rejected: {exc}") from None


def env_jobs(environ=None) -> int:
    """Worker count from ``FRACINEQ_JOBS`` (default 1)."""
    env = os.environ if environ is None else environ
    raw = env.get("FRACINEQ_JOBS")
    if not raw:
        return 1
    try:
        jobs = int(raw)
    except ValueError:
        raise ConfigError(f"FRACINEQ_JOBS must be an integer, got {raw!r}", field="FRACINEQ_JOBS") from None
    if jobs < 1:
        raise ConfigError(f"FRACINEQ_JOBS must be >= 1, got {jobs}", field="FRACINEQ_JOBS")
    return jobs


def load_config(path, *, apply_env: bool = True) -> SweepConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, apply_env=apply_env)


DEFAULT_CONFIG_TEXT = resources.files(__package__).joinpath("default_suite.yaml").read_text("utf-8")


def default_config(*, apply_env: bool = True) -> SweepConfig:
    """The bundled default suite."""
    return parse_config(DEFAULT_CONFIG_TEXT, apply_env=apply_env)

