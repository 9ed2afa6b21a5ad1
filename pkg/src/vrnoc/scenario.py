"""Scenario file loading: YAML -> SimConfig with precise diagnostics.

A scenario is one human-editable YAML document with four sections
(topology, traffic, events, sim) plus a schema_version field.  Any
schema problem is reported as "<section path>: <what is wrong>"; raw
YAML syntax errors keep the parser's line/column location.
"""

from __future__ import annotations

from dataclasses import dataclass

import yaml

from .engine import SimConfig, TrafficProfile
from .tenancy import AllocationEvent
from .topology import Flavor, TopologyConfig

SCHEMA_VERSION = 1

_FLAVORS = {
    "single_column": Flavor.SINGLE_COLUMN,
    "double_column": Flavor.DOUBLE_COLUMN,
    "multi_column": Flavor.MULTI_COLUMN,
}

_TRAFFIC_KINDS = ("bernoulli", "stream", "burst")
_EVENT_KINDS = ("allocate", "release", "extend", "wire")


class ScenarioError(ValueError):
    """The file does not describe a valid scenario."""


def _require(mapping, key, where, types=None):
    if not isinstance(mapping, dict):
        raise ScenarioError(f"{where}: expected a mapping")
    if key not in mapping:
        raise ScenarioError(f"{where}: missing required field '{key}'")
    value = mapping[key]
    if types is not None and not isinstance(value, types):
        raise ScenarioError(
            f"{where}.{key}: expected {types[0].__name__}, got "
            f"{type(value).__name__}")
    return value


def _opt(mapping, key, default=None, types=None, where=""):
    if key not in mapping:
        return default
    value = mapping[key]
    if value is None:
        return default
    if types is not None and not isinstance(value, types):
        raise ScenarioError(
            f"{where}.{key}: expected {types[0].__name__}, got "
            f"{type(value).__name__}")
    return value


def _parse_topology(node) -> TopologyConfig:
    where = "topology"
    flavor_name = _opt(node, "flavor", "single_column", (str,), where)
    if flavor_name not in _FLAVORS:
        raise ScenarioError(
            f"{where}.flavor: unknown flavor {flavor_name!r} "
            f"(choose from {', '.join(sorted(_FLAVORS))})")
    links = _opt(node, "direct_links", [], (list,), where)
    parsed_links = []
    for i, pair in enumerate(links):
        if not (isinstance(pair, list) and len(pair) == 2
                and all(isinstance(x, int) for x in pair)):
            raise ScenarioError(
                f"{where}.direct_links[{i}]: expected a pair of region ids")
        parsed_links.append((pair[0], pair[1]))
    return TopologyConfig(
        flavor=_FLAVORS[flavor_name],
        routers_per_column=_require(node, "routers_per_column", where, (int,)),
        columns=_opt(node, "columns", 1, (int,), where),
        data_width_bits=_opt(node, "data_width_bits", 32, (int,), where),
        clock_frequency_hz=float(_opt(node, "clock_frequency_hz", 800e6,
                                      (int, float), where)),
        direct_links=parsed_links,
    )


def _parse_profile(node, index: int) -> TrafficProfile:
    where = f"traffic[{index}]"
    kind = _require(node, "kind", where, (str,))
    if kind not in _TRAFFIC_KINDS:
        raise ScenarioError(
            f"{where}.kind: unknown kind {kind!r} "
            f"(choose from {', '.join(_TRAFFIC_KINDS)})")
    prof = TrafficProfile(
        kind=kind,
        source_vr=_require(node, "source_vr", where, (int,)),
        rate=float(_opt(node, "rate", 0.0, (int, float), where)),
        period=_opt(node, "period", 0, (int,), where),
        size=_opt(node, "size", 1, (int,), where),
        length=_opt(node, "length", None, (int,), where),
        start_cycle=_opt(node, "start_cycle", 0, (int,), where),
        stop_cycle=_opt(node, "stop_cycle", None, (int,), where),
        flow_id=_opt(node, "flow_id", f"flow{index}", (str,), where),
        variant=_opt(node, "variant", "", (str,), where),
    )
    if kind == "bernoulli" and not 0.0 <= prof.rate <= 1.0:
        raise ScenarioError(f"{where}.rate: {prof.rate} outside [0, 1]")
    if kind == "burst" and prof.period < 1:
        raise ScenarioError(f"{where}.period: burst traffic needs period >= 1")

    dests = 0
    if _opt(node, "local", False, (bool,), where):
        prof.local = True
        dests += 1
    if "direct" in node:
        pair = node["direct"]
        if not (isinstance(pair, list) and len(pair) == 2
                and all(isinstance(x, int) for x in pair)):
            raise ScenarioError(f"{where}.direct: expected a pair of region ids")
        prof.direct = (pair[0], pair[1])
        dests += 1
    if "dest_vr" in node and node["dest_vr"] is not None:
        prof.dest_vr = _opt(node, "dest_vr", None, (int,), where)
        dests += 1
    if "dest" in node:
        d = node["dest"]
        prof.dest_router = _require(d, "router", f"{where}.dest", (int,))
        prof.dest_vr_id = _require(d, "vr_id", f"{where}.dest", (int,))
        dests += 1
    forge = _opt(node, "forge", None, (dict,), where)
    if forge is not None:
        prof.forge_vi = _opt(forge, "vi", None, (int,), f"{where}.forge")
        prof.forge_router = _opt(forge, "router", None, (int,), f"{where}.forge")
        prof.forge_vr = _opt(forge, "vr", None, (int,), f"{where}.forge")
        if not prof.forged:
            raise ScenarioError(f"{where}.forge: empty forge section")
    if dests > 1:
        raise ScenarioError(f"{where}: more than one destination given")
    if dests == 0 and not prof.forged:
        raise ScenarioError(
            f"{where}: needs a destination (dest_vr, dest, direct or local)")
    return prof


def _parse_event(node, index: int) -> AllocationEvent:
    where = f"events[{index}]"
    kind = _require(node, "kind", where, (str,))
    if kind not in _EVENT_KINDS:
        raise ScenarioError(
            f"{where}.kind: unknown kind {kind!r} "
            f"(choose from {', '.join(_EVENT_KINDS)})")
    ev = AllocationEvent(
        cycle=_require(node, "cycle", where, (int,)),
        kind=kind,
        vi_id=_require(node, "vi", where, (int,)),
        vr_id=_opt(node, "vr", None, (int,), where),
        src_vr=_opt(node, "src_vr", None, (int,), where),
        dst_vr=_opt(node, "dst_vr", None, (int,), where),
    )
    if kind in ("allocate", "release", "extend") and ev.vr_id is None:
        raise ScenarioError(f"{where}: '{kind}' needs a 'vr' field")
    if kind in ("extend", "wire") and ev.src_vr is None:
        raise ScenarioError(f"{where}: '{kind}' needs a 'src_vr' field")
    if kind == "wire" and ev.dst_vr is None:
        raise ScenarioError(f"{where}: 'wire' needs a 'dst_vr' field")
    return ev


def parse_scenario(doc) -> SimConfig:
    """Build a SimConfig from an already-loaded YAML document."""
    if not isinstance(doc, dict):
        raise ScenarioError("top level: expected a mapping of sections")
    version = _require(doc, "schema_version", "top level", (int,))
    if version != SCHEMA_VERSION:
        raise ScenarioError(
            f"schema_version: {version} not supported (expected {SCHEMA_VERSION})")
    unknown = set(doc) - {"schema_version", "topology", "traffic", "events", "sim"}
    if unknown:
        raise ScenarioError(f"top level: unknown section(s) {sorted(unknown)}")

    topo = _parse_topology(_require(doc, "topology", "top level"))
    traffic_node = _opt(doc, "traffic", [], (list,), "top level")
    traffic = [_parse_profile(n, i) for i, n in enumerate(traffic_node)]
    events_node = _opt(doc, "events", [], (list,), "top level")
    events = [_parse_event(n, i) for i, n in enumerate(events_node)]

    sim = _opt(doc, "sim", {}, (dict,), "top level")
    cycles = _opt(sim, "cycles", 10_000, (int,), "sim")
    if cycles < 1:
        raise ScenarioError("sim.cycles: must be positive")
    return SimConfig(
        topology=topo,
        traffic=traffic,
        events=events,
        cycles=cycles,
        seed=_opt(sim, "seed", 1, (int,), "sim"),
        warmup=_opt(sim, "warmup", None, (int,), "sim"),
        queue_depth=_opt(sim, "queue_depth", None, (int,), "sim"),
    )


def load_scenario(path) -> SimConfig:
    """Load and check a scenario file.

    Raises ScenarioError for anything wrong with the file itself; YAML
    syntax errors carry the parser's line/column location.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        loc = f" at line {mark.line + 1}, column {mark.column + 1}" \
            if mark is not None else ""
        raise ScenarioError(f"{path}: YAML parse error{loc}: "
                            f"{getattr(exc, 'problem', exc)}") from exc
    except OSError as exc:
        raise ScenarioError(f"{path}: {exc.strerror}") from exc
    try:
        return parse_scenario(doc)
    except ScenarioError as exc:
        raise ScenarioError(f"{path}: {exc}") from exc


def fixture_path(name: str):
    """Filesystem path of a bundled scenario (e.g. "case_study.yaml")."""
    from importlib.resources import files
    path = files("vrnoc") / "fixtures" / name
    if not path.is_file():
        raise ScenarioError(f"no bundled fixture named {name!r}")
    return path


def select_variant(cfg: SimConfig, variant: str) -> SimConfig:
    """Keep untagged profiles plus those matching ``variant``."""
    from dataclasses import replace
    traffic = [p for p in cfg.traffic if p.variant in ("", variant)]
    return replace(cfg, traffic=traffic)
