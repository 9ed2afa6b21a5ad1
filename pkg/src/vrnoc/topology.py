"""Column topology construction and validation.

Routers form a single logical chain 0..N-1 regardless of flavor; router
ids define the 1-D routing order.  In double- and multi-column layouts
the chain folds at the column boundaries (last router of one column
links to the first of the next), which keeps the greater/less routing
comparison globally correct.  Interior routers have four ports, the two
chain ends have three; a one-router chain degenerates to two region
ports only (a testing extension, not a hardware configuration).

Each router hosts two virtual regions, west and east.  Region uid is
``2 * router_id + side`` with west = 0, east = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

from .packet import ROUTER_MAX
from .router import Direction, RouterConfig, route_decision

MAX_ROUTERS = ROUTER_MAX + 1


class Flavor(IntEnum):
    SINGLE_COLUMN = 1
    DOUBLE_COLUMN = 2
    MULTI_COLUMN = 3


class Side(IntEnum):
    WEST = 0
    EAST = 1


class TopologyError(ValueError):
    pass


@dataclass(frozen=True)
class VrDescriptor:
    vr_uid: int
    router_id: int
    side: Side


@dataclass
class TopologyConfig:
    flavor: Flavor = Flavor.SINGLE_COLUMN
    routers_per_column: int = 1
    columns: int = 1
    data_width_bits: int = 32
    clock_frequency_hz: float = 800e6
    direct_links: list[tuple[int, int]] = field(default_factory=list)

    def total_routers(self) -> int:
        return self.routers_per_column * self.columns


@dataclass
class Topology:
    config: TopologyConfig
    routers: list[RouterConfig]
    vrs: list[VrDescriptor]
    inter_router_links: list[tuple[int, int]]
    direct_links: list[tuple[int, int]]

    @property
    def num_routers(self) -> int:
        return len(self.routers)

    def vr(self, vr_uid: int) -> VrDescriptor:
        if not 0 <= vr_uid < len(self.vrs):
            raise TopologyError(f"unknown vr {vr_uid}")
        return self.vrs[vr_uid]

    def vr_at(self, router_id: int, side: Side) -> VrDescriptor:
        return self.vr(2 * router_id + side)

    def column_of(self, router_id: int) -> int:
        return router_id // self.config.routers_per_column


def _expected_ports(router_id: int, n: int) -> frozenset[Direction]:
    ports = {Direction.WEST_VR, Direction.EAST_VR}
    if router_id > 0:
        ports.add(Direction.SOUTH)
    if router_id < n - 1:
        ports.add(Direction.NORTH)
    return frozenset(ports)


def build_topology(cfg: TopologyConfig) -> Topology:
    if cfg.routers_per_column < 1 or cfg.columns < 1:
        raise TopologyError("router and column counts must be positive")
    if cfg.flavor == Flavor.SINGLE_COLUMN and cfg.columns != 1:
        raise TopologyError("single-column flavor takes exactly one column")
    if cfg.flavor == Flavor.DOUBLE_COLUMN and cfg.columns != 2:
        raise TopologyError("double-column flavor takes exactly two columns")
    if cfg.flavor == Flavor.MULTI_COLUMN and cfg.columns < 2:
        raise TopologyError("multi-column flavor needs at least two columns")
    n = cfg.total_routers()
    if n > MAX_ROUTERS:
        raise TopologyError(
            f"{n} routers exceed the {MAX_ROUTERS}-router id space")
    if cfg.data_width_bits < 1:
        raise TopologyError("data width must be positive")

    routers = [RouterConfig(i, _expected_ports(i, n)) for i in range(n)]
    vrs = [VrDescriptor(2 * r + s, r, Side(s))
           for r in range(n) for s in (Side.WEST, Side.EAST)]
    links = [(i, i + 1) for i in range(n - 1)]

    topo = Topology(cfg, routers, vrs, links, [])
    for a, b in cfg.direct_links:
        topo.vr(a)
        topo.vr(b)
        if b not in adjacent_vrs(topo, a):
            raise TopologyError(f"direct link ({a},{b}) joins non-adjacent regions")
        topo.direct_links.append((a, b))
    return topo


def adjacent_vrs(topo: Topology, vr_uid: int) -> list[int]:
    """Regions eligible for a direct link with ``vr_uid``.

    Eligible: the same-side region of a chain-adjacent router, and the
    opposite-side region of the same router.
    """
    d = topo.vr(vr_uid)
    out = []
    for r in (d.router_id - 1, d.router_id + 1):
        if 0 <= r < topo.num_routers:
            out.append(2 * r + d.side)
    out.append(2 * d.router_id + (1 - d.side))
    return sorted(out)


def validate(topo: Topology) -> list[str]:
    """Return all invariant violations (empty means valid)."""
    issues = []
    n = len(topo.routers)
    if n > MAX_ROUTERS:
        issues.append(f"{n} routers exceed the {MAX_ROUTERS}-router id space")
    for i, rc in enumerate(topo.routers):
        if rc.router_id != i:
            issues.append(f"router ids not contiguous at position {i}")
        want = _expected_ports(i, n)
        if rc.ports != want:
            issues.append(f"router {i} ports {sorted(rc.ports)} != expected "
                          f"{sorted(want)}")
    if topo.inter_router_links != [(i, i + 1) for i in range(n - 1)]:
        issues.append("inter-router links do not form the 0..N-1 chain")
    seen_slots = set()
    if len(topo.vrs) > 2 * n:
        issues.append("more than two regions per router")
    for d in topo.vrs:
        if not 0 <= d.router_id < n:
            issues.append(f"vr {d.vr_uid} bound to unknown router {d.router_id}")
            continue
        slot = (d.router_id, d.side)
        if slot in seen_slots:
            issues.append(f"two regions bound to router {d.router_id} side "
                          f"{d.side.name}")
        seen_slots.add(slot)
    for a, b in topo.direct_links:
        try:
            if b not in adjacent_vrs(topo, a):
                issues.append(f"direct link ({a},{b}) joins non-adjacent regions")
        except TopologyError:
            issues.append(f"direct link ({a},{b}) references unknown region")
    return issues


def walk_path(topo: Topology, src_router: int, dst_router: int,
              dst_side: Side) -> list[int]:
    """Follow the routing decision hop by hop; returns routers visited.

    The returned list includes both the injection and ejection router.
    Raises TopologyError if the walk leaves the chain (cannot happen for
    a valid topology) or fails to terminate.
    """
    visited = [src_router]
    cur = src_router
    for _ in range(topo.num_routers + 1):
        d = route_decision(dst_router, dst_side, cur)
        if d in (Direction.WEST_VR, Direction.EAST_VR):
            return visited
        if d not in topo.routers[cur].ports:
            raise TopologyError(f"walk fell off the chain at router {cur}")
        cur += 1 if d == Direction.NORTH else -1
        visited.append(cur)
    raise TopologyError("routing walk did not terminate")
