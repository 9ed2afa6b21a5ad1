"""Deterministic cycle-driven simulation loop and metrics.

Per-cycle ordering:

    1. tenancy events (and scheduled wrapper configuration)
    2. traffic generators inject into region queues
    3. region/router handshakes pull eligible flits
    4. routers advance (arbitrate, traverse)
    5. access monitors deliver or deny
    6. metrics sampling and conservation check

Steps 3-5 are computed from one snapshot of the network: a grant into a
router requires space in its crossbar stage, which may in turn depend on
the next router accepting the flit held in the output register this same
cycle.  That readiness chain is evaluated recursively along the flit's
travel direction (it cannot loop, because a northbound flit never turns
south), then all moves are committed together.

Waiting time is counted from enqueue to handshake pull, latency from
enqueue to delivery at the destination access monitor, so latency =
waiting + 2 x routers traversed for NoC flows, waiting + 1 for direct
links, and waiting alone for local (non-NoC) compute flows.
"""

from __future__ import annotations

import random
from collections import deque

import numpy as np
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

from .packet import Flit, Header
from .router import Direction, Router
from .tenancy import AllocationEvent, TenancyLedger
from .topology import TopologyConfig, build_topology, validate
from .vregion import VirtualRegion

_LINK_OUT = {Direction.NORTH: (+1, Direction.SOUTH),
             Direction.SOUTH: (-1, Direction.NORTH)}


class SimConfigError(ValueError):
    pass


@dataclass
class TrafficProfile:
    """One traffic source bound to a region.

    kind: "bernoulli" (rate per cycle), "stream" (contiguous, length
    cycles at one flit per cycle) or "burst" (size flits every period
    cycles).  The destination is a NoC address, a direct link, or
    "local" for on-region compute traffic that never enters the NoC.
    """

    kind: str
    source_vr: int
    dest_vr: Optional[int] = None
    dest_router: Optional[int] = None
    dest_vr_id: Optional[int] = None
    direct: Optional[tuple[int, int]] = None
    local: bool = False
    rate: float = 0.0
    period: int = 0
    size: int = 1
    length: Optional[int] = None
    start_cycle: int = 0
    stop_cycle: Optional[int] = None
    flow_id: str = ""
    variant: str = ""  # sweep variant tag ("" = always included)
    forge_vi: Optional[int] = None
    forge_router: Optional[int] = None
    forge_vr: Optional[int] = None

    @property
    def forged(self) -> bool:
        return self.forge_vi is not None or self.forge_router is not None \
            or self.forge_vr is not None


@dataclass
class SimConfig:
    topology: TopologyConfig
    traffic: list[TrafficProfile] = field(default_factory=list)
    events: list[AllocationEvent] = field(default_factory=list)
    cycles: int = 10_000
    seed: int = 1
    warmup: Optional[int] = None  # default: 10% of cycles
    queue_depth: Optional[int] = None

    def warmup_cycles(self) -> int:
        return self.cycles // 10 if self.warmup is None else self.warmup


def bandwidth(data_width_bits: int, clock_frequency_hz: float,
              utilization: float) -> float:
    """Delivered bandwidth in bits per second."""
    if not 0.0 <= utilization <= 1.0:
        raise ValueError(f"utilization {utilization} outside [0, 1]")
    return data_width_bits * clock_frequency_hz * utilization


def profile_seed(master_seed: int, profile_index: int) -> int:
    """Documented master-seed to per-profile seed derivation."""
    return master_seed * 1_000_003 + profile_index


def sweep_seed(master_seed: int, rate_index: int) -> int:
    """Documented master-seed to per-rate run seed derivation."""
    return master_seed + 104_729 * (rate_index + 1)


@dataclass
class FlowStats:
    flow_id: str
    injected: int = 0            # attempts, including refused retries
    delivered: int = 0
    refused: int = 0
    denied: int = 0
    misrouted: int = 0
    latencies: list[int] = field(default_factory=list)
    waits: list[int] = field(default_factory=list)
    first_delivery: int = -1
    last_delivery: int = -1

    def mean_latency(self) -> float:
        return sum(self.latencies) / len(self.latencies) if self.latencies else 0.0

    def p95_latency(self) -> float:
        if not self.latencies:
            return 0.0
        return float(np.percentile(self.latencies, 95, method="lower"))

    def mean_waiting(self) -> float:
        return sum(self.waits) / len(self.waits) if self.waits else 0.0

    def throughput(self) -> float:
        """Sustained delivery rate: post-warmup deliveries over the span
        between the first and last of them."""
        n = len(self.latencies)
        if n == 0:
            return 0.0
        span = self.last_delivery - self.first_delivery + 1
        return n / span


@dataclass
class MetricsReport:
    cycles: int
    warmup: int
    seed: int
    data_width_bits: int
    clock_frequency_hz: float
    flows: dict[str, FlowStats]
    per_vr: list[dict]
    allocation_table: dict[int, list[int]]
    vi_of_flow: dict[str, int]
    collisions: dict[tuple[int, int], int]

    # -- aggregates ------------------------------------------------------

    def _sum(self, attr: str) -> int:
        return sum(getattr(f, attr) for f in self.flows.values())

    @property
    def injected(self) -> int:
        return self._sum("injected")

    @property
    def delivered(self) -> int:
        return self._sum("delivered")

    @property
    def refused(self) -> int:
        return self._sum("refused")

    @property
    def denied(self) -> int:
        return self._sum("denied")

    @property
    def misrouted(self) -> int:
        return self._sum("misrouted")

    def mean_latency(self) -> float:
        lats = [l for f in self.flows.values() for l in f.latencies]
        return sum(lats) / len(lats) if lats else 0.0

    def mean_waiting(self) -> float:
        ws = [w for f in self.flows.values() for w in f.waits]
        return sum(ws) / len(ws) if ws else 0.0

    def aggregate_throughput(self) -> float:
        window = self.cycles - self.warmup
        done = sum(len(f.latencies) for f in self.flows.values())
        return done / window if window else 0.0

    def flow_bandwidth_bps(self, flow_id: str) -> float:
        return self.data_width_bits * self.clock_frequency_hz * \
            min(1.0, self.flows[flow_id].throughput())

    def per_vi(self) -> dict[int, dict]:
        out: dict[int, dict] = {}
        for fid, st in self.flows.items():
            vi = self.vi_of_flow.get(fid)
            if vi is None:
                continue
            agg = out.setdefault(vi, {"delivered": 0, "denied": 0,
                                      "latency_sum": 0, "latency_n": 0})
            agg["delivered"] += st.delivered
            agg["denied"] += st.denied
            agg["latency_sum"] += sum(st.latencies)
            agg["latency_n"] += len(st.latencies)
        for agg in out.values():
            n = agg.pop("latency_n")
            agg["mean_latency"] = agg.pop("latency_sum") / n if n else 0.0
        return out

    # -- rendering -------------------------------------------------------

    CSV_COLUMNS = ["flow", "injected", "delivered", "refused", "denied",
                   "misrouted", "mean_latency", "p95_latency", "mean_waiting",
                   "throughput_flits_per_cycle", "bandwidth_bps"]

    def _flow_row(self, fid: str) -> list[str]:
        f = self.flows[fid]
        return [fid, str(f.injected), str(f.delivered), str(f.refused),
                str(f.denied), str(f.misrouted),
                f"{f.mean_latency():.3f}", f"{f.p95_latency():.3f}",
                f"{f.mean_waiting():.3f}", f"{f.throughput():.6f}",
                f"{self.flow_bandwidth_bps(fid):.1f}"]

    def to_csv_rows(self) -> list[list[str]]:
        rows = [list(self.CSV_COLUMNS)]
        for fid in sorted(self.flows):
            rows.append(self._flow_row(fid))
        agg_bw = self.data_width_bits * self.clock_frequency_hz * \
            min(1.0, self.aggregate_throughput())
        rows.append(["AGGREGATE", str(self.injected), str(self.delivered),
                     str(self.refused), str(self.denied), str(self.misrouted),
                     f"{self.mean_latency():.3f}", "",
                     f"{self.mean_waiting():.3f}",
                     f"{self.aggregate_throughput():.6f}", f"{agg_bw:.1f}"])
        return rows

    def to_text(self) -> str:
        lines = [
            f"cycles: {self.cycles}",
            f"warmup: {self.warmup}",
            f"seed: {self.seed}",
            f"data_width_bits: {self.data_width_bits}",
            f"clock_frequency_hz: {self.clock_frequency_hz:g}",
            f"injected: {self.injected}",
            f"delivered: {self.delivered}",
            f"refused: {self.refused}",
            f"denied: {self.denied}",
            f"misrouted: {self.misrouted}",
            f"mean_latency_cycles: {self.mean_latency():.3f}",
            f"mean_waiting_cycles: {self.mean_waiting():.3f}",
            f"aggregate_throughput_flits_per_cycle: {self.aggregate_throughput():.6f}",
        ]
        for fid in sorted(self.flows):
            f = self.flows[fid]
            lines.append(
                f"flow {fid}: injected={f.injected} delivered={f.delivered} "
                f"refused={f.refused} denied={f.denied} misrouted={f.misrouted} "
                f"mean_latency={f.mean_latency():.3f} "
                f"p95_latency={f.p95_latency():.3f} "
                f"mean_waiting={f.mean_waiting():.3f} "
                f"throughput={f.throughput():.6f} "
                f"bandwidth_bps={self.flow_bandwidth_bps(fid):.1f}")
        for row in self.per_vr:
            lines.append(
                "vr {vr}: accepted={accepted} denied={denied} "
                "injected={injected} refused={refused} "
                "mean_queue_depth={mean_depth:.3f} "
                "max_queue_depth={max_depth}".format(**row))
        for (router, out), count in sorted(self.collisions.items()):
            lines.append(f"collisions router {router} output {out}: {count}")
        for vi in sorted(self.allocation_table):
            vrs = ",".join(str(v) for v in self.allocation_table[vi])
            lines.append(f"vi {vi}: vrs=[{vrs}]")
        for vi, agg in sorted(self.per_vi().items()):
            lines.append(f"vi {vi} metrics: delivered={agg['delivered']} "
                         f"denied={agg['denied']} "
                         f"mean_latency={agg['mean_latency']:.3f}")
        return "\n".join(lines) + "\n"


class _FlowRuntime:
    """Generator state for one profile."""

    __slots__ = ("profile", "rng", "pending", "seq", "stats", "queue", "reg",
                 "dst_uid", "src_uid")

    def __init__(self, profile: TrafficProfile, seed: int):
        self.profile = profile
        self.rng = random.Random(seed)
        self.pending: deque[int] = deque()
        self.seq = 0
        self.stats = FlowStats(profile.flow_id)
        # queue/reg are used by direct-link and local flows only
        self.queue: deque[tuple[int, int]] = deque()  # (enqueue cycle, payload)
        self.reg: Optional[tuple[int, int]] = None    # (enqueue cycle, payload)
        self.dst_uid: Optional[int] = None
        self.src_uid = profile.source_vr

    def arrivals(self, t: int) -> int:
        p = self.profile
        if t < p.start_cycle:
            return 0
        if p.stop_cycle is not None and t >= p.stop_cycle:
            return 0
        if p.kind == "bernoulli":
            return 1 if self.rng.random() < p.rate else 0
        if p.kind == "stream":
            end = p.start_cycle + (p.length or 0)
            return 1 if (p.length is None or t < end) else 0
        if p.kind == "burst":
            return p.size if (t - p.start_cycle) % p.period == 0 else 0
        raise SimConfigError(f"unknown traffic kind {p.kind!r}")


class Simulation:
    """One deterministic run over a built topology."""

    def __init__(self, cfg: SimConfig):
        self.cfg = cfg
        self.topo = build_topology(cfg.topology)
        problems = validate(self.topo)
        if problems:
            raise SimConfigError("; ".join(problems))
        if cfg.cycles <= cfg.warmup_cycles():
            raise SimConfigError("total cycles must exceed the warmup window")
        self.vrs = [VirtualRegion(d.vr_uid, d.router_id, int(d.side),
                                  queue_depth=cfg.queue_depth)
                    for d in self.topo.vrs]
        self.routers = [Router(rc) for rc in self.topo.routers]
        self.ledger = TenancyLedger(self.topo, self.vrs)
        self.events = sorted(cfg.events, key=lambda e: e.cycle)
        self.flows: list[_FlowRuntime] = []
        for i, p in enumerate(cfg.traffic):
            if not p.flow_id:
                p = replace(p, flow_id=f"flow{i}")
            self.flows.append(_FlowRuntime(p, profile_seed(cfg.seed, i)))
        self._resolve_destinations()
        self.flow_by_id = {f.profile.flow_id: f for f in self.flows}
        if len(self.flow_by_id) != len(self.flows):
            raise SimConfigError("duplicate flow ids")
        # conservation counters
        self.n_attempts = 0
        self.n_refused = 0
        self.n_queued = 0
        self.n_network = 0
        self.n_delivered = 0
        self.n_denied = 0
        self.n_misrouted = 0
        self.vi_of_flow: dict[str, int] = {}
        self._warm = cfg.warmup_cycles()
        self._point_flows = [f for f in self.flows
                             if f.profile.local or f.profile.direct is not None]
        self.trace_sink: Optional[Callable[[int, int, Router, dict, set, dict], None]] = None
        self.cycle = 0

    def _resolve_destinations(self) -> None:
        for f in self.flows:
            p = f.profile
            self.topo.vr(p.source_vr)
            if p.local:
                continue
            if p.direct is not None:
                a, b = p.direct
                pair = tuple(sorted((a, b)))
                links = {tuple(sorted(l)) for l in self.topo.direct_links}
                if pair not in links:
                    raise SimConfigError(
                        f"flow {p.flow_id or '?'}: no direct link between "
                        f"vr {a} and vr {b}")
                if a != p.source_vr:
                    raise SimConfigError("direct link source must match source_vr")
                f.dst_uid = b
                continue
            if p.dest_vr is not None:
                d = self.topo.vr(p.dest_vr)
                p.dest_router, p.dest_vr_id = d.router_id, int(d.side)
            if not p.forged:
                if p.dest_router is None or p.dest_vr_id is None:
                    raise SimConfigError(
                        f"flow {p.flow_id or '?'}: missing destination")
                if not 0 <= p.dest_router < self.topo.num_routers:
                    raise SimConfigError(
                        f"flow {p.flow_id or '?'}: destination router "
                        f"{p.dest_router} not in topology")
                f.dst_uid = 2 * p.dest_router + p.dest_vr_id
                if f.dst_uid == p.source_vr:
                    raise SimConfigError(
                        f"flow {p.flow_id or '?'}: a region cannot send to itself")

    # -- per-cycle phases ------------------------------------------------

    def _apply_events(self, t: int) -> None:
        while self.events and self.events[0].cycle <= t:
            self.ledger.apply(self.events.pop(0))
        for f in self.flows:
            p = f.profile
            if p.start_cycle != t or p.local or p.direct or p.forged:
                continue
            owner = self.ledger.owner.get(p.source_vr)
            if owner is None:
                raise SimConfigError(
                    f"flow {p.flow_id}: source vr {p.source_vr} is not "
                    f"allocated at its start cycle {t}")
            self.ledger.wire(owner, p.source_vr, f.dst_uid, t)
            self.vi_of_flow[p.flow_id] = owner

    def _inject(self, t: int) -> None:
        for f in self.flows:
            p = f.profile
            for _ in range(f.arrivals(t)):
                f.pending.append(f.seq)
                f.seq += 1
            if not f.pending:
                continue
            if p.local or p.direct is not None:
                while f.pending:
                    f.queue.append((t, f.pending.popleft()))
                    f.stats.injected += 1
                    self.n_attempts += 1
                    self.n_queued += 1
                continue
            vr = self.vrs[p.source_vr]
            header = None
            if p.forged:
                header = Header(p.forge_vi if p.forge_vi is not None else 0,
                                p.forge_router if p.forge_router is not None
                                else (p.dest_router or 0),
                                p.forge_vr if p.forge_vr is not None
                                else (p.dest_vr_id or 0))
            while f.pending:
                payload = f.pending[0]
                f.stats.injected += 1
                self.n_attempts += 1
                if vr.inject(payload, t, p.flow_id, header):
                    f.pending.popleft()
                    self.n_queued += 1
                else:
                    f.stats.refused += 1
                    self.n_refused += 1
                    break  # retry next cycle

    def _advance_network(self, t: int) -> None:
        """One network cycle, semantically identical to Router.plan/apply
        chained with same-cycle downstream-readiness, but with the per-call
        overhead flattened out for long runs."""
        routers = self.routers
        vrs = self.vrs
        n = len(routers)
        N, S, W, E = 0, 1, 2, 3

        # snapshot of offered flits: offers[r] = [north, south, west, east]
        offers: list[Optional[list]] = [None] * n
        active: list[int] = []
        for r in range(n):
            router = routers[r]
            off = [None, None, None, None]
            some = False
            if r > 0:
                f = routers[r - 1].outreg[N]
                if f is not None:
                    off[S] = f
                    some = True
            if r + 1 < n:
                f = routers[r + 1].outreg[S]
                if f is not None:
                    off[N] = f
                    some = True
            q = vrs[2 * r].inject_queue
            if q and q[0].inject_cycle < t:
                off[W] = q[0]
                some = True
            q = vrs[2 * r + 1].inject_queue
            if q and q[0].inject_cycle < t:
                off[E] = q[0]
                some = True
            if some or router.occ:
                offers[r] = off
                active.append(r)
        if not active:
            return

        # decide: requests, misroutes, winners (with same-cycle readiness)
        reqs_of: dict[int, list[list[int]]] = {}
        mis_of: dict[int, list[int]] = {}
        has_of: dict[int, tuple[bool, bool, bool, bool]] = {}
        for r in active:
            ports = routers[r].cfg.ports
            has_of[r] = (N in ports, S in ports, W in ports, E in ports)
            reqs: list[list[int]] = [[], [], [], []]
            mis: list[int] = []
            off = offers[r]
            for inp in (N, S, W, E):
                f = off[inp]
                if f is None:
                    continue
                h = f.header
                tr = h.router_id
                if tr > r:
                    out = N
                elif tr < r:
                    out = S
                elif h.vr_id == 0:
                    out = W
                else:
                    out = E
                if not has_of[r][out] or out == inp:
                    mis.append(inp)
                else:
                    reqs[out].append(inp)
                    if len(reqs[out]) == 2:
                        routers[r].collisions[out] += 1
            reqs_of[r] = reqs
            mis_of[r] = mis

        # decisions are evaluated per (router, output); readiness of a
        # northbound output only ever depends on outputs further north
        # (and southbound on outputs further south), so there are no
        # cyclic dependencies.
        decided: dict[int, Optional[int]] = {}

        def decide(r: int, out: int) -> Optional[int]:
            key = r * 4 + out
            got = decided.get(key, -1)
            if got != -1:
                return got
            router = routers[r]
            res = None
            rq = reqs_of[r][out]
            if rq and (router.xbar[out] is None or space(r, out)):
                if len(rq) == 1:
                    res = rq[0]
                else:
                    rr = router.rr_ptr[out]
                    for step in range(4):
                        c = (rr + step) & 3
                        if c in rq:
                            res = c
                            break
            decided[key] = res
            return res

        def space(r: int, out: int) -> bool:
            # xbar[out] occupied: needs the output register free or emptying
            held = routers[r].outreg[out]
            return held is None or consume(r, out, held)

        def consume(r: int, out: int, held: Flit) -> bool:
            if out >= W:
                return True  # regions always accept
            d = r + 1 if out == N else r - 1
            inp = S if out == N else N
            h = held.header
            tr = h.router_id
            if tr > d:
                o = N
            elif tr < d:
                o = S
            elif h.vr_id == 0:
                o = W
            else:
                o = E
            if not has_of[d][o] or o == inp:
                return True  # consumed downstream as a misroute
            return decide(d, o) == inp

        # pre-decide every contested output before any state is mutated;
        # outputs with no requests trivially grant nothing
        for r in active:
            reqs = reqs_of[r]
            for out in (N, S, W, E):
                if reqs[out]:
                    decide(r, out)

        # commit, per router: emit -> shift -> grant, plus pulls/deliveries
        tracing = self.trace_sink is not None
        for r in active:
            router = routers[r]
            g = [decided.get(r * 4 + out) for out in (N, S, W, E)]
            xbar = router.xbar
            outreg = router.outreg
            emitted = {} if tracing else None
            accepted = set() if tracing else None
            for out in (N, S, W, E):
                held = outreg[out]
                if held is not None and consume(r, out, held):
                    outreg[out] = None
                    router.occ -= 1
                    if out == W:
                        self._deliver(vrs[2 * r], held, t)
                    elif out == E:
                        self._deliver(vrs[2 * r + 1], held, t)
                    if tracing:
                        emitted[Direction(out)] = held
                if xbar[out] is not None and outreg[out] is None:
                    outreg[out] = xbar[out]
                    xbar[out] = None
                win = g[out]
                if win is not None and xbar[out] is None:
                    xbar[out] = offers[r][win]
                    router.rr_ptr[out] = (win + 1) & 3
                    router.occ += 1
                    if win == W:
                        self._record_pull(vrs[2 * r].pull(t), t)
                    elif win == E:
                        self._record_pull(vrs[2 * r + 1].pull(t), t)
                    if tracing:
                        accepted.add(win)
            for inp in mis_of[r]:
                flit = offers[r][inp]
                if inp == W:
                    vrs[2 * r].pull(t)
                    self._record_pull(flit, t)
                elif inp == E:
                    vrs[2 * r + 1].pull(t)
                    self._record_pull(flit, t)
                self._count_misroute(flit, t)
                if tracing:
                    accepted.add(inp)
            if tracing:
                off = {Direction(i): f for i, f in enumerate(offers[r])
                       if f is not None}
                self.trace_sink(t, r, router, off, accepted, emitted)

    def _record_pull(self, flit: Flit, t: int) -> None:
        self.n_queued -= 1
        self.n_network += 1
        st = self.flow_by_id.get(flit.flow_id)
        if st is not None and flit.inject_cycle >= self._warm:
            st.stats.waits.append(t - flit.inject_cycle)

    def _deliver(self, vr: VirtualRegion, flit: Flit, t: int) -> None:
        self.n_network -= 1
        ok = vr.accept(flit, t)
        st = self.flow_by_id.get(flit.flow_id)
        if ok:
            self.n_delivered += 1
            if st is not None:
                st.stats.delivered += 1
                if flit.inject_cycle >= self._warm:
                    st.stats.latencies.append(t - flit.inject_cycle)
                    if st.stats.first_delivery < 0:
                        st.stats.first_delivery = t
                    st.stats.last_delivery = t
        else:
            self.n_denied += 1
            if st is not None:
                st.stats.denied += 1

    def _count_misroute(self, flit: Flit, t: int) -> None:
        # flit was removed from a region queue head or an output register
        if flit.pull_cycle >= 0:
            self.n_network -= 1
        else:
            self.n_queued -= 1
            st = self.flow_by_id.get(flit.flow_id)
            if st is not None and flit.inject_cycle >= self._warm:
                st.stats.waits.append(t - flit.inject_cycle)
        self.n_misrouted += 1
        st = self.flow_by_id.get(flit.flow_id)
        if st is not None:
            st.stats.misrouted += 1

    def _advance_point_links(self, t: int) -> None:
        warm = self._warm
        for f in self._point_flows:
            p = f.profile
            if p.direct is not None and f.reg is not None:
                enq, payload = f.reg
                f.reg = None
                self.n_network -= 1
                self._point_deliver(f, payload, t, warm, enq)
            if f.queue and f.queue[0][0] < t:
                enq, payload = f.queue.popleft()
                self.n_queued -= 1
                if enq >= warm:
                    f.stats.waits.append(t - enq)
                if p.local:
                    self._point_deliver(f, payload, t, warm, enq)
                else:
                    f.reg = (enq, payload)
                    self.n_network += 1

    def _point_deliver(self, f: _FlowRuntime, payload: int, t: int,
                       warm: int, enq: int) -> None:
        vi_src = self.ledger.owner.get(f.src_uid)
        vi_dst = self.ledger.owner.get(f.dst_uid) if f.dst_uid is not None else vi_src
        if f.profile.direct is not None and (vi_src is None or vi_src != vi_dst):
            self.n_denied += 1
            f.stats.denied += 1
            return
        dst = self.vrs[f.dst_uid if f.dst_uid is not None else f.src_uid]
        dst.deliver_payload(payload, t, f.profile.flow_id, t - enq)
        self.n_delivered += 1
        f.stats.delivered += 1
        if enq >= warm:
            f.stats.latencies.append(t - enq)
            if f.stats.first_delivery < 0:
                f.stats.first_delivery = t
            f.stats.last_delivery = t

    def _check_conservation(self) -> None:
        lhs = self.n_attempts
        rhs = (self.n_refused + self.n_queued + self.n_network +
               self.n_delivered + self.n_denied + self.n_misrouted)
        if lhs != rhs:
            raise AssertionError(
                f"conservation violated at cycle {self.cycle}: attempts {lhs} "
                f"!= {rhs}")

    def step(self) -> None:
        t = self.cycle
        self._apply_events(t)
        self._inject(t)
        self._advance_network(t)
        self._advance_point_links(t)
        for vr in self.vrs:
            d = len(vr.inject_queue)
            vr.depth_samples += 1
            vr.depth_total += d
            if d > vr.depth_max:
                vr.depth_max = d
        self._check_conservation()
        self.cycle += 1

    def run(self) -> MetricsReport:
        warm = self._warm
        for _ in range(self.cfg.cycles):
            self.step()
        for f in self.flows:
            p = f.profile
            if p.flow_id not in self.vi_of_flow:
                owner = self.ledger.owner.get(p.source_vr)
                if owner is not None:
                    self.vi_of_flow[p.flow_id] = owner
        per_vr = [{
            "vr": vr.vr_uid, "accepted": vr.accepted, "denied": vr.denied,
            "injected": vr.injected, "refused": vr.refused,
            "mean_depth": vr.mean_depth(), "max_depth": vr.depth_max,
        } for vr in self.vrs]
        collisions = {(r.cfg.router_id, int(out)): r.collisions[out]
                      for r in self.routers for out in r.cfg.ports
                      if r.collisions[out]}
        return MetricsReport(
            cycles=self.cfg.cycles, warmup=warm, seed=self.cfg.seed,
            data_width_bits=self.cfg.topology.data_width_bits,
            clock_frequency_hz=self.cfg.topology.clock_frequency_hz,
            flows={f.profile.flow_id: f.stats for f in self.flows},
            per_vr=per_vr,
            allocation_table=self.ledger.allocation_table(),
            vi_of_flow=dict(self.vi_of_flow),
            collisions=collisions)


def run(cfg: SimConfig) -> MetricsReport:
    return Simulation(cfg).run()


def sweep_injection(cfg: SimConfig, rates: list[float],
                    nominal_rate: float = 1.0) -> list[dict]:
    """One full run per rate; profile rates scale by rate/nominal_rate.

    Bernoulli rates scale linearly (capped at 1), burst periods scale
    inversely, streams are unchanged.  Run seeds derive from the master
    seed via sweep_seed().
    """
    if not rates:
        raise SimConfigError("sweep needs at least one rate")
    rows = []
    for i, r in enumerate(rates):
        if not 0.0 <= r <= 1.0:
            raise SimConfigError(f"rate {r} outside [0, 1]")
        factor = r / nominal_rate if nominal_rate else 0.0
        traffic = []
        for p in cfg.traffic:
            if p.kind == "bernoulli":
                traffic.append(replace(p, rate=min(1.0, p.rate * factor)))
            elif p.kind == "burst" and factor > 0:
                traffic.append(replace(p, period=max(p.size,
                                                     round(p.period / factor))))
            elif p.kind == "burst":
                traffic.append(replace(p, stop_cycle=p.start_cycle))
            else:
                traffic.append(replace(p))
        rcfg = replace(cfg, traffic=traffic, seed=sweep_seed(cfg.seed, i))
        rep = run(rcfg)
        rows.append({"rate": r,
                     "mean_latency": rep.mean_latency(),
                     "mean_waiting": rep.mean_waiting(),
                     "throughput": rep.aggregate_throughput()})
    return rows
