"""Seeded simulation of degenerate-flag network coding over a DAG.

The source sends row i of ``(I_i | Δ_[i])`` with sequence number i.  A relay
forwards, for every i, a random combination of what it holds with sequence
numbers j <= i, each term first projected by ``pr_{j,i}``.  The sink spans
the projected packets, checks the result lies in the big cell, extracts a
matrix and syndrome-decodes it.

All randomness is drawn from ``random.Random`` instances seeded from the
campaign seed and the trial index, so reports are reproducible bit for bit.
"""

from __future__ import annotations

import graphlib
import hashlib
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .codes import FlagRankCode, SyndromeTable, build_syndrome_table, decode, matrices_up_to_weight
from .errors import CellError, DomainError
from .flags import UpperTriangular, corner_indices, flag_rank, matrix_from_flag, project, projection_chain_holds
from .gf import FieldSpec
from .linalg import Subspace, span

ROLES = ("source", "relay", "sink")
SUCCESS, CELL_FAILURE, MISCORRECTION = "success", "cell-failure", "miscorrection"


@dataclass(frozen=True)
class Packet:
    payload: tuple[int, ...]
    seq: int

    def __post_init__(self):
        object.__setattr__(self, "payload", tuple(self.payload))
        if self.seq < 1 or len(self.payload) < self.seq + 1:
            raise DomainError(f"sequence number {self.seq} invalid for payload of length {len(self.payload)}")


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    erasure: Fraction = Fraction(0)
    corruption: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("erasure", "corruption"):
            p = Fraction(getattr(self, name))
            if not 0 <= p <= 1:
                raise DomainError(f"{name} probability {p} on {self.src}->{self.dst} outside [0, 1]")
            object.__setattr__(self, name, p)


@dataclass(frozen=True)
class Topology:
    """Nodes with roles and directed links; must be acyclic with one source."""

    roles: dict[str, str]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        for node, role in self.roles.items():
            if role not in ROLES:
                raise DomainError(f"node {node!r} has unknown role {role!r}")
        sources = [v for v, r in self.roles.items() if r == "source"]
        if len(sources) != 1:
            raise DomainError(f"exactly one source required, found {len(sources)}")
        if not any(r == "sink" for r in self.roles.values()):
            raise DomainError("at least one sink required")
        seen = set()
        for e in self.edges:
            if e.src not in self.roles or e.dst not in self.roles:
                raise DomainError(f"edge {e.src}->{e.dst} references an unknown node")
            if (e.src, e.dst) in seen:
                raise DomainError(f"duplicate edge {e.src}->{e.dst}")
            seen.add((e.src, e.dst))
            if self.roles[e.dst] == "source":
                raise DomainError(f"edge {e.src}->{e.dst} enters the source")
            if self.roles[e.src] == "sink":
                raise DomainError(f"edge {e.src}->{e.dst} leaves a sink")
        try:
            self.order()
        except graphlib.CycleError as exc:
            raise DomainError(f"topology has a cycle: {exc.args[1]}") from None

    @property
    def source(self) -> str:
        return next(v for v, r in self.roles.items() if r == "source")

    @property
    def sinks(self) -> list[str]:
        return sorted(v for v, r in self.roles.items() if r == "sink")

    def outgoing(self, node: str) -> list[Edge]:
        return sorted((e for e in self.edges if e.src == node), key=lambda e: e.dst)

    def order(self) -> list[str]:
        """Topological order, ties broken by node name."""
        ts = graphlib.TopologicalSorter({v: set() for v in self.roles})
        for e in self.edges:
            ts.add(e.dst, e.src)
        ts.prepare()
        out = []
        while ts.is_active():
            ready = sorted(ts.get_ready())
            out.extend(ready)
            ts.done(*ready)
        return out


def line_topology(relays: int, erasure: Fraction | int = 0, corruption: Fraction | int = 0) -> Topology:
    """``s -> r1 -> ... -> r<relays> -> t`` with identical links."""
    names = ["s"] + [f"r{k}" for k in range(1, relays + 1)] + ["t"]
    roles = {v: "relay" for v in names}
    roles["s"], roles["t"] = "source", "sink"
    edges = tuple(Edge(a, b, Fraction(erasure), Fraction(corruption)) for a, b in zip(names, names[1:]))
    return Topology(roles, edges)


# --- the three protocol roles -----------------------------------------------------------


def source_emit(delta: UpperTriangular) -> list[Packet]:
    """Packet i carries row i of ``(I_i | Δ_[i])`` embedded in K^(n+1)."""
    n = delta.n
    e = delta.entries
    packets = []
    for i, block in enumerate(corner_indices(n), start=1):
        row = block[i - 1]
        payload = (0,) * (i - 1) + (1,) + tuple(e[k] for k in row)
        packets.append(Packet(payload, i))
    return packets


@dataclass
class OpCount:
    """Coordinate multiply-adds per step i (index i-1).

    ``projected`` skips coordinates zeroed by the projection, ``baseline``
    charges the full n+1 coordinates per term as unprojected coding would.
    """

    projected: list[int]
    baseline: list[int]

    @classmethod
    def zeros(cls, n: int) -> OpCount:
        return cls([0] * n, [0] * n)

    def __iadd__(self, other: OpCount) -> OpCount:
        self.projected = [a + b for a, b in zip(self.projected, other.projected)]
        self.baseline = [a + b for a, b in zip(self.baseline, other.baseline)]
        return self


def expected_op_counts(n: int) -> list[int]:
    """Per-step cost for a relay holding one vector per sequence number."""
    return [i * (n + 1) - (i * i + i) // 2 for i in range(1, n + 1)]


def baseline_op_counts(n: int) -> list[int]:
    return [i * (n + 1) for i in range(1, n + 1)]


def _group(packets: Iterable[Packet], n: int) -> list[list[tuple[int, ...]]]:
    by_seq: list[list[tuple[int, ...]]] = [[] for _ in range(n)]
    for pkt in packets:
        if not 1 <= pkt.seq <= n or len(pkt.payload) != n + 1:
            raise DomainError(f"packet with seq {pkt.seq} and length {len(pkt.payload)} does not fit n={n}")
        by_seq[pkt.seq - 1].append(pkt.payload)
    return by_seq


def node_combine(
    packets: Iterable[Packet],
    spec: FieldSpec,
    n: int,
    rng: random.Random | None = None,
    coefficients: Sequence[Sequence[int]] | None = None,
) -> tuple[list[Packet], OpCount]:
    """Emit ``Z_i = sum_{j<=i} a_ij pr_{j,i}(Y_j)`` for i = 1..n.

    ``coefficients[i-1][j-1]`` fixes ``a_ij`` when each sequence number
    arrived at most once.  Otherwise every received packet gets its own
    coefficient from ``rng``: nonzero for j == i, uniform for j < i.

    Each term is charged ``n+1-(i-j+1)`` projected multiply-adds and ``n+1``
    baseline ones, so one packet per sequence number costs
    ``i(n+1) - i(i+1)/2`` at step i.  Note that ``pr_{j,i}`` only zeroes the
    i-j coordinates j+1..i; the projected counter skips one more per term to
    follow that closed form, so it is a convention rather than a literal
    count of touched coordinates (which would be ``n+1-(i-j)``).
    """
    by_seq = _group(packets, n)
    if coefficients is None and rng is None:
        raise DomainError("need either fixed coefficients or an rng")
    if coefficients is not None and any(len(group) > 1 for group in by_seq):
        raise DomainError("fixed coefficients need at most one packet per sequence number")
    t = spec.tables
    q = spec.q
    ops = OpCount.zeros(n)
    out = []
    for i in range(1, n + 1):
        z = [0] * (n + 1)
        for j in range(1, i + 1):
            for y in by_seq[j - 1]:
                if coefficients is not None:
                    a = coefficients[i - 1][j - 1]
                else:
                    a = rng.randrange(1, q) if j == i else rng.randrange(q)
                ops.projected[i - 1] += n + 1 - (i - j + 1)
                ops.baseline[i - 1] += n + 1
                if a:
                    ma = t.mul[a]
                    z = [t.add[acc][ma[c]] for acc, c in zip(z, project(y, j, i))]
        out.append(Packet(tuple(z), i))
    return out, ops


def receiver_reconstruct(packets: Iterable[Packet], spec: FieldSpec, n: int) -> list[Subspace]:
    """``W_i`` spanned by ``pr_{j,i}(R)`` over every received R with seq j <= i."""
    by_seq = _group(packets, n)
    spaces = []
    for i in range(1, n + 1):
        vectors = [project(y, j, i) for j in range(1, i + 1) for y in by_seq[j - 1]]
        spaces.append(span(spec, vectors, n + 1))
    return spaces


# --- trials and campaigns --------------------------------------------------------------


def trial_seed(seed: int, index: int) -> int:
    digest = hashlib.sha256(f"{seed}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _bernoulli(rng: random.Random, p: Fraction) -> bool:
    if p == 0:
        return False
    if p == 1:
        return True
    return rng.randrange(p.denominator) < p.numerator


def _transmit(packets: Sequence[Packet], edge: Edge, spec: FieldSpec, rng: random.Random) -> list[Packet]:
    delivered = []
    for pkt in packets:
        if _bernoulli(rng, edge.erasure):
            continue
        if _bernoulli(rng, edge.corruption):
            pkt = Packet(tuple(rng.randrange(spec.q) for _ in pkt.payload), pkt.seq)
        delivered.append(pkt)
    return delivered


@dataclass(frozen=True)
class SinkResult:
    sink: str
    outcome: str
    received: int
    extracted: UpperTriangular | None = None
    recovered: UpperTriangular | None = None
    distance: int | None = None


@dataclass(frozen=True)
class TrialOutcome:
    index: int
    seed: int
    sent: UpperTriangular
    outcome: str
    sinks: tuple[SinkResult, ...]
    op_counts: dict[str, OpCount] = field(default_factory=dict)
    deliveries: dict[tuple[str, str], tuple[Packet, ...]] = field(default_factory=dict)
    flags: dict[str, tuple[Subspace, ...]] = field(default_factory=dict)


def _sink_result(
    sink: str,
    packets: list[Packet],
    delta: UpperTriangular,
    table: SyndromeTable,
    error: UpperTriangular | None,
) -> tuple[SinkResult, tuple[Subspace, ...]]:
    spec, n = delta.spec, delta.n
    W = receiver_reconstruct(packets, spec, n)
    if not projection_chain_holds(W):
        raise AssertionError(f"receiver spaces at {sink} violate pr_(i+1)(W_i) ⊆ W_(i+1)")
    try:
        A = matrix_from_flag(W)
    except CellError:
        return SinkResult(sink, CELL_FAILURE, len(packets)), tuple(W)
    if error is not None:
        A = A + error
    C = decode(table, A)
    outcome = SUCCESS if C == delta else MISCORRECTION
    return SinkResult(sink, outcome, len(packets), A, C, flag_rank(A - C)), tuple(W)


def run_trial(
    topology: Topology,
    code: FlagRankCode,
    delta: UpperTriangular,
    seed: int,
    table: SyndromeTable | None = None,
    error: UpperTriangular | None = None,
    index: int = 0,
) -> TrialOutcome:
    """Send one codeword through the network and decode it at every sink.

    ``error``, when given, is added to the matrix extracted at each sink
    before decoding.  The trial succeeds only if every sink recovers
    ``delta``; otherwise it reports the first failing sink's outcome.
    """
    if delta.spec != code.spec or delta.n != code.n:
        raise DomainError("codeword does not match the code")
    if table is None:
        table = build_syndrome_table(code)
    spec, n = code.spec, code.n
    rng = random.Random(seed)
    inbox: dict[str, list[Packet]] = {v: [] for v in topology.roles}
    ops: dict[str, OpCount] = {}
    deliveries: dict[tuple[str, str], tuple[Packet, ...]] = {}
    for node in topology.order():
        role = topology.roles[node]
        if role == "sink":
            continue
        for edge in topology.outgoing(node):
            if role == "source":
                packets = source_emit(delta)
            else:
                packets, count = node_combine(inbox[node], spec, n, rng)
                ops.setdefault(node, OpCount.zeros(n))
                ops[node] += count
            got = _transmit(packets, edge, spec, rng)
            deliveries[(edge.src, edge.dst)] = tuple(got)
            inbox[edge.dst].extend(got)
    results = []
    flags = {}
    for sink in topology.sinks:
        res, W = _sink_result(sink, inbox[sink], delta, table, error)
        results.append(res)
        flags[sink] = W
    outcome = next((r.outcome for r in results if r.outcome != SUCCESS), SUCCESS)
    return TrialOutcome(index, seed, delta, outcome, tuple(results), ops, deliveries, flags)


@dataclass(frozen=True)
class SimReport:
    seed: int
    trials: int
    successes: int
    cell_failures: int
    miscorrections: int
    op_counts: dict[str, list[int]]
    op_counts_baseline: dict[str, list[int]]
    op_count_expected: list[int]
    outcomes: tuple[TrialOutcome, ...]
    error_weight: int | None = None

    @property
    def failures(self) -> int:
        return self.cell_failures + self.miscorrections


def _campaign_trial(args) -> TrialOutcome:
    topology, code, table, seed, index, error_weight = args
    rng = random.Random(trial_seed(seed, index))
    delta = code.codeword([rng.randrange(code.spec.q) for _ in range(code.dim)])
    error = None
    if error_weight is not None:
        error = rng.choice(matrices_up_to_weight(code.spec, code.n, error_weight))
    return run_trial(topology, code, delta, rng.getrandbits(64), table, error, index)


def run_campaign(
    topology: Topology,
    code: FlagRankCode,
    trials: int,
    seed: int,
    table: SyndromeTable | None = None,
    error_weight: int | None = None,
    workers: int = 1,
) -> SimReport:
    """Run ``trials`` independent trials on uniformly drawn codewords.

    Trial k uses its own generator seeded from ``(seed, k)``, so the report
    does not depend on ``workers``.  ``error_weight`` injects a uniformly
    drawn matrix of flag rank at most that weight into each extracted matrix.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    if table is None:
        table = build_syndrome_table(code)
    jobs = [(topology, code, table, seed, k, error_weight) for k in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_campaign_trial, jobs, chunksize=max(1, trials // (4 * workers))))
    else:
        outcomes = [_campaign_trial(job) for job in jobs]
    outcomes.sort(key=lambda o: o.index)

    n = code.n
    totals = {v: OpCount.zeros(n) for v in topology.order() if topology.roles[v] == "relay"}
    for o in outcomes:
        for node, count in o.op_counts.items():
            totals[node] += count
    tally = {kind: sum(o.outcome == kind for o in outcomes) for kind in (SUCCESS, CELL_FAILURE, MISCORRECTION)}
    return SimReport(
        seed=seed,
        trials=trials,
        successes=tally[SUCCESS],
        cell_failures=tally[CELL_FAILURE],
        miscorrections=tally[MISCORRECTION],
        op_counts={v: c.projected for v, c in totals.items()},
        op_counts_baseline={v: c.baseline for v, c in totals.items()},
        op_count_expected=expected_op_counts(n),
        outcomes=tuple(outcomes),
        error_weight=error_weight,
    )
