"""Plain-text formats read and written by the command line tool.

Field header
    ``GF(p)`` or ``GF(p^m; c0,c1,...,cm)`` (modulus low to high).  ``GF(p^m)``
    and ``GF(q)`` for a prime power q pick the default modulus.
Matrix text
    Rows separated by ``;`` (or newlines), entries by ``,``.  Entries are
    element codes: the integer whose base-p digits are the coefficients.
    Upper triangular input may omit trailing zeros of a row and trailing
    zero rows; output is always written in full.
Code file
    ``flagcode v1``, field header, ``n=<int>``, ``dim=<int>``, then one basis
    matrix per line (or per blank-line separated block of row lines).
Matrix file
    ``n=<int>``, field header, then the rows.
Packets / flag files
    ``packets v1`` or ``flag v1``, field header, ``n=<int>``, then lines
    ``<seq>: <vector>`` resp. ``<i>: <basis rows separated by ;>``.
Topology file
    ``node <name> <source|relay|sink>`` and
    ``edge <from> <to> [<erasure_p> [<corruption_p>]]``; probabilities are
    exact decimals or fractions.

Lines starting with ``#`` are comments everywhere.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

from .codes import FlagRankCode
from .errors import DomainError, ParseError
from .flags import UpperTriangular
from .gf import FieldSpec
from .linalg import Subspace, span
from .netsim import Edge, Packet, SimReport, Topology

_FIELD_RE = re.compile(r"^GF\(\s*(\d+)\s*(?:\^\s*(\d+)\s*)?(?:;\s*([\d,\s]+))?\)$")


def _lines(text: str) -> list[tuple[int, str]]:
    """(line number, stripped text) pairs, comments removed, blanks kept as ''."""
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        out.append((no, line))
    return out


def _nonblank(lines: Iterable[tuple[int, str]]) -> list[tuple[int, str]]:
    return [(no, s) for no, s in lines if s]


def parse_field(text: str, line: int | None = None) -> FieldSpec:
    m = _FIELD_RE.match(text.strip())
    if not m:
        raise ParseError(f"expected a field header like GF(3) or GF(2^2; 1,1,1), got {text.strip()!r}", line)
    base, exp, modulus = m.groups()
    try:
        if exp is None:
            if modulus is not None:
                raise ParseError("a modulus needs the GF(p^m; ...) form", line)
            return FieldSpec.from_order(int(base))
        coeffs = tuple(int(c) for c in modulus.split(",")) if modulus else None
        return FieldSpec(int(base), int(exp), coeffs)
    except DomainError as exc:
        raise ParseError(str(exc), line) from None


def format_field(spec: FieldSpec) -> str:
    return str(spec)


def _parse_int_list(text: str, line: int | None) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise ParseError(f"expected comma separated integers, got {text!r}", line) from None


def parse_matrix_rows(text: str, line: int | None = None) -> list[list[int]]:
    return [_parse_int_list(r, line) for r in text.strip().rstrip(";").split(";")]


def upper_triangular_from_rows(rows: Sequence[Sequence[int]], spec: FieldSpec, n: int, line: int | None = None) -> UpperTriangular:
    if len(rows) > n:
        raise ParseError(f"{len(rows)} rows given for a {n}x{n} matrix", line)
    full = []
    for r, row in enumerate(rows):
        if len(row) > n:
            raise ParseError(f"row {r + 1} has {len(row)} entries, more than {n}", line)
        if any(not 0 <= x < spec.q for x in row):
            raise ParseError(f"row {r + 1} has entries outside [0, {spec.q})", line)
        full.append(list(row) + [0] * (n - len(row)))
    full += [[0] * n for _ in range(n - len(full))]
    try:
        return UpperTriangular.from_rows(spec, full)
    except DomainError as exc:
        raise ParseError(str(exc), line) from None


def parse_upper_triangular(text: str, spec: FieldSpec, n: int, line: int | None = None) -> UpperTriangular:
    return upper_triangular_from_rows(parse_matrix_rows(text, line), spec, n, line)


def format_matrix(A: UpperTriangular) -> str:
    return str(A)


def _parse_key(text: str, key: str, line: int) -> int:
    m = re.fullmatch(rf"{key}\s*=\s*(\d+)", text)
    if not m:
        raise ParseError(f"expected '{key}=<int>', got {text!r}", line)
    return int(m.group(1))


def _expect_header(lines: list[tuple[int, str]], header: str) -> list[tuple[int, str]]:
    body = _nonblank(lines)
    if not body or body[0][1] != header:
        no = body[0][0] if body else 1
        raise ParseError(f"missing header line {header!r}", no)
    return body[1:]


# --- code files -------------------------------------------------------------------------


def format_code(C: FlagRankCode) -> str:
    out = ["flagcode v1", format_field(C.spec), f"n={C.n}", f"dim={C.dim}"]
    out += [format_matrix(B) for B in C.basis]
    return "\n".join(out) + "\n"


def parse_code(text: str) -> FlagRankCode:
    lines = _lines(text)
    body = _expect_header(lines, "flagcode v1")
    if len(body) < 3:
        raise ParseError("code file ends before field, n and dim lines", lines[-1][0] if lines else 1)
    spec = parse_field(body[0][1], body[0][0])
    n = _parse_key(body[1][1], "n", body[1][0])
    dim = _parse_key(body[2][1], "dim", body[2][0])
    if n < 1:
        raise ParseError("n must be >= 1", body[1][0])
    start = body[2][0]  # line number of dim=
    blocks: list[list[tuple[int, str]]] = [[]]
    for no, s in lines:
        if no <= start:
            continue
        if s:
            blocks[-1].append((no, s))
        elif blocks[-1]:
            blocks.append([])
    matrices = []
    for block in blocks:
        if not block:
            continue
        if any(";" in s for _, s in block) or len(block) == 1:
            for no, s in block:
                matrices.append(parse_upper_triangular(s, spec, n, no))
        else:
            rows = [_parse_int_list(s, no) for no, s in block]
            matrices.append(upper_triangular_from_rows(rows, spec, n, block[0][0]))
    if len(matrices) != dim:
        raise ParseError(f"dim={dim} but {len(matrices)} basis matrices given", start)
    try:
        return FlagRankCode(spec, n, tuple(matrices))
    except DomainError as exc:
        raise ParseError(str(exc), start) from None


def parse_matrix_file(text: str, spec: FieldSpec | None = None) -> UpperTriangular:
    """Matrix file: ``n=`` and field header lines (any order), then rows."""
    body = _nonblank(_lines(text))
    n = field = None
    rows = []
    first_row_line = None
    for no, s in body:
        if s.startswith("n") and "=" in s and n is None and not rows:
            n = _parse_key(s, "n", no)
        elif s.startswith("GF") and field is None and not rows:
            field = parse_field(s, no)
        else:
            first_row_line = first_row_line or no
            rows.extend(parse_matrix_rows(s, no))
    if n is None:
        raise ParseError("matrix file lacks an 'n=' line", 1)
    field = field or spec
    if field is None:
        raise ParseError("matrix file lacks a field header", 1)
    if spec is not None and field != spec:
        raise ParseError(f"matrix is over {field}, expected {spec}", 1)
    return upper_triangular_from_rows(rows, field, n, first_row_line)


def format_matrix_file(A: UpperTriangular) -> str:
    return "\n".join([f"n={A.n}", format_field(A.spec)] + [",".join(map(str, r)) for r in A.to_rows()]) + "\n"


# --- packets and flags ----------------------------------------------------------------


def format_packets(spec: FieldSpec, n: int, packets: Iterable[Packet]) -> str:
    out = ["packets v1", format_field(spec), f"n={n}"]
    out += [f"{p.seq}: {','.join(map(str, p.payload))}" for p in packets]
    return "\n".join(out) + "\n"


def format_flag(spaces: Sequence[Subspace]) -> str:
    spec = spaces[0].spec
    out = ["flag v1", format_field(spec), f"n={len(spaces)}"]
    out += [f"{i}: {'; '.join(','.join(map(str, r)) for r in U.basis.entries)}" for i, U in enumerate(spaces, start=1)]
    return "\n".join(out) + "\n"


def _section_header(lines, idx):
    no, s = lines[idx]
    if len(lines) < idx + 3:
        raise ParseError(f"{s!r} section needs field and n lines", no)
    spec = parse_field(lines[idx + 1][1], lines[idx + 1][0])
    n = _parse_key(lines[idx + 2][1], "n", lines[idx + 2][0])
    return spec, n


def parse_received(text: str) -> dict[str, object]:
    """Read ``packets v1`` and/or ``flag v1`` sections.

    Returns a dict with keys ``spec``, ``n`` and ``packets`` and/or ``flag``.
    """
    lines = _nonblank(_lines(text))
    result: dict[str, object] = {}
    idx = 0
    if not lines:
        raise ParseError("empty input", 1)
    while idx < len(lines):
        no, s = lines[idx]
        if s not in ("packets v1", "flag v1"):
            raise ParseError(f"expected 'packets v1' or 'flag v1', got {s!r}", no)
        spec, n = _section_header(lines, idx)
        if result.setdefault("spec", spec) != spec or result.setdefault("n", n) != n:
            raise ParseError("sections disagree on field or n", no)
        idx += 3
        entries = []
        while idx < len(lines) and lines[idx][1] not in ("packets v1", "flag v1"):
            eno, es = lines[idx]
            m = re.fullmatch(r"(\d+)\s*:\s*(.*)", es)
            if not m:
                raise ParseError(f"expected '<index>: <data>', got {es!r}", eno)
            entries.append((eno, int(m.group(1)), m.group(2)))
            idx += 1
        if s == "packets v1":
            packets = []
            for eno, seq, data in entries:
                payload = _parse_int_list(data, eno)
                if not 1 <= seq <= n or len(payload) != n + 1 or any(not 0 <= x < spec.q for x in payload):
                    raise ParseError(f"packet must have seq in 1..{n} and {n + 1} entries in [0, {spec.q})", eno)
                packets.append(Packet(tuple(payload), seq))
            result["packets"] = packets
        else:
            spaces: list[Subspace | None] = [None] * n
            for eno, i, data in entries:
                if not 1 <= i <= n or spaces[i - 1] is not None:
                    raise ParseError(f"flag index {i} out of range or repeated", eno)
                rows = [r for r in parse_matrix_rows(data, eno) if r]
                if any(len(r) != n + 1 or any(not 0 <= x < spec.q for x in r) for r in rows):
                    raise ParseError(f"basis vectors must have {n + 1} entries in [0, {spec.q})", eno)
                spaces[i - 1] = span(spec, rows, n + 1)
            if any(U is None for U in spaces):
                raise ParseError(f"flag needs spaces 1..{n}", no)
            result["flag"] = spaces
    return result


# --- topology ---------------------------------------------------------------------------


def _probability(text: str, line: int) -> Fraction:
    try:
        p = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad probability {text!r}", line) from None
    if not 0 <= p <= 1:
        raise ParseError(f"probability {text} outside [0, 1]", line)
    return p


def parse_topology(text: str) -> Topology:
    roles: dict[str, str] = {}
    edges = []
    for no, s in _nonblank(_lines(text)):
        parts = s.split()
        if parts[0] == "topology" and parts[1:] == ["v1"]:
            continue
        if parts[0] == "node" and len(parts) == 3:
            if parts[1] in roles:
                raise ParseError(f"node {parts[1]!r} declared twice", no)
            roles[parts[1]] = parts[2]
        elif parts[0] == "edge" and 3 <= len(parts) <= 5:
            probs = [_probability(x, no) for x in parts[3:]] + [Fraction(0)] * (5 - len(parts))
            edges.append(Edge(parts[1], parts[2], probs[0], probs[1]))
        else:
            raise ParseError(f"expected 'node <name> <role>' or 'edge <from> <to> [p_erase [p_corrupt]]', got {s!r}", no)
    try:
        return Topology(roles, tuple(edges))
    except DomainError as exc:
        raise ParseError(str(exc)) from None


def _decimal(p: Fraction) -> str:
    """Exact decimal when the denominator allows it, else a fraction."""
    d = p.denominator
    twos = fives = 0
    while d % 2 == 0:
        d, twos = d // 2, twos + 1
    while d % 5 == 0:
        d, fives = d // 5, fives + 1
    if d != 1:
        return str(p)
    k = max(twos, fives)
    scaled = p * 10**k
    s = str(scaled.numerator).rjust(k + 1, "0")
    return s if k == 0 else f"{s[:-k]}.{s[-k:]}"


def format_topology(top: Topology) -> str:
    out = ["topology v1"]
    out += [f"node {v} {top.roles[v]}" for v in top.order()]
    out += [f"edge {e.src} {e.dst} {_decimal(e.erasure)} {_decimal(e.corruption)}" for e in top.edges]
    return "\n".join(out) + "\n"


# --- reports ---------------------------------------------------------------------------------


def format_report_text(report: SimReport) -> str:
    out = [
        "simulation report",
        f"seed: {report.seed}",
        f"trials: {report.trials}",
        f"successes: {report.successes}",
        f"failures: {report.failures}",
        f"  cell_failures: {report.cell_failures}",
        f"  miscorrections: {report.miscorrections}",
        f"error_weight: {'none' if report.error_weight is None else report.error_weight}",
        "op_counts (totals over all trials; expected is per trial with one vector per seq)",
        "node\tstep\tprojected\tbaseline\texpected\tbaseline_expected",
    ]
    n = len(report.op_count_expected)
    for node in report.op_counts:
        for i in range(1, n + 1):
            out.append(
                f"{node}\t{i}\t{report.op_counts[node][i - 1]}\t{report.op_counts_baseline[node][i - 1]}"
                f"\t{report.op_count_expected[i - 1]}\t{i * (n + 1)}"
            )
    return "\n".join(out) + "\n"


TABLE_COLUMNS = ("trial", "seed", "outcome", "received", "distance", "ops_projected", "ops_baseline", "sent", "recovered")


def format_report_table(report: SimReport) -> str:
    """Tab separated, one row per trial; per-sink fields joined with '|'."""
    out = ["\t".join(TABLE_COLUMNS)]
    for o in report.outcomes:
        ops_p = sum(sum(c.projected) for c in o.op_counts.values())
        ops_b = sum(sum(c.baseline) for c in o.op_counts.values())
        out.append(
            "\t".join(
                [
                    str(o.index),
                    str(o.seed),
                    o.outcome,
                    "|".join(str(s.received) for s in o.sinks),
                    "|".join("-" if s.distance is None else str(s.distance) for s in o.sinks),
                    str(ops_p),
                    str(ops_b),
                    format_matrix(o.sent),
                    "|".join("-" if s.recovered is None else format_matrix(s.recovered) for s in o.sinks),
                ]
            )
        )
    return "\n".join(out) + "\n"


__all__ = [
    "format_code",
    "format_field",
    "format_flag",
    "format_matrix",
    "format_matrix_file",
    "format_packets",
    "format_report_table",
    "format_report_text",
    "format_topology",
    "parse_code",
    "parse_field",
    "parse_matrix_file",
    "parse_matrix_rows",
    "parse_received",
    "parse_topology",
    "parse_upper_triangular",
]
