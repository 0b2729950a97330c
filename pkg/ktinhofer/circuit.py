"""Monotone Boolean circuits: text format, evaluation.

Format, one statement per line (``#`` starts a comment)::

    gate <id> CONST0 | CONST1
    gate <id> AND <id> <id>
    gate <id> OR <id> <id>
    output <id>

Ids are positive, strictly increasing, and gates may only reference
earlier ids.
"""

from __future__ import annotations

from dataclasses import dataclass

from ktinhofer.errors import GraphFormatError, InvalidArgumentError

CONST0 = "CONST0"
CONST1 = "CONST1"
AND = "AND"
OR = "OR"

CONSTANTS = (CONST0, CONST1)
OPERATORS = (AND, OR)


@dataclass(frozen=True)
class Gate:
    kind: str
    a: int | None = None
    b: int | None = None

    @property
    def is_constant(self) -> bool:
        return self.kind in CONSTANTS


@dataclass(frozen=True)
class Circuit:
    """Gates in topological order; inputs are 0-based gate indices."""

    gates: tuple[Gate, ...]
    output: int

    def __post_init__(self):
        for i, gate in enumerate(self.gates):
            if gate.kind in OPERATORS:
                if gate.a is None or gate.b is None or not (0 <= gate.a < i and 0 <= gate.b < i):
                    raise InvalidArgumentError(f"gate {i} must reference two earlier gates")
            elif gate.kind not in CONSTANTS:
                raise InvalidArgumentError(f"gate {i} has non-monotone kind {gate.kind!r}")
        if not 0 <= self.output < len(self.gates):
            raise InvalidArgumentError(f"output {self.output} is not a gate")

    def count(self, *kinds: str) -> int:
        return sum(1 for gate in self.gates if gate.kind in kinds)


def parse_circuit(text: bytes | str) -> Circuit:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    index: dict[int, int] = {}
    gates: list[Gate] = []
    output = None
    last_id = 0

    def ref(token: str, lineno: int) -> int:
        try:
            gid = int(token)
        except ValueError:
            raise GraphFormatError(f"gate reference is not an integer: {token!r}", lineno) from None
        if gid not in index:
            raise GraphFormatError(f"reference to unknown or later gate {gid}", lineno)
        return index[gid]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "output":
            if len(parts) != 2:
                raise GraphFormatError("expected 'output <id>'", lineno)
            if output is not None:
                raise GraphFormatError("duplicate output line", lineno)
            output = ref(parts[1], lineno)
            continue
        if parts[0] != "gate" or len(parts) < 3:
            raise GraphFormatError(f"unexpected line {line!r}", lineno)
        try:
            gid = int(parts[1])
        except ValueError:
            raise GraphFormatError(f"gate id is not an integer: {parts[1]!r}", lineno) from None
        if gid <= last_id:
            raise GraphFormatError(f"gate ids must be positive and strictly increasing, got {gid}", lineno)
        kind = parts[2].upper()
        if kind in CONSTANTS:
            if len(parts) != 3:
                raise GraphFormatError(f"{kind} takes no inputs", lineno)
            gate = Gate(kind)
        elif kind in OPERATORS:
            if len(parts) != 5:
                raise GraphFormatError(f"{kind} takes exactly two inputs", lineno)
            gate = Gate(kind, ref(parts[3], lineno), ref(parts[4], lineno))
        else:
            raise GraphFormatError(f"non-monotone or unknown gate {parts[2]!r}", lineno)
        index[gid] = len(gates)
        gates.append(gate)
        last_id = gid

    if output is None:
        raise GraphFormatError("missing 'output <id>' line")
    return Circuit(tuple(gates), output)


def serialize_circuit(c: Circuit) -> str:
    lines = []
    for i, gate in enumerate(c.gates, start=1):
        if gate.is_constant:
            lines.append(f"gate {i} {gate.kind}")
        else:
            lines.append(f"gate {i} {gate.kind} {gate.a + 1} {gate.b + 1}")
    lines.append(f"output {c.output + 1}")
    return "\n".join(lines) + "\n"


def gate_values(c: Circuit) -> list[int]:
    """Value of every gate, bottom-up."""
    values: list[int] = []
    for gate in c.gates:
        if gate.kind == CONST0:
            values.append(0)
        elif gate.kind == CONST1:
            values.append(1)
        elif gate.kind == AND:
            values.append(values[gate.a] & values[gate.b])
        else:
            values.append(values[gate.a] | values[gate.b])
    return values


def eval_circuit(c: Circuit) -> int:
    return gate_values(c)[c.output]
