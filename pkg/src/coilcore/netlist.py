"""Line-oriented circuit-description dialect: parser, printer, validator.

Grammar (one statement per line, ``#`` and ``;`` start comments)::

    <element>   NAME nodeA nodeB VALUE
                NAME nodeA nodeB CALL(args)
    <directive> .tran STEP STOP           (or: .tran step STEP stop STOP)
                .print SIGNAL [SIGNAL...]

Element kind comes from the leading letter of NAME (V, R, L, C) or, when
the value is a model call, from the model name:

    V1 in 0 SIN(offset amp freq) | PULSE(v0 v1 delay width period count)
         | STEP(v0 v1 t) | <number (DC)>
    R1 a b 0.5
    L1 a b 2
    C1 a b 2.474u
    ML1 a b MLCORE(flux_scale=1e-3, sw=0.2u, m0=-0.964)
    ML2 a b MLSTAIR(l0=2, delta=0.2)

Numeric values accept the engineering suffixes k, m, u, n, p, meg
(case-insensitive).  Element names are unique case-insensitively.
Validation reduces a parsed document to a single series V-R-L*-C ring
with one ``.tran`` directive.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .device import CoilCoreParams
from .errors import DomainError, NetlistError
from .trace import CANONICAL_COLUMNS, format_float
from .waveforms import Waveform

_SUFFIXES = {"meg": 1e6, "k": 1e3, "m": 1e-3, "u": 1e-6, "n": 1e-9, "p": 1e-12}

_VALUE_RE = re.compile(
    r"^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(meg|k|m|u|n|p)?$",
    re.IGNORECASE,
)
_CALL_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*\((.*)\)$", re.DOTALL)
_TOKEN_RE = re.compile(r"\S+")

INDUCTIVE_KINDS = ("L", "MLSTAIR", "MLCORE")


def parse_value(text: str, line=None, column=None) -> float:
    """Number with optional engineering suffix -> float."""
    m = _VALUE_RE.match(text.strip())
    if not m:
        raise NetlistError(f"malformed numeric value {text!r}", "lexical",
                           line=line, column=column)
    scale = _SUFFIXES[m.group(2).lower()] if m.group(2) else 1.0
    return float(m.group(1)) * scale


def format_value(x: float) -> str:
    return format_float(x)


@dataclass
class Element:
    name: str
    kind: str  # V | R | L | C | MLSTAIR | MLCORE
    node_a: str
    node_b: str
    value: float | None = None
    params: dict = field(default_factory=dict)
    waveform: Waveform | None = None
    line: int = 0

    def signature(self):
        wf = None
        if self.waveform is not None:
            wf = (self.waveform.kind, self.waveform.params,
                  self.waveform.times, self.waveform.values)
        return (self.name.upper(), self.kind, self.node_a, self.node_b,
                self.value, tuple(sorted(self.params.items())), wf)


@dataclass
class Directive:
    name: str  # tran | print
    values: tuple = ()
    line: int = 0

    def signature(self):
        return (self.name, self.values)


@dataclass
class NetlistDocument:
    elements: list
    directives: list

    def signature(self):
        return (tuple(e.signature() for e in self.elements),
                tuple(d.signature() for d in self.directives))


@dataclass(frozen=True)
class LinearInductor:
    l: float


@dataclass(frozen=True)
class StaircaseInductor:
    l0: float
    delta: float


@dataclass(frozen=True)
class CoilCoreInductor:
    params: CoilCoreParams


@dataclass(frozen=True)
class CompiledCircuit:
    """Validated single series loop plus its analysis directive."""

    source: Waveform
    r: float
    inductor: object  # LinearInductor | StaircaseInductor | CoilCoreInductor
    c: float
    tran_step: float
    tran_stop: float
    outputs: tuple = CANONICAL_COLUMNS


# ---------------------------------------------------------------- parsing

def _split_call_args(inner: str):
    return [t for t in inner.replace(",", " ").split() if t]


def _parse_waveform_call(fn: str, inner: str, line: int, column: int) -> Waveform:
    args = _split_call_args(inner)
    vals = [parse_value(a, line=line, column=column) for a in args]
    fn = fn.upper()
    try:
        if fn == "SIN":
            if len(vals) != 3:
                raise NetlistError(f"SIN takes 3 arguments, got {len(vals)}",
                                   "bad-params", line=line, column=column)
            return Waveform.sine(*vals)
        if fn == "PULSE":
            if len(vals) != 6:
                raise NetlistError(f"PULSE takes 6 arguments, got {len(vals)}",
                                   "bad-params", line=line, column=column)
            count = vals[5]
            if count != int(count) or count < 1:
                raise NetlistError(f"PULSE count must be a positive integer, got {count}",
                                   "bad-params", line=line, column=column)
            return Waveform.pulse(vals[0], vals[1], vals[2], vals[3], vals[4],
                                  int(count))
        if fn == "STEP":
            if len(vals) != 3:
                raise NetlistError(f"STEP takes 3 arguments, got {len(vals)}",
                                   "bad-params", line=line, column=column)
            return Waveform.step(*vals)
    except DomainError as exc:
        raise NetlistError(str(exc), "bad-params", line=line, column=column) from exc
    raise NetlistError(f"unknown source function {fn!r}", "bad-params",
                       line=line, column=column)


def _parse_model_params(inner: str, required, line: int, column: int) -> dict:
    out = {}
    for tok in _split_call_args(inner):
        if "=" not in tok:
            raise NetlistError(f"expected key=value, got {tok!r}", "bad-params",
                               line=line, column=column)
        key, _, val = tok.partition("=")
        key = key.strip().lower()
        if key not in required:
            raise NetlistError(f"unknown model parameter {key!r}", "bad-params",
                               line=line, column=column)
        if key in out:
            raise NetlistError(f"repeated model parameter {key!r}", "bad-params",
                               line=line, column=column)
        out[key] = parse_value(val, line=line, column=column)
    missing = [k for k in required if k not in out]
    if missing:
        raise NetlistError(f"missing model parameter(s) {missing}", "bad-params",
                           line=line, column=column)
    return out


def parse_netlist(text: str) -> NetlistDocument:
    """Parse netlist source into a :class:`NetlistDocument`.

    Raises :class:`NetlistError` with codes ``lexical``, ``unknown-kind``,
    ``bad-params`` or ``duplicate-name``, each carrying line (1-based) and
    column.
    """
    elements = []
    directives = []
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = re.split(r"[#;]", raw, maxsplit=1)[0].rstrip()
        if not stripped.strip():
            continue
        tokens = [(m.group(0), m.start() + 1) for m in _TOKEN_RE.finditer(stripped)]
        first, first_col = tokens[0]
        if first.startswith("."):
            directives.append(_parse_directive(tokens, stripped, lineno))
            continue
        if len(tokens) < 4:
            raise NetlistError(
                f"element line needs NAME nodeA nodeB VALUE, got {len(tokens)} token(s)",
                "lexical", line=lineno, column=len(stripped) + 1)
        name = first
        if not name[0].isalpha():
            raise NetlistError(f"element name must start with a letter, got {name!r}",
                               "lexical", line=lineno, column=first_col)
        node_a, node_b = tokens[1][0], tokens[2][0]
        value_col = tokens[3][1]
        value_text = stripped[value_col - 1:].strip()

        call = _CALL_RE.match(value_text)
        kind_letter = name[0].upper()
        if call:
            fn = call.group(1).upper()
            if fn in ("MLCORE", "MLSTAIR"):
                elem = _parse_model_element(name, fn, call.group(2), node_a,
                                            node_b, lineno, value_col)
            elif fn in ("SIN", "PULSE", "STEP"):
                if kind_letter != "V":
                    raise NetlistError(
                        f"source function {fn} is only valid on V elements",
                        "bad-params", line=lineno, column=value_col)
                wf = _parse_waveform_call(fn, call.group(2), lineno, value_col)
                elem = Element(name, "V", node_a, node_b, waveform=wf, line=lineno)
            else:
                raise NetlistError(f"unknown model or source function {fn!r}",
                                   "unknown-kind", line=lineno, column=value_col)
        else:
            if len(tokens) != 4:
                raise NetlistError(f"unexpected trailing tokens after value",
                                   "lexical", line=lineno, column=tokens[4][1])
            if kind_letter not in ("V", "R", "L", "C"):
                raise NetlistError(
                    f"unknown element kind for name {name!r} "
                    f"(expected leading V, R, L, C or a model call)",
                    "unknown-kind", line=lineno, column=first_col)
            value = parse_value(value_text, line=lineno, column=value_col)
            if kind_letter == "V":
                elem = Element(name, "V", node_a, node_b, value=value,
                               waveform=Waveform.constant(value), line=lineno)
            else:
                elem = Element(name, kind_letter, node_a, node_b, value=value,
                               line=lineno)

        key = name.upper()
        if key in seen:
            raise NetlistError(
                f"duplicate element name {name!r} (first defined on line {seen[key]})",
                "duplicate-name", line=lineno, column=first_col)
        seen[key] = lineno
        elements.append(elem)
    return NetlistDocument(elements, directives)


def _parse_model_element(name, model, inner, node_a, node_b, lineno, col):
    if model == "MLCORE":
        p = _parse_model_params(inner, ("flux_scale", "sw", "m0"), lineno, col)
        try:
            CoilCoreParams(p["flux_scale"], p["sw"], p["m0"])
        except DomainError as exc:
            raise NetlistError(str(exc), "bad-params", line=lineno, column=col) from exc
        return Element(name, "MLCORE", node_a, node_b, params=p, line=lineno)
    p = _parse_model_params(inner, ("l0", "delta"), lineno, col)
    if p["l0"] <= 0:
        raise NetlistError(f"l0 must be > 0, got {p['l0']}", "bad-params",
                           line=lineno, column=col)
    if not 0.0 <= p["delta"] < 1.0:
        raise NetlistError(f"delta must be in [0, 1), got {p['delta']}",
                           "bad-params", line=lineno, column=col)
    return Element(name, "MLSTAIR", node_a, node_b, params=p, line=lineno)


def _parse_directive(tokens, stripped, lineno):
    name = tokens[0][0].lower()
    rest = tokens[1:]
    if name == ".tran":
        vals = [t for t, _ in rest]
        lowered = [v.lower() for v in vals]
        if "step" in lowered or "stop" in lowered:
            kv = {}
            i = 0
            while i < len(vals):
                key = lowered[i]
                if key not in ("step", "stop") or i + 1 >= len(vals):
                    raise NetlistError(".tran keyword form is 'step X stop Y'",
                                       "bad-params", line=lineno,
                                       column=rest[i][1])
                kv[key] = parse_value(vals[i + 1], line=lineno,
                                      column=rest[i + 1][1])
                i += 2
            if set(kv) != {"step", "stop"}:
                raise NetlistError(".tran needs both step and stop", "bad-params",
                                   line=lineno, column=tokens[0][1])
            return Directive("tran", (kv["step"], kv["stop"]), line=lineno)
        if len(vals) != 2:
            raise NetlistError(".tran takes two values: step stop", "bad-params",
                               line=lineno, column=tokens[0][1])
        step = parse_value(vals[0], line=lineno, column=rest[0][1])
        stop = parse_value(vals[1], line=lineno, column=rest[1][1])
        return Directive("tran", (step, stop), line=lineno)
    if name == ".print":
        if not rest:
            raise NetlistError(".print needs at least one signal name",
                               "bad-params", line=lineno, column=tokens[0][1])
        sigs = []
        for tok, col in rest:
            sig = tok.lower()
            if sig not in CANONICAL_COLUMNS:
                raise NetlistError(
                    f"unknown signal {tok!r}; known: {', '.join(CANONICAL_COLUMNS)}",
                    "bad-params", line=lineno, column=col)
            sigs.append(sig)
        return Directive("print", tuple(sigs), line=lineno)
    raise NetlistError(f"unknown directive {tokens[0][0]!r}", "unknown-directive",
                       line=lineno, column=tokens[0][1])


# ------------------------------------------------------------- printing

def _format_waveform(wf: Waveform) -> str:
    if wf.kind == "const":
        return format_value(wf.params[0])
    if wf.kind == "sine":
        return "SIN(" + " ".join(format_value(v) for v in wf.params) + ")"
    if wf.kind == "step":
        return "STEP(" + " ".join(format_value(v) for v in wf.params) + ")"
    if wf.kind == "pulse":
        head = " ".join(format_value(v) for v in wf.params[:5])
        return f"PULSE({head} {int(wf.params[5])})"
    raise ValueError(f"waveform kind {wf.kind!r} has no netlist form")


def format_netlist(doc: NetlistDocument) -> str:
    """Pretty-print a document; re-parsing yields the same signature."""
    lines = []
    for e in doc.elements:
        if e.kind == "V":
            value = _format_waveform(e.waveform)
        elif e.kind == "MLCORE":
            value = ("MLCORE(flux_scale={flux_scale}, sw={sw}, m0={m0})"
                     .format(**{k: format_value(v) for k, v in e.params.items()}))
        elif e.kind == "MLSTAIR":
            value = ("MLSTAIR(l0={l0}, delta={delta})"
                     .format(**{k: format_value(v) for k, v in e.params.items()}))
        else:
            value = format_value(e.value)
        lines.append(f"{e.name} {e.node_a} {e.node_b} {value}")
    for d in doc.directives:
        if d.name == "tran":
            lines.append(f".tran {format_value(d.values[0])} {format_value(d.values[1])}")
        else:
            lines.append(".print " + " ".join(d.values))
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ validation

def validate_circuit(doc: NetlistDocument) -> CompiledCircuit:
    """Check the single-series-loop contract and normalize.

    The loop must be one V, one R, one inductive element (L, MLSTAIR or
    MLCORE) and one C forming a ring that contains the ground node ``0``,
    plus exactly one ``.tran`` directive.
    """
    by_kind = {"V": [], "R": [], "C": [], "IND": []}
    for e in doc.elements:
        if e.kind in INDUCTIVE_KINDS:
            by_kind["IND"].append(e)
        elif e.kind in by_kind:
            by_kind[e.kind].append(e)

    if len(by_kind["IND"]) > 1:
        extra = by_kind["IND"][1]
        raise NetlistError(
            f"more than one inductive element ({', '.join(e.name for e in by_kind['IND'])})",
            "multi-inductive", line=extra.line)
    for kind, label in (("V", "source"), ("R", "resistor"), ("C", "capacitor")):
        if len(by_kind[kind]) != 1:
            line = by_kind[kind][1].line if len(by_kind[kind]) > 1 else None
            raise NetlistError(
                f"series loop needs exactly one {label} ({kind}), found {len(by_kind[kind])}",
                "topology", line=line)
    if len(by_kind["IND"]) != 1:
        raise NetlistError("series loop needs exactly one inductive element "
                           "(L, MLSTAIR or MLCORE), found 0", "topology")

    _check_ring(doc.elements)

    vsrc = by_kind["V"][0]
    res = by_kind["R"][0]
    cap = by_kind["C"][0]
    ind = by_kind["IND"][0]

    if res.value < 0:
        raise NetlistError(f"resistance must be >= 0, got {res.value}",
                           "bad-params", line=res.line)
    if cap.value <= 0:
        raise NetlistError(f"capacitance must be > 0, got {cap.value}",
                           "bad-capacitance", line=cap.line)

    if ind.kind == "L":
        if ind.value <= 0:
            raise NetlistError(f"inductance must be > 0, got {ind.value}",
                               "bad-params", line=ind.line)
        inductor = LinearInductor(ind.value)
    elif ind.kind == "MLSTAIR":
        inductor = StaircaseInductor(ind.params["l0"], ind.params["delta"])
    else:
        inductor = CoilCoreInductor(CoilCoreParams(
            ind.params["flux_scale"], ind.params["sw"], ind.params["m0"]))

    trans = [d for d in doc.directives if d.name == "tran"]
    if not trans:
        raise NetlistError("missing .tran directive", "missing-tran")
    if len(trans) > 1:
        raise NetlistError("more than one .tran directive", "multiple-tran",
                           line=trans[1].line)
    step, stop = trans[0].values
    if not (step > 0 and step < stop):
        raise NetlistError(f".tran needs 0 < step < stop, got step={step} stop={stop}",
                           "bad-tran", line=trans[0].line)

    prints = [d for d in doc.directives if d.name == "print"]
    if prints:
        wanted = {s for d in prints for s in d.values} | {"time"}
        outputs = tuple(s for s in CANONICAL_COLUMNS if s in wanted)
    else:
        outputs = CANONICAL_COLUMNS

    return CompiledCircuit(source=vsrc.waveform, r=res.value, inductor=inductor,
                           c=cap.value, tran_step=step, tran_stop=stop,
                           outputs=outputs)


def _check_ring(elements):
    degree = {}
    for e in elements:
        if e.node_a == e.node_b:
            raise NetlistError(f"element {e.name} shorts its own terminals",
                               "topology", line=e.line)
        for n in (e.node_a, e.node_b):
            degree[n] = degree.get(n, 0) + 1
    if "0" not in degree:
        raise NetlistError("ground node '0' not present", "topology")
    bad = {n: d for n, d in degree.items() if d != 2}
    if bad:
        raise NetlistError(
            f"not a single series loop: node degree(s) {bad} (each node "
            f"must join exactly two elements)", "topology")
    # connectivity: walk the ring from the first element
    adj = {}
    for idx, e in enumerate(elements):
        adj.setdefault(e.node_a, []).append(idx)
        adj.setdefault(e.node_b, []).append(idx)
    seen = set()
    stack = [elements[0].node_a]
    nodes_seen = set()
    while stack:
        node = stack.pop()
        if node in nodes_seen:
            continue
        nodes_seen.add(node)
        for idx in adj[node]:
            if idx not in seen:
                seen.add(idx)
                e = elements[idx]
                stack.append(e.node_b if e.node_a == node else e.node_a)
    if len(seen) != len(elements):
        raise NetlistError("elements do not form one connected loop", "topology")
