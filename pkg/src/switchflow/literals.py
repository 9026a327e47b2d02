"""Text literals for sequences and signals.

Sequence form: ``left=(A B) core=[B A] right=(A) shift=0``; a signal adds
``tau=<real>`` and ``h=<real>``.  Vertices may be labels or indices.
"""
from __future__ import annotations

import re

from .graph import DirectedGraph, ValidationError
from .sequences import SymbolicSequence
from .signals import SwitchingSignal

_TOKEN = re.compile(r"(\w+)\s*=\s*(\(([^)]*)\)|\[([^\]]*)\]|[^\s()\[\]]+)")


class LiteralError(ValidationError):
    def __init__(self, message: str, position: int):
        super().__init__(f"at position {position}: {message}")
        self.position = position


def _parse_fields(text: str) -> dict[str, tuple[str, int]]:
    out: dict[str, tuple[str, int]] = {}
    pos = 0
    for match in _TOKEN.finditer(text):
        between = text[pos:match.start()].strip()
        if between:
            raise LiteralError(f"unexpected text {between!r}", pos)
        key = match.group(1)
        if key in out:
            raise LiteralError(f"duplicate key {key!r}", match.start())
        inner = match.group(3) if match.group(3) is not None else match.group(4)
        out[key] = (inner if inner is not None else match.group(2), match.start())
        pos = match.end()
    tail = text[pos:].strip()
    if tail:
        raise LiteralError(f"unexpected trailing text {tail!r}", pos)
    return out


def _word(g: DirectedGraph, text: str, position: int) -> tuple[int, ...]:
    toks = text.split()
    try:
        return tuple(g.index_of(t) for t in toks)
    except ValidationError as exc:
        raise LiteralError(str(exc), position) from exc


def parse_sequence(g: DirectedGraph, text: str) -> SymbolicSequence:
    fields = _parse_fields(text)
    for key in ("left", "right"):
        if key not in fields:
            raise LiteralError(f"missing {key}=(...)", len(text))
    left = _word(g, *fields["left"])
    core = _word(g, *fields.get("core", ("", 0)))
    right = _word(g, *fields["right"])
    shift_txt, shift_pos = fields.get("shift", ("0", 0))
    try:
        shift = int(shift_txt)
    except ValueError:
        raise LiteralError(f"shift must be an integer, got {shift_txt!r}", shift_pos)
    return SymbolicSequence(g, left, core, right, shift)


def parse_signal(g: DirectedGraph, text: str, default_h: float | None = None) -> SwitchingSignal:
    fields = _parse_fields(text)
    seq_text = " ".join(f"{k}={'(' + v + ')' if k in ('left', 'right') else '[' + v + ']' if k == 'core' else v}"
                        for k, (v, _) in fields.items() if k in ("left", "core", "right", "shift"))
    base = parse_sequence(g, seq_text)
    tau_txt, tau_pos = fields.get("tau", ("0.0", 0))
    try:
        tau = float(tau_txt)
    except ValueError:
        raise LiteralError(f"tau must be a real, got {tau_txt!r}", tau_pos)
    if "h" in fields:
        h_txt, h_pos = fields["h"]
        try:
            h = float(h_txt)
        except ValueError:
            raise LiteralError(f"h must be a real, got {h_txt!r}", h_pos)
    elif default_h is not None:
        h = default_h
    else:
        raise LiteralError("missing h=<real>", len(text))
    return SwitchingSignal(base, tau, h)


def format_sequence(x: SymbolicSequence) -> str:
    g = x.graph
    def word(w):
        return " ".join(g.label_of(s) for s in w)
    return (f"left=({word(x.left_period)}) core=[{word(x.core)}] "
            f"right=({word(x.right_period)}) shift={x.index_shift}")


def format_signal(f: SwitchingSignal) -> str:
    return f"{format_sequence(f.base)} tau={f.offset!r} h={f.step!r}"
