"""OPENQASM 2.0 reader/writer for the supported gate set.

This is a strict, small subset — unknown constructs are rejected with a
positioned error rather than skipped.  Grammar:

    program   : "OPENQASM" "2.0" ";" include decl* stmt*
    include   : "include" "\"qelib1.inc\"" ";"
    decl      : ("qreg" | "creg") ID "[" INT "]" ";"
    stmt      : gate | measure | barrier
    gate      : NAME ["(" expr ("," expr)* ")"] arg ("," arg)* ";"
    measure   : "measure" arg "->" arg ";"
    barrier   : "barrier" arg ("," arg)* ";"
    arg       : ID ["[" INT "]"]
    expr      : unary (("*" | "/") unary)*
    unary     : "-" unary | NUMBER | "pi"

Supported gate names: h, x, ry, cx, ccx, swap, u1, u2, u3.  Comments
(`// ...`) are stripped.  A bare register name broadcasts single-qubit
gates and barriers over the register, and `measure q -> c;` measures the
whole register pairwise; multi-qubit gates require indexed arguments.

`emit` writes canonical form: one statement per line, LF newlines, a
single flattened `q`/`c` register pair, and angles with 17 significant
digits so that parse(emit(c)) == c exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, CircuitError
from .gates import GateDef

GATE_NAMES = {
    "h": "H",
    "x": "X",
    "ry": "RY",
    "cx": "CNOT",
    "ccx": "CCX",
    "swap": "SWAP",
    "u1": "U1",
    "u2": "U2",
    "u3": "U3",
}
_EMIT_NAMES = {v: k for k, v in GATE_NAMES.items()}
_PARAM_COUNTS = {"ry": 1, "u1": 1, "u2": 2, "u3": 3}
_GATE_ARITIES = {"h": 1, "x": 1, "ry": 1, "u1": 1, "u2": 1, "u3": 1,
                 "cx": 2, "swap": 2, "ccx": 3}


class QasmError(ValueError):
    """Positioned rejection of a source program."""

    def __init__(self, line: int, column: int, message: str, expected: str | None = None):
        self.line = line
        self.column = column
        self.message = message
        self.expected = expected
        suffix = f" (expected {expected})" if expected else ""
        super().__init__(f"line {line}, column {column}: {message}{suffix}")


class QasmParseError(QasmError):
    """Token-level failure: the source does not fit the grammar."""


class QasmSemanticError(QasmError):
    """Well-formed syntax with invalid meaning (bad register, arity, ...)."""


@dataclass(frozen=True)
class Token:
    kind: str  # ID NUMBER STRING SYMBOL EOF
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*)
  | (?P<number>\d+\.\d*([eE][+-]?\d+)?|\.\d+([eE][+-]?\d+)?|\d+([eE][+-]?\d+)?)
  | (?P<id>[a-zA-Z_][a-zA-Z0-9_]*)
  | (?P<string>"[^"\n]*")
  | (?P<symbol>->|[\[\](),;*/-])
    """,
    re.VERBOSE,
)


def _tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise QasmParseError(line, pos - line_start + 1,
                                 f"unexpected character {source[pos]!r}")
        text = m.group(0)
        col = pos - line_start + 1
        kind = m.lastgroup
        if kind == "number":
            tokens.append(Token("NUMBER", text, line, col))
        elif kind == "id":
            tokens.append(Token("ID", text, line, col))
        elif kind == "string":
            tokens.append(Token("STRING", text, line, col))
        elif kind == "symbol":
            tokens.append(Token("SYMBOL", text, line, col))
        # whitespace/comments advance position (and line count) only
        for i, ch in enumerate(text):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    tokens.append(Token("EOF", "", line, len(source) - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.pos = 0
        self.qregs: dict[str, tuple[int, int]] = {}  # name -> (offset, size)
        self.cregs: dict[str, tuple[int, int]] = {}
        self.num_qubits = 0
        self.num_clbits = 0

    # -- token plumbing -------------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def expect(self, kind: str, text: str | None = None, what: str | None = None) -> Token:
        tok = self.peek()
        wanted = what or (text if text is not None else kind)
        if tok.kind != kind or (text is not None and tok.text != text):
            got = tok.text or "end of input"
            raise QasmParseError(tok.line, tok.column, f"unexpected {got!r}", wanted)
        return self.advance()

    # -- grammar --------------------------------------------------------------

    def parse(self) -> Circuit:
        self.expect("ID", "OPENQASM", what="'OPENQASM'")
        version = self.expect("NUMBER", what="version number")
        if version.text != "2.0":
            raise QasmSemanticError(version.line, version.column,
                                    f"unsupported version {version.text}", "2.0")
        self.expect("SYMBOL", ";")
        self._include()
        statements = []
        while self.peek().kind != "EOF":
            statements.append(self._statement())
        if self.num_qubits == 0:
            tok = self.peek()
            raise QasmSemanticError(tok.line, tok.column, "program declares no qubits")
        circuit = Circuit(self.num_qubits, self.num_clbits)
        for apply_stmt in statements:
            apply_stmt(circuit)
        return circuit

    def _include(self):
        tok = self.peek()
        if tok.kind == "ID" and tok.text == "include":
            self.advance()
            name = self.expect("STRING", what="include file name")
            if name.text != '"qelib1.inc"':
                raise QasmSemanticError(name.line, name.column,
                                        f"only qelib1.inc may be included, got {name.text}")
            self.expect("SYMBOL", ";")

    def _statement(self):
        tok = self.peek()
        if tok.kind != "ID":
            raise QasmParseError(tok.line, tok.column,
                                 f"unexpected {tok.text or 'end of input'!r}", "statement")
        if tok.text in ("qreg", "creg"):
            return self._declaration()
        if tok.text == "measure":
            return self._measure()
        if tok.text == "barrier":
            return self._barrier()
        return self._gate()

    def _declaration(self):
        kw = self.advance()
        name = self.expect("ID", what="register name")
        self.expect("SYMBOL", "[")
        size_tok = self.expect("NUMBER", what="register size")
        if not size_tok.text.isdigit() or int(size_tok.text) < 1:
            raise QasmSemanticError(size_tok.line, size_tok.column,
                                    f"register size must be a positive integer, got {size_tok.text}")
        size = int(size_tok.text)
        self.expect("SYMBOL", "]")
        self.expect("SYMBOL", ";")
        table = self.qregs if kw.text == "qreg" else self.cregs
        if name.text in self.qregs or name.text in self.cregs:
            raise QasmSemanticError(name.line, name.column,
                                    f"register {name.text!r} already declared")
        if kw.text == "qreg":
            table[name.text] = (self.num_qubits, size)
            self.num_qubits += size
        else:
            table[name.text] = (self.num_clbits, size)
            self.num_clbits += size
        return lambda circuit: None

    def _argument(self) -> tuple[Token, int | None]:
        name = self.expect("ID", what="register name")
        index = None
        if self.peek().kind == "SYMBOL" and self.peek().text == "[":
            self.advance()
            idx_tok = self.expect("NUMBER", what="index")
            if not idx_tok.text.isdigit():
                raise QasmSemanticError(idx_tok.line, idx_tok.column,
                                        f"index must be an integer, got {idx_tok.text}")
            index = int(idx_tok.text)
            self.expect("SYMBOL", "]")
        return name, index

    def _resolve(self, table, name: Token, index: int | None, what: str) -> list[int]:
        if name.text not in table:
            raise QasmSemanticError(name.line, name.column,
                                    f"undeclared {what} register {name.text!r}")
        offset, size = table[name.text]
        if index is None:
            return list(range(offset, offset + size))
        if index >= size:
            raise QasmSemanticError(name.line, name.column,
                                    f"index {index} out of range for {name.text}[{size}]")
        return [offset + index]

    def _gate(self):
        name = self.advance()
        if name.text not in GATE_NAMES:
            raise QasmSemanticError(name.line, name.column,
                                    f"unsupported gate {name.text!r}")
        params: list[float] = []
        want = _PARAM_COUNTS.get(name.text, 0)
        if self.peek().kind == "SYMBOL" and self.peek().text == "(":
            self.advance()
            params.append(self._expression())
            while self.peek().text == ",":
                self.advance()
                params.append(self._expression())
            self.expect("SYMBOL", ")")
        if len(params) != want:
            raise QasmSemanticError(name.line, name.column,
                                    f"{name.text} takes {want} parameter(s), got {len(params)}")
        args = [self._argument()]
        while self.peek().text == ",":
            self.advance()
            args.append(self._argument())
        self.expect("SYMBOL", ";")

        arity = _GATE_ARITIES[name.text]
        canonical = GATE_NAMES[name.text]
        if arity == 1 and len(args) == 1 and args[0][1] is None:
            # broadcast over the whole register
            targets = self._resolve(self.qregs, args[0][0], None, "quantum")

            def apply(circuit, name=name):
                for q in targets:
                    self._append_gate(circuit, name, canonical, params, (q,))
            return apply
        if len(args) != arity:
            raise QasmSemanticError(name.line, name.column,
                                    f"{name.text} needs {arity} qubit argument(s), got {len(args)}")
        qubits: list[int] = []
        for reg, index in args:
            if index is None:
                raise QasmSemanticError(reg.line, reg.column,
                                        "multi-qubit gates require indexed arguments")
            qubits.extend(self._resolve(self.qregs, reg, index, "quantum"))

        def apply(circuit, name=name, qubits=tuple(qubits)):
            self._append_gate(circuit, name, canonical, params, qubits)
        return apply

    @staticmethod
    def _append_gate(circuit: Circuit, name_tok: Token, canonical: str,
                     params: list[float], qubits: tuple[int, ...]):
        try:
            circuit.gate(GateDef(canonical, tuple(params)), *qubits)
        except (CircuitError, ValueError) as exc:
            raise QasmSemanticError(name_tok.line, name_tok.column, str(exc)) from exc

    def _measure(self):
        kw = self.advance()
        q_name, q_idx = self._argument()
        self.expect("SYMBOL", "->")
        c_name, c_idx = self._argument()
        self.expect("SYMBOL", ";")
        if (q_idx is None) != (c_idx is None):
            raise QasmSemanticError(kw.line, kw.column,
                                    "measure arguments must both be indexed or both registers")
        qubits = self._resolve(self.qregs, q_name, q_idx, "quantum")
        clbits = self._resolve(self.cregs, c_name, c_idx, "classical")
        if len(qubits) != len(clbits):
            raise QasmSemanticError(kw.line, kw.column,
                                    f"register sizes differ: {len(qubits)} qubits -> {len(clbits)} clbits")

        def apply(circuit):
            for q, c in zip(qubits, clbits):
                try:
                    circuit.measure(q, c)
                except CircuitError as exc:
                    raise QasmSemanticError(kw.line, kw.column, str(exc)) from exc
        return apply

    def _barrier(self):
        self.advance()
        args = [self._argument()]
        while self.peek().text == ",":
            self.advance()
            args.append(self._argument())
        self.expect("SYMBOL", ";")
        qubits: list[int] = []
        for reg, index in args:
            qubits.extend(self._resolve(self.qregs, reg, index, "quantum"))
        return lambda circuit: circuit.barrier(*qubits)

    # -- angle expressions ----------------------------------------------------

    def _expression(self) -> float:
        value = self._unary()
        while self.peek().kind == "SYMBOL" and self.peek().text in ("*", "/"):
            op = self.advance()
            rhs = self._unary()
            if op.text == "*":
                value *= rhs
            else:
                if rhs == 0.0:
                    raise QasmSemanticError(op.line, op.column, "division by zero in angle")
                value /= rhs
        return value

    def _unary(self) -> float:
        tok = self.peek()
        if tok.kind == "SYMBOL" and tok.text == "-":
            self.advance()
            return -self._unary()
        if tok.kind == "NUMBER":
            self.advance()
            return float(tok.text)
        if tok.kind == "ID" and tok.text == "pi":
            self.advance()
            return float(np.pi)
        raise QasmParseError(tok.line, tok.column,
                             f"unexpected {tok.text or 'end of input'!r}", "number or pi")


def parse(source: str) -> Circuit:
    """Parse OPENQASM 2.0 source into a Circuit.  Raises QasmError subtypes."""
    return _Parser(source).parse()


def _fmt_angle(value: float) -> str:
    return format(value, ".17g")


def emit(circuit: Circuit) -> str:
    """Canonical OPENQASM 2.0 text for a circuit (LF newlines, trailing LF)."""
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{circuit.num_qubits}];"]
    if circuit.num_clbits > 0:
        lines.append(f"creg c[{circuit.num_clbits}];")
    for inst in circuit.instructions:
        if inst.kind == "gate":
            name = _EMIT_NAMES[inst.gate.name]
            params = ""
            if inst.gate.params:
                params = "(" + ",".join(_fmt_angle(p) for p in inst.gate.params) + ")"
            operands = ",".join(f"q[{q}]" for q in inst.qubits)
            lines.append(f"{name}{params} {operands};")
        elif inst.kind == "barrier":
            operands = ",".join(f"q[{q}]" for q in inst.qubits)
            lines.append(f"barrier {operands};")
        else:
            lines.append(f"measure q[{inst.qubits[0]}] -> c[{inst.clbit}];")
    return "\n".join(lines) + "\n"
