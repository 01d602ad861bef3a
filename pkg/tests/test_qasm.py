"""Reader/writer for the OPENQASM 2.0 subset: round-trips and diagnostics."""

import numpy as np
import pytest

from mzsim.circuit import Circuit
from mzsim.qasm import (
    GATE_NAMES,
    QasmError,
    QasmParseError,
    QasmSemanticError,
    emit,
    parse,
)

HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'


def random_circuit(rng, max_qubits=4, max_gates=12):
    n = int(rng.integers(1, max_qubits + 1))
    c = Circuit(n, n)
    for _ in range(int(rng.integers(0, max_gates + 1))):
        roll = rng.random()
        q = int(rng.integers(n))
        if roll < 0.15:
            c.h(q)
        elif roll < 0.3:
            c.x(q)
        elif roll < 0.45:
            c.ry(float(rng.uniform(-2 * np.pi, 2 * np.pi)), q)
        elif roll < 0.55:
            c.u1(float(rng.uniform(-np.pi, np.pi)), q)
        elif roll < 0.65:
            c.u2(*(float(v) for v in rng.uniform(-np.pi, np.pi, 2)), q)
        elif roll < 0.75:
            c.u3(*(float(v) for v in rng.uniform(-np.pi, np.pi, 3)), q)
        elif roll < 0.8 and n >= 1:
            c.barrier()
        elif n >= 2:
            a, b = map(int, rng.permutation(n)[:2])
            if roll < 0.9:
                c.cx(a, b)
            elif roll < 0.95:
                c.swap(a, b)
            elif n >= 3:
                a, b, t = map(int, rng.permutation(n)[:3])
                c.ccx(a, b, t)
    if rng.random() < 0.7:
        c.measure_all()
    return c


class TestEmit:
    def test_canonical_program_shape(self):
        c = Circuit(2, 2).h(0).cx(0, 1).h(0).measure_all()
        text = emit(c)
        lines = text.strip().split("\n")
        assert lines[0] == "OPENQASM 2.0;"
        assert lines[1] == 'include "qelib1.inc";'
        assert lines[2] == "qreg q[2];"
        assert lines[3] == "creg c[2];"
        assert lines[4] == "h q[0];"
        assert lines[5] == "cx q[0],q[1];"
        assert lines[-2:] == ["measure q[0] -> c[0];", "measure q[1] -> c[1];"]
        assert len(lines) == 9
        assert text.endswith("\n") and "\r" not in text

    def test_creg_omitted_when_no_clbits(self):
        text = emit(Circuit(1).h(0))
        assert "creg" not in text

    def test_angles_have_full_precision(self):
        theta = 0.1 + 0.2  # not exactly representable in decimal
        c = Circuit(1).ry(theta, 0)
        line = emit(c).strip().split("\n")[-1]
        assert line.startswith("ry(") and line.endswith(") q[0];")
        assert float(line[3:line.index(")")]) == theta

    def test_barrier_lists_qubits(self):
        assert "barrier q[0],q[2];" in emit(Circuit(3).barrier(0, 2))


class TestParse:
    def test_minimal_program(self):
        c = parse(HEADER + "qreg q[1];\nh q[0];")
        assert c.num_qubits == 1 and c.num_clbits == 0
        assert c.count_gates() == {"H": 1}

    def test_include_is_optional(self):
        c = parse("OPENQASM 2.0; qreg q[1]; x q[0];")
        assert c.count_gates() == {"X": 1}

    def test_all_gate_spellings(self):
        src = HEADER + (
            "qreg q[3];\n"
            "h q[0]; x q[1]; ry(0.5) q[2];\n"
            "u1(0.1) q[0]; u2(0.1,0.2) q[1]; u3(0.1,0.2,0.3) q[2];\n"
            "cx q[0],q[1]; swap q[1],q[2]; ccx q[0],q[1],q[2];\n"
        )
        counts = parse(src).count_gates()
        assert counts == {"H": 1, "X": 1, "RY": 1, "U1": 1, "U2": 1, "U3": 1,
                          "CNOT": 1, "SWAP": 1, "CCX": 1}
        assert set(GATE_NAMES.values()) == set(counts)

    def test_single_qubit_gates_broadcast_over_register(self):
        c = parse(HEADER + "qreg q[3]; h q;")
        assert c.count_gates() == {"H": 3}
        assert [i.qubits for i in c.gate_instructions()] == [(0,), (1,), (2,)]

    def test_register_measure_is_pairwise(self):
        c = parse(HEADER + "qreg q[2]; creg c[2]; h q[0]; measure q -> c;")
        measures = [(i.qubits[0], i.clbit) for i in c.instructions if i.kind == "measure"]
        assert measures == [(0, 0), (1, 1)]

    def test_multiple_registers_are_flattened_in_order(self):
        c = parse(HEADER + "qreg a[2]; qreg b[2]; cx a[1],b[0];")
        assert c.num_qubits == 4
        assert c.gate_instructions()[0].qubits == (1, 2)

    def test_angle_expressions(self):
        src = HEADER + "qreg q[1]; ry(pi/2) q[0]; ry(-pi) q[0]; ry(3*pi/4) q[0]; ry(2e-1) q[0]; ry(.5) q[0];"
        params = [i.gate.params[0] for i in parse(src).gate_instructions()]
        assert params == [np.pi / 2, -np.pi, 3 * np.pi / 4, 0.2, 0.5]

    def test_comments_and_whitespace_ignored(self):
        src = "// leading comment\nOPENQASM 2.0; // trailing\n\n qreg q[1];\nh q[0]; // done\n"
        assert parse(src).count_gates() == {"H": 1}

    def test_barrier_over_register_and_indexed(self):
        c = parse(HEADER + "qreg q[3]; barrier q; barrier q[1];")
        barriers = [i.qubits for i in c.instructions if i.kind == "barrier"]
        assert barriers == [(0, 1, 2), (1,)]


class TestRoundTrip:
    def test_random_circuits_survive(self):
        rng = np.random.default_rng(2024)
        for _ in range(60):
            c = random_circuit(rng)
            assert parse(emit(c)) == c

    def test_handwritten_circuit_survives(self):
        c = Circuit(3, 3).u3(0.1, -2.5, np.pi, 0).ccx(0, 1, 2).barrier().measure_all()
        assert parse(emit(c)) == c

    def test_emit_is_a_fixed_point(self):
        c = Circuit(2, 2).h(0).cx(0, 1).measure_all()
        assert emit(parse(emit(c))) == emit(c)


def expect_error(source, exc_type, line, column, fragment):
    with pytest.raises(exc_type) as info:
        parse(source)
    err = info.value
    assert (err.line, err.column) == (line, column), str(err)
    assert fragment in err.message
    return err


class TestDiagnostics:
    def test_error_str_carries_position(self):
        err = QasmParseError(3, 7, "unexpected ')'", expected="';'")
        assert str(err) == "line 3, column 7: unexpected ')' (expected ';')"
        assert isinstance(err, QasmError) and isinstance(err, ValueError)

    def test_missing_preamble(self):
        expect_error("qreg q[1];", QasmParseError, 1, 1, "unexpected")

    def test_unsupported_version(self):
        err = expect_error("OPENQASM 3.0;", QasmSemanticError, 1, 10, "unsupported version")
        assert err.expected == "2.0"

    def test_wrong_include(self):
        expect_error('OPENQASM 2.0;\ninclude "other.inc";', QasmSemanticError,
                     2, 9, "only qelib1.inc")

    def test_missing_semicolon(self):
        expect_error(HEADER + "qreg q[1]\nh q[0];", QasmParseError, 4, 1, "unexpected")

    def test_undeclared_register(self):
        expect_error(HEADER + "qreg q[1]; h r[0];", QasmSemanticError, 3, 14, "undeclared")

    def test_unknown_gate(self):
        expect_error(HEADER + "qreg q[1]; rz(1) q[0];", QasmSemanticError, 3, 12, "unsupported gate")

    def test_index_out_of_range(self):
        expect_error(HEADER + "qreg q[2]; x q[2];", QasmSemanticError, 3, 14, "out of range")

    def test_duplicate_register(self):
        expect_error(HEADER + "qreg q[1]; creg q[1];", QasmSemanticError, 3, 17, "already declared")

    def test_zero_size_register(self):
        expect_error(HEADER + "qreg q[0];", QasmSemanticError, 3, 8, "positive integer")

    def test_measure_size_mismatch(self):
        expect_error(HEADER + "qreg q[2]; creg c[1]; measure q -> c;",
                     QasmSemanticError, 3, 23, "sizes differ")

    def test_measure_mixed_indexing(self):
        expect_error(HEADER + "qreg q[1]; creg c[1]; measure q[0] -> c;",
                     QasmSemanticError, 3, 23, "both")

    def test_division_by_zero_points_at_operator(self):
        expect_error(HEADER + "qreg q[1]; ry(pi/0) q[0];", QasmSemanticError,
                     3, 17, "division by zero")

    def test_stray_character(self):
        expect_error(HEADER + "qreg q[1]; @", QasmParseError, 3, 12, "unexpected character")

    def test_wrong_parameter_count(self):
        expect_error(HEADER + "qreg q[1]; ry q[0];", QasmSemanticError, 3, 12, "1 parameter")
        expect_error(HEADER + "qreg q[1]; u2(1,2,3) q[0];", QasmSemanticError, 3, 12, "2 parameter")

    def test_multi_qubit_gate_requires_indices(self):
        expect_error(HEADER + "qreg q[2]; cx q,q;", QasmSemanticError, 3, 15, "indexed")

    def test_repeated_qubit_argument(self):
        expect_error(HEADER + "qreg q[2]; cx q[0],q[0];", QasmSemanticError, 3, 12, "repeated")

    def test_gate_after_measure(self):
        expect_error(HEADER + "qreg q[1]; creg c[1]; measure q[0] -> c[0]; h q[0];",
                     QasmSemanticError, 3, 45, "terminal")

    def test_program_without_qubits(self):
        # the trailing newline puts EOF at the start of line 3
        expect_error(HEADER, QasmSemanticError, 3, 1, "declares no qubits")

    def test_truncated_input(self):
        expect_error(HEADER + "qreg q[1]; ry(", QasmParseError, 3, 15, "unexpected")
