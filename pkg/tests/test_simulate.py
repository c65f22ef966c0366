from fractions import Fraction

import numpy as np
import pytest

from nuconcat import gates, library, simulate
from nuconcat.circuits import GadgetCircuit, expand_transversal, staircase_gadget
from nuconcat.gates import Gate, gate
from nuconcat.pauli import Pauli
from nuconcat.simulate import (Operand, StateVector, VerificationError,
                               apply_circuit, apply_pauli, codeword, encode, tensor,
                               verify_clifford_action, verify_diagonal_action,
                               verify_logical_action)


def test_state_cap():
    with pytest.raises(VerificationError):
        StateVector(23)


def test_apply_pauli_bits_and_phase():
    s = StateVector(2)  # |00>
    out = apply_pauli(s, Pauli.from_string("XI"))
    assert abs(out.amplitudes[1] - 1) < 1e-12
    out = apply_pauli(out, Pauli.from_string("ZI"))
    assert abs(out.amplitudes[1] + 1) < 1e-12  # Z on |1> flips the sign


def test_apply_gate_examples():
    s = StateVector(3)
    s = apply_circuit(s, GadgetCircuit(3, (gate(gates.X, 0), gate(gates.X, 1),
                                           gate(gates.X, 2)), "x3", ((0, 3),)))
    assert abs(s.amplitudes[7] - 1) < 1e-12
    ccz = GadgetCircuit(3, (gate(gates.CCZ, 0, 1, 2),), "ccz", ((0, 3),))
    out = apply_circuit(s, ccz)
    assert abs(out.amplitudes[7] + 1) < 1e-12
    # X twice is the identity
    twice = GadgetCircuit(3, (gate(gates.X, 0), gate(gates.X, 0)), "xx", ((0, 3),))
    assert np.allclose(apply_circuit(out, twice).amplitudes, out.amplitudes)
    # empty circuit
    assert np.allclose(apply_circuit(out, GadgetCircuit(3, (), "id", ((0, 3),))).amplitudes,
                       out.amplitudes)


def test_gate_application_matches_kron_oracle():
    rng = np.random.default_rng(11)
    amps = rng.normal(size=8) + 1j * rng.normal(size=8)
    amps /= np.linalg.norm(amps)
    for g in (gate(gates.H, 1), gate(gates.K, 2), gate(gates.S, 0),
              gate(gates.T, 1), gate(gates.CNOT, 2, 0), gate(gates.CZ, 0, 2)):
        got = simulate.apply_gate(StateVector(3, amps.copy()), g).amplitudes
        u = np.eye(1, dtype=complex)
        mats = {q: np.eye(2, dtype=complex) for q in range(3)}
        if len(g.qubits) == 1:
            mats[g.qubits[0]] = gates.gate_matrix(g)
            for q in (2, 1, 0):
                u = np.kron(u, mats[q])
        else:
            dim = 8
            u = np.zeros((dim, dim), dtype=complex)
            small = gates.gate_matrix(g)
            for c in range(dim):
                local = sum((((c >> q) & 1) << i) for i, q in enumerate(g.qubits))
                for local_out in range(len(small)):
                    amp = small[local_out, local]
                    if abs(amp) < 1e-15:
                        continue
                    out_idx = c
                    for i, q in enumerate(g.qubits):
                        bit = (local_out >> i) & 1
                        out_idx = (out_idx & ~(1 << q)) | (bit << q)
                    u[out_idx, c] += amp
        assert np.allclose(got, u @ amps), g.kind


def test_encode_invariants(cat):
    for name in ("steane", "five_qubit", "five_prime", "rm15"):
        code = cat.code(name)
        state = encode(code, 1, 0)
        for g in (*code.generators, code.logical_z):
            image = apply_pauli(state, g)
            assert abs(np.vdot(state.amplitudes, image.amplitudes) - 1) < 1e-12
    rm = cat.code("rm15")
    zero = codeword(rm, 0)
    nonzero = np.abs(zero.amplitudes) > 1e-12
    assert nonzero.sum() == 16
    assert np.allclose(np.abs(zero.amplitudes[nonzero]), 0.25)


def test_encode_one_is_logical_x_of_zero(cat):
    code = cat.code("steane")
    one = codeword(code, 1)
    lifted = apply_pauli(codeword(code, 0), code.logical_x)
    assert np.allclose(one.amplitudes, lifted.amplitudes)


def test_encode_requires_normalised_inputs(cat):
    with pytest.raises(VerificationError):
        encode(cat.code("steane"), 1, 1)


def test_tensor_order():
    a = StateVector(1, np.array([0, 1], dtype=complex))   # |1>
    b = StateVector(1, np.array([1, 0], dtype=complex))   # |0>
    joint = tensor([a, b])  # qubit 0 = |1>, qubit 1 = |0>
    assert abs(joint.amplitudes[1] - 1) < 1e-12


def test_identity_circuit_verifies_for_all_codes(cat):
    for name in ("steane", "five_qubit", "five_prime", "rm15"):
        code = cat.code(name)
        empty = GadgetCircuit(code.n, (), "id", ((0, code.n),))
        cert = verify_logical_action([Operand.from_code(code)], empty, np.eye(2))
        assert cert.passed and abs(cert.phase - 1) < 1e-9


def test_dense_catches_wrong_claim(cat):
    code = cat.code("steane")
    g = staircase_gadget(code, 0, Fraction(1, 4))
    cert = verify_logical_action([Operand.from_code(code)], g,
                                 gates.gate_matrix(gate(gates.S, 0)))
    assert not cert.passed


def test_heisenberg_catches_wrong_claim(cat):
    code = cat.code("steane")
    rule = cat.rules["steane"][gates.H]
    circuit = expand_transversal(code, gates.H, rule, 1)
    assert verify_clifford_action([Operand.from_code(code)], circuit,
                                  gate(gates.H, 0)).passed
    assert not verify_clifford_action([Operand.from_code(code)], circuit,
                                      gate(gates.S, 0)).passed


def test_css_coset_catches_wrong_claim(cat):
    code = cat.code("rm15")
    rule = cat.rules["rm15"][gates.T]
    circuit = expand_transversal(code, gates.T, rule, 1)
    assert verify_diagonal_action([Operand.from_code(code)], circuit,
                                  gate(gates.T, 0)).passed
    wrong = verify_diagonal_action([Operand.from_code(code)], circuit,
                                   gate(gates.S, 0))
    assert not wrong.passed
    # plain T per qubit implements logical T_dagger, not T
    plain = GadgetCircuit(15, tuple(gate(gates.T, q) for q in range(15)), "t15", ((0, 15),))
    assert not verify_diagonal_action([Operand.from_code(code)], plain,
                                      gate(gates.T, 0)).passed
    assert verify_diagonal_action([Operand.from_code(code)], plain,
                                  gate(gates.T_DAG, 0)).passed


def test_css_coset_detects_leakage(cat):
    code = cat.code("rm15")
    # half a staircase leaves the permutation uncomputed
    half = GadgetCircuit(15, (gate(gates.CNOT, 0, 1),), "broken", ((0, 15),))
    cert = verify_diagonal_action([Operand.from_code(code)], half, gate(gates.Z, 0))
    assert not cert.passed and "permutation" in cert.details


def test_oracle_agreement_dense_vs_heisenberg(cat, lib):
    """Every Clifford gadget small enough for dense simulation gets the
    same verdict from both oracles."""
    cases = []
    for name, kind in [("steane", gates.H), ("steane", gates.S), ("steane", gates.CNOT),
                       ("steane", gates.CZ), ("rm15", gates.S), ("five_prime", gates.K)]:
        code = cat.code(name)
        arity = gates.ARITY[kind]
        if arity * code.n > simulate.MAX_DENSE_QUBITS:
            continue
        cases.append((code, expand_transversal(code, kind, cat.rules[name][kind], arity),
                      kind, arity))
    assert cases
    for code, circuit, kind, arity in cases:
        ops = [Operand.from_code(code)] * arity
        claimed = Gate(kind, tuple(range(arity)))
        dense = verify_logical_action(ops, circuit, gates.gate_matrix(claimed))
        heis = verify_clifford_action(ops, circuit, claimed)
        assert dense.passed == heis.passed == True


def test_verify_gadget_router(cat, lib, layouts):
    # dense for small registers
    adm = lib.base_staircase(cat.code("steane"), 0, Fraction(1, 4))
    assert adm.certificate.method == "dense"
    # heisenberg for large Clifford
    adm = lib.gadget(layouts[49], library.logical_gate(gates.CNOT))
    assert adm.certificate.method == "heisenberg"
    # coset phases for large diagonal
    adm = lib.gadget(layouts[49], library.logical_gate(gates.T))
    assert adm.certificate.method == "css-coset"
