"""Gadget admission: synthesis -> oracle verification -> cache.

Every circuit handed out by :class:`GadgetLibrary` carries a verification
certificate.  Transversal declarations from the catalog are re-verified
(once, memoised) before any gadget that relies on the code is released; a
failed verification is a hard error.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

from . import gates, simulate
from .catalog import Catalog
from .circuits import (GadgetCircuit, GadgetDispatcher, SynthesisError,
                       expand_transversal, staircase_gadget)
from .codes import StabilizerCode
from .concat import Layout, bare_layout
from .gates import Gate
from .simulate import Certificate, Operand, VerificationError


class AdmissionError(RuntimeError):
    """A synthesized circuit failed oracle verification."""


def verify_gadget(operands: list[Operand], circuit: GadgetCircuit,
                  claimed: Gate) -> Certificate:
    """Route to the strongest applicable oracle.

    Dense simulation when the register fits; Heisenberg conjugation for
    Clifford circuits of any size; exact coset-phase analysis for
    X/CNOT/diagonal circuits.
    """
    total = sum(op.n for op in operands)
    if total <= simulate.MAX_DENSE_QUBITS:
        claimed_matrix = gates.gate_matrix(claimed)
        return simulate.verify_logical_action(operands, circuit, claimed_matrix)
    if circuit.is_clifford and claimed.is_clifford:
        return simulate.verify_clifford_action(operands, circuit, claimed)
    if all(g.is_permutation or g.is_diagonal for g in circuit.gates) and claimed.is_diagonal:
        return simulate.verify_diagonal_action(operands, circuit, claimed)
    raise VerificationError(
        f"no oracle applies to {circuit.label} at {total} qubits "
        f"(non-Clifford, non-diagonal structure)")


def logical_gate(kind: str, arity: int | None = None,
                 theta: Fraction | None = None) -> Gate:
    """The claimed logical gate, on logical operand indices."""
    if kind in (gates.Z_THETA, gates.CKZ_THETA):
        if theta is None:
            raise SynthesisError(f"{kind} needs an angle")
        n = arity if arity is not None else (1 if kind == gates.Z_THETA else 2)
        return gates.diagonal_gate(tuple(range(n)), theta)
    return Gate(kind, tuple(range(gates.ARITY[kind])))


@dataclass
class AdmittedGadget:
    circuit: GadgetCircuit
    certificate: Certificate
    claimed: Gate


class GadgetLibrary:
    """Verified gadget store for one catalog.

    The cache maps (layout fingerprint, logical gate) to admitted gadgets;
    inserts are idempotent and lock-protected so concurrent lookups never
    observe a torn entry.
    """

    def __init__(self, catalog: Catalog):
        self.catalog = catalog
        self.dispatcher = GadgetDispatcher(catalog.rules)
        self._cache: dict[tuple, AdmittedGadget] = {}
        self._rule_certs: dict[tuple[str, str], Certificate] = {}
        self._verified_codes: set[str] = set()
        self._lock = threading.Lock()

    # -- transversal declarations ------------------------------------------

    def rule_certificate(self, code_name: str, kind: str) -> Certificate:
        """Verify one declaration with every applicable oracle and merge.

        Small registers get dense simulation, Clifford circuits the
        Heisenberg check, permutation/diagonal circuits the coset-phase
        check; all that apply must pass.
        """
        key = (code_name, kind)
        with self._lock:
            if key in self._rule_certs:
                return self._rule_certs[key]
        code = self.catalog.code(code_name)
        rule = self.catalog.rules[code_name][kind]
        arity = gates.ARITY[kind]
        circuit = expand_transversal(code, kind, rule, arity)
        claimed = logical_gate(kind)
        operands = [Operand.from_code(code)] * arity
        certs: list[Certificate] = []
        if claimed.is_diagonal and all(g.is_permutation or g.is_diagonal
                                       for g in circuit.gates):
            certs.append(simulate.verify_diagonal_action(operands, circuit, claimed))
        if circuit.is_clifford and claimed.is_clifford:
            certs.append(simulate.verify_clifford_action(operands, circuit, claimed))
        if arity * code.n <= simulate.MAX_DENSE_QUBITS:
            certs.append(simulate.verify_logical_action(
                operands, circuit, gates.gate_matrix(claimed)))
        if not certs:
            raise VerificationError(f"no oracle applies to {kind} on {code_name}")
        for cert in certs:
            if not cert.passed:
                raise AdmissionError(
                    f"declared transversal {kind} on {code_name} failed its "
                    f"{cert.method} check: {cert.details}")
        fidelities = [c.fidelity for c in certs if c.fidelity is not None]
        merged = Certificate(
            "+".join(c.method for c in certs), True,
            fidelity=min(fidelities) if fidelities else None,
            phase=next((c.phase for c in certs if c.phase is not None), None),
            details="; ".join(c.details for c in certs if c.details))
        with self._lock:
            self._rule_certs.setdefault(key, merged)
        return merged

    def verify_code_rules(self, code_name: str) -> dict[str, Certificate]:
        """Verify every declaration of one code (hard error on failure)."""
        certs = {}
        for kind in self.catalog.rules.get(code_name, {}):
            certs[kind] = self.rule_certificate(code_name, kind)
        self._verified_codes.add(code_name)
        return certs

    def _require_codes(self, layout: Layout) -> None:
        names = {layout.outer.name} | {
            inner.name for inner in layout.assignment if inner is not None}
        for name in sorted(names):
            if name in self.catalog.rules and name not in self._verified_codes:
                self.verify_code_rules(name)

    # -- gadgets --------------------------------------------------------------

    def gadget(self, layout: Layout, logical: Gate) -> AdmittedGadget:
        key = (layout.fingerprint(), logical.kind, logical.qubits, logical.theta_over_pi)
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        self._require_codes(layout)
        circuit = self.dispatcher.logical_gadget(layout, logical)
        operand = Operand.from_layout(layout)
        cert = verify_gadget([operand] * len(circuit.blocks), circuit, logical)
        if not cert.passed:
            raise AdmissionError(
                f"gadget {circuit.label} on {layout.descriptor} failed its "
                f"{cert.method} check: {cert.details}")
        admitted = AdmittedGadget(circuit, cert, logical)
        with self._lock:
            self._cache.setdefault(key, admitted)
        return admitted

    def base_staircase(self, code: StabilizerCode, k: int, theta: Fraction) -> AdmittedGadget:
        """Theorem-level staircase on bare code blocks, dense-verified."""
        layout = bare_layout(code)
        logical = gates.diagonal_gate(tuple(range(k + 1)), theta)
        key = ("staircase:" + code.name, logical.kind, logical.qubits, logical.theta_over_pi)
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        circuit = staircase_gadget(code, k, theta)
        cert = verify_gadget([Operand.from_code(code)] * (k + 1), circuit, logical)
        if not cert.passed:
            raise AdmissionError(f"staircase {circuit.label} on {code.name} failed: {cert.details}")
        admitted = AdmittedGadget(circuit, cert, logical)
        with self._lock:
            self._cache.setdefault(key, admitted)
        return admitted

    def universal_gadget_set(self, layout: Layout) -> list[AdmittedGadget]:
        """The layout's gate library: the diagonal family realised by
        staircases plus the outer code's declared transversal gates."""
        out = []
        outer = layout.outer.name
        if outer in ("steane",):
            kinds = [gates.T, gates.CCZ, gates.H, gates.S, gates.CNOT, gates.X, gates.Z]
        elif outer in ("five_prime", "five_qubit"):
            kinds = [gates.T, gates.S, gates.CZ, gates.CCZ, gates.K, gates.X, gates.Z]
        else:
            kinds = [gates.T, gates.CNOT, gates.X, gates.Z]
        for kind in kinds:
            out.append(self.gadget(layout, logical_gate(kind)))
        return out
