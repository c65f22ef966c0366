"""Ground-truth oracles for gadget verification.

Three independent methods, selected by :func:`verify_gadget`:

* dense statevector simulation (exact amplitudes, <= 22 qubits);
* Heisenberg conjugation of stabilizers and logicals (Clifford circuits,
  any size, sign-exact group membership);
* coset-phase analysis for circuits made of X/CNOT/diagonal gates: the
  basis permutation must uncompute to the identity, and the accumulated
  diagonal phase is evaluated exactly (rational multiples of pi) on the
  classical support of each logical codeword.  Multi-operand pi-phase
  gates are checked by multilinear finite differences instead of
  enumerating the product support.

Certificates record which method ran and what it measured.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import gates
from ._bitlin import Solver, solve_affine
from .circuits import GadgetCircuit
from .codes import StabilizerCode
from .concat import Layout, flatten_logicals, flatten_stabilizers
from .gates import Gate
from .pauli import Pauli

MAX_DENSE_QUBITS = 22
FIDELITY_TOL = 1e-10
NORM_TOL = 1e-12
ENUMERATION_CAP = 1 << 17


class VerificationError(ValueError):
    pass


@dataclass(frozen=True)
class Certificate:
    method: str
    passed: bool
    fidelity: float | None = None
    phase: complex | None = None
    details: str = ""


@dataclass(frozen=True)
class Operand:
    """One logical operand: a code block (base or flattened layout)."""

    n: int
    generators: tuple[Pauli, ...]
    logical_x: Pauli
    logical_z: Pauli

    @staticmethod
    def from_code(code: StabilizerCode) -> "Operand":
        return Operand(code.n, code.generators, code.logical_x, code.logical_z)

    @staticmethod
    def from_layout(layout: Layout) -> "Operand":
        lx, lz = flatten_logicals(layout)
        return Operand(layout.total_n, flatten_stabilizers(layout), lx, lz)


# -- dense statevector ---------------------------------------------------------

class StateVector:
    """Dense 2^n statevector; basis index bit q = qubit q."""

    def __init__(self, n: int, amplitudes: np.ndarray | None = None):
        if n > MAX_DENSE_QUBITS:
            raise VerificationError(f"{n} qubits exceeds the dense cap of {MAX_DENSE_QUBITS}")
        self.n = n
        if amplitudes is None:
            amplitudes = np.zeros(1 << n, dtype=complex)
            amplitudes[0] = 1.0
        self.amplitudes = np.asarray(amplitudes, dtype=complex)

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def _parity(values: np.ndarray, mask: int) -> np.ndarray:
    return np.bitwise_count(values & mask) & 1


def apply_pauli(state: StateVector, p: Pauli) -> StateVector:
    """Exact Pauli action: i^e X^x Z^z |c> = i^e (-1)^(z.c) |c ^ x>."""
    idx = np.arange(1 << state.n, dtype=np.int64)
    signs = 1.0 - 2.0 * _parity(idx, p.z)
    out = np.empty_like(state.amplitudes)
    out[idx ^ p.x] = (1j ** p.phase_exp) * signs * state.amplitudes
    return StateVector(state.n, out)


def apply_gate(state: StateVector, g: Gate) -> StateVector:
    n = state.n
    amps = state.amplitudes
    idx = np.arange(1 << n, dtype=np.int64)
    if g.kind == gates.X:
        return StateVector(n, amps[idx ^ (1 << g.qubits[0])])
    if g.kind == gates.CNOT:
        ctrl, targ = g.qubits
        src = np.where((idx >> ctrl) & 1 == 1, idx ^ (1 << targ), idx)
        return StateVector(n, amps[src])
    if g.is_diagonal:
        mask = 0
        for q in g.qubits:
            mask |= 1 << q
        hit = np.bitwise_count(idx & mask) == len(g.qubits)
        phase = np.exp(1j * np.pi * float(g.theta()))
        out = np.where(hit, phase * amps, amps)
        return StateVector(n, out)
    # generic single-qubit unitary
    if len(g.qubits) != 1:
        raise VerificationError(f"no dense rule for {g.kind}")
    u = gates.gate_matrix(g)
    q = g.qubits[0]
    psi = amps.reshape([2] * n)
    axis = n - 1 - q
    psi = np.moveaxis(psi, axis, -1)
    psi = psi @ u.T
    psi = np.moveaxis(psi, -1, axis)
    return StateVector(n, psi.reshape(-1))


def apply_circuit(state: StateVector, circuit: GadgetCircuit) -> StateVector:
    if circuit.register_size != state.n:
        raise VerificationError("register size mismatch")
    for g in circuit.gates:
        state = apply_gate(state, g)
    if abs(state.norm() - 1.0) > NORM_TOL:
        raise VerificationError("statevector norm drifted")
    return state


def codeword(code_or_operand, label: int) -> StateVector:
    """|label-bar> built by projection onto +1 eigenspaces; |1> = logical X |0>."""
    op = code_or_operand if isinstance(code_or_operand, Operand) \
        else Operand.from_code(code_or_operand)
    for seed in range(1 << op.n):
        state = StateVector(op.n)
        state.amplitudes[:] = 0.0
        state.amplitudes[seed] = 1.0
        for g in (*op.generators, op.logical_z):
            state = StateVector(op.n, (state.amplitudes + apply_pauli(state, g).amplitudes) / 2)
        nrm = state.norm()
        if nrm > 1e-6:
            zero = StateVector(op.n, state.amplitudes / nrm)
            return apply_pauli(zero, op.logical_x) if label else zero
    raise VerificationError("no computational seed projects onto the code space")


def encode(code: StabilizerCode, alpha: complex, beta: complex) -> StateVector:
    """alpha |0-bar> + beta |1-bar> (inputs must be normalised)."""
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > 1e-9:
        raise VerificationError("encode requires |alpha|^2 + |beta|^2 = 1")
    zero = codeword(code, 0)
    one = codeword(code, 1)
    return StateVector(code.n, alpha * zero.amplitudes + beta * one.amplitudes)


def tensor(states: list[StateVector]) -> StateVector:
    """Combined state with states[0] on the lowest qubits."""
    amps = np.array([1.0 + 0j])
    n = 0
    for s in states:
        amps = np.kron(s.amplitudes, amps)
        n += s.n
    return StateVector(n, amps)


# -- dense logical-action verification -------------------------------------------

def _logical_inputs(m: int) -> list[np.ndarray]:
    """Spanning inputs: all basis states, one |+> per operand, global |+...+>."""
    dim = 1 << m
    inputs = [np.eye(dim, dtype=complex)[:, j] for j in range(dim)]
    for b in range(m):
        v = np.zeros(dim, dtype=complex)
        v[0] = v[1 << b] = 1 / np.sqrt(2)
        inputs.append(v)
    inputs.append(np.full(dim, 1 / np.sqrt(dim), dtype=complex))
    return inputs


def verify_logical_action(operands: list[Operand], circuit: GadgetCircuit,
                          claimed: np.ndarray) -> Certificate:
    """Dense check that the circuit equals the claimed logical unitary
    (up to one consistent global phase) and preserves the code space."""
    m = len(operands)
    total = sum(op.n for op in operands)
    if total != circuit.register_size:
        raise VerificationError("operands do not cover the register")
    if total > MAX_DENSE_QUBITS:
        raise VerificationError(f"{total} qubits exceeds the dense cap")
    block_words = [[codeword(op, b) for b in range(2)] for op in operands]
    basis = []
    for j in range(1 << m):
        basis.append(tensor([block_words[b][(j >> b) & 1] for b in range(m)]).amplitudes)
    basis_mat = np.array(basis)  # rows = logical basis states

    phase = None
    min_fidelity = 1.0
    for v in _logical_inputs(m):
        phys = StateVector(total, basis_mat.T @ v)
        out = apply_circuit(phys, circuit)
        coeffs = basis_mat.conj() @ out.amplitudes
        leak = 1.0 - float(np.vdot(coeffs, coeffs).real)
        if leak > FIDELITY_TOL:
            return Certificate("dense", False, fidelity=1.0 - leak,
                               details=f"left the code space (leakage {leak:.3e})")
        expected = claimed @ v
        if phase is None:
            anchor = int(np.argmax(np.abs(expected)))
            phase = coeffs[anchor] / expected[anchor]
            phase /= abs(phase)
        fid = abs(np.vdot(phase * expected, coeffs)) ** 2
        min_fidelity = min(min_fidelity, float(fid))
        if np.linalg.norm(coeffs - phase * expected) > 1e-8:
            return Certificate("dense", False, fidelity=min_fidelity, phase=complex(phase),
                               details="logical action mismatch")
    return Certificate("dense", min_fidelity >= 1 - FIDELITY_TOL,
                       fidelity=min_fidelity, phase=complex(phase))


# -- Heisenberg verification -------------------------------------------------------

def _embed_at(p: Pauli, total: int, offset: int) -> Pauli:
    return p.embed(total, range(offset, offset + p.n))


def _lift_logical(operands: list[Operand], offsets: list[int], total: int,
                  logical: Pauli) -> Pauli:
    """Group-homomorphic lift of an m-qubit logical Pauli to physical reps."""
    out = Pauli(total, 0, 0, logical.phase_exp)
    for b in range(logical.n):
        if (logical.x >> b) & 1:
            out = out * _embed_at(operands[b].logical_x, total, offsets[b])
        if (logical.z >> b) & 1:
            out = out * _embed_at(operands[b].logical_z, total, offsets[b])
    return out


def verify_clifford_action(operands: list[Operand], circuit: GadgetCircuit,
                           claimed: Gate) -> Certificate:
    """Conjugate stabilizers and logicals through a Clifford circuit.

    Passes when every stabilizer image is exactly a (signed) stabilizer and
    every logical image equals the claimed image up to exact stabilizer
    multiplication; this pins the action up to global phase.
    """
    if not circuit.is_clifford:
        raise VerificationError("Heisenberg check requires a Clifford circuit")
    if not claimed.is_clifford:
        raise VerificationError("claimed gate is not Clifford")
    m = len(operands)
    total = sum(op.n for op in operands)
    offsets = [sum(op.n for op in operands[:b]) for b in range(m)]
    all_gens = [_embed_at(g, total, offsets[b])
                for b, op in enumerate(operands) for g in op.generators]
    solver = Solver([g.x << total | g.z for g in all_gens])

    def in_group(p: Pauli) -> bool:
        combo = solver.solve(p.x << total | p.z)
        if combo is None:
            return False
        product = Pauli.identity(total)
        for i, g in enumerate(all_gens):
            if (combo >> i) & 1:
                product = product * g
        return product == p

    for g in all_gens:
        image = gates.conjugate_through(g, circuit.gates)
        if not in_group(image):
            return Certificate("heisenberg", False,
                               details=f"stabilizer {g} maps outside the group")
    for b in range(m):
        for letter in ("X", "Z"):
            source = Pauli.single(m, b, letter)
            source = Pauli(m, source.x, source.z, 0)
            got = gates.conjugate_through(
                _lift_logical(operands, offsets, total, source), circuit.gates)
            want = _lift_logical(operands, offsets, total,
                                 gates.conjugate_by_gate(source, claimed))
            if not in_group(got * want.inverse()):
                return Certificate("heisenberg", False,
                                   details=f"logical {letter}_{b} image mismatch")
    return Certificate("heisenberg", True, phase=None)


# -- coset-phase verification --------------------------------------------------------

@dataclass
class _AffineTrace:
    """Forward-tracked basis permutation plus recorded diagonal gates."""

    rows: list[int]
    offsets: int
    phase_terms: list[tuple[Fraction, list[tuple[int, int]]]]  # (theta, [(row, off)])


def _trace_permutation(circuit: GadgetCircuit) -> _AffineTrace:
    n = circuit.register_size
    rows = [1 << q for q in range(n)]
    offs = 0
    terms: list[tuple[Fraction, list[tuple[int, int]]]] = []
    for g in circuit.gates:
        if g.kind == gates.X:
            offs ^= 1 << g.qubits[0]
        elif g.kind == gates.CNOT:
            c, t = g.qubits
            rows[t] ^= rows[c]
            offs ^= ((offs >> c) & 1) << t
        elif g.is_diagonal:
            terms.append((g.theta(), [(rows[q], (offs >> q) & 1) for q in g.qubits]))
        else:
            raise VerificationError(f"{g.kind} is outside the coset-phase gate set")
    return _AffineTrace(rows, offs, terms)


def _support_space(op: Operand) -> tuple[list[int], list[int], Pauli]:
    """Constraint system of the codeword supports, on the operand's own bits.

    Returns (constraint rows, target bits as a list, pure-Z logical element);
    the label constraint is the last row, with target ``label xor sign``.
    """
    gens = list(op.generators)
    # kernel of the x-parts: combinations multiplying to pure-Z elements
    solver_rows: list[tuple[int, int]] = []  # (reduced x-row, combination)
    kernel: list[int] = []
    for i, g in enumerate(gens):
        row, combo = g.x, 1 << i
        reducing = True
        while row and reducing:
            reducing = False
            for r, c in solver_rows:
                if (row >> (r.bit_length() - 1)) & 1:
                    row ^= r
                    combo ^= c
                    reducing = True
                    break
        if row:
            solver_rows.append((row, combo))
            solver_rows.sort(key=lambda rc: -rc[0])
        else:
            kernel.append(combo)
    rows: list[int] = []
    targets: list[int] = []
    for combo in kernel:
        product = Pauli.identity(op.n)
        for i, g in enumerate(gens):
            if (combo >> i) & 1:
                product = product * g
        if product.x or product.display_phase_exp not in (0, 2):
            raise AssertionError("pure-Z reduction failed")
        rows.append(product.z)
        targets.append(1 if product.display_phase_exp == 2 else 0)
    # pure-Z element of the logical-Z coset
    lz = op.logical_z
    x_solver = Solver([g.x for g in gens])
    combo = x_solver.solve(lz.x)
    if combo is None:
        raise VerificationError("logical Z has no pure-Z coset form; "
                                "coset-phase method inapplicable")
    pure = lz
    for i, g in enumerate(gens):
        if (combo >> i) & 1:
            pure = pure * g
    if pure.x or pure.display_phase_exp not in (0, 2):
        raise AssertionError("logical-Z purification failed")
    return rows, targets, pure


def _claimed_theta(claimed: Gate, labels: tuple[int, ...]) -> Fraction:
    if not claimed.is_diagonal:
        raise VerificationError("coset-phase method needs a diagonal claimed gate")
    return claimed.theta() % 2 if all(labels) else Fraction(0)


def verify_diagonal_action(operands: list[Operand], circuit: GadgetCircuit,
                           claimed: Gate) -> Certificate:
    """Exact phase check for X/CNOT/diagonal circuits on stabilizer codewords.

    The permutation part must uncompute to the identity; the diagonal
    phase, a rational multiple of pi per basis state, must be constant on
    the classical support of every logical codeword tuple and equal the
    claimed logical phase.  Supports are enumerated when small; otherwise
    every phase term must be a multiple of pi and the parity form is
    checked by multilinear finite differences over the support bases.
    """
    m = len(operands)
    total = sum(op.n for op in operands)
    if total != circuit.register_size:
        raise VerificationError("operands do not cover the register")
    trace = _trace_permutation(circuit)
    if trace.offsets != 0 or any(trace.rows[q] != 1 << q for q in range(total)):
        return Certificate("css-coset", False,
                           details="basis permutation does not uncompute to identity")

    offsets = [sum(op.n for op in operands[:b]) for b in range(m)]
    touched = 0
    for theta, bits in trace.phase_terms:
        for row, _ in bits:
            touched |= row

    spaces = [_support_space(op) for op in operands]

    def solve_support(b: int, label: int):
        rows, targets, pure = spaces[b]
        sign = 1 if pure.display_phase_exp == 2 else 0
        solution = solve_affine(rows + [pure.z], targets + [label ^ sign], operands[b].n)
        if solution is None:
            raise VerificationError("inconsistent support constraints")
        seed, basis = solution
        seed <<= offsets[b]
        # quotient by qubits the circuit never reads
        projected: list[int] = []
        solver = Solver([])
        for v in basis:
            v <<= offsets[b]
            pv = v & touched
            if pv and not solver.contains(pv):
                solver.add(pv)
                projected.append(v)
        return seed, projected

    sized = 1
    supports = {}
    for b in range(m):
        for label in range(2):
            supports[(b, label)] = solve_support(b, label)
    dims = [len(supports[(b, 0)][1]) for b in range(m)]
    for d in dims:
        sized <<= d

    def phase_of(word: int) -> Fraction:
        acc = Fraction(0)
        for theta, bits in trace.phase_terms:
            prod = 1
            for row, off in bits:
                if (((row & word).bit_count() & 1) ^ off) == 0:
                    prod = 0
                    break
            if prod:
                acc += theta
        return acc % 2

    if sized <= ENUMERATION_CAP:
        for labels in itertools.product(range(2), repeat=m):
            want = _claimed_theta(claimed, labels)
            seeds = [supports[(b, labels[b])][0] for b in range(m)]
            bases = [supports[(b, labels[b])][1] for b in range(m)]
            flat_basis = [v for bb in bases for v in bb]
            base_word = 0
            for s in seeds:
                base_word ^= s
            for mask in range(1 << len(flat_basis)):
                word = base_word
                mm = mask
                while mm:
                    low = mm & -mm
                    word ^= flat_basis[low.bit_length() - 1]
                    mm ^= low
                if phase_of(word) != want:
                    return Certificate(
                        "css-coset", False,
                        details=f"phase {phase_of(word)} != {want} at labels {labels}")
        return Certificate("css-coset", True, phase=1.0 + 0j,
                           details=f"enumerated {sized} support words per label tuple")

    # multilinear path: every term must be a pi phase
    for theta, _ in trace.phase_terms:
        if theta.denominator != 1:
            raise VerificationError(
                "support too large to enumerate and phases are finer than pi")

    def parity_of(word: int) -> int:
        par = 0
        for theta, bits in trace.phase_terms:
            if theta % 2 == 0:
                continue
            prod = 1
            for row, off in bits:
                if (((row & word).bit_count() & 1) ^ off) == 0:
                    prod = 0
                    break
            par ^= prod
        return par

    max_arity = max((len(bits) for _, bits in trace.phase_terms), default=1)
    for labels in itertools.product(range(2), repeat=m):
        want = _claimed_theta(claimed, labels)
        want_parity = 0 if want == 0 else 1
        if want not in (Fraction(0), Fraction(1)):
            raise VerificationError("claimed phase is not a pi multiple")
        seeds = [supports[(b, labels[b])][0] for b in range(m)]
        bases = [v for b in range(m) for v in supports[(b, labels[b])][1]]
        base_word = 0
        for s in seeds:
            base_word ^= s
        if parity_of(base_word) != want_parity:
            return Certificate("css-coset", False,
                               details=f"seed parity mismatch at labels {labels}")
        # all mixed finite differences up to the gate arity must vanish
        for order in range(1, max_arity + 1):
            for combo in itertools.combinations(range(len(bases)), order):
                acc = 0
                for sub_bits in range(1 << order):
                    word = base_word
                    for i in range(order):
                        if (sub_bits >> i) & 1:
                            word ^= bases[combo[i]]
                    acc ^= parity_of(word)
                if acc:
                    return Certificate(
                        "css-coset", False,
                        details=f"phase varies over the support at labels {labels}")
    return Certificate("css-coset", True, phase=1.0 + 0j,
                       details=f"multilinear check over {len(bases)}-dim support bases")
