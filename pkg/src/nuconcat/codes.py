"""Base stabilizer codes: construction, syndromes, distance, lookup decoding.

Generator conventions are fixed here (the catalog serialises them); all
index-dependent facts downstream are derived from these conventions, not
assumed.  Qubits are 0-indexed throughout.

Coset enumeration is exact: every code handled here has at most 2^14
stabilizer elements, so minimum logical weights and decoder tables are
computed by exhaustive scan with deterministic tie-breaking.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from . import gates
from ._bitlin import Solver, rank
from .pauli import DimensionError, Pauli

LOGICAL_CLASSES = ("X", "Y", "Z")


class CodeConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class StabilizerCode:
    """[[n, 1, d]] stabilizer code with signed generators and logical reps."""

    name: str
    n: int
    generators: tuple[Pauli, ...]
    logical_x: Pauli
    logical_z: Pauli
    css: bool = False
    k: int = field(default=1, init=False)

    def __post_init__(self):
        if len(self.generators) != self.n - 1:
            raise CodeConstructionError(
                f"{self.name}: need {self.n - 1} generators, got {len(self.generators)}")
        for p in (*self.generators, self.logical_x, self.logical_z):
            if p.n != self.n:
                raise CodeConstructionError(f"{self.name}: operator size mismatch")
            if not p.is_hermitian():
                raise CodeConstructionError(f"{self.name}: non-Hermitian operator {p}")
        for a, b in itertools.combinations(self.generators, 2):
            if not a.commutes(b):
                raise CodeConstructionError(f"{self.name}: generators {a} and {b} anticommute")
        if rank([g.x << self.n | g.z for g in self.generators]) != self.n - 1:
            raise CodeConstructionError(f"{self.name}: generators not independent")
        for g in self.generators:
            if not (self.logical_x.commutes(g) and self.logical_z.commutes(g)):
                raise CodeConstructionError(f"{self.name}: logical rep anticommutes with {g}")
        if self.logical_x.commutes(self.logical_z):
            raise CodeConstructionError(f"{self.name}: logical X and Z must anticommute")
        if self.css:
            for g in self.generators:
                if g.x and g.z:
                    raise CodeConstructionError(f"{self.name}: mixed generator {g} in CSS code")

    def logical_rep(self, cls: str) -> Pauli:
        if cls == "X":
            return self.logical_x
        if cls == "Z":
            return self.logical_z
        if cls == "Y":
            # Y = i X Z at the logical level
            p = self.logical_x * self.logical_z
            return Pauli(p.n, p.x, p.z, (p.phase_exp + 1) & 3)
        raise ValueError(f"unknown logical class {cls!r}")

    def stabilizer_elements(self):
        """All 2^(n-1) group elements with exact signs (Gray-code walk)."""
        gens = self.generators
        current = Pauli.identity(self.n)
        yield current
        prev_code = 0
        for i in range(1, 1 << len(gens)):
            code = i ^ (i >> 1)
            flipped = (code ^ prev_code).bit_length() - 1
            current = current * gens[flipped]
            prev_code = code
            yield current


# -- constructions ---------------------------------------------------------

def _css_code(name: str, n: int, x_rows: list[int], z_rows: list[int],
              lx: int, lz: int) -> StabilizerCode:
    gens = [Pauli(n, row, 0, 0) for row in x_rows] + [Pauli(n, 0, row, 0) for row in z_rows]
    return StabilizerCode(name, n, tuple(gens), Pauli(n, lx, 0, 0), Pauli(n, 0, lz, 0), css=True)


def _hamming_rows() -> list[int]:
    # rows j = positions v in 1..7 whose binary digit j is set; qubit q = v - 1
    rows = []
    for j in range(3):
        mask = 0
        for v in range(1, 8):
            if (v >> j) & 1:
                mask |= 1 << (v - 1)
        rows.append(mask)
    return rows


def steane() -> StabilizerCode:
    """[[7,1,3]] CSS code on the [7,4,3] Hamming code."""
    rows = _hamming_rows()
    all7 = (1 << 7) - 1
    return _css_code("steane", 7, rows, rows, all7, all7)


def reed_muller_15() -> StabilizerCode:
    """[[15,1,3]] quantum Reed-Muller code.

    Qubit q = nonzero 4-bit label v = q + 1.  X generators are the four
    weight-8 evaluations of the coordinate functions; Z generators add the
    six weight-4 pairwise products.  This orientation (4 X-type, 10 Z-type)
    is the one with a transversal T-type gate.
    """
    def mask(predicate):
        m = 0
        for v in range(1, 16):
            if predicate(v):
                m |= 1 << (v - 1)
        return m

    x_rows = [mask(lambda v, j=j: (v >> j) & 1) for j in range(4)]
    z_rows = list(x_rows)
    for j, l in itertools.combinations(range(4), 2):
        z_rows.append(mask(lambda v: (v >> j) & 1 and (v >> l) & 1))
    all15 = (1 << 15) - 1
    return _css_code("rm15", 15, x_rows, z_rows, all15, all15)


def five_qubit() -> StabilizerCode:
    """[[5,1,3]] code with the cyclic generators XZZXI, IXZZX, XIXZZ, ZXIXZ."""
    gens = tuple(Pauli.from_string(s) for s in ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"))
    return StabilizerCode("five_qubit", 5, gens,
                          Pauli.from_string("XXXXX"), Pauli.from_string("ZZZZZ"))


FIVE_PRIME_TRANSFORM = (gates.gate(gates.K, 0), gates.gate(gates.Y, 2), gates.gate(gates.K, 4))


def transform_code(code: StabilizerCode, gate_list, name: str | None = None) -> StabilizerCode:
    """Conjugate a code by single-qubit Clifford gates (local-Clifford equivalence)."""
    for g in gate_list:
        if len(g.qubits) != 1:
            raise gates.UnsupportedGateError(f"{g.kind} is not a local Clifford gate")

    def conj(p: Pauli) -> Pauli:
        return gates.conjugate_through(p, gate_list)

    return StabilizerCode(
        name or code.name,
        code.n,
        tuple(conj(g) for g in code.generators),
        conj(code.logical_x),
        conj(code.logical_z),
        css=False if gate_list else code.css,
    )


def five_prime() -> StabilizerCode:
    """5-qubit code conjugated by K@0, Y@2, K@4; has a pure-Z weight-3 logical."""
    return transform_code(five_qubit(), FIVE_PRIME_TRANSFORM, name="five_prime")


# -- syndromes and cosets ---------------------------------------------------

def syndrome(code: StabilizerCode, error: Pauli) -> int:
    """Bit i set iff the error anticommutes with generator i."""
    if error.n != code.n:
        raise DimensionError(f"error on {error.n} qubits vs code on {code.n}")
    s = 0
    for i, g in enumerate(code.generators):
        if not error.commutes(g):
            s |= 1 << i
    return s


def _coset_key(p: Pauli) -> tuple[int, int, int]:
    return (p.weight(), p.x, p.z)


@lru_cache(maxsize=None)
def _coset_scan(code: StabilizerCode, cls: str) -> tuple[Pauli, ...]:
    """All elements of the ``cls`` logical coset, sorted by (weight, x, z)."""
    rep = code.logical_rep(cls)
    return tuple(sorted((rep * s for s in code.stabilizer_elements()), key=_coset_key))


def min_weight_logical(code: StabilizerCode, cls: str) -> Pauli:
    """Minimum-weight element of the logical coset.

    Ties break on lexicographically smallest (x bits, z bits), which also
    prefers pure-Z representatives among equal-weight candidates.
    """
    return _coset_scan(code, cls)[0]


def min_weight_candidates(code: StabilizerCode, cls: str) -> tuple[Pauli, ...]:
    scan = _coset_scan(code, cls)
    d = scan[0].weight()
    return tuple(p for p in scan if p.weight() == d)


@lru_cache(maxsize=None)
def distance(code: StabilizerCode) -> int:
    if code.n > 20:
        raise CodeConstructionError(f"{code.name}: full coset enumeration refused at n={code.n}")
    return min(min_weight_logical(code, cls).weight() for cls in LOGICAL_CLASSES)


def staircase_support(code: StabilizerCode) -> tuple[int, ...]:
    """Support of the canonical minimum-weight logical-Z representative.

    This is the set of qubits a diagonal-gate staircase couples, and hence
    the inner-encoded partition of non-uniform layouts built on this code.
    """
    return min_weight_logical(code, "Z").support


# -- decoding ---------------------------------------------------------------

@dataclass(frozen=True)
class LookupDecoder:
    """Full syndrome table of minimum-weight corrections.

    Tie-break among same-syndrome, same-weight corrections is the smallest
    (x bits, z bits) pair, so tables are reproducible.
    """

    code: StabilizerCode
    table: dict[int, Pauli]

    def decode(self, s: int) -> Pauli:
        if s >> (self.code.n - 1):
            raise DimensionError(f"syndrome 0x{s:x} too wide for {self.code.name}")
        return self.table[s]


@lru_cache(maxsize=None)
def build_decoder(code: StabilizerCode) -> LookupDecoder:
    n = code.n
    n_syndromes = 1 << (n - 1)
    if n_syndromes > 1 << 14:
        raise CodeConstructionError(f"{code.name}: decoder table would exceed 2^14 entries")
    # Syndrome is linear over the (x, z) representation: precompute the
    # syndrome of each single-qubit letter once.
    letter_syndrome = {}
    for q in range(n):
        for letter in "XYZ":
            letter_syndrome[(q, letter)] = syndrome(code, Pauli.single(n, q, letter))

    table: dict[int, tuple[int, int, int]] = {0: (0, 0, 0)}  # syndrome -> (x, z, weight)

    letters = {"X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
    for w in range(1, n + 1):
        if len(table) == n_syndromes:
            break
        for support in itertools.combinations(range(n), w):
            for assignment in itertools.product("XYZ", repeat=w):
                s = x = z = 0
                for q, letter in zip(support, assignment):
                    s ^= letter_syndrome[(q, letter)]
                    xb, zb = letters[letter]
                    x |= xb << q
                    z |= zb << q
                known = table.get(s)
                if known is None or (known[2] == w and (x, z) < (known[0], known[1])):
                    table[s] = (x, z, w)

    paulis = {s: Pauli(n, x, z, 0) for s, (x, z, _) in table.items()}
    return LookupDecoder(code, paulis)


def residual_logical_action(code: StabilizerCode, error: Pauli,
                            decoder: LookupDecoder | None = None) -> str:
    """Classify correction * error as I (stabilizer) or a logical X/Y/Z."""
    decoder = decoder or build_decoder(code)
    residual = decoder.decode(syndrome(code, error)) * error
    if syndrome(code, residual) != 0:
        raise AssertionError("decoder left a detectable residual")  # table bug
    return normalizer_class(code, residual)


def normalizer_class(code: StabilizerCode, p: Pauli) -> str:
    """Logical class of a normalizer element by commutation with the reps."""
    anti_z = not p.commutes(code.logical_z)  # X-like component flips Z
    anti_x = not p.commutes(code.logical_x)
    return {(False, False): "I", (True, False): "X",
            (True, True): "Y", (False, True): "Z"}[(anti_z, anti_x)]


@lru_cache(maxsize=None)
def _group_solver(code: StabilizerCode) -> Solver:
    return Solver([g.x << code.n | g.z for g in code.generators])


def in_stabilizer_group(code: StabilizerCode, p: Pauli) -> bool:
    """Exact membership including sign: p must equal a product of generators."""
    combo = _group_solver(code).solve(p.x << code.n | p.z)
    if combo is None:
        return False
    product = Pauli.identity(code.n)
    for i, g in enumerate(code.generators):
        if (combo >> i) & 1:
            product = product * g
    return product == p
