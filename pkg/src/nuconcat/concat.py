"""Concatenation layouts, flattened stabilizers, hierarchical decoding,
and exact concatenated distance.

A layout is an outer code plus a per-outer-qubit assignment: either an
inner code (that outer qubit becomes an encoded block) or bare (it stays
a single physical qubit).  A layout is non-uniform when the assignment is
not constant.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ._bitlin import rank
from .codes import (StabilizerCode, build_decoder, min_weight_logical,
                    normalizer_class, staircase_support, syndrome)
from .pauli import DimensionError, Pauli


class LayoutError(ValueError):
    pass


@dataclass(frozen=True)
class Partition:
    """Coupled / uncoupled split of the outer qubits.

    ``b1`` holds the outer qubits touched by the staircase of the outer
    code's diagonal-gate gadget; ``b2`` is the complement.
    """

    n_outer: int
    b1: frozenset[int]

    def __post_init__(self):
        if not self.b1:
            raise LayoutError("coupled set must be nonempty")
        if not all(0 <= q < self.n_outer for q in self.b1):
            raise LayoutError("coupled set outside outer register")

    @property
    def b2(self) -> frozenset[int]:
        return frozenset(range(self.n_outer)) - self.b1


def partition_from_gadget(outer: StabilizerCode, support=None) -> Partition:
    """Partition induced by the gadget coupling set (union over gadgets).

    Defaults to the canonical staircase support of the outer code.
    """
    if support is None:
        support = staircase_support(outer)
    return Partition(outer.n, frozenset(support))


@dataclass(frozen=True)
class Layout:
    outer: StabilizerCode
    assignment: tuple[StabilizerCode | None, ...]
    descriptor: str = ""

    def __post_init__(self):
        if len(self.assignment) != self.outer.n:
            raise LayoutError("assignment must cover every outer qubit")
        if not self.descriptor:
            object.__setattr__(self, "descriptor", format_layout(self))

    @property
    def total_n(self) -> int:
        return sum(1 if inner is None else inner.n for inner in self.assignment)

    @property
    def offsets(self) -> tuple[int, ...]:
        out = []
        at = 0
        for inner in self.assignment:
            out.append(at)
            at += 1 if inner is None else inner.n
        return tuple(out)

    @property
    def is_uniform(self) -> bool:
        return len(set(inner.name if inner else None for inner in self.assignment)) == 1

    def block(self, outer_q: int) -> tuple[int, StabilizerCode | None]:
        return self.offsets[outer_q], self.assignment[outer_q]

    def block_qubits(self, outer_q: int) -> range:
        start, inner = self.block(outer_q)
        return range(start, start + (1 if inner is None else inner.n))

    def fingerprint(self) -> str:
        return self.descriptor


def uniform_layout(outer: StabilizerCode, inner: StabilizerCode) -> Layout:
    return Layout(outer, (inner,) * outer.n)


def bare_layout(outer: StabilizerCode) -> Layout:
    return Layout(outer, (None,) * outer.n)


def non_uniform_layout(outer: StabilizerCode, inner: StabilizerCode,
                       partition: Partition | None = None,
                       b2_inner: StabilizerCode | None = None) -> Layout:
    """Encode the coupled set with ``inner``; leave b2 bare or encode it
    with ``b2_inner`` (the two-level-everywhere variant)."""
    partition = partition or partition_from_gadget(outer)
    if partition.n_outer != outer.n:
        raise LayoutError("partition does not match outer code")
    assignment = tuple(inner if q in partition.b1 else b2_inner for q in range(outer.n))
    return Layout(outer, assignment)


# -- descriptors -------------------------------------------------------------

def format_layout(layout: Layout) -> str:
    names = ["bare" if inner is None else inner.name for inner in layout.assignment]
    return f"outer={layout.outer.name};assign=" + ",".join(names)


def parse_layout(text: str, code_by_name) -> Layout:
    """Parse ``uniform:steane:rm15`` style or explicit per-qubit descriptors.

    Forms::

        bare:OUTER
        uniform:OUTER:INNER
        nonuniform:OUTER:INNER          (coupled set from the outer staircase)
        b2:OUTER:INNER:B2INNER
        outer=OUTER;assign=a,b,...      (explicit; 'bare' or a code name each)
    """
    text = text.strip()
    if text.startswith("outer="):
        head, _, tail = text.partition(";")
        outer = code_by_name(head.removeprefix("outer="))
        if not tail.startswith("assign="):
            raise LayoutError(f"bad layout descriptor {text!r}")
        names = tail.removeprefix("assign=").split(",")
        assignment = tuple(None if nm == "bare" else code_by_name(nm) for nm in names)
        return Layout(outer, assignment)
    parts = text.split(":")
    form = parts[0]
    if form == "bare" and len(parts) == 2:
        return bare_layout(code_by_name(parts[1]))
    if form == "uniform" and len(parts) == 3:
        return uniform_layout(code_by_name(parts[1]), code_by_name(parts[2]))
    if form == "nonuniform" and len(parts) == 3:
        return non_uniform_layout(code_by_name(parts[1]), code_by_name(parts[2]))
    if form == "b2" and len(parts) == 4:
        return non_uniform_layout(code_by_name(parts[1]), code_by_name(parts[2]),
                                  b2_inner=code_by_name(parts[3]))
    raise LayoutError(f"bad layout descriptor {text!r}")


# -- flattening ---------------------------------------------------------------

def lift(layout: Layout, outer_op: Pauli) -> Pauli:
    """Lift an outer-level Pauli to the physical register.

    Letters on encoded qubits become the inner logical representatives
    (with their exact signs); letters on bare qubits pass through.
    """
    if outer_op.n != layout.outer.n:
        raise DimensionError("outer operator size mismatch")
    total = layout.total_n
    out = Pauli(total, 0, 0, outer_op.phase_exp)
    for q in range(outer_op.n):
        letter = outer_op.letter(q)
        if letter == "I":
            continue
        start, inner = layout.block(q)
        if inner is None:
            # strip the internal i carried by a Y letter; re-added by single()
            factor = Pauli.single(total, start, letter)
            factor = Pauli(total, factor.x, factor.z, factor.phase_exp - (letter == "Y"))
        else:
            rep = inner.logical_rep(letter)
            factor = Pauli(rep.n, rep.x, rep.z, rep.phase_exp - (letter == "Y"))
            factor = factor.embed(total, range(start, start + inner.n))
        out = out * factor
    return out


@lru_cache(maxsize=None)
def flatten_stabilizers(layout: Layout) -> tuple[Pauli, ...]:
    """Inner generators per block plus lifted outer generators.

    Yields total_n - 1 independent commuting generators; commutation and
    symplectic rank are asserted because lifting depends on the logical
    representative conventions.
    """
    total = layout.total_n
    gens: list[Pauli] = []
    for q in range(layout.outer.n):
        start, inner = layout.block(q)
        if inner is not None:
            for g in inner.generators:
                gens.append(g.embed(total, range(start, start + inner.n)))
    for g in layout.outer.generators:
        gens.append(lift(layout, g))
    if len(gens) != total - 1:
        raise AssertionError("flattened generator count mismatch")
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            if not a.commutes(b):
                raise AssertionError(f"flattened generators anticommute: {a} vs {b}")
    if rank([g.x << total | g.z for g in gens]) != total - 1:
        raise AssertionError("flattened generators not independent")
    return tuple(gens)


def flatten_logicals(layout: Layout) -> tuple[Pauli, Pauli]:
    return lift(layout, layout.outer.logical_x), lift(layout, layout.outer.logical_z)


# -- hierarchical decoding ----------------------------------------------------

def hierarchical_decode(layout: Layout, error: Pauli) -> str:
    """Residual logical class after inner-then-outer lookup decoding."""
    if error.n != layout.total_n:
        raise DimensionError("error register does not match layout")
    letters: dict[int, str] = {}
    for q in range(layout.outer.n):
        start, inner = layout.block(q)
        if inner is None:
            letter = error.letter(start)
        else:
            block_err = error.restrict(range(start, start + inner.n))
            decoder = build_decoder(inner)
            correction = decoder.decode(syndrome(inner, block_err))
            letter = normalizer_class(inner, correction * block_err)
        if letter != "I":
            letters[q] = letter
    outer_error = Pauli.from_letters(layout.outer.n, letters)
    outer_decoder = build_decoder(layout.outer)
    correction = outer_decoder.decode(syndrome(layout.outer, outer_error))
    return normalizer_class(layout.outer, correction * outer_error)


# -- exact distance -------------------------------------------------------------

@dataclass(frozen=True)
class DistanceResult:
    distance: int
    witness: Pauli
    outer_element: Pauli
    outer_class: str


@lru_cache(maxsize=None)
def _inner_cost(inner: StabilizerCode | None) -> dict[str, int]:
    if inner is None:
        return {"I": 0, "X": 1, "Y": 1, "Z": 1}
    return {"I": 0, **{cls: min_weight_logical(inner, cls).weight() for cls in "XYZ"}}


def concatenated_distance(layout: Layout) -> DistanceResult:
    """Exact minimum weight over all flattened logical operators.

    Scans every nontrivial outer logical coset element and charges each
    outer letter its cheapest inner realisation: 0 for identity, 1 on a
    bare qubit, and the inner coset minimum for an encoded qubit.  The
    witness is rebuilt from the argmin and re-verified against the
    flattened generators.
    """
    outer = layout.outer
    if outer.n - 1 > 6:
        raise LayoutError(f"outer coset enumeration refused at n={outer.n}")
    costs = [_inner_cost(inner) for inner in layout.assignment]

    best: tuple[int, ...] | None = None
    best_elem: Pauli | None = None
    best_cls = ""
    for cls in ("X", "Y", "Z"):
        rep = outer.logical_rep(cls)
        for s in outer.stabilizer_elements():
            elem = rep * s
            w = 0
            for q in range(outer.n):
                w += costs[q][elem.letter(q)]
            key = (w, elem.x, elem.z)
            if best is None or key < best:
                best = key
                best_elem = elem
                best_cls = cls

    witness = _min_weight_lift(layout, best_elem)
    _verify_witness(layout, witness, best[0])
    return DistanceResult(best[0], witness, best_elem, best_cls)


def _min_weight_lift(layout: Layout, outer_op: Pauli) -> Pauli:
    """Lift choosing the minimum-weight inner coset element per block."""
    total = layout.total_n
    out = Pauli.identity(total)
    for q in range(outer_op.n):
        letter = outer_op.letter(q)
        if letter == "I":
            continue
        start, inner = layout.block(q)
        if inner is None:
            factor = Pauli.single(total, start, letter)
        else:
            factor = min_weight_logical(inner, letter).embed(
                total, range(start, start + inner.n))
        out = out * factor
    return out


def _verify_witness(layout: Layout, witness: Pauli, claimed_weight: int) -> None:
    if witness.weight() != claimed_weight:
        raise AssertionError("witness weight mismatch")
    for g in flatten_stabilizers(layout):
        if not witness.commutes(g):
            raise AssertionError("witness has nonzero syndrome")
    lx, lz = flatten_logicals(layout)
    if witness.commutes(lx) and witness.commutes(lz):
        raise AssertionError("witness is not logically nontrivial")
