"""Code catalog: the shipped codes, their transversal declarations, and a
bit-exact text serialisation.

Declarations here are claims, not facts: the gadget library re-verifies
every one against an oracle before first use and refuses to hand out
unverified gadgets.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from . import codes as codelib
from . import gates
from .circuits import TransversalRule
from .codes import StabilizerCode
from .pauli import Pauli


@dataclass
class Catalog:
    codes: dict[str, StabilizerCode] = field(default_factory=dict)
    rules: dict[str, dict[str, TransversalRule]] = field(default_factory=dict)
    derivations: dict[str, str] = field(default_factory=dict)

    def code(self, name: str) -> StabilizerCode:
        try:
            return self.codes[name]
        except KeyError:
            raise KeyError(f"unknown code {name!r}; catalog has {sorted(self.codes)}") from None

    def add(self, code: StabilizerCode, rules: dict[str, TransversalRule],
            derivation: str = "") -> None:
        self.codes[code.name] = code
        self.rules[code.name] = rules
        if derivation:
            self.derivations[code.name] = derivation

    def fingerprint(self) -> str:
        return hashlib.sha256(dump_catalog(self).encode()).hexdigest()[:16]


_PAULI_RULES = {
    "X": TransversalRule("rep"),
    "Y": TransversalRule("rep"),
    "Z": TransversalRule("rep"),
}


def default_catalog() -> Catalog:
    """The four shipped codes with their claimed transversal sets.

    Dagger conventions matter: on both the Steane and Reed-Muller codes the
    logical S is the bitwise S_dagger, and on the Reed-Muller code the
    logical T is the bitwise T_dagger (the X-coset weights are 0 and 8 mod
    16, so bitwise phase gates act with the opposite sign on the odd coset).
    """
    gates.self_check()
    cat = Catalog()
    cat.add(codelib.steane(), {
        **_PAULI_RULES,
        gates.H: TransversalRule("bitwise", gates.H),
        gates.S: TransversalRule("bitwise", gates.S_DAG),
        gates.CNOT: TransversalRule("bitwise", gates.CNOT),
        gates.CZ: TransversalRule("bitwise", gates.CZ),
    })
    cat.add(codelib.reed_muller_15(), {
        **_PAULI_RULES,
        gates.T: TransversalRule("bitwise", gates.T_DAG),
        gates.S: TransversalRule("bitwise", gates.S_DAG),
        gates.CNOT: TransversalRule("bitwise", gates.CNOT),
        gates.CZ: TransversalRule("bitwise", gates.CZ),
        gates.CCZ: TransversalRule("bitwise", gates.CCZ),
    })
    cat.add(codelib.five_qubit(), dict(_PAULI_RULES))
    cat.add(codelib.five_prime(), {
        **_PAULI_RULES,
        gates.K: TransversalRule("bitwise", gates.K, fixups=((gates.Z, 2),)),
    }, derivation="five_qubit + " + " ".join(
        f"{g.kind}@{g.qubits[0]}" for g in codelib.FIVE_PRIME_TRANSFORM))
    return cat


# -- text format ---------------------------------------------------------------

def dump_catalog(cat: Catalog) -> str:
    lines = ["catalog-version 1", ""]
    for name in cat.codes:
        code = cat.codes[name]
        lines.append(f"code {name}")
        lines.append(f"n {code.n}")
        lines.append(f"css {'true' if code.css else 'false'}")
        if name in cat.derivations:
            lines.append(f"derivation {cat.derivations[name]}")
        for g in code.generators:
            lines.append(f"stabilizer {g}")
        lines.append(f"logical-x {code.logical_x}")
        lines.append(f"logical-z {code.logical_z}")
        for kind, rule in cat.rules.get(name, {}).items():
            if rule.style == "rep":
                lines.append(f"transversal {kind} rep")
            else:
                entry = f"transversal {kind} bitwise {rule.phys_kind}"
                for fk, fq in rule.fixups:
                    entry += f" fixup {fk}@{fq}"
                lines.append(entry)
        lines.append("end")
        lines.append("")
    return "\n".join(lines)


def parse_catalog(text: str) -> Catalog:
    cat = Catalog()
    lines = iter(text.splitlines())
    header = next(lines, "").strip()
    if header != "catalog-version 1":
        raise ValueError(f"unsupported catalog header {header!r}")
    current: dict | None = None
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        if key == "code":
            current = {"name": rest.strip(), "stabilizers": [], "rules": {},
                       "css": False, "derivation": ""}
        elif current is None:
            raise ValueError(f"directive outside code block: {line!r}")
        elif key == "n":
            current["n"] = int(rest)
        elif key == "css":
            current["css"] = rest.strip() == "true"
        elif key == "derivation":
            current["derivation"] = rest.strip()
        elif key == "stabilizer":
            current["stabilizers"].append(Pauli.from_string(rest.strip()))
        elif key == "logical-x":
            current["logical_x"] = Pauli.from_string(rest.strip())
        elif key == "logical-z":
            current["logical_z"] = Pauli.from_string(rest.strip())
        elif key == "transversal":
            parts = rest.split()
            kind = parts[0]
            if parts[1] == "rep":
                rule = TransversalRule("rep")
            elif parts[1] == "bitwise":
                fixups = []
                for tok in parts[3:]:
                    if tok == "fixup":
                        continue
                    fk, _, fq = tok.partition("@")
                    fixups.append((fk, int(fq)))
                rule = TransversalRule("bitwise", parts[2], tuple(fixups))
            else:
                raise ValueError(f"bad transversal style in {line!r}")
            current["rules"][kind] = rule
        elif key == "end":
            code = StabilizerCode(current["name"], current["n"],
                                  tuple(current["stabilizers"]),
                                  current["logical_x"], current["logical_z"],
                                  css=current["css"])
            cat.add(code, current["rules"], current["derivation"])
            current = None
        else:
            raise ValueError(f"unknown catalog directive {key!r}")
    if current is not None:
        raise ValueError("unterminated code block")
    return cat
