import pytest

from nuconcat import catalog as cataloglib
from nuconcat import gates


def test_round_trip_is_bit_exact(cat):
    text = cataloglib.dump_catalog(cat)
    reparsed = cataloglib.parse_catalog(text)
    assert cataloglib.dump_catalog(reparsed) == text
    assert reparsed.fingerprint() == cat.fingerprint()
    for name, code in cat.codes.items():
        other = reparsed.code(name)
        assert other.generators == code.generators
        assert other.logical_x == code.logical_x
        assert other.logical_z == code.logical_z
        assert other.css == code.css
    assert reparsed.rules == cat.rules


def test_default_contents(cat):
    assert set(cat.codes) == {"steane", "rm15", "five_qubit", "five_prime"}
    assert gates.T in cat.rules["rm15"]
    assert gates.CCZ in cat.rules["rm15"]
    assert gates.H in cat.rules["steane"]
    assert gates.T not in cat.rules["steane"]
    assert gates.K in cat.rules["five_prime"]
    assert gates.K not in cat.rules["rm15"]
    assert cat.derivations["five_prime"] == "five_qubit + K@0 Y@2 K@4"


def test_k_rule_fixup(cat):
    rule = cat.rules["five_prime"][gates.K]
    assert rule.phys_kind == gates.K
    assert rule.fixups == ((gates.Z, 2),)


def test_parse_rejects_bad_header():
    with pytest.raises(ValueError):
        cataloglib.parse_catalog("catalog-version 9\n")


def test_parse_rejects_unterminated_block(cat):
    text = cataloglib.dump_catalog(cat)
    truncated = text.rsplit("end", 1)[0]
    with pytest.raises(ValueError):
        cataloglib.parse_catalog(truncated)


def test_fingerprint_tracks_content(cat):
    text = cataloglib.dump_catalog(cat)
    mutated = text.replace("logical-z +ZZZZZZZ", "logical-z +IZZZZZZ", 1)
    # the mutated catalog is invalid (logical Z must anticommute with X)
    with pytest.raises(Exception):
        cataloglib.parse_catalog(mutated)
