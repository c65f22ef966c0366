import re

import pytest

from nuconcat import catalog as cataloglib
from nuconcat import cli, codes
from nuconcat.codes import LookupDecoder


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def strip_timing(text):
    return re.sub(r"^timing_s: .*$", "", text, flags=re.M)


def test_codes_list(capsys):
    code, out, _ = run(capsys, "codes", "list")
    assert code == 0
    for name in ("steane", "rm15", "five_qubit", "five_prime"):
        assert name in out


def test_codes_info(capsys):
    code, out, _ = run(capsys, "codes", "info", "five_prime", "--format", "machine")
    assert code == 0
    assert "derivation: five_qubit + K@0 Y@2 K@4" in out
    assert "gate: K" in out
    assert "verified: true" in out


def test_codes_info_rm15_transversal_set(capsys):
    code, out, _ = run(capsys, "codes", "info", "rm15", "--format", "machine")
    assert code == 0
    assert "gate: T" in out and "gate: CCZ" in out
    assert "d: 3" in out and "n: 15" in out


def test_codes_dump_round_trip(capsys, tmp_path):
    path = tmp_path / "catalog.txt"
    code, out, _ = run(capsys, "codes", "dump", "--out", str(path))
    assert code == 0
    # the dumped file is the exact catalog serialisation
    assert path.read_text() == cataloglib.dump_catalog(cataloglib.default_catalog())
    # and reloading it reproduces the same results
    code, out2, _ = run(capsys, "distance", "--layout", "code49",
                        "--catalog", str(path), "--format", "machine")
    assert code == 0
    assert "overall_distance: 5" in out2
    fp = cataloglib.default_catalog().fingerprint()
    assert f"catalog_fingerprint: {fp}" in out2


@pytest.mark.parametrize("layout,expected", [
    ("uniform:steane:rm15", 9), ("code49", 5), ("code75", 9), ("code73", 9),
])
def test_distance_command(capsys, layout, expected):
    code, out, _ = run(capsys, "distance", "--layout", layout, "--format", "machine")
    assert code == 0
    assert f"overall_distance: {expected}" in out


def test_distance_usage_error(capsys):
    code, _, err = run(capsys, "distance", "--layout", "nope:steane")
    assert code == 2
    assert "usage error" in err


def test_gadget_command_writes_circuit(capsys, tmp_path):
    out_path = tmp_path / "t49.circuit"
    code, out, _ = run(capsys, "gadget", "--layout", "code49", "--gate", "T",
                       "--circuit-out", str(out_path), "--format", "machine")
    assert code == 0
    assert "passed: true" in out
    text = out_path.read_text()
    assert text.startswith("circuit T")
    assert "T_DAG" in text


def test_gadget_refusal_exit_code(capsys):
    code, _, err = run(capsys, "gadget", "--layout", "nonuniform:five_qubit:rm15",
                       "--gate", "T")
    assert code == 1
    assert "K_DAG" in err and "rm15" in err


def test_gadget_z_theta(capsys):
    code, out, _ = run(capsys, "gadget", "--layout", "code49", "--gate", "Z_THETA",
                       "--theta", "pi/4", "--format", "machine")
    assert code == 0
    assert "label: T" in out


def test_ftcheck_budget_refusal(capsys):
    code, _, err = run(capsys, "ftcheck", "--layout", "code49", "--gates", "T",
                       "--pairs", "--budget", "10")
    assert code == 3
    assert "budget" in err


def test_ftcheck_single_fault(capsys):
    code, out, _ = run(capsys, "ftcheck", "--layout", "code49", "--gates", "T",
                       "--format", "machine")
    assert code == 0
    assert "single_fault_failures: 0" in out


def test_replay_witness(capsys, tmp_path):
    out_path = tmp_path / "t49.circuit"
    run(capsys, "gadget", "--layout", "code49", "--gate", "T",
        "--circuit-out", str(out_path))
    x0 = "X" + "I" * 48
    x1 = "IX" + "I" * 47
    code, out, _ = run(capsys, "replay", "--layout", "code49",
                       "--circuit", str(out_path),
                       f"--fault=-1:{x0}", f"--fault=-1:{x1}",
                       "--format", "machine")
    assert code == 1  # the recorded pair is uncorrectable
    assert "uncorrectable: true" in out


def test_replay_single_fault_correctable(capsys, tmp_path):
    out_path = tmp_path / "t49.circuit"
    run(capsys, "gadget", "--layout", "code49", "--gate", "T",
        "--circuit-out", str(out_path))
    code, out, _ = run(capsys, "replay", "--layout", "code49",
                       "--circuit", str(out_path),
                       "--fault=-1:" + "X" + "I" * 48, "--format", "machine")
    assert code == 0
    assert "uncorrectable: false" in out


def test_machine_output_deterministic(capsys):
    _, out1, _ = run(capsys, "distance", "--layout", "code49", "--format", "machine")
    _, out2, _ = run(capsys, "distance", "--layout", "code49", "--format", "machine")
    assert strip_timing(out1) == strip_timing(out2)


def test_mutation_guard(capsys, monkeypatch):
    """Corrupting the decoder changes the fault-campaign outcome."""
    clean_code, clean_out, _ = run(capsys, "ftcheck", "--layout", "code49",
                                   "--gates", "T", "--format", "machine")
    assert clean_code == 0

    real_build = codes.build_decoder.__wrapped__

    def corrupted(code):
        decoder = real_build(code)
        # push every nonzero correction into the wrong logical coset
        table = {s: (corr if s == 0 else corr * code.logical_z)
                 for s, corr in decoder.table.items()}
        return LookupDecoder(code, table)

    monkeypatch.setattr("nuconcat.faults.build_decoder", corrupted)
    bad_code, bad_out, _ = run(capsys, "ftcheck", "--layout", "code49",
                               "--gates", "T", "--format", "machine")
    assert bad_code == 1
    assert strip_timing(bad_out) != strip_timing(clean_out)
    assert "single_fault_failures: 0" not in bad_out
