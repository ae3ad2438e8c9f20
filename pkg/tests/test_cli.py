"""CLI surface: commands, file handling, exit codes, determinism."""

import io
import itertools
import random

import pytest

from qpkc.bitlinalg import BitVec, vec_mat_mul
from qpkc.cli import main
from qpkc.errors import DecodingFailure
from qpkc.gf2m import FieldParams
from qpkc.mceliece import decrypt, keygen, parse_public_key
from qpkc.qsim import state_from_text
from qpkc.selftest import flip_parity_bit, run_selftest

HALF = "0.7071067811865476"


@pytest.fixture()
def keyfiles(tmp_path):
    pub = tmp_path / "key.pub"
    priv = tmp_path / "key.priv"
    rc = main(
        ["keygen", "--m", "4", "--n", "16", "--t", "2", "--seed", "1",
         "--pub", str(pub), "--priv", str(priv)]
    )
    assert rc == 0
    return pub, priv


def run_cli(capsys, argv):
    rc = main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


class TestKeygen:
    def test_writes_files_and_prints_summary(self, tmp_path, capsys):
        pub = tmp_path / "a.pub"
        priv = tmp_path / "a.priv"
        rc, out, err = run_cli(
            capsys,
            ["keygen", "--m", "4", "--n", "16", "--t", "2", "--seed", "1",
             "--pub", str(pub), "--priv", str(priv)],
        )
        assert rc == 0 and err == ""
        assert "k=8" in out and "fingerprint=sha256:" in out
        assert pub.read_text().startswith("QPKC-PUB v1\n")
        assert priv.read_text().startswith("QPKC-PRIV v1\n")

    def test_same_seed_same_fingerprint(self, tmp_path, capsys):
        outs = []
        for name in ("x", "y"):
            rc, out, _ = run_cli(
                capsys,
                ["keygen", "--m", "4", "--n", "16", "--t", "2", "--seed", "5",
                 "--pub", str(tmp_path / f"{name}.pub"), "--priv", str(tmp_path / f"{name}.priv")],
            )
            assert rc == 0
            outs.append(out)
        assert outs[0] == outs[1]

    def test_missing_seed_is_usage_error(self, tmp_path, capsys):
        rc, _, err = run_cli(
            capsys,
            ["keygen", "--m", "4", "--n", "16", "--t", "2",
             "--pub", str(tmp_path / "p"), "--priv", str(tmp_path / "q")],
        )
        assert rc == 1 and "--seed" in err

    def test_bad_parameters_are_data_error(self, tmp_path, capsys):
        rc, _, err = run_cli(
            capsys,
            ["keygen", "--m", "4", "--n", "8", "--t", "2", "--seed", "1",
             "--pub", str(tmp_path / "p"), "--priv", str(tmp_path / "q")],
        )
        assert rc == 2 and "error:" in err


class TestEncryptDecrypt:
    def test_round_trip(self, keyfiles, capsys):
        pub, priv = keyfiles
        msg = "01001100"
        rc, out, _ = run_cli(
            capsys, ["encrypt", "--pub", str(pub), "--msg", msg, "--seed", "7"]
        )
        assert rc == 0
        ct = out.strip()
        assert len(ct) == 16
        rc, out, _ = run_cli(capsys, ["decrypt", "--priv", str(priv), "--ct", ct])
        assert rc == 0 and out.strip() == msg

    def test_zero_message_has_weight_t(self, keyfiles, capsys):
        pub, _ = keyfiles
        rc, out, _ = run_cli(
            capsys, ["encrypt", "--pub", str(pub), "--msg", "0" * 8, "--seed", "3"]
        )
        assert rc == 0 and out.strip().count("1") == 2

    def test_encrypt_deterministic_under_seed(self, keyfiles, capsys):
        pub, _ = keyfiles
        argv = ["encrypt", "--pub", str(pub), "--msg", "10101010", "--seed", "11"]
        outs = {run_cli(capsys, argv)[1] for _ in range(2)}
        assert len(outs) == 1

    def test_malformed_bits_is_usage_error(self, keyfiles, capsys):
        pub, _ = keyfiles
        rc, _, err = run_cli(
            capsys, ["encrypt", "--pub", str(pub), "--msg", "01x0", "--seed", "3"]
        )
        assert rc == 1

    def test_wrong_length_is_data_error(self, keyfiles, capsys):
        pub, _ = keyfiles
        rc, _, err = run_cli(
            capsys, ["encrypt", "--pub", str(pub), "--msg", "0101", "--seed", "3"]
        )
        assert rc == 2 and "length" in err

    def test_undecodable_ciphertext_is_crypto_error(self, keyfiles, capsys):
        pub, priv = keyfiles
        pk = parse_public_key(pub.read_text())
        _, sk = keygen(FieldParams(4, 0x13), 16, 2, seed=1)
        codeword = vec_mat_mul(BitVec(8, 0b10010110), pk.Gpub)
        bad = None
        for posns in itertools.combinations(range(16), 3):
            c = codeword ^ BitVec.from_support(16, posns)
            try:
                decrypt(sk, c)
            except DecodingFailure:
                bad = c
                break
        assert bad is not None
        rc, _, err = run_cli(
            capsys, ["decrypt", "--priv", str(priv), "--ct", bad.to_string()]
        )
        assert rc == 3 and "error:" in err

    def test_corrupted_key_file_is_data_error(self, keyfiles, tmp_path, capsys):
        pub, _ = keyfiles
        lines = pub.read_text().splitlines()
        row = lines[2]
        lines[2] = ("1" if row[0] == "0" else "0") + row[1:]
        broken = tmp_path / "broken.pub"
        broken.write_text("\n".join(lines) + "\n")
        rc, _, err = run_cli(
            capsys, ["encrypt", "--pub", str(broken), "--msg", "0" * 8, "--seed", "1"]
        )
        assert rc == 2

    def test_missing_file_is_data_error(self, tmp_path, capsys):
        rc, _, err = run_cli(
            capsys,
            ["encrypt", "--pub", str(tmp_path / "nope.pub"), "--msg", "0" * 8, "--seed", "1"],
        )
        assert rc == 2


class TestQdemo:
    BASE = ["qdemo", "--m", "4", "--n", "16", "--t", "2", "--seed", "9"]

    def test_two_term_demo(self, capsys):
        rc, out, _ = run_cli(
            capsys, self.BASE + ["--terms", f"{HALF}:00000001,{HALF}:00000010"]
        )
        assert rc == 0
        assert "fidelity=1.000000000000000" in out
        assert "alice encode" in out and "bob measured syn=" in out
        assert "p=1.000000000000000" in out

    def test_single_basis_term(self, capsys):
        rc, out, _ = run_cli(capsys, self.BASE + ["--terms", "1:10000000"])
        assert rc == 0 and "fidelity=1.000000000000000" in out

    def test_deterministic_modulo_timing(self, capsys):
        def run():
            rc, out, _ = run_cli(capsys, self.BASE + ["--terms", "1:10000000"])
            assert rc == 0
            return "\n".join(l for l in out.splitlines() if not l.startswith("timing "))

        assert run() == run()

    def test_unnormalized_terms_rejected_before_compute(self, capsys):
        rc, _, err = run_cli(
            capsys, self.BASE + ["--terms", "1:00000001,1:00000010"]
        )
        assert rc == 2 and "not normalized" in err

    def test_bad_term_syntax_is_usage_error(self, capsys):
        rc, _, err = run_cli(capsys, self.BASE + ["--terms", "1;00000001"])
        assert rc == 1

    def test_wrong_term_width_is_data_error(self, capsys):
        rc, _, err = run_cli(capsys, self.BASE + ["--terms", "1:0000"])
        assert rc == 2

    def test_complex_amplitudes(self, capsys):
        rc, out, _ = run_cli(
            capsys, self.BASE + ["--terms", f"{HALF}:00000001,{HALF}j:00000010"]
        )
        assert rc == 0 and "fidelity=1.000000000000000" in out

    def test_state_files_round_trip(self, tmp_path, capsys):
        state_in = tmp_path / "in.qstate"
        state_in.write_text(
            "QSTATE v1\n"
            "layout: msg:8\n"
            f"{HALF} 0 00000001\n"
            f"0 {HALF} 00000010\n"
        )
        cipher_out = tmp_path / "cipher.qstate"
        final_out = tmp_path / "out.qstate"
        rc, out, _ = run_cli(
            capsys,
            self.BASE
            + ["--state-in", str(state_in), "--dump-cipher", str(cipher_out),
               "--dump-output", str(final_out)],
        )
        assert rc == 0 and "fidelity=1.000000000000000" in out
        cipher = state_from_text(cipher_out.read_text())
        assert cipher.layout.describe() == "code:16" and cipher.term_count() == 2
        final = state_from_text(final_out.read_text())
        assert final.layout.describe() == "msg:8"
        from qpkc.qsim import fidelity

        assert fidelity(final, state_from_text(state_in.read_text())) >= 1 - 1e-12

    def test_bad_state_file_is_data_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.qstate"
        bad.write_text("QSTATE v9\n")
        rc, _, err = run_cli(capsys, self.BASE + ["--state-in", str(bad)])
        assert rc == 2

    def test_terms_or_state_required(self, capsys):
        rc, _, err = run_cli(capsys, self.BASE)
        assert rc == 2 and "required" in err


class TestSelftest:
    def test_quick_passes_within_budget(self, capsys):
        import time

        t0 = time.perf_counter()
        rc, out, _ = run_cli(capsys, ["selftest", "--level", "quick"])
        elapsed = time.perf_counter() - t0
        assert rc == 0
        assert "ok goppa.decode-exhaustive" in out
        assert "FAIL" not in out
        assert elapsed < 10.0

    def test_fault_injection_names_the_invariant(self):
        buf = io.StringIO()
        rc = run_selftest("quick", stream=buf, fault=flip_parity_bit)
        text = buf.getvalue()
        assert rc != 0
        assert "FAIL goppa.parity" in text

    def test_unknown_level_rejected(self, capsys):
        rc, _, err = run_cli(capsys, ["selftest", "--level", "medium"])
        assert rc == 1


class TestUsage:
    def test_no_command_is_usage_error(self, capsys):
        rc, _, err = run_cli(capsys, [])
        assert rc == 1

    def test_help_exits_zero(self, capsys):
        rc, out, _ = run_cli(capsys, ["--help"])
        assert rc == 0 and "keygen" in out
