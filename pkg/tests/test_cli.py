import json

from crrarith import seqcode
from crrarith.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_imul(capsys):
    assert run(capsys, "imul", "3", "5", "7") == (0, "105\n", "")
    assert run(capsys, "imul") == (0, "1\n", "")
    code, out, _ = run(capsys, "imul", "--table", "2", "3")
    assert code == 0
    payload = json.loads(out)
    assert payload["entries"]["0,2"] == "6"


def test_imul_hex_and_json(capsys):
    assert run(capsys, "--format", "hex", "imul", "0xff", "2") == (0, "1fe\n", "")
    code, out, _ = run(capsys, "--format", "json", "imul", "6", "7")
    assert json.loads(out) == {"value": "42"}


def test_imul_parse_failure(capsys):
    code, _, err = run(capsys, "imul", "3", "x5")
    assert code == 2 and err


def test_powm(capsys):
    assert run(capsys, "powm", "2", "10", "11")[:2] == (0, "1\n")
    assert run(capsys, "powm", "--path", "crr", "2", "10", "11")[:2] == (0, "1\n")
    assert run(capsys, "powm", "--path", "composite", "2", "10", "11")[:2] == (0, "1\n")
    assert run(capsys, "powm", "--path", "oracle", "2", "10", "11")[:2] == (0, "1\n")
    assert run(capsys, "powm", "6", "2", "12")[:2] == (0, "0\n")
    code, _, err = run(capsys, "powm", "11", "2", "11")
    assert code == 2 and err


def test_powm_paths_agree(capsys):
    import random

    rng = random.Random(3)
    for _ in range(8):
        m = rng.choice([97, 101, 997, 720, 1024, 5040])
        a, r = rng.randrange(0, m), rng.randrange(0, 3 * m)
        outs = set()
        for path in ("composite", "oracle") + (("crr",) if m in (97, 101, 997) else ()):
            code, out, _ = run(capsys, "powm", "--path", path, str(a), str(r), str(m))
            assert code == 0
            outs.add(out)
        assert len(outs) == 1


def test_crr_commands(capsys):
    assert run(capsys, "crr", "encode", "--basis", "3,5", "7")[:2] == (0, "1,2\n")
    assert run(capsys, "crr", "decode", "--basis", "3,5", "1,2")[:2] == (0, "7\n")
    code, out, _ = run(capsys, "crr", "trace", "--basis", "3,5", "1,2")
    assert code == 0
    lines = [json.loads(line) for line in out.splitlines()]
    assert all(line["b"] in (-1, 0, 1, 2, None) for line in lines)
    assert [line["b"] for line in lines[:3]] == [1, 1, 1]  # bits of 7
    assert all("xi_num" in line and "xi_prec" in line for line in lines)


def test_crr_usage_errors(capsys):
    assert run(capsys, "crr", "encode", "--basis", "2,5", "7")[0] == 2
    assert run(capsys, "crr", "encode", "--basis", "5,5", "7")[0] == 2
    assert run(capsys, "crr", "encode", "--basis", "9,5", "7")[0] == 2
    assert run(capsys, "crr", "decode", "--basis", "3,5", "4,1")[0] == 2
    assert run(capsys, "crr", "trace", "--basis", "3,5", "--precision", "3", "1,2")[0] == 2


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", "--bits", "512", "--count", "8", "--parallel", "2", "--seed", "5")
    assert code == 0
    payload = json.loads(out)
    assert payload["equal"] is True
    assert payload["parallel_identical"] is True
    assert {"imul_seconds", "oracle_seconds", "speedup"} <= payload.keys()


def test_bench_deterministic(capsys):
    a = run(capsys, "--format", "json", "imul", "123456789", "987654321")
    b = run(capsys, "--format", "json", "imul", "123456789", "987654321")
    assert a == b


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest", "--seed", "11")
    assert code == 0 and "selftest ok" in out


def test_file_io(tmp_path, capsys):
    infile, outfile = tmp_path / "in.bin", tmp_path / "out.bin"
    seqcode.write_file(infile, [12, 10])
    code, out, _ = run(capsys, "imul", "--in", str(infile), "--out", str(outfile))
    assert code == 0 and out == "120\n"
    assert seqcode.read_file(outfile) == [1, 12, 120]
    code, _, err = run(capsys, "imul", "--in", str(infile), "5")
    assert code == 2 and err
