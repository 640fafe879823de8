"""Tests for circuit parsing, the evaluator, serialization, and the CLI."""

import json
import subprocess
import sys

import pytest

from aces import serial
from aces.channel import RandomSource
from aces.cipher import decrypt, encrypt
from aces.circuit import (
    EvalKeys,
    RefreshPolicy,
    eval_plain,
    evaluate,
    parse_circuit,
)
from aces.cli import main
from aces.errors import CircuitError, NoiseBudgetError
from aces.refresh import secret_refresh_checker

# -- parsing ----------------------------------------------------------------


def test_parse_identity_circuit():
    c = parse_circuit("in a\nout a")
    assert c.inputs == ("a",)
    assert c.gates == ()
    assert c.outputs == ("a",)


def test_parse_one_gate_adder():
    c = parse_circuit("in a b\nt = add a b\nout t")
    assert len(c.gates) == 1
    assert c.gates[0].op == "add"


def test_parse_comments_and_blanks():
    c = parse_circuit("# header\n\nin a  # trailing\nt = mul a a\nout t\n")
    assert c.gates[0].op == "mul"


def test_parse_undeclared_operand_reports_line():
    with pytest.raises(CircuitError) as err:
        parse_circuit("t = add a a")
    assert "line 1" in str(err.value)


def test_parse_duplicate_name():
    with pytest.raises(CircuitError) as err:
        parse_circuit("in a a")
    assert "duplicate" in str(err.value)


def test_parse_requires_output():
    with pytest.raises(CircuitError):
        parse_circuit("in a\nt = add a a")


def test_parse_malformed_line():
    with pytest.raises(CircuitError) as err:
        parse_circuit("in a\nt = xor a a\nout t")
    assert "line 2" in str(err.value)


# -- evaluation -------------------------------------------------------------


def _secret_policy(bundle):
    return RefreshPolicy(
        mode="auto", checker=secret_refresh_checker(bundle.secret, bundle.channel)
    )


def test_evaluate_identity_passthrough(desk_bundle, rng):
    ch = desk_bundle.channel
    keys = EvalKeys.from_bundle(desk_bundle)
    ct = encrypt(desk_bundle.public, ch, 1, rng)
    outputs, report = evaluate(parse_circuit("in a\nout a"), {"a": ct}, keys)
    assert outputs["a"] == ct
    assert report.refresh_events == []


def test_evaluate_single_add(desk_bundle, rng):
    ch = desk_bundle.channel
    keys = EvalKeys.from_bundle(desk_bundle)
    circuit = parse_circuit("in a b\nt = add a b\nout t")
    for m1 in range(ch.p):
        for m2 in range(ch.p):
            env = {
                "a": encrypt(desk_bundle.public, ch, m1, rng),
                "b": encrypt(desk_bundle.public, ch, m2, rng),
            }
            outputs, _ = evaluate(circuit, env, keys)
            assert decrypt(desk_bundle.secret, ch, outputs["t"]) == (m1 + m2) % ch.p


def test_evaluate_rejects_unbound_inputs(desk_bundle):
    keys = EvalKeys.from_bundle(desk_bundle)
    with pytest.raises(CircuitError, match="unbound"):
        evaluate(parse_circuit("in a\nout a"), {}, keys)


DEPTH3 = "in a\nt1 = mul a a\nt2 = mul t1 t1\nt3 = mul t2 t2\nout t3"


def test_mul_chain_fails_without_refresh(desk_bundle, rng):
    keys = EvalKeys.from_bundle(desk_bundle)
    env = {"a": encrypt(desk_bundle.public, desk_bundle.channel, 1, rng)}
    with pytest.raises(NoiseBudgetError, match="t3"):
        evaluate(parse_circuit(DEPTH3), env, keys, RefreshPolicy(mode="off"), rng)


def test_mul_chain_succeeds_with_refresh(desk_bundle, rng):
    ch = desk_bundle.channel
    keys = EvalKeys.from_bundle(desk_bundle)
    env = {"a": encrypt(desk_bundle.public, ch, 1, rng)}
    outputs, report = evaluate(
        parse_circuit(DEPTH3), env, keys, _secret_policy(desk_bundle), rng
    )
    assert len(report.refresh_events) >= 1
    for _, _, post in report.refresh_events:
        assert post == 60
    assert decrypt(desk_bundle.secret, ch, outputs["t3"]) == 1
    assert outputs["t3"].level <= ch.max_noise_level()


def _random_circuit(rng, n_inputs, n_gates):
    names = [f"i{k}" for k in range(n_inputs)]
    lines = ["in " + " ".join(names)]
    for g in range(n_gates):
        op = "add" if rng.below(2) else "mul"
        left = names[rng.below(len(names))]
        right = names[rng.below(len(names))]
        out = f"g{g}"
        lines.append(f"{out} = {op} {left} {right}")
        names.append(out)
    lines.append(f"out {names[-1]}")
    return parse_circuit("\n".join(lines))


def test_random_circuits_match_plain_evaluation(desk_bundle):
    ch = desk_bundle.channel
    keys = EvalKeys.from_bundle(desk_bundle)
    policy = _secret_policy(desk_bundle)
    rng = RandomSource(b"random-circuits")
    for trial in range(8):
        circuit = _random_circuit(rng, n_inputs=3, n_gates=20)
        plain = {name: rng.below(ch.p) for name in circuit.inputs}
        env = {
            name: encrypt(desk_bundle.public, ch, m, rng)
            for name, m in plain.items()
        }
        outputs, report = evaluate(circuit, env, keys, policy, rng)
        want = eval_plain(circuit, plain, ch.p)
        for name, ct in outputs.items():
            assert ct.level <= ch.max_noise_level()
            assert decrypt(desk_bundle.secret, ch, ct) == want[name]


# -- serialization ----------------------------------------------------------


def test_channel_roundtrip(desk_channel, tmp_path):
    path = tmp_path / "channel.json"
    serial.dump(serial.channel_to_dict(desk_channel), path)
    assert serial.channel_from_dict(serial.load(path)) == desk_channel


def test_ciphertext_roundtrip(desk_bundle, rng, tmp_path):
    ch = desk_bundle.channel
    ct = encrypt(desk_bundle.public, ch, 1, rng)
    path = tmp_path / "ct.json"
    serial.dump(serial.ciphertext_to_dict(ct), path)
    assert serial.ciphertext_from_dict(ch, serial.load(path)) == ct
    data = serial.load(path)
    assert isinstance(data["level"], int)
    assert all(isinstance(c, str) for c in data["cprime"])


def test_public_bundle_roundtrip(desk_bundle, tmp_path):
    ch = desk_bundle.channel
    path = tmp_path / "public.json"
    serial.dump(serial.public_to_dict(desk_bundle), path)
    pk, rep, tensor, refresher, locators = serial.public_from_dict(ch, serial.load(path))
    assert pk == desk_bundle.public
    assert rep == desk_bundle.repartition
    assert tensor == desk_bundle.tensor
    assert refresher == desk_bundle.refresher
    assert locators == desk_bundle.locators
    assert "secret" not in serial.load(path)


def test_secret_roundtrip(desk_bundle, tmp_path):
    ch = desk_bundle.channel
    path = tmp_path / "secret.json"
    serial.dump(serial.secret_to_dict(desk_bundle.secret), path)
    assert serial.secret_from_dict(ch, serial.load(path)) == desk_bundle.secret


# -- command-line interface -------------------------------------------------


@pytest.fixture()
def cli_keys(tmp_path):
    out = tmp_path / "keys"
    code = main([
        "keygen", "--p", "2", "--q", "15015", "--degree", "4", "--n", "3",
        "--bigN", "2", "--k0", "1", "--seed", "00ff", "--out", str(out),
    ])
    assert code == 0
    return out


def test_cli_keygen_writes_three_files(cli_keys):
    for name in ("channel.json", "public.json", "secret.json"):
        assert (cli_keys / name).exists()
    assert "secret" not in json.loads((cli_keys / "public.json").read_text())


def test_cli_roundtrip(cli_keys, tmp_path, capsys):
    ct = tmp_path / "m.json"
    assert main([
        "encrypt", "--pub", str(cli_keys / "public.json"),
        "--channel", str(cli_keys / "channel.json"),
        "--message", "1", "--seed", "0a", "--out", str(ct),
    ]) == 0
    capsys.readouterr()
    assert main([
        "decrypt", "--secret", str(cli_keys / "secret.json"),
        "--channel", str(cli_keys / "channel.json"), "--ct", str(ct),
    ]) == 0
    assert capsys.readouterr().out.strip() == "1"


def test_cli_eval_and_inspect(cli_keys, tmp_path, capsys):
    circ = tmp_path / "circ.txt"
    circ.write_text("in a b\nt = mul a b\nr = add t a\nout r\n")
    for name, seed in (("a", "01"), ("b", "02")):
        assert main([
            "encrypt", "--pub", str(cli_keys / "public.json"),
            "--channel", str(cli_keys / "channel.json"),
            "--message", "1", "--seed", seed, "--out", str(tmp_path / f"{name}.json"),
        ]) == 0
    out = tmp_path / "evalout"
    assert main([
        "eval", "--pub", str(cli_keys / "public.json"),
        "--channel", str(cli_keys / "channel.json"), "--lambda-in-pub",
        "--circuit", str(circ),
        "--input", f"a={tmp_path / 'a.json'}", "--input", f"b={tmp_path / 'b.json'}",
        "--refresh", "auto", "--out", str(out),
    ]) == 0
    assert (out / "r.json").exists() and (out / "report.json").exists()
    capsys.readouterr()
    assert main([
        "decrypt", "--secret", str(cli_keys / "secret.json"),
        "--channel", str(cli_keys / "channel.json"), "--ct", str(out / "r.json"),
    ]) == 0
    assert capsys.readouterr().out.strip() == "0"  # (1*1 + 1) mod 2
    assert main(["inspect", "--ct", str(out / "r.json"),
                 "--channel", str(cli_keys / "channel.json"),
                 "--pub", str(cli_keys / "public.json")]) == 0
    assert "level: 52" in capsys.readouterr().out


def test_cli_eval_budget_failure_is_exit_2(cli_keys, tmp_path):
    circ = tmp_path / "deep.txt"
    circ.write_text("in a\nt1 = mul a a\nt2 = mul t1 t1\nt3 = mul t2 t2\nout t3\n")
    assert main([
        "encrypt", "--pub", str(cli_keys / "public.json"),
        "--channel", str(cli_keys / "channel.json"),
        "--message", "1", "--seed", "03", "--out", str(tmp_path / "a.json"),
    ]) == 0
    code = main([
        "eval", "--pub", str(cli_keys / "public.json"),
        "--channel", str(cli_keys / "channel.json"),
        "--circuit", str(circ), "--input", f"a={tmp_path / 'a.json'}",
        "--refresh", "off", "--out", str(tmp_path / "out"),
    ])
    assert code == 2


def test_cli_usage_error_is_exit_1():
    assert main(["encrypt", "--message", "1"]) == 1
    assert main(["bogus"]) == 1


def test_cli_missing_file_is_exit_1(tmp_path):
    assert main([
        "decrypt", "--secret", str(tmp_path / "nope.json"),
        "--channel", str(tmp_path / "nope.json"), "--ct", str(tmp_path / "nope.json"),
    ]) == 1


def test_cli_wrong_file_shape_is_exit_1(cli_keys):
    # a public bundle is not a ciphertext
    assert main(["inspect", "--ct", str(cli_keys / "public.json")]) == 1


def test_cli_decrypt_past_budget_is_exit_2(cli_keys, tmp_path):
    ch = serial.channel_from_dict(serial.load(cli_keys / "channel.json"))
    data = {
        "c": [["0"] * ch.degree for _ in range(ch.n)],
        "cprime": ["1"] + ["0"] * (ch.degree - 1),
        "level": ch.max_noise_level() + 1,
    }
    path = tmp_path / "hot.json"
    serial.dump(data, path)
    assert main([
        "decrypt", "--secret", str(cli_keys / "secret.json"),
        "--channel", str(cli_keys / "channel.json"), "--ct", str(path),
    ]) == 2


def test_cli_refresh_with_assertion_flag(cli_keys, tmp_path, capsys):
    ch = serial.channel_from_dict(serial.load(cli_keys / "channel.json"))
    sk = serial.secret_from_dict(ch, serial.load(cli_keys / "secret.json"))
    pk, _, _, _, _ = serial.public_from_dict(ch, serial.load(cli_keys / "public.json"))
    # find a seed whose encryption of 1 is refreshable, then refresh via CLI
    seed = 0
    while True:
        rng = RandomSource(seed.to_bytes(2, "big"))
        ct = encrypt(pk, ch, 1, rng)
        if secret_refresh_checker(sk, ch)(ct):
            break
        seed += 1
    src = tmp_path / "refreshable.json"
    serial.dump(serial.ciphertext_to_dict(ct), src)
    out = tmp_path / "fresh.json"
    assert main([
        "refresh", "--pub", str(cli_keys / "public.json"),
        "--channel", str(cli_keys / "channel.json"),
        "--ct", str(src), "--out", str(out), "--seed", "0abc",
        "--assume-refreshable",
    ]) == 0
    fresh = serial.ciphertext_from_dict(ch, serial.load(out))
    assert fresh.level == 60
    assert decrypt(sk, ch, fresh) == 1


def test_cli_refresh_unverifiable_is_exit_2(cli_keys, tmp_path):
    ct = tmp_path / "ct.json"
    assert main([
        "encrypt", "--pub", str(cli_keys / "public.json"),
        "--channel", str(cli_keys / "channel.json"),
        "--message", "1", "--seed", "77", "--out", str(ct),
    ]) == 0
    # a random ciphertext will not decompose over the published database
    assert main([
        "refresh", "--pub", str(cli_keys / "public.json"),
        "--channel", str(cli_keys / "channel.json"),
        "--ct", str(ct), "--out", str(tmp_path / "fresh.json"), "--seed", "00",
    ]) == 2


def test_cli_bare_inspect(cli_keys, tmp_path, capsys):
    ct = tmp_path / "ct.json"
    assert main([
        "encrypt", "--pub", str(cli_keys / "public.json"),
        "--channel", str(cli_keys / "channel.json"),
        "--message", "0", "--seed", "55", "--out", str(ct),
    ]) == 0
    capsys.readouterr()
    assert main(["inspect", "--ct", str(ct)]) == 0
    assert "level: 4" in capsys.readouterr().out


def test_cli_outputs_are_deterministic(tmp_path):
    outs = []
    for run in ("one", "two"):
        out = tmp_path / run
        assert main([
            "keygen", "--p", "2", "--q", "105", "--degree", "2", "--n", "2",
            "--bigN", "1", "--k0", "1", "--seed", "beef", "--out", str(out),
        ]) == 0
        assert main([
            "encrypt", "--pub", str(out / "public.json"),
            "--channel", str(out / "channel.json"),
            "--message", "1", "--seed", "cafe", "--out", str(out / "ct.json"),
        ]) == 0
        outs.append(out)
    for name in ("channel.json", "public.json", "secret.json", "ct.json"):
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()


def test_cli_entry_point_runs_as_module(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "aces.cli", "keygen", "--p", "2", "--q", "105",
         "--degree", "2", "--n", "2", "--bigN", "1", "--k0", "1",
         "--seed", "01", "--out", str(tmp_path / "k")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "k" / "public.json").exists()
