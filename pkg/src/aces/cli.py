"""Command-line interface.

Subcommands: keygen, encrypt, decrypt, eval, refresh, inspect.  Exit codes:
0 on success, 1 on usage errors, 2 when a cryptographic guard refuses the
operation (noise budget, invalid parameters, unverifiable refresh).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import serial
from .channel import ArithmeticChannel, RandomSource
from .cipher import decrypt, encrypt
from .circuit import EvalKeys, RefreshPolicy, evaluate, parse_circuit
from .errors import AcesError, CircuitError, NoiseBudgetError, ParameterError
from .keygen import keygen
from .refresh import make_refreshable, publicly_refreshable, refresh_ct
from .rings import lift


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="aces", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate channel, public, and secret files")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bigN", type=int, required=True)
    p.add_argument("--k0", type=int, required=True)
    p.add_argument("--seed", required=True, help="hex seed for deterministic output")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--omega", type=int, default=1)
    p.add_argument("--u", default=None, help="comma-separated coefficients, low to high")

    p = sub.add_parser("encrypt", help="encrypt one plaintext residue")
    p.add_argument("--pub", required=True)
    p.add_argument("--channel", required=True)
    p.add_argument("--message", type=int, required=True)
    p.add_argument("--seed", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("decrypt", help="decrypt a ciphertext and print the residue")
    p.add_argument("--secret", required=True)
    p.add_argument("--channel", required=True)
    p.add_argument("--ct", required=True)

    p = sub.add_parser("eval", help="evaluate a circuit over ciphertexts")
    p.add_argument("--pub", required=True)
    p.add_argument("--channel", required=True)
    p.add_argument("--lambda-in-pub", action="store_true",
                   help="read the multiplication tensor from the public file (the default and only layout)")
    p.add_argument("--circuit", required=True)
    p.add_argument("--input", action="append", default=[], metavar="NAME=FILE")
    p.add_argument("--refresh", choices=("auto", "off"), default="auto")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", default="00", help="hex seed for refresh randomness")

    p = sub.add_parser("refresh", help="refresh a ciphertext to the fixed post-refresh level")
    p.add_argument("--pub", required=True)
    p.add_argument("--channel", required=True)
    p.add_argument("--ct", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", default="00")
    p.add_argument("--assume-refreshable", action="store_true",
                   help="skip the public refreshability check (caller asserts it)")

    p = sub.add_parser("inspect", help="print level and divisibility diagnostics")
    p.add_argument("--ct", required=True)
    p.add_argument("--channel", default=None)
    p.add_argument("--pub", default=None)
    return parser


def _load_channel(path) -> ArithmeticChannel:
    return serial.channel_from_dict(serial.load(path)).require_valid()


def _cmd_keygen(args) -> int:
    if args.u is not None:
        u = tuple(int(c) for c in args.u.split(","))
    else:
        u = tuple([-1] + [0] * (args.degree - 1) + [1])
    ch = ArithmeticChannel(
        p=args.p, q=args.q, omega=args.omega, u=u,
        n=args.n, big_n=args.bigN, k0=args.k0,
    ).require_valid()
    bundle = keygen(ch, RandomSource.from_hex(args.seed))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    serial.dump(serial.channel_to_dict(ch), out / "channel.json")
    serial.dump(serial.public_to_dict(bundle), out / "public.json")
    serial.dump(serial.secret_to_dict(bundle.secret), out / "secret.json")
    print(f"wrote channel.json, public.json, secret.json to {out}")
    return 0


def _cmd_encrypt(args) -> int:
    ch = _load_channel(args.channel)
    pk, _, _, _, _ = serial.public_from_dict(ch, serial.load(args.pub))
    ct = encrypt(pk, ch, args.message % ch.p, RandomSource.from_hex(args.seed))
    serial.dump(serial.ciphertext_to_dict(ct), args.out)
    print(f"wrote {args.out} (level {ct.level})")
    return 0


def _cmd_decrypt(args) -> int:
    ch = _load_channel(args.channel)
    sk = serial.secret_from_dict(ch, serial.load(args.secret))
    ct = serial.ciphertext_from_dict(ch, serial.load(args.ct))
    print(decrypt(sk, ch, ct))
    return 0


def _cmd_eval(args) -> int:
    ch = _load_channel(args.channel)
    pk, rep, tensor, refresher, locators = serial.public_from_dict(ch, serial.load(args.pub))
    keys = EvalKeys(ch, pk, tensor, refresher, locators)
    circuit = parse_circuit(Path(args.circuit).read_text(encoding="utf-8"))
    env = {}
    for item in args.input:
        name, _, path = item.partition("=")
        if not path:
            raise _UsageError(f"--input expects NAME=FILE, got {item!r}")
        env[name] = serial.ciphertext_from_dict(ch, serial.load(path))
    policy = RefreshPolicy(mode=args.refresh)
    outputs, report = evaluate(circuit, env, keys, policy, RandomSource.from_hex(args.seed))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, ct in outputs.items():
        serial.dump(serial.ciphertext_to_dict(ct), out / f"{name}.json")
    serial.dump(
        {
            "levels": report.levels,
            "refresh_events": [
                {"wire": w, "pre": pre, "post": post}
                for w, pre, post in report.refresh_events
            ],
            "failures": report.failures,
        },
        out / "report.json",
    )
    print(f"wrote {len(outputs)} output(s) and report.json to {out}")
    return 0


def _cmd_refresh(args) -> int:
    ch = _load_channel(args.channel)
    pk, rep, tensor, refresher, locators = serial.public_from_dict(ch, serial.load(args.pub))
    ct = serial.ciphertext_from_dict(ch, serial.load(args.ct))
    rng = RandomSource.from_hex(args.seed)
    if not args.assume_refreshable:
        checker = lambda c: publicly_refreshable(locators, ch, c)
        ct = make_refreshable(ct, checker, pk, ch, rng)
        if ct is None:
            raise NoiseBudgetError(
                "could not publicly verify refreshability; rerun with "
                "--assume-refreshable if you hold an external certificate"
            )
    fresh = refresh_ct(pk, ch, tensor, refresher, ct, rng)
    serial.dump(serial.ciphertext_to_dict(fresh), args.out)
    print(f"wrote {args.out} (level {fresh.level})")
    return 0


def _cmd_inspect(args) -> int:
    data = serial.load(args.ct)
    print(f"level: {data['level']}")
    print(f"vector parts: {len(data['c'])}")
    if args.channel and args.pub:
        ch = _load_channel(args.channel)
        _, rep, _, _, _ = serial.public_from_dict(ch, serial.load(args.pub))
        ct = serial.ciphertext_from_dict(ch, serial.load(args.ct))
        budget = ch.max_noise_level()
        print(f"decryptable: {'yes' if ct.level <= budget else 'no'} (budget {budget})")
        for j, cj in enumerate(ct.c):
            value = lift(ch.q, ch.eval(cj))
            prime = rep.prime_of(j)
            ok = "ok" if value % prime == 0 else "VIOLATED"
            print(f"slot {j}: eval {value}, factor {prime}: {ok}")
    return 0


_COMMANDS = {
    "keygen": _cmd_keygen,
    "encrypt": _cmd_encrypt,
    "decrypt": _cmd_decrypt,
    "eval": _cmd_eval,
    "refresh": _cmd_refresh,
    "inspect": _cmd_inspect,
}


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"missing file: {exc}", file=sys.stderr)
        return 1
    except (KeyError, TypeError, ValueError) as exc:
        print(f"malformed input file: {exc!r}", file=sys.stderr)
        return 1
    except (NoiseBudgetError, ParameterError) as exc:
        print(f"guard failure: {exc}", file=sys.stderr)
        return 2
    except CircuitError as exc:
        print(f"circuit error: {exc}", file=sys.stderr)
        return 1
    except AcesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
