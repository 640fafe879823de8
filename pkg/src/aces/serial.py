"""JSON wire formats.

All residue-sized integers are rendered as decimal strings so files stay
width-agnostic; structural integers (levels, indices, dimensions) stay
plain.  Field order is fixed, which makes output files byte-stable under a
fixed seed.  The secret key always lives in its own file and is never
written by the public-material exporters.
"""

from __future__ import annotations

import json

from .channel import ArithmeticChannel
from .cipher import Ciphertext
from .errors import ParameterError
from .keygen import KeyBundle, ProductTensor, PublicKey, Refresher, SecretKey
from .refresh import LocatorEntry
from .rings import Repartition, RingPoly

__all__ = [
    "channel_to_dict",
    "channel_from_dict",
    "ciphertext_to_dict",
    "ciphertext_from_dict",
    "public_to_dict",
    "public_from_dict",
    "secret_to_dict",
    "secret_from_dict",
    "dump",
    "load",
]


def _poly_out(poly: RingPoly) -> list[str]:
    return [str(c) for c in poly.coeffs]


def _poly_in(ch: ArithmeticChannel, coeffs) -> RingPoly:
    return ch.poly([int(c) for c in coeffs])


def channel_to_dict(ch: ArithmeticChannel) -> dict:
    return {
        "p": str(ch.p),
        "q": str(ch.q),
        "omega": str(ch.omega),
        "u": [str(c) for c in ch.u],
        "n": str(ch.n),
        "N": str(ch.big_n),
        "k0": str(ch.k0),
    }


def channel_from_dict(data: dict) -> ArithmeticChannel:
    return ArithmeticChannel(
        p=int(data["p"]),
        q=int(data["q"]),
        omega=int(data["omega"]),
        u=tuple(int(c) for c in data["u"]),
        n=int(data["n"]),
        big_n=int(data["N"]),
        k0=int(data["k0"]),
    )


def ciphertext_to_dict(ct: Ciphertext) -> dict:
    return {
        "c": [_poly_out(part) for part in ct.c],
        "cprime": _poly_out(ct.cprime),
        "level": ct.level,
    }


def ciphertext_from_dict(ch: ArithmeticChannel, data: dict) -> Ciphertext:
    return Ciphertext(
        tuple(_poly_in(ch, part) for part in data["c"]),
        _poly_in(ch, data["cprime"]),
        int(data["level"]),
    )


def _locator_to_dict(entry: LocatorEntry) -> dict:
    return {
        "vec": [str(v) for v in entry.vec],
        "kind": entry.kind,
        "k": entry.k,
        "margin_num": str(entry.margin_num),
    }


def _locator_from_dict(data: dict) -> LocatorEntry:
    return LocatorEntry(
        tuple(int(v) for v in data["vec"]),
        data["kind"],
        int(data["k"]),
        int(data["margin_num"]),
    )


def public_to_dict(bundle: KeyBundle) -> dict:
    """Everything publishable from a key bundle; never the secret."""
    rep = bundle.repartition
    return {
        "f0": [[_poly_out(p) for p in row] for row in bundle.public.f0],
        "fprime": [_poly_out(p) for p in bundle.public.fprime],
        "sigma": {
            "map": list(rep.assignment),
            "primes": [str(p) for p in rep.primes],
        },
        "lambda": [
            [[str(v) for v in row] for row in plane] for plane in bundle.tensor.coeffs
        ],
        "refresher": {
            "kappa": list(bundle.refresher.kappa),
            "rho": [ciphertext_to_dict(ct) for ct in bundle.refresher.rho],
        },
        "locators": [_locator_to_dict(e) for e in bundle.locators],
    }


def public_from_dict(ch: ArithmeticChannel, data: dict):
    """Returns (PublicKey, Repartition, ProductTensor, Refresher, locators)."""
    pk = PublicKey(
        tuple(tuple(_poly_in(ch, p) for p in row) for row in data["f0"]),
        tuple(_poly_in(ch, p) for p in data["fprime"]),
    )
    rep = Repartition(
        ch.q,
        tuple(int(p) for p in data["sigma"]["primes"]),
        tuple(int(v) for v in data["sigma"]["map"]),
    )
    tensor = ProductTensor(
        tuple(
            tuple(tuple(int(v) for v in row) for row in plane)
            for plane in data["lambda"]
        )
    )
    refresher = Refresher(
        tuple(int(k) for k in data["refresher"]["kappa"]),
        tuple(ciphertext_from_dict(ch, d) for d in data["refresher"]["rho"]),
    )
    locators = tuple(_locator_from_dict(d) for d in data.get("locators", []))
    return pk, rep, tensor, refresher, locators


def secret_to_dict(sk: SecretKey) -> dict:
    return {"secret": [_poly_out(p) for p in sk.polys]}


def secret_from_dict(ch: ArithmeticChannel, data: dict) -> SecretKey:
    return SecretKey(tuple(_poly_in(ch, p) for p in data["secret"]))


def dump(data: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")


def load(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"{path}: not valid JSON ({exc})") from exc
