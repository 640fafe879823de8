"""Encryption, decryption, and noise-level accounting.

A ciphertext is a vector part ``c`` (one ring polynomial per secret-key
slot) plus a scalar part ``cprime``, together with a tracked noise level.
The level is a certificate: the pair is claimed to sit in the encryption
space of its message at that level, and every operation in the package
updates it by the exact closed-form rules rather than re-deriving it from
data.
"""

from __future__ import annotations

from dataclasses import dataclass

from .channel import ArithmeticChannel, RandomSource, sample_message_carrier, sample_noise
from .errors import NoiseBudgetError, ParameterError
from .rings import RingPoly, is_leveled_multiple, lift, poly_vector_dot

__all__ = [
    "Ciphertext",
    "encrypt",
    "encrypt_with_secret",
    "decrypt",
    "level_after",
    "fresh_level",
    "sample_mask",
    "in_encryption_space",
]


@dataclass(frozen=True)
class Ciphertext:
    c: tuple[RingPoly, ...]
    cprime: RingPoly
    level: int

    def __post_init__(self):
        if self.level < 0:
            raise ParameterError("noise level cannot be negative")


def fresh_level(ch: ArithmeticChannel) -> int:
    """Worst-case level certificate for a public-key encryption.

    Each mask component evaluates to at most p and each public-key residual
    is level-k0 noise, so the accumulated mask noise is bounded by
    N*k0 steps of size p.
    """
    return ch.big_n * ch.p * ch.k0


def sample_mask(ch: ArithmeticChannel, rng: RandomSource) -> tuple[RingPoly, ...]:
    """The encryptor's garbling vector: N carriers with evaluations in [0, p]."""
    return tuple(
        sample_message_carrier(ch, rng.between(0, ch.p), rng) for _ in range(ch.big_n)
    )


def encrypt(pk, ch: ArithmeticChannel, m: int, rng: RandomSource) -> Ciphertext:
    """Public-key encryption of a plaintext residue ``m`` mod p.

    c = f0^T b for a bounded random mask b, and the scalar part carries the
    message through a random carrier polynomial plus the masked public-key
    noise.
    """
    if not 0 <= m < ch.p:
        raise ParameterError(f"message {m} is not a residue mod p={ch.p}")
    b = sample_mask(ch, rng)
    n = len(pk.f0[0])
    c = tuple(
        poly_vector_dot(tuple(pk.f0[i][j] for i in range(ch.big_n)), b)
        for j in range(n)
    )
    carrier = sample_message_carrier(ch, m, rng)
    cprime = carrier + poly_vector_dot(b, pk.fprime)
    return Ciphertext(c, cprime, fresh_level(ch))


def encrypt_with_secret(
    sk, rep, ch: ArithmeticChannel, m: int, k: int, rng: RandomSource
) -> Ciphertext:
    """Secret-formula encryption of a residue ``m`` mod q at level ``k``.

    Only the key owner can do this: the vector part is sampled directly in
    the divisibility-constrained module and the scalar part is built from
    the secret key itself.  Used for the refresher and for tests.
    """
    c = tuple(
        sample_message_carrier(ch, (rep.prime_of(j) * rng.below(ch.q)) % ch.q, rng)
        for j in range(rep.n)
    )
    carrier = sample_message_carrier(ch, m, rng)
    noise = sample_noise(ch, k, rng)
    cprime = carrier + poly_vector_dot(c, sk.polys) + noise
    return Ciphertext(c, cprime, k)


def decrypt(sk, ch: ArithmeticChannel, ct: Ciphertext) -> int:
    """Recover the plaintext residue mod p.

    Refuses past the noise budget: beyond it the result is no longer
    guaranteed, and a wrong answer would be worse than an error.
    """
    if ct.level > ch.max_noise_level():
        raise NoiseBudgetError(
            f"noise budget exceeded: level {ct.level} > {ch.max_noise_level()}"
        )
    inner = ct.cprime - poly_vector_dot(ct.c, sk.polys)
    return lift(ch.q, ch.eval(inner)) % ch.p


def level_after(op: str, k1: int, k2: int, ch: ArithmeticChannel):
    """Exact output level of a homomorphic op, or None on overflow.

    Overflow is a value, not a fault: callers (the circuit evaluator in
    particular) decide whether to refresh, fail, or retry.
    """
    if op == "add":
        total = k1 + k2
        return total if ch.p * total < ch.q else None
    if op == "mul":
        base = k1 + k2 + k1 * k2
        return base * ch.p if ch.p**2 * base < ch.q else None
    raise ParameterError(f"unknown operation {op!r}")


def in_encryption_space(sk, rep, ch: ArithmeticChannel, ct: Ciphertext, m: int, k: int) -> bool:
    """Secret-side membership check for the level-``k`` space of ``m``.

    Verifies the divisibility constraint on the vector part and that the
    scalar residual evaluates to the message plus level-``k`` noise.
    """
    for j, cj in enumerate(ct.c):
        if lift(ch.q, ch.eval(cj)) % rep.prime_of(j) != 0:
            return False
    residual = ch.eval(ct.cprime - poly_vector_dot(ct.c, sk.polys))
    return is_leveled_multiple(ch.p, k, lift(ch.q, (residual - m) % ch.q))
