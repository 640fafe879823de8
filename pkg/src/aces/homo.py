"""Homomorphic operations on ciphertexts.

Addition is componentwise.  Multiplication uses the published 3-tensor to
fold the product of two secret-key contractions back into a single linear
contraction; its vector part is exactly

    c2' * c1 + c1' * c2 - contract(tensor, c1, c2)

with the scalar parts multiplied.  Level bookkeeping follows the exact
closed forms, never looser bounds.
"""

from __future__ import annotations

from .cipher import Ciphertext, level_after
from .errors import NoiseBudgetError, ParameterError

__all__ = ["tensor_contract", "hom_add", "hom_mul", "scalar_product"]


def tensor_contract(lam, v1: tuple, v2: tuple) -> tuple:
    """Bilinear contraction sum_{i,j} t[i][j][k] * v1[i] * v2[j], per k.

    Keeps the divisibility structure: slot k of the output evaluates to a
    multiple of slot k's prime whenever the tensor does.
    """
    n = len(lam.coeffs)
    if len(v1) != n or len(v2) != n:
        raise ParameterError("vector length does not match tensor dimension")
    products = [[v1[i] * v2[j] for j in range(n)] for i in range(n)]
    out = []
    for k in range(n):
        acc = None
        for i in range(n):
            for j in range(n):
                term = products[i][j].scale(lam.coeffs[i][j][k])
                acc = term if acc is None else acc + term
        out.append(acc)
    return tuple(out)


def hom_add(ch, ct1: Ciphertext, ct2: Ciphertext) -> Ciphertext:
    level = level_after("add", ct1.level, ct2.level, ch)
    if level is None:
        raise NoiseBudgetError(
            f"addition overflows the noise budget: levels {ct1.level} + {ct2.level}"
        )
    c = tuple(a + b for a, b in zip(ct1.c, ct2.c))
    return Ciphertext(c, ct1.cprime + ct2.cprime, level)


def hom_mul(ch, lam, ct1: Ciphertext, ct2: Ciphertext) -> Ciphertext:
    level = level_after("mul", ct1.level, ct2.level, ch)
    if level is None:
        raise NoiseBudgetError(
            f"multiplication overflows the noise budget: levels {ct1.level} * {ct2.level}"
        )
    cross = tensor_contract(lam, ct1.c, ct2.c)
    # The scalar parts act as ring coefficients on the opposite vectors.
    c = tuple(
        a * ct2.cprime + b * ct1.cprime - x for a, b, x in zip(ct1.c, ct2.c, cross)
    )
    return Ciphertext(c, ct1.cprime * ct2.cprime, level)


def scalar_product(ch, lam, gamma: tuple, rho: tuple) -> Ciphertext:
    """Fold of componentwise products: sum_i gamma[i] * rho[i].

    Strictly left-to-right so that noise-guard failures are reported at a
    deterministic step.
    """
    if len(gamma) != len(rho):
        raise ParameterError("scalar product needs equal-length tuples")
    if not gamma:
        raise ParameterError("scalar product of empty tuples")
    acc = None
    for step, (g, r) in enumerate(zip(gamma, rho)):
        try:
            term = hom_mul(ch, lam, g, r)
            acc = term if acc is None else hom_add(ch, acc, term)
        except NoiseBudgetError as exc:
            raise NoiseBudgetError(f"scalar product step {step}: {exc}") from exc
    return acc
