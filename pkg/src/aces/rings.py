"""Exact modular arithmetic kernels.

Everything here is computed over plain Python integers, which are exact at
any width.  Residues mod ``m`` are represented canonically as ints in
``[0, m)``; the helpers below validate that convention instead of wrapping
every value in an object.

Three layers live in this module:

* the lift/reduce maps between ``Z_m`` and ``Z`` (and the quotient/remainder
  split used by decryption),
* polynomials over ``Z_q`` reduced by a monic modulus polynomial ``u``,
* repartitions: assignments of the prime factors of ``q`` to key slots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError

# Trial division is all we ever need: moduli are built as products of small
# distinct primes and stay far below this cap.
FACTOR_CAP = 1 << 62


def lift(m: int, value: int) -> int:
    """Lift a canonical residue mod ``m`` to a plain integer.

    The inclusion Z_m -> Z: the result is the same integer, now read without
    modular wrap-around.  Rejects non-canonical input instead of guessing.
    """
    if m < 2:
        raise ParameterError(f"modulus must be >= 2, got {m}")
    if not 0 <= value < m:
        raise ParameterError(f"{value} is not a canonical residue mod {m}")
    return value


def reduce_mod(m: int, value: int) -> int:
    """Reduce an integer to its canonical residue in ``[0, m)``.

    This direction is a ring homomorphism; the lift above is not.
    """
    if m < 2:
        raise ParameterError(f"modulus must be >= 2, got {m}")
    return value % m


def lift_divmod(p: int, q: int, value: int) -> tuple[int, int]:
    """Split the lift of ``value`` (a residue mod q) into base-p digits.

    Returns ``(quotient, remainder)`` with ``lift(q, value) == p*quotient +
    remainder`` and ``0 <= remainder < p``.  The quotient is the amount of
    p-noise riding on a message, the remainder the message itself.
    """
    if p > q:
        raise ParameterError(f"expected p <= q, got p={p} q={q}")
    z = lift(q, value)
    return z // p, z % p


def is_leveled_multiple(p: int, k: int, z: int) -> bool:
    """Whether ``z`` lies in ``{0, p, 2p, ..., kp}``.

    This is the target set for noise values at level ``k``: a multiple of the
    plaintext modulus, bounded by ``k`` steps.
    """
    return z >= 0 and z % p == 0 and z <= k * p


def factorize(q: int) -> list[int]:
    """Distinct prime factors of ``q`` in increasing order, by trial division.

    Moduli are chosen smooth by construction, so no general-purpose
    factorization is needed; the cap guards against misuse.
    """
    if q < 2:
        raise ParameterError(f"cannot factor {q}")
    if q >= FACTOR_CAP:
        raise ParameterError(f"modulus too large for trial division: {q}")
    primes = []
    rest = q
    d = 2
    while d * d <= rest:
        if rest % d == 0:
            primes.append(d)
            while rest % d == 0:
                rest //= d
        d += 1 if d == 2 else 2
    if rest > 1:
        primes.append(rest)
    return primes


@dataclass(frozen=True)
class RingPoly:
    """An element of Z_q[X] reduced by a monic polynomial ``u``.

    ``coeffs`` always has length ``deg(u)`` with entries canonical in
    ``[0, q)``; the zero polynomial is the all-zero tuple.  ``u`` is stored
    low-to-high including its leading 1 and identifies the ring: operations
    between polynomials from different rings are rejected.
    """

    q: int
    u: tuple[int, ...]
    coeffs: tuple[int, ...]

    @staticmethod
    def make(q: int, u: tuple[int, ...], coeffs) -> "RingPoly":
        """Build a canonical element from arbitrary integer coefficients."""
        if q < 2:
            raise ParameterError(f"coefficient modulus must be >= 2, got {q}")
        u = tuple(int(c) for c in u)
        if len(u) < 3:
            raise ParameterError("modulus polynomial must have degree >= 2")
        if u[-1] != 1:
            raise ParameterError("modulus polynomial must be monic")
        d = len(u) - 1
        work = [int(c) for c in coeffs]
        # Divide out u (monic, so exact over Z_q) until the degree drops.
        for i in range(len(work) - 1, d - 1, -1):
            lead = work[i] % q
            if lead:
                for j, uc in enumerate(u):
                    work[i - d + j] = (work[i - d + j] - lead * uc) % q
            work.pop()
        work.extend([0] * (d - len(work)))
        return RingPoly(q, u, tuple(c % q for c in work))

    @staticmethod
    def zero(q: int, u: tuple[int, ...]) -> "RingPoly":
        return RingPoly.make(q, u, [])

    @staticmethod
    def constant(q: int, u: tuple[int, ...], value: int) -> "RingPoly":
        return RingPoly.make(q, u, [value])

    @property
    def degree_bound(self) -> int:
        return len(self.u) - 1

    def _check_same_ring(self, other: "RingPoly") -> None:
        if self.q != other.q or self.u != other.u:
            raise ParameterError("polynomials belong to different rings")

    def __add__(self, other: "RingPoly") -> "RingPoly":
        self._check_same_ring(other)
        q = self.q
        return RingPoly(q, self.u, tuple((a + b) % q for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "RingPoly") -> "RingPoly":
        self._check_same_ring(other)
        q = self.q
        return RingPoly(q, self.u, tuple((a - b) % q for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "RingPoly":
        q = self.q
        return RingPoly(q, self.u, tuple((-a) % q for a in self.coeffs))

    def __mul__(self, other: "RingPoly") -> "RingPoly":
        self._check_same_ring(other)
        d = self.degree_bound
        prod = [0] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                prod[i + j] += a * b
        return RingPoly.make(self.q, self.u, prod)

    def scale(self, value: int) -> "RingPoly":
        """Multiply by an integer scalar."""
        q = self.q
        v = value % q
        return RingPoly(q, self.u, tuple((a * v) % q for a in self.coeffs))

    def eval_at(self, point: int) -> int:
        """Evaluate at an integer point over the non-negative representatives,
        reduced mod q.  Horner over Z would overflow nothing here; mod-q
        arithmetic gives the identical result."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * point + c) % self.q
        return acc

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)


def poly_vector_dot(vec_a: tuple, vec_b: tuple) -> RingPoly:
    """Dot product of two equal-length RingPoly vectors."""
    if len(vec_a) != len(vec_b):
        raise ParameterError("vector length mismatch")
    if not vec_a:
        raise ParameterError("empty vectors have no dot product")
    acc = vec_a[0] * vec_b[0]
    for a, b in zip(vec_a[1:], vec_b[1:]):
        acc = acc + a * b
    return acc


@dataclass(frozen=True)
class Repartition:
    """Assignment of the prime factors of ``q`` to the ``n`` key slots.

    ``primes`` are the distinct prime factors of ``q`` in increasing order,
    ``assignment[i]`` is either 0 (the conventional factor 1) or a 1-based
    index into ``primes``.  Slot indices below are 0-based.
    """

    q: int
    primes: tuple[int, ...]
    assignment: tuple[int, ...]

    def __post_init__(self):
        prod = math.prod(self.primes)
        if self.q % prod != 0:
            raise ParameterError("listed primes do not divide the modulus")
        for v in self.assignment:
            if not 0 <= v <= len(self.primes):
                raise ParameterError(f"assignment value {v} out of range")

    @staticmethod
    def sample(q: int, n: int, rng) -> "Repartition":
        """Uniform assignment over functions [n] -> {0, ..., n0}."""
        primes = tuple(factorize(q))
        assignment = tuple(rng.below(len(primes) + 1) for _ in range(n))
        return Repartition(q, primes, assignment)

    @property
    def n(self) -> int:
        return len(self.assignment)

    def prime_of(self, i: int) -> int:
        """The factor attached to slot ``i`` (1 for the index 0)."""
        v = self.assignment[i]
        return 1 if v == 0 else self.primes[v - 1]

    def weight(self, i: int, j: int) -> int:
        """The modulus divided by the primes of slots ``i`` and ``j``.

        When both slots carry the same factor it is divided out once only.
        """
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise ParameterError(f"slot index out of range: ({i}, {j})")
        if self.assignment[i] == self.assignment[j]:
            return self.q // self.prime_of(i)
        return self.q // (self.prime_of(i) * self.prime_of(j))
