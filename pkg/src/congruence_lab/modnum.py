"""Exact modular arithmetic and the scalar number theory shared by every module.

All residues are canonical Python ints in [0, modulus).  A ModCtx carries the
modulus, its classification, and the operations that keep results canonical.
Moduli are always odd here: the matrix families under study never need an even
modulus, and rejecting them early keeps inverse-of-2 tricks valid everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

PRIME = "prime"
PRIME_POWER = "prime-power"
ODD_COMPOSITE = "odd-composite"

MAX_PRIME_POWER_EXPONENT = 5


class NonUnitError(ArithmeticError):
    """Inversion of a residue that shares a factor with the modulus."""

    def __init__(self, value: int, modulus: int, gcd: int):
        super().__init__(f"{value} is not a unit mod {modulus} (gcd = {gcd})")
        self.value = value
        self.modulus = modulus
        self.gcd = gcd


class InconclusiveValuation(ArithmeticError):
    """x is 0 mod p^cap, so the p-adic valuation cannot be resolved at this cap."""

    def __init__(self, p: int, cap: int):
        super().__init__(
            f"value is divisible by {p}^{cap}; valuation >= {cap} cannot be resolved"
        )
        self.p = p
        self.cap = cap


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def inv_mod(a: int, m: int) -> int:
    """Inverse of a mod m via extended gcd (works for any modulus, not just primes)."""
    a %= m
    g, x, _ = egcd(a, m)
    if g != 1:
        raise NonUnitError(a, m, g)
    return x % m


def is_prime(n: int) -> bool:
    """Deterministic trial division; fine at workbench scale."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_up_to(n: int) -> list[int]:
    """Sieve of Eratosthenes, inclusive upper bound."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
    return [i for i in range(2, n + 1) if sieve[i]]


def odd_primes_in(lo: int, hi: int) -> list[int]:
    """Odd primes p with lo <= p <= hi (2 is excluded: even moduli are out of scope)."""
    return [p for p in primes_up_to(hi) if p >= max(lo, 3)]


@dataclass(frozen=True)
class ModCtx:
    """A modulus with its classification; all residue arithmetic goes through here.

    kind is one of PRIME, PRIME_POWER, ODD_COMPOSITE.  For PRIME_POWER the base
    prime and exponent are carried along (modulus = base ** exponent, exponent
    in 2..MAX_PRIME_POWER_EXPONENT).  The kind is a routing label: engines use
    it to decide between in-place field elimination and exact lifting; the
    arithmetic itself is identical for every kind.
    """

    modulus: int
    kind: str
    base: int | None = None
    exponent: int | None = None

    def __post_init__(self):
        m = self.modulus
        if m < 3 or m % 2 == 0:
            raise ValueError(f"modulus must be an odd integer >= 3, got {m}")
        if self.kind == PRIME:
            if not is_prime(m):
                raise ValueError(f"{m} is not prime")
        elif self.kind == PRIME_POWER:
            p, k = self.base, self.exponent
            if p is None or k is None or not is_prime(p) or p == 2:
                raise ValueError(f"prime-power ctx needs an odd prime base, got {p}")
            if not 2 <= k <= MAX_PRIME_POWER_EXPONENT:
                raise ValueError(
                    f"prime-power exponent must be in 2..{MAX_PRIME_POWER_EXPONENT}, got {k}"
                )
            if p**k != m:
                raise ValueError(f"modulus {m} != {p}^{k}")
        elif self.kind == ODD_COMPOSITE:
            if is_prime(m):
                raise ValueError(f"{m} is prime; use kind={PRIME!r}")
        else:
            raise ValueError(f"unknown modulus kind {self.kind!r}")

    # -- constructors ------------------------------------------------------

    @classmethod
    def prime(cls, p: int) -> "ModCtx":
        return cls(p, PRIME)

    @classmethod
    def prime_power(cls, p: int, k: int) -> "ModCtx":
        if k == 1:
            return cls.prime(p)
        return cls(p**k, PRIME_POWER, base=p, exponent=k)

    @classmethod
    def for_modulus(cls, m: int) -> "ModCtx":
        """Classify m and build the matching context.

        Prime powers p^k with k > MAX_PRIME_POWER_EXPONENT fall back to the
        odd-composite kind: the label only affects engine routing, and the
        exact-lift route used for composites is correct for any odd modulus.
        """
        if m < 3 or m % 2 == 0:
            raise ValueError(f"modulus must be an odd integer >= 3, got {m}")
        if is_prime(m):
            return cls.prime(m)
        p = _smallest_odd_factor(m)
        k, rest = 0, m
        while rest % p == 0:
            rest //= p
            k += 1
        if rest == 1 and 2 <= k <= MAX_PRIME_POWER_EXPONENT:
            return cls.prime_power(p, k)
        return cls(m, ODD_COMPOSITE)

    # -- arithmetic --------------------------------------------------------

    def reduce(self, x: int) -> int:
        return x % self.modulus

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.modulus

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.modulus

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.modulus

    def neg(self, a: int) -> int:
        return -a % self.modulus

    def inv(self, a: int) -> int:
        return inv_mod(a, self.modulus)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return pow(self.inv(a), -e, self.modulus)
        return pow(a % self.modulus, e, self.modulus)


def _smallest_odd_factor(m: int) -> int:
    f = 3
    while f * f <= m:
        if m % f == 0:
            return f
        f += 2
    return m


def pow_mod(a: int, e: int, ctx: ModCtx) -> int:
    """Canonical a**e mod ctx.modulus (0**0 = 1 by convention)."""
    return ctx.pow(a, e)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p, via Euler's criterion.

    Returns 0 when p | a, else +-1.
    """
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise ValueError(f"legendre symbol needs an odd prime, got {p}")
    t = pow(a % p, (p - 1) // 2, p)
    if t == 0:
        return 0
    if t == 1:
        return 1
    if t == p - 1:
        return -1
    raise AssertionError(f"Euler criterion produced {t} for ({a}/{p})")  # unreachable


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1, by quadratic reciprocity (no factoring)."""
    if n < 1 or n % 2 == 0:
        raise ValueError(f"jacobi symbol needs a positive odd n, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def double_factorial_mod(n: int, ctx: ModCtx) -> int:
    """n!! mod ctx.modulus, with 0!! = (-1)!! = 1."""
    if n < -1:
        raise ValueError(f"double factorial needs n >= -1, got {n}")
    m = ctx.modulus
    result = 1
    k = n
    while k > 1:
        result = result * k % m
        k -= 2
    return result % m


def harmonic2_mod(p: int) -> int:
    """Sum of inv(i)^2 for i = 1..p-1, mod p (vanishes for every prime p > 3)."""
    if not is_prime(p) or p == 2:
        raise ValueError(f"needs an odd prime, got {p}")
    total = 0
    for i in range(1, p):
        v = inv_mod(i, p)
        total += v * v
    return total % p


def padic_valuation(x: int, p: int, cap: int) -> tuple[int, int]:
    """Largest v < cap with p^v | x, for x known modulo p^cap.

    Returns (v, unit mod p) where unit = x / p^v.  Raises InconclusiveValuation
    when x = 0 mod p^cap -- the cap saturated, and pretending to know the
    valuation would be a silent wraparound.
    """
    if not is_prime(p) or p == 2:
        raise ValueError(f"needs an odd prime, got {p}")
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    r = x % (p**cap)
    if r == 0:
        raise InconclusiveValuation(p, cap)
    v = 0
    while r % p == 0:
        r //= p
        v += 1
    return v, r % p
