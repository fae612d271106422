"""Builders for the structured matrix families the workbench studies.

Every builder returns an immutable Matrix whose provenance string is enough to
rebuild it bit-for-bit.  Entries are canonical residues when a ModCtx is
attached, exact Python ints otherwise (ctx=None, "exact mode").
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

from .modnum import ModCtx, NonUnitError, inv_mod, is_prime


class EntryKind(enum.Enum):
    QUAD_FORM_POW = "quadform"
    INV_DIFF = "invdiff"
    RATIO_SUM_DIFF = "ratiosumdiff"
    INV_DIFF_SQUARES = "invdiffsquares"
    RATIO_SUM_SQUARES = "ratiosumsquares"
    PRIME_INDICATOR = "primeind"


#: kinds usable as off-diagonal Cauchy-style terms 1/(j-k), (j+k)/(j-k), ...
CAUCHY_KINDS = frozenset(
    {
        EntryKind.INV_DIFF,
        EntryKind.RATIO_SUM_DIFF,
        EntryKind.INV_DIFF_SQUARES,
        EntryKind.RATIO_SUM_SQUARES,
    }
)


class NonUnitDenominator(ValueError):
    """A term denominator is not invertible under the requested modulus."""

    def __init__(self, row: int, col: int, denominator: int, modulus: int, gcd: int):
        super().__init__(
            f"denominator {denominator} at (j={row}, k={col}) is not a unit "
            f"mod {modulus} (gcd = {gcd})"
        )
        self.row = row
        self.col = col
        self.denominator = denominator
        self.modulus = modulus
        self.gcd = gcd


@dataclass(frozen=True)
class Matrix:
    """Square matrix with optional modulus context and rebuildable provenance."""

    n: int
    entries: tuple[tuple[int, ...], ...]
    ctx: ModCtx | None
    provenance: str

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"order must be >= 1, got {self.n}")
        if len(self.entries) != self.n or any(len(r) != self.n for r in self.entries):
            raise ValueError("entries are not an n x n grid")
        if self.ctx is not None:
            m = self.ctx.modulus
            for row in self.entries:
                for x in row:
                    if not 0 <= x < m:
                        raise ValueError(
                            f"entry {x} is not a canonical residue mod {m}"
                        )

    @property
    def exact(self) -> bool:
        return self.ctx is None

    def rows(self) -> list[list[int]]:
        """Mutable copy of the entries for the engines."""
        return [list(r) for r in self.entries]


def _freeze(rows: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in r) for r in rows)


# ---------------------------------------------------------------------------
# term evaluation for the Cauchy-style kinds


def entry_value(kind: EntryKind, j: int, k: int, ctx: ModCtx) -> int:
    """Off-diagonal term at (j, k) for the given kind, as a canonical residue.

    Denominators use true modular inverses; a non-unit denominator raises
    NonUnitDenominator with the offending cell.
    """
    if kind is EntryKind.INV_DIFF:
        num, den = 1, j - k
    elif kind is EntryKind.RATIO_SUM_DIFF:
        num, den = j + k, j - k
    elif kind is EntryKind.INV_DIFF_SQUARES:
        num, den = 1, j * j - k * k
    elif kind is EntryKind.RATIO_SUM_SQUARES:
        num, den = j * j + k * k, j * j - k * k
    else:
        raise ValueError(f"{kind} is not a Cauchy-style entry kind")
    try:
        return num * ctx.inv(den) % ctx.modulus
    except NonUnitError as e:
        raise NonUnitDenominator(j, k, den, ctx.modulus, e.gcd) from None


# ---------------------------------------------------------------------------
# builders


def _pow_mod_array(base: np.ndarray, e: int, m: int) -> np.ndarray:
    """Square-and-multiply on an int64 array; caller guarantees m*m < 2**62."""
    result = np.ones_like(base)
    base = base % m
    while e:
        if e & 1:
            result = result * base % m
        base = base * base % m
        e >>= 1
    return result


def quad_form_matrix(
    p_or_n: int,
    c: int,
    d: int,
    index_range: str,
    exponent: int,
    ctx: ModCtx | None,
) -> Matrix:
    """Matrix of (i^2 + c*i*j + d*j^2) ** exponent over a square index grid.

    index_range selects the grid: "full0" uses 0..N-1, "from1" uses 1..N-1
    (so the order is N-1).  With a ctx the power is taken mod ctx.modulus;
    zero bases are legal (the power map realizes reciprocals as x**(N-2), and
    0 simply maps to 0).  In exact mode the power is an exact integer.
    """
    if index_range == "full0":
        indices = list(range(0, p_or_n))
    elif index_range == "from1":
        indices = list(range(1, p_or_n))
    else:
        raise ValueError(f"index_range must be 'full0' or 'from1', got {index_range!r}")
    if exponent < 1:
        raise ValueError(f"exponent must be >= 1, got {exponent}")
    n = len(indices)
    if n < 1:
        raise ValueError(f"empty index range for p_or_n = {p_or_n}")

    if ctx is not None and ctx.modulus < 2**31 and p_or_n < 2**15:
        m = ctx.modulus
        idx = np.array(indices, dtype=np.int64)
        sq = idx * idx % m
        base = (sq[:, None] + (c % m) * np.outer(idx, idx) + (d % m) * sq[None, :]) % m
        rows = _pow_mod_array(base, exponent, m).tolist()
    else:
        rows = []
        for i in indices:
            if ctx is None:
                rows.append([(i * i + c * i * j + d * j * j) ** exponent for j in indices])
            else:
                m = ctx.modulus
                rows.append(
                    [pow((i * i + c * i * j + d * j * j) % m, exponent, m) for j in indices]
                )
    mod_tag = "Z" if ctx is None else str(ctx.modulus)
    prov = f"quadform(base={p_or_n},c={c},d={d},range={index_range},exp={exponent},mod={mod_tag})"
    return Matrix(n, _freeze(rows), ctx, prov)


def cauchy_type_matrix(kind: EntryKind, size: int, diagonal: str, ctx: ModCtx) -> Matrix:
    """Order-`size` matrix over indices 1..size with Cauchy-style off-diagonal terms.

    diagonal is "zero" or "one".  Index sets larger than the denominators can
    support (e.g. 1..p for a difference kind mod p) raise NonUnitDenominator.
    """
    if kind not in CAUCHY_KINDS:
        raise ValueError(f"{kind} is not a Cauchy-style entry kind")
    if diagonal not in ("zero", "one"):
        raise ValueError(f"diagonal must be 'zero' or 'one', got {diagonal!r}")
    if size < 1:
        raise ValueError(f"size must be >= 1, got {size}")
    if ctx is None:
        raise ValueError("cauchy-style kinds need a modulus context (entries are inverses)")
    diag = 0 if diagonal == "zero" else 1
    inv_cache: dict[int, int] = {}
    m = ctx.modulus

    def inv_of(den: int, j: int, k: int) -> int:
        r = den % m
        if r not in inv_cache:
            try:
                inv_cache[r] = ctx.inv(r)
            except NonUnitError as e:
                raise NonUnitDenominator(j, k, den, m, e.gcd) from None
        return inv_cache[r]

    rows = []
    for j in range(1, size + 1):
        row = []
        for k in range(1, size + 1):
            if j == k:
                row.append(diag)
            elif kind is EntryKind.INV_DIFF:
                row.append(inv_of(j - k, j, k))
            elif kind is EntryKind.RATIO_SUM_DIFF:
                row.append((j + k) * inv_of(j - k, j, k) % m)
            elif kind is EntryKind.INV_DIFF_SQUARES:
                row.append(inv_of(j * j - k * k, j, k))
            else:  # RATIO_SUM_SQUARES
                row.append((j * j + k * k) * inv_of(j * j - k * k, j, k) % m)
        rows.append(row)
    prov = f"cauchy(kind={kind.value},size={size},diag={diagonal},mod={m})"
    return Matrix(size, _freeze(rows), ctx, prov)


def inverse_form_matrix(p: int, which: str) -> Matrix:
    """Inverse-quadratic-form matrices mod a prime p.

    which = "half_range_sq":  [1/(i^2 + j^2)]       over 1..(p-1)/2
    which = "full_range_ij":  [1/(i^2 - i*j + j^2)] over 1..p-1

    Denominators are units exactly under the residue classes where these
    families are studied (p = 3 mod 4, resp. p = 2 mod 3); outside them the
    builder raises NonUnitDenominator.
    """
    if not is_prime(p) or p == 2:
        raise ValueError(f"needs an odd prime, got {p}")
    ctx = ModCtx.prime(p)
    # inverse table mod p: inv[i] for 1 <= i < p, built in O(p)
    inv = [0, 1] + [0] * (p - 2)
    for i in range(2, p):
        inv[i] = -(p // i) * inv[p % i] % p

    if which == "half_range_sq":
        size = (p - 1) // 2
        den = lambda i, j: (i * i + j * j) % p
    elif which == "full_range_ij":
        size = p - 1
        den = lambda i, j: (i * i - i * j + j * j) % p
    else:
        raise ValueError(f"which must be 'half_range_sq' or 'full_range_ij', got {which!r}")
    if size < 1:
        raise ValueError(f"empty index range for p = {p}")
    rows = []
    for i in range(1, size + 1):
        row = []
        for j in range(1, size + 1):
            r = den(i, j)
            if r == 0:
                raise NonUnitDenominator(i, j, r, p, p)
            row.append(inv[r])
        rows.append(row)
    prov = f"invform(p={p},which={which})"
    return Matrix(size, _freeze(rows), ctx, prov)


def prime_indicator_matrix(n: int) -> Matrix:
    """0/1 matrix with 1 at (i, j) iff i + j is prime (1-based indices)."""
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    prime = [is_prime(s) for s in range(2 * n + 1)]
    rows = [[1 if prime[i + j] else 0 for j in range(1, n + 1)] for i in range(1, n + 1)]
    return Matrix(n, _freeze(rows), None, f"primeind(n={n})")


def _checkerboard_allowed(i: int, j: int) -> bool:
    """Support rule, 1-based: cell may be nonzero iff i+j is odd or i+j == 2."""
    return (i + j) % 2 == 1 or i + j == 2


def random_checkerboard_matrix(n: int, seed: int, symmetric: bool = False) -> Matrix:
    """Random exact-integer matrix supported on the checkerboard pattern.

    Entries are small ints in [-9, 9]; cells with i+j even (except (1,1)) are
    zero.  With symmetric=True the matrix equals its transpose.
    """
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    rng = random.Random(seed)
    rows = [[0] * n for _ in range(n)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if not _checkerboard_allowed(i, j):
                continue
            if symmetric and j < i:
                rows[i - 1][j - 1] = rows[j - 1][i - 1]
            else:
                rows[i - 1][j - 1] = rng.randint(-9, 9)
    prov = f"checkerboard(n={n},seed={seed},symmetric={symmetric})"
    return Matrix(n, _freeze(rows), None, prov)


def random_skew_checkerboard_matrix(m: int, seed: int) -> Matrix:
    """Random skew-symmetric checkerboard-supported matrix of even order 2m."""
    if m < 1:
        raise ValueError(f"half-order must be >= 1, got {m}")
    n = 2 * m
    rng = random.Random(seed)
    rows = [[0] * n for _ in range(n)]
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if not _checkerboard_allowed(i, j):
                continue
            v = rng.randint(-9, 9)
            rows[i - 1][j - 1] = v
            rows[j - 1][i - 1] = -v
    prov = f"skewcheckerboard(m={m},seed={seed})"
    return Matrix(n, _freeze(rows), None, prov)


def poly_eval_matrix(coeffs: Sequence[Sequence[int]], n: int) -> Matrix:
    """Matrix [P(i, j)] over 1 <= i, j <= n for an integer polynomial P.

    coeffs[k][l] is the coefficient of x**k * j**l, so P(x, j) =
    sum_k (sum_l coeffs[k][l] * j**l) * x**k.  The x-degree must be strictly
    less than n - 1 (that is what forces the determinant to vanish).
    """
    if n < 2:
        raise ValueError(f"order must be >= 2, got {n}")
    if not coeffs:
        raise ValueError("coeffs must contain at least one coefficient row")
    x_degree = -1
    for k, row in enumerate(coeffs):
        if any(row):
            x_degree = k
    if x_degree > n - 2:
        raise ValueError(f"x-degree {x_degree} is not < n-1 = {n - 1}")

    def value(i: int, j: int) -> int:
        total = 0
        for k, row in enumerate(coeffs):
            ck = sum(cl * j**l for l, cl in enumerate(row))
            total += ck * i**k
        return total

    rows = [[value(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]
    prov = f"polyeval(n={n},coeffs={[list(map(int, r)) for r in coeffs]!r})"
    return Matrix(n, _freeze(rows), None, prov)


# ---------------------------------------------------------------------------
# plain-text matrix format: first line "n m" (m = 0 means exact integers),
# then n lines of n entries.


def write_matrix(matrix: Matrix, fh: IO[str]) -> None:
    m = 0 if matrix.ctx is None else matrix.ctx.modulus
    fh.write(f"{matrix.n} {m}\n")
    for row in matrix.entries:
        fh.write(" ".join(str(x) for x in row) + "\n")


def read_matrix(fh: IO[str], provenance: str = "file") -> Matrix:
    header = fh.readline().split()
    if len(header) != 2:
        raise ValueError("header must be 'n m'")
    n, m = int(header[0]), int(header[1])
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    if m < 0:
        raise ValueError(f"modulus must be >= 0, got {m}")
    ctx = None if m == 0 else ModCtx.for_modulus(m)
    rows = []
    for i in range(n):
        parts = fh.readline().split()
        if len(parts) != n:
            raise ValueError(f"row {i + 1}: expected {n} entries, got {len(parts)}")
        row = [int(x) for x in parts]
        if ctx is not None and any(not 0 <= x < m for x in row):
            raise ValueError(f"row {i + 1}: entries must be canonical residues in [0, {m})")
        rows.append(row)
    return Matrix(n, _freeze(rows), ctx, provenance)
