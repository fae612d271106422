"""Determinant and permanent engines.

Four independent routes are kept deliberately separate so they can cross-check
one another: in-place field elimination (prime moduli), fraction-free exact
elimination (any modulus, via lifting), brute-force permutation sums (n <= 9),
and the subset inclusion-exclusion kernel for permanents.  A checkerboard
factorization engine reduces supported matrices to two half-size problems.
"""

from __future__ import annotations

import itertools
import math
import os

import numpy as np

from .matgen import Matrix, _checkerboard_allowed
from .modnum import ModCtx, PRIME

DEFAULT_RYSER_CAP = 28
HARD_RYSER_LIMIT = 32  # larger permanents are out of scope under any configuration
RYSER_CAP_ENV = "CONGRUENCE_LAB_MAX_PER_N"

NAIVE_LIMIT = 9

_INT64_SAFE = 2**62


class OrderTooLarge(ValueError):
    pass


class SupportViolation(ValueError):
    """Matrix is not checkerboard-supported; carries the offending cells (1-based)."""

    def __init__(self, cells: list[tuple[int, int]]):
        shown = ", ".join(f"({i},{j})" for i, j in cells[:8])
        more = "" if len(cells) <= 8 else f" and {len(cells) - 8} more"
        super().__init__(f"nonzero entries off the checkerboard support at {shown}{more}")
        self.cells = cells


def _require_ctx(matrix: Matrix, ctx: ModCtx | None) -> ModCtx | None:
    if ctx is None:
        return matrix.ctx
    if matrix.ctx is not None and matrix.ctx.modulus != ctx.modulus:
        raise ValueError(
            f"matrix is mod {matrix.ctx.modulus} but ctx is mod {ctx.modulus}"
        )
    return ctx


# ---------------------------------------------------------------------------
# determinants


def det_field(matrix: Matrix, ctx: ModCtx | None = None) -> int:
    """Determinant mod a prime, by Gaussian elimination with pivot search.

    Uses an int64 numpy kernel when the modulus allows (products stay below
    2**62); falls back to exact Python ints otherwise.
    """
    ctx = _require_ctx(matrix, ctx)
    if ctx is None or ctx.kind != PRIME:
        raise ValueError("det_field needs a prime modulus context")
    p = ctx.modulus
    if p < 2**31:
        return _det_field_numpy(matrix.rows(), p)
    return _det_field_python(matrix.rows(), p)


def _det_field_numpy(rows: list[list[int]], p: int) -> int:
    n = len(rows)
    a = np.array(rows, dtype=np.int64) % p
    det = 1
    sign = 1
    for col in range(n):
        pivots = np.nonzero(a[col:, col])[0]
        if len(pivots) == 0:
            return 0
        r = col + int(pivots[0])
        if r != col:
            a[[col, r]] = a[[r, col]]
            sign = -sign
        pivot = int(a[col, col])
        det = det * pivot % p
        if col + 1 < n:
            inv = pow(pivot, -1, p)
            factors = a[col + 1 :, col] * inv % p
            a[col + 1 :, col:] = (a[col + 1 :, col:] - factors[:, None] * a[col, col:]) % p
    return det * sign % p


def _det_field_python(rows: list[list[int]], p: int) -> int:
    n = len(rows)
    a = [[x % p for x in row] for row in rows]
    det = 1
    for col in range(n):
        r = next((i for i in range(col, n) if a[i][col]), None)
        if r is None:
            return 0
        if r != col:
            a[col], a[r] = a[r], a[col]
            det = -det
        pivot = a[col][col]
        det = det * pivot % p
        inv = pow(pivot, -1, p)
        for i in range(col + 1, n):
            f = a[i][col] * inv % p
            if f:
                ai, ac = a[i], a[col]
                for j in range(col, n):
                    ai[j] = (ai[j] - f * ac[j]) % p
    return det % p


def det_exact(matrix: Matrix, reduce_ctx: ModCtx | None = None) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination over Z.

    Residue entries are lifted to their canonical representatives.  With
    reduce_ctx the exact value is reduced to a canonical residue at the end;
    this is the route for prime-power and composite moduli, where in-place
    division is not available.
    """
    a = matrix.rows()
    n = matrix.n
    sign = 1
    prev = 1
    for k in range(n - 1):
        r = next((i for i in range(k, n) if a[i][k]), None)
        if r is None:
            return 0
        if r != k:
            a[k], a[r] = a[r], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            ai, ak = a[i], a[k]
            aik = ai[k]
            for j in range(k + 1, n):
                ai[j] = (ai[j] * akk - aik * ak[j]) // prev
            ai[k] = 0
        prev = akk
    det = sign * a[n - 1][n - 1]
    return det if reduce_ctx is None else reduce_ctx.reduce(det)


# ---------------------------------------------------------------------------
# brute force over all n! permutations (the small-n oracle engines)


def _heaps_signed_permutations(n: int):
    """Yield (perm, sign) over all of S_n; each step is a single transposition."""
    perm = list(range(n))
    sign = 1
    yield perm, sign
    c = [0] * n
    i = 0
    while i < n:
        if c[i] < i:
            if i % 2 == 0:
                perm[0], perm[i] = perm[i], perm[0]
            else:
                perm[c[i]], perm[i] = perm[i], perm[c[i]]
            sign = -sign
            yield perm, sign
            c[i] += 1
            i = 0
        else:
            c[i] = 0
            i += 1


_PERM_TABLES: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _perm_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _PERM_TABLES:
        perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
        inversions = np.zeros(len(perms), dtype=np.int64)
        for i in range(n):
            for j in range(i + 1, n):
                inversions += perms[:, i] > perms[:, j]
        signs = 1 - 2 * (inversions & 1)
        _PERM_TABLES[n] = (perms, signs)
    return _PERM_TABLES[n]


def _naive_sum(matrix: Matrix, signed: bool) -> int:
    n = matrix.n
    if n > NAIVE_LIMIT:
        raise OrderTooLarge(
            f"naive engines stop at n = {NAIVE_LIMIT} ({math.factorial(NAIVE_LIMIT)} "
            f"permutations); got n = {n}"
        )
    m = None if matrix.ctx is None else matrix.ctx.modulus
    max_abs = max((abs(x) for row in matrix.entries for x in row), default=0)
    # int64 fast path: every permutation product (and their sum) must fit.
    if max_abs > 0:
        prod_bound = max_abs**n
        if prod_bound * math.factorial(n) < _INT64_SAFE:
            perms, signs = _perm_table(n)
            a = np.array(matrix.entries, dtype=np.int64)
            prods = a[np.arange(n)[None, :], perms].prod(axis=1)
            total = int((prods * signs).sum()) if signed else int(prods.sum())
            return total % m if m is not None else total
    total = 0
    rows = matrix.rows()
    for perm, sign in _heaps_signed_permutations(n):
        prod = 1
        for i in range(n):
            prod *= rows[i][perm[i]]
            if prod == 0:
                break
        if m is not None:
            prod %= m
        total += sign * prod if signed else prod
    return total % m if m is not None else total


def det_naive(matrix: Matrix) -> int:
    """Signed sum over all n! permutations (n <= 9)."""
    return _naive_sum(matrix, signed=True)


def per_naive(matrix: Matrix) -> int:
    """Unsigned sum over all n! permutations (n <= 9)."""
    return _naive_sum(matrix, signed=False)


# ---------------------------------------------------------------------------
# permanent via subset inclusion-exclusion


def _ryser_cap(explicit: int | None) -> int:
    if explicit is not None:
        cap = explicit
    else:
        env = os.environ.get(RYSER_CAP_ENV)
        cap = int(env) if env else DEFAULT_RYSER_CAP
    return min(cap, HARD_RYSER_LIMIT)


def per_ryser(
    matrix: Matrix,
    ctx: ModCtx | None = None,
    *,
    chunks: int = 1,
    cap: int | None = None,
) -> int:
    """Permanent by inclusion-exclusion over 2**(n-1) column subsets.

    Iterates subsets S of the first n-1 columns in Gray-code order, keeping a
    running vector of row sums r (one column add/subtract per step), and
    accumulates (-1)**(n-|S|) * prod_i (2*r_i - t_i) where t is the full row
    sum vector; the total is divided by 2**(n-1) at the end (exactly in exact
    mode, via inv(2) for odd moduli).  The subset range may be partitioned
    into contiguous chunks; each chunk re-derives its starting row sums from
    its first Gray mask, so chunked and serial runs are identical.
    """
    ctx = _require_ctx(matrix, ctx)
    n = matrix.n
    effective_cap = _ryser_cap(cap)
    if n > effective_cap:
        raise OrderTooLarge(
            f"permanent of order {n} exceeds the cap {effective_cap} "
            f"(would need 2**{n - 1} = {2 ** (n - 1)} row-sum updates; "
            f"raise {RYSER_CAP_ENV} up to {HARD_RYSER_LIMIT} if you mean it)"
        )
    rows = matrix.rows()
    if ctx is not None and matrix.ctx is None:
        rows = [[x % ctx.modulus for x in row] for row in rows]
    m = None if ctx is None else ctx.modulus

    span = 1 << (n - 1)
    chunks = max(1, min(chunks, span))
    bounds = [(span * q) // chunks for q in range(chunks + 1)]
    total = 0
    for q in range(chunks):
        total += _ryser_chunk(rows, n, m, bounds[q], bounds[q + 1])
        if m is not None:
            total %= m
    if m is None:
        quotient, remainder = divmod(total, span)
        assert remainder == 0, "inclusion-exclusion sum must divide by 2**(n-1)"
        return quotient
    inv2 = (m + 1) // 2
    return total * pow(inv2, n - 1, m) % m


def _ryser_chunk(rows: list[list[int]], n: int, m: int | None, k0: int, k1: int) -> int:
    t = [sum(row) for row in rows]
    mask = k0 ^ (k0 >> 1)
    r = [0] * n
    for j in range(n - 1):
        if mask >> j & 1:
            for i in range(n):
                r[i] += rows[i][j]
    if m is not None:
        t = [x % m for x in t]
        r = [x % m for x in r]
    parity = mask.bit_count() & 1
    sign = -1 if (n - parity) & 1 else 1
    indices = range(n)
    total = 0
    k = k0
    while True:
        prod = 1
        if m is None:
            for i in indices:
                prod *= 2 * r[i] - t[i]
                if prod == 0:
                    break
        else:
            for i in indices:
                prod = prod * (2 * r[i] - t[i]) % m
        total += sign * prod
        k += 1
        if k >= k1:
            break
        j = (k & -k).bit_length() - 1
        bit = 1 << j
        mask ^= bit
        sign = -sign
        if m is None:
            if mask & bit:
                for i in indices:
                    r[i] += rows[i][j]
            else:
                for i in indices:
                    r[i] -= rows[i][j]
        elif mask & bit:
            for i in indices:
                r[i] = (r[i] + rows[i][j]) % m
        else:
            for i in indices:
                r[i] = (r[i] - rows[i][j]) % m
    return total % m if m is not None else total


# ---------------------------------------------------------------------------
# checkerboard factorization


def checkerboard_violations(matrix: Matrix) -> list[tuple[int, int]]:
    """Cells (1-based) that break the support rule: nonzero with i+j even > 2."""
    bad = []
    for i in range(1, matrix.n + 1):
        for j in range(1, matrix.n + 1):
            if not _checkerboard_allowed(i, j) and matrix.entries[i - 1][j - 1] != 0:
                bad.append((i, j))
    return bad


def _submatrix(matrix: Matrix, row_idx: list[int], col_idx: list[int], tag: str) -> Matrix:
    rows = [[matrix.entries[i][j] for j in col_idx] for i in row_idx]
    return Matrix(len(row_idx), tuple(tuple(r) for r in rows), matrix.ctx,
                  f"{matrix.provenance}|{tag}")


def _half_det(half: Matrix) -> int:
    if half.ctx is None:
        return det_exact(half)
    if half.ctx.kind == PRIME:
        return det_field(half)
    return det_exact(half, reduce_ctx=half.ctx)


def _half_per(half: Matrix) -> int:
    return per_ryser(half)


def factor_checkerboard(matrix: Matrix, mode: str) -> int:
    """det or per of a checkerboard-supported matrix via its two half blocks.

    Order n = 2m:   per(A) = per(B) * per(C),      det(A) = (-1)**m * det(B) * det(C)
    Order n = 2m+1: per(A) = a11 * per(B) * per(C) and the det analogue, where
    B takes even rows against odd columns and C the complementary block.  The
    halves are computed with the plain engines (no nested factorization).
    """
    if mode not in ("det", "per"):
        raise ValueError(f"mode must be 'det' or 'per', got {mode!r}")
    bad = checkerboard_violations(matrix)
    if bad:
        raise SupportViolation(bad)
    n = matrix.n
    a11 = matrix.entries[0][0]
    if n == 1:
        return a11 if matrix.ctx is None else matrix.ctx.reduce(a11)
    if n % 2 == 0:
        m = n // 2
        # 0-based: even 1-based rows -> 1,3,..;  odd 1-based cols -> 0,2,..
        b = _submatrix(matrix, list(range(1, n, 2)), list(range(0, n, 2)), "evenodd")
        c = _submatrix(matrix, list(range(0, n, 2)), list(range(1, n, 2)), "oddeven")
        scale = 1
    else:
        m = (n - 1) // 2
        b = _submatrix(matrix, list(range(1, n, 2)), list(range(2, n, 2)), "evenodd")
        c = _submatrix(matrix, list(range(2, n, 2)), list(range(1, n, 2)), "oddeven")
        scale = a11
    if mode == "per":
        value = scale * _half_per(b) * _half_per(c)
    else:
        value = scale * _half_det(b) * _half_det(c)
        if m % 2 == 1:
            value = -value
    return value if matrix.ctx is None else matrix.ctx.reduce(value)


# ---------------------------------------------------------------------------


def is_perfect_square(x: int) -> bool:
    """True iff x = y*y for some integer y (exact integer sqrt + final check)."""
    if x < 0:
        return False
    y = math.isqrt(x)
    return y * y == x
