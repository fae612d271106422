"""Matrix builders: entry formulas, supports, file round-trips."""

import io

import pytest

from congruence_lab import matgen
from congruence_lab.matgen import (
    EntryKind,
    Matrix,
    NonUnitDenominator,
    cauchy_type_matrix,
    inverse_form_matrix,
    poly_eval_matrix,
    prime_indicator_matrix,
    quad_form_matrix,
    random_checkerboard_matrix,
    random_skew_checkerboard_matrix,
    read_matrix,
    write_matrix,
)
from congruence_lab.modnum import ModCtx, is_prime

from conftest import make_matrix


# ---------------------------------------------------------------------------
# quad_form_matrix


def test_quadform_exact_remark_matrix():
    m = quad_form_matrix(3, 1, 1, "full0", 1, None)
    assert m.entries == ((0, 1, 4), (1, 3, 7), (4, 7, 12))
    assert m.exact


def test_quadform_zero_coefficients_means_rank_one_rows():
    m = quad_form_matrix(4, 0, 0, "full0", 2, None)
    # entry(i, j) = i^4, constant along each row
    for i, row in enumerate(m.entries):
        assert set(row) == {i**4}


def test_quadform_modular_matches_exact_reduction():
    ctx = ModCtx.prime(13)
    exact = quad_form_matrix(13, 4, 7, "full0", 11, None)
    modular = quad_form_matrix(13, 4, 7, "full0", 11, ctx)
    for re, rm in zip(exact.entries, modular.entries):
        assert tuple(x % 13 for x in re) == rm


def test_quadform_from1_range_drops_zero_row():
    ctx = ModCtx.prime(5)
    m = quad_form_matrix(5, 1, 1, "from1", 3, ctx)
    assert m.n == 4
    # top-left is (1 + 1 + 1)^3 mod 5
    assert m.entries[0][0] == pow(3, 3, 5)


def test_quadform_large_modulus_python_path():
    """Moduli at or beyond 2^31 avoid the vectorized path but agree with it."""
    small = quad_form_matrix(6, 2, 3, "full0", 4, ModCtx.prime(10007))
    big_ctx = ModCtx.for_modulus(2**31 + 11)  # odd composite, forces pure python
    big = quad_form_matrix(6, 2, 3, "full0", 4, big_ctx)
    exact = quad_form_matrix(6, 2, 3, "full0", 4, None)
    for re, rs, rb in zip(exact.entries, small.entries, big.entries):
        assert tuple(x % 10007 for x in re) == rs
        assert tuple(x % (2**31 + 11) for x in re) == rb


def test_quadform_rejects_bad_range():
    with pytest.raises(ValueError):
        quad_form_matrix(4, 1, 1, "sideways", 1, None)
    with pytest.raises(ValueError):
        quad_form_matrix(1, 1, 1, "from1", 1, None)  # empty index set
    with pytest.raises(ValueError):
        quad_form_matrix(3, 1, 1, "full0", -1, None)


# ---------------------------------------------------------------------------
# cauchy_type_matrix


def test_cauchy_invdiff_2x2():
    ctx = ModCtx.for_modulus(9)
    m = cauchy_type_matrix(EntryKind.INV_DIFF, 2, "zero", ctx)
    assert m.entries == ((0, 8), (1, 0))


def test_cauchy_unit_diagonal():
    ctx = ModCtx.prime(7)
    m = cauchy_type_matrix(EntryKind.INV_DIFF, 3, "one", ctx)
    assert all(m.entries[i][i] == 1 for i in range(3))


def test_cauchy_entry_formulas():
    p = 11
    ctx = ModCtx.prime(p)
    inv = lambda x: pow(x % p, p - 2, p)
    n = 4
    md = cauchy_type_matrix(EntryKind.INV_DIFF, n, "zero", ctx)
    mr = cauchy_type_matrix(EntryKind.RATIO_SUM_DIFF, n, "zero", ctx)
    ms = cauchy_type_matrix(EntryKind.INV_DIFF_SQUARES, n, "one", ctx)
    mq = cauchy_type_matrix(EntryKind.RATIO_SUM_SQUARES, n, "one", ctx)
    for j in range(1, n + 1):
        for k in range(1, n + 1):
            if j == k:
                continue
            assert md.entries[j - 1][k - 1] == inv(j - k)
            assert mr.entries[j - 1][k - 1] == (j + k) * inv(j - k) % p
            assert ms.entries[j - 1][k - 1] == inv(j * j - k * k)
            assert mq.entries[j - 1][k - 1] == (j * j + k * k) * inv(j * j - k * k) % p


def test_cauchy_nonunit_denominator_is_reported():
    ctx = ModCtx.for_modulus(9)
    with pytest.raises(NonUnitDenominator) as e:
        cauchy_type_matrix(EntryKind.INV_DIFF, 6, "zero", ctx)
    assert e.value.gcd == 3
    # squares kind hits j + k = modulus even sooner
    with pytest.raises(NonUnitDenominator):
        cauchy_type_matrix(EntryKind.INV_DIFF_SQUARES, 3, "one", ctx)


def test_cauchy_needs_ctx_and_valid_kind():
    with pytest.raises(ValueError):
        cauchy_type_matrix(EntryKind.INV_DIFF, 3, "zero", None)
    with pytest.raises(ValueError):
        cauchy_type_matrix(EntryKind.QUAD_FORM_POW, 3, "zero", ModCtx.prime(7))
    with pytest.raises(ValueError):
        cauchy_type_matrix(EntryKind.INV_DIFF, 3, "two", ModCtx.prime(7))


# ---------------------------------------------------------------------------
# inverse_form_matrix


def test_inverse_form_half_range_entries():
    p = 7
    m = inverse_form_matrix(p, "half_range_sq")
    assert m.n == 3
    for i in range(1, 4):
        for j in range(1, 4):
            assert m.entries[i - 1][j - 1] == pow(i * i + j * j, p - 2, p)


def test_inverse_form_full_range_entries():
    p = 5
    m = inverse_form_matrix(p, "full_range_ij")
    assert m.n == 4
    for i in range(1, 5):
        for j in range(1, 5):
            assert m.entries[i - 1][j - 1] == pow(i * i - i * j + j * j, p - 2, p)


def test_inverse_form_raises_outside_residue_class():
    # p = 13 = 1 (mod 4): i^2 + j^2 can vanish (2^2 + 3^2 = 13)
    with pytest.raises(NonUnitDenominator):
        inverse_form_matrix(13, "half_range_sq")
    # p = 7 = 1 (mod 3): i^2 - ij + j^2 can vanish (1 - 3 + 9 = 7)
    with pytest.raises(NonUnitDenominator):
        inverse_form_matrix(7, "full_range_ij")
    with pytest.raises(ValueError):
        inverse_form_matrix(9, "half_range_sq")
    with pytest.raises(ValueError):
        inverse_form_matrix(7, "everything")


# ---------------------------------------------------------------------------
# prime indicator


def test_prime_indicator_small():
    assert prime_indicator_matrix(1).entries == ((1,),)
    assert prime_indicator_matrix(2).entries == ((1, 1), (1, 0))


def test_prime_indicator_entries_follow_primality():
    m = prime_indicator_matrix(9)
    for i in range(1, 10):
        for j in range(1, 10):
            assert m.entries[i - 1][j - 1] == (1 if is_prime(i + j) else 0)


# ---------------------------------------------------------------------------
# checkerboard builders


def _support_ok(entries):
    n = len(entries)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if (i + j) % 2 == 0 and i + j > 2:
                if entries[i - 1][j - 1] != 0:
                    return False
    return True


@pytest.mark.parametrize("n", range(1, 10))
def test_checkerboard_support(n, rng):
    m = random_checkerboard_matrix(n, rng.randrange(10**6))
    assert _support_ok(m.entries)
    assert m.exact


def test_checkerboard_is_seeded():
    a = random_checkerboard_matrix(6, 42)
    b = random_checkerboard_matrix(6, 42)
    c = random_checkerboard_matrix(6, 43)
    assert a.entries == b.entries
    assert a.entries != c.entries


def test_checkerboard_symmetric_flag():
    m = random_checkerboard_matrix(7, 5, symmetric=True)
    assert _support_ok(m.entries)
    for i in range(7):
        for j in range(7):
            assert m.entries[i][j] == m.entries[j][i]


def test_skew_checkerboard_is_skew_and_supported():
    m = random_skew_checkerboard_matrix(3, 11)
    assert m.n == 6
    assert _support_ok(m.entries)
    for i in range(6):
        for j in range(6):
            assert m.entries[i][j] == -m.entries[j][i]


def test_skew_checkerboard_rejects_nonpositive():
    with pytest.raises(ValueError):
        random_skew_checkerboard_matrix(0, 1)


# ---------------------------------------------------------------------------
# poly_eval_matrix


def test_polyeval_constant_is_all_ones():
    m = poly_eval_matrix([[1]], 2)
    assert m.entries == ((1, 1), (1, 1))


def test_polyeval_x_plus_j():
    # P(x, j) = x + j
    m = poly_eval_matrix([[0, 1], [1]], 3)
    for i in range(1, 4):
        for j in range(1, 4):
            assert m.entries[i - 1][j - 1] == i + j


def test_polyeval_x_squared():
    m = poly_eval_matrix([[0], [0], [1]], 4)
    for i in range(1, 5):
        row = m.entries[i - 1]
        assert set(row) == {i * i}


def test_polyeval_degree_gate():
    # x-degree must stay below n - 1
    with pytest.raises(ValueError):
        poly_eval_matrix([[0], [0], [1]], 3)
    with pytest.raises(ValueError):
        poly_eval_matrix([], 3)


# ---------------------------------------------------------------------------
# matrix container + file format


def test_matrix_shape_validation():
    with pytest.raises(ValueError):
        Matrix(2, ((1, 2),), None, "bad")
    with pytest.raises(ValueError):
        Matrix(2, ((1, 2), (3,)), None, "bad")


def test_matrix_rejects_noncanonical_residues():
    ctx = ModCtx.prime(5)
    with pytest.raises(ValueError):
        Matrix(1, ((7,),), ctx, "bad")


def test_roundtrip_exact(rng):
    m = make_matrix(5, rng)
    buf = io.StringIO()
    write_matrix(m, buf)
    buf.seek(0)
    back = read_matrix(buf)
    assert back.n == m.n and back.entries == m.entries and back.ctx is None


def test_roundtrip_modular(rng):
    ctx = ModCtx.for_modulus(49)
    m = make_matrix(4, rng, ctx=ctx)
    buf = io.StringIO()
    write_matrix(m, buf)
    text = buf.getvalue()
    assert text.splitlines()[0] == "4 49"
    back = read_matrix(io.StringIO(text))
    assert back.ctx is not None and back.ctx.modulus == 49
    assert back.entries == m.entries


def test_read_matrix_rejects_malformed():
    for text in ("", "2\n1 2\n3 4\n", "2 0\n1 2\n", "2 0\n1 2\n3\n", "1 6\n2\n"):
        with pytest.raises(ValueError):
            read_matrix(io.StringIO(text))


def test_read_matrix_rejects_out_of_range_residue():
    with pytest.raises(ValueError):
        read_matrix(io.StringIO("1 5\n7\n"))
