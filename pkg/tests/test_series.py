import pytest
from hypothesis import given, settings, strategies as st

from chiralnet import series as S
from chiralnet.series import BivariateSeries, UnivariateSeries

from oracles import fermion_character_counts, partition_counts, pentagonal_euler, product_euler

# frozen from oracles.partition_counts(20)
PARTITIONS_20 = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176, 231, 297, 385, 490, 627]


def test_frozen_partitions_match_enumeration():
    assert partition_counts(20) == PARTITIONS_20


def uni(vals, t2_max):
    """Integer-exponent coefficient list -> series in doubled units."""
    return UnivariateSeries({2 * k: v for k, v in enumerate(vals)}, t2_max)


# ---------------------------------------------------------------- mul


def test_mul_identity():
    assert S.mul(UnivariateSeries.one(10), UnivariateSeries.one(10)) == UnivariateSeries.one(10)


def test_mul_geometric_inverse():
    geo = uni([1] * 11, 20)
    assert S.mul(uni([1, -1], 20), geo) == UnivariateSeries.one(20)


def test_euler_times_partitions_is_one():
    assert S.mul(S.euler_phi(40), S.partition_gf(40)) == UnivariateSeries.one(40)


def test_mul_rejects_mismatched_orders():
    with pytest.raises(ValueError, match="truncation orders differ"):
        S.mul(UnivariateSeries.one(4), UnivariateSeries.one(6))


def test_mul_rejects_mixed_types():
    with pytest.raises(TypeError):
        S.mul(UnivariateSeries.one(4), BivariateSeries.one(4))


def test_mul_truncates():
    a = uni([0, 1], 4)  # t
    cube = S.mul(S.mul(a, a), a)
    assert cube == UnivariateSeries({}, 4)


# ---------------------------------------------------------------- invert_unit


def test_invert_one():
    assert S.invert_unit(UnivariateSeries.one(8)) == UnivariateSeries.one(8)


def test_invert_geometric():
    assert S.invert_unit(uni([1, -1], 16)) == uni([1] * 9, 16)


def test_invert_euler_gives_partitions():
    inv = S.invert_unit(S.euler_phi(40))
    assert inv.integer_coeffs()[:7] == [1, 1, 2, 3, 5, 7, 11]
    assert inv.integer_coeffs() == PARTITIONS_20


@pytest.mark.parametrize("const", [0, 2, -1])
def test_invert_rejects_non_unit(const):
    with pytest.raises(ValueError):
        S.invert_unit(uni([const, 1], 6))


# ---------------------------------------------------------------- euler_phi / partition_gf


def test_euler_order_zero():
    assert S.euler_phi(0) == UnivariateSeries.one(0)


def test_euler_order_four_linear_coefficient():
    assert S.euler_phi(8)[2] == -1


def test_euler_matches_pentagonal_and_product_oracles():
    want = pentagonal_euler(20)
    assert want == product_euler(20)
    assert S.euler_phi(40).integer_coeffs() == want


def test_euler_has_no_half_integer_terms():
    assert all(k % 2 == 0 for k in S.euler_phi(40).coeffs)


@pytest.mark.parametrize("n, count", [(0, 1), (4, 5), (5, 7)])
def test_partition_examples(n, count):
    assert S.partition_gf(40)[2 * n] == count


# ---------------------------------------------------------------- characters


def test_fermionic_character_examples():
    ch = S.fermionic_character(40)
    assert ch[(1, 1)] == 1
    assert ch[(2, 0)] == 1
    assert ch[(0, 0)] == 1


def test_fermionic_character_matches_subset_enumeration():
    counts = fermion_character_counts(16)
    assert S.fermionic_character(16).coeffs == dict(counts)


def test_theta_jacobi_examples():
    th = S.theta_jacobi(40)
    assert th[(0, 0)] == 1
    assert th[(4, 2)] == 1
    assert th[(3, 1)] == 1


@pytest.mark.parametrize("order", [0, 1, 7, 20, 40])
def test_jacobi_identity(order):
    rep = S.jacobi_identity_check(order)
    assert rep.passed, rep.line()


def test_jacobi_negative_control_names_coefficient():
    rep = S.jacobi_identity_check(40, corrupt=(4, 0, 1))
    assert not rep.passed
    assert rep.detail == {"t2": 4, "charge": 0, "product": 3, "theta": 2}
    assert "z^0 t^2" in rep.measured


@pytest.mark.parametrize("order", range(0, 41))
def test_z0_slice_is_partitions(order):
    assert S.z0_slice(S.fermionic_character(order)) == S.partition_gf(order)


def test_z0_slice_examples():
    assert S.z0_slice(S.theta_jacobi(40)) == S.partition_gf(40)
    assert S.z0_slice(BivariateSeries.one(6)) == UnivariateSeries.one(6)
    assert S.z0_slice(S.fermionic_character(40))[6] == 3


def test_characters_nonnegative():
    for b in (S.fermionic_character(40), S.theta_jacobi(40)):
        assert all(v > 0 for v in b.coeffs.values())


def test_character_charge_symmetry():
    ch = S.fermionic_character(30)
    assert all(ch[(t2, -q)] == v for (t2, q), v in ch.coeffs.items())


def test_dump_is_sorted_and_labelled():
    rows = S.dump(S.fermionic_character(2))
    assert [(r["t2"], r["z"]) for r in rows] == sorted((r["t2"], r["z"]) for r in rows)
    assert {"t": "1/2", "t2": 1, "z": 1, "coeff": 1} in rows


# ---------------------------------------------------------------- properties

ORDER = 12


@st.composite
def sparse_series(draw, unit=False):
    keys = draw(st.lists(st.integers(0, ORDER), max_size=6))
    coeffs = {k: draw(st.integers(-50, 50)) for k in keys}
    if unit:
        coeffs[0] = 1
    return UnivariateSeries(coeffs, ORDER)


@given(sparse_series(), sparse_series())
def test_mul_commutative(a, b):
    assert S.mul(a, b) == S.mul(b, a)


@given(sparse_series(), sparse_series(), sparse_series())
def test_mul_associative(a, b, c):
    assert S.mul(S.mul(a, b), c) == S.mul(a, S.mul(b, c))


@given(sparse_series(unit=True))
def test_invert_is_inverse(a):
    assert S.mul(a, S.invert_unit(a)) == UnivariateSeries.one(ORDER)


@st.composite
def sparse_bivariate(draw):
    keys = draw(st.lists(st.tuples(st.integers(0, ORDER), st.integers(-3, 3)), max_size=5))
    return BivariateSeries({k: draw(st.integers(-20, 20)) for k in keys}, ORDER)


@settings(max_examples=50)
@given(sparse_bivariate(), sparse_bivariate(), sparse_bivariate())
def test_bivariate_mul_associative_and_commutative(a, b, c):
    assert S.mul(a, b) == S.mul(b, a)
    assert S.mul(S.mul(a, b), c) == S.mul(a, S.mul(b, c))


@given(st.integers(0, 60))
def test_partition_gf_inverts_euler(order):
    assert S.mul(S.euler_phi(order), S.partition_gf(order)) == UnivariateSeries.one(order)
