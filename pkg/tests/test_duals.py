"""Constructors for concrete duals: SU(2), finite groups, products."""

import math
from fractions import Fraction

import pytest

from hypergroups import (
    CharacterTable,
    ExactComplex,
    FiniteFunction,
    FiniteMeasure,
    InvalidTableError,
    LabelDomainError,
    UsageError,
    builtin_table,
    central_function,
    check_axioms,
    finite_group_dual,
    parse_character_table,
    product_dual,
)
from hypergroups.duals import ell_str, flat_irrep_index

half = Fraction(1, 2)


def z5_float_table() -> CharacterTable:
    """Cyclic group of order 5; character values are true complex floats."""
    w = [complex(math.cos(2 * math.pi * k / 5), math.sin(2 * math.pi * k / 5))
         for k in range(5)]
    irreps = [(1, [w[(j * k) % 5] for k in range(5)], f"chi{j}") for j in range(5)]
    return CharacterTable(5, [1] * 5, irreps, name="z5")


class TestSu2Dual:
    def test_spot_fusions(self, su2):
        assert su2.fuse(2, 1) == FiniteMeasure({1: Fraction(2, 6), 3: Fraction(4, 6)})
        for n in range(6):
            assert su2.fuse(0, n) == FiniteMeasure.point(n)

    def test_mass_sums_to_one_up_to_spin_six(self, su2):
        for n1 in range(13):
            for n2 in range(13):
                assert su2.fuse(n1, n2).total() == 1

    def test_support_is_stepped_interval(self, su2):
        for n1 in range(9):
            for n2 in range(9):
                expected = tuple(range(abs(n1 - n2), n1 + n2 + 1, 2))
                assert su2.fuse(n1, n2).support == expected

    def test_self_dual_involution(self, su2):
        for n in range(8):
            assert su2.involution(n) == n

    def test_haar_is_squared_dimension(self, su2):
        for n in range(20):
            assert su2.haar(n) == (n + 1) ** 2

    def test_label_strings(self):
        assert ell_str(0) == "0"
        assert ell_str(1) == "1/2"
        assert ell_str(4) == "2"

    def test_label_validation(self, su2):
        for bad in (-1, half, "1", 1.5, True):
            with pytest.raises(LabelDomainError):
                su2.check_label(bad)


class TestExactComplex:
    def test_arithmetic(self):
        i = ExactComplex(Fraction(0), Fraction(1))
        assert i * i == ExactComplex(Fraction(-1))
        assert i.conjugate() == ExactComplex(Fraction(0), Fraction(-1))
        assert (i + i.conjugate()) == ExactComplex(Fraction(0))
        assert i.abs_squared() == 1

    def test_coerce(self):
        assert ExactComplex.coerce(3) == ExactComplex(Fraction(3))
        with pytest.raises(UsageError):
            ExactComplex.coerce(1.5)


class TestCharacterTable:
    def test_builtins_validate(self):
        for name, n_irreps in [("z2", 2), ("z4", 4), ("s3", 3), ("q8", 5)]:
            table = builtin_table(name)
            assert table.n_irreps == n_irreps
            assert sum(d * d for d in table.dims) == table.group_order

    def test_orthogonality_failure_names_rows(self):
        with pytest.raises(InvalidTableError, match="orthogonality"):
            CharacterTable(6, [1, 3, 2], [
                (1, [1, 1, 1], "triv"),
                (1, [1, -1, 1], "sgn"),
                (2, [2, 0, 1], "rho"),  # corrupted last value
            ])

    def test_dimension_sum_mismatch(self):
        with pytest.raises(InvalidTableError, match="squared dimensions"):
            CharacterTable(6, [1, 3, 2], [(1, [1, 1, 1]), (1, [1, -1, 1])])

    def test_class_size_mismatch(self):
        with pytest.raises(InvalidTableError, match="class sizes"):
            CharacterTable(6, [1, 3, 3], [
                (1, [1, 1, 1]), (1, [1, -1, 1]), (2, [2, 0, -1])])

    def test_missing_trivial_irrep(self):
        i = ExactComplex(Fraction(0), Fraction(1))
        with pytest.raises(InvalidTableError, match="trivial"):
            CharacterTable(2, [1, 1], [
                (1, [1, i], "plus"),
                (1, [1, i.conjugate()], "minus"),
            ])

    def test_conjugate_matching_z4(self):
        z4 = builtin_table("z4")
        assert z4.conjugate_index(0) == 0
        assert z4.conjugate_index(1) == 3
        assert z4.conjugate_index(2) == 2

    def test_float_lane_conjugates(self):
        z5 = z5_float_table()
        assert z5.lane == "float"
        assert z5.conjugate_index(1) == 4
        assert z5.conjugate_index(2) == 3

    def test_multiplicities_s3(self):
        s3 = builtin_table("s3")
        rho = 2
        assert [s3.multiplicity(rho, rho, k) for k in range(3)] == [1, 1, 1]
        assert s3.multiplicity(1, 1, 0) == 1  # sgn ⊗ sgn = triv

    def test_first_column_must_be_dimension(self):
        with pytest.raises(InvalidTableError, match="identity class"):
            CharacterTable(2, [1, 1], [(1, [1, 1]), (1, [-1, 1])])

    def test_json_round_trip(self):
        s3 = builtin_table("s3")
        doc = s3.to_json_dict()
        again = parse_character_table(doc)
        assert again.dims == s3.dims
        assert again.names == s3.names
        assert again.irreps == s3.irreps

    def test_parse_rejects_malformed_values(self):
        with pytest.raises(InvalidTableError, match="values\\[1\\]"):
            parse_character_table({
                "group_order": 2, "classes": [1, 1],
                "irreps": [{"dim": 1, "values": [[1, 0], [1]]},
                           {"dim": 1, "values": [[1, 0], [-1, 0]]}],
            })

    def test_parse_rejects_bad_rational(self):
        with pytest.raises(InvalidTableError, match="bad rational"):
            parse_character_table({
                "group_order": 2, "classes": [1, 1],
                "irreps": [{"dim": 1, "values": [["1/0", 0], [1, 0]]},
                           {"dim": 1, "values": [[1, 0], [-1, 0]]}],
            })


class TestFiniteGroupDual:
    def test_s3_fusion(self, s3):
        rho = 2
        assert s3.fuse(rho, rho) == FiniteMeasure(
            {0: Fraction(1, 4), 1: Fraction(1, 4), 2: Fraction(1, 2)})
        assert s3.fuse(1, rho) == FiniteMeasure.point(rho)

    def test_abelian_dual_is_a_group(self, z4):
        for i in range(4):
            for j in range(4):
                mu = z4.fuse(i, j)
                assert len(mu) == 1 and mu.total() == 1

    def test_q8_haar(self, q8):
        assert [q8.haar(i) for i in range(5)] == [1, 1, 1, 1, 4]

    def test_involution_is_conjugation(self, z4):
        assert z4.involution(1) == 3
        assert z4.involution(3) == 1

    def test_z5_float_dual_involution(self):
        z5 = finite_group_dual(z5_float_table())
        f = FiniteFunction.point(1)
        from hypergroups import involute
        assert involute(z5, f) == FiniteFunction.point(4)

    def test_z5_fusion_exact_despite_float_table(self):
        z5 = finite_group_dual(z5_float_table())
        assert z5.fuse(1, 4) == FiniteMeasure.point(0)
        assert check_axioms(z5, z5.universe).ok

    def test_haar_equals_squared_dimension(self, s3, q8, z2, z4):
        for H in (s3, q8, z2, z4):
            for i in H.universe:
                assert H.haar(i) == H.table.dims[i] ** 2


class TestProductDual:
    def test_product_with_trivial_factor(self, s3):
        one = finite_group_dual(CharacterTable(1, [1], [(1, [1], "triv")], name="one"))
        prod = product_dual([s3, one])
        for i in range(3):
            for j in range(3):
                mu = prod.fuse((i, 0), (j, 0))
                base = s3.fuse(i, j)
                assert {x[0]: m for x, m in mu.items()} == dict(base.items())

    def test_haar_multiplies(self, s3):
        prod = product_dual([s3, s3])
        assert prod.haar((2, 2)) == 16

    def test_mixed_su2_finite(self, su2, s3):
        prod = product_dual([su2, s3])
        mu = prod.fuse((1, 2), (1, 2))
        assert set(mu.support) == {(a, b) for a in (0, 2) for b in (0, 1, 2)}
        for (a, b), mass in mu.items():
            assert mass == su2.fuse(1, 1).mass(a) * s3.fuse(2, 2).mass(b)
        assert prod.universe is None

    def test_axioms_pass_on_product(self, s3, z4):
        prod = product_dual([s3, z4])
        assert check_axioms(prod, prod.universe).ok

    def test_empty_product_rejected(self):
        with pytest.raises(UsageError):
            product_dual([])

    def test_tensor_table_matches_product_dual(self, s3, z4, s3_x_z4):
        table = s3_x_z4.character_table()
        assert table is not None
        assert table.group_order == 24
        assert sorted(table.dims) == sorted(
            d1 * d2 for d1 in s3.table.dims for d2 in z4.table.dims)
        for label in s3_x_z4.universe:
            flat = flat_irrep_index(s3_x_z4, label)
            assert table.dims[flat] == s3.table.dims[label[0]] * z4.table.dims[label[1]]
            assert s3_x_z4.haar(label) == table.dims[flat] ** 2


class TestCentralFunction:
    def test_identity_coefficient_gives_constant_one(self, su2, s3):
        torus = central_function(su2, FiniteFunction.point(0))
        for theta in (0.1, 1.0, 2.5):
            assert abs(torus(theta) - 1.0) < 1e-12
        classes = central_function(s3, FiniteFunction.point(s3.identity))
        assert classes.values() == (ExactComplex(Fraction(1)),) * 3

    def test_su2_spin_half_at_pi_thirds(self, su2):
        handle = central_function(su2, FiniteFunction.point(1))
        assert abs(handle(math.pi / 3) - 2.0) < 1e-12

    def test_s3_rho_class_values(self, s3):
        handle = central_function(s3, FiniteFunction.point(2))
        assert handle.values() == tuple(
            ExactComplex(Fraction(v)) for v in (4, 0, -2))

    def test_linearity(self, s3):
        v1 = FiniteFunction({0: 1, 2: half})
        v2 = FiniteFunction({1: Fraction(2), 2: half})
        lhs = central_function(s3, v1 + v2).values()
        h1 = central_function(s3, v1).values()
        h2 = central_function(s3, v2).values()
        assert lhs == tuple(a + b for a, b in zip(h1, h2))

    def test_product_dual_central_values(self, s3_x_z4):
        handle = central_function(s3_x_z4, FiniteFunction.point((2, 1)))
        # at the identity class: d * chi(e) = 2 * 2
        assert handle(0) == ExactComplex(Fraction(4))

    def test_torus_handle_has_no_class_values(self, su2):
        handle = central_function(su2, FiniteFunction.point(2))
        with pytest.raises(UsageError):
            handle.values()

    def test_label_domain_checked(self, s3):
        with pytest.raises(LabelDomainError):
            central_function(s3, FiniteFunction.point(7))
