"""
Tests for Nakaoka ideals, quotients and the field-like decision
"""
import pytest

from constructions import coinduce, constant, zero_functor
from errors import StructureError
from ideals_fields import (NakaokaIdeal, enumerate_ideals, ideal_closure, is_field_like, is_ideal, kernel,
                           quotient, stable_ideal_witness)
from rings import GaloisField, IntegersMod, ProductRing
from tambara_core import check_axioms, check_hom


class TestIdeals:
    """Tests for closure and the ideal clauses"""

    def test_closure_of_two(self, constant_z4):
        """2 at the bottom generates ({0, 2}, {0}) since tr(2) = 4 = 0"""
        I = ideal_closure(constant_z4, {0: [2]})
        assert I.sizes() == [2, 1]
        assert I.to_dict() == {'e': [0, 2], 'G': [0]}
        assert is_ideal(constant_z4, I)

    def test_closure_from_pairs(self, constant_z4):
        assert ideal_closure(constant_z4, [(1, 2)]).sizes() == [2, 2]

    def test_closure_rejects_foreign_elements(self, constant_z4):
        with pytest.raises(StructureError):
            ideal_closure(constant_z4, {0: [7]})

    def test_trivial_ideals(self, constant_f3):
        assert is_ideal(constant_f3, NakaokaIdeal.zero(constant_f3))
        assert is_ideal(constant_f3, NakaokaIdeal.unit(constant_f3))
        assert NakaokaIdeal.zero(constant_f3).is_zero()
        assert NakaokaIdeal.unit(constant_f3).is_unit()

    def test_restriction_clause(self, constant_z4):
        report = is_ideal(constant_z4, [{0}, {0, 2}])
        assert not report.valid
        assert report.clause == 'restriction'

    def test_transfer_clause(self, constant_f3):
        """tr(1) = 2 must land in the top level"""
        report = is_ideal(constant_f3, [{0, 1, 2}, {0}])
        assert report.clause == 'transfer'

    def test_norm_clause(self, c2):
        """nm(x + 3) - nm(x) = 3 in Z/6, so {0} cannot sit over {0, 3}"""
        T = constant(c2, IntegersMod(6))
        report = is_ideal(T, [{0, 3}, {0}])
        assert report.clause == 'norm'

    def test_weyl_clause(self, coinduced_f2):
        report = is_ideal(coinduced_f2, [{(0, 0), (1, 0)}, {(0, 0)}])
        assert report.clause == 'Weyl'

    def test_ring_ideal_clause(self, constant_z4):
        report = is_ideal(constant_z4, [{0, 1}, {0}])
        assert report.clause == 'ring ideal'
        assert is_ideal(constant_z4, [{0}]).clause == 'shape'

    def test_enumerate(self, constant_z4, constant_f3):
        """Constant Z/4 over C2 has four ideals"""
        ideals = enumerate_ideals(constant_z4)
        assert len(ideals) == 4
        assert sorted(I.sizes() for I in ideals) == [[1, 1], [2, 1], [2, 2], [4, 4]]
        assert len(enumerate_ideals(constant_f3)) == 2


class TestQuotients:
    """Tests for quotients and kernels"""

    def test_quotient_is_tambara(self, constant_z4):
        I = ideal_closure(constant_z4, {0: [2]})
        Q, projection = quotient(constant_z4, I)
        assert [Q.level(i).size for i in range(Q.num_levels)] == [2, 4]
        assert check_axioms(Q, seed=1, budget=24).passed
        assert check_hom(projection).valid
        assert kernel(projection) == I

    def test_quotient_needs_ideal(self, constant_z4):
        bad = NakaokaIdeal(constant_z4, (frozenset({0}), frozenset({0, 2})))
        with pytest.raises(StructureError):
            quotient(constant_z4, bad)


class TestFieldLike:
    """Tests for the field-like decision"""

    @pytest.mark.parametrize('name', ['constant_f3', 'coinduced_f2', 'frobenius_f4'])
    def test_field_like(self, name, request):
        T = request.getfixturevalue(name)
        report = is_field_like(T, exhaustive=True)
        assert report.field_like
        assert report.ideal_count == 2
        assert report.witness is None

    def test_constant_f2(self, c2):
        """The norm x -> x^2 rules out (F2, 0)"""
        assert is_field_like(constant(c2, GaloisField(2))).field_like

    def test_local_factor(self, constant_z4):
        report = is_field_like(constant_z4)
        assert not report.field_like
        assert report.reason == 'local factor is not a field'
        assert report.witness.sizes() == [2, 1]
        assert report.witness_element == {'level': 'e', 'element': 2}
        assert report.exhaustive and report.ideal_count == 4

    def test_non_transitive_idempotents(self, c2):
        T = constant(c2, ProductRing([GaloisField(2), GaloisField(2)]))
        report = is_field_like(T)
        assert not report.field_like
        assert 'transitively' in report.reason

    def test_non_injective_restriction(self, constant_z4):
        Q, _ = quotient(constant_z4, ideal_closure(constant_z4, {0: [2]}))
        report = is_field_like(Q)
        assert not report.field_like
        assert report.reason.startswith('restriction from G')

    def test_zero_functor(self, c2):
        report = is_field_like(zero_functor(c2))
        assert not report.field_like
        assert report.witness.is_unit()

    def test_stable_witness(self, coinduced_f2, c2):
        assert stable_ideal_witness(coinduced_f2) is None
        assert stable_ideal_witness(coinduce(c2, IntegersMod(4)))[0] == 'local factor is not a field'

    def test_report_dict(self, constant_z4):
        data = is_field_like(constant_z4).to_dict()
        assert data['witness_ideal'] == {'e': [0, 2], 'G': [0]}

    def test_decision_is_logged(self, constant_f3, capture_logs):
        is_field_like(constant_f3)
        assert 'field-like: True' in capture_logs.getvalue()
