"""
Tests for finite commutative rings, ring maps, G-rings and Burnside rings
"""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from errors import InconsistencyError, SearchCapExceeded, StructureError, UnsupportedOperation
from groups import FiniteGroup
from rings import (CornerRing, FunctionRing, GaloisField, GRing, IntegersMod, ProductRing, QuotientRing, RingHom,
                   Subring, TableRing, burnside_norm, burnside_ring, characteristic, check_ring_axioms,
                   ideal_generated, idempotents, is_field, is_nilpotent, is_ring_hom, mult_induction_oracle,
                   primitive_idempotents, relabeled, ring_homs, validate_ghost_norm)

F9 = GaloisField(3, 2)
Z6 = IntegersMod(6)
C2 = FiniteGroup.cyclic(2)
C3 = FiniteGroup.cyclic(3)


class TestFiniteRings:
    """Tests for the concrete ring kinds"""

    def test_integers_mod(self):
        R = IntegersMod(4)
        assert R.elements() == (0, 1, 2, 3)
        assert R.from_int(6) == 2
        assert R.from_int(-1) == 3
        assert R.power(3, 2) == 1
        assert not is_field(R)
        assert is_nilpotent(R, 2)
        assert check_ring_axioms(R) == []

    def test_galois_field_inverses(self):
        """Every nonzero element of GF(q) is invertible"""
        for F in (GaloisField(2, 2), GaloisField(2, 3), F9, GaloisField(5)):
            assert F.size == F.q
            for a in F.elements():
                if a != F.zero:
                    assert F.mul(a, F.inverse(a)) == F.one
            assert is_field(F)

    def test_galois_field_axioms(self):
        assert check_ring_axioms(GaloisField(2, 2)) == []
        assert check_ring_axioms(F9) == []

    def test_frobenius_has_order_k(self):
        F = GaloisField(2, 3)
        a = F.primitive_power(1)
        assert F.frobenius(a, 3) == a
        assert F.frobenius(a, 1) != a
        assert characteristic(F) == 2
        assert characteristic(F9) == 3

    def test_bad_field(self):
        with pytest.raises(StructureError):
            GaloisField(4)
        with pytest.raises(StructureError):
            GaloisField(2, 0)

    def test_decode_rejects(self):
        with pytest.raises(StructureError):
            GaloisField(2, 2).decode(4)
        with pytest.raises(StructureError):
            IntegersMod(3).decode(True)

    def test_product_ring_idempotents(self):
        R = ProductRing([GaloisField(2), GaloisField(2)])
        assert R.size == 4
        assert len(idempotents(R)) == 4
        assert sorted(primitive_idempotents(R)) == [(0, 1), (1, 0)]
        assert not is_field(R)

    def test_table_ring(self):
        """Z/2 written out as tables"""
        R = TableRing([[0, 1], [1, 0]], [[0, 0], [0, 1]])
        assert R.size == 2
        assert is_field(R)

    def test_table_ring_rejects_bad_tables(self):
        with pytest.raises(StructureError):
            TableRing([[0, 1], [1, 0]], [[0, 1], [1, 1]])
        with pytest.raises(StructureError):
            TableRing([[0, 1], [1, 1]], [[0, 0], [0, 1]])

    def test_subring(self):
        """The prime field inside GF(4)"""
        F4 = GaloisField(2, 2)
        S = Subring(F4, [0, 1])
        assert S.size == 2
        with pytest.raises(StructureError):
            Subring(F4, [0, 1, 2])

    def test_quotient(self):
        Q = QuotientRing(IntegersMod(4), {0, 2})
        assert Q.size == 2
        assert Q.reduce(3) == 1
        assert is_field(Q)
        with pytest.raises(StructureError):
            QuotientRing(IntegersMod(4), {0, 1})

    def test_corner_ring(self):
        R = ProductRing([GaloisField(3), GaloisField(2)])
        C = CornerRing(R, (1, 0))
        assert C.size == 3
        assert C.one == (1, 0)
        assert is_field(C)
        with pytest.raises(StructureError):
            CornerRing(R, (2, 0))

    def test_relabeled_is_isomorphic(self):
        rng = np.random.default_rng(5)
        R = relabeled(F9, rng)
        assert check_ring_axioms(R) == []
        back = RingHom(R, F9, {a: R.original(a) for a in R.elements()})
        assert is_ring_hom(back)

    def test_ideal_generated(self):
        assert ideal_generated(Z6, [4]) == frozenset({0, 2, 4})
        assert ideal_generated(Z6, [0]) == frozenset({0})

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
    def test_field_distributivity(self, a, b, c):
        assert F9.mul(a, F9.add(b, c)) == F9.add(F9.mul(a, b), F9.mul(a, c))

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 8), st.integers(0, 8))
    def test_field_frobenius_is_additive(self, a, b):
        assert F9.frobenius(F9.add(a, b)) == F9.add(F9.frobenius(a), F9.frobenius(b))


class TestRingHoms:
    """Tests for ring map enumeration"""

    def test_field_embeddings(self):
        """GF(4) embeds twice into GF(16) and not at all into GF(8)"""
        F4 = GaloisField(2, 2)
        assert len(ring_homs(F4, GaloisField(2, 4))) == 2
        assert ring_homs(F4, GaloisField(2, 3)) == []

    def test_zmod_maps(self):
        assert len(ring_homs(IntegersMod(4), GaloisField(2))) == 1
        assert ring_homs(GaloisField(2), IntegersMod(4)) == []
        assert len(ring_homs(Z6, Z6)) == 1

    def test_embedding_into(self):
        F4, F16 = GaloisField(2, 2), GaloisField(2, 4)
        hom = F4.embedding_into(F16)
        assert is_ring_hom(hom)
        assert hom.is_injective()
        with pytest.raises(StructureError):
            F4.embedding_into(GaloisField(2, 3))

    def test_kernel_and_compose(self):
        (hom,) = ring_homs(IntegersMod(4), GaloisField(2))
        assert hom.kernel() == frozenset({0, 2})
        ident = RingHom(GaloisField(2), hom.dst, {0: 0, 1: 1})
        assert ident.compose(hom).table == hom.table


class TestGRing:
    """Tests for rings with a group action"""

    def test_frobenius_action(self, c2):
        F4 = GaloisField(2, 2)
        A = GRing.frobenius(c2, F4)
        assert A.fixed_subring([0]) is F4
        assert A.fixed_subring(c2.elements).size == 2

    def test_frobenius_needs_divisibility(self, c2):
        with pytest.raises(StructureError):
            GRing.frobenius(c2, GaloisField(2, 3))

    def test_non_automorphism_rejected(self, c2):
        R = IntegersMod(3)
        swap = {0: 0, 1: 2, 2: 1}
        with pytest.raises(StructureError):
            GRing(c2, R, [{a: a for a in R.elements()}, swap])

    def test_trivial_action(self, c3):
        A = GRing.trivial(c3, Z6)
        assert A.act(1, 5) == 5
        assert A.fixed_subring(c3.elements) is Z6


class TestBurnsideRing:
    """Tests for Burnside rings via the table of marks"""

    def test_c2_marks(self, c2):
        A = burnside_ring(c2, c2.elements)
        assert A.rank == 2
        assert A.basis_names == ['e', 'G']
        assert A.table_of_marks.tolist() == [[2, 0], [1, 1]]
        assert A.one == (0, 1)

    def test_free_orbit_squares(self, c2):
        """[G/e]^2 = 2[G/e]"""
        A = burnside_ring(c2, c2.elements)
        free = A.basis_element(0)
        assert A.mul(free, free) == (2, 0)

    def test_s3_rank_and_diagonal(self, s3):
        A = burnside_ring(s3, s3.elements)
        assert A.rank == 4
        assert [A.table_of_marks[i, i] for i in range(4)] == [6, 1, 2, 1]

    def test_from_marks_rejects_non_images(self, c2):
        A = burnside_ring(c2, c2.elements)
        with pytest.raises(InconsistencyError):
            A.from_marks([1, 0])

    def test_is_infinite(self, c2):
        A = burnside_ring(c2, c2.elements)
        assert not A.enumerable
        with pytest.raises(UnsupportedOperation):
            A.size

    def test_hset_round_trip(self, s3):
        A = burnside_ring(s3, s3.elements)
        x = (1, 0, 2, 1)
        assert A.class_of_hset(A.hset_of(x)) == x
        with pytest.raises(UnsupportedOperation):
            A.hset_of((-1, 0, 0, 0))

    def test_norm_of_integer(self, c2):
        """nm_e^C2(2) = 2 + [C2/e]"""
        bottom = burnside_ring(c2, [0])
        top = burnside_ring(c2, c2.elements)
        two = bottom.from_int(2)
        assert burnside_norm(bottom, top, two) == (1, 2)

    def test_norm_matches_multiplicative_induction(self, c2, c4, s3):
        for group in (c2, c4, s3):
            report = validate_ghost_norm(group)
            assert report.passed
            assert report.elements_checked > 0

    def test_oracle_on_free_orbit(self, c2):
        """Maps from C2 into a two-point set: two fixed, one free orbit"""
        X = burnside_ring(c2, [0]).hset_of((2,))
        induced = mult_induction_oracle(c2, [0], c2.elements, X)
        assert induced.size == 4
        top = burnside_ring(c2, c2.elements)
        assert top.class_of_hset(induced) == (1, 2)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.integers(-3, 3), min_size=2, max_size=2), st.lists(st.integers(-3, 3), min_size=2, max_size=2))
    def test_marks_are_multiplicative(self, x, y):
        A = burnside_ring(C3, C3.elements)
        x, y = tuple(x), tuple(y)
        product = A.marks(A.mul(x, y))
        assert product == tuple(a * b for a, b in zip(A.marks(x), A.marks(y)))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(-4, 4), st.integers(-4, 4))
    def test_norm_is_multiplicative(self, a, b):
        """nm_e^C2 on virtual integers"""
        bottom = burnside_ring(C2, [0])
        top = burnside_ring(C2, C2.elements)
        x, y = bottom.from_int(a), bottom.from_int(b)
        assert burnside_norm(bottom, top, bottom.mul(x, y)) == top.mul(burnside_norm(bottom, top, x),
                                                                       burnside_norm(bottom, top, y))


class TestCaps:
    """Tests for the enumeration cap"""

    def test_large_field_refused(self):
        with pytest.raises(SearchCapExceeded):
            GaloisField(2, 17)

    def test_raised_cap(self, raised_cap):
        assert len(ProductRing([IntegersMod(512), IntegersMod(256)]).elements()) == 131072

    def test_default_cap_holds_fun_s3_f5(self):
        """Fun(S3, F5) has 5^6 elements and is still enumerated"""
        R = FunctionRing(GaloisField(5), FiniteGroup.symmetric(3).labels)
        assert len(R.elements()) == 15625

    def test_large_product_not_enumerated(self):
        R = ProductRing([IntegersMod(512), IntegersMod(256)])
        assert R.size == 131072
        with pytest.raises(SearchCapExceeded):
            R.elements()
