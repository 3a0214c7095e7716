"""
Tests for Tambara functor operations, the bispan action and the axiom checkers
"""
import pytest

from bispans import n_of, r_of, t_of
from config import CheckConfig
from constructions import burnside_tambara, coinduce, constant, fixed_point
from errors import StructureError, UnsupportedOperation
from gsets import GMap, GSet
from rings import GaloisField, GRing, IntegersMod, RingHom
from tambara_core import (TableTambara, TambaraHom, check_axioms, check_frobenius, check_hom, check_mackey,
                          enumerate_homs, eval_bispan, mackey_terms, weyl_gring)


class TestOperations:
    """Tests for res, tr, nm and Weyl conjugation"""

    def test_constant_operations(self, constant_f3):
        """tr multiplies by the index, nm raises to it"""
        T = constant_f3
        assert T.res(0, 1, 2) == 2
        assert T.tr(0, 1, 1) == 2
        assert T.nm(0, 1, 2) == 1
        assert T.weyl(0, 1, 2) == 2

    def test_coinduced_operations(self, coinduced_f2):
        """Fun(C2, F2): restriction forgets, transfer sums over the orbit"""
        T = coinduced_f2
        assert T.level(0).size == 4
        assert T.level(1).size == 2
        assert T.weyl(0, 1, (1, 0)) == (0, 1)
        assert T.tr(0, 1, (1, 0)) == (1, 1)
        assert T.nm(0, 1, (1, 0)) == (0, 0)
        assert T.res(0, 1, (1, 1)) == (1, 1)

    def test_burnside_operations(self, burnside_c2):
        T = burnside_c2
        assert T.res(0, 1, (1, 0)) == (2,)
        assert T.tr(0, 1, (1,)) == (1, 0)
        assert T.nm(0, 1, (2,)) == (1, 2)

    def test_level_mismatch(self, constant_f3):
        """Operations check subconjugacy and membership"""
        with pytest.raises(StructureError):
            constant_f3.res(1, 0, 1)
        with pytest.raises(StructureError):
            constant_f3.tr(0, 1, 5)

    def test_mrc(self, constant_f3, coinduced_f2, burnside_c2):
        assert constant_f3.mrc()
        assert coinduced_f2.mrc()
        assert not burnside_c2.mrc()

    def test_stored_keys(self, constant_f3, s3):
        assert constant_f3.stored_keys() == [(0, 0, 0), (0, 1, 0), (1, 1, 0)]
        T = constant(s3, GaloisField(2))
        for i, j, c in T.stored_keys():
            assert T.lattice.is_valid(i, j, c)

    def test_summary(self, coinduced_f2):
        summary = coinduced_f2.summary()
        assert summary['levels'] == {'e': 'Fun(2, GF(2))', 'G': 'Fun(2, GF(2))[2]'}
        assert summary['enumerable']


class TestTableTambara:
    """Tests for table-backed functors"""

    def test_to_table_agrees(self, frobenius_f4):
        table = frobenius_f4.to_table()
        for i, j, c in frobenius_f4.stored_keys():
            for x in frobenius_f4.level(i).elements():
                assert table.nm(i, j, x, along=c) == frobenius_f4.nm(i, j, x, along=c)
                assert table.tr(i, j, x, along=c) == frobenius_f4.tr(i, j, x, along=c)

    def test_routes_through_weyl(self, s3):
        """Non-stored orbit maps are computed from stored ones"""
        T = coinduce(s3, GaloisField(2))
        table = T.to_table()
        lattice = T.lattice
        for i in range(len(lattice)):
            for j in range(len(lattice)):
                for c in s3.elements:
                    if not lattice.is_valid(i, j, c):
                        continue
                    for y in list(T.level(j).elements())[:8]:
                        assert table.res(i, j, y, along=c) == T.res(i, j, y, along=c)

    def test_missing_table_rejected(self, constant_f3):
        table = constant_f3.to_table()
        res = dict(table.res_tables)
        del res[(0, 1, 0)]
        with pytest.raises(StructureError):
            TableTambara(table.group, table.levels(), res, table.tr_tables, table.nm_tables, table.conj_tables)

    def test_to_dict_keys(self, constant_f3):
        data = constant_f3.to_dict()
        assert set(data['res']) == {'e<e@e', 'e<G@e', 'G<G@e'}
        assert data['flags'] == {'enumerable': True, 'mrc': True}

    def test_burnside_cannot_tabulate(self, burnside_c2):
        with pytest.raises(UnsupportedOperation):
            burnside_c2.to_table()


class TestBispanAction:
    """Tests for evaluating bispans"""

    def test_generators(self, constant_f3, c2):
        free = GSet.regular(c2)
        collapse = GMap.constant(free, GSet.trivial(c2))
        assert eval_bispan(constant_f3, t_of(collapse), (1,)) == (2,)
        assert eval_bispan(constant_f3, n_of(collapse), (2,)) == (1,)
        assert eval_bispan(constant_f3, r_of(collapse), (2,)) == (2,)

    def test_empty_norm_is_one(self, constant_f3, c2):
        """Norm along the empty set into a point is 1"""
        empty = GSet.empty(c2)
        b = n_of(GMap.constant(empty, GSet.trivial(c2)))
        assert eval_bispan(constant_f3, b, ()) == (1,)

    def test_wrong_arity(self, constant_f3, c2):
        b = t_of(GMap.identity(GSet.regular(c2)))
        with pytest.raises(StructureError):
            eval_bispan(constant_f3, b, (1, 1))


class TestAxiomChecks:
    """Tests for the randomized and exhaustive axiom checkers"""

    @pytest.mark.parametrize('name', ['constant_f3', 'constant_z4', 'coinduced_f2', 'frobenius_f4'])
    def test_constructions_pass(self, name, request):
        T = request.getfixturevalue(name)
        report = check_axioms(T, seed=CheckConfig.DEFAULT_SEED, budget=36)
        assert report.passed, report.violations[:1]
        assert report.pairs_checked + report.skipped == 36
        assert check_mackey(T) == []
        assert check_frobenius(T) == []

    def test_burnside_passes(self, burnside_c2):
        report = check_axioms(burnside_c2, seed=3, budget=24)
        assert report.passed, report.violations[:1]

    def test_s3_constant(self, s3):
        report = check_axioms(constant(s3, GaloisField(2)), seed=1, budget=18)
        assert report.passed

    def test_seed_is_reproducible(self, constant_f3):
        first = check_axioms(constant_f3, seed=42, budget=12).to_dict()
        second = check_axioms(constant_f3, seed=42, budget=12).to_dict()
        assert first == second

    def test_corrupted_transfer_detected(self, constant_f3):
        """Breaking tr(1) = 2 violates Mackey and Frobenius"""
        table = constant_f3.to_table()
        broken = dict(table.tr_tables[(0, 1, 0)])
        broken[1] = 1
        T = table.with_table('tr', (0, 1, 0), broken)
        assert check_mackey(T)
        assert check_frobenius(T)


class TestAxiomGrid:
    """Seeded axiom checks of every construction over C2, C3, C4 and S3"""

    FUNCTORS = {
        'burnside': burnside_tambara,
        'constant_f2': lambda G: constant(G, GaloisField(2)),
        'constant_f3': lambda G: constant(G, GaloisField(3)),
        'constant_z4': lambda G: constant(G, IntegersMod(4)),
        'coinduce_f2': lambda G: coinduce(G, GaloisField(2)),
        'coinduce_f3': lambda G: coinduce(G, GaloisField(3)),
        'coinduce_f4': lambda G: coinduce(G, GaloisField(2, 2)),
    }

    @pytest.mark.parametrize('group', ['c2', 'c3', 'c4', 's3'])
    @pytest.mark.parametrize('name', list(FUNCTORS))
    def test_constructions(self, name, group, request):
        T = self.FUNCTORS[name](request.getfixturevalue(group))
        report = check_axioms(T, seed=CheckConfig.DEFAULT_SEED, budget=500)
        assert report.passed, report.violations[:1]
        assert report.pairs_checked + report.skipped == 500
        assert report.evaluations >= report.pairs_checked

    @pytest.mark.parametrize('group,field', [('c2', (2, 2)), ('c4', (2, 4))])
    def test_frobenius_fixed_points(self, group, field, request):
        G = request.getfixturevalue(group)
        T = fixed_point(GRing.frobenius(G, GaloisField(*field)))
        report = check_axioms(T, seed=CheckConfig.DEFAULT_SEED, budget=500)
        assert report.passed, report.violations[:1]
        assert report.pairs_checked + report.skipped == 500


class TestMackeyTerms:
    """Tests for the double coset decomposition of res tr"""

    @pytest.mark.parametrize('group', ['c2', 'c3', 'c4', 's3'])
    def test_orbits_fill_the_fiber(self, group, request):
        """The H_k-orbits of the fiber of G/H_i -> G/H_j have total size [H_j : H_i]"""
        G = request.getfixturevalue(group)
        lattice = G.subgroup_lattice
        n = len(lattice)
        for i, j, c in [(i, j, c) for i in range(n) for j in range(n) for c in lattice.orbit_map_types(i, j)]:
            for k in range(n):
                for d in lattice.orbit_map_types(k, j):
                    terms = mackey_terms(lattice, i, j, c, k, d)
                    assert terms
                    for l, u, v in terms:
                        assert lattice.is_valid(l, k, u) and lattice.is_valid(l, i, v)
                    hk = len(lattice.rep(k))
                    sizes = sum(hk // len(lattice.rep(l)) for l, _, _ in terms)
                    assert sizes == len(lattice.rep(j)) // len(lattice.rep(i))

    def test_c2_bottom(self, c2):
        """res_e tr_e^C2 x = x + gx"""
        assert mackey_terms(c2.subgroup_lattice, 0, 1, 0, 0, 0) == [(0, 0, 0), (0, 0, 1)]

    @pytest.mark.parametrize('group', ['c4', 's3'])
    def test_larger_groups_pass(self, group, request):
        G = request.getfixturevalue(group)
        for T in (constant(G, GaloisField(3)), coinduce(G, GaloisField(2))):
            assert check_mackey(T) == []

    def test_broken_norm_is_not_a_mackey_failure(self, constant_f3):
        """Mackey only sees res and tr"""
        table = constant_f3.to_table()
        broken = dict(table.nm_tables[(0, 1, 0)])
        broken[2] = 2
        assert check_mackey(table.with_table('nm', (0, 1, 0), broken)) == []


class TestHoms:
    """Tests for Tambara maps"""

    def test_identity_is_valid(self, coinduced_f2):
        assert check_hom(TambaraHom.identity(coinduced_f2)).valid

    def test_non_commuting_map(self, coinduced_f2):
        """Projection onto the first coordinate does not commute with conjugation"""
        T = coinduced_f2
        F2 = GaloisField(2)
        target = constant(T.group, F2)
        phi = TambaraHom.from_functions(T, target, [lambda x: x[0], lambda x: x[0]])
        report = check_hom(phi)
        assert not report.valid

    def test_enumerate_endomorphisms(self, constant_f3):
        homs = enumerate_homs(constant_f3, constant_f3)
        assert len(homs) == 1
        assert homs[0] == TambaraHom.identity(constant_f3)

    def test_coinduced_to_constant(self, c2):
        """No Tambara maps from coinduced F3 to constant F3"""
        F3 = GaloisField(3)
        assert enumerate_homs(coinduce(c2, F3), constant(c2, F3)) == []

    def test_coinduced_endomorphisms(self, coinduced_f2):
        """The Weyl action gives two automorphisms"""
        assert len(enumerate_homs(coinduced_f2, coinduced_f2)) == 2

    def test_weyl_gring(self, coinduced_f2):
        A = weyl_gring(coinduced_f2)
        assert A.act(1, (1, 0)) == (0, 1)
        assert A.fixed_subring(coinduced_f2.group.elements).size == 2

    def test_different_groups(self, constant_f3, c3):
        other = constant(c3, GaloisField(3))
        with pytest.raises(StructureError):
            TambaraHom(constant_f3, other, [RingHom(r, r, {a: a for a in r.elements()}) for r in constant_f3.levels()])
