"""
Tests for finite groups and subgroup lattices
"""
import pytest

from errors import StructureError
from groups import FiniteGroup


class TestFiniteGroup:
    """Tests for FiniteGroup construction and basic operations"""

    def test_cyclic_labels_and_inverses(self, c4):
        """Cyclic groups are labelled by powers of g"""
        assert c4.labels == ('e', 'g', 'g^2', 'g^3')
        assert c4.name == 'C4'
        assert c4.inv == (0, 3, 2, 1)
        assert c4.index('g^2') == 2

    def test_element_order(self, c4, s3):
        """Element orders divide the group order"""
        assert [c4.element_order(g) for g in c4.elements] == [1, 4, 2, 4]
        assert sorted(s3.element_order(g) for g in s3.elements) == [1, 2, 2, 2, 3, 3]

    def test_symmetric_and_dihedral(self, s3):
        """Permutation groups get cycle labels"""
        assert s3.order == 6
        assert s3.labels[0] == 'e'
        d8 = FiniteGroup.dihedral(4)
        assert d8.order == 8
        assert d8.name == 'D8'
        assert FiniteGroup.klein().order == 4

    def test_from_name(self):
        """Names resolve to the standard families"""
        assert FiniteGroup.from_name('S3').order == 6
        assert FiniteGroup.from_name('D8').order == 8
        assert FiniteGroup.from_name('C5').order == 5
        assert FiniteGroup.from_name('trivial').order == 1
        with pytest.raises(StructureError):
            FiniteGroup.from_name('Q8')
        with pytest.raises(StructureError):
            FiniteGroup.from_name('D7')

    def test_from_table(self):
        """A multiplication table with labels builds a group"""
        G = FiniteGroup.from_table(['1', 'a'], [['1', 'a'], ['a', '1']], '1', name='Z2')
        assert G.order == 2
        assert G.label(0) == '1'
        assert G.m(1, 1) == 0

    def test_from_table_rejects_bad_tables(self):
        """Non-Latin tables are rejected"""
        with pytest.raises(StructureError):
            FiniteGroup(['e', 'a'], [[0, 1], [1, 1]])
        with pytest.raises(StructureError):
            FiniteGroup(['e', 'a'], [[0, 1]])

    def test_from_permutations(self):
        """Generators given as cycles generate the whole group"""
        G = FiniteGroup.from_permutations([[[0, 1, 2]], [[0, 1]]], name='S3')
        assert G.order == 6

    def test_unknown_label(self, c2):
        """Unknown element labels raise"""
        with pytest.raises(StructureError):
            c2.index('h')

    def test_conjugate_and_normalizer(self, s3):
        """Conjugates of a transposition subgroup are the three C2s"""
        lattice = s3.subgroup_lattice
        C2 = lattice.rep(lattice.index_of_name('C2'))
        conjugates = {s3.conjugate(C2, c) for c in s3.elements}
        assert len(conjugates) == 3
        assert s3.normalizer(C2) == C2

    def test_cosets(self, s3):
        """Left cosets partition the group"""
        lattice = s3.subgroup_lattice
        C3 = lattice.rep(lattice.index_of_name('C3'))
        cosets = s3.left_cosets(C3)
        assert len(cosets) == 2
        assert set().union(*cosets) == set(s3.elements)

    def test_double_cosets(self, s3):
        """C2 \\ S3 / C2 has two double cosets"""
        lattice = s3.subgroup_lattice
        C2 = lattice.rep(lattice.index_of_name('C2'))
        assert len(s3.double_cosets(C2, C2)) == 2

    def test_weyl_groups(self, s3):
        """Weyl group orders in S3"""
        lattice = s3.subgroup_lattice
        assert s3.weyl_group(lattice.rep(0)).order == 6
        assert s3.weyl_group(lattice.rep(lattice.index_of_name('C2'))).order == 1
        assert s3.weyl_group(lattice.rep(lattice.index_of_name('C3'))).order == 2

    def test_subgroup_group(self, s3):
        """A subgroup becomes a group with an embedding"""
        lattice = s3.subgroup_lattice
        C3 = lattice.rep(lattice.index_of_name('C3'))
        child, embed = s3.subgroup_group(C3)
        assert child.order == 3
        assert set(embed) == C3
        assert child.name == 'S3:C3'


class TestSubgroupLattice:
    """Tests for subgroup-conjugacy classes and orbit maps"""

    def test_class_names(self, c2, c4, s3, trivial_group):
        """Classes are named e, G and by order in between"""
        assert [c.name for c in c2.subgroup_lattice.classes] == ['e', 'G']
        assert [c.name for c in c4.subgroup_lattice.classes] == ['e', 'C2', 'G']
        assert [c.name for c in s3.subgroup_lattice.classes] == ['e', 'C2', 'C3', 'G']
        assert [c.name for c in trivial_group.subgroup_lattice.classes] == ['e']

    def test_klein_names_are_distinguished(self):
        """Repeated names get letter suffixes"""
        names = [c.name for c in FiniteGroup.klein().subgroup_lattice.classes]
        assert names == ['e', 'C2a', 'C2b', 'C2c', 'G']

    def test_bottom_and_top(self, s3):
        lattice = s3.subgroup_lattice
        assert lattice.rep(lattice.bottom) == frozenset({0})
        assert lattice.rep(lattice.top) == frozenset(s3.elements)

    def test_subconjugacy(self, s3):
        """C2 and C3 are incomparable"""
        lattice = s3.subgroup_lattice
        C2, C3 = lattice.index_of_name('C2'), lattice.index_of_name('C3')
        assert lattice.subconjugate(0, C2)
        assert lattice.subconjugate(C2, lattice.top)
        assert not lattice.subconjugate(C2, C3)
        assert not lattice.subconjugate(C3, C2)
        assert lattice.subgroup_index(0, lattice.top) == 6

    def test_class_of_conjugate(self, s3):
        """Every conjugate of a representative lies in its class"""
        lattice = s3.subgroup_lattice
        C2 = lattice.index_of_name('C2')
        for S in lattice.classes[C2].conjugates:
            assert lattice.class_of(S) == C2
        with pytest.raises(StructureError):
            lattice.class_of({0, 1, 2, 3})

    def test_orbit_map_types(self, c2, s3):
        """Orbit maps up to automorphisms on both sides"""
        lattice = c2.subgroup_lattice
        assert lattice.orbit_map_types(0, 1) == (0,)
        assert lattice.orbit_map_types(1, 0) == ()
        s3_lattice = s3.subgroup_lattice
        C2 = s3_lattice.index_of_name('C2')
        assert len(s3_lattice.orbit_map_types(C2, C2)) == 1
        assert len(s3_lattice.orbit_map_types(0, C2)) == 1

    def test_route_reassembles(self, s3):
        """route writes every valid c as n c0 m"""
        lattice = s3.subgroup_lattice
        for i in range(len(lattice)):
            for j in range(len(lattice)):
                for c in s3.elements:
                    if not lattice.is_valid(i, j, c):
                        continue
                    n, c0, m = lattice.route(i, j, c)
                    assert c0 in lattice.orbit_map_types(i, j)
                    assert s3.m(s3.m(n, c0), m) == c

    def test_fiber_cosets_count(self, s3):
        """The fiber of G/H -> G/K has [K:H] cosets"""
        lattice = s3.subgroup_lattice
        for i in range(len(lattice)):
            for j in range(len(lattice)):
                for c in lattice.orbit_map_types(i, j):
                    assert len(lattice.fiber_cosets(i, j, c)) == lattice.subgroup_index(i, j)

    def test_invalid_route(self, c2):
        with pytest.raises(StructureError):
            c2.subgroup_lattice.route(1, 0, 0)

    def test_to_dict(self, s3):
        data = s3.subgroup_lattice.to_dict()
        assert data['order'] == 6
        assert [c['conjugates'] for c in data['classes']] == [1, 3, 1, 1]
        assert data['subconjugate']['e'] == ['e', 'C2', 'C3', 'G']
