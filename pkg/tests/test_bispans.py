"""
Tests for bispan classes and their composition
"""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bispans import (Bispan, compose, n_of, r_of, random_bispan, random_gset, random_map_from,
                     random_map_into, t_of)
from errors import SearchCapExceeded, StructureError
from groups import FiniteGroup
from gsets import GMap, GSet, pullback

C2 = FiniteGroup.cyclic(2)
C3 = FiniteGroup.cyclic(3)
C4 = FiniteGroup.cyclic(4)
S3 = FiniteGroup.symmetric(3)

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


def small_bispan(rng, source, target):
    return random_bispan(rng, source, target, max_orbits=1, max_points=4)


class TestBispan:
    """Tests for bispan construction"""

    def test_identity_text(self):
        X = GSet.regular(C2)
        text = str(Bispan.identity(X))
        assert text == '[G/e] <-h- [G/e] -g-> [G/e] -f-> [G/e]'

    def test_from_orbit_data_matches_from_maps(self):
        """The same diagram given two ways gives the same class"""
        X = GSet.regular(C2)
        point = GSet.trivial(C2)
        f = GMap.constant(X, point)
        by_maps = t_of(f)
        by_data = Bispan.from_orbit_data(X, point, [(C2.elements, 0, [([0], 0)])])
        assert by_data != by_maps
        transfer = Bispan.from_orbit_data(X, point, [([0], 0, [([0], 0)])])
        assert transfer == by_maps

    def test_iso_invariance(self):
        """Relabelling the middle by an automorphism does not change the class"""
        X = GSet.regular(C2)
        swap = GMap(X, X, [1, 0])
        ident = GMap.identity(X)
        assert Bispan.from_maps(swap, swap, ident) == Bispan.from_maps(ident, ident, swap.compose(swap.inverse()))

    def test_legs_must_match(self):
        X = GSet.regular(C2)
        point = GSet.trivial(C2)
        with pytest.raises(StructureError):
            Bispan.from_maps(GMap.identity(X), GMap.identity(point), GMap.identity(point))

    def test_bad_orbit_data(self):
        """A B-orbit stabilizer must fix its image point"""
        X = GSet.regular(C2)
        with pytest.raises(StructureError):
            Bispan.from_orbit_data(X, X, [(C2.elements, 0, [])])

    def test_to_dict(self):
        X = GSet.regular(C2)
        data = t_of(GMap.constant(X, GSet.trivial(C2))).to_dict()
        assert set(data) == {'source', 'target', 'orbits', 'text'}
        assert data['orbits'][0]['stabilizer'] == ['e']


class TestCompose:
    """Tests for the composition law"""

    def test_not_composable(self):
        X = GSet.regular(C2)
        b = Bispan.identity(X)
        with pytest.raises(StructureError):
            compose(Bispan.identity(GSet.trivial(C2)), b)

    def test_transfers_compose(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            f = random_map_into(rng, random_gset(rng, S3, max_points=6), max_points=6)
            g = random_map_from(rng, f.dst)
            assert compose(t_of(g), t_of(f)) == t_of(g.compose(f))
            assert compose(n_of(g), n_of(f)) == n_of(g.compose(f))
            assert compose(r_of(f), r_of(g)) == r_of(g.compose(f))

    def test_mackey_square(self):
        """R_g T_f is T R across the pullback"""
        rng = np.random.default_rng(11)
        for _ in range(10):
            Z = random_gset(rng, S3, max_points=6)
            f = random_map_into(rng, Z, max_points=6)
            g = random_map_into(rng, Z, max_points=6)
            P, p_x, p_y = pullback(f, g)
            assert compose(r_of(g), t_of(f)) == compose(t_of(p_y), r_of(p_x))

    def test_norm_of_transfer_has_exponential_middle(self):
        """N along G/e -> * of T along a fold: sections of a two-point fiber"""
        X = GSet.regular(C2)
        two, _ = GSet.coproduct(C2, [X, X])
        fold = GMap(two, X, [0, 1, 0, 1])
        collapse = GMap.constant(X, GSet.trivial(C2))
        composite = compose(n_of(collapse), t_of(fold))
        # sections over the single point: two fixed, one free orbit
        assert composite.diagram.B.size == 4
        assert composite.diagram.B.orbits.multiset() == [(0, 1), (1, 2)]

    @settings(max_examples=25, deadline=None)
    @given(seeds)
    def test_identity_laws(self, seed):
        rng = np.random.default_rng(seed)
        for group in (C2, S3):
            X = random_gset(rng, group, max_orbits=1, max_points=6)
            Y = random_gset(rng, group, max_orbits=1, max_points=6)
            b = random_bispan(rng, X, Y, max_orbits=2, max_points=6)
            assert compose(b, Bispan.identity(X)) == b
            assert compose(Bispan.identity(Y), b) == b

    @settings(max_examples=20, deadline=None)
    @given(seeds)
    def test_associativity(self, seed):
        rng = np.random.default_rng(seed)
        for group in (C2, C3):
            W, X, Y, Z = (random_gset(rng, group, max_orbits=1, max_points=3) for _ in range(4))
            b1, b2, b3 = small_bispan(rng, W, X), small_bispan(rng, X, Y), small_bispan(rng, Y, Z)
            assert compose(b3, compose(b2, b1)) == compose(compose(b3, b2), b1)

    @pytest.mark.parametrize('group', [C2, C3, C4, S3], ids=lambda G: G.name)
    def test_seeded_triples(self, group):
        """500 seeded triples per group on G-sets of at most 8 points: associativity and both unit laws"""
        rng = np.random.default_rng(2024 + group.order)
        checked = 0
        for _ in range(500):
            W, X, Y, Z = (random_gset(rng, group, max_orbits=2, max_points=8) for _ in range(4))
            b1, b2, b3 = small_bispan(rng, W, X), small_bispan(rng, X, Y), small_bispan(rng, Y, Z)
            try:
                left = compose(b3, compose(b2, b1))
                right = compose(compose(b3, b2), b1)
            except SearchCapExceeded:
                continue
            assert left == right, (str(b1), str(b2), str(b3))
            assert compose(b1, Bispan.identity(W)) == b1
            assert compose(Bispan.identity(X), b1) == b1
            checked += 1
        assert checked >= 450
