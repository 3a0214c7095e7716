"""
Tests for formal expressions, level generators, integrality witnesses and presentations
"""
import pytest

from bispans import t_of
from constructions import coinduce, constant
from errors import SearchCapExceeded, StructureError, UnsupportedOperation
from free_poly import (Add, Const, Gen, Mul, Nm, Presentation, Res, Tr, check_norm_identity, check_presented_hom,
                       eval_expr, expr_from_bispan, generators_of, integrality_witness, level_generators,
                       level_of, parse_expr, to_sexpr)
from gsets import GMap, GSet
from rings import GaloisField


class TestTextForm:
    """Tests for reading and writing expressions"""

    def test_parse_nested(self):
        expr = parse_expr('(nm G (res e x@G))')
        assert expr == Nm('G', Res('e', Gen('x', 'G')))
        assert to_sexpr(expr) == '(nm G (res e x@G))'

    def test_default_level(self):
        assert parse_expr('x', default_level='e') == Gen('x', 'e')

    def test_constants(self):
        expr = parse_expr('(add (const e [1, 0]) (const e one))')
        assert expr == Add((Const('e', (1, 0)), Const('e', 'one')))
        assert to_sexpr(expr) == '(add (const e [1,0]) (const e one))'

    def test_along_label(self):
        expr = parse_expr('(tr G x@e g)')
        assert expr == Tr('G', Gen('x', 'e'), 'g')

    @pytest.mark.parametrize('text', ['(foo x)', '(add)', '(nm G x', ')', 'x y', '(const e nope)'])
    def test_parse_errors(self, text):
        with pytest.raises(StructureError):
            parse_expr(text)


class TestEvaluation:
    """Tests for levels and evaluation in a functor"""

    def test_level_of(self, c2):
        assert level_of(parse_expr('(tr G x@e)'), c2) == 1
        with pytest.raises(StructureError):
            level_of(parse_expr('(add x@e y@G)'), c2)
        with pytest.raises(StructureError):
            level_of(Res('G', Gen('x', 'e')), c2)

    def test_generator_conflict(self):
        assert generators_of(parse_expr('(mul x@G y@G)')) == {'x': 'G', 'y': 'G'}
        with pytest.raises(StructureError):
            generators_of(parse_expr('(add x@e (res e x@G))'))

    def test_norm_of_restriction(self, constant_f3):
        """nm(res 2) = 2^2 = 1 in F3"""
        assert eval_expr(parse_expr('(nm G (res e x@G))'), constant_f3, {'x': 2}) == 1

    def test_conjugation(self, coinduced_f2):
        assert eval_expr(parse_expr('(conj g x@e)'), coinduced_f2, {'x': (1, 0)}) == (0, 1)

    def test_missing_assignment(self, constant_f3):
        with pytest.raises(StructureError):
            eval_expr(parse_expr('(mul x y)'), constant_f3, {'x': 1})

    def test_assignment_checked(self, constant_f3):
        with pytest.raises(StructureError):
            eval_expr(parse_expr('x'), constant_f3, {'x': 5})


class TestGenerators:
    """Tests for expressions read off bispans"""

    def test_transfer_bispan(self, c2):
        collapse = GMap.constant(GSet.regular(c2), GSet.trivial(c2))
        assert expr_from_bispan(t_of(collapse), ['x']) == (Tr('G', Gen('x', 'e')),)
        with pytest.raises(StructureError):
            expr_from_bispan(t_of(collapse), ['x', 'y'])

    def test_level_generator_counts(self, c2):
        """x, x^2, nm(res x), tr(res x), tr(res x^2) up to degree 2"""
        assert len(level_generators(c2, 1, 1, 2)) == 5
        assert len(level_generators(c2, 1, 1, 1)) == 2
        with pytest.raises(StructureError):
            level_generators(c2, 1, 1, 0)

    def test_generators_evaluate(self, c2, constant_f3):
        for expr in level_generators(c2, 1, 1, 2):
            assert level_of(expr, c2) == 1
            assert constant_f3.level(1).contains(eval_expr(expr, constant_f3, {'x': 2}))


class TestIntegrality:
    """Tests for monic polynomials from norms"""

    def test_frobenius_witness(self, frobenius_f4):
        """a in F4 is a root of X^2 + X + 1 over F2"""
        witness = integrality_witness(frobenius_f4, 0, 1, 2)
        assert witness.coefficients == [1, 1, 1]
        assert witness.degree == 2
        assert witness.monic and witness.vanishes

    def test_needs_injective_restrictions(self, burnside_c2):
        with pytest.raises(UnsupportedOperation):
            integrality_witness(burnside_c2, 0, 1, (1,))


class TestNormIdentity:
    """Tests for nm res x = (res x)^index"""

    def test_holds_for_fixed_points(self, constant_f3, frobenius_f4):
        report = check_norm_identity(constant_f3)
        assert report.holds
        assert report.pairs == 3
        assert check_norm_identity(frobenius_f4).holds

    @pytest.mark.parametrize('group,pairs', [('c2', 3), ('c3', 3), ('c4', 6), ('s3', 9)])
    def test_every_subgroup_pair(self, group, pairs, request):
        """One check per subconjugate pair H <= K"""
        G = request.getfixturevalue(group)
        for T in (coinduce(G, GaloisField(3)), constant(G, GaloisField(2))):
            report = check_norm_identity(T)
            assert report.holds, report.failures[:1]
            assert report.pairs == pairs

    def test_fails_for_burnside(self, burnside_c2):
        """nm(2) = 2 + [C2/e] while 2^2 = 4"""
        report = check_norm_identity(burnside_c2, values=[(0, 2)])
        assert not report.holds
        assert report.failures[0]['norm_of_restriction'] == [1, 2]


class TestPresentations:
    """Tests for maps out of presented algebras"""

    def test_free_algebra(self, c2, constant_f3):
        """Maps from the free algebra on one top generator are the elements"""
        assert len(Presentation.free(c2, 1).homs_to(constant_f3)) == 3

    def test_idempotent_relation(self, c2, constant_f3):
        x = Gen('x', 'G')
        presentation = Presentation(c2, {'x': 'G'}, [(Mul((x, x)), x)])
        homs = presentation.homs_to(constant_f3)
        assert sorted(h.assignment['x'] for h in homs) == [0, 1]
        assert homs[0](Add((x, x))) == 0

    def test_relation_levels(self, c2):
        with pytest.raises(StructureError):
            Presentation(c2, {'x': 'G'}, [(Gen('x', 'G'), Res('e', Gen('x', 'G')))])

    def test_cap(self, c2, constant_f3):
        with pytest.raises(SearchCapExceeded):
            Presentation.free(c2, 1).homs_to(constant_f3, cap=2)

    def test_other_group(self, c3, constant_f3):
        with pytest.raises(StructureError):
            Presentation.free(c3, 1).homs_to(constant_f3)


class TestInducedMaps:
    """Tests that presented maps induce Tambara maps"""

    @pytest.mark.parametrize('construction', ['constant', 'coinduce'])
    @pytest.mark.parametrize('level', [0, 1])
    def test_free_maps_are_elements(self, c2, construction, level):
        """Maps out of the free algebra on a generator at H correspond to T(G/H)"""
        T = constant(c2, GaloisField(2)) if construction == 'constant' else coinduce(c2, GaloisField(2))
        homs = Presentation.free(c2, level).homs_to(T)
        assert len(homs) == T.level(level).size
        assert {h.assignment['x'] for h in homs} == set(T.level(level).elements())

    def test_coinduced_counts(self, coinduced_f2):
        assert len(Presentation.free(coinduced_f2.group, 0).homs_to(coinduced_f2)) == 4
        assert len(Presentation.free(coinduced_f2.group, 1).homs_to(coinduced_f2)) == 2

    def test_genuine_functor_passes(self, frobenius_f4):
        report = check_presented_hom(frobenius_f4, 0, frobenius_f4.level(0).elements()[2])
        assert report.valid
        assert report.checked > 0

    def test_broken_transfer_rejects_assignments(self, constant_f3):
        """With tr(1) = 1 only x = 0 still commutes with res tr = 1 + g"""
        table = constant_f3.to_table()
        broken = dict(table.tr_tables[(0, 1, 0)])
        broken[1] = 1
        T = table.with_table('tr', (0, 1, 0), broken)
        assert not check_presented_hom(T, 0, 1).valid
        homs = Presentation.free(T.group, 0).homs_to(T)
        assert [h.assignment['x'] for h in homs] == [0]
