"""
Formal elements of free Tambara algebras.

The free algebra is never built levelwise; elements are expression trees evaluated
in a target functor by the universal property (a generator assignment).

Text form (S-expressions):
    x@K                    generator x living at level K
    (const K v)            constant at level K; v is an encoded element, `one` or `zero`
    (add e1 e2 ...)        (mul e1 e2 ...)        (neg e)
    (res K e [g])          restriction to K along g (default: first orbit-map type)
    (tr K e [g])           (nm K e [g])           transfer / norm up to K
    (conj n e)             Weyl conjugation by n
"""
import json
import logging
import re
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product
from math import prod
from typing import Dict, List, Optional, Sequence, Tuple, Union

from bispans import Bispan, compose, n_of, r_of, t_of
from config import SearchConfig
from errors import InconsistencyError, SearchCapExceeded, StructureError, UnsupportedOperation
from groups import FiniteGroup
from gsets import GMap, GSet
from tambara_core import (HomReport, TambaraFunctor, _orbit_routes, eval_bispan, norm_along, restrict_along,
                          transfer_along)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Gen:
    name: str
    level: str


@dataclass(frozen=True)
class Const:
    level: str
    value: Union[str, int, Tuple]


@dataclass(frozen=True)
class Add:
    terms: Tuple['FormalExpr', ...]


@dataclass(frozen=True)
class Mul:
    terms: Tuple['FormalExpr', ...]


@dataclass(frozen=True)
class Neg:
    arg: 'FormalExpr'


@dataclass(frozen=True)
class Res:
    level: str
    arg: 'FormalExpr'
    along: Optional[str] = None


@dataclass(frozen=True)
class Tr:
    level: str
    arg: 'FormalExpr'
    along: Optional[str] = None


@dataclass(frozen=True)
class Nm:
    level: str
    arg: 'FormalExpr'
    along: Optional[str] = None


@dataclass(frozen=True)
class Conj:
    element: str
    arg: 'FormalExpr'


FormalExpr = Union[Gen, Const, Add, Mul, Neg, Res, Tr, Nm, Conj]


# ------------------------------------------------------------------ text form


_TOKEN = re.compile(r'\s*(\(|\)|\[[^\[\]]*(?:\[[^\[\]]*\][^\[\]]*)*\]|[^\s()\[\]]+)')


def _tokenize(text: str) -> List[str]:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match:
            raise StructureError(f"Cannot read expression near {text[pos:pos + 20]!r}")
        tokens.append(match.group(1))
        pos = match.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return tokens


def _const_value(token: str):
    if token in ('one', 'zero'):
        return token
    try:
        value = json.loads(token)
    except json.JSONDecodeError:
        raise StructureError(f"Constant {token!r} is not an encoded element")
    return _freeze(value)


def _freeze(value):
    if isinstance(value, list):
        return tuple(_freeze(v) for v in value)
    return value


def parse_expr(text: str, default_level: str = 'G') -> FormalExpr:
    """Read an expression; bare generator names live at default_level"""
    tokens = _tokenize(text)
    expr, rest = _parse(tokens, 0, default_level)
    if rest != len(tokens):
        raise StructureError(f"Trailing input after expression: {' '.join(tokens[rest:])}")
    return expr


def _parse(tokens: List[str], pos: int, default_level: str) -> Tuple[FormalExpr, int]:
    if pos >= len(tokens):
        raise StructureError("Unexpected end of expression")
    token = tokens[pos]
    if token == ')':
        raise StructureError("Unexpected ')'")
    if token != '(':
        if token.startswith('['):
            raise StructureError(f"Unexpected constant {token}")
        name, _, level = token.partition('@')
        return Gen(name, level or default_level), pos + 1
    if pos + 1 >= len(tokens):
        raise StructureError("Unexpected end of expression")
    head = tokens[pos + 1]
    pos += 2
    if head == 'const':
        level, value = tokens[pos], _const_value(tokens[pos + 1])
        return Const(level, value), _expect_close(tokens, pos + 2)
    if head in ('add', 'mul'):
        terms = []
        while pos < len(tokens) and tokens[pos] != ')':
            term, pos = _parse(tokens, pos, default_level)
            terms.append(term)
        if not terms:
            raise StructureError(f"({head}) needs at least one term")
        node = Add(tuple(terms)) if head == 'add' else Mul(tuple(terms))
        return node, _expect_close(tokens, pos)
    if head == 'neg':
        arg, pos = _parse(tokens, pos, default_level)
        return Neg(arg), _expect_close(tokens, pos)
    if head in ('res', 'tr', 'nm'):
        level = tokens[pos]
        arg, pos = _parse(tokens, pos + 1, default_level)
        along = None
        if pos < len(tokens) and tokens[pos] != ')':
            along = tokens[pos]
            pos += 1
        node = {'res': Res, 'tr': Tr, 'nm': Nm}[head](level, arg, along)
        return node, _expect_close(tokens, pos)
    if head == 'conj':
        element = tokens[pos]
        arg, pos = _parse(tokens, pos + 1, default_level)
        return Conj(element, arg), _expect_close(tokens, pos)
    raise StructureError(f"Unknown operation {head!r}")


def _expect_close(tokens: List[str], pos: int) -> int:
    if pos >= len(tokens) or tokens[pos] != ')':
        raise StructureError("Expected ')'")
    return pos + 1


def to_sexpr(expr: FormalExpr) -> str:
    if isinstance(expr, Gen):
        return f"{expr.name}@{expr.level}"
    if isinstance(expr, Const):
        value = expr.value if isinstance(expr.value, str) else json.dumps(expr.value).replace(' ', '')
        return f"(const {expr.level} {value})"
    if isinstance(expr, Add):
        return '(add ' + ' '.join(to_sexpr(t) for t in expr.terms) + ')'
    if isinstance(expr, Mul):
        return '(mul ' + ' '.join(to_sexpr(t) for t in expr.terms) + ')'
    if isinstance(expr, Neg):
        return f"(neg {to_sexpr(expr.arg)})"
    if isinstance(expr, Conj):
        return f"(conj {expr.element} {to_sexpr(expr.arg)})"
    op = {Res: 'res', Tr: 'tr', Nm: 'nm'}[type(expr)]
    along = f" {expr.along}" if expr.along is not None else ''
    return f"({op} {expr.level} {to_sexpr(expr.arg)}{along})"


# ----------------------------------------------------------------- evaluation


def level_of(expr: FormalExpr, group: FiniteGroup) -> int:
    """Class index of the level an expression lives at; checks annotations for consistency"""
    lattice = group.subgroup_lattice
    if isinstance(expr, (Gen, Const, Res, Tr, Nm)):
        level = lattice.index_of_name(expr.level)
        if isinstance(expr, (Res, Tr, Nm)):
            inner = level_of(expr.arg, group)
            small, big = (level, inner) if isinstance(expr, Res) else (inner, level)
            if not lattice.subconjugate(small, big):
                raise StructureError(f"{to_sexpr(expr)}: {lattice.name(small)} is not subconjugate to {lattice.name(big)}")
        return level
    if isinstance(expr, (Add, Mul)):
        levels = {level_of(t, group) for t in expr.terms}
        if len(levels) != 1:
            raise StructureError(f"{to_sexpr(expr)} mixes levels {sorted(lattice.name(l) for l in levels)}")
        return levels.pop()
    return level_of(expr.arg, group)


def generators_of(expr: FormalExpr) -> Dict[str, str]:
    """Generator names with their levels"""
    if isinstance(expr, Gen):
        return {expr.name: expr.level}
    if isinstance(expr, Const):
        return {}
    found = {}
    for term in (expr.terms if isinstance(expr, (Add, Mul)) else [expr.arg]):
        for name, level in generators_of(term).items():
            if found.setdefault(name, level) != level:
                raise StructureError(f"Generator {name} appears at levels {found[name]} and {level}")
    return found


def eval_expr(expr: FormalExpr, T: TambaraFunctor, assign: Dict[str, object]):
    """Evaluate through T's operations under a generator assignment"""
    G = T.group
    lattice = T.lattice

    def along(label: Optional[str]) -> Optional[int]:
        return None if label is None else G.index(label)

    def go(e: FormalExpr):
        if isinstance(e, Gen):
            if e.name not in assign:
                raise StructureError(f"No value assigned to generator {e.name}")
            value = assign[e.name]
            T.check_element(lattice.index_of_name(e.level), value)
            return value
        if isinstance(e, Const):
            ring = T.level(lattice.index_of_name(e.level))
            if e.value == 'one':
                return ring.one
            if e.value == 'zero':
                return ring.zero
            return ring.decode(list(e.value) if isinstance(e.value, tuple) else e.value)
        if isinstance(e, Add):
            ring = T.level(level_of(e, G))
            return ring.sum(go(t) for t in e.terms)
        if isinstance(e, Mul):
            ring = T.level(level_of(e, G))
            return ring.prod(go(t) for t in e.terms)
        if isinstance(e, Neg):
            return T.level(level_of(e, G)).neg(go(e.arg))
        if isinstance(e, Conj):
            i = level_of(e.arg, G)
            n = G.index(e.element)
            if n not in lattice.classes[i].normalizer:
                raise StructureError(f"{e.element} does not normalize {lattice.name(i)}")
            return T.weyl(i, n, go(e.arg))
        i = lattice.index_of_name(e.level)
        j = level_of(e.arg, G)
        if isinstance(e, Res):
            return T.res(i, j, go(e.arg), along=along(e.along))
        if isinstance(e, Tr):
            return T.tr(j, i, go(e.arg), along=along(e.along))
        return T.nm(j, i, go(e.arg), along=along(e.along))

    return go(expr)


# ----------------------------------------------------------------- generators


def _simplify_product(level: str, terms: List[FormalExpr]) -> FormalExpr:
    if not terms:
        return Const(level, 'one')
    return terms[0] if len(terms) == 1 else Mul(tuple(terms))


def _simplify_sum(level: str, terms: List[FormalExpr]) -> FormalExpr:
    if not terms:
        return Const(level, 'zero')
    return terms[0] if len(terms) == 1 else Add(tuple(terms))


def expr_from_bispan(b: Bispan, names: Sequence[str]) -> Tuple[FormalExpr, ...]:
    """T_f N_g R_h as expressions in one generator per source orbit"""
    G = b.group
    lattice = G.subgroup_lattice
    if len(names) != len(b.source.orbits):
        raise StructureError("Need one generator name per source orbit")
    d = b.diagram

    def step(node, i: int, j: int, c: int, kind):
        if i == j and c == 0:
            return node
        level = lattice.name(i if kind is Res else j)
        return kind(level, node, None if c == 0 else G.label(c))

    gens = [Gen(name, lattice.name(orbit.class_index)) for name, orbit in zip(names, b.source.orbits)]
    restricted = [step(gens[o], i, j, c, Res) for i, j, c, o in _orbit_routes(d.h)]
    factors: List[List[FormalExpr]] = [[] for _ in d.B.orbits]
    for (i, j, c, o), node in zip(_orbit_routes(d.g), restricted):
        factors[o].append(step(node, i, j, c, Nm))
    normed = [_simplify_product(lattice.name(orbit.class_index), f) for orbit, f in zip(d.B.orbits, factors)]
    summands: List[List[FormalExpr]] = [[] for _ in b.target.orbits]
    for (i, j, c, o), node in zip(_orbit_routes(d.f), normed):
        summands[o].append(step(node, i, j, c, Tr))
    return tuple(_simplify_sum(lattice.name(orbit.class_index), s) for orbit, s in zip(b.target.orbits, summands))


def level_bispans(group: FiniteGroup, generator_level: int, output_level: int, bound: int) -> List[Bispan]:
    """Bispan classes G/H -> G/K of total degree 1..bound, one per tr_L^K prod_i nm_{M_i}^L res_{M_i}"""
    if bound < 1:
        raise StructureError("Degree bound must be at least 1")
    lattice = group.subgroup_lattice
    source = GSet.orbit_type(group, generator_level)
    target = GSet.orbit_type(group, output_level)
    K = lattice.rep(output_level)
    seen = set()
    bispans = []
    for L in lattice.subgroups:
        if not L <= K:
            continue
        pieces = [(M, x) for M in lattice.subgroups for x in range(source.size)
                  if M <= L and M <= source.stabilizer(x) and len(L) // len(M) <= bound]
        for r in range(1, bound + 1):
            for fiber in combinations_with_replacement(pieces, r):
                if sum(len(L) // len(M) for M, _ in fiber) > bound:
                    continue
                b = Bispan.from_orbit_data(source, target, [(L, 0, list(fiber))])
                if b.key in seen:
                    continue
                seen.add(b.key)
                bispans.append(b)
    logger.debug(f"{len(bispans)} generators of degree <= {bound} at {lattice.name(output_level)}")
    return bispans


def level_generators(group: FiniteGroup, generator_level: int, output_level: int, bound: int,
                     name: str = 'x') -> List[FormalExpr]:
    """Expressions tr_L^K prod_i nm_{M_i}^L res_{M_i}(x) of total degree 1..bound, one per bispan class"""
    return [expr_from_bispan(b, [name])[0] for b in level_bispans(group, generator_level, output_level, bound)]


# ------------------------------------------------------------------- integrality


@dataclass
class IntegralityWitness:
    """p(X) = nm(X - a), monic with coefficients at the upper level"""
    small: str
    big: str
    element: object
    coefficients: List
    degree: int
    monic: bool
    vanishes: bool

    def to_dict(self) -> Dict:
        return {'small': self.small, 'big': self.big, 'element': self.element,
                'coefficients': self.coefficients, 'degree': self.degree,
                'monic': self.monic, 'vanishes': self.vanishes}


def integrality_witness(T: TambaraFunctor, small: int, big: int, a, along: Optional[int] = None) -> IntegralityWitness:
    """Coefficients of nm_K^H(X - a) over T(G/H), computed at level e and lifted by restriction"""
    if not T.mrc():
        raise UnsupportedOperation(f"{T.name} does not have injective restrictions to e")
    T.check_element(small, a)
    c = T._along(small, big, along)
    lattice = T.lattice
    R0, Rk, Rh = T.level(0), T.level(small), T.level(big)
    roots = [T._res_along(0, small, g, a) for g, _ in lattice.fiber_cosets(small, big, c)]
    poly = [R0.one]
    for r in roots:
        shifted = [R0.zero] + poly
        for k, coeff in enumerate(poly):
            shifted[k] = R0.sub(shifted[k], R0.mul(r, coeff))
        poly = shifted
    lift = {T._res_along(0, big, 0, z): z for z in Rh.elements()}
    try:
        coefficients = [lift[p] for p in poly]
    except KeyError:
        raise InconsistencyError(f"A coefficient of nm(X - a) is not a restriction from {lattice.name(big)}")
    value = Rk.zero
    power = Rk.one
    for p in coefficients:
        value = Rk.add(value, Rk.mul(T._res_along(small, big, c, p), power))
        power = Rk.mul(power, a)
    witness = IntegralityWitness(small=lattice.name(small), big=lattice.name(big), element=Rk.encode(a),
                                 coefficients=[Rh.encode(p) for p in coefficients], degree=len(roots),
                                 monic=coefficients[-1] == Rh.one, vanishes=value == Rk.zero)
    if not witness.vanishes:
        raise InconsistencyError(f"nm(X - a) does not vanish at a = {Rk.encode(a)}")
    return witness


# -------------------------------------------------------------- norm identity


@dataclass
class NormIdentityReport:
    """Where nm_K^H res_K x = (res_H x)^[H:K] holds for x at the top level"""
    functor: str
    pairs: int = 0
    failures: List[Dict] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict:
        return {'functor': self.functor, 'pairs': self.pairs, 'holds': self.holds, 'failures': self.failures}


def norm_identity_exprs(group: FiniteGroup, small: int, big: int) -> Tuple[FormalExpr, FormalExpr]:
    lattice = group.subgroup_lattice
    top = lattice.name(lattice.top)
    x = Gen('x', top)
    lhs = Nm(lattice.name(big), Res(lattice.name(small), x))
    index = lattice.subgroup_index(small, big)
    rhs = _simplify_product(lattice.name(big), [Res(lattice.name(big), x)] * index)
    return lhs, rhs


def check_norm_identity(T: TambaraFunctor, values: Optional[Sequence] = None) -> NormIdentityReport:
    """Compare both sides for every subconjugate pair, on all (or the given) top-level values"""
    lattice = T.lattice
    top = lattice.top
    if values is None:
        values = T.level(top).elements()
    report = NormIdentityReport(functor=T.name)
    for small in range(T.num_levels):
        for big in range(T.num_levels):
            if not lattice.subconjugate(small, big):
                continue
            report.pairs += 1
            lhs, rhs = norm_identity_exprs(T.group, small, big)
            for x in values:
                left, right = eval_expr(lhs, T, {'x': x}), eval_expr(rhs, T, {'x': x})
                if left != right:
                    R = T.level(big)
                    report.failures.append({'small': lattice.name(small), 'big': lattice.name(big),
                                            'x': T.level(top).encode(x),
                                            'norm_of_restriction': R.encode(left), 'power': R.encode(right)})
                    break
    return report


# ---------------------------------------------------------------- presentations


def check_presented_hom(T: TambaraFunctor, generator_level: int, x, bound: int = 2,
                        first_only: bool = False) -> HomReport:
    """
    Whether b -> T(b)(x) commutes with the structure maps of the free algebra on a generator at
    `generator_level`, tested on its bispan generators of degree <= bound at every level.
    The free side composes bispans; the target side applies res, tr and nm to the evaluated value.
    """
    G = T.group
    lattice = T.lattice
    operations = (('res', r_of, restrict_along), ('tr', t_of, transfer_along), ('nm', n_of, norm_along))
    checked = 0
    violations = []
    for k in range(T.num_levels):
        for b in level_bispans(G, generator_level, k, bound):
            value = eval_bispan(T, b, (x,))
            for i, j, c in T.stored_keys():
                f = GMap.orbit_map(G, i, j, c)
                for op, bispan_of, apply in operations:
                    if (j if op == 'res' else i) != k:
                        continue
                    checked += 1
                    if apply(T, f, value) == eval_bispan(T, compose(bispan_of(f), b), (x,)):
                        continue
                    violations.append({'op': op, 'at': f"{lattice.name(i)}<{lattice.name(j)}@{G.label(c)}",
                                       'generator': str(b)})
                    if first_only:
                        return HomReport(valid=False, checked=checked, violations=violations)
    return HomReport(valid=not violations, checked=checked, violations=violations)


@dataclass
class PresentedHom:
    """The map out of a presented algebra classified by a generator assignment"""
    presentation: 'Presentation'
    target: TambaraFunctor
    assignment: Dict[str, object]

    def __call__(self, expr: FormalExpr):
        return eval_expr(expr, self.target, self.assignment)

    def to_dict(self) -> Dict:
        lattice = self.target.lattice
        return {name: self.target.level(lattice.index_of_name(level)).encode(self.assignment[name])
                for name, level in self.presentation.generators.items()}


@dataclass
class Presentation:
    """Generators at levels and relations lhs = rhs between formal expressions"""
    group: FiniteGroup
    generators: Dict[str, str]
    relations: List[Tuple[FormalExpr, FormalExpr]] = field(default_factory=list)

    def __post_init__(self):
        for lhs, rhs in self.relations:
            if level_of(lhs, self.group) != level_of(rhs, self.group):
                raise StructureError(f"Relation {to_sexpr(lhs)} = {to_sexpr(rhs)} compares different levels")

    @classmethod
    def free(cls, group: FiniteGroup, level: int, name: str = 'x') -> 'Presentation':
        return cls(group, {name: group.subgroup_lattice.name(level)})

    def homs_to(self, T: TambaraFunctor, cap: Optional[int] = None, bound: int = 2) -> List[PresentedHom]:
        """Assignments satisfying the relations whose induced map passes check_presented_hom"""
        cap = cap or SearchConfig.HOM_SEARCH_CAP
        if T.group is not self.group:
            raise StructureError("Presentation and functor are over different groups")
        lattice = T.lattice
        names = list(self.generators)
        choices = [T.level(lattice.index_of_name(self.generators[n])).elements() for n in names]
        total = prod(len(c) for c in choices)
        if total > cap:
            raise SearchCapExceeded(f"{total} generator assignments exceed the cap {cap}")
        levels = {n: lattice.index_of_name(self.generators[n]) for n in names}
        induced = {}
        homs = []
        rejected = 0
        for values in product(*choices):
            assign = dict(zip(names, values))
            if not all(eval_expr(lhs, T, assign) == eval_expr(rhs, T, assign) for lhs, rhs in self.relations):
                continue
            for n in names:
                key = (levels[n], assign[n])
                if key not in induced:
                    induced[key] = check_presented_hom(T, levels[n], assign[n], bound, first_only=True).valid
            if all(induced[(levels[n], assign[n])] for n in names):
                homs.append(PresentedHom(self, T, assign))
            else:
                rejected += 1
        if rejected:
            logger.warning(f"{rejected} assignments satisfy the relations but induce no Tambara map into {T.name}")
        logger.info(f"{len(homs)} of {total} generator assignments give maps into {T.name}")
        return homs
