"""
JSON documents read and written by the workbench.

Every document carries "schema_version"; loaders refuse a missing or unknown major.
Elements are serialized by their ring's encode/decode. See docs/SCHEMAS.md.
"""
import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from bispans import Bispan
from classification import MackeyModule
from config import WorkbenchConfig
from constructions import BurnsideTambara, burnside_tambara, coinduce, constant, fixed_point, relabel
from errors import SchemaError, StructureError
from groups import FiniteGroup
from gsets import GMap, GSet
from ideals_fields import NakaokaIdeal
from rings import (CornerRing, FunctionRing, GaloisField, GRing, IntegersMod, ProductRing, QuotientRing,
                   RelabeledRing, Ring, Subring, TableRing, burnside_ring)
from tambara_core import TableTambara, TambaraFunctor

logger = logging.getLogger(__name__)


def read_document(path: Union[str, Path]) -> Dict:
    """Load a JSON file and check its schema version"""
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except FileNotFoundError:
        raise SchemaError(f"Input file {path} not found")
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path} is not valid JSON: {e}")
    check_version(data)
    logger.debug(f"Read {path}")
    return data


def check_version(data: Any):
    if not isinstance(data, dict):
        raise SchemaError("Document must be a JSON object")
    version = data.get('schema_version')
    if version is None:
        raise SchemaError("Document has no schema_version")
    major = int(str(version).split('.')[0]) if re.fullmatch(r'\d+(\.\d+)*', str(version)) else None
    if major != WorkbenchConfig.SCHEMA_VERSION:
        raise SchemaError(f"Unsupported schema_version {version!r}; expected {WorkbenchConfig.SCHEMA_VERSION}")


def document(**content) -> Dict:
    return {'schema_version': WorkbenchConfig.SCHEMA_VERSION, **content}


def dumps(data: Dict) -> str:
    """Canonical JSON text: sorted keys, so identical inputs give identical bytes"""
    return json.dumps(data, indent=2, sort_keys=True, default=str)


def _require(data: Dict, key: str, where: str):
    if not isinstance(data, dict) or key not in data:
        raise SchemaError(f"{where} is missing {key!r}")
    return data[key]


# ------------------------------------------------------------------- groups


def load_group(data) -> FiniteGroup:
    """A group name ("S3"), {"name"}, {"perm_generators": [[cycles]]} or a multiplication table"""
    if isinstance(data, str):
        group = FiniteGroup.from_name(data)
    elif not isinstance(data, dict):
        raise SchemaError(f"Cannot read a group from {data!r}")
    elif 'perm_generators' in data:
        group = FiniteGroup.from_permutations(data['perm_generators'], name=data.get('name'))
    elif 'mul' in data:
        group = FiniteGroup.from_table(_require(data, 'elements', 'group'), data['mul'],
                                       _require(data, 'id', 'group'), name=data.get('name'))
    elif 'name' in data:
        group = FiniteGroup.from_name(data['name'])
    else:
        raise SchemaError("Group needs a name, perm_generators, or elements/mul/id")
    if group.order > WorkbenchConfig.MAX_GROUP_ORDER:
        raise StructureError(f"Group order {group.order} exceeds {WorkbenchConfig.MAX_GROUP_ORDER}")
    return group


# --------------------------------------------------------------------- rings


_RING_NAME = re.compile(r'(?:F|GF)(\d+)|Z/(\d+)')


def ring_from_name(name: str) -> Ring:
    """F4 / GF(9) / Z/4"""
    match = _RING_NAME.fullmatch(name.replace('(', '').replace(')', '').strip())
    if not match:
        raise SchemaError(f"Unknown ring name {name!r}")
    if match.group(2):
        return IntegersMod(int(match.group(2)))
    q = int(match.group(1))
    for p in range(2, q + 1):
        if q % p == 0:
            k, n = 0, 1
            while n < q:
                n *= p
                k += 1
            if n != q:
                raise StructureError(f"{q} is not a prime power")
            return GaloisField(p, k)
    raise StructureError(f"{q} is not a prime power")


def load_ring(data, group: Optional[FiniteGroup] = None) -> Ring:
    """A ring document, dispatched on "kind"; strings are read as ring names"""
    if isinstance(data, str):
        return ring_from_name(data)
    kind = _require(data, 'kind', 'ring')
    if kind == 'zmod':
        return IntegersMod(int(_require(data, 'n', 'zmod ring')))
    if kind == 'gf':
        return GaloisField(int(_require(data, 'p', 'gf ring')), int(data.get('k', 1)))
    if kind == 'product':
        return ProductRing([load_ring(f, group) for f in _require(data, 'factors', 'product ring')])
    if kind == 'fun':
        return FunctionRing(load_ring(_require(data, 'base', 'fun ring'), group), _require(data, 'points', 'fun ring'))
    if kind == 'table':
        return TableRing(_require(data, 'add', 'table ring'), _require(data, 'mul', 'table ring'),
                         zero=data.get('zero', 0), one=data.get('one', 1))
    if kind == 'burnside':
        if group is None:
            raise SchemaError("A Burnside ring needs its group")
        return burnside_ring(group, [group.index(g) for g in _require(data, 'subgroup', 'burnside ring')])
    base = load_ring(_require(data, 'base', f"{kind} ring"), group)
    if kind == 'subring':
        return Subring(base, [base.decode(x) for x in _require(data, 'elements', 'subring')])
    if kind == 'quotient':
        return QuotientRing(base, [base.decode(x) for x in _require(data, 'ideal', 'quotient ring')])
    if kind == 'corner':
        return CornerRing(base, base.decode(_require(data, 'idempotent', 'corner ring')))
    if kind == 'relabeled':
        return RelabeledRing(base, [base.decode(x) for x in _require(data, 'order', 'relabeled ring')])
    raise SchemaError(f"Unknown ring kind {kind!r}")


def load_element(ring: Ring, obj):
    if isinstance(obj, str) and obj in ('zero', 'one'):
        return ring.zero if obj == 'zero' else ring.one
    return ring.decode(obj)


def load_gring(group: FiniteGroup, base: Ring, action) -> GRing:
    """None (trivial), "frobenius", or {generator label: [[a, g.a], ...]}"""
    if action is None:
        return GRing.trivial(group, base)
    if action == 'frobenius':
        if not isinstance(base, GaloisField):
            raise SchemaError("A Frobenius action needs a Galois field")
        return GRing.frobenius(group, base)
    if not isinstance(action, dict):
        raise SchemaError(f"Cannot read a group action from {action!r}")
    images = {group.index(g): {base.decode(a): base.decode(b) for a, b in pairs} for g, pairs in action.items()}
    return GRing.from_generator_action(group, base, images)


# ------------------------------------------------------------ G-sets and maps


def load_gset(data: Dict, group: FiniteGroup) -> GSet:
    """{"points": [...], "act": {g: [image labels]}} or {"orbits": [subgroup class names]}"""
    if 'orbits' in data:
        lattice = group.subgroup_lattice
        parts = [GSet.orbit_type(group, lattice.index_of_name(name)) for name in data['orbits']]
        if not parts:
            return GSet.empty(group)
        total, _ = GSet.coproduct(group, parts)
        return total
    points = [str(p) for p in _require(data, 'points', 'G-set')]
    where = {p: k for k, p in enumerate(points)}
    act_data = _require(data, 'act', 'G-set')
    rows = []
    for g in group.elements:
        label = group.label(g)
        if g == 0 and label not in act_data:
            rows.append(list(range(len(points))))
            continue
        images = act_data.get(label)
        if images is None:
            raise SchemaError(f"G-set action is missing element {label}")
        try:
            rows.append([where[str(y)] for y in images])
        except KeyError as e:
            raise SchemaError(f"G-set action names an unknown point {e}")
    return GSet(group, points, rows)


def load_map(data: Dict, src: GSet, dst: GSet) -> GMap:
    table = _require(data, 'f', 'map')
    return GMap(src, dst, [dst.index(table[str(x)]) for x in src.labels])


def load_bispan(data: Dict, group: FiniteGroup) -> Bispan:
    """Orbit form (as written by Bispan.to_dict) or explicit legs h, g, f with middle sets A and B"""
    source = load_gset(_require(data, 'source', 'bispan'), group)
    target = load_gset(_require(data, 'target', 'bispan'), group)
    if 'orbits' in data:
        orbit_data = []
        for orbit in data['orbits']:
            K = [group.index(g) for g in _require(orbit, 'stabilizer', 'bispan orbit')]
            fiber = [([group.index(g) for g in entry['stabilizer']], source.index(entry['image']))
                     for entry in orbit.get('fiber', [])]
            orbit_data.append((K, target.index(_require(orbit, 'image', 'bispan orbit')), fiber))
        return Bispan.from_orbit_data(source, target, orbit_data)
    A = load_gset(_require(data, 'A', 'bispan'), group)
    B = load_gset(_require(data, 'B', 'bispan'), group)
    return Bispan.from_maps(load_map(_require(data, 'h', 'bispan'), A, source),
                            load_map(_require(data, 'g', 'bispan'), A, B),
                            load_map(_require(data, 'f', 'bispan'), B, target))


# ------------------------------------------------------------------ functors


def _parse_key(group: FiniteGroup, key: str) -> Tuple[int, int, int]:
    match = re.fullmatch(r'([^<@]+)<([^<@]+)@(.+)', key)
    if not match:
        raise SchemaError(f"Bad operation key {key!r}; expected 'H<K@g'")
    lattice = group.subgroup_lattice
    return lattice.index_of_name(match.group(1)), lattice.index_of_name(match.group(2)), group.index(match.group(3))


def _load_table(pairs: List, src: Ring, dst: Ring) -> Dict:
    return {src.decode(a): dst.decode(b) for a, b in pairs}


def load_table_functor(data: Dict, group: FiniteGroup) -> TableTambara:
    lattice = group.subgroup_lattice
    level_data = _require(data, 'levels', 'Tambara table')
    levels = [load_ring(_require(level_data, lattice.name(i), 'levels'), group) for i in range(len(lattice))]
    tables = {}
    for op in ('res', 'tr', 'nm'):
        tables[op] = {}
        for key, pairs in _require(data, op, 'Tambara table').items():
            i, j, c = _parse_key(group, key)
            src, dst = (levels[j], levels[i]) if op == 'res' else (levels[i], levels[j])
            tables[op][(i, j, c)] = _load_table(pairs, src, dst)
    conj = {}
    for key, pairs in data.get('conj', {}).items():
        name, _, label = key.partition('@')
        i = lattice.index_of_name(name)
        conj[(i, group.index(label))] = _load_table(pairs, levels[i], levels[i])
    return TableTambara(group, levels, tables['res'], tables['tr'], tables['nm'], conj,
                        name=data.get('name', 'table'))


def load_functor(data: Dict, group: Optional[FiniteGroup] = None) -> TambaraFunctor:
    """A recipe (burnside | constant | fixed | coinduce | zero) or a full table ("kind": "table")"""
    kind = _require(data, 'kind', 'functor')
    if group is None:
        group = load_group(_require(data, 'group', 'functor'))
    if kind == 'burnside':
        T = burnside_tambara(group)
    elif kind == 'table':
        T = load_table_functor(data, group)
    elif kind in ('constant', 'coinduce', 'fixed', 'zero'):
        ring = load_ring(data['ring'], group) if 'ring' in data else IntegersMod(1)
        if kind == 'constant' or kind == 'zero':
            T = constant(group, ring, name='zero' if kind == 'zero' else None)
        elif kind == 'coinduce':
            T = coinduce(group, ring)
        else:
            T = fixed_point(load_gring(group, ring, data.get('action')))
    else:
        raise SchemaError(f"Unknown functor kind {kind!r}")
    if data.get('scramble_seed') is not None:
        T = relabel(T, int(data['scramble_seed']))
    logger.info(f"Loaded functor {T.name} over {group.name}")
    return T


def dump_functor(T: TambaraFunctor) -> Dict:
    if isinstance(T, BurnsideTambara):
        return T.to_dict()
    return {'kind': 'table', **T.to_dict()}


def load_ideal(data: Dict, T: TambaraFunctor) -> NakaokaIdeal:
    """{level name: [elements]}; missing levels are zero"""
    lattice = T.lattice
    unknown = set(data) - {lattice.name(i) for i in range(T.num_levels)}
    if unknown:
        raise SchemaError(f"Unknown levels in ideal: {sorted(unknown)}")
    levels = []
    for i in range(T.num_levels):
        R = T.level(i)
        members = {load_element(R, x) for x in data.get(lattice.name(i), [])} | {R.zero}
        levels.append(frozenset(members))
    return NakaokaIdeal(T, tuple(levels))


def load_generators(data: Dict, T: TambaraFunctor) -> Dict[int, List]:
    lattice = T.lattice
    return {lattice.index_of_name(name): [load_element(T.level(lattice.index_of_name(name)), x) for x in xs]
            for name, xs in data.items()}


def load_module(data: Dict) -> MackeyModule:
    """{"kind": "self" | "square", "functor": ...} or {"kind": "zero_restriction", "group": ..., "p": 2}"""
    kind = _require(data, 'kind', 'module')
    if kind == 'zero_restriction':
        return MackeyModule.zero_restriction(load_group(_require(data, 'group', 'module')), int(data.get('p', 2)))
    green = load_functor(_require(data, 'functor', 'module'))
    module = MackeyModule.from_green(green)
    if kind == 'self':
        return module
    if kind == 'square':
        return MackeyModule.direct_sum(module, module)
    raise SchemaError(f"Unknown module kind {kind!r}")
