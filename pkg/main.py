#!/usr/bin/env python3
"""
Tambara Workbench - Main Entry Point
Exact computations with Tambara functors over small finite groups
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import pandas as pd

from bispans import compose
from classification import (algebraic_closure_map, classify_nullstellensatzian_shape, find_coinduced_splitting,
                            module_decomposition_check, res_tr_obstruction)
from config import CheckConfig, DataConfig, WorkbenchConfig
from constructions import adjunction_counts, functor_from_recipe, relabel
from errors import SearchCapExceeded, StructureError, UnsupportedOperation, WorkbenchError
from free_poly import eval_expr, generators_of, integrality_witness, level_of, parse_expr
from ideals_fields import ideal_closure, is_field_like, is_ideal, quotient
from io_formats import (document, dump_functor, dumps, load_bispan, load_element, load_functor, load_generators,
                        load_group, load_gset, load_gring, load_ideal, load_module, load_ring, read_document)
from rings import burnside_ring, ring_homs
from tambara_core import check_axioms, check_frobenius, check_mackey, enumerate_homs, eval_bispan

logger = logging.getLogger(__name__)

VERBS = ['group', 'gset', 'bispan', 'build', 'check', 'eval', 'ideal', 'fieldlike', 'classify',
         'closure-map', 'module-check', 'homs']


def setup_logging(level: str = 'INFO'):
    """Setup logging configuration; stdout is left for reports"""
    numeric_level = getattr(logging, level.upper(), None)
    if not isinstance(numeric_level, int):
        raise ValueError(f'Invalid log level: {level}')

    logs_dir = Path(DataConfig.LOGS_DIR)
    logs_dir.mkdir(parents=True, exist_ok=True)
    logging.basicConfig(
        level=numeric_level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(logs_dir / DataConfig.LOG_FILE),
            logging.StreamHandler(sys.stderr)
        ]
    )
    logging.getLogger().setLevel(numeric_level)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description='Tambara Workbench - exact equivariant algebra over finite groups'
    )
    parser.add_argument('command', choices=VERBS, help='Command to run')
    parser.add_argument('action', nargs='?', default=None,
                        help='Sub-command: bispan compose | ideal close|check|quotient | build <kind>')
    parser.add_argument('--input', help='JSON input document')
    parser.add_argument('--group', help='Group name for build/group (e.g. C2, S3, D8)')
    parser.add_argument('--ring', help='Ring name for build (e.g. F4, Z/4)')
    parser.add_argument('--action-frobenius', action='store_true', help='Frobenius action for build fixed')
    parser.add_argument('--scramble-seed', type=int, help='Relabel the built functor with this seed')
    parser.add_argument('--seed', type=int, default=None, help='Seed for randomized checks')
    parser.add_argument('--budget', type=int, default=None, help='Number of bispan pairs to check')
    parser.add_argument('--degree', type=int, default=2, help='Tower degree m for closure-map')
    parser.add_argument('--cap', type=int, default=None, help='Enumeration cap')
    parser.add_argument('--format', choices=['json', 'text'], default='json', help='Output format')
    parser.add_argument(
        '--log-level',
        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
        default='WARNING',
        help='Logging level'
    )
    return parser


# ------------------------------------------------------------------ verbs


def _input(args) -> Dict:
    if not args.input:
        raise StructureError(f"{args.command} needs --input")
    return read_document(args.input)


def _functor(data: Dict):
    return load_functor(data['functor'] if 'functor' in data else data)


def cmd_group(args) -> Tuple[int, Dict]:
    if args.input:
        data = _input(args)
        group = load_group(data.get('group', data))
    elif args.group:
        group = load_group(args.group)
    else:
        raise StructureError("group needs --input or --group")
    lattice = group.subgroup_lattice
    A = burnside_ring(group, group.elements)
    marks = A.table_of_marks
    names = A.basis_names
    payload = {
        'group': group.to_dict(),
        'lattice': lattice.to_dict(),
        'table_of_marks': {'rows': names, 'columns': names, 'marks': marks.tolist()},
    }
    return 0, payload


def cmd_gset(args) -> Tuple[int, Dict]:
    data = _input(args)
    group = load_group(data['group'])
    X = load_gset(data['gset'], group)
    lattice = group.subgroup_lattice
    orbits = [{'type': lattice.name(o.class_index), 'points': [str(X.labels[p]) for p in o.points],
               'base': str(X.labels[o.base])} for o in X.orbits]
    return 0, {'size': X.size, 'orbit_types': X.describe(), 'orbits': orbits}


def cmd_bispan(args) -> Tuple[int, Dict]:
    if args.action != 'compose':
        raise StructureError("bispan supports only: bispan compose")
    data = _input(args)
    group = load_group(data['group'])
    first = load_bispan(data['first'], group)
    second = load_bispan(data['second'], group)
    composite = compose(second, first)
    return 0, {'first': str(first), 'second': str(second), 'composite': str(composite),
               'bispan': composite.to_dict()}


def cmd_build(args) -> Tuple[int, Dict]:
    if args.input:
        T = _functor(_input(args))
    else:
        if not args.action or not args.group:
            raise StructureError("build needs a kind (burnside|constant|fixed|coinduce) and --group")
        group = load_group(args.group)
        ring = load_ring(args.ring) if args.ring else None
        gring = None
        if args.action == 'fixed' and ring is not None:
            gring = load_gring(group, ring, 'frobenius' if args.action_frobenius else None)
        T = functor_from_recipe(group, args.action, ring=ring, gring=gring)
        if args.scramble_seed is not None:
            T = relabel(T, args.scramble_seed)
    return 0, {'functor': dump_functor(T)}


def cmd_check(args) -> Tuple[int, Dict]:
    T = _functor(_input(args))
    seed = CheckConfig.DEFAULT_SEED if args.seed is None else args.seed
    report = check_axioms(T, seed=seed, budget=args.budget)
    payload = {'axioms': report.to_dict()}
    failed = not report.passed
    if T.enumerable:
        mackey = check_mackey(T, seed=seed)
        frobenius = check_frobenius(T, seed=seed)
        payload['mackey'] = {'violations': mackey[:20], 'count': len(mackey)}
        payload['frobenius'] = {'violations': frobenius[:20], 'count': len(frobenius)}
        failed = failed or bool(mackey) or bool(frobenius)
    return (1 if failed else 0), payload


def cmd_eval(args) -> Tuple[int, Dict]:
    data = _input(args)
    T = _functor(data)
    lattice = T.lattice
    if 'expr' in data:
        expr = parse_expr(data['expr'])
        levels = generators_of(expr)
        assign = {}
        for name, value in data.get('assign', {}).items():
            if name not in levels:
                raise StructureError(f"{name} is not a generator of the expression")
            assign[name] = load_element(T.level(lattice.index_of_name(levels[name])), value)
        i = level_of(expr, T.group)
        value = eval_expr(expr, T, assign)
        return 0, {'expr': data['expr'], 'level': lattice.name(i), 'value': T.level(i).encode(value)}
    if 'bispan' in data:
        b = load_bispan(data['bispan'], T.group)
        values = [load_element(T.level(o.class_index), v)
                  for o, v in zip(b.source.orbits, data.get('values', []))]
        result = eval_bispan(T, b, values)
        return 0, {'bispan': str(b),
                   'value': [T.level(o.class_index).encode(v) for o, v in zip(b.target.orbits, result)]}
    if 'witness' in data:
        request = data['witness']
        small, big = lattice.index_of_name(request['small']), lattice.index_of_name(request['big'])
        a = load_element(T.level(small), request['element'])
        return 0, {'witness': integrality_witness(T, small, big, a).to_dict()}
    raise StructureError("eval needs one of: expr, bispan, witness")


def cmd_ideal(args) -> Tuple[int, Dict]:
    data = _input(args)
    T = _functor(data)
    action = args.action or 'close'
    if action == 'close':
        I = ideal_closure(T, load_generators(data.get('generators', {}), T))
        return 0, {'ideal': I.to_dict(), 'sizes': I.sizes(), 'zero': I.is_zero(), 'unit': I.is_unit()}
    I = load_ideal(data['ideal'], T)
    if action == 'check':
        report = is_ideal(T, I)
        return (0 if report.valid else 1), report.to_dict()
    if action == 'quotient':
        Q, _ = quotient(T, I)
        return 0, {'functor': dump_functor(Q)}
    raise StructureError(f"Unknown ideal sub-command {action!r}")


def cmd_fieldlike(args) -> Tuple[int, Dict]:
    T = _functor(_input(args))
    report = is_field_like(T)
    return (0 if report.field_like else 1), report.to_dict()


def cmd_classify(args) -> Tuple[int, Dict]:
    T = _functor(_input(args))
    verdict = classify_nullstellensatzian_shape(T)
    payload = verdict.to_dict()
    if verdict.certificate is None and T.enumerable and not T.level(0).is_zero_ring():
        payload['search'] = find_coinduced_splitting(T).transcript
    return (0 if verdict.coinduced else 1), payload


def cmd_closure_map(args) -> Tuple[int, Dict]:
    T = _functor(_input(args))
    report = algebraic_closure_map(T, args.degree)
    return (0 if report.hom_valid and report.all_factor else 1), report.to_dict()


def cmd_module_check(args) -> Tuple[int, Dict]:
    data = _input(args)
    M = load_module(data['module'])
    violations = M.check_axioms()
    report = module_decomposition_check(M)
    payload = {'module': M.name, 'axiom_violations': violations[:20], 'decomposition': report.to_dict()}
    return (0 if report.passed and not violations else 1), payload


def cmd_homs(args) -> Tuple[int, Dict]:
    data = _input(args)
    S = load_functor(data['source'])
    T = load_functor(data['target'], group=S.group)
    homs = enumerate_homs(S, T)
    payload = {'count': len(homs), 'homs': [h.to_dict() for h in homs[:20]],
               'bottom_ring_homs': len(ring_homs(S.level(0), T.level(0))),
               'obstruction': res_tr_obstruction(S, T).to_dict()}
    if 'ring' in data:
        gring = load_gring(S.group, load_ring(data['ring'], S.group), data.get('action'))
        payload['adjunction'] = adjunction_counts(S, gring).to_dict()
    return 0, payload


COMMANDS = {
    'group': cmd_group, 'gset': cmd_gset, 'bispan': cmd_bispan, 'build': cmd_build, 'check': cmd_check,
    'eval': cmd_eval, 'ideal': cmd_ideal, 'fieldlike': cmd_fieldlike, 'classify': cmd_classify,
    'closure-map': cmd_closure_map, 'module-check': cmd_module_check, 'homs': cmd_homs,
}


# ------------------------------------------------------------------ output


def render_text(command: str, payload: Dict) -> str:
    """Tables via pandas; nested reports are flattened to key/value rows"""
    if command == 'group':
        marks = payload['table_of_marks']
        frame = pd.DataFrame(marks['marks'], index=marks['rows'], columns=marks['columns'])
        classes = pd.DataFrame(payload['lattice']['classes'])
        return f"📊 {payload['group']['name']}\n\n{classes.to_string(index=False)}\n\nTable of marks:\n{frame.to_string()}"
    flat = pd.json_normalize(payload, sep='.')
    rows = flat.T.reset_index()
    rows.columns = ['field', 'value']
    return rows.to_string(index=False)


def run(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one verb and print its report; returns the exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2

    setup_logging(args.log_level)
    saved_cap = WorkbenchConfig.ENUMERATION_CAP
    if args.cap is not None:
        WorkbenchConfig.ENUMERATION_CAP = args.cap
    try:
        code, payload = COMMANDS[args.command](args)
    except (SearchCapExceeded, UnsupportedOperation) as e:
        logger.error(f"{args.command}: {e}")
        print(f"❌ {e}", file=sys.stderr)
        return 2
    except (WorkbenchError, ValueError, KeyError) as e:
        logger.error(f"{args.command}: {e}")
        print(f"❌ Invalid input: {e}", file=sys.stderr)
        return 2
    finally:
        WorkbenchConfig.ENUMERATION_CAP = saved_cap

    if args.format == 'text':
        print(render_text(args.command, payload))
        print('✅ ok' if code == 0 else '❌ property violated', file=sys.stderr)
    else:
        print(dumps(document(command=args.command, result=payload)))
    return code


def main():
    """Main CLI entry point"""
    try:
        sys.exit(run(sys.argv[1:]))
    except KeyboardInterrupt:
        print("\n👋 Interrupted", file=sys.stderr)
        sys.exit(130)


if __name__ == '__main__':
    main()
