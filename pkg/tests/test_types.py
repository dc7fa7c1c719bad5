import itertools
import random

import pytest

from src.errors import RelabelError, UnresolvedTypeError
from src.symtab.names import QualName
from src.typesys import (BOOLEAN, INTEGER, STRING, AllStrings, Apply, ConstSet, CtorExt, DictTypeContext, IntConst,
                         IntRange, Order, RelabelingSpec, StrConst, TypeExpr, UnionRef, UserConst, contains_term,
                         expand, intersect, is_subtype, relabel_term, relabel_type, sorted_terms, term_order,
                         type_equal)

STATE = QualName.of("State")
IN_STATE = QualName.of("in", "State")
OUT_STATE = QualName.of("out", "State")
NOP = UserConst(QualName.of("NOP"))


def ctx():
    return DictTypeContext(
        unions={QualName.of("Action"): TypeExpr.of(CtorExt(QualName.of("Asn")), ConstSet(frozenset({NOP})))},
        ctors={
            STATE: (INTEGER,),
            IN_STATE: (INTEGER,),
            OUT_STATE: (INTEGER,),
            QualName.of("Asn"): (STRING, INTEGER),
        },
    )


def test_term_order_across_sorts():
    terms = [Apply(STATE, (IntConst(1),)), NOP, StrConst("a"), IntConst(7), IntConst(-3)]
    assert sorted_terms(terms) == [IntConst(-3), IntConst(7), StrConst("a"), NOP, Apply(STATE, (IntConst(1),))]
    assert term_order(IntConst(2), IntConst(2)) is Order.EQUAL
    assert term_order(StrConst("b"), StrConst("a")) is Order.GREATER


def test_term_order_is_lexicographic_on_arguments():
    a = Apply(STATE, (IntConst(1),))
    b = Apply(STATE, (IntConst(2),))
    assert term_order(a, b) is Order.LESS


def test_normal_form_merges_ranges_and_constants():
    t = TypeExpr.of(IntRange(0, 3), IntRange(4, 9), ConstSet(frozenset({IntConst(10), StrConst("x")})))
    assert t.ranges == (IntRange(0, 10),)
    assert t.consts == frozenset({StrConst("x")})
    assert TypeExpr.of(AllStrings(), ConstSet(frozenset({StrConst("x")}))) == STRING


def test_builtin_subtyping():
    c = ctx()
    natural = TypeExpr.of(IntRange(0, None))
    assert is_subtype(natural, INTEGER, c)
    assert not is_subtype(INTEGER, natural, c)
    assert is_subtype(TypeExpr.constants(StrConst("a")), STRING, c)
    assert not is_subtype(STRING, TypeExpr.constants(StrConst("a")), c)
    assert not is_subtype(BOOLEAN, INTEGER, c)


def test_union_expansion_and_membership():
    c = ctx()
    action = TypeExpr.of(UnionRef(QualName.of("Action")))
    assert expand(action, c) == TypeExpr.of(CtorExt(QualName.of("Asn")), ConstSet(frozenset({NOP})))
    assert contains_term(action, NOP, c)
    assert contains_term(action, Apply(QualName.of("Asn"), (StrConst("X"), IntConst(0))), c)
    assert not contains_term(action, Apply(QualName.of("Asn"), (IntConst(0), IntConst(0))), c)
    assert is_subtype(TypeExpr.constants(NOP), action, c)


def test_unknown_names_raise():
    with pytest.raises(UnresolvedTypeError):
        is_subtype(TypeExpr.of(UnionRef(QualName.of("Nowhere"))), INTEGER, ctx())
    with pytest.raises(UnresolvedTypeError):
        is_subtype(TypeExpr.of(CtorExt(QualName.of("Ghost"))), INTEGER, ctx())


def test_intersection():
    c = ctx()
    left = TypeExpr.of(IntRange(0, 10), AllStrings(), CtorExt(STATE))
    right = TypeExpr.of(IntRange(5, None), ConstSet(frozenset({StrConst("a"), NOP})))
    assert intersect(left, right, c) == TypeExpr.of(IntRange(5, 10), ConstSet(frozenset({StrConst("a")})))
    assert intersect(None, right, c) == right


def test_relabel_term_swaps_prefix():
    rho = RelabelingSpec.of(("in",), ("out",))
    term = Apply(IN_STATE, (IntConst(1),))
    assert relabel_term(rho, term) == Apply(OUT_STATE, (IntConst(1),))
    assert relabel_term(rho.inverse(), relabel_term(rho, term)) == term
    assert relabel_term(rho, NOP) == NOP
    with pytest.raises(RelabelError):
        relabel_term(rho, Apply(STATE, (IntConst(1),)))


def test_relabel_type():
    rho = RelabelingSpec.of((), ("out",))
    t = TypeExpr.of(CtorExt(STATE), IntRange(1, 2))
    assert relabel_type(rho, t) == TypeExpr.of(CtorExt(OUT_STATE), IntRange(1, 2))
    assert str(RelabelingSpec.of(("in",), ("out",))) == "ρ[in→out]"


TREE = QualName.of("Tree")
LEAF = QualName.of("Leaf")
NODE = QualName.of("Node")
TAG = QualName.of("Tag")


def tree_ctx():
    return DictTypeContext(
        unions={TREE: TypeExpr.of(CtorExt(LEAF), CtorExt(NODE))},
        ctors={
            LEAF: (TypeExpr.of(IntRange(0, 1)),),
            NODE: (TypeExpr.of(UnionRef(TREE)), TypeExpr.of(UnionRef(TREE))),
            TAG: (STRING,),
        },
    )


def enumerate_terms(ctx, ctors, constants, depth):
    """Every well-typed ground term nesting at most depth deep."""
    terms = set(constants)
    for _ in range(depth - 1):
        fields = {name: ctx.ctor_fields(name) for name in ctors}
        terms |= {Apply(name, args)
                  for name, types in fields.items()
                  for args in itertools.product(terms, repeat=len(types))
                  if all(contains_term(t, a, ctx) for t, a in zip(types, args))}
    return sorted_terms(terms)


def _random_type(rng, config):
    lo, hi = config["int_min"], config["int_max"]
    atoms = []
    if rng.random() < 0.5:
        a, b = sorted(rng.randint(lo, hi) for _ in range(2))
        atoms.append(IntRange(a, b))
    if rng.random() < 0.2:
        atoms.append(AllStrings())
    values = {StrConst(s) for s in config["strings"] if rng.random() < 0.4}
    values |= {IntConst(rng.randint(lo, hi)) for _ in range(rng.randint(0, 2))}
    if values:
        atoms.append(ConstSet(frozenset(values)))
    atoms.extend(CtorExt(name) for name in (LEAF, NODE, TAG) if rng.random() < 0.25)
    if rng.random() < 0.15:
        atoms.append(UnionRef(TREE))
    return TypeExpr(frozenset(atoms))


def _universe(config):
    values = [IntConst(i) for i in range(config["int_min"] - 1, config["int_max"] + 2)]
    values += [StrConst(s) for s in config["strings"] + ["zz"]]
    return enumerate_terms(tree_ctx(), (LEAF, NODE, TAG), values, config["depth"])


def _random_types(config, seed):
    rng = random.Random(seed)
    base = [_random_type(rng, config) for _ in range(10)]
    return base + [a.union(b) for a, b in zip(base, base[1:])]


def test_enumeration_reaches_the_configured_depth(oracle_config):
    universe = _universe(oracle_config)
    leaf = Apply(LEAF, (IntConst(0),))
    assert Apply(TAG, (StrConst("zz"),)) in universe
    assert Apply(NODE, (leaf, leaf)) in universe
    assert not any(isinstance(t, Apply) and t.ctor == NODE and isinstance(t.args[0], Apply)
                   and t.args[0].ctor == NODE for t in universe)


def test_subtyping_agrees_with_enumeration(oracle_config):
    c = tree_ctx()
    universe = _universe(oracle_config)
    for seed in oracle_config["seeds"]:
        types = _random_types(oracle_config, seed)
        members = [frozenset(v for v in universe if contains_term(t, v, c)) for t in types]
        for (a, ma), (b, mb) in itertools.product(zip(types, members), repeat=2):
            assert is_subtype(a, b, c) == (ma <= mb), (a, b)
            assert type_equal(a, b, c) == (ma == mb), (a, b)
            inter = intersect(a, b, c)
            assert {v for v in universe if contains_term(inter, v, c)} == ma & mb


def test_subtyping_is_transitive(oracle_config):
    c = tree_ctx()
    for seed in oracle_config["seeds"]:
        types = _random_types(oracle_config, seed)
        below = {(i, j) for i, j in itertools.product(range(len(types)), repeat=2)
                 if is_subtype(types[i], types[j], c)}
        for (i, j), (k, m) in itertools.product(below, repeat=2):
            if j == k:
                assert (i, m) in below


def test_normal_form_is_idempotent(oracle_config):
    c = tree_ctx()
    for seed in oracle_config["seeds"]:
        for t in _random_types(oracle_config, seed):
            again = TypeExpr(t.atoms)
            assert again == t
            assert again.ranges == t.ranges
            assert expand(expand(t, c), c) == expand(t, c)


def test_relabel_round_trip_on_enumerated_terms(oracle_config):
    into = RelabelingSpec.of((), ("in",))
    rho = RelabelingSpec.of(("in",), ("out",))
    for term in _universe(oracle_config):
        qualified = relabel_term(into, term)
        moved = relabel_term(rho, qualified)
        assert relabel_term(rho.inverse(), moved) == qualified
        assert relabel_term(into.inverse(), qualified) == term
        if isinstance(term, Apply):
            assert moved.ctor.qualifiers[0] == "out"
        else:
            assert moved == term


def _ctors(*names):
    return TypeExpr.of(*(CtorExt(QualName.of(n)) for n in names))


@pytest.mark.parametrize("domain, left, right, equal", [
    ("Actions", TypeExpr.of(IntRange(0, 5)), TypeExpr.constants(*(IntConst(i) for i in range(6))), True),
    ("Actions", TypeExpr.of(UnionRef(QualName.of("Expr"))), _ctors("Var", "UnApp", "BnApp").union(BOOLEAN, INTEGER),
     True),
    ("NonDetFSM", _ctors("Trans"), _ctors("Init"), False),
], ids=["range-as-constants", "expr-union", "trans-vs-init"])
def test_documented_type_equalities(corpus, domain, left, right, equal):
    ctx = corpus.domain(domain).table
    assert type_equal(left, right, ctx) is equal


def test_transition_witness_separates_constructors(corpus):
    ctx = corpus.domain("NonDetFSM").table
    names = [QualName.of(n) for n in ("State", "Event", "Init", "Trans")]
    terms = enumerate_terms(ctx, names, [IntConst(1), StrConst("a")], 3)
    witness = Apply(QualName.of("Trans"), (Apply(QualName.of("State"), (IntConst(1),)),
                                           Apply(QualName.of("Event"), (StrConst("a"),)),
                                           Apply(QualName.of("State"), (IntConst(1),))))
    assert witness in terms
    assert contains_term(_ctors("Trans"), witness, ctx)
    assert not contains_term(_ctors("Init"), witness, ctx)
    assert not is_subtype(_ctors("Trans"), _ctors("Init"), ctx)
