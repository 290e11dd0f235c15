import itertools

import pytest
from hypothesis import given, settings, strategies as st

from coxinv.errors import ConfigurationError, ContextError, EnumerationError, ParseError
from coxinv.symbols import (
    MINUS_ONE,
    ONE,
    TWO,
    ZERO,
    CohClass,
    Monomial,
    SquareClass,
    SymbolContext,
    monomial_support_vector,
    parse_class,
)

FREE = ("a1", "a2", "a3", "t", "u")


def make_ctx(minus=False, two=False):
    ctx = SymbolContext(minus, two).with_atoms(*FREE)
    return ctx.with_dependent("N", relations=[ctx["t"]], specialization={ctx["t"]: None})


CTX = make_ctx()
ATOMS = [CTX[n] for n in FREE] + [CTX["N"]]
ALL_ATOMS = ATOMS + [MINUS_ONE, TWO]


def sq(ctx, *names):
    return SquareClass.of(*(ctx[n] for n in names))


# -- worked examples -------------------------------------------------------


def test_sym_trivial_is_zero():
    assert CTX.sym(SquareClass()) == ZERO


def test_sym_two_t():
    assert CTX.sym(sq(CTX, "2", "t")) == CTX.sym(TWO) + CTX.sym(CTX["t"])
    assert str(CTX.sym(sq(CTX, "2", "t"))) == "(2)+(t)"


def test_sym_exponents_mod_two():
    u, t = CTX["u"], CTX["t"]
    assert CTX.sym(SquareClass.of(u, t, u)) == CTX.sym(t)


def test_cup_t_t_with_minus_one_square():
    ctx = make_ctx(minus=True)
    t = ctx.sym(ctx["t"])
    assert ctx.cup(t, t) == ZERO
    assert str(CTX.cup(CTX.sym(CTX["t"]), CTX.sym(CTX["t"]))) == "(−1)·(t)"


def test_cup_two_with_two_t():
    assert str(CTX.cup(CTX.sym(TWO), CTX.sym(sq(CTX, "2", "t")))) == "(2)·(t)"


def test_cup_distinct_free():
    assert str(CTX.cup(CTX.sym(CTX["u"]), CTX.sym(CTX["t"]))) == "(t)·(u)"


def test_minus_one_times_two_vanishes():
    assert CTX.cup(CTX.sym(MINUS_ONE), CTX.sym(TWO)) == ZERO


def test_dependent_relation_kills():
    assert CTX.cup(CTX.sym(CTX["N"]), CTX.sym(CTX["t"])) == ZERO


def test_residue_examples():
    t, u = CTX["t"], CTX["u"]
    assert CTX.residue_at(CTX.cup(CTX.sym(t), CTX.sym(u)), t) == CTX.sym(u)
    assert CTX.residue_at(CTX.cup(CTX.sym(u), CTX.sym(CTX["a1"])), t) == ZERO


def test_residue_with_markers_at_norm():
    ctx = SymbolContext().with_atoms("t", "u", "v", "lam2", "lam3")
    ctx = ctx.with_dependent("N", relations=[ctx["t"]], specialization={ctx["t"]: None})
    lam2, lam3 = ctx.sym(ctx["lam2"]), ctx.sym(ctx["lam3"])
    tn = ctx.sym(sq(ctx, "t", "N"))
    two_u = ctx.sym(sq(ctx, "2", "u"))
    minus_tn = ctx.sym(sq(ctx, "-1", "t", "N"))
    c = ctx.cup(lam2, tn) + ctx.cup(lam3, two_u, minus_tn)
    assert ctx.residue_at(c, ctx["N"]) == lam2 + ctx.cup(lam3, two_u)


def test_support_vector_examples():
    t, u = CTX.sym(CTX["t"]), CTX.sym(CTX["u"])
    tu = CTX.cup(t, u)
    basis = [next(iter(t.terms)), next(iter(u.terms)), next(iter(tu.terms))]
    assert monomial_support_vector(t + u, basis) == (1, 1, 0)
    assert monomial_support_vector(ZERO, basis) == (0, 0, 0)
    assert monomial_support_vector(tu, basis) == (0, 0, 1)
    with pytest.raises(EnumerationError):
        monomial_support_vector(CTX.sym(CTX["a1"]), basis)


def test_errors():
    with pytest.raises(ContextError):
        CTX.sym(SquareClass.of(SymbolContext().with_atoms("zz")["zz"]))
    with pytest.raises(ContextError):
        CTX.with_atoms("t")
    with pytest.raises(ContextError):
        CTX["nope"]
    bare = SymbolContext().with_atoms("x").with_dependent("M")
    with pytest.raises(ConfigurationError):
        bare.residue_at(bare.sym(bare["M"]), bare["M"])
    with pytest.raises(ContextError):
        SymbolContext().with_atoms("x").with_dependent("M", relations=[SymbolContext().with_atoms("y")["y"]])


def test_rendering_and_order():
    c = CTX.cup(CTX.sym(MINUS_ONE), CTX.sym(MINUS_ONE), CTX.sym(CTX["a2"])) + CTX.sym(CTX["a1"]) + ONE
    assert str(c) == "1+(a1)+(−1)^2·(a2)"
    assert str(ZERO) == "0"


@pytest.mark.parametrize("text", ["0", "1", "(t)", "(2)·(N)+(−1)^3·(u)·(a1)", "1+(a1)+(a2)·(a3)"])
def test_parse_round_trip(text):
    c = parse_class(text, CTX)
    assert str(c) == text
    assert parse_class(str(c), CTX) == c


def test_parse_any_factor_order():
    assert parse_class("(a1)·(u) + 1", CTX) == parse_class("1+(u)·(a1)", CTX)


def test_parse_ascii_and_errors():
    assert parse_class("(-1)*(t)", CTX) == parse_class("(−1)·(t)", CTX)
    with pytest.raises(ParseError) as e:
        parse_class("(t)+(q)", CTX)
    assert e.value.position >= 4
    with pytest.raises(ParseError):
        parse_class("(t", CTX)
    with pytest.raises(ParseError):
        parse_class("", CTX)


def test_context_is_immutable_extension():
    a = SymbolContext()
    b = a.with_atoms("x")
    assert "x" in b and "x" not in a


# -- properties -------------------------------------------------------------

raw_monomials = st.builds(
    Monomial,
    st.integers(0, 3),
    st.booleans(),
    st.frozensets(st.sampled_from(ATOMS), max_size=4),
)
flag_pairs = st.tuples(st.booleans(), st.booleans())


@st.composite
def classes(draw, ctx=CTX):
    monos = draw(st.lists(raw_monomials, max_size=4))
    return ctx.renormalize(CohClass(frozenset(monos)))


square_classes = st.frozensets(st.sampled_from(ALL_ATOMS), max_size=5).map(SquareClass)


@settings(max_examples=1000)
@given(raw_monomials, flag_pairs)
def test_normalize_idempotent(m, flags):
    ctx = CTX.with_flags(*flags)
    n = ctx.normalize(m)
    if n is not None:
        assert ctx.normalize(n) == n
        assert not (n.two and n.minus_one_exp)


@settings(max_examples=1000)
@given(classes(), classes())
def test_cup_commutative(a, b):
    assert CTX.cup(a, b) == CTX.cup(b, a)


@settings(max_examples=1000)
@given(classes(), classes(), classes())
def test_cup_associative(a, b, c):
    assert CTX.cup(CTX.cup(a, b), c) == CTX.cup(a, CTX.cup(b, c))


@settings(max_examples=1000)
@given(classes(), classes(), classes())
def test_cup_distributive(a, b, c):
    assert CTX.cup(a, b + c) == CTX.cup(a, b) + CTX.cup(a, c)


@settings(max_examples=1000)
@given(square_classes, square_classes)
def test_sym_is_homomorphism(x, y):
    assert CTX.sym(x * y) == CTX.sym(x) + CTX.sym(y)


def _specialize(ctx, c, p):
    spec = ctx.specializations.get(p, {})
    out = ZERO
    for m in c.terms:
        factors = [CohClass(frozenset({Monomial(m.minus_one_exp, m.two)}))]
        for x in m.rest:
            if x in spec:
                factors.append(ZERO if spec[x] is None else ctx.sym(spec[x]))
            else:
                factors.append(ctx.sym(x))
        out = out + ctx.cup(*factors)
    return out


@st.composite
def residue_case(draw):
    p = draw(st.sampled_from(ATOMS))
    # gamma avoids p and any dependent atom tied to p by a relation
    banned = {p} | {d for d, partners in CTX.relations.items() if p in partners}
    allowed = [a for a in ATOMS if a not in banned]
    free_monos = st.builds(Monomial, st.integers(0, 2), st.booleans(), st.frozensets(st.sampled_from(allowed), max_size=3))
    beta = CTX.renormalize(CohClass(frozenset(draw(st.lists(st.builds(
        Monomial, st.integers(0, 2), st.booleans(),
        st.frozensets(st.sampled_from([a for a in ATOMS if a != p]), max_size=3)), max_size=4)))))
    gamma = CTX.renormalize(CohClass(frozenset(draw(st.lists(free_monos, max_size=4)))))
    return p, beta, gamma


@settings(max_examples=1000)
@given(residue_case())
def test_residue_contract(case):
    p, beta, gamma = case
    assert CTX.residue_at(beta, p) == ZERO
    c = beta + CTX.cup(CTX.sym(p), gamma)
    assert CTX.residue_at(c, p) == _specialize(CTX, gamma, p)


@settings(max_examples=1000)
@given(classes(), classes(), st.sampled_from(ATOMS))
def test_residue_linear(a, b, p):
    assert CTX.residue_at(a + b, p) == CTX.residue_at(a, p) + CTX.residue_at(b, p)


# -- exterior algebra oracle --------------------------------------------------


def _ext_mul(s, t):
    return None if s & t else s | t


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_flags_set_gives_exterior_algebra(n):
    names = [f"x{i}" for i in range(n)]
    ctx = SymbolContext(True, True).with_atoms(*names)
    xs = [ctx.sym(ctx[x]) for x in names]

    def cls_of(mask):
        return ctx.cup(*(xs[i] for i in range(n) if (mask >> i) & 1))

    # every product of degree-1 symbols (with repetition) lands in the squarefree subsets
    seen = set()
    for word in itertools.product(range(n), repeat=min(n + 1, 4)):
        c = ctx.cup(*(xs[i] for i in word))
        seen |= c.terms
    for k in range(n + 1):
        for sub in itertools.combinations(range(n), k):
            seen |= cls_of(sum(1 << i for i in sub)).terms
    assert len(seen) == 2**n
    assert all(m.minus_one_exp == 0 and not m.two for m in seen)
    for s in range(1 << n):
        for t in range(1 << n):
            want = _ext_mul(s, t)
            got = ctx.cup(cls_of(s), cls_of(t))
            assert got == (ZERO if want is None else cls_of(want))
