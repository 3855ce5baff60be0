import pytest
from hypothesis import given, settings, strategies as st

from sra.algebra import (
    INTEGERS,
    UNICODE,
    MAX_CODEPOINT,
    AlgebraError,
    And,
    Atom,
    Div,
    FALSE,
    Interval,
    Not,
    Or,
    TRUE,
    algebra_by_name,
)

from oracles import INT_RANGE, brute_count, brute_is_sat, brute_minterm_bits, enum_denotation


X_GT_2 = Interval(3, None)
X_LT_5 = Interval(None, 4)

EXAMPLE_PREDS = (Atom(0), Div(3), And((Interval(0, 10), Div(5))), Not(Interval(0, 10)))


# ---------------------------------------------------------------------------
# denotes


def test_denotes_interval_and_div():
    p = And((Interval(0, 10), Div(5)))
    assert INTEGERS.denotes(p, 5)
    assert INTEGERS.denotes(p, 0)
    assert not INTEGERS.denotes(p, 3)


def test_denotes_negated_atom():
    assert not INTEGERS.denotes(Not(Atom(0)), 0)
    assert INTEGERS.denotes(Not(Atom(0)), 1)


def test_denotes_empty_language_guard_combination():
    p = And((Div(3), Not(Atom(0)), Div(5), Interval(0, 10)))
    for n in range(0, 11):
        assert not INTEGERS.denotes(p, n)


def test_denotes_rejects_wrong_instance():
    with pytest.raises(AlgebraError):
        UNICODE.denotes(Div(3), 5)
    with pytest.raises(AlgebraError):
        UNICODE.denotes(TRUE, -1)
    with pytest.raises(AlgebraError):
        INTEGERS.denotes(TRUE, "x")


# ---------------------------------------------------------------------------
# is_sat


def test_is_sat_false_pred():
    assert not INTEGERS.is_sat(FALSE)
    assert not UNICODE.is_sat(FALSE)


def test_is_sat_integer_window():
    assert INTEGERS.is_sat(And((X_GT_2, X_LT_5)))


def test_is_sat_example_guard_conjunction_unsat():
    p = And((Div(3), Not(Atom(0)), Div(5), Interval(0, 10)))
    assert not INTEGERS.is_sat(p)


def test_is_sat_matches_bruteforce_on_samples():
    samples = [
        TRUE,
        FALSE,
        Interval(-7, 12),
        And((Interval(-50, 50), Div(7))),
        And((Div(4), Div(6), Interval(0, 11))),
        Or((Atom(-3), And((Interval(5, 9), Div(11))))),
        And((Not(Interval(-100, 99)), Interval(-100, 100))),
        And((Interval(3, 3), Div(2))),
    ]
    for p in samples:
        assert INTEGERS.is_sat(p) == brute_is_sat(INTEGERS, p), p


# ---------------------------------------------------------------------------
# build


def test_build_and_identity():
    p = Interval(2, 9)
    q = INTEGERS.build("and", [TRUE, p])
    assert enum_denotation(INTEGERS, q) == enum_denotation(INTEGERS, p)


def test_build_not_bottom_is_domain():
    q = INTEGERS.build("not", [FALSE])
    assert all(INTEGERS.denotes(q, a) for a in range(-5, 6))


def test_build_window_denotes_exactly_three_four():
    q = INTEGERS.build("and", [X_GT_2, X_LT_5])
    assert enum_denotation(INTEGERS, q, range(0, 11)) == [3, 4]


def test_build_arity_errors():
    with pytest.raises(AlgebraError):
        INTEGERS.build("not", [TRUE, FALSE])
    with pytest.raises(AlgebraError):
        INTEGERS.build("and", [TRUE])
    with pytest.raises(AlgebraError):
        UNICODE.build("and", [TRUE, Div(3)])


# ---------------------------------------------------------------------------
# has_min_size


def test_has_min_size_singleton():
    assert INTEGERS.has_min_size(Atom(0), 1)
    assert not INTEGERS.has_min_size(Atom(0), 2)


def test_has_min_size_three_multiples_of_five():
    p = And((Interval(0, 10), Div(5)))
    assert INTEGERS.has_min_size(p, 3)
    assert not INTEGERS.has_min_size(p, 4)


def test_has_min_size_full_unicode_domain():
    assert UNICODE.has_min_size(TRUE, MAX_CODEPOINT + 1)
    assert not UNICODE.has_min_size(TRUE, MAX_CODEPOINT + 2)


def test_has_min_size_matches_bruteforce_on_bounded_fragment():
    samples = [
        Interval(-3, 3),
        And((Interval(-30, 30), Div(4))),
        Or((Atom(1), Atom(1), Atom(2))),
        And((Interval(0, 20), Not(Div(2)))),
    ]
    for p in samples:
        n = brute_count(INTEGERS, p)
        assert INTEGERS.has_min_size(p, n)
        assert not INTEGERS.has_min_size(p, n + 1)


# ---------------------------------------------------------------------------
# witness


def test_witness_exhausted_set():
    p = And((Div(3), Interval(0, 10)))
    assert INTEGERS.witness(p, {0, 3, 6, 9}) is None


def test_witness_least_element():
    assert INTEGERS.witness(TRUE) == 0
    assert UNICODE.witness(TRUE) == 0


def test_witness_skips_exclusions():
    assert INTEGERS.witness(And((X_GT_2, X_LT_5)), {3}) == 4


def test_witness_unbounded_below_is_deterministic():
    p = Not(Interval(0, 10))
    w1 = INTEGERS.witness(p)
    w2 = INTEGERS.witness(p)
    assert w1 == w2 == 11  # canonical order prefers non-negative elements
    neg = And((Interval(None, -1), Div(4)))
    assert INTEGERS.witness(neg) == -4  # greatest negative when forced below 0


def test_witness_member_of_denotation():
    p = And((Interval(-40, 40), Div(7), Not(Atom(0))))
    w = INTEGERS.witness(p)
    assert w is not None and INTEGERS.denotes(p, w)


# ---------------------------------------------------------------------------
# minterms


def test_minterms_of_window_pair():
    mts = INTEGERS.minterms([X_GT_2, X_LT_5])
    assert len(mts) == 3
    bitsets = {m.bits for m in mts}
    assert bitsets == {(1, 1), (0, 1), (1, 0)}


def test_minterms_empty_set_is_top():
    mts = INTEGERS.minterms([])
    assert len(mts) == 1
    only = mts.minterms[0]
    assert only.positives == frozenset()
    assert INTEGERS.denotes(only.conjunction, 42)


def test_minterms_of_example_predicate_set_match_bruteforce():
    mts = INTEGERS.minterms(EXAMPLE_PREDS)
    got = {m.bits for m in mts}
    expected = brute_minterm_bits(INTEGERS, EXAMPLE_PREDS)
    assert got == expected
    assert len(got) < 16  # some sign patterns are unsatisfiable


def test_minterms_partition_the_domain():
    mts = INTEGERS.minterms(EXAMPLE_PREDS)
    for a in list(range(-25, 26)) + [123, -999, 10**9]:
        holds = [m for m in mts if INTEGERS.denotes(m.conjunction, a)]
        assert len(holds) == 1, a


def test_minterms_pairwise_disjoint():
    mts = INTEGERS.minterms(EXAMPLE_PREDS)
    ms = list(mts)
    for i in range(len(ms)):
        for j in range(i + 1, len(ms)):
            assert not INTEGERS.is_sat(And((ms[i].conjunction, ms[j].conjunction)))


# ---------------------------------------------------------------------------
# property tests over the bounded integer fragment

bounded_ints = st.integers(min_value=-40, max_value=40)


@st.composite
def bounded_predicates(draw, depth=3):
    if depth == 0:
        choice = draw(st.integers(min_value=0, max_value=4))
        if choice == 0:
            return TRUE
        if choice == 1:
            return FALSE
        if choice == 2:
            a = draw(bounded_ints)
            b = draw(bounded_ints)
            return Interval(min(a, b), max(a, b))
        if choice == 3:
            return Div(draw(st.integers(min_value=1, max_value=9)))
        return Atom(draw(bounded_ints))
    choice = draw(st.integers(min_value=0, max_value=3))
    if choice == 0:
        return draw(bounded_predicates(depth=0))
    if choice == 1:
        return Not(draw(bounded_predicates(depth=depth - 1)))
    args = (
        draw(bounded_predicates(depth=depth - 1)),
        draw(bounded_predicates(depth=depth - 1)),
    )
    return And(args) if choice == 2 else Or(args)


@given(bounded_predicates(), bounded_predicates(), bounded_ints)
@settings(max_examples=150, deadline=None)
def test_connectives_agree_with_set_operations(p, q, a):
    assert INTEGERS.denotes(And((p, q)), a) == (
        INTEGERS.denotes(p, a) and INTEGERS.denotes(q, a)
    )
    assert INTEGERS.denotes(Or((p, q)), a) == (
        INTEGERS.denotes(p, a) or INTEGERS.denotes(q, a)
    )
    assert INTEGERS.denotes(Not(p), a) != INTEGERS.denotes(p, a)


@given(bounded_predicates())
@settings(max_examples=150, deadline=None)
def test_is_sat_agrees_with_bruteforce(p):
    # witnesses for this fragment always fall inside INT_RANGE: endpoints
    # and atoms lie in [-40, 40] and the lcm of moduli <= 9! stays tiny
    assert INTEGERS.is_sat(p) == brute_is_sat(INTEGERS, p)


@given(bounded_predicates(), st.integers(min_value=0, max_value=12))
@settings(max_examples=150, deadline=None)
def test_has_min_size_agrees_with_bruteforce(p, k):
    bounded = And((p, Interval(-100, 100)))
    assert INTEGERS.has_min_size(bounded, k) == (brute_count(INTEGERS, bounded) >= k)


@given(bounded_predicates(), st.sets(bounded_ints, max_size=5))
@settings(max_examples=150, deadline=None)
def test_witness_is_deterministic_and_valid(p, excluded):
    w1 = INTEGERS.witness(p, excluded)
    w2 = INTEGERS.witness(p, excluded)
    assert w1 == w2
    if w1 is not None:
        assert INTEGERS.denotes(p, w1)
        assert w1 not in excluded


@given(st.lists(bounded_predicates(depth=1), min_size=0, max_size=4), bounded_ints)
@settings(max_examples=100, deadline=None)
def test_minterm_partition_property(preds, a):
    mts = INTEGERS.minterms(preds)
    holds = [m for m in mts if INTEGERS.denotes(m.conjunction, a)]
    assert len(holds) == 1


# ---------------------------------------------------------------------------
# concrete syntax


@pytest.mark.parametrize(
    "text",
    [
        "true",
        "false",
        "[0-10]",
        "[-5-inf]",
        "div 3",
        "atom -7",
        "!([0-10])",
        "(div 3 & !(atom 0))",
        "(([0-10] & div 5) | atom 12)",
    ],
)
def test_integer_syntax_round_trip(text):
    p = INTEGERS.parse(text)
    assert INTEGERS.show(p) == text
    assert INTEGERS.parse(INTEGERS.show(p)) == p


@pytest.mark.parametrize(
    "text",
    [
        "['a'-'z']",
        "[U+0000-U+10FFFF]",
        "atom 'x'",
        "atom U+000A",
        "(['0'-'9'] | atom ' ')",
        "!(atom U+0027)",
    ],
)
def test_unicode_syntax_round_trip(text):
    p = UNICODE.parse(text)
    assert UNICODE.show(p) == text
    assert UNICODE.parse(UNICODE.show(p)) == p


def test_parse_errors_report_position():
    with pytest.raises(AlgebraError):
        INTEGERS.parse("[0-")
    with pytest.raises(AlgebraError):
        INTEGERS.parse("(true &)")
    with pytest.raises(AlgebraError):
        INTEGERS.parse("true false")
    with pytest.raises(AlgebraError):
        UNICODE.parse("div 3")


def test_algebra_by_name():
    assert algebra_by_name("int") is INTEGERS
    assert algebra_by_name("unicode") is UNICODE
    with pytest.raises(AlgebraError):
        algebra_by_name("rationals")
