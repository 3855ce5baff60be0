import random

from sra.algebra import TRUE, INTEGERS, Div
from sra.core import Label, make_sra, membership, validate
from sra.single_valued import (
    eliminate_bullet,
    is_single_valued,
    sv_label_kind,
    to_single_valued,
)

from fixtures import example3, first_symbol_repeats, random_sra, remark1, remark1_oracle
from oracles import brute_membership, words_up_to


# ---------------------------------------------------------------------------
# is_single_valued


def test_output_of_translation_is_single_valued():
    for S in (example3(), remark1(), first_symbol_repeats()):
        T = to_single_valued(S)
        assert validate(T) == []
        assert is_single_valued(T)


def test_mixed_label_is_not_single_valued():
    S = make_sra(
        INTEGERS,
        ["r", "s"],
        ["p", "q"],
        "p",
        {},
        ["q"],
        [("p", TRUE, ("r",), (), ("s",), "q")],
    )
    assert not is_single_valued(S)


def test_non_injective_initial_valuation_is_not_single_valued():
    S = make_sra(INTEGERS, ["r", "s"], ["p"], "p", {"r": 5, "s": 5}, [], [])
    assert not is_single_valued(S)


def test_sv_label_kind_classification():
    assert sv_label_kind(2, Label(TRUE, frozenset({1}), frozenset(), frozenset())) == (
        "read",
        1,
    )
    assert sv_label_kind(
        2, Label(TRUE, frozenset(), frozenset({0, 1}), frozenset({0}))
    ) == ("fresh", 0)
    assert sv_label_kind(
        2, Label(TRUE, frozenset(), frozenset({0, 1}), frozenset())
    ) == ("bullet", -1)
    assert sv_label_kind(2, Label(TRUE, frozenset(), frozenset(), frozenset())) is None


# ---------------------------------------------------------------------------
# to_single_valued


def test_translation_preserves_membership_exhaustively():
    for S in (example3(), remark1(), first_symbol_repeats()):
        T = to_single_valued(S)
        for w in words_up_to(range(0, 4), 3):
            assert membership(S, w) == membership(T, w), (S.states, w)


def test_translation_preserves_membership_random_words():
    rng = random.Random(11)
    S = remark1()
    T = to_single_valued(S)
    for _ in range(50):
        w = [rng.randint(0, 8) for _ in range(rng.randint(0, 7))]
        assert membership(T, w) == remark1_oracle(w)


def test_translation_preserves_membership_on_random_automata():
    rng = random.Random(23)
    for _ in range(40):
        S = random_sra(rng)
        T = to_single_valued(S)
        assert is_single_valued(T)
        for w in words_up_to(range(0, 3), 3):
            assert brute_membership(S, w) == membership(T, w)


def test_translation_state_bound():
    for S in (example3(), remark1(), first_symbol_repeats()):
        T = to_single_valued(S)
        n = len(S.states)
        r = len(S.registers)
        assert len(T.registers) == r + 1
        assert len(T.states) <= n * (r + 1) ** max(r, 1)


def test_double_store_collapses_to_one_fresh_slot():
    S = make_sra(
        INTEGERS,
        ["r", "s"],
        ["p", "q"],
        "p",
        {},
        ["q"],
        [("p", TRUE, (), (), ("r", "s"), "q")],
    )
    T = to_single_valued(S)
    fresh = [
        (lab, dst)
        for _, lab, dst in T.transitions
        if sv_label_kind(len(T.registers), lab)[0] == "fresh"
    ]
    assert len(fresh) == 1
    (lab, dst) = fresh[0]
    assert len(lab.U) == 1  # both r and s now track a single slot


def test_translation_skip_store_read_chain():
    # a value consumed and dropped may reappear and be stored later; the
    # tracker slot for the dropped value must not capture the register
    S = make_sra(
        INTEGERS,
        ["r"],
        ["0", "1", "2", "3"],
        "0",
        {"r": None},
        ["3"],
        [
            ("0", TRUE, (), (), (), "1"),
            ("1", TRUE, (), (), ("r",), "2"),
            ("2", TRUE, ("r",), (), (), "3"),
        ],
    )
    T = to_single_valued(S)
    assert membership(S, [5, 5, 5])
    assert membership(T, [5, 5, 5])
    for w in words_up_to(range(0, 3), 3):
        assert membership(S, w) == membership(T, w), w


def test_translation_is_reproducible():
    S = remark1()
    assert to_single_valued(S) == to_single_valued(S)


def test_translation_of_already_single_valued_automaton():
    S = remark1()
    T = to_single_valued(S)
    U = to_single_valued(T)
    assert is_single_valued(U)
    rng = random.Random(5)
    for _ in range(50):
        w = [rng.randint(0, 6) for _ in range(rng.randint(0, 6))]
        assert membership(U, w) == membership(T, w)


# ---------------------------------------------------------------------------
# eliminate_bullet


def bullet_fixture():
    # reads one even number it does not keep, then one fresh value stored
    # into r; r is never read back, so the flat rewrite stays faithful
    all1 = ("r",)
    return make_sra(
        INTEGERS,
        ["r"],
        ["0", "1", "2"],
        "0",
        {"r": None},
        ["2"],
        [
            ("0", Div(2), (), all1, (), "1"),  # bullet: fresh, stored nowhere
            ("1", TRUE, (), all1, ("r",), "2"),  # fresh(r)
        ],
    )


def test_eliminate_bullet_without_bullets_only_adds_register():
    S = to_single_valued(remark1())
    T = eliminate_bullet(S)
    assert len(T.registers) == len(S.registers) + 1
    assert len(T.transitions) == len(S.transitions)
    assert T.states == S.states
    for w in words_up_to(range(0, 4), 3):
        assert membership(T, w) == membership(S, w)


def test_eliminate_bullet_replaces_bullet_with_pair():
    S = bullet_fixture()
    T = eliminate_bullet(S)
    assert len(T.registers) == 2
    scratch = 1
    from_0 = [lab for src, lab, _ in T.transitions if src == 0]
    kinds = sorted(
        sv_label_kind(2, lab)
        for lab in from_0
    )
    assert kinds == [("fresh", scratch), ("read", scratch)]
    # the fresh transition from state 1 gains a scratch-read companion
    from_1 = sorted(sv_label_kind(2, lab) for src, lab, _ in T.transitions if src == 1)
    assert from_1 == [("fresh", 0), ("read", scratch)]


def test_eliminate_bullet_preserves_membership():
    S = bullet_fixture()
    T = eliminate_bullet(S)
    assert is_single_valued(T)
    for w in words_up_to(range(0, 4), 3):
        assert membership(T, w) == membership(S, w), w
