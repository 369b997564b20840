import numpy as np
import pytest

from tfuprob.errors import FormulaError
from tfuprob.formulas import And, Not, Or, Var, parse, truth_mask, unparse


def _mask_by_enumeration(formula, n):
    """Evaluate a formula state-by-state, independent of truth_mask's
    vectorized implementation."""
    def eval_at(node, state):
        if isinstance(node, Var):
            return not (state >> (n - 1 - node.index)) & 1
        if isinstance(node, Not):
            return not eval_at(node.operand, state)
        if isinstance(node, And):
            return eval_at(node.left, state) and eval_at(node.right, state)
        if isinstance(node, Or):
            return eval_at(node.left, state) or eval_at(node.right, state)
        raise TypeError(node)
    return np.array([eval_at(formula, s) for s in range(1 << n)])


def test_var_mask_follows_bit_convention():
    # proposition 0 owns the most significant bit; affirmative = bit 0
    got = truth_mask(Var(0), 2)
    assert got.tolist() == [True, True, False, False]
    assert truth_mask(Var(1), 2).tolist() == [True, False, True, False]


@pytest.mark.parametrize("text", [
    "p", "~p", "p & q", "p | q", "~(p & q)", "~p | ~q",
    "p & (q | ~r)", "(p | q) & (q | r)", "~~p",
])
def test_parse_matches_enumeration(text):
    n = 3
    formula = parse(text, n)
    np.testing.assert_array_equal(truth_mask(formula, n), _mask_by_enumeration(formula, n))


def test_precedence_not_over_and_over_or():
    n = 3
    assert parse("~p & q | r", n) == Or(And(Not(Var(0)), Var(1)), Var(2))


def test_alias_tokens():
    n = 2
    assert parse("p ∧ q", n) == parse("p and q", n) == parse("p & q", n)
    assert parse("p ∨ q", n) == parse("p or q", n)
    assert parse("¬p", n) == parse("!p", n) == parse("not p", n)


def test_numbered_variables():
    formula = parse("p0 & p3", 4)
    assert formula == And(Var(0), Var(3))


def test_unparse_round_trips():
    n = 3
    for text in ["p & (q | ~r)", "~(p & q) | r", "p"]:
        formula = parse(text, n)
        again = parse(unparse(formula), n)
        np.testing.assert_array_equal(truth_mask(formula, n), truth_mask(again, n))


@pytest.mark.parametrize("bad", [
    "", "p &", "& q", "p q", "(p", "p)", "p ** q", "4",
])
def test_parse_rejects_malformed(bad):
    with pytest.raises(FormulaError):
        parse(bad, 2)


def test_parse_rejects_out_of_range_variable():
    with pytest.raises(FormulaError, match="unknown proposition"):
        parse("r", 2)  # names for n=2 are just p, q
    with pytest.raises(FormulaError, match="out of range"):
        parse("p5", 3)


def test_custom_names():
    formula = parse("alpha & ~beta", 2, names=("alpha", "beta"))
    assert formula == And(Var(0), Not(Var(1)))
