import numpy as np
import pytest

from quatfield.symbolic import (
    DELTA3,
    DELTA_AB,
    ChainBroken,
    Gen,
    Mul,
    ProofTrace,
    QuaternionMatrix,
    Unit,
    ZERO,
    add,
    ladder_associator_check,
    ladder_matrix_associator,
    matrix_associator,
    reduce_expr,
    render,
    scale,
    sym_associator,
    term,
    verify_associator_chain,
)


def test_unit_triple_associator_reduces_to_zero():
    expr = sym_associator(Unit("i"), Unit("j"), Unit("k"))
    assert len(expr) == 2  # unreduced two-term tree
    assert reduce_expr(expr) == ZERO


def test_unit_pairs_all_associative():
    names = ("1", "i", "j", "k")
    for a in names:
        for b in names:
            for c in names:
                expr = sym_associator(Unit(a), Unit(b), Unit(c))
                assert reduce_expr(expr) == ZERO, (a, b, c)


def test_identity_element_associator():
    x = Gen("Phi", "a", "x")
    y = Gen("Pi", "b", "y", daggered=True)
    assert reduce_expr(sym_associator(x, y, Unit("1"))) == ZERO
    assert reduce_expr(sym_associator(Unit("1"), x, y)) == ZERO


def test_operator_associator_stays_unreduced():
    x = Gen("Phi", "a", "x")
    y = Gen("Pi", "b", "y", daggered=True)
    expr = sym_associator(x, y, Unit("j"))
    reduced = reduce_expr(expr)
    assert len(reduced) == 2
    trees = {repr(t.factor) for t in reduced}
    assert repr(Mul(x, Mul(y, Unit("j")))) in trees
    assert repr(Mul(Mul(x, y), Unit("j"))) in trees


def test_reduce_is_idempotent_and_terminates():
    rng = np.random.default_rng(5)
    units = [Unit(n) for n in ("1", "i", "j", "k")]
    gens = [Gen("Phi", "a", "x"), Gen("Pi", "b", "y", daggered=True)]

    def random_tree(depth):
        if depth == 0 or rng.uniform() < 0.3:
            pool = units + gens
            return pool[rng.integers(len(pool))]
        return Mul(random_tree(depth - 1), random_tree(depth - 1))

    for _ in range(200):
        expr = term(random_tree(4))
        once = reduce_expr(expr)
        assert reduce_expr(once) == once


def test_chain_same_index():
    trace = verify_associator_chain(same_index=True)
    assert trace.final == "k·%s·%s" % tuple(sorted((DELTA_AB, DELTA3)))
    assert "k" in trace.final and DELTA_AB in trace.final
    assert trace.final_expr == add(term(Unit("k"),
                                        scalars=(DELTA_AB, DELTA3)))
    rules = [s.rule for s in trace.steps]
    assert rules[0].startswith("R0")
    assert any(r.startswith("R1") for r in rules)
    assert any(r.startswith("R2") for r in rules)
    assert any(r.startswith("R4") for r in rules)
    assert rules[-1] == "collect"
    # the axiom is flagged as an assumption in the trace
    assert "assumed" in trace.steps[0].note
    # the factor-2 bookkeeping is visible
    assert any("2k" in s.after or "2·" in s.after for s in trace.steps)


def test_chain_distinct_indices_gives_zero():
    trace = verify_associator_chain(same_index=False)
    assert trace.final_expr == ZERO
    assert trace.final == "0"


def test_chain_text_and_json():
    trace = verify_associator_chain()
    text = trace.render_text()
    assert text.startswith("goal:")
    assert text.rstrip().endswith(trace.final)
    payload = trace.to_json()
    assert payload["final"] == trace.final
    assert all({"rule", "before", "after"} <= set(s) for s in payload["steps"])


def test_ladder_associator_zero_all_variants():
    for which in ("a_adag", "a_bdag", "adag_a"):
        assert ladder_associator_check(which) == ZERO
    expr, trace = ladder_associator_check("a_adag", with_trace=True)
    assert expr == ZERO
    assert trace.final == "0"
    assert any("no imaginary unit" in s.note for s in trace.steps)


def test_ladder_associator_unknown_variant():
    with pytest.raises(ValueError):
        ladder_associator_check("bogus")


def test_quaternion_matrix_product_rules():
    rng = np.random.default_rng(7)
    n = 4
    mats = [QuaternionMatrix(rng.normal(size=(n, n)), rng.normal(size=(n, n)),
                             rng.normal(size=(n, n)), rng.normal(size=(n, n)))
            for _ in range(3)]
    # associativity up to float matmul reordering
    assert matrix_associator(*mats).max_abs() <= 1e-12
    # j * j = -1 on the blocks
    j = QuaternionMatrix.unit_j(n)
    jj = j @ j
    assert np.allclose(jj.w, -np.eye(n)) and jj.y.max() == 0.0


def test_ladder_matrix_associator_exactly_zero():
    assert ladder_matrix_associator(n_max=4) == 0.0
    assert ladder_matrix_associator(n_max=2) == 0.0


def test_render_forms():
    x = Gen("Phi", "a", "x")
    y = Gen("Pi", "b", "y", daggered=True)
    assert x.render() == "Φ^(a)(x)"
    assert y.render() == "Π^(b)†(y)"
    expr = scale(term(Mul(x, y)), -1)
    assert render(expr) == "−Φ^(a)(x)·Π^(b)†(y)"
    assert render(ZERO) == "0"
