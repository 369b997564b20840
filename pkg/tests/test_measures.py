import itertools

import numpy as np
import pytest

from tfuprob.classical import ClassicalDistribution, build_state_vector, conditional, projector_for
from tfuprob.errors import UndefinedConditionalError, ValidationError
from tfuprob.measures import (
    DecidabilityAugmentedSpace,
    TfuMeasureAssignment,
    cell_from_key,
    cell_key,
    complement_check,
    decided_distribution,
    noncommutativity_gap,
    swap_tf,
    tfu_conditional,
    tfu_from_augmented,
    tfu_probability,
)


def _count_oracle(m, prop):
    """Tally T and F cell mass for one proposition by walking cell keys."""
    t = f = 0.0
    for cell, w in enumerate(m.measures):
        tag = cell_key(cell, m.n)[prop]
        if tag == "T":
            t += w
        elif tag == "F":
            f += w
    return t / (t + f)


def _random_assignment(rng, n):
    return TfuMeasureAssignment(n, rng.uniform(size=3 ** n) + 1e-9)


def test_cell_keys_round_trip():
    for n in (1, 2, 3):
        for cell in range(3 ** n):
            assert cell_from_key(cell_key(cell, n)) == (cell, n)
    assert cell_key(0, 2) == "TT"
    assert cell_key(5, 2) == "FU"  # base-3 big-endian, digits T=0 F=1 U=2
    with pytest.raises(ValidationError, match="bad cell key"):
        cell_from_key("TX")


def test_assignment_validation():
    with pytest.raises(ValidationError, match="negative"):
        TfuMeasureAssignment(1, [1.0, -0.1, 0.0])
    with pytest.raises(ValidationError, match="positive"):
        TfuMeasureAssignment(1, [0.0, 0.0, 0.0])
    with pytest.raises(ValidationError, match="entries"):
        TfuMeasureAssignment(2, [1.0, 1.0, 1.0])


def test_probability_matches_count_oracle():
    rng = np.random.default_rng(3)
    for n in (1, 2, 3):
        for _ in range(40):
            m = _random_assignment(rng, n)
            for prop in range(n):
                assert abs(tfu_probability(prop, m) - _count_oracle(m, prop)) < 1e-12


def test_probability_ignores_undecided_mass():
    # piling weight on U cells must not move the decided ratio
    base = TfuMeasureAssignment.from_mapping(1, {"T": 3.0, "F": 1.0})
    heavy = TfuMeasureAssignment.from_mapping(1, {"T": 3.0, "F": 1.0, "U": 40.0})
    assert tfu_probability(0, base) == 0.75
    assert tfu_probability(0, heavy) == 0.75


def test_probability_undefined_when_everywhere_undecided():
    m = TfuMeasureAssignment.from_mapping(2, {"UU": 1.0, "UT": 2.0})
    with pytest.raises(UndefinedConditionalError, match="everywhere undecidable"):
        tfu_probability(0, m)
    # ...but q is fine
    assert abs(tfu_probability(1, m) - 1.0) < 1e-15


def test_scale_invariance():
    rng = np.random.default_rng(9)
    w = rng.uniform(size=9) + 1e-9
    a = TfuMeasureAssignment(2, w)
    b = TfuMeasureAssignment(2, w * 137.0)
    for prop in range(2):
        assert abs(tfu_probability(prop, a) - tfu_probability(prop, b)) < 1e-12
    assert abs(tfu_conditional(1, 0, a) - tfu_conditional(1, 0, b)) < 1e-12


def test_conditional_counts_tt_against_tf():
    m = TfuMeasureAssignment.from_mapping(
        2, {"TT": 2.0, "TF": 6.0, "TU": 5.0, "FT": 1.0}
    )
    # cells with q undecided are excluded from both sides; FT has p false
    assert tfu_conditional(1, 0, m) == 0.25


def test_conditional_needs_distinct_propositions():
    m = TfuMeasureAssignment.from_mapping(1, {"T": 1.0})
    with pytest.raises(ValidationError, match="distinct"):
        tfu_conditional(0, 0, m)


def test_conditional_undefined_without_decided_mass():
    m = TfuMeasureAssignment.from_mapping(2, {"TU": 1.0, "FT": 1.0})
    with pytest.raises(UndefinedConditionalError, match="no decided mass"):
        tfu_conditional(1, 0, m)


def test_swap_tf_complement_identity():
    rng = np.random.default_rng(15)
    for n in (1, 2, 3):
        for _ in range(30):
            m = _random_assignment(rng, n)
            for prop in range(n):
                direct, flipped = complement_check(prop, m)
                assert abs(flipped - (1 - direct)) < 1e-12


def test_swap_tf_permutes_cells():
    m = TfuMeasureAssignment.from_mapping(2, {"TF": 1.0, "UT": 2.0})
    flipped = swap_tf(m, 0)
    assert flipped.measures[cell_from_key("FF")[0]] == 1.0
    assert flipped.measures[cell_from_key("UT")[0]] == 2.0  # U untouched


def test_gap_exhibit_exact():
    m = TfuMeasureAssignment.from_mapping(2, {"TT": 1.0, "TF": 1.0, "UT": 2.0})
    assert tfu_probability(0, m) == 1.0
    assert tfu_conditional(1, 0, m) == 0.5
    assert tfu_probability(1, m) == 0.75
    assert tfu_conditional(0, 1, m) == 1.0
    assert noncommutativity_gap(0, 1, m) == -0.25


def test_gap_antisymmetry():
    rng = np.random.default_rng(21)
    for _ in range(40):
        m = _random_assignment(rng, 2)
        assert abs(noncommutativity_gap(0, 1, m) + noncommutativity_gap(1, 0, m)) < 1e-12


def test_gap_vanishes_without_undecided_mass():
    rng = np.random.default_rng(27)
    for _ in range(40):
        w = np.zeros(9)
        for i, j in itertools.product((0, 1), repeat=2):
            w[i * 3 + j] = rng.uniform() + 1e-9
        m = TfuMeasureAssignment(2, w)
        assert abs(noncommutativity_gap(0, 1, m)) < 1e-12


def test_decided_distribution_requires_no_undecided_mass():
    ok = TfuMeasureAssignment.from_mapping(1, {"T": 3.0, "F": 1.0})
    np.testing.assert_allclose(decided_distribution(ok).probs, [0.75, 0.25])
    bad = TfuMeasureAssignment.from_mapping(1, {"T": 3.0, "U": 1.0})
    with pytest.raises(ValidationError, match="no classical counterpart"):
        decided_distribution(bad)


def test_decided_distribution_cell_to_state_order():
    m = TfuMeasureAssignment.from_mapping(2, {"TT": 0.1, "TF": 0.2, "FT": 0.3, "FF": 0.4})
    np.testing.assert_allclose(decided_distribution(m).probs, [0.1, 0.2, 0.3, 0.4])


def test_augmented_space_needs_even_propositions():
    with pytest.raises(ValidationError, match="even"):
        DecidabilityAugmentedSpace(ClassicalDistribution.uniform(3))


def test_augmented_space_hand_case():
    # n=1: proposition 0 is the base, proposition 1 its decidability flag;
    # flag negated reads U regardless of the base bit
    dist = ClassicalDistribution.from_mapping(
        2, {"++": 0.2, "-+": 0.3, "+-": 0.1, "--": 0.4}
    )
    m = tfu_from_augmented(DecidabilityAugmentedSpace(dist))
    np.testing.assert_allclose(m.measures, [0.2, 0.3, 0.5], atol=1e-15)


def test_augmented_space_conditional_identity():
    # the TFU value of p equals the classical probability of its base bit
    # conditioned on its decidability flag
    rng = np.random.default_rng(39)
    for n in (1, 2):
        for _ in range(25):
            w = rng.uniform(size=1 << (2 * n)) + 1e-6
            dist = ClassicalDistribution(w / w.sum())
            space = DecidabilityAugmentedSpace(dist)
            m = tfu_from_augmented(space)
            vec = build_state_vector(dist)
            for prop in range(n):
                base = projector_for(prop, 2 * n)
                flag = projector_for(n + prop, 2 * n)
                want = conditional(base, flag, vec)
                assert abs(tfu_probability(prop, m) - want) < 1e-12


def test_augmented_gap_matches_direct_gap():
    # the same noncommutativity shows up whether the U mass is native or
    # carried by decidability flags
    rng = np.random.default_rng(45)
    for _ in range(20):
        w = rng.uniform(size=16) + 1e-6
        dist = ClassicalDistribution(w / w.sum())
        m = tfu_from_augmented(DecidabilityAugmentedSpace(dist))
        g = noncommutativity_gap(0, 1, m)
        forward = tfu_probability(0, m) * tfu_conditional(1, 0, m)
        backward = tfu_probability(1, m) * tfu_conditional(0, 1, m)
        assert abs(g - (forward - backward)) < 1e-12
