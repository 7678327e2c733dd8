import pytest

from morphic.errors import SearchBudgetExceeded
from morphic.normalize import (
    FinalPeriodSet,
    augment_alphabet,
    check_level,
    compute_final_periods,
    normalize,
)
from morphic.orders import Periodicity, letter_profiles
from morphic.words import MorphicSystem, make_system, morphism_power


def periods(s, fps: FinalPeriodSet):
    return {s.render(p) for p in fps.periods}


def test_augment_leaves_fix_a_and_fix_b(system):
    for name in ("fix_a", "fix_b"):
        s = system(name)
        out, added = augment_alphabet(s, letter_profiles(s))
        assert out is s and added == ()


def test_augment_adds_both_letters():
    s = make_system({"a": "aa"}, "a")
    out, added = augment_alphabet(s, letter_profiles(s))
    assert [kind for _, kind in added] == ["order1", "order2"]
    prof = letter_profiles(out)
    one, two = added[0][0], added[1][0]
    assert (prof[one].order, prof[one].periodicity) == (1, Periodicity.PERIODIC)
    assert (prof[two].order, prof[two].periodicity) == (2, Periodicity.PERIODIC)
    assert all(name not in s.names for name in out.names[s.size:])


def test_fix_a_levels(system):
    s = system("fix_a")
    f1 = check_level(s)
    assert f1.weakly_1_periodic and not f1.strongly_1_periodic
    f4 = check_level(morphism_power(s, 4))
    assert f4.all


def test_fix_a_final_periods_at_power_four(system):
    s4 = morphism_power(system("fix_a"), 4)
    fps = compute_final_periods(s4)
    assert periods(s4, fps) == {"1"} and fps.L == 1


def test_fix_a_minimal_power(system):
    s = system("fix_a")
    normed, report = normalize(s)
    assert report.power == 2
    assert not check_level(s).all and check_level(normed).all
    assert periods(normed, report.final_periods) == {"1"}


def test_fix_c(system):
    s = system("fix_c")
    assert check_level(s).all
    fps = compute_final_periods(s)
    assert periods(s, fps) == {"c"} and fps.L == 1
    assert normalize(s)[1].power == 1


def test_fix_b(system):
    normed, report = normalize(system("fix_b"))
    assert report.power == 4
    assert periods(normed, report.final_periods) == {"deed", "eedd", "edde", "ddee"}
    assert report.final_periods.L == 4


def test_idempotent(system):
    for name in ("fix_a", "fix_b", "fix_c", "fix_d", "fix_e"):
        normed, _ = normalize(system(name))
        again, report = normalize(normed)
        assert report.power == 1 and again == normed


def test_cyclic_closure():
    # b's right fringe "ac" is fixed by φ, so the doubled image is "acac"
    s = MorphicSystem(("z", "b", "a", "c"), ((0, 1), (1, 2, 3), (2,), (3,)), (0, 1, 2, 3), 0)
    fps = compute_final_periods(s)
    assert periods(s, fps) == {"ac", "ca"}


def test_budget():
    s = make_system({"a": "ab", "b": "cb", "c": "c"}, "a")
    with pytest.raises(SearchBudgetExceeded):
        normalize(s, max_power=1, max_image_len=2)
