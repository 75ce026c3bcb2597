"""Mode comparison and the what-if impact index."""

import itertools

import pytest

from fmreason import ImpactError, ImpactQuery, Mode, baseline_from_model, compare_modes, impact
from helpers import comp, mk_model, var

H, L, T, F, M = Mode.HIGH, Mode.LOW, Mode.COMMISSION, Mode.OMISSION, Mode.MATCH


class TestCompareModes:
    def test_published_cells(self):
        assert compare_modes(H, L) == 1
        assert compare_modes(T, F) == 1
        assert compare_modes(H, M) == 0.5
        assert compare_modes(T, M) == 0.5
        assert compare_modes(L, M) == -0.5
        assert compare_modes(F, M) == -0.5
        assert compare_modes(L, H) == -1
        assert compare_modes(F, T) == -1
        for u in Mode:
            assert compare_modes(u, u) == 0

    def test_extension_cells_antisymmetric(self):
        assert compare_modes(M, H) == -0.5
        assert compare_modes(M, T) == -0.5
        assert compare_modes(M, L) == 0.5
        assert compare_modes(M, F) == 0.5

    def test_full_antisymmetry_and_abs_symmetry(self):
        for fam in ((H, M, L), (T, M, F)):
            for a, b in itertools.product(fam, repeat=2):
                assert compare_modes(a, b) == -compare_modes(b, a)
                assert abs(compare_modes(a, b)) == abs(compare_modes(b, a))

    def test_cross_family_rejected(self):
        with pytest.raises(ImpactError):
            compare_modes(H, T)


def two_output_model():
    return mk_model(
        [var("x", known={"reported": True, "intended": False}),
         var("b", cls="certain", known={"reported": True}),
         var("y1"), var("y2")],
        [comp("gate", "And", ["x", "b"], outputs=["y1"]),
         comp("flip", "Not", ["x"], outputs=["y2"])],
        ["y1", "y2"])


class TestImpact:
    def test_single_output_half_point(self):
        # Fixing x's reported value calms y1 from a commission to a match.
        m = two_output_model()
        q = ImpactQuery("x", True, False, outputs=("y1",))
        assert impact(m, q, baseline_from_model(m)) == 0.5

    def test_identity_change_scores_zero(self):
        m = two_output_model()
        q = ImpactQuery("x", True, True)
        assert impact(m, q, baseline_from_model(m)) == 0.0

    def test_two_outputs_sum(self):
        # y1 moves t -> m and y2 moves f -> m: 0.5 + 0.5.
        m = two_output_model()
        q = ImpactQuery("x", True, False)
        assert impact(m, q, baseline_from_model(m)) == 1.0

    def test_multi_output_reduces_to_single(self):
        m = two_output_model()
        base = baseline_from_model(m)
        q_all = ImpactQuery("x", True, False, outputs=("y1",))
        q_named = ImpactQuery("x", True, False, outputs=("y1",))
        assert impact(m, q_all, base) == impact(m, q_named, base)

    def test_baseline_requires_knowledge(self):
        m = mk_model(
            [var("a"), var("y")],
            [comp("g", "Not", ["a"], outputs=["y"])], ["y"])
        with pytest.raises(ImpactError, match="baseline"):
            baseline_from_model(m)

    def test_type_checked_values(self):
        m = two_output_model()
        with pytest.raises(ImpactError):
            impact(m, ImpactQuery("x", 1.0, 0.0), baseline_from_model(m))

    def test_real_parameter_probe(self):
        # Lowering an over-reported threshold restores the alarm.
        m = mk_model(
            [var("x", "real", "certain", known={"reported": 5.0}),
             var("p", "real", known={"reported": 6.0, "intended": 4.0}),
             var("y")],
            [comp("over", "Gcom", ["x"], params=["p"], outputs=["y"])], ["y"])
        base = baseline_from_model(m)
        assert impact(m, ImpactQuery("p", 6.0, 4.0), base) == 0.5
        assert impact(m, ImpactQuery("p", 6.0, 4.5), base) == 0.5
        assert impact(m, ImpactQuery("p", 6.0, 7.0), base) == 0.0
