"""
Tests de las reglas de peso, la distribución modificada y el reporte de divergencia.
"""

import math

import pytest

from app.core.exceptions import (
    NormalizationImpossibleException,
    UnsupportedCaseException,
)
from app.models.ether import UNSETTLED
from app.models.weights import WeightRule
from app.services.topdown_weights import kl_report, modify, weight
from app.tests.utils.tables import make_table, state

A, B, C = "g01", "g02", "g03"


@pytest.mark.unit
class TestWeight:
    def test_stability_single_glider(self) -> None:
        rule = WeightRule.stability()
        assert weight(rule, state(A), state(A), colliding=False) == 1.0
        assert weight(rule, state(B), state(A), colliding=False) == 0.0
        assert weight(rule, state(A, A), state(A), colliding=False) == 0.0
        assert weight(rule, state(), state(A), colliding=False) == 0.0

    def test_stability_colliding_pair_swaps(self) -> None:
        rule = WeightRule.stability()
        assert weight(rule, state(B, A), state(A, B), colliding=True) == 1.0
        assert weight(rule, state(A, B), state(A, B), colliding=True) == 0.0

    def test_stability_non_colliding_pair(self) -> None:
        rule = WeightRule.stability()
        assert weight(rule, state(A, B), state(A, B), colliding=False) == 1.0
        assert weight(rule, state(B, A), state(A, B), colliding=False) == 0.0
        assert weight(rule, state(A), state(A, B), colliding=False) == 0.0

    def test_unsettled_is_zero(self) -> None:
        assert weight(WeightRule.stability(), UNSETTLED, state(A), colliding=False) == 0.0
        assert weight(WeightRule.forcing(state(A)), UNSETTLED, state(A, B), colliding=True) == 0.0

    def test_forcing_two_gliders(self) -> None:
        rule = WeightRule.forcing(state(C))
        assert weight(rule, state(C), state(A, B), colliding=True) == 1.0
        assert weight(rule, state(B, A), state(A, B), colliding=True) == 0.0

    def test_forcing_keeps_single_glider_weights(self) -> None:
        rule = WeightRule.forcing(state(C))
        assert weight(rule, state(A), state(A), colliding=False) == 1.0
        assert weight(rule, state(C), state(A), colliding=False) == 0.0

    @pytest.mark.parametrize("initial", [(), (A, B, C)])
    def test_unsupported_initial(self, initial: tuple[str, ...]) -> None:
        with pytest.raises(UnsupportedCaseException):
            weight(WeightRule.stability(), state(A), state(*initial), colliding=False)

    def test_forcing_target_must_be_settled_and_known(self) -> None:
        with pytest.raises(ValueError):
            WeightRule.forcing(UNSETTLED)
        with pytest.raises(ValueError):
            WeightRule.forcing(state("U:deadbeef"))
        with pytest.raises(ValueError):
            WeightRule(variant="stability", target=state(A))


@pytest.mark.unit
class TestModify:
    def test_all_preserving_is_identity(self) -> None:
        table = make_table(state(A), [state(A)] * 21)
        distribution = modify(table, WeightRule.stability(), colliding=False)
        assert distribution.normalization == pytest.approx(1.0, abs=1e-12)
        for entry, base in zip(distribution.entries, table.entries, strict=True):
            assert entry.prob == pytest.approx(base.base_prob, abs=1e-15)

    def test_fifteen_preserving_flips(self) -> None:
        table = make_table(state(A), [state(A)] * 15 + [state(B)] * 4 + [UNSETTLED] * 2)
        distribution = modify(table, WeightRule.stability(), colliding=False)
        assert distribution.normalization == pytest.approx(1.0294117647, abs=1e-10)
        assert abs(distribution.normalization - 1 / (0.9 + 0.1 * 15 / 21)) <= 1e-12
        assert abs(math.fsum(distribution.per_event.values()) - 1.0) <= 1e-12
        assert distribution.per_state[state(A)] == pytest.approx(1.0, abs=1e-12)
        for entry in distribution.entries:
            if entry.state != state(A):
                assert entry.prob == 0.0

    def test_proportionality(self) -> None:
        table = make_table(state(A), [state(A)] * 10 + [state(B)] * 11)
        distribution = modify(table, WeightRule.stability(), colliding=False)
        kept = [e for e in distribution.entries if e.weight == 1.0]
        for entry in kept[1:]:
            ratio = entry.prob / kept[0].prob
            assert abs(ratio - entry.base_prob / kept[0].base_prob) <= 1e-12

    def test_normalization_at_least_one(self) -> None:
        table = make_table(state(A, B), [state(B, A)] * 3 + [state(C)] * 4, p=0.3)
        distribution = modify(table, WeightRule.stability(), colliding=True)
        assert distribution.normalization >= 1.0

    def test_colliding_pair_prescribed_order(self) -> None:
        flips = [state(B, A)] * 6 + [state(C)] * 2 + [state(A, B)] * 3
        table = make_table(state(A, B), flips, no_error_state=state(B, A))
        distribution = modify(table, WeightRule.stability(), colliding=True)
        assert distribution.per_state[state(B, A)] == pytest.approx(1.0, abs=1e-12)
        assert distribution.per_state[state(A, B)] == 0.0

    def test_forcing_reachable_target(self) -> None:
        flips = [state(B, A)] * 18 + [state(C)] * 2 + [UNSETTLED]
        table = make_table(state(A, B), flips, no_error_state=state(B, A))
        distribution = modify(table, WeightRule.forcing(state(C)), colliding=True)
        assert distribution.per_state[state(C)] == pytest.approx(1.0, abs=1e-12)
        assert distribution.normalization == pytest.approx(21 / (2 * 0.1))

    def test_forcing_unreachable_target(self) -> None:
        table = make_table(state(A, B), [state(B, A)] * 21, no_error_state=state(B, A))
        with pytest.raises(NormalizationImpossibleException) as exc:
            modify(table, WeightRule.forcing(state(C, C, C)), colliding=True)
        assert "[g03,g03,g03]" in exc.value.detail
        assert exc.value.exit_code == 3

    def test_stability_impossible(self) -> None:
        table = make_table(state(A), [UNSETTLED] * 3, no_error_state=UNSETTLED)
        with pytest.raises(NormalizationImpossibleException):
            modify(table, WeightRule.stability(), colliding=False)


@pytest.mark.unit
class TestKLReport:
    def test_all_weights_one(self) -> None:
        table = make_table(state(A), [state(A)] * 21)
        report = kl_report(modify(table, WeightRule.stability(), colliding=False), table)
        assert report.divergence == pytest.approx(0.0, abs=1e-12)

    def test_divergence_is_log_normalization(self) -> None:
        table = make_table(state(A), [state(A)] * 15 + [state(B)] * 6)
        distribution = modify(table, WeightRule.stability(), colliding=False)
        report = kl_report(distribution, table)
        assert report.divergence == pytest.approx(math.log(distribution.normalization), abs=1e-12)
        assert report.divergence == pytest.approx(0.028987, abs=1e-6)

    def test_forcing_single_event(self) -> None:
        flips = [state(B, A)] * 10 + [state(C)] + [state(B, A)] * 10
        table = make_table(state(A, B), flips, no_error_state=state(B, A))
        report = kl_report(modify(table, WeightRule.forcing(state(C)), colliding=True), table)
        assert report.divergence == pytest.approx(-math.log(0.1 / 21), abs=1e-12)

    def test_render_lists_every_event(self) -> None:
        table = make_table(state(A), [state(A)] * 3 + [state(B)] * 2)
        text = kl_report(modify(table, WeightRule.stability(), colliding=False), table).render()
        lines = text.splitlines()
        assert lines[0] == "# top-down reweighting report"
        assert lines[1].split() == ["rule", "stability"]
        assert sum(1 for line in lines if line.startswith(("NONE", "1 ", "2 ", "3 ", "4 ", "5 "))) == 6
        assert text.endswith("\n")
