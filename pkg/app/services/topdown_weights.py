"""
Capa descendente: pesos 0/1 sobre estados finales de gliders y la
distribución modificada de errores en t=0. La dinámica no se toca; solo se
reescalan las probabilidades de los eventos.
"""

import math

from pydantic import BaseModel, ConfigDict

from app.core.exceptions import (
    NormalizationImpossibleException,
    UnsupportedCaseException,
    ValidationException,
)
from app.core.logging import get_logger
from app.models.errors import OutcomeTable
from app.models.ether import AsymptoticState
from app.models.weights import ModifiedDistribution, ModifiedEntry, WeightRule
from app.utils import format_float, render_template

logger = get_logger(__name__)


def expected_final(initial: AsymptoticState, colliding: bool) -> AsymptoticState:
    """Estado que conserva la regla de estabilidad: el mismo, o el par intercambiado si chocan."""
    if initial.count == 2 and colliding:
        first, second = initial.particles
        return AsymptoticState(particles=(second, first))
    return initial


def weight(rule: WeightRule, final: AsymptoticState, initial: AsymptoticState, colliding: bool) -> float:
    if not initial.settled or initial.count not in (1, 2):
        raise UnsupportedCaseException(
            f"weight rules are defined for one or two initial gliders, got {initial.fingerprint}"
        )
    if not final.settled:
        return 0.0
    # La variante forzada conserva los pesos de un solo glider
    if rule.variant == "forcing" and initial.count == 2:
        return 1.0 if final == rule.target else 0.0
    return 1.0 if final == expected_final(initial, colliding) else 0.0


def modify(table: OutcomeTable, rule: WeightRule, colliding: bool) -> ModifiedDistribution:
    weights = [weight(rule, entry.state, table.initial_state, colliding) for entry in table.entries]
    mass = math.fsum(w * entry.base_prob for w, entry in zip(weights, table.entries, strict=True))
    if mass <= 0.0:
        target = (
            rule.target.fingerprint
            if rule.variant == "forcing" and rule.target is not None and table.initial_state.count == 2
            else expected_final(table.initial_state, colliding).fingerprint
        )
        logger.error("Normalization impossible", rule=str(rule), target=target)
        raise NormalizationImpossibleException(
            f"target state {target} is unreachable: no error event leads to it"
        )
    normalization = 1.0 / mass
    entries = tuple(
        ModifiedEntry(
            event=entry.event,
            state=entry.state,
            base_prob=entry.base_prob,
            weight=w,
            prob=normalization * w * entry.base_prob,
        )
        for w, entry in zip(weights, table.entries, strict=True)
    )
    logger.debug(
        "Distribution modified",
        rule=str(rule),
        normalization=normalization,
        support=sum(1 for e in entries if e.prob > 0),
    )
    return ModifiedDistribution(rule=rule, normalization=normalization, entries=entries, m=table.model.m)


class KLRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    site: str
    base_prob: float
    modified_prob: float
    state: str


class KLReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    rule: str
    normalization: float
    divergence: float
    rows: tuple[KLRow, ...]

    def render(self) -> str:
        return render_template(
            template_name="kl_report.txt.j2",
            context={
                "rule": self.rule,
                "normalization": format_float(self.normalization),
                "divergence": format_float(self.divergence),
                "rows": [
                    {
                        "site": row.site,
                        "base_prob": format_float(row.base_prob),
                        "modified_prob": format_float(row.modified_prob),
                        "state": row.state,
                    }
                    for row in self.rows
                ],
            },
        )


def kl_report(distribution: ModifiedDistribution, table: OutcomeTable) -> KLReport:
    """Probabilidades base frente a modificadas y la divergencia sum p_mod ln(p_mod / p_base)."""
    if distribution.events != table.events:
        raise ValidationException("distribution and table cover different events")
    divergence = math.fsum(
        entry.prob * math.log(entry.prob / entry.base_prob)
        for entry in distribution.entries
        if entry.prob > 0.0
    )
    rows = tuple(
        KLRow(
            site=entry.event.site_label(distribution.m),
            base_prob=entry.base_prob,
            modified_prob=entry.prob,
            state=entry.state.fingerprint,
        )
        for entry in distribution.entries
    )
    return KLReport(rule=str(distribution.rule), normalization=distribution.normalization, divergence=divergence, rows=rows)
