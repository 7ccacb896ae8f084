"""
Ley de ruido de un único error en t=0: enumeración de eventos, barrido y
distribución sin modificar de estados finales.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

from app.core.exceptions import ConfigException, UnsettledInitialException, ValidationException
from app.core.logging import LoggerMixin
from app.models.errors import ErrorEvent, ErrorModel, OutcomeEntry, OutcomeTable
from app.models.ether import AsymptoticState, Catalog
from app.models.lattice import LatticeConfig, Row, SpacetimeDiagram
from app.services.decomposition import get_decomposer
from app.services.lattice_engine import centered_site, evolve, flip


def enumerate_events(model: ErrorModel) -> list[ErrorEvent]:
    """NO_ERROR y luego FLIP_AT(-M)..FLIP_AT(M); el orden fija el de los CSV."""
    return [ErrorEvent.no_error()] + [ErrorEvent.flip_at(x) for x in range(-model.m, model.m + 1)]


def base_prob(model: ErrorModel, event: ErrorEvent) -> float:
    if event.x is None:
        return 1.0 - model.p
    if not -model.m <= event.x <= model.m:
        raise ValidationException(f"event {event} outside the error region -{model.m}..{model.m}")
    return model.p / model.sites


def perturb(initial: Row, event: ErrorEvent) -> Row:
    if event.x is None:
        return initial
    return flip(initial, centered_site(event.x, initial.shape[-1]))


def evaluate_event(
    initial: Row,
    steps: int,
    catalog: Catalog,
    settle_window: int,
    keep_diagram: bool,
    event: ErrorEvent,
) -> tuple[AsymptoticState, SpacetimeDiagram | None]:
    """Un evento: perturbar, evolucionar T pasos y clasificar. Nivel de módulo para poder repartirlo entre procesos."""
    diagram = evolve(perturb(initial, event), steps)
    state = get_decomposer(catalog).asymptotic_state(diagram, settle_window)
    return state, diagram if keep_diagram else None


@dataclass(frozen=True)
class SweepResult:
    table: OutcomeTable
    # Diagrama por evento, solo si se pidieron
    diagrams: dict[ErrorEvent, SpacetimeDiagram] | None = None

    def reference(self) -> SpacetimeDiagram | None:
        if self.diagrams is None:
            return None
        return self.diagrams.get(ErrorEvent.no_error())


class SweepRunner(LoggerMixin):
    """Evalúa todos los eventos; con jobs > 1 reparte entre procesos y reensambla en orden fijo."""

    def __init__(self, catalog: Catalog, jobs: int = 1):
        if jobs < 1:
            raise ValidationException("jobs must be at least 1")
        self.catalog = catalog
        self.jobs = jobs

    def initial_state(self, initial: Row) -> AsymptoticState:
        decomposition = get_decomposer(self.catalog).decompose(initial)
        if not decomposition.clean:
            unknown = [p.id for p in decomposition.particles if not p.known]
            self.logger.error(
                "Initial row does not decompose cleanly",
                turbulent=decomposition.turbulent,
                unknown=unknown,
            )
            raise UnsettledInitialException(
                "initial row is turbulent"
                if decomposition.turbulent
                else f"initial row holds unknown particles {', '.join(unknown)}"
            )
        return AsymptoticState(particles=decomposition.ids)

    def run(
        self,
        initial: Row,
        model: ErrorModel,
        config: LatticeConfig,
        settle_window: int,
        keep_diagrams: bool = False,
    ) -> SweepResult:
        if not model.fits(config.width):
            raise ConfigException(f"error region of {model.sites} sites does not fit width {config.width}")
        initial_state = self.initial_state(initial)
        events = enumerate_events(model)
        evaluate = partial(evaluate_event, initial, config.steps, self.catalog, settle_window, keep_diagrams)

        self.logger.info("Sweep started", events=len(events), width=config.width, steps=config.steps, jobs=self.jobs)
        if self.jobs == 1:
            results = [evaluate(event) for event in events]
        else:
            with ProcessPoolExecutor(max_workers=self.jobs) as executor:
                results = list(executor.map(evaluate, events))

        entries = tuple(
            OutcomeEntry(event=event, base_prob=base_prob(model, event), state=state)
            for event, (state, _) in zip(events, results, strict=True)
        )
        table = OutcomeTable(model=model, initial_state=initial_state, entries=entries)
        self.logger.info(
            "Sweep finished",
            events=len(entries),
            changed=sum(table.changed(entry) for entry in entries),
            unsettled=sum(not entry.state.settled for entry in entries),
        )
        diagrams = None
        if keep_diagrams:
            diagrams = {
                event: diagram
                for event, (_, diagram) in zip(events, results, strict=True)
                if diagram is not None
            }
        return SweepResult(table=table, diagrams=diagrams)


def sweep(
    initial: Row,
    model: ErrorModel,
    config: LatticeConfig,
    catalog: Catalog,
    settle_window: int,
    jobs: int = 1,
) -> OutcomeTable:
    return SweepRunner(catalog, jobs).run(initial, model, config, settle_window).table


def outcome_distribution(table: OutcomeTable) -> dict[AsymptoticState, float]:
    """Suma las probabilidades base por estado resultante, en orden de primera aparición."""
    masses: dict[AsymptoticState, list[float]] = {}
    for entry in table.entries:
        masses.setdefault(entry.state, []).append(entry.base_prob)
    return {state: math.fsum(values) for state, values in masses.items()}


def rescale(table: OutcomeTable, p: float) -> OutcomeTable:
    """Misma tabla evento -> estado con las probabilidades base de otro p."""
    model = ErrorModel(p=p, m=table.model.m)
    return OutcomeTable(
        model=model,
        initial_state=table.initial_state,
        entries=tuple(
            entry.model_copy(update={"base_prob": base_prob(model, entry.event)})
            for entry in table.entries
        ),
    )
