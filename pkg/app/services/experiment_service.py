"""
Resolución de un ExperimentConfig a objetos del dominio y ejecución de sus
etapas: barrido, reponderación y muestreo.
"""

from dataclasses import dataclass
from pathlib import Path

from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import ConfigException
from app.core.logging import LoggerMixin
from app.crud.catalog_store import load_catalog
from app.models.errors import ErrorEvent, OutcomeTable
from app.models.ether import AsymptoticState, Catalog, EtherPhase, Placement
from app.models.experiment import ExperimentConfig
from app.models.lattice import LatticeConfig, Row, fit_width
from app.models.weights import ModifiedDistribution, WeightRule
from app.services.catalog_builder import derive_catalog
from app.services.error_model import SweepResult, SweepRunner
from app.services.placement import (
    resolve_glider,
    resolve_placements,
    splice,
    total_dislocation,
    will_collide,
)
from app.services.sampler import sample, sample_parallel
from app.services.topdown_weights import modify


def load_experiment_catalog(config: ExperimentConfig, override: Path | None = None) -> Catalog:
    path = override or (Path(config.catalog.path) if config.catalog.path else None)
    if path is not None:
        return load_catalog(path=path)
    return derive_catalog(config.catalog.bounds)


@dataclass(frozen=True)
class PreparedExperiment:
    config: ExperimentConfig
    catalog: Catalog
    lattice: LatticeConfig
    placements: tuple[Placement, ...]
    initial: Row
    rule: WeightRule
    colliding: bool


class ExperimentService(LoggerMixin):
    def __init__(self, config: ExperimentConfig, catalog: Catalog):
        self.config = config
        self.catalog = catalog
        self._prepared: PreparedExperiment | None = None

    def _placements(self) -> list[Placement]:
        return [
            Placement(
                glider=resolve_glider(self.catalog, spec.glider).id,
                position=spec.position,
                phase=spec.phase,
            )
            for spec in self.config.gliders
        ]

    def _lattice(self, placements: list[Placement]) -> LatticeConfig:
        dislocation = total_dislocation(placements, self.catalog)
        width = self.config.lattice.width
        if self.config.lattice.fit_width:
            width = fit_width(width, dislocation)
        if not self.config.error.fits(width):
            raise ConfigException(f"error region of {self.config.error.sites} sites does not fit width {width}")
        try:
            return LatticeConfig(
                width=width,
                steps=self.config.lattice.steps,
                dislocation=dislocation,
                v_max=self.catalog.v_max,
            )
        except ValidationError as e:
            raise ConfigException(f"invalid lattice: {e.errors()[0]['msg']}")

    def _rule(self) -> WeightRule:
        section = self.config.rule
        if section.kind == "stability" or section.target is None:
            return WeightRule.stability()
        target = AsymptoticState.from_fingerprint(section.target)
        ids = tuple(resolve_glider(self.catalog, name).id for name in target.particles)
        return WeightRule.forcing(AsymptoticState(particles=ids))

    def prepare(self) -> PreparedExperiment:
        if self._prepared is not None:
            return self._prepared
        lattice = self._lattice(self._placements())
        # Posiciones efectivas tras el ajuste al éter; splice y will_collide ven las mismas
        placements = resolve_placements(lattice.width, self._placements(), self.catalog)
        phase = EtherPhase(temporal_offset=self.config.ether.temporal_phase % self.catalog.ether.temporal_period)
        initial = splice(lattice, placements, self.catalog, phase)
        colliding = len(placements) == 2 and will_collide(placements[0], placements[1], lattice, self.catalog)
        self._prepared = PreparedExperiment(
            config=self.config,
            catalog=self.catalog,
            lattice=lattice,
            placements=tuple(placements),
            initial=initial,
            rule=self._rule(),
            colliding=colliding,
        )
        self.logger.info(
            "Experiment prepared",
            width=lattice.width,
            steps=lattice.steps,
            gliders=[p.glider for p in placements],
            colliding=colliding,
        )
        return self._prepared

    def jobs(self, override: int | None = None) -> int:
        return override or self.config.run.jobs or settings.DEFAULT_JOBS

    def sweep(self, jobs: int | None = None, keep_diagrams: bool = False) -> SweepResult:
        prepared = self.prepare()
        runner = SweepRunner(self.catalog, self.jobs(jobs))
        return runner.run(
            prepared.initial,
            self.config.error.model,
            prepared.lattice,
            self.config.settle.window,
            keep_diagrams=keep_diagrams,
        )

    def reweight(self, jobs: int | None = None) -> tuple[OutcomeTable, ModifiedDistribution]:
        prepared = self.prepare()
        table = self.sweep(jobs).table
        return table, modify(table, prepared.rule, prepared.colliding)

    def sample(
        self,
        n: int | None = None,
        seed: int | None = None,
        jobs: int | None = None,
        streams: int = 1,
    ) -> list[ErrorEvent]:
        """Un solo flujo por defecto; `streams` > 1 usa semillas derivadas por tarea."""
        _, distribution = self.reweight(jobs)
        count = self.config.run.samples if n is None else n
        chosen = self.config.run.seed if seed is None else seed
        if streams == 1:
            return sample(distribution, chosen, count)
        return sample_parallel(distribution, chosen, count, streams)
