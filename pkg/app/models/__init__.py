from app.models.errors import ErrorEvent, ErrorModel, OutcomeEntry, OutcomeTable
from app.models.ether import (
    UNSETTLED,
    AsymptoticState,
    Catalog,
    CatalogBounds,
    Decomposition,
    EtherPhase,
    EtherTile,
    GliderFrame,
    GliderSpec,
    Particle,
    Placement,
)
from app.models.experiment import ExperimentConfig, PlacementSpec, RenderFormat, RenderSpec
from app.models.lattice import ETHER_WIDTH, LatticeConfig, Row, SpacetimeDiagram, fit_width
from app.models.weights import ModifiedDistribution, ModifiedEntry, WeightRule

__all__ = [
    "ETHER_WIDTH",
    "UNSETTLED",
    "AsymptoticState",
    "Catalog",
    "CatalogBounds",
    "Decomposition",
    "ErrorEvent",
    "ErrorModel",
    "EtherPhase",
    "EtherTile",
    "ExperimentConfig",
    "GliderFrame",
    "GliderSpec",
    "LatticeConfig",
    "ModifiedDistribution",
    "ModifiedEntry",
    "OutcomeEntry",
    "OutcomeTable",
    "Particle",
    "Placement",
    "PlacementSpec",
    "RenderFormat",
    "RenderSpec",
    "Row",
    "SpacetimeDiagram",
    "WeightRule",
    "fit_width",
]
