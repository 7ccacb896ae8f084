# Lectura y escritura de archivos organizada por formato
from .catalog_store import dump_catalog, load_catalog, parse_catalog, save_catalog
from .experiment_config import config_hash, load_config, parse_config, save_config, serialize_config
from .tables import modified_csv, outcomes_csv, samples_csv, write_text

__all__ = [
    # Catálogo de gliders
    "dump_catalog",
    "parse_catalog",
    "load_catalog",
    "save_catalog",
    # Configs de experimento
    "parse_config",
    "serialize_config",
    "config_hash",
    "load_config",
    "save_config",
    # Tablas CSV
    "outcomes_csv",
    "modified_csv",
    "samples_csv",
    "write_text",
]
