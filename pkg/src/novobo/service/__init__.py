"""HTTP API, configuration, scenario catalog, CLI, and the scripted demo."""

from .app import EngineState, bind_port, create_app, serve
from .catalog import CatalogEntry, ScenarioCatalog, load_catalog
from .config import EngineConfig, packaged_fixture

__all__ = [
    "CatalogEntry",
    "EngineConfig",
    "EngineState",
    "ScenarioCatalog",
    "bind_port",
    "create_app",
    "load_catalog",
    "packaged_fixture",
    "serve",
]
