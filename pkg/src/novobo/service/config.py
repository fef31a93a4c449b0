"""Engine configuration: file locations, ports, provider endpoints, stub mode."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from importlib.resources import files
from pathlib import Path

from ..errors import MissingCredential

API_KEY_ENV = "NOVOBO_API_KEY"

DEFAULT_PORT = 8321
DEFAULT_EMBED_DIM = 64


def packaged_fixture(name: str) -> Path:
    return Path(str(files("novobo") / "fixtures" / name))


@dataclass
class EngineConfig:
    kb_path: Path = field(default_factory=lambda: packaged_fixture("kb.yaml"))
    catalog_path: Path = field(default_factory=lambda: packaged_fixture("scenarios.yaml"))
    data_dir: Path = Path("./novobo-data")
    listen_port: int = DEFAULT_PORT
    llm_endpoint: str = ""
    embed_endpoint: str = ""
    model_reasoning: str = ""
    model_chat: str = ""
    model_embed: str = ""
    stub_mode: bool = True
    stub_seed: int = 0
    embed_dim: int = DEFAULT_EMBED_DIM
    max_inflight_llm: int = 4
    request_timeout_ms: int = 60_000

    def validate(self) -> None:
        """Check mode-dependent requirements; the API key is read from the
        environment, never from configuration files."""
        if self.stub_mode:
            return
        missing = [
            name
            for name, value in (
                ("llm endpoint", self.llm_endpoint),
                ("embedding endpoint", self.embed_endpoint),
                ("reasoning model id", self.model_reasoning),
                ("chat model id", self.model_chat),
                ("embedding model id", self.model_embed),
            )
            if not value
        ]
        if missing:
            raise MissingCredential(f"live mode requires: {', '.join(missing)}")
        if not os.environ.get(API_KEY_ENV):
            raise MissingCredential(f"live mode requires the {API_KEY_ENV} environment variable")
