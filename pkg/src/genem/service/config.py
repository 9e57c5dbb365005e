"""Service configuration: file-based with environment overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace
from pathlib import Path


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8008
    store_root: str = "./genem-store"
    backend: str = "replay"  # "replay" | "replay:<dir>" | "live"
    template_dir: str | None = None

    @classmethod
    def load(cls, path: str | None = None, environ=os.environ) -> "ServiceConfig":
        config = cls()
        if path:
            data = json.loads(Path(path).read_text())
            config = replace(
                config,
                **{k: v for k, v in data.items() if k in cls.__dataclass_fields__},
            )
        overrides = {}
        if environ.get("GENEM_HOST"):
            overrides["host"] = environ["GENEM_HOST"]
        if environ.get("GENEM_PORT"):
            overrides["port"] = int(environ["GENEM_PORT"])
        if environ.get("GENEM_STORE_ROOT"):
            overrides["store_root"] = environ["GENEM_STORE_ROOT"]
        if environ.get("GENEM_BACKEND"):
            overrides["backend"] = environ["GENEM_BACKEND"]
        if environ.get("GENEM_TEMPLATE_DIR"):
            overrides["template_dir"] = environ["GENEM_TEMPLATE_DIR"]
        return replace(config, **overrides) if overrides else config
