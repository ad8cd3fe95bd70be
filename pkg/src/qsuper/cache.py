"""On-disk cache for Gram blocks with atomic writes."""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from . import __version__
from .cartan import CartanDatum, RootWeight
from .pairing import GramBlock

ENV_VAR = "QSUPER_CACHE_DIR"
CODE_TAG = f"qsuper-{__version__}-gram1"


def default_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "qsuper"


class GramCache:
    def __init__(self, directory: str | Path | None = None):
        self.dir = Path(directory) if directory is not None else default_dir()
        self.hits = 0
        self.misses = 0

    def key(self, datum: CartanDatum, mu: RootWeight, cut: int) -> str:
        doc = dict(datum.canonical())
        doc.pop("name")
        payload = json.dumps({"datum": doc, "weight": list(mu.coords), "cut": cut, "code": CODE_TAG},
                             sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()

    def get(self, datum: CartanDatum, mu: RootWeight, cut: int) -> GramBlock | None:
        path = self.dir / f"{self.key(datum, mu, cut)}.json"
        try:
            doc = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError):
            self.misses += 1
            return None
        self.hits += 1
        return GramBlock.from_document(doc)

    def put(self, datum: CartanDatum, mu: RootWeight, cut: int, block: GramBlock) -> None:
        self.dir.mkdir(parents=True, exist_ok=True)
        path = self.dir / f"{self.key(datum, mu, cut)}.json"
        fd, tmp = tempfile.mkstemp(dir=self.dir, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(block.to_document(), fh, sort_keys=True)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def entries(self) -> list:
        if not self.dir.exists():
            return []
        return sorted(p for p in self.dir.glob("*.json") if not p.name.startswith(".tmp-"))

    def clear(self) -> int:
        n = 0
        for p in self.entries():
            p.unlink()
            n += 1
        return n

    def size_bytes(self) -> int:
        return sum(p.stat().st_size for p in self.entries())
