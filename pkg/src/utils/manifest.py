import json
import os
from contextlib import contextmanager
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterator, Optional

from pydantic import BaseModel, Field

from src.errors import ConfigurationError

LOCK_NAME = ".aem.lock"


class RunManifest(BaseModel):
    """What one command read, how it was configured, and what it wrote"""

    command: str
    created_at: str = Field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    finished_at: Optional[str] = None
    config: Dict[str, Any] = {}
    corpus_fingerprint: Optional[str] = None
    seed: Optional[int] = None
    inputs: Dict[str, str] = {}
    artifacts: Dict[str, str] = {}

    def add_artifact(self, name: str, path: Path) -> None:
        self.artifacts[name] = str(Path(path).name)

    def write(self, out_dir: Path) -> Path:
        self.finished_at = datetime.now(timezone.utc).isoformat()
        path = Path(out_dir) / f"manifest_{self.command}.json"
        with path.open("w", encoding="utf-8") as f:
            json.dump(self.model_dump(), f, indent=2, sort_keys=True)
            f.write("\n")
        return path


def read_manifest(out_dir: Path, command: str) -> RunManifest:
    path = Path(out_dir) / f"manifest_{command}.json"
    if not path.exists():
        raise ConfigurationError(f"No {command} manifest in {out_dir}")
    with path.open("r", encoding="utf-8") as f:
        return RunManifest.model_validate(json.load(f))


@contextmanager
def run_lock(out_dir: Path) -> Iterator[Path]:
    """Exclusive lock file in out_dir; a second concurrent run on the same directory fails"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    lock = out_dir / LOCK_NAME
    try:
        fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise ConfigurationError(f"{out_dir} is locked by another run (remove {lock} if it is stale)")
    try:
        os.write(fd, str(os.getpid()).encode("ascii"))
        os.close(fd)
        yield out_dir
    finally:
        lock.unlink(missing_ok=True)
