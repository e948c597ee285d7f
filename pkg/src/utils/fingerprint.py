import hashlib
from pathlib import Path
from typing import Dict

import numpy as np

_CHUNK = 1 << 20


def file_digest(path: Path) -> str:
    """sha256 of a file's bytes"""
    h = hashlib.sha256()
    with Path(path).open("rb") as f:
        for chunk in iter(lambda: f.read(_CHUNK), b""):
            h.update(chunk)
    return h.hexdigest()


def tensor_digest(tensors: Dict[str, np.ndarray]) -> str:
    """Stable id of a parameter snapshot: names, shapes and little-endian bytes in name order"""
    h = hashlib.sha256()
    for name in sorted(tensors):
        t = np.ascontiguousarray(tensors[name], dtype="<f8")
        h.update(name.encode("utf-8"))
        h.update(str(t.shape).encode("ascii"))
        h.update(t.tobytes())
    return h.hexdigest()[:16]
