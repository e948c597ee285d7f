import json
import zipfile
from pathlib import Path
from typing import Any, Dict, Tuple

import numpy as np

from src.errors import ConfigurationError

FORMAT_VERSION = 1
_VERSION_KEY = "__format_version__"
_METADATA_KEY = "__metadata__"
_EPOCH = (1980, 1, 1, 0, 0, 0)


def save_tensors(path: Path, tensors: Dict[str, np.ndarray], metadata: Dict[str, Any] = None) -> Path:
    """Write named tensors as little-endian float64 into one versioned .npz container"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {name: np.ascontiguousarray(t, dtype="<f8") for name, t in tensors.items()}
    payload[_VERSION_KEY] = np.array([FORMAT_VERSION], dtype="<i8")
    payload[_METADATA_KEY] = np.array(json.dumps(metadata or {}, sort_keys=True))
    # same layout as np.savez, with a fixed entry timestamp so equal inputs give equal bytes
    with zipfile.ZipFile(path, "w", compression=zipfile.ZIP_STORED) as archive:
        for name in sorted(payload):
            info = zipfile.ZipInfo(f"{name}.npy", date_time=_EPOCH)
            with archive.open(info, "w", force_zip64=True) as f:
                np.lib.format.write_array(f, payload[name], allow_pickle=False)
    return path


def load_tensors(path: Path) -> Tuple[Dict[str, np.ndarray], Dict[str, Any]]:
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"Checkpoint not found: {path}")
    with np.load(path, allow_pickle=False) as data:
        if _VERSION_KEY not in data.files:
            raise ConfigurationError(f"{path} is not a model checkpoint")
        version = int(data[_VERSION_KEY][0])
        if version != FORMAT_VERSION:
            raise ConfigurationError(f"Unsupported checkpoint version {version} (expected {FORMAT_VERSION})")
        metadata = json.loads(str(data[_METADATA_KEY]))
        tensors = {k: data[k].astype(np.float64) for k in data.files if k not in (_VERSION_KEY, _METADATA_KEY)}
    return tensors, metadata
