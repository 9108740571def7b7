"""
Length-prefixed container framing shared by model files, dataset files and
explanation archives.

Layout (all integers little-endian):

    [offset] [type]        [description]
    0000     uint64        header length H in bytes
    0008     H bytes       UTF-8 JSON header
    0008+H   ...           raw payload
"""

import json
import struct
from pathlib import Path
from typing import Any, Dict, Tuple

from .exceptions import ContainerFormatError, MissingArtifactError

_PREFIX = struct.Struct("<Q")


def pack_container(header: Dict[str, Any], payload: bytes) -> bytes:
    head = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return _PREFIX.pack(len(head)) + head + payload


def unpack_container(blob: bytes, source: str = "<bytes>") -> Tuple[Dict[str, Any], bytes]:
    if len(blob) < _PREFIX.size:
        raise ContainerFormatError(f"{source}: truncated before header length (offset 0)")
    (head_len,) = _PREFIX.unpack_from(blob, 0)
    end = _PREFIX.size + head_len
    if end > len(blob):
        raise ContainerFormatError(
            f"{source}: header claims {head_len} bytes but file ends at offset {len(blob)}"
        )
    try:
        header = json.loads(blob[_PREFIX.size:end].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ContainerFormatError(f"{source}: unreadable JSON header at offset {_PREFIX.size}: {exc}") from exc
    if not isinstance(header, dict):
        raise ContainerFormatError(f"{source}: header at offset {_PREFIX.size} is not a JSON object")
    return header, blob[end:]


def write_container(path, header: Dict[str, Any], payload: bytes) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(pack_container(header, payload))
    return path


def read_container(path) -> Tuple[Dict[str, Any], bytes]:
    path = Path(path)
    if not path.is_file():
        raise MissingArtifactError(path)
    return unpack_container(path.read_bytes(), source=str(path))
