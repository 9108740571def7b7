"""
Model container: JSON header (architecture, layer specs, seed, provenance)
followed by little-endian float64 parameter blocks in declaration order.
"""

import logging
from pathlib import Path

import numpy as np

from utils.containers import pack_container, unpack_container
from utils.exceptions import ContainerFormatError, MissingArtifactError

from .exceptions import LayerTypeError
from .layers import layer_from_spec
from .network import Model

logger = logging.getLogger(__name__)

MODEL_MAGIC = "XTM1"
_DTYPE = np.dtype("<f8")


def _model_header(model: Model):
    blocks = []
    for index in model.parameterized_indices():
        for name, value in model.layers[index].params().items():
            blocks.append({"layer": index, "name": name, "shape": list(value.shape)})
    return {
        "magic": MODEL_MAGIC,
        "dtype": "f64le",
        "architecture_id": model.architecture_id,
        "input_shape": list(model.input_shape),
        "class_count": model.class_count,
        "rng_seed": model.rng_seed,
        "layers": [layer.spec() for layer in model.layers],
        "blocks": blocks,
        "provenance": model.provenance,
    }


def model_to_bytes(model: Model) -> bytes:
    header = _model_header(model)
    payload = b"".join(
        np.ascontiguousarray(model.layers[b["layer"]].params()[b["name"]], dtype=_DTYPE).tobytes()
        for b in header["blocks"]
    )
    return pack_container(header, payload)


def model_from_bytes(blob: bytes, source: str = "<bytes>") -> Model:
    header, payload = unpack_container(blob, source)
    if header.get("magic") != MODEL_MAGIC:
        raise ContainerFormatError(f"{source}: bad model magic {header.get('magic')!r} at offset 8")
    try:
        layers = [layer_from_spec(spec) for spec in header["layers"]]
    except (KeyError, TypeError, LayerTypeError) as exc:
        raise ContainerFormatError(f"{source}: invalid layer descriptors: {exc}") from exc

    expected = sum(int(np.prod(b["shape"])) for b in header["blocks"]) * _DTYPE.itemsize
    if len(payload) != expected:
        raise ContainerFormatError(f"{source}: parameter payload is {len(payload)} bytes, expected {expected}")

    offset = 0
    grouped = {}
    for b in header["blocks"]:
        count = int(np.prod(b["shape"]))
        value = np.frombuffer(payload, dtype=_DTYPE, count=count, offset=offset).reshape(b["shape"])
        grouped.setdefault(b["layer"], {})[b["name"]] = value.astype(np.float64)
        offset += count * _DTYPE.itemsize
    for index, params in grouped.items():
        layers[index].set_params(params)

    return Model(
        architecture_id=header["architecture_id"],
        input_shape=tuple(header["input_shape"]),
        class_count=int(header["class_count"]),
        layers=layers,
        rng_seed=int(header["rng_seed"]),
        provenance=dict(header.get("provenance") or {}),
    )


def save_model(model: Model, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(model_to_bytes(model))
    logger.debug("Saved model %s to %s", model.model_id, path)
    return path


def load_model(path) -> Model:
    path = Path(path)
    if not path.is_file():
        raise MissingArtifactError(path, "model file")
    return model_from_bytes(path.read_bytes(), source=str(path))
