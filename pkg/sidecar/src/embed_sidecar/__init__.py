"""Embedding sidecar: a TCP service mapping preprocessed text to
fixed-length vectors from a transformer encoder or a deterministic
fixture model."""

from .model import FixtureModel, load_model
from .server import PROTOCOL_VERSION, SidecarServer

__version__ = "0.1.0"
__all__ = ["FixtureModel", "PROTOCOL_VERSION", "SidecarServer", "load_model"]
