"""Line-protocol server that declarativizes question+answer pairs with a
local sequence-to-sequence checkpoint."""

__version__ = "0.1.0"

from .server import BackendConfig, hygiene, serve

__all__ = ["BackendConfig", "hygiene", "serve", "__version__"]
