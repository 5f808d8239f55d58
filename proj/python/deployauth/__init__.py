"""Python interface to the deployment authorisation engine."""

from ._core import (  # noqa: F401
    Engine,
    EngineError,
    EngineHome,
    canonicalize,
    evaluate_min_gate,
    merkle_root_hex,
    policy_fingerprint,
    sha256_hex,
)

__all__ = [
    "Engine",
    "EngineError",
    "EngineHome",
    "canonicalize",
    "evaluate_min_gate",
    "merkle_root_hex",
    "policy_fingerprint",
    "sha256_hex",
]
