"""Engine error hierarchy.

Every engine error carries a stable ``code`` (its class name) and a
``detail`` dict so the HTTP layer can map errors one-to-one onto API
error bodies without enumerating exception classes.
"""

from __future__ import annotations

from typing import Any


class EngineError(Exception):
    """Base class for all domain errors raised by the engine."""

    def __init__(self, message: str, **detail: Any):
        super().__init__(message)
        self.detail = {k: v for k, v in detail.items() if v is not None}

    @property
    def code(self) -> str:
        return type(self).__name__

    def to_dict(self) -> dict[str, Any]:
        return {"code": self.code, "message": str(self), "detail": self.detail}
