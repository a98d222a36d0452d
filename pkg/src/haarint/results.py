"""Result container returned by the closed-form and character-sum evaluators."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class EvalResult:
    """A complex value together with how it was obtained.

    ``diagnostics`` carries evaluator-specific keys such as ``cutoff``,
    ``clusters``, ``quadrature_order`` or ``normalization``.
    """

    value: complex
    diagnostics: dict[str, Any] = field(default_factory=dict)

    def __complex__(self):
        return complex(self.value)
