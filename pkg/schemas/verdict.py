from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional, Tuple


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: Tuple[Any, ...] = ()
    detail: str = ""
    # which side owns the witness trace ("left"/"right"), or the offending state
    side: str = ""
    state: Optional[Any] = None

    def __bool__(self) -> bool:
        return self.ok

    @property
    def witness_text(self) -> str:
        return " ".join(str(label) for label in self.witness)

    @classmethod
    def passed(cls, detail: str = "") -> "Verdict":
        return cls(ok=True, detail=detail)
