from __future__ import annotations

import json
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

MetricName = Literal["pe", "peg", "mmspe", "mpeg"]


class RunResult(BaseModel):
    """Outcome of one `compute` invocation."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    metric: MetricName
    m: int = Field(..., ge=2)
    L: int = Field(..., ge=1)
    value: float = Field(..., ge=0.0, le=1.0)
    pattern_count: int = Field(..., ge=1)
    metadata: dict[str, str] = Field(default_factory=dict)

    def to_json(self) -> str:
        """Render as one JSON object with a fixed key order.

        ``value`` is written with 17 significant digits so the 64-bit float
        survives a round trip through text.
        """
        parts = [
            f'"metric": {json.dumps(self.metric)}',
            f'"m": {self.m}',
            f'"L": {self.L}',
            f'"value": {format(self.value, ".17g")}',
            f'"pattern_count": {self.pattern_count}',
            f'"metadata": {json.dumps(dict(sorted(self.metadata.items())), ensure_ascii=False)}',
        ]
        return "{" + ", ".join(parts) + "}"
