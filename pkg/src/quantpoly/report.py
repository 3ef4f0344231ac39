"""The JSON report written by the command-line tool."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .io import dump_json

FORMAT_VERSION = "1"


@dataclass
class FitReport:
    """Everything needed to reproduce and audit one CLI run.

    ``results`` maps basis name to a serialised :class:`SelectionResult`
    summary. ``timing`` is omitted (``None``) for commands whose output must
    be byte-reproducible.
    """

    command: str
    input: dict
    config: dict
    results: dict = field(default_factory=dict)
    baselines: dict = field(default_factory=dict)
    comparison: dict | None = None
    timing: dict | None = None
    format_version: str = FORMAT_VERSION

    def to_dict(self):
        d = {
            "format_version": self.format_version,
            "command": self.command,
            "input": self.input,
            "config": self.config,
            "results": self.results,
            "baselines": self.baselines,
        }
        if self.comparison is not None:
            d["comparison"] = self.comparison
        if self.timing is not None:
            d["timing"] = self.timing
        return d

    def to_json(self):
        return dump_json(self.to_dict())

    @classmethod
    def from_dict(cls, d):
        return cls(
            command=d["command"],
            input=d["input"],
            config=d["config"],
            results=d.get("results", {}),
            baselines=d.get("baselines", {}),
            comparison=d.get("comparison"),
            timing=d.get("timing"),
            format_version=d.get("format_version", FORMAT_VERSION),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))
