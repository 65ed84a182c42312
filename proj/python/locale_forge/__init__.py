"""Python front end for the locforge core.

Documents are plain dicts (or JSON strings, or paths); every call returns a Result
whose ``report`` is the same JSON report the ``locale-forge`` CLI prints.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Any, Union

from . import _locforge

__all__ = [
    "Result",
    "MalformedInput",
    "run",
    "commands",
    "fixture",
    "fixture_names",
    "frame_corpus",
    "check_rbc",
    "check_bc_pullbacks",
    "omega",
    "nuclei_enumerate",
    "nuclei_frame",
    "terminal_omega",
    "surjective",
    "embedding",
    "factorize",
    "lt_roundtrip",
    "export_dot",
]

Doc = Union[dict, str, os.PathLike]


class MalformedInput(ValueError):
    pass


@dataclass
class Result:
    exit_code: int
    report: dict = field(default_factory=dict)
    text: str = ""

    @property
    def verdict(self) -> str:
        return self.report.get("verdict", "")

    @property
    def ok(self) -> bool:
        return self.exit_code == 0


def _load(doc: Doc) -> tuple[str, str]:
    if isinstance(doc, dict):
        return json.dumps(doc), "."
    s = os.fspath(doc)
    if isinstance(doc, str) and s.lstrip().startswith("{"):
        return s, "."
    with open(s, encoding="utf-8") as fh:
        return fh.read(), os.path.dirname(os.path.abspath(s))


def run(command: str, *docs: Doc, budget_sieves: int | None = None, budget_maps: int | None = None,
        oracle: str = "auto", out_dir: str = "", seed: int = 0, count: int = 20) -> Result:
    texts, base = [], "."
    for d in docs:
        t, base = _load(d)
        texts.append(t)
    kw: dict[str, Any] = {"oracle": oracle, "out_dir": os.fspath(out_dir), "seed": seed, "count": count}
    if budget_sieves is not None:
        kw["budget_sieves"] = budget_sieves
    if budget_maps is not None:
        kw["budget_maps"] = budget_maps
    code, report, text, diag = _locforge.run(command, texts, base, **kw)
    if code == 2:
        raise MalformedInput(diag)
    return Result(code, json.loads(report) if report else {}, text)


def commands() -> list[str]:
    return list(_locforge.commands())


def fixture(name: str) -> dict:
    return json.loads(_locforge.fixture(name))


def fixture_names() -> list[str]:
    return list(_locforge.fixture_names())


def frame_corpus() -> list[dict]:
    return [json.loads(s) for s in _locforge.frame_corpus()]


def check_rbc(presentation: Doc, **kw) -> Result:
    return run("check-rbc", presentation, **kw)


def check_bc_pullbacks(presentation: Doc, **kw) -> Result:
    return run("check-bc-pullbacks", presentation, **kw)


def omega(category: Doc, **kw) -> Result:
    return run("omega", category, **kw)


def nuclei_enumerate(doc: Doc, **kw) -> Result:
    return run("nuclei-enumerate", doc, **kw)


def nuclei_frame(presentation: Doc, **kw) -> Result:
    return run("nuclei-frame", presentation, **kw)


def terminal_omega(presentation: Doc, **kw) -> Result:
    return run("terminal-omega", presentation, **kw)


def surjective(morphism: Doc, **kw) -> Result:
    return run("surjective", morphism, **kw)


def embedding(morphism: Doc, **kw) -> Result:
    return run("embedding", morphism, **kw)


def factorize(morphism: Doc, **kw) -> Result:
    return run("factorize", morphism, **kw)


def lt_roundtrip(doc: Doc, **kw) -> Result:
    return run("lt-roundtrip", doc, **kw)


def export_dot(doc: Doc) -> str:
    return run("export-dot", doc).text
