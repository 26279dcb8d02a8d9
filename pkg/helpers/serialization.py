"""Report models shared by the pipeline and the CLI.

Every report is a pydantic model; ``to_json`` adds the schema version so the
emitted document re-parses into the same model with ``model_validate``.
"""

import json
from typing import Literal, Optional

from pydantic import BaseModel, Field

SCHEMA_VERSION = 1


class CheckReport(BaseModel):
    name: str
    passed: bool
    failures: list = Field(default_factory=list)
    detail: str = ""


class DegreeData(BaseModel):
    degree: int
    rank: int
    labels: list[str]
    differential: list[list[str]]


class ResolutionReport(BaseModel):
    group: str
    field: str
    window: tuple[int, int]
    degrees: list[DegreeData]
    checks: list[CheckReport] = Field(default_factory=list)
    generators: dict[str, dict[str, list[list[str]]]] = Field(default_factory=dict)


class RingTable(BaseModel):
    group: str
    field: str
    max_degree: int
    basis: dict[str, list[str]]
    products: list[tuple[str, str, str]]


class MEntry(BaseModel):
    triple: tuple[str, str, str]
    value: str


class MTableReport(BaseModel):
    group: str
    field: str
    entries: list[MEntry]
    zero_count: int
    checks: list[CheckReport] = Field(default_factory=list)


class Witness(BaseModel):
    kind: Literal["imap_f2", "massey", "coboundary"]
    summary: str
    data: dict = Field(default_factory=dict)


class GammaVerdict(BaseModel):
    group: str
    field: str
    verdict: Literal["trivial", "nontrivial"]
    witness: Witness
    seed: int


class MasseyReport(BaseModel):
    inputs: list[str]
    degree: int
    representative: list[list[str]]
    indeterminacy: list[list[list[str]]]
    indeterminacy_dimension: int
    contains_zero: bool
    note: Optional[str] = None


class SuiteReport(BaseModel):
    suite: str
    seed: int
    checks: list[CheckReport]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def to_json(report: BaseModel) -> str:
    return json.dumps({"schema": SCHEMA_VERSION, **report.model_dump(mode="json")}, indent=2)
