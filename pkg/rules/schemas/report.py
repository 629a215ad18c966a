"""
Pydantic schemas for the JSON documents exchanged on the command line:
frames, difference families, block designs, divisible difference sets and
saved reports.
"""
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.models.triples import NumberField

Entry = Tuple[float, float]
Coords = Union[int, List[int]]

FRAME_SCHEMA = "ectff-frame/1"
FAMILY_SCHEMA = "ectff-family/1"
DESIGN_SCHEMA = "ectff-design/1"
DDS_SCHEMA = "ectff-dds/1"
REPORT_SCHEMA = "ectff-report/1"


class _Payload(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="forbid")


class FramePayload(_Payload):
    """A fusion frame: N blocks, each D rows of R entries [re, im]."""
    schema_id: Literal["ectff-frame/1"] = Field(FRAME_SCHEMA, alias="schema")
    dim: int = Field(..., ge=1)
    n: int = Field(..., ge=1)
    r: int = Field(..., ge=1)
    field: NumberField = NumberField.COMPLEX
    blocks: List[List[List[Entry]]]
    notes: List[str] = []

    @model_validator(mode="after")
    def _shapes(self):
        if len(self.blocks) != self.n:
            raise ValueError(f"n = {self.n} but {len(self.blocks)} blocks were given")
        for k, block in enumerate(self.blocks):
            if len(block) != self.dim:
                raise ValueError(f"block {k} has {len(block)} rows, dim = {self.dim}")
            if any(len(row) != self.r for row in block):
                raise ValueError(f"block {k} has a row whose length is not r = {self.r}")
        return self


class FamilyPayload(_Payload):
    """Difference family blocks as coordinate lists; integers stand in for cyclic groups."""
    schema_id: Literal["ectff-family/1"] = Field(FAMILY_SCHEMA, alias="schema")
    group: str = Field(..., description='Group literal such as "Z13" or "Z3xZ3"')
    subgroup: Optional[str] = None
    blocks: List[List[Coords]] = Field(..., min_length=1)
    lam: int = Field(..., ge=0)


class DesignPayload(_Payload):
    schema_id: Literal["ectff-design/1"] = Field(DESIGN_SCHEMA, alias="schema")
    V: int = Field(..., ge=2)
    blocks: List[List[int]] = Field(..., min_length=1)


class DdsPayload(_Payload):
    schema_id: Literal["ectff-dds/1"] = Field(DDS_SCHEMA, alias="schema")
    group: str
    subgroup: str
    set: List[Coords] = Field(..., min_length=1)
    lambda1: Optional[int] = None
    lambda2: Optional[int] = None


class ReportPayload(_Payload):
    """Envelope written next to every saved report."""
    schema_id: Literal["ectff-report/1"] = Field(REPORT_SCHEMA, alias="schema")
    kind: Literal["orbit", "classify", "exists", "certify", "verify", "construct", "search-df", "complement"]
    query: str
    catalog_version: Optional[str] = None
    catalog_hash: Optional[str] = None
    body: Dict[str, Any]

