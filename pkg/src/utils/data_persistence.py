"""
JSON documents on disk and on stdin/stdout.

Frames, difference families, designs and divisible difference sets travel
between subcommands as the schemas in rules.schemas.report. Floats are
written with Python's shortest round-trip repr, so a frame re-parses to the
same bits.
"""
import json
import logging
import os
import sys
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Type, TypeVar

import numpy as np
from pydantic import BaseModel

from rules.schemas.report import (
    DdsPayload,
    DesignPayload,
    FamilyPayload,
    FramePayload,
    ReportPayload,
)
from ..models.designs import BlockDesign, DifferenceFamily, DivisibleDifferenceSet, verify_dds, verify_df
from ..models.errors import ParameterError
from ..models.frames import FusionFrame, fusion_frame
from ..models.groups import GroupElement, parse_group, parse_subgroup, parse_subset
from ..models.triples import NumberField

logger = logging.getLogger(__name__)

P = TypeVar("P", bound=BaseModel)


def _coords(g: GroupElement):
    return g.coords[0] if len(g.coords) == 1 else list(g.coords)


def frame_to_payload(frame: FusionFrame) -> FramePayload:
    blocks = [[[(float(z.real), float(z.imag)) for z in row] for row in block] for block in frame.blocks]
    return FramePayload(dim=frame.dim, n=frame.n, r=frame.r, field=frame.field_tag,
                        blocks=blocks, notes=list(frame.notes))


def payload_to_frame(payload: FramePayload) -> FusionFrame:
    blocks = [np.array([[complex(re, im) for re, im in row] for row in block]) for block in payload.blocks]
    return fusion_frame(blocks, field=payload.field, notes=payload.notes)


def family_to_payload(df: DifferenceFamily) -> FamilyPayload:
    return FamilyPayload(group=df.group.literal(),
                         subgroup=df.subgroup.literal() if df.subgroup is not None else None,
                         blocks=[[_coords(g) for g in block] for block in df.blocks], lam=df.lam)


def payload_to_family(payload: FamilyPayload) -> DifferenceFamily:
    group = parse_group(payload.group)
    within = parse_subgroup(group, payload.subgroup) if payload.subgroup else None
    blocks = [parse_subset(group, block) for block in payload.blocks]
    df = verify_df(group, blocks, within)
    if df is None:
        raise ParameterError(f"the blocks do not form a difference family of {payload.group}")
    if df.lam != payload.lam:
        raise ParameterError(f"the blocks form a difference family with lambda = {df.lam}, "
                             f"not the declared {payload.lam}")
    return df


def payload_to_design(payload: DesignPayload) -> BlockDesign:
    return BlockDesign(V=payload.V, blocks=payload.blocks)


def dds_to_payload(dds: DivisibleDifferenceSet) -> DdsPayload:
    return DdsPayload(group=dds.group.literal(), subgroup=dds.subgroup.literal(),
                      set=[_coords(g) for g in dds.set], lambda1=dds.lambda1, lambda2=dds.lambda2)


def payload_to_dds(payload: DdsPayload) -> DivisibleDifferenceSet:
    group = parse_group(payload.group)
    subgroup = parse_subgroup(group, payload.subgroup)
    dds = verify_dds(group, subgroup, parse_subset(group, payload.set))
    if dds is None:
        raise ParameterError(f"the set is not a divisible difference set of {payload.group} "
                             f"relative to {payload.subgroup}")
    for name in ("lambda1", "lambda2"):
        declared = getattr(payload, name)
        if declared is not None and declared != getattr(dds, name):
            raise ParameterError(f"declared {name} = {declared} but the set has {name} = {getattr(dds, name)}")
    return dds


def to_json(data: Any, pretty: bool = False) -> str:
    """Serialize a model (aliases applied) or plain data deterministically."""
    if isinstance(data, BaseModel):
        data = data.model_dump(mode="json", by_alias=True)
    elif isinstance(data, list):
        data = [d.model_dump(mode="json", by_alias=True) if isinstance(d, BaseModel) else d for d in data]
    if pretty:
        return json.dumps(data, indent=2, sort_keys=False)
    return json.dumps(data, separators=(",", ":"))


def read_text(source: str) -> str:
    """Read a path, or stdin when source is "-"."""
    if source == "-":
        return sys.stdin.read()
    try:
        with open(source, "r", encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise ParameterError(f"cannot read {source}: {e}") from e


def read_document(source: str, model: Type[P]) -> P:
    """Parse a JSON document into `model`; pydantic ValidationError propagates on schema mismatch."""
    text = read_text(source)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParameterError(f"{'stdin' if source == '-' else source} is not valid JSON: {e}") from e
    return model.model_validate(data)


def read_frame(source: str) -> FusionFrame:
    return payload_to_frame(read_document(source, FramePayload))


def read_family(source: str) -> DifferenceFamily:
    return payload_to_family(read_document(source, FamilyPayload))


def read_design(source: str) -> BlockDesign:
    return payload_to_design(read_document(source, DesignPayload))


def read_dds(source: str) -> DivisibleDifferenceSet:
    return payload_to_dds(read_document(source, DdsPayload))


class DataPersistence:
    """Writes command output to files and keeps saved reports under base_dir."""

    def __init__(self, base_dir: Optional[str] = None):
        self.base_dir = base_dir or os.path.join(os.getcwd(), ".data")
        self.reports_dir = os.path.join(self.base_dir, "reports")

    def _safe_name(self, name: str) -> str:
        return "".join(c for c in name if c.isalnum() or c in ("-", "_", ".")).strip()

    def write_output(self, path: str, text: str) -> str:
        """Write text to path ("-" means stdout) and return where it went."""
        if path == "-":
            sys.stdout.write(text if text.endswith("\n") else text + "\n")
            return path
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text if text.endswith("\n") else text + "\n")
        logger.info("wrote %s", path)
        return path

    def save_report(self, query: str, report_text: str, envelope: Optional[ReportPayload] = None) -> str:
        """Save a report as markdown with a .meta.json sidecar; returns the report path."""
        safe = self._safe_name(query) or "query"
        report_dir = os.path.join(self.reports_dir, safe)
        os.makedirs(report_dir, exist_ok=True)
        timestamp = datetime.now(timezone.utc).strftime("%Y%m%d_%H%M%S_%f")
        report_path = os.path.join(report_dir, f"report_{timestamp}.md")
        self.write_output(report_path, report_text)
        if envelope is not None:
            self.write_output(report_path + ".meta.json", to_json(envelope, pretty=True))
        return report_path

    def list_reports(self, query: str) -> List[str]:
        report_dir = os.path.join(self.reports_dir, self._safe_name(query) or "query")
        if not os.path.isdir(report_dir):
            return []
        files = [os.path.join(report_dir, f) for f in os.listdir(report_dir) if f.endswith(".md")]
        return sorted(files, reverse=True)

    def load_envelope(self, report_path: str) -> Optional[ReportPayload]:
        meta = report_path + ".meta.json"
        if not os.path.exists(meta):
            return None
        return read_document(meta, ReportPayload)

    def save_json(self, path: str, data: Any, pretty: bool = True) -> str:
        return self.write_output(path, to_json(data, pretty=pretty))

    def load_json(self, path: str) -> Optional[Dict[str, Any]]:
        if not os.path.exists(path):
            return None
        try:
            return json.loads(read_text(path))
        except json.JSONDecodeError:
            logger.warning("ignoring unreadable JSON file %s", path)
            return None
