import json

import numpy as np
import pytest
from pydantic import ValidationError

from rules.schemas.report import DdsPayload, FamilyPayload, FramePayload, ReportPayload
from src.models.designs import verify_dds
from src.models.errors import ParameterError
from src.models.frames import construct_2r4r, construct_f_zero
from src.models.groups import AbelianGroup, parse_subgroup, parse_subset
from src.models.triples import NumberField
from src.utils.data_persistence import (
    DataPersistence,
    dds_to_payload,
    family_to_payload,
    frame_to_payload,
    payload_to_dds,
    payload_to_family,
    payload_to_frame,
    read_design,
    read_family,
    to_json,
)
from src.utils.validators import parse_batch, parse_triple_line, validate_report_structure


def test_frame_payload_preserves_entries_exactly():
    frame = construct_2r4r(2)
    text = to_json(frame_to_payload(frame))
    restored = payload_to_frame(FramePayload.model_validate(json.loads(text)))
    assert restored.field_tag is NumberField.COMPLEX
    for a, b in zip(frame.blocks, restored.blocks):
        assert np.array_equal(a, b)


def test_frame_payload_keeps_notes_and_field():
    payload = frame_to_payload(construct_f_zero(1))
    assert payload.field is NumberField.REAL
    assert payload.notes == ["subspaces 1,2 and 3,4 coincide"]
    assert json.loads(to_json(payload))["schema"] == "ectff-frame/1"


def test_frame_payload_shape_mismatch():
    with pytest.raises(ValidationError, match="blocks were given"):
        FramePayload(dim=1, n=2, r=1, blocks=[[[(1.0, 0.0)]]])


def test_frame_payload_rejects_unknown_keys():
    with pytest.raises(ValidationError):
        FramePayload.model_validate({"schema": "ectff-frame/1", "dim": 1, "n": 1, "r": 1,
                                     "blocks": [[[[1.0, 0.0]]]], "colour": "red"})


def test_family_document(df13, df13_file):
    assert read_family(str(df13_file)) == df13
    payload = family_to_payload(df13)
    assert payload.blocks == [[1, 3, 9], [2, 5, 6]]


def test_family_with_wrong_lambda():
    payload = FamilyPayload(group="Z13", blocks=[[1, 3, 9], [2, 6, 5]], lam=2)
    with pytest.raises(ParameterError, match="not the declared 2"):
        payload_to_family(payload)


def test_family_that_is_not_a_family():
    payload = FamilyPayload(group="Z13", blocks=[[0, 1, 2], [0, 3, 6]], lam=1)
    with pytest.raises(ParameterError, match="do not form a difference family"):
        payload_to_family(payload)


def test_dds_payload():
    group = AbelianGroup.cyclic(4)
    dds = verify_dds(group, parse_subgroup(group, "Z2"), parse_subset(group, [0, 1]))
    payload = dds_to_payload(dds)
    assert (payload.subgroup, payload.set) == ("{0,2}", [0, 1])
    assert payload_to_dds(payload) == dds
    with pytest.raises(ParameterError, match="declared lambda2"):
        payload_to_dds(DdsPayload(group="Z4", subgroup="Z2", set=[0, 1], lambda2=2))


def test_design_document(tmp_path):
    path = tmp_path / "design.json"
    path.write_text(json.dumps({"schema": "ectff-design/1", "V": 4, "blocks": [[0, 1], [0, 2]]}), encoding="utf-8")
    design = read_design(str(path))
    assert design.V == 4 and design.blocks == [[0, 1], [0, 2]]


def test_read_errors(tmp_path):
    with pytest.raises(ParameterError, match="cannot read"):
        read_family(str(tmp_path / "missing.json"))
    path = tmp_path / "bad.json"
    path.write_text("[", encoding="utf-8")
    with pytest.raises(ParameterError, match="not valid JSON"):
        read_family(str(path))


def test_pretty_and_compact_json():
    assert to_json({"a": [1, 2]}) == '{"a":[1,2]}'
    assert to_json({"a": 1}, pretty=True) == '{\n  "a": 1\n}'


def test_save_and_load_reports(tmp_path):
    store = DataPersistence(str(tmp_path))
    envelope = ReportPayload(kind="verify", query="(2,4,1)", body={"is_tight": True})
    path = store.save_report("(2,4,1)", "## Verification\n", envelope)
    assert path.endswith(".md")
    assert store.list_reports("(2,4,1)") == [path]
    assert store.load_envelope(path) == envelope
    assert store.list_reports("(3,4,1)") == []


def test_json_helpers(tmp_path):
    store = DataPersistence(str(tmp_path))
    path = str(tmp_path / "out" / "data.json")
    store.save_json(path, {"x": 1})
    assert store.load_json(path) == {"x": 1}
    assert store.load_json(str(tmp_path / "absent.json")) is None


@pytest.mark.parametrize("line", ["9 19 3", "9,19,3", "(9, 19, 3)", "  9\t19 3 "])
def test_triple_line_formats(line):
    assert parse_triple_line(line).as_tuple() == (9, 19, 3)


def test_batch_parsing_collects_errors():
    triples, errors = parse_batch("9 19 3  # novel\n\n# comment\n1 2\n6,13,2\n")
    assert [t.as_tuple() for t in triples] == [(9, 19, 3), (6, 13, 2)]
    assert errors == ["line 4: cannot parse '1 2' as a triple 'D N R'"]


def test_report_structure_check():
    ok, errors = validate_report_structure("## Certification\n", ["## Certification", "## Evidence trail"])
    assert not ok
    assert errors == ["Missing section: ## Evidence trail"]
