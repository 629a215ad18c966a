import io
import json

import pytest

from src.cli import main
from src.utils.data_persistence import DataPersistence


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_orbit_json(capsys):
    code, out, _ = run(capsys, "orbit", "3", "7", "1", "--window", "6", "--json")
    assert code == 0
    points = json.loads(out)
    assert [(p["D"], p["N"], p["R"]) for p in points] == [
        (11, 7, 9), (11, 7, 2), (3, 7, 2), (3, 7, 1), (4, 7, 1), (4, 7, 3), (17, 7, 3),
    ]


def test_orbit_text_and_plot_data(capsys):
    code, out, _ = run(capsys, "orbit", "3", "7", "1", "--window", "6")
    assert code == 0
    assert out.startswith("## Naimark-spatial sequence")

    code, out, _ = run(capsys, "orbit", "3", "7", "1", "--window", "6", "--emit-plot-data")
    lines = out.strip().splitlines()
    assert lines[0] == "k,D,R,N,next_move"
    assert len(lines) == 8
    assert lines[4] == "0,3,1,7,Naimark"


def test_classify_and_exists(capsys):
    code, out, _ = run(capsys, "classify", "17", "7", "3", "--json")
    record = json.loads(out)
    assert code == 0
    assert record["class"] == "FPos"
    assert record["minimal_point"] == {"D": 3, "N": 7, "R": 1}

    code, out, _ = run(capsys, "exists", "7", "4", "2", "--json")
    assert json.loads(out)["exists"] is False

    code, out, _ = run(capsys, "exists", "5", "4", "2", "--json")
    record = json.loads(out)
    assert record["exists"] is True
    assert record["seed"] == {"D": 1, "N": 4, "R": 1}


def test_certify_json(capsys):
    code, out, _ = run(capsys, "certify", "9", "19", "3", "--json")
    assert code == 0
    report = json.loads(out)
    assert report["verdict"] == "Novel"
    assert report["f_value"] == 261


def test_certify_text_report_is_saved(capsys, tmp_path):
    code, out, _ = run(capsys, "certify", "6", "13", "2", "--report-dir", str(tmp_path))
    assert code == 0
    assert "## Certification" in out and "## Evidence trail" in out
    store = DataPersistence(str(tmp_path))
    saved = store.list_reports("(6,13,2)")
    assert len(saved) == 1
    envelope = store.load_envelope(saved[0])
    assert envelope.kind == "certify"
    assert envelope.body["verdict"] == "CoveredByCatalog"


def test_certify_batch(capsys, tmp_path):
    batch = tmp_path / "batch.txt"
    batch.write_text("# queries\n9 19 3\n(6,13,2)\n\n3,10,1\n", encoding="utf-8")
    code, out, _ = run(capsys, "certify", "--batch", str(batch), "--json")
    assert code == 0
    verdicts = [json.loads(line)["verdict"] for line in out.splitlines()]
    assert verdicts == ["Novel", "CoveredByCatalog", "SettledNegative"]


def test_certify_batch_with_bad_lines(capsys, tmp_path):
    batch = tmp_path / "batch.txt"
    batch.write_text("9 19\n", encoding="utf-8")
    code, _, err = run(capsys, "certify", "--batch", str(batch))
    assert code == 1
    assert "unparseable" in err


def test_certify_without_a_query(capsys):
    code, _, err = run(capsys, "certify")
    assert code == 1
    assert err.startswith("error: certify needs D N R")


def test_usage_errors_exit_with_two(capsys):
    assert run(capsys, "orbit", "3")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "orbit", "3", "7", "1", "--json", "--pretty")[0] == 2


def test_construct_then_verify(capsys, tmp_path):
    path = tmp_path / "frame.json"
    code, _, _ = run(capsys, "construct", "c2r4r", "2", "-o", str(path))
    assert code == 0
    payload = json.loads(path.read_text(encoding="utf-8"))
    assert payload["schema"] == "ectff-frame/1"
    assert (payload["dim"], payload["n"], payload["r"]) == (4, 4, 2)

    code, out, _ = run(capsys, "verify", "--in", str(path), "--json")
    report = json.loads(out)
    assert code == 0
    assert report["is_equiisoclinic"] is True

    code, out, _ = run(capsys, "verify", "--in", str(path))
    assert "## Verification" in out and "## Principal angles" in out

    code, out, _ = run(capsys, "verify", "--in", str(path), "--angles-csv")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "i,j,k,cos2"
    assert len(lines) == 1 + 6 * 2


def test_construct_from_df_and_complement(capsys, tmp_path, df13_file):
    path = tmp_path / "ectff.json"
    assert run(capsys, "construct", "from-df", str(df13_file), "-o", str(path))[0] == 0
    assert json.loads(path.read_text(encoding="utf-8"))["dim"] == 6

    code, out, _ = run(capsys, "complement", "naimark", "--in", str(path))
    assert code == 0
    assert (json.loads(out)["dim"], json.loads(out)["r"]) == (20, 2)


def test_construct_harmonic_from_literals(capsys):
    code, out, _ = run(capsys, "construct", "harmonic", "--group", "Z13xZ2", "--subgroup", "Z13x{0}",
                       "--set", "[[1,0],[3,0],[9,0],[2,1],[6,1],[5,1]]")
    assert code == 0
    payload = json.loads(out)
    assert (payload["dim"], payload["n"], payload["r"]) == (6, 13, 2)


def test_construct_dds(capsys):
    code, out, _ = run(capsys, "construct", "dds", "--group", "Z4", "--subgroup", "Z2", "--set", "[0,1]")
    assert code == 0
    assert json.loads(out)["n"] == 2


def test_construct_errors(capsys):
    code, _, err = run(capsys, "construct", "c2r4r", "3", "--field", "real")
    assert code == 1
    assert "R is even" in err
    assert run(capsys, "construct", "trivial", "4", "4")[0] == 1
    assert run(capsys, "construct", "harmonic", "--group", "Z13")[0] == 1


def test_search_df(capsys):
    code, out, _ = run(capsys, "search-df", "--group", "Z13", "--k", "3", "--lambda", "1", "--limit", "1", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["schema"] == "ectff-family/1"
    assert payload["group"] == "Z13"
    assert len(payload["blocks"]) == 2

    code, out, _ = run(capsys, "search-df", "--group", "Z13", "--k", "3", "--lambda", "1", "--limit", "1")
    assert out.startswith("## Difference family DF(13,3,1) in Z13")


def test_search_df_over_the_cap(capsys):
    code, _, err = run(capsys, "search-df", "--group", "Z67", "--k", "3", "--lambda", "1", "--cap", "64")
    assert code == 1
    assert "exceeds the search cap" in err


@pytest.mark.parametrize("content", ["{not json", json.dumps({"schema": "ectff-frame/1", "dim": 1})])
def test_invalid_frame_documents_exit_with_one(capsys, tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_text(content, encoding="utf-8")
    code, _, err = run(capsys, "verify", "--in", str(path))
    assert code == 1
    assert err.startswith("error:")


def test_frame_from_stdin(capsys, monkeypatch, tmp_path):
    path = tmp_path / "frame.json"
    run(capsys, "construct", "fzero", "1", "-o", str(path))
    monkeypatch.setattr("sys.stdin", io.StringIO(path.read_text(encoding="utf-8")))
    code, out, _ = run(capsys, "verify", "--json")
    assert code == 0
    assert json.loads(out)["repeated_subspaces"] == [[0, 1], [2, 3]]


def test_search_dds_feeds_construct_dds(capsys, tmp_path):
    path = tmp_path / "dds.json"
    code, _, _ = run(capsys, "search-dds", "--group", "Z4", "--subgroup", "Z2", "--size", "2", "--limit", "1",
                     "-o", str(path))
    assert code == 0
    payload = json.loads(path.read_text(encoding="utf-8"))
    assert payload["schema"] == "ectff-dds/1"
    assert (payload["subgroup"], payload["set"]) == ("{0,2}", [0, 1])

    code, out, _ = run(capsys, "construct", "dds", "--file", str(path))
    assert code == 0
    assert (json.loads(out)["dim"], json.loads(out)["n"], json.loads(out)["r"]) == (2, 2, 2)
