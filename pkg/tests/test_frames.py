import numpy as np
import pytest

from src.models.designs import BlockDesign, complete_design
from src.models.errors import ParameterError, ShapeError
from src.models.frames import (
    chordal_distance,
    construct_2r4r,
    construct_f_zero,
    construct_trivial,
    construct_zauner,
    direct_sum,
    ei_cos2_target,
    fusion_frame,
    hoggar_realify,
    naimark_complement,
    principal_angles,
    projection,
    simplex_bound,
    spatial_complement,
    spectral_distance,
    trace_target,
    verify,
)
from src.models.triples import NumberField, ParamTriple


@pytest.mark.parametrize("R", range(1, 7))
def test_complex_2r4r_is_equi_isoclinic(R):
    frame = construct_2r4r(R)
    report = verify(frame)
    assert frame.params == ParamTriple.of(2 * R, 4, R)
    assert report.is_tight and report.is_equichordal and report.is_equiisoclinic
    assert report.targets.ei_cos2_target_exact == "1/3"
    assert all(c == pytest.approx(1 / 3) for pair in report.principal_angle_table for c in pair.cos2)


@pytest.mark.parametrize("R", [2, 4, 6])
def test_real_2r4r_is_equi_isoclinic(R):
    frame = construct_2r4r(R, NumberField.REAL)
    assert frame.field_tag is NumberField.REAL
    assert verify(frame).is_equiisoclinic


def test_real_2r4r_needs_even_r():
    with pytest.raises(ParameterError, match="if and only if R is even"):
        construct_2r4r(3, NumberField.REAL)


def test_zauner_frame_from_complete_design():
    frame = construct_zauner(complete_design(4, 2))
    report = verify(frame)
    assert frame.params == ParamTriple.of(6, 4, 3)
    assert report.tight_constant == pytest.approx(2.0)
    assert report.is_equichordal and not report.is_equiisoclinic
    assert report.trace_min == pytest.approx(1.0) and report.trace_max == pytest.approx(1.0)
    assert report.principal_angle_table[0].cos2 == pytest.approx([1.0, 0.0, 0.0], abs=1e-12)
    assert report.min_chordal_distance_sq == pytest.approx(report.simplex_bound_sq)


def test_zauner_rejects_unbalanced_designs():
    with pytest.raises(ParameterError, match="balanced"):
        construct_zauner(BlockDesign(V=4, blocks=[[0, 1], [2, 3]]))


def test_f_zero_witness_flags_repeated_subspaces():
    report = verify(construct_f_zero(2))
    assert report.is_tight
    assert not report.is_equichordal
    assert report.repeated_subspaces == [(0, 1), (2, 3)]
    assert any("repeated subspaces" in note for note in report.notes)


def test_trivial_frames():
    report = verify(construct_trivial(ParamTriple.of(6, 3, 2)))
    assert report.is_equichordal and report.trace_max == pytest.approx(0.0)
    assert verify(construct_trivial(ParamTriple.of(3, 4, 3))).is_equiisoclinic
    axes = construct_trivial(ParamTriple.of(4, 4, 1))
    assert axes.field_tag is NumberField.REAL and verify(axes).is_equiisoclinic
    with pytest.raises(ParameterError):
        construct_trivial(ParamTriple.of(5, 2, 2))


def test_hoggar_realification_keeps_the_angles():
    frame = hoggar_realify(construct_2r4r(1))
    report = verify(frame)
    assert frame.field_tag is NumberField.REAL
    assert frame.params == ParamTriple.of(4, 4, 2)
    assert report.is_equiisoclinic


def test_direct_sum():
    frame = direct_sum(construct_2r4r(1), construct_2r4r(2))
    assert frame.params == ParamTriple.of(6, 4, 3)
    assert verify(frame).is_equiisoclinic
    with pytest.raises(ParameterError, match="equal N"):
        direct_sum(construct_2r4r(1), construct_trivial(ParamTriple.of(4, 2, 2)))
    with pytest.raises(ParameterError, match="equal ratios"):
        direct_sum(construct_2r4r(1), construct_trivial(ParamTriple.of(4, 4, 1)))


def test_complements_of_an_eitff():
    frame = construct_2r4r(2)
    for complement in (naimark_complement(frame), spatial_complement(frame)):
        assert complement.params == ParamTriple.of(4, 4, 2)
        assert verify(complement).is_equiisoclinic


def test_complements_of_degenerate_frames():
    with pytest.raises(ParameterError, match="D = NR"):
        naimark_complement(construct_trivial(ParamTriple.of(4, 4, 1)))
    with pytest.raises(ParameterError, match="R = D"):
        spatial_complement(construct_trivial(ParamTriple.of(3, 4, 3)))


@pytest.mark.parametrize("blocks, message", [
    ([], "at least one block"),
    ([np.eye(2)[:, :1], np.eye(3)[:, :1]], "one shape"),
    ([np.array([[1.0], [1.0]])], "non-orthonormal"),
    ([np.array([[1.0, 0.0]])], "1 <= R <= D"),
])
def test_fusion_frame_shape_errors(blocks, message):
    with pytest.raises(ShapeError, match=message):
        fusion_frame(blocks)


def test_field_detection():
    assert fusion_frame([np.eye(2)[:, :1]]).field_tag is NumberField.REAL
    assert fusion_frame([np.array([[1j]])]).field_tag is NumberField.COMPLEX
    with pytest.raises(ShapeError, match="tagged Real"):
        fusion_frame([np.array([[1j]])], field=NumberField.REAL)


def test_verification_needs_two_subspaces():
    with pytest.raises(ParameterError):
        verify(construct_trivial(ParamTriple.of(2, 1, 2)))


def test_distances_and_angles():
    e1, e2 = np.eye(2)[:, :1], np.eye(2)[:, 1:]
    P1, P2 = projection(e1), projection(e2)
    assert chordal_distance(P1, P2) == pytest.approx(1.0)
    assert spectral_distance(P1, P2) == pytest.approx(1.0)
    assert chordal_distance(P1, P1) == pytest.approx(0.0)
    diagonal = np.array([[1.0], [1.0]]) / np.sqrt(2)
    assert principal_angles(e1, diagonal) == pytest.approx([np.pi / 4])
    with pytest.raises(ParameterError, match="equal ranks"):
        chordal_distance(P1, np.eye(2))


def test_exact_targets():
    t = ParamTriple.of(6, 13, 2)
    assert str(trace_target(t)) == "5/9"
    assert str(trace_target(ParamTriple.of(20, 13, 2))) == "1/20"
    assert str(ei_cos2_target(ParamTriple.of(4, 4, 2))) == "1/3"
    assert simplex_bound(ParamTriple.of(6, 4, 3)) == 2


def _cross_traces(frame):
    return np.array([[np.linalg.norm(a.conj().T @ b) ** 2 for b in frame.blocks] for a in frame.blocks])


@pytest.mark.parametrize("make", [
    lambda: construct_2r4r(2),
    lambda: construct_2r4r(3, NumberField.COMPLEX),
    lambda: construct_zauner(complete_design(4, 2)),
    lambda: construct_zauner(complete_design(5, 3)),
    lambda: construct_f_zero(2),
])
def test_naimark_twice_gives_back_the_gram(make):
    frame = make()
    twice = naimark_complement(naimark_complement(frame))
    assert twice.params == frame.params
    assert twice.field_tag is frame.field_tag
    np.testing.assert_allclose(_cross_traces(twice), _cross_traces(frame), atol=1e-8)


@pytest.mark.parametrize("make", [
    lambda: construct_2r4r(1),
    lambda: construct_2r4r(4, NumberField.REAL),
    lambda: construct_zauner(complete_design(4, 2)),
    lambda: construct_zauner(complete_design(6, 3)),
    lambda: construct_f_zero(3),
    lambda: construct_trivial(ParamTriple.of(6, 3, 2)),
    lambda: construct_trivial(ParamTriple.of(3, 5, 3)),
    lambda: hoggar_realify(construct_2r4r(2)),
    lambda: direct_sum(construct_2r4r(1), construct_2r4r(2)),
])
def test_block_coherence_never_beats_the_welch_bound(make):
    report = verify(make())
    assert report.is_tight
    assert report.block_coherence >= report.block_welch_bound - 1e-9
    assert report.block_welch_bound == pytest.approx(np.sqrt(report.targets.ei_cos2_target))
    if report.is_equiisoclinic:
        assert report.block_coherence == pytest.approx(report.block_welch_bound, abs=1e-9)
