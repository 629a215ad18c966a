from itertools import combinations, product

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.models.designs import search_dds, search_df, verify_dds
from src.models.errors import ParameterError
from src.models.frames import naimark_complement, principal_angles, spatial_complement, verify
from src.models.groups import AbelianGroup, all_subgroups, cosets, parse_group, parse_subgroup, parse_subset
from src.models.harmonic import (
    HarmonicSpec,
    build,
    cross_gram_spectrum,
    dds_to_ectff,
    from_df,
    gram_from_dft,
    harmonic_gram,
)
from src.models.triples import ParamTriple
from helpers import abelian_groups


def test_df13_gives_an_ectff_6_13_2(df13):
    result = from_df(df13)
    report = result.report
    assert result.params == ParamTriple.of(6, 13, 2)
    assert report.is_tight and report.tight_residual < 1e-10
    assert report.is_equichordal and not report.is_equiisoclinic
    assert report.trace_min == pytest.approx(5 / 9, abs=1e-10)
    assert report.trace_max == pytest.approx(5 / 9, abs=1e-10)
    assert report.targets.trace_target_exact == "5/9"
    assert result.combinatorial_flags.is_df and not result.combinatorial_flags.is_ds_each
    assert result.df is not None and result.df.lam == 1
    assert not result.trivial


def test_complements_of_the_harmonic_frame(df13):
    frame = from_df(df13).frame

    naimark = verify(naimark_complement(frame))
    assert (naimark.dim, naimark.n, naimark.r) == (20, 13, 2)
    assert naimark.is_equichordal
    assert naimark.trace_min == pytest.approx(1 / 20, abs=1e-9)

    spatial = verify(spatial_complement(frame))
    assert (spatial.dim, spatial.n, spatial.r) == (6, 13, 4)
    assert spatial.is_equichordal
    assert spatial.trace_min == pytest.approx(6 - 2 * 2 + 5 / 9, abs=1e-9)


def _interior_cos2(B1, B2):
    cos2 = np.cos(principal_angles(B1, B2)) ** 2
    return np.sort(cos2[(cos2 > 1e-8) & (cos2 < 1 - 1e-8)])


def test_spatial_complement_keeps_the_interior_principal_angles(df13):
    frame = from_df(df13).frame
    spatial = spatial_complement(frame)
    assert spatial.params == ParamTriple.of(6, 13, 4)
    for i, j in combinations(range(frame.n), 2):
        assert_allclose(_interior_cos2(spatial.blocks[i], spatial.blocks[j]),
                        _interior_cos2(frame.blocks[i], frame.blocks[j]), atol=1e-8)


def test_searched_family_gives_an_ectff_9_19_3():
    df = search_df(AbelianGroup.cyclic(19), 3, 1, limit=1)[0]
    result = from_df(df)
    assert result.params == ParamTriple.of(9, 19, 3)
    assert result.report.is_equichordal
    assert result.report.targets.trace_target_exact == "8/9"


@pytest.mark.parametrize("literal, subset", [
    ("Z13xZ2", [(1, 0), (3, 0), (9, 0), (2, 1), (6, 1), (5, 1)]),
    ("Z7", [1, 2, 4]),
    ("Z3xZ3", [(0, 0), (1, 1), (2, 0)]),
])
def test_harmonic_gram_is_the_transform_of_the_indicator(literal, subset):
    group = parse_group(literal)
    D = parse_subset(group, subset)
    assert_allclose(harmonic_gram(group, D), gram_from_dft(group, D), atol=1e-10)


def test_cross_gram_spectrum_matches_the_trace(df13):
    result = from_df(df13)
    spec = result.spec
    group = spec.group
    spectrum = cross_gram_spectrum(spec, group.element(0, 0), group.element(1, 0))
    assert len(spectrum) == 2
    assert float(np.sum(np.abs(spectrum) ** 2)) == pytest.approx(5 / 9, abs=1e-10)


@pytest.mark.parametrize("literal", ["Z4", "Z6", "Z2xZ2", "Z8", "Z2xZ4"])
def test_difference_family_iff_equichordal_on_small_groups(literal):
    group = parse_group(literal)
    elements = group.elements()
    checked = 0
    for H in all_subgroups(group):
        if H.order < 2:
            continue
        for size in range(1, group.order + 1):
            for rest in combinations(elements[1:], size - 1):
                spec = HarmonicSpec(group=group, subgroup=H, subset=[elements[0], *rest])
                try:
                    result = build(spec)
                except ParameterError:
                    continue
                assert result.combinatorial_flags.is_df == result.report.is_equichordal
                assert result.combinatorial_flags.is_ds_each == result.report.is_equiisoclinic
                checked += 1
    assert checked > 0


def test_non_constant_coset_sizes_are_rejected():
    group = AbelianGroup.cyclic(4)
    spec = HarmonicSpec(group=group, subgroup=parse_subgroup(group, "Z2"), subset=parse_subset(group, [0, 1, 2]))
    with pytest.raises(ParameterError, match="not constant"):
        build(spec)


def test_semiregular_dds_gives_constant_cross_moduli():
    group = AbelianGroup.cyclic(4)
    dds = verify_dds(group, parse_subgroup(group, "Z2"), parse_subset(group, [0, 1]))
    result = dds_to_ectff(dds)
    assert result.params == ParamTriple.of(2, 2, 2)
    assert result.cross_modulus == pytest.approx(0.5)
    assert result.report.is_equichordal


def test_dds_to_ectff_needs_a_semiregular_set():
    group = AbelianGroup.cyclic(7)
    dds = verify_dds(group, parse_subgroup(group, "Z7"), parse_subset(group, [1, 2, 4]))
    assert dds is not None and not dds.semiregular
    with pytest.raises(ParameterError, match="semiregular"):
        dds_to_ectff(dds)


def test_searched_relative_difference_set_gives_mutually_unbiased_bases():
    group = parse_group("Z3xZ3")
    found = search_dds(group, parse_subgroup(group, "{0}xZ3"), 3, limit=1)
    assert found
    result = dds_to_ectff(found[0])
    assert result.params == ParamTriple.of(3, 3, 3)
    assert result.cross_modulus == pytest.approx(1 / 3)
    assert result.report.is_equichordal


def _constant_card_subsets(parts, rng, samples=2):
    """Subsets meeting every coset in K points: all of them when few, else a random sample per K."""
    h = len(parts[0])
    for K in range(1, h + 1):
        choices = [list(combinations(part, K)) for part in parts]
        if np.prod([len(c) for c in choices], dtype=float) <= 32:
            for picked in product(*choices):
                yield [g for chunk in picked for g in chunk]
        else:
            for _ in range(samples):
                yield [part[i] for part in parts for i in rng.choice(h, size=K, replace=False)]


@pytest.mark.slow
@pytest.mark.parametrize("literal", abelian_groups(32))
def test_flags_agree_with_verification_on_every_group_up_to_32(literal, rng):
    group = parse_group(literal)
    for H in all_subgroups(group):
        if H.order < 2 or group.order // H.order > 8:
            continue
        for subset in _constant_card_subsets(cosets(H), rng):
            result = build(HarmonicSpec(group=group, subgroup=H, subset=subset))
            assert result.combinatorial_flags.constant_card
            assert result.combinatorial_flags.is_df == result.report.is_equichordal, (literal, H.literal(), subset)
            assert result.combinatorial_flags.is_ds_each == result.report.is_equiisoclinic
            assert result.params == ParamTriple.of(len(subset), H.order, group.order // H.order)
