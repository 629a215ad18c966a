import pytest

from src.models.designs import (
    BlockDesign,
    complement_df,
    complete_design,
    develop,
    family_lambda,
    is_difference_set,
    partition_by_cosets,
    search_dds,
    search_df,
    verify_bibd,
    verify_dds,
    verify_df,
)
from src.models.errors import ParameterError, SearchCapError
from src.models.groups import AbelianGroup, parse_group, parse_subgroup, parse_subset, trivial_subgroup


def test_df13_is_a_difference_family(df13):
    assert df13.parameters() == (13, 3, 1)
    assert df13.R == 2


def test_non_family_is_rejected(z13):
    blocks = [parse_subset(z13, [0, 1, 2]), parse_subset(z13, [0, 3, 6])]
    assert verify_df(z13, blocks) is None


def test_blocks_must_share_a_size(z13):
    with pytest.raises(ParameterError, match="equal sizes"):
        verify_df(z13, [parse_subset(z13, [0, 1]), parse_subset(z13, [0, 1, 3])])


def test_search_finds_a_df_13_3_1(z13):
    found = search_df(z13, 3, 1, limit=1)
    assert len(found) == 1
    assert verify_df(z13, found[0].blocks) is not None


def test_search_finds_a_df_19_3_1():
    found = search_df(AbelianGroup.cyclic(19), 3, 1, limit=1)
    assert found and found[0].parameters() == (19, 3, 1)
    assert found[0].R == 3


def test_search_is_deterministic(z13):
    first = search_df(z13, 3, 1, limit=2)
    second = search_df(z13, 3, 1, limit=2)
    assert first == second


def test_search_needs_integral_block_count():
    with pytest.raises(ParameterError, match="not an integer"):
        search_df(AbelianGroup.cyclic(12), 3, 1)


def test_search_respects_the_cap():
    with pytest.raises(SearchCapError):
        search_df(AbelianGroup.cyclic(67), 3, 1, cap=64)


def test_complement_family(df13):
    comp = complement_df(df13)
    assert comp is not None
    assert comp.K == 10
    assert comp.lam == 15


@pytest.mark.slow
def test_complement_is_a_duality_on_searched_families():
    checked = 0
    for V in range(5, 21):
        for K in (3, 4):
            for lam in (1, 2):
                if K > V - 2 or (lam * (V - 1)) % (K * (K - 1)):
                    continue
                for df in search_df(AbelianGroup.cyclic(V), K, lam, limit=5):
                    comp = complement_df(df)
                    assert comp is not None
                    assert comp.parameters() == (V, V - K, df.R * (V - 2 * K) + lam)
                    assert comp.R == df.R
                    back = complement_df(comp)
                    assert [set(b) for b in back.blocks] == [set(b) for b in df.blocks]
                    assert back.lam == lam
                    checked += 1
    assert checked >= 5


def test_development_is_a_bibd(df13):
    params = verify_bibd(develop(df13))
    assert (params.V, params.K, params.lam, params.B, params.r) == (13, 3, 1, 26, 6)


def test_complete_design_parameters():
    params = verify_bibd(complete_design(4, 2))
    assert (params.V, params.K, params.lam, params.B, params.r) == (4, 2, 1, 6, 3)


def test_unbalanced_design_is_not_a_bibd():
    assert verify_bibd(BlockDesign(V=4, blocks=[[0, 1], [2, 3]])) is None


def test_fano_plane_difference_set():
    group = AbelianGroup.cyclic(7)
    assert is_difference_set(group, parse_subset(group, [1, 2, 4])) == 1
    assert is_difference_set(group, parse_subset(group, [0, 1, 2])) is None


def test_relative_difference_set_is_semiregular():
    group = AbelianGroup.cyclic(4)
    H = parse_subgroup(group, "Z2")
    dds = verify_dds(group, H, parse_subset(group, [0, 1]))
    assert (dds.lambda1, dds.lambda2) == (0, 1)
    assert dds.semiregular and dds.relative


def test_difference_set_through_trivial_subgroup():
    group = AbelianGroup.cyclic(7)
    dds = verify_dds(group, trivial_subgroup(group), parse_subset(group, [1, 2, 4]))
    assert dds.lambda1 == dds.lambda2 == 1
    assert not dds.relative


def test_search_dds_in_z4():
    group = AbelianGroup.cyclic(4)
    found = search_dds(group, parse_subgroup(group, "Z2"), 2)
    assert [[str(g) for g in d.set] for d in found] == [["0", "1"], ["0", "3"]]


def test_coset_partition_of_the_df13_subset():
    group = parse_group("Z13xZ2")
    H = parse_subgroup(group, "Z13x{0}")
    subset = parse_subset(group, [(1, 0), (3, 0), (9, 0), (2, 1), (6, 1), (5, 1)])
    partition = partition_by_cosets(group, H, subset)
    assert partition.constant_card
    assert partition.sizes() == [3, 3]
    assert family_lambda(group, partition.parts, within=H) == 1
