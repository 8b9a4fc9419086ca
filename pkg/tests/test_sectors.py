import pytest

from specbound.sectors import (
    SectorError,
    SymmetrySector,
    all_sectors,
    canonical_sectors,
    sector_count,
)


def test_sector_count_examples():
    assert sector_count(2) == 6
    assert sector_count(0) == 1
    assert sector_count(10) == 66


@pytest.mark.parametrize("n", range(0, 21))
def test_sector_count_matches_enumeration(n):
    canon = canonical_sectors(n)
    assert len(canon) == sector_count(n)
    explicit = {(a, b) for a in range(n + 1) for b in range(n + 1) if a >= b}
    assert {(s.n_alpha, s.n_beta) for s in canon} == explicit


def test_canonical_sectors_sorted_lexicographically():
    canon = canonical_sectors(4)
    assert canon == sorted(canon)
    assert all(s.n_alpha >= s.n_beta for s in canon)


def test_full_grid_contains_mirrors():
    grid = all_sectors(3)
    assert len(grid) == 16
    assert SymmetrySector(1, 2) in grid


def test_spin_relation():
    assert SymmetrySector(3, 1).spin == 1.0
    assert SymmetrySector(3, 1).s_squared() == 2.0
    assert SymmetrySector(2, 2).s_squared() == 0.0
    assert SymmetrySector(1, 3).spin == 1.0


def test_mirror_and_canonical():
    s = SymmetrySector(1, 3)
    assert s.mirror() == SymmetrySector(3, 1)
    assert s.canonical() == SymmetrySector(3, 1)
    assert SymmetrySector(3, 1).canonical() == SymmetrySector(3, 1)


def test_validate_rejects_out_of_range():
    with pytest.raises(SectorError):
        SymmetrySector(4, 0).validate(3)
    with pytest.raises(SectorError):
        SymmetrySector(-1, 0).validate(3)
    assert SymmetrySector(3, 3).validate(3) == SymmetrySector(3, 3)


def test_label_round_trip():
    s = SymmetrySector(5, 2)
    assert SymmetrySector.from_label(s.label()) == s
    assert SymmetrySector.from_label("(2, 1)") == SymmetrySector(2, 1)
    with pytest.raises(SectorError):
        SymmetrySector.from_label("nonsense")
