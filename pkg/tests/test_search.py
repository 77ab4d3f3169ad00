import pytest

from mers.axioms import check_axioms_symbolic
from mers.catalog import catalog, is_reduced
from mers.isomorphy import IsoGroupSpec, _space
from mers.quotient import is_quotient_non_reduced, quotient
from mers.search import (
    SearchConfig,
    SearchLimitError,
    candidate_counts,
    enumerate_class_candidates,
    match_report,
    search,
    summary_rows,
)

EXPECTED = {
    (1, "non-reduced-R"): 27,
    (1, "reduced-R-non-reduced-quotient"): 5,
    (2, "non-reduced-R"): 35,
    (2, "reduced-R-non-reduced-quotient"): 6,
    (3, "non-reduced-R"): 34,
    (3, "reduced-R-non-reduced-quotient"): 6,
}


@pytest.mark.parametrize("guided", [False, True])
@pytest.mark.parametrize("rank,flt", sorted(EXPECTED))
def test_search_reproduces_catalog(rank, flt, guided):
    cfg = SearchConfig(rank, filter=flt, guided=guided)
    found = search(cfg)
    assert len(found) == EXPECTED[rank, flt]
    which = "non-reduced" if flt == "non-reduced-R" else "reduced"
    report = match_report(found, catalog(rank, which), cfg.iso_group)
    assert report.bijection, report.to_json()
    assert all(fc.catalog_names for fc in found)


def test_found_systems_are_valid():
    for fc in search(SearchConfig(2, filter="all")):
        R = fc.system
        assert check_axioms_symbolic(R).ok
        if fc.catalog_names:
            assert not is_reduced(R) or is_quotient_non_reduced(quotient(R))


def test_all_filter_is_union():
    everything = search(SearchConfig(2, filter="all"))
    keys = {fc.key for fc in everything}
    for flt in ("non-reduced-R", "reduced-R-non-reduced-quotient"):
        assert {fc.key for fc in search(SearchConfig(2, filter=flt))} <= keys


def test_candidate_counts():
    assert candidate_counts(SearchConfig(2)) == {"short": 59, "middle": 59, "long": 59}
    assert candidate_counts(SearchConfig(3))["middle"] == 15
    assert enumerate_class_candidates(1, "middle", SearchConfig(1)) == [0]


def test_candidates_are_symmetric():
    sp = _space(4)
    for mask in enumerate_class_candidates(2, "short", SearchConfig(2)):
        T = sp.from_mask(mask)
        assert -T == T


def test_modulus_eight_is_guarded():
    with pytest.raises(SearchLimitError):
        search(SearchConfig(2, modulus=8))


def test_workers_give_identical_output():
    one = search(SearchConfig(2))
    two = search(SearchConfig(2, workers=2))
    assert [fc.key for fc in one] == [fc.key for fc in two]
    assert [fc.name for fc in one] == [fc.name for fc in two]


def test_unmarked_search():
    found = search(SearchConfig(2, group="unmarked"))
    assert len(found) == 21


def test_bad_config():
    with pytest.raises(ValueError):
        SearchConfig(2, filter="nope")
    with pytest.raises(ValueError):
        SearchConfig(0)
    with pytest.raises(ValueError):
        SearchConfig(2, modulus=3)


def test_summary_rows_use_catalog_names():
    rows = summary_rows(search(SearchConfig(1, filter="reduced-R-non-reduced-quotient")))
    assert {r["name"] for r in rows} == {R.name for R in catalog(1, "reduced")}
    assert all(r["reduced"] for r in rows)


def test_match_report_detects_gaps():
    cfg = SearchConfig(2)
    found = search(cfg)
    report = match_report(found[1:], catalog(2, "non-reduced"), IsoGroupSpec())
    assert not report.bijection and report.missing and not report.extra
    report = match_report(found, catalog(2, "non-reduced")[1:], IsoGroupSpec())
    assert report.extra
