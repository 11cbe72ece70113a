import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sklearn.metrics import cohen_kappa_score

from informatics_game.exceptions import InvalidParameterError, UndefinedKappaError, UnknownTopicError
from informatics_game.trends import (
    DEFAULT_SCHEME,
    CodedAd,
    CoderTable,
    ads_per_issue,
    cohens_kappa,
    read_coded_ads,
    read_coder_table,
    read_scheme,
    trend_matrix,
)


def ad(year, ad_id, *topics, issue=None):
    return CodedAd(year, issue or f"{year}-01", ad_id, frozenset(topics))


def test_default_scheme_has_27_categories():
    assert len(DEFAULT_SCHEME) == 27 == len(set(DEFAULT_SCHEME))
    assert DEFAULT_SCHEME[-1] == "other"


class TestTrendMatrix:
    def test_single_ad(self):
        tm = trend_matrix([ad(2000, "a", "tcs")])
        assert tm.years == (2000,)
        assert tm.proportion("tcs", 2000) == 1.0
        assert tm.proportions.sum() == 1.0

    def test_two_ads_hand_count(self):
        tm = trend_matrix([ad(1999, "a1", "tcs", "security"), ad(1999, "a2", "security")])
        assert tm.yearly_totals == (3,)
        assert tm.proportion("security", 1999) == pytest.approx(2 / 3, abs=1e-15)
        assert tm.proportion("tcs", 1999) == pytest.approx(1 / 3, abs=1e-15)

    def test_identical_years_identical_columns(self):
        ads = [ad(y, f"{y}{k}", *t) for y in (2001, 2002) for k, t in enumerate([("hci", "web"), ("web",), ("games",)])]
        tm = trend_matrix(ads)
        np.testing.assert_array_equal(tm.proportions[:, 0], tm.proportions[:, 1])

    def test_duplicate_codes_collapse(self):
        a = CodedAd(2000, "i", "x", ("tcs", "tcs", " security "))
        assert a.topics == {"tcs", "security"}
        assert trend_matrix([a]).yearly_totals == (2,)

    def test_unknown_code(self):
        with pytest.raises(UnknownTopicError) as info:
            trend_matrix([ad(2000, "bad-ad", "quantum")])
        assert info.value.code == "quantum" and info.value.ad_id == "bad-ad"

    def test_other_always_accepted(self):
        tm = trend_matrix([ad(2000, "a", "x", "other")], scheme=["x"])
        assert tm.categories == ("x", "other")
        assert tm.proportion("other", 2000) == 0.5

    def test_empty_requested_year_omitted_with_warning(self):
        tm = trend_matrix([ad(2000, "a", "tcs")], years=[1999, 2000])
        assert tm.years == (2000,)
        assert len(tm.warnings) == 1 and "1999" in tm.warnings[0]

    def test_empty_topics_rejected(self):
        with pytest.raises(InvalidParameterError):
            CodedAd(2000, "i", "a", frozenset())

    @given(st.lists(st.tuples(st.integers(1992, 1995), st.sets(st.sampled_from(DEFAULT_SCHEME), min_size=1, max_size=4)),
                    min_size=1, max_size=40), st.randoms())
    def test_columns_sum_to_one_and_order_invariant(self, rows, rnd):
        ads = [CodedAd(y, "i", str(k), frozenset(t)) for k, (y, t) in enumerate(rows)]
        tm = trend_matrix(ads)
        np.testing.assert_allclose(tm.proportions.sum(axis=0), 1.0, atol=1e-9)
        assert np.all((tm.proportions >= 0) & (tm.proportions <= 1))
        shuffled = list(ads)
        rnd.shuffle(shuffled)
        np.testing.assert_array_equal(trend_matrix(shuffled).proportions, tm.proportions)

    def test_long_and_series_csv(self, tmp_path):
        tm = trend_matrix([ad(2000, "a", "tcs", "hci"), ad(2001, "b", "hci")], scheme=["tcs", "hci"])
        tm.to_long_csv(tmp_path / "long.csv")
        assert (tmp_path / "long.csv").read_text().splitlines() == [
            "category,year,proportion",
            "tcs,2000,0.5", "tcs,2001,0",
            "hci,2000,0.5", "hci,2001,1",
        ]
        paths = tm.to_series_csvs(tmp_path / "series")
        assert [p.rsplit("/", 1)[-1] for p in paths] == ["tcs.csv", "hci.csv"]
        assert (tmp_path / "series" / "hci.csv").read_text() == "year,proportion\n2000,0.5\n2001,1\n"


class TestAdsPerIssue:
    def test_empty(self):
        assert ads_per_issue([]) == []

    def test_counts(self):
        ads = [ad(2000, "a", "tcs", issue="2000-01"), ad(2000, "b", "tcs", issue="2000-01"),
               ad(2000, "c", "tcs", issue="2000-11")]
        assert ads_per_issue(ads) == [("2000-01", 2), ("2000-11", 1)]

    def test_calendar_zero_fill(self):
        ads = [ad(2000, "a", "tcs", issue="2000-11")]
        assert ads_per_issue(ads, ["2000-01", "2000-03", "2000-11"]) == [
            ("2000-01", 0), ("2000-03", 0), ("2000-11", 1)]

    def test_seasonal_peaks(self):
        # synthetic corpus: January and November issues carry the most ads
        sizes = {"01": 30, "03": 8, "05": 6, "09": 10, "11": 25}
        ads = [ad(y, f"{y}-{m}-{k}", "tcs", issue=f"{y}-{m}")
               for y in (2005, 2006) for m, n in sizes.items() for k in range(n)]
        series = ads_per_issue(ads)
        assert [c for _, c in series] == list(sizes.values()) * 2
        top = sorted(series, key=lambda s: -s[1])[:4]
        assert {issue[-2:] for issue, _ in top} == {"01", "11"}


def forty_item_table():
    c1 = ["A"] * 20 + ["B"] * 20
    c2 = ["A"] * 18 + ["B"] * 2 + ["B"] * 18 + ["A"] * 2
    return CoderTable.from_codes(c1, c2)


class TestKappa:
    def test_perfect_agreement(self):
        r = cohens_kappa(CoderTable.from_codes(list("ABAB"), list("ABAB")))
        assert r.kappa == 1.0 and r.p_o == 1.0

    def test_chance_agreement(self):
        r = cohens_kappa(CoderTable.from_codes(list("AABB"), list("ABAB")))
        assert r.p_o == r.p_e == 0.5
        assert abs(r.kappa) < 1e-12

    def test_forty_items(self):
        r = cohens_kappa(forty_item_table())
        assert r.n_items == 40
        assert abs(r.p_o - 0.9) < 1e-12 and abs(r.p_e - 0.5) < 1e-12
        assert abs(r.kappa - 0.8) < 1e-12

    def test_undefined(self):
        with pytest.raises(UndefinedKappaError):
            cohens_kappa(CoderTable.from_codes(["A"] * 5, ["A"] * 5))

    def test_needs_two_items(self):
        with pytest.raises(InvalidParameterError):
            CoderTable((("1", "A", "A"),))

    @given(st.lists(st.tuples(st.sampled_from("ABCD"), st.sampled_from("ABCD")), min_size=2, max_size=60))
    def test_matches_sklearn_and_relabel_invariant(self, pairs):
        c1, c2 = zip(*pairs)
        if len(set(c1)) == 1 and set(c1) == set(c2):
            return
        r = cohens_kappa(CoderTable.from_codes(c1, c2))
        ref = cohen_kappa_score(c1, c2)
        if np.isfinite(ref):
            assert r.kappa == pytest.approx(ref, abs=1e-12)
        assert r.kappa <= 1.0
        assert (r.kappa == 1.0) == (r.p_o == 1.0)
        perm = dict(zip("ABCD", random.Random(len(pairs)).sample("WXYZ", 4)))
        relabeled = cohens_kappa(CoderTable.from_codes([perm[c] for c in c1], [perm[c] for c in c2]))
        assert relabeled.kappa == pytest.approx(r.kappa, abs=1e-15)


class TestReaders:
    def test_coded_ads_csv(self, tmp_path):
        p = tmp_path / "ads.csv"
        p.write_text("year,issue,ad_id,topics\n2000,2000-01,a1,tcs;security\n\n2001,2001-11,a2,hci\n", encoding="utf-8")
        ads = read_coded_ads(p)
        assert [a.ad_id for a in ads] == ["a1", "a2"]
        assert ads[0].topics == {"tcs", "security"}

    def test_coded_ads_missing_column(self, tmp_path):
        p = tmp_path / "ads.csv"
        p.write_text("year,ad_id,topics\n2000,a,tcs\n")
        with pytest.raises(InvalidParameterError):
            read_coded_ads(p)

    def test_coder_table_csv(self, tmp_path):
        p = tmp_path / "c.csv"
        p.write_text("item_id,coder1,coder2\n1,A,A\n2,B,A\n3,B,B\n")
        table = read_coder_table(p)
        assert table.items == (("1", "A", "A"), ("2", "B", "A"), ("3", "B", "B"))

    def test_scheme_file(self, tmp_path):
        p = tmp_path / "s.txt"
        p.write_text("tcs\n# comment\n\nhci  # trailing\n")
        assert read_scheme(p) == ["tcs", "hci"]
