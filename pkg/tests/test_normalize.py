import json

import pytest
from hypothesis import given, strategies as st

from biblionet.normalize import (
    ExtractionMode,
    NormalizationRules,
    YearMonth,
    canonicalize_country,
    extract_countries,
    extract_institutions,
    normalize_date,
    split_authors,
    split_list_field,
)

UNIQUE = ExtractionMode.UNIQUE
MULTISET = ExtractionMode.MULTISET


class TestYearMonth:
    def test_ordering_is_lexicographic(self):
        assert YearMonth(2020, 3) < YearMonth(2020, 9) < YearMonth(2021, 1)

    def test_str_format(self):
        assert str(YearMonth(2020, 9)) == "2020-09"

    @pytest.mark.parametrize("year,month", [(1899, 5), (2020, 0), (2020, 13)])
    def test_invalid_values_rejected(self, year, month):
        with pytest.raises(ValueError):
            YearMonth(year, month)


class TestNormalizeDate:
    @pytest.mark.parametrize("raw", ["SEP 10", "Sep", "SEPTEMBER 10", "September", "SEPT", "SEP."])
    def test_september_variants(self, raw):
        assert normalize_date(raw, 2020) == YearMonth(2020, 9)

    def test_range_resolves_to_first_month(self):
        assert normalize_date("SEP-DEC", 2020) == YearMonth(2020, 9)
        assert normalize_date("JAN-FEB", 2020) == YearMonth(2020, 1)

    @pytest.mark.parametrize("raw", ["FAL", "WIN", "SUM", "SPR", "FALL"])
    def test_seasons_dropped(self, raw):
        assert normalize_date(raw, 2020) is None

    @pytest.mark.parametrize("raw", ["", None, "10", "???"])
    def test_unparseable_dropped(self, raw):
        assert normalize_date(raw, 2020) is None

    def test_bad_year_dropped(self):
        assert normalize_date("SEP", 0) is None
        assert normalize_date("SEP", 1800) is None

    def test_every_month_resolves_in_any_casing(self):
        months = ["JAN", "FEB", "MAR", "APR", "MAY", "JUN", "JUL", "AUG", "SEP", "OCT", "NOV", "DEC"]
        for number, token in enumerate(months, start=1):
            for variant in (token, token.lower(), token.capitalize(), token + ".", token + " 15"):
                resolved = normalize_date(variant, 2020)
                assert resolved == YearMonth(2020, number), variant

    @given(st.text(max_size=20), st.integers(min_value=1900, max_value=2100))
    def test_month_always_in_range(self, raw, year):
        resolved = normalize_date(raw, year)
        assert resolved is None or 1 <= resolved.month <= 12


class TestCanonicalizeCountry:
    @pytest.mark.parametrize("raw,expected", [
        ("NJ 08540 USA", "USA"),
        ("MA 02115 USA", "USA"),
        ("Wales", "United Kingdom"),
        ("Scotland", "United Kingdom"),
        ("England", "United Kingdom"),
        ("North Ireland", "United Kingdom"),
        ("Peoples R China", "China"),
        ("P. R. China", "China"),
        ("Viet Nam", "Vietnam"),
        ("Vietnam", "Vietnam"),
        ("Hungary", "Hungary"),
        ("  france ", "France"),
    ])
    def test_rules(self, raw, expected):
        assert canonicalize_country(raw) == expected

    def test_empty_raises(self):
        with pytest.raises(ValueError):
            canonicalize_country("   ")

    @given(st.text(min_size=1, max_size=30).filter(lambda s: s.strip()))
    def test_idempotent(self, raw):
        once = canonicalize_country(raw)
        assert canonicalize_country(once) == once


ADDRESS = (
    "[Smith, J.] Harvard Med Sch, Dept Med, Boston, MA 02115 USA; "
    "[Wu, Q.; Li, H.] Wuhan Univ, Dept Virol, Wuhan, Peoples R China; "
    "[Li, H.] Wuhan Univ, Dept Immunol, Wuhan, Peoples R China"
)


class TestExtractInstitutions:
    def test_bracketed_segment(self):
        got = extract_institutions("[Smith, J.] Harvard Med Sch, Dept Med, Boston, MA 02115 USA")
        assert got == ["Harvard Med Sch"]

    def test_modes(self):
        assert extract_institutions(ADDRESS, UNIQUE) == ["Harvard Med Sch", "Wuhan Univ"]
        assert extract_institutions(ADDRESS, MULTISET) == ["Harvard Med Sch", "Wuhan Univ", "Wuhan Univ"]

    def test_unbracketed_segment_uses_first_token(self):
        assert extract_institutions("Univ Oxford, Dept Zool, Oxford, England") == ["Univ Oxford"]

    def test_empty_address(self):
        assert extract_institutions("") == []
        assert extract_institutions(None) == []

    def test_semicolon_inside_brackets_is_not_a_segment_break(self):
        got = extract_institutions("[A, B; C, D] Inst One, Dept, City, France")
        assert got == ["Inst One"]


class TestExtractCountries:
    def test_usa_postal_segment(self):
        assert extract_countries("[Smith, J.] Harvard Med Sch, Dept Med, Boston, MA 02115 USA") == ["USA"]

    def test_uk_merge_unique(self):
        address = "[A] Univ Edinburgh, Edinburgh, Scotland; [B] Univ Oxford, Oxford, England"
        assert extract_countries(address, UNIQUE) == ["United Kingdom"]
        assert extract_countries(address, MULTISET) == ["United Kingdom", "United Kingdom"]

    def test_china_canonical(self):
        assert extract_countries("[W] Wuhan Univ, Wuhan, Peoples R China") == ["China"]

    def test_modes_on_mixed_address(self):
        assert extract_countries(ADDRESS, UNIQUE) == ["USA", "China"]
        assert extract_countries(ADDRESS, MULTISET) == ["USA", "China", "China"]

    def test_empty(self):
        assert extract_countries("") == []

    def test_unique_is_dedup_of_multiset(self):
        for address in [ADDRESS, "", "[A] X, Y, Italy; [B] Z, W, Italy; [C] Q, R, France"]:
            multi = extract_countries(address, MULTISET)
            uniq = extract_countries(address, UNIQUE)
            assert uniq == list(dict.fromkeys(multi))
            assert len(uniq) <= len(multi)


class TestSplitAuthors:
    def test_two_names(self):
        assert split_authors("Lippi, Giuseppe; Henry, Brandon Michael") == [
            "Lippi, Giuseppe", "Henry, Brandon Michael",
        ]

    @pytest.mark.parametrize("raw", ["[anonymous]", "[Anonymous]", "[ANONYMOUS]"])
    def test_anonymous_removed(self, raw):
        assert split_authors(raw) == []

    def test_within_record_dedup(self):
        assert split_authors("A, B; A, B") == ["A, B"]

    def test_mixed(self):
        assert split_authors("X, Y; [anonymous]; X, Y; Z, W") == ["X, Y", "Z, W"]

    def test_empty(self):
        assert split_authors("") == []
        assert split_authors(None) == []


class TestSplitListField:
    def test_plain(self):
        assert split_list_field("Infectious Diseases; Immunology") == ["Infectious Diseases", "Immunology"]

    def test_keywords_lowercased(self):
        assert split_list_field("COVID-19; SARS-CoV-2", lowercase=True) == ["covid-19", "sars-cov-2"]

    def test_empties_dropped(self):
        assert split_list_field("; ;") == []
        assert split_list_field(None) == []


class TestRulesConfig:
    def test_overrides_merge_over_defaults(self, tmp_path):
        path = tmp_path / "rules.json"
        path.write_text(json.dumps({
            "months": {"VEND": 10},
            "seasons": ["MON"],
            "country_exact": {"Holland": "Netherlands"},
        }), encoding="utf-8")
        rules = NormalizationRules.from_file(path)
        assert normalize_date("VEND 5", 2020, rules) == YearMonth(2020, 10)
        assert normalize_date("MON", 2020, rules) is None
        assert normalize_date("SEP", 2020, rules) == YearMonth(2020, 9)
        assert canonicalize_country("holland", rules) == "Netherlands"
        assert canonicalize_country("Scotland", rules) == "United Kingdom"
