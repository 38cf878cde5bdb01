import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wordcamo.textual import (
    Keyword,
    content_word_count,
    default_stopwords,
    extract_keywords,
    keywords_from_tokens,
    round_half_up,
    syllabify,
    target_keyword_count,
    tokenize,
)

VOWELS = set("aeiou")


class TestTokenize:
    def test_empty(self):
        assert tokenize("") == []

    def test_fake_news(self):
        toks = tokenize("fake news")
        assert [(t.text, t.start, t.end, t.is_word) for t in toks] == [
            ("fake", 0, 4, True),
            (" ", 4, 5, False),
            ("news", 5, 9, True),
        ]

    def test_digits_stay_in_token(self):
        toks = tokenize("W0rd cam0uflage")
        assert len(toks) == 3
        assert [t.text for t in toks if t.is_word] == ["W0rd", "cam0uflage"]

    def test_interior_apostrophe(self):
        toks = tokenize("don't stop")
        assert toks[0].text == "don't" and toks[0].is_word

    def test_byte_offsets_multibyte(self):
        text = "café news"
        toks = tokenize(text)
        data = text.encode("utf-8")
        for tok in toks:
            assert data[tok.start : tok.end].decode("utf-8") == tok.text

    def test_lone_surrogate_rejected(self):
        with pytest.raises(ValueError, match="byte offset"):
            tokenize("bad \ud800 char")

    @given(st.text(max_size=200))
    @settings(max_examples=300)
    def test_roundtrip(self, text):
        try:
            toks = tokenize(text)
        except ValueError:
            return  # unencodable surrogates
        assert "".join(t.text for t in toks) == text
        # tokens are ordered, non-overlapping, and tile the byte range
        pos = 0
        for tok in toks:
            assert tok.start == pos < tok.end
            pos = tok.end
        assert pos == len(text.encode("utf-8"))


def rake_oracle(text, stopwords):
    """Independent phrase/degree/frequency scorer used to pin expected values."""
    import re

    words = []
    for m in re.finditer(r"[^\W_]+(?:['’][^\W_]+)*", text):
        words.append((m.start(), m.group()))
    # split into phrases on stopwords/short words; any punctuation between
    # words also splits, so reconstruct gaps:
    phrases, current, last_end = [], [], None
    for start, w in words:
        gap = text[last_end:start] if last_end is not None else ""
        boundary = last_end is not None and gap.strip() != ""
        ok = len(w) >= 3 and w.lower() not in stopwords
        if boundary and current:
            phrases.append(current)
            current = []
        if ok:
            current.append(w.lower())
        elif current:
            phrases.append(current)
            current = []
        last_end = start + len(w)
    if current:
        phrases.append(current)
    freq, deg = {}, {}
    for ph in phrases:
        for w in ph:
            freq[w] = freq.get(w, 0) + 1
            deg[w] = deg.get(w, 0) + len(ph)
    return {w: deg[w] / freq[w] for w in freq}


class TestKeywords:
    def test_all_stopwords(self):
        assert extract_keywords("the of a", 5) == []

    def test_fake_ranked_first(self):
        text = "fake news spreads fake stories"
        scores = rake_oracle(text, default_stopwords())
        kws = extract_keywords(text, 1)
        toks = tokenize(text)
        top = toks[kws[0].token_index].text
        assert top == "fake"
        assert kws[0].rank == 1
        assert kws[0].score == pytest.approx(scores["fake"])

    def test_oracle_scores_match(self):
        text = "Offensive language spreads quickly, while fake news outruns the truth about fake accounts"
        scores = rake_oracle(text, default_stopwords())
        toks = tokenize(text)
        for kw in extract_keywords(text, 20):
            word = toks[kw.token_index].text.lower()
            assert kw.score == pytest.approx(scores[word])

    def test_cap(self):
        text = " ".join(f"word{i}xyz" for i in range(50))
        assert len(extract_keywords(text, 20)) == 20

    def test_eligibility(self):
        stop = default_stopwords()
        text = "The ox ran; a big storm hit the old harbor at dawn."
        toks = tokenize(text)
        for kw in extract_keywords(text, 20):
            tok = toks[kw.token_index]
            assert tok.is_word
            assert len(tok.text) >= 3
            assert tok.text.lower() not in stop

    def test_ranks_and_ordering(self):
        text = "quasar nebula flyby, gentle harbor story, quasar launch"
        kws = extract_keywords(text, 20)
        assert [k.rank for k in kws] == list(range(1, len(kws) + 1))
        scores = [k.score for k in kws]
        assert scores == sorted(scores, reverse=True)

    def test_determinism(self):
        text = "Every launch window narrows while the booster waits on the pad"
        assert extract_keywords(text, 10) == extract_keywords(text, 10)

    def test_bad_cap(self):
        with pytest.raises(ValueError):
            extract_keywords("anything", 0)


class TestSyllabify:
    def test_methodology(self):
        assert syllabify("Methodology") == ["Me", "tho", "do", "lo", "gy"]

    def test_single_nucleus(self):
        assert syllabify("a") == ["a"]

    def test_rhythm_y_rule(self):
        # y between consonants is the only nucleus, so the word stays whole
        assert syllabify("rhythm") == ["rhythm"]

    def test_no_vowel_word(self):
        assert syllabify("bcd") == ["bcd"]
        assert syllabify("12345") == ["12345"]

    def test_digraph_never_splits(self):
        digraphs = ("th", "sh", "ch", "ph", "wh", "gh")
        for word in ("Methodology", "bishop", "graphic", "awhile", "machine"):
            parts = syllabify(word)
            for left, right in zip(parts, parts[1:]):
                pair = (left[-1] + right[0]).lower()
                assert pair not in digraphs, (word, parts)
        assert "tho" in syllabify("Methodology")

    @given(st.text(alphabet=st.characters(whitelist_categories=("Ll", "Lu")), min_size=1, max_size=24))
    @settings(max_examples=300)
    def test_concat_and_nuclei(self, word):
        parts = syllabify(word)
        assert "".join(parts) == word
        if len(parts) > 1:
            for part in parts:
                lower = part.lower()
                assert any(c in VOWELS or c == "y" for c in lower)


class TestTargetCount:
    def _text_with_content_words(self, n):
        return " ".join(f"quasar{i:02d}" for i in range(n))

    def test_ratio_examples(self):
        assert target_keyword_count(self._text_with_content_words(10), 0.15, 5) == 2
        assert target_keyword_count(self._text_with_content_words(100), 0.65, 20) == 20
        assert target_keyword_count("the of a", 0.15, 5) == 0

    def test_minimum_one(self):
        assert target_keyword_count("quasar of the and", 0.15, 5) == 1

    def test_round_half_up(self):
        assert round_half_up(1.5) == 2
        assert round_half_up(2.5) == 3
        assert round_half_up(0.49) == 0

    @given(
        n=st.integers(min_value=0, max_value=120),
        ratio=st.floats(min_value=0.01, max_value=1.0),
        cap=st.integers(min_value=1, max_value=25),
    )
    @settings(max_examples=200)
    def test_monotone_and_capped(self, n, ratio, cap):
        text = self._text_with_content_words(n)
        value = target_keyword_count(text, ratio, cap)
        assert 0 <= value <= cap
        if n > 0:
            assert value >= 1
            bigger_ratio = min(1.0, ratio + 0.2)
            assert target_keyword_count(text, bigger_ratio, cap) >= value
            assert target_keyword_count(self._text_with_content_words(n + 5), ratio, cap) >= value

    def test_content_word_count(self):
        # "The"/"the" are stopwords, "ox" is under three characters
        toks = tokenize("The quasar ox drifted under the harbor")
        assert content_word_count(toks) == 3  # quasar, drifted, harbor


def test_keywords_from_tokens_matches_extract():
    text = "Gentle harbor story under a sudden launch window"
    toks = tokenize(text)
    assert keywords_from_tokens(toks, 5) == extract_keywords(text, 5)
    assert all(isinstance(k, Keyword) for k in extract_keywords(text, 5))
