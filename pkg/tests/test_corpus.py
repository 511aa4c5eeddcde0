import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from textlab.corpus import (
    TEST,
    TRAIN,
    corpus_to_csv,
    corpus_to_json,
    ingest_csv,
    ingest_json,
    make_split,
    preprocess,
    round_half_down,
    tokenize,
)
from textlab.errors import (
    CategoryTooSmall,
    EmptyCorpus,
    InvalidFraction,
    MalformedCsv,
    MalformedJson,
    MissingCategory,
    MissingTextColumn,
)


class TestPreprocess:
    def test_mention_hashtag_link_sentinels(self):
        assert preprocess("Win this @JoeBiden #Vote https://t.co/ab1") == \
            "Win this @mention #hashtag http://link"

    def test_empty(self):
        assert preprocess("") == ""

    def test_no_pattern_passthrough(self):
        assert preprocess("We need a leader") == "We need a leader"

    def test_url_with_fragment_not_mangled_by_hashtag_rule(self):
        # URL replacement runs first
        assert preprocess("see https://x.org/page#anchor now") == "see http://link now"

    def test_http_and_https(self):
        assert preprocess("http://a.b c") == "http://link c"
        assert preprocess("https://a.b c") == "http://link c"

    def test_token_anchoring(self):
        # an email address is not a mention
        assert preprocess("mail me@example.com") == "mail me@example.com"
        assert preprocess("price #1 @x") == "price #hashtag @mention"

    def test_bare_sigils_untouched(self):
        assert preprocess("@ # @@x") == "@ # @@x"

    def test_whole_token_replaced_including_trailing_punctuation(self):
        assert preprocess("thanks @JoeBiden, really") == "thanks @mention really"

    @given(st.text(max_size=200))
    def test_idempotent(self, text):
        once = preprocess(text)
        assert preprocess(once) == once


class TestTokenize:
    def test_lowercase_and_punctuation_strip(self):
        assert tokenize("We need a leader!") == ["we", "need", "a", "leader"]

    def test_sentinels_preserved(self):
        assert tokenize("Let's win this together! http://link") == \
            ["let's", "win", "this", "together", "http://link"]

    def test_punctuation_only_input(self):
        assert tokenize("  ...  ") == []

    def test_sentinels_case_folded(self):
        assert tokenize("@MENTION #HashTag") == ["@mention", "#hashtag"]

    def test_internal_apostrophe_and_hyphen_kept(self):
        assert tokenize("don't re-elect 'em") == ["don't", "re-elect", "em"]

    @given(st.text(max_size=200))
    def test_no_uppercase_or_whitespace_in_tokens(self, text):
        for token in tokenize(preprocess(text)):
            assert token == token.lower()
            assert not any(ch.isspace() for ch in token)
            assert token

    @given(st.text(max_size=200))
    def test_retokenization_idempotent(self, text):
        tokens = tokenize(preprocess(text))
        assert tokenize(" ".join(tokens)) == tokens


class TestIngestCsv:
    def test_minimal(self):
        corpus = ingest_csv(b"text,category\nhello,A\nworld,B")
        assert len(corpus.documents) == 2
        assert corpus.categories == ["A", "B"]
        assert [d.id for d in corpus.documents] == [0, 1]

    def test_default_category(self):
        corpus = ingest_csv(b"text\nhello", default_category="A")
        assert len(corpus.documents) == 1
        assert corpus.documents[0].category == "A"

    def test_missing_text_column(self):
        with pytest.raises(MissingTextColumn):
            ingest_csv(b"body\nhello")

    def test_no_category_and_no_default(self):
        with pytest.raises(MissingCategory):
            ingest_csv(b"text\nhello")

    def test_blank_category_cell_uses_default(self):
        corpus = ingest_csv(b"text,category\na,\nb,B", default_category="Z")
        assert [d.category for d in corpus.documents] == ["Z", "B"]

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            ingest_csv(b"text,category\n")

    def test_not_utf8(self):
        with pytest.raises(MalformedCsv):
            ingest_csv(b"text\n\xff\xfe")

    def test_rfc4180_quoting(self):
        corpus = ingest_csv(b'text,category\n"a, b ""c""",X\n', default_category=None)
        assert corpus.documents[0].raw_text == 'a, b "c"'

    def test_preprocessing_applied(self):
        corpus = ingest_csv(b"text,category\nhi @you,A\nx,B")
        assert corpus.documents[0].clean_text == "hi @mention"
        assert corpus.documents[0].tokens == ["hi", "@mention"]


class TestIngestJson:
    def test_minimal(self):
        corpus = ingest_json(b'[{"text":"a","category":"X"}]')
        assert len(corpus.documents) == 1
        assert corpus.categories == ["X"]

    def test_empty_array(self):
        with pytest.raises(EmptyCorpus):
            ingest_json(b"[]")

    def test_default_category(self):
        corpus = ingest_json(b'[{"text":"a"},{"text":"b"}]', default_category="Y")
        assert [d.category for d in corpus.documents] == ["Y", "Y"]

    def test_malformed(self):
        with pytest.raises(MalformedJson):
            ingest_json(b"{not json")
        with pytest.raises(MalformedJson):
            ingest_json(b'{"text":"a"}')
        with pytest.raises(MalformedJson):
            ingest_json(b'[{"text":5}]')

    def test_missing_text_field(self):
        with pytest.raises(MissingTextColumn):
            ingest_json(b'[{"body":"a"}]')


class TestRoundTrip:
    def test_csv_round_trip(self):
        original = ingest_csv(b'text,category\n"hello, there",A\n@user rocks!,B\n')
        again = ingest_csv(corpus_to_csv(original))
        assert [d.raw_text for d in again.documents] == \
            [d.raw_text for d in original.documents]
        assert [d.category for d in again.documents] == \
            [d.category for d in original.documents]

    def test_json_round_trip(self):
        original = ingest_json(b'[{"text":"a #tag","category":"X"},{"text":"b","category":"Y"}]')
        again = ingest_json(corpus_to_json(original))
        assert [d.raw_text for d in again.documents] == [d.raw_text for d in original.documents]
        assert again.categories == original.categories


def corpus_with(counts: dict[str, int]):
    rows = ["text,category"]
    i = 0
    for category, n in counts.items():
        for _ in range(n):
            rows.append(f"doc{i},{category}")
            i += 1
    return ingest_csv(("\n".join(rows)).encode())


class TestRoundHalfDown:
    @pytest.mark.parametrize("x,expected", [
        (Fraction(5, 2), 2),     # tie resolved downward
        (Fraction(12, 5), 2),    # 2.4
        (Fraction(13, 5), 3),    # 2.6
        (Fraction(8, 1), 8),
        (Fraction(1, 2), 0),
    ])
    def test_values(self, x, expected):
        assert round_half_down(x) == expected


class TestMakeSplit:
    def test_stratified_counts(self):
        corpus = corpus_with({"A": 10, "B": 10})
        split = make_split(corpus, 0.8, seed=7)
        for category in "AB":
            ids = [d.id for d in corpus.documents if d.category == category]
            train = sum(1 for i in ids if split.assignment[i] == TRAIN)
            test = sum(1 for i in ids if split.assignment[i] == TEST)
            assert (train, test) == (8, 2)

    def test_deterministic(self):
        corpus = corpus_with({"A": 10, "B": 10})
        assert make_split(corpus, 0.8, seed=7).assignment == \
            make_split(corpus, 0.8, seed=7).assignment

    def test_category_too_small(self):
        corpus = corpus_with({"A": 1, "B": 5})
        with pytest.raises(CategoryTooSmall):
            make_split(corpus, 0.8, seed=1)

    @pytest.mark.parametrize("fraction", [0, 1, 1.5, -0.1])
    def test_invalid_fraction(self, fraction):
        corpus = corpus_with({"A": 5, "B": 5})
        with pytest.raises(InvalidFraction):
            make_split(corpus, fraction, seed=1)

    def test_partition_covers_exactly(self):
        corpus = corpus_with({"A": 7, "B": 4, "C": 9})
        split = make_split(corpus, 0.6, seed=3)
        assert set(split.assignment) == {d.id for d in corpus.documents}
        assert set(split.assignment.values()) <= {TRAIN, TEST}

    def test_tie_rounds_down(self):
        # 5 docs at 0.5 -> 2.5 -> 2 TRAIN, 3 TEST
        corpus = corpus_with({"A": 5, "B": 5})
        split = make_split(corpus, 0.5, seed=11)
        for category in "AB":
            ids = [d.id for d in corpus.documents if d.category == category]
            assert sum(1 for i in ids if split.assignment[i] == TRAIN) == 2

    def test_both_sides_nonempty_even_at_extremes(self):
        corpus = corpus_with({"A": 2, "B": 2})
        for fraction in (0.9, 0.1):
            split = make_split(corpus, fraction, seed=5)
            for category in "AB":
                ids = [d.id for d in corpus.documents if d.category == category]
                parts = {split.assignment[i] for i in ids}
                assert parts == {TRAIN, TEST}

    def test_stratification_formula_random_sizes(self):
        rng = random.Random(0)
        for _ in range(25):
            sizes = {c: rng.randint(2, 30) for c in ("A", "B", "C")}
            num, den = rng.randint(1, 9), 10
            corpus = corpus_with(sizes)
            split = make_split(corpus, Fraction(num, den), seed=rng.randint(0, 999))
            for category, n in sizes.items():
                ids = [d.id for d in corpus.documents if d.category == category]
                train = sum(1 for i in ids if split.assignment[i] == TRAIN)
                expected = min(max(round_half_down(Fraction(num, den) * n), 1), n - 1)
                assert train == expected
