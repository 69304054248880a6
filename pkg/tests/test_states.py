"""Conflict-color computation, checked against the table oracle."""

from __future__ import annotations

import itertools

import pytest

from confreview.errors import AuthorizationError
from confreview.model import Classification, KnowledgeLevel, Review, ReviewState
from confreview.states import classification_span, paper_state

from .oracles import state_oracle

A = Classification.CHAMPION
B = Classification.ACCEPT
C = Classification.REJECT
D = Classification.DETRACTOR


def _review(reviewer, classification):
    return Review(
        paper_id=1,
        reviewer_id=reviewer,
        classification=classification,
        expertise=KnowledgeLevel.KNOWLEDGEABLE,
    )


class TestSpan:
    def test_extreme_disagreement(self):
        assert classification_span([A, D]) == (A, D)

    def test_singleton(self):
        assert classification_span([B]) == (B, B)

    def test_mixed(self):
        assert classification_span([A, B, C]) == (A, C)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            classification_span([])


class TestPaperState:
    def test_accepted_is_gold_regardless(self):
        reviews = [_review("r1", A), _review("r2", D)]
        assert paper_state(reviews, accepted=True) is ReviewState.GOLD
        assert paper_state(reviews, viewer="r1", accepted=True) is ReviewState.GOLD

    def test_unsubmitted_viewer_sees_white(self):
        reviews = [_review("r2", B)]
        assert paper_state(reviews, viewer="r1") is ReviewState.WHITE
        assert paper_state([], viewer="r1") is ReviewState.WHITE

    def test_sole_submitter_sees_pink(self):
        reviews = [_review("r1", D)]
        assert paper_state(reviews, viewer="r1") is ReviewState.PINK

    def test_no_viewer_b_and_d_is_yellow(self):
        reviews = [_review("r1", B), _review("r2", D)]
        assert paper_state(reviews) is ReviewState.YELLOW

    def test_no_viewer_b_and_c_is_orange(self):
        reviews = [_review("r1", B), _review("r2", C)]
        assert paper_state(reviews) is ReviewState.ORANGE

    def test_no_reviews_no_viewer_is_grey(self):
        assert paper_state([]) is ReviewState.GREY

    def test_viewer_must_be_assigned(self):
        with pytest.raises(AuthorizationError, match="not a reviewer"):
            paper_state([], viewer="r9", assigned=("r1", "r2"))


def _multisets(max_size):
    for size in range(1, max_size + 1):
        yield from itertools.combinations_with_replacement([A, B, C, D], size)


class TestExhaustiveAgainstOracle:
    """Every multiset x viewer context x accepted flag matches the oracle.
    The full-size sweep also runs as acceptance criterion 1."""

    def test_all_cases(self):
        checked = 0
        for multiset in _multisets(5):
            letters = [c.value for c in multiset]
            for accepted in (False, True):
                # chair view: no viewer
                reviews = [_review(f"r{i}", c) for i, c in enumerate(multiset, 1)]
                got = paper_state(reviews, accepted=accepted)
                expect = state_oracle(
                    letters,
                    has_viewer=False,
                    viewer_submitted=False,
                    viewer_sole=False,
                    accepted=accepted,
                )
                assert got.value == expect
                checked += 1

                # viewer assigned, others' reviews are the multiset
                others = [_review(f"r{i}", c) for i, c in enumerate(multiset, 2)]
                got = paper_state(others, viewer="r1", accepted=accepted)
                expect = state_oracle(
                    letters,
                    has_viewer=True,
                    viewer_submitted=False,
                    viewer_sole=False,
                    accepted=accepted,
                )
                assert got.value == expect
                checked += 1

                # viewer submitted one of the multiset's reviews
                own_and_others = [
                    _review(f"r{i}", c) for i, c in enumerate(multiset, 1)
                ]
                got = paper_state(own_and_others, viewer="r1", accepted=accepted)
                expect = state_oracle(
                    letters,
                    has_viewer=True,
                    viewer_submitted=True,
                    viewer_sole=len(multiset) == 1,
                    accepted=accepted,
                )
                assert got.value == expect
                checked += 1
        assert checked == 125 * 2 * 3


class TestSpanMonotoneUnderInsertion:
    def test_high_only_improves_low_only_worsens(self):
        for multiset in _multisets(4):
            high, low = classification_span(multiset)
            for extra in (A, B, C, D):
                high2, low2 = classification_span(list(multiset) + [extra])
                assert high2.merit >= high.merit
                assert low2.merit <= low.merit

    def test_red_absorbing_until_acceptance(self):
        for multiset in _multisets(4):
            reviews = [_review(f"r{i}", c) for i, c in enumerate(multiset, 1)]
            if paper_state(reviews) is not ReviewState.RED:
                continue
            for extra in (A, B, C, D):
                more = reviews + [_review("rx", extra)]
                assert paper_state(more) is ReviewState.RED
                assert paper_state(more, accepted=True) is ReviewState.GOLD
