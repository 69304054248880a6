"""Conflict-detection coloring of papers.

The color of a paper is derived from the span (best, worst) of the
classifications submitted so far, overridden by acceptance and by the
viewing reviewer's own submission status. Pure functions throughout.
"""

from __future__ import annotations

from typing import Collection, Iterable, Optional

from .errors import AuthorizationError
from .model import Classification, Review, ReviewState

__all__ = ["classification_span", "paper_state", "SPAN_COLORS"]

A = Classification.CHAMPION
B = Classification.ACCEPT
C = Classification.REJECT
D = Classification.DETRACTOR

# Span -> color. Homogeneous accept-side spans fold into LIGHT_GREEN and
# reject-side ones into GREEN; (B,B) counts as accept-side since B still
# means "can accept".
SPAN_COLORS: dict[tuple[Classification, Classification], ReviewState] = {
    (A, A): ReviewState.LIGHT_GREEN,
    (A, B): ReviewState.LIGHT_GREEN,
    (B, B): ReviewState.LIGHT_GREEN,
    (B, C): ReviewState.ORANGE,
    (C, C): ReviewState.GREEN,
    (C, D): ReviewState.GREEN,
    (D, D): ReviewState.GREEN,
    (A, C): ReviewState.LIGHT_YELLOW,
    (B, D): ReviewState.YELLOW,
    (A, D): ReviewState.RED,
}


def classification_span(
    classifications: Iterable[Classification],
) -> tuple[Classification, Classification]:
    """Return (best, worst) of a non-empty classification multiset."""
    items = list(classifications)
    if not items:
        raise ValueError("classification_span of empty set")
    high = max(items, key=lambda c: c.merit)
    low = min(items, key=lambda c: c.merit)
    return high, low


def paper_state(
    reviews: Collection[Review],
    viewer: Optional[str] = None,
    *,
    accepted: bool = False,
    assigned: Optional[Collection[str]] = None,
) -> ReviewState:
    """Color of one paper, optionally from a specific reviewer's seat.

    Precedence: accepted papers are GOLD for everyone; a viewing reviewer
    who has not submitted sees WHITE; one who is the only submitter sees
    PINK; a paper with no reviews and no viewer is GREY (chair view);
    everything else is the span color.

    ``assigned``, when given, is the paper's reviewer list; a viewer not
    on it is rejected.
    """
    if viewer is not None and assigned is not None and viewer not in assigned:
        raise AuthorizationError("reviewer-assigned-only", "not a reviewer of this paper")

    if accepted:
        return ReviewState.GOLD

    by_reviewer = {r.reviewer_id for r in reviews}
    if viewer is not None:
        if viewer not in by_reviewer:
            return ReviewState.WHITE
        if by_reviewer == {viewer}:
            return ReviewState.PINK
    elif not reviews:
        return ReviewState.GREY

    span = classification_span(r.classification for r in reviews)
    return SPAN_COLORS[span]
