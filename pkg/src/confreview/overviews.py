"""Monitoring and decision-support views.

Every overview is a pure function of a store snapshot: identical
snapshots render byte-identical output. Each comes in a JSON-ready and
a plain-text form; the service exposes them at stable endpoints and the
maintainer CLI dumps them to files at regular intervals.
"""

from __future__ import annotations

from .errors import LifecycleError
from .model import Classification, KnowledgeLevel, ReviewState
from .registry import StoreState
from .states import paper_state

__all__ = [
    "progress_overview",
    "progress_text",
    "all_reviews_overview",
    "all_reviews_text",
    "states_overview",
    "categories_overview",
    "categories_text",
    "champions_overview",
    "champions_text",
    "low_expertise_overview",
    "low_expertise_text",
    "topic_abstract_overviews",
    "abstracts_text",
    "reviewer_dashboard",
]


def _chair_view_state(state: StoreState, paper_id: int) -> ReviewState:
    return paper_state(
        state.reviews_for_paper(paper_id),
        viewer=None,
        accepted=state.paper_accepted(paper_id),
    )


def progress_overview(state: StoreState) -> list[dict]:
    """Per-reviewer review progress, laggards first. Shared with the whole
    committee, which tends to speed things up."""
    if state.assignment is None:
        raise LifecycleError("no assignment yet")
    rows = []
    for rid in sorted(state.reviewers):
        assigned = len(state.assignment.papers_of(rid))
        submitted = sum(1 for r in state.reviews.values() if r.reviewer_id == rid)
        ratio = 1.0 if assigned == 0 else submitted / assigned
        rows.append(
            {
                "reviewer_id": rid,
                "name": state.reviewers[rid].name,
                "submitted": submitted,
                "assigned": assigned,
                "ratio": ratio,
            }
        )
    rows.sort(key=lambda r: (r["ratio"], r["reviewer_id"]))
    return rows


def progress_text(rows: list[dict]) -> str:
    lines = ["Review progress", ""]
    for r in rows:
        lines.append(f"{r['reviewer_id']:<12} {r['submitted']:>3} of {r['assigned']:>3}")
    return "\n".join(lines) + "\n"


def all_reviews_overview(state: StoreState) -> list[dict]:
    """One row per paper with the chair-view color and one cell per
    assigned reviewer (classification and expertise once submitted)."""
    rows = []
    for pid in sorted(state.papers):
        cells = []
        for rid in state.assigned_reviewers(pid):
            review = state.review_of(pid, rid)
            cells.append(
                {
                    "reviewer_id": rid,
                    "classification": review.classification.value if review else None,
                    "expertise": review.expertise.value if review else None,
                }
            )
        rows.append(
            {
                "paper_id": pid,
                "title": state.papers[pid].title,
                "state": _chair_view_state(state, pid).value,
                "cells": cells,
                "reviews_link": f"/papers/{pid}/reviews",
            }
        )
    return rows


def all_reviews_text(rows: list[dict]) -> str:
    lines = ["All reviews", ""]
    for r in rows:
        cells = " ".join(
            f"{c['reviewer_id']}:{c['classification'] or '-'}{c['expertise'] or '-'}"
            for c in r["cells"]
        )
        lines.append(f"{r['paper_id']:>4}  {r['state']:<11}  {cells}  {r['title']}")
    return "\n".join(lines) + "\n"


def states_overview(state: StoreState) -> list[dict]:
    """Redacted variant for reviewers hunting for conflicted papers to
    volunteer on: colors only, no review contents."""
    return [
        {
            "paper_id": pid,
            "title": state.papers[pid].title,
            "state": _chair_view_state(state, pid).value,
        }
        for pid in sorted(state.papers)
    ]


def categories_overview(state: StoreState) -> list[dict]:
    """Papers grouped by their classification multiset, best groups first.
    The group key spells the submitted classifications sorted best-first
    ("AABD"); papers without reviews fall under "-" at the end."""
    groups: dict[str, list[int]] = {}
    for pid in sorted(state.papers):
        letters = sorted(
            r.classification.value for r in state.reviews_for_paper(pid)
        )
        key = "".join(letters) if letters else "-"
        groups.setdefault(key, []).append(pid)

    ordered = sorted((k for k in groups if k != "-"))
    if "-" in groups:
        ordered.append("-")
    return [
        {
            "key": key,
            "papers": [
                {"paper_id": pid, "title": state.papers[pid].title}
                for pid in groups[key]
            ],
        }
        for key in ordered
    ]


def categories_text(groups: list[dict]) -> str:
    lines = ["Categories", ""]
    for g in groups:
        lines.append(g["key"])
        for p in g["papers"]:
            lines.append(f"  {p['paper_id']:>4}  {p['title']}")
    return "\n".join(lines) + "\n"


def champions_overview(state: StoreState) -> list[dict]:
    """Papers someone is willing to fight for, most champions first."""
    rows = []
    for pid in sorted(state.papers):
        champions = [
            r.reviewer_id
            for r in state.reviews_for_paper(pid)
            if r.classification is Classification.CHAMPION
        ]
        if not champions:
            continue
        rows.append(
            {
                "paper_id": pid,
                "title": state.papers[pid].title,
                "champions": [
                    state.reviewers[rid].name if rid in state.reviewers else rid
                    for rid in sorted(champions)
                ],
            }
        )
    rows.sort(key=lambda r: (-len(r["champions"]), r["paper_id"]))
    return rows


def champions_text(rows: list[dict]) -> str:
    lines = ["Champions", ""]
    for r in rows:
        lines.append(f"{r['paper_id']:>4}  {', '.join(r['champions'])}  {r['title']}")
    return "\n".join(lines) + "\n"


def low_expertise_overview(state: StoreState) -> list[dict]:
    """Papers reviewed so far only by non-experts; the chair may want to
    draft an extra reviewer for these."""
    rows = []
    for pid in sorted(state.papers):
        reviews = state.reviews_for_paper(pid)
        if not reviews:
            continue
        if any(r.expertise is KnowledgeLevel.EXPERT for r in reviews):
            continue
        rows.append(
            {
                "paper_id": pid,
                "title": state.papers[pid].title,
                "expertise": sorted(r.expertise.value for r in reviews),
            }
        )
    return rows


def low_expertise_text(rows: list[dict]) -> str:
    lines = ["Low-expertise papers", ""]
    for r in rows:
        lines.append(f"{r['paper_id']:>4}  [{''.join(r['expertise'])}]  {r['title']}")
    return "\n".join(lines) + "\n"


def topic_abstract_overviews(state: StoreState) -> dict:
    """Per-topic abstract listings for bidding, plus the combined list.
    A paper appears under every topic it declares."""
    per_topic = []
    for tid in sorted(state.topics):
        papers = [
            {
                "paper_id": pid,
                "title": state.papers[pid].title,
                "abstract": state.papers[pid].abstract,
            }
            for pid in sorted(state.papers)
            if tid in state.papers[pid].topics
        ]
        per_topic.append(
            {"topic_id": tid, "topic_name": state.topics[tid].name, "papers": papers}
        )
    all_papers = [
        {
            "paper_id": pid,
            "title": state.papers[pid].title,
            "abstract": state.papers[pid].abstract,
        }
        for pid in sorted(state.papers)
    ]
    return {"topics": per_topic, "all": all_papers}


def abstracts_text(overview: dict) -> str:
    """Printable single document: every topic section plus the full list,
    for reading off-line."""
    lines = ["Submitted abstracts by topic", ""]
    for section in overview["topics"]:
        header = f"Topic {section['topic_id']}: {section['topic_name']}"
        lines.append(header)
        lines.append("=" * len(header))
        if not section["papers"]:
            lines.append("(no papers)")
        for p in section["papers"]:
            lines.append(f"[{p['paper_id']}] {p['title']}")
            lines.append(p["abstract"])
            lines.append("")
        lines.append("")
    lines.append("All abstracts")
    lines.append("=============")
    for p in overview["all"]:
        lines.append(f"[{p['paper_id']}] {p['title']}")
        lines.append(p["abstract"])
        lines.append("")
    return "\n".join(lines) + "\n"


def reviewer_dashboard(state: StoreState, reviewer_id: str) -> dict:
    """The reviewer's home view: every assigned paper with its color as
    seen from this reviewer's seat, plus navigation links."""
    assignment = state.assignment
    papers = []
    if assignment is not None:
        for pid in assignment.papers_of(reviewer_id):
            color = paper_state(
                state.reviews_for_paper(pid),
                viewer=reviewer_id,
                accepted=state.paper_accepted(pid),
                assigned=state.assigned_reviewers(pid),
            )
            own = state.review_of(pid, reviewer_id)
            papers.append(
                {
                    "paper_id": pid,
                    "title": state.papers[pid].title,
                    "abstract": state.papers[pid].abstract,
                    "state": color.value,
                    "own_review_submitted": own is not None,
                    "file_link": f"/papers/{pid}/file",
                    "reviews_link": f"/papers/{pid}/reviews",
                    "messages_link": f"/papers/{pid}/messages",
                }
            )
    return {"reviewer_id": reviewer_id, "papers": papers}
