"""Paper distribution: bid-driven greedy matching with expertise fallback.

For each paper (ascending id) reviewers are drawn from three pools until
the paper has the required number of reviewers:

1. reviewers with an effective HIGH bid, least-loaded first;
2. reviewers with an effective LOW bid, least-loaded first;
3. remaining eligible reviewers by descending topic expertise.

Bids beat reluctance: a reviewer who marked a topic "will not review" but
bid on a paper covering it is still taken in the bid phases. Conflicts of
interest exclude in every phase. The pool-of-experts cap
(max_preference_papers) removes a reviewer from the bid pools once they
have won that many papers by preference, keeping capacity in reserve for
unpopular papers; the hard cap bounds phase-3 load so total assignments
stay approximately balanced.

Deterministic: identical input yields an identical Assignment.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import ValidationFailure
from .model import (
    Assignment,
    Bid,
    BidPriority,
    Config,
    PaperRecord,
    ReviewerProfile,
    ReviewerStat,
    Willingness,
)

__all__ = [
    "DistributionInput",
    "expertise_score",
    "propose_distribution",
    "rank_bid_candidates",
    "distribution_report",
    "report_text",
    "report_json",
]


@dataclass(frozen=True)
class DistributionInput:
    """Everything a distribution run consumes. ``bids`` must already be
    deduplicated to effective bids (one per reviewer-paper pair)."""

    papers: Sequence[PaperRecord]
    reviewers: Sequence[ReviewerProfile]
    bids: Sequence[Bid]
    config: Config

    def validate(self) -> list[str]:
        findings: list[str] = []
        paper_ids = {p.id for p in self.papers}
        reviewer_ids = {r.id for r in self.reviewers}
        if len(paper_ids) != len(self.papers):
            findings.append("duplicate paper ids")
        if len(reviewer_ids) != len(self.reviewers):
            findings.append("duplicate reviewer ids")
        seen_pairs = set()
        for bid in self.bids:
            if bid.paper_id not in paper_ids:
                findings.append(f"bid on unknown paper {bid.paper_id}")
            if bid.reviewer_id not in reviewer_ids:
                findings.append(f"bid by unknown reviewer {bid.reviewer_id}")
            pair = (bid.reviewer_id, bid.paper_id)
            if pair in seen_pairs:
                findings.append(f"bids not effective: duplicate pair {pair}")
            seen_pairs.add(pair)
        if self.papers and self.config.reviewers_per_paper > len(self.reviewers):
            findings.append("reviewers_per_paper exceeds number of reviewers")
        return findings


def expertise_score(reviewer: ReviewerProfile, paper: PaperRecord) -> Optional[Fraction]:
    """Mean topic expertise of ``reviewer`` over ``paper``'s topics
    (expert=3, knowledgeable=2, outsider=1), as an exact rational in [1, 3].

    Returns None ("excluded") when the reviewer refuses one of the paper's
    topics or declared a conflict of interest with the paper.
    """
    if not paper.topics:
        raise ValueError(f"paper {paper.id} has no topics")
    if paper.id in reviewer.coi_papers:
        return None
    weights = []
    for topic in paper.topics:
        if reviewer.willingness.get(topic) is Willingness.REFUSES:
            return None
        weights.append(reviewer.expertise[topic].weight)
    return Fraction(sum(weights), len(weights))


def rank_bid_candidates(bidders: Sequence[str], loads: dict[str, int]) -> list[str]:
    """Order a bid pool for selection: least current load first, ties by
    ascending reviewer id."""
    return sorted(bidders, key=lambda rid: (loads.get(rid, 0), rid))


def _has_reluctance(reviewer: ReviewerProfile, paper: PaperRecord) -> bool:
    return any(
        reviewer.willingness.get(topic) is Willingness.RELUCTANT for topic in paper.topics
    )


def propose_distribution(inp: DistributionInput) -> Assignment:
    """Run the three-phase greedy distribution and return the proposal."""
    findings = inp.validate()
    if findings:
        raise ValidationFailure(findings)

    if not inp.papers:
        return Assignment()

    config = inp.config
    need = config.reviewers_per_paper
    n_reviewers = len(inp.reviewers)
    cap = -(-len(inp.papers) * need // n_reviewers) + config.hard_cap_slack

    reviewers = {r.id: r for r in inp.reviewers}
    # paper -> {reviewer -> priority} of effective bids
    bids_by_paper: dict[int, dict[str, BidPriority]] = {}
    for bid in inp.bids:
        bids_by_paper.setdefault(bid.paper_id, {})[bid.reviewer_id] = bid.priority

    load: dict[str, int] = {rid: 0 for rid in reviewers}
    pref_count: dict[str, int] = {rid: 0 for rid in reviewers}
    assigned: dict[int, list[str]] = {}
    shortfalls: dict[int, int] = {}

    for paper in sorted(inp.papers, key=lambda p: p.id):
        chosen: list[str] = []
        paper_bids = bids_by_paper.get(paper.id, {})

        for priority in (BidPriority.HIGH, BidPriority.LOW):
            if len(chosen) >= need:
                break
            pool = [
                rid
                for rid, prio in paper_bids.items()
                if prio is priority
                and rid not in chosen
                and paper.id not in reviewers[rid].coi_papers
                and pref_count[rid] < config.max_preference_papers
            ]
            for rid in rank_bid_candidates(pool, load):
                if len(chosen) >= need:
                    break
                chosen.append(rid)
                load[rid] += 1
                pref_count[rid] += 1

        if len(chosen) < need:
            scored = []
            for rid in reviewers:
                if rid in chosen or load[rid] >= cap:
                    continue
                score = expertise_score(reviewers[rid], paper)
                if score is None:
                    continue
                scored.append((-score, _has_reluctance(reviewers[rid], paper), load[rid], rid))
            scored.sort()
            for _, _, _, rid in scored[: need - len(chosen)]:
                chosen.append(rid)
                load[rid] += 1

        assigned[paper.id] = chosen
        if len(chosen) < need:
            shortfalls[paper.id] = need - len(chosen)

    satisfied: dict[str, int] = {rid: 0 for rid in reviewers}
    for bid in inp.bids:
        if bid.reviewer_id in assigned.get(bid.paper_id, ()):
            satisfied[bid.reviewer_id] += 1

    return Assignment(
        papers={pid: tuple(revs) for pid, revs in assigned.items()},
        reviewer_stats={
            rid: ReviewerStat(assigned=load[rid], bids_satisfied=satisfied[rid])
            for rid in sorted(reviewers)
        },
        shortfalls=shortfalls,
    )


@dataclass(frozen=True)
class ReviewerReportRow:
    reviewer_id: str
    assigned: int
    bids_placed: int
    bids_satisfied: int

    @property
    def satisfaction_pct(self) -> Optional[float]:
        if self.bids_placed == 0:
            return None
        return 100.0 * self.bids_satisfied / self.bids_placed


@dataclass(frozen=True)
class DistributionReport:
    rows: tuple[ReviewerReportRow, ...]
    papers_short: tuple[tuple[int, int], ...]  # (paper id, missing)
    total_papers: int
    total_assigned: int = field(default=0)
    total_bids: int = field(default=0)
    total_satisfied: int = field(default=0)


def distribution_report(assignment: Assignment, bids: Sequence[Bid]) -> DistributionReport:
    """Summarize a distribution run per reviewer, with a totals line."""
    placed: dict[str, int] = {}
    for bid in bids:
        placed[bid.reviewer_id] = placed.get(bid.reviewer_id, 0) + 1

    reviewer_ids = sorted(set(assignment.reviewer_stats) | set(placed))
    rows = tuple(
        ReviewerReportRow(
            reviewer_id=rid,
            assigned=assignment.reviewer_stats.get(rid, ReviewerStat()).assigned,
            bids_placed=placed.get(rid, 0),
            bids_satisfied=assignment.reviewer_stats.get(rid, ReviewerStat()).bids_satisfied,
        )
        for rid in reviewer_ids
    )
    return DistributionReport(
        rows=rows,
        papers_short=tuple(sorted(assignment.shortfalls.items())),
        total_papers=len(assignment.papers),
        total_assigned=sum(r.assigned for r in rows),
        total_bids=sum(r.bids_placed for r in rows),
        total_satisfied=sum(r.bids_satisfied for r in rows),
    )


def _pct_text(satisfied: int, placed: int) -> str:
    if placed == 0:
        return "n/a"
    return f"{100.0 * satisfied / placed:.0f}%"


def report_text(report: DistributionReport) -> str:
    """Plain-text rendering of the distribution report."""
    width = max([len("reviewer")] + [len(r.reviewer_id) for r in report.rows])
    lines = ["Paper distribution overview", ""]
    lines.append(
        f"{'reviewer':<{width}}  {'assigned':>8}  {'bids':>5}  {'satisfied':>9}  {'satisfaction':>12}"
    )
    for row in report.rows:
        lines.append(
            f"{row.reviewer_id:<{width}}  {row.assigned:>8}  {row.bids_placed:>5}  "
            f"{row.bids_satisfied:>9}  {_pct_text(row.bids_satisfied, row.bids_placed):>12}"
        )
    lines.append("")
    if report.papers_short:
        for pid, missing in report.papers_short:
            lines.append(f"paper {pid} short {missing} reviewer(s)")
        lines.append("warning: pool of experts is not full enough")
        lines.append("")
    lines.append(
        f"totals: papers={report.total_papers} assigned={report.total_assigned} "
        f"bids={report.total_bids} satisfied={report.total_satisfied} "
        f"({_pct_text(report.total_satisfied, report.total_bids)})"
    )
    return "\n".join(lines) + "\n"


def report_json(report: DistributionReport) -> dict:
    """JSON-ready rendering of the distribution report."""
    return {
        "reviewers": [
            {
                "id": row.reviewer_id,
                "assigned": row.assigned,
                "bids_placed": row.bids_placed,
                "bids_satisfied": row.bids_satisfied,
                "satisfaction_pct": row.satisfaction_pct,
            }
            for row in report.rows
        ],
        "papers_short": [
            {"paper_id": pid, "missing": missing} for pid, missing in report.papers_short
        ],
        "totals": {
            "papers": report.total_papers,
            "assigned": report.total_assigned,
            "bids_placed": report.total_bids,
            "bids_satisfied": report.total_satisfied,
            "satisfaction_pct": (
                None
                if report.total_bids == 0
                else 100.0 * report.total_satisfied / report.total_bids
            ),
        },
    }


def assignment_canonical_json(assignment: Assignment) -> str:
    """Canonical serialization used for byte-identical comparison."""
    return json.dumps(assignment.to_dict(), sort_keys=True, separators=(",", ":"))
