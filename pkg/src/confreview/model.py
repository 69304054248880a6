"""Domain types shared by every other module.

All records are immutable dataclasses: mutation happens by building a
replacement record and committing it through the store, never in place.
That is what makes store snapshots safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping, Optional

__all__ = [
    "Topic",
    "ContactInfo",
    "Author",
    "PaperStatus",
    "PaperRecord",
    "KnowledgeLevel",
    "Willingness",
    "ReviewerProfile",
    "BidPriority",
    "Bid",
    "Classification",
    "Review",
    "ReviewerStat",
    "Assignment",
    "ReviewState",
    "Role",
    "Credentials",
    "MessageKind",
    "OutboxMessage",
    "ChairFlag",
    "DecisionRecord",
    "Config",
    "validate_paper",
    "effective_bids",
    "can_transition",
]


class KnowledgeLevel(str, Enum):
    """Per-topic knowledge of a reviewer. Total order: expert > knowledgeable > outsider."""

    EXPERT = "X"
    KNOWLEDGEABLE = "Y"
    OUTSIDER = "Z"

    @property
    def weight(self) -> int:
        """Numeric strength used by the distribution engine (X=3, Y=2, Z=1)."""
        return _KNOWLEDGE_WEIGHT[self]


_KNOWLEDGE_WEIGHT = {
    KnowledgeLevel.EXPERT: 3,
    KnowledgeLevel.KNOWLEDGEABLE: 2,
    KnowledgeLevel.OUTSIDER: 1,
}


class Willingness(str, Enum):
    """Reluctance markers: RELUCTANT demotes, REFUSES excludes (strictly stronger)."""

    RELUCTANT = "R"
    REFUSES = "W"


class Classification(str, Enum):
    """Review verdict on the accept-reject scale. Total order: A > B > C > D."""

    CHAMPION = "A"
    ACCEPT = "B"
    REJECT = "C"
    DETRACTOR = "D"

    @property
    def merit(self) -> int:
        """Higher is closer to acceptance (A=3 .. D=0)."""
        return _CLASSIFICATION_MERIT[self]


_CLASSIFICATION_MERIT = {
    Classification.CHAMPION: 3,
    Classification.ACCEPT: 2,
    Classification.REJECT: 1,
    Classification.DETRACTOR: 0,
}


class BidPriority(str, Enum):
    HIGH = "high"
    LOW = "low"


class PaperStatus(str, Enum):
    METADATA_ONLY = "metadata-only"
    FULL_PAPER = "full-paper-uploaded"
    ACCEPTED = "accepted"
    REJECTED = "rejected"
    CAMERA_READY = "camera-ready-received"


# Forward-only lifecycle; a terminal state is reached in at most 3 hops.
_STATUS_TRANSITIONS = {
    PaperStatus.METADATA_ONLY: {PaperStatus.FULL_PAPER},
    PaperStatus.FULL_PAPER: {PaperStatus.ACCEPTED, PaperStatus.REJECTED},
    PaperStatus.ACCEPTED: {PaperStatus.CAMERA_READY},
    PaperStatus.REJECTED: set(),
    PaperStatus.CAMERA_READY: set(),
}


def can_transition(src: PaperStatus, dst: PaperStatus) -> bool:
    return dst in _STATUS_TRANSITIONS[src]


class ReviewState(str, Enum):
    """Color states shown for each paper. Values are the wire names."""

    WHITE = "white"
    PINK = "pink"
    LIGHT_GREEN = "lightgreen"
    ORANGE = "orange"
    GREEN = "green"
    LIGHT_YELLOW = "lightyellow"
    YELLOW = "yellow"
    RED = "red"
    GOLD = "gold"
    GREY = "grey"


class Role(str, Enum):
    AUTHOR_CONTACT = "author-contact"
    REVIEWER = "reviewer"
    CHAIR = "chair"
    MAINTAINER = "maintainer"


class MessageKind(str, Enum):
    CREDENTIALS = "credentials"
    CONFLICT_DISCUSSION = "conflict-discussion"
    NOTIFICATION = "notification"


@dataclass(frozen=True, slots=True)
class Topic:
    id: int
    name: str

    def to_dict(self) -> dict:
        return {"id": self.id, "name": self.name}

    @classmethod
    def from_dict(cls, d: Mapping) -> "Topic":
        return cls(id=int(d["id"]), name=d["name"])


@dataclass(frozen=True, slots=True)
class ContactInfo:
    name: str
    email: str
    phone: str = ""
    fax: str = ""
    address: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "email": self.email,
            "phone": self.phone,
            "fax": self.fax,
            "address": self.address,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "ContactInfo":
        return cls(
            name=d.get("name", ""),
            email=d.get("email", ""),
            phone=d.get("phone", ""),
            fax=d.get("fax", ""),
            address=d.get("address", ""),
        )


@dataclass(frozen=True, slots=True)
class Author:
    first_name: str
    last_name: str
    affiliation: str = ""

    def to_dict(self) -> dict:
        return {
            "first_name": self.first_name,
            "last_name": self.last_name,
            "affiliation": self.affiliation,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "Author":
        return cls(
            first_name=d.get("first_name", ""),
            last_name=d.get("last_name", ""),
            affiliation=d.get("affiliation", ""),
        )


@dataclass(frozen=True, slots=True)
class PaperRecord:
    """A submission. Ids are assigned sequentially from 1 and never reused."""

    id: int
    title: str
    abstract: str
    contact: ContactInfo
    authors: tuple[Author, ...]
    topics: frozenset[int]
    remarks: str = ""
    status: PaperStatus = PaperStatus.METADATA_ONLY
    paper_file: Optional[str] = None
    camera_ready_file: Optional[str] = None
    page_count: Optional[int] = None

    def with_status(self, status: PaperStatus) -> "PaperRecord":
        if not can_transition(self.status, status):
            raise ValueError(f"illegal status transition {self.status.value} -> {status.value}")
        return replace(self, status=status)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "abstract": self.abstract,
            "contact": self.contact.to_dict(),
            "authors": [a.to_dict() for a in self.authors],
            "topics": sorted(self.topics),
            "remarks": self.remarks,
            "status": self.status.value,
            "paper_file": self.paper_file,
            "camera_ready_file": self.camera_ready_file,
            "page_count": self.page_count,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "PaperRecord":
        return cls(
            id=int(d["id"]),
            title=d["title"],
            abstract=d["abstract"],
            contact=ContactInfo.from_dict(d["contact"]),
            authors=tuple(Author.from_dict(a) for a in d["authors"]),
            topics=frozenset(int(t) for t in d["topics"]),
            remarks=d.get("remarks", ""),
            status=PaperStatus(d["status"]),
            paper_file=d.get("paper_file"),
            camera_ready_file=d.get("camera_ready_file"),
            page_count=d.get("page_count"),
        )


@dataclass(frozen=True, slots=True)
class ReviewerProfile:
    """A PC member: per-topic knowledge, per-topic reluctance, declared conflicts."""

    id: str
    name: str
    email: str
    expertise: Mapping[int, KnowledgeLevel] = field(default_factory=dict)
    willingness: Mapping[int, Willingness] = field(default_factory=dict)
    coi_papers: frozenset[int] = frozenset()

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "email": self.email,
            "expertise": {str(t): lv.value for t, lv in sorted(self.expertise.items())},
            "willingness": {str(t): w.value for t, w in sorted(self.willingness.items())},
            "coi_papers": sorted(self.coi_papers),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "ReviewerProfile":
        return cls(
            id=d["id"],
            name=d.get("name", ""),
            email=d.get("email", ""),
            expertise={int(t): KnowledgeLevel(v) for t, v in d.get("expertise", {}).items()},
            willingness={int(t): Willingness(v) for t, v in d.get("willingness", {}).items()},
            coi_papers=frozenset(int(p) for p in d.get("coi_papers", [])),
        )


@dataclass(frozen=True, slots=True)
class Bid:
    """One bidding action. The effective bid per (reviewer, paper) is the
    one with the highest sequence number; earlier bids are history."""

    reviewer_id: str
    paper_id: int
    priority: BidPriority
    sequence: int

    def to_dict(self) -> dict:
        return {
            "reviewer_id": self.reviewer_id,
            "paper_id": self.paper_id,
            "priority": self.priority.value,
            "sequence": self.sequence,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "Bid":
        return cls(
            reviewer_id=d["reviewer_id"],
            paper_id=int(d["paper_id"]),
            priority=BidPriority(d["priority"]),
            sequence=int(d["sequence"]),
        )


@dataclass(frozen=True, slots=True)
class Review:
    paper_id: int
    reviewer_id: str
    classification: Classification
    expertise: KnowledgeLevel
    comments_for_authors: str = ""
    comments_for_pc: str = ""
    submitted_at: float = 0.0
    updated_at: float = 0.0

    def to_dict(self) -> dict:
        return {
            "paper_id": self.paper_id,
            "reviewer_id": self.reviewer_id,
            "classification": self.classification.value,
            "expertise": self.expertise.value,
            "comments_for_authors": self.comments_for_authors,
            "comments_for_pc": self.comments_for_pc,
            "submitted_at": self.submitted_at,
            "updated_at": self.updated_at,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "Review":
        return cls(
            paper_id=int(d["paper_id"]),
            reviewer_id=d["reviewer_id"],
            classification=Classification(d["classification"]),
            expertise=KnowledgeLevel(d["expertise"]),
            comments_for_authors=d.get("comments_for_authors", ""),
            comments_for_pc=d.get("comments_for_pc", ""),
            submitted_at=float(d.get("submitted_at", 0.0)),
            updated_at=float(d.get("updated_at", 0.0)),
        )


@dataclass(frozen=True, slots=True)
class ReviewerStat:
    assigned: int = 0
    bids_satisfied: int = 0

    def to_dict(self) -> dict:
        return {"assigned": self.assigned, "bids_satisfied": self.bids_satisfied}

    @classmethod
    def from_dict(cls, d: Mapping) -> "ReviewerStat":
        return cls(assigned=int(d["assigned"]), bids_satisfied=int(d["bids_satisfied"]))


@dataclass(frozen=True, slots=True)
class Assignment:
    """Paper -> ordered reviewer list, plus the diagnostics of the run
    that produced it. Volunteering appends to a paper's list but leaves
    the run diagnostics untouched."""

    papers: Mapping[int, tuple[str, ...]] = field(default_factory=dict)
    reviewer_stats: Mapping[str, ReviewerStat] = field(default_factory=dict)
    shortfalls: Mapping[int, int] = field(default_factory=dict)

    @property
    def pool_warning(self) -> bool:
        """True when some paper could not be filled: the pool of reviewer
        capacity reserved for unpopular papers is not large enough."""
        return any(n > 0 for n in self.shortfalls.values())

    def reviewers_of(self, paper_id: int) -> tuple[str, ...]:
        return self.papers.get(paper_id, ())

    def papers_of(self, reviewer_id: str) -> tuple[int, ...]:
        return tuple(
            pid for pid in sorted(self.papers) if reviewer_id in self.papers[pid]
        )

    def with_volunteer(self, paper_id: int, reviewer_id: str) -> "Assignment":
        current = dict(self.papers)
        current[paper_id] = current.get(paper_id, ()) + (reviewer_id,)
        return replace(self, papers=current)

    def to_dict(self) -> dict:
        return {
            "papers": {str(pid): list(revs) for pid, revs in sorted(self.papers.items())},
            "reviewer_stats": {
                rid: st.to_dict() for rid, st in sorted(self.reviewer_stats.items())
            },
            "shortfalls": {str(pid): n for pid, n in sorted(self.shortfalls.items())},
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "Assignment":
        return cls(
            papers={int(pid): tuple(revs) for pid, revs in d.get("papers", {}).items()},
            reviewer_stats={
                rid: ReviewerStat.from_dict(st)
                for rid, st in d.get("reviewer_stats", {}).items()
            },
            shortfalls={int(pid): int(n) for pid, n in d.get("shortfalls", {}).items()},
        )


@dataclass(frozen=True, slots=True)
class Credentials:
    """An authenticated principal. subject_id binds the principal to its
    paper (author contacts) or reviewer profile (reviewers); empty for
    chair and maintainer."""

    login: str
    role: Role
    subject_id: str = ""

    @property
    def paper_id(self) -> Optional[int]:
        if self.role is Role.AUTHOR_CONTACT and self.subject_id:
            return int(self.subject_id)
        return None


@dataclass(frozen=True, slots=True)
class OutboxMessage:
    to: tuple[str, ...]
    cc: tuple[str, ...]
    subject: str
    body: str
    created_at: float
    kind: MessageKind
    paper_id: int

    def to_dict(self) -> dict:
        return {
            "to": list(self.to),
            "cc": list(self.cc),
            "subject": self.subject,
            "body": self.body,
            "created_at": self.created_at,
            "kind": self.kind.value,
            "paper_id": self.paper_id,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "OutboxMessage":
        return cls(
            to=tuple(d["to"]),
            cc=tuple(d.get("cc", [])),
            subject=d["subject"],
            body=d["body"],
            created_at=float(d["created_at"]),
            kind=MessageKind(d["kind"]),
            paper_id=int(d["paper_id"]),
        )


@dataclass(frozen=True, slots=True)
class ChairFlag:
    """Raised when a declared conflict touches an already-made assignment;
    the chair resolves it manually (the assignment is never auto-edited)."""

    reviewer_id: str
    paper_id: int
    note: str
    created_at: float

    def to_dict(self) -> dict:
        return {
            "reviewer_id": self.reviewer_id,
            "paper_id": self.paper_id,
            "note": self.note,
            "created_at": self.created_at,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "ChairFlag":
        return cls(
            reviewer_id=d["reviewer_id"],
            paper_id=int(d["paper_id"]),
            note=d.get("note", ""),
            created_at=float(d["created_at"]),
        )


@dataclass(frozen=True, slots=True)
class DecisionRecord:
    accepted: tuple[int, ...]
    rejected: tuple[int, ...]
    recorded_at: float

    def to_dict(self) -> dict:
        return {
            "accepted": list(self.accepted),
            "rejected": list(self.rejected),
            "recorded_at": self.recorded_at,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "DecisionRecord":
        return cls(
            accepted=tuple(int(p) for p in d["accepted"]),
            rejected=tuple(int(p) for p in d["rejected"]),
            recorded_at=float(d["recorded_at"]),
        )


@dataclass(frozen=True, slots=True)
class Config:
    """Conference-wide knobs. max_preference_papers is the pool-of-experts
    cap: once a reviewer has that many bid-won papers they drop out of the
    preference lists so their capacity is kept for unpopular papers."""

    conference_name: str = "Unnamed Conference"
    chair_email: str = "chair@example.org"
    reviewers_per_paper: int = 4
    max_preference_papers: int = 10
    hard_cap_slack: int = 1
    poll_interval_seconds: int = 300
    full_paper_deadline: Optional[float] = None
    camera_ready_deadline: Optional[float] = None
    page_offset: int = 0

    def __post_init__(self) -> None:
        if self.reviewers_per_paper < 1:
            raise ValueError("reviewers_per_paper must be >= 1")
        if self.max_preference_papers < 1:
            raise ValueError("max_preference_papers must be >= 1")
        if self.hard_cap_slack < 0:
            raise ValueError("hard_cap_slack must be >= 0")
        if self.poll_interval_seconds < 1:
            raise ValueError("poll_interval_seconds must be >= 1")

    def to_dict(self) -> dict:
        return {
            "conference_name": self.conference_name,
            "chair_email": self.chair_email,
            "reviewers_per_paper": self.reviewers_per_paper,
            "max_preference_papers": self.max_preference_papers,
            "hard_cap_slack": self.hard_cap_slack,
            "poll_interval_seconds": self.poll_interval_seconds,
            "full_paper_deadline": self.full_paper_deadline,
            "camera_ready_deadline": self.camera_ready_deadline,
            "page_offset": self.page_offset,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "Config":
        return cls(
            conference_name=d.get("conference_name", "Unnamed Conference"),
            chair_email=d.get("chair_email", "chair@example.org"),
            reviewers_per_paper=int(d.get("reviewers_per_paper", 4)),
            max_preference_papers=int(d.get("max_preference_papers", 10)),
            hard_cap_slack=int(d.get("hard_cap_slack", 1)),
            poll_interval_seconds=int(d.get("poll_interval_seconds", 300)),
            full_paper_deadline=d.get("full_paper_deadline"),
            camera_ready_deadline=d.get("camera_ready_deadline"),
            page_offset=int(d.get("page_offset", 0)),
        )


def validate_paper(record: PaperRecord, topics: Iterable[Topic]) -> list[str]:
    """Check the statically checkable paper invariants.

    Returns an empty list when the record is valid; otherwise one finding
    per violation. Uniqueness of the id is the store's job, not checked here.
    """
    known = {t.id for t in topics}
    findings: list[str] = []
    if record.id < 1:
        findings.append("id not positive")
    if not record.title.strip():
        findings.append("title empty")
    if not record.topics:
        findings.append("topics empty")
    for tid in sorted(record.topics):
        if tid not in known:
            findings.append(f"unknown topic {tid}")
    if not record.authors:
        findings.append("no authors")
    if not record.contact.email.strip():
        findings.append("contact email empty")
    if record.page_count is not None and record.page_count < 1:
        findings.append("page_count not positive")
    if record.status is PaperStatus.CAMERA_READY:
        if record.camera_ready_file is None:
            findings.append("camera-ready status without stored file")
        if record.page_count is None:
            findings.append("camera-ready status without page_count")
    return findings


def effective_bids(bids: Iterable[Bid]) -> dict[tuple[str, int], Bid]:
    """Collapse accumulated bids to the effective one per (reviewer, paper):
    the bid with the highest sequence number wins. Idempotent."""
    latest: dict[tuple[str, int], Bid] = {}
    for bid in bids:
        key = (bid.reviewer_id, bid.paper_id)
        cur = latest.get(key)
        if cur is None or bid.sequence > cur.sequence:
            latest[key] = bid
    return latest
