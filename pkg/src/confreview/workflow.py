"""End-to-end review workflow on top of the store.

Covers both submission phases, bidding with accumulation, conflict
declarations, review submission with the visibility gate, reviewer
discussion mail, volunteering, decisions and author notifications.

Mutating operations serialize through one lock (single-writer), so a
read-modify-write never races another writer; reads work on immutable
snapshots and need no locking.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, replace
from pathlib import PurePosixPath
from typing import Callable, Collection, Optional, Sequence, Union

from . import forms
from .assignment import DistributionInput, propose_distribution
from .errors import (
    AuthorizationError,
    LifecycleError,
    NotFoundError,
    ValidationFailure,
)
from .model import (
    Assignment,
    Author,
    Bid,
    BidPriority,
    ChairFlag,
    Classification,
    Config,
    ContactInfo,
    Credentials,
    DecisionRecord,
    KnowledgeLevel,
    MessageKind,
    OutboxMessage,
    PaperRecord,
    PaperStatus,
    Review,
    ReviewerProfile,
    Role,
    Topic,
    effective_bids,
    validate_paper,
)
from .registry import CredentialRecord, Delete, Put, Store, authorize, generate_password

__all__ = [
    "PaperMetadata",
    "SubmissionResult",
    "BidOutcome",
    "ConferenceService",
]


@dataclass(frozen=True)
class PaperMetadata:
    """Everything the contact person enters in phase 1."""

    title: str
    abstract: str
    contact: ContactInfo
    authors: tuple[Author, ...]
    topics: frozenset[int]
    remarks: str = ""


@dataclass(frozen=True)
class SubmissionResult:
    paper_id: int
    login: str
    password: str
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class BidOutcome:
    applied: tuple[Bid, ...]
    rejected: tuple[tuple[int, str], ...]  # (paper id, reason)
    effective: tuple[Bid, ...]


def _coerce_priority(value: Union[BidPriority, str]) -> BidPriority:
    try:
        return BidPriority(value)
    except ValueError:
        raise ValidationFailure(f"invalid bid priority {value!r}") from None


def _coerce_classification(value: Union[Classification, str]) -> Classification:
    try:
        return Classification(value)
    except ValueError:
        raise ValidationFailure(f"invalid classification {value!r}") from None


def _coerce_expertise(value: Union[KnowledgeLevel, str]) -> KnowledgeLevel:
    try:
        return KnowledgeLevel(value)
    except ValueError:
        raise ValidationFailure(f"invalid expertise {value!r}") from None


class ConferenceService:
    """All workflow operations, bound to one store."""

    def __init__(self, store: Store, clock: Callable[[], float] = time.time):
        self.store = store
        self._clock = clock
        self._last_now = 0.0
        self._write_lock = threading.RLock()

    def _now(self) -> float:
        # strictly increasing, so timestamps and outbox names never collide
        with self._write_lock:
            now = max(self._clock(), self._last_now + 1e-6)
            self._last_now = now
            return now

    # -- setup (maintainer) ----------------------------------------------

    def init_conference(self, config: Config, topics: Sequence[Topic]) -> None:
        ids = sorted(t.id for t in topics)
        if ids != list(range(1, len(ids) + 1)):
            raise ValidationFailure("topic ids must be contiguous from 1")
        if any(not t.name.strip() for t in topics):
            raise ValidationFailure("topic names must be non-empty")
        with self._write_lock:
            muts: list[Union[Put, Delete]] = [Put("config", "current", config)]
            muts += [Put("topics", str(t.id), t) for t in topics]
            self.store.commit(muts)

    def create_principal(self, login: str, password: str, role: Role, subject_id: str = "") -> None:
        with self._write_lock:
            if login in self.store.snapshot().credentials:
                raise ValidationFailure(f"login {login!r} already exists")
            rec = CredentialRecord.issue(login, password, role, subject_id)
            self.store.commit([Put("credentials", login, rec)])

    def import_reviewers(
        self, profiles: Sequence[ReviewerProfile]
    ) -> list[tuple[str, str]]:
        """Register reviewer profiles and issue credentials; returns
        (reviewer id, generated password) pairs for distribution."""
        state = self.store.snapshot()
        issued: list[tuple[str, str]] = []
        muts: list[Union[Put, Delete]] = []
        with self._write_lock:
            for profile in profiles:
                if not profile.id or not profile.id.replace("-", "").replace("_", "").isalnum():
                    raise ValidationFailure(f"reviewer id {profile.id!r} is not a safe handle")
                missing = [t for t in state.topics if t not in profile.expertise]
                if missing:
                    raise ValidationFailure(
                        f"reviewer {profile.id}: expertise missing for topics {missing}"
                    )
                password = generate_password()
                muts.append(Put("reviewers", profile.id, profile))
                muts.append(
                    Put(
                        "credentials",
                        profile.id,
                        CredentialRecord.issue(profile.id, password, Role.REVIEWER, profile.id),
                    )
                )
                issued.append((profile.id, password))
            self.store.commit(muts)
        return issued

    # -- authors: two-phase submission -------------------------------------

    def _validated_record(self, state, paper_id: int, metadata: PaperMetadata,
                          status: PaperStatus = PaperStatus.METADATA_ONLY) -> PaperRecord:
        record = PaperRecord(
            id=paper_id,
            title=metadata.title,
            abstract=metadata.abstract,
            contact=metadata.contact,
            authors=tuple(metadata.authors),
            topics=frozenset(metadata.topics),
            remarks=metadata.remarks,
            status=status,
        )
        findings = validate_paper(record, state.topics.values())
        if not metadata.abstract.strip():
            findings.append("abstract empty")
        if findings:
            raise ValidationFailure(findings)
        return record

    def submit_phase1(self, metadata: PaperMetadata) -> SubmissionResult:
        with self._write_lock:
            state = self.store.snapshot()
            paper_id = max(state.papers, default=0) + 1
            record = self._validated_record(state, paper_id, metadata)

            warnings = tuple(
                f"possible duplicate of paper {p.id}"
                for p in state.papers.values()
                if p.title == record.title and p.contact.email == record.contact.email
            )

            login = f"paper{paper_id}"
            password = generate_password()
            creds_rec = CredentialRecord.issue(
                login, password, Role.AUTHOR_CONTACT, str(paper_id)
            )
            message = OutboxMessage(
                to=(record.contact.email,),
                cc=(),
                subject=f"[{state.config.conference_name}] Submission {paper_id} received",
                body=(
                    f"Dear {record.contact.name},\n\n"
                    f'Your submission "{record.title}" was registered as paper {paper_id}.\n\n'
                    f"Use these credentials for the full-paper upload and later steps:\n\n"
                    f"    login:    {login}\n"
                    f"    password: {password}\n"
                ),
                created_at=self._now(),
                kind=MessageKind.CREDENTIALS,
                paper_id=paper_id,
            )
            msg_id = max(state.messages, default=0) + 1
            self.store.commit(
                [
                    Put("papers", str(paper_id), record),
                    Put("credentials", login, creds_rec),
                    Put("messages", str(msg_id), message),
                ]
            )
            return SubmissionResult(paper_id, login, password, warnings)

    def _paper_or_404(self, state, paper_id: int) -> PaperRecord:
        paper = state.papers.get(paper_id)
        if paper is None:
            raise NotFoundError(f"unknown paper {paper_id}")
        return paper

    def update_phase1(self, creds: Credentials, paper_id: int, metadata: PaperMetadata) -> PaperRecord:
        with self._write_lock:
            state = self.store.snapshot()
            paper = self._paper_or_404(state, paper_id)
            authorize(state, creds, "paper.update", paper_id)
            if paper.status not in (PaperStatus.METADATA_ONLY, PaperStatus.FULL_PAPER):
                raise LifecycleError("locked: the paper has been decided")
            fresh = self._validated_record(state, paper_id, metadata, status=paper.status)
            # id, status, files and page count are not author-editable
            updated = replace(
                paper,
                title=fresh.title,
                abstract=fresh.abstract,
                contact=fresh.contact,
                authors=fresh.authors,
                topics=fresh.topics,
                remarks=fresh.remarks,
            )
            self.store.commit([Put("papers", str(paper_id), updated)])
            return updated

    def upload_paper(self, creds: Credentials, paper_id: int, data: bytes, filename: str) -> PaperRecord:
        with self._write_lock:
            state = self.store.snapshot()
            paper = self._paper_or_404(state, paper_id)
            authorize(state, creds, "paper.upload", paper_id)
            if paper.status not in (PaperStatus.METADATA_ONLY, PaperStatus.FULL_PAPER):
                raise LifecycleError("full paper can no longer be uploaded")
            deadline = state.config.full_paper_deadline
            if deadline is not None and self._now() > deadline:
                raise LifecycleError("deadline passed")
            if not data:
                raise ValidationFailure("uploaded file is empty")
            suffix = PurePosixPath(filename).suffix or ".bin"
            rel = self.store.write_blob(paper_id, f"paper{suffix}", data)
            if paper.paper_file and paper.paper_file != rel:
                self.store.remove_blob(paper.paper_file)  # single stored version
            updated = paper if paper.status is PaperStatus.FULL_PAPER else paper.with_status(
                PaperStatus.FULL_PAPER
            )
            updated = replace(updated, paper_file=rel)
            self.store.commit([Put("papers", str(paper_id), updated)])
            return updated

    def upload_camera_ready(
        self, creds: Credentials, paper_id: int, data: bytes, filename: str, page_count: Optional[int]
    ) -> PaperRecord:
        with self._write_lock:
            state = self.store.snapshot()
            paper = self._paper_or_404(state, paper_id)
            authorize(state, creds, "paper.upload-camera-ready", paper_id)
            if paper.status is not PaperStatus.ACCEPTED:
                raise LifecycleError("camera-ready is only accepted for accepted papers")
            if page_count is None:
                raise ValidationFailure("page_count required at camera-ready upload")
            if page_count < 1:
                raise ValidationFailure("page_count not positive")
            deadline = state.config.camera_ready_deadline
            if deadline is not None and self._now() > deadline:
                raise LifecycleError("deadline passed")
            if not data:
                raise ValidationFailure("uploaded file is empty")
            suffix = PurePosixPath(filename).suffix or ".bin"
            rel = self.store.write_blob(paper_id, f"camera-ready{suffix}", data)
            if paper.camera_ready_file and paper.camera_ready_file != rel:
                self.store.remove_blob(paper.camera_ready_file)
            updated = replace(
                paper.with_status(PaperStatus.CAMERA_READY),
                camera_ready_file=rel,
                page_count=page_count,
            )
            self.store.commit([Put("papers", str(paper_id), updated)])
            return updated

    # -- reviewers: bidding and conflicts -----------------------------------

    def _reviewer_or_404(self, state, reviewer_id: str) -> ReviewerProfile:
        profile = state.reviewers.get(reviewer_id)
        if profile is None:
            raise NotFoundError(f"unknown reviewer {reviewer_id}")
        return profile

    def submit_bids(
        self, creds: Credentials, selections: Sequence[tuple[int, Union[BidPriority, str]]]
    ) -> BidOutcome:
        with self._write_lock:
            state = self.store.snapshot()
            authorize(state, creds, "bid.submit", creds.subject_id)
            profile = self._reviewer_or_404(state, creds.subject_id)
            for paper_id, _ in selections:
                self._paper_or_404(state, paper_id)

            applied: list[Bid] = []
            rejected: list[tuple[int, str]] = []
            muts: list[Union[Put, Delete]] = []
            next_seq = state.bid_seq_hwm + 1
            for paper_id, priority in selections:
                if paper_id in profile.coi_papers:
                    rejected.append((paper_id, "conflict of interest"))
                    continue
                bid = Bid(
                    reviewer_id=profile.id,
                    paper_id=paper_id,
                    priority=_coerce_priority(priority),
                    sequence=next_seq,
                )
                muts.append(Put("bids", str(next_seq), bid))
                applied.append(bid)
                next_seq += 1
            self.store.commit(muts)

            after = self.store.snapshot()
            mine = [b for b in after.sorted_bids() if b.reviewer_id == profile.id]
            eff = effective_bids(mine)
            return BidOutcome(
                applied=tuple(applied),
                rejected=tuple(rejected),
                effective=tuple(eff[k] for k in sorted(eff)),
            )

    def declare_coi(self, creds: Credentials, paper_id: int) -> ReviewerProfile:
        with self._write_lock:
            state = self.store.snapshot()
            authorize(state, creds, "coi.declare", creds.subject_id)
            profile = self._reviewer_or_404(state, creds.subject_id)
            self._paper_or_404(state, paper_id)
            if paper_id in profile.coi_papers:
                return profile  # already declared; bids are long gone

            updated = replace(profile, coi_papers=profile.coi_papers | {paper_id})
            muts: list[Union[Put, Delete]] = [Put("reviewers", profile.id, updated)]
            for seq, bid in state.bids.items():
                if bid.reviewer_id == profile.id and bid.paper_id == paper_id:
                    muts.append(Delete("bids", str(seq)))
            if profile.id in state.assigned_reviewers(paper_id):
                flag = ChairFlag(
                    reviewer_id=profile.id,
                    paper_id=paper_id,
                    note="conflict declared after assignment; chair action needed",
                    created_at=self._now(),
                )
                muts.append(Put("chair_flags", str(max(state.chair_flags, default=0) + 1), flag))
            self.store.commit(muts)
            return updated

    # -- distribution -------------------------------------------------------

    def distribution_input(self) -> DistributionInput:
        state = self.store.snapshot()
        eff = effective_bids(state.sorted_bids())
        return DistributionInput(
            papers=sorted(state.papers.values(), key=lambda p: p.id),
            reviewers=sorted(state.reviewers.values(), key=lambda r: r.id),
            bids=tuple(eff[k] for k in sorted(eff)),
            config=state.config,
        )

    def propose(self) -> Assignment:
        return propose_distribution(self.distribution_input())

    def commit_assignment(self, assignment: Assignment) -> int:
        with self._write_lock:
            return self.store.commit([Put("assignment", "current", assignment)])

    # -- reviews ------------------------------------------------------------

    def submit_review(
        self,
        creds: Credentials,
        paper_id: int,
        classification: Union[Classification, str],
        expertise: Union[KnowledgeLevel, str],
        comments_for_authors: str = "",
        comments_for_pc: str = "",
        reviewer_id: Optional[str] = None,
    ) -> Review:
        """Insert or update a review. Chairs and the maintainer may file on
        behalf of a reviewer (emailed forms); reviewers only for themselves."""
        with self._write_lock:
            state = self.store.snapshot()
            self._paper_or_404(state, paper_id)
            if creds.role is Role.REVIEWER:
                reviewer_id = creds.subject_id
            elif reviewer_id is None:
                raise ValidationFailure("reviewer_id required when filing on behalf")
            authorize(state, creds, "review.submit", paper_id)
            if reviewer_id not in state.assigned_reviewers(paper_id):
                raise AuthorizationError(
                    "reviewer-assigned-papers-only", "not a reviewer of this paper"
                )
            if state.decisions is not None:
                raise LifecycleError("reviews are frozen: decisions have been recorded")

            cls = _coerce_classification(classification)
            exp = _coerce_expertise(expertise)
            existing = state.review_of(paper_id, reviewer_id)
            now = self._now()
            review = Review(
                paper_id=paper_id,
                reviewer_id=reviewer_id,
                classification=cls,
                expertise=exp,
                comments_for_authors=comments_for_authors,
                comments_for_pc=comments_for_pc,
                submitted_at=existing.submitted_at if existing else now,
                updated_at=now,
            )
            self.store.commit([Put("reviews", f"{paper_id}:{reviewer_id}", review)])
            return review

    def submit_parsed_review(self, creds: Credentials, text: str) -> forms.ParseResult:
        """Check an emailed review form; if clean, file it."""
        state = self.store.snapshot()
        result = forms.parse_review(
            text,
            known_papers=set(state.papers),
            known_reviewers=set(state.reviewers),
        )
        if not result.ok:
            return result
        review = result.review
        if creds.role is Role.REVIEWER and creds.subject_id != review.reviewer_id:
            raise AuthorizationError(
                "reviewer-own-review-only", "form names a different reviewer"
            )
        stored = self.submit_review(
            creds,
            review.paper_id,
            review.classification,
            review.expertise,
            review.comments_for_authors,
            review.comments_for_pc,
            reviewer_id=review.reviewer_id,
        )
        return forms.ParseResult(review=stored, errors=())

    def visible_reviews(self, creds: Credentials, paper_id: int) -> tuple[Review, ...]:
        """All reviews of the paper once the asking reviewer has submitted
        their own; nothing before that. Chairs see everything."""
        state = self.store.snapshot()
        self._paper_or_404(state, paper_id)
        authorize(state, creds, "review.read", paper_id)
        reviews = state.reviews_for_paper(paper_id)
        if creds.role is Role.REVIEWER:
            own = state.review_of(paper_id, creds.subject_id)
            if own is None:
                return ()
        return tuple(sorted(reviews, key=lambda r: r.reviewer_id))

    def render_review_template(self, creds: Credentials, paper_id: int) -> str:
        state = self.store.snapshot()
        authorize(state, creds, "review.submit", paper_id)
        reviewer_id = creds.subject_id if creds.role is Role.REVIEWER else ""
        return forms.render_template(
            paper_id,
            reviewer_id or "REVIEWER-ID",
            known_papers=set(state.papers),
            known_reviewers=None if not reviewer_id else set(state.reviewers),
        )

    def send_conflict_message(self, creds: Credentials, paper_id: int, text: str) -> OutboxMessage:
        with self._write_lock:
            state = self.store.snapshot()
            self._paper_or_404(state, paper_id)
            authorize(state, creds, "message.send", paper_id)
            if not text.strip():
                raise ValidationFailure("message text empty")
            if state.review_of(paper_id, creds.subject_id) is None:
                raise LifecycleError("submit your review first")
            sender = self._reviewer_or_404(state, creds.subject_id)
            others = [
                state.reviewers[rid]
                for rid in state.assigned_reviewers(paper_id)
                if rid != sender.id and rid in state.reviewers
            ]
            if not others:
                raise LifecycleError("no other reviewers on this paper to message")
            message = OutboxMessage(
                to=tuple(r.email for r in others),
                cc=(state.config.chair_email,),
                subject=f"[{state.config.conference_name}] Discussion on paper {paper_id}",
                body=f"From {sender.name} ({sender.id}) on paper {paper_id}:\n\n{text}",
                created_at=self._now(),
                kind=MessageKind.CONFLICT_DISCUSSION,
                paper_id=paper_id,
            )
            msg_id = max(state.messages, default=0) + 1
            self.store.commit([Put("messages", str(msg_id), message)])
            return message

    def discussion_log(self, creds: Credentials, paper_id: int) -> tuple[OutboxMessage, ...]:
        state = self.store.snapshot()
        self._paper_or_404(state, paper_id)
        authorize(state, creds, "review.read", paper_id)
        return tuple(
            state.messages[k]
            for k in sorted(state.messages)
            if state.messages[k].paper_id == paper_id
            and state.messages[k].kind is MessageKind.CONFLICT_DISCUSSION
        )

    def volunteer_for_paper(self, creds: Credentials, paper_id: int) -> Assignment:
        with self._write_lock:
            state = self.store.snapshot()
            self._paper_or_404(state, paper_id)
            authorize(state, creds, "volunteer", creds.subject_id)
            profile = self._reviewer_or_404(state, creds.subject_id)
            if paper_id in profile.coi_papers:
                raise AuthorizationError("coi-excluded", "forbidden: conflict of interest")
            assignment = state.assignment or Assignment()
            if profile.id in assignment.reviewers_of(paper_id):
                return assignment
            if not state.reviews_for_paper(paper_id):
                raise LifecycleError("volunteering targets papers that already have reviews")
            updated = assignment.with_volunteer(paper_id, profile.id)
            self.store.commit([Put("assignment", "current", updated)])
            return updated

    # -- chair and maintainer ------------------------------------------------

    def record_decisions(self, creds: Credentials, accepted: Collection[int]) -> DecisionRecord:
        with self._write_lock:
            state = self.store.snapshot()
            authorize(state, creds, "decision.record", None)
            if state.decisions is not None:
                raise LifecycleError("decisions already recorded")
            accepted_ids = sorted(set(accepted))
            for pid in accepted_ids:
                paper = state.papers.get(pid)
                if paper is None:
                    raise NotFoundError(f"unknown paper {pid}")
                if paper.status is not PaperStatus.FULL_PAPER:
                    raise LifecycleError(
                        f"paper {pid} is {paper.status.value}, not {PaperStatus.FULL_PAPER.value}"
                    )
            rejected_ids = sorted(
                pid
                for pid, paper in state.papers.items()
                if paper.status is PaperStatus.FULL_PAPER and pid not in accepted_ids
            )
            record = DecisionRecord(
                accepted=tuple(accepted_ids),
                rejected=tuple(rejected_ids),
                recorded_at=self._now(),
            )
            muts: list[Union[Put, Delete]] = [Put("decisions", "current", record)]
            for pid in accepted_ids:
                muts.append(
                    Put("papers", str(pid), state.papers[pid].with_status(PaperStatus.ACCEPTED))
                )
            for pid in rejected_ids:
                muts.append(
                    Put("papers", str(pid), state.papers[pid].with_status(PaperStatus.REJECTED))
                )
            self.store.commit(muts)
            return record

    def generate_notifications(self, creds: Credentials) -> list[OutboxMessage]:
        """One message per decided paper: the decision plus every submitted
        review's comments for the authors. PC-only comments never leave."""
        with self._write_lock:
            state = self.store.snapshot()
            authorize(state, creds, "notification.generate", None)
            if state.decisions is None:
                raise LifecycleError("no decisions recorded yet")
            messages: list[OutboxMessage] = []
            muts: list[Union[Put, Delete]] = []
            msg_id = max(state.messages, default=0) + 1
            for pid in sorted(state.decisions.accepted + state.decisions.rejected):
                paper = state.papers[pid]
                verdict = "accepted" if pid in state.decisions.accepted else "rejected"
                blocks = []
                for i, review in enumerate(state.reviews_for_paper(pid), start=1):
                    blocks.append(f"Review {i}:\n{review.comments_for_authors}")
                body = (
                    f"Dear {paper.contact.name},\n\n"
                    f'Your paper {pid}, "{paper.title}", has been {verdict}.\n'
                )
                if blocks:
                    body += "\nReviewer comments:\n\n" + "\n\n".join(blocks) + "\n"
                message = OutboxMessage(
                    to=(paper.contact.email,),
                    cc=(),
                    subject=(
                        f"[{state.config.conference_name}] Decision on paper {pid}: {verdict}"
                    ),
                    body=body,
                    created_at=self._now(),
                    kind=MessageKind.NOTIFICATION,
                    paper_id=pid,
                )
                muts.append(Put("messages", str(msg_id), message))
                msg_id += 1
                messages.append(message)
            self.store.commit(muts)
            return messages
