"""Durable store, credential verification and role-based authorization.

Layout on disk:

    <root>/events.log        append-only commit log (source of truth)
    <root>/<kind>/<id>.json  one document per record (materialized view)
    <root>/files/<pid>/...   uploaded paper blobs
    <root>/outbox/*.eml      queued mail, one RFC-5322-style file each

Every commit appends exactly one checksummed line to events.log and
fsyncs it before the new version becomes visible. Loading replays the
log and discards a torn tail, so a crash at any point yields exactly
the last fully committed version. Record documents and outbox files
are derived views, rebuilt on open.

Single writer, any number of concurrent snapshot readers. Snapshots are
immutable values: committing never touches an existing snapshot.
"""

from __future__ import annotations

import hashlib
import hmac
import json
import os
import secrets
import threading
from dataclasses import dataclass, field, replace
from email.utils import formatdate
from pathlib import Path
from typing import Callable, Mapping, Optional, Sequence, Union

from .errors import AuthenticationError, AuthorizationError, NotFoundError
from .model import (
    Assignment,
    Bid,
    ChairFlag,
    Config,
    Credentials,
    DecisionRecord,
    OutboxMessage,
    PaperRecord,
    Review,
    ReviewerProfile,
    Role,
    Topic,
)

__all__ = [
    "Put",
    "Delete",
    "StoreState",
    "CredentialRecord",
    "Store",
    "authorize",
    "hash_password",
    "generate_password",
]

PBKDF2_ITERATIONS = 20_000
_DUMMY_SALT = b"\x00" * 16
_DUMMY_HASH = "!" * 64  # never equals a hex digest


def hash_password(password: str, salt: bytes) -> str:
    return hashlib.pbkdf2_hmac(
        "sha256", password.encode("utf-8"), salt, PBKDF2_ITERATIONS
    ).hex()


def generate_password(length: int = 12) -> str:
    alphabet = "abcdefghijkmnpqrstuvwxyzABCDEFGHJKLMNPQRSTUVWXYZ23456789"
    return "".join(secrets.choice(alphabet) for _ in range(length))


@dataclass(frozen=True, slots=True)
class CredentialRecord:
    login: str
    role: Role
    subject_id: str
    salt: str  # hex
    pw_hash: str  # hex

    def to_dict(self) -> dict:
        return {
            "login": self.login,
            "role": self.role.value,
            "subject_id": self.subject_id,
            "salt": self.salt,
            "pw_hash": self.pw_hash,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "CredentialRecord":
        return cls(
            login=d["login"],
            role=Role(d["role"]),
            subject_id=d.get("subject_id", ""),
            salt=d["salt"],
            pw_hash=d["pw_hash"],
        )

    @classmethod
    def issue(cls, login: str, password: str, role: Role, subject_id: str = "") -> "CredentialRecord":
        salt = secrets.token_bytes(16)
        return cls(
            login=login,
            role=role,
            subject_id=subject_id,
            salt=salt.hex(),
            pw_hash=hash_password(password, salt),
        )


@dataclass(frozen=True)
class Put:
    kind: str
    id: str
    record: object

    def to_wire(self) -> dict:
        return {"op": "put", "kind": self.kind, "id": self.id, "data": self.record.to_dict()}


@dataclass(frozen=True)
class Delete:
    kind: str
    id: str

    def to_wire(self) -> dict:
        return {"op": "del", "kind": self.kind, "id": self.id}


Mutation = Union[Put, Delete]

_SINGLETON = "current"

_DESERIALIZERS: dict[str, Callable[[Mapping], object]] = {
    "topics": Topic.from_dict,
    "config": Config.from_dict,
    "papers": PaperRecord.from_dict,
    "reviewers": ReviewerProfile.from_dict,
    "bids": Bid.from_dict,
    "reviews": Review.from_dict,
    "assignment": Assignment.from_dict,
    "credentials": CredentialRecord.from_dict,
    "decisions": DecisionRecord.from_dict,
    "chair_flags": ChairFlag.from_dict,
    "messages": OutboxMessage.from_dict,
}


@dataclass(frozen=True)
class StoreState:
    """One consistent, immutable view of everything."""

    version: int = 0
    topics: Mapping[int, Topic] = field(default_factory=dict)
    config: Config = field(default_factory=Config)
    papers: Mapping[int, PaperRecord] = field(default_factory=dict)
    reviewers: Mapping[str, ReviewerProfile] = field(default_factory=dict)
    bids: Mapping[int, Bid] = field(default_factory=dict)
    reviews: Mapping[str, Review] = field(default_factory=dict)
    credentials: Mapping[str, CredentialRecord] = field(default_factory=dict)
    assignment: Optional[Assignment] = None
    decisions: Optional[DecisionRecord] = None
    chair_flags: Mapping[int, ChairFlag] = field(default_factory=dict)
    messages: Mapping[int, OutboxMessage] = field(default_factory=dict)
    # highest bid sequence ever issued; survives bid deletion so retracted
    # sequence numbers are never handed out again
    bid_seq_hwm: int = 0

    # -- convenience accessors ------------------------------------------

    def sorted_bids(self) -> tuple[Bid, ...]:
        return tuple(self.bids[seq] for seq in sorted(self.bids))

    def reviews_for_paper(self, paper_id: int) -> tuple[Review, ...]:
        return tuple(
            self.reviews[k]
            for k in sorted(self.reviews)
            if self.reviews[k].paper_id == paper_id
        )

    def review_of(self, paper_id: int, reviewer_id: str) -> Optional[Review]:
        return self.reviews.get(f"{paper_id}:{reviewer_id}")

    def assigned_reviewers(self, paper_id: int) -> tuple[str, ...]:
        if self.assignment is None:
            return ()
        return self.assignment.reviewers_of(paper_id)

    def paper_accepted(self, paper_id: int) -> bool:
        paper = self.papers.get(paper_id)
        return paper is not None and paper.status.value in ("accepted", "camera-ready-received")


def _apply(state: StoreState, mutation: Mutation) -> StoreState:
    kind = mutation.kind
    if kind not in _DESERIALIZERS:
        raise ValueError(f"unknown record kind {kind!r}")

    if kind == "config":
        if isinstance(mutation, Delete):
            raise ValueError("config cannot be deleted")
        return replace(state, config=mutation.record)
    if kind == "assignment":
        value = None if isinstance(mutation, Delete) else mutation.record
        return replace(state, assignment=value)
    if kind == "decisions":
        value = None if isinstance(mutation, Delete) else mutation.record
        return replace(state, decisions=value)

    attr = kind
    current: Mapping = getattr(state, attr)
    key: object = mutation.id
    if kind in ("topics", "papers", "bids", "chair_flags", "messages"):
        key = int(mutation.id)
    updated = dict(current)
    if isinstance(mutation, Delete):
        updated.pop(key, None)
    else:
        updated[key] = mutation.record
    result = replace(state, **{attr: updated})
    if kind == "bids" and isinstance(mutation, Put):
        result = replace(result, bid_seq_hwm=max(state.bid_seq_hwm, int(key)))
    return result


def _wire_to_mutation(wire: Mapping) -> Mutation:
    kind, rid = wire["kind"], wire["id"]
    if wire["op"] == "del":
        return Delete(kind=kind, id=rid)
    return Put(kind=kind, id=rid, record=_DESERIALIZERS[kind](wire["data"]))


def _entry_checksum(version: int, wire_events: list[dict]) -> str:
    payload = json.dumps(
        {"v": version, "events": wire_events}, sort_keys=True, separators=(",", ":")
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _write_and_sync(path: Path, data: bytes, append: bool = False) -> None:
    """All durable writes funnel through here (also the fault-injection
    seam for crash tests)."""
    flags = os.O_WRONLY | os.O_CREAT | (os.O_APPEND if append else os.O_TRUNC)
    fd = os.open(path, flags, 0o644)
    try:
        os.write(fd, data)
        os.fsync(fd)
    finally:
        os.close(fd)


class Store:
    """File-backed store with a single-writer commit discipline."""

    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)
        self._lock = threading.Lock()
        self._state = StoreState()
        self.root.mkdir(parents=True, exist_ok=True)
        self._load()
        self._materialize_all()

    # -- log replay -----------------------------------------------------

    @property
    def _log_path(self) -> Path:
        return self.root / "events.log"

    def _load(self) -> None:
        state = StoreState()
        if not self._log_path.exists():
            self._state = state
            return
        raw = self._log_path.read_bytes()
        good = 0
        pos = 0
        # an entry only counts with its terminating newline: a torn tail,
        # however complete it looks, was never acknowledged as committed
        while pos < len(raw):
            nl = raw.find(b"\n", pos)
            if nl < 0:
                break
            line = raw[pos:nl]
            pos = nl + 1
            if not line.strip():
                good = pos
                continue
            try:
                entry = json.loads(line.decode("utf-8"))
                version = entry["v"]
                wire_events = entry["events"]
                if entry["sha256"] != _entry_checksum(version, wire_events):
                    break
                if version != state.version + 1:
                    break
                for wire in wire_events:
                    state = _apply(state, _wire_to_mutation(wire))
                state = replace(state, version=version)
            except (ValueError, KeyError, TypeError):
                break
            good = pos
        if good < len(raw):
            # torn or corrupt tail from an interrupted commit: drop it
            with open(self._log_path, "r+b") as f:
                f.truncate(good)
                f.flush()
                os.fsync(f.fileno())
        self._state = state

    # -- public surface ---------------------------------------------------

    @property
    def version(self) -> int:
        return self._state.version

    def snapshot(self) -> StoreState:
        return self._state

    def commit(self, mutations: Sequence[Mutation]) -> int:
        """Apply mutations atomically; returns the new version. An empty
        batch is a no-op and does not bump the version."""
        if not mutations:
            return self._state.version
        with self._lock:
            state = self._state
            for m in mutations:
                state = _apply(state, m)
            version = self._state.version + 1
            wire_events = [m.to_wire() for m in mutations]
            entry = {
                "v": version,
                "events": wire_events,
                "sha256": _entry_checksum(version, wire_events),
            }
            line = json.dumps(entry, sort_keys=True, separators=(",", ":")) + "\n"
            _write_and_sync(self._log_path, line.encode("utf-8"), append=True)
            # visible only after the log entry is durable
            self._state = replace(state, version=version)
            self._materialize(mutations)
            return version

    # -- blobs ------------------------------------------------------------

    def write_blob(self, paper_id: int, name: str, data: bytes) -> str:
        """Store an uploaded file; returns the store-relative path."""
        rel = Path("files") / str(paper_id) / name
        path = self.root / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(path.suffix + ".tmp")
        _write_and_sync(tmp, data)
        os.replace(tmp, path)
        return str(rel)

    def read_blob(self, rel: str) -> bytes:
        path = self.root / rel
        if not path.is_file():
            raise NotFoundError(f"no stored file {rel}")
        return path.read_bytes()

    def remove_blob(self, rel: str) -> None:
        (self.root / rel).unlink(missing_ok=True)

    # -- credentials ------------------------------------------------------

    def authenticate(self, login: str, password: str) -> Credentials:
        """Verify a login/password pair. The failure is deliberately
        identical whether the login exists or not."""
        rec = self._state.credentials.get(login)
        salt = bytes.fromhex(rec.salt) if rec else _DUMMY_SALT
        expected = rec.pw_hash if rec else _DUMMY_HASH
        got = hash_password(password, salt)
        if rec is None or not hmac.compare_digest(got, expected):
            raise AuthenticationError()
        return Credentials(login=rec.login, role=rec.role, subject_id=rec.subject_id)

    # -- materialized views ------------------------------------------------

    def _doc_path(self, kind: str, rid: str) -> Path:
        return self.root / kind / f"{rid}.json"

    def _write_doc(self, kind: str, rid: str, record: object) -> None:
        path = self._doc_path(kind, rid)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(
            json.dumps(record.to_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )

    def _eml_path(self, msg: OutboxMessage) -> Path:
        stamp = f"{msg.created_at:.6f}".rstrip("0").rstrip(".")
        return self.root / "outbox" / f"{msg.kind.value}-{msg.paper_id}-{stamp}.eml"

    def _write_eml(self, msg: OutboxMessage) -> None:
        path = self._eml_path(msg)
        path.parent.mkdir(parents=True, exist_ok=True)
        headers = [
            f"From: {self._state.config.conference_name} <noreply@conference.invalid>",
            f"To: {', '.join(msg.to)}",
        ]
        if msg.cc:
            headers.append(f"Cc: {', '.join(msg.cc)}")
        headers.append(f"Subject: {msg.subject}")
        headers.append(f"Date: {formatdate(msg.created_at)}")
        headers.append(f"X-Message-Kind: {msg.kind.value}")
        path.write_text("\n".join(headers) + "\n\n" + msg.body, encoding="utf-8")

    def _materialize(self, mutations: Sequence[Mutation]) -> None:
        for m in mutations:
            if isinstance(m, Delete):
                self._doc_path(m.kind, m.id).unlink(missing_ok=True)
                continue
            self._write_doc(m.kind, m.id, m.record)
            if m.kind == "messages":
                self._write_eml(m.record)

    def _materialize_all(self) -> None:
        state = self._state
        docs: dict[str, dict[str, object]] = {
            "topics": {str(k): v for k, v in state.topics.items()},
            "config": {_SINGLETON: state.config},
            "papers": {str(k): v for k, v in state.papers.items()},
            "reviewers": dict(state.reviewers),
            "bids": {str(k): v for k, v in state.bids.items()},
            "reviews": dict(state.reviews),
            "credentials": dict(state.credentials),
            "chair_flags": {str(k): v for k, v in state.chair_flags.items()},
            "messages": {str(k): v for k, v in state.messages.items()},
        }
        if state.assignment is not None:
            docs["assignment"] = {_SINGLETON: state.assignment}
        if state.decisions is not None:
            docs["decisions"] = {_SINGLETON: state.decisions}
        for kind, records in docs.items():
            kind_dir = self.root / kind
            current = {f"{rid}.json" for rid in records}
            if kind_dir.is_dir():
                for leftover in kind_dir.glob("*.json"):
                    if leftover.name not in current:
                        leftover.unlink()
            for rid, record in records.items():
                self._write_doc(kind, rid, record)
        for msg in state.messages.values():
            self._write_eml(msg)


# -- authorization matrix ---------------------------------------------------

# action -> roles allowed outright (maintainer implicitly allowed everywhere)
_ROLE_MATRIX: dict[str, set[Role]] = {
    "paper.update": {Role.AUTHOR_CONTACT},
    "paper.upload": {Role.AUTHOR_CONTACT},
    "paper.upload-camera-ready": {Role.AUTHOR_CONTACT},
    "paper.read-file": {Role.AUTHOR_CONTACT, Role.REVIEWER, Role.CHAIR},
    "abstracts.read": {Role.REVIEWER, Role.CHAIR},
    "bid.submit": {Role.REVIEWER},
    "bids.read": {Role.REVIEWER, Role.CHAIR},
    "coi.declare": {Role.REVIEWER},
    "dashboard.read": {Role.REVIEWER, Role.CHAIR},
    "review.submit": {Role.REVIEWER, Role.CHAIR},
    "review.read": {Role.REVIEWER, Role.CHAIR},
    "message.send": {Role.REVIEWER},
    "volunteer": {Role.REVIEWER},
    "overview.progress": {Role.REVIEWER, Role.CHAIR},
    "overview.states": {Role.REVIEWER, Role.CHAIR},
    "overview.full": {Role.CHAIR},
    "decision.record": {Role.CHAIR},
    "distribution.report": {Role.CHAIR},
    "flags.read": {Role.CHAIR},
    "notification.generate": set(),
    "proceedings.build": set(),
    "config.edit": set(),
}


def authorize(
    state: StoreState,
    creds: Credentials,
    action: str,
    subject: Optional[object] = None,
) -> None:
    """Enforce the role matrix; raises AuthorizationError carrying the id
    of the violated rule. ``subject`` is a paper id for paper-scoped
    actions and a reviewer id for reviewer-scoped ones."""
    if creds.role is Role.MAINTAINER:
        return
    allowed = _ROLE_MATRIX.get(action)
    if allowed is None:
        raise AuthorizationError("unknown-action", f"unknown action {action}")
    if creds.role not in allowed:
        raise AuthorizationError(f"role-not-permitted:{action}")

    if creds.role is Role.AUTHOR_CONTACT and action.startswith("paper."):
        if creds.paper_id != subject:
            raise AuthorizationError(
                "author-contact-own-paper-only",
                "credentials are bound to a different paper",
            )
    if creds.role is Role.REVIEWER:
        if action in ("paper.read-file", "review.submit", "review.read", "message.send"):
            if creds.subject_id not in state.assigned_reviewers(int(subject)):
                raise AuthorizationError(
                    "reviewer-assigned-papers-only", "not a reviewer of this paper"
                )
        if action in ("dashboard.read", "bids.read") and subject != creds.subject_id:
            raise AuthorizationError(
                "reviewer-own-view-only", "cannot read another reviewer's view"
            )
