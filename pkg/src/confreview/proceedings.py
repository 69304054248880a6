"""Proceedings front matter: session plan parsing, table of contents with
computed start pages, and the author index.

Start pages are a prefix sum over the camera-ready page counts in plan
order, so the TOC is exact as long as every planned paper reported its
page count at camera-ready upload.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import ValidationFailure
from .forms import FormError
from .model import PaperRecord, PaperStatus

__all__ = [
    "SessionPlan",
    "SessionParseResult",
    "TocEntry",
    "TocSession",
    "TocDocument",
    "IndexEntry",
    "AuthorIndex",
    "parse_sessions_template",
    "generate_toc",
    "generate_author_index",
    "toc_text",
    "toc_json",
    "index_text",
    "index_json",
]


@dataclass(frozen=True)
class SessionPlan:
    sessions: tuple[tuple[str, tuple[int, ...]], ...]

    @property
    def paper_ids(self) -> tuple[int, ...]:
        return tuple(pid for _, papers in self.sessions for pid in papers)


@dataclass(frozen=True)
class SessionParseResult:
    plan: Optional[SessionPlan]
    errors: tuple[FormError, ...]

    @property
    def ok(self) -> bool:
        return self.plan is not None


def parse_sessions_template(
    text: str, papers: Mapping[int, PaperRecord]
) -> SessionParseResult:
    """Parse the maintainer's session template.

    Grammar: ``SESSION: <title>`` lines, each followed by one or more
    ``PAPER: <id>`` lines; blank lines ignored. All defects are collected
    and reported together.
    """
    errors: list[FormError] = []
    sessions: list[tuple[str, list[int]]] = []
    seen: dict[int, int] = {}

    for lineno, raw in enumerate(text.replace("\r\n", "\n").split("\n"), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("SESSION:"):
            title = line[len("SESSION:") :].strip()
            if not title:
                errors.append(FormError(lineno, "session title empty"))
            if sessions and not sessions[-1][1]:
                errors.append(FormError(lineno, f"session {sessions[-1][0]!r} has no papers"))
            sessions.append((title, []))
        elif line.startswith("PAPER:"):
            value = line[len("PAPER:") :].strip()
            if not sessions:
                errors.append(FormError(lineno, "PAPER line before any SESSION"))
                continue
            if not (value.isdigit() and int(value) > 0):
                errors.append(FormError(lineno, f"invalid paper id {value!r}"))
                continue
            pid = int(value)
            if pid in seen:
                errors.append(FormError(lineno, f"duplicate paper {pid} (first at line {seen[pid]})"))
                continue
            seen[pid] = lineno
            paper = papers.get(pid)
            if paper is None:
                errors.append(FormError(lineno, f"unknown paper {pid}"))
                continue
            if paper.status is not PaperStatus.CAMERA_READY:
                errors.append(FormError(lineno, f"paper {pid} not camera-ready"))
                continue
            sessions[-1][1].append(pid)
        else:
            errors.append(FormError(lineno, f"unexpected line {line!r}"))

    if sessions and not sessions[-1][1]:
        errors.append(FormError(0, f"session {sessions[-1][0]!r} has no papers"))
    if not sessions:
        errors.append(FormError(0, "no sessions"))

    if errors:
        return SessionParseResult(plan=None, errors=tuple(sorted(errors, key=lambda e: e.line)))
    return SessionParseResult(
        plan=SessionPlan(tuple((t, tuple(p)) for t, p in sessions)), errors=()
    )


@dataclass(frozen=True)
class TocEntry:
    paper_id: int
    title: str
    authors: tuple[str, ...]
    start_page: int
    page_count: int


@dataclass(frozen=True)
class TocSession:
    title: str
    entries: tuple[TocEntry, ...]


@dataclass(frozen=True)
class TocDocument:
    sessions: tuple[TocSession, ...]
    total_pages: int


def generate_toc(
    plan: SessionPlan,
    papers: Mapping[int, PaperRecord],
    *,
    page_offset: int = 0,
) -> TocDocument:
    """Number the planned papers: the first starts at page 1 + offset, each
    next one right after the previous paper's last page."""
    if not plan.sessions:
        raise ValidationFailure("plan has no sessions")
    next_page = 1 + page_offset
    sessions: list[TocSession] = []
    for title, pids in plan.sessions:
        entries: list[TocEntry] = []
        for pid in pids:
            paper = papers.get(pid)
            if paper is None:
                raise ValidationFailure(f"unknown paper {pid}")
            if paper.page_count is None:
                raise ValidationFailure(f"paper {pid}: no page count")
            entries.append(
                TocEntry(
                    paper_id=pid,
                    title=paper.title,
                    authors=tuple(
                        f"{a.first_name} {a.last_name}".strip() for a in paper.authors
                    ),
                    start_page=next_page,
                    page_count=paper.page_count,
                )
            )
            next_page += paper.page_count
        sessions.append(TocSession(title=title, entries=tuple(entries)))
    return TocDocument(sessions=tuple(sessions), total_pages=next_page - 1 - page_offset)


@dataclass(frozen=True)
class IndexEntry:
    last_name: str
    first_name: str
    pages: tuple[int, ...]


@dataclass(frozen=True)
class AuthorIndex:
    entries: tuple[IndexEntry, ...]


def generate_author_index(
    plan: SessionPlan,
    papers: Mapping[int, PaperRecord],
    *,
    page_offset: int = 0,
) -> AuthorIndex:
    """One entry per distinct (first, last) author name, with the start
    pages of every paper they appear on."""
    toc = generate_toc(plan, papers, page_offset=page_offset)
    pages_by_author: dict[tuple[str, str], list[int]] = {}
    for session in toc.sessions:
        for entry in session.entries:
            paper = papers[entry.paper_id]
            for author in paper.authors:
                key = (author.first_name, author.last_name)
                pages_by_author.setdefault(key, []).append(entry.start_page)

    entries = [
        IndexEntry(last_name=last, first_name=first, pages=tuple(sorted(set(pages))))
        for (first, last), pages in pages_by_author.items()
    ]
    entries.sort(
        key=lambda e: (e.last_name.lower(), e.first_name.lower(), e.last_name, e.first_name)
    )
    return AuthorIndex(entries=tuple(entries))


def toc_text(toc: TocDocument) -> str:
    lines = ["Table of Contents", ""]
    for session in toc.sessions:
        lines.append(session.title)
        lines.append("-" * len(session.title))
        for e in session.entries:
            lines.append(f"  {e.title}")
            lines.append(f"    {', '.join(e.authors)}  ...  {e.start_page}")
        lines.append("")
    lines.append(f"{toc.total_pages} pages")
    return "\n".join(lines) + "\n"


def toc_json(toc: TocDocument) -> dict:
    return {
        "sessions": [
            {
                "title": s.title,
                "papers": [
                    {
                        "id": e.paper_id,
                        "title": e.title,
                        "authors": list(e.authors),
                        "start_page": e.start_page,
                        "page_count": e.page_count,
                    }
                    for e in s.entries
                ],
            }
            for s in toc.sessions
        ],
        "total_pages": toc.total_pages,
    }


def index_text(index: AuthorIndex) -> str:
    lines = ["Author Index", ""]
    for e in index.entries:
        pages = ", ".join(str(p) for p in e.pages)
        lines.append(f"{e.last_name}, {e.first_name} — {pages}")
    return "\n".join(lines) + "\n"


def index_json(index: AuthorIndex) -> dict:
    return {
        "authors": [
            {
                "last_name": e.last_name,
                "first_name": e.first_name,
                "pages": list(e.pages),
            }
            for e in index.entries
        ]
    }
