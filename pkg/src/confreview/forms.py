"""Off-line review forms: template rendering and tolerant parsing.

Reviewers who prefer email over the web forms receive a plain-text
template, fill it in off-line and mail it back. The parser checks the
returned form and reports every defect it finds (with line numbers)
rather than stopping at the first.

Grammar (normative for this system):

    PAPER: <id>
    REVIEWER: <id>
    CLASSIFICATION: <A|B|C|D>
    EXPERTISE: <X|Y|Z>
    ---COMMENTS FOR AUTHORS---
    <free text>
    ---COMMENTS FOR PC---
    <free text>
    ---END---

Labels and section markers are exact and uppercase. Accepted deviations:
CRLF line endings, leading/trailing blank lines, and a whole-message
email quote prefix ("> " on every line). A comment line that would read
as a section marker is escaped by one leading space.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Collection, Optional

from .errors import NotFoundError
from .model import Classification, KnowledgeLevel, Review

__all__ = [
    "MARKER_AUTHORS",
    "MARKER_PC",
    "MARKER_END",
    "FormError",
    "ParseResult",
    "render_template",
    "render_filled",
    "parse_review",
]

MARKER_AUTHORS = "---COMMENTS FOR AUTHORS---"
MARKER_PC = "---COMMENTS FOR PC---"
MARKER_END = "---END---"
_MARKERS = (MARKER_AUTHORS, MARKER_PC, MARKER_END)

_FIELDS = ("PAPER", "REVIEWER", "CLASSIFICATION", "EXPERTISE")
_FIELD_RE = re.compile(r"^([A-Z][A-Z ]*?):(.*)$")
_ESCAPED_MARKER_RE = re.compile(
    r"^ ( *(?:" + "|".join(re.escape(m) for m in _MARKERS) + r"))$"
)
_ESCAPABLE_RE = re.compile(
    r"^ *(?:" + "|".join(re.escape(m) for m in _MARKERS) + r")$"
)


@dataclass(frozen=True)
class FormError:
    """One parse defect. ``line`` is 1-based in the original text;
    0 means the defect is about the document as a whole (a missing
    field or marker has no line to point at)."""

    line: int
    message: str

    def __str__(self) -> str:
        where = f"line {self.line}" if self.line else "form"
        return f"{where}: {self.message}"


@dataclass(frozen=True)
class ParseResult:
    review: Optional[Review]
    errors: tuple[FormError, ...]

    @property
    def ok(self) -> bool:
        return self.review is not None


def _escape_comment(text: str) -> list[str]:
    lines = text.split("\n")
    return [" " + ln if _ESCAPABLE_RE.match(ln) else ln for ln in lines]


def _unescape_comment(lines: list[str]) -> str:
    out = []
    for ln in lines:
        m = _ESCAPED_MARKER_RE.match(ln)
        out.append(m.group(1) if m else ln)
    return "\n".join(out)


def render_template(
    paper_id: int,
    reviewer_id: str,
    *,
    known_papers: Optional[Collection[int]] = None,
    known_reviewers: Optional[Collection[str]] = None,
) -> str:
    """The empty form skeleton with ids pre-filled."""
    if known_papers is not None and paper_id not in known_papers:
        raise NotFoundError(f"unknown paper {paper_id}")
    if known_reviewers is not None and reviewer_id not in known_reviewers:
        raise NotFoundError(f"unknown reviewer {reviewer_id}")
    return (
        f"PAPER: {paper_id}\n"
        f"REVIEWER: {reviewer_id}\n"
        "CLASSIFICATION:\n"
        "EXPERTISE:\n"
        f"{MARKER_AUTHORS}\n"
        "\n"
        f"{MARKER_PC}\n"
        "\n"
        f"{MARKER_END}\n"
    )


def render_filled(review: Review) -> str:
    """Render a review back into form text; parse_review inverts this."""
    lines = [
        f"PAPER: {review.paper_id}",
        f"REVIEWER: {review.reviewer_id}",
        f"CLASSIFICATION: {review.classification.value}",
        f"EXPERTISE: {review.expertise.value}",
        MARKER_AUTHORS,
        *_escape_comment(review.comments_for_authors),
        MARKER_PC,
        *_escape_comment(review.comments_for_pc),
        MARKER_END,
    ]
    return "\n".join(lines) + "\n"


def _strip_quoting(lines: list[tuple[int, str]]) -> list[tuple[int, str]]:
    # One quoting level = every non-blank line starts with ">". Stripping is
    # all-or-nothing so comment text that merely contains "> " survives.
    while True:
        significant = [ln for _, ln in lines if ln.strip()]
        if not significant or not all(ln.startswith(">") for ln in significant):
            return lines
        stripped = []
        for no, ln in lines:
            if ln.startswith("> "):
                ln = ln[2:]
            elif ln.startswith(">"):
                ln = ln[1:]
            stripped.append((no, ln))
        lines = stripped


def parse_review(
    text: str,
    *,
    known_papers: Optional[Collection[int]] = None,
    known_reviewers: Optional[Collection[str]] = None,
) -> ParseResult:
    """Parse a filled-in form. Never raises on malformed input: either a
    Review comes back (timestamps zeroed; the workflow stamps them) or
    the exhaustive defect list does."""
    raw_lines = text.replace("\r\n", "\n").split("\n")
    numbered = list(enumerate(raw_lines, start=1))
    numbered = _strip_quoting(numbered)

    # leading/trailing blank lines are tolerated
    while numbered and not numbered[0][1].strip():
        numbered.pop(0)
    while numbered and not numbered[-1][1].strip():
        numbered.pop()

    errors: list[FormError] = []

    marker_pos: dict[str, list[int]] = {m: [] for m in _MARKERS}
    for idx, (_, ln) in enumerate(numbered):
        if ln in marker_pos:
            marker_pos[ln].append(idx)

    for marker in _MARKERS:
        positions = marker_pos[marker]
        if not positions:
            errors.append(FormError(0, f"missing section marker {marker}"))
        for extra in positions[1:]:
            errors.append(FormError(numbered[extra][0], f"duplicate marker {marker}"))

    first_pos = {m: p[0] for m, p in marker_pos.items() if p}
    out_of_order: set[str] = set()
    for left, right in ((MARKER_AUTHORS, MARKER_PC), (MARKER_PC, MARKER_END)):
        if left in first_pos and right in first_pos and first_pos[left] >= first_pos[right]:
            out_of_order.update((left, right))
    for marker in _MARKERS:
        if marker in out_of_order:
            errors.append(
                FormError(numbered[first_pos[marker]][0], f"marker {marker} out of order")
            )

    header_end = min(first_pos.values()) if first_pos else len(numbered)
    fields: dict[str, tuple[str, int]] = {}
    for lineno, ln in numbered[:header_end]:
        if not ln.strip():
            continue
        m = _FIELD_RE.match(ln)
        label = m.group(1) if m else None
        if label not in _FIELDS:
            errors.append(FormError(lineno, f"unexpected line {ln.strip()!r}"))
            continue
        if label in fields:
            errors.append(FormError(lineno, f"duplicate field {label}"))
            continue
        fields[label] = (m.group(2).strip(), lineno)

    for label in _FIELDS:
        if label not in fields:
            errors.append(FormError(0, f"missing field {label}"))

    paper_id: Optional[int] = None
    if "PAPER" in fields:
        value, lineno = fields["PAPER"]
        if value.isdigit() and int(value) > 0:
            paper_id = int(value)
            if known_papers is not None and paper_id not in known_papers:
                errors.append(FormError(lineno, f"unknown paper {paper_id}"))
        else:
            errors.append(FormError(lineno, f"invalid paper id {value!r}"))

    reviewer_id: Optional[str] = None
    if "REVIEWER" in fields:
        value, lineno = fields["REVIEWER"]
        if value:
            reviewer_id = value
            if known_reviewers is not None and reviewer_id not in known_reviewers:
                errors.append(FormError(lineno, f"unknown reviewer {reviewer_id}"))
        else:
            errors.append(FormError(lineno, "empty reviewer id"))

    classification: Optional[Classification] = None
    if "CLASSIFICATION" in fields:
        value, lineno = fields["CLASSIFICATION"]
        try:
            classification = Classification(value)
        except ValueError:
            errors.append(FormError(lineno, f"invalid classification {value!r}"))

    expertise: Optional[KnowledgeLevel] = None
    if "EXPERTISE" in fields:
        value, lineno = fields["EXPERTISE"]
        try:
            expertise = KnowledgeLevel(value)
        except ValueError:
            errors.append(FormError(lineno, f"invalid expertise {value!r}"))

    comments_authors = ""
    comments_pc = ""
    if not out_of_order and all(m in first_pos for m in _MARKERS):
        a, p, e = first_pos[MARKER_AUTHORS], first_pos[MARKER_PC], first_pos[MARKER_END]
        comments_authors = _unescape_comment([ln for _, ln in numbered[a + 1 : p]])
        comments_pc = _unescape_comment([ln for _, ln in numbered[p + 1 : e]])
        for lineno, ln in numbered[e + 1 :]:
            if ln.strip() and ln not in _MARKERS:
                errors.append(FormError(lineno, f"content after {MARKER_END}"))

    if errors:
        return ParseResult(review=None, errors=tuple(sorted(errors, key=lambda e: e.line)))

    assert paper_id is not None and reviewer_id is not None
    assert classification is not None and expertise is not None
    return ParseResult(
        review=Review(
            paper_id=paper_id,
            reviewer_id=reviewer_id,
            classification=classification,
            expertise=expertise,
            comments_for_authors=comments_authors,
            comments_for_pc=comments_pc,
        ),
        errors=(),
    )
