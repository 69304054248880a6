"""Session plan parsing, TOC pagination and the author index."""

from __future__ import annotations

import random
from dataclasses import replace

import pytest

from confreview.errors import ValidationFailure
from confreview.model import Author, PaperStatus
from confreview.proceedings import (
    SessionPlan,
    generate_author_index,
    generate_toc,
    index_json,
    index_text,
    parse_sessions_template,
    toc_json,
    toc_text,
)

from .oracles import make_paper, prefix_sum_starts


def _camera_ready(pid, pages, authors=None):
    paper = make_paper(pid, frozenset({1}))
    return replace(
        paper,
        status=PaperStatus.CAMERA_READY,
        camera_ready_file=f"files/{pid}/camera-ready.pdf",
        page_count=pages,
        authors=authors or paper.authors,
    )


class TestParseSessions:
    def test_basic(self):
        papers = {3: _camera_ready(3, 10), 1: _camera_ready(1, 8)}
        result = parse_sessions_template("SESSION: Types\nPAPER: 3\nPAPER: 1\n", papers)
        assert result.ok
        assert result.plan.sessions == (("Types", (3, 1)),)

    def test_duplicate_paper(self):
        papers = {3: _camera_ready(3, 10)}
        text = "SESSION: A\nPAPER: 3\nSESSION: B\nPAPER: 3\n"
        result = parse_sessions_template(text, papers)
        assert not result.ok
        assert any("duplicate paper 3" in e.message for e in result.errors)

    def test_empty_session(self):
        papers = {3: _camera_ready(3, 10)}
        result = parse_sessions_template("SESSION: A\nSESSION: B\nPAPER: 3\n", papers)
        assert not result.ok
        assert any("has no papers" in e.message for e in result.errors)

    def test_unknown_and_not_camera_ready(self):
        paper = replace(make_paper(2, frozenset({1})), status=PaperStatus.ACCEPTED)
        result = parse_sessions_template(
            "SESSION: A\nPAPER: 2\nPAPER: 9\n", {2: paper}
        )
        messages = [e.message for e in result.errors]
        assert "paper 2 not camera-ready" in messages
        assert "unknown paper 9" in messages

    def test_paper_before_session(self):
        result = parse_sessions_template("PAPER: 1\n", {1: _camera_ready(1, 5)})
        assert any("before any SESSION" in e.message for e in result.errors)

    def test_blank_lines_ignored(self):
        papers = {1: _camera_ready(1, 5)}
        result = parse_sessions_template("\nSESSION: A\n\nPAPER: 1\n\n", papers)
        assert result.ok


class TestToc:
    def test_prefix_sum_starts(self):
        papers = {
            1: _camera_ready(1, 10),
            2: _camera_ready(2, 12),
            3: _camera_ready(3, 8),
        }
        plan = SessionPlan((("S", (1, 2, 3)),))
        toc = generate_toc(plan, papers)
        starts = [e.start_page for s in toc.sessions for e in s.entries]
        assert starts == [1, 11, 23]
        assert starts == prefix_sum_starts([10, 12, 8])
        assert toc.total_pages == 30

    def test_single_paper(self):
        plan = SessionPlan((("S", (1,)),))
        toc = generate_toc(plan, {1: _camera_ready(1, 9)})
        assert toc.sessions[0].entries[0].start_page == 1

    def test_missing_page_count_names_paper(self):
        papers = {
            1: _camera_ready(1, 10),
            2: replace(_camera_ready(2, 5), page_count=None),
        }
        plan = SessionPlan((("S", (1, 2)),))
        with pytest.raises(ValidationFailure, match="paper 2: no page count"):
            generate_toc(plan, papers)

    def test_page_offset(self):
        plan = SessionPlan((("S", (1, 2)),))
        papers = {1: _camera_ready(1, 4), 2: _camera_ready(2, 4)}
        toc = generate_toc(plan, papers, page_offset=10)
        starts = [e.start_page for e in toc.sessions[0].entries]
        assert starts == [11, 15]

    def test_renderings(self):
        plan = SessionPlan((("Session One", (1,)),))
        toc = generate_toc(plan, {1: _camera_ready(1, 3)})
        assert "Session One" in toc_text(toc)
        data = toc_json(toc)
        assert data["sessions"][0]["papers"][0]["start_page"] == 1


class TestAuthorIndex:
    def test_author_on_two_papers(self):
        shared = Author("Ann", "Smith", "X")
        papers = {
            1: _camera_ready(1, 10, authors=(shared,)),
            2: _camera_ready(2, 12, authors=(Author("Bo", "Chen", "Y"),)),
            3: _camera_ready(3, 8, authors=(shared, Author("Cy", "Davis", "Z"))),
        }
        plan = SessionPlan((("S", (1, 2, 3)),))
        index = generate_author_index(plan, papers)
        smith = next(e for e in index.entries if e.last_name == "Smith")
        assert smith.pages == (1, 23)
        assert "Smith, Ann — 1, 23" in index_text(index)

    def test_same_last_name_ordered_by_first(self):
        papers = {
            1: _camera_ready(1, 5, authors=(Author("Zoe", "Lee", ""),)),
            2: _camera_ready(2, 5, authors=(Author("Amy", "Lee", ""),)),
        }
        plan = SessionPlan((("S", (1, 2)),))
        index = generate_author_index(plan, papers)
        assert [e.first_name for e in index.entries] == ["Amy", "Zoe"]

    def test_case_insensitive_sort(self):
        papers = {
            1: _camera_ready(1, 5, authors=(Author("a", "von neumann", ""),)),
            2: _camera_ready(2, 5, authors=(Author("b", "Watts", ""),)),
        }
        plan = SessionPlan((("S", (1, 2)),))
        index = generate_author_index(plan, papers)
        assert [e.last_name for e in index.entries] == ["von neumann", "Watts"]

    def test_empty_plan_rejected(self):
        with pytest.raises(ValidationFailure):
            generate_toc(SessionPlan(()), {})


class TestRandomPlans:
    def test_invariants(self):
        rng = random.Random(5150)
        for _ in range(50):
            n = rng.randint(1, 12)
            papers = {}
            author_pool = [Author(f"F{i}", f"L{i % 5}", "") for i in range(8)]
            for pid in range(1, n + 1):
                papers[pid] = _camera_ready(
                    pid,
                    rng.randint(1, 30),
                    authors=tuple(rng.sample(author_pool, rng.randint(1, 3))),
                )
            ids = list(papers)
            rng.shuffle(ids)
            sessions = []
            while ids:
                k = rng.randint(1, min(4, len(ids)))
                sessions.append((f"S{len(sessions)}", tuple(ids[:k])))
                ids = ids[k:]
            plan = SessionPlan(tuple(sessions))

            toc = generate_toc(plan, papers)
            entries = [e for s in toc.sessions for e in s.entries]
            starts = [e.start_page for e in entries]
            counts = [e.page_count for e in entries]

            assert starts == prefix_sum_starts(counts)
            assert all(b > a for a, b in zip(starts, starts[1:]))
            assert starts[-1] + counts[-1] - 1 == sum(counts) == toc.total_pages

            index = generate_author_index(plan, papers)
            index_pages = {p for e in index.entries for p in e.pages}
            assert index_pages <= set(starts)
            # every author of every planned paper appears exactly once
            names = [(e.first_name, e.last_name) for e in index.entries]
            assert len(names) == len(set(names))
            expected_names = {
                (a.first_name, a.last_name)
                for pid in plan.paper_ids
                for a in papers[pid].authors
            }
            assert set(names) == expected_names

    def test_deterministic(self):
        papers = {1: _camera_ready(1, 5), 2: _camera_ready(2, 7)}
        plan = SessionPlan((("S", (2, 1)),))
        a = toc_json(generate_toc(plan, papers))
        b = toc_json(generate_toc(plan, papers))
        assert a == b
        assert index_json(generate_author_index(plan, papers)) == index_json(
            generate_author_index(plan, papers)
        )
