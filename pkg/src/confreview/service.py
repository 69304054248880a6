"""HTTP API over the workflow.

JSON over HTTP with basic-credential auth; one endpoint per workflow or
overview operation. Module errors map one-to-one onto status codes:
401 authentication, 403 authorization, 404 unknown entity, 409 lifecycle
violation, 422 validation.

Reads are pure functions of (store version, credentials); the reviewer
dashboard carries an ETag derived from the payload the reviewer can see,
so polling clients get 304 until something visible to them changes.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Optional

from fastapi import Depends, FastAPI, File, Form, Request, Response, UploadFile
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.security import HTTPBasic, HTTPBasicCredentials
from pydantic import BaseModel, Field

from . import overviews as ov
from .assignment import distribution_report, report_json, report_text
from .errors import (
    AuthenticationError,
    AuthorizationError,
    ConfReviewError,
    LifecycleError,
    NotFoundError,
    ValidationFailure,
)
from .model import Author, ContactInfo, Credentials, Role, effective_bids
from .proceedings import (
    generate_author_index,
    generate_toc,
    index_json,
    index_text,
    parse_sessions_template,
    toc_json,
    toc_text,
)
from .registry import authorize
from .workflow import ConferenceService, PaperMetadata

__all__ = ["create_app"]

_basic = HTTPBasic(auto_error=False)


class ContactIn(BaseModel):
    name: str
    email: str
    phone: str = ""
    fax: str = ""
    address: str = ""


class AuthorIn(BaseModel):
    first_name: str
    last_name: str
    affiliation: str = ""


class PaperIn(BaseModel):
    title: str
    abstract: str
    contact: ContactIn
    authors: list[AuthorIn]
    topics: list[int]
    remarks: str = ""

    def to_metadata(self) -> PaperMetadata:
        return PaperMetadata(
            title=self.title,
            abstract=self.abstract,
            contact=ContactInfo(**self.contact.model_dump()),
            authors=tuple(Author(**a.model_dump()) for a in self.authors),
            topics=frozenset(self.topics),
            remarks=self.remarks,
        )


class BidSelection(BaseModel):
    paper_id: int
    priority: str


class BidsIn(BaseModel):
    selections: list[BidSelection]


class CoiIn(BaseModel):
    paper_id: int


class ReviewIn(BaseModel):
    paper_id: int
    classification: str
    expertise: str
    comments_for_authors: str = ""
    comments_for_pc: str = ""
    reviewer_id: Optional[str] = None


class ParseIn(BaseModel):
    text: str


class MessageIn(BaseModel):
    text: str


class DecisionsIn(BaseModel):
    accept: list[int] = Field(default_factory=list)


class ProceedingsIn(BaseModel):
    sessions_text: str


def _review_out(review) -> dict:
    data = review.to_dict()
    data.pop("comments_for_pc", None)  # only present where explicitly allowed
    return data


def create_app(service: ConferenceService, ui_dir: Optional[Path] = None) -> FastAPI:
    app = FastAPI(title="confreview", version="0.1.0")
    store = service.store

    # -- error mapping ------------------------------------------------------

    @app.exception_handler(ConfReviewError)
    async def domain_error(request: Request, exc: ConfReviewError):
        if isinstance(exc, ValidationFailure):
            return JSONResponse(status_code=422, content={"detail": exc.findings})
        if isinstance(exc, AuthenticationError):
            return JSONResponse(
                status_code=401,
                content={"detail": str(exc)},
                headers={"WWW-Authenticate": "Basic"},
            )
        if isinstance(exc, AuthorizationError):
            return JSONResponse(
                status_code=403, content={"detail": str(exc), "rule": exc.rule_id}
            )
        if isinstance(exc, NotFoundError):
            return JSONResponse(status_code=404, content={"detail": str(exc)})
        if isinstance(exc, LifecycleError):
            return JSONResponse(status_code=409, content={"detail": str(exc)})
        return JSONResponse(status_code=500, content={"detail": str(exc)})

    # -- auth -----------------------------------------------------------------

    def current_user(
        credentials: Optional[HTTPBasicCredentials] = Depends(_basic),
    ) -> Credentials:
        if credentials is None:
            raise AuthenticationError()
        return store.authenticate(credentials.username, credentials.password)

    # -- public -----------------------------------------------------------------

    @app.get("/health")
    def health():
        return {"ok": True, "version": store.version}

    @app.get("/topics")
    def topics():
        state = store.snapshot()
        return [state.topics[tid].to_dict() for tid in sorted(state.topics)]

    @app.post("/papers", status_code=201)
    def submit_paper(body: PaperIn):
        result = service.submit_phase1(body.to_metadata())
        return {
            "id": result.paper_id,
            "login": result.login,
            "warnings": list(result.warnings),
        }

    # -- authors ------------------------------------------------------------------

    @app.put("/papers/{paper_id}")
    def update_paper(paper_id: int, body: PaperIn, user: Credentials = Depends(current_user)):
        record = service.update_phase1(user, paper_id, body.to_metadata())
        return record.to_dict()

    @app.put("/papers/{paper_id}/file")
    async def upload_file(
        paper_id: int,
        file: UploadFile = File(...),
        user: Credentials = Depends(current_user),
    ):
        data = await file.read()
        record = service.upload_paper(user, paper_id, data, file.filename or "paper.bin")
        return record.to_dict()

    @app.put("/papers/{paper_id}/camera-ready")
    async def upload_camera_ready(
        paper_id: int,
        file: UploadFile = File(...),
        page_count: int = Form(...),
        user: Credentials = Depends(current_user),
    ):
        data = await file.read()
        record = service.upload_camera_ready(
            user, paper_id, data, file.filename or "camera-ready.bin", page_count
        )
        return record.to_dict()

    @app.get("/papers/{paper_id}/file")
    def download_file(paper_id: int, user: Credentials = Depends(current_user)):
        state = store.snapshot()
        paper = state.papers.get(paper_id)
        if paper is None:
            raise NotFoundError(f"unknown paper {paper_id}")
        authorize(state, user, "paper.read-file", paper_id)
        if paper.paper_file is None:
            raise NotFoundError(f"paper {paper_id} has no uploaded file")
        return Response(
            content=store.read_blob(paper.paper_file),
            media_type="application/octet-stream",
        )

    # -- bidding ---------------------------------------------------------------------

    @app.get("/topics/{topic_id}/abstracts")
    def topic_abstracts(topic_id: int, user: Credentials = Depends(current_user)):
        state = store.snapshot()
        authorize(state, user, "abstracts.read", None)
        if topic_id not in state.topics:
            raise NotFoundError(f"unknown topic {topic_id}")
        data = ov.topic_abstract_overviews(state)
        return next(t for t in data["topics"] if t["topic_id"] == topic_id)

    @app.post("/bids")
    def submit_bids(body: BidsIn, user: Credentials = Depends(current_user)):
        outcome = service.submit_bids(
            user, [(s.paper_id, s.priority) for s in body.selections]
        )
        return {
            "applied": [b.to_dict() for b in outcome.applied],
            "rejected": [{"paper_id": pid, "reason": reason} for pid, reason in outcome.rejected],
            "effective": [b.to_dict() for b in outcome.effective],
        }

    @app.get("/bids")
    def my_bids(user: Credentials = Depends(current_user)):
        state = store.snapshot()
        authorize(state, user, "bids.read", user.subject_id)
        mine = [b for b in state.sorted_bids() if b.reviewer_id == user.subject_id]
        eff = effective_bids(mine)
        return {"effective": [eff[k].to_dict() for k in sorted(eff)]}

    @app.post("/coi")
    def declare_coi(body: CoiIn, user: Credentials = Depends(current_user)):
        profile = service.declare_coi(user, body.paper_id)
        return {"coi_papers": sorted(profile.coi_papers)}

    # -- reviewing ----------------------------------------------------------------------

    @app.get("/reviewers/{reviewer_id}/dashboard")
    def dashboard(
        reviewer_id: str,
        request: Request,
        user: Credentials = Depends(current_user),
    ):
        state = store.snapshot()
        authorize(state, user, "dashboard.read", reviewer_id)
        if reviewer_id not in state.reviewers:
            raise NotFoundError(f"unknown reviewer {reviewer_id}")
        payload = ov.reviewer_dashboard(state, reviewer_id)
        body = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        etag = '"' + hashlib.sha256(body.encode("utf-8")).hexdigest() + '"'
        headers = {"ETag": etag, "X-Store-Version": str(state.version)}
        if request.headers.get("if-none-match") == etag:
            return Response(status_code=304, headers=headers)
        return Response(content=body, media_type="application/json", headers=headers)

    @app.get("/reviews/template")
    def review_template(paper_id: int, user: Credentials = Depends(current_user)):
        return PlainTextResponse(service.render_review_template(user, paper_id))

    @app.post("/reviews", status_code=201)
    def submit_review(body: ReviewIn, user: Credentials = Depends(current_user)):
        review = service.submit_review(
            user,
            body.paper_id,
            body.classification,
            body.expertise,
            body.comments_for_authors,
            body.comments_for_pc,
            reviewer_id=body.reviewer_id,
        )
        return review.to_dict()

    @app.post("/reviews/parse", status_code=201)
    def parse_review(body: ParseIn, user: Credentials = Depends(current_user)):
        result = service.submit_parsed_review(user, body.text)
        if not result.ok:
            return JSONResponse(
                status_code=422,
                content={"detail": [str(e) for e in result.errors]},
            )
        return result.review.to_dict()

    @app.get("/papers/{paper_id}/reviews")
    def paper_reviews(paper_id: int, user: Credentials = Depends(current_user)):
        reviews = service.visible_reviews(user, paper_id)
        include_pc = user.role in (Role.CHAIR, Role.MAINTAINER)
        return [r.to_dict() if include_pc else _review_out(r) for r in reviews]

    @app.post("/papers/{paper_id}/messages", status_code=201)
    def send_message(paper_id: int, body: MessageIn, user: Credentials = Depends(current_user)):
        message = service.send_conflict_message(user, paper_id, body.text)
        return message.to_dict()

    @app.get("/papers/{paper_id}/messages")
    def read_messages(paper_id: int, user: Credentials = Depends(current_user)):
        return [m.to_dict() for m in service.discussion_log(user, paper_id)]

    @app.post("/papers/{paper_id}/volunteer")
    def volunteer(paper_id: int, user: Credentials = Depends(current_user)):
        assignment = service.volunteer_for_paper(user, paper_id)
        return {"paper_id": paper_id, "reviewers": list(assignment.reviewers_of(paper_id))}

    # -- overviews ------------------------------------------------------------------------

    def _overview(state, kind: str):
        if kind == "progress":
            rows = ov.progress_overview(state)
            return rows, ov.progress_text(rows)
        if kind == "all":
            rows = ov.all_reviews_overview(state)
            return rows, ov.all_reviews_text(rows)
        if kind == "categories":
            rows = ov.categories_overview(state)
            return rows, ov.categories_text(rows)
        if kind == "champions":
            rows = ov.champions_overview(state)
            return rows, ov.champions_text(rows)
        if kind == "low-expertise":
            rows = ov.low_expertise_overview(state)
            return rows, ov.low_expertise_text(rows)
        if kind == "states":
            rows = ov.states_overview(state)
            return rows, json.dumps(rows, indent=1)
        raise NotFoundError(f"unknown overview {kind}")

    _OVERVIEW_ACTION = {
        "progress": "overview.progress",
        "states": "overview.states",
        "all": "overview.full",
        "categories": "overview.full",
        "champions": "overview.full",
        "low-expertise": "overview.full",
    }

    @app.get("/overviews/{kind}")
    def overview(kind: str, format: str = "json", user: Credentials = Depends(current_user)):
        state = store.snapshot()
        action = _OVERVIEW_ACTION.get(kind)
        if action is None:
            raise NotFoundError(f"unknown overview {kind}")
        authorize(state, user, action, None)
        rows, text = _overview(state, kind)
        if format == "text":
            return PlainTextResponse(text)
        return rows

    @app.get("/distribution/report")
    def distribution(format: str = "json", user: Credentials = Depends(current_user)):
        state = store.snapshot()
        authorize(state, user, "distribution.report", None)
        if state.assignment is None:
            raise LifecycleError("no assignment yet")
        eff = effective_bids(state.sorted_bids())
        report = distribution_report(state.assignment, tuple(eff[k] for k in sorted(eff)))
        if format == "text":
            return PlainTextResponse(report_text(report))
        return report_json(report)

    @app.get("/flags")
    def chair_flags(user: Credentials = Depends(current_user)):
        state = store.snapshot()
        authorize(state, user, "flags.read", None)
        return [state.chair_flags[k].to_dict() for k in sorted(state.chair_flags)]

    # -- decisions, notifications, proceedings ----------------------------------------------

    @app.post("/decisions", status_code=201)
    def decisions(body: DecisionsIn, user: Credentials = Depends(current_user)):
        record = service.record_decisions(user, set(body.accept))
        return record.to_dict()

    @app.post("/notifications", status_code=201)
    def notifications(user: Credentials = Depends(current_user)):
        messages = service.generate_notifications(user)
        return {
            "count": len(messages),
            "messages": [
                {"paper_id": m.paper_id, "to": list(m.to), "subject": m.subject}
                for m in messages
            ],
        }

    @app.post("/proceedings", status_code=201)
    def proceedings(body: ProceedingsIn, format: str = "json",
                    user: Credentials = Depends(current_user)):
        state = store.snapshot()
        authorize(state, user, "proceedings.build", None)
        result = parse_sessions_template(body.sessions_text, state.papers)
        if not result.ok:
            return JSONResponse(
                status_code=422, content={"detail": [str(e) for e in result.errors]}
            )
        toc = generate_toc(result.plan, state.papers, page_offset=state.config.page_offset)
        index = generate_author_index(
            result.plan, state.papers, page_offset=state.config.page_offset
        )
        if format == "text":
            return PlainTextResponse(toc_text(toc) + "\n" + index_text(index))
        return {"toc": toc_json(toc), "author_index": index_json(index)}

    # -- optional static UI -----------------------------------------------------------------

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
