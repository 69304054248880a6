"""Maintainer command line.

The store lives in a directory; every command takes --store (or the
CONFREVIEW_STORE environment variable). `init` scaffolds the editable
config, topics and roster template files and applies the current
contents of config and topics to the store, so the edit-then-rerun loop
is: init, edit the files, init again.

Commands run as the maintainer principal: whoever can reach the store
directory already owns the conference data.
"""

from __future__ import annotations

import csv
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import click

from . import overviews as ov
from .assignment import distribution_report, report_text
from .errors import ConfReviewError
from .model import (
    Config,
    Credentials,
    KnowledgeLevel,
    ReviewerProfile,
    Role,
    Topic,
    Willingness,
)
from .proceedings import (
    generate_author_index,
    generate_toc,
    index_json,
    index_text,
    parse_sessions_template,
    toc_json,
    toc_text,
)
from .registry import Store, generate_password
from .workflow import ConferenceService

MAINTAINER = Credentials("cli", Role.MAINTAINER, "")

CONFIG_TEMPLATE = """\
# Conference configuration: key = value, '#' starts a comment.
# Deadlines accept epoch seconds or ISO dates (2001-06-18 or
# 2001-06-18T23:59:59, interpreted as UTC); leave empty for none.
name = Unnamed Conference
chair_email = chair@example.org
reviewers_per_paper = 4
max_preference_papers = 10
hard_cap_slack = 1
poll_interval_seconds = 300
full_paper_deadline =
camera_ready_deadline =
page_offset = 0
"""

TOPICS_TEMPLATE = """\
# One conference topic per line; ids are assigned by line order.
Example topic one
Example topic two
Example topic three
"""

ROSTER_TEMPLATE = """\
# Reviewer roster: id,name,email,expertise
# expertise: one token per topic, X/Y/Z with optional R or W suffix,
# separated by spaces (e.g. "X YR ZW" for a three-topic conference).
id,name,email,expertise
"""


def _parse_deadline(raw: str):
    raw = raw.strip()
    if not raw:
        return None
    try:
        return float(raw)
    except ValueError:
        pass
    try:
        stamp = datetime.fromisoformat(raw)
    except ValueError:
        raise ConfReviewError(f"cannot parse deadline {raw!r}") from None
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=timezone.utc)
    return stamp.timestamp()


def read_config_file(path: Path) -> Config:
    values: dict[str, str] = {}
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfReviewError(f"bad config line {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key] = value
    return Config(
        conference_name=values.get("name", "Unnamed Conference"),
        chair_email=values.get("chair_email", "chair@example.org"),
        reviewers_per_paper=int(values.get("reviewers_per_paper", "4")),
        max_preference_papers=int(values.get("max_preference_papers", "10")),
        hard_cap_slack=int(values.get("hard_cap_slack", "1")),
        poll_interval_seconds=int(values.get("poll_interval_seconds", "300")),
        full_paper_deadline=_parse_deadline(values.get("full_paper_deadline", "")),
        camera_ready_deadline=_parse_deadline(values.get("camera_ready_deadline", "")),
        page_offset=int(values.get("page_offset", "0")),
    )


def read_topics_file(path: Path) -> list[Topic]:
    topics = []
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            topics.append(Topic(id=len(topics) + 1, name=line))
    return topics


def read_roster_file(path: Path, n_topics: int) -> list[ReviewerProfile]:
    profiles = []
    with open(path, newline="", encoding="utf-8") as f:
        rows = [r for r in csv.DictReader(_strip_comments(f)) if any(r.values())]
    for row in rows:
        tokens = row["expertise"].split()
        if len(tokens) != n_topics:
            raise ConfReviewError(
                f"reviewer {row['id']}: {len(tokens)} expertise tokens for "
                f"{n_topics} topics"
            )
        expertise = {}
        willingness = {}
        for tid, token in enumerate(tokens, start=1):
            if not token or token[0] not in "XYZ" or len(token) > 2:
                raise ConfReviewError(f"reviewer {row['id']}: bad token {token!r}")
            expertise[tid] = KnowledgeLevel(token[0])
            if len(token) == 2:
                if token[1] not in "RW":
                    raise ConfReviewError(f"reviewer {row['id']}: bad token {token!r}")
                willingness[tid] = Willingness(token[1])
        profiles.append(
            ReviewerProfile(
                id=row["id"].strip(),
                name=row["name"].strip(),
                email=row["email"].strip(),
                expertise=expertise,
                willingness=willingness,
            )
        )
    return profiles


def _strip_comments(lines):
    for line in lines:
        if not line.lstrip().startswith("#"):
            yield line


def _service(store_dir: str) -> ConferenceService:
    return ConferenceService(Store(Path(store_dir)))


@click.group()
@click.option(
    "--store",
    "store_dir",
    envvar="CONFREVIEW_STORE",
    default="./confreview-data",
    show_default=True,
    help="Store directory.",
)
@click.pass_context
def main(ctx, store_dir):
    """Conference review management."""
    ctx.ensure_object(dict)
    ctx.obj["store_dir"] = store_dir


def _fail(exc: BaseException):
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


@main.command()
@click.pass_context
def init(ctx):
    """Scaffold config/topic/roster files and apply config + topics."""
    store_dir = Path(ctx.obj["store_dir"])
    store_dir.mkdir(parents=True, exist_ok=True)
    scaffolded = []
    for name, template in (
        ("conference.cfg", CONFIG_TEMPLATE),
        ("topics.txt", TOPICS_TEMPLATE),
        ("reviewers.csv", ROSTER_TEMPLATE),
    ):
        path = store_dir / name
        if not path.exists():
            path.write_text(template, encoding="utf-8")
            scaffolded.append(name)
    try:
        service = _service(ctx.obj["store_dir"])
        config = read_config_file(store_dir / "conference.cfg")
        topics = read_topics_file(store_dir / "topics.txt")
        service.init_conference(config, topics)
        state = service.store.snapshot()
        for login, role in (("chair", Role.CHAIR), ("maintainer", Role.MAINTAINER)):
            if login not in state.credentials:
                password = generate_password()
                service.create_principal(login, password, role)
                click.echo(f"created {role.value} login {login!r} password {password}")
    except ConfReviewError as exc:
        _fail(exc)
    if scaffolded:
        click.echo(f"scaffolded {', '.join(scaffolded)} in {store_dir}")
    click.echo(
        f"applied config ({config.conference_name}) and {len(topics)} topics"
    )


@main.command("import-reviewers")
@click.argument("roster", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def import_reviewers(ctx, roster):
    """Load the reviewer roster CSV and issue credentials."""
    try:
        service = _service(ctx.obj["store_dir"])
        profiles = read_roster_file(
            Path(roster), n_topics=len(service.store.snapshot().topics)
        )
        if not profiles:
            raise ConfReviewError("roster has no reviewers")
        issued = service.import_reviewers(profiles)
    except ConfReviewError as exc:
        _fail(exc)
    click.echo("login,password")
    for login, password in issued:
        click.echo(f"{login},{password}")


@main.command()
@click.option("--commit", is_flag=True, help="Persist the proposal to the store.")
@click.pass_context
def distribute(ctx, commit):
    """Run the paper distribution; dry-run unless --commit is given."""
    try:
        service = _service(ctx.obj["store_dir"])
        assignment = service.propose()
        inp = service.distribution_input()
        report = distribution_report(assignment, inp.bids)
        click.echo(report_text(report), nl=False)
        if commit:
            version = service.commit_assignment(assignment)
            click.echo(f"committed as store version {version}")
        else:
            click.echo("dry run: store unchanged (use --commit to persist)")
        if assignment.pool_warning:
            click.echo(
                "warning: pool of experts is not full enough; consider lowering "
                "max_preference_papers or recruiting reviewers",
                err=True,
            )
    except ConfReviewError as exc:
        _fail(exc)


@main.command()
@click.option("--out", "out_dir", default="./overviews", show_default=True)
@click.pass_context
def overviews(ctx, out_dir):
    """Write every overview as .txt and .json files."""
    try:
        service = _service(ctx.obj["store_dir"])
        state = service.store.snapshot()
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)

        emitted = []

        def emit(name, rows, text):
            (out / f"{name}.json").write_text(
                json.dumps(rows, indent=2, sort_keys=True) + "\n", encoding="utf-8"
            )
            (out / f"{name}.txt").write_text(text, encoding="utf-8")
            emitted.append(name)

        if state.assignment is not None:
            rows = ov.progress_overview(state)
            emit("progress", rows, ov.progress_text(rows))
        rows = ov.all_reviews_overview(state)
        emit("all-reviews", rows, ov.all_reviews_text(rows))
        rows = ov.categories_overview(state)
        emit("categories", rows, ov.categories_text(rows))
        rows = ov.champions_overview(state)
        emit("champions", rows, ov.champions_text(rows))
        rows = ov.low_expertise_overview(state)
        emit("low-expertise", rows, ov.low_expertise_text(rows))
        data = ov.topic_abstract_overviews(state)
        emit("abstracts", data, ov.abstracts_text(data))
    except ConfReviewError as exc:
        _fail(exc)
    click.echo(f"wrote {len(emitted)} overviews to {out}")


@main.command("parse-review")
@click.argument("form", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def parse_review(ctx, form):
    """Check an emailed review form and file it if clean."""
    try:
        service = _service(ctx.obj["store_dir"])
        result = service.submit_parsed_review(
            MAINTAINER, Path(form).read_text(encoding="utf-8")
        )
    except ConfReviewError as exc:
        _fail(exc)
    if not result.ok:
        for error in result.errors:
            click.echo(str(error), err=True)
        sys.exit(1)
    review = result.review
    click.echo(
        f"stored review of paper {review.paper_id} by {review.reviewer_id} "
        f"({review.classification.value}/{review.expertise.value})"
    )


@main.command()
@click.option(
    "--accept",
    "accept_csv",
    default="",
    help="Comma-separated paper ids to accept; everything else uploaded is rejected.",
)
@click.pass_context
def decide(ctx, accept_csv):
    """Record the meeting's accept/reject decisions (atomic)."""
    try:
        accepted = {int(p) for p in accept_csv.split(",") if p.strip()}
        service = _service(ctx.obj["store_dir"])
        record = service.record_decisions(MAINTAINER, accepted)
    except (ConfReviewError, ValueError) as exc:
        _fail(exc)
    click.echo(f"accepted: {list(record.accepted)}")
    click.echo(f"rejected: {list(record.rejected)}")


@main.command()
@click.pass_context
def notify(ctx):
    """Queue decision notifications (with reviewer comments) to authors."""
    try:
        service = _service(ctx.obj["store_dir"])
        messages = service.generate_notifications(MAINTAINER)
    except ConfReviewError as exc:
        _fail(exc)
    click.echo(f"queued {len(messages)} notifications in {service.store.root / 'outbox'}")


@main.command()
@click.argument("sessions_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_dir", default="./proceedings", show_default=True)
@click.pass_context
def proceedings(ctx, sessions_file, out_dir):
    """Build the table of contents and author index from a session plan."""
    try:
        service = _service(ctx.obj["store_dir"])
        state = service.store.snapshot()
        result = parse_sessions_template(
            Path(sessions_file).read_text(encoding="utf-8"), state.papers
        )
        if not result.ok:
            for error in result.errors:
                click.echo(str(error), err=True)
            sys.exit(1)
        toc = generate_toc(result.plan, state.papers, page_offset=state.config.page_offset)
        index = generate_author_index(
            result.plan, state.papers, page_offset=state.config.page_offset
        )
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "toc.txt").write_text(toc_text(toc), encoding="utf-8")
        (out / "toc.json").write_text(
            json.dumps(toc_json(toc), indent=2) + "\n", encoding="utf-8"
        )
        (out / "author-index.txt").write_text(index_text(index), encoding="utf-8")
        (out / "author-index.json").write_text(
            json.dumps(index_json(index), indent=2) + "\n", encoding="utf-8"
        )
    except ConfReviewError as exc:
        _fail(exc)
    click.echo(f"wrote TOC ({toc.total_pages} pages) and author index to {out}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--ui", "ui_dir", default=None, type=click.Path(file_okay=False))
@click.pass_context
def serve(ctx, host, port, ui_dir):
    """Run the HTTP API (and the web UI when --ui points at its build)."""
    import uvicorn

    from .service import create_app

    service = _service(ctx.obj["store_dir"])
    app = create_app(service, ui_dir=Path(ui_dir) if ui_dir else None)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
