"""Operator command line: serve the API, seed demo data, run headless
evaluations, and manage accounts.

Exit codes: 0 success, 1 I/O or configuration error, 2 domain error.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import __version__
from .classroom import ClassroomService, ROLE_TEACHER
from .corpus import ingest_csv, ingest_json, make_split, reindexed
from .errors import StoreLocked, TextLabError
from .fixtures import FIXTURES, seed_store, terms_file_content
from .store import Store
from .textclf import SearchTerm, run_pipeline

EXIT_CONFIG = 1
EXIT_DOMAIN = 2


def handles_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except TextLabError as exc:
            click.echo(f"error [{exc.machine_code}]: {exc.message}", err=True)
            sys.exit(EXIT_DOMAIN)
        except (OSError, ValueError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_CONFIG)
    return wrapper


@click.group()
@click.version_option(__version__)
def main():
    """Collaborative text-classification teaching platform."""


# -- serve -------------------------------------------------------------------


@main.command()
@click.option("--port", default=8000, envvar="TEXTLAB_PORT", show_default=True)
@click.option("--host", default="127.0.0.1", envvar="TEXTLAB_HOST", show_default=True)
@click.option("--data-dir", default="data", envvar="TEXTLAB_DATA_DIR", show_default=True)
@click.option("--session-ttl-minutes", default=480.0, envvar="TEXTLAB_SESSION_TTL_MINUTES",
              show_default=True)
@click.option("--alpha", default=1.0, envvar="TEXTLAB_ALPHA", show_default=True,
              help="Naive Bayes smoothing constant.")
@click.option("--train-fraction", default=0.8, envvar="TEXTLAB_TRAIN_FRACTION",
              show_default=True)
@click.option("--upload-cap-mb", default=20, envvar="TEXTLAB_UPLOAD_CAP_MB",
              show_default=True)
@click.option("--static-dir", default=None, envvar="TEXTLAB_STATIC_DIR",
              help="Directory of built web UI assets to serve at /.")
@handles_errors
def serve(port, host, data_dir, session_ttl_minutes, alpha, train_fraction,
          upload_cap_mb, static_dir):
    """Run the HTTP service against a seeded data directory."""
    from .server import ServerConfig, serve as run_server

    run_server(ServerConfig(
        port=port, host=host, data_dir=data_dir,
        session_ttl_minutes=session_ttl_minutes, alpha=alpha,
        train_fraction=train_fraction, upload_cap_mb=upload_cap_mb,
        static_dir=static_dir))


# -- seed --------------------------------------------------------------------


@main.command()
@click.argument("data_dir", type=click.Path())
@click.option("--fixture", "fixture_name", default="two-party-demo",
              type=click.Choice(sorted(FIXTURES)), show_default=True)
@click.option("--seed", default=42, show_default=True)
@click.option("--force", is_flag=True, help="Overwrite an existing store.")
@click.option("--docs-per-category", default=500, show_default=True)
@click.option("--students", default=10, show_default=True)
@click.option("--terms-out", type=click.Path(), default=None,
              help="Also write the fixture's separating terms to this file.")
@handles_errors
def seed(data_dir, fixture_name, seed, force, docs_per_category, students, terms_out):
    """Populate DATA_DIR with a reproducible demo classroom."""
    result = seed_store(data_dir, fixture_name, seed, force=force,
                        docs_per_category=docs_per_category, students=students)
    fixture = result.fixture
    click.echo(f"seeded fixture {fixture.name!r} (seed {seed}) into {data_dir}")
    click.echo(f"signup link:  {result.signup_url}")
    click.echo(f"teacher:      {fixture.teacher[0]} / {fixture.teacher[1]}")
    for username, password in fixture.students:
        click.echo(f"student:      {username} / {password}")
    click.echo(f"project id:   {result.project_id}")
    for kind, analysis_id in sorted(result.analysis_ids.items()):
        click.echo(f"analysis:     {kind.lower():<13} id {analysis_id} "
                   f"(seed {result.analysis_seeds[kind]})")
    if terms_out:
        Path(terms_out).write_text(terms_file_content(fixture.terms))
        click.echo(f"terms file:   {terms_out}")


# -- eval --------------------------------------------------------------------


def load_terms_file(path: str) -> list[SearchTerm]:
    raw = Path(path).read_text(encoding="utf-8")
    if path.endswith(".json"):
        items = json.loads(raw)
        return [SearchTerm(item["pattern"], item.get("reason", "")) for item in items]
    terms = []
    for line in raw.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        pattern, _, reason = line.partition("\t")
        if not reason:
            pattern, _, reason = line.partition(" ")
        terms.append(SearchTerm(pattern.strip(), reason.strip()))
    return terms


def load_corpus_file(spec: str, index: int):
    """PATH or PATH=CATEGORY; JSON by extension, CSV otherwise."""
    path, _, category = spec.partition("=")
    default_category = category or Path(path).stem
    data = Path(path).read_bytes()
    if path.endswith(".json"):
        return ingest_json(data, default_category=default_category,
                           name=Path(path).stem, corpus_id=index)
    return ingest_csv(data, default_category=default_category,
                      name=Path(path).stem, corpus_id=index)


def report_table(report: dict) -> str:
    headers = ["word", "predicted", "accuracy", "targeted", "score"]
    rows = [[r["word"], r["predicted_category"],
             "-" if r["accuracy"] is None else f"{r['accuracy']:.3f}",
             str(r["targeted"]), str(r["score"])]
            for r in report["rows"]]
    widths = [max(len(h), *(len(row[i]) for row in rows)) if rows else len(h)
              for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers))]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    accuracy = report["metrics"]["accuracy"]
    lines.append("")
    lines.append(f"total score: {report['total_score']}")
    lines.append(
        f"test documents: {report['scored_test_docs']} scored, "
        f"{report['excluded_test_docs']} without feature words")
    if accuracy is not None:
        lines.append(f"document accuracy: {accuracy:.4f}")
    categories = report["confusion"]["categories"]
    lines.append("confusion matrix (rows gold, columns predicted): "
                 + " ".join(categories))
    for category, row in zip(categories, report["confusion"]["cells"]):
        lines.append(f"  {category:>12} {row}")
    return "\n".join(lines)


def report_csv(report: dict) -> str:
    buf = io.StringIO(newline="")
    writer = csv.writer(buf)
    writer.writerow(["word", "predicted", "accuracy", "targeted", "score"])
    for r in report["rows"]:
        writer.writerow([
            r["word"], r["predicted_category"],
            "" if r["accuracy"] is None else repr(r["accuracy"]),
            r["targeted"], r["score"]])
    return buf.getvalue()


@main.command("eval")
@click.option("--corpus", "corpus_specs", multiple=True,
              help="Corpus file (csv/json), optionally PATH=CATEGORY. Repeatable.")
@click.option("--data-dir", default=None,
              help="Evaluate over a seeded store instead of corpus files.")
@click.option("--project", "project_id", default=None, type=int,
              help="Project id inside --data-dir (defaults to the only project).")
@click.option("--terms", "terms_path", required=True, type=click.Path(exists=True))
@click.option("--algorithm", default="nb", type=click.Choice(["nb", "logreg"]),
              show_default=True)
@click.option("--train-fraction", default=0.8, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--alpha", default=1.0, show_default=True)
@click.option("--format", "output_format", default="table",
              type=click.Choice(["table", "json", "csv"]), show_default=True)
@click.option("--report-dir", type=click.Path(), default=None,
              help="Write report.json, report.csv and figures here.")
@handles_errors
def eval_command(corpus_specs, data_dir, project_id, terms_path, algorithm,
                 train_fraction, seed, alpha, output_format, report_dir):
    """Headless expand -> train -> evaluate, no server required."""
    terms = load_terms_file(terms_path)

    if data_dir:
        service = ClassroomService(store=Store.open(data_dir), alpha=alpha,
                                   train_fraction=train_fraction)
        if project_id is None:
            if len(service.projects) != 1:
                raise ValueError("store has several projects; pass --project")
            project_id = next(iter(service.projects))
        project = service.get_project(project_id)
        documents = reindexed([
            doc for corpus_id in project.corpus_ids
            for doc in service.corpora[corpus_id].documents])
        categories = project.categories
    elif corpus_specs:
        corpora = [load_corpus_file(spec, i) for i, spec in enumerate(corpus_specs)]
        documents = reindexed([d for corpus in corpora for d in corpus.documents])
        categories = sorted({c for corpus in corpora for c in corpus.categories})
    else:
        raise ValueError("pass --corpus files or --data-dir")

    from .corpus import Corpus
    pool = Corpus(id=0, name="pool", categories=categories, documents=documents)
    split = make_split(pool, Fraction(str(train_fraction)), seed)
    report = run_pipeline(documents, categories, terms, split,
                          alpha=alpha, algorithm=algorithm).to_dict()

    if output_format == "json":
        click.echo(json.dumps(report, sort_keys=True, indent=2))
    elif output_format == "csv":
        click.echo(report_csv(report), nl=False)
    else:
        click.echo(report_table(report))

    if report_dir:
        from .figures import save_report_figures
        directory = Path(report_dir)
        directory.mkdir(parents=True, exist_ok=True)
        (directory / "report.json").write_text(
            json.dumps(report, sort_keys=True, indent=2) + "\n")
        (directory / "report.csv").write_text(report_csv(report))
        for figure in save_report_figures(report, directory):
            click.echo(f"wrote {figure}", err=True)


# -- user management -----------------------------------------------------------


def _open_store_for_write(data_dir: str) -> Store:
    store = Store.open(data_dir)
    if store.locked_elsewhere():
        raise StoreLocked(
            f"store at {data_dir} is locked by a running server; stop it first")
    return store


@main.group()
def user():
    """Account management against a data directory."""


@user.command("add-teacher")
@click.argument("username")
@click.option("--data-dir", default="data", show_default=True)
@click.option("--password", default=None,
              help="Password (prompted securely when omitted).")
@handles_errors
def add_teacher(username, data_dir, password):
    if password is None:
        password = click.prompt("Password", hide_input=True, confirmation_prompt=True)
    service = ClassroomService(store=_open_store_for_write(data_dir))
    teacher = service.create_user(username, password, ROLE_TEACHER)
    click.echo(f"created teacher {teacher.username} (id {teacher.id})")


@user.command("reset-password")
@click.argument("username")
@click.option("--data-dir", default="data", show_default=True)
@click.option("--password", default=None)
@handles_errors
def reset_password(username, data_dir, password):
    if password is None:
        password = click.prompt("New password", hide_input=True,
                                confirmation_prompt=True)
    service = ClassroomService(store=_open_store_for_write(data_dir))
    service.reset_password(username, password)
    click.echo(f"password updated for {username}")


@user.command("list")
@click.option("--data-dir", default="data", show_default=True)
@handles_errors
def list_users(data_dir):
    service = ClassroomService(store=Store.open(data_dir))
    click.echo(f"{'username':<16} {'role':<8} groups")
    for user_ in sorted(service.users.values(), key=lambda u: u.username):
        groups = ", ".join(sorted(
            service.groups[gid].name for gid in user_.group_ids
            if gid in service.groups))
        click.echo(f"{user_.username:<16} {user_.role:<8} {groups}")


if __name__ == "__main__":
    main()
