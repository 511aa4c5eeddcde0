"""HTTP JSON API over the classroom service.

Versioned under /api/v1 with opaque bearer-token sessions. Every domain
error maps to one stable machine code; every mutation is durable before
the response goes out. Built frontend assets, when present, are served
from "/".
"""

from __future__ import annotations

import secrets
import socket
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from fastapi import Depends, FastAPI, File, Form, Header, Request, UploadFile
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import __version__
from .classroom import ClassroomService, User
from .corpus import ingest_csv, ingest_json
from .errors import (
    DocumentTooLong,
    Forbidden,
    MalformedCsv,
    PortInUse,
    RateLimited,
    TextLabError,
    Unauthorized,
    UploadTooLarge,
)
from .store import Store
from .textclf import SearchTerm


@dataclass
class ServerConfig:
    port: int = 8000
    host: str = "127.0.0.1"
    data_dir: str = "data"
    session_ttl_minutes: float = 480.0
    alpha: float = 1.0
    train_fraction: float = 0.8
    upload_cap_mb: int = 20
    document_char_cap: int = 10_000
    session_request_cap: int = 100_000  # fixed per-session cap; no other rate limiting
    static_dir: str | None = None


@dataclass
class Session:
    token: str
    user_id: int
    created_at: float
    ttl_seconds: float
    request_count: int = 0


class SessionManager:
    """In-memory opaque-token sessions; expired tokens resolve to nothing."""

    def __init__(self, ttl_minutes: float, now=None, request_cap: int = 100_000):
        self.ttl_seconds = ttl_minutes * 60.0
        self.request_cap = request_cap
        self._now = now or time.time
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, user_id: int) -> str:
        token = secrets.token_urlsafe(16)
        with self._lock:
            self._sessions[token] = Session(token, user_id, self._now(), self.ttl_seconds)
        return token

    def resolve(self, token: str) -> int | None:
        """User id for a live session, counting the request against the cap."""
        with self._lock:
            session = self._sessions.get(token)
            if session is None:
                return None
            if self._now() - session.created_at > session.ttl_seconds:
                del self._sessions[token]
                return None
            session.request_count += 1
            if session.request_count > self.request_cap:
                raise RateLimited("per-session request cap reached; log in again")
            return session.user_id


class LoginBody(BaseModel):
    username: str
    password: str


class SignupBody(BaseModel):
    username: str
    password: str


class GroupBody(BaseModel):
    name: str
    expiry: float | None = None  # epoch seconds


class ProjectBody(BaseModel):
    title: str
    description: str = ""
    group_id: int
    corpus_ids: list[int]


class AnalysisBody(BaseModel):
    kind: str
    per_category_n: int | None = None
    seed: int | None = None


class LabelBody(BaseModel):
    document_id: int
    category: str


class TermBody(BaseModel):
    pattern: str
    reason: str = ""


class TermsBody(BaseModel):
    terms: list[TermBody]


class RunBody(BaseModel):
    algorithm: str = "nb"


def _analysis_summary(service: ClassroomService, analysis, caller: User) -> dict:
    project = service.projects[analysis.project_id]
    labeled = {e.document_id for e in analysis.label_events if e.user_id == caller.id}
    return {
        "id": analysis.id,
        "project_id": analysis.project_id,
        "kind": analysis.kind,
        "owner_id": analysis.owner_id,
        "per_category_n": analysis.per_category_n,
        "seed": analysis.seed,
        "categories": project.categories,
        "pool_size": len(analysis.doc_pool),
        "remaining": len(analysis.doc_pool) - len(labeled),
        "runs": sum(1 for r in analysis.runs if r["user_id"] == caller.id),
    }


def create_app(config: ServerConfig, service: ClassroomService | None = None,
               sessions: SessionManager | None = None) -> FastAPI:
    if service is None:
        store = Store.open(config.data_dir)
        service = ClassroomService(store=store, alpha=config.alpha,
                                   train_fraction=config.train_fraction)
    sessions = sessions or SessionManager(config.session_ttl_minutes,
                                          request_cap=config.session_request_cap)
    app = FastAPI(title="textlab", version=__version__)
    app.state.service = service
    app.state.sessions = sessions
    app.state.config = config

    @app.exception_handler(TextLabError)
    async def domain_error(request: Request, exc: TextLabError):
        return JSONResponse(
            status_code=exc.http_status,
            content={"error": {"machine_code": exc.machine_code,
                               "message": exc.message}})

    def current_user(authorization: str | None = Header(default=None)) -> User:
        if not authorization or not authorization.startswith("Bearer "):
            raise Unauthorized("missing bearer token")
        user_id = sessions.resolve(authorization.removeprefix("Bearer ").strip())
        if user_id is None:
            raise Unauthorized("invalid or expired session")
        return service.get_user(user_id)

    def teacher_only(user: User = Depends(current_user)) -> User:
        if not user.is_teacher:
            raise Forbidden("teacher role required")
        return user

    # -- open endpoints ---------------------------------------------------

    @app.get("/api/v1/health")
    def health():
        return {"version": __version__, "status": "ok"}

    @app.post("/api/v1/login")
    def login(body: LoginBody):
        user = service.authenticate(body.username, body.password)
        return {"token": sessions.create(user.id), "user_id": user.id,
                "username": user.username, "role": user.role}

    @app.post("/api/v1/signup/{token}")
    def signup(token: str, body: SignupBody):
        user = service.register_via_link(token, body.username, body.password)
        return {"user_id": user.id, "username": user.username}

    # -- teacher endpoints ---------------------------------------------------

    @app.post("/api/v1/groups")
    def create_group(body: GroupBody, user: User = Depends(teacher_only)):
        group = service.create_group(user, body.name, expiry=body.expiry)
        return {"id": group.id, "name": group.name,
                "signup_token": group.signup_token,
                "signup_url": group.signup_path()}

    @app.get("/api/v1/groups")
    def list_groups(user: User = Depends(teacher_only)):
        return {"groups": [
            {"id": g.id, "name": g.name, "signup_url": g.signup_path(),
             "members": sorted(u.username for u in service.group_members(g.id))}
            for g in service.groups.values()]}

    @app.post("/api/v1/corpora")
    async def upload_corpus(file: UploadFile = File(...), format: str = Form(...),
                            name: str = Form(...),
                            default_category: str | None = Form(None),
                            user: User = Depends(teacher_only)):
        data = await file.read()
        if len(data) > config.upload_cap_mb * 1024 * 1024:
            raise UploadTooLarge(
                f"upload exceeds {config.upload_cap_mb} MB cap")
        if format == "csv":
            corpus = ingest_csv(data, default_category=default_category, name=name)
        elif format == "json":
            corpus = ingest_json(data, default_category=default_category, name=name)
        else:
            raise MalformedCsv(f"unknown format {format!r}; use csv or json")
        for doc in corpus.documents:
            if len(doc.raw_text) > config.document_char_cap:
                raise DocumentTooLong(
                    f"document {doc.id} exceeds {config.document_char_cap} characters")
        corpus = service.add_corpus(corpus)
        return {"id": corpus.id, "name": corpus.name,
                "categories": corpus.categories,
                "documents": len(corpus.documents)}

    @app.get("/api/v1/corpora")
    def list_corpora(user: User = Depends(teacher_only)):
        return {"corpora": [
            {"id": c.id, "name": c.name, "categories": c.categories,
             "documents": len(c.documents)}
            for c in service.corpora.values()]}

    @app.post("/api/v1/projects")
    def create_project(body: ProjectBody, user: User = Depends(teacher_only)):
        project = service.create_project(user, body.title, body.description,
                                         body.group_id, body.corpus_ids)
        return project.to_record()

    # -- landing / projects ---------------------------------------------------

    @app.get("/api/v1/projects")
    def list_projects(user: User = Depends(current_user)):
        return {"projects": [p.to_record() for p in service.projects_for(user)]}

    @app.post("/api/v1/projects/{project_id}/analyses")
    def create_analysis(project_id: int, body: AnalysisBody,
                        user: User = Depends(current_user)):
        analysis = service.create_analysis(user, project_id, body.kind,
                                           per_category_n=body.per_category_n,
                                           seed=body.seed)
        return _analysis_summary(service, analysis, user)

    @app.get("/api/v1/projects/{project_id}/analyses")
    def list_analyses(project_id: int, user: User = Depends(current_user)):
        return {"analyses": [
            _analysis_summary(service, a, user)
            for a in service.analyses_for(user, project_id)]}

    # -- labeling ----------------------------------------------------------

    @app.get("/api/v1/analyses/{analysis_id}")
    def analysis_detail(analysis_id: int, user: User = Depends(current_user)):
        analysis = service.get_analysis(analysis_id)
        service._check_view(user, analysis)
        return _analysis_summary(service, analysis, user)

    @app.get("/api/v1/analyses/{analysis_id}/next")
    def next_document(analysis_id: int, user: User = Depends(current_user)):
        view, estimate, remaining = service.next_document(user, analysis_id)
        return {"document": {"id": view.id, "text": view.text},
                "estimate": estimate, "remaining": remaining}

    @app.post("/api/v1/analyses/{analysis_id}/labels")
    def submit_label(analysis_id: int, body: LabelBody,
                     user: User = Depends(current_user)):
        event = service.submit_label(user, analysis_id, body.document_id, body.category)
        analysis = service.get_analysis(analysis_id)
        labeled = {e.document_id for e in analysis.label_events if e.user_id == user.id}
        return {"correct": event.correct,
                "remaining": len(analysis.doc_pool) - len(labeled)}

    # -- statistics -----------------------------------------------------------

    @app.get("/api/v1/analyses/{analysis_id}/stats/labels")
    def label_stats(analysis_id: int, order: str = "asc",
                    user: User = Depends(current_user)):
        rows = service.label_statistics(user, analysis_id, order=order)
        return {"rows": [
            {"document_id": r.document_id, "text": r.text,
             "correct_count": r.correct_count,
             "incorrect_count": r.incorrect_count,
             "correct_pct": r.correct_pct}
            for r in rows]}

    @app.get("/api/v1/analyses/{analysis_id}/stats/words")
    def word_stats_view(analysis_id: int, sort: str = "count",
                        user: User = Depends(current_user)):
        rows = service.analysis_word_statistics(user, analysis_id, sort_by=sort)
        return {"rows": [
            {"word": r.word, "total_count": r.total_count, "counts": r.counts,
             "predictiveness": {c: float(v) for c, v in r.predictiveness.items()}}
            for r in rows]}

    # -- terms and runs -----------------------------------------------------

    @app.put("/api/v1/analyses/{analysis_id}/terms")
    def put_terms(analysis_id: int, body: TermsBody,
                  user: User = Depends(current_user)):
        stored = service.set_terms(user, analysis_id, [
            SearchTerm(t.pattern, t.reason) for t in body.terms])
        return {"terms": [{"pattern": t.pattern, "reason": t.reason} for t in stored]}

    @app.get("/api/v1/analyses/{analysis_id}/terms")
    def get_terms(analysis_id: int, user: User = Depends(current_user)):
        stored = service.get_terms(user, analysis_id)
        return {"terms": [{"pattern": t.pattern, "reason": t.reason} for t in stored]}

    @app.post("/api/v1/analyses/{analysis_id}/run")
    def run_model(analysis_id: int, body: RunBody,
                  user: User = Depends(current_user)):
        run = service.run_model(user, analysis_id, algorithm=body.algorithm)
        return run

    @app.get("/api/v1/analyses/{analysis_id}/runs")
    def list_runs(analysis_id: int, user: User = Depends(current_user)):
        analysis = service.get_analysis(analysis_id)
        service._check_view(user, analysis)
        return {"runs": [
            {"seq": r["seq"], "algorithm": r["algorithm"],
             "total_score": r["report"]["total_score"],
             "accuracy": r["report"]["metrics"]["accuracy"]}
            for r in analysis.runs if r["user_id"] == user.id]}

    @app.get("/api/v1/analyses/{analysis_id}/runs/{seq}/confusion")
    def run_confusion(analysis_id: int, seq: int,
                      user: User = Depends(current_user)):
        run = service.get_run(user, analysis_id, seq)
        return {"confusion": run["report"]["confusion"],
                "metrics": run["report"]["metrics"],
                "excluded_test_docs": run["report"]["excluded_test_docs"]}

    @app.get("/api/v1/analyses/{analysis_id}/leaderboard")
    def leaderboard(analysis_id: int, user: User = Depends(current_user)):
        analysis = service.get_analysis(analysis_id)
        service._check_view(user, analysis)
        best = service.best_scores(analysis_id)
        rows = [{"username": service.users[uid].username, "best_score": score}
                for uid, score in best.items()]
        rows.sort(key=lambda r: (-r["best_score"], r["username"]))
        return {"rows": rows}

    static_dir = config.static_dir
    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def _check_port_free(host: str, port: int):
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except OSError as exc:
        raise PortInUse(f"cannot bind {host}:{port}: {exc}") from exc
    finally:
        probe.close()


def serve(config: ServerConfig):
    """Run the service until interrupted; the store is exclusively locked."""
    import uvicorn

    _check_port_free(config.host, config.port)
    store = Store.open(config.data_dir)
    store.acquire_lock()
    try:
        service = ClassroomService(store=store, alpha=config.alpha,
                                   train_fraction=config.train_fraction)
        app = create_app(config, service=service)
        uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    finally:
        store.release_lock()
