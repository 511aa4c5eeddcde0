"""Classroom domain logic: users, groups, signup links, projects, analyses,
the labeling workflow, statistics, terms, and model runs.

State transitions on one analysis are serialized behind a per-analysis
lock; unrelated entities never share a lock. Every mutation is persisted
before the call returns.
"""

from __future__ import annotations

import base64
import hashlib
import hmac
import random
import secrets
import threading
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .corpus import Corpus, Document, SplitSpec, make_split, preprocess, reindexed, tokenize
from .errors import (
    AlreadyLabeled,
    BadCredentials,
    DuplicateName,
    ExpiredToken,
    Forbidden,
    NNotSatisfiable,
    NoLabelsYet,
    NoTerms,
    NothingLeft,
    TooFewCategories,
    UnknownAnalysis,
    UnknownCategory,
    UnknownCorpus,
    UnknownDocument,
    UnknownGroup,
    UnknownProject,
    UnknownRun,
    UnknownToken,
    UnknownUser,
    UsernameTaken,
)
from .store import Store, canonical_json
from .textclf import (
    LogRegParams,
    NaiveBayesModel,
    SearchTerm,
    WordStat,
    empty_model,
    predict_nb,
    run_pipeline,
    update_nb,
    validate_pattern,
    word_stats,
)
from .errors import MissingReason

ROLE_TEACHER = "TEACHER"
ROLE_STUDENT = "STUDENT"

PERSONAL = "PERSONAL"
SHARED_TEXTS = "SHARED_TEXTS"
SHARED_MODEL = "SHARED_MODEL"
ANALYSIS_KINDS = (PERSONAL, SHARED_TEXTS, SHARED_MODEL)

_PBKDF2_ITERATIONS = 60_000


def hash_password(password: str, salt: bytes | None = None,
                  rng: random.Random | None = None) -> str:
    if salt is None:
        salt = rng.randbytes(16) if rng is not None else secrets.token_bytes(16)
    digest = hashlib.pbkdf2_hmac("sha256", password.encode(), salt, _PBKDF2_ITERATIONS)
    return f"pbkdf2_sha256${_PBKDF2_ITERATIONS}${salt.hex()}${digest.hex()}"


def verify_password(password: str, stored: str) -> bool:
    try:
        _, iterations, salt_hex, digest_hex = stored.split("$")
        digest = hashlib.pbkdf2_hmac("sha256", password.encode(),
                                     bytes.fromhex(salt_hex), int(iterations))
        return hmac.compare_digest(digest.hex(), digest_hex)
    except (ValueError, TypeError):
        return False


def _urlsafe_token(rng: random.Random | None = None, nbytes: int = 16) -> str:
    raw = rng.randbytes(nbytes) if rng is not None else secrets.token_bytes(nbytes)
    return base64.urlsafe_b64encode(raw).decode().rstrip("=")


@dataclass
class User:
    id: int
    username: str
    password_hash: str
    role: str
    group_ids: set[int] = field(default_factory=set)

    @property
    def is_teacher(self) -> bool:
        return self.role == ROLE_TEACHER

    def to_record(self) -> dict:
        return {"schema": 1, "id": self.id, "username": self.username,
                "password_hash": self.password_hash, "role": self.role,
                "group_ids": sorted(self.group_ids)}

    @classmethod
    def from_record(cls, record: dict) -> "User":
        return cls(id=record["id"], username=record["username"],
                   password_hash=record["password_hash"], role=record["role"],
                   group_ids=set(record["group_ids"]))


@dataclass
class UserGroup:
    id: int
    name: str
    teacher_id: int
    signup_token: str
    token_expiry: float | None = None

    def signup_path(self) -> str:
        return f"/signup/{self.signup_token}"

    def to_record(self) -> dict:
        return {"schema": 1, "id": self.id, "name": self.name,
                "teacher_id": self.teacher_id, "signup_token": self.signup_token,
                "token_expiry": self.token_expiry}

    @classmethod
    def from_record(cls, record: dict) -> "UserGroup":
        return cls(id=record["id"], name=record["name"],
                   teacher_id=record["teacher_id"],
                   signup_token=record["signup_token"],
                   token_expiry=record["token_expiry"])


@dataclass
class Project:
    id: int
    title: str
    description: str
    group_id: int
    corpus_ids: list[int]
    categories: list[str]

    def to_record(self) -> dict:
        return {"schema": 1, "id": self.id, "title": self.title,
                "description": self.description, "group_id": self.group_id,
                "corpus_ids": list(self.corpus_ids),
                "categories": list(self.categories)}

    @classmethod
    def from_record(cls, record: dict) -> "Project":
        return cls(id=record["id"], title=record["title"],
                   description=record["description"], group_id=record["group_id"],
                   corpus_ids=list(record["corpus_ids"]),
                   categories=list(record["categories"]))


@dataclass
class LabelEvent:
    user_id: int
    document_id: int
    chosen_category: str
    correct: bool
    timestamp: float
    teacher: bool = False

    def to_record(self) -> dict:
        return {"user_id": self.user_id, "document_id": self.document_id,
                "chosen_category": self.chosen_category, "correct": self.correct,
                "timestamp": self.timestamp, "teacher": self.teacher}

    @classmethod
    def from_record(cls, record: dict) -> "LabelEvent":
        return cls(**record)


@dataclass
class Analysis:
    id: int
    project_id: int
    owner_id: int
    kind: str
    seed: int
    doc_pool: list[tuple[int, int]]  # (corpus_id, document_id) refs, pool order
    split: SplitSpec
    model_state: dict
    per_category_n: int | None = None
    terms: dict[int, list[SearchTerm]] = field(default_factory=dict)
    label_events: list[LabelEvent] = field(default_factory=list)
    runs: list[dict] = field(default_factory=list)

    def to_record(self) -> dict:
        return {
            "schema": 1,
            "id": self.id,
            "project_id": self.project_id,
            "owner_id": self.owner_id,
            "kind": self.kind,
            "seed": self.seed,
            "per_category_n": self.per_category_n,
            "doc_pool": [list(ref) for ref in self.doc_pool],
            "split": {
                "train_fraction": str(self.split.train_fraction),
                "seed": self.split.seed,
                "assignment": {str(k): v for k, v in sorted(self.split.assignment.items())},
            },
            "model": self.model_state,
            "terms": {
                str(uid): [{"pattern": t.pattern, "reason": t.reason} for t in terms]
                for uid, terms in sorted(self.terms.items())
            },
            "label_events": [e.to_record() for e in self.label_events],
            "runs": self.runs,
        }

    @classmethod
    def from_record(cls, record: dict) -> "Analysis":
        split = SplitSpec(
            train_fraction=Fraction(record["split"]["train_fraction"]),
            seed=record["split"]["seed"],
            assignment={int(k): v for k, v in record["split"]["assignment"].items()},
        )
        return cls(
            id=record["id"],
            project_id=record["project_id"],
            owner_id=record["owner_id"],
            kind=record["kind"],
            seed=record["seed"],
            per_category_n=record["per_category_n"],
            doc_pool=[tuple(ref) for ref in record["doc_pool"]],
            split=split,
            model_state=record["model"],
            terms={
                int(uid): [SearchTerm(t["pattern"], t["reason"]) for t in terms]
                for uid, terms in record["terms"].items()
            },
            label_events=[LabelEvent.from_record(e) for e in record["label_events"]],
            runs=list(record["runs"]),
        )


@dataclass
class PoolDocumentView:
    """A pool document as shown to a labeler: no gold category anywhere."""
    id: int
    text: str


@dataclass
class LabelStatRow:
    document_id: int
    text: str
    correct_count: int
    incorrect_count: int

    @property
    def correct_pct(self) -> float:
        return self.correct_count / (self.correct_count + self.incorrect_count)


def corpus_to_record(corpus: Corpus) -> dict:
    return {
        "schema": 1,
        "id": corpus.id,
        "name": corpus.name,
        "categories": list(corpus.categories),
        "documents": [
            {"id": d.id, "raw_text": d.raw_text, "category": d.category,
             "source_meta": d.source_meta}
            for d in corpus.documents
        ],
    }


def corpus_from_record(record: dict) -> Corpus:
    documents = []
    for item in record["documents"]:
        clean = preprocess(item["raw_text"])
        documents.append(Document(
            id=item["id"], raw_text=item["raw_text"], clean_text=clean,
            tokens=tokenize(clean), category=item["category"],
            source_meta=item.get("source_meta") or {}))
    return Corpus(id=record["id"], name=record["name"],
                  categories=list(record["categories"]), documents=documents)


class ClassroomService:
    """All classroom state and operations, optionally persisted to a Store."""

    def __init__(self, store: Store | None = None, alpha: float = 1.0,
                 train_fraction=0.8, now=None, rng: random.Random | None = None):
        self.store = store
        self.alpha = alpha
        self.train_fraction = train_fraction
        self._now = now or time.time
        self._rng = rng  # deterministic token/seed source for seeded fixtures
        self.users: dict[int, User] = {}
        self.groups: dict[int, UserGroup] = {}
        self.corpora: dict[int, Corpus] = {}
        self.projects: dict[int, Project] = {}
        self.analyses: dict[int, Analysis] = {}
        self._registry_lock = threading.Lock()
        self._analysis_locks: dict[int, threading.Lock] = {}
        self._pool_cache: dict[int, list[Document]] = {}
        if store is not None:
            self._load()

    # -- persistence -----------------------------------------------------

    def _load(self):
        self.users = {i: User.from_record(r) for i, r in self.store.read_all("user").items()}
        self.groups = {i: UserGroup.from_record(r) for i, r in self.store.read_all("group").items()}
        self.corpora = {i: corpus_from_record(r) for i, r in self.store.read_all("corpus").items()}
        self.projects = {i: Project.from_record(r) for i, r in self.store.read_all("project").items()}
        self.analyses = {i: Analysis.from_record(r) for i, r in self.store.read_all("analysis").items()}

    def _persist(self, kind: str, entity_id: int, record: dict):
        if self.store is not None:
            self.store.write(kind, entity_id, record)

    def entity_dump(self) -> bytes:
        """Canonical serialization of every entity (restart-idempotence checks)."""
        return canonical_json({
            "users": {str(i): u.to_record() for i, u in self.users.items()},
            "groups": {str(i): g.to_record() for i, g in self.groups.items()},
            "corpora": {str(i): corpus_to_record(c) for i, c in self.corpora.items()},
            "projects": {str(i): p.to_record() for i, p in self.projects.items()},
            "analyses": {str(i): a.to_record() for i, a in self.analyses.items()},
        })

    def _next_id(self, table: dict) -> int:
        return max(table, default=0) + 1

    def _analysis_lock(self, analysis_id: int) -> threading.Lock:
        with self._registry_lock:
            return self._analysis_locks.setdefault(analysis_id, threading.Lock())

    # -- users and auth ----------------------------------------------------

    def create_user(self, username: str, password: str, role: str) -> User:
        with self._registry_lock:
            if any(u.username == username for u in self.users.values()):
                raise UsernameTaken(f"username {username!r} is already in use")
            user = User(id=self._next_id(self.users), username=username,
                        password_hash=hash_password(password, rng=self._rng),
                        role=role)
            self.users[user.id] = user
        self._persist("user", user.id, user.to_record())
        return user

    def authenticate(self, username: str, password: str) -> User:
        user = next((u for u in self.users.values() if u.username == username), None)
        if user is None:
            # burn the same hashing cost for unknown users: uniform timing
            verify_password(password, hash_password("unknown-user-filler"))
            raise BadCredentials("invalid username or password")
        if not verify_password(password, user.password_hash):
            raise BadCredentials("invalid username or password")
        return user

    def get_user(self, user_id: int) -> User:
        if user_id not in self.users:
            raise UnknownUser(f"no user with id {user_id}")
        return self.users[user_id]

    def find_user(self, username: str) -> User:
        user = next((u for u in self.users.values() if u.username == username), None)
        if user is None:
            raise UnknownUser(f"no user named {username!r}")
        return user

    def reset_password(self, username: str, new_password: str) -> User:
        user = self.find_user(username)
        user.password_hash = hash_password(new_password, rng=self._rng)
        self._persist("user", user.id, user.to_record())
        return user

    # -- groups and signup --------------------------------------------------

    def create_group(self, caller: User, name: str,
                     expiry: float | None = None) -> UserGroup:
        if not caller.is_teacher:
            raise Forbidden("only teachers create groups")
        with self._registry_lock:
            for group in self.groups.values():
                if group.teacher_id == caller.id and group.name == name:
                    raise DuplicateName(f"you already have a group named {name!r}")
            token = _urlsafe_token(self._rng)
            while any(g.signup_token == token for g in self.groups.values()):
                token = _urlsafe_token(self._rng)
            group = UserGroup(id=self._next_id(self.groups), name=name,
                              teacher_id=caller.id, signup_token=token,
                              token_expiry=expiry)
            self.groups[group.id] = group
        self._persist("group", group.id, group.to_record())
        return group

    def register_via_link(self, token: str, username: str, password: str) -> User:
        group = next((g for g in self.groups.values() if g.signup_token == token), None)
        if group is None:
            raise UnknownToken("no such signup link")
        if group.token_expiry is not None and self._now() > group.token_expiry:
            raise ExpiredToken("this signup link has expired")
        user = self.create_user(username, password, ROLE_STUDENT)
        user.group_ids.add(group.id)
        self._persist("user", user.id, user.to_record())
        return user

    def group_members(self, group_id: int) -> list[User]:
        return [u for u in self.users.values() if group_id in u.group_ids]

    # -- corpora -------------------------------------------------------------

    def add_corpus(self, corpus: Corpus) -> Corpus:
        with self._registry_lock:
            corpus.id = self._next_id(self.corpora)
            self.corpora[corpus.id] = corpus
        self._persist("corpus", corpus.id, corpus_to_record(corpus))
        return corpus

    def get_corpus(self, corpus_id: int) -> Corpus:
        if corpus_id not in self.corpora:
            raise UnknownCorpus(f"no corpus with id {corpus_id}")
        return self.corpora[corpus_id]

    # -- projects --------------------------------------------------------------

    def create_project(self, caller: User, title: str, description: str,
                       group_id: int, corpus_ids: list[int]) -> Project:
        if not caller.is_teacher:
            raise Forbidden("only teachers create projects")
        if group_id not in self.groups:
            raise UnknownGroup(f"no group with id {group_id}")
        for corpus_id in corpus_ids:
            self.get_corpus(corpus_id)
        categories = sorted({
            c for corpus_id in corpus_ids
            for c in self.corpora[corpus_id].categories})
        if len(categories) < 2:
            raise TooFewCategories(
                f"classification needs at least 2 categories, project has {categories}")
        with self._registry_lock:
            project = Project(id=self._next_id(self.projects), title=title,
                              description=description, group_id=group_id,
                              corpus_ids=list(corpus_ids), categories=categories)
            self.projects[project.id] = project
        self._persist("project", project.id, project.to_record())
        return project

    def get_project(self, project_id: int) -> Project:
        if project_id not in self.projects:
            raise UnknownProject(f"no project with id {project_id}")
        return self.projects[project_id]

    def projects_for(self, caller: User) -> list[Project]:
        if caller.is_teacher:
            return sorted(self.projects.values(), key=lambda p: p.id)
        return sorted((p for p in self.projects.values() if p.group_id in caller.group_ids),
                      key=lambda p: p.id)

    # -- analyses ------------------------------------------------------------

    def _project_doc_refs(self, project: Project) -> list[tuple[int, int]]:
        return [(corpus_id, doc.id)
                for corpus_id in project.corpus_ids
                for doc in self.corpora[corpus_id].documents]

    def create_analysis(self, caller: User, project_id: int, kind: str,
                        per_category_n: int | None = None,
                        seed: int | None = None) -> Analysis:
        project = self.get_project(project_id)
        if kind not in ANALYSIS_KINDS:
            raise NNotSatisfiable(f"unknown analysis kind {kind!r}")
        if not caller.is_teacher:
            if kind != PERSONAL:
                raise Forbidden("students can only create personal analyses")
            if project.group_id not in caller.group_ids:
                raise Forbidden("not a member of this project's group")
        if seed is None:
            seed = (self._rng or random).getrandbits(32)

        if kind == SHARED_TEXTS:
            if per_category_n is None or per_category_n < 1:
                raise NNotSatisfiable("per_category_n must be at least 1")
            by_category: dict[str, list[tuple[int, int]]] = {c: [] for c in project.categories}
            for corpus_id in project.corpus_ids:
                for doc in self.corpora[corpus_id].documents:
                    by_category[doc.category].append((corpus_id, doc.id))
            pool_rng = random.Random(seed)
            refs = []
            for category in project.categories:
                candidates = by_category[category]
                if per_category_n > len(candidates):
                    raise NNotSatisfiable(
                        f"category {category!r} has {len(candidates)} documents, "
                        f"cannot sample {per_category_n}")
                refs.extend(pool_rng.sample(candidates, per_category_n))
        else:
            refs = self._project_doc_refs(project)

        pool_docs = reindexed([self._resolve_ref(ref) for ref in refs])
        pool_corpus = Corpus(id=0, name="pool", categories=project.categories,
                             documents=pool_docs)
        split = make_split(pool_corpus, self.train_fraction, seed)
        model = empty_model(project.categories, alpha=self.alpha)

        with self._registry_lock:
            analysis = Analysis(
                id=self._next_id(self.analyses), project_id=project.id,
                owner_id=caller.id, kind=kind, seed=seed,
                per_category_n=per_category_n if kind == SHARED_TEXTS else None,
                doc_pool=refs, split=split, model_state=model.to_state())
            self.analyses[analysis.id] = analysis
            self._pool_cache[analysis.id] = pool_docs
        self._persist("analysis", analysis.id, analysis.to_record())
        return analysis

    def _resolve_ref(self, ref: tuple[int, int]) -> Document:
        corpus_id, doc_id = ref
        corpus = self.get_corpus(corpus_id)
        doc = next((d for d in corpus.documents if d.id == doc_id), None)
        if doc is None:
            raise UnknownDocument(f"corpus {corpus_id} has no document {doc_id}")
        return doc

    def get_analysis(self, analysis_id: int) -> Analysis:
        if analysis_id not in self.analyses:
            raise UnknownAnalysis(f"no analysis with id {analysis_id}")
        return self.analyses[analysis_id]

    def pool_documents(self, analysis: Analysis) -> list[Document]:
        """Pool documents reindexed 0..n-1 in pool order (cached; immutable)."""
        cached = self._pool_cache.get(analysis.id)
        if cached is None:
            cached = reindexed([self._resolve_ref(ref) for ref in analysis.doc_pool])
            self._pool_cache[analysis.id] = cached
        return cached

    def can_view(self, user: User, analysis: Analysis) -> bool:
        if user.is_teacher:
            return True
        if analysis.kind == PERSONAL:
            return analysis.owner_id == user.id
        project = self.projects[analysis.project_id]
        return project.group_id in user.group_ids

    def _check_view(self, user: User, analysis: Analysis):
        if not self.can_view(user, analysis):
            raise Forbidden("no access to this analysis")

    def _check_label(self, user: User, analysis: Analysis):
        if analysis.kind == PERSONAL:
            if analysis.owner_id != user.id:
                raise Forbidden("personal analyses are labeled only by their owner")
            return
        if user.is_teacher:
            return
        project = self.projects[analysis.project_id]
        if project.group_id not in user.group_ids:
            raise Forbidden("not a member of this project's group")

    def analyses_for(self, caller: User, project_id: int) -> list[Analysis]:
        project = self.get_project(project_id)
        if not caller.is_teacher and project.group_id not in caller.group_ids:
            raise Forbidden("not a member of this project's group")
        return sorted(
            (a for a in self.analyses.values()
             if a.project_id == project_id and self.can_view(caller, a)),
            key=lambda a: a.id)

    # -- labeling workflow -------------------------------------------------

    def _user_order(self, analysis: Analysis, user: User) -> list[int]:
        """Deterministic per-user presentation order of pool ids."""
        order = list(range(len(analysis.doc_pool)))
        random.Random(f"{analysis.seed}:{user.id}").shuffle(order)
        return order

    def _labeled_by(self, analysis: Analysis, user: User) -> set[int]:
        return {e.document_id for e in analysis.label_events if e.user_id == user.id}

    def current_model(self, analysis: Analysis) -> NaiveBayesModel:
        return NaiveBayesModel.from_state(analysis.model_state)

    def next_document(self, caller: User, analysis_id: int):
        """The caller's next unlabeled pool document, the live model estimate,
        and how many documents they still have to label."""
        analysis = self.get_analysis(analysis_id)
        with self._analysis_lock(analysis_id):
            self._check_label(caller, analysis)
            labeled = self._labeled_by(analysis, caller)
            remaining = len(analysis.doc_pool) - len(labeled)
            if remaining <= 0:
                raise NothingLeft("all pool documents are labeled")
            pool = self.pool_documents(analysis)
            doc = next(pool[i] for i in self._user_order(analysis, caller)
                       if i not in labeled)
            estimate = predict_nb(self.current_model(analysis), doc.tokens)
            return PoolDocumentView(id=doc.id, text=doc.clean_text), estimate, remaining

    def submit_label(self, caller: User, analysis_id: int, document_id: int,
                     chosen_category: str) -> LabelEvent:
        analysis = self.get_analysis(analysis_id)
        with self._analysis_lock(analysis_id):
            self._check_label(caller, analysis)
            project = self.projects[analysis.project_id]
            if chosen_category not in project.categories:
                raise UnknownCategory(
                    f"{chosen_category!r} is not one of {project.categories}")
            pool = self.pool_documents(analysis)
            if not (0 <= document_id < len(pool)):
                raise UnknownDocument(f"no pool document {document_id}")
            if document_id in self._labeled_by(analysis, caller):
                raise AlreadyLabeled(f"document {document_id} already labeled")
            doc = pool[document_id]
            event = LabelEvent(
                user_id=caller.id, document_id=document_id,
                chosen_category=chosen_category,
                correct=(chosen_category == doc.category),
                timestamp=self._now(), teacher=caller.is_teacher)
            analysis.label_events.append(event)
            # The model learns the gold category; student correctness is
            # tracked separately in the event.
            if analysis.kind == SHARED_MODEL or \
                    (analysis.kind == PERSONAL and analysis.owner_id == caller.id):
                model = update_nb(self.current_model(analysis), doc.tokens, doc.category)
                analysis.model_state = model.to_state()
            self._persist("analysis", analysis.id, analysis.to_record())
            return event

    # -- statistics ---------------------------------------------------------

    def label_statistics(self, caller: User, analysis_id: int,
                         order: str = "asc") -> list[LabelStatRow]:
        analysis = self.get_analysis(analysis_id)
        self._check_view(caller, analysis)
        pool = self.pool_documents(analysis)
        per_doc: dict[int, list[int]] = {}
        for event in analysis.label_events:
            counts = per_doc.setdefault(event.document_id, [0, 0])
            counts[0 if event.correct else 1] += 1
        rows = [
            LabelStatRow(document_id=doc_id, text=pool[doc_id].clean_text,
                         correct_count=counts[0], incorrect_count=counts[1])
            for doc_id, counts in per_doc.items()
        ]
        reverse = order == "desc"
        rows.sort(key=lambda r: (r.correct_pct, r.document_id), reverse=reverse)
        return rows

    def analysis_word_statistics(self, caller: User, analysis_id: int,
                                 sort_by: str = "count") -> list[WordStat]:
        """Word table over every document any member has labeled so far
        (counts use gold categories)."""
        analysis = self.get_analysis(analysis_id)
        self._check_view(caller, analysis)
        if not analysis.label_events:
            raise NoLabelsYet("nothing has been labeled in this analysis")
        pool = self.pool_documents(analysis)
        labeled_ids = sorted({e.document_id for e in analysis.label_events})
        project = self.projects[analysis.project_id]
        model = empty_model(project.categories, alpha=self.alpha)
        for doc_id in labeled_ids:
            doc = pool[doc_id]
            model = update_nb(model, doc.tokens, doc.category)
        return word_stats(model, sort_by=sort_by)

    # -- terms and model runs -------------------------------------------------

    def set_terms(self, caller: User, analysis_id: int,
                  terms: list[SearchTerm]) -> list[SearchTerm]:
        analysis = self.get_analysis(analysis_id)
        with self._analysis_lock(analysis_id):
            self._check_view(caller, analysis)
            for term in terms:
                validate_pattern(term.pattern)
                if not term.reason.strip():
                    raise MissingReason(
                        f"term {term.pattern!r} needs a reason for inclusion")
            analysis.terms[caller.id] = [SearchTerm(t.pattern.strip(), t.reason) for t in terms]
            self._persist("analysis", analysis.id, analysis.to_record())
            return analysis.terms[caller.id]

    def get_terms(self, caller: User, analysis_id: int,
                  user_id: int | None = None) -> list[SearchTerm]:
        """A user's term list; students see only their own."""
        analysis = self.get_analysis(analysis_id)
        self._check_view(caller, analysis)
        target = user_id if user_id is not None else caller.id
        if target != caller.id and not caller.is_teacher:
            raise Forbidden("term lists are visible to their owner and teachers")
        return list(analysis.terms.get(target, []))

    def run_model(self, caller: User, analysis_id: int,
                  algorithm: str = "nb") -> dict:
        """Train on the caller's terms and evaluate on the TEST side.

        The report is persisted with a per-user run sequence number so
        students can iterate on their terms and compare runs.
        """
        analysis = self.get_analysis(analysis_id)
        with self._analysis_lock(analysis_id):
            self._check_view(caller, analysis)
            terms = analysis.terms.get(caller.id) or []
            if not terms:
                raise NoTerms("store at least one search term before running")
            project = self.projects[analysis.project_id]
            report = run_pipeline(
                documents=self.pool_documents(analysis),
                categories=project.categories,
                terms=terms,
                split=analysis.split,
                alpha=self.alpha,
                algorithm=algorithm,
                logreg_params=LogRegParams(seed=analysis.seed),
            )
            seq = 1 + sum(1 for r in analysis.runs if r["user_id"] == caller.id)
            run = {"seq": seq, "user_id": caller.id, "algorithm": algorithm,
                   "report": report.to_dict()}
            analysis.runs.append(run)
            self._persist("analysis", analysis.id, analysis.to_record())
            return run

    def get_run(self, caller: User, analysis_id: int, seq: int) -> dict:
        analysis = self.get_analysis(analysis_id)
        self._check_view(caller, analysis)
        for run in analysis.runs:
            if run["user_id"] == caller.id and run["seq"] == seq:
                return run
        raise UnknownRun(f"you have no run {seq} in this analysis")

    def best_scores(self, analysis_id: int) -> dict[int, int]:
        """Leaderboard: each user's best run total in this analysis."""
        analysis = self.get_analysis(analysis_id)
        best: dict[int, int] = {}
        for run in analysis.runs:
            uid = run["user_id"]
            total = run["report"]["total_score"]
            if total > best.get(uid, -1):
                best[uid] = total
        return best
