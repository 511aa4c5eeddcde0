"""Synthetic demo fixtures with planted per-category vocabulary.

The planted markers appear only in their own category's documents, so the
matching terms are guaranteed to separate the categories: every marker
word evaluates at accuracy 1.0 and document-level test accuracy is 1.0.
Generation is fully seeded and reproducible byte-for-byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .classroom import (
    PERSONAL,
    ROLE_TEACHER,
    SHARED_MODEL,
    SHARED_TEXTS,
    ClassroomService,
)
from .corpus import ingest_csv
from .store import Store
from .textclf import SearchTerm

PARTY_MARKERS = {
    "unity": ["harbor", "orchard", "lantern", "meadow", "bridgework"],
    "progress": ["rocket", "circuit", "beacon", "quarry", "summit"],
}

PLANTED_TERMS = [
    SearchTerm("harbor", "appears all over unity posts"),
    SearchTerm("orchard", "unity talks about orchards"),
    SearchTerm("lantern", "unity imagery"),
    SearchTerm("meadow", "unity imagery"),
    SearchTerm("bridgew*", "unity infrastructure theme"),
    SearchTerm("*ocket", "progress loves rockets"),
    SearchTerm("circuit", "progress tech vocabulary"),
    SearchTerm("beacon", "progress imagery"),
    SearchTerm("quarry", "progress industry theme"),
    SearchTerm("summit", "progress slogans"),
]

_FILLER = [
    "the", "we", "will", "our", "today", "people", "plan", "vote",
    "together", "community", "new", "for", "and", "great", "thanks",
    "join", "support", "every", "need", "future", "country", "work",
]

_HANDLES = ["@Organizer12", "@FieldTeam", "@CityDesk"]
_TAGS = ["#GetOutTheVote", "#TownHall"]
_LINKS = ["https://example.org/rally", "http://example.org/news?id=42"]

_PASSWORD_ALPHABET = "abcdefghjkmnpqrstuvwxyz23456789"


@dataclass
class DemoFixture:
    name: str
    seed: int
    corpora: dict[str, bytes]  # corpus name -> CSV bytes
    terms: list[SearchTerm]
    teacher: tuple[str, str]
    students: list[tuple[str, str]]


def _demo_text(rng: random.Random, category: str) -> str:
    words = [rng.choice(_FILLER) for _ in range(rng.randint(6, 12))]
    markers = rng.sample(PARTY_MARKERS[category], rng.randint(1, 3))
    words.extend(markers)
    rng.shuffle(words)
    # sprinkle raw social-media noise so preprocessing has something to do
    if rng.random() < 0.3:
        words.append(rng.choice(_HANDLES))
    if rng.random() < 0.3:
        words.append(rng.choice(_TAGS))
    if rng.random() < 0.3:
        words.append(rng.choice(_LINKS))
    return " ".join(words)


def _password(rng: random.Random, length: int = 10) -> str:
    return "".join(rng.choice(_PASSWORD_ALPHABET) for _ in range(length))


def build_two_party_demo(seed: int, docs_per_category: int = 500,
                         students: int = 10) -> DemoFixture:
    rng = random.Random(seed)
    corpora = {}
    for category in sorted(PARTY_MARKERS):
        rows = ["text,category"]
        for _ in range(docs_per_category):
            text = _demo_text(rng, category).replace('"', "")
            rows.append(f'"{text}",{category}')
        corpora[category] = ("\n".join(rows) + "\n").encode()
    teacher = ("teacher", _password(rng))
    student_accounts = [(f"student{i:02d}", _password(rng))
                        for i in range(1, students + 1)]
    return DemoFixture(name="two-party-demo", seed=seed, corpora=corpora,
                       terms=list(PLANTED_TERMS), teacher=teacher,
                       students=student_accounts)


FIXTURES = {"two-party-demo": build_two_party_demo}


@dataclass
class SeedResult:
    fixture: DemoFixture
    signup_url: str
    project_id: int
    analysis_ids: dict[str, int]  # kind -> analysis id
    analysis_seeds: dict[str, int]


def seed_store(data_dir, fixture_name: str, seed: int, force: bool = False,
               docs_per_category: int = 500, students: int = 10,
               alpha: float = 1.0, train_fraction: float = 0.8,
               shared_texts_n: int = 10) -> SeedResult:
    """Populate a fresh store with a demo fixture. Fully deterministic."""
    if fixture_name not in FIXTURES:
        raise ValueError(f"unknown fixture {fixture_name!r}; have {sorted(FIXTURES)}")
    fixture = FIXTURES[fixture_name](seed, docs_per_category=docs_per_category,
                                     students=students)
    store = Store.create(data_dir, force=force)
    service = ClassroomService(store=store, alpha=alpha,
                               train_fraction=train_fraction,
                               rng=random.Random(seed ^ 0x5EED))

    teacher = service.create_user(*fixture.teacher, ROLE_TEACHER)
    group = service.create_group(teacher, "Demo Class")
    student_users = []
    for username, password in fixture.students:
        student_users.append(
            service.register_via_link(group.signup_token, username, password))

    corpus_ids = []
    for name, data in sorted(fixture.corpora.items()):
        corpus = service.add_corpus(ingest_csv(data, name=name))
        corpus_ids.append(corpus.id)
    project = service.create_project(
        teacher, "Two Party Demo", "Tell the unity and progress feeds apart",
        group.id, corpus_ids)

    analysis_rng = random.Random(seed ^ 0xA11)
    analysis_ids = {}
    analysis_seeds = {}
    specs = [
        (SHARED_TEXTS, teacher, {"per_category_n": shared_texts_n}),
        (SHARED_MODEL, teacher, {}),
        (PERSONAL, student_users[0] if student_users else teacher, {}),
    ]
    for kind, owner, extra in specs:
        analysis = service.create_analysis(owner, project.id, kind,
                                           seed=analysis_rng.getrandbits(32), **extra)
        analysis_ids[kind] = analysis.id
        analysis_seeds[kind] = analysis.seed

    return SeedResult(fixture=fixture, signup_url=group.signup_path(),
                      project_id=project.id, analysis_ids=analysis_ids,
                      analysis_seeds=analysis_seeds)


def demo_corpora_files(fixture: DemoFixture, directory) -> list[str]:
    """Write the fixture corpora as CSV files; returns the paths."""
    from pathlib import Path
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, data in sorted(fixture.corpora.items()):
        path = directory / f"{name}.csv"
        path.write_bytes(data)
        paths.append(str(path))
    return paths


def terms_file_content(terms: list[SearchTerm]) -> str:
    return "".join(f"{t.pattern}\t{t.reason}\n" for t in terms)
