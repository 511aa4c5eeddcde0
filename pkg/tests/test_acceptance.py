"""Acceptance suite: one test per criterion, at the stated tolerances.

Run with `pytest tests/test_acceptance.py -v -s` to see one line per
criterion. Oracles live in tests/oracles.py and are independent of the
code paths they check (exact rationals instead of log space, character
recursion instead of regex, definitional metric recomputation).
"""

import json
import random
import socket
import subprocess
import sys
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from functools import reduce

import numpy as np
import pytest
import requests
from click.testing import CliRunner
from fastapi.testclient import TestClient

from oracles import (
    brute_force_posterior,
    definitional_metrics,
    naive_vocabulary_scan,
    random_labeled_docs,
)
from textlab.classroom import SHARED_MODEL, SHARED_TEXTS, ClassroomService
from textlab.cli import main as cli_main
from textlab.fixtures import seed_store, terms_file_content
from textlab.server import ServerConfig, create_app
from textlab.store import Store
from textlab.textclf import (
    empty_model,
    expand_terms,
    loss_and_gradients,
    metrics_from_confusion,
    predict_nb,
    train_logreg,
    train_nb,
    update_nb,
    LogRegParams,
    SearchTerm,
)
from textlab.textclf.evaluation import ConfusionMatrix


def announce(name: str):
    print(f"\nACCEPTANCE {name}: PASS")


# ---------------------------------------------------------------------------
# Criterion 1: NB oracle equivalence, 200 random corpora, 1e-9, < 10 s.
# ---------------------------------------------------------------------------

def test_criterion_nb_oracle_equivalence():
    started = time.monotonic()
    rng = random.Random(20_240_101)
    for trial in range(200):
        docs, categories = random_labeled_docs(rng, max_docs=20,
                                               max_categories=3, vocab_limit=15)
        alpha = rng.choice([0.5, 1.0, 2.0])
        model = train_nb(docs, categories, alpha=alpha)
        probes = [
            [],
            docs[rng.randrange(len(docs))].tokens,
            [rng.choice([f"w{i}" for i in range(15)] + ["unseen"])
             for _ in range(rng.randint(1, 10))],
        ]
        for tokens in probes:
            expected = brute_force_posterior(model, tokens)
            actual = predict_nb(model, tokens)
            for category in categories:
                assert abs(actual[category] - float(expected[category])) < 1e-9, \
                    f"trial {trial}: {category} off by more than 1e-9"
    elapsed = time.monotonic() - started
    assert elapsed < 10.0, f"took {elapsed:.2f}s, budget 10s"
    announce(f"NB oracle equivalence (200 corpora, {elapsed:.2f}s)")


# ---------------------------------------------------------------------------
# Criterion 2: fold(update) == batch train exactly, 100 sequences up to 200
# docs, plus the same equality through submit_label with 16 concurrent
# clients on a shared-model analysis.
# ---------------------------------------------------------------------------

def test_criterion_incremental_equals_batch():
    rng = random.Random(77)
    for _ in range(100):
        docs, categories = random_labeled_docs(
            rng, max_docs=rng.randint(2, 200), max_categories=3, vocab_limit=15)
        folded = reduce(lambda m, d: update_nb(m, d.tokens, d.category),
                        docs, empty_model(categories))
        batch = train_nb(docs, categories)
        assert folded == batch
    announce("incremental == batch (100 random sequences)")


def test_criterion_shared_model_concurrent_submit_label():
    from test_classroom import make_classroom

    service, teacher, group, alice, bob, project = make_classroom(docs_per_category=24)
    analysis = service.create_analysis(teacher, project.id, SHARED_MODEL, seed=3)
    pool = service.pool_documents(analysis)
    students = [alice, bob] + [
        service.register_via_link(group.signup_token, f"s{i}", "pw")
        for i in range(14)]
    assert len(students) == 16

    jobs = [(students[i % 16], doc_id) for i, doc_id in enumerate(range(len(pool)))]
    barrier = threading.Barrier(16)

    def label(chunk):
        barrier.wait()
        for user, doc_id in chunk:
            service.submit_label(user, analysis.id, doc_id, "north")

    chunks = [jobs[i::16] for i in range(16)]
    with ThreadPoolExecutor(max_workers=16) as pool_exec:
        list(pool_exec.map(label, chunks))

    from textlab.textclf import NaiveBayesModel
    shared = NaiveBayesModel.from_state(analysis.model_state)
    batch = train_nb(pool, project.categories, alpha=service.alpha)
    assert shared == batch
    assert len(analysis.label_events) == len(pool)
    announce("shared model == batch after 16-client concurrent labeling")


# ---------------------------------------------------------------------------
# Criterion 3: wildcard expansion equals the naive scan on 1,000 random
# (pattern, vocabulary) pairs including leading/trailing/multiple "*".
# ---------------------------------------------------------------------------

def test_criterion_wildcard_oracle():
    rng = random.Random(2023)
    alphabet = "abcdef"

    def random_word():
        return "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 8)))

    checked_shapes = {"leading": 0, "trailing": 0, "multiple": 0}
    for trial in range(1000):
        vocabulary = {random_word() for _ in range(rng.randint(1, 40))}
        shape = rng.randrange(5)
        core = random_word()[: rng.randint(1, 4)]
        if shape == 0:
            pattern = "*" + core
            checked_shapes["leading"] += 1
        elif shape == 1:
            pattern = core + "*"
            checked_shapes["trailing"] += 1
        elif shape == 2:
            pattern = "*" + core + "*" + random_word()[:2] + "*"
            checked_shapes["multiple"] += 1
        elif shape == 3:
            pattern = rng.choice(sorted(vocabulary))  # exact
        else:
            pattern = core[:1] + "*" + core[1:]
        expansion = expand_terms([SearchTerm(pattern, "r")], vocabulary)
        assert expansion[pattern] == naive_vocabulary_scan(pattern, vocabulary), \
            f"trial {trial}: pattern {pattern!r}"
    assert all(count > 100 for count in checked_shapes.values())
    announce("wildcard expansion == naive scan (1,000 pairs)")


# ---------------------------------------------------------------------------
# Criterion 4: planted-separation fixture through cli_eval and the HTTP run
# endpoint, identical reports, accuracy 1.0 on every planted term,
# document accuracy >= 0.95, < 5 s.
# ---------------------------------------------------------------------------

def test_criterion_planted_separation_fixture(tmp_path):
    started = time.monotonic()
    store_dir = tmp_path / "store"
    result = seed_store(store_dir, "two-party-demo", seed=42,
                        docs_per_category=200, students=3)
    terms_path = tmp_path / "terms.txt"
    terms_path.write_text(terms_file_content(result.fixture.terms))
    analysis_id = result.analysis_ids[SHARED_MODEL]
    split_seed = result.analysis_seeds[SHARED_MODEL]

    cli = CliRunner().invoke(cli_main, [
        "eval", "--data-dir", str(store_dir), "--terms", str(terms_path),
        "--seed", str(split_seed), "--format", "json"])
    assert cli.exit_code == 0, cli.output
    cli_report = json.loads(cli.output)

    service = ClassroomService(store=Store.open(store_dir))
    app = create_app(ServerConfig(data_dir=str(store_dir)), service=service)
    client = TestClient(app)
    teacher_user, teacher_pw = result.fixture.teacher
    token = client.post("/api/v1/login", json={
        "username": teacher_user, "password": teacher_pw}).json()["token"]
    headers = {"Authorization": f"Bearer {token}"}
    client.put(f"/api/v1/analyses/{analysis_id}/terms", json={
        "terms": [{"pattern": t.pattern, "reason": t.reason}
                  for t in result.fixture.terms]}, headers=headers)
    http_report = client.post(f"/api/v1/analyses/{analysis_id}/run",
                              json={"algorithm": "nb"},
                              headers=headers).json()["report"]

    assert http_report == cli_report, "CLI and HTTP reports differ"
    planted_words = set()
    vocabulary = {w for corpus in service.corpora.values()
                  for d in corpus.documents for w in d.tokens}
    for term in result.fixture.terms:
        matched = expand_terms([term], vocabulary)[term.pattern]
        assert matched, f"planted term {term.pattern!r} matched nothing"
        planted_words |= matched
    rows = {r["word"]: r for r in cli_report["rows"]}
    assert set(rows) == planted_words
    for word, row in rows.items():
        assert row["accuracy"] == 1.0, f"{word} accuracy {row['accuracy']}"
        assert row["targeted"] > 0
    assert cli_report["metrics"]["accuracy"] >= 0.95
    assert cli_report["excluded_test_docs"] == 0
    elapsed = time.monotonic() - started
    assert elapsed < 5.0, f"took {elapsed:.2f}s, budget 5s"
    announce(f"planted separation via CLI and HTTP, identical reports ({elapsed:.2f}s)")


# ---------------------------------------------------------------------------
# Criterion 5: metrics identities on 500 random confusion matrices, exact
# rational arithmetic.
# ---------------------------------------------------------------------------

def test_criterion_metrics_identities():
    rng = random.Random(555)
    for trial in range(500):
        k = rng.randint(2, 6)
        density = rng.choice([3, 10, 40])
        cells = [[rng.randint(0, density) for _ in range(k)] for _ in range(k)]
        if rng.random() < 0.1:
            column = rng.randrange(k)  # force an undefined precision
            for row in cells:
                row[column] = 0
        categories = [f"c{i}" for i in range(k)]
        metrics = metrics_from_confusion(ConfusionMatrix(categories, cells))
        expected = definitional_metrics(cells)
        for i, cat in enumerate(categories):
            assert metrics.precision[cat] == expected["precision"][i]
            assert metrics.recall[cat] == expected["recall"][i]
            assert metrics.f1[cat] == expected["f1"][i]
            p, r = metrics.precision[cat], metrics.recall[cat]
            if p is not None and r is not None and p + r > 0:
                assert metrics.f1[cat] == 2 * p * r / (p + r)
            else:
                assert metrics.f1[cat] is None
        assert metrics.macro_f1 == expected["macro_f1"]
        assert metrics.accuracy == expected["accuracy"]
        if metrics.accuracy is not None:
            total = sum(sum(row) for row in cells)
            trace = sum(cells[i][i] for i in range(k))
            assert metrics.accuracy == Fraction(trace, total)
    announce("metrics identities (500 matrices, exact rationals)")


# ---------------------------------------------------------------------------
# Criterion 6: logistic-regression gradients vs central finite differences,
# relative error <= 1e-4 on 50 random instances; loss non-increasing on a
# separable fixture.
# ---------------------------------------------------------------------------

def test_criterion_logreg_gradient_check():
    from test_logreg import finite_difference_grads

    rng = np.random.default_rng(7)
    for trial in range(50):
        m = int(rng.integers(3, 10))
        n_features = int(rng.integers(2, 6))
        k = int(rng.integers(2, 4))
        x = rng.integers(0, 5, size=(m, n_features)).astype(float)
        y = rng.integers(0, k, size=m)
        weights = rng.normal(0, 0.8, size=(k, n_features))
        bias = rng.normal(0, 0.8, size=k)
        l2 = float(rng.choice([0.0, 0.01, 0.1]))
        _, grad_w, grad_b = loss_and_gradients(weights, bias, x, y, l2)
        fd_w, fd_b = finite_difference_grads(weights, bias, x, y, l2)
        rel_w = np.abs(grad_w - fd_w) / np.maximum(np.abs(fd_w), 1e-8)
        rel_b = np.abs(grad_b - fd_b) / np.maximum(np.abs(fd_b), 1e-8)
        assert rel_w.max() <= 1e-4, f"trial {trial}: weight grad rel err {rel_w.max()}"
        assert rel_b.max() <= 1e-4, f"trial {trial}: bias grad rel err {rel_b.max()}"

    from test_logreg import CATEGORIES, FEATURES, separable_docs
    model = train_logreg(separable_docs(), CATEGORIES, FEATURES,
                         LogRegParams(epochs=400))
    diffs = np.diff(model.loss_history)
    assert (diffs <= 1e-12).all(), "loss increased during training"
    announce("logreg gradient check (50 instances) and non-increasing loss")


# ---------------------------------------------------------------------------
# Criteria 7 and 8 run against a real server subprocess.
# ---------------------------------------------------------------------------

def free_port() -> int:
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    probe.bind(("127.0.0.1", 0))
    port = probe.getsockname()[1]
    probe.close()
    return port


def start_server(data_dir, port) -> subprocess.Popen:
    proc = subprocess.Popen(
        [sys.executable, "-m", "textlab.cli", "serve",
         "--data-dir", str(data_dir), "--port", str(port)],
        stdout=subprocess.PIPE, stderr=subprocess.STDOUT)
    deadline = time.monotonic() + 30
    while time.monotonic() < deadline:
        try:
            response = requests.get(
                f"http://127.0.0.1:{port}/api/v1/health", timeout=1)
            if response.status_code == 200:
                return proc
        except requests.ConnectionError:
            pass
        if proc.poll() is not None:
            raise RuntimeError(
                f"server exited early:\n{proc.stdout.read().decode()}")
        time.sleep(0.05)
    proc.kill()
    raise RuntimeError("server did not come up within 30s")


@pytest.fixture
def seeded_server(tmp_path):
    store_dir = tmp_path / "store"
    result = seed_store(store_dir, "two-party-demo", seed=7,
                        docs_per_category=40, students=3)
    port = free_port()
    proc = start_server(store_dir, port)
    try:
        yield store_dir, result, f"http://127.0.0.1:{port}"
    finally:
        if proc.poll() is None:
            proc.kill()
            proc.wait()


def http_login(base, username, password):
    response = requests.post(f"{base}/api/v1/login",
                             json={"username": username, "password": password})
    assert response.status_code == 200, response.text
    return {"Authorization": f"Bearer {response.json()['token']}"}


def test_criterion_workflow_integration(seeded_server):
    store_dir, seeded, base = seeded_server
    analysis_id = seeded.analysis_ids[SHARED_TEXTS]
    token = seeded.signup_url.rsplit("/", 1)[1]

    # sign up through the link and label the full 20-document pool
    response = requests.post(f"{base}/api/v1/signup/{token}",
                             json={"username": "newkid", "password": "pw"})
    assert response.status_code == 200, response.text
    student = http_login(base, "newkid", "pw")

    readonly = ClassroomService(store=Store.open(store_dir))
    analysis = readonly.get_analysis(analysis_id)
    pool = readonly.pool_documents(analysis)
    gold = {doc.id: doc.category for doc in pool}
    assert len(pool) == 20
    other = {"unity": "progress", "progress": "unity"}

    expected = {}
    for step in range(20, 0, -1):
        payload = requests.get(f"{base}/api/v1/analyses/{analysis_id}/next",
                               headers=student).json()
        assert payload["remaining"] == step
        doc_id = payload["document"]["id"]
        assert set(payload["document"]) == {"id", "text"}
        # label deliberately: every third document wrong
        guess = gold[doc_id] if doc_id % 3 else other[gold[doc_id]]
        outcome = requests.post(
            f"{base}/api/v1/analyses/{analysis_id}/labels",
            json={"document_id": doc_id, "category": guess}, headers=student)
        assert outcome.status_code == 200
        was_correct = guess == gold[doc_id]
        assert outcome.json()["correct"] is was_correct
        expected[doc_id] = (1, 0) if was_correct else (0, 1)

    rows = requests.get(f"{base}/api/v1/analyses/{analysis_id}/stats/labels",
                        headers=student).json()["rows"]
    observed = {r["document_id"]: (r["correct_count"], r["incorrect_count"])
                for r in rows}
    assert observed == expected, "statistics rows diverge from hand-maintained counts"

    # concurrent duplicate submissions: exactly one 200 and one ALREADY_LABELED
    username, password = seeded.fixture.students[0]
    racer = http_login(base, username, password)
    target = requests.get(f"{base}/api/v1/analyses/{analysis_id}/next",
                          headers=racer).json()["document"]["id"]
    barrier = threading.Barrier(2)
    outcomes = []

    def submit():
        barrier.wait()
        response = requests.post(
            f"{base}/api/v1/analyses/{analysis_id}/labels",
            json={"document_id": target, "category": "unity"}, headers=racer)
        outcomes.append(response)

    threads = [threading.Thread(target=submit) for _ in range(2)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()
    statuses = sorted(r.status_code for r in outcomes)
    assert statuses == [200, 409], f"got {statuses}"
    conflict = next(r for r in outcomes if r.status_code == 409)
    assert conflict.json()["error"]["machine_code"] == "ALREADY_LABELED"
    announce("workflow integration over live HTTP (signup, 20 labels, stats, race)")


def test_criterion_persistence_kill_restart(tmp_path):
    store_dir = tmp_path / "store"
    seeded = seed_store(store_dir, "two-party-demo", seed=9,
                        docs_per_category=40, students=2)
    analysis_id = seeded.analysis_ids[SHARED_MODEL]
    port = free_port()
    proc = start_server(store_dir, port)
    base = f"http://127.0.0.1:{port}"
    try:
        teacher = http_login(base, *seeded.fixture.teacher)
        acknowledged = []
        for doc_id in range(5):
            response = requests.post(
                f"{base}/api/v1/analyses/{analysis_id}/labels",
                json={"document_id": doc_id, "category": "unity"}, headers=teacher)
            assert response.status_code == 200
            acknowledged.append(doc_id)
    finally:
        proc.kill()  # SIGKILL: no flush opportunity
        proc.wait()

    survivor = ClassroomService(store=Store.open(store_dir))
    events = survivor.get_analysis(analysis_id).label_events
    assert sorted(e.document_id for e in events) == acknowledged, \
        "acknowledged writes lost after kill"
    dump_before = survivor.entity_dump()

    port = free_port()
    proc = start_server(store_dir, port)
    base = f"http://127.0.0.1:{port}"
    try:
        teacher = http_login(base, *seeded.fixture.teacher)
        rows = requests.get(
            f"{base}/api/v1/analyses/{analysis_id}/stats/labels",
            headers=teacher).json()["rows"]
        assert sum(r["correct_count"] + r["incorrect_count"] for r in rows) == 5
    finally:
        proc.kill()
        proc.wait()

    dump_after = ClassroomService(store=Store.open(store_dir)).entity_dump()
    assert dump_before == dump_after, "entity dump changed across restart"
    announce("persistence: kill -9 loses nothing acknowledged; dump stable")
