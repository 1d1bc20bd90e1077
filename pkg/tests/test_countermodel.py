"""The executable refutation suite and its mutation guards."""

import json

import pytest

from polykernel.corpus import load_corpus
from polykernel.countermodel import (
    BOOL_PRIME,
    DEFAULT_MANIFEST,
    check_funext_fails,
    check_no_induction,
    check_parametric_quotient,
    check_stream_coinduction,
    check_uip,
    closed_normal_forms,
    enumerate_members,
    load_certificate,
    run_suite,
)
from polykernel.errors import ImproperCertificate, ManifestError
from polykernel.model import GeneratedModel
from polykernel.weca import LAMBDA_ID, Verdict


@pytest.fixture(scope="module")
def corpus():
    return load_corpus()


MUTATIONS = {
    "thm-4.2": ("s2", "s1"),
    "thm-4.3": (
        "fhat",
        "rec_q bool (λb:bool. true)"
        " (λx,y:bool. λr:eq_bool x y. λP:bool -> *. λh:P true. h)",
    ),
    "lem-5.7": ("church1", "succ (succ O)"),
    "lem-5.8": ("fext_g", "λb:bool. b bool true false"),
}


def test_default_suite_reproduces(corpus):
    reports = run_suite(corpus=corpus)
    assert [r.id for r in reports] == list(DEFAULT_MANIFEST)
    for r in reports:
        assert r.status == "Reproduced", (r.id, [o for o in r.obligations if not o.ok])


@pytest.mark.parametrize("check_id", sorted(MUTATIONS))
def test_mutations_flip_to_failed(corpus, check_id):
    name, body = MUTATIONS[check_id]
    mutated = corpus.mutate(name, body)
    [report] = run_suite([check_id], corpus=mutated)
    assert report.status == "Failed"
    # the original corpus is untouched
    [clean] = run_suite([check_id], corpus=corpus)
    assert clean.status == "Reproduced"


def test_induction_certificate_mutations(corpus):
    cert = load_certificate("no_induction")
    weak = dict(cert, witnesses=[{"family": "EqualsNormalFormOf", "term": "O"}])
    assert check_no_induction(weak, corpus=corpus).status == "Failed"
    with pytest.raises(ImproperCertificate):
        check_no_induction(dict(cert, witnesses=[{"family": "FullSet"}]),
                           corpus=corpus)
    pi = dict(cert, model="pi")
    assert check_no_induction(pi, corpus=corpus).status == "Failed"


def test_manifest_errors(corpus):
    with pytest.raises(ManifestError):
        run_suite(["no-such-check"], corpus=corpus)
    with pytest.raises(ManifestError):
        run_suite("/nonexistent/manifest.json", corpus=corpus)
    with pytest.raises(ManifestError):
        run_suite(42, corpus=corpus)


def test_manifest_file_roundtrip(tmp_path, corpus):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"checks": ["pi-consistency"], "fuel": 50_000}))
    [report] = run_suite(str(path), corpus=corpus)
    assert report.id == "pi-consistency" and report.status == "Reproduced"


def test_starved_check_is_unknown(corpus):
    [report] = run_suite(["thm-4.2"], corpus=corpus, fuel=5)
    assert report.status == "Unknown"


def test_report_schema(corpus):
    [report] = run_suite(["pi-consistency"], corpus=corpus)
    blob = report.to_json()
    assert set(blob) == {"id", "status", "obligations", "flags", "millis"}
    assert all(set(o) == {"name", "expected", "actual", "detail"}
               for o in blob["obligations"])
    json.dumps(blob)  # stays serializable


def test_enumeration_monotone(corpus):
    gm = GeneratedModel(corpus.checker(), LAMBDA_ID)
    ty = corpus.parse("bool")
    small, _ = enumerate_members(lambda u: gm.member(u, ty), 5)
    large, _ = enumerate_members(lambda u: gm.member(u, ty), 7)
    assert set(small) <= set(large)
    assert set(small) <= set(BOOL_PRIME)


def test_closed_normal_forms_are_normal(corpus):
    from polykernel.weca import step

    forms = closed_normal_forms(4)
    assert forms and all(step(t, LAMBDA_ID) is None for t in forms)
