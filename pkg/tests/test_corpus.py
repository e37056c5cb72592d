import pytest

from fibercone import report
from fibercone.cli import main
from fibercone.corpus import CorpusParams, _run_one, aggregate, corpus_summary, dump_defect, generate, run_corpus
from fibercone.dsl import parse
from fibercone.errors import DefectError


def strip(results):
    out = []
    for r in results:
        rep = dict(r.report or {})
        rep.pop("timing", None)
        out.append((r.index, r.ok, r.error, rep))
    return out


def test_generation_is_deterministic():
    p = CorpusParams(dim=2, count=6, seed=9)
    assert [d.to_text() for d in generate(p)] == [d.to_text() for d in generate(p)]
    q = CorpusParams(dim=2, count=6, seed=10)
    assert [d.to_text() for d in generate(p)] != [d.to_text() for d in generate(q)]


def test_dimension_one_uses_hypersurface_in_two_variables():
    for doc in generate(CorpusParams(dim=1, count=8, seed=3)):
        assert doc.variables == ("x", "y") and len(doc.relations) == 1
        assert doc.relations[0].is_homogeneous()
        assert doc.context().dim == 1
        assert doc.ideal("I").is_zero_dimensional()


def test_generated_ideals_are_m_primary_and_homogeneous(corpus):
    for dim, (_, docs, _) in corpus.items():
        for doc in docs:
            assert doc.context().dim == dim
            I = doc.ideal("I")
            assert I.is_zero_dimensional()
            assert all(g.is_homogeneous() for g in I.gens)


def test_pool_order_matches_serial():
    p = CorpusParams(dim=1, count=3, seed=2)
    docs = generate(p)
    serial = run_corpus(p, docs)
    p.jobs = 2
    assert strip(run_corpus(p, docs)) == strip(serial)


def test_summary_is_byte_identical(corpus):
    params, docs, results = corpus[1]
    again = run_corpus(params, docs)
    assert corpus_summary(params, again) == corpus_summary(params, results)


def test_no_defects_in_corpora(corpus):
    for dim, (_, _, results) in corpus.items():
        agg = aggregate(results)
        assert agg.defects == 0, [r.error for r in results if not r.ok]
        assert agg.analysed == agg.instances


def test_defect_dump_replays(tmp_path, monkeypatch, capsys):
    real = report.Analysis.amm_section

    def broken(self, label):
        if self.I.num_generators() == 3:
            raise DefectError("injected for replay test")
        return real(self, label)

    monkeypatch.setattr(report.Analysis, "amm_section", broken)
    doc = parse("ring R = F32003[x,y];\nideal I = x^3, y^3, x^2*y;\n")
    res = _run_one((7, doc.to_text(), 1234))
    assert not res.ok and res.exit_code == 4
    path = dump_defect(res, str(tmp_path))
    text = open(path).read()
    assert "option seed = 1234;" in text
    assert main(["analyze", path]) == 4
    assert "injected for replay test" in capsys.readouterr().err


@pytest.mark.parametrize("dim", [1, 2])
def test_aggregate_counts_are_consistent(corpus, dim):
    agg = aggregate(corpus[dim][2])
    assert agg.bounds_held == agg.bounds_checked > 0
    assert agg.identities_held == agg.identities_checked > 0
    assert agg.series_matched == agg.series_checked
