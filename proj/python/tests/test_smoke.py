import pytest

import amrkit

GOLD = """(z0 / schedule-01
    :ARG0 (z1 / person
        :name (z2 / name
            :op1 "Antonio"
            :op2 "Banderas"))
    :ARG1 (z3 / premiere-01
        :ARG0 z1
        :ARG1 (z4 / movie
            :poss z1))
    :ARG3 (z5 / date-entity
        :time "15:00"))"""

PRED1 = GOLD.replace("premiere-01", "premiere").replace("        :ARG0 z1\n        :ARG1 (z4", "        :mod (z4")
PRED2 = GOLD.replace('"15:00"', '"3:00"')


def test_normalize_round_trip():
    assert amrkit.normalize(GOLD) == GOLD
    assert amrkit.normalize(amrkit.normalize("(b / boy :mod (t / tall))")) == amrkit.normalize(
        "(b / boy :mod (t / tall))"
    )


def test_triples():
    triples = amrkit.triples(GOLD)
    assert len(triples) == 17
    assert triples[0] == ("", ":root", "z0")
    assert ("z3", ":ARG1", "z4") in triples


def test_smatch_example_values():
    s = amrkit.smatch(PRED2, GOLD)
    assert (s["matched"], s["candidate_total"], s["reference_total"]) == (16, 17, 17)
    assert s["f1"] == pytest.approx(16 / 17)
    assert amrkit.smatch(GOLD, GOLD, exact=True)["f1"] == 1.0
    b = amrkit.breakdown(PRED2, GOLD)
    assert b["concepts"]["f1"] == 1.0
    assert set(b) >= {"smatch", "srl", "reentrancies", "wikification"}


def test_validate_and_merge():
    assert amrkit.validate(GOLD) == []
    report = amrkit.validate("(p / person :ARG0 (b / boy))")
    assert report[0]["kind"] == "ArgOnNonPredicate"
    assert report[0]["role"] == ":ARG0"
    merged, pivot = amrkit.merge([GOLD, GOLD, PRED2])
    assert pivot == 0
    assert amrkit.smatch(merged, GOLD, exact=True)["f1"] == 1.0
    with pytest.raises(ValueError):
        amrkit.merge([GOLD], threshold=0.0)


def test_selection():
    graphs = [PRED1, PRED2, GOLD]
    assert amrkit.select_smatch_avg(graphs) == 2
    chosen = amrkit.select_ppl_zero(graphs, "sentence", amrkit.mock_perplexity)
    assert chosen == 2
    assert amrkit.select_ppl_zero(graphs, "s", lambda s, ctx, g: 1.0 + len(g)) == 0
    with pytest.raises(amrkit.ScorerError):
        amrkit.select_ppl_zero(graphs, "s", lambda s, ctx, g: -1.0)


def test_kfold():
    folds = amrkit.kfold(59255, 5, 1)
    assert [len(test) for _, test in folds] == [11851] * 5
    assert amrkit.kfold(10, 5, 3) == amrkit.kfold(10, 5, 3)


def test_parse_errors():
    with pytest.raises(amrkit.PenmanError) as err:
        amrkit.normalize("(a / b")
    assert "line 1" in str(err.value)
