import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats as scipy_stats

from expertsearch.evaluation import (
    ComparisonCell,
    RunEntry,
    RunFile,
    Topic,
    compare_runs,
    format_compare_cell,
    format_comparison_matrix,
    format_precision_row,
    format_precision_table,
    macro_average,
    paired_ttest,
    precision_at_k,
    quantize,
    read_qrels,
    read_run,
    read_topics,
    round_half_away,
    write_qrels,
    write_run,
    write_topics,
)

STRONG_POOL = {"x": "medium", "y": "low"}
WEAK_POOL = {"x": "low", "y": "none"}


def test_quantize_high_always_relevant():
    assert quantize("high", STRONG_POOL) == 1
    assert quantize("high", WEAK_POOL) == 1


def test_quantize_low_with_strong_pool_irrelevant():
    assert quantize("low", STRONG_POOL) == 0


def test_quantize_low_without_strong_pool_relevant():
    assert quantize("low", WEAK_POOL) == 1


@pytest.mark.parametrize(
    "grade,pool_strong,expected",
    [
        ("high", True, 1),
        ("high", False, 1),
        ("medium", True, 1),
        ("medium", False, 1),
        ("low", True, 0),
        ("low", False, 1),
        ("none", True, 0),
        ("none", False, 0),
    ],
)
def test_quantize_truth_table(grade, pool_strong, expected):
    pool = STRONG_POOL if pool_strong else WEAK_POOL
    assert quantize(grade, pool) == expected


def test_quantize_rejects_unknown_grade():
    with pytest.raises(ValueError):
        quantize("excellent", STRONG_POOL)


def test_precision_counts_relevant_in_top_k():
    judgments = {"a": "high", "c": "medium", "x": "none"}
    ranked = ["a", "x", "c", "q", "r"]
    assert precision_at_k(ranked, judgments, 5) == 0.4


def test_precision_divides_by_k_not_retrieved():
    judgments = {"a": "high", "b": "high", "c": "high"}
    assert precision_at_k(["a", "b", "c"], judgments, 5) == 0.6


def test_precision_empty_list_is_zero():
    assert precision_at_k([], {"a": "high"}, 5) == 0.0


def test_precision_unjudged_not_relevant():
    assert precision_at_k(["mystery"], {"a": "high"}, 1) == 0.0


def test_precision_times_k_is_integer_count():
    judgments = {"a": "high", "b": "low", "c": "medium"}
    for k in (1, 2, 3, 5, 10):
        value = precision_at_k(["a", "b", "c"], judgments, k)
        assert math.isclose(value * k, round(value * k), abs_tol=1e-12)


def _run(tag, per_topic):
    results = {}
    for topic_id, persons in per_topic.items():
        results[topic_id] = tuple(
            RunEntry(i + 1, pid, float(len(persons) - i)) for i, pid in enumerate(persons)
        )
    return RunFile(tag, results)


def test_macro_average_is_mean():
    run = _run("r", {"t1": ["a", "x", "q", "r", "s"], "t2": ["a", "x", "b", "q", "r"]})
    qrels = {
        "t1": {"a": "high", "x": "medium"},  # p@5 = 0.4
        "t2": {"a": "high", "x": "medium", "b": "high"},  # p@5 = 0.6
    }
    assert macro_average(run, qrels, (5,))[5] == 0.5


def test_macro_average_single_topic_identity():
    run = _run("r", {"t1": ["a"]})
    qrels = {"t1": {"a": "high"}}
    assert macro_average(run, qrels, (1,))[1] == 1.0


def test_macro_missing_judgments_scores_zero(caplog):
    run = _run("r", {"t1": ["a"], "t2": ["a"]})
    qrels = {"t1": {"a": "high"}}
    macro = macro_average(run, qrels, (1,), ["t1", "t2"])
    assert macro[1] == 0.5
    assert "t2" in caplog.text


def test_precision_row_formatting():
    row = format_precision_row("New-web+db", [0.659, 0.592, 0.523, 0.420])
    assert row == "New-web+db 0.659 0.592 0.523 0.420"


def test_precision_table_contains_all_rows():
    table = format_precision_table(
        [("Base-web", [0.435, 0.391, 0.355, 0.301]), ("New-web", [0.616, 0.556, 0.484, 0.372])]
    )
    lines = table.splitlines()
    assert lines[0].split() == ["p@", "1", "3", "5", "10"]
    assert "Base-web" in lines[1] and "0.435" in lines[1]
    assert "New-web" in lines[2] and "0.372" in lines[2]


def test_ttest_identical_vectors():
    assert paired_ttest([0.2, 0.4, 0.6], [0.2, 0.4, 0.6]) == (0.0, 1.0, False)


def test_ttest_swap_negates_t_keeps_p():
    a, b = [0.9, 0.8, 0.4, 0.7], [0.2, 0.3, 0.4, 0.1]
    t_ab, p_ab, _ = paired_ttest(a, b)
    t_ba, p_ba, _ = paired_ttest(b, a)
    assert math.isclose(t_ab, -t_ba, rel_tol=1e-12)
    assert math.isclose(p_ab, p_ba, rel_tol=1e-12)


def test_ttest_textbook_example():
    t, p, significant = paired_ttest([1.0, 2.0, 3.0, 4.0], [0.0, 0.0, 0.0, 0.0])
    assert math.isclose(t, 3.872983346207417, rel_tol=1e-9)
    assert math.isclose(p, 0.030466291662170977, rel_tol=1e-6)
    assert significant


def test_ttest_matches_scipy_reference():
    rng_pairs = [
        ([0.1, 0.5, 0.3, 0.9, 0.2], [0.2, 0.4, 0.4, 0.5, 0.1]),
        ([1.0, 1.0, 0.0, 0.5], [0.0, 1.0, 0.5, 0.5]),
    ]
    for a, b in rng_pairs:
        t, p, _ = paired_ttest(a, b)
        ref = scipy_stats.ttest_rel(a, b)
        assert math.isclose(t, float(ref.statistic), abs_tol=1e-9)
        assert math.isclose(p, float(ref.pvalue), abs_tol=1e-9)


def test_ttest_rejects_bad_input():
    with pytest.raises(ValueError):
        paired_ttest([1.0], [2.0])
    with pytest.raises(ValueError):
        paired_ttest([1.0, 2.0], [1.0])


def test_compare_cell_formatting_target():
    assert format_compare_cell(40, 20, 18) == "40/20 18%"
    assert format_compare_cell(40, 20, 18, significant=True) == "40/20 18%*"
    assert format_compare_cell(0, 0, None) == "0/0 n/a"


def test_compare_identical_runs():
    run = _run("r", {"t1": ["a"], "t2": ["b"]})
    qrels = {"t1": {"a": "high"}, "t2": {"a": "high"}}
    cell = compare_runs(run, run, qrels, 1)
    assert cell.text == "0/0 0%"
    assert cell.p_value == 1.0


def test_compare_hand_computed_cell():
    # 3 topics at k=1: A relevant on t1,t3; B relevant on t3 only
    run_a = _run("A", {"t1": ["a"], "t2": ["x"], "t3": ["a"]})
    run_b = _run("B", {"t1": ["x"], "t2": ["x"], "t3": ["a"]})
    qrels = {"t1": {"a": "high"}, "t2": {"a": "high"}, "t3": {"a": "high"}}
    cell = compare_runs(run_a, run_b, qrels, 1)
    assert round_half_away(cell.win_pct) == 33
    assert round_half_away(cell.loss_pct) == 0
    assert round_half_away(cell.improvement_pct) == 100
    assert cell.text.startswith("33/0 100%")


def test_compare_undefined_improvement_when_b_zero():
    run_a = _run("A", {"t1": ["a"], "t2": ["a"]})
    run_b = _run("B", {"t1": ["x"], "t2": ["x"]})
    qrels = {"t1": {"a": "high"}, "t2": {"a": "high"}}
    cell = compare_runs(run_a, run_b, qrels, 1)
    assert cell.improvement_pct is None
    assert "n/a" in cell.text


def test_comparison_matrix_shape():
    cells = {
        ("New-web", "Base-web"): ComparisonCell(5, 51.0, 22.0, 36.0, 2.5, 0.01, True),
    }
    text = format_comparison_matrix(["Base-web", "New-web"], cells, 5)
    lines = text.splitlines()
    assert lines[0].startswith("p@5")
    assert "Base-web" in lines[0]
    assert lines[1].startswith("New-web")
    assert "51/22 36%*" in lines[1]


def test_round_half_away():
    assert round_half_away(33.333) == 33
    assert round_half_away(36.5) == 37
    assert round_half_away(-18.5) == -19
    assert round_half_away(0.0) == 0


_precision_values = st.integers(0, 100).map(lambda i: i / 100.0)


@settings(max_examples=30)
@given(st.lists(st.tuples(_precision_values, _precision_values), min_size=2, max_size=20))
def test_ttest_matches_scipy_on_random_vectors(pairs):
    a = [x for x, _ in pairs]
    b = [y for _, y in pairs]
    t, p, _ = paired_ttest(a, b)
    ref = scipy_stats.ttest_rel(a, b)
    ref_t = float(ref.statistic)
    ref_p = float(ref.pvalue)
    if math.isnan(ref_t):  # zero variance: scipy yields nan, we define the limit
        assert (t, p) in ((0.0, 1.0), (math.inf, 0.0), (-math.inf, 0.0))
    else:
        assert math.isclose(t, ref_t, rel_tol=1e-9, abs_tol=1e-6)
        assert math.isclose(p, ref_p, abs_tol=1e-6)


@settings(max_examples=25)
@given(st.permutations(["t1", "t2", "t3", "t4"]))
def test_macro_permutation_invariant(order):
    run = _run("r", {"t1": ["a"], "t2": ["b"], "t3": ["a"], "t4": ["c"]})
    qrels = {
        "t1": {"a": "high"},
        "t2": {"a": "high"},
        "t3": {"a": "medium"},
        "t4": {"c": "low"},
    }
    baseline = macro_average(run, qrels, (1,), ["t1", "t2", "t3", "t4"])
    shuffled = macro_average(run, qrels, (1,), list(order))
    assert math.isclose(baseline[1], shuffled[1], rel_tol=1e-12)


def test_run_file_invariants():
    with pytest.raises(ValueError, match="contiguous"):
        RunFile("r", {"t1": (RunEntry(2, "a", 1.0),)})
    with pytest.raises(ValueError, match="repeated"):
        RunFile("r", {"t1": (RunEntry(1, "a", 1.0), RunEntry(2, "a", 0.5))})
    with pytest.raises(ValueError, match="increase"):
        RunFile("r", {"t1": (RunEntry(1, "a", 1.0), RunEntry(2, "b", 2.0))})


def test_topic_validation():
    with pytest.raises(ValueError):
        Topic("", "query")
    with pytest.raises(ValueError):
        Topic("t1", "")


def test_file_round_trips(tmp_path):
    topics = [Topic("t1", "xml protocols"), Topic("t2", "data mining")]
    qrels = {"t1": {"p1": "high", "p2": "low"}, "t2": {"p1": "none"}}
    run = _run("demo", {"t1": ["p1", "p2"], "t2": ["p2"]})

    write_topics(topics, tmp_path / "topics.tsv")
    write_qrels(qrels, tmp_path / "qrels.tsv")
    write_run(run, tmp_path / "run.tsv")

    assert read_topics(tmp_path / "topics.tsv") == topics
    assert read_qrels(tmp_path / "qrels.tsv") == qrels
    reread = read_run(tmp_path / "run.tsv")
    assert reread.run_tag == "demo"
    assert [e.person_id for e in reread.results["t1"]] == ["p1", "p2"]


def test_run_file_format(tmp_path):
    run = _run("demo", {"t1": ["p1"]})
    write_run(run, tmp_path / "run.tsv")
    line = (tmp_path / "run.tsv").read_text().strip()
    assert line == "t1\t1\tp1\t1.000000\tdemo"


def test_read_qrels_rejects_duplicates(tmp_path):
    path = tmp_path / "qrels.tsv"
    path.write_text("t1\tp1\thigh\nt1\tp1\tlow\n")
    with pytest.raises(ValueError, match="duplicate"):
        read_qrels(path)


def test_read_run_rejects_mixed_tags(tmp_path):
    path = tmp_path / "run.tsv"
    path.write_text("t1\t1\tp1\t1.000000\ta\nt1\t2\tp2\t0.500000\tb\n")
    with pytest.raises(ValueError, match="mixed"):
        read_run(path)
