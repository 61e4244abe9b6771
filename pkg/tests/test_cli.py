import json

from click.testing import CliRunner

from fibnim.cli import main


def run(*args, env=None):
    return CliRunner().invoke(main, args, env=env)


class TestAnalyze:
    def test_three_pile_exception(self):
        result = run("analyze", "--piles", "8,9,53", "--bound", "inf")
        assert result.exit_code == 0
        assert "outcome=P" in result.output
        assert "classifiers: none applicable" in result.output

    def test_classic_fibonacci_pile(self):
        result = run("analyze", "--piles", "13", "--bound", "12")
        assert result.exit_code == 0
        assert "outcome=P" in result.output

    def test_empty_pile(self):
        result = run("analyze", "--piles", "0", "--bound", "5")
        assert result.exit_code == 0
        assert "outcome=P" in result.output

    def test_classifier_agreement_shown(self):
        result = run("analyze", "--piles", "10", "--bound", "2")
        assert result.exit_code == 0
        assert "agree=yes" in result.output

    def test_json_schema(self):
        result = run("analyze", "--piles", "3,4,7", "--format", "json")
        assert result.exit_code == 0
        data = json.loads(result.output)
        assert data["oracle"]["outcome"] == "N"
        assert data["oracle"]["piles"] == [3, 4, 7]
        assert data["classifiers"][0]["provenance"] == "classify-34n"
        assert data["classifiers"][0]["agrees"] is True

    def test_halving_dynamic(self):
        result = run("analyze", "--piles", "5,6", "--bound", "1", "--dynamic", "1")
        assert result.exit_code == 0
        assert "outcome=N" in result.output

    def test_bad_piles_usage(self):
        assert run("analyze", "--piles", "3;4").exit_code == 2
        assert run("analyze", "--piles", "-2").exit_code == 2
        assert run("analyze", "--piles", "3", "--bound", "-1").exit_code == 2

    def test_budget_env_exhaustion(self):
        result = run(
            "analyze", "--piles", "50,60", "--bound", "inf",
            env={"FIBNIM_MEMO_BUDGET": "16"},
        )
        assert result.exit_code == 3

    def test_budget_env_malformed(self):
        result = run(
            "analyze", "--piles", "5",
            env={"FIBNIM_MEMO_BUDGET": "banana"},
        )
        assert result.exit_code == 2


class TestCompTable:
    def test_small_corner(self):
        result = run("comp-table", "--max-n", "5", "--cap", "60")
        assert result.exit_code == 0
        rows = [line.split(",") for line in result.output.strip().splitlines()]
        assert rows[0] == ["", "0", "1", "2", "3", "4", "5"]
        assert rows[1][1:] == ["0", "1", "2", "3", "4", "5"]
        assert rows[2][3] == "4"
        assert rows[3][4] == "7"
        assert rows[4][5] == "inf"
        assert rows[5][4] == "inf"

    def test_unknown_cells_show_cap(self):
        result = run("comp-table", "--max-n", "5", "--cap", "8")
        assert result.exit_code == 0
        assert "?>8" in result.output


class TestWord:
    def test_level_one_letters_all_ones(self):
        result = run("word", "--sturm", "1", "--length", "12")
        assert result.output.split() == ["1"] * 12

    def test_hybrid_example_letters(self):
        result = run("word", "--hybrid", "26,12", "--length", "18")
        assert result.output.split() == (
            "13 8 13 21 13 8 13 13 8 13 21 13 8 13 21 13 8 13".split()
        )

    def test_partial_sum_dump(self):
        result = run("word", "--sturm", "3", "--bound", "21", "--ps")
        assert result.output.strip() == "0,3,5,8,11,13,16,18,21"

    def test_hybrid_partial_sums(self):
        result = run("word", "--hybrid", "26,12", "--bound", "100", "--ps")
        assert result.output.strip() == "0,13,21,34,55,68,76,89"

    def test_letters_capped_by_bound(self):
        result = run("word", "--sturm", "3", "--bound", "21")
        values = [int(v) for v in result.output.split()]
        assert sum(values) <= 21
        assert sum(values) + min(values) > 21

    def test_usage_errors(self):
        assert run("word", "--length", "5").exit_code == 2
        assert run("word", "--sturm", "3", "--hybrid", "1,1", "--length", "5").exit_code == 2
        assert run("word", "--sturm", "3", "--ps").exit_code == 2
        assert run("word", "--sturm", "3", "--length", "5", "--bound", "9").exit_code == 2
        assert run("word", "--hybrid", "26", "--length", "5").exit_code == 2


class TestVerify:
    def test_lemma7(self):
        result = run("verify", "lemma7")
        assert result.exit_code == 0
        assert result.output.count("PASS") == 2
        assert "FAIL" not in result.output

    def test_two_pile_small_grid(self):
        result = run("verify", "two-pile", "--m", "8", "--k", "13", "--r", "6")
        assert result.exit_code == 0
        assert "FAIL" not in result.output

    def test_words_small(self):
        result = run("verify", "words", "--bound", "500")
        assert result.exit_code == 0

    def test_beatty_small(self):
        result = run("verify", "beatty", "--bound", "150", "--n", "40")
        assert result.exit_code == 0
        assert result.output.count("PASS") == 4

    def test_unknown_suite(self):
        assert run("verify", "nonsense").exit_code == 2

    def test_budget_env(self):
        result = run(
            "verify", "exceptional", env={"FIBNIM_MEMO_BUDGET": "64"},
        )
        assert result.exit_code == 3


class TestServe:
    def test_help_only(self):
        assert run("serve", "--help").exit_code == 0
