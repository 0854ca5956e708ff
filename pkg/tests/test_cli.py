"""Command-line surface: outputs, exit codes, reproducibility."""

import pytest

from mibrv import make_synthetic, write_dataset
from mibrv.cli import main


@pytest.fixture
def data_file(tmp_path):
    path = tmp_path / "data.csv"
    write_dataset(make_synthetic(30, 4, seed=3, bag_size=(2, 5)), path)
    return str(path)


@pytest.fixture
def tiny_file(tmp_path):
    path = tmp_path / "tiny.csv"
    path.write_text("p,1,0.0,0.0\np,1,3.0,0.0\nq,-1,0.0,4.0\n")
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestFeaturize:
    def test_tiny_self_hand_checked(self, capsys, tiny_file):
        # op 3, k=1 distances: p vs [p,q] = (0, 5); q vs [p,q] = (4, 0)
        code, out, _ = run(capsys, "featurize", tiny_file, "--ops", "3", "--k", "1")
        assert code == 0
        assert out == "1 2:1.0\n-1 1:1.0\n"

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "featurize", "/nonexistent/data.csv")
        assert code == 2
        assert "error" in err

    def test_empty_ops_is_usage_error(self, tiny_file, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["featurize", tiny_file, "--ops", ""])
        assert exc.value.code == 2

    def test_output_file(self, capsys, tiny_file, tmp_path):
        out_path = tmp_path / "vectors.txt"
        code, out, _ = run(capsys, "featurize", tiny_file, "-o", str(out_path))
        assert code == 0
        assert out == ""
        assert len(out_path.read_text().splitlines()) == 2

    def test_external_reference_file(self, capsys, tiny_file, data_file):
        code, out, _ = run(capsys, "featurize", tiny_file, "--refs", tiny_file)
        assert code == 0
        assert len(out.splitlines()) == 2


class TestTrainPredict:
    def test_train_then_predict_on_training_data(self, capsys, data_file, tmp_path):
        model_path = str(tmp_path / "model.txt")
        code, _, _ = run(capsys, "train", data_file, "-o", model_path)
        assert code == 0
        code, out, _ = run(capsys, "predict", model_path, data_file, "--refs", data_file)
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 30
        correct = 0
        for line in lines:
            bag_id, label, value = line.split()
            # sign of the decision column always matches the label column
            assert (float(value) >= 0) == (int(label) == 1)
            truth = 1 if bag_id in {f"bag{i:04d}" for i in range(0, 30, 2)} else -1
            correct += int(label) == truth
        assert correct / len(lines) >= 0.95

    def test_predict_with_wrong_refs(self, capsys, data_file, tmp_path):
        other = tmp_path / "other.csv"
        write_dataset(make_synthetic(20, 4, seed=9, bag_size=(2, 5)), other)
        model_path = str(tmp_path / "model.txt")
        assert run(capsys, "train", data_file, "-o", model_path)[0] == 0
        code, _, err = run(capsys, "predict", model_path, data_file, "--refs", str(other))
        assert code == 2
        assert "reference" in err


class TestCv:
    def test_synthetic_reaches_high_accuracy(self, capsys, data_file):
        code, out, err = run(capsys, "cv", data_file, "--folds", "5", "--repeats", "2")
        assert code == 0
        mean = float(next(l for l in out.splitlines() if l.startswith("mean_accuracy")).split()[1])
        assert mean >= 0.95
        assert "timing" in err  # timings on stderr only

    def test_too_many_folds(self, capsys, data_file):
        code, _, err = run(capsys, "cv", data_file, "--folds", "40")
        assert code == 2
        assert "error" in err

    def test_per_fold_records(self, capsys, data_file):
        code, out, _ = run(capsys, "cv", data_file, "--folds", "5", "--repeats", "1",
                           "--per-fold")
        assert code == 0
        records = [l for l in out.splitlines() if l and l[0].isdigit()]
        assert len(records) == 5

    def test_c_grid(self, capsys, data_file):
        code, out, _ = run(capsys, "cv", data_file, "--folds", "3", "--repeats", "1",
                           "--c-grid", "0.5,1,2")
        assert code == 0
        assert "c_grid: 0.5,1,2" in out


class TestSweep:
    def test_single_point_matches_cv(self, capsys, data_file):
        base = ["--folds", "5", "--repeats", "2", "--seed", "4"]
        code, cv_out, _ = run(capsys, "cv", data_file, "--k", "2", "--ops", "2,4,5", *base)
        assert code == 0
        cv_mean = next(l for l in cv_out.splitlines() if l.startswith("mean_accuracy")).split()[1]
        cv_std = next(l for l in cv_out.splitlines() if l.startswith("std_accuracy")).split()[1]
        code, sweep_out, _ = run(capsys, "sweep", data_file, "--k", "2", "--ops", "2,4,5", *base)
        assert code == 0
        line = sweep_out.strip()
        assert line.startswith("k=2 ops=2,4,5 C=1")
        mean, std = line.split()[-3], line.split()[-1]
        assert mean == cv_mean
        assert std == cv_std

    def test_grid_row_count(self, capsys, data_file):
        code, out, _ = run(capsys, "sweep", data_file, "--k", "1,2", "--ops", "1,3",
                           "--ops", "2,5", "--folds", "3", "--repeats", "1")
        assert code == 0
        assert len(out.strip().splitlines()) == 4

    def test_empty_k_list_is_usage_error(self, data_file):
        with pytest.raises(SystemExit) as exc:
            main(["sweep", data_file, "--k", ""])
        assert exc.value.code == 2


class TestDeterminism:
    def test_cv_byte_identical_across_runs_and_threads(self, capsys, data_file):
        args = ["cv", data_file, "--folds", "4", "--repeats", "2", "--seed", "11"]
        _, out1, _ = run(capsys, *args, "--threads", "1")
        _, out2, _ = run(capsys, *args, "--threads", "1")
        _, out8, _ = run(capsys, *args, "--threads", "8")
        assert out1 == out2 == out8

    def test_featurize_byte_identical(self, capsys, data_file):
        _, out1, _ = run(capsys, "featurize", data_file, "--threads", "1")
        _, out2, _ = run(capsys, "featurize", data_file, "--threads", "8")
        assert out1 == out2
