import json

import numpy as np
import pytest

from hausdorff.cli import main, sequence_document


def write(path, doc):
    path.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def decode(doc):
    return np.array([[[complex(*z) for z in row] for row in m] for m in doc["data"]])


@pytest.fixture
def uniform_file(tmp_path):
    s = [1 / (j + 1) for j in range(5)]
    return write(tmp_path / "u.json", sequence_document(0.0, 1.0, "moments", np.reshape(s, (-1, 1, 1))))


def test_check_uniform(capsys, uniform_file):
    code, out, _ = run(capsys, "check", uniform_file)
    rep = json.loads(out)
    assert code == 0 and rep["Fgg"] and rep["Fg"]
    assert rep["hankel"]["H"]["det"][2][0] == pytest.approx(4.6296e-4, rel=1e-4)


def test_check_negative_and_malformed(capsys, tmp_path):
    bad = write(tmp_path / "b.json", sequence_document(0, 1, "moments", np.reshape([1.0, 2.0], (-1, 1, 1))))
    code, out, _ = run(capsys, "check", bad)
    assert code == 2 and json.loads(out)["Fgg"] is False
    code, _, err = run(capsys, "check", write(tmp_path / "m.json", '{"alpha": 0,'))
    assert code == 1 and "line 1" in err
    doc = sequence_document(0, 1, "moments", np.ones((2, 1, 1)))
    doc["data"][1][0][0] = [1.0]
    code, _, err = run(capsys, "check", write(tmp_path / "p.json", doc))
    assert code == 1 and "data[1][0][0]" in err
    code, _, _ = run(capsys, "check", str(tmp_path / "missing.json"))
    assert code == 1


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["nope"])
    assert exc.value.code == 1


def test_canonical_reconstruct_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "sample", "--q", "2", "--kappa", "4", "--seed", "3",
                       "--boundary-bias", "0.3", "--alpha", "-1", "--beta", "2")
    assert code == 0
    src = write(tmp_path / "s.json", out)
    code, out, _ = run(capsys, "canonical", src)
    assert code == 0 and json.loads(out)["kind"] == "canonical"
    can = write(tmp_path / "c.json", out)
    code, out, _ = run(capsys, "reconstruct", can)
    assert code == 0
    np.testing.assert_allclose(decode(json.loads(out)), decode(json.load(open(src))), atol=1e-7)


def test_reconstruct_rejects_bad_canonical(capsys, tmp_path):
    f = write(tmp_path / "c.json", sequence_document(0, 1, "canonical", np.reshape([1.0, 1.5], (-1, 1, 1))))
    assert run(capsys, "reconstruct", f)[0] == 2


def test_extend_and_classify(capsys, tmp_path):
    one = write(tmp_path / "one.json", sequence_document(0, 1, "moments", np.ones((1, 1, 1))))
    code, out, _ = run(capsys, "extend", one, "--steps", "3")
    assert code == 0
    np.testing.assert_allclose(decode(json.loads(out)).real.ravel(), [1, 1 / 2, 3 / 8, 5 / 16], atol=1e-14)
    ext = write(tmp_path / "ext.json", out)
    code, out, _ = run(capsys, "classify", ext)
    assert code == 0 and json.loads(out)["central_from"] == 1
    K = write(tmp_path / "k.json", {"matrix": [[[1.0, 0.0]]]})
    code, out, _ = run(capsys, "extend", one, "--matrix", K)
    assert decode(json.loads(out)).real.ravel().tolist() == [1.0, 1.0]
    assert run(capsys, "extend", one, "--lambda", "2")[0] == 1


def test_transform(capsys, uniform_file):
    code, out, _ = run(capsys, "transform", uniform_file, "--theta", "-1", "--eta", "1")
    doc = json.loads(out)
    assert code == 0 and (doc["alpha"], doc["beta"]) == (0.0, 1.0)
    np.testing.assert_allclose(decode(doc).real.ravel(), [1 / (j + 1) for j in range(5)], atol=1e-14)


def test_moments_command(capsys, tmp_path):
    m = write(tmp_path / "mu.json", {"kind": "measure", "dim": 1, "alpha": 0, "beta": 1,
                                     "nodes": [0, 1], "weights": [[[[0.5, 0]]], [[[0.5, 0]]]]})
    code, out, _ = run(capsys, "moments", m, "--kappa", "3")
    assert code == 0
    np.testing.assert_allclose(decode(json.loads(out)).real.ravel(), [1, 0.5, 0.5, 0.5])
    code, _, _ = run(capsys, "moments", m, "--kappa", "3", "--beta", "0.5")
    assert code == 1


def test_tolerance_flags(capsys, tmp_path):
    s = np.reshape([1.0, 1.0 + 1e-7], (-1, 1, 1))
    f = write(tmp_path / "t.json", sequence_document(0, 1, "moments", s))
    assert run(capsys, "check", f)[0] == 2
    assert run(capsys, "check", f, "--tol-psd", "1e-6")[0] == 0
