import io
import json
from contextlib import redirect_stdout

import pytest

from heckecrit import certifier
from heckecrit.cli import RunConfig, main
from heckecrit.errors import PrecisionTooLow


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


@pytest.fixture
def gaussian_file(tmp_path):
    return write(tmp_path, "qi.toml", 'K.poly = "x^2+1"\n')


def gaussian_char(tmp_path, typ):
    return write(tmp_path, "chi.toml", f"inf_type = {list(typ)}\nmodulus = 1\n")


def test_no_command_is_usage_error(capsys):
    code, _, err = run(capsys)
    assert code == 1 and "usage" in err


def test_unknown_option(capsys):
    assert run(capsys, "field", "--bogus")[0] == 1


def test_field_on_desk(capsys):
    code, out, _ = run(capsys, "field")
    assert code == 0
    assert "x^6 - 2*x^3 + 2" in out and "-186624" in out


def test_field_output_is_deterministic(capsys):
    assert run(capsys, "field")[1] == run(capsys, "field")[1]


def test_field_json(capsys):
    code, out, _ = run(capsys, "field", "--json")
    data = json.loads(out)
    tower = data["sections"]["tower"]
    assert code == 0 and (tower["n"], tower["r"], tower["K.discriminant"]) == (3, 1, -186624)


def test_field_rejects_real_field(capsys, tmp_path):
    code, _, err = run(capsys, "field", "--tower", write(tmp_path, "r.toml", 'K.poly = "x^2-2"\n'))
    assert code == 2 and "NoCMSubfield" in err


def test_field_degree_one_notice(capsys, tmp_path):
    code, out, _ = run(capsys, "field", "--tower", write(tmp_path, "q.toml", 'K.poly = "x-1"\n'))
    assert code == 0 and "notice" in out


def test_low_precision(capsys):
    code, _, err = run(capsys, "selftest", "--digits", "10")
    assert code == 2 and "PrecisionTooLow" in err
    with pytest.raises(PrecisionTooLow):
        RunConfig("field", digits=20)


def test_report_file(capsys, tmp_path):
    target = tmp_path / "out.txt"
    code, out, _ = run(capsys, "field", "--report", str(target))
    assert code == 0 and out == "" and "186624" in target.read_text()


@pytest.mark.parametrize("typ,count", [((-4, 0), 1), ((-1, 0), 0), ((0, 0), 1)])
def test_chars_over_gaussian(capsys, tmp_path, gaussian_file, typ, count):
    code, out, _ = run(capsys, "chars", "--tower", gaussian_file, "--char", gaussian_char(tmp_path, typ),
                       "--json")
    assert code == 0
    data = json.loads(out)
    assert data["sections"]["characters"]["count"] == count


def test_period_on_desk(capsys):
    code, out, _ = run(capsys, "period", "--json")
    assert code == 0
    data = json.loads(out)
    cov = data["sections"]["covariance"]
    assert cov["passed"] and len(cov["table"]) == 12 and all(row["passed"] for row in cov["table"])


def test_certify_trivial_extension(capsys, gaussian_file):
    code, out, _ = run(capsys, "certify", "--tower", gaussian_file)
    assert code == 0 and "quotient ≡ 1" in out


@pytest.fixture(scope="module")
def desk_certify_json():
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(["certify", "--digits", "30", "--json"])
    return code, json.loads(buf.getvalue())


def test_certify_desk(desk_certify_json):
    code, data = desk_certify_json
    assert code == 0
    cert = data["sections"]["certificate"]
    assert cert["passed"] and cert["minimal polynomial"] == [16, 0, 59049]
    assert data["sections"]["covariance"]["passed"]


def test_certify_corrupted_omega(capsys, monkeypatch):
    real = certifier.sigma_of_omega
    monkeypatch.setattr(certifier, "sigma_of_omega", lambda *a, **k: -real(*a, **k))
    code, out, _ = run(capsys, "certify", "--digits", "30", "--json")
    assert code == 3
    assert not json.loads(out)["sections"]["covariance"]["passed"]


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0 and "FAIL" not in out


@pytest.mark.parametrize("kernel", ["local-integrals", "weights", "signs"])
def test_selftest_kernels(capsys, kernel):
    code, out, _ = run(capsys, "selftest", "--kernel", kernel, "--json")
    assert code == 0 and json.loads(out)["title"] == "selftest"
