import csv
import io as _io
import xml.etree.ElementTree as ET

import pytest
import torch

from cbounds import io
from cbounds.cli import main
from cbounds.cli import properties
from cbounds.dependence import FunctionDependence, Independence, LowerFrechet
from cbounds.grid import GridFunction
from cbounds.market import (BSModel, CorrelationMatrix, MarketQuote,
                            generate_pairwise_digital_quotes)
from test_core import _assert_numerical


def _write(path, text):
    path.write_text(text)
    return str(path)


def _rows(text):
    return list(csv.reader(_io.StringIO(text)))


@pytest.mark.parametrize("text, point, want", [
    ("3,copula-scale\n0.5,0.5,0.5,0.125\n", "0.5,0.5,0.5", "0.125,0.125"),
    ("2,copula-scale\n", "0.7,0.6", "0.3,0.6"),
])
def test_eval_bound(tmp_path, capsys, text, point, want):
    path = _write(tmp_path / "p.csv", text)
    assert main(["eval-bound", "--prescription", path, "--point", point]) == 0
    assert capsys.readouterr().out.strip() == want


def test_eval_bound_survival_side(tmp_path, capsys):
    path = _write(tmp_path / "p.csv", "2,survival-scale\n0.5,0.5,0.25\n")
    assert main(["eval-bound", "--prescription", path, "--point", "0.5,0.5"]) == 0
    assert capsys.readouterr().out.strip() == "0.25,0.25"


@pytest.mark.parametrize("text, point, code", [
    ("x,copula-scale\n", "0.5,0.5", 2),
    ("2,copula-scale\n0.5,0.5\n", "0.5,0.5", 2),
    ("2,copula-scale\n0.5,0.5,0.1\n", "0.5,1.5", 2),
    ("2,copula-scale\n0.5,0.5,0.9\n", "0.5,0.5", 3),
])
def test_eval_bound_errors(tmp_path, capsys, text, point, code):
    path = _write(tmp_path / "p.csv", text)
    assert main(["eval-bound", "--prescription", path, "--point", point]) == code
    assert capsys.readouterr().err


def test_missing_file(tmp_path):
    assert main(["eval-bound", "--prescription", str(tmp_path / "nope.csv"),
                 "--point", "0.5,0.5"]) == 2


def test_usage_error():
    with pytest.raises(SystemExit) as e:
        main(["eval-bound"])
    assert e.value.code == 2


def test_certify_witness(tmp_path):
    path = _write(tmp_path / "p.csv", "3,copula-scale\n0.5,0.5,0.5,0.125\n")
    out = tmp_path / "cert.csv"
    assert main(["certify", "--prescription", path, "--s", "0.4,0.4,0.4",
                 "--eps", "0.1,0.1,0.1", "--out", str(out)]) == 0
    header, row = _rows(out.read_text())
    assert header[-1] == "volume" and len(header) == len(row)
    _assert_numerical(["volume"], [float(row[-1])], [-0.025], 1e-12)


def test_certify_none(tmp_path, capsys):
    path = _write(tmp_path / "p.csv", "3,copula-scale\n0.5,0.5,0.5,0.4\n")
    assert main(["certify", "--prescription", path, "--s", "0.4,0.4,0.4",
                 "--eps", "0.1,0.1,0.1"]) == 0
    assert capsys.readouterr().out.strip() == "none"


def test_certify_rejects_survival_prescription(tmp_path):
    path = _write(tmp_path / "p.csv", "3,survival-scale\n0.5,0.5,0.5,0.125\n")
    assert main(["certify", "--prescription", path, "--s", "0.4,0.4,0.4",
                 "--eps", "0.1,0.1,0.1"]) == 2


def test_check_properties_pass(capsys):
    assert main(["check-properties", "--trials", "4", "--n", "4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    for name in properties.SUITES:
        assert "{}: pass".format(name) in lines


def test_check_properties_qc4_reports_w3(capsys):
    assert main(["check-properties", "--suite", "qc4", "--d", "3", "--n", "8"]) == 0
    out = capsys.readouterr().out
    assert "W_3 has" in out and "qc4: pass" in out


def test_check_properties_faulty_bound(monkeypatch, capsys):
    def steep(prescription):
        # slope two along the diagonal breaks the Lipschitz condition
        dim = prescription.dim
        return FunctionDependence(
            lambda u: torch.clamp(2. * u.min(-1).values, max=1.), dim, 'quasi-copula')

    monkeypatch.setitem(properties.BOUND_FACTORIES, 'lower', steep)
    assert main(["check-properties", "--suite", "subset", "--trials", "3"]) == 1
    assert "subset: FAIL" in capsys.readouterr().out


def test_check_properties_unknown_suite():
    assert main(["check-properties", "--suite", "subset,nonsense"]) == 2


@pytest.mark.parametrize("q, code", [(Independence(3), 0), (LowerFrechet(3), 1)])
def test_check_grid_file(tmp_path, q, code):
    path = str(tmp_path / "grid.csv")
    io.write_grid(path, GridFunction.sample(q, 4))
    out = tmp_path / "report.csv"
    assert main(["check-properties", "--grid", path, "--out", str(out)]) == code
    rows = _rows(out.read_text())
    assert rows[0] == io.REPORT_HEADER
    assert (len(rows) > 1) == bool(code)
    assert all(row[0] == "QC4" and float(row[2]) < 0 for row in rows[1:])


def test_reproduce_fig_artifacts(tmp_path):
    stem = str(tmp_path / "fig")
    assert main(["reproduce-fig", "fig1", "--strikes", "3", "--paths", "10000",
                 "--format", "both", "--out", stem]) == 0
    rows = _rows((tmp_path / "fig.csv").read_text())
    assert rows[0] == io.BOUNDS_HEADER and len(rows) == 4
    for row in rows[1:]:
        std_lower, imp_lower, imp_upper, std_upper = (float(c) for c in row[1:5])
        assert std_lower - 1e-9 <= imp_lower <= imp_upper + 1e-9
        assert imp_upper <= std_upper + 1e-9
    root = ET.parse(str(tmp_path / "fig.svg")).getroot()
    series = [e for e in root.iter() if e.tag.endswith("polyline")]
    assert len(series) == 5


def test_reproduce_fig_deterministic(tmp_path):
    outputs = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        assert main(["reproduce-fig", "fig2", "--scenario", "0.", "--strikes", "3",
                     "--paths", "10000", "--seed", "5", "--out", str(out)]) == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]


@pytest.mark.parametrize("argv", [
    ["reproduce-fig", "fig1", "--format", "svg"],
    ["reproduce-fig", "fig1", "--scenario", "0.1,0.2"],
])
def test_reproduce_fig_errors(argv):
    assert main(argv + ["--strikes", "3", "--paths", "10000"]) == 2


def _market(tmp_path, quotes=None):
    model = BSModel((10.,) * 3, CorrelationMatrix.equicorrelated(3, 0.3))
    model_path, quote_path = str(tmp_path / "model.json"), str(tmp_path / "quotes.csv")
    io.write_model(model_path, model)
    io.write_quotes(quote_path, quotes or generate_pairwise_digital_quotes(model, [6., 10.]))
    return ["price-bounds", "--model", model_path, "--quotes", quote_path]


def test_price_bounds(tmp_path, capsys):
    argv = _market(tmp_path) + ["--payoff", "digital-put-on-max", "--strike-list", "6,10"]
    assert main(argv + ["--compare-lp"]) == 0
    captured = capsys.readouterr()
    assert "no LP solver" in captured.err
    rows = _rows(captured.out)
    assert rows[0] == io.BOUNDS_HEADER
    assert [float(r[0]) for r in rows[1:]] == [6., 10.]
    for row in rows[1:]:
        std_lower, imp_lower, imp_upper, std_upper = (float(c) for c in row[1:5])
        assert std_lower - 1e-9 <= imp_lower <= imp_upper + 1e-9 <= std_upper + 2e-9


def test_price_bounds_chart(tmp_path):
    stem = str(tmp_path / "bounds")
    argv = _market(tmp_path) + ["--payoff", "digital-put-on-max", "--strike-list", "6,10",
                                "--benchmark-paths", "10000", "--format", "both",
                                "--out", stem]
    assert main(argv) == 0
    rows = _rows((tmp_path / "bounds.csv").read_text())
    assert len(rows) == 3 and all(row[5] for row in rows[1:])
    root = ET.parse(str(tmp_path / "bounds.svg")).getroot()
    assert len([e for e in root.iter() if e.tag.endswith("polyline")]) == 5
    assert main(_market(tmp_path) + ["--payoff", "digital-put-on-max:10",
                                     "--format", "svg"]) == 2


@pytest.mark.parametrize("payoff", ["put-on-median:10", "call-on-min:10"])
def test_price_bounds_bad_payoff(tmp_path, payoff):
    code = main(_market(tmp_path) + ["--payoff", payoff])
    assert code == 2


def test_price_bounds_inconsistent_quotes(tmp_path, capsys):
    quotes = [MarketQuote('pairwise-digital-max', (0, 1), 10. * 0.6065306597126334, 0.9)]
    argv = _market(tmp_path, quotes) + ["--payoff", "digital-put-on-max:10"]
    assert main(argv) == 3
    with pytest.warns(UserWarning):
        assert main(argv + ["--repair"]) == 0


def test_price_bounds_mixed_quotes(tmp_path):
    model = BSModel((10.,) * 3, CorrelationMatrix.equicorrelated(3, 0.))
    quotes = generate_pairwise_digital_quotes(model, [10.])
    quotes.append(MarketQuote('basket-digital-min', (0, 1, 2), 10., 0.1))
    argv = _market(tmp_path, quotes) + ["--payoff", "call-on-min:10"]
    assert main(argv) == 2


if __name__ == '__main__':
    test_usage_error()
    test_check_properties_unknown_suite()
