import json
import math

import pytest

from wideband_outage import cli


def run_csv(tmp_path, argv, name="out.csv"):
    path = tmp_path / name
    rc = cli.main(argv + ["--output", str(path)])
    assert rc == 0
    return path.read_bytes()


def parse_csv(data: bytes):
    lines = data.decode().splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


# ---------------------------------------------------------------- exponent


def test_exponent_nakagami_single_point(tmp_path):
    data = run_csv(
        tmp_path,
        ["exponent", "--model", "nakagami", "--m", "2", "--eta", "2"],
    )
    header, rows = parse_csv(data)
    assert header == ["eta", "eta_db", "eta_bit", "exponent", "lambda_star", "source"]
    assert len(rows) == 2
    closed, numeric = rows
    assert closed[-1] == "closed_form" and numeric[-1] == "numeric"
    for row in (closed, numeric):
        assert abs(float(row[3]) - 0.3862943611198906) < 1e-9
    assert abs(float(closed[4]) - (-2.0)) < 1e-12  # m(1 - eta)


def test_exponent_csv_format(tmp_path):
    data = run_csv(tmp_path, ["exponent", "--model", "rayleigh", "--eta", "2"])
    assert b"\r" not in data
    assert data.endswith(b"\n")
    text = data.decode()
    # 12 significant digits
    assert "0.19314718056" in text
    header, rows = parse_csv(data)
    eta_db, eta_bit = float(rows[0][1]), float(rows[0][2])
    assert abs(eta_db - 10.0 * math.log10(2.0)) < 1e-10
    assert abs(eta_bit - 2.0 * math.log(2.0)) < 1e-10


def test_exponent_grid_closed_matches_numeric(tmp_path):
    data = run_csv(
        tmp_path,
        ["exponent", "--model", "rician", "--kappa", "0.8", "--eta-grid", "1:20:100"],
    )
    _, rows = parse_csv(data)
    assert len(rows) == 200
    for closed, numeric in zip(rows[0::2], rows[1::2]):
        assert closed[0] == numeric[0]
        assert abs(float(closed[3]) - float(numeric[3])) < 1e-9


def test_exponent_rician_kappa_zero_is_rayleigh(tmp_path):
    args = ["--eta-grid", "0.5:8:40"]
    ray = run_csv(tmp_path, ["exponent", "--model", "rayleigh"] + args, "a.csv")
    ric = run_csv(
        tmp_path, ["exponent", "--model", "rician", "--kappa", "0"] + args, "b.csv"
    )
    assert ray == ric


def test_exponent_eta_db_conversion(tmp_path):
    data = run_csv(tmp_path, ["exponent", "--model", "rayleigh", "--eta-db", "10"])
    _, rows = parse_csv(data)
    assert float(rows[0][0]) == 10.0
    assert float(rows[0][1]) == 10.0


def test_negative_db_grid_parses(tmp_path):
    data = run_csv(
        tmp_path, ["exponent", "--model", "rayleigh", "--eta-db-grid", "-3:13:5"]
    )
    _, rows = parse_csv(data)
    assert len(rows) == 10
    assert abs(float(rows[0][1]) - (-3.0)) < 1e-9
    assert abs(float(rows[-1][1]) - 13.0) < 1e-9


def test_exponent_below_eta_bar_row_is_zero(tmp_path):
    data = run_csv(tmp_path, ["exponent", "--model", "rayleigh", "--eta", "0.5"])
    _, rows = parse_csv(data)
    assert float(rows[0][3]) == 0.0
    assert float(rows[1][3]) == 0.0


# ---------------------------------------------------------------- mimo


def test_mimo_white_closed_matches_numeric(tmp_path):
    data = run_csv(tmp_path, ["mimo", "--nt", "2", "--nr", "2", "--eta", "1"])
    _, rows = parse_csv(data)
    assert len(rows) == 2
    target = 4.0 * (0.5 - 1.0 + math.log(2.0))
    for row in rows:
        assert abs(float(row[3]) - target) < 1e-9


def test_mimo_config_file(tmp_path):
    ini = tmp_path / "corr.ini"
    ini.write_text(
        "[separable]\n"
        "psi_t = 1 0.5\n"
        "  0.5 1\n"
        "psi_r = 1 0.5\n"
        "  0.5 1\n"
        "sigma = 0.5 0\n"
        "  0 0.5\n"
    )
    data = run_csv(tmp_path, ["mimo", "--config", str(ini), "--eta", "1"])
    _, rows = parse_csv(data)
    assert len(rows) == 1
    assert rows[0][-1] == "numeric"
    assert abs(float(rows[0][3]) - 0.5530607361049662) < 1e-9


def test_mimo_config_missing_file_exits_3(tmp_path, capsys):
    rc = cli.main(["mimo", "--config", str(tmp_path / "nope.ini"), "--eta", "1"])
    assert rc == 3
    assert "error:" in capsys.readouterr().err


# ---------------------------------------------------------------- feedback


def test_feedback_etabar_sweep(tmp_path):
    data = run_csv(
        tmp_path, ["feedback", "etabar-sweep", "--g0", "0", "--tau", "1"]
    )
    header, rows = parse_csv(data)
    assert header == ["g0", "tau", "eta_bar"]
    assert abs(float(rows[0][2]) - 0.5) < 1e-12


def test_feedback_onoff_curves(tmp_path):
    data = run_csv(
        tmp_path, ["feedback", "onoff-curves", "--tau", "1", "--eta", "1"]
    )
    header, rows = parse_csv(data)
    assert header == ["tau", "eta", "eta_db", "eta_bit", "exponent", "kind"]
    curve = [r for r in rows if r[-1] == "curve"]
    envelope = [r for r in rows if r[-1] == "envelope"]
    assert len(curve) == 1 and len(envelope) == 1
    assert abs(float(curve[0][4]) - 0.45867514538708193) < 1e-9
    # envelope at eta=1 peaks at tau = 1/eta = 1, same value
    assert abs(float(envelope[0][0]) - 1.0) < 1e-6
    assert float(envelope[0][4]) >= float(curve[0][4]) - 1e-12


def test_feedback_mesh_argmax_row(tmp_path):
    data = run_csv(tmp_path, ["feedback", "mesh", "--eta-db", "0"])
    header, rows = parse_csv(data)
    assert header == ["g0", "tau", "eta", "exponent", "status"]
    # 10 g0 values x 39 tau values plus the flagged argmax row
    assert len(rows) == 391
    assert all(r[-1] in ("OK", "BELOW_ETA_BAR") for r in rows[:-1])
    best = rows[-1]
    assert best[-1] == "ARGMAX"
    assert float(best[0]) == 0.0
    assert abs(float(best[1]) - 1.0) <= 0.1 + 1e-12
    assert abs(float(best[3]) - 0.45867514538708193) < 1e-9


def test_feedback_mesh_wants_single_eta():
    with pytest.raises(SystemExit) as exc:
        cli.main(["feedback", "mesh", "--eta-grid", "1:2:5"])
    assert exc.value.code == 2


# ---------------------------------------------------------------- simulate


def test_simulate_oracle_slope(tmp_path, capsys):
    path = tmp_path / "oracle.csv"
    rc = cli.main(
        ["simulate", "--oracle", "gamma", "--eta", "2", "--K", "100:400:50",
         "--output", str(path)]
    )
    assert rc == 0
    captured = capsys.readouterr()
    report = json.loads(captured.out.strip().splitlines()[-1])
    assert sorted(report) == ["exponent_hat", "points_used", "stderr"]
    assert abs(report["exponent_hat"] - 0.1953385027011712) < 1e-9
    assert abs(report["exponent_hat"] - 0.19314718055994531) < 0.005
    assert report["points_used"] == 7
    assert "theoretical exponent 0.19314718056" in captured.err
    header, rows = parse_csv(path.read_bytes())
    assert header == ["K", "p", "neglog_p"]
    assert len(rows) == 7


def test_simulate_monte_carlo_slope_and_determinism(tmp_path, capsys):
    argv = [
        "simulate", "--model", "rayleigh", "--mode", "linear", "--eta", "2",
        "--K", "10,20,30,40", "--trials", "100000", "--seed", "7",
    ]
    first = run_csv(tmp_path, argv, "mc1.csv")
    report = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert sorted(report) == ["exponent_hat", "points_used", "stderr"]
    assert abs(report["exponent_hat"] - 0.19314718055994531) < 0.25 * 0.19314718055994531
    assert report["points_used"] == 3  # K=40 row starves the count floor
    second = run_csv(tmp_path, argv, "mc2.csv")
    capsys.readouterr()
    assert first == second
    header, rows = parse_csv(first)
    assert header == ["K", "trials", "outages", "p_hat", "ci_lo", "ci_hi"]
    assert [r[0] for r in rows] == ["10", "20", "30", "40"]
    for row in rows:
        assert float(row[4]) <= float(row[3]) <= float(row[5])


def test_simulate_insufficient_data_exits_3(tmp_path, capsys):
    rc = cli.main(
        ["simulate", "--model", "rayleigh", "--eta", "2", "--K", "10,20,30",
         "--trials", "50", "--output", str(tmp_path / "x.csv")]
    )
    assert rc == 3
    err = capsys.readouterr().err
    assert "error:" in err and "raise trials" in err


def test_simulate_needs_model_or_oracle():
    with pytest.raises(SystemExit) as exc:
        cli.main(["simulate", "--eta", "2", "--K", "10,20,30"])
    assert exc.value.code == 2


# ---------------------------------------------------------------- shape


def test_shape_beamforming_regimes(tmp_path):
    header, rows = parse_csv(
        run_csv(tmp_path, ["shape", "--delta", "0.9", "--eta", "0.55"])
    )
    assert header == ["eta", "eta_db", "xi_star", "exponent", "exponent_xi0",
                      "exponent_xi1"]
    assert float(rows[0][2]) == 1.0
    assert abs(float(rows[0][3]) - float(rows[0][5])) < 1e-12

    _, rows = parse_csv(
        run_csv(tmp_path, ["shape", "--delta", "0.9", "--eta", "1000"], "b.csv")
    )
    assert abs(float(rows[0][2])) <= 0.05

    _, rows = parse_csv(
        run_csv(tmp_path, ["shape", "--delta", "0", "--eta", "5"], "c.csv")
    )
    assert float(rows[0][2]) == 0.0
    assert abs(float(rows[0][3]) - float(rows[0][4])) < 1e-12


# ---------------------------------------------------------------- arg errors


def test_missing_eta_flags_exit_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["exponent", "--model", "rayleigh"])
    assert exc.value.code == 2


def test_conflicting_eta_flags_exit_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["exponent", "--model", "rayleigh", "--eta", "2", "--eta-db", "3"])
    assert exc.value.code == 2


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["sweep", "--eta", "2"])
    assert exc.value.code == 2


def test_bad_grid_exits_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["exponent", "--model", "rayleigh", "--eta-grid", "1:2:3:4"])
    assert exc.value.code == 2


def test_negative_eta_exits_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["exponent", "--model", "rayleigh", "--eta", "-1"])
    assert exc.value.code == 2
