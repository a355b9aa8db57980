import pytest

from dkmemory.cli import EXIT_CONFIG, EXIT_IO, EXIT_NUMERICAL, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_preset_list(capsys):
    code, out, _ = run(capsys, "preset", "list")
    assert code == EXIT_OK
    assert "fig6" in out.split() and "fig8a" in out.split()


def test_preset_show_fig6(capsys):
    code, out, _ = run(capsys, "preset", "show", "fig6")
    assert code == EXIT_OK
    assert "Delta = 10 kappa" in out
    assert "sigma = kappa/10" in out
    assert "gamma = kappa/10" in out


def test_preset_show_unknown(capsys):
    code, _, err = run(capsys, "preset", "show", "nope")
    assert code == EXIT_CONFIG and "unknown preset" in err


def test_unknown_subcommand(capsys):
    code, _, err = run(capsys, "frobnicate")
    assert code == EXIT_CONFIG
    assert "usage:" in err


def test_missing_subcommand(capsys):
    code, _, err = run(capsys)
    assert code == EXIT_CONFIG and "usage:" in err


def test_help_exits_zero(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == EXIT_OK and "sweep" in out


def test_sweep_fig8a_writes_csv_and_svg(capsys, tmp_path):
    code, out, _ = run(capsys, "sweep", "--preset", "fig8a", "--c-points", "4", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert (tmp_path / "fig8a.csv").exists() and (tmp_path / "fig8a.svg").exists()
    assert "C_pi row" in out and "C = 2.48" in out


def test_global_flags_before_subcommand(capsys, tmp_path):
    code, _, _ = run(capsys, "--out", str(tmp_path), "sweep", "--preset", "fig7b", "--c-points", "2", "--kappa-j", "0.003")
    assert code == EXIT_OK
    assert (tmp_path / "fig7b.csv").exists()


def test_sweep_deterministic_across_workers(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run(capsys, "sweep", "--preset", "fig7b", "--c-points", "5", "--out", str(a))
    run(capsys, "sweep", "--preset", "fig7b", "--c-points", "5", "--workers", "3", "--out", str(b))
    assert (a / "fig7b.csv").read_bytes() == (b / "fig7b.csv").read_bytes()


def test_empty_sweep_succeeds(capsys, tmp_path):
    code, _, err = run(capsys, "sweep", "--preset", "fig6", "--c-min", "9", "--c-max", "3", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert "empty" in err
    lines = (tmp_path / "fig6.csv").read_text().splitlines()
    assert len(lines) == 1 and lines[0].startswith("C,scheme")


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "small.toml"
    cfg.write_text('preset = "fig8b"\nc_points = 3\nname = "mine"\n')
    code, _, _ = run(capsys, "sweep", "--config", str(cfg), "--out", str(tmp_path))
    assert code == EXIT_OK
    assert (tmp_path / "mine.csv").exists()


def test_config_error_exit_code(capsys, tmp_path):
    cfg = tmp_path / "bad.toml"
    cfg.write_text('preset = "fig6"\nbogus = 1\n')
    code, _, err = run(capsys, "sweep", "--config", str(cfg))
    assert code == EXIT_CONFIG and "bogus" in err


def test_missing_config_is_io_error(capsys, tmp_path):
    code, _, _ = run(capsys, "sweep", "--config", str(tmp_path / "none.toml"))
    assert code == EXIT_IO


def test_unwritable_output_is_io_error(capsys, tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    code, _, err = run(capsys, "population", "--conventions", "intensity-std", "--out", str(blocker))
    assert code == EXIT_IO and "blocker" in err


def test_numerical_failure_exit_code(capsys, tmp_path):
    # a 33-point grid cannot resolve the photon spectrum
    code, _, err = run(capsys, "loading", "--grid-points", "33", "--out", str(tmp_path))
    assert code == EXIT_NUMERICAL and "QuadratureError" in err


def test_all_rows_failed_is_numerical(capsys, tmp_path):
    code, _, _ = run(capsys, "sweep", "--preset", "fig6", "--c-points", "2", "--grid-points", "33", "--out", str(tmp_path))
    assert code == EXIT_NUMERICAL


def test_reflectivity(capsys, tmp_path):
    code, out, _ = run(capsys, "reflectivity", "--grid-points", "1025", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert "delta_phase(0) = 3.14159" in out or "delta_phase(0) = -3.14159" in out
    assert (tmp_path / "fig5-pushpull_reflectivity.csv").exists()


def test_dynamics(capsys, tmp_path):
    code, out, _ = run(capsys, "dynamics", "--preset", "fig5-onoff", "--ground-state", "2", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert "total = 1.0000000" in out or "total = 0.9999999" in out
    assert (tmp_path / "fig5-onoff_dynamics_g2.csv").exists()


def test_loading(capsys):
    code, out, _ = run(capsys, "loading", "--preset", "fig6", "--scheme", "push-pull", "--chi", "1.2", "--phi", "0.3")
    assert code == EXIT_OK
    assert "F+ =" in out and "P_herald =" in out


def test_loading_random_state_seeded(capsys):
    _, a, _ = run(capsys, "loading", "--random-state", "--seed", "7")
    _, b, _ = run(capsys, "loading", "--random-state", "--seed", "7")
    _, c, _ = run(capsys, "loading", "--random-state", "--seed", "8")
    assert a == b and a != c


def test_bandwidth(capsys, tmp_path):
    code, out, _ = run(capsys, "bandwidth", "--preset", "fig9-lowloss", "--sigmas", "0.002,0.01", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert "F_ave strictly decreasing: True" in out
    assert (tmp_path / "fig9-lowloss_bandwidth.csv").exists()


def test_population(capsys, tmp_path):
    code, out, _ = run(capsys, "population", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert out.count("peak |psi_e|^2") == 3
    assert (tmp_path / "population.csv").exists()


@pytest.mark.parametrize("argv", [["sweep", "--c-points", "x"], ["dynamics", "--ground-state", "3"]])
def test_bad_argument_values(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_CONFIG and "usage:" in err


def test_sweep_refine_interferometer(capsys, tmp_path):
    argv = ["sweep", "--preset", "fig6", "--schemes", "on-off", "--c-points", "1", "--c-min", "10", "--c-max", "10",
            "--kappa-j", "0", "--grid-points", "1025", "--out", str(tmp_path)]
    run(capsys, *argv)
    plain = (tmp_path / "fig6.csv").read_text().splitlines()[1].split(",")
    code, _, _ = run(capsys, *argv, "--refine-interferometer")
    refined = (tmp_path / "fig6.csv").read_text().splitlines()[1].split(",")
    assert code == EXIT_OK
    assert float(refined[4]) > float(plain[4])
