use std::path::Path;
use std::process::{Command, Output};

fn brillouin(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brillouin"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no `{key}` in:\n{text}"))
        .parse()
        .unwrap()
}

fn energy(path: &Path) -> f64 {
    brillouin::spectrum::Spectrum::read_csv(path).unwrap().energy()
}

#[test]
fn simulate_then_fit_recovers_shift() {
    let dir = tempfile::tempdir().unwrap();
    let o = brillouin(&["simulate", "-o", "clean.csv"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let o = brillouin(&["fit", "-i", "clean.csv", "-o", "fit.txt"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let shift = value(&stdout(&o), "shift_ghz");
    assert_eq!(format!("{shift:.3}"), "10.000");
    assert!(dir.path().join("fit.txt").exists());
}

#[test]
fn simulated_csv_round_trips_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let o = brillouin(&["simulate", "-o", "c.csv", "--noisy", "n.csv", "--snr", "4", "--seed", "17"], dir.path());
    assert!(o.status.success());
    for f in ["c.csv", "n.csv"] {
        let text = std::fs::read_to_string(dir.path().join(f)).unwrap();
        let parsed = brillouin::spectrum::Spectrum::from_csv_str(&text).unwrap();
        assert_eq!(parsed.to_csv_string(), text);
    }
}

#[test]
fn seeded_commands_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.csv", "b.csv"] {
        let o = brillouin(&["simulate", "-o", "c.csv", "--noisy", name, "--snr", "3", "--seed", "5"], dir.path());
        assert!(o.status.success());
    }
    let read = |f: &str| std::fs::read(dir.path().join(f)).unwrap();
    assert_eq!(read("a.csv"), read("b.csv"));

    let bench = |out: &str| {
        let o = brillouin(
            &[
                "bench", "-o", out, "--realizations", "50", "--seed", "9", "--no-plots",
                "--set", "bench.snr_grid=2,6", "--set", "bench.methods=none,wa,mer",
            ],
            dir.path(),
        );
        assert!(o.status.success(), "{}", stderr(&o));
    };
    bench("r1");
    bench("r2");
    assert_eq!(read("r1/report.csv"), read("r2/report.csv"));
    let sidecar = String::from_utf8(read("r1/config.txt")).unwrap();
    assert!(sidecar.contains("seed = 9\n"));
    assert!(sidecar.contains("bench.snr_grid = 2,6\n"));
}

#[test]
fn bench_writes_report_plots_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let o = brillouin(
        &["bench", "-o", "out", "--realizations", "50", "--set", "bench.snr_grid=10", "--set", "bench.methods=none"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    for f in ["report.csv", "config.txt", "bias.svg", "bias.csv", "std.svg", "std.csv"] {
        assert!(dir.path().join("out").join(f).exists(), "{f}");
    }
    let report = std::fs::read_to_string(dir.path().join("out/report.csv")).unwrap();
    assert!(report.starts_with(
        "snr,method,bias_ghz,std_ghz,bias_pct,std_pct,linewidth_mean_ghz,linewidth_std_ghz,n_success,n_regenerated,n_fit_failures,crlb_std_ghz\n"
    ));
}

#[test]
fn wavelet_denoise_removes_most_noise_energy() {
    let dir = tempfile::tempdir().unwrap();
    let zero = ["--set", "truth.rayleigh_amplitude=0", "--set", "truth.brillouin_amplitude=0"];
    let mut args = vec!["simulate", "-o", "z.csv", "--noisy", "noise.csv", "--sigma", "100", "--seed", "21"];
    args.extend(zero);
    assert!(brillouin(&args, dir.path()).status.success());
    let o = brillouin(
        &["denoise", "--method", "wa", "-i", "noise.csv", "-o", "wa.csv", "--set", "wavelet.levels=5"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let ratio = energy(&dir.path().join("wa.csv")) / energy(&dir.path().join("noise.csv"));
    assert!(ratio < 0.1, "{ratio}");
    assert!(dir.path().join("wa.csv.diag").exists());
}

#[test]
fn mer_denoise_reports_feasibility_and_metric() {
    let dir = tempfile::tempdir().unwrap();
    assert!(brillouin(&["simulate", "-o", "c.csv", "--noisy", "n.csv", "--snr", "5", "--seed", "3"], dir.path())
        .status
        .success());
    let o = brillouin(
        &["denoise", "-i", "n.csv", "-o", "m.csv", "--snr", "5", "--trace", "trace.csv", "--mask-ghz", "-2:2"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("feasible = true"));
    assert!(value(&out, "termination_metric") < 0.01);
    let trace = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert!(trace.starts_with("iter,Q,S,chi_sq,termination_metric,mu\n"));

    let o = brillouin(&["fit", "-i", "m.csv", "--peaks", "2", "--mask-ghz", "-2:2"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!((value(&stdout(&o), "shift_ghz") - 10.0).abs() < 0.2);
}

#[test]
fn sound_reproduces_water_example() {
    let o = brillouin(
        &["sound", "--shift-ghz", "7.081", "--wavelength-nm", "561", "--index", "1.333", "--angle-deg", "180"],
        Path::new("."),
    );
    assert!(o.status.success());
    let v = value(&stdout(&o), "speed_of_sound_m_s");
    assert!((v - 1490.0).abs() < 1.0, "{v}");
}

#[test]
fn crlb_writes_curve() {
    let dir = tempfile::tempdir().unwrap();
    let o = brillouin(&["crlb", "-o", "c.csv", "--grid", "1,2,4"], dir.path());
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.path().join("c.csv")).unwrap();
    let rows: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!((rows[0] / rows[2] - 4.0).abs() < 1e-12);
}

#[test]
fn exit_codes_and_error_prefix() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();

    let o = brillouin(&["fit", "--bogus"], p);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("ERROR 1: "));

    let o = brillouin(&["--set", "mer.lamda=3", "simulate", "-o", "x.csv"], p);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("ERROR 1: unknown configuration key `mer.lamda`"));

    let o = brillouin(&["fit", "-i", "missing.csv"], p);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("ERROR 2: "));

    std::fs::write(p.join("bad.csv"), "frequency_ghz,intensity\n1,abc\n").unwrap();
    let o = brillouin(&["fit", "-i", "bad.csv"], p);
    assert_eq!(o.status.code(), Some(2));

    assert!(brillouin(&["simulate", "-o", "c.csv", "--noisy", "n.csv", "--snr", "2", "--seed", "1"], p)
        .status
        .success());
    let o = brillouin(&["fit", "-i", "n.csv", "-o", "partial.txt", "--set", "fit.max_iter=1"], p);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("ERROR 3: "));
    assert!(p.join("partial.txt").exists());
}
