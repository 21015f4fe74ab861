//! Small Monte Carlo run over all three methods. Pass the number of
//! realizations and an output directory to change the defaults.

use brillouin::bench::{render_plots, run_bench, BenchConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let realizations = args.next().and_then(|a| a.parse().ok()).unwrap_or(100);
    let out = args
        .next()
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("brillouin-bench"));

    std::fs::create_dir_all(&out)?;
    let config = BenchConfig {
        snr_grid: vec![1.0, 3.0, 5.0, 10.0],
        realizations,
        ..BenchConfig::default()
    };
    let t = std::time::Instant::now();
    let report = run_bench(&config, None)?;
    println!("{} realizations in {:.1?}", realizations, t.elapsed());
    print!("{}", report.to_csv_string());
    report.write_csv(out.join("report.csv"))?;
    for f in render_plots(&report, &out)? {
        println!("wrote {}", f.display());
    }
    Ok(())
}
