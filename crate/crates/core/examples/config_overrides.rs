//! Layering a configuration text and command-line style overrides, then
//! echoing the result.

use brillouin::config::Settings;

fn main() -> brillouin::Result<()> {
    let mut s = Settings::from_config_str(
        "# coarse sweep\n\
         bench.snr_grid = 1, 5, 10\n\
         bench.realizations = 200\n\
         wavelet.threshold_rule = paper-universal\n",
    )?;
    s.apply_override("bench.realizations=500")?;
    s.apply_override("seed=2024")?;
    print!("{}", s.to_config_string());
    if let Err(e) = s.apply_override("mer.lamda=10") {
        eprintln!("rejected: {e}");
    }
    Ok(())
}
