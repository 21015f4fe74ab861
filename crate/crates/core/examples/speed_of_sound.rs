//! Converts a backscattering shift in water to a speed of sound and back.

use brillouin::fit::{brillouin_shift, speed_of_sound};

fn main() -> brillouin::Result<()> {
    let (lambda, n, theta) = (561e-9, 1.333, std::f64::consts::PI);
    let v = speed_of_sound(7.081e9, lambda, n, theta)?;
    println!("7.081 GHz at 561 nm, n = 1.333, 180 deg: {v:.1} m/s");
    for angle in [90.0f64, 135.0, 180.0] {
        let omega = brillouin_shift(1490.0, lambda, n, angle.to_radians())?;
        println!("1490 m/s at {angle:>5} deg: {:.3} GHz", omega / 1e9);
    }
    Ok(())
}
