//! Two-channel orthogonal filter bank.
//!
//! Analysis computes `a[k] = Σ_j lo[j]·x̃[2k + s − j]` (same for the
//! high-pass), where `x̃` is the boundary-extended signal and `s` the phase
//! offset. Synthesis is the exact adjoint of analysis. For the symmetric and
//! zero modes every output sample keeps all of its contributing
//! coefficients (`⌊(N + F − 1)/2⌋` per band), so the adjoint inverts the
//! transform on the interior for any length. The periodic mode is the
//! critically sampled periodisation, which is orthogonal and therefore
//! energy preserving.

use super::Boundary;

#[derive(Debug, Clone)]
pub(crate) struct FilterBank {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl FilterBank {
    pub fn from_lowpass(lo: &[f64]) -> Self {
        let f = lo.len();
        // QMF partner: hi[j] = (−1)^(j+1) · lo[F−1−j].
        let hi = (0..f)
            .map(|j| if j % 2 == 0 { -lo[f - 1 - j] } else { lo[f - 1 - j] })
            .collect();
        FilterBank { lo: lo.to_vec(), hi }
    }

    pub fn len(&self) -> usize {
        self.lo.len()
    }
}

/// Value of the extended signal at integer position `m`.
#[inline]
fn extended(x: &[f64], m: isize, boundary: Boundary) -> f64 {
    let n = x.len() as isize;
    match boundary {
        Boundary::Zero => {
            if (0..n).contains(&m) {
                x[m as usize]
            } else {
                0.0
            }
        }
        // Half-sample symmetric reflection, repeated as often as needed.
        Boundary::Symmetric => {
            let p = 2 * n;
            let r = m.rem_euclid(p);
            if r < n {
                x[r as usize]
            } else {
                x[(p - 1 - r) as usize]
            }
        }
        Boundary::Periodic => x[m.rem_euclid(n) as usize],
    }
}

/// Number of coefficients per band produced from a length-`n` input.
pub(crate) fn band_len(n: usize, filter_len: usize, boundary: Boundary) -> usize {
    match boundary {
        Boundary::Periodic => n.div_ceil(2),
        Boundary::Symmetric | Boundary::Zero => (n + filter_len - 1) / 2,
    }
}

/// One analysis step: returns `(approximation, detail)`.
pub(crate) fn analyze(x: &[f64], bank: &FilterBank, boundary: Boundary) -> (Vec<f64>, Vec<f64>) {
    let f = bank.len();
    match boundary {
        Boundary::Periodic => {
            // Odd lengths are padded by repeating the last sample.
            let mut xe = x.to_vec();
            if xe.len() % 2 == 1 {
                xe.push(*x.last().expect("non-empty signal"));
            }
            let ne = xe.len() as isize;
            let half = (f / 2) as isize;
            let nc = xe.len() / 2;
            let mut a = vec![0.0; nc];
            let mut d = vec![0.0; nc];
            for k in 0..nc {
                let base = 2 * k as isize + half;
                let (mut sa, mut sd) = (0.0, 0.0);
                for j in 0..f {
                    let v = xe[(base - j as isize).rem_euclid(ne) as usize];
                    sa += bank.lo[j] * v;
                    sd += bank.hi[j] * v;
                }
                a[k] = sa;
                d[k] = sd;
            }
            (a, d)
        }
        Boundary::Symmetric | Boundary::Zero => {
            let nc = band_len(x.len(), f, boundary);
            let mut a = vec![0.0; nc];
            let mut d = vec![0.0; nc];
            for k in 0..nc {
                let base = 2 * k as isize + 1;
                let (mut sa, mut sd) = (0.0, 0.0);
                for j in 0..f {
                    let v = extended(x, base - j as isize, boundary);
                    sa += bank.lo[j] * v;
                    sd += bank.hi[j] * v;
                }
                a[k] = sa;
                d[k] = sd;
            }
            (a, d)
        }
    }
}

/// One synthesis step back to a signal of length `out_len`.
pub(crate) fn synthesize(a: &[f64], d: &[f64], bank: &FilterBank, boundary: Boundary, out_len: usize) -> Vec<f64> {
    debug_assert_eq!(a.len(), d.len());
    let f = bank.len();
    match boundary {
        Boundary::Periodic => {
            let ne = 2 * a.len();
            let half = (f / 2) as isize;
            let mut xe = vec![0.0; ne];
            for k in 0..a.len() {
                let base = 2 * k as isize + half;
                for j in 0..f {
                    let m = (base - j as isize).rem_euclid(ne as isize) as usize;
                    xe[m] += bank.lo[j] * a[k] + bank.hi[j] * d[k];
                }
            }
            xe.truncate(out_len);
            xe
        }
        Boundary::Symmetric | Boundary::Zero => {
            let mut x = vec![0.0; out_len];
            for k in 0..a.len() {
                let base = 2 * k as isize + 1;
                for j in 0..f {
                    let m = base - j as isize;
                    if m >= 0 && (m as usize) < out_len {
                        x[m as usize] += bank.lo[j] * a[k] + bank.hi[j] * d[k];
                    }
                }
            }
            x
        }
    }
}
