mod common;

#[test]
fn analytic_gradients_match_finite_differences() {
    let r = common::gradient_oracles();
    println!("{r:?}");
    assert!(r.is_ok());
}

#[test]
fn noiseless_default_spectrum_is_fitted_exactly() {
    let r = common::noiseless_fit();
    println!("{r:?}");
    assert!(r.is_ok());
}
