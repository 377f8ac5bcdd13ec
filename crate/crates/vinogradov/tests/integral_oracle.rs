//! Cross-validation of the truncated singular-integral quadrature
//! against the windowed Monte-Carlo volume oracle.
//!
//! The two estimators share nothing: one is a deterministic oscillatory
//! quadrature over the frequency cube, the other a direct sampling of
//! the moment-difference volume. Agreement within the combined error
//! (binomial + cut-off tail + measured window bias) is therefore a
//! genuine end-to-end check of both.

use vinogradov::integral::{
    combined_comparison_error, real_density_oracle, singular_integral_truncated, NormalizedOffset,
};

fn check_agreement(n: NormalizedOffset, tag: &str) {
    let quad = singular_integral_truncated(6, &n, 8.0, 1e-8).unwrap();
    assert!(quad.converged, "{tag}: inner quadrature self-check failed");
    assert!(
        quad.imag_residual < 1e-8,
        "{tag}: imaginary residual {}",
        quad.imag_residual
    );
    let samples = 400_000;
    let mc = real_density_oracle(6, &n, 0.1, samples, 2024).unwrap();
    let coarse = real_density_oracle(6, &n, 0.2, samples, 2025).unwrap();
    let combined = combined_comparison_error(&quad, &mc, &coarse).unwrap();
    let gap = (quad.value - mc.value).abs();
    assert!(
        gap < 3.0 * combined,
        "{tag}: quadrature {} vs oracle {} +- {} (combined sigma {})",
        quad.value,
        mc.value,
        mc.std_error,
        combined
    );
}

#[test]
fn quadrature_and_oracle_agree_at_origin() {
    check_agreement(NormalizedOffset::ZERO, "n = 0");
}

#[test]
fn quadrature_and_oracle_agree_off_origin() {
    check_agreement(NormalizedOffset::new(0.1, 0.1, 0.1), "n = 0.1");
}
