//! The finite formulas of the asymptotic construction, evaluated at a given
//! `n` and `γ`. At desk-sized `n` most of them are below one; they are kept
//! so that reports can show them next to the overrides actually used.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PaperConstants {
    pub n: usize,
    pub gamma: f64,
    /// `⌈γ⁷n/2⌉`
    pub reservoir_size: usize,
    /// `γ⁴n⁻³`
    pub family_inclusion_prob: f64,
    /// `2γ⁴n`
    pub family_size_cap: f64,
    /// `γ⁷n`; coverage must exceed it.
    pub coverage_floor: f64,
    /// `16γ⁸n`
    pub expected_overlapping_pairs: f64,
    /// `6γ³n⁴`
    pub absorber_count_floor: f64,
    /// `20γ³n`
    pub absorbing_path_order: f64,
    /// `4/γ`
    pub connect_order: f64,
    /// `8/γ`
    pub absorbing_connector_order: f64,
    /// `16/γ`
    pub reservoir_connector_order: f64,
    /// `γ⁸n`
    pub reservoir_forbidden: f64,
    /// `γ¹⁰n`
    pub cover_paths: f64,
    /// `γ⁷n/2`
    pub cover_leftover: f64,
    /// `⌈1/γ⌉ + 1`
    pub cascade_levels: usize,
}

impl PaperConstants {
    pub fn new(n: usize, gamma: f64) -> Self {
        let nf = n as f64;
        let g = gamma;
        PaperConstants {
            n,
            gamma,
            reservoir_size: (g.powi(7) * nf / 2.0).ceil() as usize,
            family_inclusion_prob: g.powi(4) / nf.powi(3),
            family_size_cap: 2.0 * g.powi(4) * nf,
            coverage_floor: g.powi(7) * nf,
            expected_overlapping_pairs: 16.0 * g.powi(8) * nf,
            absorber_count_floor: 6.0 * g.powi(3) * nf.powi(4),
            absorbing_path_order: 20.0 * g.powi(3) * nf,
            connect_order: 4.0 / g,
            absorbing_connector_order: 8.0 / g,
            reservoir_connector_order: 16.0 / g,
            reservoir_forbidden: g.powi(8) * nf,
            cover_paths: g.powi(10) * nf,
            cover_leftover: g.powi(7) * nf / 2.0,
            cascade_levels: (1.0 / g).ceil() as usize + 1,
        }
    }
}

/// `⌊x⌋` with a small tolerance, for caps such as `8/γ` at `γ = 0.1`.
pub(crate) fn floor_tol(x: f64) -> usize {
    (x + 1e-9).floor().max(0.0) as usize
}
