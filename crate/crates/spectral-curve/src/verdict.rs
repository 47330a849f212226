use serde::Serialize;

use crate::SpectralSummary;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SurfaceKind {
    Harmonic,
    Cmc,
}

/// The published lower bound for the given spectral genus:
/// harmonic maps: E >= pi/2 (g+1)^2 (g odd), pi/2 ((g+1)^2 - 1) (g even);
/// CMC tori: area >= pi/4 (g+2)^2 (g even), pi/4 ((g+2)^2 - 1) (g odd).
pub fn energy_area_bound(genus: usize, kind: SurfaceKind) -> f64 {
    let g = genus as f64;
    match kind {
        SurfaceKind::Harmonic => {
            if genus % 2 == 1 {
                std::f64::consts::PI / 2.0 * (g + 1.0).powi(2)
            } else {
                std::f64::consts::PI / 2.0 * ((g + 1.0).powi(2) - 1.0)
            }
        }
        SurfaceKind::Cmc => {
            if genus % 2 == 0 {
                std::f64::consts::PI / 4.0 * (g + 2.0).powi(2)
            } else {
                std::f64::consts::PI / 4.0 * ((g + 2.0).powi(2) - 1.0)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// E < 4 pi and detected genus 0: consistent with a homomorphism onto
    /// a great circle
    HomomorphismClassConsistent,
    /// E >= 4 pi: the small-energy corollary does not apply
    NoVerdict,
    /// E < 4 pi but detected genus >= 1: contradicts the corollary
    Contradiction,
}

/// The small-energy corollary: a harmonic torus with E < 4 pi must have
/// spectral genus zero (an equator homomorphism).
pub fn small_energy_verdict(energy: f64, summary: &SpectralSummary) -> Verdict {
    if energy >= 4.0 * std::f64::consts::PI {
        return Verdict::NoVerdict;
    }
    if summary.genus == 0 && summary.flagged.is_empty() {
        Verdict::HomomorphismClassConsistent
    } else {
        Verdict::Contradiction
    }
}

/// Willmore energy of a CMC torus in the 3-sphere: W = (H^2 + 1) area.
/// Minimal tori have W = area.
pub fn s3_willmore_convert(h: f64, area: f64) -> f64 {
    assert!(area > 0.0, "area must be positive");
    (h * h + 1.0) * area
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn threshold_examples() {
        assert!((energy_area_bound(1, SurfaceKind::Harmonic) - 2.0 * PI).abs() < 1e-14);
        assert!((energy_area_bound(2, SurfaceKind::Cmc) - 4.0 * PI).abs() < 1e-14);
        assert!((energy_area_bound(0, SurfaceKind::Cmc) - PI).abs() < 1e-14);
        // odd/even parity branches
        assert!((energy_area_bound(2, SurfaceKind::Harmonic) - PI / 2.0 * 8.0).abs() < 1e-14);
        assert!((energy_area_bound(3, SurfaceKind::Cmc) - PI / 4.0 * 24.0).abs() < 1e-14);
    }

    #[test]
    fn minimal_torus_bound_beats_two_pi_squared_from_genus_four() {
        // spectral genus >= 4 minimal tori have W = area >= 9 pi > 2 pi^2
        let w4 = energy_area_bound(4, SurfaceKind::Cmc);
        assert!((w4 - 9.0 * PI).abs() < 1e-12);
        assert!(w4 > 2.0 * PI * PI);
    }

    #[test]
    fn s3_conversion() {
        assert!((s3_willmore_convert(0.0, 2.0 * PI * PI) - 2.0 * PI * PI).abs() < 1e-14);
        assert!((s3_willmore_convert(1.0, 5.0) - 10.0).abs() < 1e-14);
    }

    fn summary(genus: usize) -> SpectralSummary {
        SpectralSummary {
            branch_points: vec![],
            pairs: vec![],
            genus,
            flagged: vec![],
            annulus: (0.25, 4.0),
            grid: 21,
        }
    }

    #[test]
    fn verdict_cases() {
        assert_eq!(
            small_energy_verdict(1.0, &summary(0)),
            Verdict::HomomorphismClassConsistent
        );
        assert_eq!(
            small_energy_verdict(2.0 * PI * PI, &summary(1)),
            Verdict::NoVerdict
        );
        assert_eq!(
            small_energy_verdict(10.0, &summary(1)),
            Verdict::Contradiction
        );
    }
}
