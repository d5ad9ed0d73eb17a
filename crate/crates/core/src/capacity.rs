//! Closed-form density and capacity model.
//!
//! Storing one length-`L` sequence couples `L(L-1)/2` of the `n(n-1)/2`
//! node pairs, i.e. a fraction `xi = L(L-1)/(n(n-1))` of the symmetric
//! adjacency. Each store therefore moves the symmetric density by
//! `d' = d(1-xi) + xi`, which telescopes to `d_s = 1-(1-xi)^s` from an empty
//! graph, and inverts to the capacity `s = log(1-d)/log(1-xi)` at a target
//! density `d`.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SsakgError};

/// Density the recall machinery is assumed to tolerate before unique
/// reconstruction degrades.
pub const DEFAULT_CRITICAL_DENSITY: f64 = 0.5;

/// Fraction of the symmetric adjacency one length-`seq_len` sequence covers.
pub fn xi(seq_len: usize, n: usize) -> Result<f64> {
    if seq_len < 2 {
        return Err(SsakgError::InvalidParams(format!(
            "sequence length must be at least 2, got {seq_len}"
        )));
    }
    if seq_len > n {
        return Err(SsakgError::InvalidParams(format!(
            "sequence length {seq_len} exceeds node count {n}"
        )));
    }
    Ok((seq_len as f64 * (seq_len - 1) as f64) / (n as f64 * (n - 1) as f64))
}

/// Pair slots in use at density `d` on `n` nodes: `d * n * (n-1)`.
pub fn edges_from_density(d: f64, n: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&d) {
        return Err(SsakgError::InvalidParams(format!(
            "density must lie in [0,1], got {d}"
        )));
    }
    if n < 2 {
        return Err(SsakgError::InvalidParams(format!(
            "node count must be at least 2, got {n}"
        )));
    }
    Ok(d * n as f64 * (n - 1) as f64)
}

/// Expected number of newly used pair slots when a length-`seq_len` sequence
/// is stored at density `d`, under uniform overlap: `(1-d) * L * (L-1)`.
pub fn expected_new_edges(d: f64, seq_len: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&d) {
        return Err(SsakgError::InvalidParams(format!(
            "density must lie in [0,1], got {d}"
        )));
    }
    if seq_len < 2 {
        return Err(SsakgError::InvalidParams(format!(
            "sequence length must be at least 2, got {seq_len}"
        )));
    }
    Ok((1.0 - d) * seq_len as f64 * (seq_len - 1) as f64)
}

/// One store step: `d(1-xi) + xi`.
pub fn density_step(d: f64, xi: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&d) {
        return Err(SsakgError::InvalidParams(format!(
            "density must lie in [0,1], got {d}"
        )));
    }
    check_xi(xi, true)?;
    Ok(d * (1.0 - xi) + xi)
}

/// Density after `s` stores into an empty graph: `1 - (1-xi)^s`.
///
/// Evaluated as `-expm1(s * ln1p(-xi))` so small `xi` and large `s` do not
/// lose precision.
pub fn density_after(s: u64, xi: f64) -> Result<f64> {
    check_xi(xi, true)?;
    Ok(-f64::exp_m1(s as f64 * f64::ln_1p(-xi)))
}

/// Number of sequences that drive the density to `d`:
/// `log(1-d)/log(1-xi)`. Callers round down for a whole-sequence count.
pub fn capacity(d: f64, xi: f64) -> Result<f64> {
    if !(d > 0.0 && d < 1.0) {
        return Err(SsakgError::InvalidParams(format!(
            "density must lie strictly in (0,1), got {d}"
        )));
    }
    check_xi(xi, false)?;
    Ok(f64::ln_1p(-d) / f64::ln_1p(-xi))
}

fn check_xi(xi: f64, allow_one: bool) -> Result<()> {
    let ok = xi > 0.0 && (xi < 1.0 || (allow_one && xi == 1.0));
    if !ok {
        return Err(SsakgError::InvalidParams(format!(
            "xi must lie in (0,1{}, got {xi}",
            if allow_one { "]" } else { ")" }
        )));
    }
    Ok(())
}

/// Bundled model parameters for one graph/sequence-length configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityModel {
    pub n: usize,
    pub seq_len: usize,
    pub xi: f64,
    pub d_crit: f64,
}

impl DensityModel {
    pub fn new(n: usize, seq_len: usize) -> Result<Self> {
        Self::with_critical_density(n, seq_len, DEFAULT_CRITICAL_DENSITY)
    }

    pub fn with_critical_density(n: usize, seq_len: usize, d_crit: f64) -> Result<Self> {
        if !(d_crit > 0.0 && d_crit < 1.0) {
            return Err(SsakgError::InvalidParams(format!(
                "critical density must lie in (0,1), got {d_crit}"
            )));
        }
        Ok(DensityModel {
            n,
            seq_len,
            xi: xi(seq_len, n)?,
            d_crit,
        })
    }

    /// Real-valued capacity at the critical density.
    pub fn capacity_at_critical(&self) -> f64 {
        capacity(self.d_crit, self.xi).expect("model parameters validated on construction")
    }

    /// Whole sequences storable before the critical density is crossed.
    pub fn sequence_capacity(&self) -> u64 {
        self.capacity_at_critical().floor() as u64
    }

    pub fn density_after(&self, s: u64) -> f64 {
        density_after(s, self.xi).expect("model parameters validated on construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xi_examples() {
        assert_eq!(xi(20, 20).unwrap(), 1.0);
        assert!((xi(15, 1000).unwrap() - 210.0 / 999_000.0).abs() < 1e-18);
        assert!((xi(15, 1000).unwrap() - 2.10210e-4).abs() < 1e-9);
        assert_eq!(xi(2, 1000).unwrap(), 2.0 / 999_000.0);
        assert!(xi(1, 10).is_err());
        assert!(xi(11, 10).is_err());
    }

    #[test]
    fn edges_from_density_examples() {
        assert_eq!(edges_from_density(1.0, 20).unwrap(), 380.0);
        assert_eq!(edges_from_density(0.0, 17).unwrap(), 0.0);
        assert_eq!(edges_from_density(0.5, 1000).unwrap(), 499_500.0);
        assert!(edges_from_density(1.5, 10).is_err());
    }

    #[test]
    fn expected_new_edges_examples() {
        assert_eq!(expected_new_edges(0.0, 15).unwrap(), 210.0);
        assert_eq!(expected_new_edges(1.0, 15).unwrap(), 0.0);
        assert_eq!(expected_new_edges(0.5, 15).unwrap(), 105.0);
    }

    #[test]
    fn step_fixed_points() {
        let x = xi(15, 1000).unwrap();
        assert_eq!(density_step(0.0, x).unwrap(), x);
        assert_eq!(density_step(1.0, x).unwrap(), 1.0);
    }

    #[test]
    fn recurrence_matches_closed_form() {
        let x = xi(15, 1000).unwrap();
        let mut d = 0.0;
        for s in 1..=1000u64 {
            d = density_step(d, x).unwrap();
            assert!(
                (d - density_after(s, x).unwrap()).abs() < 1e-12,
                "diverged at s={s}"
            );
        }
        assert!((d - 0.18960).abs() < 5e-5);
    }

    #[test]
    fn density_after_boundaries() {
        let x = xi(15, 1000).unwrap();
        assert_eq!(density_after(0, x).unwrap(), 0.0);
        assert_eq!(density_after(1, x).unwrap(), x);
    }

    #[test]
    fn capacity_examples() {
        let x = xi(15, 1000).unwrap();
        assert!((capacity(x, x).unwrap() - 1.0).abs() < 1e-9);
        let c = capacity(0.5, x).unwrap();
        assert!((c - 0.5f64.ln() / (1.0 - x).ln()).abs() < 1e-9);
        assert!((c - 3297.0).abs() < 2.0, "capacity came out {c}");
        assert!(capacity(0.0, x).is_err());
        assert!(capacity(1.0, x).is_err());
        assert!(capacity(0.5, 0.0).is_err());
        assert!(capacity(0.5, 1.0).is_err());
    }

    #[test]
    fn capacity_inverts_density_after() {
        let x = xi(15, 1000).unwrap();
        for s in [1u64, 7, 100, 3297, 10_000] {
            let d = density_after(s, x).unwrap();
            let back = capacity(d, x).unwrap();
            assert!(
                (back - s as f64).abs() / (s as f64) < 1e-9,
                "s={s} back={back}"
            );
        }
    }

    #[test]
    fn model_bundle() {
        let m = DensityModel::new(1000, 15).unwrap();
        assert_eq!(m.d_crit, 0.5);
        assert_eq!(m.sequence_capacity(), 3297);
        assert!(DensityModel::with_critical_density(1000, 15, 0.0).is_err());
    }
}
