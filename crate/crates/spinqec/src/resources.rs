//! Hilbert-space cost of a logical qudit: one large spin versus a bundle of
//! surface-code logical qubits.
//!
//! The qudit side is exact: the ladder-safe family for a d-level qudit at
//! distance 2t+1 lives in a spin with 2S + 1 = 2t(2t+1)(2d − 1) levels, so
//! the space grows linearly in d. The qubit side encodes each of the
//! ceil(log2 d) logical qubits in its own distance-matched surface-code
//! patch, so the physical dimension is 2^(n_phys · n_logical) and grows
//! exponentially. This module tabulates both for side-by-side comparison.
//!
//! The surface-code overhead per logical qubit is taken as 2·dist² − 1
//! (rotated layout: dist² data qubits plus dist² − 1 measurement ancillas,
//! 17 at distance 3). That is the minimal standard choice, not the only
//! one, so every entry point accepts an override.

use num_bigint::BigUint;
use serde::Serialize;

use crate::{Error, Result};

/// One row of the comparison table, for a fixed (d, distance) pair.
#[derive(Clone, Debug, Serialize)]
pub struct ResourceRow {
    /// Logical qudit dimension.
    pub d: u32,
    /// Code distance 2t+1; both encodings are taken at the same distance.
    pub distance: u32,
    /// Spin-space dimension 2S+1 of the single-spin encoding.
    pub qudit_dim: u64,
    /// Logical qubits needed to hold one qudit: ceil(log2 d).
    pub logical_qubits: u32,
    /// Physical qubits across all patches: n_per_logical · logical_qubits.
    pub physical_qubits: u64,
    /// Exact base-2 log of the qubit-side dimension (equals physical_qubits).
    pub log2_qubit_dim: u64,
    /// Codeword constructions exist only for t ∈ {1, 2}; rows with
    /// distance ≥ 7 extrapolate the dimension formula without a code behind
    /// it and are flagged so downstream consumers can tell.
    pub beyond_constructions: bool,
}

impl ResourceRow {
    /// Full qubit-side Hilbert dimension 2^(physical_qubits). Exceeds u64
    /// range already at two distance-5 patches, hence the big integer.
    pub fn qubit_mapping_dim(&self) -> BigUint {
        BigUint::from(1u32) << self.log2_qubit_dim
    }

    /// How many bits the qubit mapping overshoots the qudit encoding,
    /// measured on the ideal register exponent n_per_logical · log2 d rather
    /// than the realized integer register. Rounding the register up to whole
    /// qubits makes `log2_qubit_dim` a staircase in d, and inside a plateau
    /// (d = 3 to 4, say) the realized separation dips while the qudit side
    /// keeps growing; the ideal exponent is the quantity that is strictly
    /// increasing in d, which is the scaling claim worth testing.
    pub fn log2_separation(&self) -> f64 {
        let per_logical = self.physical_qubits as f64 / f64::from(self.logical_qubits);
        per_logical * f64::from(self.d).log2() - (self.qudit_dim as f64).log2()
    }
}

/// Spin-space dimension of the d-level, distance-(2t+1) single-spin code:
/// 2t(2t+1)(2d − 1). Agrees with the spin used by [`build_xyz_code`] for
/// every (d, t) the builder supports, and extrapolates the same rule beyond.
pub fn qudit_dim(d: u32, t: u32) -> Result<u64> {
    if d < 2 {
        return Err(Error::Domain(format!("logical dimension d = {d} must be at least 2")));
    }
    if t < 1 {
        return Err(Error::Domain("distance parameter t must be at least 1".into()));
    }
    let (d, t) = (u64::from(d), u64::from(t));
    Ok(2 * t * (2 * t + 1) * (2 * d - 1))
}

/// Physical qubits per surface-code logical qubit at the given (odd ≥ 3)
/// distance, rotated layout: 2·dist² − 1.
pub fn physical_qubits_per_logical(distance: u32) -> Result<u64> {
    if distance < 3 || distance.is_multiple_of(2) {
        return Err(Error::Domain(format!("code distance {distance} must be odd and at least 3")));
    }
    let dist = u64::from(distance);
    Ok(2 * dist * dist - 1)
}

/// Logical qubits needed to address d levels: ceil(log2 d).
pub fn logical_qubits(d: u32) -> Result<u32> {
    if d < 2 {
        return Err(Error::Domain(format!("logical dimension d = {d} must be at least 2")));
    }
    Ok(32 - (d - 1).leading_zeros())
}

/// Qubit-side Hilbert dimension for one logical qudit at the given distance,
/// with the default per-logical overhead.
pub fn qubit_mapping_dim(d: u32, distance: u32) -> Result<BigUint> {
    Ok(resource_row(d, distance, None)?.qubit_mapping_dim())
}

/// Builds one comparison row. `phys_per_logical` overrides the rotated
/// surface-code count when the caller wants a different overhead model.
pub fn resource_row(d: u32, distance: u32, phys_per_logical: Option<u64>) -> Result<ResourceRow> {
    let t = match distance {
        dist if dist >= 3 && dist % 2 == 1 => (dist - 1) / 2,
        dist => {
            return Err(Error::Domain(format!("code distance {dist} must be odd and at least 3")))
        }
    };
    let per_logical = match phys_per_logical {
        Some(n) if n >= 1 => n,
        Some(n) => {
            return Err(Error::Domain(format!("physical qubits per logical qubit {n} must be positive")))
        }
        None => physical_qubits_per_logical(distance)?,
    };
    let logical = logical_qubits(d)?;
    let physical = per_logical * u64::from(logical);
    Ok(ResourceRow {
        d,
        distance,
        qudit_dim: qudit_dim(d, t)?,
        logical_qubits: logical,
        physical_qubits: physical,
        log2_qubit_dim: physical,
        beyond_constructions: t > 2,
    })
}

/// Full comparison sweep: one row per (d, distance), distances varying
/// fastest. Pure arithmetic, so the output is deterministic.
pub fn emit_comparison(
    d_values: &[u32],
    distances: &[u32],
    phys_per_logical: Option<u64>,
) -> Result<Vec<ResourceRow>> {
    if d_values.is_empty() || distances.is_empty() {
        return Err(Error::Domain("comparison ranges must be nonempty".into()));
    }
    let mut rows = Vec::with_capacity(d_values.len() * distances.len());
    for &d in d_values {
        for &dist in distances {
            rows.push(resource_row(d, dist, phys_per_logical)?);
        }
    }
    Ok(rows)
}

/// Renders rows as CSV. All columns are exact integers, so the text is
/// byte-stable across platforms.
pub fn comparison_csv(rows: &[ResourceRow]) -> String {
    let mut out = String::from("d, distance, qudit_dim, logical_qubits, physical_qubits, log2_qubit_dim\n");
    for r in rows {
        out.push_str(&format!(
            "{}, {}, {}, {}, {}, {}\n",
            r.d, r.distance, r.qudit_dim, r.logical_qubits, r.physical_qubits, r.log2_qubit_dim
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::build_xyz_code;

    #[test]
    fn qudit_dim_hits_the_known_instances() {
        assert_eq!(qudit_dim(3, 1).unwrap(), 30);
        assert_eq!(qudit_dim(3, 2).unwrap(), 100);
        let distance3: Vec<u64> = (2..=8).map(|d| qudit_dim(d, 1).unwrap()).collect();
        assert_eq!(distance3, vec![18, 30, 42, 54, 66, 78, 90]);
    }

    #[test]
    fn qudit_dim_matches_the_builder_spin() {
        for d in 2..=6 {
            for t in 1..=2 {
                let code = build_xyz_code(d, t).unwrap();
                assert_eq!(qudit_dim(d, t).unwrap(), u64::from(code.spin.two_s()) + 1);
            }
        }
    }

    #[test]
    fn surface_code_counts_match_the_rotated_layout() {
        assert_eq!(physical_qubits_per_logical(3).unwrap(), 17);
        assert_eq!(physical_qubits_per_logical(5).unwrap(), 49);
        assert_eq!(physical_qubits_per_logical(7).unwrap(), 97);
        assert!(physical_qubits_per_logical(2).is_err());
        assert!(physical_qubits_per_logical(4).is_err());
    }

    #[test]
    fn logical_qubit_count_is_ceil_log2() {
        let expected = [(2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4), (16, 4), (17, 5)];
        for (d, n) in expected {
            assert_eq!(logical_qubits(d).unwrap(), n, "d = {d}");
        }
        assert!(logical_qubits(1).is_err());
    }

    #[test]
    fn qutrit_mapping_needs_thirty_four_qubits_worth() {
        let row = resource_row(3, 3, None).unwrap();
        assert_eq!(row.physical_qubits, 34);
        assert_eq!(row.qubit_mapping_dim(), BigUint::from(1u32) << 34);
        let qubit = resource_row(2, 3, None).unwrap();
        assert_eq!(qubit.qubit_mapping_dim(), BigUint::from(1u32) << 17);
    }

    #[test]
    fn qubit_mapping_always_dominates() {
        let d_values: Vec<u32> = (2..=8).collect();
        let rows = emit_comparison(&d_values, &[3, 5], None).unwrap();
        assert_eq!(rows.len(), 14);
        for row in &rows {
            assert!(row.qubit_mapping_dim() >= BigUint::from(row.qudit_dim));
        }
    }

    #[test]
    fn separation_grows_with_d() {
        let d_values: Vec<u32> = (2..=8).collect();
        let rows = emit_comparison(&d_values, &[3], None).unwrap();
        for pair in rows.windows(2) {
            assert!(pair[1].log2_separation() > pair[0].log2_separation());
        }
        // The realized integer register is constant across d = 3 and d = 4
        // (two logical qubits either way), so the naive staircase separation
        // dips there; that is why the property above uses the ideal exponent.
        let stair =
            |r: &ResourceRow| r.log2_qubit_dim as f64 - (r.qudit_dim as f64).log2();
        assert_eq!(rows[1].log2_qubit_dim, rows[2].log2_qubit_dim);
        assert!(stair(&rows[2]) < stair(&rows[1]));
    }

    #[test]
    fn extrapolated_distances_are_flagged() {
        assert!(!resource_row(3, 3, None).unwrap().beyond_constructions);
        assert!(!resource_row(3, 5, None).unwrap().beyond_constructions);
        assert!(resource_row(3, 7, None).unwrap().beyond_constructions);
    }

    #[test]
    fn override_replaces_the_per_logical_count() {
        let row = resource_row(3, 3, Some(9)).unwrap();
        assert_eq!(row.physical_qubits, 18);
        assert_eq!(row.log2_qubit_dim, 18);
        assert!(resource_row(3, 3, Some(0)).is_err());
    }

    #[test]
    fn csv_has_the_pinned_header_and_is_stable() {
        let rows = emit_comparison(&[2, 3], &[3], None).unwrap();
        let text = comparison_csv(&rows);
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "d, distance, qudit_dim, logical_qubits, physical_qubits, log2_qubit_dim"
        );
        assert_eq!(lines.next().unwrap(), "2, 3, 18, 1, 17, 17");
        assert_eq!(lines.next().unwrap(), "3, 3, 30, 2, 34, 34");
        assert_eq!(text, comparison_csv(&rows));
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        assert!(qudit_dim(1, 1).is_err());
        assert!(qudit_dim(3, 0).is_err());
        assert!(resource_row(3, 4, None).is_err());
        assert!(emit_comparison(&[], &[3], None).is_err());
    }
}
