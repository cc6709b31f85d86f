//! The one-parameter qubit-qutrit family and density-matrix validation.

use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eigenvalues, ComplexMatrix, Dims, HERMITIAN_TOL};

pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-10;

/// One of the two parties: Alice's qubit (factor 0) or Bob's qutrit (factor 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Party {
    Qubit,
    Qutrit,
}

impl Party {
    pub fn factor(self) -> usize {
        match self {
            Party::Qubit => 0,
            Party::Qutrit => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Party::Qubit => "qubit",
            Party::Qutrit => "qutrit",
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Party {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qubit" => Ok(Party::Qubit),
            "qutrit" => Ok(Party::Qutrit),
            other => Err(Error::InvalidConfig(format!(
                "unknown party `{other}` (expected qubit or qutrit)"
            ))),
        }
    }
}

/// Mixing parameter of the family, `0 <= mu <= 1/2`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct FamilyParameter(f64);

impl FamilyParameter {
    pub fn new(mu: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&mu) {
            return Err(Error::OutOfRange {
                name: "mu",
                value: mu,
                range: "[0, 0.5]",
            });
        }
        Ok(Self(mu))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Outcome of checking the three density-matrix invariants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidationReport {
    pub hermiticity_deviation: f64,
    /// `|trace - 1|`, including any imaginary part of the trace.
    pub trace_deviation: f64,
    /// Smallest eigenvalue of the Hermitian part.
    pub min_eigenvalue: f64,
}

impl ValidationReport {
    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_deviation <= HERMITIAN_TOL
    }

    pub fn is_normalized(&self) -> bool {
        self.trace_deviation <= TRACE_TOL
    }

    pub fn is_positive(&self) -> bool {
        self.min_eigenvalue >= -POSITIVITY_TOL
    }

    pub fn passes(&self) -> bool {
        self.is_hermitian() && self.is_normalized() && self.is_positive()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "hermiticity deviation {:e}, trace deviation {:e}, min eigenvalue {:e}",
            self.hermiticity_deviation, self.trace_deviation, self.min_eigenvalue
        )
    }
}

/// Checks a square matrix against the density-matrix invariants.
pub fn validate_matrix(m: &ComplexMatrix) -> ValidationReport {
    let hermiticity_deviation = m.hermitian_deviation();
    let trace_deviation = (m.trace() - crate::numerics::ONE).norm();
    // The Hermitian part is Hermitian by construction, so this cannot fail
    // short of a non-converging Jacobi run.
    let min_eigenvalue = hermitian_eigenvalues(&m.hermitian_part())
        .ok()
        .and_then(|ev| ev.first().copied())
        .unwrap_or(f64::NEG_INFINITY);
    ValidationReport {
        hermiticity_deviation,
        trace_deviation,
        min_eigenvalue,
    }
}

/// A bipartite (or multipartite) state with its tensor-factor dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Dims,
}

impl DensityMatrix {
    /// Pairs a matrix with dims, checking shape only. Use [`DensityMatrix::new`]
    /// to also require the physical invariants.
    pub fn from_parts(matrix: ComplexMatrix, dims: Dims) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix cannot carry dims {dims}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self { matrix, dims })
    }

    pub fn new(matrix: ComplexMatrix, dims: Dims) -> Result<Self> {
        let rho = Self::from_parts(matrix, dims)?;
        let report = rho.validate();
        if !report.passes() {
            return Err(Error::InvalidDensity(report.to_string()));
        }
        Ok(rho)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn validate(&self) -> ValidationReport {
        validate_matrix(&self.matrix)
    }

    /// `trace(rho^2)`.
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }
}

/// Free-function form of [`DensityMatrix::validate`].
pub fn validate_density(rho: &DensityMatrix) -> ValidationReport {
    rho.validate()
}

fn family_matrix(entries: &[((usize, usize), f64)]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(6, 6);
    for &((row, col), value) in entries {
        m[(row, col)] += num_complex::Complex64::new(value, 0.0);
    }
    m
}

// Composite index for |qubit qutrit>.
const fn ket(qubit: usize, qutrit: usize) -> usize {
    qubit * 3 + qutrit
}

/// The one-parameter family
///
/// ```text
/// rho(mu) = mu/2 (|00><00| + |01><01| + |11><11| + |12><12| + |00><12| + |12><00|)
///         + (1-2mu)/2 (|02><02| + |10><10| + |02><10| + |10><02|)
/// ```
///
/// on dims `[2, 3]`. This is the zero-acceleration limit of the accelerated
/// qubit state, and it has unit trace for every `mu`.
pub fn one_param_state(mu: FamilyParameter) -> DensityMatrix {
    let a = mu.value() / 2.0;
    let b = (1.0 - 2.0 * mu.value()) / 2.0;
    let m = family_matrix(&[
        ((ket(0, 0), ket(0, 0)), a),
        ((ket(0, 1), ket(0, 1)), a),
        ((ket(1, 1), ket(1, 1)), a),
        ((ket(1, 2), ket(1, 2)), a),
        ((ket(0, 0), ket(1, 2)), a),
        ((ket(1, 2), ket(0, 0)), a),
        ((ket(0, 2), ket(0, 2)), b),
        ((ket(1, 0), ket(1, 0)), b),
        ((ket(0, 2), ket(1, 0)), b),
        ((ket(1, 0), ket(0, 2)), b),
    ]);
    DensityMatrix::from_parts(m, Dims::pair(2, 3)).expect("6x6 matches [2, 3]")
}

/// The family exactly as originally typeset, kept only to document why it is
/// not used: its diagonal sums to `mu + 1/2` and `|10><01|` has no conjugate.
pub fn printed_one_param_matrix(mu: FamilyParameter) -> ComplexMatrix {
    let a = mu.value() / 2.0;
    let b = (1.0 - 2.0 * mu.value()) / 2.0;
    family_matrix(&[
        ((ket(0, 1), ket(0, 1)), a),
        ((ket(1, 1), ket(1, 1)), a),
        ((ket(1, 2), ket(1, 2)), a),
        ((ket(0, 2), ket(0, 2)), b),
        ((ket(0, 0), ket(1, 2)), a),
        ((ket(1, 0), ket(0, 2)), b),
        ((ket(1, 2), ket(0, 0)), a),
        ((ket(0, 2), ket(1, 0)), b),
        ((ket(0, 0), ket(0, 0)), a),
        ((ket(1, 0), ket(0, 1)), b),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn mu(x: f64) -> FamilyParameter {
        FamilyParameter::new(x).unwrap()
    }

    #[test]
    fn parameter_range() {
        assert!(FamilyParameter::new(0.0).is_ok());
        assert!(FamilyParameter::new(0.5).is_ok());
        assert!(FamilyParameter::new(-1e-9).is_err());
        assert!(FamilyParameter::new(0.7).is_err());
        assert!(FamilyParameter::new(f64::NAN).is_err());
    }

    #[test]
    fn mu_zero_is_a_pure_bell_type_state() {
        let rho = one_param_state(mu(0.0));
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-15);
        let m = rho.matrix();
        for (i, j) in [(2, 2), (3, 3), (2, 3), (3, 2)] {
            assert_eq!(m[(i, j)].re, 0.5);
        }
        assert_abs_diff_eq!(m.frobenius_norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn mu_half_has_no_1_minus_2mu_block() {
        let rho = one_param_state(mu(0.5));
        let mut expected = ComplexMatrix::zeros(6, 6);
        for (i, j) in [(0, 0), (1, 1), (4, 4), (5, 5), (0, 5), (5, 0)] {
            expected[(i, j)] = num_complex::Complex64::new(0.25, 0.0);
        }
        assert_eq!(rho.matrix(), &expected);
    }

    #[test]
    fn sampled_family_passes_validation() {
        for k in 0..=10 {
            let rho = one_param_state(mu(k as f64 * 0.05));
            let report = validate_density(&rho);
            assert!(report.passes(), "mu={} {report}", k as f64 * 0.05);
            assert!(report.trace_deviation < 1e-15);
            if k > 0 {
                assert!(rho.purity() < 1.0);
            }
        }
    }

    #[test]
    fn printed_family_fails_trace() {
        let m = printed_one_param_matrix(mu(0.3));
        let report = validate_matrix(&m);
        assert!(!report.passes());
        assert_abs_diff_eq!(report.trace_deviation, 0.2, epsilon = 1e-12);
        assert!(!report.is_hermitian());
    }

    #[test]
    fn maximally_mixed_passes() {
        let rho = DensityMatrix::new(ComplexMatrix::identity(6).scale_real(1.0 / 6.0), Dims::pair(2, 3));
        assert!(rho.is_ok());
    }

    #[test]
    fn new_rejects_unnormalized_and_misshaped() {
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::identity(6), Dims::pair(2, 3)),
            Err(Error::InvalidDensity(_))
        ));
        assert!(matches!(
            DensityMatrix::from_parts(ComplexMatrix::identity(6), Dims::pair(2, 2)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn negative_eigenvalue_is_reported() {
        let m = ComplexMatrix::diag_real(&[1.5, -0.5]);
        let report = validate_matrix(&m);
        assert!(report.is_normalized() && report.is_hermitian());
        assert!(!report.is_positive());
    }
}
