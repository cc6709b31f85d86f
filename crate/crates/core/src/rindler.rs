//! Unruh acceleration of one subsystem.
//!
//! A Minkowski mode is mapped into region I (x) region II by an isometry and
//! region II is traced out. Qubit levels in either region are `(0, 1)`;
//! accelerated-qutrit levels are `(0, U, D, P)` at indices `(0, 1, 2, 3)`,
//! with the qutrit's `|1>` read as `U` and `|2>` as `D`. The phase of the mode
//! transformation is fixed to zero.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{kron, partial_trace, ComplexMatrix, Dims};
use crate::states::{DensityMatrix, FamilyParameter, Party};

/// Mixing angle `r` with `tan r = exp(-pi omega c / a)`, `0 <= r <= pi/4`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct RindlerParameter(f64);

impl RindlerParameter {
    pub const MAX: f64 = FRAC_PI_4;

    pub fn new(r: f64) -> Result<Self> {
        if !(0.0..=Self::MAX).contains(&r) {
            return Err(Error::OutOfRange {
                name: "r",
                value: r,
                range: "[0, pi/4]",
            });
        }
        Ok(Self(r))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Converts a proper acceleration, mode frequency and speed of light into `r`.
pub fn rindler_parameter_from_acceleration(
    acceleration: f64,
    omega: f64,
    c: f64,
) -> Result<RindlerParameter> {
    for (name, value) in [("acceleration", acceleration), ("omega", omega), ("c", c)] {
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::OutOfRange {
                name,
                value,
                range: "(0, inf)",
            });
        }
    }
    let r = (-PI * omega * c / acceleration).exp().atan();
    RindlerParameter::new(r)
}

/// Tall matrix embedding one Minkowski factor into region I (x) region II.
#[derive(Clone, Debug, PartialEq)]
pub struct Isometry {
    pub matrix: ComplexMatrix,
    pub in_dim: usize,
    pub out_dims: Dims,
}

impl Isometry {
    /// `max |V^dag V - I|`.
    pub fn defect(&self) -> f64 {
        let gram = &self.matrix.adjoint() * &self.matrix;
        gram.max_abs_diff(&ComplexMatrix::identity(self.in_dim))
    }

    /// Column `k`, i.e. the image of basis state `|k>`.
    pub fn image(&self, k: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.matrix.rows(), 1, |i, _| self.matrix[(i, k)])
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `|0> -> cos r |0>_I |0>_II + sin r |1>_I |1>_II`, `|1> -> |1>_I |0>_II`.
pub fn qubit_isometry(r: RindlerParameter) -> Isometry {
    let (s, c) = r.value().sin_cos();
    let at = |region_one: usize, region_two: usize| region_one * 2 + region_two;
    let mut v = ComplexMatrix::zeros(4, 2);
    v[(at(0, 0), 0)] = real(c);
    v[(at(1, 1), 0)] = real(s);
    v[(at(1, 0), 1)] = real(1.0);
    Isometry {
        matrix: v,
        in_dim: 2,
        out_dims: Dims::pair(2, 2),
    }
}

pub const LEVEL_VACUUM: usize = 0;
pub const LEVEL_UP: usize = 1;
pub const LEVEL_DOWN: usize = 2;
pub const LEVEL_PAIR: usize = 3;

/// Qutrit mode dictionary:
///
/// ```text
/// |0> -> cos^2 r |0,0> + sin r cos r (|U,D> + |D,U>) + sin^2 r |P,P>
/// |U> -> cos r |U,0> + sin r |P,U>
/// |D> -> cos r |D,0> - sin r |P,D>
/// ```
pub fn qutrit_isometry(r: RindlerParameter) -> Isometry {
    let (s, c) = r.value().sin_cos();
    let at = |region_one: usize, region_two: usize| region_one * 4 + region_two;
    let mut v = ComplexMatrix::zeros(16, 3);
    v[(at(LEVEL_VACUUM, LEVEL_VACUUM), 0)] = real(c * c);
    v[(at(LEVEL_UP, LEVEL_DOWN), 0)] = real(s * c);
    v[(at(LEVEL_DOWN, LEVEL_UP), 0)] = real(s * c);
    v[(at(LEVEL_PAIR, LEVEL_PAIR), 0)] = real(s * s);
    v[(at(LEVEL_UP, LEVEL_VACUUM), 1)] = real(c);
    v[(at(LEVEL_PAIR, LEVEL_UP), 1)] = real(s);
    v[(at(LEVEL_DOWN, LEVEL_VACUUM), 2)] = real(c);
    v[(at(LEVEL_PAIR, LEVEL_DOWN), 2)] = real(-s);
    Isometry {
        matrix: v,
        in_dim: 3,
        out_dims: Dims::pair(4, 4),
    }
}

/// Accelerates one party and traces out its region-II mode.
///
/// Accelerating the qubit works on any `[2, d]` state and keeps its dims;
/// accelerating the qutrit needs a three-level qutrit and yields dims `[2, 4]`.
pub fn accelerate(rho: &DensityMatrix, which: Party, r: RindlerParameter) -> Result<DensityMatrix> {
    let dims = rho.dims().as_slice();
    if dims.len() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "acceleration needs a bipartite state, got dims {}",
            rho.dims()
        )));
    }
    let (lift, full_dims, traced) = match which {
        Party::Qubit => {
            if dims[0] != 2 {
                return Err(Error::DimensionMismatch(format!(
                    "qubit acceleration needs a 2-level first factor, got dims {}",
                    rho.dims()
                )));
            }
            let v = qubit_isometry(r);
            (
                kron(&v.matrix, &ComplexMatrix::identity(dims[1])),
                Dims::new(vec![2, 2, dims[1]])?,
                1,
            )
        }
        Party::Qutrit => {
            if dims[1] != 3 {
                return Err(Error::DimensionMismatch(format!(
                    "qutrit acceleration needs a 3-level second factor, got dims {}",
                    rho.dims()
                )));
            }
            let v = qutrit_isometry(r);
            (
                kron(&ComplexMatrix::identity(dims[0]), &v.matrix),
                Dims::new(vec![dims[0], 4, 4])?,
                2,
            )
        }
    };
    let lifted = lift.conjugate(rho.matrix());
    let reduced = partial_trace(&lifted, &full_dims, traced)?;
    let out_dims = match which {
        Party::Qubit => rho.dims().clone(),
        Party::Qutrit => Dims::pair(dims[0], 4),
    };
    DensityMatrix::from_parts(reduced, out_dims)
}

/// Which printed coefficient table a [`PrintedCoefficients`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientTable {
    /// `A1..A10`, qubit accelerated.
    Qubit,
    /// `B1..B16`, qutrit accelerated.
    Qutrit,
}

/// The closed-form coefficient tables evaluated literally, typos included.
#[derive(Clone, Debug, PartialEq)]
pub struct PrintedCoefficients {
    pub table: CoefficientTable,
    values: Vec<f64>,
}

impl PrintedCoefficients {
    /// One-based lookup, matching the printed labels.
    pub fn get(&self, label: usize) -> f64 {
        assert!(
            (1..=self.values.len()).contains(&label),
            "coefficient {label} does not exist"
        );
        self.values[label - 1]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn symbol(&self) -> char {
        match self.table {
            CoefficientTable::Qubit => 'A',
            CoefficientTable::Qutrit => 'B',
        }
    }
}

impl fmt::Display for PrintedCoefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}{}={}", self.symbol(), i + 1, v)?;
        }
        Ok(())
    }
}

pub fn printed_coefficients_qubit(mu: FamilyParameter, r: RindlerParameter) -> PrintedCoefficients {
    let m = mu.value();
    let (s, c) = r.value().sin_cos();
    let half = m / 2.0;
    let rest = (1.0 - 2.0 * m) / 2.0;
    let a12 = half * c * c;
    let a34 = half * c;
    let a56 = rest * c;
    PrintedCoefficients {
        table: CoefficientTable::Qubit,
        values: vec![
            a12,
            a12,
            a34,
            a34,
            a56,
            a56,
            rest * c * c,
            rest + half * s * s,
            half + rest * s * s,
            half * (1.0 + s * s),
        ],
    }
}

/// The sixteen qutrit-table formulas; the stray `p` in `B4` is read as `mu`.
pub fn printed_coefficients_qutrit(mu: FamilyParameter, r: RindlerParameter) -> PrintedCoefficients {
    let m = mu.value();
    let (s, c) = r.value().sin_cos();
    let s2 = (2.0 * r.value()).sin();
    let half = m / 2.0;
    let rest = (1.0 - 2.0 * m) / 2.0;
    let b9 = half * c.powi(3);
    let b10 = m / 4.0 * s2 * s;
    let b11 = rest * c * c;
    let b12 = (1.0 - 2.0 * m) / 4.0 * s2 * s;
    PrintedCoefficients {
        table: CoefficientTable::Qutrit,
        values: vec![
            half * c.powi(4),
            half * c * c * (1.0 + s * s),
            m / 8.0 * s2 * s2,
            s * s * (half * s * s + rest),
            rest * c.powi(4),
            c * c * (half + rest * s * s),
            (1.0 - 2.0 * m) / 8.0 * s2 * s2,
            s * s * (half + rest * s * s),
            b9,
            b10,
            b11,
            b12,
            b9,
            b10,
            b11,
            b12,
        ],
    }
}

// (label, |row>, |col>) with kets written as (qubit, qutrit level).
type Placement = (usize, (usize, usize), (usize, usize));

const QUBIT_PLACEMENT: [Placement; 10] = [
    (1, (0, 0), (0, 0)),
    (2, (0, 1), (0, 1)),
    (3, (0, 0), (1, 2)),
    (4, (1, 2), (0, 0)),
    (5, (1, 0), (0, 2)),
    (6, (0, 2), (1, 0)),
    (7, (0, 2), (0, 2)),
    (8, (1, 0), (1, 0)),
    (9, (1, 2), (1, 2)),
    (10, (1, 1), (1, 1)),
];

const P: usize = LEVEL_PAIR;

const QUTRIT_PLACEMENT: [Placement; 16] = [
    (1, (0, 0), (0, 0)),
    (2, (0, 1), (0, 1)),
    (3, (0, 2), (0, 2)),
    (4, (0, P), (0, P)),
    (5, (1, 0), (1, 0)),
    (6, (1, 1), (1, 1)),
    (7, (1, 2), (1, 2)),
    (8, (1, P), (1, P)),
    (9, (1, 2), (0, 0)),
    (10, (1, P), (0, 1)),
    (11, (0, 2), (1, 0)),
    (12, (0, P), (1, 1)),
    (13, (0, 0), (1, 2)),
    (14, (0, 1), (1, P)),
    (15, (1, 0), (0, 2)),
    (16, (1, 1), (0, P)),
];

fn assemble(coeffs: &PrintedCoefficients, placement: &[Placement], qutrit_dim: usize) -> ComplexMatrix {
    let n = 2 * qutrit_dim;
    let mut m = ComplexMatrix::zeros(n, n);
    for &(label, (ra, rb), (ca, cb)) in placement {
        m[(ra * qutrit_dim + rb, ca * qutrit_dim + cb)] += real(coeffs.get(label));
    }
    m
}

/// Places a printed table into its matrix: `[2, 3]` for the qubit table,
/// `[2, 4]` for the qutrit table.
pub fn assemble_printed_matrix(coeffs: &PrintedCoefficients) -> ComplexMatrix {
    match coeffs.table {
        CoefficientTable::Qubit => assemble(coeffs, &QUBIT_PLACEMENT, 3),
        CoefficientTable::Qutrit => assemble(coeffs, &QUTRIT_PLACEMENT, 4),
    }
}

fn ket_label(index: usize, qutrit_dim: usize) -> String {
    let qutrit = index % qutrit_dim;
    let level = if qutrit == LEVEL_PAIR {
        "P".to_string()
    } else {
        qutrit.to_string()
    };
    format!("{}{}", index / qutrit_dim, level)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscrepancyRow {
    pub row: usize,
    pub col: usize,
    /// e.g. `|02><10|`; the qutrit pair level prints as `P`.
    pub label: String,
    pub derived: f64,
    pub printed: f64,
    pub difference: f64,
}

/// Entrywise comparison of the isometry-derived accelerated state with the
/// printed closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscrepancyReport {
    pub which: Party,
    pub mu: f64,
    pub r: f64,
    pub rows: Vec<DiscrepancyRow>,
    pub derived_trace: f64,
    pub printed_trace: f64,
    pub max_difference: f64,
}

impl DiscrepancyReport {
    /// `derived trace - printed diagonal sum`.
    pub fn trace_gap(&self) -> f64 {
        self.derived_trace - self.printed_trace
    }

    pub fn is_consistent(&self, tol: f64) -> bool {
        self.max_difference <= tol
    }

    /// Rows whose difference exceeds `tol`.
    pub fn mismatches(&self, tol: f64) -> impl Iterator<Item = &DiscrepancyRow> {
        self.rows.iter().filter(move |row| row.difference > tol)
    }
}

impl fmt::Display for DiscrepancyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} accelerated, mu={}, r={}: derived trace {}, printed diagonal sum {}, gap {}",
            self.which,
            self.mu,
            self.r,
            self.derived_trace,
            self.printed_trace,
            self.trace_gap()
        )?;
        for row in &self.rows {
            writeln!(
                f,
                "  {:<12} derived {:>22} printed {:>22} |diff| {:e}",
                row.label, row.derived, row.printed, row.difference
            )?;
        }
        Ok(())
    }
}

pub const ENTRY_EPS: f64 = 1e-15;

pub fn discrepancy_report(
    mu: FamilyParameter,
    r: RindlerParameter,
    which: Party,
) -> Result<DiscrepancyReport> {
    let rho = crate::states::one_param_state(mu);
    let derived = accelerate(&rho, which, r)?;
    let (coeffs, qutrit_dim) = match which {
        Party::Qubit => (printed_coefficients_qubit(mu, r), 3),
        Party::Qutrit => (printed_coefficients_qutrit(mu, r), 4),
    };
    let printed = assemble_printed_matrix(&coeffs);
    let derived = derived.matrix();
    let n = printed.rows();
    let mut rows = Vec::new();
    let mut max_difference: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let (d, p) = (derived[(i, j)], printed[(i, j)]);
            if d.norm() <= ENTRY_EPS && p.norm() <= ENTRY_EPS {
                continue;
            }
            let difference = (d - p).norm();
            max_difference = max_difference.max(difference);
            rows.push(DiscrepancyRow {
                row: i,
                col: j,
                label: format!(
                    "|{}><{}|",
                    ket_label(i, qutrit_dim),
                    ket_label(j, qutrit_dim)
                ),
                derived: d.re,
                printed: p.re,
                difference,
            });
        }
    }
    Ok(DiscrepancyReport {
        which,
        mu: mu.value(),
        r: r.value(),
        rows,
        derived_trace: derived.trace().re,
        printed_trace: printed.trace().re,
        max_difference,
    })
}
