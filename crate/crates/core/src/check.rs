//! The self-verification suite behind `unruh-filter-lab check`.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::filters::{apply_filter, FilterMode, FilterSpec, PairPolicy};
use crate::measures::negativity;
use crate::numerics::{hermitian_eigen, ComplexMatrix};
use crate::rindler::{
    accelerate, discrepancy_report, qubit_isometry, qutrit_isometry, RindlerParameter,
};
use crate::states::{one_param_state, printed_one_param_matrix, validate_matrix, FamilyParameter, Party};
use crate::sweep::linspace;

pub const SEED: u64 = 0x5eed_2013;
pub const TABLE_TOL: f64 = 1e-12;
pub const DESK_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// A known inconsistency in the published closed forms, reproduced as expected.
    ExpectedDiscrepancy,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::ExpectedDiscrepancy => "EXPECTED-DISCREPANCY",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckLine {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckReport {
    pub lines: Vec<CheckLine>,
}

impl CheckReport {
    /// True unless some line failed.
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.status != Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&CheckLine> {
        self.lines.iter().find(|l| l.name == name)
    }

    fn push(&mut self, name: &'static str, ok: bool, detail: String) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.lines.push(CheckLine { name, status, detail });
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(f, "{:<20} {:<22} {}", line.name, line.status.to_string(), line.detail)?;
        }
        let failed = self.lines.iter().filter(|l| l.status == Status::Fail).count();
        write!(f, "{} checks, {failed} failed", self.lines.len())
    }
}

fn mu(x: f64) -> FamilyParameter {
    FamilyParameter::new(x).expect("in range")
}

fn rindler(x: f64) -> RindlerParameter {
    RindlerParameter::new(x).expect("in range")
}

fn qubit_table(report: &mut CheckReport) -> Result<()> {
    let mut worst: f64 = 0.0;
    for &m in &linspace(0.0, 0.5, 6) {
        for &r in &linspace(0.0, RindlerParameter::MAX, 6) {
            worst = worst.max(discrepancy_report(mu(m), rindler(r), Party::Qubit)?.max_difference);
        }
    }
    report.push(
        "qubit-table",
        worst <= TABLE_TOL,
        format!("6x6 grid, max |derived - printed| = {worst:e}"),
    );
    Ok(())
}

fn qutrit_table(report: &mut CheckReport) -> Result<()> {
    let rep = discrepancy_report(mu(0.3), rindler(0.0), Party::Qutrit)?;
    let gap = rep.trace_gap();
    let status = if (gap - 0.35).abs() <= TABLE_TOL && (rep.derived_trace - 1.0).abs() <= TABLE_TOL {
        Status::ExpectedDiscrepancy
    } else {
        Status::Fail
    };
    report.lines.push(CheckLine {
        name: "qutrit-table",
        status,
        detail: format!(
            "mu=0.3 r=0: derived trace {:.6}, printed diagonal sum {:.6}, gap {gap:.6}",
            rep.derived_trace, rep.printed_trace
        ),
    });

    let printed = validate_matrix(&printed_one_param_matrix(mu(0.3)));
    let ok = (printed.trace_deviation - 0.2).abs() <= TABLE_TOL;
    report.lines.push(CheckLine {
        name: "printed-family",
        status: if ok { Status::ExpectedDiscrepancy } else { Status::Fail },
        detail: format!(
            "mu=0.3: printed matrix trace deviation {:.6}, hermiticity deviation {:.6}",
            printed.trace_deviation, printed.hermiticity_deviation
        ),
    });
    Ok(())
}

fn isometries(report: &mut CheckReport, rng: &mut ChaCha8Rng) {
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let r = rindler(rng.gen_range(0.0..=RindlerParameter::MAX));
        worst = worst.max(qubit_isometry(r).defect()).max(qutrit_isometry(r).defect());
    }
    report.push(
        "isometry",
        worst <= TABLE_TOL,
        format!("50 random r, max |V^dag V - I| = {worst:e}"),
    );
}

fn random_filter(rng: &mut ChaCha8Rng) -> FilterSpec {
    let s = rng.gen_range(0.05..0.95);
    if rng.gen_bool(0.5) {
        FilterSpec::qubit(s).expect("in range")
    } else {
        let mode = if rng.gen_bool(0.5) { FilterMode::Postselect } else { FilterMode::Channel };
        let pair = if rng.gen_bool(0.5) { PairPolicy::Discard } else { PairPolicy::Keep };
        FilterSpec::qutrit(s, mode, pair).expect("in range")
    }
}

fn density_validity(report: &mut CheckReport, rng: &mut ChaCha8Rng) -> Result<()> {
    let mut failures = 0;
    let mut checked = 0;
    for _ in 0..50 {
        let m = mu(rng.gen_range(0.0..=0.5));
        let r = rindler(rng.gen_range(0.0..=RindlerParameter::MAX));
        for party in [Party::Qubit, Party::Qutrit] {
            let accelerated = accelerate(&one_param_state(m), party, r)?;
            let filtered = apply_filter(&accelerated, &random_filter(rng))?;
            for rho in [&accelerated, &filtered] {
                checked += 1;
                if !rho.validate().passes() {
                    failures += 1;
                }
            }
        }
    }
    report.push(
        "density-validity",
        failures == 0,
        format!("{checked} accelerated/filtered states, {failures} invalid"),
    );
    Ok(())
}

fn desk_values(report: &mut CheckReport) -> Result<()> {
    let unfiltered = |m: f64, party: Party, r: f64| -> Result<f64> {
        Ok(negativity(&accelerate(&one_param_state(mu(m)), party, rindler(r))?)?.value())
    };
    let mut cases: Vec<(String, f64, f64)> = vec![
        ("mu=0".into(), unfiltered(0.0, Party::Qubit, 0.0)?, 1.0),
        ("mu=0.5".into(), unfiltered(0.5, Party::Qubit, 0.0)?, 0.5),
        (
            "mu=0 qubit r=pi/4".into(),
            unfiltered(0.0, Party::Qubit, RindlerParameter::MAX)?,
            0.5,
        ),
    ];
    let half = one_param_state(mu(0.5));
    for q in [0.25, 0.49, 0.81] {
        for (mode, expected) in [
            (FilterMode::Postselect, 2.0 * f64::sqrt(q) / (3.0 - q)),
            (FilterMode::Channel, f64::sqrt(q) / 2.0),
        ] {
            let spec = FilterSpec::qutrit(q, mode, PairPolicy::Discard)?;
            let n = negativity(&apply_filter(&half, &spec)?)?.value();
            cases.push((format!("mu=0.5 Q={q} {mode}"), n, expected));
        }
    }
    let worst = cases.iter().map(|(_, got, want)| (got - want).abs()).fold(0.0, f64::max);
    let bad: Vec<&str> = cases
        .iter()
        .filter(|(_, got, want)| (got - want).abs() > DESK_TOL)
        .map(|(name, _, _)| name.as_str())
        .collect();
    let detail = if bad.is_empty() {
        format!("{} values, max error {worst:e}", cases.len())
    } else {
        format!("off: {}", bad.join(", "))
    };
    report.push("desk-values", bad.is_empty(), detail);
    Ok(())
}

fn identity_limits(report: &mut CheckReport) -> Result<()> {
    let rho = one_param_state(mu(0.3));
    let zero = rindler(0.0);
    let qubit = accelerate(&rho, Party::Qubit, zero)?.matrix().max_abs_diff(rho.matrix());
    let padded = ComplexMatrix::from_fn(8, 8, |i, j| {
        let (a, b, c, d) = (i / 4, i % 4, j / 4, j % 4);
        if b < 3 && d < 3 {
            rho.matrix()[(a * 3 + b, c * 3 + d)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let qutrit = accelerate(&rho, Party::Qutrit, zero)?.matrix().max_abs_diff(&padded);
    let kappa = apply_filter(&rho, &FilterSpec::qubit(0.5)?)?.matrix().max_abs_diff(rho.matrix());
    let worst = qubit.max(qutrit).max(kappa);
    report.push(
        "identity-limits",
        worst <= 1e-14,
        format!("r=0 qubit {qubit:e}, r=0 qutrit {qutrit:e}, kappa=1/2 {kappa:e}"),
    );
    Ok(())
}

fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    a.hermitian_part()
}

/// Largest `||m v - lambda v||` relative to `1 + ||m||_F`.
pub fn eigen_residual(m: &ComplexMatrix) -> Result<f64> {
    let eig = hermitian_eigen(m)?;
    let mv = m * &eig.vectors;
    let mut worst: f64 = 0.0;
    for (k, &lambda) in eig.values.iter().enumerate() {
        let mut sum = 0.0;
        for i in 0..m.rows() {
            sum += (mv[(i, k)] - eig.vectors[(i, k)] * lambda).norm_sqr();
        }
        worst = worst.max(sum.sqrt());
    }
    Ok(worst / (1.0 + m.frobenius_norm()))
}

fn jacobi(report: &mut CheckReport, rng: &mut ChaCha8Rng) -> Result<()> {
    let mut worst: f64 = 0.0;
    for n in [2, 3, 4, 6, 8, 12, 16] {
        for _ in 0..5 {
            worst = worst.max(eigen_residual(&random_hermitian(n, rng))?);
        }
    }
    report.push(
        "jacobi-residual",
        worst <= 1e-10,
        format!("35 random Hermitian matrices, max relative residual {worst:e}"),
    );
    Ok(())
}

/// Runs every check. An `Err` means a check could not even be evaluated.
pub fn run_checks() -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut report = CheckReport::default();
    qubit_table(&mut report)?;
    qutrit_table(&mut report)?;
    isometries(&mut report, &mut rng);
    identity_limits(&mut report)?;
    density_validity(&mut report, &mut rng)?;
    desk_values(&mut report)?;
    jacobi(&mut report, &mut rng)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_and_flags_the_qutrit_table() {
        let report = run_checks().unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.get("qutrit-table").unwrap().status, Status::ExpectedDiscrepancy);
        assert_eq!(report.get("qubit-table").unwrap().status, Status::Pass);
        assert!(report.to_string().contains("gap 0.350000"));
    }

    #[test]
    fn suite_is_deterministic() {
        assert_eq!(run_checks().unwrap(), run_checks().unwrap());
    }
}
