//! Local diagonal filters on one party.
//!
//! The qubit filter is a single operator `diag(sqrt k, sqrt(1-k))` applied
//! with renormalization. The qutrit filter has two operators,
//!
//! ```text
//! F1 = |0><0| + sqrt(1-Q) |1><1| + sqrt(Q) |2><2|
//! F2 =          sqrt(Q)   |1><1| + sqrt(1-Q) |2><2|
//! ```
//!
//! used either together as a trace-preserving channel or as `F1` alone with
//! post-selection. On an accelerated qutrit the extra pair level `P` is
//! either annihilated (`discard`) or passed through by `F1` (`keep`).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::{kron, spectral_norm, ComplexMatrix};
use crate::rindler::LEVEL_PAIR;
use crate::states::{DensityMatrix, Party};

/// Success probabilities at or below this are treated as zero.
pub const MIN_SUCCESS_PROBABILITY: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FilterMode {
    Postselect,
    Channel,
}

impl FilterMode {
    pub fn name(self) -> &'static str {
        match self {
            FilterMode::Postselect => "postselect",
            FilterMode::Channel => "channel",
        }
    }
}

impl fmt::Display for FilterMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FilterMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "postselect" => Ok(FilterMode::Postselect),
            "channel" => Ok(FilterMode::Channel),
            other => Err(Error::InvalidConfig(format!(
                "unknown filter mode `{other}` (expected postselect or channel)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairPolicy {
    Discard,
    Keep,
}

impl PairPolicy {
    pub fn name(self) -> &'static str {
        match self {
            PairPolicy::Discard => "discard",
            PairPolicy::Keep => "keep",
        }
    }
}

impl fmt::Display for PairPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PairPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "discard" => Ok(PairPolicy::Discard),
            "keep" => Ok(PairPolicy::Keep),
            other => Err(Error::InvalidConfig(format!(
                "unknown pair policy `{other}` (expected discard or keep)"
            ))),
        }
    }
}

fn check_strength(name: &'static str, value: f64) -> Result<()> {
    if !(value > 0.0 && value < 1.0) {
        return Err(Error::OutOfRange {
            name,
            value,
            range: "(0, 1)",
        });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FilterSpec {
    pub target: Party,
    /// `kappa` for the qubit, `Q` for the qutrit; strictly inside `(0, 1)`.
    pub strength: f64,
    pub mode: FilterMode,
    /// Only consulted when the qutrit factor has four levels.
    pub pair_policy: PairPolicy,
}

impl FilterSpec {
    pub fn qubit(kappa: f64) -> Result<Self> {
        check_strength("kappa", kappa)?;
        Ok(Self {
            target: Party::Qubit,
            strength: kappa,
            mode: FilterMode::Postselect,
            pair_policy: PairPolicy::Discard,
        })
    }

    pub fn qutrit(q: f64, mode: FilterMode, pair_policy: PairPolicy) -> Result<Self> {
        check_strength("Q", q)?;
        Ok(Self {
            target: Party::Qutrit,
            strength: q,
            mode,
            pair_policy,
        })
    }

    /// Same filter at another strength.
    pub fn with_strength(&self, strength: f64) -> Result<Self> {
        match self.target {
            Party::Qubit => Self::qubit(strength),
            Party::Qutrit => Self::qutrit(strength, self.mode, self.pair_policy),
        }
    }

    pub fn kraus_set(&self, factor_dim: usize) -> Result<KrausSet> {
        match self.target {
            Party::Qubit => {
                if self.mode != FilterMode::Postselect {
                    return Err(Error::InvalidConfig(
                        "the qubit filter has a single operator and only supports postselect mode".into(),
                    ));
                }
                if factor_dim != 2 {
                    return Err(Error::DimensionMismatch(format!(
                        "qubit filter needs a 2-level factor, got {factor_dim}"
                    )));
                }
                qubit_filter(self.strength)
            }
            Party::Qutrit => qutrit_filter(self.strength, self.mode, self.pair_policy, factor_dim),
        }
    }
}

/// Ordered Kraus operators acting on a single tensor factor.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausSet {
    pub ops: Vec<ComplexMatrix>,
}

impl KrausSet {
    pub fn dim(&self) -> usize {
        self.ops.first().map_or(0, ComplexMatrix::rows)
    }

    /// `sum F^dag F`.
    pub fn completeness(&self) -> ComplexMatrix {
        let n = self.dim();
        self.ops
            .iter()
            .fold(ComplexMatrix::zeros(n, n), |acc, f| &acc + &(&f.adjoint() * f))
    }

    /// `max |sum F^dag F - I|`.
    pub fn completeness_defect(&self) -> f64 {
        self.completeness()
            .max_abs_diff(&ComplexMatrix::identity(self.dim()))
    }

    pub fn max_spectral_norm(&self) -> Result<f64> {
        self.ops
            .iter()
            .try_fold(0.0f64, |acc, f| Ok(acc.max(spectral_norm(f)?)))
    }
}

pub(crate) fn qubit_filter_ops(kappa: f64) -> KrausSet {
    KrausSet {
        ops: vec![ComplexMatrix::diag_real(&[kappa.sqrt(), (1.0 - kappa).sqrt()])],
    }
}

/// `diag(sqrt kappa, sqrt(1 - kappa))`, always used with post-selection.
pub fn qubit_filter(kappa: f64) -> Result<KrausSet> {
    check_strength("kappa", kappa)?;
    Ok(qubit_filter_ops(kappa))
}

/// No strength check, so the analytic endpoints `Q = 0, 1` stay reachable.
pub(crate) fn qutrit_filter_ops(
    q: f64,
    mode: FilterMode,
    pair_policy: PairPolicy,
    factor_dim: usize,
) -> Result<KrausSet> {
    let mut first = vec![1.0, (1.0 - q).sqrt(), q.sqrt()];
    let mut second = vec![0.0, q.sqrt(), (1.0 - q).sqrt()];
    match factor_dim {
        3 => {}
        4 => {
            debug_assert_eq!(first.len(), LEVEL_PAIR);
            first.push(match pair_policy {
                PairPolicy::Keep => 1.0,
                PairPolicy::Discard => 0.0,
            });
            second.push(0.0);
        }
        other => {
            return Err(Error::DimensionMismatch(format!(
                "qutrit filter acts on 3 or 4 levels, got {other}"
            )))
        }
    }
    let mut ops = vec![ComplexMatrix::diag_real(&first)];
    if mode == FilterMode::Channel {
        ops.push(ComplexMatrix::diag_real(&second));
    }
    Ok(KrausSet { ops })
}

pub fn qutrit_filter(
    q: f64,
    mode: FilterMode,
    pair_policy: PairPolicy,
    factor_dim: usize,
) -> Result<KrausSet> {
    check_strength("Q", q)?;
    qutrit_filter_ops(q, mode, pair_policy, factor_dim)
}

/// Filtered but not yet renormalized state.
#[derive(Clone, Debug)]
pub struct FilterOutcome {
    pub unnormalized: ComplexMatrix,
    /// `sum_j trace(G_j rho G_j^dag)`.
    pub success_probability: f64,
}

/// Applies a Kraus set to one factor of a bipartite state without renormalizing.
pub fn apply_kraus(rho: &DensityMatrix, kraus: &KrausSet, factor: usize) -> Result<FilterOutcome> {
    let dims = rho.dims().as_slice();
    if dims.len() != 2 || factor > 1 {
        return Err(Error::DimensionMismatch(format!(
            "filters act on one factor of a bipartite state, got dims {} and factor {factor}",
            rho.dims()
        )));
    }
    if dims[factor] != kraus.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}-level filter on a {}-level factor",
            kraus.dim(),
            dims[factor]
        )));
    }
    let other = ComplexMatrix::identity(dims[1 - factor]);
    let n = rho.dims().total();
    let mut unnormalized = ComplexMatrix::zeros(n, n);
    for op in &kraus.ops {
        let lifted = if factor == 0 {
            kron(op, &other)
        } else {
            kron(&other, op)
        };
        unnormalized = &unnormalized + &lifted.conjugate(rho.matrix());
    }
    let success_probability = unnormalized.trace().re;
    Ok(FilterOutcome {
        unnormalized,
        success_probability,
    })
}

pub fn filter_outcome(rho: &DensityMatrix, spec: &FilterSpec) -> Result<FilterOutcome> {
    let factor = spec.target.factor();
    let factor_dim = rho.dims().get(factor).ok_or_else(|| {
        Error::DimensionMismatch(format!("no factor {factor} in dims {}", rho.dims()))
    })?;
    let kraus = spec.kraus_set(factor_dim)?;
    apply_kraus(rho, &kraus, factor)
}

/// Filters and renormalizes by the success probability.
pub fn apply_filter(rho: &DensityMatrix, spec: &FilterSpec) -> Result<DensityMatrix> {
    let outcome = filter_outcome(rho, spec)?;
    if outcome.success_probability.is_nan() || outcome.success_probability <= MIN_SUCCESS_PROBABILITY {
        return Err(Error::FilteredToZero {
            probability: outcome.success_probability,
        });
    }
    DensityMatrix::from_parts(
        outcome
            .unnormalized
            .scale_real(1.0 / outcome.success_probability),
        rho.dims().clone(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::negativity;
    use crate::numerics::Dims;
    use crate::states::{one_param_state, FamilyParameter};
    use approx::assert_abs_diff_eq;

    fn family(mu: f64) -> DensityMatrix {
        one_param_state(FamilyParameter::new(mu).unwrap())
    }

    #[test]
    fn qubit_filter_shapes() {
        let f = qubit_filter(0.5).unwrap();
        assert!(f.ops[0].max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5f64.sqrt())) < 1e-16);
        assert_abs_diff_eq!(f.max_spectral_norm().unwrap(), 0.5f64.sqrt(), epsilon = 1e-15);

        let f = qubit_filter(0.9).unwrap();
        assert_abs_diff_eq!(f.ops[0][(0, 0)].re, 0.9486832980505138, epsilon = 1e-15);
        assert_abs_diff_eq!(f.ops[0][(1, 1)].re, 0.31622776601683794, epsilon = 1e-15);
        for k in [0.01, 0.3, 0.5, 0.77, 0.99] {
            assert!(qubit_filter(k).unwrap().max_spectral_norm().unwrap() < 1.0);
        }
    }

    #[test]
    fn strength_endpoints_are_rejected() {
        for bad in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(qubit_filter(bad).is_err());
            assert!(qutrit_filter(bad, FilterMode::Channel, PairPolicy::Discard, 3).is_err());
            assert!(FilterSpec::qubit(bad).is_err());
        }
    }

    #[test]
    fn qutrit_channel_is_complete_on_three_levels() {
        for q in [0.1, 0.25, 0.5, 0.9] {
            let k = qutrit_filter(q, FilterMode::Channel, PairPolicy::Discard, 3).unwrap();
            assert_eq!(k.ops.len(), 2);
            assert!(k.completeness_defect() < 1e-15);
            let keep = qutrit_filter(q, FilterMode::Channel, PairPolicy::Keep, 4).unwrap();
            assert!(keep.completeness_defect() < 1e-15);
            let discard = qutrit_filter(q, FilterMode::Channel, PairPolicy::Discard, 4).unwrap();
            assert_eq!(discard.completeness()[(3, 3)].re, 0.0);
        }
    }

    #[test]
    fn qutrit_boundary_limit() {
        let k = qutrit_filter_ops(1.0, FilterMode::Channel, PairPolicy::Discard, 3).unwrap();
        assert_eq!(k.ops[0], ComplexMatrix::diag_real(&[1.0, 0.0, 1.0]));
        assert_eq!(k.ops[1], ComplexMatrix::diag_real(&[0.0, 1.0, 0.0]));
        assert!(qutrit_filter_ops(0.5, FilterMode::Channel, PairPolicy::Keep, 5).is_err());
    }

    #[test]
    fn qutrit_postselect_is_first_operator_only() {
        let k = qutrit_filter(0.25, FilterMode::Postselect, PairPolicy::Discard, 3).unwrap();
        assert_eq!(k.ops.len(), 1);
        assert!(k.ops[0].max_abs_diff(&ComplexMatrix::diag_real(&[1.0, 0.75f64.sqrt(), 0.5])) < 1e-16);
        assert!(k.max_spectral_norm().unwrap() <= 1.0);
    }

    #[test]
    fn half_strength_qubit_filter_is_identity() {
        let rho = family(0.3);
        let out = apply_filter(&rho, &FilterSpec::qubit(0.5).unwrap()).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
        let twice = apply_filter(&out, &FilterSpec::qubit(0.5).unwrap()).unwrap();
        assert!(twice.matrix().max_abs_diff(out.matrix()) < 1e-15);
    }

    #[test]
    fn qutrit_channel_on_mu_half() {
        let rho = family(0.5);
        for q in [0.25, 0.49, 0.81] {
            let spec = FilterSpec::qutrit(q, FilterMode::Channel, PairPolicy::Discard).unwrap();
            let outcome = filter_outcome(&rho, &spec).unwrap();
            assert_abs_diff_eq!(outcome.success_probability, 1.0, epsilon = 1e-15);
            let out = apply_filter(&rho, &spec).unwrap();
            for i in 0..6 {
                assert_abs_diff_eq!(out.matrix()[(i, i)].re, rho.matrix()[(i, i)].re, epsilon = 1e-15);
            }
            assert_abs_diff_eq!(out.matrix()[(0, 5)].re, 0.25 * q.sqrt(), epsilon = 1e-15);
            assert_abs_diff_eq!(negativity(&out).unwrap().value(), q.sqrt() / 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn qutrit_postselect_on_mu_half() {
        let rho = family(0.5);
        for q in [0.25, 0.49, 0.81] {
            let spec = FilterSpec::qutrit(q, FilterMode::Postselect, PairPolicy::Discard).unwrap();
            let outcome = filter_outcome(&rho, &spec).unwrap();
            assert_abs_diff_eq!(outcome.success_probability, (3.0 - q) / 4.0, epsilon = 1e-15);
            let n = negativity(&apply_filter(&rho, &spec).unwrap()).unwrap().value();
            assert_abs_diff_eq!(n, 2.0 * q.sqrt() / (3.0 - q), epsilon = 1e-12);
        }
        let spec = FilterSpec::qutrit(0.81, FilterMode::Postselect, PairPolicy::Discard).unwrap();
        let n = negativity(&apply_filter(&rho, &spec).unwrap()).unwrap().value();
        assert!(n > 0.8219 && n > negativity(&rho).unwrap().value());
    }

    #[test]
    fn filtered_to_zero_is_an_error() {
        // Only the pair level is populated and `discard` removes it.
        let mut m = ComplexMatrix::zeros(8, 8);
        m[(3, 3)] = crate::numerics::ONE;
        let rho = DensityMatrix::new(m, Dims::pair(2, 4)).unwrap();
        let spec = FilterSpec::qutrit(0.5, FilterMode::Postselect, PairPolicy::Discard).unwrap();
        assert!(matches!(apply_filter(&rho, &spec), Err(Error::FilteredToZero { .. })));
        let keep = FilterSpec::qutrit(0.5, FilterMode::Postselect, PairPolicy::Keep).unwrap();
        assert!(apply_filter(&rho, &keep).is_ok());
    }

    #[test]
    fn mismatched_targets_are_rejected() {
        let rho = family(0.2);
        let mut spec = FilterSpec::qubit(0.3).unwrap();
        spec.mode = FilterMode::Channel;
        assert!(matches!(apply_filter(&rho, &spec), Err(Error::InvalidConfig(_))));
        let k = qubit_filter(0.3).unwrap();
        assert!(apply_kraus(&rho, &k, 1).is_err());
    }

    #[test]
    fn parse_enums() {
        assert_eq!("channel".parse::<FilterMode>().unwrap(), FilterMode::Channel);
        assert_eq!("keep".parse::<PairPolicy>().unwrap(), PairPolicy::Keep);
        assert!("both".parse::<PairPolicy>().is_err());
    }
}
