use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::Value;

use super::nelder_mead::{nelder_mead_max, NelderMeadOptions, NelderMeadOutcome};
use super::{Objective, SearchResult, TracePoint};
use crate::error::{Error, Result};
use crate::families::{
    acin_state, acin_state_raw, generalized_w_state, sampling, wclass_state, AcinParams,
    GeneralizedWParams, WClassParams,
};
use crate::io::PureStateFile;
use crate::linalg::{PureState, RandomStream};

pub const DEFAULT_STARTS: usize = 32;

/// Families searched by [`optimize_family`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimizeFamily {
    Acin,
    WClass,
    GenW,
}

impl OptimizeFamily {
    pub const ALL: [OptimizeFamily; 3] = [Self::Acin, Self::WClass, Self::GenW];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Acin => "acin",
            Self::WClass => "wclass",
            Self::GenW => "genw",
        }
    }

    fn check(&self, obj: &Objective) -> Result<()> {
        match self {
            Self::Acin | Self::WClass if obj.n_qubits != 3 => {
                Err(Error::InvalidParameter(format!(
                    "family '{self}' is three-qubit but objective '{}' asks for {} qubits",
                    obj.name, obj.n_qubits
                )))
            }
            _ => Ok(()),
        }
    }

    fn start(&self, s: &mut RandomStream, n: usize) -> Result<Vec<f64>> {
        Ok(match self {
            Self::Acin => {
                let p = sampling::acin(s);
                let mut x = p.l.to_vec();
                x.push(p.theta);
                x
            }
            Self::WClass => sampling::wclass(s).r.to_vec(),
            Self::GenW => {
                let p = sampling::generalized_w(s, n)?;
                std::iter::once(p.p)
                    .chain(p.a.iter().map(|z| z.norm()))
                    .collect()
            }
        })
    }

    fn state(&self, x: &[f64]) -> Result<PureState> {
        match self {
            Self::Acin => acin_state(&AcinParams::project(x)?),
            Self::WClass => wclass_state(&WClassParams::project(x)?),
            Self::GenW => generalized_w_state(&GeneralizedWParams::project(x)?),
        }
    }

    fn params_json(&self, x: &[f64]) -> Result<Value> {
        let v = match self {
            Self::Acin => serde_json::to_value(AcinParams::project(x)?),
            Self::WClass => serde_json::to_value(WClassParams::project(x)?),
            Self::GenW => {
                let p = GeneralizedWParams::project(x)?;
                let a: Vec<f64> = p.a.iter().map(|z| z.re).collect();
                Ok(serde_json::json!({ "p": p.p, "a": a }))
            }
        };
        Ok(v?)
    }
}

impl fmt::Display for OptimizeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OptimizeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "family '{s}' cannot be optimized; expected one of: acin, wclass, genw"
                ))
            })
    }
}

/// Multistart Nelder–Mead maximization of `obj` over a family's parameters.
///
/// Raw coordinates are projected onto the family's constraint surface before
/// every evaluation (absolute values normalized to unit length, `θ` wrapped
/// into `[0, π)`, `p` clamped to `[0, 1]`). Starts run in parallel; the best
/// is the first start index reaching the maximum.
pub fn optimize_family(
    obj: Objective,
    family: OptimizeFamily,
    starts: usize,
    seed: u64,
) -> Result<SearchResult> {
    if starts == 0 {
        return Err(Error::InvalidParameter("starts must be at least 1".into()));
    }
    family.check(&obj)?;
    let n = obj.n_qubits;
    let opts = NelderMeadOptions::default();
    let f = |x: &[f64]| obj.evaluate(&family.state(x)?);
    let outcomes: Vec<Result<NelderMeadOutcome>> = (0..starts as u64)
        .into_par_iter()
        .map(|k| {
            let x0 = family.start(&mut RandomStream::new(seed, k), n)?;
            nelder_mead_max(&f, &x0, &opts)
        })
        .collect();
    let outcomes: Vec<NelderMeadOutcome> = outcomes.into_iter().collect::<Result<_>>()?;

    let mut best = 0;
    let mut trace = Vec::with_capacity(starts);
    for (k, o) in outcomes.iter().enumerate() {
        if o.value > outcomes[best].value {
            best = k;
        }
        trace.push(TracePoint {
            iteration: k as u64,
            best: outcomes[best].value,
        });
    }
    let winner = &outcomes[best];
    let state = family.state(&winner.x)?;
    Ok(SearchResult {
        objective: obj.name,
        n_qubits: n,
        best_value: winner.value,
        best_params: Some(family.params_json(&winner.x)?),
        best_state: PureStateFile::from(&state),
        evaluations: outcomes.iter().map(|o| o.evaluations).sum(),
        seed,
        trace,
        histogram: None,
        start_best: outcomes.iter().map(|o| o.start_value).reduce(f64::max),
    })
}

/// Norm of the central-difference gradient of `obj` at `params`, projected
/// onto the tangent space of `Σ l_i² = 1` (the `θ` component is kept as is).
///
/// Perturbed coefficients may leave the constraint surface or turn negative;
/// the perturbed vector is renormalized before evaluation.
pub fn stationarity_check(params: &AcinParams, obj: Objective, step: f64) -> Result<f64> {
    if !(1e-7..=1e-3).contains(&step) {
        return Err(Error::InvalidParameter(format!(
            "step {step} outside [1e-7, 1e-3]"
        )));
    }
    if obj.n_qubits != 3 {
        return Err(Error::WrongSystemSize {
            expected: 3,
            found: obj.n_qubits,
        });
    }
    let f = |l: &[f64; 5], theta: f64| obj.evaluate(&acin_state_raw(l, theta)?);
    let mut grad = [0.0; 6];
    for (i, g) in grad.iter_mut().enumerate() {
        let (mut lp, mut lm) = (params.l, params.l);
        let (mut tp, mut tm) = (params.theta, params.theta);
        if i < 5 {
            lp[i] += step;
            lm[i] -= step;
        } else {
            tp += step;
            tm -= step;
        }
        *g = (f(&lp, tp)? - f(&lm, tm)?) / (2.0 * step);
    }
    let radial: f64 = grad[..5].iter().zip(&params.l).map(|(g, l)| g * l).sum();
    let tangent: f64 = grad[..5]
        .iter()
        .zip(&params.l)
        .map(|(g, l)| (g - radial * l).powi(2))
        .sum();
    Ok((tangent + grad[5] * grad[5]).sqrt())
}
