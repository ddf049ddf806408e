//! Family lookup by name with JSON parameters, as used by the command line.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::Value;

use super::*;
use crate::measures::QuantumState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyName {
    W,
    Ghz,
    WClass,
    Acin,
    GhzClass,
    GenW,
    WBarMix,
    Liu,
}

impl FamilyName {
    pub const ALL: [FamilyName; 8] = [
        Self::W,
        Self::Ghz,
        Self::WClass,
        Self::Acin,
        Self::GhzClass,
        Self::GenW,
        Self::WBarMix,
        Self::Liu,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::W => "w",
            Self::Ghz => "ghz",
            Self::WClass => "wclass",
            Self::Acin => "acin",
            Self::GhzClass => "ghzclass",
            Self::GenW => "genw",
            Self::WBarMix => "wbar-mix",
            Self::Liu => "liu",
        }
    }

    /// Parameter object used when none is given.
    pub fn default_params(&self) -> Value {
        let s = 1.0 / 3f64.sqrt();
        match self {
            Self::W | Self::Ghz => serde_json::json!({ "n": 3 }),
            Self::WClass => serde_json::json!({ "r": [0.0, s, s, s] }),
            Self::Acin => serde_json::json!({ "l": [s, 0.0, s, s, 0.0], "theta": 0.0 }),
            Self::GhzClass => serde_json::to_value(GhzClassParams::identity()).expect("plain data"),
            Self::GenW => serde_json::json!({ "p": 1.0, "a": [s, s, s] }),
            Self::WBarMix => serde_json::json!({ "p1": 0.5 }),
            Self::Liu => serde_json::json!({}),
        }
    }
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|f| f.as_str()).collect();
                Error::InvalidParameter(format!(
                    "unknown family '{s}'; expected one of: {}",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SizeArgs {
    #[serde(default = "three")]
    n: usize,
}

fn three() -> usize {
    3
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WClassArgs {
    r: [f64; 4],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AcinArgs {
    l: [f64; 5],
    #[serde(default)]
    theta: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Amplitude {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GenWArgs {
    p: f64,
    a: Vec<Amplitude>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MixArgs {
    p1: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NoArgs {}

fn parse<T: for<'de> Deserialize<'de>>(family: FamilyName, v: Value) -> Result<T> {
    serde_json::from_value(v)
        .map_err(|e| Error::InvalidParameter(format!("bad parameters for family '{family}': {e}")))
}

/// Builds a member of `family` from a JSON parameter object (defaults when
/// `params` is `None`).
pub fn build_named(family: FamilyName, params: Option<Value>) -> Result<QuantumState> {
    let v = params.unwrap_or_else(|| family.default_params());
    let pure = |psi: PureState| Ok(QuantumState::Pure(psi));
    match family {
        FamilyName::W => pure(w_state(parse::<SizeArgs>(family, v)?.n)?),
        FamilyName::Ghz => pure(ghz_state(parse::<SizeArgs>(family, v)?.n)?),
        FamilyName::WClass => {
            let a: WClassArgs = parse(family, v)?;
            pure(wclass_state(&WClassParams::new(a.r)?)?)
        }
        FamilyName::Acin => {
            let a: AcinArgs = parse(family, v)?;
            pure(acin_state(&AcinParams::new(a.l, a.theta)?)?)
        }
        FamilyName::GhzClass => {
            let a: GhzClassParams = parse(family, v)?;
            pure(ghzclass_state(&GhzClassParams::new(
                a.u, a.v, a.theta, a.phi,
            )?)?)
        }
        FamilyName::GenW => {
            let a: GenWArgs = parse(family, v)?;
            let amps =
                a.a.into_iter()
                    .map(|z| match z {
                        Amplitude::Real(x) => Complex64::new(x, 0.0),
                        Amplitude::Complex([re, im]) => Complex64::new(re, im),
                    })
                    .collect();
            pure(generalized_w_state(&GeneralizedWParams::new(a.p, amps)?)?)
        }
        FamilyName::WBarMix => {
            let a: MixArgs = parse(family, v)?;
            Ok(QuantumState::Mixed(wbar_mixture(a.p1)?))
        }
        FamilyName::Liu => {
            parse::<NoArgs>(family, v)?;
            pure(liu_state())
        }
    }
}
