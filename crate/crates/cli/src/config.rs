//! Run configuration shared by flags and `--config` files.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use intcheb::bounds::{ExponentConvention, DEFAULT_THRESHOLD};
use intcheb::exact::DEFAULT_MAX_DEGREE;
use intcheb::leja::DEFAULT_GRID_DENSITY;
use intcheb::{IntPoly, IntervalUnion, RationalPoint};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Equilibrium,
    Leja,
    BoundUpper,
    BoundLower,
    Sweep,
    Region,
    Exact,
    Lemniscate,
    Construct,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Where capacities and gaps come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Closed form when the weight is `z^a |4z-1|^b` on `[0, 1/4]`, Leja otherwise.
    #[default]
    Auto,
    ClosedForm,
    Leja,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveKind {
    #[default]
    Upper,
    Lower,
}

/// A fixed exponent or the sweep wildcard `*`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Fixed(f64),
    Swept,
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Exponent::Fixed(v) => s.serialize_f64(*v),
            Exponent::Swept => s.serialize_str("*"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Exponent::Fixed(v)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl FromStr for Exponent {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "*" {
            return Ok(Exponent::Swept);
        }
        intcheb::polycore::parse_real::<f64>(s)
            .map(Exponent::Fixed)
            .map_err(|_| format!("exponent {s:?} is neither a number nor '*'"))
    }
}

/// One weight factor `poly:exponent`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorArg {
    pub poly: IntPoly,
    pub exponent: Exponent,
}

impl fmt::Display for FactorArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exponent {
            Exponent::Fixed(v) => write!(f, "{}:{v}", self.poly),
            Exponent::Swept => write!(f, "{}:*", self.poly),
        }
    }
}

/// Parses `POLY:EXP[,POLY:EXP...]`. Coefficient-list polynomials contain
/// commas themselves, so pieces are joined until one carries the `:`.
pub fn parse_factors(s: &str) -> Result<Vec<FactorArg>, String> {
    let mut out = Vec::new();
    let mut pending: Vec<&str> = Vec::new();
    for piece in s.split([',', ';']) {
        pending.push(piece);
        if let Some((_, _)) = piece.split_once(':') {
            let joined = pending.join(",");
            pending.clear();
            let (p, e) = joined.rsplit_once(':').unwrap();
            let poly: IntPoly = p.trim().parse().map_err(|e: intcheb::Error| format!("factor {p:?}: {e}"))?;
            out.push(FactorArg { poly, exponent: e.parse()? });
        }
    }
    if pending.iter().any(|p| !p.trim().is_empty()) {
        return Err(format!("factor {:?} has no ':EXPONENT' suffix", pending.join(",")));
    }
    Ok(out)
}

mod text_points {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[RationalPoint], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|z| z.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<RationalPoint>, D::Error> {
        Vec::<String>::deserialize(d)?.iter().map(|t| t.parse().map_err(serde::de::Error::custom)).collect()
    }
}

pub fn parse_points(s: &str) -> Result<Vec<RationalPoint>, String> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(|t| t.parse().map_err(|e: intcheb::Error| e.to_string())).collect()
}

fn quarter() -> IntervalUnion<f64> {
    IntervalUnion::interval(0.0, 0.25).unwrap()
}

/// Every input of one run. Fields irrelevant to the command are carried but unused.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default = "quarter")]
    pub domain: IntervalUnion<f64>,
    #[serde(default)]
    pub factors: Vec<FactorArg>,
    /// Meaning of swept exponents; fixed exponents are always literal.
    #[serde(default = "default_convention")]
    pub convention: ExponentConvention,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub alpha1: Option<f64>,
    #[serde(default)]
    pub alpha2: Option<f64>,
    #[serde(default = "default_step")]
    pub step: f64,
    /// Enables the coarse-to-fine sweep.
    #[serde(default)]
    pub coarse_step: Option<f64>,
    #[serde(default)]
    pub objective: ObjectiveKind,
    #[serde(default = "default_leja_length")]
    pub leja_length: usize,
    #[serde(default = "default_grid_density")]
    pub grid_density: usize,
    /// Empty means: the rational roots of the linear factors.
    #[serde(default, with = "text_points")]
    pub zetas: Vec<RationalPoint>,
    #[serde(default = "default_m", rename = "M")]
    pub m: f64,
    /// Flood-fill seed for `region`; exhaustive when absent.
    #[serde(default)]
    pub seed: Option<Vec<f64>>,
    /// Largest degree for `exact`, degree for `construct`.
    #[serde(default)]
    pub degree: Option<usize>,
    #[serde(default = "default_max_degree")]
    pub max_degree: usize,
    #[serde(default)]
    pub poly: Option<IntPoly>,
    #[serde(default)]
    pub r: Option<f64>,
    #[serde(default)]
    pub irreducible: bool,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
}

fn default_convention() -> ExponentConvention {
    ExponentConvention::UnitInterval
}
fn default_step() -> f64 {
    0.002
}
fn default_leja_length() -> usize {
    2000
}
fn default_grid_density() -> usize {
    DEFAULT_GRID_DENSITY
}
fn default_m() -> f64 {
    DEFAULT_THRESHOLD
}
fn default_max_degree() -> usize {
    DEFAULT_MAX_DEGREE
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        serde_json::from_value(serde_json::json!({ "command": command })).expect("defaults deserialize")
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("config: {e}"))
    }

    pub fn swept(&self) -> Vec<IntPoly> {
        self.factors.iter().filter(|f| f.exponent == Exponent::Swept).map(|f| f.poly.clone()).collect()
    }

    pub fn pinned(&self) -> Vec<(IntPoly, f64)> {
        self.factors
            .iter()
            .filter_map(|f| match f.exponent {
                Exponent::Fixed(v) => Some((f.poly.clone(), v)),
                Exponent::Swept => None,
            })
            .collect()
    }

    /// Fills derived defaults and checks every precondition the command relies on.
    pub fn resolve(mut self) -> Result<Self, String> {
        use Command::*;
        if self.format.is_none() {
            self.format = Some(if self.command == Region { Format::Csv } else { Format::Json });
        }
        let needs_zetas = matches!(self.command, BoundLower | Region)
            || (self.command == Sweep && self.objective == ObjectiveKind::Lower);
        if self.zetas.is_empty() && self.command == Equilibrium {
            self.zetas = vec![RationalPoint::zero(), RationalPoint::real(1, 4).unwrap()];
        }
        if self.zetas.is_empty() && needs_zetas {
            self.zetas = self.linear_roots();
            if self.zetas.is_empty() {
                return Err("--zetas is required: no linear factor supplies a rational root".into());
            }
        }
        if !(self.step > 0.0 && self.step < 1.0) {
            return Err(format!("--step {} must lie in (0, 1)", self.step));
        }
        if let Some(c) = self.coarse_step {
            if !(c >= self.step && c < 1.0) {
                return Err(format!("--coarse-step {c} must lie in [step, 1)"));
            }
        }
        if self.leja_length < 3 {
            return Err(format!("--leja-length {} must be at least 3", self.leja_length));
        }
        if self.grid_density < 10 {
            return Err(format!("--grid-density {} must be at least 10", self.grid_density));
        }
        if !(self.m > 0.0 && self.m.is_finite()) {
            return Err(format!("--m {} must be positive", self.m));
        }
        for f in &self.factors {
            if f.poly.degree().unwrap_or(0) == 0 {
                return Err(format!("factor {f}: polynomial must be nonconstant"));
            }
            if let Exponent::Fixed(v) = f.exponent {
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(format!("factor {f}: exponent must be a nonnegative number"));
                }
            }
        }
        let swept = self.swept().len();
        match self.command {
            Equilibrium => {
                let (a1, a2) = (self.alpha1.ok_or("--alpha1 is required")?, self.alpha2.ok_or("--alpha2 is required")?);
                if !(a1 >= 0.0 && a2 >= 0.0 && 2.0 * a1 + a2 < 1.0) {
                    return Err(format!("--alpha1 {a1} --alpha2 {a2}: need a1, a2 >= 0 and 2 a1 + a2 < 1"));
                }
            }
            Leja | Construct => {
                if swept > 0 {
                    return Err(format!("{:?} needs fixed exponents, not '*'", self.command).to_lowercase());
                }
            }
            Sweep | Region => {
                if swept == 0 {
                    return Err("at least one factor must have the '*' exponent".into());
                }
            }
            BoundUpper | BoundLower | Exact => {}
            Lemniscate => {
                self.poly.as_ref().ok_or("--poly is required")?;
                let r = self.r.ok_or("--r is required")?;
                if !(0.0..1.0).contains(&r) {
                    return Err(format!("--r {r} must lie in [0, 1)"));
                }
            }
        }
        if self.command == Region {
            if let Some(s) = &self.seed {
                if s.len() != swept {
                    return Err(format!("--seed has {} values for {swept} swept factors", s.len()));
                }
            }
        }
        if matches!(self.command, Exact | Construct) {
            let n = self.degree.ok_or("--degree is required")?;
            if n == 0 {
                return Err("--degree must be at least 1".into());
            }
            if self.command == Exact && n > self.max_degree {
                return Err(format!("--degree {n} exceeds --max-degree {}", self.max_degree));
            }
            if self.command == Exact && self.domain.intervals().len() != 1 {
                return Err("exact search needs a single interval domain".into());
            }
        }
        Ok(self)
    }

    /// `p/q` for every factor `q z - p` (up to sign).
    fn linear_roots(&self) -> Vec<RationalPoint> {
        let mut out: Vec<RationalPoint> = Vec::new();
        for f in &self.factors {
            if f.poly.degree() != Some(1) {
                continue;
            }
            let (c0, c1) = (f.poly.coeff(0), f.poly.coeff(1));
            let (Ok(p), Ok(q)): (Result<i64, _>, Result<i64, _>) = ((-c0).try_into(), c1.try_into()) else {
                continue;
            };
            if let Ok(z) = RationalPoint::real(p, q) {
                if !out.contains(&z) {
                    out.push(z);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn factor_lists() {
        let f = parse_factors("z:*,4z-1:0.25").unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].exponent, Exponent::Swept);
        assert_eq!(f[1].exponent, Exponent::Fixed(0.25));
        let g = parse_factors("-1,4:*;0,1:1/8").unwrap();
        assert_eq!(g[0].poly, "4z-1".parse().unwrap());
        assert_eq!(g[1].exponent, Exponent::Fixed(0.125));
        assert!(parse_factors("z").is_err());
        assert!(parse_factors("z:x").is_err());
    }

    #[test]
    fn default_zetas_from_linear_factors() {
        let mut c = RunConfig::new(Command::Region);
        c.factors = parse_factors("z:*,4z-1:*,5z-1:*,29z^2-11z+1:0.01").unwrap();
        let c = c.resolve().unwrap();
        let z: Vec<String> = c.zetas.iter().map(|z| z.to_string()).collect();
        assert_eq!(z, ["0", "1/4", "1/5"]);
        assert_eq!(c.format, Some(Format::Csv));
    }

    fn config_strategy() -> impl Strategy<Value = RunConfig> {
        let cmds = prop_oneof![
            Just(Command::Equilibrium),
            Just(Command::Leja),
            Just(Command::BoundUpper),
            Just(Command::BoundLower),
            Just(Command::Sweep),
            Just(Command::Region),
            Just(Command::Exact),
            Just(Command::Lemniscate),
            Just(Command::Construct),
        ];
        let factor = (prop::collection::vec(-9i64..10, 2..4), prop::option::of(0.0f64..1.0)).prop_map(|(c, e)| FactorArg {
            poly: IntPoly::from_i64s(&c),
            exponent: e.map_or(Exponent::Swept, Exponent::Fixed),
        });
        (
            cmds,
            prop::collection::vec(factor, 0..4),
            (0.0f64..1.0, 1e-4f64..0.5),
            prop::option::of(0.0f64..0.5),
            prop::collection::vec((-5i64..6, 1i64..9), 0..4),
            (3usize..5000, prop::option::of(1usize..12), any::<bool>()),
            prop::option::of(prop::collection::vec(0.0f64..1.0, 1..4)),
        )
            .prop_map(|(command, factors, (lo, width), a1, pts, (len, deg, irr), seed)| {
                let mut c = RunConfig::new(command);
                c.domain = IntervalUnion::interval(lo, lo + width).unwrap();
                c.factors = factors;
                c.alpha1 = a1;
                c.zetas = pts.into_iter().map(|(p, q)| RationalPoint::real(p, q).unwrap()).collect();
                c.leja_length = len;
                c.degree = deg;
                c.irreducible = irr;
                c.seed = seed;
                c.format = Some(if irr { Format::Csv } else { Format::Json });
                c
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]
        #[test]
        fn config_round_trips(c in config_strategy()) {
            let text = serde_json::to_string(&c).unwrap();
            let back = RunConfig::from_json(&text).unwrap();
            prop_assert_eq!(&back, &c);
            prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
        }
    }
}
