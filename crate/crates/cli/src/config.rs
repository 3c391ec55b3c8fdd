//! Run configuration: one JSON document, overridable from the command line.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use hyperfund::kernels::{MassRegime, OperatorFamily};
use hyperfund::quadrature::QuadratureSpec;
use hyperfund::tails::{TLinConfig, TLinOptions};
use hyperfund::wavecore::{Profile, SourceFamily};
use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Solve,
    Identities,
    Residual,
    Tail,
    Tlin,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<CommandKind>,
    pub family: FamilySpec,
    pub data: DataSpec,
    pub grid: GridSpec,
    pub quad: QuadratureSpec,
    pub identities: IdentitySpec,
    pub residual: ResidualSpec,
    pub tlin: TlinSpec,
    pub output: OutputSpec,
    /// Worker threads; HYPERFUND_THREADS overrides, default all cores.
    #[serde(skip_serializing)]
    pub threads: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FamilySpec {
    pub name: String,
    /// Klein-Gordon mass.
    pub m: f64,
    /// Tricomi exponent.
    pub k: f64,
    /// Einstein-de Sitter index.
    pub index: u32,
    /// de Sitter Klein-Gordon mass and regime.
    pub mass: f64,
    pub regime: MassRegime,
}

impl Default for FamilySpec {
    fn default() -> Self {
        Self {
            name: "desitter".into(),
            m: 1.0,
            k: 1.0,
            index: 1,
            mass: 1.0,
            regime: MassRegime::Large,
        }
    }
}

/// Accepted family names, first one canonical.
pub const FAMILY_NAMES: &[&str] = &[
    "kg-real",
    "kg-imag",
    "tricomi",
    "desitter",
    "anti-desitter",
    "edes",
    "desitter-kg",
];

impl FamilySpec {
    pub fn resolve(&self) -> Result<OperatorFamily, ConfigError> {
        let f = match self.name.as_str() {
            "kg-real" | "klein-gordon" => OperatorFamily::KleinGordonReal { m: self.m },
            "kg-imag" => OperatorFamily::KleinGordonImag { m: self.m },
            "tricomi" => OperatorFamily::Tricomi { k: self.k },
            "desitter" | "de-sitter" => OperatorFamily::DeSitterWave,
            "anti-desitter" | "ads" => OperatorFamily::AntiDeSitterWave,
            "edes" | "einstein-de-sitter" => OperatorFamily::EinsteinDeSitter { m: self.index },
            "desitter-kg" => OperatorFamily::DeSitterKg {
                mass: self.mass,
                regime: self.regime,
            },
            other => {
                return Err(ConfigError::new(
                    "family.name",
                    format!("unknown family `{other}`, expected one of {}", FAMILY_NAMES.join(", ")),
                ))
            }
        };
        f.validate().map_err(|e| ConfigError::from_core("family", e))?;
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceSpec {
    Constant { value: f64 },
    TimePower { power: i32 },
    SinT,
    /// e^{-((x - center)/width)²}, constant in time.
    Gaussian { center: f64, width: f64 },
    /// e^{-((x - center)/width)²} (1 + t).
    Bump { center: f64, width: f64 },
}

impl FromStr for SourceSpec {
    type Err = String;

    /// Shorthands: zero, const<v>, t, t<p>, sin_t, gaussian, bump.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        Ok(match s {
            "zero" => SourceSpec::Constant { value: 0.0 },
            "t" => SourceSpec::TimePower { power: 1 },
            "sin_t" | "sin" => SourceSpec::SinT,
            "gaussian" => SourceSpec::Gaussian { center: 0.0, width: 0.5 },
            "bump" => SourceSpec::Bump { center: 0.0, width: 0.5 },
            _ => {
                if let Some(v) = s.strip_prefix("const") {
                    SourceSpec::Constant {
                        value: v.parse().map_err(|_| format!("bad constant in `{s}`"))?,
                    }
                } else if let Some(p) = s.strip_prefix('t') {
                    SourceSpec::TimePower {
                        power: p.parse().map_err(|_| format!("bad power in `{s}`"))?,
                    }
                } else {
                    return Err(format!("unknown source `{s}`"));
                }
            }
        })
    }
}

impl SourceSpec {
    pub fn build(&self) -> Result<SourceFamily, ConfigError> {
        let width_ok = |w: f64| {
            if w > 0.0 && w.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::new("data.source.width", format!("must be positive, got {w}")))
            }
        };
        Ok(match *self {
            SourceSpec::Constant { value } => SourceFamily::constant(value, 1),
            SourceSpec::TimePower { power } => {
                if power < 0 {
                    return Err(ConfigError::new("data.source.power", "must be non-negative"));
                }
                SourceFamily::time_power(power, 1)
            }
            SourceSpec::SinT => SourceFamily::sin_t(1),
            SourceSpec::Gaussian { center, width } => {
                width_ok(width)?;
                SourceFamily::new("gaussian", 1, move |x, _| (-((x[0] - center) / width).powi(2)).exp())
            }
            SourceSpec::Bump { center, width } => {
                width_ok(width)?;
                SourceFamily::new("bump", 1, move |x, t| (-((x[0] - center) / width).powi(2)).exp() * (1.0 + t))
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileSpec {
    Zero,
    Heaviside,
    Gaussian { center: f64, width: f64 },
    PowerLaw { exponent: f64, coeff: f64 },
    Polynomial { coeffs: Vec<f64> },
}

impl FromStr for ProfileSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "zero" => Ok(ProfileSpec::Zero),
            "heaviside" | "step" => Ok(ProfileSpec::Heaviside),
            "gaussian" => Ok(ProfileSpec::Gaussian { center: 0.0, width: 0.3 }),
            other => Err(format!("unknown profile `{other}` (use zero, heaviside, gaussian or a JSON config)")),
        }
    }
}

impl ProfileSpec {
    pub fn build(&self, field: &str) -> Result<Profile, ConfigError> {
        let wrap = |e| ConfigError::from_core(field, e);
        Ok(match self {
            ProfileSpec::Zero => Profile::zero(),
            ProfileSpec::Heaviside => Profile::heaviside(),
            ProfileSpec::Gaussian { center, width } => Profile::gaussian(*center, *width).map_err(wrap)?,
            ProfileSpec::PowerLaw { exponent, coeff } => Profile::power_law(*exponent, *coeff).map_err(wrap)?,
            ProfileSpec::Polynomial { coeffs } => Profile::polynomial(coeffs.clone()),
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataSpec {
    pub source: Option<SourceSpec>,
    pub phi0: Option<ProfileSpec>,
    pub phi1: Option<ProfileSpec>,
    /// Einstein-de Sitter problem with data weighted at t = 0.
    pub weighted: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub nt: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            x_min: -1.0,
            x_max: 1.0,
            nx: 9,
            t_min: 0.25,
            t_max: 1.0,
            nt: 4,
        }
    }
}

impl FromStr for GridSpec {
    type Err = String;

    /// x_min,x_max,nx,t_min,t_max,nt
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(format!("expected x_min,x_max,nx,t_min,t_max,nt, got `{s}`"));
        }
        let f = |i: usize| parts[i].parse::<f64>().map_err(|_| format!("`{}` is not a number", parts[i]));
        let n = |i: usize| parts[i].parse::<usize>().map_err(|_| format!("`{}` is not a node count", parts[i]));
        Ok(GridSpec {
            x_min: f(0)?,
            x_max: f(1)?,
            nx: n(2)?,
            t_min: f(3)?,
            t_max: f(4)?,
            nt: n(5)?,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IdentitySpec {
    pub t_max: f64,
    pub n: usize,
    pub tolerance: f64,
    pub ode_tol: f64,
}

impl Default for IdentitySpec {
    fn default() -> Self {
        Self {
            t_max: 3.0,
            n: 10,
            tolerance: 1e-6,
            ode_tol: 1e-12,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResidualSpec {
    /// Stencil half-width.
    pub h: f64,
    pub tolerance: f64,
}

impl Default for ResidualSpec {
    fn default() -> Self {
        Self { h: 0.01, tolerance: 1e-3 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TlinSpec {
    pub data: TLinConfig,
    pub options: TLinOptions,
}

impl Default for TlinSpec {
    fn default() -> Self {
        Self {
            data: TLinConfig {
                a: 0.75,
                b: 0.75,
                c0: 1.0,
                c1: 0.0,
            },
            options: TLinOptions::default(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    /// Standard output when absent. Not recorded in output metadata, so
    /// identical runs written to different places stay byte-identical.
    #[serde(skip_serializing)]
    pub path: Option<PathBuf>,
    pub format: Format,
}

pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::new("--config", format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<RunConfig, ConfigError> {
    serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        ConfigError::new(field_of(&msg), msg)
    })
}

/// Best-effort field name from a serde message such as "unknown field `foo`".
fn field_of(msg: &str) -> String {
    for key in ["unknown field `", "missing field `", "unknown variant `"] {
        if let Some(rest) = msg.split(key).nth(1) {
            if let Some(name) = rest.split('`').next() {
                return name.to_string();
            }
        }
    }
    "config".to_string()
}

impl RunConfig {
    /// Static checks that do not depend on the command.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let g = &self.grid;
        if g.nx < 2 {
            return Err(ConfigError::new("grid.nx", format!("need at least 2 nodes, got {}", g.nx)));
        }
        if g.nt < 2 {
            return Err(ConfigError::new("grid.nt", format!("need at least 2 nodes, got {}", g.nt)));
        }
        if !(g.x_min.is_finite() && g.x_max.is_finite() && g.x_min < g.x_max) {
            return Err(ConfigError::new("grid.x_min", format!("need finite x_min < x_max, got [{}, {}]", g.x_min, g.x_max)));
        }
        if !(g.t_min.is_finite() && g.t_max.is_finite() && g.t_min < g.t_max) {
            return Err(ConfigError::new("grid.t_min", format!("need finite t_min < t_max, got [{}, {}]", g.t_min, g.t_max)));
        }
        self.quad.validate().map_err(|e| ConfigError::from_core("quad", e))?;
        if let Some(n) = self.threads {
            if n == 0 {
                return Err(ConfigError::new("threads", "must be at least 1"));
            }
        }
        if let Some(p) = &self.output.path {
            let parent = p.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
            if !parent.is_dir() {
                return Err(ConfigError::new("output.path", format!("directory {} does not exist", parent.display())));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = RunConfig::default();
        let back = parse(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn unknown_field_is_named() {
        let e = parse(r#"{"grid": {"nx": 3, "ny": 4}}"#).unwrap_err();
        assert_eq!(e.field, "ny");
        let e = FamilySpec {
            name: "nope".into(),
            ..FamilySpec::default()
        }
        .resolve()
        .unwrap_err();
        assert_eq!(e.field, "family.name");
    }

    #[test]
    fn shorthands() {
        assert_eq!("const1".parse::<SourceSpec>().unwrap(), SourceSpec::Constant { value: 1.0 });
        assert_eq!("t2".parse::<SourceSpec>().unwrap(), SourceSpec::TimePower { power: 2 });
        assert!("cosine".parse::<SourceSpec>().is_err());
        let g: GridSpec = "-1,1,3,0,1,2".parse().unwrap();
        assert_eq!((g.nx, g.t_max), (3, 1.0));
        assert!("1,2".parse::<GridSpec>().is_err());
    }

    #[test]
    fn grid_counts_checked() {
        let mut c = RunConfig::default();
        c.grid.nt = 1;
        assert_eq!(c.validate().unwrap_err().field, "grid.nt");
    }
}
