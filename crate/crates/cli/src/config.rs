use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use qtoeplitz::bergman::{QuadratureOrders, Weight};
use qtoeplitz::groups::ReflectionGroup;
use qtoeplitz::poly::MixedSymbol;
use serde::{Deserialize, Serialize};

use crate::formats::{build_weight, symbol_from_json, DomainSpec, GroupSpec, Pair, SymbolTerm};
use crate::ConfigError;

/// Largest accepted truncation.
pub const MAX_TRUNCATION: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    CstDimensions,
    Decompose,
    TransferProduct,
    TransferCommute,
    LemmaPr,
    KernelCheck,
    Berezin,
    Intertwining,
    BlockStructure,
    Volume,
    Snf,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::CstDimensions => "cst-dimensions",
            ExperimentKind::Decompose => "decompose",
            ExperimentKind::TransferProduct => "transfer-product",
            ExperimentKind::TransferCommute => "transfer-commute",
            ExperimentKind::LemmaPr => "lemma-pr",
            ExperimentKind::KernelCheck => "kernel-check",
            ExperimentKind::Berezin => "berezin",
            ExperimentKind::Intertwining => "intertwining",
            ExperimentKind::BlockStructure => "block-structure",
            ExperimentKind::Volume => "volume",
            ExperimentKind::Snf => "snf",
        }
    }

    /// Primary tolerance used when the config does not override it.
    pub fn default_tolerance(self) -> f64 {
        match self {
            ExperimentKind::CstDimensions | ExperimentKind::Snf => 0.0,
            ExperimentKind::Decompose | ExperimentKind::BlockStructure => 1e-12,
            ExperimentKind::TransferProduct | ExperimentKind::TransferCommute | ExperimentKind::LemmaPr => {
                qtoeplitz::quotient::TRANSFER_TOL
            }
            ExperimentKind::KernelCheck => 1e-10,
            ExperimentKind::Berezin => 1e-6,
            ExperimentKind::Intertwining => 1e-7,
            ExperimentKind::Volume => 1e-8,
        }
    }

    fn default_truncation(self) -> usize {
        match self {
            ExperimentKind::Decompose => 5,
            ExperimentKind::LemmaPr | ExperimentKind::KernelCheck => 6,
            _ => 8,
        }
    }

    fn needs_group(self) -> bool {
        matches!(
            self,
            ExperimentKind::CstDimensions
                | ExperimentKind::Decompose
                | ExperimentKind::TransferProduct
                | ExperimentKind::TransferCommute
                | ExperimentKind::Intertwining
                | ExperimentKind::BlockStructure
                | ExperimentKind::Volume
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    #[default]
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub radial: usize,
    pub angular: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub kind: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    #[serde(default)]
    pub domain: DomainSpec,
    /// Needed only when no group fixes the dimension.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureSpec>,
    /// Named symbols; keys depend on the kind (`u`, `v`, `q`, `f1`, `h`, ...).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub symbols: BTreeMap<String, Vec<SymbolTerm>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Vec<Pair>>,
    #[serde(default)]
    pub expect: Expectation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Integer matrix for `snf`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<i64>>>,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        ExperimentConfig {
            name: None,
            kind,
            group: None,
            domain: DomainSpec::Polydisc,
            dimension: None,
            alpha: None,
            truncation: None,
            quadrature: None,
            symbols: BTreeMap::new(),
            points: Vec::new(),
            expect: Expectation::Pass,
            tolerance: None,
            output: None,
            matrix: None,
        }
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.kind.name().to_string())
    }

    pub fn group_spec(&self) -> GroupSpec {
        self.group.clone().unwrap_or(GroupSpec::Symmetric { degree: 2 })
    }

    pub fn group(&self) -> Result<ReflectionGroup, ConfigError> {
        self.group_spec().build()
    }

    pub fn dim(&self) -> usize {
        match (&self.group, self.dimension) {
            (Some(g), _) => g.dim(),
            (None, Some(d)) => d,
            (None, None) if self.kind.needs_group() => 2,
            (None, None) => 1,
        }
    }

    pub fn weight(&self) -> Result<Weight, ConfigError> {
        build_weight(self.domain, self.dim(), self.alpha.as_deref())
    }

    pub fn truncation(&self) -> usize {
        self.truncation.unwrap_or(self.kind.default_truncation())
    }

    pub fn orders_or(&self, fallback: QuadratureOrders) -> QuadratureOrders {
        self.quadrature.map(|q| QuadratureOrders::new(q.radial, q.angular)).unwrap_or(fallback)
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(self.kind.default_tolerance())
    }

    /// A warning when the tolerance differs from the documented default.
    pub fn tolerance_warning(&self) -> Option<String> {
        let t = self.tolerance?;
        let d = self.kind.default_tolerance();
        (t != d).then(|| {
            let how = if t < d { "tightened" } else { "loosened" };
            format!("tolerance {how} from {d:e} to {t:e}")
        })
    }

    pub fn symbol(&self, key: &str) -> Result<Option<MixedSymbol>, ConfigError> {
        self.symbols.get(key).map(|s| symbol_from_json(s, self.dim())).transpose()
    }

    pub fn require_symbol(&self, key: &str) -> Result<MixedSymbol, ConfigError> {
        self.symbol(key)?.ok_or_else(|| ConfigError::new(format!("{}: symbol '{key}' is required", self.kind.name())))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let n = self.truncation();
        if n > MAX_TRUNCATION {
            return Err(ConfigError::new(format!("truncation {n} exceeds the ceiling {MAX_TRUNCATION}")));
        }
        if self.dim() == 0 || self.dim() > 3 {
            if !matches!(self.kind, ExperimentKind::CstDimensions | ExperimentKind::Snf) {
                return Err(ConfigError::new(format!("dimension {} is outside 1..=3", self.dim())));
            }
        }
        if let Some(t) = self.tolerance {
            if !(t.is_finite() && t >= 0.0) {
                return Err(ConfigError::new(format!("tolerance {t} must be a non-negative number")));
            }
        }
        if let Some(q) = self.quadrature {
            if q.radial == 0 || q.angular == 0 || q.radial > 512 || q.angular > 1024 {
                return Err(ConfigError::new("quadrature orders must be in 1..=512 radial, 1..=1024 angular"));
            }
        }
        if self.kind.needs_group() || self.group.is_some() {
            self.group()?;
        }
        self.weight()?;
        for key in self.symbols.keys() {
            self.symbol(key)?;
        }
        if self.kind == ExperimentKind::Snf && self.matrix.is_none() {
            return Err(ConfigError::new("snf: 'matrix' is required"));
        }
        Ok(())
    }
}

/// A config file holds one experiment or a batch.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ConfigFile {
    Batch { experiments: Vec<ExperimentConfig> },
    Single(Box<ExperimentConfig>),
}

pub fn parse_configs(text: &str) -> Result<Vec<ExperimentConfig>, ConfigError> {
    let parsed: ConfigFile = serde_json::from_str(text).map_err(|e| ConfigError::new(format!("config: {e}")))?;
    Ok(match parsed {
        ConfigFile::Batch { experiments } => experiments,
        ConfigFile::Single(c) => vec![*c],
    })
}

pub fn load_configs(path: &Path) -> Result<Vec<ExperimentConfig>, ConfigError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| ConfigError::new(format!("cannot read {}: {e}", path.display())))?;
    parse_configs(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_and_batch() {
        let one = parse_configs(r#"{"kind":"cst-dimensions","group":{"kind":"symmetric","degree":3}}"#).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].dim(), 3);
        let many = parse_configs(r#"{"experiments":[{"kind":"volume"},{"kind":"snf","matrix":[[2,0],[0,3]]}]}"#).unwrap();
        assert_eq!(many.len(), 2);
        assert!(parse_configs(r#"{"kind":"volume","bogus":1}"#).is_err());
    }

    #[test]
    fn validation() {
        let mut c = ExperimentConfig::new(ExperimentKind::TransferProduct);
        assert!(c.validate().is_ok());
        c.truncation = Some(17);
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::new(ExperimentKind::Berezin);
        c.tolerance = Some(1e-3);
        assert!(c.tolerance_warning().unwrap().contains("loosened"));
        assert!(ExperimentConfig::new(ExperimentKind::Snf).validate().is_err());
    }
}
