//! JSON and CSV encodings of groups, polynomials, symbols and operators.

use std::collections::BTreeMap;
use std::io::Write;

use qtoeplitz::bergman::{BasisShape, Domain, TruncatedOperator, Weight};
use qtoeplitz::groups::{
    custom_group, cyclic_diagonal_group, generating_polynomial, one_dim_characters, relative_generator, symmetric_group,
    GroupKind, ReflectionGroup, DEFAULT_ENUMERATION_LIMIT,
};
use qtoeplitz::poly::{Exponent, MixedSymbol, MultiPoly, MAX_VARS};
use qtoeplitz::Complex64;
use serde::{Deserialize, Serialize};

use crate::ConfigError;

/// `[re, im]`.
pub type Pair = [f64; 2];

pub fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

pub fn complex(p: Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    Symmetric {
        degree: usize,
    },
    AbelianDiagonal {
        orders: Vec<usize>,
    },
    /// Generators as row-major `dimension × dimension` matrices of `[re, im]`.
    Custom {
        dimension: usize,
        generators: Vec<Vec<Pair>>,
        #[serde(default)]
        limit: Option<usize>,
    },
}

impl GroupSpec {
    pub fn build(&self) -> Result<ReflectionGroup, ConfigError> {
        let g = match self {
            GroupSpec::Symmetric { degree } => symmetric_group(*degree),
            GroupSpec::AbelianDiagonal { orders } => cyclic_diagonal_group(orders),
            GroupSpec::Custom { dimension, generators, limit } => {
                let gens: Vec<Vec<Complex64>> =
                    generators.iter().map(|m| m.iter().copied().map(complex).collect()).collect();
                custom_group(*dimension, &gens, limit.unwrap_or(DEFAULT_ENUMERATION_LIMIT))
            }
        };
        g.map_err(|e| ConfigError::new(format!("group: {e}")))
    }

    pub fn dim(&self) -> usize {
        match self {
            GroupSpec::Symmetric { degree } => *degree,
            GroupSpec::AbelianDiagonal { orders } => orders.len(),
            GroupSpec::Custom { dimension, .. } => *dimension,
        }
    }

    pub fn name(&self) -> String {
        match self {
            GroupSpec::Symmetric { degree } => format!("S{degree}"),
            GroupSpec::AbelianDiagonal { orders } => {
                orders.iter().map(|n| format!("Z{n}")).collect::<Vec<_>>().join("x")
            }
            GroupSpec::Custom { dimension, generators, .. } => format!("custom(d={dimension}, {} gens)", generators.len()),
        }
    }
}

/// Inline group syntax: `S3`, `symmetric:3`, `Z3`, `Z2xZ3`, `diagonal:2,3`.
pub fn parse_group(s: &str) -> Result<GroupSpec, ConfigError> {
    let bad = || ConfigError::new(format!("unrecognised group '{s}' (try S2, S3, Z3, Z2xZ3, diagonal:2,3)"));
    let t = s.trim();
    let num = |x: &str| x.trim().parse::<usize>().map_err(|_| bad());
    if let Some(rest) = t.strip_prefix("symmetric:") {
        return Ok(GroupSpec::Symmetric { degree: num(rest)? });
    }
    if let Some(rest) = t.strip_prefix("diagonal:") {
        let orders = rest.split(',').map(num).collect::<Result<_, _>>()?;
        return Ok(GroupSpec::AbelianDiagonal { orders });
    }
    if let Some(rest) = t.strip_prefix('S').or_else(|| t.strip_prefix('s')) {
        return Ok(GroupSpec::Symmetric { degree: num(rest)? });
    }
    if t.starts_with('Z') || t.starts_with('z') {
        let orders = t
            .split(['x', 'X'])
            .map(|p| p.trim().strip_prefix('Z').or_else(|| p.trim().strip_prefix('z')).ok_or_else(bad).and_then(num))
            .collect::<Result<_, _>>()?;
        return Ok(GroupSpec::AbelianDiagonal { orders });
    }
    Err(bad())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyTerm {
    pub exponents: Vec<usize>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolTerm {
    pub exponents: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conj_exponents: Option<Vec<usize>>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

fn exponent(v: &[usize], dim: usize) -> Result<Exponent, ConfigError> {
    if v.len() != dim {
        return Err(ConfigError::new(format!("exponent {v:?} has length {}, expected {dim}", v.len())));
    }
    if dim > MAX_VARS || v.iter().any(|&k| k > qtoeplitz::poly::MAX_EXPONENT) {
        return Err(ConfigError::new(format!("exponent {v:?} is out of range")));
    }
    Ok(Exponent::new(v))
}

pub fn poly_from_json(terms: &[PolyTerm], dim: usize) -> Result<MultiPoly, ConfigError> {
    let mut p = MultiPoly::zero(dim);
    for t in terms {
        p.add_term(exponent(&t.exponents, dim)?, Complex64::new(t.re, t.im));
    }
    Ok(p)
}

pub fn poly_to_json(p: &MultiPoly) -> Vec<PolyTerm> {
    p.terms().map(|(e, c)| PolyTerm { exponents: e.to_vec(), re: c.re, im: c.im }).collect()
}

pub fn symbol_from_json(terms: &[SymbolTerm], dim: usize) -> Result<MixedSymbol, ConfigError> {
    let mut s = MixedSymbol::zero(dim);
    for t in terms {
        let b = match &t.conj_exponents {
            Some(b) => exponent(b, dim)?,
            None => Exponent::zero(dim),
        };
        s.add_term(exponent(&t.exponents, dim)?, b, Complex64::new(t.re, t.im));
    }
    Ok(s)
}

pub fn symbol_to_json(s: &MixedSymbol) -> Vec<SymbolTerm> {
    s.terms()
        .map(|(a, b, c)| SymbolTerm { exponents: a.to_vec(), conj_exponents: Some(b.to_vec()), re: c.re, im: c.im })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct HyperplaneJson {
    pub linear_form: Vec<Pair>,
    pub order: usize,
    pub generator: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CharacterJson {
    pub label: String,
    pub values: Vec<Pair>,
    pub exponents: Vec<usize>,
    pub generating_polynomial: Vec<PolyTerm>,
    /// `ℓ` with `σ(ℓ) = χ(σ)ℓ` under `σ(f) = f∘σ^{-1}`.
    pub relative_generator: Vec<PolyTerm>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupDescriptor {
    pub kind: String,
    pub dimension: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<usize>>,
    pub order: usize,
    pub generators: Vec<Vec<Pair>>,
    pub hyperplanes: Vec<HyperplaneJson>,
    pub characters: Vec<CharacterJson>,
}

pub fn describe_group(g: &ReflectionGroup) -> GroupDescriptor {
    let (kind, degree, orders) = match g.kind() {
        GroupKind::Symmetric { degree } => ("symmetric", Some(*degree), None),
        GroupKind::AbelianDiagonal { orders } => ("abelian_diagonal", None, Some(orders.clone())),
        GroupKind::Custom => ("custom", None, None),
    };
    let characters = one_dim_characters(g)
        .map(|cs| {
            cs.iter()
                .map(|chi| CharacterJson {
                    label: chi.label().to_string(),
                    values: chi.values().iter().copied().map(pair).collect(),
                    exponents: chi.exponents().to_vec(),
                    generating_polynomial: poly_to_json(&generating_polynomial(g, chi)),
                    relative_generator: poly_to_json(&relative_generator(g, chi)),
                })
                .collect()
        })
        .unwrap_or_default();
    GroupDescriptor {
        kind: kind.into(),
        dimension: g.dim(),
        degree,
        orders,
        order: g.order(),
        generators: g.generators().iter().map(|&i| g.element(i).matrix().iter().copied().map(pair).collect()).collect(),
        hyperplanes: g
            .hyperplanes()
            .iter()
            .map(|h| HyperplaneJson {
                linear_form: h.linear_form().iter().copied().map(pair).collect(),
                order: h.cyclic_order(),
                generator: h.generator(),
            })
            .collect(),
        characters,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct OperatorJson {
    pub truncation: usize,
    pub band_margin: usize,
    pub shape: String,
    pub labels: Vec<Vec<usize>>,
    /// Comma-joined exponent label to row/column index.
    pub index_map: BTreeMap<String, usize>,
    pub matrix: Vec<Vec<Pair>>,
}

pub fn label_key(e: &[usize]) -> String {
    e.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
}

pub fn operator_to_json(t: &TruncatedOperator) -> OperatorJson {
    let labels: Vec<Vec<usize>> = t.labels().iter().map(|e| e.to_vec()).collect();
    OperatorJson {
        truncation: t.truncation(),
        band_margin: t.band_margin(),
        shape: match t.shape() {
            BasisShape::Box => "box".into(),
            BasisShape::Simplex => "simplex".into(),
        },
        index_map: labels.iter().enumerate().map(|(i, l)| (label_key(l), i)).collect(),
        matrix: (0..t.dim()).map(|i| (0..t.dim()).map(|j| pair(t.entry(i, j))).collect()).collect(),
        labels,
    }
}

/// One `row,col,re,im` line per entry with modulus above `threshold`.
pub fn write_operator_csv<W: Write>(t: &TruncatedOperator, out: W, threshold: f64) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["row", "col", "re", "im"])?;
    for i in 0..t.dim() {
        for j in 0..t.dim() {
            let z = t.entry(i, j);
            if z.norm() > threshold {
                w.serialize((i, j, z.re, z.im))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DomainSpec {
    #[default]
    Polydisc,
    Ball,
}

pub fn build_weight(domain: DomainSpec, dim: usize, alpha: Option<&[f64]>) -> Result<Weight, ConfigError> {
    let w = match domain {
        DomainSpec::Polydisc => match alpha {
            Some(a) if a.len() == dim => Weight::polydisc(a.to_vec()),
            Some(a) if a.len() == 1 => Weight::polydisc(vec![a[0]; dim]),
            Some(a) => return Err(ConfigError::new(format!("alpha has {} entries, expected {dim}", a.len()))),
            None => Weight::unweighted(dim),
        },
        DomainSpec::Ball => {
            if alpha.is_some_and(|a| a.iter().any(|&x| x != 0.0)) {
                return Err(ConfigError::new("the ball only supports the unweighted measure"));
            }
            Weight::ball(dim)
        }
    };
    w.map_err(|e| ConfigError::new(format!("weight: {e}")))
}

pub fn domain_name(w: &Weight) -> &'static str {
    match w.domain() {
        Domain::Polydisc => "polydisc",
        Domain::Ball => "ball",
    }
}

pub fn points_from_json(points: &[Vec<Pair>], dim: usize) -> Result<Vec<Vec<Complex64>>, ConfigError> {
    points
        .iter()
        .map(|p| {
            if p.len() != dim {
                return Err(ConfigError::new(format!("point has {} coordinates, expected {dim}", p.len())));
            }
            Ok(p.iter().copied().map(complex).collect())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_strings() {
        assert_eq!(parse_group("S3").unwrap(), GroupSpec::Symmetric { degree: 3 });
        assert_eq!(parse_group("Z2xZ3").unwrap(), GroupSpec::AbelianDiagonal { orders: vec![2, 3] });
        assert_eq!(parse_group("diagonal:4").unwrap(), GroupSpec::AbelianDiagonal { orders: vec![4] });
        assert!(parse_group("Q8").is_err());
    }

    #[test]
    fn polynomial_round_trip() {
        let json = r#"[{"exponents":[1,0],"re":1.0},{"exponents":[0,2],"re":0.5,"im":-2.0}]"#;
        let terms: Vec<PolyTerm> = serde_json::from_str(json).unwrap();
        let p = poly_from_json(&terms, 2).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(poly_from_json(&poly_to_json(&p), 2).unwrap(), p);
        assert!(poly_from_json(&terms, 3).is_err());
    }

    #[test]
    fn symbol_defaults_to_holomorphic() {
        let terms: Vec<SymbolTerm> = serde_json::from_str(r#"[{"exponents":[2],"re":1.0}]"#).unwrap();
        let s = symbol_from_json(&terms, 1).unwrap();
        assert!(s.is_holomorphic());
        assert_eq!(symbol_from_json(&symbol_to_json(&s), 1).unwrap(), s);
    }

    #[test]
    fn group_json_spec() {
        let g: GroupSpec = serde_json::from_str(r#"{"kind":"abelian_diagonal","orders":[3]}"#).unwrap();
        let d = describe_group(&g.build().unwrap());
        assert_eq!(d.order, 3);
        assert_eq!(d.characters.len(), 3);
    }
}
