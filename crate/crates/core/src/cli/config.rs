//! JSON system descriptions.
//!
//! ```json
//! {
//!   "dimension": 1,
//!   "maps": [{"ratio": 0.3333333333333333, "translate": [0.0]},
//!            {"ratio": 0.3333333333333333, "translate": [0.6666666666666666]}],
//!   "codespace": {"type": "full"},
//!   "condensation": {"type": "points", "points": [[0.5]]},
//!   "probabilities": [0.2, 0.4, 0.4],
//!   "ambient": {"lo": [0.0], "hi": [1.0]}
//! }
//! ```
//!
//! Map orientation: `sign` (±1) in one dimension, `angle` in degrees and
//! `reflect` in the plane, or an explicit orthogonal matrix `ortho` in any
//! dimension. Transition matrices hold 0/1 entries; initial symbols are
//! 1-based. A product of two systems is written `{"product": {"left": …,
//! "right": …}}`.

use crate::codespace::{validate_shift_closed, Sft};
use crate::construct::SystemSpec;
use crate::error::{IsssError, Result};
use crate::geometry::{AmbientBox, CondensationSet, Orientation, Point, Shape, Similarity};
use crate::product::{product_system, ProductSpec};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub dimension: usize,
    pub maps: Vec<MapDoc>,
    pub codespace: CodespaceDoc,
    pub condensation: CondensationDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probabilities: Option<Vec<f64>>,
    pub ambient: AmbientDoc,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub osc_asserted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub ratio: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reflect: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ortho: Option<Vec<Vec<f64>>>,
    pub translate: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum CodespaceDoc {
    Full,
    Sft {
        transitions: Vec<Vec<u8>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        initial: Option<Vec<usize>>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum CondensationDoc {
    None,
    Points { points: Vec<Vec<f64>> },
    Segment { from: Vec<f64>, to: Vec<f64> },
    Circle { center: Vec<f64>, radius: f64 },
    Disk { center: Vec<f64>, radius: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Union { parts: Vec<CondensationDoc> },
    Product { left: Box<CondensationDoc>, right: Box<CondensationDoc> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientDoc {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductDoc {
    pub left: ConfigDocument,
    pub right: ConfigDocument,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProductWrapper {
    product: ProductDoc,
}

/// A parsed configuration file.
#[derive(Clone, Debug, PartialEq)]
pub enum Config {
    System(SystemSpec),
    Product(ProductSpec),
}

fn config_err(key: impl Into<String>, reason: impl ToString) -> IsssError {
    IsssError::Config { key: key.into(), reason: reason.to_string() }
}

fn point(key: &str, c: &[f64], dim: usize) -> Result<Point> {
    if dim != 0 && c.len() != dim {
        return Err(config_err(key, format!("expected {dim} coordinates, found {}", c.len())));
    }
    Point::new(c).map_err(|e| config_err(key, e))
}

fn orientation(key: &str, m: &MapDoc, dim: usize) -> Result<Orientation> {
    if let Some(o) = &m.ortho {
        if m.angle.is_some() || m.sign.is_some() || m.reflect.is_some() {
            return Err(config_err(key, "`ortho` excludes `angle`, `sign` and `reflect`"));
        }
        return Ok(Orientation::Matrix(o.clone()));
    }
    match dim {
        1 => {
            if m.angle.is_some() || m.reflect.is_some() {
                return Err(config_err(key, "`angle` and `reflect` need dimension 2; use `sign`"));
            }
            match m.sign {
                None => Ok(Orientation::Identity),
                Some(s) if s == 1.0 || s == -1.0 => Ok(Orientation::Sign(s)),
                Some(s) => Err(config_err(format!("{key}.sign"), format!("{s} is not +1 or -1"))),
            }
        }
        2 => {
            if m.sign.is_some() {
                return Err(config_err(key, "`sign` needs dimension 1; use `angle`/`reflect`"));
            }
            if m.angle.is_none() && m.reflect.is_none() {
                return Ok(Orientation::Identity);
            }
            Ok(Orientation::Planar { angle_deg: m.angle.unwrap_or(0.0), reflect: m.reflect.unwrap_or(false) })
        }
        _ => {
            if m.angle.is_some() || m.sign.is_some() || m.reflect.is_some() {
                return Err(config_err(key, "dimensions 3 and 4 take an `ortho` matrix"));
            }
            Ok(Orientation::Identity)
        }
    }
}

fn condensation(key: &str, c: &CondensationDoc, dim: usize) -> Result<CondensationSet> {
    let shape = match c {
        CondensationDoc::None => return Ok(CondensationSet::empty(dim)),
        CondensationDoc::Points { points } => Shape::Points(
            points.iter().enumerate().map(|(i, p)| point(&format!("{key}.points[{i}]"), p, dim)).collect::<Result<_>>()?,
        ),
        CondensationDoc::Segment { from, to } => {
            Shape::Segment(point(&format!("{key}.from"), from, dim)?, point(&format!("{key}.to"), to, dim)?)
        }
        CondensationDoc::Circle { center, radius } => {
            Shape::Circle { center: point(&format!("{key}.center"), center, dim)?, radius: *radius }
        }
        CondensationDoc::Disk { center, radius } => {
            Shape::Disk { center: point(&format!("{key}.center"), center, dim)?, radius: *radius }
        }
        CondensationDoc::Box { lo, hi } => Shape::Box { lo: point(&format!("{key}.lo"), lo, dim)?, hi: point(&format!("{key}.hi"), hi, dim)? },
        CondensationDoc::Union { parts } => Shape::Union(
            parts.iter().enumerate().map(|(i, p)| condensation(&format!("{key}.parts[{i}]"), p, dim)).collect::<Result<_>>()?,
        ),
        CondensationDoc::Product { left, right } => {
            if matches!(**left, CondensationDoc::None) || matches!(**right, CondensationDoc::None) {
                return Ok(CondensationSet::empty(dim));
            }
            let l = condensation(&format!("{key}.left"), left, 0)?;
            let r = condensation(&format!("{key}.right"), right, 0)?;
            if l.dim() + r.dim() != dim {
                return Err(config_err(key, format!("factor dimensions {} + {} differ from {dim}", l.dim(), r.dim())));
            }
            Shape::Product(Box::new(l), Box::new(r))
        }
    };
    let set = CondensationSet::new(shape).map_err(|e| config_err(key, e))?;
    // dim 0 marks a product factor whose dimension is read from the data
    if dim != 0 && set.dim() != dim {
        return Err(config_err(key, format!("dimension {} differs from {dim}", set.dim())));
    }
    Ok(set)
}

impl ConfigDocument {
    pub fn to_spec(&self) -> Result<SystemSpec> {
        let d = self.dimension;
        if !(1..=4).contains(&d) {
            return Err(config_err("dimension", format!("{d} is outside 1..=4")));
        }
        if self.maps.is_empty() {
            return Err(config_err("maps", "at least one map is required"));
        }
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let key = format!("maps[{i}]");
                if !(m.ratio > 0.0 && m.ratio < 1.0) {
                    return Err(config_err(format!("{key}.ratio"), format!("{} is not in (0, 1)", m.ratio)));
                }
                if m.translate.len() != d {
                    return Err(config_err(format!("{key}.translate"), format!("expected {d} coordinates, found {}", m.translate.len())));
                }
                Similarity::new(m.ratio, orientation(&key, m, d)?, &m.translate).map_err(|e| config_err(key, e))
            })
            .collect::<Result<Vec<_>>>()?;
        let n = maps.len();
        let codespace = match &self.codespace {
            CodespaceDoc::Full => Sft::full(n),
            CodespaceDoc::Sft { transitions, initial } => {
                if transitions.len() != n || transitions.iter().any(|r| r.len() != n) {
                    return Err(config_err("codespace.transitions", format!("must be {n}x{n}")));
                }
                if transitions.iter().flatten().any(|&v| v > 1) {
                    return Err(config_err("codespace.transitions", "entries must be 0 or 1"));
                }
                let t = transitions.iter().map(|r| r.iter().map(|&v| v == 1).collect()).collect();
                let init: Vec<usize> = match initial {
                    None => (0..n).collect(),
                    Some(v) => v
                        .iter()
                        .map(|&s| if (1..=n).contains(&s) { Ok(s - 1) } else { Err(config_err("codespace.initial", format!("symbol {s} outside 1..={n}"))) })
                        .collect::<Result<_>>()?,
                };
                let sft = Sft::new(t, &init)?;
                validate_shift_closed(&sft).into_result()?;
                sft
            }
        };
        let ambient = AmbientBox::new(point("ambient.lo", &self.ambient.lo, d)?, point("ambient.hi", &self.ambient.hi, d)?)
            .map_err(|e| config_err("ambient", e))?;
        let c = condensation("condensation", &self.condensation, d)?;
        SystemSpec::new(maps, codespace, c, ambient, self.probabilities.clone(), self.osc_asserted)
    }

    /// Document describing `spec`; fails for product maps, which are written
    /// through [`emit_product`].
    pub fn from_spec(spec: &SystemSpec) -> Result<Self> {
        let d = spec.dim();
        let maps = spec
            .maps
            .iter()
            .map(|m| {
                let [f] = m.factors() else {
                    return Err(IsssError::Unsupported("product maps are written as a product config".into()));
                };
                let mut doc = MapDoc { ratio: f.ratio, angle: None, sign: None, reflect: None, ortho: None, translate: m.translation().coords().to_vec() };
                match &f.orientation {
                    Orientation::Identity => {}
                    Orientation::Sign(s) => doc.sign = Some(*s),
                    Orientation::Planar { angle_deg, reflect } => {
                        doc.angle = Some(*angle_deg);
                        doc.reflect = Some(*reflect);
                    }
                    Orientation::Matrix(o) => doc.ortho = Some(o.clone()),
                }
                Ok(doc)
            })
            .collect::<Result<Vec<_>>>()?;
        let codespace = if spec.codespace.is_full_shift() {
            CodespaceDoc::Full
        } else {
            CodespaceDoc::Sft {
                transitions: spec.codespace.transitions().iter().map(|r| r.iter().map(|&b| b as u8).collect()).collect(),
                initial: Some(spec.codespace.initial_symbols().map(|s| s + 1).collect()),
            }
        };
        Ok(Self {
            dimension: d,
            maps,
            codespace,
            condensation: condensation_doc(&spec.condensation),
            probabilities: spec.probabilities.clone(),
            ambient: AmbientDoc { lo: spec.ambient.lo().coords().to_vec(), hi: spec.ambient.hi().coords().to_vec() },
            osc_asserted: spec.osc_asserted,
        })
    }
}

fn condensation_doc(c: &CondensationSet) -> CondensationDoc {
    let v = |p: &Point| p.coords().to_vec();
    match c.shape() {
        Shape::Empty { .. } => CondensationDoc::None,
        Shape::Points(pts) => CondensationDoc::Points { points: pts.iter().map(v).collect() },
        Shape::Segment(a, b) => CondensationDoc::Segment { from: v(a), to: v(b) },
        Shape::Circle { center, radius } => CondensationDoc::Circle { center: v(center), radius: *radius },
        Shape::Disk { center, radius } => CondensationDoc::Disk { center: v(center), radius: *radius },
        Shape::Box { lo, hi } => CondensationDoc::Box { lo: v(lo), hi: v(hi) },
        Shape::Union(parts) => CondensationDoc::Union { parts: parts.iter().map(condensation_doc).collect() },
        Shape::Product(a, b) => CondensationDoc::Product { left: Box::new(condensation_doc(a)), right: Box::new(condensation_doc(b)) },
    }
}

pub fn parse_str(text: &str) -> Result<Config> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| config_err("<document>", e))?;
    if value.get("product").is_some() {
        let doc: ProductWrapper = serde_json::from_value(value).map_err(|e| config_err("product", e))?;
        let left = doc.product.left.to_spec().map_err(|e| nest("product.left", e))?;
        let right = doc.product.right.to_spec().map_err(|e| nest("product.right", e))?;
        return Ok(Config::Product(product_system(&left, &right)?));
    }
    let doc: ConfigDocument = serde_json::from_value(value).map_err(|e| config_err("<document>", e))?;
    Ok(Config::System(doc.to_spec()?))
}

fn nest(prefix: &str, e: IsssError) -> IsssError {
    match e {
        IsssError::Config { key, reason } => IsssError::Config { key: format!("{prefix}.{key}"), reason },
        other => other,
    }
}

pub fn parse_config(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path).map_err(|e| config_err(path.display().to_string(), e))?;
    parse_str(&text)
}

/// A single (non-product) system.
pub fn parse_system(path: &Path) -> Result<SystemSpec> {
    match parse_config(path)? {
        Config::System(s) => Ok(s),
        Config::Product(_) => Err(config_err("product", "a single system is expected here")),
    }
}

pub fn emit(spec: &SystemSpec) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ConfigDocument::from_spec(spec)?).expect("serializable"))
}

pub fn emit_product(p: &ProductSpec) -> Result<String> {
    let doc = ProductWrapper { product: ProductDoc { left: ConfigDocument::from_spec(&p.left)?, right: ConfigDocument::from_spec(&p.right)? } };
    Ok(serde_json::to_string_pretty(&doc).expect("serializable"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const CANTOR: &str = r#"{
        "dimension": 1,
        "maps": [{"ratio": 0.3333333333333333, "translate": [0.0]},
                 {"ratio": 0.3333333333333333, "translate": [0.6666666666666666]}],
        "codespace": {"type": "full"},
        "condensation": {"type": "points", "points": [[0.5]]},
        "ambient": {"lo": [0.0], "hi": [1.0]}
    }"#;

    fn system(text: &str) -> Result<SystemSpec> {
        match parse_str(text)? {
            Config::System(s) => Ok(s),
            Config::Product(_) => panic!("not a system"),
        }
    }

    #[test]
    fn cantor_config() {
        let s = system(CANTOR).unwrap();
        assert_eq!(s.maps.len(), 2);
        assert!(s.codespace.is_full_shift());
        assert_eq!(system(&emit(&s).unwrap()).unwrap(), s);
    }

    #[test]
    fn rejects_expanding_map() {
        let bad = CANTOR.replacen("0.3333333333333333", "1.0", 1);
        let e = system(&bad).unwrap_err();
        assert!(matches!(&e, IsssError::Config { key, .. } if key == "maps[0].ratio"), "{e}");
    }

    #[test]
    fn rejects_unknown_keys() {
        let bad = CANTOR.replace("\"ambient\"", "\"colour\": 3, \"ambient\"");
        let e = system(&bad).unwrap_err().to_string();
        assert!(e.contains("colour"), "{e}");
        let bad = CANTOR.replace("\"translate\": [0.0]}", "\"translate\": [0.0], \"skew\": 1}");
        assert!(system(&bad).unwrap_err().to_string().contains("skew"));
    }

    #[test]
    fn rejects_open_subshift() {
        let bad = CANTOR.replace(r#"{"type": "full"}"#, r#"{"type": "sft", "transitions": [[1, 1], [1, 1]], "initial": [2]}"#);
        let e = system(&bad).unwrap_err();
        assert!(matches!(&e, IsssError::NotShiftClosed(v) if v == &[(1, 0)]));
        assert!(e.to_string().contains("(2,1)"));
    }

    #[test]
    fn planar_and_matrix_round_trip() {
        let text = r#"{
            "dimension": 2,
            "maps": [{"ratio": 0.5, "angle": 90.0, "reflect": true, "translate": [0.5, 0.5]},
                     {"ratio": 0.25, "translate": [0.0, 0.0]},
                     {"ratio": 0.4, "ortho": [[0.0, -1.0], [1.0, 0.0]], "translate": [0.5, 0.0]}],
            "codespace": {"type": "sft", "transitions": [[1, 1, 0], [1, 0, 1], [0, 1, 1]]},
            "condensation": {"type": "union", "parts": [
                {"type": "circle", "center": [0.5, 0.5], "radius": 0.1},
                {"type": "box", "lo": [0.1, 0.1], "hi": [0.2, 0.3]}]},
            "probabilities": [0.1, 0.3, 0.3, 0.3],
            "ambient": {"lo": [-1.0, -1.0], "hi": [1.0, 1.0]},
            "osc_asserted": true
        }"#;
        let s = system(text).unwrap();
        assert!(s.osc_asserted);
        assert_eq!(system(&emit(&s).unwrap()).unwrap(), s);
        let wrong = text.replace("\"angle\": 90.0", "\"sign\": -1");
        assert!(system(&wrong).is_err());
    }

    #[test]
    fn product_round_trip() {
        let text = format!(r#"{{"product": {{"left": {CANTOR}, "right": {CANTOR}}}}}"#);
        let Config::Product(p) = parse_str(&text).unwrap() else { panic!() };
        assert_eq!(p.combined.maps.len(), 4);
        assert_eq!(parse_str(&emit_product(&p).unwrap()).unwrap(), Config::Product(p.clone()));
        assert!(emit(&p.combined).is_err());
    }

    #[test]
    fn nested_key_names() {
        let bad = CANTOR.replace("[[0.5]]", "[[0.5, 0.1]]");
        let e = system(&bad).unwrap_err();
        assert!(matches!(&e, IsssError::Config { key, .. } if key == "condensation.points[0]"), "{e}");
        let text = format!(r#"{{"product": {{"left": {CANTOR}, "right": {}}}}}"#, CANTOR.replacen("0.3333333333333333", "2", 1));
        let e = parse_str(&text).unwrap_err();
        assert!(matches!(&e, IsssError::Config { key, .. } if key == "product.right.maps[0].ratio"), "{e}");
    }
}
