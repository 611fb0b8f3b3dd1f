//! Hypersurface descriptions on disk, and the bundled corpus.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wpoly::{parse_polynomial, WPolynomial, WeightedRing};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypersurfaceSpec {
    pub label: String,
    pub weights: Vec<u32>,
    pub degree: i64,
    pub polynomial: String,
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let start: usize = text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    (start + column.saturating_sub(1)).min(text.len())
}

impl HypersurfaceSpec {
    pub fn new(label: impl Into<String>, omega: &WPolynomial) -> Result<Self> {
        let degree = omega
            .degree()
            .ok_or_else(|| Error::structural("a hypersurface needs a nonzero homogeneous polynomial"))?;
        Ok(HypersurfaceSpec {
            label: label.into(),
            weights: omega.ring().weights().to_vec(),
            degree,
            polynomial: omega.to_string(),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            position: byte_offset(text, e.line(), e.column()),
            message: format!("invalid hypersurface description: {e}"),
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn ring(&self) -> Result<WeightedRing> {
        WeightedRing::new(&self.weights)
    }

    /// The polynomial, checked to be homogeneous of the declared degree.
    pub fn polynomial(&self) -> Result<WPolynomial> {
        let f = parse_polynomial(&self.ring()?, &self.polynomial)?;
        match f.degree() {
            Some(d) if d == self.degree => Ok(f),
            Some(d) => Err(Error::structural(format!(
                "{}: polynomial has weighted degree {d}, declared {}",
                self.label, self.degree
            ))),
            None => Err(Error::structural(format!(
                "{}: polynomial is not weighted homogeneous of degree {}",
                self.label, self.degree
            ))),
        }
    }
}

macro_rules! corpus {
    ($($name:literal),* $(,)?) => {
        /// `(name, json)` for every bundled fixture.
        pub const FIXTURES: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../fixtures/", $name, ".json")))),*
        ];
    };
}

corpus!(
    "cubic_fourfold_fermat",
    "cubic_threefold_fermat",
    "quartic_threefold_fermat",
    "quartic_fourfold_fermat",
    "quintic_threefold_fermat",
    "quintic_threefold_dwork",
    "veronese_double_cone_fermat",
    "veronese_double_cone_generic",
    "gvdc_2_2_3",
    "k_sheeted_3_3_2",
    "singular_cubic_cone",
    "sextic_p11122",
    "quartic_surface_fermat",
);

/// Fixtures whose polynomial has a non-isolated singularity at the origin.
pub const NON_ISOLATED: &[&str] = &["singular_cubic_cone"];

pub fn fixture_names() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|(n, _)| *n)
}

/// Fixtures with an isolated singularity at the origin.
pub fn smooth_fixture_names() -> impl Iterator<Item = &'static str> {
    fixture_names().filter(|n| !NON_ISOLATED.contains(n))
}

pub fn fixture(name: &str) -> Result<HypersurfaceSpec> {
    let (_, json) = FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| {
            Error::Mismatch(format!(
                "unknown fixture {name:?}; available: {}",
                fixture_names().collect::<Vec<_>>().join(", ")
            ))
        })?;
    HypersurfaceSpec::from_json(json)
}

pub fn fixture_polynomial(name: &str) -> Result<WPolynomial> {
    fixture(name)?.polynomial()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_parses_and_round_trips() {
        for name in fixture_names() {
            let spec = fixture(name).unwrap();
            let f = spec.polynomial().unwrap();
            assert_eq!(HypersurfaceSpec::from_json(&spec.to_json()).unwrap(), spec);
            let again = HypersurfaceSpec::new(&spec.label, &f).unwrap();
            assert_eq!(again.polynomial().unwrap(), f, "{name}");
        }
    }

    #[test]
    fn bad_json_reports_a_position() {
        let text = "{\n  \"label\": \"x\",\n  \"weights\": [1, 1],\n  \"degree\": 2\n  \"polynomial\": \"x0^2\"\n}";
        match HypersurfaceSpec::from_json(text) {
            Err(Error::Parse { position, .. }) => assert_eq!(&text[position..position + 1], "\""),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn declared_degree_is_checked() {
        let spec = HypersurfaceSpec {
            label: "bad".into(),
            weights: vec![1, 2],
            degree: 3,
            polynomial: "x0^4 + x1^2".into(),
        };
        assert!(matches!(spec.polynomial(), Err(Error::Structural(_))));
        assert!(fixture("nope").is_err());
    }
}
