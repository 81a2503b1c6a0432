//! The on-disk system description: a UTF-8 JSON document naming the block
//! dimensions, the group, its generator automorphisms, observables, and
//! optionally states and an ideal.
//!
//! Complex numbers serialize as `[re, im]` pairs and matrices as row-major
//! nested lists. Serialization is canonical: struct fields in declaration
//! order, name maps sorted, floats in shortest round-trip decimal form, so
//! `serialize ∘ parse` is a fixpoint on files produced by this module.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraShape, Element, State};
use crate::dynamics::{Automorphism, GroupAction, GroupPresentation};
use crate::error::Error;
use crate::linalg::CMat;
use crate::Result;

pub type ComplexData = [f64; 2];
pub type MatrixData = Vec<Vec<ComplexData>>;
pub type ElementData = Vec<MatrixData>;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum GroupSpec {
    #[serde(rename = "Z")]
    Z,
    #[serde(rename = "Zd")]
    Zd { d: usize },
    #[serde(rename = "cyclic_product")]
    CyclicProduct { orders: Vec<u64> },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub permutation: Vec<usize>,
    pub unitaries: Vec<MatrixData>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub blocks: Vec<usize>,
    pub group: GroupSpec,
    pub generators: Vec<GeneratorSpec>,
    pub observables: BTreeMap<String, ElementData>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub states: BTreeMap<String, ElementData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<Vec<usize>>,
}

/// A parsed and type-checked system, ready for analysis.
#[derive(Debug, Clone)]
pub struct ParsedSystem {
    pub shape: AlgebraShape,
    pub action: GroupAction<f64>,
    pub observables: BTreeMap<String, Element<f64>>,
    pub states: BTreeMap<String, State<f64>>,
    pub ideal: Option<Vec<usize>>,
}

impl SystemFile {
    pub fn parse_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_str(&text)
    }

    /// Canonical serialization (see module docs).
    pub fn to_canonical_string(&self) -> Result<String> {
        let mut text =
            serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))?;
        text.push('\n');
        Ok(text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_canonical_string()?)?;
        Ok(())
    }

    /// Builds the domain objects, checking shapes as it goes. Group
    /// relations are NOT checked here; run `action.validate()` (the
    /// `validate` command) before trusting analyses.
    pub fn parse(&self) -> Result<ParsedSystem> {
        let shape = AlgebraShape::new(self.blocks.clone())?;
        let presentation = match &self.group {
            GroupSpec::Z => GroupPresentation::Z,
            GroupSpec::Zd { d } => GroupPresentation::Zd(*d),
            GroupSpec::CyclicProduct { orders } => GroupPresentation::CyclicProduct(orders.clone()),
        };
        if self.generators.len() != presentation.generator_count() {
            return Err(Error::Parse(format!(
                "group expects {} generators, file provides {}",
                presentation.generator_count(),
                self.generators.len()
            )));
        }
        let mut generators = Vec::with_capacity(self.generators.len());
        for (g, spec) in self.generators.iter().enumerate() {
            let unitaries = spec
                .unitaries
                .iter()
                .map(matrix_from_data)
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::Parse(format!("generator {g}: {e}")))?;
            let auto = Automorphism::new(shape.clone(), spec.permutation.clone(), unitaries)
                .map_err(|e| match e {
                    Error::NotUnitary {
                        block, deviation, ..
                    } => Error::NotUnitary {
                        generator: g,
                        block,
                        deviation,
                    },
                    other => Error::Parse(format!("generator {g}: {other}")),
                })?;
            generators.push(auto);
        }
        let action = GroupAction::new(presentation, generators)?;

        let mut observables = BTreeMap::new();
        for (name, data) in &self.observables {
            let element = element_from_data(&shape, data)
                .map_err(|e| Error::Parse(format!("observable {name:?}: {e}")))?;
            observables.insert(name.clone(), element);
        }
        let mut states = BTreeMap::new();
        for (name, data) in &self.states {
            let element = element_from_data(&shape, data)
                .map_err(|e| Error::Parse(format!("state {name:?}: {e}")))?;
            let state = State::new(shape.clone(), element.blocks().to_vec())
                .map_err(|e| Error::Parse(format!("state {name:?}: {e}")))?;
            states.insert(name.clone(), state);
        }
        Ok(ParsedSystem {
            shape,
            action,
            observables,
            states,
            ideal: self.ideal.clone(),
        })
    }

    /// Builds a file document from domain objects.
    pub fn from_system(
        action: &GroupAction<f64>,
        observables: &BTreeMap<String, Element<f64>>,
        states: &BTreeMap<String, State<f64>>,
        ideal: Option<Vec<usize>>,
    ) -> Self {
        let group = match action.presentation() {
            GroupPresentation::Z => GroupSpec::Z,
            GroupPresentation::Zd(d) => GroupSpec::Zd { d: *d },
            GroupPresentation::CyclicProduct(orders) => GroupSpec::CyclicProduct {
                orders: orders.clone(),
            },
        };
        let generators = action
            .generators()
            .iter()
            .map(|gen| GeneratorSpec {
                permutation: gen.permutation().to_vec(),
                unitaries: gen.unitaries().iter().map(matrix_to_data).collect(),
            })
            .collect();
        SystemFile {
            blocks: action.shape().block_dims().to_vec(),
            group,
            generators,
            observables: observables
                .iter()
                .map(|(k, v)| (k.clone(), element_to_data(v)))
                .collect(),
            states: states
                .iter()
                .map(|(k, v)| (k.clone(), element_to_data(&v.density_element())))
                .collect(),
            ideal,
        }
    }
}

pub fn matrix_from_data(data: &MatrixData) -> Result<CMat<f64>> {
    let rows = data
        .iter()
        .map(|row| {
            row.iter()
                .map(|&[re, im]| Complex::new(re, im))
                .collect::<Vec<_>>()
        })
        .collect();
    CMat::from_rows(rows)
}

pub fn matrix_to_data(m: &CMat<f64>) -> MatrixData {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| [m[(r, c)].re, m[(r, c)].im])
                .collect()
        })
        .collect()
}

pub fn element_from_data(shape: &AlgebraShape, data: &ElementData) -> Result<Element<f64>> {
    let blocks = data
        .iter()
        .map(matrix_from_data)
        .collect::<Result<Vec<_>>>()?;
    Element::new(shape.clone(), blocks)
}

pub fn element_to_data(e: &Element<f64>) -> ElementData {
    e.blocks().iter().map(matrix_to_data).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic3_file() -> SystemFile {
        let text = r#"{
  "blocks": [1, 1, 1],
  "group": { "kind": "Z" },
  "generators": [
    {
      "permutation": [1, 2, 0],
      "unitaries": [[[[1.0, 0.0]]], [[[1.0, 0.0]]], [[[1.0, 0.0]]]]
    }
  ],
  "observables": {
    "a": [[[[1.0, 0.0]]], [[[0.0, 0.0]]], [[[0.0, 0.0]]]]
  }
}"#;
        SystemFile::parse_str(text).unwrap()
    }

    #[test]
    fn parse_builds_valid_action() {
        let file = cyclic3_file();
        let system = file.parse().unwrap();
        assert_eq!(system.shape.block_dims(), &[1, 1, 1]);
        assert!(system.action.validate().unwrap().is_valid());
        assert!(system.observables.contains_key("a"));
    }

    #[test]
    fn canonical_serialization_is_a_fixpoint() {
        let file = cyclic3_file();
        let once = file.to_canonical_string().unwrap();
        let reparsed = SystemFile::parse_str(&once).unwrap();
        let twice = reparsed.to_canonical_string().unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn seventeen_digit_decimals_round_trip() {
        let mut file = cyclic3_file();
        let v = 0.123_456_789_012_345_67_f64;
        file.observables.insert(
            "b".into(),
            vec![
                vec![vec![[v, -v]]],
                vec![vec![[0.0, 0.0]]],
                vec![vec![[1.0, 0.0]]],
            ],
        );
        let text = file.to_canonical_string().unwrap();
        let reparsed = SystemFile::parse_str(&text).unwrap();
        assert_eq!(file, reparsed);
        assert_eq!(text, reparsed.to_canonical_string().unwrap());
    }

    #[test]
    fn malformed_json_is_a_parse_error() {
        assert!(matches!(
            SystemFile::parse_str("{ not json"),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn mismatched_observable_blocks_are_rejected() {
        let mut file = cyclic3_file();
        file.observables
            .insert("bad".into(), vec![vec![vec![[1.0, 0.0]]]]);
        assert!(file.parse().is_err());
    }

    #[test]
    fn non_unitary_generator_is_rejected_with_index() {
        let mut file = cyclic3_file();
        file.generators[0].unitaries[1] = vec![vec![[2.0, 0.0]]];
        match file.parse().unwrap_err() {
            Error::NotUnitary {
                generator, block, ..
            } => {
                assert_eq!(generator, 0);
                assert_eq!(block, 1);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn bad_permutation_dimension_is_rejected() {
        // Block of dim 1 sent to a dim-2 slot.
        let text = r#"{
  "blocks": [1, 2],
  "group": { "kind": "Z" },
  "generators": [
    {
      "permutation": [1, 0],
      "unitaries": [[[[1.0, 0.0]]], [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]]
    }
  ],
  "observables": {}
}"#;
        let file = SystemFile::parse_str(text).unwrap();
        assert!(file.parse().is_err());
    }
}
