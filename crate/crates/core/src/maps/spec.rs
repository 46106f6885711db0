use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ComplexMap, LinearMap};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// JSON form of a map: `{"n": 3, "images": {"E11": [[[re, im], ..], ..], ..}}`
/// with one entry per hermitian basis label.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MapSpec {
    pub n: usize,
    pub images: BTreeMap<String, ComplexMatrix>,
}

impl MapSpec {
    pub fn from_map(map: &ComplexMap) -> Self {
        let images = map.basis().elements().iter().zip(map.images()).map(|(e, m)| (e.label(), m.clone())).collect();
        Self { n: map.dim(), images }
    }

    pub fn into_map(self) -> Result<ComplexMap> {
        let basis = super::HermitianBasis::new(self.n);
        if let Some(extra) = self.images.keys().find(|k| basis.by_label(k).is_none()) {
            return Err(Error::Parse(format!("unknown basis label `{extra}`")));
        }
        let images = basis
            .elements()
            .iter()
            .map(|e| self.images.get(&e.label()).cloned().ok_or_else(|| Error::Parse(format!("missing image for {e}"))))
            .collect::<Result<Vec<_>>>()?;
        LinearMap::from_images(self.n, images)
    }

    pub fn load(path: &Path) -> Result<ComplexMap> {
        let text = std::fs::read_to_string(path)?;
        let spec: MapSpec = serde_json::from_str(&text)?;
        spec.into_map()
    }
}
