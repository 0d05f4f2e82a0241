use crate::exact_geometry::linalg::{LinForm, Mat};
use crate::exact_geometry::root_system::RootSystem;
use crate::exact_geometry::weyl::enumerate_weyl;

/// Element of a finite linear group acting on the ambient space.
#[derive(Clone, Debug)]
pub struct GroupElement {
    pub matrix: Mat,
    pub inverse: Mat,
    /// Human-readable name (a reduced word for Weyl elements).
    pub name: String,
}

/// Vector space with an inner product, a finite reflection group and its walls.
/// Fans and their checks are stated relative to an ambient, so that facades reuse them.
#[derive(Clone, Debug)]
pub struct Ambient {
    pub dim: usize,
    pub gram: Mat,
    pub group: Vec<GroupElement>,
    /// Wall forms, one per reflecting hyperplane (positive roots for a root system).
    pub walls: Vec<LinForm>,
    pub label: String,
}

impl Ambient {
    pub fn from_root_system(rs: &RootSystem) -> Ambient {
        let names = ["s", "t", "u", "v"];
        let group = enumerate_weyl(rs)
            .into_iter()
            .map(|w| {
                let name = if w.word.is_empty() {
                    "e".to_string()
                } else {
                    w.word.iter().map(|&i| names[i]).collect::<Vec<_>>().join("")
                };
                GroupElement { matrix: w.matrix, inverse: w.inverse, name }
            })
            .collect();
        Ambient {
            dim: rs.rank,
            gram: rs.gram.clone(),
            group,
            walls: rs.positive_roots.clone(),
            label: rs.label.clone(),
        }
    }

    pub fn order(&self) -> usize {
        self.group.len()
    }
}

/// Names of simple generators by index.
pub fn generator_name(i: usize) -> &'static str {
    ["s", "t", "u", "v"][i]
}

/// Parses a generator subset such as `"st"` or `""` into indices.
pub fn parse_generators(s: &str, rank: usize) -> Option<Vec<usize>> {
    let mut v = Vec::new();
    for ch in s.chars().filter(|c| !c.is_whitespace() && *c != ',') {
        let i = ["s", "t", "u", "v"].iter().position(|n| n.starts_with(ch))?;
        if i >= rank {
            return None;
        }
        if !v.contains(&i) {
            v.push(i);
        }
    }
    v.sort();
    Some(v)
}
