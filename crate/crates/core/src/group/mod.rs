//! Groups given by generators acting on the points of `V`.

mod affine;
mod orbit;
mod stabilizer;

pub use affine::{AffineMap, LinMap};
pub use orbit::{
    orbit, point_orbits, Action, OnFlags, OnPoints, OnSets, OnSubspaces, Orbit, ORBIT_CAP,
};
pub use stabilizer::{
    enumerate_elements, greedy_generators, schreier_stabilizer, stabilizer_order, ElementSet, ELEMENT_CAP,
};

use std::sync::Arc;

use crate::error::Result;
use crate::linalg::Matrix;
use crate::space::Space;

#[derive(Debug, Clone)]
pub struct GenGroup {
    pub name: String,
    pub space: Arc<Space>,
    pub gens: Vec<AffineMap>,
    pub known_order: Option<u128>,
}

impl GenGroup {
    pub fn new(name: impl Into<String>, space: Arc<Space>, gens: Vec<AffineMap>) -> Self {
        GenGroup { name: name.into(), space, gens, known_order: None }
    }

    pub fn with_order(mut self, order: u128) -> Self {
        self.known_order = Some(order);
        self
    }

    /// Linear group from GF(q)-matrices acting on rows.
    pub fn from_matrices(name: impl Into<String>, space: Arc<Space>, mats: &[Matrix]) -> Result<Self> {
        let gens = mats
            .iter()
            .map(|m| LinMap::from_matrix(&space, m).map(AffineMap::linear))
            .collect::<Result<_>>()?;
        Ok(GenGroup::new(name, space, gens))
    }

    pub fn from_linear(name: impl Into<String>, space: Arc<Space>, lins: Vec<LinMap>) -> Self {
        let gens = lins.into_iter().map(AffineMap::linear).collect();
        GenGroup::new(name, space, gens)
    }

    pub fn is_linear(&self) -> bool {
        self.gens.iter().all(|g| g.t == 0)
    }

    /// Whether the generators contain every prime-basis translation.
    pub fn contains_translations(&self) -> bool {
        let s = &self.space;
        (0..s.dim()).all(|k| {
            self.gens
                .iter()
                .any(|g| g.t == s.basis_point(k) && g.is_translation(s))
        })
    }

    /// The non-translation generators, as a linear group, when the group is
    /// `T:G0` presented by translations plus linear generators.
    pub fn point_stabilizer(&self) -> Option<GenGroup> {
        if !self.contains_translations() {
            return None;
        }
        let s = &self.space;
        let mut lins = Vec::new();
        for g in &self.gens {
            if g.is_translation(s) {
                continue;
            }
            if g.t != 0 {
                return None;
            }
            lins.push(g.clone());
        }
        let order = self
            .known_order
            .map(|o| o / (s.size() as u128));
        Some(GenGroup {
            name: format!("{}_0", self.name),
            space: s.clone(),
            gens: lins,
            known_order: order,
        })
    }

    /// Linear parts of the generators.
    pub fn linear_gens(&self) -> Vec<LinMap> {
        self.gens.iter().map(|g| g.lin.clone()).collect()
    }

    pub fn perms(&self) -> Vec<Vec<u32>> {
        crate::par::map(&self.gens, |g| g.perm(&self.space))
    }

    /// Same maps viewed on `V_{nh}(p)`.
    pub fn over_prime_field(&self) -> Result<GenGroup> {
        Ok(GenGroup {
            name: self.name.clone(),
            space: self.space.prime_view()?,
            gens: self.gens.clone(),
            known_order: self.known_order,
        })
    }

    /// Appends generators.
    pub fn extend(mut self, name: impl Into<String>, extra: Vec<AffineMap>, order: Option<u128>) -> Self {
        self.name = name.into();
        self.gens.extend(extra);
        self.known_order = order;
        self
    }
}
