use std::collections::HashSet;

use super::orbit::{orbit, Action};
use super::{AffineMap, GenGroup, LinMap};
use crate::error::{Error, Result};
use crate::space::Space;

pub const ELEMENT_CAP: usize = 1 << 24;

/// `|G| / |x^G|`.
pub fn stabilizer_order(group_order: u128, orbit_len: u128) -> Result<u128> {
    if orbit_len == 0 || group_order % orbit_len != 0 {
        return Err(Error::OrbitNotDividing { group_order, orbit_len });
    }
    Ok(group_order / orbit_len)
}

struct RightMul<'a> {
    space: &'a Space,
    gens: &'a [AffineMap],
}

impl Action for RightMul<'_> {
    type Item = AffineMap;
    fn ngens(&self) -> usize {
        self.gens.len()
    }
    fn act(&self, g: usize, x: &AffineMap) -> AffineMap {
        x.then(self.space, &self.gens[g])
    }
}

/// All elements of a finite group, in BFS order from the identity.
#[derive(Debug, Clone)]
pub struct ElementSet {
    pub elems: Vec<AffineMap>,
    set: HashSet<AffineMap>,
}

impl ElementSet {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, g: &AffineMap) -> bool {
        self.set.contains(g)
    }
}

/// Closure of the generators by BFS over the Cayley graph.
pub fn enumerate_elements(group: &GenGroup, cap: usize) -> Result<ElementSet> {
    let cap = cap.min(ELEMENT_CAP);
    let space = &group.space;
    let act = RightMul { space, gens: &group.gens };
    let o = orbit(&act, AffineMap::identity(space), cap).map_err(|e| match e {
        Error::CapExceeded { size, cap, .. } => Error::CapExceeded {
            what: format!("elements of {}", group.name),
            size,
            cap,
        },
        other => other,
    })?;
    let elems = o.items;
    let set = elems.iter().cloned().collect();
    Ok(ElementSet { elems, set })
}

/// Stabilizer of `seed` from Schreier generators `u_x g u_{xg}^{-1}`.
///
/// Generators are kept only when they enlarge the subgroup found so far; the
/// scan stops early once the order reaches `|G| / |orbit|` when `|G|` is known.
pub fn schreier_stabilizer<A: Action>(
    group: &GenGroup,
    action: &A,
    seed: A::Item,
    cap: usize,
) -> Result<GenGroup> {
    if action.ngens() != group.gens.len() {
        return Err(Error::DimensionMismatch { expected: group.gens.len(), got: action.ngens() });
    }
    let space = &group.space;
    let o = orbit(action, seed, cap)?;
    let target = match group.known_order {
        Some(n) => Some(stabilizer_order(n, o.len() as u128)?),
        None => None,
    };
    let mut trans: Vec<AffineMap> = Vec::with_capacity(o.len());
    trans.push(AffineMap::identity(space));
    for i in 1..o.len() {
        let (par, g) = o.parent(i).expect("non-seed item has a parent");
        let u = trans[par].then(space, &group.gens[g]);
        trans.push(u);
    }
    let mut stab = GenGroup::new(format!("{}_stab", group.name), space.clone(), Vec::new());
    let mut closure = enumerate_elements(&stab, cap)?;
    'outer: for (i, x) in o.items.iter().enumerate() {
        for (g, gen) in group.gens.iter().enumerate() {
            if target.is_some_and(|t| closure.len() as u128 >= t) {
                break 'outer;
            }
            let y = action.act(g, x);
            let j = o.position(&y).expect("orbit is closed");
            let s = trans[i].then(space, gen).then(space, &trans[j].inverse(space)?);
            if s.is_identity(space) || closure.contains(&s) {
                continue;
            }
            stab.gens.push(s);
            closure = enumerate_elements(&stab, cap)?;
        }
    }
    stab.known_order = Some(closure.len() as u128);
    Ok(stab)
}

/// Generators picked in element order, each outside the span of the
/// previous ones.
pub fn greedy_generators(s: &Space, elems: &[LinMap]) -> Vec<LinMap> {
    let mut gens: Vec<LinMap> = Vec::new();
    let mut group: HashSet<LinMap> = HashSet::from([LinMap::identity(s)]);
    for e in elems {
        if group.contains(e) {
            continue;
        }
        gens.push(e.clone());
        // closure under right multiplication by the generators
        let mut frontier: Vec<LinMap> = group.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = x.then(s, g);
                if group.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        if group.len() == elems.len() {
            break;
        }
    }
    gens
}
