//! Shelf assignments for reactions of nondegenerate fundamental classes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use super::partition::{EquivalencePartition, FundamentalClasses};
use super::patterns::SignPattern;
use crate::network::{graph, ReactionNetwork};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shelf {
    Upper,
    Middle,
    Lower,
}

impl fmt::Display for Shelf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shelf::Upper => "upper",
            Shelf::Middle => "middle",
            Shelf::Lower => "lower",
        })
    }
}

const FREE_ORDER: [Shelf; 3] = [Shelf::Middle, Shelf::Upper, Shelf::Lower];

/// Shelf of every reaction in a nondegenerate fundamental class.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Shelving {
    pub shelves: BTreeMap<usize, Shelf>,
}

impl Shelving {
    pub fn shelf(&self, j: usize) -> Option<Shelf> {
        self.shelves.get(&j).copied()
    }

    pub fn on(&self, shelf: Shelf) -> Vec<usize> {
        self.shelves
            .iter()
            .filter(|(_, s)| **s == shelf)
            .map(|(j, _)| *j)
            .collect()
    }
}

/// Groups of reactions forced onto a common shelf within one class.
#[derive(Clone, Debug, PartialEq, Eq)]
struct ClassUnits {
    units: Vec<Vec<usize>>,
    /// `Some` when the unit's shelf is determined by the rules.
    fixed: Vec<Option<Shelf>>,
}

impl ClassUnits {
    fn build(
        net: &ReactionNetwork,
        partition: &EquivalencePartition,
        fundamental: &FundamentalClasses,
        pattern: &SignPattern,
        class: usize,
    ) -> Option<Self> {
        let fc = &fundamental.classes[class];
        let reactions = &fc.reactions;
        let local = |j: usize| reactions.iter().position(|&x| x == j).unwrap();
        let mut uf = UnionFind::<usize>::new(reactions.len());
        for (a, &ja) in reactions.iter().enumerate() {
            if let Some(rev) = net.reactions()[ja].reverse {
                if reactions.contains(&rev) {
                    uf.union(a, local(rev));
                }
            }
            for (b, &jb) in reactions.iter().enumerate().skip(a + 1) {
                let (ya, yb) = (net.reactions()[ja].reactant, net.reactions()[jb].reactant);
                let same_terminal = fc
                    .colinkage
                    .terminal_classes()
                    .iter()
                    .any(|c| c.contains(&ya) && c.contains(&yb));
                if ya == yb || same_terminal {
                    uf.union(a, b);
                }
            }
        }
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (a, &j) in reactions.iter().enumerate() {
            by_root.entry(uf.find(a)).or_default().push(j);
        }
        let mut units: Vec<Vec<usize>> = by_root.into_values().collect();
        units.sort();

        let nonterminal: Vec<&Vec<usize>> = fc.colinkage.nonterminal_classes();
        let p_members = &partition.classes[class].members;
        let p_edges: Vec<(usize, usize)> = p_members
            .iter()
            .map(|&j| (net.reactions()[j].reactant, net.reactions()[j].product))
            .collect();
        let mut p_vertices: Vec<usize> = p_edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        p_vertices.sort_unstable();
        p_vertices.dedup();
        let big_cycle = graph::has_undirected_cycle(&p_vertices, &p_edges);
        let nonpositive_rho = pattern.rho_sign(class).is_some_and(|s| s <= 0);

        let mut fixed = Vec::with_capacity(units.len());
        for unit in &units {
            let forced_middle = big_cycle
                || unit.iter().any(|&j| {
                    let y = net.reactions()[j].reactant;
                    !net.is_reversible(j) || nonterminal.iter().any(|c| c.contains(&y))
                });
            fixed.push(match (forced_middle, nonpositive_rho) {
                (true, true) => return None,
                (true, false) => Some(Shelf::Middle),
                (false, true) => Some(Shelf::Upper),
                (false, false) => None,
            });
        }
        Some(Self { units, fixed })
    }

    fn free_count(&self) -> usize {
        self.fixed.iter().filter(|f| f.is_none()).count()
    }

    fn write(&self, digits: &[usize], out: &mut BTreeMap<usize, Shelf>) {
        let mut free = digits.iter();
        for (unit, fixed) in self.units.iter().zip(&self.fixed) {
            let shelf = fixed.unwrap_or_else(|| FREE_ORDER[*free.next().unwrap()]);
            for &j in unit {
                out.insert(j, shelf);
            }
        }
    }
}

/// Lazy enumeration of all admissible shelvings; the all-middle choice comes first.
#[derive(Clone, Debug)]
pub struct Shelvings {
    classes: Vec<ClassUnits>,
    /// One base-3 digit per free unit, across all classes.
    digits: Vec<usize>,
    done: bool,
}

impl Shelvings {
    pub fn new(
        net: &ReactionNetwork,
        partition: &EquivalencePartition,
        fundamental: &FundamentalClasses,
        pattern: &SignPattern,
    ) -> Self {
        let mut classes = Vec::new();
        for class in 0..partition.classes.len() {
            if pattern.is_degenerate(class) {
                continue;
            }
            match ClassUnits::build(net, partition, fundamental, pattern, class) {
                Some(units) => classes.push(units),
                None => {
                    return Self {
                        classes: Vec::new(),
                        digits: Vec::new(),
                        done: true,
                    }
                }
            }
        }
        let free = classes.iter().map(ClassUnits::free_count).sum();
        Self {
            classes,
            digits: vec![0; free],
            done: false,
        }
    }

    /// Number of shelvings the enumeration will produce.
    pub fn total(&self) -> u128 {
        if self.done && self.classes.is_empty() && self.digits.is_empty() {
            return 0;
        }
        3u128.saturating_pow(self.digits.len() as u32)
    }
}

impl Iterator for Shelvings {
    type Item = Shelving;

    fn next(&mut self) -> Option<Shelving> {
        if self.done {
            return None;
        }
        let mut shelves = BTreeMap::new();
        let mut offset = 0;
        for class in &self.classes {
            let n = class.free_count();
            class.write(&self.digits[offset..offset + n], &mut shelves);
            offset += n;
        }
        // Advance the odometer; the last digit turns fastest.
        let mut pos = self.digits.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.digits[pos] += 1;
            if self.digits[pos] < 3 {
                break;
            }
            self.digits[pos] = 0;
        }
        Some(Shelving { shelves })
    }
}

/// Checks a shelving against every shelf rule, reaction by reaction and pair by pair.
///
/// Returns a description of the first violated rule.
pub fn check_rules(
    net: &ReactionNetwork,
    partition: &EquivalencePartition,
    fundamental: &FundamentalClasses,
    pattern: &SignPattern,
    shelving: &Shelving,
) -> Result<(), String> {
    let mut expected: BTreeSet<usize> = BTreeSet::new();
    for (class, fc) in fundamental.classes.iter().enumerate() {
        if pattern.is_degenerate(class) {
            continue;
        }
        expected.extend(fc.reactions.iter().copied());
        let shelf = |j: usize| {
            shelving
                .shelf(j)
                .ok_or_else(|| format!("reaction {} has no shelf", net.reactions()[j].id))
        };
        let id = |j: usize| net.reactions()[j].id.clone();
        let reactant = |j: usize| net.reactions()[j].reactant;

        // A cycle exists iff the simple graph has more edges than a spanning forest.
        let members = &partition.classes[class].members;
        let mut edge_set = BTreeSet::new();
        let mut vertex_set = BTreeSet::new();
        for &j in members {
            let (a, b) = (reactant(j), net.reactions()[j].product);
            edge_set.insert((a.min(b), a.max(b)));
            vertex_set.insert(a);
            vertex_set.insert(b);
        }
        let vertices: Vec<usize> = vertex_set.into_iter().collect();
        let edges: Vec<(usize, usize)> = edge_set.iter().copied().collect();
        let components = graph::undirected_components(&vertices, &edges).len();
        let cyclic = edges.len() + components > vertices.len();

        let rho_nonpositive = pattern.rho_sign(class).is_some_and(|s| s <= 0);
        let colinkage = &fc.colinkage;
        for &j in &fc.reactions {
            let s = shelf(j)?;
            let strong = colinkage.strong_class_of(reactant(j)).unwrap();
            if !net.is_reversible(j) && s != Shelf::Middle {
                return Err(format!("irreversible {} is not on the middle shelf", id(j)));
            }
            if rho_nonpositive && s != Shelf::Upper {
                return Err(format!("{} must be upper since rho is not positive", id(j)));
            }
            if !colinkage.terminal[strong] && s != Shelf::Middle {
                return Err(format!("{} has a nonterminal reactant but is not middle", id(j)));
            }
            if cyclic && s != Shelf::Middle {
                return Err(format!("{} lies in a class with a cycle but is not middle", id(j)));
            }
            for &k in &fc.reactions {
                if k <= j {
                    continue;
                }
                let t = shelf(k)?;
                let paired = net.reactions()[j].reverse == Some(k);
                let same_reactant = reactant(j) == reactant(k);
                let strong_k = colinkage.strong_class_of(reactant(k)).unwrap();
                let same_terminal = strong == strong_k && colinkage.terminal[strong];
                if (paired || same_reactant || same_terminal) && s != t {
                    return Err(format!("{} and {} must share a shelf", id(j), id(k)));
                }
            }
        }
    }
    let assigned: BTreeSet<usize> = shelving.shelves.keys().copied().collect();
    if assigned != expected {
        return Err("shelved reactions differ from the nondegenerate classes".to_string());
    }
    Ok(())
}
