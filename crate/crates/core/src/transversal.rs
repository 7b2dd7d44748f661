//! Exact transversality `τ(ℋ)`: the minimum size of a set meeting every
//! member of a finite family.
//!
//! Branch and bound. Each node picks the smallest uncovered set (after removing
//! elements already ruled out) and branches on which of its elements is the
//! first one taken. Nodes are pruned with the larger of a disjoint-packing
//! bound and a covering-degree bound; the incumbent starts from a greedy cover.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::{SetFamily, Subset};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    /// Size of the greedy cover that seeded the search.
    pub greedy_upper: usize,
    /// Size of a greedily built pairwise-disjoint subfamily at the root.
    pub packing_lower: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransversalResult {
    pub size: usize,
    pub witness: Subset,
    pub stats: SearchStats,
}

pub fn is_transversal(t: Subset, family: &SetFamily) -> bool {
    family.sets().iter().all(|s| s.meets(t))
}

/// `t` is a transversal and no `t ∖ {x}` is.
pub fn is_minimal_transversal(t: Subset, family: &SetFamily) -> bool {
    is_transversal(t, family) && t.iter().all(|x| !is_transversal(t.without(x), family))
}

pub fn tau(family: &SetFamily) -> Result<TransversalResult> {
    if family.sets().iter().any(|s| s.is_empty()) {
        return Err(Error::NoTransversal);
    }
    let sets = minimal_members(family.sets());
    let greedy = greedy_cover(&sets);
    let packing_lower = packing_bound(&sets.iter().map(|s| s.bits()).collect::<Vec<_>>());
    let mut search = Search { sets: sets.iter().map(|s| s.bits()).collect(), best: greedy.bits(), nodes: 0 };
    search.run(0, 0);
    let witness = Subset::from_bits(search.best);
    let size = witness.len();
    debug_assert!(is_transversal(witness, family));
    assert!(packing_lower <= size && size <= greedy.len(), "bounds bracket the optimum");
    Ok(TransversalResult {
        size,
        witness,
        stats: SearchStats { nodes: search.nodes, greedy_upper: greedy.len(), packing_lower },
    })
}

/// Drops members that contain another member; they are hit automatically.
fn minimal_members(sets: &[Subset]) -> Vec<Subset> {
    let mut sorted: Vec<Subset> = sets.to_vec();
    sorted.sort_by_key(|s| (s.len(), *s));
    sorted.dedup();
    let mut kept: Vec<Subset> = Vec::new();
    for s in sorted {
        if !kept.iter().any(|k| k.is_subset(s)) {
            kept.push(s);
        }
    }
    kept
}

/// Repeatedly takes the element hitting the most unhit sets, lowest index first.
pub fn greedy_cover(sets: &[Subset]) -> Subset {
    let mut chosen = Subset::EMPTY;
    let mut open: Vec<Subset> = sets.to_vec();
    while !open.is_empty() {
        let points = open.iter().fold(Subset::EMPTY, |a, s| a.union(*s));
        let best = points
            .iter()
            .max_by_key(|&x| (open.iter().filter(|s| s.contains(x)).count(), std::cmp::Reverse(x)))
            .expect("open sets are nonempty");
        chosen = chosen.with(best);
        open.retain(|s| !s.contains(best));
    }
    chosen
}

/// Size of a maximal pairwise-disjoint subfamily, smallest sets first.
fn packing_bound(sets: &[u64]) -> usize {
    let mut order: Vec<u64> = sets.to_vec();
    order.sort_by_key(|s| (s.count_ones(), *s));
    let mut used = 0u64;
    let mut count = 0;
    for s in order {
        if s & used == 0 {
            used |= s;
            count += 1;
        }
    }
    count
}

struct Search {
    sets: Vec<u64>,
    best: u64,
    nodes: u64,
}

impl Search {
    fn run(&mut self, chosen: u64, banned: u64) {
        self.nodes += 1;
        let taken = chosen.count_ones() as usize;
        let best = self.best.count_ones() as usize;
        let mut open: Vec<u64> = Vec::new();
        for &s in &self.sets {
            if s & chosen == 0 {
                let r = s & !banned;
                if r == 0 {
                    return;
                }
                open.push(r);
            }
        }
        if open.is_empty() {
            if taken < best {
                self.best = chosen;
            }
            return;
        }
        if taken + 1 >= best {
            return;
        }
        if taken + lower_bound(&open) >= best {
            return;
        }
        let pivot = *open.iter().min_by_key(|s| (s.count_ones(), **s)).expect("nonempty");
        let mut excluded = banned;
        let mut rest = pivot;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest &= rest - 1;
            self.run(chosen | bit, excluded);
            excluded |= bit;
            if taken + 1 >= self.best.count_ones() as usize {
                return;
            }
        }
    }
}

fn lower_bound(open: &[u64]) -> usize {
    let packing = packing_bound(open);
    let mut degree = [0usize; 64];
    for &s in open {
        let mut r = s;
        while r != 0 {
            degree[r.trailing_zeros() as usize] += 1;
            r &= r - 1;
        }
    }
    // k elements each hitting at most max_deg sets
    let max_deg = degree.iter().copied().max().unwrap_or(1).max(1);
    packing.max(open.len().div_ceil(max_deg))
}
