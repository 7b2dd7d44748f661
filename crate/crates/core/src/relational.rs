//! Finite relational structures, their isomorphism types, profiles and the
//! invariant part of the set algebra (the age algebra at finite scale).

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setfn::{product, SetFunction};
use crate::subset::{check_ground, ksubsets, Subset};

/// Canonical forms are computed by trying every permutation of the base.
pub const MAX_CANONICAL_BASE: usize = 8;

/// `R = (E, (ρᵢ))` with `E = {0, .., base_size-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "StructureRepr", into = "StructureRepr")]
pub struct RelStructure {
    base_size: usize,
    signature: Vec<usize>,
    relations: Vec<BTreeSet<Vec<usize>>>,
}

#[derive(Serialize, Deserialize)]
struct StructureRepr {
    base_size: usize,
    signature: Vec<usize>,
    relations: Vec<Vec<Vec<usize>>>,
}

impl TryFrom<StructureRepr> for RelStructure {
    type Error = Error;

    fn try_from(r: StructureRepr) -> Result<Self> {
        RelStructure::new(r.base_size, r.signature, r.relations)
    }
}

impl From<RelStructure> for StructureRepr {
    fn from(r: RelStructure) -> Self {
        StructureRepr {
            base_size: r.base_size,
            signature: r.signature,
            relations: r.relations.into_iter().map(|rel| rel.into_iter().collect()).collect(),
        }
    }
}

impl RelStructure {
    pub fn new(base_size: usize, signature: Vec<usize>, relations: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        check_ground(base_size)?;
        if signature.len() != relations.len() {
            return Err(Error::InvalidStructure(format!(
                "{} arities but {} relations",
                signature.len(),
                relations.len()
            )));
        }
        let mut rels = Vec::with_capacity(relations.len());
        for (i, (tuples, &arity)) in relations.into_iter().zip(&signature).enumerate() {
            let mut set = BTreeSet::new();
            for t in tuples {
                if t.len() != arity {
                    return Err(Error::InvalidStructure(format!("relation {i} has arity {arity} but contains {t:?}")));
                }
                if let Some(&x) = t.iter().find(|&&x| x >= base_size) {
                    return Err(Error::InvalidStructure(format!("element {x} outside base of size {base_size}")));
                }
                set.insert(t);
            }
            rels.push(set);
        }
        Ok(RelStructure { base_size, signature, relations: rels })
    }

    /// A structure with empty signature.
    pub fn empty(base_size: usize) -> Self {
        RelStructure { base_size, signature: Vec::new(), relations: Vec::new() }
    }

    /// Undirected loopless graph as a symmetric binary relation.
    pub fn graph(base_size: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut tuples = Vec::new();
        for &(a, b) in edges {
            if a == b {
                return Err(Error::InvalidStructure(format!("loop at {a}")));
            }
            tuples.push(vec![a, b]);
            tuples.push(vec![b, a]);
        }
        RelStructure::new(base_size, vec![2], vec![tuples])
    }

    /// The graph whose edges are the bits of `mask` over pairs in colex order.
    pub fn graph_from_mask(base_size: usize, mask: u64) -> Self {
        let edges: Vec<(usize, usize)> = ksubsets(base_size, 2)
            .into_iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| (p.min().unwrap(), p.max().unwrap()))
            .collect();
        RelStructure::graph(base_size, &edges).expect("valid graph")
    }

    /// Disjoint union: `other` is placed after `self`. Signatures must agree.
    pub fn disjoint_union(&self, other: &RelStructure) -> Result<Self> {
        if self.signature != other.signature {
            return Err(Error::InvalidStructure("signatures differ".into()));
        }
        let shift = self.base_size;
        let relations = self
            .relations
            .iter()
            .zip(&other.relations)
            .map(|(a, b)| a.iter().cloned().chain(b.iter().map(|t| t.iter().map(|x| x + shift).collect())).collect())
            .collect();
        RelStructure::new(self.base_size + other.base_size, self.signature.clone(), relations)
    }

    /// Adds a relation symbol.
    pub fn with_relation(&self, arity: usize, tuples: Vec<Vec<usize>>) -> Result<Self> {
        let mut signature = self.signature.clone();
        signature.push(arity);
        let mut relations: Vec<Vec<Vec<usize>>> = self.relations.iter().map(|r| r.iter().cloned().collect()).collect();
        relations.push(tuples);
        RelStructure::new(self.base_size, signature, relations)
    }

    pub fn base_size(&self) -> usize {
        self.base_size
    }

    pub fn signature(&self) -> &[usize] {
        &self.signature
    }

    pub fn relations(&self) -> &[BTreeSet<Vec<usize>>] {
        &self.relations
    }

    pub fn holds(&self, relation: usize, tuple: &[usize]) -> bool {
        self.relations[relation].contains(tuple)
    }

    /// Induced substructure on `a`, re-indexed `0..|a|` in increasing order.
    pub fn restriction(&self, a: Subset) -> RelStructure {
        let mut index = [usize::MAX; 64];
        for (i, x) in a.iter().enumerate() {
            index[x] = i;
        }
        let relations = self
            .relations
            .iter()
            .map(|rel| {
                rel.iter()
                    .filter(|t| t.iter().all(|&x| a.contains(x)))
                    .map(|t| t.iter().map(|&x| index[x]).collect())
                    .collect()
            })
            .collect();
        RelStructure { base_size: a.len(), signature: self.signature.clone(), relations }
    }

    /// Relabels the base: element `x` becomes `perm[x]`.
    pub fn permuted(&self, perm: &[usize]) -> RelStructure {
        assert_eq!(perm.len(), self.base_size);
        let relations = self
            .relations
            .iter()
            .map(|rel| rel.iter().map(|t| t.iter().map(|&x| perm[x]).collect()).collect())
            .collect();
        RelStructure { base_size: self.base_size, signature: self.signature.clone(), relations }
    }
}

/// Isomorphism type: the least relation encoding over all relabellings.
///
/// Each relation is encoded as the bit string of its characteristic function
/// over all tuples of its arity in lexicographic order; the encodings of the
/// relations are concatenated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IsoType {
    base_size: usize,
    signature: Vec<usize>,
    code: Vec<u64>,
}

impl IsoType {
    pub fn base_size(&self) -> usize {
        self.base_size
    }
}

struct Encoder {
    offsets: Vec<usize>,
    words: usize,
    base: usize,
}

impl Encoder {
    fn new(base: usize, signature: &[usize]) -> Self {
        let mut offsets = Vec::with_capacity(signature.len());
        let mut bits = 0;
        for &a in signature {
            offsets.push(bits);
            bits += base.pow(a as u32);
        }
        Encoder { offsets, words: bits.div_ceil(64), base }
    }

    fn encode(&self, r: &RelStructure, perm: &[usize], out: &mut Vec<u64>) {
        out.clear();
        out.resize(self.words, 0);
        for (rel, &offset) in r.relations.iter().zip(&self.offsets) {
            for t in rel {
                let idx = offset + t.iter().fold(0, |acc, &x| acc * self.base + perm[x]);
                // most significant bit first, so that Vec<u64> order is bit-string order
                out[idx / 64] |= 1u64 << (63 - idx % 64);
            }
        }
    }
}

/// Steps `perm` to the next permutation in lexicographic order.
fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).expect("successor exists");
    perm.swap(i, j);
    perm[i + 1..].reverse();
    true
}

pub fn canonical_form(r: &RelStructure) -> Result<IsoType> {
    if r.base_size > MAX_CANONICAL_BASE {
        return Err(Error::BaseTooLarge(r.base_size));
    }
    let enc = Encoder::new(r.base_size, &r.signature);
    let mut perm: Vec<usize> = (0..r.base_size).collect();
    let mut best = Vec::new();
    enc.encode(r, &perm, &mut best);
    let mut scratch = Vec::new();
    while next_permutation(&mut perm) {
        enc.encode(r, &perm, &mut scratch);
        if scratch < best {
            std::mem::swap(&mut scratch, &mut best);
        }
    }
    Ok(IsoType { base_size: r.base_size, signature: r.signature.clone(), code: best })
}

pub fn is_isomorphic(a: &RelStructure, b: &RelStructure) -> Result<bool> {
    if a.base_size != b.base_size || a.signature != b.signature {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

/// The `n`-subsets of the base grouped by the isomorphism type of their restriction.
pub fn types_at(r: &RelStructure, n: usize) -> Result<BTreeMap<IsoType, Vec<Subset>>> {
    let mut classes: BTreeMap<IsoType, Vec<Subset>> = BTreeMap::new();
    for a in ksubsets(r.base_size, n) {
        classes.entry(canonical_form(&r.restriction(a))?).or_default().push(a);
    }
    Ok(classes)
}

/// `φ_R(n)`: the number of isomorphism types of `n`-element restrictions.
pub fn profile(r: &RelStructure, n: usize) -> Result<usize> {
    if n > r.base_size {
        return Err(Error::Invalid(format!("n = {n} exceeds base size {}", r.base_size)));
    }
    Ok(types_at(r, n)?.len())
}

/// `(φ_R(0), .., φ_R(ℓ))`.
pub fn profile_sequence(r: &RelStructure) -> Result<Vec<usize>> {
    (0..=r.base_size).map(|n| profile(r, n)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Indicator {
    pub function: SetFunction,
    /// False when no `n`-subset has the requested type; the function is then zero.
    pub realized: bool,
}

/// `1` on the `n`-subsets whose restriction has type `t`.
pub fn invariant_indicator(r: &RelStructure, t: &IsoType, n: usize) -> Result<Indicator> {
    let sets = types_at(r, n)?.remove(t).unwrap_or_default();
    Ok(Indicator { realized: !sets.is_empty(), function: SetFunction::indicator(r.base_size, n, sets)? })
}

/// Indicators of every type realized at size `n`, in type order. They span the
/// `R`-invariant functions of degree `n`.
pub fn invariant_basis(r: &RelStructure, n: usize) -> Result<Vec<SetFunction>> {
    types_at(r, n)?.into_values().map(|sets| SetFunction::indicator(r.base_size, n, sets)).collect()
}

/// Whether `f` is constant on each isomorphism class of restrictions.
pub fn is_invariant(r: &RelStructure, f: &SetFunction) -> Result<bool> {
    if f.ground_size() != r.base_size {
        return Err(Error::GroundMismatch { left: r.base_size, right: f.ground_size() });
    }
    for sets in types_at(r, f.degree())?.values() {
        let first = f.value(sets[0]);
        if sets.iter().any(|&s| f.value(s) != first) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileReport {
    pub profile: Vec<usize>,
    /// Instances of `φ(n) ≤ (n+1)·φ(n+1)` checked, `n < ℓ`.
    pub growth_checks: usize,
    /// Instances of `φ(n) ≤ φ(n+m)` checked, `2n+m ≤ ℓ`.
    pub monotone_checks: usize,
}

/// Checks both profile inequality families, failing on the first violation.
pub fn check_profile_inequalities(r: &RelStructure) -> Result<ProfileReport> {
    let phi = profile_sequence(r)?;
    let l = r.base_size;
    let mut growth_checks = 0;
    for n in 0..l {
        if phi[n] > (n + 1) * phi[n + 1] {
            return Err(Error::ProfileInequality {
                n,
                m: 1,
                detail: format!("φ({n}) = {} > {}·φ({}) = {}", phi[n], n + 1, n + 1, (n + 1) * phi[n + 1]),
            });
        }
        growth_checks += 1;
    }
    let mut monotone_checks = 0;
    for n in 0..=l / 2 {
        for m in 0..=l - 2 * n {
            if phi[n] > phi[n + m] {
                return Err(Error::ProfileInequality {
                    n,
                    m,
                    detail: format!("φ({n}) = {} > φ({}) = {}", phi[n], n + m, phi[n + m]),
                });
            }
            monotone_checks += 1;
        }
    }
    Ok(ProfileReport { profile: phi, growth_checks, monotone_checks })
}

/// True iff every `F` with `|F| ≤ k` has a disjoint `F'` with an isomorphic
/// restriction. Requires `2k ≤ ℓ`.
pub fn disjoint_embedding_check(r: &RelStructure, k: usize) -> Result<bool> {
    if 2 * k > r.base_size {
        return Err(Error::Invalid(format!("2k = {} exceeds base size {}", 2 * k, r.base_size)));
    }
    for size in 0..=k {
        for sets in types_at(r, size)?.values() {
            let all_have_copy = sets.iter().all(|f| sets.iter().any(|g| g.is_disjoint(*f)));
            if !all_have_copy {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The indicator `f` of the type of `R|F`, which squares to zero when no two
/// disjoint sets carry that type.
pub fn kernel_zero_divisor(r: &RelStructure, f_set: Subset) -> Result<SetFunction> {
    if !f_set.fits(r.base_size) {
        return Err(Error::OutOfGround { set: f_set, ground_size: r.base_size });
    }
    let d = f_set.len();
    let t = canonical_form(&r.restriction(f_set))?;
    let sets = types_at(r, d)?.remove(&t).unwrap_or_default();
    for (i, a) in sets.iter().enumerate() {
        if sets[i..].iter().any(|b| a.is_disjoint(*b)) {
            return Err(Error::DisjointEmbedding);
        }
    }
    let f = SetFunction::indicator(r.base_size, d, sets)?;
    let square = product(&f, &f)?;
    assert!(square.is_zero(), "f² must vanish without disjoint copies");
    Ok(f)
}

/// The first `(n, m)` with `n + m ≤ max` and `h(n) + h(m) - 1 > h(n+m)`.
pub fn hilbert_violation(h: &[u64], max: usize) -> Result<Option<(usize, usize)>> {
    if h.len() <= max {
        return Err(Error::Invalid(format!("sequence has {} values, need {}", h.len(), max + 1)));
    }
    for total in 0..=max {
        for n in 0..=total {
            let m = total - n;
            if h[n] + h[m] > h[total] + 1 {
                return Ok(Some((n, m)));
            }
        }
    }
    Ok(None)
}

/// Whether `h(n) + h(m) - 1 ≤ h(n+m)` for all `n + m ≤ max`.
pub fn hilbert_inequality_check(h: &[u64], max: usize) -> Result<bool> {
    Ok(hilbert_violation(h, max)?.is_none())
}

/// Deterministic test corpora.
pub mod corpus {
    use super::*;

    /// One representative per isomorphism class of graphs on `base_size`
    /// vertices, found by canonicalizing every edge mask.
    pub fn all_graphs(base_size: usize) -> Vec<RelStructure> {
        use rayon::prelude::*;
        let pairs = base_size * base_size.saturating_sub(1) / 2;
        let classes: BTreeMap<IsoType, u64> = (0..1u64 << pairs)
            .into_par_iter()
            .map(|mask| {
                let g = RelStructure::graph_from_mask(base_size, mask);
                (canonical_form(&g).expect("small base"), mask)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(BTreeMap::new(), |mut acc, (t, mask)| {
                acc.entry(t).or_insert(mask);
                acc
            });
        classes.into_values().map(|mask| RelStructure::graph_from_mask(base_size, mask)).collect()
    }

    /// Random structure whose relations hold on each tuple with probability `density`.
    pub fn random_structure<R: Rng>(rng: &mut R, base_size: usize, signature: &[usize], density: f64) -> RelStructure {
        let relations = signature
            .iter()
            .map(|&a| tuples(base_size, a).into_iter().filter(|_| rng.gen_bool(density)).collect())
            .collect();
        RelStructure::new(base_size, signature.to_vec(), relations).expect("generated tuples are in range")
    }

    /// Every tuple of length `arity` over `0..base_size`, in lexicographic order.
    pub fn tuples(base_size: usize, arity: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for _ in 0..arity {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..base_size).map(move |x| {
                        let mut t = t.clone();
                        t.push(x);
                        t
                    })
                })
                .collect();
        }
        out
    }
}
