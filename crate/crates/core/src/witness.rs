//! Explicit zero-divisor pairs, their certificates, and a heuristic search
//! for pairs with large support transversality.

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setfn::{annihilator_basis, product, product_by_splits, SetFunction};
use crate::subset::{binomial, ksubsets, subsets_of_size, SetFamily, Subset, MAX_GROUND};
use crate::transversal::tau;
use crate::Rational;

/// `f ≠ 0`, `g ≠ 0` and `fg = 0` on a common ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessPair {
    f: SetFunction,
    g: SetFunction,
}

impl WitnessPair {
    pub fn new(f: SetFunction, g: SetFunction) -> Result<Self> {
        check_nonzero(&f, &g)?;
        let fg = product(&f, &g)?;
        if let Some(q) = fg.support_sets().next() {
            return Err(Error::NotZeroDivisorPair(q));
        }
        Ok(WitnessPair { f, g })
    }

    pub fn f(&self) -> &SetFunction {
        &self.f
    }

    pub fn g(&self) -> &SetFunction {
        &self.g
    }

    pub fn ground_size(&self) -> usize {
        self.f.ground_size()
    }

    pub fn into_parts(self) -> (SetFunction, SetFunction) {
        (self.f, self.g)
    }

    /// `supp(f) ∪ supp(g)`.
    pub fn support(&self) -> SetFamily {
        self.f.support().union(&self.g.support()).expect("same ground set")
    }
}

fn check_nonzero(f: &SetFunction, g: &SetFunction) -> Result<()> {
    if f.ground_size() != g.ground_size() {
        return Err(Error::GroundMismatch { left: f.ground_size(), right: g.ground_size() });
    }
    if f.is_zero() || g.is_zero() {
        return Err(Error::Invalid("zero-divisor pair needs two nonzero functions".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessCertificate {
    pub pair: WitnessPair,
    pub tau_value: usize,
    pub tau_witness: Subset,
    /// Degree `m + n` at which the product was checked to vanish.
    pub checked_product_degree: usize,
    /// Value of `τ` predicted by a closed formula, when there is one.
    pub formula_expected: Option<usize>,
}

impl WitnessCertificate {
    pub fn expecting(mut self, value: usize) -> Self {
        self.formula_expected = Some(value);
        self
    }

    /// True when there is no formula or the formula agrees.
    pub fn matches(&self) -> bool {
        self.formula_expected.is_none_or(|v| v == self.tau_value)
    }
}

#[derive(Serialize, Deserialize)]
struct CertificateRepr {
    f: SetFunction,
    g: SetFunction,
    tau: usize,
    tau_witness: Subset,
    formula_expected: Option<usize>,
    #[serde(rename = "match")]
    matches: bool,
}

impl Serialize for WitnessCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CertificateRepr {
            f: self.pair.f.clone(),
            g: self.pair.g.clone(),
            tau: self.tau_value,
            tau_witness: self.tau_witness,
            formula_expected: self.formula_expected,
            matches: self.matches(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WitnessCertificate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = CertificateRepr::deserialize(d)?;
        let degree = repr.f.degree() + repr.g.degree();
        let pair = WitnessPair::new(repr.f, repr.g).map_err(D::Error::custom)?;
        Ok(WitnessCertificate {
            pair,
            tau_value: repr.tau,
            tau_witness: repr.tau_witness,
            checked_product_degree: degree,
            formula_expected: repr.formula_expected,
        })
    }
}

/// Rechecks the pair from scratch and computes `τ(supp f ∪ supp g)`.
pub fn verify(pair: &WitnessPair) -> Result<WitnessCertificate> {
    certify(pair.f.clone(), pair.g.clone())
}

/// Like [`verify`] for functions that have not been through [`WitnessPair::new`].
///
/// The product is evaluated by summing over splits of every `Q`, independently
/// of the sparse product used at construction.
pub fn certify(f: SetFunction, g: SetFunction) -> Result<WitnessCertificate> {
    check_nonzero(&f, &g)?;
    let fg = product_by_splits(&f, &g)?;
    if let Some(q) = fg.support_sets().next() {
        return Err(Error::NotZeroDivisorPair(q));
    }
    let checked_product_degree = f.degree() + g.degree();
    let pair = WitnessPair { f, g };
    let t = tau(&pair.support())?;
    Ok(WitnessCertificate {
        pair,
        tau_value: t.size,
        tau_witness: t.witness,
        checked_product_degree,
        formula_expected: None,
    })
}

fn q(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// `f = e` on `{0,1}×{0..n−1}` (element `(b,i)` at index `2i+b`) and `g` the
/// signed indicator of block transversals: `−1` when an odd number of the
/// chosen elements have `b = 0`, `+1` otherwise.
pub fn gadget_tau1n(n: usize) -> Result<WitnessPair> {
    if n == 0 {
        return Err(Error::DegenerateDegree("gadget needs n ≥ 1".into()));
    }
    let l = 2 * n;
    if l > MAX_GROUND {
        return Err(Error::GroundTooLarge(l));
    }
    let f = SetFunction::e(l)?;
    let mut g = SetFunction::zero(l, n)?;
    for choice in 0u64..(1 << n) {
        // bit i of `choice` is the b-coordinate picked in block i
        let set = Subset::from_indices((0..n).map(|i| 2 * i + ((choice >> i) & 1) as usize));
        let zeros = n - choice.count_ones() as usize;
        g.set(set, q(if zeros % 2 == 1 { -1 } else { 1 }))?;
    }
    WitnessPair::new(f, g)
}

/// A degree-`n` function on `2n` points with `eg = 0` and every coefficient nonzero.
pub fn gadget_full_support(n: usize) -> Result<SetFunction> {
    if n == 0 {
        return Err(Error::DegenerateDegree("gadget needs n ≥ 1".into()));
    }
    let l = 2 * n;
    if l > MAX_GROUND {
        return Err(Error::GroundTooLarge(l));
    }
    let e = SetFunction::e(l)?;
    let basis = annihilator_basis(&e, n)?;
    let full = usize::try_from(binomial(l, n)).expect("small");
    let mut t = 1i64;
    loop {
        let mut g = SetFunction::zero(l, n)?;
        let mut power = Rational::one();
        for v in &basis {
            g = g.add(&v.scale(&power))?;
            power *= q(t);
        }
        if g.support_len() == full {
            debug_assert!(product(&e, &g)?.is_zero());
            return Ok(g);
        }
        t += 1;
    }
}

/// `m` blocks of `2n` points; `f` is the indicator of the `m`-sets meeting
/// every block and `g` the sum of full-support gadgets placed on the blocks.
pub fn gadget_lower(m: usize, n: usize) -> Result<WitnessPair> {
    if m == 0 || n == 0 {
        return Err(Error::DegenerateDegree("gadget needs m, n ≥ 1".into()));
    }
    let block = 2 * n;
    let l = block.checked_mul(m).ok_or(Error::GroundTooLarge(usize::MAX))?;
    if l > MAX_GROUND {
        return Err(Error::GroundTooLarge(l));
    }
    let local = gadget_full_support(n)?;
    let mut g = SetFunction::zero(l, n)?;
    for i in 0..m {
        g = g.add(&local.relabel(l, |x| i * block + x)?)?;
    }
    let f = SetFunction::indicator(
        l,
        m,
        ksubsets(l, m).into_iter().filter(|a| {
            let blocks: Vec<usize> = a.iter().map(|x| x / block).collect();
            (0..m).all(|i| blocks.contains(&i))
        }),
    )?;
    WitnessPair::new(f, g)
}

/// `(m+1)(n+1) − 2`, the transversality reached by [`gadget_lower`].
pub fn lower_formula(m: usize, n: usize) -> usize {
    (m + 1) * (n + 1) - 2
}

/// Two 4-cycles on `{0..3}` and `{4..7}`. `f` is `−1/2` on sides and `1` on
/// diagonals; `g` is `1` on the 16 pairs meeting both squares.
pub fn two_squares() -> WitnessPair {
    let half = Rational::new((-1).into(), 2.into());
    let mut f = SetFunction::zero(8, 2).expect("ℓ = 8");
    for base in [0, 4] {
        for i in 0..4 {
            let side = Subset::from_indices([base + i, base + (i + 1) % 4]);
            f.set(side, half.clone()).expect("in ground");
        }
        for i in 0..2 {
            f.set(Subset::from_indices([base + i, base + i + 2]), q(1)).expect("in ground");
        }
    }
    let cross = (0..4).flat_map(|a| (4..8).map(move |b| Subset::from_indices([a, b])));
    let g = SetFunction::indicator(8, 2, cross).expect("ℓ = 8");
    WitnessPair::new(f, g).expect("two squares annihilate")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Gadget,
    Random,
    Block,
    All,
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gadget" => Ok(Strategy::Gadget),
            "random" => Ok(Strategy::Random),
            "block" => Ok(Strategy::Block),
            "all" => Ok(Strategy::All),
            _ => Err(Error::Invalid(format!("unknown strategy {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub strategy: Strategy,
    /// Number of candidate `f` per strategy.
    pub candidates: usize,
}

impl Default for SearchSpec {
    fn default() -> Self {
        SearchSpec { strategy: Strategy::All, candidates: 32 }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub certificate: WitnessCertificate,
    /// Index of the winning candidate.
    pub candidate: usize,
    pub tried: usize,
    /// Candidates whose annihilator was nonzero.
    pub productive: usize,
}

/// Heuristic search for a pair maximizing `τ(supp f ∪ supp g)`.
///
/// Candidate `f` come from embedded gadgets with random rescaling, random
/// sparse functions and random block-transversal indicators. Each `g` is a
/// random integer combination of the annihilator basis of `f`, so its support
/// is generically as large as possible. Candidate `i` draws from its own
/// generator seeded by `(seed, i)`, which keeps the result independent of
/// thread scheduling.
pub fn search_best(m: usize, n: usize, l: usize, spec: SearchSpec, seed: u64) -> Result<Option<SearchOutcome>> {
    if m + n > l || l > MAX_GROUND {
        return Err(Error::Invalid(format!("search needs m + n ≤ ℓ ≤ {MAX_GROUND}")));
    }
    if m == 0 || n == 0 {
        return Err(Error::DegenerateDegree("search needs m, n ≥ 1".into()));
    }
    let strategies: &[Strategy] = match spec.strategy {
        Strategy::All => &[Strategy::Gadget, Strategy::Random, Strategy::Block],
        Strategy::Gadget => &[Strategy::Gadget],
        Strategy::Random => &[Strategy::Random],
        Strategy::Block => &[Strategy::Block],
    };
    let jobs: Vec<(usize, Strategy)> = strategies
        .iter()
        .flat_map(|&s| (0..spec.candidates).map(move |i| (i, s)))
        .enumerate()
        .map(|(k, (_, s))| (k, s))
        .collect();
    let results: Vec<Option<WitnessCertificate>> = jobs
        .par_iter()
        .map(|&(k, strategy)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            candidate_f(strategy, m, n, l, k, &mut rng)
                .and_then(|f| generic_cofactor(&f, n, &mut rng))
                .and_then(|(f, g)| certify(f, g).ok())
        })
        .collect();
    let productive = results.iter().filter(|r| r.is_some()).count();
    let best = results.into_iter().enumerate().filter_map(|(i, r)| r.map(|c| (i, c))).fold(
        None::<(usize, WitnessCertificate)>,
        |acc, (i, c)| match acc {
            Some((_, ref b)) if b.tau_value >= c.tau_value => acc,
            _ => Some((i, c)),
        },
    );
    Ok(best.map(|(candidate, certificate)| SearchOutcome { certificate, candidate, tried: jobs.len(), productive }))
}

fn nonzero_small(rng: &mut ChaCha8Rng) -> Rational {
    let v: i64 = rng.gen_range(1..=3);
    q(if rng.gen_bool(0.5) { v } else { -v })
}

fn candidate_f(
    strategy: Strategy,
    m: usize,
    n: usize,
    l: usize,
    k: usize,
    rng: &mut ChaCha8Rng,
) -> Option<SetFunction> {
    match strategy {
        Strategy::Gadget => gadget_candidate(m, n, l, k, rng),
        Strategy::Random => {
            let sets = ksubsets(l, m);
            let count = rng.gen_range(1..=sets.len().min(2 * l));
            let mut f = SetFunction::zero(l, m).ok()?;
            for _ in 0..count {
                let s = sets[rng.gen_range(0..sets.len())];
                f.set(s, nonzero_small(rng)).ok()?;
            }
            Some(f)
        }
        Strategy::Block => {
            // m disjoint random blocks; f lives on sets taking one point per block
            let mut points: Vec<usize> = (0..l).collect();
            for i in (1..l).rev() {
                points.swap(i, rng.gen_range(0..=i));
            }
            let used = rng.gen_range(m..=l);
            let mut blocks = vec![Subset::EMPTY; m];
            for (j, &x) in points[..used].iter().enumerate() {
                let b = if j < m { j } else { rng.gen_range(0..m) };
                blocks[b] = blocks[b].with(x);
            }
            let signed = rng.gen_bool(0.5);
            let mut f = SetFunction::zero(l, m).ok()?;
            for a in subsets_of_size(Subset::full(l), m) {
                if blocks.iter().all(|b| b.meets(a)) {
                    let v = if signed { nonzero_small(rng) } else { Rational::one() };
                    f.set(a, v).ok()?;
                }
            }
            (!f.is_zero()).then_some(f)
        }
        Strategy::All => unreachable!("expanded by the caller"),
    }
}

/// Embedded constructions; after the unperturbed ones, support values are rescaled.
fn gadget_candidate(m: usize, n: usize, l: usize, k: usize, rng: &mut ChaCha8Rng) -> Option<SetFunction> {
    let mut bases = Vec::new();
    if m == 1 && 2 * n <= l {
        bases.push(SetFunction::e(2 * n).ok()?.extend_ground(l).ok()?);
    }
    if 2 * n * m <= l {
        bases.push(gadget_lower(m, n).ok()?.f().extend_ground(l).ok()?);
    }
    if (m, n) == (2, 2) && l >= 8 {
        bases.push(two_squares().f().extend_ground(l).ok()?);
    }
    if bases.is_empty() {
        bases.push(SetFunction::e(l).ok()?);
        if m > 1 {
            return None;
        }
    }
    let base = &bases[k % bases.len()];
    if k < bases.len() {
        return Some(base.clone());
    }
    let mut f = base.clone();
    for s in base.support_sets().collect::<Vec<_>>() {
        if rng.gen_bool(0.3) {
            f.set(s, base.value(s) * nonzero_small(rng)).ok()?;
        }
    }
    Some(f)
}

fn generic_cofactor(f: &SetFunction, n: usize, rng: &mut ChaCha8Rng) -> Option<(SetFunction, SetFunction)> {
    let basis = annihilator_basis(f, n).ok()?;
    if basis.is_empty() {
        return None;
    }
    let mut g = SetFunction::zero(f.ground_size(), n).ok()?;
    for v in &basis {
        g = g.add(&v.scale(&q(rng.gen_range(1..=7)))).ok()?;
    }
    if g.is_zero() {
        g = basis[0].clone();
    }
    Some((f.clone(), g))
}

/// Result of the discharging construction for a transversal `A` of `supp f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DischargeOutcome {
    /// 1 when `A ∪ P₀` already hits `supp g`, else 2.
    pub case: u8,
    /// A transversal of `supp f ∪ supp g` containing `A`.
    pub transversal: Subset,
    /// `|B ∖ A|`.
    pub excess: usize,
    /// Known exact `τ(m−1, n)`, when available.
    pub bound: Option<u64>,
}

impl DischargeOutcome {
    pub fn within_bound(&self) -> bool {
        self.bound.is_none_or(|b| self.excess as u64 <= b)
    }
}

/// Extends a transversal `A` of `supp f` to one of `supp f ∪ supp g`.
///
/// Picks `P₀ ∈ supp f` minimizing `|P₀ ∩ A|`. If `A ∪ P₀` hits `supp g` that is
/// the answer. Otherwise, for `x₀ ∈ P₀ ∩ A`, the pair `f'(P') = f(P' ∪ {x₀})`
/// and `g' = g` restricted to `E' = (E∖A) ∪ (P₀∩A ∖ {x₀})` is again a
/// zero-divisor pair of degrees `(m−1, n)`, and its minimum transversal is added.
pub fn discharge(pair: &WitnessPair, a: Subset) -> Result<DischargeOutcome> {
    let (f, g) = (&pair.f, &pair.g);
    let (m, n) = (f.degree(), g.degree());
    let l = pair.ground_size();
    if !a.fits(l) {
        return Err(Error::OutOfGround { set: a, ground_size: l });
    }
    if !crate::transversal::is_transversal(a, &f.support()) {
        return Err(Error::Hypothesis("A is not a transversal of supp(f)".into()));
    }
    let bound = (m >= 1).then(|| crate::bound::known_tau(m - 1, n)).flatten();
    let p0 = f.support_sets().min_by_key(|p| (p.intersection(a).len(), *p)).expect("f is nonzero");
    let g_support = g.support();
    let first_try = a.union(p0);
    if crate::transversal::is_transversal(first_try, &g_support) {
        return Ok(DischargeOutcome { case: 1, transversal: first_try, excess: first_try.difference(a).len(), bound });
    }
    let f0 = p0.intersection(a);
    let x0 = f0.min().ok_or_else(|| Error::Hypothesis("P₀ misses A".into()))?;
    let e_prime = Subset::full(l).difference(a).union(f0.without(x0));
    let f_prime = SetFunction::from_terms(
        l,
        m - 1,
        f.terms()
            .filter(|(p, _)| p.contains(x0) && p.without(x0).is_subset(e_prime))
            .map(|(p, v)| (p.without(x0), v.clone())),
    )?;
    let g_prime = g.restrict(e_prime);
    if f_prime.is_zero() || g_prime.is_zero() || !product(&f_prime, &g_prime)?.is_zero() {
        return Err(Error::Invalid("reduced pair is not a zero-divisor pair".into()));
    }
    let family = f_prime.support().union(&g_prime.support())?;
    let h = tau(&family)?.witness;
    let b = a.union(h);
    if !crate::transversal::is_transversal(b, &pair.support()) {
        return Err(Error::Invalid("A ∪ H misses a support set".into()));
    }
    Ok(DischargeOutcome { case: 2, transversal: b, excess: b.difference(a).len(), bound })
}

/// Disjoint families under large transversality: when
/// `τ(supp f ∪ supp g) > n + m(l−1) + τ(m−1, n)`, every `F ∈ supp g` leaves at
/// least `l` pairwise disjoint members of `supp f` outside `F`.
///
/// Returns `None` when the hypothesis does not hold, `Some(conclusion)` otherwise.
/// Needs `τ(m−1, n)` to be known exactly, so `m ≤ 2` or `n ≤ 1`.
pub fn disjoint_family_check(pair: &WitnessPair, l: usize) -> Result<Option<bool>> {
    let (m, n) = (pair.f.degree(), pair.g.degree());
    if m == 0 {
        return Err(Error::DegenerateDegree("needs m ≥ 1".into()));
    }
    let known = crate::bound::known_tau(m - 1, n)
        .ok_or_else(|| Error::Hypothesis(format!("τ({},{n}) is not known exactly", m - 1)))?;
    let t = tau(&pair.support())?.size as u64;
    let threshold = (n + m * l.saturating_sub(1)) as u64 + known;
    if l == 0 || t <= threshold {
        return Ok(None);
    }
    let f_sets: Vec<Subset> = pair.f.support_sets().collect();
    Ok(Some(pair.g.support_sets().all(|big_f| {
        let outside: Vec<Subset> = f_sets.iter().copied().filter(|p| p.is_disjoint(big_f)).collect();
        packing_at_least(&outside, Subset::EMPTY, l)
    })))
}

/// Whether `target` pairwise disjoint members of `sets` avoid `used`.
fn packing_at_least(sets: &[Subset], used: Subset, target: usize) -> bool {
    if target == 0 {
        return true;
    }
    let open: Vec<Subset> = sets.iter().copied().filter(|s| s.is_disjoint(used)).collect();
    if open.len() < target {
        return false;
    }
    let first = open[0];
    packing_at_least(&open[1..], used.union(first), target - 1) || packing_at_least(&open[1..], used, target)
}
