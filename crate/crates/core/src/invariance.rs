//! Invariance of sign colourings on `F ∪ V×C` under order isomorphisms of the
//! chain, and the leading-term equations for products of invariant functions.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::setfn::{product, SetFunction};
use crate::sign::chi;
use crate::subset::{ksubsets, subsets_of_size, Subset};
use crate::words::{code, lead, max_shuffle, CodedSet, LayeredGround, Lead};
use crate::Rational;

/// A colouring of `[E]^degree` by signs; unlisted sets have colour 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub degree: usize,
    pub colors: BTreeMap<Subset, i8>,
}

impl Coloring {
    pub fn of(f: &SetFunction) -> Self {
        Coloring { degree: f.degree(), colors: f.terms().map(|(s, v)| (s, chi(v))).collect() }
    }

    pub fn color(&self, s: Subset) -> i8 {
        self.colors.get(&s).copied().unwrap_or(0)
    }
}

/// The pair `(χ∘f, χ∘g)` on a layered ground set, viewed as a structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvStructure {
    pub ground: LayeredGround,
    pub colorings: Vec<Coloring>,
}

impl InvStructure {
    pub fn from_pair(ground: LayeredGround, f: &SetFunction, g: &SetFunction) -> Result<Self> {
        Self::from_functions(ground, [f, g])
    }

    pub fn from_functions<'a>(ground: LayeredGround, fs: impl IntoIterator<Item = &'a SetFunction>) -> Result<Self> {
        let mut colorings = Vec::new();
        for f in fs {
            if f.ground_size() != ground.ground_size() {
                return Err(Error::GroundMismatch { left: ground.ground_size(), right: f.ground_size() });
            }
            colorings.push(Coloring::of(f));
        }
        Ok(InvStructure { ground, colorings })
    }
}

/// Whether all members of `[C]^r` are equivalent: for each `X`, the map
/// fixing `F` and moving `V×X₀` onto `V×X` in order preserves every colouring,
/// where `X₀` is the first `r`-subset. Vacuously true when `r > |C|`.
pub fn check_invariance(h: &InvStructure, r: usize) -> bool {
    let l = &h.ground;
    if r > l.c_len {
        return true;
    }
    let chain = Subset::full(l.c_len);
    let x0 = subsets_of_size(chain, r).next().expect("r ≤ |C|");
    let base = l.block(x0);
    subsets_of_size(chain, r).skip(1).all(|x| {
        h.colorings
            .iter()
            .all(|col| subsets_of_size(base, col.degree).all(|p| col.color(p) == col.color(l.transport(p, x0, x))))
    })
}

/// `check_invariance` at every `r ≤ |C|`.
pub fn is_fl_invariant(h: &InvStructure) -> bool {
    (0..=h.ground.c_len).all(|r| check_invariance(h, r))
}

/// Whether `f(A)` depends only on `w̄(A)`.
pub fn depends_only_on_code(f: &SetFunction, l: &LayeredGround) -> bool {
    let mut seen: BTreeMap<CodedSet, Rational> = BTreeMap::new();
    ksubsets(l.ground_size(), f.degree()).into_iter().all(|a| {
        let v = f.value(a);
        match seen.entry(code(a, l)) {
            std::collections::btree_map::Entry::Occupied(e) => *e.get() == v,
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v);
                true
            }
        }
    })
}

/// Builds `f` of the given degree with `f(A) = value(w̄(A))`.
pub fn position_blind(
    l: &LayeredGround,
    degree: usize,
    mut value: impl FnMut(&CodedSet) -> Rational,
) -> Result<SetFunction> {
    let mut memo: BTreeMap<CodedSet, Rational> = BTreeMap::new();
    let mut f = SetFunction::zero(l.ground_size(), degree)?;
    for a in ksubsets(l.ground_size(), degree) {
        let c = code(a, l);
        let v = memo.entry(c.clone()).or_insert_with(|| value(&c)).clone();
        f.set(a, v)?;
    }
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquationCheck {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeadingReport {
    pub lead_f: CodedSet,
    pub lead_g: CodedSet,
    /// `lead(f, g)`, the largest code of `A ∪ B` over disjoint support pairs.
    pub lead_pair: CodedSet,
    /// Smallest `Q₀` with `w̄(Q₀) = lead(f, g)`.
    pub q0: Subset,
    pub pairs_at_q0: usize,
    #[serde(serialize_with = "ser_rational")]
    pub fg_at_q0: Rational,
    pub checks: Vec<EquationCheck>,
}

fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

impl LeadingReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Verifies the hypotheses of the leading-term lemma and then each of its
/// conclusions on `f`, `g`:
///
/// - supp(f,g) ≠ ∅
/// - `(w̄(A), w̄(B)) = (lead f, lead g)` for `(A, B) ∈ supp(f,g)(Q₀)`
/// - `(f(A), g(B)) = (f(A₀), g(B₀))` on the same pairs
/// - `fg(Q₀) = |supp(f,g)(Q₀)|·f(A₀)g(B₀)`
/// - `lead(fg) = lead(f,g) = (Q₀∩F, w(A₀) ⧢̂ w(B₀∖F))`
/// - `fg(Q₀) ≠ 0`
///
/// Every `Q₀` realizing `lead(f, g)` is checked.
pub fn leading_product_check(f: &SetFunction, g: &SetFunction, h: &InvStructure) -> Result<LeadingReport> {
    let l = &h.ground;
    let (m, n) = (f.degree(), g.degree());
    for x in [f, g] {
        if x.ground_size() != l.ground_size() {
            return Err(Error::GroundMismatch { left: l.ground_size(), right: x.ground_size() });
        }
    }
    if !is_fl_invariant(h) {
        return Err(Error::Hypothesis("structure is not F-L-invariant".into()));
    }
    if f.is_zero() || g.is_zero() {
        return Err(Error::Hypothesis("f and g must be nonzero".into()));
    }
    if !depends_only_on_code(f, l) || !depends_only_on_code(g, l) {
        return Err(Error::Hypothesis("f and g must be invariant (constant on coded classes)".into()));
    }
    if l.c_len < m + n {
        return Err(Error::Hypothesis(format!("|C| = {} < m + n = {}", l.c_len, m + n)));
    }
    if !f.support_sets().any(|a| a.is_disjoint(l.f_mask())) {
        return Err(Error::Hypothesis("supp(f) ∩ [E∖F]^m = ∅".into()));
    }

    let (Lead::At(lead_f), Lead::At(lead_g)) = (lead(f, l), lead(g, l)) else {
        unreachable!("nonzero functions have a lead");
    };
    let a0 = f.support_sets().find(|a| code(*a, l) == lead_f).expect("lead is realized");
    let b0 = g.support_sets().find(|b| code(*b, l) == lead_g).expect("lead is realized");

    let mut pairs: BTreeMap<Subset, Vec<(Subset, Subset)>> = BTreeMap::new();
    for a in f.support_sets() {
        for b in g.support_sets() {
            if a.is_disjoint(b) {
                pairs.entry(a.union(b)).or_default().push((a, b));
            }
        }
    }
    let mut checks = vec![EquationCheck { name: "supp(f,g) nonempty", holds: !pairs.is_empty() }];
    if pairs.is_empty() {
        return Err(Error::Invalid("supp(f,g) is empty under the hypotheses".into()));
    }
    let lead_pair = pairs.keys().map(|q| code(*q, l)).max().expect("nonempty");
    let q0s: Vec<Subset> = pairs.keys().copied().filter(|q| code(*q, l) == lead_pair).collect();
    let fg = product(f, g)?;
    let (fa0, gb0) = (f.value(a0), g.value(b0));

    let mut codes_ok = true;
    let mut values_ok = true;
    let mut sum_ok = true;
    let mut nonzero = true;
    for q0 in &q0s {
        let at = &pairs[q0];
        codes_ok &= at.iter().all(|(a, b)| code(*a, l) == lead_f && code(*b, l) == lead_g);
        values_ok &= at.iter().all(|(a, b)| f.value(*a) == fa0 && g.value(*b) == gb0);
        let expected = Rational::from_integer(at.len().into()) * &fa0 * &gb0;
        sum_ok &= fg.value(*q0) == expected;
        nonzero &= !fg.value(*q0).is_zero();
    }
    let q0 = q0s[0];
    let shuffled = CodedSet {
        f_part: q0.intersection(l.f_mask()),
        word: max_shuffle(&code(a0, l).word, &code(b0.difference(l.f_mask()), l).word),
    };
    checks.push(EquationCheck { name: "pairs at Q0 carry the leading codes", holds: codes_ok });
    checks.push(EquationCheck { name: "pairs at Q0 carry the leading values", holds: values_ok });
    checks.push(EquationCheck { name: "fg(Q0) = |supp(f,g)(Q0)| f(A0) g(B0)", holds: sum_ok });
    checks.push(EquationCheck {
        name: "lead(fg) = lead(f,g) = (Q0∩F, w(A0) max-shuffle w(B0∖F))",
        holds: lead(&fg, l) == Lead::At(lead_pair.clone()) && lead_pair == shuffled,
    });
    checks.push(EquationCheck { name: "fg(Q0) ≠ 0", holds: nonzero });
    Ok(LeadingReport { lead_f, lead_g, lead_pair, q0, pairs_at_q0: pairs[&q0].len(), fg_at_q0: fg.value(q0), checks })
}

/// A pair of position-blind functions on a layered ground set.
#[derive(Clone, Debug)]
pub struct BlindCase {
    pub ground: LayeredGround,
    pub f: SetFunction,
    pub g: SetFunction,
}

/// Seeded corpus of position-blind pairs with `|F| ≤ 2`, `|V| ≤ 2`, `|C| ≤ 6`
/// and `deg f + deg g ≤ |C|`. Each `f` is nonzero on some set avoiding `F`.
pub fn blind_corpus(count: usize, seed: u64) -> Vec<BlindCase> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let f_size = rng.gen_range(0..=2);
        let v_size = rng.gen_range(1..=2);
        let c_len = rng.gen_range(2..=6);
        let ground = LayeredGround::new(f_size, v_size, c_len).expect("small");
        let m = rng.gen_range(1..c_len);
        let n = rng.gen_range(1..=(c_len - m).min(3));
        let m = m.min(3);
        // an F-free set of size m spread over the first columns
        let anchor = code(Subset::from_indices((0..m).map(|i| ground.cell(i % v_size, i / v_size))), &ground);
        let seed_f: u64 = rng.gen();
        let seed_g: u64 = rng.gen();
        let f = position_blind(&ground, m, blind_values(seed_f, Some(anchor))).expect("fits");
        let g = position_blind(&ground, n, blind_values(seed_g, None)).expect("fits");
        if !g.is_zero() {
            out.push(BlindCase { ground, f, g });
        }
    }
    out
}

/// Random values per coded class, forced to 1 on `anchor`.
fn blind_values(seed: u64, anchor: Option<CodedSet>) -> impl FnMut(&CodedSet) -> Rational {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    move |c: &CodedSet| {
        if anchor.as_ref() == Some(c) {
            return Rational::from_integer(1.into());
        }
        let v: i64 = if rng.gen_bool(0.5) { 0 } else { rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 } };
        Rational::from_integer(v.into())
    }
}

/// Outcome of running the invariance lemmas over a corpus.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct InvarianceSweep {
    pub structures: usize,
    pub invariant: usize,
    pub hereditary: usize,
    pub leading_ok: usize,
}

impl InvarianceSweep {
    pub fn holds(&self) -> bool {
        self.invariant == self.structures && self.hereditary == self.structures && self.leading_ok == self.structures
    }
}

/// Invariance at every `r`; heredity (`r < |C|` invariant implies every
/// `r' ≤ r`); and the leading-term equations with `fg ≠ 0`.
pub fn invariance_sweep(cases: &[BlindCase]) -> InvarianceSweep {
    use rayon::prelude::*;
    let rows: Vec<(bool, bool, bool)> = cases
        .par_iter()
        .map(|case| {
            let h = InvStructure::from_pair(case.ground, &case.f, &case.g).expect("same ground");
            let by_r: Vec<bool> = (0..=case.ground.c_len).map(|r| check_invariance(&h, r)).collect();
            let invariant = by_r.iter().all(|&b| b);
            (invariant, hereditary(&by_r), leading_product_check(&case.f, &case.g, &h).is_ok_and(|r| r.all_hold()))
        })
        .collect();
    InvarianceSweep {
        structures: rows.len(),
        invariant: rows.iter().filter(|r| r.0).count(),
        hereditary: rows.iter().filter(|r| r.1).count(),
        leading_ok: rows.iter().filter(|r| r.2).count(),
    }
}

/// Given invariance flags indexed by `r = 0..=|C|`: whenever `r < |C|` holds,
/// every smaller `r'` holds too.
pub fn hereditary(by_r: &[bool]) -> bool {
    let c_len = by_r.len() - 1;
    (0..c_len).all(|r| !by_r[r] || by_r[..=r].iter().all(|&b| b))
}
