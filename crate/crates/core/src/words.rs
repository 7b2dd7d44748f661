//! Word coding of subsets of a layered ground set `E = F ∪ V×C`.
//!
//! A set `Q` is coded by `w̄(Q) = (Q∩F, w(Q∖F))` where `w` reads the occupied
//! columns of `V×C` left to right, one letter (a nonempty subset of `V`) per
//! column. Letters are ordered by size, then by mask; words by the radix order;
//! subsets of `F` by size descending, then by mask.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setfn::SetFunction;
use crate::subset::{subsets_of_size, Subset, MAX_GROUND};
use crate::Rational;

/// `F` first, then cell `(v, c)` at `|F| + c·|V| + v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LayeredGround {
    pub f_size: usize,
    pub v_size: usize,
    pub c_len: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Element {
    F(usize),
    Cell { v: usize, c: usize },
}

impl LayeredGround {
    pub fn new(f_size: usize, v_size: usize, c_len: usize) -> Result<Self> {
        if v_size == 0 {
            return Err(Error::Invalid("V must be nonempty".into()));
        }
        if v_size > 8 {
            return Err(Error::Invalid("letters are stored as bytes; |V| ≤ 8".into()));
        }
        let l = f_size + v_size * c_len;
        if l > MAX_GROUND {
            return Err(Error::GroundTooLarge(l));
        }
        Ok(LayeredGround { f_size, v_size, c_len })
    }

    pub fn ground_size(&self) -> usize {
        self.f_size + self.v_size * self.c_len
    }

    pub fn cell(&self, v: usize, c: usize) -> usize {
        assert!(v < self.v_size && c < self.c_len);
        self.f_size + c * self.v_size + v
    }

    pub fn element(&self, x: usize) -> Element {
        if x < self.f_size {
            Element::F(x)
        } else {
            let y = x - self.f_size;
            Element::Cell { v: y % self.v_size, c: y / self.v_size }
        }
    }

    pub fn f_mask(&self) -> Subset {
        Subset::full(self.f_size)
    }

    pub fn column(&self, c: usize) -> Subset {
        Subset::from_indices((0..self.v_size).map(|v| self.cell(v, c)))
    }

    /// `F ∪ V×X` for a set `X` of chain positions.
    pub fn block(&self, x: Subset) -> Subset {
        x.iter().fold(self.f_mask(), |acc, c| acc.union(self.column(c)))
    }

    /// Occupied chain positions of `Q ∖ F`.
    pub fn proj(&self, q: Subset) -> Subset {
        q.difference(self.f_mask()).iter().map(|x| (x - self.f_size) / self.v_size).collect()
    }

    /// Image of `Q ⊆ F ∪ V×X` under `1_F ∪ (1_V, ℓ)` where `ℓ: X → X'` is the
    /// order isomorphism.
    pub fn transport(&self, q: Subset, x: Subset, x_prime: Subset) -> Subset {
        let from = x.to_vec();
        let to = x_prime.to_vec();
        q.map(|e| match self.element(e) {
            Element::F(_) => e,
            Element::Cell { v, c } => {
                let i = from.binary_search(&c).expect("Q lies over X");
                self.cell(v, to[i])
            }
        })
    }
}

/// A nonempty subset of `V`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter(u8);

impl Letter {
    pub fn new(mask: u8) -> Result<Self> {
        if mask == 0 {
            return Err(Error::Invalid("empty letter".into()));
        }
        Ok(Letter(mask))
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    /// All letters over `|V| = v_size`, in increasing order.
    pub fn alphabet(v_size: usize) -> Vec<Letter> {
        let mut all: Vec<Letter> = (1..(1u16 << v_size)).map(|m| Letter(m as u8)).collect();
        all.sort();
        all
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.0.count_ones(), self.0).cmp(&(other.0.count_ones(), other.0))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A word over the letters; `Ord` is the radix order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_masks(masks: &[u8]) -> Result<Self> {
        masks.iter().map(|&m| Letter::new(m)).collect::<Result<Vec<_>>>().map(Word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn masks(&self) -> Vec<u8> {
        self.0.iter().map(|l| l.0).collect()
    }

    /// Letters at the given positions, in order.
    pub fn restrict(&self, positions: Subset) -> Word {
        Word(positions.iter().map(|i| self.0[i]).collect())
    }

    /// All subwords (subsequences), including the empty word and the word itself.
    pub fn subwords(&self) -> Vec<Word> {
        assert!(self.len() < 32, "subword enumeration is exponential");
        (0u64..(1 << self.len())).map(|mask| self.restrict(Subset::from_bits(mask))).collect()
    }

    pub fn contains_letter(&self, letter: Letter) -> bool {
        self.0.contains(&letter)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        radix_compare(self, other)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "λ");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            let elems: Vec<String> = (0..8).filter(|b| l.0 >> b & 1 == 1).map(|b| b.to_string()).collect();
            write!(f, "{{{}}}", elems.join(","))?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.masks().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let masks = Vec::<u8>::deserialize(d)?;
        Word::from_masks(&masks).map_err(D::Error::custom)
    }
}

/// Letterwise comparison of equal-length words.
pub fn lex_compare(u: &Word, v: &Word) -> Ordering {
    u.0.cmp(&v.0)
}

/// Shorter words first; equal lengths compare lexicographically.
pub fn radix_compare(u: &Word, v: &Word) -> Ordering {
    u.len().cmp(&v.len()).then_with(|| lex_compare(u, v))
}

/// `w̄(Q)`; ordered by the `F`-part (larger first), then the word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodedSet {
    pub f_part: Subset,
    pub word: Word,
}

fn f_part_key(s: Subset) -> (std::cmp::Reverse<usize>, Subset) {
    (std::cmp::Reverse(s.len()), s)
}

impl Ord for CodedSet {
    fn cmp(&self, other: &Self) -> Ordering {
        f_part_key(self.f_part).cmp(&f_part_key(other.f_part)).then_with(|| radix_compare(&self.word, &other.word))
    }
}

impl PartialOrd for CodedSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CodedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.f_part, self.word)
    }
}

/// `lead(f)`; `NegInfinity` sits below every coded set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Lead {
    NegInfinity,
    At(CodedSet),
}

pub fn code(q: Subset, l: &LayeredGround) -> CodedSet {
    let f_part = q.intersection(l.f_mask());
    let letters = l
        .proj(q)
        .iter()
        .map(|c| {
            let mask = (0..l.v_size).filter(|&v| q.contains(l.cell(v, c))).fold(0u8, |m, v| m | 1 << v);
            Letter(mask)
        })
        .collect();
    CodedSet { f_part, word: Word(letters) }
}

/// The word with `u` at positions `x` and `v` elsewhere.
pub fn shuffle(u: &Word, x: Subset, v: &Word) -> Result<Word> {
    let total = u.len() + v.len();
    if x.len() != u.len() || !x.fits(total) {
        return Err(Error::ShufflePositions { expected: u.len(), found: x.len() });
    }
    let (mut iu, mut iv) = (u.0.iter(), v.0.iter());
    Ok(Word((0..total).map(|i| if x.contains(i) { *iu.next().unwrap() } else { *iv.next().unwrap() }).collect()))
}

/// Every position set for shuffling words of lengths `p` and `q`.
pub fn shuffle_positions(p: usize, q: usize) -> impl Iterator<Item = Subset> {
    subsets_of_size(Subset::full(p + q), p)
}

/// The largest shuffle of `u` and `v`.
pub fn max_shuffle(u: &Word, v: &Word) -> Word {
    shuffle_positions(u.len(), v.len())
        .map(|x| shuffle(u, x, v).expect("positions have the right size"))
        .max_by(lex_compare)
        .expect("at least one position set")
}

pub fn lead(f: &SetFunction, l: &LayeredGround) -> Lead {
    f.support_sets().map(|q| code(q, l)).max().map_or(Lead::NegInfinity, Lead::At)
}

/// A support set of `f` realizing `lead(f)`, the smallest one by mask.
pub fn lead_set(f: &SetFunction, l: &LayeredGround) -> Option<Subset> {
    let target = match lead(f, l) {
        Lead::At(c) => c,
        Lead::NegInfinity => return None,
    };
    f.support_sets().find(|q| code(*q, l) == target)
}

/// Finitely supported function on words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WordFunction {
    terms: BTreeMap<Word, Rational>,
}

impl WordFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn indicator(w: Word) -> Self {
        let mut f = Self::zero();
        f.add_at(w, Rational::from_integer(1.into()));
        f
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Rational)>>(terms: I) -> Self {
        let mut f = Self::zero();
        for (w, c) in terms {
            f.add_at(w, c);
        }
        f
    }

    pub fn add_at(&mut self, w: Word, c: Rational) {
        let slot = self.terms.entry(w.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn value(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    /// Radix-largest word of the support.
    pub fn lead(&self) -> Option<&Word> {
        self.terms.keys().next_back()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, v)| (w.clone(), v * c)))
    }
}

/// `(fg)(w) = Σ f(u)g(v)` over `u, v` and position sets `X` with `u_X⧢v = w`.
pub fn shuffle_product(f: &WordFunction, g: &WordFunction) -> WordFunction {
    let mut out = WordFunction::zero();
    for (u, a) in &f.terms {
        for (v, b) in &g.terms {
            let c = a * b;
            for x in shuffle_positions(u.len(), v.len()) {
                out.add_at(shuffle(u, x, v).expect("valid positions"), c.clone());
            }
        }
    }
    out
}

/// If `supp f` avoids the subword-closed set `down_closed`, so does `supp(fg)`.
///
/// Closure under subwords is checked on every word of `supp f`, `supp g` and
/// `supp(fg)`. Returns `true` when the premise fails.
pub fn final_segment_ideal_check(
    down_closed: impl Fn(&Word) -> bool,
    f: &WordFunction,
    g: &WordFunction,
) -> Result<bool> {
    let fg = shuffle_product(f, g);
    for w in f.support().chain(g.support()).chain(fg.support()) {
        if !down_closed(w) {
            continue;
        }
        if let Some(s) = w.subwords().into_iter().find(|s| !down_closed(s)) {
            return Err(Error::NotSubwordClosed { word: w.to_string(), subword: s.to_string() });
        }
    }
    if f.support().any(&down_closed) {
        return Ok(true);
    }
    let avoids = !fg.support().any(&down_closed);
    Ok(avoids)
}

/// Counts of a property sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub checked: usize,
    pub failures: usize,
}

impl SweepReport {
    pub fn holds(&self) -> bool {
        self.failures == 0
    }

    fn record(&mut self, ok: bool) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
        }
    }
}

/// Every word of the given length over `alphabet`.
pub fn all_words(alphabet: &[Letter], len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                alphabet.iter().map(move |&a| {
                    let mut next = w.0.clone();
                    next.push(a);
                    Word(next)
                })
            })
            .collect();
    }
    out
}

/// Strict monotonicity of `(u, v) ↦ u_X⧢v` in each argument, for all pairs of
/// distinct same-length words with `|u| + |v| ≤ max_total` and every position set `X`.
pub fn monotonicity_sweep(alphabet: &[Letter], max_total: usize) -> SweepReport {
    let mut report = SweepReport::default();
    for p in 0..=max_total {
        for q in 0..=max_total - p {
            let us = all_words(alphabet, p);
            let vs = all_words(alphabet, q);
            for x in shuffle_positions(p, q) {
                for (i, u) in us.iter().enumerate() {
                    for u2 in &us[i + 1..] {
                        for v in &vs {
                            let (a, b) = (shuffle(u, x, v).unwrap(), shuffle(u2, x, v).unwrap());
                            report.record(lex_compare(u, u2) == lex_compare(&a, &b));
                        }
                    }
                }
                for (i, v) in vs.iter().enumerate() {
                    for v2 in &vs[i + 1..] {
                        for u in &us {
                            let (a, b) = (shuffle(u, x, v).unwrap(), shuffle(u, x, v2).unwrap());
                            report.record(lex_compare(v, v2) == lex_compare(&a, &b));
                        }
                    }
                }
            }
        }
    }
    report
}

/// `max_shuffle(u, v)` dominates every shuffle, for `|u| + |v| ≤ max_total`.
pub fn max_shuffle_sweep(alphabet: &[Letter], max_total: usize) -> SweepReport {
    let mut report = SweepReport::default();
    for p in 0..=max_total {
        for q in 0..=max_total - p {
            for u in all_words(alphabet, p) {
                for v in all_words(alphabet, q) {
                    let top = max_shuffle(&u, &v);
                    let ok = shuffle_positions(p, q).all(|x| lex_compare(&shuffle(&u, x, &v).unwrap(), &top).is_le());
                    report.record(ok);
                }
            }
        }
    }
    report
}

/// A random nonzero word function with up to `max_terms` terms.
pub fn random_word_function<R: rand::Rng>(
    rng: &mut R,
    alphabet: &[Letter],
    max_len: usize,
    max_terms: usize,
) -> WordFunction {
    loop {
        let mut f = WordFunction::zero();
        for _ in 0..rng.gen_range(1..=max_terms) {
            let len = rng.gen_range(0..=max_len);
            let w = Word((0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect());
            let c: i64 = rng.gen_range(-3..=3);
            f.add_at(w, Rational::from_integer(c.into()));
        }
        if !f.is_zero() {
            return f;
        }
    }
}

/// Random nonzero pairs: the shuffle product is nonzero and its lead is the
/// maximal shuffle of the leads.
pub fn shuffle_product_sweep(alphabet: &[Letter], max_len: usize, trials: usize, seed: u64) -> SweepReport {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut report = SweepReport::default();
    for _ in 0..trials {
        let f = random_word_function(&mut rng, alphabet, max_len, 3);
        let g = random_word_function(&mut rng, alphabet, max_len, 3);
        let fg = shuffle_product(&f, &g);
        let expected = max_shuffle(f.lead().unwrap(), g.lead().unwrap());
        report.record(!fg.is_zero() && fg.lead() == Some(&expected));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(masks: &[u8]) -> Word {
        Word::from_masks(masks).unwrap()
    }

    #[test]
    fn letter_order() {
        let a = Letter::alphabet(2);
        assert_eq!(a.iter().map(|l| l.mask()).collect::<Vec<_>>(), [1, 2, 3]);
        let a = Letter::alphabet(3);
        assert_eq!(a.iter().map(|l| l.mask()).collect::<Vec<_>>(), [1, 2, 4, 3, 5, 6, 7]);
    }

    #[test]
    fn coding_reads_columns() {
        let l = LayeredGround::new(0, 2, 3).unwrap();
        let q = Subset::from_indices([l.cell(0, 0), l.cell(1, 0), l.cell(0, 2)]);
        assert_eq!(code(q, &l), CodedSet { f_part: Subset::EMPTY, word: w(&[3, 1]) });
        let l = LayeredGround::new(2, 2, 2).unwrap();
        assert_eq!(code(Subset::from_indices([0, 1]), &l).word, Word::empty());
        assert_eq!(code(l.column(1), &l).word, w(&[3]));
    }

    #[test]
    fn radix_examples() {
        assert_eq!(radix_compare(&w(&[3]), &w(&[1, 1])), Ordering::Less);
        assert_eq!(radix_compare(&w(&[1, 3]), &w(&[2, 1])), Ordering::Less);
        assert_eq!(radix_compare(&w(&[2, 1]), &w(&[2, 1])), Ordering::Equal);
    }

    #[test]
    fn shuffle_examples() {
        assert_eq!(shuffle(&w(&[1]), Subset::singleton(0), &Word::empty()).unwrap(), w(&[1]));
        // letters 1 < 2 stand for masks 1 < 2
        let (u, v) = (w(&[2, 1]), w(&[2]));
        let all: Vec<Word> = shuffle_positions(2, 1).map(|x| shuffle(&u, x, &v).unwrap()).collect();
        assert_eq!(all, vec![w(&[2, 1, 2]), w(&[2, 2, 1]), w(&[2, 2, 1])]);
        assert_eq!(max_shuffle(&u, &v), w(&[2, 2, 1]));
        assert_eq!(shuffle(&u, Subset::singleton(0), &v), Err(Error::ShufflePositions { expected: 2, found: 1 }));
    }

    #[test]
    fn larger_f_part_sorts_lower() {
        let big = CodedSet { f_part: Subset::from_indices([0, 1]), word: Word::empty() };
        let small = CodedSet { f_part: Subset::singleton(0), word: w(&[3, 3, 3]) };
        assert!(big < small);
        assert!(Lead::NegInfinity < Lead::At(big));
    }

    #[test]
    fn lead_picks_longer_word() {
        let l = LayeredGround::new(0, 2, 3).unwrap();
        assert_eq!(lead(&SetFunction::zero(6, 2).unwrap(), &l), Lead::NegInfinity);
        let one_column = Subset::from_indices([l.cell(0, 0), l.cell(1, 0)]);
        let two_columns = Subset::from_indices([l.cell(0, 0), l.cell(0, 1)]);
        let f = SetFunction::indicator(6, 2, [one_column, two_columns]).unwrap();
        assert_eq!(lead(&f, &l), Lead::At(code(two_columns, &l)));
        assert_eq!(lead_set(&f, &l), Some(two_columns));
    }

    #[test]
    fn shuffle_algebra_basics() {
        let a = WordFunction::indicator(w(&[1]));
        let unit = WordFunction::indicator(Word::empty());
        assert_eq!(shuffle_product(&a, &unit), a);
        let sq = shuffle_product(&a, &a);
        assert_eq!(sq, WordFunction::indicator(w(&[1, 1])).scale(&Rational::from_integer(2.into())));
    }

    #[test]
    fn ideal_check_examples() {
        let short = |x: &Word| x.len() <= 2;
        let f = WordFunction::indicator(w(&[1, 2, 1]));
        let g = WordFunction::indicator(w(&[2]));
        assert!(final_segment_ideal_check(short, &f, &g).unwrap());
        let b = Letter::new(2).unwrap();
        let avoids_b = |x: &Word| !x.contains_letter(b);
        assert!(final_segment_ideal_check(avoids_b, &f, &g).unwrap());
        let not_closed = |x: &Word| x.len() == 2;
        assert!(matches!(
            final_segment_ideal_check(not_closed, &WordFunction::indicator(w(&[1, 1])), &g),
            Err(Error::NotSubwordClosed { .. })
        ));
    }

    #[test]
    fn transport_moves_columns() {
        let l = LayeredGround::new(1, 2, 4).unwrap();
        let q = Subset::from_indices([0, l.cell(1, 1), l.cell(0, 3)]);
        let moved = l.transport(q, Subset::from_indices([1, 3]), Subset::from_indices([0, 2]));
        assert_eq!(moved, Subset::from_indices([0, l.cell(1, 0), l.cell(0, 2)]));
        assert_eq!(code(q, &l), code(moved, &l));
    }
}
