//! Symbolic dynamics over the map alphabet: subshifts of finite type,
//! admissible words, contraction products, δ-stopping sets, the code-space
//! metric and the address map.
//!
//! Symbols are 0-based internally and printed 1-based.

use crate::error::{IsssError, Result};
use crate::geometry::{AmbientBox, Point, Similarity};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// Relative slack when comparing a word ratio to a threshold. Products such
/// as `(1/3)^4` and `3^-4` differ in the last bits; a ratio within this
/// relative distance of the threshold counts as reaching it.
pub const RATIO_REL_EPS: f64 = 1e-12;

#[inline]
pub(crate) fn reaches(ratio: f64, threshold: f64) -> bool {
    ratio >= threshold * (1.0 - RATIO_REL_EPS)
}

/// Subshift of finite type: sequences whose consecutive symbols are allowed
/// by `transitions` and whose first symbol is in `initial`.
///
/// Symbols with no way to continue forever are pruned at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sft {
    n: usize,
    transitions: Vec<Vec<bool>>,
    initial: Vec<bool>,
}

impl Sft {
    /// The full shift on `n` symbols.
    pub fn full(n: usize) -> Self {
        assert!(n >= 1, "alphabet must be nonempty");
        Self { n, transitions: vec![vec![true; n]; n], initial: vec![true; n] }
    }

    /// `initial` holds 0-based symbols.
    pub fn new(transitions: Vec<Vec<bool>>, initial: &[usize]) -> Result<Self> {
        let n = transitions.len();
        if n == 0 {
            return Err(IsssError::EmptyInput("transition matrix"));
        }
        if let Some(row) = transitions.iter().find(|r| r.len() != n) {
            return Err(IsssError::InvalidParameter {
                name: "transitions",
                reason: format!("row of length {} in a {n}x{n} matrix", row.len()),
            });
        }
        let mut init = vec![false; n];
        for &i in initial {
            if i >= n {
                return Err(IsssError::InvalidParameter { name: "initial", reason: format!("symbol {} out of range", i + 1) });
            }
            init[i] = true;
        }
        let mut sft = Self { n, transitions, initial: init };
        sft.prune();
        if !sft.initial.iter().any(|&b| b) {
            return Err(IsssError::EmptySubshift);
        }
        Ok(sft)
    }

    fn prune(&mut self) {
        let n = self.n;
        let mut alive = vec![true; n];
        loop {
            let mut changed = false;
            for i in 0..n {
                if alive[i] && !(0..n).any(|j| alive[j] && self.transitions[i][j]) {
                    alive[i] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for i in 0..n {
            for j in 0..n {
                self.transitions[i][j] &= alive[i] && alive[j];
            }
            self.initial[i] &= alive[i];
        }
    }

    pub fn alphabet_size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn allows(&self, from: usize, to: usize) -> bool {
        self.transitions[from][to]
    }

    #[inline]
    pub fn is_initial(&self, s: usize) -> bool {
        self.initial[s]
    }

    pub fn transitions(&self) -> &[Vec<bool>] {
        &self.transitions
    }

    pub fn initial_symbols(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&i| self.initial[i])
    }

    pub fn successors(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.transitions[s][j])
    }

    pub fn is_full_shift(&self) -> bool {
        self.initial.iter().all(|&b| b) && self.transitions.iter().all(|r| r.iter().all(|&b| b))
    }

    /// Symbols occurring in some admissible word.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = self.initial.clone();
        let mut stack: Vec<usize> = self.initial_symbols().collect();
        while let Some(i) = stack.pop() {
            for j in self.successors(i) {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen
    }

    /// Whether the transition graph restricted to reachable symbols is strongly connected.
    pub fn is_irreducible(&self) -> bool {
        let live: Vec<usize> = (0..self.n).filter(|&i| self.reachable()[i]).collect();
        live.iter().all(|&s| {
            let mut seen = vec![false; self.n];
            let mut stack = vec![s];
            while let Some(i) = stack.pop() {
                for j in self.successors(i) {
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            live.iter().all(|&t| seen[t])
        })
    }

    pub fn is_admissible(&self, w: &Word) -> bool {
        let s = w.symbols();
        !s.is_empty()
            && s.iter().all(|&x| (x as usize) < self.n)
            && self.initial[s[0] as usize]
            && s.windows(2).all(|p| self.transitions[p[0] as usize][p[1] as usize])
    }

    /// `|S^k|` by the counting recurrence (as a float; exact below 2^53).
    pub fn level_count(&self, k: usize) -> f64 {
        if k == 0 {
            return 1.0;
        }
        let mut v: Vec<f64> = self.initial.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
        for _ in 1..k {
            let mut next = vec![0.0; self.n];
            for i in 0..self.n {
                if v[i] != 0.0 {
                    for j in self.successors(i) {
                        next[j] += v[i];
                    }
                }
            }
            v = next;
        }
        v.iter().sum()
    }

    /// Depth-first walk over admissible words in lexicographic order.
    /// `visit(word, ratio)` decides whether to descend below `word`.
    pub(crate) fn walk(&self, ratios: &RatioVector, mut visit: impl FnMut(&[u16], f64) -> bool) {
        let mut word: Vec<u16> = Vec::with_capacity(64);
        for s in self.initial_symbols() {
            word.push(s as u16);
            self.walk_from(ratios, &mut word, ratios.get(s), &mut visit);
            word.pop();
        }
    }

    fn walk_from(&self, ratios: &RatioVector, word: &mut Vec<u16>, ratio: f64, visit: &mut impl FnMut(&[u16], f64) -> bool) {
        if !visit(word, ratio) {
            return;
        }
        let last = *word.last().unwrap() as usize;
        for j in 0..self.n {
            if self.transitions[last][j] {
                word.push(j as u16);
                self.walk_from(ratios, word, ratio * ratios.get(j), visit);
                word.pop();
            }
        }
    }
}

/// Outcome of the shift-closure check; violations are 0-based `(i, j)`
/// pairs with `i` initial, `T[i][j]` set and `j` not initial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShiftClosure {
    Closed,
    Violations(Vec<(usize, usize)>),
}

impl ShiftClosure {
    pub fn is_closed(&self) -> bool {
        matches!(self, ShiftClosure::Closed)
    }

    pub fn into_result(self) -> Result<()> {
        match self {
            ShiftClosure::Closed => Ok(()),
            ShiftClosure::Violations(v) => Err(IsssError::NotShiftClosed(v)),
        }
    }
}

pub fn validate_shift_closed(s: &Sft) -> ShiftClosure {
    let v: Vec<(usize, usize)> = s
        .initial_symbols()
        .flat_map(|i| s.successors(i).filter(|&j| !s.is_initial(j)).map(move |j| (i, j)))
        .collect();
    if v.is_empty() {
        ShiftClosure::Closed
    } else {
        ShiftClosure::Violations(v)
    }
}

/// Finite word over the alphabet.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u16>);

impl Word {
    pub fn new(symbols: Vec<u16>) -> Self {
        Self(symbols)
    }

    /// Parse 1-based digits, e.g. `"112"`, or dot-separated symbols `"1.12.3"`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || IsssError::InvalidParameter { name: "word", reason: format!("cannot parse `{text}`") };
        let parts: Vec<u16> = if text.contains('.') {
            text.split('.').map(|p| p.parse::<u16>().map_err(|_| bad())).collect::<Result<_>>()?
        } else {
            text.chars().map(|c| c.to_digit(10).map(|d| d as u16).ok_or_else(bad)).collect::<Result<_>>()?
        };
        if parts.is_empty() || parts.contains(&0) {
            return Err(bad());
        }
        Ok(Self(parts.into_iter().map(|p| p - 1).collect()))
    }

    pub fn symbols(&self) -> &[u16] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `ω_-`: the word without its last symbol.
    pub fn parent(&self) -> Word {
        Word(self.0[..self.0.len().saturating_sub(1)].to_vec())
    }

    pub fn has_prefix(&self, prefix: &Word) -> bool {
        self.0.starts_with(&prefix.0)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&s| s < 9) {
            for s in &self.0 {
                write!(f, "{}", s + 1)?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|s| (s + 1).to_string()).collect();
            write!(f, "{}", parts.join("."))
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Per-symbol contraction ratios, each in (0, 1).
#[derive(Clone, Debug, PartialEq)]
pub struct RatioVector {
    ratios: Vec<f64>,
    min: f64,
    max: f64,
}

impl RatioVector {
    pub fn new(ratios: Vec<f64>) -> Result<Self> {
        if ratios.is_empty() {
            return Err(IsssError::EmptyInput("ratio vector"));
        }
        if let Some(&r) = ratios.iter().find(|&&r| !(r > 0.0 && r < 1.0)) {
            return Err(IsssError::InvalidRatio(r));
        }
        let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let max = ratios.iter().copied().fold(0.0, f64::max);
        Ok(Self { ratios, min, max })
    }

    pub fn from_maps(maps: &[Similarity]) -> Result<Self> {
        Self::new(maps.iter().map(Similarity::ratio).collect())
    }

    #[inline]
    pub fn get(&self, s: usize) -> f64 {
        self.ratios[s]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.ratios
    }

    pub fn len(&self) -> usize {
        self.ratios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratios.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }
}

fn check_alphabet(s: &Sft, r: &RatioVector) -> Result<()> {
    if s.alphabet_size() != r.len() {
        return Err(IsssError::DimensionMismatch { expected: s.alphabet_size(), found: r.len() });
    }
    Ok(())
}

fn check_delta(delta: f64, closed_at_one: bool) -> Result<()> {
    let ok = delta > 0.0 && if closed_at_one { delta <= 1.0 } else { delta < 1.0 };
    if ok {
        Ok(())
    } else {
        Err(IsssError::InvalidParameter { name: "delta", reason: format!("{delta} out of range") })
    }
}

/// `S^k` in lexicographic order.
pub fn level_words(s: &Sft, k: usize) -> Result<Vec<Word>> {
    if k == 0 {
        return Err(IsssError::InvalidParameter { name: "k", reason: "level must be at least 1".into() });
    }
    let ones = RatioVector::new(vec![0.5; s.alphabet_size()])?;
    let mut out = Vec::new();
    s.walk(&ones, |w, _| {
        if w.len() == k {
            out.push(Word(w.to_vec()));
            false
        } else {
            true
        }
    });
    Ok(out)
}

/// `ρ_ω`, the product of the per-symbol ratios.
pub fn word_ratio(r: &RatioVector, w: &Word) -> f64 {
    w.0.iter().map(|&s| r.get(s as usize)).product()
}

/// The δ-stopping set `S(δ) = {ω : ρ_ω < δ ≤ ρ_{ω-}}`, with `ρ_∅ = 1`.
pub fn stopping_set(s: &Sft, r: &RatioVector, delta: f64) -> Result<Vec<Word>> {
    check_alphabet(s, r)?;
    check_delta(delta, true)?;
    let mut out = Vec::new();
    s.walk(r, |w, ratio| {
        if reaches(ratio, delta) {
            true
        } else {
            out.push(Word(w.to_vec()));
            false
        }
    });
    Ok(out)
}

/// `{ω ∈ S* : ρ_ω ≥ δ}`.
pub fn words_with_ratio_at_least(s: &Sft, r: &RatioVector, delta: f64) -> Result<Vec<Word>> {
    check_alphabet(s, r)?;
    check_delta(delta, false)?;
    let mut out = Vec::new();
    s.walk(r, |w, ratio| {
        let keep = reaches(ratio, delta);
        if keep {
            out.push(Word(w.to_vec()));
        }
        keep
    });
    Ok(out)
}

/// Code-space distance: 1 when the first symbols differ, 0 for equal words,
/// otherwise the ratio product along the longest common prefix.
pub fn code_metric(r: &RatioVector, a: &Word, b: &Word) -> f64 {
    if a == b {
        return 0.0;
    }
    let common = a.0.iter().zip(&b.0).take_while(|(x, y)| x == y).count();
    a.0[..common].iter().map(|&s| r.get(s as usize)).product()
}

/// `f_ω(x0)` together with `ρ_ω · diam(X)`, which bounds the distance to the
/// point addressed by any infinite extension of `ω`.
pub fn theta(maps: &[Similarity], w: &Word, x0: &Point, ambient: &AmbientBox) -> Result<(Point, f64)> {
    if let Some(&bad) = w.0.iter().find(|&&s| s as usize >= maps.len()) {
        return Err(IsssError::InvalidParameter { name: "word", reason: format!("symbol {} beyond {} maps", bad + 1, maps.len()) });
    }
    let mut x = *x0;
    let mut ratio = 1.0;
    for &s in w.0.iter().rev() {
        let f = &maps[s as usize];
        x = f.apply(&x)?;
        ratio *= f.ratio();
    }
    Ok((x, ratio * ambient.diam()))
}

/// Random admissible words: a uniform initial symbol, then a uniform
/// allowed successor at each step.
pub fn sample_admissible(s: &Sft, length: usize, count: usize, seed: u64) -> Result<Vec<Word>> {
    if length == 0 || count == 0 {
        return Err(IsssError::InvalidParameter { name: "length/count", reason: "must be at least 1".into() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let initial: Vec<usize> = s.initial_symbols().collect();
    let succ: Vec<Vec<usize>> = (0..s.alphabet_size()).map(|i| s.successors(i).collect()).collect();
    (0..count)
        .map(|_| {
            let mut w = Vec::with_capacity(length);
            let mut cur = initial[rng.random_range(0..initial.len())];
            w.push(cur as u16);
            for _ in 1..length {
                let next = &succ[cur];
                if next.is_empty() {
                    return Err(IsssError::EmptySubshift);
                }
                cur = next[rng.random_range(0..next.len())];
                w.push(cur as u16);
            }
            Ok(Word(w))
        })
        .collect()
}
