//! Moran-equation solvers.
//!
//! For a subshift `S` with ratios `ρ_i`, the level sums
//! `a_k(s) = Σ_{ω ∈ S^k} ρ_ω^s` drive everything here: the per-level roots
//! `s_k` of `a_k(s) = 1`, the growth rate `τ(s) = lim a_k(s)^{1/k}`, the
//! total mass `m_t = Σ_k a_k(t)`, and the transfer-matrix oracle which
//! solves `spectral_radius(M(s)) = 1` for `M(s)[i][j] = T[i][j] ρ_j^s`.

use crate::codespace::{RatioVector, Sft};
use crate::error::{IsssError, Result};
use crate::geometry::CondensationSet;
use std::collections::HashMap;

/// Levels with more words than this are summed by the transfer recurrence
/// instead of enumeration.
pub const ENUMERATION_CAP: usize = 2_000_000;

fn check(s: &Sft, r: &RatioVector) -> Result<()> {
    if s.alphabet_size() != r.len() {
        return Err(IsssError::DimensionMismatch { expected: s.alphabet_size(), found: r.len() });
    }
    Ok(())
}

/// `a_k(s)` for a fixed level, either as a grouped list of
/// `(ln ρ_ω, multiplicity)` terms or through the transfer recurrence.
pub struct LevelSum<'a> {
    sft: &'a Sft,
    ratios: &'a RatioVector,
    k: usize,
    count: f64,
    terms: Option<Vec<(f64, f64)>>,
}

impl<'a> LevelSum<'a> {
    pub fn new(sft: &'a Sft, ratios: &'a RatioVector, k: usize) -> Result<Self> {
        check(sft, ratios)?;
        if k == 0 {
            return Err(IsssError::InvalidParameter { name: "k", reason: "level must be at least 1".into() });
        }
        let count = sft.level_count(k);
        let terms = (count <= ENUMERATION_CAP as f64).then(|| enumerate_terms(sft, ratios, k));
        Ok(Self { sft, ratios, k, count, terms })
    }

    /// Force the transfer recurrence regardless of level size.
    pub fn transfer_only(sft: &'a Sft, ratios: &'a RatioVector, k: usize) -> Result<Self> {
        let mut l = Self::new(sft, ratios, k)?;
        l.terms = None;
        Ok(l)
    }

    pub fn word_count(&self) -> f64 {
        self.count
    }

    pub fn is_enumerated(&self) -> bool {
        self.terms.is_some()
    }

    pub fn eval(&self, s: f64) -> f64 {
        match &self.terms {
            Some(terms) => terms.iter().map(|&(ln_rho, m)| m * (s * ln_rho).exp()).sum(),
            None => transfer_sums(self.sft, self.ratios, s, self.k)[self.k - 1],
        }
    }
}

/// Enumerate `S^k`, grouping words by how many symbols of each distinct
/// ratio they contain (the ratio product depends on nothing else).
fn enumerate_terms(sft: &Sft, ratios: &RatioVector, k: usize) -> Vec<(f64, f64)> {
    let mut classes: Vec<f64> = Vec::new();
    let class_of: Vec<usize> = ratios
        .as_slice()
        .iter()
        .map(|&r| match classes.iter().position(|&c| c == r) {
            Some(i) => i,
            None => {
                classes.push(r);
                classes.len() - 1
            }
        })
        .collect();
    let mut groups: HashMap<Vec<u8>, f64> = HashMap::new();
    let mut counts = vec![0u8; classes.len()];
    let mut depth_stack: Vec<usize> = Vec::with_capacity(k);
    sft.walk(ratios, |w, _| {
        // keep per-class counts in sync with the current prefix
        while depth_stack.len() >= w.len() {
            let c = depth_stack.pop().unwrap();
            counts[c] -= 1;
        }
        let c = class_of[*w.last().unwrap() as usize];
        counts[c] += 1;
        depth_stack.push(c);
        if w.len() == k {
            *groups.entry(counts.clone()).or_insert(0.0) += 1.0;
            false
        } else {
            true
        }
    });
    let mut terms: Vec<(Vec<u8>, f64)> = groups.into_iter().collect();
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    terms
        .into_iter()
        .map(|(key, m)| {
            let ln: f64 = key.iter().zip(&classes).map(|(&n, c)| n as f64 * c.ln()).sum();
            (ln, m)
        })
        .collect()
}

/// `[a_1(s), ..., a_kmax(s)]` by `v_{k+1}[j] = Σ_i v_k[i] T[i][j] ρ_j^s`.
pub fn transfer_sums(sft: &Sft, ratios: &RatioVector, s: f64, k_max: usize) -> Vec<f64> {
    transfer_vectors(sft, ratios, s, k_max).iter().map(|v| v.iter().sum()).collect()
}

fn transfer_vectors(sft: &Sft, ratios: &RatioVector, s: f64, k_max: usize) -> Vec<Vec<f64>> {
    let n = sft.alphabet_size();
    let w: Vec<f64> = ratios.as_slice().iter().map(|r| r.powf(s)).collect();
    let mut out = Vec::with_capacity(k_max);
    let mut v: Vec<f64> = (0..n).map(|j| if sft.is_initial(j) { w[j] } else { 0.0 }).collect();
    for _ in 0..k_max {
        out.push(v.clone());
        let mut next = vec![0.0; n];
        for i in 0..n {
            if v[i] != 0.0 {
                for j in sft.successors(i) {
                    next[j] += v[i] * w[j];
                }
            }
        }
        v = next;
    }
    out
}

/// Root of a decreasing function on `[lo, hi]` with `g(lo) >= 0 >= g(hi)`,
/// bisected until the bracket is narrower than `width`.
fn bisect_decreasing(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, width: f64) -> f64 {
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= width || mid <= lo || mid >= hi {
            return mid;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(IsssError::InvalidParameter { name: "tol", reason: format!("{tol} is not positive") })
    }
}

/// `s_k` solving `Σ_{ω ∈ S^k} ρ_ω^{s_k} = 1`, by bisection on
/// `[0, ln|S^k| / (k ln(1/ρ_max))]`. A single-word level has `s_k = 0`.
pub fn moran_root(s: &Sft, r: &RatioVector, k: usize, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let level = LevelSum::new(s, r, k)?;
    Ok(solve_level(&level, r, k, tol))
}

fn solve_level(level: &LevelSum<'_>, r: &RatioVector, k: usize, tol: f64) -> f64 {
    let count = level.word_count();
    if count <= 1.0 {
        return 0.0;
    }
    let hi = count.ln() / (k as f64 * (1.0 / r.max()).ln());
    bisect_decreasing(|x| level.eval(x) - 1.0, 0.0, hi, tol * 1e-3)
}

/// Per-level Moran roots and their limit estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct MoranSequence {
    pub s_values: Vec<(usize, f64)>,
    pub s_estimate: f64,
    pub converged: bool,
    pub bracket_tolerance: f64,
}

pub fn dim_limit(s: &Sft, r: &RatioVector, k_max: usize, tol: f64) -> Result<MoranSequence> {
    check_tol(tol)?;
    if k_max < 2 {
        return Err(IsssError::InvalidParameter { name: "k_max", reason: "need at least two levels".into() });
    }
    let s_values = (1..=k_max)
        .map(|k| Ok((k, solve_level(&LevelSum::new(s, r, k)?, r, k, tol))))
        .collect::<Result<Vec<_>>>()?;
    let last = s_values[k_max - 1].1;
    let prev = s_values[k_max - 2].1;
    Ok(MoranSequence { s_values, s_estimate: last, converged: (last - prev).abs() < tol, bracket_tolerance: tol })
}

/// `τ_k(s) = a_k(s)^{1/k}` for `k = 1..=k_max`.
pub fn tau(s: &Sft, r: &RatioVector, exponent: f64, k_max: usize) -> Result<Vec<(usize, f64)>> {
    check(s, r)?;
    if !(exponent >= 0.0) {
        return Err(IsssError::InvalidParameter { name: "s", reason: format!("{exponent} is negative") });
    }
    Ok(transfer_sums(s, r, exponent, k_max)
        .into_iter()
        .enumerate()
        .map(|(i, a)| (i + 1, a.powf(1.0 / (i + 1) as f64)))
        .collect())
}

/// Strongly connected components of the transition graph on `nodes`.
fn components(sft: &Sft, nodes: &[usize]) -> Vec<Vec<usize>> {
    let n = sft.alphabet_size();
    let closure = |start: usize, forward: bool| {
        let mut seen = vec![false; n];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for &j in nodes {
                let edge = if forward { sft.allows(i, j) } else { sft.allows(j, i) };
                if edge && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen
    };
    let mut assigned = vec![false; n];
    let mut out = Vec::new();
    for &v in nodes {
        if assigned[v] {
            continue;
        }
        let (fw, bw) = (closure(v, true), closure(v, false));
        let comp: Vec<usize> = nodes.iter().copied().filter(|&u| fw[u] && bw[u]).collect();
        for &u in &comp {
            assigned[u] = true;
        }
        out.push(comp);
    }
    out
}

/// Perron root of an irreducible nonnegative matrix, from Collatz–Wielandt
/// bounds on the power iterates of `A + I` (primitive, same Perron vector).
pub fn perron_root(a: &[Vec<f64>], tol: f64) -> f64 {
    let n = a.len();
    if n == 0 {
        return 0.0;
    }
    let mut x = vec![1.0; n];
    let mut best = (0.0f64, f64::INFINITY);
    for _ in 0..100_000 {
        let y: Vec<f64> = (0..n).map(|i| x[i] + (0..n).map(|j| a[i][j] * x[j]).sum::<f64>()).collect();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..n {
            let q = y[i] / x[i];
            lo = lo.min(q);
            hi = hi.max(q);
        }
        best = (best.0.max(lo - 1.0), best.1.min(hi - 1.0));
        if best.1 - best.0 <= tol * best.1.max(1.0) {
            break;
        }
        let norm = y.iter().copied().fold(0.0, f64::max);
        x = y.into_iter().map(|v| v / norm).collect();
    }
    0.5 * (best.0 + best.1)
}

fn weighted(sft: &Sft, r: &RatioVector, s: f64, comp: &[usize]) -> Vec<Vec<f64>> {
    comp.iter()
        .map(|&i| comp.iter().map(|&j| if sft.allows(i, j) { r.get(j).powf(s) } else { 0.0 }).collect())
        .collect()
}

/// Spectral radius of `M(s)` restricted to reachable symbols: the largest
/// Perron root over the strongly connected components.
pub fn spectral_radius(sft: &Sft, r: &RatioVector, s: f64, tol: f64) -> f64 {
    let reach = sft.reachable();
    let nodes: Vec<usize> = (0..sft.alphabet_size()).filter(|&i| reach[i]).collect();
    components(sft, &nodes)
        .iter()
        .map(|c| perron_root(&weighted(sft, r, s, c), tol))
        .fold(0.0, f64::max)
}

/// Dimension from the transfer-matrix oracle: the `s` with
/// `spectral_radius(M(s)) = 1`. For a reducible subshift the dominant
/// component decides (see [`Sft::is_irreducible`]).
pub fn spectral_dim(sft: &Sft, r: &RatioVector, tol: f64) -> Result<f64> {
    check(sft, r)?;
    check_tol(tol)?;
    let rho0 = spectral_radius(sft, r, 0.0, 1e-15);
    if rho0 <= 1.0 {
        return Ok(0.0);
    }
    // ρ(M(s)) <= ρ(T) ρ_max^s
    let hi = rho0.ln() / (1.0 / r.max()).ln();
    Ok(bisect_decreasing(|s| spectral_radius(sft, r, s, 1e-15) - 1.0, 0.0, hi * (1.0 + 1e-9), tol * 1e-3))
}

/// Interval enclosing `m_t = Σ_{ω ∈ S*} ρ_ω^t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailMass {
    pub lower: f64,
    pub upper: f64,
    /// Geometric rate `q < 1` used for the tail beyond the summed levels.
    pub rate: f64,
}

/// Partial sum over levels `1..=k` plus a rigorous geometric tail: with a
/// positive vector `x` and `q = max_i (M x)_i / x_i < 1`, the remaining
/// levels sum to at most `(v_K · x) / min(x) · q / (1 - q)`.
pub fn tail_mass(sft: &Sft, r: &RatioVector, t: f64, k: usize) -> Result<TailMass> {
    check(sft, r)?;
    if k == 0 {
        return Err(IsssError::InvalidParameter { name: "K", reason: "need at least one level".into() });
    }
    let vs = transfer_vectors(sft, r, t, k);
    let sums: Vec<f64> = vs.iter().map(|v| v.iter().sum()).collect();
    let growth = sums[k - 1].powf(1.0 / k as f64);
    if growth >= 1.0 {
        return Err(IsssError::Divergent { t, growth });
    }
    let lower: f64 = sums.iter().sum();

    let n = sft.alphabet_size();
    let reach = sft.reachable();
    let m: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if reach[i] && sft.allows(i, j) { r.get(j).powf(t) } else { 0.0 }).collect())
        .collect();
    let x = positive_eigvec(&m, &reach);
    let mut q: f64 = 0.0;
    for i in (0..n).filter(|&i| reach[i]) {
        let mx: f64 = (0..n).map(|j| m[i][j] * x[j]).sum();
        q = q.max(mx / x[i]);
    }
    if q >= 1.0 {
        return Err(IsssError::Divergent { t, growth: q });
    }
    let x_min = (0..n).filter(|&i| reach[i]).map(|i| x[i]).fold(f64::INFINITY, f64::min);
    let vx: f64 = (0..n).map(|i| vs[k - 1][i] * x[i]).sum();
    Ok(TailMass { lower, upper: lower + vx / x_min * q / (1.0 - q), rate: q })
}

/// Positive approximate Perron vector of `m + εJ` on the reachable symbols.
fn positive_eigvec(m: &[Vec<f64>], live: &[bool]) -> Vec<f64> {
    let n = m.len();
    let eps = 1e-9 * m.iter().flatten().copied().fold(0.0, f64::max).max(1e-300);
    let mut x: Vec<f64> = live.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    for _ in 0..2000 {
        let total: f64 = x.iter().sum();
        let y: Vec<f64> = (0..n)
            .map(|i| if live[i] { x[i] + (0..n).map(|j| m[i][j] * x[j]).sum::<f64>() + eps * total } else { 0.0 })
            .collect();
        let norm = y.iter().copied().fold(0.0, f64::max);
        let next: Vec<f64> = y.into_iter().map(|v| v / norm).collect();
        let delta = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        x = next;
        if delta < 1e-14 {
            break;
        }
    }
    x
}

/// Dimensions of `F = E ∪ O_S`.
#[derive(Clone, Debug, PartialEq)]
pub struct DimReport {
    /// Dimension of the symbolic part, `τ(s) = 1`.
    pub s: f64,
    /// `max(s, dim_H C)`.
    pub hausdorff_isss: f64,
    pub box_lower_bound: f64,
    pub box_upper_bound: f64,
    /// `max(s, dim_B C)` when the condensation set has a box dimension.
    pub box_exact: Option<f64>,
    pub tau_at_s: Vec<(usize, f64)>,
    /// Without the open set condition `s` only bounds the dimensions of `E` from above.
    pub upper_bound_only: bool,
}

pub fn isss_dim_report(s: f64, c: &CondensationSet, lower_box_e: f64, upper_box_e: f64) -> DimReport {
    debug_assert!(lower_box_e <= upper_box_e + 1e-12);
    let (c_h, c_lo, c_up) = if c.is_empty() { (0.0, 0.0, 0.0) } else { (c.hausdorff_dim(), c.lower_box_dim(), c.upper_box_dim()) };
    let exact = (c_lo == c_up).then(|| s.max(c_up));
    DimReport {
        s,
        hausdorff_isss: s.max(c_h),
        box_lower_bound: lower_box_e.max(c_lo),
        box_upper_bound: s.max(c_up),
        box_exact: if c.is_empty() { None } else { exact },
        tau_at_s: Vec::new(),
        upper_bound_only: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codespace::level_words;
    use crate::codespace::word_ratio;
    use crate::geometry::{Point, Shape};

    const LOG2_3: f64 = 0.630_929_753_571_457_4; // ln 2 / ln 3
    const LOG2_PHI: f64 = 0.694_241_913_630_617_3; // log2 of the golden ratio

    fn golden() -> Sft {
        Sft::new(vec![vec![true, true], vec![true, false]], &[0, 1]).unwrap()
    }
    fn half() -> RatioVector {
        RatioVector::new(vec![0.5, 0.5]).unwrap()
    }
    fn third() -> RatioVector {
        RatioVector::new(vec![1.0 / 3.0; 2]).unwrap()
    }

    #[test]
    fn reference_constants() {
        assert!((LOG2_3 - 2f64.ln() / 3f64.ln()).abs() < 1e-15);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((LOG2_PHI - phi.log2()).abs() < 1e-15);
    }

    #[test]
    fn moran_examples() {
        for k in 1..=6 {
            assert!((moran_root(&Sft::full(2), &third(), k, 1e-12).unwrap() - LOG2_3).abs() < 1e-11);
        }
        assert!((moran_root(&golden(), &half(), 1, 1e-12).unwrap() - 1.0).abs() < 1e-11);
        assert!((moran_root(&golden(), &half(), 2, 1e-12).unwrap() - 3f64.log2() / 2.0).abs() < 1e-11);
    }

    #[test]
    fn single_symbol_system() {
        let one = Sft::full(1);
        let r = RatioVector::new(vec![0.5]).unwrap();
        let seq = dim_limit(&one, &r, 5, 1e-9).unwrap();
        assert!(seq.s_values.iter().all(|&(_, s)| s == 0.0));
        assert_eq!(spectral_dim(&one, &r, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn golden_limit() {
        let seq = dim_limit(&golden(), &half(), 20, 1e-12).unwrap();
        let expected = 17711f64.log2() / 20.0;
        assert!((seq.s_estimate - expected).abs() < 1e-10);
        assert!((seq.s_estimate - LOG2_PHI).abs() < 0.012);
        assert!(!seq.converged);
        let cantor = dim_limit(&Sft::full(2), &third(), 2, 1e-9).unwrap();
        assert!(cantor.converged);
    }

    #[test]
    fn tau_examples() {
        for (_, t) in tau(&Sft::full(2), &third(), LOG2_3, 8).unwrap() {
            assert!((t - 1.0).abs() < 1e-12);
        }
        let t20 = tau(&golden(), &half(), LOG2_PHI, 20).unwrap()[19].1;
        let expected = 17711f64.powf(1.0 / 20.0) * 2f64.powf(-LOG2_PHI);
        assert!((t20 - expected).abs() < 1e-12);
        assert!((t20 - 1.008).abs() < 1e-3);
        for (k, t) in tau(&golden(), &half(), 0.0, 10).unwrap() {
            assert!((t - golden().level_count(k).powf(1.0 / k as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn spectral_examples() {
        assert!((spectral_dim(&Sft::full(2), &third(), 1e-12).unwrap() - LOG2_3).abs() < 1e-9);
        assert!((spectral_dim(&golden(), &half(), 1e-12).unwrap() - LOG2_PHI).abs() < 1e-9);
    }

    #[test]
    fn periodic_and_reducible_matrices() {
        // period-2 cycle: spectral radius 1, dimension 0
        let swap = Sft::new(vec![vec![false, true], vec![true, false]], &[0, 1]).unwrap();
        assert!(swap.is_irreducible());
        assert!((spectral_radius(&swap, &half(), 0.0, 1e-14) - 1.0).abs() < 1e-12);
        // two disjoint full shifts of sizes 2 and 3; the larger dominates
        let mut t = vec![vec![false; 5]; 5];
        for i in 0..2 {
            for j in 0..2 {
                t[i][j] = true;
            }
        }
        for i in 2..5 {
            for j in 2..5 {
                t[i][j] = true;
            }
        }
        let s = Sft::new(t, &[0, 1, 2, 3, 4]).unwrap();
        assert!(!s.is_irreducible());
        let r = RatioVector::new(vec![1.0 / 3.0; 5]).unwrap();
        assert!((spectral_dim(&s, &r, 1e-12).unwrap() - 1.0).abs() < 1e-9);
    }

    /// Enumeration and the transfer recurrence are two routes to `a_k(s)`.
    #[test]
    fn level_sum_routes_agree() {
        let t = vec![vec![true, true, false], vec![false, true, true], vec![true, false, true]];
        let s = Sft::new(t, &[0, 1, 2]).unwrap();
        let r = RatioVector::new(vec![0.5, 0.3, 0.2]).unwrap();
        for k in 1..=9 {
            let brute: f64 = level_words(&s, k).unwrap().iter().map(|w| word_ratio(&r, w).powf(0.7)).sum();
            let enumerated = LevelSum::new(&s, &r, k).unwrap();
            assert!(enumerated.is_enumerated());
            let transfer = LevelSum::transfer_only(&s, &r, k).unwrap();
            assert!((enumerated.eval(0.7) - brute).abs() < 1e-12 * brute);
            assert!((transfer.eval(0.7) - brute).abs() < 1e-12 * brute);
        }
    }

    #[test]
    fn level_sums_decrease_and_bracket() {
        let r = RatioVector::new(vec![0.5, 0.3]).unwrap();
        let g = golden();
        for k in 1..=12 {
            let l = LevelSum::new(&g, &r, k).unwrap();
            for i in 0..20 {
                let s = i as f64 * 0.1;
                assert!(l.eval(s + 0.1) < l.eval(s));
            }
            let hi = l.word_count().ln() / (k as f64 * 2f64.ln());
            assert!(l.eval(0.0) - 1.0 >= 0.0 && l.eval(hi) - 1.0 <= 1e-12);
        }
    }

    #[test]
    fn tail_mass_examples() {
        let exact = |t: f64| {
            let a = 2.0 * 3f64.powf(-t);
            a / (1.0 - a)
        };
        for t in [0.8, 2.0] {
            let m = tail_mass(&Sft::full(2), &third(), t, 20).unwrap();
            assert!(m.lower <= exact(t) && exact(t) <= m.upper * (1.0 + 1e-12), "{m:?}");
        }
        assert!((exact(0.8) - 4.899).abs() < 1e-3);
        assert!((exact(2.0) - 2.0 / 7.0).abs() < 1e-15);
        assert!(matches!(tail_mass(&Sft::full(2), &third(), 0.6, 20), Err(IsssError::Divergent { .. })));
    }

    #[test]
    fn golden_tail_mass_encloses_long_sum() {
        let t = LOG2_PHI + 0.1;
        let m = tail_mass(&golden(), &half(), t, 10).unwrap();
        let long: f64 = transfer_sums(&golden(), &half(), t, 3000).iter().sum();
        assert!(m.lower <= long && long <= m.upper, "{m:?} vs {long}");
    }

    #[test]
    fn reports() {
        let pt = CondensationSet::points(vec![Point::new(&[0.5]).unwrap()]).unwrap();
        let rep = isss_dim_report(LOG2_3, &pt, LOG2_3, LOG2_3);
        assert_eq!(rep.hausdorff_isss, LOG2_3);
        assert_eq!(rep.box_exact, Some(LOG2_3));
        let seg = CondensationSet::new(Shape::Segment(Point::new(&[0.0]).unwrap(), Point::new(&[1.0]).unwrap())).unwrap();
        let rep = isss_dim_report(0.5, &seg, 0.5, 0.5);
        assert_eq!((rep.hausdorff_isss, rep.box_lower_bound, rep.box_upper_bound), (1.0, 1.0, 1.0));
        let rep = isss_dim_report(0.4, &CondensationSet::empty(1), 0.3, 0.4);
        assert_eq!((rep.hausdorff_isss, rep.box_lower_bound, rep.box_upper_bound, rep.box_exact), (0.4, 0.3, 0.4, None));
    }
}
