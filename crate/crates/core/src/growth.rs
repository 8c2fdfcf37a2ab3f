//! Growth types `(d(a), θ(a))` of letters, read off the strongly connected
//! components of the letter graph, and their empirical counterparts.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{self, IntMatrix, PerronValue};
use crate::words::{Letter, Morphism, Word};

/// Letters `a` with `σⁿ(a) = ε` for some `n`.
pub fn mortal_letters(sigma: &Morphism) -> Vec<bool> {
    let n = sigma.domain().len();
    let mut mortal = vec![false; n];
    for _ in 0..=n {
        let next: Vec<bool> = sigma
            .images()
            .iter()
            .map(|w| w.iter().all(|&c| mortal[c as usize]))
            .collect();
        if next == mortal {
            break;
        }
        mortal = next;
    }
    mortal
}

/// Letters with `|σⁿ(a)| → ∞`. Works for erasing substitutions too.
///
/// A letter grows iff it reaches, through non-mortal letters, a letter `b`
/// lying on a cycle whose image holds at least two non-mortal letters.
pub fn growing_letters(sigma: &Morphism) -> Vec<bool> {
    let n = sigma.domain().len();
    let mortal = mortal_letters(sigma);
    let succ: Vec<Vec<Letter>> = sigma
        .successors()
        .into_iter()
        .map(|s| s.into_iter().filter(|&c| !mortal[c as usize]).collect())
        .collect();
    let comps = tarjan(&succ);
    let mut comp_of = vec![0usize; n];
    for (i, c) in comps.iter().enumerate() {
        for &l in c {
            comp_of[l as usize] = i;
        }
    }
    let mut pump = vec![false; n];
    for b in 0..n {
        if mortal[b] {
            continue;
        }
        let on_cycle = comps[comp_of[b]].len() > 1 || succ[b].contains(&(b as Letter));
        let live = sigma.image(b as Letter).iter().filter(|&&c| !mortal[c as usize]).count();
        pump[b] = on_cycle && live >= 2;
    }
    // Components come sinks first, so one pass settles reachability.
    let mut comp_grows = vec![false; comps.len()];
    for (i, c) in comps.iter().enumerate() {
        comp_grows[i] = c.iter().any(|&l| {
            pump[l as usize] || succ[l as usize].iter().any(|&m| comp_of[m as usize] != i && comp_grows[comp_of[m as usize]])
        });
    }
    (0..n).map(|a| !mortal[a] && comp_grows[comp_of[a]]).collect()
}

/// Strongly connected components, listed sinks first (reverse topological
/// order of the condensation).
pub(crate) fn tarjan(succ: &[Vec<Letter>]) -> Vec<Vec<Letter>> {
    let n = succ.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if *next < succ[v].len() {
                let w = succ[v][*next] as usize;
                *next += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w as Letter);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// `(d, θ)` with `|σⁿ(a)| ~ c·n^d·θⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthType {
    pub d: u32,
    pub theta: PerronValue,
}

impl GrowthType {
    /// `(d, θ) < (e, β)` iff `θ < β`, or `θ = β` and `d < e`.
    pub fn compare(&self, other: &GrowthType) -> Ordering {
        self.theta.compare(&other.theta).then(self.d.cmp(&other.d))
    }

    pub fn is_growing(&self) -> bool {
        self.compare(&GrowthType {
            d: 0,
            theta: PerronValue::from_integer(1),
        }) == Ordering::Greater
    }
}

/// Growth of one letter; mortal letters have none.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LetterGrowth {
    Mortal,
    Growth(GrowthType),
}

impl LetterGrowth {
    pub fn growth(&self) -> Option<&GrowthType> {
        match self {
            LetterGrowth::Mortal => None,
            LetterGrowth::Growth(g) => Some(g),
        }
    }
}

/// Component data shared by the per-letter computations.
struct Condensation {
    comps: Vec<Vec<Letter>>,
    comp_of: Vec<usize>,
    /// Successor components, excluding the component itself.
    dag: Vec<Vec<usize>>,
    /// Perron root of the restricted matrix, `None` for trivial components.
    radius: Vec<Option<PerronValue>>,
    /// Index of the radius among the distinct values, ascending.
    class: Vec<Option<usize>>,
    classes: Vec<PerronValue>,
    /// Cyclicity index of each non-trivial component.
    period: Vec<u64>,
}

impl Condensation {
    fn new(sigma: &Morphism) -> Result<Self> {
        let n = sigma.domain().len();
        let succ = sigma.successors();
        let comps = tarjan(&succ);
        let mut comp_of = vec![0usize; n];
        for (i, c) in comps.iter().enumerate() {
            for &l in c {
                comp_of[l as usize] = i;
            }
        }
        let m = spectral::incidence_matrix(sigma);
        let mut dag = vec![Vec::new(); comps.len()];
        let mut radius = Vec::with_capacity(comps.len());
        let mut period = Vec::with_capacity(comps.len());
        for (i, c) in comps.iter().enumerate() {
            for &l in c {
                for &t in &succ[l as usize] {
                    let j = comp_of[t as usize];
                    if j != i && !dag[i].contains(&j) {
                        dag[i].push(j);
                    }
                }
            }
            let trivial = c.len() == 1 && !succ[c[0] as usize].contains(&c[0]);
            if trivial {
                radius.push(None);
                period.push(1);
            } else {
                let idx: Vec<usize> = c.iter().map(|&l| l as usize).collect();
                radius.push(Some(spectral::dominant_eigenvalue(&m.submatrix(&idx))?));
                period.push(component_period(c, &succ, &comp_of, i));
            }
        }
        let mut classes: Vec<PerronValue> = Vec::new();
        for r in radius.iter().flatten() {
            if !classes.iter().any(|c| c.eq_value(r)) {
                classes.push(r.clone());
            }
        }
        classes.sort_by(|a, b| a.compare(b));
        let class = radius
            .iter()
            .map(|r| r.as_ref().map(|r| classes.iter().position(|c| c.eq_value(r)).unwrap()))
            .collect();
        Ok(Condensation {
            comps,
            comp_of,
            dag,
            radius,
            class,
            classes,
            period,
        })
    }

    /// For each component: the largest radius class reachable, and the
    /// longest chain of components of that class.
    fn types(&self) -> Vec<(usize, u32)> {
        let k = self.comps.len();
        let mut best: Vec<Option<usize>> = vec![None; k];
        // Components are sinks first, so successors are already done.
        for i in 0..k {
            let mut b = self.class[i];
            for &j in &self.dag[i] {
                b = b.max(best[j]);
            }
            best[i] = b;
        }
        let mut out = Vec::with_capacity(k);
        for i in 0..k {
            let cls = best[i].expect("non-erasing substitutions reach a cycle");
            let mut chain = vec![0u32; k];
            for j in 0..k {
                let own = u32::from(self.class[j] == Some(cls));
                let tail = self.dag[j].iter().map(|&t| chain[t]).max().unwrap_or(0);
                chain[j] = own + tail;
            }
            out.push((cls, chain[i] - 1));
        }
        out
    }

    fn reachable_components(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.comps.len()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            for &j in &self.dag[i] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen
    }
}

/// gcd of cycle lengths inside a strongly connected component.
fn component_period(comp: &[Letter], succ: &[Vec<Letter>], comp_of: &[usize], id: usize) -> u64 {
    let mut level: Vec<Option<u64>> = vec![None; succ.len()];
    let root = comp[0] as usize;
    level[root] = Some(0);
    let mut queue = std::collections::VecDeque::from([root]);
    let mut g = 0u64;
    while let Some(v) = queue.pop_front() {
        let lv = level[v].unwrap();
        for &w in &succ[v] {
            let w = w as usize;
            if comp_of[w] != id {
                continue;
            }
            match level[w] {
                None => {
                    level[w] = Some(lv + 1);
                    queue.push_back(w);
                }
                Some(lw) => g = g.gcd(&(lv + 1).abs_diff(lw)),
            }
        }
    }
    g.max(1)
}

fn require_non_erasing(sigma: &Morphism) -> Result<()> {
    if !sigma.is_endomorphism() {
        return Err(Error::AlphabetMismatch("growth needs an endomorphism".into()));
    }
    if sigma.is_erasing() {
        return Err(Error::Erasing);
    }
    Ok(())
}

/// Growth types of every letter of a non-erasing substitution.
pub fn growth_types(sigma: &Morphism) -> Result<Vec<GrowthType>> {
    require_non_erasing(sigma)?;
    let cond = Condensation::new(sigma)?;
    let per_comp = cond.types();
    Ok(sigma
        .domain()
        .letters()
        .map(|a| {
            let (cls, d) = per_comp[cond.comp_of[a as usize]];
            GrowthType {
                d,
                theta: cond.classes[cls].clone(),
            }
        })
        .collect())
}

pub fn growth_type(sigma: &Morphism, a: Letter) -> Result<GrowthType> {
    if !sigma.domain().contains(a) {
        return Err(Error::InvalidArgument(format!("letter id {a} out of range")));
    }
    if sigma.is_erasing() && mortal_letters(sigma)[a as usize] {
        return Err(Error::MortalLetter(sigma.domain().token(a).into()));
    }
    Ok(growth_types(sigma)?.swap_remove(a as usize))
}

/// `π∘σ` restricted to the non-mortal letters, where `π` deletes mortal
/// letters. The result is non-erasing and has the same growth types on the
/// surviving letters. Returns the surviving letters (old ids) as well.
pub fn strip_mortal(sigma: &Morphism) -> Result<(Morphism, Vec<Letter>)> {
    let mortal = mortal_letters(sigma);
    let keep: Vec<Letter> = sigma.domain().letters().filter(|&l| !mortal[l as usize]).collect();
    if keep.is_empty() {
        return Err(Error::InvalidArgument("every letter is mortal".into()));
    }
    let mut renum = vec![0 as Letter; sigma.domain().len()];
    for (i, &l) in keep.iter().enumerate() {
        renum[l as usize] = i as Letter;
    }
    let images = keep
        .iter()
        .map(|&l| {
            sigma
                .image(l)
                .iter()
                .filter(|&&c| !mortal[c as usize])
                .map(|&c| renum[c as usize])
                .collect::<Word>()
        })
        .collect();
    let alphabet = sigma.domain().restrict(&keep)?;
    Ok((Morphism::endo(alphabet, images)?, keep))
}

/// A named consistency check on a growth summary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub name: String,
    pub ok: bool,
}

/// System-level growth data: `Θ`, `D`, `A_max` and per-letter types.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthSummary {
    pub theta: PerronValue,
    pub d: u32,
    pub a_max: Vec<Letter>,
    pub growing: bool,
    pub per_letter: Vec<GrowthType>,
    pub checks: Vec<Diagnostic>,
}

impl GrowthSummary {
    pub fn growth_type(&self) -> GrowthType {
        GrowthType {
            d: self.d,
            theta: self.theta.clone(),
        }
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

pub fn substitution_growth(sigma: &Morphism) -> Result<GrowthSummary> {
    let per_letter = growth_types(sigma)?;
    let theta = per_letter
        .iter()
        .map(|g| &g.theta)
        .max_by(|a, b| a.compare(b))
        .expect("alphabets are non-empty")
        .clone();
    let d = per_letter
        .iter()
        .filter(|g| g.theta.eq_value(&theta))
        .map(|g| g.d)
        .max()
        .unwrap();
    let a_max: Vec<Letter> = per_letter
        .iter()
        .enumerate()
        .filter(|(_, g)| g.d == d && g.theta.eq_value(&theta))
        .map(|(a, _)| a as Letter)
        .collect();
    let structural: Vec<bool> = per_letter.iter().map(GrowthType::is_growing).collect();
    let growing = structural.iter().all(|&g| g);
    let mut checks = Vec::new();
    checks.push(Diagnostic {
        name: "growing letters agree with the direct criterion".into(),
        ok: structural == growing_letters(sigma),
    });
    checks.push(Diagnostic {
        name: "growing iff every rate exceeds 1".into(),
        ok: growing == per_letter.iter().all(|g| g.theta.cmp_integer(1) == Ordering::Greater),
    });
    let all_degrees = (0..=d).all(|i| {
        per_letter
            .iter()
            .any(|g| g.d == i && g.theta.eq_value(&theta))
    });
    checks.push(Diagnostic {
        name: "every degree up to D occurs at the maximal rate".into(),
        ok: all_degrees,
    });
    if theta.cmp_integer(1) == Ordering::Equal {
        checks.push(Diagnostic {
            name: "rate 1 implies a non-growing letter".into(),
            ok: structural.iter().any(|&g| !g),
        });
    }
    let dominant = spectral::dominant_eigenvalue(&spectral::incidence_matrix(sigma))?;
    checks.push(Diagnostic {
        name: "maximal rate equals the dominating eigenvalue".into(),
        ok: dominant.eq_value(&theta),
    });
    Ok(GrowthSummary {
        theta,
        d,
        a_max,
        growing,
        per_letter,
        checks,
    })
}

/// `|σⁿ(a)|` for every letter and `n = 0..=n_max`, exactly.
pub fn image_lengths(sigma: &Morphism, n_max: usize) -> Vec<Vec<BigInt>> {
    let m = spectral::incidence_matrix(sigma);
    let k = m.dim();
    let mut row = vec![BigInt::one(); k];
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(row.clone());
    for _ in 0..n_max {
        row = (0..k)
            .map(|j| (0..k).map(|i| &row[i] * m.get(i, j)).sum())
            .collect();
        out.push(row.clone());
    }
    out
}

/// Result of fitting `|σⁿ(a)| ≈ c·n^d·θⁿ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub d: u32,
    pub theta: f64,
    pub c_estimate: f64,
    /// Largest `|ratio - 1|` over the top half of the samples.
    pub residual: f64,
    /// Period used to split samples into residue classes.
    pub period: u64,
    /// For rate 1: the lengths are a polynomial of degree `d` on each
    /// residue class (finite differences of order `d+1` vanish).
    pub polynomial: Option<bool>,
}

/// Compares the structural growth type of `a` with the exact lengths
/// `|σⁿ(a)|`, `n ≤ n_max`.
///
/// When the components reachable from `a` are periodic the ratio
/// `|σⁿ(a)| / (n^d θⁿ)` only converges along residue classes modulo the
/// period, so `c` is fitted per class.
pub fn empirical_growth_fit(sigma: &Morphism, a: Letter, n_max: usize) -> Result<GrowthFit> {
    require_non_erasing(sigma)?;
    if n_max < 10 {
        return Err(Error::InvalidArgument("n_max must be at least 10".into()));
    }
    let cond = Condensation::new(sigma)?;
    let types = cond.types();
    let ca = cond.comp_of[a as usize];
    let (cls, d) = types[ca];
    let theta = &cond.classes[cls];
    let reach = cond.reachable_components(ca);
    let period = (0..cond.comps.len())
        .filter(|&i| reach[i] && cond.radius[i].is_some())
        .fold(1u64, |p, i| p.lcm(&cond.period[i]));
    let lengths: Vec<BigInt> = image_lengths(sigma, n_max)
        .into_iter()
        .map(|r| r[a as usize].clone())
        .collect();
    let p = period as usize;
    let top = (n_max / 2).max(1)..=n_max;

    if theta.cmp_integer(1) == Ordering::Equal {
        let mut residual = 0f64;
        let mut c_estimate = 0f64;
        let mut polynomial = true;
        for r in 0..p {
            let last = n_max - ((n_max - r) % p);
            let nodes: Vec<usize> = (0..=d as usize).map(|j| last - j * p).collect();
            let pts: Vec<(BigRational, BigRational)> = nodes
                .iter()
                .map(|&n| (BigRational::from(BigInt::from(n)), BigRational::from(lengths[n].clone())))
                .collect();
            if last == n_max {
                c_estimate = leading_coefficient(&pts).to_f64().unwrap_or(f64::NAN);
            }
            for n in top.clone().filter(|n| n % p == r) {
                let v = lagrange_eval(&pts, &BigRational::from(BigInt::from(n)));
                let actual = BigRational::from(lengths[n].clone());
                if v != actual {
                    polynomial = false;
                }
                let dev = ((v - &actual) / &actual).abs().to_f64().unwrap_or(f64::INFINITY);
                residual = residual.max(dev);
            }
        }
        return Ok(GrowthFit {
            d,
            theta: 1.0,
            c_estimate,
            residual,
            period,
            polynomial: Some(polynomial),
        });
    }

    // log of c·n^d·θⁿ, compared in log space to stay finite.
    let ln_theta = ln_perron(theta);
    let ln_model = |n: usize| d as f64 * (n as f64).ln() + n as f64 * ln_theta;
    let mut ln_c = vec![0f64; p];
    for (r, c) in ln_c.iter_mut().enumerate() {
        let last = n_max - ((n_max - r) % p);
        *c = ln_big(&lengths[last]) - ln_model(last);
    }
    let residual = top
        .map(|n| ((ln_big(&lengths[n]) - ln_model(n) - ln_c[n % p]).exp() - 1.0).abs())
        .fold(0f64, f64::max);
    Ok(GrowthFit {
        d,
        theta: theta.to_f64(),
        c_estimate: ln_c[n_max % p].exp(),
        residual,
        period,
        polynomial: None,
    })
}

/// Natural log of a Perron value, from its isolating interval.
fn ln_perron(v: &PerronValue) -> f64 {
    v.to_f64().ln()
}

/// Natural log of a positive big integer without overflowing `f64`.
fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

fn lagrange_eval(pts: &[(BigRational, BigRational)], x: &BigRational) -> BigRational {
    let mut total = BigRational::zero();
    for (j, (xj, yj)) in pts.iter().enumerate() {
        let mut term = yj.clone();
        for (i, (xi, _)) in pts.iter().enumerate() {
            if i != j {
                term = term * (x - xi) / (xj - xi);
            }
        }
        total += term;
    }
    total
}

/// Coefficient of `x^(len-1)` in the interpolating polynomial.
fn leading_coefficient(pts: &[(BigRational, BigRational)]) -> BigRational {
    let mut total = BigRational::zero();
    for (j, (xj, yj)) in pts.iter().enumerate() {
        let mut denom = BigRational::one();
        for (i, (xi, _)) in pts.iter().enumerate() {
            if i != j {
                denom *= xj - xi;
            }
        }
        total += yj / denom;
    }
    total
}

/// `IntMatrix` of the substitution restricted to one component, exposed for
/// reports.
pub fn component_matrices(sigma: &Morphism) -> Vec<(Vec<Letter>, IntMatrix)> {
    let m = spectral::incidence_matrix(sigma);
    tarjan(&sigma.successors())
        .into_iter()
        .map(|c| {
            let idx: Vec<usize> = c.iter().map(|&l| l as usize).collect();
            let sub = m.submatrix(&idx);
            (c, sub)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sub(images: &[&[u8]]) -> Morphism {
        Morphism::from_images(images.iter().map(|w| w.to_vec()).collect()).unwrap()
    }

    #[test]
    fn mortal_fixpoint() {
        assert_eq!(mortal_letters(&sub(&[&[1], &[]])), vec![true, true]);
        assert_eq!(mortal_letters(&sub(&[&[0, 1], &[]])), vec![false, true]);
        assert_eq!(mortal_letters(&sub(&[&[0, 1], &[0]])), vec![false, false]);
    }

    #[test]
    fn growing_with_erasure() {
        // a -> a b, b -> ε: |σⁿ(a)| = 1.
        assert_eq!(growing_letters(&sub(&[&[0, 1], &[]])), vec![false, false]);
        // 0 -> 0 1, 1 -> 1
        assert_eq!(growing_letters(&sub(&[&[0, 1], &[1]])), vec![true, false]);
        // a -> a b c, b -> ε, c -> c
        assert_eq!(growing_letters(&sub(&[&[0, 1, 2], &[], &[2]])), vec![true, false, false]);
        // a -> b, b -> a: bounded
        assert_eq!(growing_letters(&sub(&[&[1], &[0]])), vec![false, false]);
    }

    #[test]
    fn tarjan_orders_sinks_first() {
        let succ = vec![vec![0, 1], vec![1, 2], vec![1, 2]];
        let comps = tarjan(&succ);
        assert_eq!(comps, vec![vec![1, 2], vec![0]]);
    }

    #[test]
    fn reference_growth_types() {
        let tau = sub(&[&[0, 0, 0, 1], &[1, 2], &[2, 1]]);
        let g = growth_types(&tau).unwrap();
        assert_eq!(g[0].d, 0);
        assert_eq!(g[0].theta.exact(), Some(&BigInt::from(3)));
        for l in [1, 2] {
            assert_eq!(g[l].d, 0);
            assert_eq!(g[l].theta.exact(), Some(&BigInt::from(2)));
        }
        let s = substitution_growth(&tau).unwrap();
        assert_eq!(s.theta.exact(), Some(&BigInt::from(3)));
        assert_eq!((s.d, s.a_max.clone(), s.growing), (0, vec![0], true));
        assert!(s.all_checks_pass());
    }

    #[test]
    fn polynomial_growth() {
        let s = sub(&[&[0, 1], &[1]]);
        let g = growth_types(&s).unwrap();
        assert_eq!((g[0].d, g[0].theta.exact().cloned()), (1, Some(BigInt::from(1))));
        assert_eq!((g[1].d, g[1].theta.exact().cloned()), (0, Some(BigInt::from(1))));
        let summary = substitution_growth(&s).unwrap();
        assert_eq!((summary.d, summary.growing), (1, false));
        assert!(summary.all_checks_pass());
        let fit = empirical_growth_fit(&s, 0, 30).unwrap();
        assert_eq!(fit.c_estimate, 1.0);
        assert_eq!(fit.residual, 0.0);
        assert_eq!(fit.polynomial, Some(true));
    }

    #[test]
    fn fibonacci_and_doubling() {
        let fib = sub(&[&[0, 1], &[0]]);
        let g = growth_types(&fib).unwrap();
        assert!(g.iter().all(|t| t.d == 0 && (t.theta.to_f64() - 1.618033988749895).abs() < 1e-12));
        assert!(empirical_growth_fit(&fib, 0, 30).unwrap().residual < 0.05);
        let dbl = sub(&[&[0, 0]]);
        let fit = empirical_growth_fit(&dbl, 0, 20).unwrap();
        assert_eq!((fit.d, fit.theta), (0, 2.0));
        assert!((fit.c_estimate - 1.0).abs() < 1e-12 && fit.residual < 1e-12);
    }

    #[test]
    fn not_good_example_summary() {
        let s = substitution_growth(&sub(&[&[0, 1, 0, 0], &[1, 2], &[2, 1]])).unwrap();
        assert_eq!(s.theta.exact(), Some(&BigInt::from(3)));
        assert_eq!((s.d, s.a_max), (0, vec![0]));
    }

    #[test]
    fn equal_rates_along_a_path_raise_d() {
        // a -> a a b, b -> b b: |σⁿ(a)| = 2^(n-1)(n+2)
        let s = sub(&[&[0, 0, 1], &[1, 1]]);
        let g = growth_types(&s).unwrap();
        assert_eq!(g[0].d, 1);
        assert_eq!(g[1].d, 0);
        // Golden rate twice: a -> a b a c? use two Fibonacci blocks chained.
        let s = sub(&[&[0, 1, 2], &[0], &[2, 3], &[2]]);
        let g = growth_types(&s).unwrap();
        assert_eq!(g[0].d, 1);
        assert_eq!(g[2].d, 0);
        assert!(g[0].theta.eq_value(&g[2].theta));
    }

    #[test]
    fn periodic_components() {
        // a -> b b b, b -> a: lengths 1, 3, 3, 9, 9, ...
        let s = sub(&[&[1, 1, 1], &[0]]);
        let fit = empirical_growth_fit(&s, 0, 30).unwrap();
        assert_eq!(fit.period, 2);
        assert!(fit.residual < 1e-9);
        // a -> a b, b -> c, c -> b d, d -> d: quasi-linear lengths.
        let s = sub(&[&[0, 1], &[2], &[1, 3], &[3]]);
        let fit = empirical_growth_fit(&s, 1, 30).unwrap();
        assert_eq!((fit.d, fit.period, fit.polynomial), (1, 2, Some(true)));
    }

    #[test]
    fn strip_mortal_keeps_growth() {
        let s = sub(&[&[0, 1, 2], &[], &[2, 2]]);
        let (t, keep) = strip_mortal(&s).unwrap();
        assert_eq!(keep, vec![0, 2]);
        assert_eq!(t.images()[0].to_vec(), vec![0, 1]);
        assert!(t.is_non_erasing());
    }
}
