//! Turning any system `(σ, a, φ)` into one with a non-erasing substitution
//! and a coding that generates the same sequence.
//!
//! Three constructions are tried in order:
//!
//! * nothing to do (`σ` non-erasing, `φ` a coding);
//! * intertwining: `φ` sends letters to single letters or to `ε` and some
//!   `τ` satisfies `φ∘σ^k = τ∘φ`, so `φ(σ^ω(a)) = τ^ω(φ(a))`;
//! * the general pipeline: a power `ρ = σ^k` whose letter sets are stable,
//!   removal of the letters `D` with `φ(ρ(b)) = ε`, then block coding of the
//!   non-erasing morphism `φ∘ρ`.
//!
//! The result is always checked by comparing prefixes with the original.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::growth;
use crate::spectral::{self, PerronValue};
use crate::system::{compare_images, Agreement, SubstitutionSystem};
use crate::words::{compose, power, Alphabet, Letter, Morphism, Word};

/// Prefix length checked after every normalization.
pub const DEFAULT_VERIFY_DEPTH: usize = 10_000;
/// Largest power of `σ` tried by the searches below.
pub const MAX_POWER: u32 = 64;
/// Cap on `Σ|σ^k(b)|` while searching for powers.
const POWER_BUDGET: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Unchanged,
    Intertwining,
    BlockCoding,
    ErasurePipeline,
}

/// A normal system (non-erasing substitution, coding) generating the same
/// sequence as `original`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedSystem {
    pub original: SubstitutionSystem,
    /// `(τ, start_b, ψ)`.
    pub system: SubstitutionSystem,
    /// `γ : A → B*` with `γ∘σ^k = τ∘γ` and `ψ∘γ = φ`, when it exists for the
    /// construction used (checked letter by letter).
    pub gamma: Option<Morphism>,
    pub k: u32,
    pub verified_depth: usize,
    pub construction: Construction,
}

impl NormalizedSystem {
    pub fn tau(&self) -> &Morphism {
        self.system.sigma()
    }

    pub fn psi(&self) -> &Morphism {
        self.system.phi()
    }

    pub fn start(&self) -> Letter {
        self.system.start()
    }

    /// Dominating eigenvalues of `σ` and `τ`.
    pub fn eigenvalues(&self) -> Result<(PerronValue, PerronValue)> {
        Ok((
            spectral::dominant_eigenvalue(&spectral::incidence_matrix(self.original.sigma()))?,
            spectral::dominant_eigenvalue(&spectral::incidence_matrix(self.tau()))?,
        ))
    }

    /// Re-runs the prefix comparison to depth `n` and records it.
    pub fn verify(&mut self, n: usize) -> Result<Agreement> {
        let a = verify_normalization(&self.original, &self.system, n)?;
        if a.agrees() {
            self.verified_depth = self.verified_depth.max(n);
        }
        Ok(a)
    }

    pub fn sidecar(&self) -> Result<Sidecar> {
        let (before, after) = self.eigenvalues()?;
        let relation = power_relation(&before, &after);
        Ok(Sidecar {
            construction: self.construction,
            k: self.k,
            verified_depth: self.verified_depth,
            eigenvalue_before: before,
            eigenvalue_after: after,
            after_is_power_of_before: relation,
            gamma: self.gamma.as_ref().map(|g| render_morphism(g)),
        })
    }
}

/// JSON companion written next to a normalized system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sidecar {
    pub construction: Construction,
    pub k: u32,
    pub verified_depth: usize,
    pub eigenvalue_before: PerronValue,
    pub eigenvalue_after: PerronValue,
    /// Smallest `j ≤ 64` with `after = before^j`, if any.
    pub after_is_power_of_before: Option<u32>,
    pub gamma: Option<Vec<(String, String)>>,
}

fn power_relation(before: &PerronValue, after: &PerronValue) -> Option<u32> {
    if before.cmp_integer(1) != Ordering::Greater {
        return (after.eq_value(before)).then_some(1);
    }
    for j in 1..=64 {
        let p = before.pow(j).ok()?;
        match p.compare(after) {
            Ordering::Equal => return Some(j),
            Ordering::Greater => return None,
            Ordering::Less => {}
        }
    }
    None
}

fn render_morphism(m: &Morphism) -> Vec<(String, String)> {
    m.domain()
        .letters()
        .map(|l| {
            let img: Vec<&str> = m.image(l).iter().map(|&c| m.codomain().token(c)).collect();
            (m.domain().token(l).to_string(), img.join(" "))
        })
        .collect()
}

/// Normalizes any valid system, verifying to [`DEFAULT_VERIFY_DEPTH`].
pub fn normalize(sys: &SubstitutionSystem) -> Result<NormalizedSystem> {
    normalize_with_depth(sys, DEFAULT_VERIFY_DEPTH)
}

pub fn normalize_with_depth(sys: &SubstitutionSystem, depth: usize) -> Result<NormalizedSystem> {
    let mut out = if sys.is_normal() {
        NormalizedSystem {
            original: sys.clone(),
            system: sys.clone(),
            gamma: Some(Morphism::identity(sys.alphabet())),
            k: 1,
            verified_depth: 0,
            construction: Construction::Unchanged,
        }
    } else if sys.sigma().is_non_erasing() && sys.phi().is_non_erasing() {
        morphism_to_coding(sys)?
    } else {
        eliminate_erasure(sys)?
    };
    let a = out.verify(depth)?;
    if let Some(i) = a.mismatch {
        return Err(Error::Normalize(format!(
            "normalized system differs from the original at index {i}"
        )));
    }
    Ok(out)
}

/// Removes erasure from `σ` and `φ`. Prefix agreement is not checked here;
/// see [`normalize`].
pub fn eliminate_erasure(sys: &SubstitutionSystem) -> Result<NormalizedSystem> {
    if let Some(n) = intertwine(sys)? {
        return Ok(n);
    }
    erasure_pipeline(sys)
}

/// Looks for `τ` with `φ∘σ^k = τ∘φ` when `φ` maps letters to at most one
/// letter.
fn intertwine(sys: &SubstitutionSystem) -> Result<Option<NormalizedSystem>> {
    let phi = sys.phi();
    if phi.images().iter().any(|w| w.len() > 1) || phi.image(sys.start()).is_empty() {
        return Ok(None);
    }
    let out = phi.codomain().clone();
    let mut rho = sys.sigma().clone();
    for k in 1..=8u32 {
        if k > 1 {
            rho = match compose(&rho, sys.sigma()) {
                Ok(r) if total_len(&r) <= POWER_BUDGET => r,
                _ => break,
            };
        }
        let mut tau: Vec<Option<Word>> = vec![None; out.len()];
        let mut ok = true;
        for b in sys.alphabet().letters() {
            let img = phi.apply(rho.image(b))?;
            match phi.image(b).first() {
                None => ok &= img.is_empty(),
                Some(&c) => match &tau[c as usize] {
                    Some(prev) => ok &= *prev == img,
                    None => tau[c as usize] = Some(img),
                },
            }
            if !ok {
                break;
            }
        }
        if !ok {
            continue;
        }
        let images: Vec<Word> = tau.into_iter().map(|w| w.expect("coding is onto")).collect();
        if images.iter().any(|w| w.is_empty()) {
            continue;
        }
        let tau = Morphism::endo(out.clone(), images)?;
        let start = phi.image(sys.start())[0];
        let Ok(system) = prune(tau, start, None, sys.label()) else {
            continue;
        };
        let mut n = NormalizedSystem {
            original: sys.clone(),
            system,
            gamma: None,
            k,
            verified_depth: 0,
            construction: Construction::Intertwining,
        };
        if n.system.alphabet() == &out {
            n.gamma = checked_gamma(&n, Some(phi.clone()));
        }
        return Ok(Some(n));
    }
    Ok(None)
}

fn total_len(m: &Morphism) -> usize {
    m.images().iter().map(|w| w.len()).sum()
}

/// Smallest `k` with `F^{2k}({b}) = F^k({b})` for every letter, where `F`
/// maps a letter set to the letters of its image.
fn stable_power(sigma: &Morphism) -> Result<u32> {
    let n = sigma.domain().len();
    let succ = sigma.successors();
    let step = |set: &Vec<bool>| -> Vec<bool> {
        let mut out = vec![false; n];
        for (b, &inside) in set.iter().enumerate() {
            if inside {
                for &c in &succ[b] {
                    out[c as usize] = true;
                }
            }
        }
        out
    };
    // orbit[b][j] = F^j({b})
    let limit = 4 * MAX_POWER as usize;
    let mut orbits: Vec<Vec<Vec<bool>>> = (0..n)
        .map(|b| {
            let mut s = vec![false; n];
            s[b] = true;
            vec![s]
        })
        .collect();
    for k in 1..=MAX_POWER as usize {
        for orbit in orbits.iter_mut() {
            while orbit.len() <= 2 * k && orbit.len() <= limit {
                let next = step(orbit.last().unwrap());
                orbit.push(next);
            }
        }
        if orbits.iter().all(|o| o[2 * k] == o[k]) {
            return Ok(k as u32);
        }
    }
    Err(Error::Normalize(format!(
        "letter sets of σ^k do not stabilize for k ≤ {MAX_POWER}"
    )))
}

fn erasure_pipeline(sys: &SubstitutionSystem) -> Result<NormalizedSystem> {
    let sigma = sys.sigma();
    let phi = sys.phi();
    let k = stable_power(sigma)?;
    let rho = power(sigma, k)?;
    let in_d: Vec<bool> = sys
        .alphabet()
        .letters()
        .map(|b| phi.apply(rho.image(b)).map(|w| w.is_empty()))
        .collect::<Result<_>>()?;
    let a = sys.start();
    if in_d[a as usize] {
        return Err(Error::FiniteSequence(0));
    }
    let keep: Vec<Letter> = sys.alphabet().letters().filter(|&b| !in_d[b as usize]).collect();
    let mut renum = vec![0 as Letter; sys.alphabet().len()];
    for (i, &b) in keep.iter().enumerate() {
        renum[b as usize] = i as Letter;
    }
    let sub_alpha = sys.alphabet().restrict(&keep)?;
    let tau2_images: Vec<Word> = keep
        .iter()
        .map(|&b| {
            rho.image(b)
                .iter()
                .filter(|&&c| !in_d[c as usize])
                .map(|&c| renum[c as usize])
                .collect()
        })
        .collect();
    let tau2 = Morphism::endo(sub_alpha.clone(), tau2_images)?;
    debug_assert!(tau2.is_non_erasing());
    let mu_images: Vec<Word> = keep
        .iter()
        .map(|&b| phi.apply(rho.image(b)))
        .collect::<Result<_>>()?;
    let mu = Morphism::new(sub_alpha, phi.codomain().clone(), mu_images)?;
    let start = renum[a as usize];
    if !growth::growing_letters(&tau2)[start as usize] {
        return Err(Error::FiniteSequence(mu.apply(&tau2.iterate(&[start], tau2.domain().len(), POWER_BUDGET)?)?.len()));
    }
    let mu = restrict_codomain(mu)?;
    let inner = prune_raw(tau2, start, mu)?;
    let inner_sys = SubstitutionSystem::new(inner.0, inner.1, Some(inner.2), sys.label())?;
    let blocks = if inner_sys.phi().is_coding() {
        NormalizedSystem {
            original: inner_sys.clone(),
            system: inner_sys,
            gamma: None,
            k: 1,
            verified_depth: 0,
            construction: Construction::Unchanged,
        }
    } else {
        morphism_to_coding(&inner_sys)?
    };
    // No intertwiner is claimed here: ψ∘γ would have to equal φ, while the
    // construction only matches φ∘σ^k.
    Ok(NormalizedSystem {
        original: sys.clone(),
        system: blocks.system,
        gamma: None,
        k: k * blocks.k,
        verified_depth: 0,
        construction: Construction::ErasurePipeline,
    })
}

/// Keeps `gamma` only if `γ∘σ^k = τ∘γ` and `ψ∘γ = φ` hold on every letter.
fn checked_gamma(n: &NormalizedSystem, gamma: Option<Morphism>) -> Option<Morphism> {
    let gamma = gamma?;
    let sk = power(n.original.sigma(), n.k).ok()?;
    if total_len(&sk) > POWER_BUDGET {
        return None;
    }
    let left = compose(&sk, &gamma).ok()?;
    let right = compose(&gamma, n.tau()).ok()?;
    let coded = compose(&gamma, n.psi()).ok()?;
    let phi_ok = n
        .original
        .alphabet()
        .letters()
        .all(|l| same_tokens(&coded, n.original.phi(), l));
    (left == right && phi_ok).then_some(gamma)
}

fn same_tokens(a: &Morphism, b: &Morphism, l: Letter) -> bool {
    let ta: Vec<&str> = a.image(l).iter().map(|&c| a.codomain().token(c)).collect();
    let tb: Vec<&str> = b.image(l).iter().map(|&c| b.codomain().token(c)).collect();
    ta == tb
}

/// Block construction for non-erasing `σ` and `φ`: letters `(a, i)` for
/// `i < |φ(a)|`, `ψ(a, i) = φ(a)_i`, and `τ(a, i)` the `i`-th of `|φ(a)|`
/// nearly equal pieces of the blocks of `σ^k(a)`.
pub fn morphism_to_coding(sys: &SubstitutionSystem) -> Result<NormalizedSystem> {
    let sigma = sys.sigma();
    let phi = sys.phi();
    if sigma.is_erasing() {
        return Err(Error::Erasing);
    }
    if phi.is_erasing() {
        return Err(Error::Normalize("the output morphism is erasing; eliminate erasure first".into()));
    }
    let alpha = sys.alphabet();
    let len = |w: &[Letter]| -> usize { w.iter().map(|&c| phi.image(c).len()).sum() };
    let mut rho = sigma.clone();
    let start = sys.start();
    // Every block needs a non-empty piece, and the start block a piece of at
    // least two letters so that it keeps growing.
    let long_enough = |rho: &Morphism| {
        alpha.letters().all(|c| len(rho.image(c)) >= phi.image(c).len())
            && len(rho.image(start)) >= 2 * phi.image(start).len()
    };
    let mut k = 1u32;
    while !long_enough(&rho) {
        k += 1;
        if k > MAX_POWER {
            return Err(Error::Normalize(format!(
                "no power σ^k with k ≤ {MAX_POWER} lengthens every φ-image"
            )));
        }
        rho = compose(&rho, sigma)?;
        if total_len(&rho) > POWER_BUDGET {
            return Err(Error::Budget {
                requested: total_len(&rho),
                budget: POWER_BUDGET,
            });
        }
    }

    // Block alphabet in the order (a, 0), (a, 1), ...
    let mut offset = Vec::with_capacity(alpha.len());
    let mut names = Vec::new();
    let mut coding = Vec::new();
    for a in alpha.letters() {
        offset.push(names.len());
        let m = phi.image(a).len();
        for i in 0..m {
            names.push(if m == 1 {
                alpha.token(a).to_string()
            } else {
                format!("{}.{}", alpha.token(a), i)
            });
            coding.push(phi.image(a)[i]);
        }
    }
    let b_alpha = Alphabet::new(unique_names(names))?;
    let offset = &offset;
    let beta = |w: &[Letter]| -> Vec<Letter> {
        w.iter()
            .flat_map(|&c| (0..phi.image(c).len()).map(move |i| (offset[c as usize] + i) as Letter))
            .collect()
    };
    let mut images = vec![Word::empty(); b_alpha.len()];
    for a in alpha.letters() {
        let blocks = beta(rho.image(a));
        let s = phi.image(a).len();
        let t = blocks.len();
        for i in 0..s {
            images[offset[a as usize] + i] = Word::from(&blocks[i * t / s..(i + 1) * t / s]);
        }
    }
    let tau = Morphism::endo(b_alpha.clone(), images)?;
    let psi = Morphism::new(
        b_alpha.clone(),
        phi.codomain().clone(),
        coding.iter().map(|&c| Word::from([c])).collect(),
    )?;
    let start = offset[start as usize] as Letter;
    let gamma = Morphism::new(
        alpha.clone(),
        b_alpha.clone(),
        alpha.letters().map(|a| Word::from(beta(&[a]))).collect(),
    )?;
    let (tau_p, start_p, psi_p) = prune_raw(tau, start, psi)?;
    let system = SubstitutionSystem::new(tau_p, start_p, Some(psi_p), sys.label())?;
    let mut out = NormalizedSystem {
        original: sys.clone(),
        gamma: None,
        system,
        k,
        verified_depth: 0,
        construction: Construction::BlockCoding,
    };
    if out.system.alphabet() == &b_alpha {
        out.gamma = checked_gamma(&out, Some(gamma));
    }
    Ok(out)
}

/// Makes names unique by appending `'` where needed.
fn unique_names(names: Vec<String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(names.len());
    for mut n in names {
        while out.contains(&n) {
            n.push('\'');
        }
        out.push(n);
    }
    out
}

/// Drops codomain letters that no image uses.
fn restrict_codomain(m: Morphism) -> Result<Morphism> {
    let cod = m.codomain();
    let mut used = vec![false; cod.len()];
    for w in m.images() {
        for &c in w.iter() {
            used[c as usize] = true;
        }
    }
    if used.iter().all(|&u| u) {
        return Ok(m);
    }
    let keep: Vec<Letter> = cod.letters().filter(|&c| used[c as usize]).collect();
    let mut renum = vec![0 as Letter; cod.len()];
    for (i, &c) in keep.iter().enumerate() {
        renum[c as usize] = i as Letter;
    }
    let new_cod = cod.restrict(&keep)?;
    let images = m
        .images()
        .iter()
        .map(|w| w.iter().map(|&c| renum[c as usize]).collect())
        .collect();
    Morphism::new(m.domain().clone(), new_cod, images)
}

/// Restricts `(τ, start, ψ)` to the letters reachable from `start`.
fn prune_raw(tau: Morphism, start: Letter, psi: Morphism) -> Result<(Morphism, Letter, Morphism)> {
    let reach = crate::system::reachable_from(&tau, start);
    if reach.iter().all(|&r| r) {
        let psi = restrict_codomain(psi)?;
        return Ok((tau, start, psi));
    }
    let keep: Vec<Letter> = tau.domain().letters().filter(|&l| reach[l as usize]).collect();
    let new_start = keep.iter().position(|&l| l == start).unwrap() as Letter;
    let tau_r = tau.restrict(&keep)?;
    let psi_r = Morphism::new(
        tau_r.domain().clone(),
        psi.codomain().clone(),
        keep.iter().map(|&l| psi.image(l).clone()).collect(),
    )?;
    Ok((tau_r, new_start, restrict_codomain(psi_r)?))
}

fn prune(tau: Morphism, start: Letter, psi: Option<Morphism>, label: &str) -> Result<SubstitutionSystem> {
    let psi = psi.unwrap_or_else(|| Morphism::identity(tau.domain()));
    let (t, s, p) = prune_raw(tau, start, psi)?;
    let p = if p.is_identity() { None } else { Some(p) };
    SubstitutionSystem::new(t, s, p, label)
}

/// Letter-by-letter comparison of the two generated sequences.
pub fn verify_normalization(orig: &SubstitutionSystem, norm: &SubstitutionSystem, n: usize) -> Result<Agreement> {
    compare_images(orig, norm, n)
}
