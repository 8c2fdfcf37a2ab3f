//! Sub-substitutions on closed sub-alphabets, primitivity, "good"
//! substitutions, and the reduction to a power with a primitive part.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::growth;
use crate::normalize::{self, Construction};
use crate::spectral::{self, PerronValue};
use crate::system::{reachable_from, SubstitutionSystem};
use crate::words::{power, Letter, Morphism};

/// Default cap on the power searched by [`reduce`].
pub const DEFAULT_REDUCE_CAP: u32 = 64;
const REDUCE_BUDGET: usize = 1 << 24;

/// Restriction of `σ` to a sub-alphabet `B` with `σ(B) ⊆ B*`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubSubstitution {
    pub letters: Vec<Letter>,
    pub tokens: Vec<String>,
    #[serde(skip)]
    pub restriction: Option<Morphism>,
    pub primitive: bool,
    /// `None` when the restricted matrix is zero.
    pub eigenvalue: Option<PerronValue>,
}

/// Reachability closures of single letters, plus the whole alphabet;
/// deduplicated, smallest first.
pub fn invariant_subalphabets(sigma: &Morphism) -> Vec<Vec<Letter>> {
    let mut sets: Vec<Vec<Letter>> = sigma
        .domain()
        .letters()
        .map(|b| {
            let r = reachable_from(sigma, b);
            sigma.domain().letters().filter(|&l| r[l as usize]).collect()
        })
        .collect();
    sets.push(sigma.domain().letters().collect());
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    sets.dedup();
    sets
}

pub fn sub_substitution(sigma: &Morphism, letters: &[Letter]) -> Result<SubSubstitution> {
    let restriction = sigma.restrict(letters)?;
    let m = spectral::incidence_matrix(&restriction);
    let eigenvalue = if m.is_zero() {
        None
    } else {
        Some(spectral::dominant_eigenvalue(&m)?)
    };
    Ok(SubSubstitution {
        letters: letters.to_vec(),
        tokens: letters.iter().map(|&l| sigma.domain().token(l).to_string()).collect(),
        primitive: spectral::is_primitive(&m),
        restriction: Some(restriction),
        eigenvalue,
    })
}

/// Every sub-substitution on an invariant sub-alphabet.
pub fn sub_substitutions(sigma: &Morphism) -> Result<Vec<SubSubstitution>> {
    invariant_subalphabets(sigma)
        .iter()
        .map(|s| sub_substitution(sigma, s))
        .collect()
}

pub fn primitive_sub_substitutions(sigma: &Morphism) -> Result<Vec<SubSubstitution>> {
    Ok(sub_substitutions(sigma)?.into_iter().filter(|s| s.primitive).collect())
}

/// Outcome of the goodness test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Goodness {
    /// Growing, with a primitive sub-substitution of the same eigenvalue.
    Good { witness: Vec<String> },
    NotGrowing { non_growing: Vec<String> },
    NoPrimitiveSubSubstitution,
    EigenvalueGap {
        dominant: PerronValue,
        best_primitive: PerronValue,
    },
}

impl Goodness {
    pub fn is_good(&self) -> bool {
        matches!(self, Goodness::Good { .. })
    }
}

pub fn is_good(sigma: &Morphism) -> Result<Goodness> {
    let growing = growth::growing_letters(sigma);
    if growing.iter().any(|&g| !g) {
        return Ok(Goodness::NotGrowing {
            non_growing: sigma
                .domain()
                .letters()
                .filter(|&l| !growing[l as usize])
                .map(|l| sigma.domain().token(l).to_string())
                .collect(),
        });
    }
    let dominant = spectral::dominant_eigenvalue(&spectral::incidence_matrix(sigma))?;
    let prims = primitive_sub_substitutions(sigma)?;
    if let Some(w) = prims
        .iter()
        .find(|s| s.eigenvalue.as_ref().is_some_and(|e| e.eq_value(&dominant)))
    {
        return Ok(Goodness::Good {
            witness: w.tokens.clone(),
        });
    }
    let best = prims
        .iter()
        .filter_map(|s| s.eigenvalue.clone())
        .max_by(|a, b| a.compare(b));
    Ok(match best {
        None => Goodness::NoPrimitiveSubSubstitution,
        Some(best_primitive) => Goodness::EigenvalueGap {
            dominant,
            best_primitive,
        },
    })
}

/// Which reduction conditions a power satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceConditions {
    pub non_erasing: bool,
    pub growing: bool,
    /// A growing letter `c` whose image has an occurrence of `c` next to a
    /// non-empty run of non-growing letters.
    pub growing_letter_beside_bounded_run: bool,
    /// Stricter form: the run is the whole suffix after (or prefix before)
    /// an occurrence of `c` in its own image.
    pub bounded_run_at_end: bool,
    pub primitive_sub_substitution: bool,
}

impl ReduceConditions {
    pub fn satisfied(&self) -> bool {
        self.non_erasing
            && (self.growing || self.growing_letter_beside_bounded_run)
            && self.primitive_sub_substitution
    }
}

pub fn reduce_conditions(sigma: &Morphism) -> Result<ReduceConditions> {
    let growing = growth::growing_letters(sigma);
    let all_growing = growing.iter().all(|&g| g);
    let mut beside = false;
    let mut at_end = false;
    for c in sigma.domain().letters().filter(|&c| growing[c as usize]) {
        let img = sigma.image(c);
        let bounded = |l: &Letter| !growing[*l as usize];
        for (i, _) in img.iter().enumerate().filter(|(_, &l)| l == c) {
            let after = img[i + 1..].first().is_some_and(bounded);
            let before = i > 0 && bounded(&img[i - 1]);
            beside |= after || before;
            let suffix = &img[i + 1..];
            let prefix = &img[..i];
            at_end |= (!suffix.is_empty() && suffix.iter().all(bounded))
                || (!prefix.is_empty() && prefix.iter().all(bounded));
        }
    }
    Ok(ReduceConditions {
        non_erasing: sigma.is_non_erasing(),
        growing: all_growing,
        growing_letter_beside_bounded_run: beside,
        bounded_run_at_end: at_end,
        primitive_sub_substitution: !primitive_sub_substitutions(sigma)?.is_empty(),
    })
}

/// A power of the normalized system meeting the reduction conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub system: SubstitutionSystem,
    /// Power taken of the normalized substitution.
    pub k: u32,
    /// Power of the original substitution used by normalization.
    pub normalization_k: u32,
    pub construction: Construction,
    pub conditions: ReduceConditions,
    /// Conditions that failed for each smaller power, in order.
    pub rejected: Vec<ReduceConditions>,
}

pub fn reduce(sys: &SubstitutionSystem) -> Result<Reduction> {
    reduce_with_cap(sys, DEFAULT_REDUCE_CAP)
}

pub fn reduce_with_cap(sys: &SubstitutionSystem, cap: u32) -> Result<Reduction> {
    let norm = normalize::normalize(sys)?;
    let tau = norm.tau();
    let mut rejected = Vec::new();
    for k in 1..=cap {
        let len = power_length(tau, k);
        if len.is_none_or(|l| l > REDUCE_BUDGET) {
            return Err(Error::Reduce(format!(
                "σ^{k} exceeds the length budget before the conditions hold"
            )));
        }
        let rho = power(tau, k)?;
        let conditions = reduce_conditions(&rho)?;
        if conditions.satisfied() {
            let system = SubstitutionSystem::new(
                rho,
                norm.start(),
                Some(norm.psi().clone()),
                sys.label(),
            )?;
            let post = reduce_conditions(system.sigma())?;
            debug_assert_eq!(post, conditions);
            return Ok(Reduction {
                system,
                k,
                normalization_k: norm.k,
                construction: norm.construction,
                conditions,
                rejected,
            });
        }
        rejected.push(conditions);
    }
    Err(Error::Reduce(format!(
        "no power up to {cap} satisfies the reduction conditions"
    )))
}

/// `Σ_b |σ^k(b)|` computed from the incidence matrix, or `None` on overflow.
fn power_length(sigma: &Morphism, k: u32) -> Option<usize> {
    let m = spectral::incidence_matrix(sigma).pow(k);
    let total: num_bigint::BigInt = (0..m.dim()).map(|j| m.col_sum(j)).sum();
    num_traits::ToPrimitive::to_usize(&total)
}

/// Compares every sub-substitution eigenvalue with the full one.
pub fn eigenvalues_bounded_by_dominant(sigma: &Morphism) -> Result<bool> {
    let dominant = spectral::dominant_eigenvalue(&spectral::incidence_matrix(sigma))?;
    Ok(sub_substitutions(sigma)?
        .iter()
        .filter_map(|s| s.eigenvalue.as_ref())
        .all(|e| e.compare(&dominant) != Ordering::Greater))
}
